//! Solve, verify, then show that a forged value is caught.

use rectv::rational::q;
use rectv::rof::{solve_rof, verify_certificate};
use rectv::{fixtures, Mode, PcrFunction};

fn main() -> rectv::Result<()> {
    let u0 = fixtures::nonequiv();
    let sol = solve_rof(&u0, &q(1, 2), Mode::Plane)?;
    for c in &verify_certificate(&sol, &u0).checks {
        println!("{:<18} {}", c.name, if c.passed { "ok" } else { "FAILED" });
    }

    let mut forged = sol.clone();
    let mut vals = forged.u.values().to_vec();
    let centre = u0.grid().cell(2, 2);
    vals[centre] += q(1, 1000);
    forged.u = PcrFunction::new(forged.u.grid().clone(), vals)?;
    let rep = verify_certificate(&forged, &u0);
    println!("\nforged centre value:");
    for c in rep.failures() {
        println!("  {} fails {}", c.name, c.detail);
    }
    Ok(())
}
