//! Exact ROF minimisers of the arms-and-centre datum for a few lambdas, on the
//! plane and on the bounded box.
//!
//! cargo run --example denoise

use rectv::rational::{fmt_rational, int, q};
use rectv::rof::solve_rof;
use rectv::{fixtures, Mode};

fn main() -> rectv::Result<()> {
    let u0 = fixtures::nonequiv();
    let g = u0.grid();
    let (arm, centre, corner) = (g.cell(4, 2), g.cell(2, 2), g.cell(0, 0));
    for mode in [Mode::Plane, Mode::Bounded] {
        println!("{mode}:");
        for lambda in [q(1, 10), q(9, 64), q(1, 2), int(1)] {
            let sol = solve_rof(&u0, &lambda, mode)?;
            println!(
                "  lambda {:>5}  arm {:>8}  centre {:>8}  corner {:>6}  ({} stages)",
                fmt_rational(&lambda),
                fmt_rational(sol.u.value(arm)),
                fmt_rational(sol.u.value(centre)),
                fmt_rational(sol.u.value(corner)),
                sol.partition.len(),
            );
        }
    }
    Ok(())
}
