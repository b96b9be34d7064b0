//! The indicator of a cross is not one facet: at t = 0 the centre moves at
//! -4/3 and the arms at -2.

use rectv::flow::{facet_decomposition, flow_evolve, solution_at};
use rectv::rational::{fmt_rational, q};
use rectv::{fixtures, Mode};

fn main() -> rectv::Result<()> {
    let u0 = fixtures::cross();
    let d = facet_decomposition(&u0, Mode::Plane)?;
    for f in &d.facets {
        println!(
            "{:>2} cells  |plus| {:>2}  |minus| {:>2}  speed {}",
            f.cells.len(),
            fmt_rational(&f.plus_length()),
            fmt_rational(&f.minus_length()),
            fmt_rational(&f.speed)
        );
    }
    let tl = flow_evolve(&u0, Mode::Plane, None)?;
    println!("breaks at t = 0: {}", tl.initial_breaking);
    for t in [q(0, 1), q(1, 4), q(1, 2), q(5, 8), q(3, 4)] {
        let u = solution_at(&tl, &t)?;
        println!(
            "t = {:<4} centre {:<5} arm {}",
            fmt_rational(&t),
            fmt_rational(u.at(2, 2)),
            fmt_rational(u.at(4, 2))
        );
    }
    Ok(())
}
