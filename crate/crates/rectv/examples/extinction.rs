//! Extinction times against their a priori bounds.

use rectv::flow::{extinction_bound, flow_evolve};
use rectv::rational::fmt_rational;
use rectv::{fixtures, Mode, PcrFunction};

fn main() -> rectv::Result<()> {
    let cases: [(&str, PcrFunction, Mode); 5] = [
        ("square 2", fixtures::square(2), Mode::Plane),
        ("cross", fixtures::cross(), Mode::Plane),
        ("arms and centre", fixtures::nonequiv(), Mode::Plane),
        ("arms and centre", fixtures::nonequiv(), Mode::Bounded),
        ("staircase 4", fixtures::staircase(4), Mode::Plane),
    ];
    for (name, u0, mode) in cases {
        let t = flow_evolve(&u0, mode, None)?.extinction.expect("ran to the end");
        let b = extinction_bound(&u0, mode)?;
        println!("{name:<16} {mode:<7} t_n = {:<8} bound {}", fmt_rational(&t), fmt_rational(&b));
    }
    Ok(())
}
