//! Cross-check of exact minimisers with the floating-point dual solver.

use rectv::oracle::{compare, graph_tv_solve, GraphTvProblem};
use rectv::rational::{fmt_rational, q};
use rectv::rof::solve_rof;
use rectv::{fixtures, Mode};

fn main() -> rectv::Result<()> {
    let u0 = fixtures::nonequiv();
    for mode in [Mode::Bounded, Mode::Plane] {
        for lambda in [q(1, 10), q(1, 2), q(2, 1)] {
            let exact = solve_rof(&u0, &lambda, mode)?;
            let approx = graph_tv_solve(&GraphTvProblem::new(&u0, &lambda, mode)?, 1e-10)?;
            let c = compare(&exact, &approx, 1e-6)?;
            println!(
                "{mode:<7} lambda {:<4} deviation {:.2e}  gap {:.1e}  {} iterations",
                fmt_rational(&lambda),
                c.max_deviation,
                approx.gap,
                approx.iterations
            );
        }
    }
    Ok(())
}
