//! Rectilinear staircase approximations of the l1 ball. The core facet swallows
//! the first k-1 columns; k/n approaches sqrt(2) - 1.
//!
//! cargo run --release --example staircase -- 32

use std::time::Instant;

use rectv::flow::facet_decomposition;
use rectv::rational::{fmt_rational, int, to_f64};
use rectv::{fixtures, Mode, Rational};

fn main() -> rectv::Result<()> {
    let max: i64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    let mut n = 2;
    while n <= max {
        let start = Instant::now();
        let u0 = fixtures::staircase(n);
        let d = facet_decomposition(&u0, Mode::Plane)?;
        let g = u0.grid();
        let i0 = g.xs().iter().rposition(|x| *x < int(0)).expect("origin column");
        let j0 = g.ys().iter().rposition(|y| *y < int(0)).expect("origin row");
        let core = d.facet_of(g.cell(i0, j0));
        let xmax = core.cells.bbox().expect("core").x1;
        let k = Rational::from_integer(n.into()) * (xmax - int(1)) + int(1);
        println!(
            "n = {n:>3}  k = {:>3}  k/n = {:.4}  core speed {} ({:.5})  {:?}",
            fmt_rational(&k),
            to_f64(&(k.clone() / int(n))),
            fmt_rational(&core.speed),
            to_f64(&core.speed),
            start.elapsed()
        );
        n *= 2;
    }
    println!("sqrt(2) - 1 = {:.4}", 2f64.sqrt() - 1.0);
    Ok(())
}
