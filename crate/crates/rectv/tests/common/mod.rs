//! Random corpora shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rectv::energy::CheegerProblem;
use rectv::rational::{int, q};
use rectv::{CellSet, Grid, PcrFunction, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// Grid with `1..=max_n` columns and rows of widths in {1/2, 1, 3/2, 2}.
pub fn grid(rng: &mut ChaCha8Rng, max_n: usize) -> Arc<Grid> {
    let line = |n: usize, rng: &mut ChaCha8Rng| {
        let mut v = vec![int(0)];
        for _ in 0..n {
            let step = q(rng.gen_range(1..=4), 2);
            let next = v.last().unwrap() + step;
            v.push(next);
        }
        v
    };
    let nx = rng.gen_range(1..=max_n);
    let ny = rng.gen_range(1..=max_n);
    let xs = line(nx, rng);
    let ys = line(ny, rng);
    Arc::new(Grid::new(xs, ys).unwrap())
}

/// Values drawn from a few levels in `[0, 4]` with denominators up to 4, so
/// that level sets have some extent.
pub fn pcr(rng: &mut ChaCha8Rng, g: &Arc<Grid>) -> PcrFunction {
    let k = rng.gen_range(2..=4);
    let levels: Vec<Rational> = (0..k).map(|_| q(rng.gen_range(0..=16), 4)).collect();
    let vals = (0..g.cell_count()).map(|_| levels.choose(rng).unwrap().clone()).collect();
    PcrFunction::new(g.clone(), vals).unwrap()
}

/// `hi * n / d` with `0 < n <= d <= 16`.
pub fn lambda(rng: &mut ChaCha8Rng, hi: &Rational) -> Rational {
    let d = rng.gen_range(1..=16);
    let n = rng.gen_range(1..=d);
    hi * q(n, d)
}

pub fn cheeger(rng: &mut ChaCha8Rng, max_cells: usize) -> CheegerProblem {
    loop {
        let g = grid(rng, 4);
        if g.cell_count() > max_cells {
            continue;
        }
        let dom: Vec<usize> = (0..g.cell_count()).filter(|_| rng.gen_bool(0.8)).collect();
        if dom.is_empty() {
            continue;
        }
        let domain = CellSet::from_cells(&g, dom);
        let mut plus = BTreeSet::new();
        let mut minus = BTreeSet::new();
        for h in domain.boundary() {
            match rng.gen_range(0..3) {
                0 => {
                    plus.insert(h.edge);
                }
                1 => {
                    minus.insert(h.edge);
                }
                _ => {}
            }
        }
        let f = rng.gen_bool(0.7).then(|| {
            let vals = (0..g.cell_count()).map(|_| q(rng.gen_range(-8..=8), rng.gen_range(1..=4))).collect();
            PcrFunction::new(g.clone(), vals).unwrap()
        });
        return CheegerProblem::new(domain, plus, minus, f).unwrap();
    }
}
