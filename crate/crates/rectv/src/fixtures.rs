//! Exact data sets with known evolutions, used by the examples and tests.

use std::sync::Arc;

use crate::geometry::{build_grid, CellSet, Grid, PcrFunction, Rect};
use crate::rational::{int, q, Rational};

fn arm_balls() -> Vec<Rect> {
    let h = q(1, 2);
    vec![
        Rect::ball(int(2), int(0), h.clone()),
        Rect::ball(int(-2), int(0), h.clone()),
        Rect::ball(int(0), int(2), h.clone()),
        Rect::ball(int(0), int(-2), h),
    ]
}

fn center_ball() -> Rect {
    Rect::ball(int(0), int(0), q(3, 2))
}

fn cross_grid() -> Arc<Grid> {
    let mut rects = arm_balls();
    rects.push(center_ball());
    Arc::new(build_grid(&rects, &[], &[]).expect("fixture grid"))
}

/// Four unit squares at height 3 around a 3x3 square at height 5/2.
/// The arms merge with the centre at `t = 9/64`, after which the centre
/// moves at speed -4/3 and the arms at -2.
pub fn nonequiv() -> PcrFunction {
    let mut pieces: Vec<(Rect, Rational)> = arm_balls().into_iter().map(|r| (r, int(3))).collect();
    pieces.push((center_ball(), q(5, 2)));
    PcrFunction::from_rects(cross_grid(), &pieces)
}

/// Indicator of the cross: it breaks at once into the centre (speed -4/3) and
/// four arms (speed -2).
pub fn cross() -> PcrFunction {
    let mut pieces: Vec<(Rect, Rational)> = arm_balls().into_iter().map(|r| (r, int(1))).collect();
    pieces.push((center_ball(), int(1)));
    PcrFunction::from_rects(cross_grid(), &pieces)
}

/// `(cross, centre, arms)` as cell sets on the 5x5 cross grid.
pub fn cross_sets() -> (CellSet, CellSet, Vec<CellSet>) {
    let g = cross_grid();
    let center = CellSet::from_rect(&g, &center_ball());
    let arms: Vec<CellSet> = arm_balls().iter().map(|r| CellSet::from_rect(&g, r)).collect();
    let cross = arms.iter().fold(center.clone(), |acc, a| acc.union(a));
    (cross, center, arms)
}

/// Indicator of the square `[0, side]^2` on its own one-cell grid.
pub fn square(side: i64) -> PcrFunction {
    let r = Rect::new(int(0), int(side), int(0), int(side));
    let g = Arc::new(build_grid(std::slice::from_ref(&r), &[], &[]).expect("square grid"));
    PcrFunction::from_rects(g, &[(r, int(1))])
}

/// Rectilinear staircase approximation of the l1 ball of radius 2: the square
/// `[-1, 1]^2` plus, on each side, `n - 1` columns of width `1/n`; column `j`
/// spans `[1 + (j-1)/n, 1 + j/n]` and has half-height `1 - j/n`.
pub fn staircase_rects(n: i64) -> Vec<Rect> {
    assert!(n >= 2);
    let mut rects = vec![Rect::new(int(-1), int(1), int(-1), int(1))];
    for j in 1..n {
        let a = int(1) + q(j - 1, n);
        let b = int(1) + q(j, n);
        let h = int(1) - q(j, n);
        rects.push(Rect::new(a.clone(), b.clone(), -h.clone(), h.clone()));
        rects.push(Rect::new(-b.clone(), -a.clone(), -h.clone(), h.clone()));
        rects.push(Rect::new(-h.clone(), h.clone(), a.clone(), b.clone()));
        rects.push(Rect::new(-h.clone(), h, -b, -a));
    }
    rects
}

pub fn staircase(n: i64) -> PcrFunction {
    let rects = staircase_rects(n);
    let g = Arc::new(build_grid(&rects, &[], &[]).expect("staircase grid"));
    let pieces: Vec<(Rect, Rational)> = rects.into_iter().map(|r| (r, int(1))).collect();
    PcrFunction::from_rects(g, &pieces)
}

/// Two stacked unit cells with values `top` and `bottom`.
pub fn two_cells(bottom: Rational, top: Rational) -> PcrFunction {
    let g = Arc::new(Grid::new(vec![int(0), int(1)], vec![int(0), int(1), int(2)]).expect("grid"));
    PcrFunction::new(g, vec![bottom, top]).expect("two values")
}
