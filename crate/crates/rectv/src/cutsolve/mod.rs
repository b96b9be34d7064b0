//! Exact minimisation of Cheeger problems by minimum cuts.
//!
//! For a fixed ratio `lambda` the numerator minus `lambda * area` is a sum of
//! per-cell charges plus edge lengths across the cut, so its minimum over all
//! cell sets is a max-flow problem. Dinkelbach's iteration then drives
//! `lambda` down to the minimal quotient.

pub mod maxflow;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::energy::{eval_j, CheegerProblem, Scaled};
use crate::error::{Error, Result};
use crate::geometry::{CellSet, Grid};
use crate::rational::Rational;
use maxflow::{Capacity, FlowGraph};

/// Node `k` is the grid cell `cells[k]`.
#[derive(Clone, Debug)]
pub struct CutInstance {
    pub grid: Arc<Grid>,
    pub cells: Vec<usize>,
    pub unary: Vec<Rational>,
    pub pairwise: Vec<(usize, usize, Rational)>,
}

impl CutInstance {
    pub fn energy(&self, e: &CellSet) -> Rational {
        let sel: Vec<bool> = self.cells.iter().map(|&c| e.contains(c)).collect();
        let mut total: Rational = (0..self.cells.len()).filter(|&k| sel[k]).map(|k| self.unary[k].clone()).sum();
        for (a, b, w) in &self.pairwise {
            if sel[*a] != sel[*b] {
                total += w;
            }
        }
        total
    }
}

/// Instance whose energy is `numerator(E) - lambda * area(E)` for every `E`.
pub fn build_cut_instance(p: &CheegerProblem, lambda: &Rational) -> CutInstance {
    let s = Scaled::new(p);
    let scale = Rational::from_integer(s.scale.clone());
    let r = |v: &BigInt| Rational::from_integer(v.clone()) / &scale;
    CutInstance {
        grid: s.grid.clone(),
        unary: s.unary.iter().zip(&s.area).map(|(u, a)| r(u) - lambda * r(a)).collect(),
        pairwise: s.pairs.iter().map(|(a, b, w)| (*a, *b, r(w))).collect(),
        cells: s.cells,
    }
}

/// Minimum energy over all subsets (the empty set included) and the largest
/// subset attaining it.
pub fn min_cut(inst: &CutInstance) -> (Rational, CellSet) {
    let den = inst
        .unary
        .iter()
        .chain(inst.pairwise.iter().map(|t| &t.2))
        .fold(BigInt::from(1), |acc, r| num_integer::Integer::lcm(&acc, r.denom()));
    let scale = Rational::from_integer(den.clone());
    let unary: Vec<BigInt> = inst.unary.iter().map(|u| (u * &scale).to_integer()).collect();
    let pairs: Vec<(usize, usize, BigInt)> =
        inst.pairwise.iter().map(|(a, b, w)| (*a, *b, (w * &scale).to_integer())).collect();
    let (energy, sel) = solve_integer(&unary, &pairs);
    let set = CellSet::from_cells(&inst.grid, (0..inst.cells.len()).filter(|&k| sel[k]).map(|k| inst.cells[k]));
    (Rational::new(energy, den), set)
}

/// Minimises `sum_{k in S} unary[k] + sum_{cut pairs} w` exactly.
pub(crate) fn solve_integer(unary: &[BigInt], pairs: &[(usize, usize, BigInt)]) -> (BigInt, Vec<bool>) {
    let total: BigInt =
        unary.iter().map(|u| u.abs()).sum::<BigInt>() + pairs.iter().map(|t| &t.2 * 2).sum::<BigInt>();
    if total < BigInt::from(i128::MAX / 4) {
        let u: Vec<i128> = unary.iter().map(|x| x.to_i128().expect("fits")).collect();
        let p: Vec<(usize, usize, i128)> =
            pairs.iter().map(|(a, b, w)| (*a, *b, w.to_i128().expect("fits"))).collect();
        let (e, sel) = run_cut(&u, &p);
        (BigInt::from(e), sel)
    } else {
        run_cut(unary, pairs)
    }
}

fn run_cut<C: Capacity>(unary: &[C], pairs: &[(usize, usize, C)]) -> (C, Vec<bool>) {
    let n = unary.len();
    let (s, t) = (n, n + 1);
    let mut g = FlowGraph::new(n + 2);
    let mut offset = C::zero();
    for (k, u) in unary.iter().enumerate() {
        if *u > C::zero() {
            g.add_edge(k, t, u.clone(), C::zero());
        } else if *u < C::zero() {
            let mut neg = C::zero();
            neg -= u.clone();
            g.add_edge(s, k, neg, C::zero());
            offset += u.clone();
        }
    }
    for (a, b, w) in pairs {
        if *w > C::zero() {
            g.add_edge(*a, *b, w.clone(), w.clone());
        }
    }
    let flow = g.max_flow(s, t);
    let side = g.maximal_source_side(t);
    offset += flow;
    (offset, side[..n].to_vec())
}

/// Result of a ratio minimisation with the sequence of iterates.
#[derive(Clone, Debug)]
pub struct RatioMin {
    pub ratio: Rational,
    pub set: CellSet,
    pub iterates: Vec<Rational>,
}

pub fn dinkelbach_min_ratio(p: &CheegerProblem) -> Result<(Rational, CellSet)> {
    let r = dinkelbach_trace(p)?;
    Ok((r.ratio, r.set))
}

pub fn dinkelbach_trace(p: &CheegerProblem) -> Result<RatioMin> {
    if p.domain().is_empty() {
        return Err(Error::invalid("empty region"));
    }
    let s = Scaled::new(p);
    let mut lambda = eval_j(p, p.domain())?;
    let mut iterates = vec![lambda.clone()];
    let cap = s.len() * s.len() + 16;
    for _ in 0..cap {
        let (pn, pd) = (lambda.numer().clone(), lambda.denom().clone());
        let unary: Vec<BigInt> = s.unary.iter().zip(&s.area).map(|(u, a)| &pd * u - &pn * a).collect();
        let pairs: Vec<(usize, usize, BigInt)> = s.pairs.iter().map(|(a, b, w)| (*a, *b, &pd * w)).collect();
        let (energy, sel) = solve_integer(&unary, &pairs);
        if energy.is_positive() {
            return Err(Error::internal("cut optimum above the previous iterate"));
        }
        if !sel.iter().any(|&b| b) {
            return Err(Error::internal("cut returned the empty set as the maximal optimum"));
        }
        let next = s.ratio(&sel);
        if energy.is_zero() {
            if next != lambda {
                return Err(Error::internal("maximal optimal set has a different ratio"));
            }
            return Ok(RatioMin { ratio: lambda, set: s.to_cellset(&sel), iterates });
        }
        if next >= lambda {
            return Err(Error::internal("Dinkelbach ratio failed to decrease"));
        }
        lambda = next;
        iterates.push(lambda.clone());
    }
    Err(Error::internal("Dinkelbach iteration cap reached"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::brute_force_min;
    use crate::fixtures;
    use crate::geometry::PcrFunction;
    use crate::rational::{int, q};
    use std::collections::BTreeSet;

    fn unit_grid(nx: i64, ny: i64) -> Arc<Grid> {
        Arc::new(Grid::new((0..=nx).map(int).collect(), (0..=ny).map(int).collect()).unwrap())
    }

    fn cross_problem() -> (CheegerProblem, CellSet, Vec<CellSet>) {
        let (cross, center, arms) = fixtures::cross_sets();
        let plus = cross.boundary_edge_set();
        (CheegerProblem::new(cross, plus, BTreeSet::new(), None).unwrap(), center, arms)
    }

    #[test]
    fn instance_energies() {
        let g = unit_grid(3, 3);
        let f0 = CellSet::full(&g);
        let p = CheegerProblem::new(f0.clone(), BTreeSet::new(), BTreeSet::new(), None).unwrap();
        let inst = build_cut_instance(&p, &q(1, 2));
        assert_eq!(inst.energy(&CellSet::empty(&g)), int(0));
        assert_eq!(inst.energy(&f0), q(-9, 2));
        let (p, center, arms) = cross_problem();
        let inst = build_cut_instance(&p, &q(4, 3));
        assert_eq!(inst.energy(&center), int(0));
        assert_eq!(inst.energy(&arms[0]), q(8, 3));
    }

    #[test]
    fn cut_extremes() {
        let g = unit_grid(2, 2);
        let f0 = CellSet::full(&g);
        let p = CheegerProblem::new(f0.clone(), f0.boundary_edge_set(), BTreeSet::new(), None).unwrap();
        let (e, s) = min_cut(&build_cut_instance(&p, &int(-1)));
        assert_eq!((e, s.is_empty()), (int(0), true));
        let f = PcrFunction::constant(g.clone(), int(100));
        let p = CheegerProblem::new(f0.clone(), BTreeSet::new(), BTreeSet::new(), Some(f)).unwrap();
        let (_, s) = min_cut(&build_cut_instance(&p, &int(0)));
        assert_eq!(s, f0);
    }

    #[test]
    fn cut_on_cross_is_center() {
        let (p, center, _) = cross_problem();
        let (e, s) = min_cut(&build_cut_instance(&p, &q(4, 3)));
        assert_eq!(e, int(0));
        assert_eq!(s, center);
    }

    #[test]
    fn ratio_examples() {
        let g = unit_grid(3, 3);
        let f0 = CellSet::full(&g);
        let p = CheegerProblem::new(f0.clone(), f0.boundary_edge_set(), BTreeSet::new(), None).unwrap();
        assert_eq!(dinkelbach_min_ratio(&p).unwrap(), (q(4, 3), f0));
        let (p, center, _) = cross_problem();
        assert_eq!(dinkelbach_min_ratio(&p).unwrap(), (q(4, 3), center));
        let g1 = unit_grid(1, 1);
        let one = CellSet::full(&g1);
        let f = PcrFunction::constant(g1, int(7));
        let p = CheegerProblem::new(one.clone(), BTreeSet::new(), BTreeSet::new(), Some(f)).unwrap();
        assert_eq!(dinkelbach_min_ratio(&p).unwrap(), (int(-7), one));
    }

    #[test]
    fn agrees_with_enumeration_on_cross() {
        let (p, _, _) = cross_problem();
        let bf = brute_force_min(&p).unwrap();
        let (r, s) = dinkelbach_min_ratio(&p).unwrap();
        assert_eq!(r, bf.value);
        assert_eq!(s, bf.maximal);
    }
}
