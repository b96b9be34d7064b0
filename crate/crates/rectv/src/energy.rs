//! The Cheeger-type quotient
//!
//! ```text
//! J(E) = ( P1(E, int F0) + |dE ∩ plus| - |dE ∩ minus| - ∫_E f ) / |E|
//! ```
//!
//! and an exhaustive minimiser used to adjudicate the cut solver on small inputs.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::cutsolve::maxflow::FlowGraph;
use crate::error::{Error, Result};
use crate::geometry::{area, boundary_overlap, interior_perimeter, CellSet, Grid, GridEdge, PcrFunction};
use crate::rational::Rational;

pub const ENUMERATION_CAP: usize = 20;

#[derive(Clone, Debug)]
pub struct CheegerProblem {
    domain: CellSet,
    plus: BTreeSet<GridEdge>,
    minus: BTreeSet<GridEdge>,
    f: Option<PcrFunction>,
}

impl CheegerProblem {
    /// `f = None` stands for the zero datum.
    pub fn new(
        domain: CellSet,
        plus: BTreeSet<GridEdge>,
        minus: BTreeSet<GridEdge>,
        f: Option<PcrFunction>,
    ) -> Result<Self> {
        if !plus.is_disjoint(&minus) {
            return Err(Error::invalid("plus and minus edges overlap"));
        }
        let b = domain.boundary_edge_set();
        if !plus.is_subset(&b) || !minus.is_subset(&b) {
            return Err(Error::invalid("signature edges must lie on the boundary of the region"));
        }
        if let Some(f) = &f {
            if **f.grid() != **domain.grid() {
                return Err(Error::invalid("datum lives on a different grid"));
            }
        }
        Ok(CheegerProblem { domain, plus, minus, f })
    }

    pub fn domain(&self) -> &CellSet {
        &self.domain
    }

    pub fn plus(&self) -> &BTreeSet<GridEdge> {
        &self.plus
    }

    pub fn minus(&self) -> &BTreeSet<GridEdge> {
        &self.minus
    }

    pub fn datum(&self) -> Option<&PcrFunction> {
        self.f.as_ref()
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.domain.grid()
    }

    pub fn f_at(&self, c: usize) -> Rational {
        self.f.as_ref().map_or_else(Rational::zero, |f| f.value(c).clone())
    }

    /// Plus and minus exchanged and `f` negated.
    pub fn swapped(&self) -> CheegerProblem {
        let f = self.f.as_ref().map(|f| {
            PcrFunction::new(f.grid().clone(), f.values().iter().map(|v| -v).collect()).expect("same grid")
        });
        CheegerProblem { domain: self.domain.clone(), plus: self.minus.clone(), minus: self.plus.clone(), f }
    }

    /// Geometric part of the numerator.
    pub fn geometric(&self, e: &CellSet) -> Result<Rational> {
        Ok(interior_perimeter(e, &self.domain)? + boundary_overlap(e, &self.plus) - boundary_overlap(e, &self.minus))
    }

    pub fn datum_integral(&self, e: &CellSet) -> Rational {
        self.f.as_ref().map_or_else(Rational::zero, |f| f.integral_over(e))
    }

    pub fn numerator(&self, e: &CellSet) -> Result<Rational> {
        Ok(self.geometric(e)? - self.datum_integral(e))
    }
}

pub fn eval_j(p: &CheegerProblem, e: &CellSet) -> Result<Rational> {
    if e.is_empty() {
        return Err(Error::invalid("J is undefined on the empty set"));
    }
    Ok(p.numerator(e)? / area(e))
}

/// The dual quotient, defined as `-J` of the swapped problem.
pub fn eval_j_check(p: &CheegerProblem, e: &CellSet) -> Result<Rational> {
    Ok(-eval_j(&p.swapped(), e)?)
}

/// Integer form of a problem: every quantity multiplied by a common scale so
/// that numerators and areas of cell sets are exact integers.
#[derive(Clone, Debug)]
pub(crate) struct Scaled {
    pub grid: Arc<Grid>,
    pub cells: Vec<usize>,
    pub unary: Vec<BigInt>,
    pub area: Vec<BigInt>,
    pub pairs: Vec<(usize, usize, BigInt)>,
    pub scale: BigInt,
}

impl Scaled {
    pub fn new(p: &CheegerProblem) -> Scaled {
        let g = p.grid().clone();
        let cells: Vec<usize> = p.domain.cells().collect();
        let mut local = vec![usize::MAX; g.cell_count()];
        for (k, &c) in cells.iter().enumerate() {
            local[c] = k;
        }
        let mut unary_r = Vec::with_capacity(cells.len());
        let mut area_r = Vec::with_capacity(cells.len());
        let mut pairs_r = Vec::new();
        for (k, &c) in cells.iter().enumerate() {
            let a = g.cell_area(c);
            let mut b = -(p.f_at(c) * &a);
            for (h, nb) in g.neighbours(c) {
                let len = g.edge_length(h.edge);
                if p.plus.contains(&h.edge) {
                    b += &len;
                } else if p.minus.contains(&h.edge) {
                    b -= &len;
                }
                if let Some(d) = nb {
                    let l = local[d];
                    if l != usize::MAX && l > k {
                        pairs_r.push((k, l, len));
                    }
                }
            }
            unary_r.push(b);
            area_r.push(a);
        }
        let scale = unary_r
            .iter()
            .chain(&area_r)
            .chain(pairs_r.iter().map(|t| &t.2))
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let s = |r: &Rational| (r * Rational::from_integer(scale.clone())).to_integer();
        Scaled {
            grid: g,
            unary: unary_r.iter().map(s).collect(),
            area: area_r.iter().map(s).collect(),
            pairs: pairs_r.iter().map(|(a, b, w)| (*a, *b, s(w))).collect(),
            cells,
            scale,
        }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// Exact quotient of a local selection.
    pub fn ratio(&self, sel: &[bool]) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::zero();
        for k in 0..self.len() {
            if sel[k] {
                num += &self.unary[k];
                den += &self.area[k];
            }
        }
        for (a, b, w) in &self.pairs {
            if sel[*a] != sel[*b] {
                num += w;
            }
        }
        Rational::new(num, den)
    }

    pub fn to_cellset(&self, sel: &[bool]) -> CellSet {
        CellSet::from_cells(&self.grid, (0..self.len()).filter(|&k| sel[k]).map(|k| self.cells[k]))
    }
}

#[derive(Clone, Debug)]
pub struct BruteForce {
    pub value: Rational,
    pub minimizers: Vec<CellSet>,
    pub maximal: CellSet,
}

pub fn brute_force_min(p: &CheegerProblem) -> Result<BruteForce> {
    brute_force_min_capped(p, ENUMERATION_CAP)
}

/// Enumerates all nonempty subsets of the region in Gray-code order.
pub fn brute_force_min_capped(p: &CheegerProblem, cap: usize) -> Result<BruteForce> {
    let s = Scaled::new(p);
    let m = s.len();
    if m == 0 {
        return Err(Error::invalid("empty region"));
    }
    if m > cap || m > 30 {
        return Err(Error::invalid(format!("{m} cells exceed the enumeration cap {cap}")));
    }
    let small = |v: &BigInt| v.to_i128().filter(|x| x.abs() < (1i128 << 60));
    let unary: Option<Vec<i128>> = s.unary.iter().map(small).collect();
    let areas: Option<Vec<i128>> = s.area.iter().map(small).collect();
    let weights: Option<Vec<i128>> = s.pairs.iter().map(|t| small(&t.2)).collect();
    let (Some(unary), Some(areas), Some(weights)) = (unary, areas, weights) else {
        return brute_force_slow(p, &s);
    };
    let mut nbrs: Vec<Vec<(usize, i128)>> = vec![Vec::new(); m];
    for ((a, b, _), w) in s.pairs.iter().zip(&weights) {
        nbrs[*a].push((*b, *w));
        nbrs[*b].push((*a, *w));
    }
    let less = |n1: i128, d1: i128, n2: i128, d2: i128| -> std::cmp::Ordering {
        match (n1.checked_mul(d2), n2.checked_mul(d1)) {
            (Some(x), Some(y)) => x.cmp(&y),
            _ => (BigInt::from(n1) * BigInt::from(d2)).cmp(&(BigInt::from(n2) * BigInt::from(d1))),
        }
    };
    let mut mask: u32 = 0;
    let (mut num, mut den) = (0i128, 0i128);
    let mut best: Option<(i128, i128)> = None;
    let mut best_sets: Vec<u32> = Vec::new();
    for step in 1u64..(1u64 << m) {
        let k = step.trailing_zeros() as usize;
        let bit = 1u32 << k;
        let adding = mask & bit == 0;
        let sign = if adding { 1 } else { -1 };
        num += sign * unary[k];
        den += sign * areas[k];
        for &(d, w) in &nbrs[k] {
            let inside = mask & (1 << d) != 0;
            // the edge is cut after the toggle iff membership differs
            num += if inside == adding { -w } else { w };
        }
        mask ^= bit;
        match best {
            None => {
                best = Some((num, den));
                best_sets = vec![mask];
            }
            Some((bn, bd)) => match less(num, den, bn, bd) {
                std::cmp::Ordering::Less => {
                    best = Some((num, den));
                    best_sets.clear();
                    best_sets.push(mask);
                }
                std::cmp::Ordering::Equal => best_sets.push(mask),
                std::cmp::Ordering::Greater => {}
            },
        }
    }
    let (bn, bd) = best.expect("at least one subset");
    let value = Rational::new(BigInt::from(bn), BigInt::from(bd));
    finish(&s, value, best_sets.into_iter().map(|b| (0..m).map(|k| b & (1 << k) != 0).collect()).collect())
}

fn brute_force_slow(_p: &CheegerProblem, s: &Scaled) -> Result<BruteForce> {
    let m = s.len();
    let mut best: Option<Rational> = None;
    let mut sets = Vec::new();
    for b in 1u64..(1u64 << m) {
        let sel: Vec<bool> = (0..m).map(|k| b & (1 << k) != 0).collect();
        let r = s.ratio(&sel);
        match &best {
            Some(v) if r > *v => {}
            Some(v) if r == *v => sets.push(sel),
            _ => {
                best = Some(r);
                sets = vec![sel];
            }
        }
    }
    finish(s, best.expect("nonempty"), sets)
}

fn finish(s: &Scaled, value: Rational, sets: Vec<Vec<bool>>) -> Result<BruteForce> {
    let m = s.len();
    let mut union = vec![false; m];
    for sel in &sets {
        for k in 0..m {
            union[k] |= sel[k];
        }
    }
    if s.ratio(&union) != value {
        return Err(Error::internal("union of minimizers is not a minimizer"));
    }
    Ok(BruteForce {
        value,
        minimizers: sets.iter().map(|sel| s.to_cellset(sel)).collect(),
        maximal: s.to_cellset(&union),
    })
}

/// Minimum of `P1(F, omega)` over nonempty proper subsets `F` of `omega`.
/// Computed as a global minimum cut: one max-flow from a fixed cell to every other.
pub fn min_relative_perimeter(omega: &CellSet) -> Result<Rational> {
    let n = omega.len();
    if n < 2 {
        return Err(Error::invalid("need at least two cells"));
    }
    let p = CheegerProblem::new(omega.clone(), BTreeSet::new(), BTreeSet::new(), None)?;
    let s = Scaled::new(&p);
    let total: BigInt = s.pairs.iter().map(|t| &t.2).sum();
    let best = if total < BigInt::from(i128::MAX / 4) {
        let w: Vec<i128> = s.pairs.iter().map(|t| t.2.to_i128().expect("fits")).collect();
        (1..n)
            .map(|t| {
                let mut fg = FlowGraph::<i128>::new(n);
                for ((a, b, _), c) in s.pairs.iter().zip(&w) {
                    fg.add_edge(*a, *b, *c, *c);
                }
                BigInt::from(fg.max_flow(0, t))
            })
            .min()
    } else {
        (1..n)
            .map(|t| {
                let mut fg = FlowGraph::<BigInt>::new(n);
                for (a, b, c) in &s.pairs {
                    fg.add_edge(*a, *b, c.clone(), c.clone());
                }
                fg.max_flow(0, t)
            })
            .min()
    };
    Ok(Rational::new(best.expect("at least one sink"), s.scale))
}
