//! Exact minimiser of
//!
//! ```text
//! 1/2 ∫ (u - u0)^2 + lambda * TV_1(u)
//! ```
//!
//! for data piecewise constant on rectangles, built stage by stage: each stage
//! takes the largest minimiser of the Cheeger quotient with datum `u0 / lambda`
//! over the part of the domain not yet covered, with minus boundary towards the
//! covered part. The stage value is `-lambda` times the minimal quotient.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{Frame, Mode};
use crate::geometry::{
    area, induced_signature, level_partition, CellSet, ConsistentSignature, Grid, GridEdge, PcrFunction,
    Signature,
};
use crate::rational::{fmt_rational, Rational};
use crate::stage::{stage_edges, stage_min, stage_signature, Across};

#[derive(Clone, Debug)]
pub struct RofSolution {
    pub mode: Mode,
    pub lambda: Rational,
    /// The minimiser on the input grid.
    pub u: PcrFunction,
    /// Grid the construction ran on: the input grid, or the input grid plus a
    /// ring of cells in plane mode.
    pub work_grid: Arc<Grid>,
    /// Stage sets in construction order, on the work grid. In plane mode the
    /// last member is the unbounded zero region.
    pub partition: Vec<CellSet>,
    pub signature: ConsistentSignature,
    /// Minimal quotient of each bounded stage.
    pub stage_ratios: Vec<Rational>,
}

impl RofSolution {
    /// Value of member `k`, read off `u` (zero for a member outside the input grid).
    pub fn member_value(&self, k: usize) -> Rational {
        let fr = Frame::new(self.u.grid(), self.mode);
        self.partition[k]
            .cells()
            .find_map(|c| fr.to_input(c))
            .map_or_else(Rational::zero, |c| self.u.value(c).clone())
    }
}

pub fn solve_rof(u0: &PcrFunction, lambda: &Rational, mode: Mode) -> Result<RofSolution> {
    match mode {
        Mode::Bounded => solve_rof_bounded(u0, lambda),
        Mode::Plane => solve_rof_plane(u0, lambda),
    }
}

pub fn solve_rof_bounded(u0: &PcrFunction, lambda: &Rational) -> Result<RofSolution> {
    solve_in(&Frame::new(u0.grid(), Mode::Bounded), u0, lambda)
}

pub fn solve_rof_plane(u0: &PcrFunction, lambda: &Rational) -> Result<RofSolution> {
    if u0.has_negative() {
        return Err(Error::invalid("plane mode needs nonnegative data"));
    }
    solve_in(&Frame::new(u0.grid(), Mode::Plane), u0, lambda)
}

fn solve_in(frame: &Frame, u0: &PcrFunction, lambda: &Rational) -> Result<RofSolution> {
    if lambda.is_negative() {
        return Err(Error::invalid("lambda must be positive"));
    }
    if lambda.is_zero() {
        return Ok(identity_solution(frame, u0));
    }
    let w0 = frame.embed(u0);
    let f = PcrFunction::new(w0.grid().clone(), w0.values().iter().map(|v| v / lambda).collect())?;
    let g = frame.work().clone();
    let plane = frame.mode() == Mode::Plane;
    let no_outside = |_: GridEdge, _: usize| Across::Plus;
    let mut covered = CellSet::empty(&g);
    let mut partition = Vec::new();
    let mut members = Vec::new();
    let mut ratios = Vec::new();
    let mut values = vec![Rational::zero(); g.cell_count()];
    for _ in 0..=g.cell_count() {
        let rest = covered.complement();
        if rest.is_empty() {
            break;
        }
        let (plus, minus) = stage_edges(frame, &rest, &covered, &no_outside, plane);
        let r = stage_min(frame, &rest, plus, minus.clone(), Some(&f), plane)?;
        if plane && !r.ratio.is_negative() {
            partition.push(rest);
            members.push(Signature { plus: BTreeSet::new(), minus });
            break;
        }
        if plane && !r.set.is_disjoint(&frame.ring()) {
            return Err(Error::internal("bounded stage reached the margin ring"));
        }
        let value = -(lambda * &r.ratio);
        for c in r.set.cells() {
            values[c] = value.clone();
        }
        members.push(stage_signature(frame, &r.set, &covered, &no_outside));
        covered = covered.union(&r.set);
        partition.push(r.set);
        ratios.push(r.ratio);
    }
    if partition.iter().map(CellSet::len).sum::<usize>() != g.cell_count() {
        return Err(Error::internal("stages failed to cover the domain"));
    }
    let u = frame.crop(&PcrFunction::new(g.clone(), values)?);
    Ok(RofSolution {
        mode: frame.mode(),
        lambda: lambda.clone(),
        u,
        work_grid: g,
        partition,
        signature: ConsistentSignature { members },
        stage_ratios: ratios,
    })
}

fn identity_solution(frame: &Frame, u0: &PcrFunction) -> RofSolution {
    let w0 = frame.embed(u0);
    let parts = level_partition(&w0);
    let sig = induced_signature(&w0, frame.outside_value().as_ref());
    RofSolution {
        mode: frame.mode(),
        lambda: Rational::zero(),
        u: u0.clone(),
        work_grid: frame.work().clone(),
        partition: parts.into_iter().map(|p| p.0).collect(),
        signature: sig,
        stage_ratios: Vec::new(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub checks: Vec<Check>,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name, passed, detail: detail.into() });
    }
}

/// Re-derives every claim of a solution from `u0`: coverage, the signature
/// rule, the value formula, strict ordering of stage values, and minimality of
/// each stage set.
pub fn verify_certificate(sol: &RofSolution, u0: &PcrFunction) -> CertificateReport {
    let mut rep = CertificateReport { checks: Vec::new() };
    if !sol.lambda.is_positive() {
        rep.push("lambda", false, "lambda must be positive to certify");
        return rep;
    }
    rep.push("lambda", true, fmt_rational(&sol.lambda));
    let frame = Frame::new(u0.grid(), sol.mode);
    let g = frame.work().clone();
    let same_grid = **sol.u.grid() == **u0.grid()
        && *sol.work_grid == *g
        && sol.partition.iter().all(|p| **p.grid() == *g);
    rep.push("grid", same_grid, "");
    if !same_grid {
        return rep;
    }
    let plane = sol.mode == Mode::Plane;
    let n = sol.partition.len();
    let ring = frame.ring();

    // coverage
    let mut count = vec![0usize; g.cell_count()];
    for p in &sol.partition {
        for c in p.cells() {
            count[c] += 1;
        }
    }
    let covers = count.iter().all(|&k| k == 1) && sol.partition.iter().all(|p| !p.is_empty());
    rep.push("partition_covers", covers, "");
    let shape = sol.signature.members.len() == n
        && if plane {
            n >= 1
                && sol.stage_ratios.len() == n - 1
                && sol.partition[..n - 1].iter().all(|p| p.is_disjoint(&ring))
                && !sol.partition[n - 1].is_disjoint(&ring)
        } else {
            sol.stage_ratios.len() == n
        };
    rep.push("stage_count", shape, format!("{n} members, {} ratios", sol.stage_ratios.len()));
    if !covers || !shape {
        return rep;
    }
    let stages = sol.stage_ratios.len();

    // signature rule and values
    let w0 = frame.embed(u0);
    let uw = frame.embed(&sol.u);
    let f = PcrFunction::new(g.clone(), w0.values().iter().map(|v| v / &sol.lambda).collect())
        .expect("work grid");
    let no_outside = |_: GridEdge, _: usize| Across::Plus;
    let mut covered = CellSet::empty(&g);
    let mut sig_ok = true;
    let mut defu_ok = true;
    let mut ratio_ok = true;
    let mut order_ok = true;
    let mut min_ok = true;
    let mut detail = String::new();
    let mut prev: Option<Rational> = None;
    for k in 0..n {
        let set = &sol.partition[k];
        let sig = &sol.signature.members[k];
        let rest = covered.complement();
        let (plus, minus) = stage_edges(&frame, &rest, &covered, &no_outside, plane);
        let vals: BTreeSet<&Rational> = set.cells().map(|c| uw.value(c)).collect();
        if k < stages {
            let want = stage_signature(&frame, set, &covered, &no_outside);
            if *sig != want {
                sig_ok = false;
                detail += &format!("member {k}: signature rule; ");
            }
            let value = match vals.iter().next() {
                Some(v) if vals.len() == 1 => Some((*v).clone()),
                _ => {
                    defu_ok = false;
                    ratio_ok = false;
                    detail += &format!("member {k}: u not constant; ");
                    None
                }
            };
            if let Some(value) = value {
                let a = area(set);
                let defu =
                    (w0.integral_over(set) - &sol.lambda * (sig.plus_length(&g) - sig.minus_length(&g))) / a;
                if defu != value {
                    defu_ok = false;
                    detail +=
                        &format!("member {k}: value {} vs formula {}; ", fmt_rational(&value), fmt_rational(&defu));
                }
                if -(&sol.lambda * &sol.stage_ratios[k]) != value {
                    ratio_ok = false;
                    detail += &format!("member {k}: ratio; ");
                }
                if prev.as_ref().is_some_and(|p| value >= *p) {
                    order_ok = false;
                }
                prev = Some(value);
            }
            match stage_min(&frame, &rest, plus, minus, Some(&f), plane) {
                Ok(r) if r.ratio == sol.stage_ratios[k] && r.set == *set => {}
                Ok(r) => {
                    min_ok = false;
                    detail += &format!("member {k}: re-solve gives ratio {}; ", fmt_rational(&r.ratio));
                }
                Err(e) => {
                    min_ok = false;
                    detail += &format!("member {k}: {e}; ");
                }
            }
        } else {
            // plane remainder: value 0 and no bounded subset with negative quotient
            let want = Signature { plus: BTreeSet::new(), minus: minus.clone() };
            if *sig != want || rest != *set {
                sig_ok = false;
                detail += "remainder signature; ";
            }
            if vals.iter().any(|v| !v.is_zero()) {
                defu_ok = false;
                detail += "remainder not zero; ";
            }
            if let Some(p) = &prev {
                if !p.is_positive() {
                    order_ok = false;
                }
            }
            match stage_min(&frame, &rest, plus, minus, Some(&f), true) {
                Ok(r) if !r.ratio.is_negative() => {}
                _ => {
                    min_ok = false;
                    detail += "remainder admits a negative stage; ";
                }
            }
        }
        covered = covered.union(set);
    }
    rep.push("signature_rule", sig_ok, "");
    rep.push("values_formula", defu_ok, "");
    rep.push("values_ratio", ratio_ok, "");
    rep.push("strict_ordering", order_ok, "");
    rep.push("stage_minimality", min_ok, "");

    // the signature is the one induced by u (member order is by value)
    let levels = level_partition(&uw);
    let induced = induced_signature(&uw, frame.outside_value().as_ref());
    let level_sets: Vec<CellSet> = levels.into_iter().map(|p| p.0).collect();
    let induced_ok = induced.oriented(&level_sets) == sol.signature.oriented(&sol.partition);
    rep.push("signature_induced", induced_ok, "");
    if !detail.is_empty() {
        rep.checks.push(Check { name: "detail", passed: rep.passed(), detail });
    }
    rep
}
