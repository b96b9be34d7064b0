//! Floating-point cross-check for the exact minimiser.
//!
//! Restricted to functions constant on the cells of a grid, the ROF problem is
//! the weighted fused lasso
//!
//! ```text
//! min_u  1/2 sum_c A_c (u_c - f_c)^2 + lambda sum_e w_e |u_a - u_b|
//! ```
//!
//! solved here through its box-constrained dual with accelerated projected
//! gradient steps and adaptive restart. The primal point `u = f - A^-1 D^T q`
//! is always feasible, so the duality gap bounds its suboptimality. Nothing in
//! this module touches the exact pipeline.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, Mode};
use crate::geometry::{Grid, PcrFunction};
use crate::rational::{to_f64, Rational};
use crate::rof::RofSolution;

const MAX_ITERATIONS: usize = 5_000_000;
const GAP_EVERY: usize = 25;

#[derive(Clone, Debug)]
pub struct GraphTvProblem {
    frame: Frame,
    pub area: Vec<f64>,
    pub datum: Vec<f64>,
    /// Interior edges `(a, b, length)` of the work grid.
    pub edges: Vec<(usize, usize, f64)>,
    /// Edges to a fixed zero outside the work grid (plane mode only).
    pub exterior: Vec<(usize, f64)>,
    pub lambda: f64,
}

impl GraphTvProblem {
    pub fn new(u0: &PcrFunction, lambda: &Rational, mode: Mode) -> Result<Self> {
        if *lambda < Rational::from_integer(0.into()) {
            return Err(Error::invalid("lambda must be nonnegative"));
        }
        if mode == Mode::Plane && u0.has_negative() {
            return Err(Error::invalid("plane mode needs nonnegative data"));
        }
        let frame = Frame::new(u0.grid(), mode);
        let g = frame.work().clone();
        let w = frame.embed(u0);
        let edges = g.interior_edges().into_iter().map(|(e, a, b)| (a, b, to_f64(&g.edge_length(e)))).collect();
        let exterior = frame
            .exterior_edges()
            .into_iter()
            .map(|e| {
                let (a, b) = g.edge_cells(e);
                (a.or(b).expect("boundary edge has a cell"), to_f64(&g.edge_length(e)))
            })
            .collect();
        Ok(GraphTvProblem {
            area: (0..g.cell_count()).map(|c| to_f64(&g.cell_area(c))).collect(),
            datum: w.values().iter().map(to_f64).collect(),
            edges,
            exterior,
            lambda: to_f64(lambda),
            frame,
        })
    }

    pub fn input_grid(&self) -> &Arc<Grid> {
        self.frame.input()
    }

    pub fn primal_objective(&self, u: &[f64]) -> f64 {
        let fid: f64 = (0..u.len()).map(|c| 0.5 * self.area[c] * (u[c] - self.datum[c]).powi(2)).sum();
        let tv: f64 = self.edges.iter().map(|&(a, b, w)| w * (u[a] - u[b]).abs()).sum::<f64>()
            + self.exterior.iter().map(|&(a, w)| w * u[a].abs()).sum::<f64>();
        fid + self.lambda * tv
    }

    fn n_dual(&self) -> usize {
        self.edges.len() + self.exterior.len()
    }

    /// `u = f - A^-1 D^T q`.
    fn primal_from_dual(&self, q: &[f64], u: &mut [f64]) {
        u.copy_from_slice(&self.datum);
        let mut dtq = vec![0.0; u.len()];
        for (k, &(a, b, _)) in self.edges.iter().enumerate() {
            dtq[a] += q[k];
            dtq[b] -= q[k];
        }
        let m = self.edges.len();
        for (k, &(a, _)) in self.exterior.iter().enumerate() {
            dtq[a] += q[m + k];
        }
        for c in 0..u.len() {
            u[c] -= dtq[c] / self.area[c];
        }
    }

    /// Gradient of the concave dual at `q` is `D u(q)`.
    fn dual_gradient(&self, u: &[f64], grad: &mut [f64]) {
        for (k, &(a, b, _)) in self.edges.iter().enumerate() {
            grad[k] = u[a] - u[b];
        }
        let m = self.edges.len();
        for (k, &(a, _)) in self.exterior.iter().enumerate() {
            grad[m + k] = u[a];
        }
    }

    fn dual_objective(&self, u: &[f64]) -> f64 {
        // with u = f - A^-1 D^T q: <D^T q, f> - 1/2 |D^T q|^2_{A^-1}
        //   = sum A (f - u) f - 1/2 sum A (f - u)^2
        (0..u.len())
            .map(|c| {
                let r = self.datum[c] - u[c];
                self.area[c] * (r * self.datum[c] - 0.5 * r * r)
            })
            .sum()
    }

    fn bound(&self, k: usize) -> f64 {
        let w = if k < self.edges.len() { self.edges[k].2 } else { self.exterior[k - self.edges.len()].1 };
        self.lambda * w
    }

    fn lipschitz(&self) -> f64 {
        let mut deg_over_area = vec![0.0; self.area.len()];
        for &(a, b, _) in &self.edges {
            deg_over_area[a] += 1.0;
            deg_over_area[b] += 1.0;
        }
        for &(a, _) in &self.exterior {
            deg_over_area[a] += 1.0;
        }
        for (c, d) in deg_over_area.iter_mut().enumerate() {
            *d /= self.area[c];
        }
        let int = self.edges.iter().map(|&(a, b, _)| deg_over_area[a] + deg_over_area[b]);
        let ext = self.exterior.iter().map(|&(a, _)| deg_over_area[a]);
        int.chain(ext).fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug)]
pub struct OracleSolution {
    pub grid: Arc<Grid>,
    /// Values on the input grid.
    pub values: Vec<f64>,
    pub objective: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Runs until the duality gap is at most `tol * (1 + |objective|)`.
pub fn graph_tv_solve(p: &GraphTvProblem, tol: f64) -> Result<OracleSolution> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let n = p.area.len();
    let m = p.n_dual();
    let step = if m == 0 { 0.0 } else { 1.0 / p.lipschitz() };
    let mut q = vec![0.0; m];
    let mut q_prev = q.clone();
    let mut y = q.clone();
    let mut u = vec![0.0; n];
    let mut grad = vec![0.0; m];
    let mut theta = 1.0_f64;
    for it in 0..MAX_ITERATIONS {
        if it % GAP_EVERY == 0 {
            p.primal_from_dual(&q, &mut u);
            let obj = p.primal_objective(&u);
            let gap = (obj - p.dual_objective(&u)).max(0.0);
            if gap <= tol * (1.0 + obj.abs()) {
                let values = (0..p.frame.input().cell_count()).map(|c| u[p.frame.to_work(c)]).collect();
                return Ok(OracleSolution {
                    grid: p.frame.input().clone(),
                    values,
                    objective: obj,
                    gap,
                    iterations: it,
                });
            }
        }
        p.primal_from_dual(&y, &mut u);
        p.dual_gradient(&u, &mut grad);
        q_prev.copy_from_slice(&q);
        for k in 0..m {
            let b = p.bound(k);
            q[k] = (y[k] + step * grad[k]).clamp(-b, b);
        }
        // restart when the step goes against the momentum
        let uphill: f64 = (0..m).map(|k| (y[k] - q[k]) * (q[k] - q_prev[k])).sum();
        if uphill > 0.0 {
            theta = 1.0;
            y.copy_from_slice(&q);
            continue;
        }
        let next = 0.5 * (1.0 + (1.0 + 4.0 * theta * theta).sqrt());
        let beta = (theta - 1.0) / next;
        theta = next;
        for k in 0..m {
            y[k] = q[k] + beta * (q[k] - q_prev[k]);
        }
    }
    Err(Error::internal("oracle did not reach the requested gap"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn compare(exact: &RofSolution, approx: &OracleSolution, tol: f64) -> Result<Comparison> {
    compare_values(&exact.u, &approx.grid, &approx.values, tol)
}

pub fn compare_values(exact: &PcrFunction, grid: &Grid, approx: &[f64], tol: f64) -> Result<Comparison> {
    if **exact.grid() != *grid || approx.len() != grid.cell_count() {
        return Err(Error::invalid("grids differ"));
    }
    let max_deviation = exact.values().iter().zip(approx).map(|(e, a)| (to_f64(e) - a).abs()).fold(0.0, f64::max);
    Ok(Comparison { max_deviation, passed: max_deviation <= tol })
}
