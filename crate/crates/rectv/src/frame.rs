//! Bounded domains versus the whole plane.
//!
//! In plane mode the input grid is surrounded by one ring of cells whose outer
//! lines sit `margin` away from the input box. Everything beyond the ring is the
//! unbounded zero region; its contact with the ring is treated as plus boundary
//! by the stage problems.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::geometry::{CellSet, Grid, GridEdge, PcrFunction};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Bounded,
    Plane,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Bounded => "bounded",
            Mode::Plane => "plane",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bounded" => Ok(Mode::Bounded),
            "plane" => Ok(Mode::Plane),
            _ => Err(crate::error::Error::invalid(format!("unknown mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    mode: Mode,
    input: Arc<Grid>,
    work: Arc<Grid>,
    margin: Rational,
}

impl Frame {
    /// Plane frames start with a margin equal to the longer side of the input box.
    pub fn new(input: &Arc<Grid>, mode: Mode) -> Frame {
        let b = input.bounding_rect();
        let w = &b.x1 - &b.x0;
        let h = &b.y1 - &b.y0;
        let margin = if w > h { w } else { h };
        Frame::with_margin(input, mode, margin)
    }

    pub fn with_margin(input: &Arc<Grid>, mode: Mode, margin: Rational) -> Frame {
        let work = match mode {
            Mode::Bounded => input.clone(),
            Mode::Plane => {
                let grow = |v: &[Rational]| {
                    let mut out = Vec::with_capacity(v.len() + 2);
                    out.push(&v[0] - &margin);
                    out.extend(v.iter().cloned());
                    out.push(&v[v.len() - 1] + &margin);
                    out
                };
                Arc::new(Grid::new(grow(input.xs()), grow(input.ys())).expect("ring grid"))
            }
        };
        Frame { mode, input: input.clone(), work, margin }
    }

    pub fn doubled(&self) -> Frame {
        Frame::with_margin(&self.input, self.mode, &self.margin + &self.margin)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn input(&self) -> &Arc<Grid> {
        &self.input
    }

    pub fn work(&self) -> &Arc<Grid> {
        &self.work
    }

    pub fn margin(&self) -> &Rational {
        &self.margin
    }

    fn offset(&self) -> usize {
        match self.mode {
            Mode::Bounded => 0,
            Mode::Plane => 1,
        }
    }

    /// Input cell index of a work cell, `None` for ring cells.
    pub fn to_input(&self, c: usize) -> Option<usize> {
        let o = self.offset();
        let (i, j) = self.work.coords(c);
        if i < o || j < o || i - o >= self.input.nx() || j - o >= self.input.ny() {
            return None;
        }
        Some(self.input.cell(i - o, j - o))
    }

    pub fn to_work(&self, c: usize) -> usize {
        let o = self.offset();
        let (i, j) = self.input.coords(c);
        self.work.cell(i + o, j + o)
    }

    pub fn ring(&self) -> CellSet {
        CellSet::from_cells(&self.work, (0..self.work.cell_count()).filter(|&c| self.to_input(c).is_none()))
    }

    pub fn embed(&self, w: &PcrFunction) -> PcrFunction {
        assert_eq!(**w.grid(), *self.input);
        if self.mode == Mode::Bounded {
            return PcrFunction::new(self.work.clone(), w.values().to_vec()).expect("same grid");
        }
        let mut vals = vec![Rational::zero(); self.work.cell_count()];
        for c in 0..self.input.cell_count() {
            vals[self.to_work(c)] = w.value(c).clone();
        }
        PcrFunction::new(self.work.clone(), vals).expect("work grid")
    }

    pub fn crop(&self, w: &PcrFunction) -> PcrFunction {
        let vals = (0..self.input.cell_count()).map(|c| w.value(self.to_work(c)).clone()).collect();
        PcrFunction::new(self.input.clone(), vals).expect("input grid")
    }

    pub fn crop_set(&self, s: &CellSet) -> CellSet {
        CellSet::from_cells(&self.input, (0..self.input.cell_count()).filter(|&c| s.contains(self.to_work(c))))
    }

    pub fn lift_set(&self, s: &CellSet) -> CellSet {
        CellSet::from_cells(&self.work, s.cells().map(|c| self.to_work(c)))
    }

    /// Edges of the outer boundary of the work grid that face the unbounded
    /// exterior. Empty in bounded mode, where the domain boundary is neutral.
    pub fn exterior_edges(&self) -> Vec<GridEdge> {
        match self.mode {
            Mode::Bounded => Vec::new(),
            Mode::Plane => self.work.boundary_edges().into_iter().map(|h| h.edge).collect(),
        }
    }

    /// Value assigned to the outside of the work grid by induced signatures.
    pub fn outside_value(&self) -> Option<Rational> {
        match self.mode {
            Mode::Bounded => None,
            Mode::Plane => Some(Rational::zero()),
        }
    }
}
