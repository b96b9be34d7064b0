//! Rectilinear geometry on a tensor grid.
//!
//! Cell `(i, j)` is `[xs[i], xs[i+1]] x [ys[j], ys[j+1]]` and has row-major index
//! `j * nx + i`. Edges are unit segments of grid lines between adjacent vertices.
//! A vertical edge `(i, j)` sits on line `x = xs[i]` in row `j`; a horizontal
//! edge `(i, j)` sits on line `y = ys[j]` in column `i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Grid({}x{})", self.nx(), self.ny())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GridEdge {
    Vertical { i: usize, j: usize },
    Horizontal { i: usize, j: usize },
}

/// Which of the two cells along an edge's normal a set occupies.
/// `Before` is the left (vertical edge) or lower (horizontal edge) cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Before,
    After,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfEdge {
    pub edge: GridEdge,
    pub side: Side,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// Pairs of cells within one row.
    Rows,
    /// Pairs of cells within one column.
    Columns,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    /// `B_inf(center, r)`.
    pub fn ball(cx: Rational, cy: Rational, r: Rational) -> Self {
        Rect::new(&cx - &r, &cx + &r, &cy - &r, &cy + &r)
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        self.x0 <= o.x0 && o.x1 <= self.x1 && self.y0 <= o.y0 && o.y1 <= self.y1
    }
}

impl Grid {
    pub fn new(xs: Vec<Rational>, ys: Vec<Rational>) -> Result<Self> {
        for (name, v) in [("xs", &xs), ("ys", &ys)] {
            if v.len() < 2 {
                return Err(Error::invalid(format!("{name} needs at least two lines")));
            }
            if v.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::invalid(format!("{name} must be strictly increasing")));
            }
        }
        Ok(Grid { xs, ys })
    }

    pub fn xs(&self) -> &[Rational] {
        &self.xs
    }

    pub fn ys(&self) -> &[Rational] {
        &self.ys
    }

    pub fn nx(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn ny(&self) -> usize {
        self.ys.len() - 1
    }

    pub fn cell_count(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx() && j < self.ny());
        j * self.nx() + i
    }

    pub fn coords(&self, c: usize) -> (usize, usize) {
        (c % self.nx(), c / self.nx())
    }

    pub fn width(&self, i: usize) -> Rational {
        &self.xs[i + 1] - &self.xs[i]
    }

    pub fn height(&self, j: usize) -> Rational {
        &self.ys[j + 1] - &self.ys[j]
    }

    pub fn cell_area(&self, c: usize) -> Rational {
        let (i, j) = self.coords(c);
        self.width(i) * self.height(j)
    }

    pub fn cell_rect(&self, c: usize) -> Rect {
        let (i, j) = self.coords(c);
        Rect::new(
            self.xs[i].clone(),
            self.xs[i + 1].clone(),
            self.ys[j].clone(),
            self.ys[j + 1].clone(),
        )
    }

    pub fn bounding_rect(&self) -> Rect {
        Rect::new(
            self.xs[0].clone(),
            self.xs[self.nx()].clone(),
            self.ys[0].clone(),
            self.ys[self.ny()].clone(),
        )
    }

    pub fn edge_length(&self, e: GridEdge) -> Rational {
        match e {
            GridEdge::Vertical { j, .. } => self.height(j),
            GridEdge::Horizontal { i, .. } => self.width(i),
        }
    }

    /// Cells on the `Before` and `After` sides of an edge; `None` outside the grid.
    pub fn edge_cells(&self, e: GridEdge) -> (Option<usize>, Option<usize>) {
        match e {
            GridEdge::Vertical { i, j } => (
                (i > 0).then(|| self.cell(i - 1, j)),
                (i < self.nx()).then(|| self.cell(i, j)),
            ),
            GridEdge::Horizontal { i, j } => (
                (j > 0).then(|| self.cell(i, j - 1)),
                (j < self.ny()).then(|| self.cell(i, j)),
            ),
        }
    }

    pub fn cell_on(&self, h: HalfEdge) -> Option<usize> {
        let (b, a) = self.edge_cells(h.edge);
        match h.side {
            Side::Before => b,
            Side::After => a,
        }
    }

    /// The four edges of a cell with the side the cell occupies.
    pub fn cell_edges(&self, c: usize) -> [HalfEdge; 4] {
        let (i, j) = self.coords(c);
        [
            HalfEdge { edge: GridEdge::Vertical { i, j }, side: Side::After },
            HalfEdge { edge: GridEdge::Vertical { i: i + 1, j }, side: Side::Before },
            HalfEdge { edge: GridEdge::Horizontal { i, j }, side: Side::After },
            HalfEdge { edge: GridEdge::Horizontal { i, j: j + 1 }, side: Side::Before },
        ]
    }

    /// Neighbour across each side of a cell (or `None` at the domain boundary).
    pub fn neighbours(&self, c: usize) -> [(HalfEdge, Option<usize>); 4] {
        self.cell_edges(c).map(|h| {
            let other = match h.side {
                Side::Before => Side::After,
                Side::After => Side::Before,
            };
            (h, self.cell_on(HalfEdge { edge: h.edge, side: other }))
        })
    }

    pub fn is_boundary_edge(&self, e: GridEdge) -> bool {
        let (b, a) = self.edge_cells(e);
        b.is_none() || a.is_none()
    }

    /// Interior edges with the two cells they separate.
    pub fn interior_edges(&self) -> Vec<(GridEdge, usize, usize)> {
        let mut out = Vec::new();
        for j in 0..self.ny() {
            for i in 1..self.nx() {
                out.push((GridEdge::Vertical { i, j }, self.cell(i - 1, j), self.cell(i, j)));
            }
        }
        for j in 1..self.ny() {
            for i in 0..self.nx() {
                out.push((GridEdge::Horizontal { i, j }, self.cell(i, j - 1), self.cell(i, j)));
            }
        }
        out
    }

    pub fn boundary_edges(&self) -> Vec<HalfEdge> {
        let (nx, ny) = (self.nx(), self.ny());
        let mut out = Vec::new();
        for j in 0..ny {
            out.push(HalfEdge { edge: GridEdge::Vertical { i: 0, j }, side: Side::After });
            out.push(HalfEdge { edge: GridEdge::Vertical { i: nx, j }, side: Side::Before });
        }
        for i in 0..nx {
            out.push(HalfEdge { edge: GridEdge::Horizontal { i, j: 0 }, side: Side::After });
            out.push(HalfEdge { edge: GridEdge::Horizontal { i, j: ny }, side: Side::Before });
        }
        out
    }

    pub fn total_area(&self) -> Rational {
        (&self.xs[self.nx()] - &self.xs[0]) * (&self.ys[self.ny()] - &self.ys[0])
    }
}

/// A subset of the cells of a grid. Disconnected sets are fine.
#[derive(Clone, PartialEq, Eq)]
pub struct CellSet {
    grid: Arc<Grid>,
    mask: Vec<bool>,
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CellSet{:?}", self.cells().collect::<Vec<_>>())
    }
}

impl CellSet {
    pub fn empty(grid: &Arc<Grid>) -> Self {
        CellSet { grid: grid.clone(), mask: vec![false; grid.cell_count()] }
    }

    pub fn full(grid: &Arc<Grid>) -> Self {
        CellSet { grid: grid.clone(), mask: vec![true; grid.cell_count()] }
    }

    pub fn from_mask(grid: &Arc<Grid>, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != grid.cell_count() {
            return Err(Error::invalid("mask length differs from cell count"));
        }
        Ok(CellSet { grid: grid.clone(), mask })
    }

    pub fn from_cells(grid: &Arc<Grid>, cells: impl IntoIterator<Item = usize>) -> Self {
        let mut s = CellSet::empty(grid);
        for c in cells {
            s.mask[c] = true;
        }
        s
    }

    /// Cells whose rectangles lie inside `r`.
    pub fn from_rect(grid: &Arc<Grid>, r: &Rect) -> Self {
        let cells = (0..grid.cell_count()).filter(|&c| r.contains_rect(&grid.cell_rect(c)));
        CellSet::from_cells(grid, cells)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, c: usize) -> bool {
        self.mask[c]
    }

    pub fn insert(&mut self, c: usize) {
        self.mask[c] = true;
    }

    pub fn remove(&mut self, c: usize) {
        self.mask[c] = false;
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn cells(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter(|(_, &b)| b).map(|(c, _)| c)
    }

    fn zip(&self, o: &CellSet, f: impl Fn(bool, bool) -> bool) -> CellSet {
        assert!(self.same_grid(o), "cell sets on different grids");
        CellSet {
            grid: self.grid.clone(),
            mask: self.mask.iter().zip(&o.mask).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn same_grid(&self, o: &CellSet) -> bool {
        Arc::ptr_eq(&self.grid, &o.grid) || *self.grid == *o.grid
    }

    pub fn union(&self, o: &CellSet) -> CellSet {
        self.zip(o, |a, b| a || b)
    }

    pub fn intersection(&self, o: &CellSet) -> CellSet {
        self.zip(o, |a, b| a && b)
    }

    pub fn difference(&self, o: &CellSet) -> CellSet {
        self.zip(o, |a, b| a && !b)
    }

    pub fn complement(&self) -> CellSet {
        CellSet { grid: self.grid.clone(), mask: self.mask.iter().map(|b| !b).collect() }
    }

    pub fn is_subset(&self, o: &CellSet) -> bool {
        self.mask.iter().zip(&o.mask).all(|(&a, &b)| !a || b)
    }

    pub fn is_disjoint(&self, o: &CellSet) -> bool {
        self.mask.iter().zip(&o.mask).all(|(&a, &b)| !(a && b))
    }

    /// Boundary edges of the set, oriented towards the side the set occupies.
    /// Edges on the domain boundary are included.
    pub fn boundary(&self) -> Vec<HalfEdge> {
        let g = &self.grid;
        let mut out = Vec::new();
        for c in self.cells() {
            for (h, nb) in g.neighbours(c) {
                if nb.is_none_or(|d| !self.mask[d]) {
                    out.push(h);
                }
            }
        }
        out.sort();
        out
    }

    pub fn boundary_edge_set(&self) -> BTreeSet<GridEdge> {
        self.boundary().into_iter().map(|h| h.edge).collect()
    }

    /// Smallest rectangle containing the set.
    pub fn bbox(&self) -> Option<Rect> {
        let g = &self.grid;
        let mut it = self.cells().map(|c| g.coords(c));
        let (i0, j0) = it.next()?;
        let (mut a, mut b, mut c, mut d) = (i0, i0, j0, j0);
        for (i, j) in it {
            a = a.min(i);
            b = b.max(i);
            c = c.min(j);
            d = d.max(j);
        }
        Some(Rect::new(g.xs[a].clone(), g.xs[b + 1].clone(), g.ys[c].clone(), g.ys[d + 1].clone()))
    }

    /// Same mask on another grid with identical cell layout.
    pub fn rebase(&self, grid: &Arc<Grid>) -> CellSet {
        assert_eq!(grid.cell_count(), self.mask.len());
        CellSet { grid: grid.clone(), mask: self.mask.clone() }
    }
}

/// Plus / minus labels on the boundary edges of one set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub plus: BTreeSet<GridEdge>,
    pub minus: BTreeSet<GridEdge>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.plus.is_empty() && self.minus.is_empty()
    }

    pub fn plus_length(&self, g: &Grid) -> Rational {
        self.plus.iter().map(|&e| g.edge_length(e)).sum()
    }

    pub fn minus_length(&self, g: &Grid) -> Rational {
        self.minus.iter().map(|&e| g.edge_length(e)).sum()
    }

    /// Checks disjointness and that both classes lie on the boundary of `cells`.
    pub fn check(&self, cells: &CellSet) -> Result<()> {
        if !self.plus.is_disjoint(&self.minus) {
            return Err(Error::invalid("plus and minus edges overlap"));
        }
        let b = cells.boundary_edge_set();
        if !self.plus.is_subset(&b) || !self.minus.is_subset(&b) {
            return Err(Error::invalid("signature edge off the set boundary"));
        }
        Ok(())
    }
}

/// A signature for each member of a partition, in member order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConsistentSignature {
    pub members: Vec<Signature>,
}

impl ConsistentSignature {
    /// Oriented plus and minus half-edge sets over the whole partition.
    pub fn oriented(&self, partition: &[CellSet]) -> (BTreeSet<HalfEdge>, BTreeSet<HalfEdge>) {
        let mut plus = BTreeSet::new();
        let mut minus = BTreeSet::new();
        for (cells, sig) in partition.iter().zip(&self.members) {
            for h in cells.boundary() {
                if sig.plus.contains(&h.edge) {
                    plus.insert(h);
                }
                if sig.minus.contains(&h.edge) {
                    minus.insert(h);
                }
            }
        }
        (plus, minus)
    }

    /// An interior edge labelled plus on one side must be minus on the other.
    pub fn check_consistent(&self, partition: &[CellSet]) -> Result<()> {
        let (plus, minus) = self.oriented(partition);
        let g = match partition.first() {
            Some(p) => p.grid().clone(),
            None => return Ok(()),
        };
        for h in &plus {
            if g.is_boundary_edge(h.edge) {
                continue;
            }
            let other = HalfEdge { edge: h.edge, side: flip(h.side) };
            if !minus.contains(&other) {
                return Err(Error::invalid(format!("plus edge {:?} lacks a minus partner", h.edge)));
            }
        }
        for h in &minus {
            if g.is_boundary_edge(h.edge) {
                continue;
            }
            let other = HalfEdge { edge: h.edge, side: flip(h.side) };
            if !plus.contains(&other) {
                return Err(Error::invalid(format!("minus edge {:?} lacks a plus partner", h.edge)));
            }
        }
        Ok(())
    }
}

pub fn flip(s: Side) -> Side {
    match s {
        Side::Before => Side::After,
        Side::After => Side::Before,
    }
}

/// A function constant on each grid cell.
#[derive(Clone, PartialEq, Eq)]
pub struct PcrFunction {
    grid: Arc<Grid>,
    values: Vec<Rational>,
}

impl fmt::Debug for PcrFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(crate::rational::fmt_rational).collect();
        write!(f, "Pcr{:?}{:?}", self.grid, vals)
    }
}

impl PcrFunction {
    pub fn new(grid: Arc<Grid>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                grid.cell_count(),
                values.len()
            )));
        }
        Ok(PcrFunction { grid, values })
    }

    pub fn constant(grid: Arc<Grid>, v: Rational) -> Self {
        let n = grid.cell_count();
        PcrFunction { grid, values: vec![v; n] }
    }

    /// Sum of `value * indicator(rect)` over the given pieces.
    pub fn from_rects(grid: Arc<Grid>, pieces: &[(Rect, Rational)]) -> Self {
        let mut values = vec![Rational::zero(); grid.cell_count()];
        for (r, v) in pieces {
            for c in CellSet::from_rect(&grid, r).cells() {
                values[c] += v;
            }
        }
        PcrFunction { grid, values }
    }

    /// Rebuilds a function from a partition and one value per member.
    pub fn from_partition(grid: Arc<Grid>, parts: &[(CellSet, Rational)]) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; grid.cell_count()];
        for (s, v) in parts {
            for c in s.cells() {
                if values[c].replace(v.clone()).is_some() {
                    return Err(Error::invalid("partition members overlap"));
                }
            }
        }
        let values = values
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::invalid("partition does not cover the grid"))?;
        Ok(PcrFunction { grid, values })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, c: usize) -> &Rational {
        &self.values[c]
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.values[self.grid.cell(i, j)]
    }

    pub fn integral(&self) -> Rational {
        (0..self.grid.cell_count()).map(|c| self.grid.cell_area(c) * &self.values[c]).sum()
    }

    pub fn integral_over(&self, e: &CellSet) -> Rational {
        e.cells().map(|c| self.grid.cell_area(c) * &self.values[c]).sum()
    }

    pub fn mean(&self) -> Rational {
        self.integral() / self.grid.total_area()
    }

    pub fn min(&self) -> Rational {
        self.values.iter().min().cloned().expect("nonempty grid")
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().expect("nonempty grid")
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Squared L2 distance `sum area * (u - v)^2`.
    pub fn l2_dist_sq(&self, o: &PcrFunction) -> Rational {
        assert_eq!(*self.grid, *o.grid);
        (0..self.grid.cell_count())
            .map(|c| {
                let d = &self.values[c] - &o.values[c];
                self.grid.cell_area(c) * &d * &d
            })
            .sum()
    }

    /// Support rectangle of the nonzero values.
    pub fn support_rect(&self) -> Option<Rect> {
        let s = CellSet::from_cells(
            &self.grid,
            (0..self.grid.cell_count()).filter(|&c| !self.values[c].is_zero()),
        );
        s.bbox()
    }

    pub fn has_negative(&self) -> bool {
        self.values.iter().any(|v| v.is_negative())
    }

    /// Same function on the coarsest subgrid: interior lines that carry no
    /// jump are dropped, the outer box is kept.
    pub fn coarsen(&self) -> PcrFunction {
        let g = &self.grid;
        let (nx, ny) = (g.nx(), g.ny());
        let keep_x: Vec<usize> = (0..=nx)
            .filter(|&i| i == 0 || i == nx || (0..ny).any(|j| self.at(i - 1, j) != self.at(i, j)))
            .collect();
        let keep_y: Vec<usize> = (0..=ny)
            .filter(|&j| j == 0 || j == ny || (0..nx).any(|i| self.at(i, j - 1) != self.at(i, j)))
            .collect();
        let xs = keep_x.iter().map(|&i| g.xs()[i].clone()).collect();
        let ys = keep_y.iter().map(|&j| g.ys()[j].clone()).collect();
        let grid = Arc::new(Grid::new(xs, ys).expect("subset of valid lines"));
        let mut values = Vec::with_capacity(grid.cell_count());
        for &j in &keep_y[..keep_y.len() - 1] {
            for &i in &keep_x[..keep_x.len() - 1] {
                values.push(self.at(i, j).clone());
            }
        }
        PcrFunction { grid, values }
    }
}

/// The grid generated by the sides of the rectangles plus extra lines.
pub fn build_grid(rects: &[Rect], extra_xs: &[Rational], extra_ys: &[Rational]) -> Result<Grid> {
    let mut xs: BTreeSet<Rational> = extra_xs.iter().cloned().collect();
    let mut ys: BTreeSet<Rational> = extra_ys.iter().cloned().collect();
    for r in rects {
        if r.x0 >= r.x1 || r.y0 >= r.y1 {
            return Err(Error::invalid("degenerate rectangle"));
        }
        xs.insert(r.x0.clone());
        xs.insert(r.x1.clone());
        ys.insert(r.y0.clone());
        ys.insert(r.y1.clone());
    }
    if xs.is_empty() && ys.is_empty() {
        return Err(Error::invalid("no rectangles or lines given"));
    }
    Grid::new(xs.into_iter().collect(), ys.into_iter().collect())
}

pub fn area(e: &CellSet) -> Rational {
    let g = e.grid();
    e.cells().map(|c| g.cell_area(c)).sum()
}

/// Length of the edges separating `e` from `f0 \ e`.
pub fn interior_perimeter(e: &CellSet, f0: &CellSet) -> Result<Rational> {
    if !e.is_subset(f0) {
        return Err(Error::invalid("set is not contained in the ambient region"));
    }
    let g = e.grid();
    let mut total = Rational::zero();
    for c in e.cells() {
        for (h, nb) in g.neighbours(c) {
            if let Some(d) = nb {
                if f0.contains(d) && !e.contains(d) {
                    total += g.edge_length(h.edge);
                }
            }
        }
    }
    Ok(total)
}

/// Length of the boundary of `e` lying in `edges`.
pub fn boundary_overlap(e: &CellSet, edges: &BTreeSet<GridEdge>) -> Rational {
    let g = e.grid();
    e.boundary()
        .into_iter()
        .filter(|h| edges.contains(&h.edge))
        .map(|h| g.edge_length(h.edge))
        .sum()
}

/// Level sets of `w`, ordered by decreasing value.
pub fn level_partition(w: &PcrFunction) -> Vec<(CellSet, Rational)> {
    let mut by_value: BTreeMap<&Rational, Vec<usize>> = BTreeMap::new();
    for (c, v) in w.values.iter().enumerate() {
        by_value.entry(v).or_default().push(c);
    }
    by_value
        .into_iter()
        .rev()
        .map(|(v, cells)| (CellSet::from_cells(&w.grid, cells), v.clone()))
        .collect()
}

/// Signature induced by `w` on its level partition (same order as
/// [`level_partition`]). Edges towards strictly lower neighbours are plus,
/// towards strictly higher ones minus. On the domain boundary the neighbour value
/// is `outside` when given, otherwise the edge is neutral.
pub fn induced_signature(w: &PcrFunction, outside: Option<&Rational>) -> ConsistentSignature {
    let parts = level_partition(w);
    let g = w.grid();
    let members = parts
        .iter()
        .map(|(cells, v)| {
            let mut sig = Signature::default();
            for h in cells.boundary() {
                let (b, a) = g.edge_cells(h.edge);
                let other = match h.side {
                    Side::Before => a,
                    Side::After => b,
                };
                let nv = match other {
                    Some(d) => Some(w.value(d)),
                    None => outside,
                };
                if let Some(nv) = nv {
                    if nv < v {
                        sig.plus.insert(h.edge);
                    } else if nv > v {
                        sig.minus.insert(h.edge);
                    }
                }
            }
            sig
        })
        .collect();
    ConsistentSignature { members }
}

/// Pairs of members with positive shared boundary length.
pub fn adjacency(partition: &[CellSet]) -> Vec<(usize, usize, Rational)> {
    let Some(first) = partition.first() else {
        return Vec::new();
    };
    let g = first.grid().clone();
    let mut owner = vec![usize::MAX; g.cell_count()];
    for (k, s) in partition.iter().enumerate() {
        for c in s.cells() {
            owner[c] = k;
        }
    }
    let mut shared: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (e, a, b) in g.interior_edges() {
        let (oa, ob) = (owner[a], owner[b]);
        if oa == usize::MAX || ob == usize::MAX || oa == ob {
            continue;
        }
        let key = (oa.min(ob), oa.max(ob));
        *shared.entry(key).or_insert_with(Rational::zero) += g.edge_length(e);
    }
    shared.into_iter().map(|((a, b), l)| (a, b, l)).collect()
}

/// Largest `|w(R1) - w(R2)|` over pairs of cells in one row (or column)
/// separated by at most `m` cells.
pub fn max_jump(w: &PcrFunction, axis: Axis, m: usize) -> Rational {
    let g = w.grid();
    let (lines, len) = match axis {
        Axis::Rows => (g.ny(), g.nx()),
        Axis::Columns => (g.nx(), g.ny()),
    };
    let at = |line: usize, k: usize| match axis {
        Axis::Rows => w.at(k, line),
        Axis::Columns => w.at(line, k),
    };
    let mut best = Rational::zero();
    for line in 0..lines {
        for a in 0..len {
            for b in a + 1..len.min(a + m + 2) {
                let d = (at(line, a) - at(line, b)).abs();
                if d > best {
                    best = d;
                }
            }
        }
    }
    best
}
