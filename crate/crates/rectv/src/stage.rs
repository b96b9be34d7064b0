//! Shared machinery for the sequential constructions of the minimiser and of
//! the facet decomposition: one Cheeger problem per stage, with plane-mode
//! margin handling.

use std::collections::BTreeSet;

use crate::cutsolve::{dinkelbach_trace, RatioMin};
use crate::energy::CheegerProblem;
use crate::error::{Error, Result};
use crate::frame::{Frame, Mode};
use crate::geometry::{CellSet, GridEdge, HalfEdge, PcrFunction, Signature};
use crate::rational::Rational;

const MAX_DOUBLINGS: usize = 8;

/// How an edge on the boundary of the remaining region is labelled when the
/// cell across it is outside the region.
pub(crate) enum Across {
    Plus,
    Minus,
    Neutral,
}

/// Labels for a boundary half-edge of `rest`: `covered` cells count as minus,
/// other cells are resolved by `outside`, and the work-grid boundary is
/// neutral (it is handled separately as exterior).
pub(crate) fn label(
    frame: &Frame,
    h: HalfEdge,
    covered: &CellSet,
    outside: &dyn Fn(GridEdge, usize) -> Across,
) -> Across {
    let g = frame.work();
    let other = g.cell_on(HalfEdge { edge: h.edge, side: crate::geometry::flip(h.side) });
    match other {
        None => Across::Neutral,
        Some(d) if covered.contains(d) => Across::Minus,
        Some(d) => outside(h.edge, d),
    }
}

/// Plus and minus edges of the stage problem on `rest`.
pub(crate) fn stage_edges(
    frame: &Frame,
    rest: &CellSet,
    covered: &CellSet,
    outside: &dyn Fn(GridEdge, usize) -> Across,
    exterior: bool,
) -> (BTreeSet<GridEdge>, BTreeSet<GridEdge>) {
    let mut plus = BTreeSet::new();
    let mut minus = BTreeSet::new();
    for h in rest.boundary() {
        match label(frame, h, covered, outside) {
            Across::Plus => {
                plus.insert(h.edge);
            }
            Across::Minus => {
                minus.insert(h.edge);
            }
            Across::Neutral => {}
        }
    }
    if exterior {
        plus.extend(frame.exterior_edges());
    }
    (plus, minus)
}

/// Signature of a selected stage set `f` inside `rest`: minus towards covered
/// cells, plus towards the rest of the region, `outside` elsewhere.
pub(crate) fn stage_signature(
    frame: &Frame,
    f: &CellSet,
    covered: &CellSet,
    outside: &dyn Fn(GridEdge, usize) -> Across,
) -> Signature {
    let mut sig = Signature::default();
    for h in f.boundary() {
        match label(frame, h, covered, outside) {
            Across::Plus => {
                sig.plus.insert(h.edge);
            }
            Across::Minus => {
                sig.minus.insert(h.edge);
            }
            Across::Neutral => {}
        }
    }
    sig
}

/// Minimal quotient over nonempty subsets of `rest`. With `exterior` set
/// (plane mode, `rest` containing the ring) the outer boundary of the work grid
/// is plus; a negative minimiser reaching the ring makes the margin double and
/// the problem re-run. The returned set lives on `frame.work()`.
pub(crate) fn stage_min(
    frame: &Frame,
    rest: &CellSet,
    plus: BTreeSet<GridEdge>,
    minus: BTreeSet<GridEdge>,
    f: Option<&PcrFunction>,
    exterior: bool,
) -> Result<RatioMin> {
    let mut fr = frame.clone();
    for _ in 0..=MAX_DOUBLINGS {
        let dom = rest.rebase(fr.work());
        let datum = f.map(|f| PcrFunction::new(fr.work().clone(), f.values().to_vec()).expect("same layout"));
        let p = CheegerProblem::new(dom, plus.clone(), minus.clone(), datum)?;
        let mut r = dinkelbach_trace(&p)?;
        let escapes = exterior
            && fr.mode() == Mode::Plane
            && r.ratio < Rational::from_integer(0.into())
            && !r.set.is_disjoint(&fr.ring());
        if !escapes {
            r.set = r.set.rebase(frame.work());
            return Ok(r);
        }
        fr = fr.doubled();
    }
    Err(Error::internal("negative stage minimiser keeps reaching the margin ring"))
}
