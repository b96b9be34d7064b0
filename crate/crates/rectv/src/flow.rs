//! Event-driven exact solution of the TV_1 gradient flow.
//!
//! Between events every facet moves with constant speed
//! `-(|dF+| - |dF-|) / |F|`. Facets are found per level set by repeatedly taking
//! the largest minimiser of the Cheeger quotient with zero datum over the part
//! of the level set not yet assigned, with minus boundary towards the assigned
//! part. An event is the first time two adjacent facets reach the same value;
//! the level partition is then rebuilt and decomposed from scratch.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::frame::{Frame, Mode};
use crate::geometry::{
    adjacency, area, induced_signature, level_partition, CellSet, ConsistentSignature, GridEdge, HalfEdge,
    PcrFunction, Signature,
};
use crate::rational::Rational;
use crate::stage::{stage_edges, stage_min, stage_signature, Across};

#[derive(Clone, Debug)]
pub struct FacetState {
    /// Cells on the work grid of the timeline.
    pub cells: CellSet,
    pub signature: Signature,
    pub speed: Rational,
    /// Value at time `t0`.
    pub value: Rational,
    pub t0: Rational,
    /// False only for the unbounded zero facet in plane mode.
    pub bounded: bool,
}

impl FacetState {
    pub fn value_at(&self, t: &Rational) -> Rational {
        &self.value + &self.speed * (t - &self.t0)
    }

    pub fn area(&self) -> Rational {
        area(&self.cells)
    }

    pub fn plus_length(&self) -> Rational {
        self.signature.plus_length(self.cells.grid())
    }

    pub fn minus_length(&self) -> Rational {
        self.signature.minus_length(self.cells.grid())
    }
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    pub frame: Frame,
    pub facets: Vec<FacetState>,
}

impl Decomposition {
    /// Speed of the facet holding input cell `c`.
    pub fn speed_at(&self, c: usize) -> &Rational {
        let w = self.frame.to_work(c);
        &self.facets.iter().find(|f| f.cells.contains(w)).expect("facets cover the grid").speed
    }

    pub fn facet_of(&self, c: usize) -> &FacetState {
        let w = self.frame.to_work(c);
        self.facets.iter().find(|f| f.cells.contains(w)).expect("facets cover the grid")
    }
}

pub fn facet_decomposition(w: &PcrFunction, mode: Mode) -> Result<Decomposition> {
    if mode == Mode::Plane && w.has_negative() {
        return Err(Error::invalid("plane mode needs nonnegative data"));
    }
    let frame = Frame::new(w.grid(), mode);
    let facets = decompose(&frame, &frame.embed(w), &Rational::zero())?;
    Ok(Decomposition { frame, facets })
}

fn decompose(frame: &Frame, w: &PcrFunction, t0: &Rational) -> Result<Vec<FacetState>> {
    let g = frame.work().clone();
    let plane = frame.mode() == Mode::Plane;
    let mut facets = Vec::new();
    for (q, v) in level_partition(w) {
        let background = plane && v.is_zero();
        let outside = |_: GridEdge, d: usize| {
            let nv = w.value(d);
            if *nv < v {
                Across::Plus
            } else if *nv > v {
                Across::Minus
            } else {
                Across::Neutral
            }
        };
        let mut covered = q.complement();
        let outside_q = covered.clone();
        for _ in 0..=q.len() {
            let rest = covered.complement();
            if rest.is_empty() {
                break;
            }
            // covered cells of `q` are caught as minus by the stage labelling; the
            // rest of `q` is plus and cells outside `q` carry the induced label
            let label = |e: GridEdge, d: usize| if outside_q.contains(d) { outside(e, d) } else { Across::Plus };
            let assigned = covered.difference(&outside_q);
            let (plus, minus) = stage_edges(frame, &rest, &assigned, &label, background);
            let r = stage_min(frame, &rest, plus, minus, None, background)?;
            if background && !r.ratio.is_negative() {
                facets.push(FacetState {
                    signature: stage_signature(frame, &rest, &assigned, &label),
                    cells: rest,
                    speed: Rational::zero(),
                    value: v.clone(),
                    t0: t0.clone(),
                    bounded: false,
                });
                break;
            }
            if plane && !r.set.is_disjoint(&frame.ring()) {
                return Err(Error::internal("facet reached the margin ring"));
            }
            facets.push(FacetState {
                signature: stage_signature(frame, &r.set, &assigned, &label),
                speed: -r.ratio,
                value: v.clone(),
                t0: t0.clone(),
                bounded: true,
                cells: r.set.clone(),
            });
            covered = covered.union(&r.set);
        }
        if !q.difference(&covered).is_empty() && !(background && facets.last().is_some_and(|f| !f.bounded)) {
            return Err(Error::internal("level set not exhausted by its facets"));
        }
    }
    for f in facets.iter().filter(|f| f.bounded) {
        if &f.speed * f.area() != f.minus_length() - f.plus_length() {
            return Err(Error::internal("facet speed disagrees with its signature"));
        }
    }
    let total: usize = facets.iter().map(|f| f.cells.len()).sum();
    if total != g.cell_count() {
        return Err(Error::internal("facets do not partition the grid"));
    }
    Ok(facets)
}

/// First time after `t_now` at which two adjacent facets share a value, with
/// the pairs that meet then.
pub fn next_merging_time(states: &[FacetState], t_now: &Rational) -> Option<(Rational, Vec<(usize, usize)>)> {
    let parts: Vec<CellSet> = states.iter().map(|s| s.cells.clone()).collect();
    let mut best: Option<(Rational, Vec<(usize, usize)>)> = None;
    for (a, b, _) in adjacency(&parts) {
        let (sa, sb) = (&states[a], &states[b]);
        let ds = &sa.speed - &sb.speed;
        if ds.is_zero() {
            continue;
        }
        let dv = sb.value_at(t_now) - sa.value_at(t_now);
        let dt = dv / ds;
        if !dt.is_positive() {
            continue;
        }
        let t = t_now + dt;
        match &mut best {
            Some((bt, pairs)) if *bt == t => pairs.push((a, b)),
            Some((bt, _)) if *bt < t => {}
            _ => best = Some((t, vec![(a, b)])),
        }
    }
    best
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub t: Rational,
    pub facets: Vec<FacetState>,
    pub merging: bool,
    pub breaking: bool,
}

impl Snapshot {
    pub fn oriented_signature(&self) -> (BTreeSet<HalfEdge>, BTreeSet<HalfEdge>) {
        let parts: Vec<CellSet> = self.facets.iter().map(|f| f.cells.clone()).collect();
        let sig = ConsistentSignature { members: self.facets.iter().map(|f| f.signature.clone()).collect() };
        sig.oriented(&parts)
    }

    /// `sum area * speed^2` over bounded facets.
    pub fn speed_energy(&self) -> Rational {
        self.facets.iter().filter(|f| f.bounded).map(|f| f.area() * &f.speed * &f.speed).sum()
    }
}

#[derive(Clone, Debug)]
pub struct FlowTimeline {
    pub frame: Frame,
    pub u0: PcrFunction,
    /// Decomposition of the initial datum.
    pub initial: Snapshot,
    /// Merging times `t_1 < t_2 < ...` with the decomposition right after each.
    pub events: Vec<Snapshot>,
    /// The initial decomposition labels an edge the datum itself does not.
    pub initial_breaking: bool,
    /// Time at which the solution becomes constant, if reached.
    pub extinction: Option<Rational>,
    /// Requested horizon.
    pub t_end: Option<Rational>,
}

impl FlowTimeline {
    pub fn mode(&self) -> Mode {
        self.frame.mode()
    }

    pub fn snapshots(&self) -> impl Iterator<Item = &Snapshot> {
        std::iter::once(&self.initial).chain(&self.events)
    }

    pub fn snapshot_at(&self, t: &Rational) -> &Snapshot {
        self.snapshots().take_while(|s| s.t <= *t).last().unwrap_or(&self.initial)
    }
}

fn is_terminal(frame: &Frame, w: &PcrFunction) -> bool {
    match frame.mode() {
        Mode::Bounded => w.is_constant(),
        Mode::Plane => w.values().iter().all(Zero::is_zero),
    }
}

fn not_contained(a: &BTreeSet<HalfEdge>, b: &BTreeSet<HalfEdge>) -> bool {
    !a.is_subset(b)
}

/// Evolves `u0` up to `t_end` (`None` runs to extinction).
pub fn flow_evolve(u0: &PcrFunction, mode: Mode, t_end: Option<&Rational>) -> Result<FlowTimeline> {
    if mode == Mode::Plane && u0.has_negative() {
        return Err(Error::invalid("plane mode needs nonnegative data"));
    }
    if t_end.is_some_and(|t| t.is_negative()) {
        return Err(Error::invalid("t_end must be nonnegative"));
    }
    let frame = Frame::new(u0.grid(), mode);
    let mut w = frame.embed(u0);
    let mut t = Rational::zero();
    let facets = decompose(&frame, &w, &t)?;
    let initial = Snapshot { t: t.clone(), facets, merging: false, breaking: false };
    let (ip, im) = initial.oriented_signature();
    let induced = induced_signature(&w, frame.outside_value().as_ref());
    let levels: Vec<CellSet> = level_partition(&w).into_iter().map(|p| p.0).collect();
    let (dp, dm) = induced.oriented(&levels);
    let initial_breaking = not_contained(&ip, &dp) || not_contained(&im, &dm);
    let mut events: Vec<Snapshot> = Vec::new();
    let mut extinction = None;
    let cap = 64 * frame.work().cell_count() + 64;
    for _ in 0..cap {
        if is_terminal(&frame, &w) {
            extinction = Some(t.clone());
            break;
        }
        let last = events.last().unwrap_or(&initial);
        let Some((t_next, _pairs)) = next_merging_time(&last.facets, &t) else {
            return Err(Error::internal("non-constant state without a future merge"));
        };
        if t_end.is_some_and(|te| t_next > *te) {
            break;
        }
        let mut vals = vec![Rational::zero(); frame.work().cell_count()];
        for f in &last.facets {
            let v = f.value_at(&t_next);
            for c in f.cells.cells() {
                vals[c] = v.clone();
            }
        }
        w = PcrFunction::new(frame.work().clone(), vals)?;
        let facets = decompose(&frame, &w, &t_next)?;
        let mut snap = Snapshot { t: t_next.clone(), facets, merging: true, breaking: false };
        let (pp, pm) = last.oriented_signature();
        let (np, nm) = snap.oriented_signature();
        snap.breaking = not_contained(&np, &pp) || not_contained(&nm, &pm);
        if snap.speed_energy() >= last.speed_energy() {
            return Err(Error::internal("sum of area * speed^2 failed to drop at an event"));
        }
        t = t_next;
        events.push(snap);
    }
    if extinction.is_none() && t_end.is_none() {
        return Err(Error::internal("event cap reached before extinction"));
    }
    Ok(FlowTimeline {
        frame,
        u0: u0.clone(),
        initial,
        events,
        initial_breaking,
        extinction,
        t_end: t_end.cloned(),
    })
}

/// Exact state at time `t` on the input grid.
pub fn solution_at(tl: &FlowTimeline, t: &Rational) -> Result<PcrFunction> {
    if t.is_negative() {
        return Err(Error::invalid("time must be nonnegative"));
    }
    if tl.extinction.is_none() && tl.t_end.as_ref().is_some_and(|te| t > te) {
        return Err(Error::invalid("time beyond the computed horizon"));
    }
    let snap = tl.snapshot_at(t);
    let mut vals = vec![Rational::zero(); tl.frame.work().cell_count()];
    for f in &snap.facets {
        let v = f.value_at(t);
        for c in f.cells.cells() {
            vals[c] = v.clone();
        }
    }
    Ok(tl.frame.crop(&PcrFunction::new(tl.frame.work().clone(), vals)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EventFlags {
    pub merging: bool,
    pub breaking: bool,
}

/// Flags for `t_1, t_2, ...`. An event breaks when its plus or minus half-edge
/// set is not contained in the previous one, i.e. the jump set grows.
pub fn classify_events(tl: &FlowTimeline) -> Vec<EventFlags> {
    let mut prev = tl.initial.oriented_signature();
    tl.events
        .iter()
        .map(|s| {
            let cur = s.oriented_signature();
            let breaking = not_contained(&cur.0, &prev.0) || not_contained(&cur.1, &prev.1);
            prev = cur;
            EventFlags { merging: true, breaking }
        })
        .collect()
}

/// First breaking time, else the extinction time (or the horizon if the flow
/// was cut short). Up to this time the flow at `t = lambda` is the minimiser.
pub fn rof_equivalence_window(tl: &FlowTimeline) -> Rational {
    let flags = classify_events(tl);
    if let Some(k) = flags.iter().position(|f| f.breaking) {
        return tl.events[k].t.clone();
    }
    tl.extinction.clone().or_else(|| tl.t_end.clone()).unwrap_or_else(Rational::zero)
}

/// Upper bound on the extinction time. Bounded: `|Omega| / min P1(F, Omega) *
/// max |u0 - mean|`. Plane: `|R0| / P1(R0) * max u0` with `R0` the support box.
pub fn extinction_bound(u0: &PcrFunction, mode: Mode) -> Result<Rational> {
    match mode {
        Mode::Bounded => {
            let mean = u0.mean();
            let dev = u0.values().iter().map(|v| (v - &mean).abs()).max().expect("cells");
            if dev.is_zero() {
                return Ok(Rational::zero());
            }
            let omega = CellSet::full(u0.grid());
            let p = crate::energy::min_relative_perimeter(&omega)?;
            Ok(u0.grid().total_area() / p * dev)
        }
        Mode::Plane => {
            if u0.has_negative() {
                return Err(Error::invalid("plane mode needs nonnegative data"));
            }
            let Some(r) = u0.support_rect() else {
                return Ok(Rational::zero());
            };
            let w = &r.x1 - &r.x0;
            let h = &r.y1 - &r.y0;
            let per = (&w + &h) * Rational::from_integer(2.into());
            Ok(w * h / per * u0.max())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geometry::Rect;
    use crate::rational::{int, q};

    #[test]
    fn square_decomposition() {
        let u0 = fixtures::square(3);
        let d = facet_decomposition(&u0, Mode::Plane).unwrap();
        assert_eq!(d.speed_at(0), &q(-4, 3));
        assert_eq!(d.facets.len(), 2);
        assert!(d.facets.iter().any(|f| !f.bounded && f.speed.is_zero()));
    }

    #[test]
    fn nonequiv_initial_speeds() {
        let u0 = fixtures::nonequiv();
        let d = facet_decomposition(&u0, Mode::Plane).unwrap();
        let g = u0.grid();
        assert_eq!(d.speed_at(g.cell(4, 2)), &int(-4));
        assert_eq!(d.speed_at(g.cell(2, 2)), &q(-4, 9));
        assert_eq!(d.speed_at(g.cell(0, 0)), &int(0));
    }

    #[test]
    fn merged_cross_breaks() {
        let u0 = fixtures::cross();
        let d = facet_decomposition(&u0, Mode::Plane).unwrap();
        let g = u0.grid();
        assert_eq!(d.speed_at(g.cell(2, 2)), &q(-4, 3));
        for c in [g.cell(4, 2), g.cell(0, 2), g.cell(2, 4), g.cell(2, 0)] {
            assert_eq!(d.speed_at(c), &int(-2));
            assert!(!d.facet_of(c).signature.minus.is_empty());
        }
    }

    #[test]
    fn parallel_facets_never_meet() {
        let u0 = fixtures::two_cells(int(0), int(1));
        let mut d = facet_decomposition(&u0, Mode::Bounded).unwrap();
        for f in &mut d.facets {
            f.speed = int(1);
        }
        assert!(next_merging_time(&d.facets, &int(0)).is_none());
    }

    #[test]
    fn nonequiv_first_event() {
        let u0 = fixtures::nonequiv();
        let tl = flow_evolve(&u0, Mode::Plane, None).unwrap();
        let e = &tl.events[0];
        assert_eq!(e.t, q(9, 64));
        assert!(e.merging && e.breaking);
        let u = solution_at(&tl, &q(9, 64)).unwrap();
        let g = u0.grid();
        assert_eq!(u.value(g.cell(2, 2)), &q(39, 16));
        assert_eq!(u.value(g.cell(4, 2)), &q(39, 16));
        assert_eq!(rof_equivalence_window(&tl), q(9, 64));
    }

    #[test]
    fn square_extinction() {
        let tl = flow_evolve(&fixtures::square(3), Mode::Plane, None).unwrap();
        assert_eq!(tl.extinction, Some(q(3, 4)));
        assert_eq!(rof_equivalence_window(&tl), q(3, 4));
        assert_eq!(extinction_bound(&fixtures::square(2), Mode::Plane).unwrap(), q(1, 2));
    }

    #[test]
    fn constant_bounded_has_no_events() {
        let g = fixtures::nonequiv().grid().clone();
        let u0 = PcrFunction::constant(g, int(2));
        let tl = flow_evolve(&u0, Mode::Bounded, None).unwrap();
        assert!(tl.events.is_empty());
        assert_eq!(tl.extinction, Some(int(0)));
        assert_eq!(rof_equivalence_window(&tl), int(0));
        assert_eq!(extinction_bound(&u0, Mode::Bounded).unwrap(), int(0));
        assert!(classify_events(&tl).is_empty());
    }

    #[test]
    fn cross_breaks_at_start() {
        let tl = flow_evolve(&fixtures::cross(), Mode::Plane, None).unwrap();
        assert!(tl.initial_breaking);
        let times: Vec<_> = tl.events.iter().map(|e| e.t.clone()).collect();
        assert_eq!(times, vec![q(1, 2), q(3, 4)]);
        assert!(classify_events(&tl).iter().all(|f| f.merging && !f.breaking));
        assert_eq!(rof_equivalence_window(&tl), q(3, 4));
    }

    #[test]
    fn separate_squares_merge_without_breaking() {
        let g = fixtures::nonequiv().grid().clone();
        let pieces = [
            (Rect::new(q(-5, 2), q(-3, 2), q(-5, 2), q(-3, 2)), int(1)),
            (Rect::new(q(3, 2), q(5, 2), q(3, 2), q(5, 2)), int(2)),
        ];
        let u0 = PcrFunction::from_rects(g, &pieces);
        let tl = flow_evolve(&u0, Mode::Plane, None).unwrap();
        assert!(!tl.initial_breaking);
        assert_eq!(tl.events.len(), 2);
        assert!(classify_events(&tl).iter().all(|f| f.merging && !f.breaking));
        assert_eq!(tl.extinction, Some(q(1, 2)));
    }

    #[test]
    fn cross_bound() {
        assert_eq!(extinction_bound(&fixtures::cross(), Mode::Plane).unwrap(), q(5, 4));
    }
}
