//! Event log JSON, schema version 1.
//!
//! One record for the initial decomposition (`t = 0`) and one per event, each
//! listing every facet with its value at that time, its speed and the lengths
//! of its plus and minus boundary. Exact numbers are `p/q` strings; the `*_f64`
//! fields are conveniences and are never read back.

use serde::{Deserialize, Serialize};

use crate::flow::{classify_events, rof_equivalence_window, FacetState, FlowTimeline, Snapshot};
use crate::frame::Mode;
use crate::rational::{fmt_rational, to_f64, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    /// `[x0, x1, y0, y1]` of the facet's bounding box.
    pub bbox: [String; 4],
    pub cells: usize,
    pub bounded: bool,
    pub area: String,
    pub value: String,
    pub value_f64: f64,
    pub speed: String,
    pub plus_length: String,
    pub minus_length: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: String,
    pub t_f64: f64,
    pub merging: bool,
    pub breaking: bool,
    pub facet_count: usize,
    pub facets: Vec<FacetRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    pub schema_version: u32,
    pub mode: Mode,
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    /// The decomposition of the datum labels some edge the datum does not.
    pub initial_breaking: bool,
    pub initial: EventRecord,
    pub events: Vec<EventRecord>,
    pub extinction: Option<String>,
    pub t_end: Option<String>,
    /// Up to this time the flow also gives the ROF minimiser with `lambda = t`.
    pub rof_window: String,
}

fn facet(f: &FacetState, t: &Rational) -> FacetRecord {
    let b = f.cells.bbox().expect("facets are nonempty");
    let v = f.value_at(t);
    FacetRecord {
        bbox: [&b.x0, &b.x1, &b.y0, &b.y1].map(fmt_rational),
        cells: f.cells.len(),
        bounded: f.bounded,
        area: fmt_rational(&f.area()),
        value_f64: to_f64(&v),
        value: fmt_rational(&v),
        speed: fmt_rational(&f.speed),
        plus_length: fmt_rational(&f.plus_length()),
        minus_length: fmt_rational(&f.minus_length()),
    }
}

fn record(s: &Snapshot, merging: bool, breaking: bool) -> EventRecord {
    EventRecord {
        t: fmt_rational(&s.t),
        t_f64: to_f64(&s.t),
        merging,
        breaking,
        facet_count: s.facets.len(),
        facets: s.facets.iter().map(|f| facet(f, &s.t)).collect(),
    }
}

pub fn event_log(tl: &FlowTimeline) -> EventLog {
    let g = tl.frame.input();
    let flags = classify_events(tl);
    EventLog {
        schema_version: SCHEMA_VERSION,
        mode: tl.mode(),
        xs: g.xs().iter().map(fmt_rational).collect(),
        ys: g.ys().iter().map(fmt_rational).collect(),
        initial_breaking: tl.initial_breaking,
        initial: record(&tl.initial, false, tl.initial_breaking),
        events: tl.events.iter().zip(&flags).map(|(s, f)| record(s, f.merging, f.breaking)).collect(),
        extinction: tl.extinction.as_ref().map(fmt_rational),
        t_end: tl.t_end.as_ref().map(fmt_rational),
        rof_window: fmt_rational(&rof_equivalence_window(tl)),
    }
}

impl EventLog {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable");
        s.push('\n');
        s
    }
}
