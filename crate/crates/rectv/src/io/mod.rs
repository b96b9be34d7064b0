//! File formats: PCR JSON documents, PGM rasters and event logs.

pub mod events;
pub mod pcr_json;
pub mod pgm;

pub use events::{event_log, EventLog};
pub use pcr_json::{parse_pcr, read_pcr, write_pcr, PcrDocument};
pub use pgm::{import_pgm, parse_pgm, render_pgm, write_pgm};
