//! PCR JSON, schema version 1.
//!
//! ```json
//! {"schema_version": 1, "mode": "plane",
//!  "xs": ["-1/2", "1/2"], "ys": ["0", "1"], "values": ["3/4"]}
//! ```
//!
//! Values are row-major (`j * nx + i`, rows bottom to top). Numbers are strings
//! holding `p/q`, integers or plain decimals; writing always emits `p/q`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::Mode;
use crate::geometry::{Grid, PcrFunction};
use crate::rational::{fmt_rational, parse_rational, Rational};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcrDocument {
    pub schema_version: u32,
    pub mode: Mode,
    pub xs: Vec<String>,
    pub ys: Vec<String>,
    pub values: Vec<String>,
}

impl PcrDocument {
    pub fn from_function(u: &PcrFunction, mode: Mode) -> Self {
        let g = u.grid();
        PcrDocument {
            schema_version: SCHEMA_VERSION,
            mode,
            xs: g.xs().iter().map(fmt_rational).collect(),
            ys: g.ys().iter().map(fmt_rational).collect(),
            values: u.values().iter().map(fmt_rational).collect(),
        }
    }

    pub fn to_function(&self) -> Result<PcrFunction> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::invalid(format!("unsupported schema version {}", self.schema_version)));
        }
        let parse = |v: &[String]| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<Rational>>>();
        let grid = Arc::new(Grid::new(parse(&self.xs)?, parse(&self.ys)?)?);
        let u = PcrFunction::new(grid, parse(&self.values)?)?;
        if self.mode == Mode::Plane && u.has_negative() {
            return Err(Error::invalid("plane mode needs nonnegative data"));
        }
        Ok(u)
    }

    /// Rewrites every number in canonical `p/q` form.
    pub fn canonical(&self) -> Result<Self> {
        Ok(PcrDocument::from_function(&self.to_function()?, self.mode))
    }
}

/// Parses and validates a document.
pub fn parse_pcr(text: &str) -> Result<(PcrFunction, Mode)> {
    let doc: PcrDocument = serde_json::from_str(text)?;
    Ok((doc.to_function()?, doc.mode))
}

pub fn write_pcr(u: &PcrFunction, mode: Mode) -> String {
    let mut s = serde_json::to_string_pretty(&PcrDocument::from_function(u, mode)).expect("plain strings");
    s.push('\n');
    s
}

pub fn read_pcr(path: &Path) -> Result<(PcrFunction, Mode)> {
    parse_pcr(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, q};

    #[test]
    fn one_cell() {
        let (u, mode) =
            parse_pcr(r#"{"schema_version":1,"mode":"bounded","xs":["0","1"],"ys":["0","0.5"],"values":["-3/4"]}"#)
                .unwrap();
        assert_eq!(mode, Mode::Bounded);
        assert_eq!(u.values(), &[q(-3, 4)]);
        assert_eq!(u.grid().ys()[1], q(1, 2));
    }

    #[test]
    fn nonequiv_round_trip() {
        let u = fixtures::nonequiv();
        let text = write_pcr(&u, Mode::Plane);
        let (back, mode) = parse_pcr(&text).unwrap();
        assert_eq!((back.clone(), mode), (u.clone(), Mode::Plane));
        assert_eq!(write_pcr(&back, mode), text);
        assert_eq!(back.grid().cell_count(), 25);
        let mut levels: Vec<Rational> = back.values().to_vec();
        levels.sort();
        levels.dedup();
        assert_eq!(levels, vec![int(0), q(5, 2), int(3)]);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            r#"{"schema_version":1,"mode":"bounded","xs":["0","1"],"ys":["0","1"],"values":["1","2"]}"#,
            r#"{"schema_version":1,"mode":"bounded","xs":["1","0"],"ys":["0","1"],"values":["1"]}"#,
            r#"{"schema_version":2,"mode":"bounded","xs":["0","1"],"ys":["0","1"],"values":["1"]}"#,
            r#"{"schema_version":1,"mode":"plane","xs":["0","1"],"ys":["0","1"],"values":["-1"]}"#,
            r#"{"schema_version":1,"mode":"bounded","xs":["0","1"],"ys":["0","1"],"values":["1e3"]}"#,
            r#"{"schema_version":1,"mode":"bounded","xs":["0","1"]"#,
        ];
        for b in bad {
            let e = parse_pcr(b).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{b}");
        }
    }
}
