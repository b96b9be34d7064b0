//! PGM rasters (P2 and P5).
//!
//! Pixel `(c, r)` with `r = 0` the top row becomes the unit cell
//! `[c, c+1] x [h-1-r, h-r]`, so pictures keep their orientation.

use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::geometry::{Grid, PcrFunction};
use crate::rational::{fmt_rational, int, to_f64, Rational};

struct Header {
    width: usize,
    height: usize,
    maxval: u32,
    binary: bool,
    offset: usize,
}

fn header(bytes: &[u8]) -> Result<Header> {
    let mut pos = 0;
    let mut tokens = Vec::new();
    while tokens.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        if start == pos {
            return Err(Error::invalid("truncated PGM header"));
        }
        tokens.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| Error::invalid("bad PGM header"))?);
    }
    let binary = match tokens[0] {
        "P5" => true,
        "P2" => false,
        m => return Err(Error::invalid(format!("unsupported magic number `{m}`"))),
    };
    let num = |s: &str| s.parse::<u32>().map_err(|_| Error::invalid(format!("bad PGM header field `{s}`")));
    let (width, height, maxval) = (num(tokens[1])? as usize, num(tokens[2])? as usize, num(tokens[3])?);
    if width == 0 || height == 0 || maxval == 0 || maxval > 65535 {
        return Err(Error::invalid("PGM dimensions or maxval out of range"));
    }
    // exactly one whitespace byte separates the header from binary samples
    Ok(Header { width, height, maxval, binary, offset: pos + 1 })
}

/// Parses a PGM image. With `levels = Some(k)` samples are quantised to `k`
/// uniform bins of `[0, maxval + 1)` and replaced by the bin midpoints.
pub fn parse_pgm(bytes: &[u8], levels: Option<u32>) -> Result<PcrFunction> {
    let h = header(bytes)?;
    let n = h.width * h.height;
    let samples: Vec<u32> = if h.binary {
        let wide = h.maxval > 255;
        let need = n * if wide { 2 } else { 1 };
        let data = bytes.get(h.offset..).unwrap_or(&[]);
        if data.len() < need {
            return Err(Error::invalid("truncated PGM payload"));
        }
        if wide {
            data[..need].chunks(2).map(|p| u32::from(p[0]) << 8 | u32::from(p[1])).collect()
        } else {
            data[..need].iter().map(|&b| u32::from(b)).collect()
        }
    } else {
        let text = std::str::from_utf8(&bytes[h.offset.min(bytes.len())..])
            .map_err(|_| Error::invalid("bad ASCII PGM payload"))?;
        let v: Vec<u32> = text
            .split_ascii_whitespace()
            .take(n)
            .map(|t| t.parse::<u32>().map_err(|_| Error::invalid(format!("bad PGM sample `{t}`"))))
            .collect::<Result<_>>()?;
        if v.len() < n {
            return Err(Error::invalid("truncated PGM payload"));
        }
        v
    };
    if samples.iter().any(|&s| s > h.maxval) {
        return Err(Error::invalid("PGM sample above maxval"));
    }
    let value = |s: u32| -> Result<Rational> {
        match levels {
            None => Ok(int(s.into())),
            Some(0) => Err(Error::invalid("levels must be positive")),
            Some(k) => {
                let range = u64::from(h.maxval) + 1;
                let bin = u64::from(s) * u64::from(k) / range;
                Ok(Rational::new((2 * bin + 1).into(), 2.into()) * int(range as i64) / int(k.into()))
            }
        }
    };
    let grid = Arc::new(Grid::new(
        (0..=h.width as i64).map(int).collect(),
        (0..=h.height as i64).map(int).collect(),
    )?);
    let mut vals = vec![Rational::zero(); n];
    for r in 0..h.height {
        for c in 0..h.width {
            vals[grid.cell(c, h.height - 1 - r)] = value(samples[r * h.width + c])?;
        }
    }
    PcrFunction::new(grid, vals)
}

pub fn import_pgm(path: &Path, levels: Option<u32>) -> Result<PcrFunction> {
    parse_pgm(&std::fs::read(path)?, levels)
}

/// 16-bit binary PGM with `scale` pixels per unit length. Gray is linear in the
/// value between the minimum (black) and maximum (white); both are recorded in
/// a header comment. Pixels sample the cell containing their centre.
pub fn render_pgm(u: &PcrFunction, scale: u32) -> Result<Vec<u8>> {
    if scale == 0 {
        return Err(Error::invalid("scale must be at least 1"));
    }
    let g = u.grid();
    let b = g.bounding_rect();
    let s = int(scale.into());
    let px = |len: Rational| -> Result<usize> {
        let v = (len * &s).ceil().to_integer();
        usize::try_from(v).map_err(|_| Error::invalid("raster too large"))
    };
    let (w, h) = (px(&b.x1 - &b.x0)?, px(&b.y1 - &b.y0)?);
    if w.saturating_mul(h) > 1 << 28 {
        return Err(Error::invalid("raster too large"));
    }
    let (lo, hi) = (u.min(), u.max());
    let span = to_f64(&(&hi - &lo));
    let gray: Vec<u16> = u
        .values()
        .iter()
        .map(|v| if span > 0.0 { (to_f64(&(v - &lo)) / span * 65535.0).round() as u16 } else { 0 })
        .collect();
    // pixel centre (k + 1/2) / scale from the box corner, located by binary search
    let locate = |lines: &[Rational], origin: &Rational, k: usize| -> usize {
        let x = origin + Rational::new((2 * k + 1).into(), (2 * scale).into());
        lines.partition_point(|l| *l <= x).clamp(1, lines.len() - 1) - 1
    };
    let cols: Vec<usize> = (0..w).map(|k| locate(g.xs(), &b.x0, k)).collect();
    let rows: Vec<usize> = (0..h).map(|k| locate(g.ys(), &b.y0, k)).collect();
    let mut out =
        format!("P5\n# min {} max {}\n{} {}\n65535\n", fmt_rational(&lo), fmt_rational(&hi), w, h).into_bytes();
    for r in 0..h {
        let j = rows[h - 1 - r];
        for &i in &cols {
            out.extend_from_slice(&gray[g.cell(i, j)].to_be_bytes());
        }
    }
    Ok(out)
}

pub fn write_pgm(u: &PcrFunction, path: &Path, scale: u32) -> Result<()> {
    std::fs::write(path, render_pgm(u, scale)?)?;
    Ok(())
}
