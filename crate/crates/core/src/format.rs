//! Line-oriented text formats for states and spatial matrices.
//!
//! State files:
//!
//! ```text
//! # comment
//! header n=2 d=2 spin=2
//! mode 0 n=1 l=0 ml=0
//! spinlabel 0 ms=1/2
//! amp 0 3 7.0710678118654757e-1 0
//! ```
//!
//! Matrix files use `header d=<int> [spin=<int>]` and `elem <x> <y> <re> <im>`
//! records, with the same optional label records. Unlisted amplitudes are
//! zero. Floats are written with 17 significant digits so that reading a
//! written file reproduces every amplitude bit for bit.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::state::{BasisSpec, ModeLabel, NFermionTensor, SpatialMatrix, SpinLabel};
use crate::{Error, Result};

/// A spatial matrix together with the basis description it was read with.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub matrix: SpatialMatrix,
    pub spec: BasisSpec,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn parse_int(tok: &str, line: usize, what: &str) -> Result<i32> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

fn parse_real(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite number {tok:?}")));
    }
    Ok(v)
}

/// `key=value` tokens into a map, rejecting unknown or repeated keys.
fn key_values<'a>(toks: &[&'a str], allowed: &[&str], line: usize) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut out = BTreeMap::new();
    for tok in toks {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| parse_err(line, format!("expected key=value, got {tok:?}")))?;
        if !allowed.contains(&k) {
            return Err(parse_err(line, format!("unknown key {k:?}")));
        }
        if out.insert(k, v).is_some() {
            return Err(Error::Duplicate { line, msg: format!("key {k:?} repeated") });
        }
    }
    Ok(out)
}

fn parse_spin_label(v: &str, line: usize) -> Result<SpinLabel> {
    let (num, den) = match v.split_once('/') {
        Some((p, q)) => (parse_int(p, line, "m_s numerator")?, parse_int(q, line, "m_s denominator")?),
        None => (parse_int(v, line, "m_s")?, 1),
    };
    SpinLabel::new(num, den).map_err(|_| parse_err(line, format!("invalid m_s {v:?}")))
}

/// Label records shared by both formats.
#[derive(Default)]
struct Labels {
    modes: BTreeMap<usize, ModeLabel>,
    spins: BTreeMap<usize, SpinLabel>,
}

impl Labels {
    fn record(&mut self, keyword: &str, toks: &[&str], line: usize, d: usize, spin: usize) -> Result<()> {
        let Some((idx, rest)) = toks.split_first() else {
            return Err(parse_err(line, format!("{keyword} record needs an index")));
        };
        let idx = parse_usize(idx, line, "index")?;
        match keyword {
            "mode" => {
                if idx >= d {
                    return Err(Error::Index(format!("line {line}: mode {idx} outside [0, {d})")));
                }
                let kv = key_values(rest, &["n", "l", "ml"], line)?;
                let get = |k: &str| -> Result<i32> {
                    let v = kv.get(k).ok_or_else(|| parse_err(line, format!("mode record missing {k}=")))?;
                    parse_int(v, line, k)
                };
                let label = ModeLabel::new(get("n")?, get("l")?, get("ml")?);
                if self.modes.insert(idx, label).is_some() {
                    return Err(Error::Duplicate { line, msg: format!("mode {idx} labeled twice") });
                }
            }
            _ => {
                if idx >= spin {
                    return Err(Error::Index(format!("line {line}: spin {idx} outside [0, {spin})")));
                }
                let kv = key_values(rest, &["ms"], line)?;
                let v = kv.get("ms").ok_or_else(|| parse_err(line, "spinlabel record missing ms="))?;
                if self.spins.insert(idx, parse_spin_label(v, line)?).is_some() {
                    return Err(Error::Duplicate { line, msg: format!("spin {idx} labeled twice") });
                }
            }
        }
        Ok(())
    }

    fn apply(self, mut spec: BasisSpec) -> Result<BasisSpec> {
        if !self.modes.is_empty() {
            spec = spec.with_mode_labels(self.modes.into_values().collect())?;
        }
        if !self.spins.is_empty() {
            spec = spec.with_spin_labels(self.spins.into_values().collect())?;
        }
        Ok(spec)
    }
}

/// Meaningful tokens of each line with its 1-based number.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

struct Header {
    n: usize,
    d: usize,
    spin: usize,
}

fn parse_header(toks: &[&str], line: usize, need_n: bool) -> Result<Header> {
    let allowed: &[&str] = if need_n { &["n", "d", "spin"] } else { &["d", "spin"] };
    let kv = key_values(toks, allowed, line)?;
    let field = |k: &str| -> Result<Option<usize>> {
        kv.get(k).map(|v| parse_usize(v, line, k)).transpose()
    };
    let n = if need_n {
        field("n")?.ok_or_else(|| parse_err(line, "header missing n="))?
    } else {
        2
    };
    let d = field("d")?.ok_or_else(|| parse_err(line, "header missing d="))?;
    let spin = field("spin")?.unwrap_or(2);
    if n == 0 || d == 0 || spin == 0 {
        return Err(parse_err(line, "header dimensions must be positive"));
    }
    Ok(Header { n, d, spin })
}

pub fn parse_state(text: &str) -> Result<NFermionTensor> {
    let mut header: Option<Header> = None;
    let mut labels = Labels::default();
    let mut amps: BTreeMap<usize, Complex64> = BTreeMap::new();
    let mut seen = HashSet::new();
    for (line, toks) in records(text) {
        let (keyword, rest) = (toks[0], &toks[1..]);
        if keyword == "header" {
            if header.is_some() {
                return Err(Error::Duplicate { line, msg: "second header".into() });
            }
            header = Some(parse_header(rest, line, true)?);
            continue;
        }
        let h = header
            .as_ref()
            .ok_or_else(|| parse_err(line, format!("{keyword} record before header")))?;
        match keyword {
            "amp" => {
                if rest.len() != h.n + 2 {
                    return Err(parse_err(
                        line,
                        format!("amp record needs {} indices and re im, got {} fields", h.n, rest.len()),
                    ));
                }
                let dim = h.d * h.spin;
                let mut flat = 0usize;
                for tok in &rest[..h.n] {
                    let k = parse_usize(tok, line, "index")?;
                    if k >= dim {
                        return Err(Error::Index(format!(
                            "line {line}: composite index {k} outside [0, {dim})"
                        )));
                    }
                    flat = flat * dim + k;
                }
                let re = parse_real(rest[h.n], line)?;
                let im = parse_real(rest[h.n + 1], line)?;
                if !seen.insert(flat) {
                    return Err(Error::Duplicate {
                        line,
                        msg: format!("amplitude {:?} listed twice", &rest[..h.n]),
                    });
                }
                amps.insert(flat, Complex64::new(re, im));
            }
            "mode" | "spinlabel" => labels.record(keyword, rest, line, h.d, h.spin)?,
            other => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
    }
    let h = header.ok_or_else(|| parse_err(0, "missing header"))?;
    if amps.values().all(|a| a.norm() == 0.0) {
        return Err(Error::ZeroState { norm: 0.0, tol: 0.0 });
    }
    let spec = labels.apply(BasisSpec::new(h.d, h.spin)?)?;
    let mut t = NFermionTensor::zeros(h.n, spec)?;
    let mut dense = t.amplitudes().to_vec();
    for (flat, a) in amps {
        dense[flat] = a;
    }
    t = NFermionTensor::from_amplitudes(h.n, t.spec().clone(), dense)?;
    Ok(t)
}

pub fn read_state(path: impl AsRef<Path>) -> Result<NFermionTensor> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Formats a float with 17 significant digits.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_labels(out: &mut String, spec: &BasisSpec) {
    if let Some(modes) = spec.mode_labels() {
        for (x, m) in modes.iter().enumerate() {
            let _ = writeln!(out, "mode {x} n={} l={} ml={}", m.n, m.l, m.ml);
        }
    }
    if let Some(spins) = spec.spin_labels() {
        for (s, l) in spins.iter().enumerate() {
            if l.den() == 1 {
                let _ = writeln!(out, "spinlabel {s} ms={}", l.num());
            } else {
                let _ = writeln!(out, "spinlabel {s} ms={}/{}", l.num(), l.den());
            }
        }
    }
}

fn is_stored(a: &Complex64) -> bool {
    a.re.to_bits() != 0 || a.im.to_bits() != 0
}

/// Writes every amplitude whose bits differ from `+0.0 + 0.0i`.
pub fn write_state(t: &NFermionTensor) -> String {
    let spec = t.spec();
    let mut out = format!("header n={} d={} spin={}\n", t.particles(), spec.modes(), spec.spin());
    write_labels(&mut out, spec);
    for (flat, a) in t.amplitudes().iter().enumerate() {
        if !is_stored(a) {
            continue;
        }
        out.push_str("amp");
        for k in t.unflatten(flat) {
            let _ = write!(out, " {k}");
        }
        let _ = writeln!(out, " {} {}", fmt_real(a.re), fmt_real(a.im));
    }
    out
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile> {
    let mut header: Option<Header> = None;
    let mut labels = Labels::default();
    let mut elems: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
    for (line, toks) in records(text) {
        let (keyword, rest) = (toks[0], &toks[1..]);
        if keyword == "header" {
            if header.is_some() {
                return Err(Error::Duplicate { line, msg: "second header".into() });
            }
            header = Some(parse_header(rest, line, false)?);
            continue;
        }
        let h = header
            .as_ref()
            .ok_or_else(|| parse_err(line, format!("{keyword} record before header")))?;
        match keyword {
            "elem" => {
                if rest.len() != 4 {
                    return Err(parse_err(line, format!("elem record needs x y re im, got {} fields", rest.len())));
                }
                let x = parse_usize(rest[0], line, "row")?;
                let y = parse_usize(rest[1], line, "column")?;
                if x >= h.d || y >= h.d {
                    return Err(Error::Index(format!("line {line}: element ({x},{y}) outside {0}x{0}", h.d)));
                }
                let v = Complex64::new(parse_real(rest[2], line)?, parse_real(rest[3], line)?);
                if elems.insert((x, y), v).is_some() {
                    return Err(Error::Duplicate { line, msg: format!("element ({x},{y}) listed twice") });
                }
            }
            "mode" | "spinlabel" => labels.record(keyword, rest, line, h.d, h.spin)?,
            other => return Err(parse_err(line, format!("unknown record {other:?}"))),
        }
    }
    let h = header.ok_or_else(|| parse_err(0, "missing header"))?;
    if elems.values().all(|a| a.norm() == 0.0) {
        return Err(Error::ZeroState { norm: 0.0, tol: 0.0 });
    }
    let matrix = SpatialMatrix::from_fn(h.d, |x, y| elems.get(&(x, y)).copied().unwrap_or_default())?;
    let spec = labels.apply(BasisSpec::new(h.d, h.spin)?)?;
    Ok(MatrixFile { matrix, spec })
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<MatrixFile> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(file: &MatrixFile) -> String {
    let d = file.matrix.modes();
    let mut out = format!("header d={d} spin={}\n", file.spec.spin());
    write_labels(&mut out, &file.spec);
    for x in 0..d {
        for y in 0..d {
            let a = file.matrix.get(x, y);
            if is_stored(&a) {
                let _ = writeln!(out, "elem {x} {y} {} {}", fmt_real(a.re), fmt_real(a.im));
            }
        }
    }
    out
}
