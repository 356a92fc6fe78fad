//! Text formats.
//!
//! * Family file: a `dim n` header, then one member per line, either
//!   comma-separated integers or a ±1 binary string (`0` is -1, `1` is +1).
//! * Point dump: one point per line, comma-separated integers.
//! * Sign table: `+ <binary>` / `- <binary>` lines.
//!
//! Blank lines and lines starting with `#` are ignored by every reader.

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, PointSet, VectorFamily};
use crate::sign::Sign;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_ints(line: usize, s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<i64>().map_err(|e| Error::Parse { line, msg: format!("{t:?}: {e}") })
        })
        .collect()
}

fn parse_member(line: usize, s: &str, dim: usize) -> Result<LatticeVector> {
    let is_binary = dim > 1 && s.len() == dim && s.chars().all(|c| c == '0' || c == '1');
    let v = if is_binary {
        LatticeVector::from_binary(s).expect("checked binary")
    } else {
        LatticeVector::new(parse_ints(line, s)?)
    };
    if v.dim() != dim {
        return Err(Error::Parse { line, msg: format!("expected {dim} coordinates, got {}", v.dim()) });
    }
    Ok(v)
}

pub fn parse_family(text: &str, label: &str) -> Result<VectorFamily> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty family file".into() })?;
    let dim = header
        .strip_prefix("dim")
        .and_then(|r| r.trim().parse::<usize>().ok())
        .ok_or_else(|| Error::Parse { line: hl, msg: format!("expected `dim n`, got {header:?}") })?;
    let members = lines.map(|(ln, l)| parse_member(ln, l, dim)).collect::<Result<Vec<_>>>()?;
    VectorFamily::new(dim, members, label)
}

pub fn write_family(f: &VectorFamily) -> String {
    let mut out = format!("dim {}\n", f.dim());
    for v in f.members() {
        out.push_str(&join(v));
        out.push('\n');
    }
    out
}

fn join(v: &LatticeVector) -> String {
    v.coords().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_point_set(text: &str, dim: Option<usize>) -> Result<PointSet> {
    let mut set: Option<PointSet> = dim.map(PointSet::new);
    for (ln, l) in content_lines(text) {
        let p = LatticeVector::new(parse_ints(ln, l)?);
        let s = set.get_or_insert_with(|| PointSet::new(p.dim()));
        if p.dim() != s.dim() {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected {} coordinates, got {}", s.dim(), p.dim()),
            });
        }
        s.insert(p)?;
    }
    set.ok_or(Error::Parse { line: 1, msg: "empty point set without a known dimension".into() })
}

pub fn write_point_set(s: &PointSet) -> String {
    let mut out = String::new();
    for p in s.iter() {
        out.push_str(&join(p));
        out.push('\n');
    }
    out
}

/// A parsed sign table: rows in file order plus any `# key = value` notes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTable {
    pub rows: Vec<(Sign, LatticeVector)>,
    pub notes: Vec<(String, String)>,
}

impl SignTable {
    pub fn dim(&self) -> Option<usize> {
        self.rows.first().map(|(_, v)| v.dim())
    }

    pub fn signed_sum(&self) -> Option<LatticeVector> {
        let mut s = LatticeVector::zeros(self.dim()?);
        for (e, v) in &self.rows {
            s.add_assign_scaled(v, e.value());
        }
        Some(s)
    }

    pub fn note(&self, key: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_sign_table(text: &str) -> Result<SignTable> {
    let mut rows = Vec::new();
    let mut notes = Vec::new();
    let mut dim = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        if let Some(c) = l.strip_prefix('#') {
            if let Some((k, v)) = c.split_once('=') {
                notes.push((k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let (s, bits) = l
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::Parse { line, msg: format!("expected `<sign> <binary>`, got {l:?}") })?;
        let sign = match s {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(Error::Parse { line, msg: format!("bad sign {s:?}") }),
        };
        let v = LatticeVector::from_binary(bits.trim())
            .ok_or_else(|| Error::Parse { line, msg: format!("bad binary string {bits:?}") })?;
        if *dim.get_or_insert(v.dim()) != v.dim() {
            return Err(Error::Parse { line, msg: "inconsistent row length".into() });
        }
        rows.push((sign, v));
    }
    Ok(SignTable { rows, notes })
}

pub fn write_sign_table(rows: &[(Sign, LatticeVector)]) -> String {
    let mut out = String::new();
    for (s, v) in rows {
        let bits = v.to_binary().expect("sign tables hold ±1 vectors");
        out.push_str(&format!("{s} {bits}\n"));
    }
    out
}
