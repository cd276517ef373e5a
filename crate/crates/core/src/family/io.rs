//! Family file formats.
//!
//! Text form:
//!
//! ```text
//! FAMILY n=5 k=2
//! # comment
//! 1,2
//! 1,3
//! ```
//!
//! JSON form: `{"n": 5, "k": 2, "members": [[1,2],[1,3]]}` with an optional
//! `"ground"` list for families living on a proper subset of `[n]`.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::subset::KSubset;
use super::SetFamily;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FamilyDoc {
    pub n: u32,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground: Option<Vec<u32>>,
    pub members: Vec<Vec<u32>>,
}

impl From<&SetFamily> for FamilyDoc {
    fn from(f: &SetFamily) -> Self {
        FamilyDoc {
            n: f.n(),
            k: f.k(),
            ground: (!f.is_standard()).then(|| f.ground().elements()),
            members: f.iter().map(|a| a.elements()).collect(),
        }
    }
}

impl TryFrom<FamilyDoc> for SetFamily {
    type Error = Error;

    fn try_from(doc: FamilyDoc) -> Result<SetFamily> {
        let mut fam = match &doc.ground {
            Some(g) => SetFamily::empty_on(doc.n, doc.k, &KSubset::new(doc.n, g)?)?,
            None => SetFamily::empty(doc.n, doc.k)?,
        };
        for (i, m) in doc.members.iter().enumerate() {
            let a = KSubset::new(doc.n, m).map_err(|e| Error::parse(i + 1, e.to_string()))?;
            if !fam.insert(a).map_err(|e| Error::parse(i + 1, e.to_string()))? {
                return Err(Error::parse(i + 1, format!("duplicate member {a}")));
            }
        }
        Ok(fam)
    }
}

/// Canonical text rendering: header, then one line per member in lex order.
///
/// A non-standard ground set is recorded only as a comment, so parsing the
/// text back yields the same members on the full `[n]`.
pub fn to_text(f: &SetFamily) -> String {
    let mut out = format!("FAMILY n={} k={}\n", f.n(), f.k());
    if !f.is_standard() {
        let g: Vec<String> = f.ground().iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "# ground {}", g.join(","));
    }
    for a in f.iter() {
        let parts: Vec<String> = a.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", parts.join(","));
    }
    out
}

pub fn to_json(f: &SetFamily) -> String {
    serde_json::to_string(&FamilyDoc::from(f)).expect("family documents always serialise")
}

fn parse_header(line: &str, lineno: usize) -> Result<(u32, u32)> {
    let mut words = line.split_whitespace();
    if words.next() != Some("FAMILY") {
        return Err(Error::parse(lineno, "expected header 'FAMILY n=<n> k=<k>'"));
    }
    let mut n = None;
    let mut k = None;
    for w in words {
        let (key, val) = w
            .split_once('=')
            .ok_or_else(|| Error::parse(lineno, format!("malformed header field '{w}'")))?;
        let val: u32 = val
            .parse()
            .map_err(|_| Error::parse(lineno, format!("header value '{val}' is not an integer")))?;
        match key {
            "n" if n.is_none() => n = Some(val),
            "k" if k.is_none() => k = Some(val),
            _ => return Err(Error::parse(lineno, format!("unexpected header field '{key}'"))),
        }
    }
    match (n, k) {
        (Some(n), Some(k)) => Ok((n, k)),
        _ => Err(Error::parse(lineno, "header must give both n and k")),
    }
}

/// Parse the line-oriented text format.
pub fn parse_text(text: &str) -> Result<SetFamily> {
    let mut fam: Option<SetFamily> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(f) = fam.as_mut() else {
            let (n, k) = parse_header(line, lineno)?;
            fam = Some(SetFamily::empty(n, k).map_err(|e| Error::parse(lineno, e.to_string()))?);
            continue;
        };
        let mut elems = Vec::new();
        for tok in line.split(',') {
            let tok = tok.trim();
            let e: u32 = tok
                .parse()
                .map_err(|_| Error::parse(lineno, format!("'{tok}' is not a positive integer")))?;
            if let Some(&prev) = elems.last() {
                if e <= prev {
                    return Err(Error::parse(lineno, "elements must be strictly ascending"));
                }
            }
            elems.push(e);
        }
        let a = KSubset::new(f.n(), &elems).map_err(|e| Error::parse(lineno, e.to_string()))?;
        if !f.insert(a).map_err(|e| Error::parse(lineno, e.to_string()))? {
            return Err(Error::parse(lineno, format!("duplicate set {a}")));
        }
    }
    fam.ok_or_else(|| Error::parse(1, "missing FAMILY header"))
}

pub fn parse_json(text: &str) -> Result<SetFamily> {
    let doc: FamilyDoc = serde_json::from_str(text)
        .map_err(|e| Error::parse(e.line(), e.to_string()))?;
    SetFamily::try_from(doc)
}

/// Parse either format; JSON is recognised by a leading `{`.
pub fn parse(text: &str) -> Result<SetFamily> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}

pub fn read_file(path: &Path) -> Result<SetFamily> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(0, format!("cannot read {}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}
