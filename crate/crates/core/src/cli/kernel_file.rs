// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Kernel file: a line-oriented text serialization of a [`KernelSet`].
//!
//! ```text
//! format_version = 1
//! flavor = smatpi
//! splitting = sym_env
//! convention = terminal_times_i0
//! n = 2
//! dt = 1e-1
//! r_max = 6
//! meta.bath.alpha = 0.1
//! [midpoint]
//! 1,0,0,9.97e-1,-1.2e-3
//! ...
//! ```
//!
//! Numbers are the shortest decimal that parses back to the same double, so
//! `load(save(x)) == x` bit for bit. Sections hold `k,row,col,re,im` lines in
//! `k`, then row, then column order; `k` runs `1..=r_max` except in `[aux0]`
//! and `[dressing]`, where it is `0`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::Splitting;
use crate::error::{Error, Result};
use crate::kernels::{AuxZeroConvention, Flavor, KernelSet};
use crate::liouville::LiouvilleMatrix;

pub const FORMAT_VERSION: u32 = 1;

const SECTIONS: [&str; 6] = ["midpoint", "termination", "origin", "boundary", "aux0", "dressing"];

/// A kernel set plus free-form `meta.*` header entries.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelFile {
    pub set: KernelSet,
    pub metadata: BTreeMap<String, String>,
}

impl KernelFile {
    pub fn new(set: KernelSet) -> Self {
        Self { set, metadata: BTreeMap::new() }
    }

    fn section(&self, name: &str) -> Option<Vec<&LiouvilleMatrix>> {
        let s = &self.set;
        match name {
            "midpoint" => Some(s.midpoint.iter().collect()),
            "termination" => s.termination.as_ref().map(|v| v.iter().collect()),
            "origin" => s.origin.as_ref().map(|v| v.iter().collect()),
            "boundary" => s.boundary.as_ref().map(|v| v.iter().collect()),
            "aux0" => s.aux0.as_ref().map(|m| vec![m]),
            "dressing" => s.dressing.as_ref().map(|m| vec![m]),
            _ => None,
        }
    }

    pub fn to_text(&self) -> String {
        let s = &self.set;
        let mut out = String::new();
        let _ = writeln!(out, "format_version = {FORMAT_VERSION}");
        let _ = writeln!(out, "flavor = {}", s.flavor);
        let _ = writeln!(out, "splitting = {}", s.splitting);
        let _ = writeln!(out, "convention = {}", s.convention);
        let _ = writeln!(out, "n = {}", s.n());
        let _ = writeln!(out, "dt = {:e}", s.dt);
        let _ = writeln!(out, "r_max = {}", s.r_max);
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "meta.{k} = {v}");
        }
        for name in SECTIONS {
            let Some(mats) = self.section(name) else { continue };
            let _ = writeln!(out, "[{name}]");
            let first_k = if matches!(name, "aux0" | "dressing") { 0 } else { 1 };
            for (i, m) in mats.iter().enumerate() {
                let data = m.matrix();
                for row in 0..data.nrows() {
                    for col in 0..data.ncols() {
                        let z = data[(row, col)];
                        let _ = writeln!(out, "{},{row},{col},{:e},{:e}", first_k + i, z.re, z.im);
                    }
                }
            }
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let bad = |line: usize, msg: &str| Error::Parse { line, msg: msg.to_string() };
        let end = text.lines().count() + 1;

        let mut header: BTreeMap<String, String> = BTreeMap::new();
        let mut idx = 0;
        while idx < lines.len() && !lines[idx].1.starts_with('[') {
            let (no, l) = lines[idx];
            let (k, v) = l.split_once('=').ok_or_else(|| bad(no, "expected `key = value`"))?;
            let (k, v) = (k.trim(), v.trim());
            if idx == 0 {
                if k != "format_version" {
                    return Err(bad(no, "file must start with format_version"));
                }
                let version: u32 = v.parse().map_err(|_| bad(no, "format_version is not an integer"))?;
                if version != FORMAT_VERSION {
                    return Err(Error::Version(version));
                }
            }
            if header.insert(k.to_string(), v.to_string()).is_some() {
                return Err(bad(no, "repeated header key"));
            }
            idx += 1;
        }
        if lines.is_empty() {
            return Err(bad(1, "empty file"));
        }
        let field = |key: &str| header.get(key).ok_or_else(|| bad(end, &format!("missing header `{key}`")));
        let flavor: Flavor = field("flavor")?.parse().map_err(|_| bad(end, "bad flavor"))?;
        let splitting: Splitting = field("splitting")?.parse().map_err(|_| bad(end, "bad splitting"))?;
        let convention: AuxZeroConvention = field("convention")?.parse().map_err(|_| bad(end, "bad convention"))?;
        let n: usize = field("n")?.parse().map_err(|_| bad(end, "bad n"))?;
        let dt: f64 = field("dt")?.parse().map_err(|_| bad(end, "bad dt"))?;
        let r_max: usize = field("r_max")?.parse().map_err(|_| bad(end, "bad r_max"))?;
        if n < 2 || r_max == 0 {
            return Err(bad(end, "n must be at least 2 and r_max at least 1"));
        }
        let metadata = header
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("meta.").map(|k| (k.to_string(), v.clone())))
            .collect();

        let dim = n * n;
        let mut sections: BTreeMap<String, Vec<LiouvilleMatrix>> = BTreeMap::new();
        while idx < lines.len() {
            let (no, l) = lines[idx];
            let name = l
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .filter(|s| SECTIONS.contains(s))
                .ok_or_else(|| bad(no, "expected a section header"))?;
            if sections.contains_key(name) {
                return Err(bad(no, "repeated section"));
            }
            idx += 1;
            let (first_k, count) = if matches!(name, "aux0" | "dressing") { (0, 1) } else { (1, r_max) };
            let mut mats = Vec::with_capacity(count);
            for k in first_k..first_k + count {
                let mut data = DMatrix::zeros(dim, dim);
                for row in 0..dim {
                    for col in 0..dim {
                        let Some(&(no, l)) = lines.get(idx) else {
                            return Err(bad(end, &format!("unexpected end of file in [{name}]")));
                        };
                        let parts: Vec<&str> = l.split(',').collect();
                        if parts.len() != 5 {
                            return Err(bad(no, "expected `k,row,col,re,im`"));
                        }
                        let want = [k, row, col];
                        for (p, w) in parts[..3].iter().zip(want) {
                            if p.trim().parse::<usize>().ok() != Some(w) {
                                return Err(bad(no, &format!("expected entry {k},{row},{col}")));
                            }
                        }
                        let re: f64 = parts[3].trim().parse().map_err(|_| bad(no, "bad real part"))?;
                        let im: f64 = parts[4].trim().parse().map_err(|_| bad(no, "bad imaginary part"))?;
                        data[(row, col)] = Complex64::new(re, im);
                        idx += 1;
                    }
                }
                mats.push(LiouvilleMatrix::from_matrix(n, data)?);
            }
            sections.insert(name.to_string(), mats);
        }

        let midpoint = sections.remove("midpoint").ok_or_else(|| bad(end, "missing [midpoint]"))?;
        let single = |v: Option<Vec<LiouvilleMatrix>>| v.and_then(|mut v| v.pop());
        let set = KernelSet {
            splitting,
            flavor,
            dt,
            r_max,
            convention,
            midpoint,
            termination: sections.remove("termination"),
            origin: sections.remove("origin"),
            boundary: sections.remove("boundary"),
            aux0: single(sections.remove("aux0")),
            dressing: single(sections.remove("dressing")),
        };
        set.validate().map_err(|e| bad(end, &e.to_string()))?;
        Ok(Self { set, metadata })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> KernelFile {
        let m = |seed: f64| {
            LiouvilleMatrix::from_fn(2, |r, c| {
                let x = (r.flat(2) * 4 + c.flat(2)) as f64;
                Complex64::new((x + seed).sin() / 3.0, -(x * seed).cos() * 1e-17)
            })
        };
        let set = KernelSet {
            splitting: Splitting::SymEnv,
            flavor: Flavor::Smatpi,
            dt: 0.1,
            r_max: 2,
            convention: AuxZeroConvention::TerminalTimesI0,
            midpoint: vec![m(1.0), m(2.0)],
            termination: Some(vec![m(3.0), m(4.0)]),
            origin: None,
            boundary: Some(vec![m(5.0), m(-0.0)]),
            aux0: Some(m(7.0)),
            dressing: None,
        };
        let mut f = KernelFile::new(set);
        f.metadata.insert("bath.alpha".into(), "0.1".into());
        f
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let f = sample();
        let back = KernelFile::parse(&f.to_text()).unwrap();
        assert_eq!(back, f);
        for (a, b) in f.set.midpoint.iter().zip(&back.set.midpoint) {
            for (x, y) in a.matrix().iter().zip(b.matrix().iter()) {
                assert_eq!((x.re.to_bits(), x.im.to_bits()), (y.re.to_bits(), y.im.to_bits()));
            }
        }
        assert_eq!(back.to_text(), f.to_text());
    }

    #[test]
    fn version_mismatch() {
        let text = sample().to_text().replacen("format_version = 1", "format_version = 999", 1);
        assert!(matches!(KernelFile::parse(&text), Err(Error::Version(999))));
    }

    #[test]
    fn truncation_names_a_line() {
        let text = sample().to_text();
        let lines: Vec<&str> = text.lines().collect();
        // Cut in the middle of an entry line.
        let cut = lines[..20].join("\n") + "\n" + &lines[20][..5];
        match KernelFile::parse(&cut) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 21),
            other => panic!("{other:?}"),
        }
        let short = lines[..20].join("\n");
        assert!(matches!(KernelFile::parse(&short), Err(Error::Parse { line: 21, .. })));
    }

    #[test]
    fn malformed_entries() {
        let text = sample().to_text().replacen("1,0,1,", "1,0,2,", 1);
        assert!(matches!(KernelFile::parse(&text), Err(Error::Parse { .. })));
        assert!(matches!(KernelFile::parse(""), Err(Error::Parse { line: 1, .. })));
    }
}
