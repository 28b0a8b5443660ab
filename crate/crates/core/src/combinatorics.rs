// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Dyck paths, Catalan numbers and the symbolic inversion of the TTM
//! convolution.
//!
//! All counts are exact integers.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernels::TrajectorySeq;
use crate::liouville::LiouvilleMatrix;

/// Largest `m` for which [`catalan`] is computed.
pub const CATALAN_MAX: u32 = 30;
/// Largest semilength [`enumerate_dyck`] will enumerate.
pub const DYCK_MAX: u32 = 14;
/// Default cap on `k` for [`expand_hierarchy`].
pub const DEFAULT_EXPANSION_BUDGET: u32 = 12;

/// `binom(2m, m) / (m + 1)`.
pub fn catalan(m: u32) -> Result<u64> {
    if m > CATALAN_MAX {
        return Err(Error::Range(format!("catalan({m}) exceeds the limit {CATALAN_MAX}")));
    }
    // C_{i+1} = C_i * 2(2i+1) / (i+2); the product stays below 2^64 for m <= 30
    // when carried in u128.
    let mut c: u128 = 1;
    for i in 0..u128::from(m) {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    Ok(c as u64)
}

/// A balanced path of up (`true`) and down (`false`) steps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyckPath {
    up: Vec<bool>,
}

impl DyckPath {
    /// Builds a path from `+1` / `-1` steps, checking balance and
    /// nonnegativity.
    pub fn from_steps(steps: &[i8]) -> Result<Self> {
        let mut height = 0i64;
        let mut up = Vec::with_capacity(steps.len());
        for &s in steps {
            match s {
                1 => height += 1,
                -1 => height -= 1,
                _ => return Err(Error::InvalidParameter(format!("step {s} is not +1 or -1"))),
            }
            if height < 0 {
                return Err(Error::InvalidParameter("prefix sum drops below zero".into()));
            }
            up.push(s == 1);
        }
        if height != 0 {
            return Err(Error::InvalidParameter("path is not balanced".into()));
        }
        Ok(Self { up })
    }

    pub fn semilength(&self) -> usize {
        self.up.len() / 2
    }

    pub fn steps(&self) -> Vec<i8> {
        self.up.iter().map(|&u| if u { 1 } else { -1 }).collect()
    }

    /// Number of peaks (an up step directly followed by a down step).
    pub fn peaks(&self) -> usize {
        self.up.windows(2).filter(|w| w[0] && !w[1]).count()
    }

    /// Largest prefix sum.
    pub fn height(&self) -> usize {
        let mut h = 0usize;
        let mut best = 0;
        for &u in &self.up {
            if u {
                h += 1;
                best = best.max(h);
            } else {
                h -= 1;
            }
        }
        best
    }

    /// Balance and nonnegativity.
    pub fn is_valid(&self) -> bool {
        let mut h = 0i64;
        for &u in &self.up {
            h += if u { 1 } else { -1 };
            if h < 0 {
                return false;
            }
        }
        h == 0
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &u in &self.up {
            f.write_str(if u { "U" } else { "D" })?;
        }
        Ok(())
    }
}

/// All Dyck paths of semilength `m`, lexicographic with an up step ordered
/// before a down step.
pub fn enumerate_dyck(m: u32) -> Result<Vec<DyckPath>> {
    if m > DYCK_MAX {
        return Err(Error::Range(format!("semilength {m} exceeds the enumeration limit {DYCK_MAX}")));
    }
    let m = m as usize;
    let mut out = Vec::with_capacity(catalan(m as u32)? as usize);
    let mut buf = Vec::with_capacity(2 * m);
    grow(&mut buf, 0, 0, m, &mut out);
    Ok(out)
}

fn grow(buf: &mut Vec<bool>, ups: usize, downs: usize, m: usize, out: &mut Vec<DyckPath>) {
    if buf.len() == 2 * m {
        out.push(DyckPath { up: buf.clone() });
        return;
    }
    if ups < m {
        buf.push(true);
        grow(buf, ups + 1, downs, m, out);
        buf.pop();
    }
    if downs < ups {
        buf.push(false);
        grow(buf, ups, downs + 1, m, out);
        buf.pop();
    }
}

/// One signed product `sign * U_{f_1} U_{f_2} ...` in the expansion of
/// `T^C_k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicTerm {
    pub sign: i8,
    pub factors: Vec<usize>,
}

impl SymbolicTerm {
    pub fn order(&self) -> usize {
        self.factors.iter().sum()
    }
}

impl fmt::Display for SymbolicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|j| j.to_string()).collect();
        write!(f, "{}[{}]", if self.sign > 0 { '+' } else { '-' }, parts.join(","))
    }
}

/// `T^C_k` written in the `U` basis.
///
/// Unrolling `T_k = U_k - sum_{r<k} T_r U_{k-r}` gives one term per
/// composition of `k`, signed by the parity of its part count. Terms come
/// ordered by part count, then lexicographically.
pub fn expand_hierarchy(k: u32, budget: u32) -> Result<Vec<SymbolicTerm>> {
    if k == 0 || k > budget {
        return Err(Error::Range(format!("k = {k} must lie in 1..={budget}")));
    }
    let k = k as usize;
    let mut terms = Vec::with_capacity(1 << (k - 1));
    // Bit i of the mask set means a cut after position i + 1.
    for mask in 0u32..(1 << (k - 1)) {
        let mut factors = Vec::new();
        let mut start = 0;
        for i in 0..k - 1 {
            if mask & (1 << i) != 0 {
                factors.push(i + 1 - start);
                start = i + 1;
            }
        }
        factors.push(k - start);
        let sign = if factors.len() % 2 == 1 { 1 } else { -1 };
        terms.push(SymbolicTerm { sign, factors });
    }
    terms.sort_by(|a, b| a.factors.len().cmp(&b.factors.len()).then_with(|| a.factors.cmp(&b.factors)));
    Ok(terms)
}

/// Evaluates `sum sign * U_{f_1} ... U_{f_p}` on a trajectory.
pub fn numeric_check(terms: &[SymbolicTerm], seq: &TrajectorySeq) -> Result<LiouvilleMatrix> {
    let first = seq.maps.first().ok_or(Error::SeqShort { index: 1, len: 0 })?;
    let mut acc = LiouvilleMatrix::zeros(first.n());
    for term in terms {
        let mut prod: Option<LiouvilleMatrix> = None;
        for &j in &term.factors {
            if j == 0 || j > seq.len() {
                return Err(Error::SeqShort { index: j, len: seq.len() });
            }
            let u = seq.at(j);
            prod = Some(match prod {
                None => u.clone(),
                Some(p) => &p * u,
            });
        }
        if let Some(p) = prod {
            acc = if term.sign > 0 { &acc + &p } else { &acc - &p };
        }
    }
    Ok(acc)
}

/// Term statistics for one `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub k: usize,
    pub terms: usize,
    pub positive: usize,
    pub negative: usize,
    /// Number of terms with a given part count.
    pub by_parts: BTreeMap<usize, usize>,
}

pub fn census(terms: &[SymbolicTerm]) -> Census {
    let mut by_parts = BTreeMap::new();
    for t in terms {
        *by_parts.entry(t.factors.len()).or_insert(0) += 1;
    }
    Census {
        k: terms.first().map_or(0, SymbolicTerm::order),
        terms: terms.len(),
        positive: terms.iter().filter(|t| t.sign > 0).count(),
        negative: terms.iter().filter(|t| t.sign < 0).count(),
        by_parts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{extract_ttm, Provenance};
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn catalan_recurrence(m: usize) -> Vec<u128> {
        let mut c = vec![1u128];
        for n in 0..m {
            c.push((0..=n).map(|i| c[i] * c[n - i]).sum());
        }
        c
    }

    #[test]
    fn catalan_matches_recurrence() {
        let oracle = catalan_recurrence(30);
        for m in 0..=30u32 {
            assert_eq!(u128::from(catalan(m).unwrap()), oracle[m as usize], "m = {m}");
        }
        assert_eq!(catalan(10).unwrap(), 16796);
        assert!(matches!(catalan(31), Err(Error::Range(_))));
    }

    #[test]
    fn small_dyck_sets() {
        let one = enumerate_dyck(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].steps(), vec![1, -1]);
        let two = enumerate_dyck(2).unwrap();
        assert_eq!(two[0].steps(), vec![1, 1, -1, -1]);
        assert_eq!(two[1].steps(), vec![1, -1, 1, -1]);
        assert_eq!(enumerate_dyck(4).unwrap().len(), 14);
        assert_eq!(enumerate_dyck(0).unwrap().len(), 1);
        assert!(enumerate_dyck(15).is_err());
    }

    #[test]
    fn dyck_paths_are_valid_sorted_and_distinct() {
        for m in 0..=9 {
            let paths = enumerate_dyck(m).unwrap();
            assert!(paths.iter().all(DyckPath::is_valid));
            assert!(paths.windows(2).all(|w| w[0].steps() > w[1].steps()));
        }
    }

    #[test]
    fn from_steps_rejects_bad_paths() {
        assert!(DyckPath::from_steps(&[-1, 1]).is_err());
        assert!(DyckPath::from_steps(&[1, 1, -1]).is_err());
        assert!(DyckPath::from_steps(&[1, 0]).is_err());
        let p = DyckPath::from_steps(&[1, 1, -1, -1, 1, -1]).unwrap();
        assert_eq!((p.peaks(), p.height(), p.to_string()), (2, 2, "UUDDUD".to_string()));
    }

    // T_k by literally substituting the recursion, memoized on k.
    fn recursive_terms(k: usize, memo: &mut BTreeMap<usize, Vec<(i64, Vec<usize>)>>) -> Vec<(i64, Vec<usize>)> {
        if let Some(t) = memo.get(&k) {
            return t.clone();
        }
        let mut out = vec![(1, vec![k])];
        for r in 1..k {
            for (s, mut f) in recursive_terms(r, memo) {
                f.push(k - r);
                out.push((-s, f));
            }
        }
        memo.insert(k, out.clone());
        out
    }

    #[test]
    fn expansion_matches_recursive_substitution() {
        let mut memo = BTreeMap::new();
        for k in 1..=10u32 {
            let mut want: Vec<(i64, Vec<usize>)> = recursive_terms(k as usize, &mut memo);
            want.sort();
            let mut got: Vec<(i64, Vec<usize>)> = expand_hierarchy(k, 12)
                .unwrap()
                .into_iter()
                .map(|t| (i64::from(t.sign), t.factors))
                .collect();
            got.sort();
            assert_eq!(got, want, "k = {k}");
        }
    }

    #[test]
    fn expansion_examples() {
        let two: Vec<String> = expand_hierarchy(2, 12).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(two, ["+[2]", "-[1,1]"]);
        let four = expand_hierarchy(4, 12).unwrap();
        assert_eq!(four.len(), 8);
        assert!(four.contains(&SymbolicTerm { sign: 1, factors: vec![1, 2, 1] }));
        assert!(four.contains(&SymbolicTerm { sign: -1, factors: vec![1, 1, 1, 1] }));
        assert!(expand_hierarchy(13, 12).is_err());
        assert!(expand_hierarchy(0, 12).is_err());
        let c = census(&four);
        assert_eq!((c.k, c.positive, c.negative), (4, 4, 4));
        assert_eq!(c.by_parts.get(&2), Some(&3));
    }

    #[test]
    fn numeric_check_inverts_the_convolution() {
        // Arbitrary non-commuting maps stand in for a trajectory.
        let maps: Vec<LiouvilleMatrix> = (1..=5)
            .map(|k| {
                let m = DMatrix::from_fn(4, 4, |i, j| {
                    Complex64::new(((i * 3 + j * 7 + k) % 5) as f64 * 0.1, ((i + 2 * j * k) % 3) as f64 * 0.05)
                });
                LiouvilleMatrix::from_matrix(2, m).unwrap()
            })
            .collect();
        let seq = TrajectorySeq::new(0.1, maps.clone(), Provenance::Oracle);
        let ttm = extract_ttm(&maps).unwrap();
        for k in 1..=5u32 {
            let v = numeric_check(&expand_hierarchy(k, 12).unwrap(), &seq).unwrap();
            let scale = 1.0 + crate::liouville::liou_norm(&ttm[k as usize - 1]);
            assert!(crate::liouville::liou_norm(&(&v - &ttm[k as usize - 1])) < 1e-12 * scale, "k = {k}");
        }
        let short = TrajectorySeq::new(0.1, maps[..2].to_vec(), Provenance::Oracle);
        assert!(matches!(
            numeric_check(&expand_hierarchy(3, 12).unwrap(), &short),
            Err(Error::SeqShort { index: 3, len: 2 })
        ));
    }
}
