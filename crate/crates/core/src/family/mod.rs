//! Set families over the ground set `[n] = {1, ..., n}` and the intersection
//! laws they are checked against.

mod io;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use io::{read_family, write_family, FamilyFormat};

/// Default number of violations kept in a [`VerificationReport`].
pub const DEFAULT_VIOLATION_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("ground set size must be positive")]
    EmptyGround,
    #[error("set {set}: element {element} outside 1..={n}")]
    OutOfRange { set: usize, element: u32, n: usize },
    #[error("set {set}: elements must strictly increase ({prev} then {next})")]
    Unsorted { set: usize, prev: u32, next: u32 },
    #[error("wiseness t = {t} out of range 2..={m}")]
    WisenessOutOfRange { t: usize, m: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid intersection law {0:?}")]
    BadLaw(String),
}

/// A list of subsets of `[n]`, each kept as a strictly increasing list of
/// 1-based labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    sets: Vec<Vec<u32>>,
    distinct_required: bool,
}

impl SetFamily {
    /// Builds a family that is required to have pairwise distinct members.
    pub fn new(n: usize, sets: Vec<Vec<u32>>) -> Result<Self, FamilyError> {
        Self::with_distinct(n, sets, true)
    }

    pub fn with_distinct(n: usize, sets: Vec<Vec<u32>>, distinct_required: bool) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(FamilyError::EmptyGround);
        }
        for (idx, set) in sets.iter().enumerate() {
            for &e in set {
                if e == 0 || e as usize > n {
                    return Err(FamilyError::OutOfRange {
                        set: idx,
                        element: e,
                        n,
                    });
                }
            }
            if let Some((&prev, &next)) = set.iter().tuple_windows().find(|(a, b)| a >= b) {
                return Err(FamilyError::Unsorted { set: idx, prev, next });
            }
        }
        Ok(Self {
            n,
            sets,
            distinct_required,
        })
    }

    /// Like [`SetFamily::with_distinct`] but sorts each member first.
    /// Used by constructions that produce members in arbitrary order.
    pub(crate) fn from_unsorted(n: usize, sets: Vec<Vec<u32>>, distinct_required: bool) -> Result<Self, FamilyError> {
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        Self::with_distinct(n, sets, distinct_required)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn distinct_required(&self) -> bool {
        self.distinct_required
    }

    /// True when no two members coincide.
    pub fn has_distinct_members(&self) -> bool {
        self.sets.iter().all_unique()
    }

    /// Common member size, if the family is uniform and nonempty.
    pub fn uniform_size(&self) -> Option<usize> {
        let first = self.sets.first()?.len();
        self.sets.iter().all(|s| s.len() == first).then_some(first)
    }

    /// Same family with its members in lexicographic order.
    pub fn canonicalize(&self) -> SetFamily {
        let mut sets = self.sets.clone();
        sets.sort();
        SetFamily {
            n: self.n,
            sets,
            distinct_required: self.distinct_required,
        }
    }

    /// Keeps the first `count` members.
    pub fn truncated(&self, count: usize) -> SetFamily {
        SetFamily {
            n: self.n,
            sets: self.sets.iter().take(count).cloned().collect(),
            distinct_required: self.distinct_required,
        }
    }

    /// Same members over a larger ground set.
    pub fn with_ground(&self, n: usize) -> Result<SetFamily, FamilyError> {
        SetFamily::with_distinct(n, self.sets.clone(), self.distinct_required)
    }

    pub(crate) fn bitsets(&self) -> Vec<BitSet> {
        self.sets.iter().map(|s| BitSet::from_labels(self.n, s)).collect()
    }
}

/// Fixed-width bitset over `[n]`, bit `e - 1` for label `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet(Vec<u64>);

impl BitSet {
    fn from_labels(n: usize, labels: &[u32]) -> Self {
        let mut words = vec![0u64; n.div_ceil(64)];
        for &e in labels {
            let bit = e as usize - 1;
            words[bit / 64] |= 1 << (bit % 64);
        }
        BitSet(words)
    }

    fn intersection_size<'a>(sets: impl Iterator<Item = &'a BitSet> + Clone) -> usize {
        let width = sets.clone().next().map_or(0, |s| s.0.len());
        (0..width)
            .map(|w| {
                sets.clone()
                    .map(|s| s.0[w])
                    .fold(u64::MAX, |acc, x| acc & x)
                    .count_ones() as usize
            })
            .sum()
    }
}

/// Which intersection sizes are admitted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LawKind {
    /// Sizes in an explicit strictly increasing list.
    Exact(Vec<usize>),
    /// Sizes in `0..=l`.
    AtMost(usize),
    /// Any positive size.
    Positive,
}

/// An intersection constraint applied to every `t` members of a family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntersectionLaw {
    kind: LawKind,
    t: usize,
}

impl IntersectionLaw {
    pub fn exact(values: Vec<usize>) -> Result<Self, FamilyError> {
        if values.is_empty() || !values.iter().tuple_windows().all(|(a, b)| a < b) {
            return Err(FamilyError::BadLaw(format!(
                "exact list must be nonempty and strictly increasing, got {values:?}"
            )));
        }
        Ok(Self {
            kind: LawKind::Exact(values),
            t: 2,
        })
    }

    pub fn single(l: usize) -> Self {
        Self {
            kind: LawKind::Exact(vec![l]),
            t: 2,
        }
    }

    pub fn at_most(l: usize) -> Self {
        Self {
            kind: LawKind::AtMost(l),
            t: 2,
        }
    }

    pub fn positive() -> Self {
        Self {
            kind: LawKind::Positive,
            t: 2,
        }
    }

    pub fn with_t(mut self, t: usize) -> Result<Self, FamilyError> {
        if t < 2 {
            return Err(FamilyError::BadLaw(format!("wiseness must be at least 2, got {t}")));
        }
        self.t = t;
        Ok(self)
    }

    pub fn kind(&self) -> &LawKind {
        &self.kind
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn admits(&self, size: usize) -> bool {
        match &self.kind {
            LawKind::Exact(values) => values.binary_search(&size).is_ok(),
            LawKind::AtMost(l) => size <= *l,
            LawKind::Positive => size >= 1,
        }
    }

    /// The admitted sizes as a finite list, `None` for the positive law.
    pub fn values(&self) -> Option<Vec<usize>> {
        match &self.kind {
            LawKind::Exact(values) => Some(values.clone()),
            LawKind::AtMost(l) => Some((0..=*l).collect()),
            LawKind::Positive => None,
        }
    }

    /// Largest admitted size.
    pub fn max_value(&self) -> Option<usize> {
        match &self.kind {
            LawKind::Exact(values) => values.last().copied(),
            LawKind::AtMost(l) => Some(*l),
            LawKind::Positive => None,
        }
    }

    /// The single admitted value, if exactly one size is admitted.
    pub fn single_value(&self) -> Option<usize> {
        match self.values()?.as_slice() {
            [l] => Some(*l),
            _ => None,
        }
    }

    /// True when every size in `0..=l` is admitted.
    pub fn admits_prefix(&self, l: usize) -> bool {
        (0..=l).all(|s| self.admits(s))
    }
}

impl fmt::Display for IntersectionLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            LawKind::Exact(values) => write!(f, "exact:{}", values.iter().join(","))?,
            LawKind::AtMost(l) => write!(f, "atmost:{l}")?,
            LawKind::Positive => write!(f, "positive")?,
        }
        Ok(())
    }
}

/// Parses `exact:1,3`, `atmost:2` or `positive` (with `t = 2`).
impl FromStr for IntersectionLaw {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || FamilyError::BadLaw(s.to_string());
        let s = s.trim();
        if s == "positive" {
            return Ok(Self::positive());
        }
        let (head, tail) = s.split_once(':').ok_or_else(bad)?;
        match head {
            "exact" => {
                let values = tail
                    .split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                Self::exact(values)
            }
            "atmost" => tail.trim().parse().map(Self::at_most).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// One reason a family fails a law. Member indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Member whose size differs from the first member's.
    NonUniform { index: usize, size: usize, expected: usize },
    /// Two equal members in a family that must have distinct members.
    Duplicate { first: usize, second: usize },
    /// A `t`-tuple of members whose common intersection is not admitted.
    Intersection { indices: Vec<usize>, size: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonUniform { index, size, expected } => {
                write!(f, "member {} has size {size}, expected {expected}", index + 1)
            }
            Violation::Duplicate { first, second } => {
                write!(f, "members {} and {} are equal", first + 1, second + 1)
            }
            Violation::Intersection { indices, size } => write!(
                f,
                "members ({}) intersect in {size} elements",
                indices.iter().map(|i| i + 1).join(",")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub uniform_k: Option<usize>,
    pub valid: bool,
    pub violations: Vec<Violation>,
    /// Set when more violations exist than were recorded.
    pub truncated: bool,
}

/// Checks uniformity, distinctness (when required) and the `t`-wise law,
/// keeping at most [`DEFAULT_VIOLATION_CAP`] violations.
pub fn verify(family: &SetFamily, law: &IntersectionLaw) -> VerificationReport {
    verify_capped(family, law, DEFAULT_VIOLATION_CAP)
}

pub fn verify_capped(family: &SetFamily, law: &IntersectionLaw, cap: usize) -> VerificationReport {
    let mut violations = Vec::new();
    let mut truncated = false;
    let mut push = |v: Violation, violations: &mut Vec<Violation>| {
        if violations.len() < cap {
            violations.push(v);
            true
        } else {
            truncated = true;
            false
        }
    };

    let uniform_k = family.uniform_size();
    'scan: {
        if let Some(first) = family.sets.first() {
            for (index, set) in family.sets.iter().enumerate() {
                if set.len() != first.len() {
                    let v = Violation::NonUniform {
                        index,
                        size: set.len(),
                        expected: first.len(),
                    };
                    if !push(v, &mut violations) {
                        break 'scan;
                    }
                }
            }
        }
        if family.distinct_required {
            let mut order: Vec<usize> = (0..family.len()).collect();
            order.sort_by(|&a, &b| family.sets[a].cmp(&family.sets[b]).then(a.cmp(&b)));
            for (a, b) in order.iter().tuple_windows() {
                if family.sets[*a] == family.sets[*b] {
                    let (first, second) = (*a.min(b), *a.max(b));
                    if !push(Violation::Duplicate { first, second }, &mut violations) {
                        break 'scan;
                    }
                }
            }
        }
        if law.t() > family.len() {
            break 'scan;
        }
        let bits = family.bitsets();
        for tuple in (0..family.len()).combinations(law.t()) {
            let size = BitSet::intersection_size(tuple.iter().map(|&i| &bits[i]));
            if !law.admits(size) {
                let v = Violation::Intersection { indices: tuple, size };
                if !push(v, &mut violations) {
                    break 'scan;
                }
            }
        }
    }

    let valid = violations.is_empty() && (uniform_k.is_some() || family.is_empty());
    VerificationReport {
        uniform_k,
        valid,
        violations,
        truncated,
    }
}

/// Sizes of `F_{i1} ∩ ... ∩ F_{it}` for every `t`-subset of member indices,
/// in lexicographic index order.
pub fn intersection_profile(family: &SetFamily, t: usize) -> Result<Vec<usize>, FamilyError> {
    let m = family.len();
    if t < 2 || t > m {
        return Err(FamilyError::WisenessOutOfRange { t, m });
    }
    let bits = family.bitsets();
    Ok((0..m)
        .combinations(t)
        .map(|tuple| BitSet::intersection_size(tuple.iter().map(|&i| &bits[i])))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn fano() -> SetFamily {
        SetFamily::new(
            7,
            vec![
                vec![1, 2, 3],
                vec![1, 4, 5],
                vec![1, 6, 7],
                vec![2, 4, 6],
                vec![2, 5, 7],
                vec![3, 4, 7],
                vec![3, 5, 6],
            ],
        )
        .unwrap()
    }

    #[test]
    fn fano_is_exactly_one_intersecting() {
        let report = verify(&fano(), &IntersectionLaw::single(1));
        assert!(report.valid);
        assert_eq!(report.uniform_k, Some(3));
        assert_eq!(intersection_profile(&fano(), 2).unwrap(), vec![1; 21]);
    }

    #[test]
    fn disjoint_pair_violates() {
        let f = SetFamily::new(4, vec![vec![1, 2], vec![3, 4]]).unwrap();
        let report = verify(&f, &IntersectionLaw::single(1));
        assert!(!report.valid);
        assert_eq!(
            report.violations,
            vec![Violation::Intersection {
                indices: vec![0, 1],
                size: 0
            }]
        );
        assert_eq!(
            report.violations[0].to_string(),
            "members (1,2) intersect in 0 elements"
        );
    }

    #[test]
    fn sunflower_core() {
        let f = SetFamily::new(5, vec![vec![1, 4, 5], vec![2, 4, 5], vec![3, 4, 5]]).unwrap();
        let report = verify(&f, &IntersectionLaw::single(2));
        assert!(report.valid);
        assert_eq!(report.uniform_k, Some(3));
    }

    #[test]
    fn malformed_input_is_an_error() {
        assert_eq!(
            SetFamily::new(3, vec![vec![1, 4]]),
            Err(FamilyError::OutOfRange {
                set: 0,
                element: 4,
                n: 3
            })
        );
        assert_eq!(
            SetFamily::new(3, vec![vec![2, 1]]),
            Err(FamilyError::Unsorted {
                set: 0,
                prev: 2,
                next: 1
            })
        );
        assert!(SetFamily::new(3, vec![vec![0]]).is_err());
        assert_eq!(SetFamily::new(0, vec![]), Err(FamilyError::EmptyGround));
    }

    #[test]
    fn empty_and_singleton_families_are_vacuous() {
        let empty = SetFamily::new(3, vec![]).unwrap();
        let report = verify(&empty, &IntersectionLaw::single(5));
        assert!(report.valid);
        assert_eq!(report.uniform_k, None);

        let one = SetFamily::new(3, vec![vec![1, 2]]).unwrap();
        let report = verify(&one, &IntersectionLaw::single(5).with_t(3).unwrap());
        assert!(report.valid);
        assert_eq!(report.uniform_k, Some(2));
    }

    #[test]
    fn duplicates_and_non_uniform() {
        let f = SetFamily::new(3, vec![vec![1, 2], vec![1, 2], vec![3]]).unwrap();
        let report = verify(&f, &IntersectionLaw::positive());
        assert!(!report.valid);
        assert_eq!(report.uniform_k, None);
        assert!(report.violations.contains(&Violation::NonUniform {
            index: 2,
            size: 1,
            expected: 2
        }));
        assert!(report
            .violations
            .contains(&Violation::Duplicate { first: 0, second: 1 }));

        let relaxed = SetFamily::with_distinct(3, vec![vec![1, 2], vec![1, 2]], false).unwrap();
        assert!(verify(&relaxed, &IntersectionLaw::single(2)).valid);
    }

    #[test]
    fn identical_sets_profile() {
        let f = SetFamily::with_distinct(3, vec![vec![1, 2, 3], vec![1, 2, 3]], false).unwrap();
        assert_eq!(intersection_profile(&f, 2).unwrap(), vec![3]);
        assert!(intersection_profile(&f, 3).is_err());
        assert!(intersection_profile(&f, 1).is_err());
    }

    #[test]
    fn violation_cap_truncates_but_keeps_verdict() {
        let sets = (1..=20u32).map(|i| vec![i]).collect();
        let f = SetFamily::new(20, sets).unwrap();
        let report = verify_capped(&f, &IntersectionLaw::single(1), 5);
        assert!(!report.valid);
        assert_eq!(report.violations.len(), 5);
        assert!(report.truncated);
    }

    #[test]
    fn law_parsing() {
        assert_eq!(
            "exact:1,3".parse::<IntersectionLaw>().unwrap(),
            IntersectionLaw::exact(vec![1, 3]).unwrap()
        );
        assert_eq!(
            "atmost:2".parse::<IntersectionLaw>().unwrap(),
            IntersectionLaw::at_most(2)
        );
        assert_eq!(
            "positive".parse::<IntersectionLaw>().unwrap(),
            IntersectionLaw::positive()
        );
        assert!("exact:3,1".parse::<IntersectionLaw>().is_err());
        assert!("exact:".parse::<IntersectionLaw>().is_err());
        assert!("between:1".parse::<IntersectionLaw>().is_err());
        assert_eq!(IntersectionLaw::exact(vec![1, 3]).unwrap().to_string(), "exact:1,3");
    }

    #[test]
    fn at_most_matches_exact_prefix() {
        for l in 0..5 {
            let a = IntersectionLaw::at_most(l);
            let e = IntersectionLaw::exact((0..=l).collect()).unwrap();
            for s in 0..10 {
                assert_eq!(a.admits(s), e.admits(s));
            }
        }
    }

    #[test]
    fn canonicalize_sorts() {
        let f = SetFamily::new(4, vec![vec![3, 4], vec![1, 2]]).unwrap();
        assert_eq!(f.canonicalize().sets(), &[vec![1, 2], vec![3, 4]]);
        assert_eq!(fano().canonicalize(), fano());
    }

    fn arb_family() -> impl Strategy<Value = SetFamily> {
        (1usize..=9, 0usize..=7).prop_flat_map(|(n, m)| {
            let set = proptest::collection::btree_set(1..=n as u32, 0..=n);
            proptest::collection::vec(set, m).prop_map(move |sets| {
                let sets = sets.into_iter().map(|s| s.into_iter().collect()).collect();
                SetFamily::with_distinct(n, sets, false).unwrap()
            })
        })
    }

    fn arb_law() -> impl Strategy<Value = IntersectionLaw> {
        (0usize..4, 2usize..4, any::<bool>()).prop_map(|(l, t, at_most)| {
            let law = if at_most {
                IntersectionLaw::at_most(l)
            } else {
                IntersectionLaw::single(l)
            };
            law.with_t(t).unwrap()
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent_and_preserves_verdict(f in arb_family(), law in arb_law()) {
            let c = f.canonicalize();
            prop_assert_eq!(c.canonicalize(), c.clone());
            prop_assert_eq!(verify(&c, &law).valid, verify(&f, &law).valid);
        }

        #[test]
        fn verdict_is_order_independent(f in arb_family(), law in arb_law(), seed in any::<u64>()) {
            let mut sets = f.sets().to_vec();
            // deterministic shuffle
            let len = sets.len();
            for i in (1..len).rev() {
                let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
                sets.swap(i, j);
            }
            let g = SetFamily::with_distinct(f.n(), sets, false).unwrap();
            prop_assert_eq!(verify(&g, &law).valid, verify(&f, &law).valid);
        }

        #[test]
        fn laws_are_monotone(f in arb_family(), l in 0usize..4) {
            if verify(&f, &IntersectionLaw::at_most(l)).valid {
                prop_assert!(verify(&f, &IntersectionLaw::at_most(l + 1)).valid);
            }
            if verify(&f, &IntersectionLaw::single(l)).valid {
                prop_assert!(verify(&f, &IntersectionLaw::exact(vec![l, l + 1]).unwrap()).valid);
                prop_assert!(verify(&f, &IntersectionLaw::exact((0..=l + 1).collect()).unwrap()).valid);
            }
        }

        #[test]
        fn pair_profile_length(f in arb_family()) {
            let m = f.len();
            if m >= 2 {
                prop_assert_eq!(intersection_profile(&f, 2).unwrap().len(), m * (m - 1) / 2);
            }
        }
    }
}
