//! Explicit families: sunflowers, polynomial curves over `F_p`, affine
//! strips, projective planes and their trims, and the `t`-wise core
//! constructions.
//!
//! Point encodings are fixed so outputs are byte-reproducible:
//! * affine point `(x, y)` over `F_p` is label `x * p + y + 1`;
//! * projective points are normalized triples (first nonzero coordinate
//!   is 1) in lexicographic order of their coordinates, labeled from 1.

mod field;
mod plane;

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binom_checked, is_prime};
use crate::family::{FamilyError, IntersectionLaw, SetFamily};

pub use field::{gf, is_irreducible, FiniteField, MAX_ORDER};
pub use plane::{projective_plane, projective_trim, ProjectivePlane};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

fn invalid(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::InvalidParameters(msg.into())
}

/// `F_i = {i} ∪ {m+1, ..., m+l}` on `n = m + l`.
pub fn sunflower(m: usize, l: usize) -> Result<SetFamily, ConstructionError> {
    if m == 0 {
        return Err(invalid("sunflower needs m >= 1"));
    }
    let core = (m + 1..=m + l).map(|e| e as u32);
    let sets = (1..=m)
        .map(|i| std::iter::once(i as u32).chain(core.clone()).collect())
        .collect();
    Ok(SetFamily::new(m + l, sets)?)
}

/// Graph of `y = a_0 + a_1 x + ... + a_l x^l (mod p)` as a set of labels.
fn curve(p: u64, coeffs: &[u64], columns: u64) -> Vec<u32> {
    (0..columns)
        .map(|x| {
            let y = coeffs.iter().rev().fold(0, |acc, &a| (acc * x + a) % p);
            (x * p + y + 1) as u32
        })
        .collect()
}

/// Graphs of all polynomials of degree at most `l` over `F_p`, one member
/// per coefficient vector `(a_0, ..., a_l)` in lexicographic order.
///
/// Members are distinct exactly when `l < p`; for `l >= p` distinct
/// coefficient vectors can define the same function and the family is
/// returned with `distinct_required = false`.
pub fn polynomial_curves(p: u64, l: u64) -> Result<SetFamily, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    if l < 1 || p < l {
        return Err(invalid(format!(
            "polynomial curves need p >= l >= 1, got p = {p}, l = {l}"
        )));
    }
    let count = p.checked_pow(l as u32 + 1).filter(|&c| c <= 1 << 22);
    if count.is_none() {
        return Err(ConstructionError::TooLarge(format!("{p}^{} members", l + 1)));
    }
    let sets = (0..=l)
        .map(|_| 0..p)
        .multi_cartesian_product()
        .map(|coeffs| curve(p, &coeffs, p))
        .collect();
    Ok(SetFamily::with_distinct((p * p) as usize, sets, l < p)?)
}

/// Lines `y = a + b x` over `F_p` restricted to the columns `0 <= x < p - t`,
/// ordered by slope `b` and then intercept `a`. Ground set has `(p - t) p`
/// points; any prefix of `(p - t) p` members consists of distinct sets.
pub fn affine_strip_trim(p: u64, t: u64) -> Result<SetFamily, ConstructionError> {
    if !is_prime(p) {
        return Err(ConstructionError::NotPrime(p));
    }
    if t < 1 || t >= p {
        return Err(invalid(format!("strip needs 1 <= t < p, got p = {p}, t = {t}")));
    }
    let columns = p - t;
    let sets = (0..p)
        .cartesian_product(0..p)
        .map(|(slope, intercept)| curve(p, &[intercept, slope], columns))
        .collect();
    Ok(SetFamily::with_distinct((columns * p) as usize, sets, columns >= 2)?)
}

/// `floor(|pool| (t - 1) / m)` elements for each of `m` members, no element
/// in more than `t - 1` members. Slots `(element j, replica r)` are visited
/// row-major; slot `j (t - 1) + r` goes to member `(j (t - 1) + r) mod m`
/// unless that member is already full.
pub fn round_robin_packing(pool: &[u32], m: usize, t: usize) -> Vec<Vec<u32>> {
    let quota = pool.len() * (t - 1) / m;
    let mut members = vec![Vec::with_capacity(quota); m];
    for (j, &e) in pool.iter().enumerate() {
        for r in 0..t - 1 {
            let member = (j * (t - 1) + r) % m;
            if members[member].len() < quota {
                members[member].push(e);
            }
        }
    }
    members
}

fn check_twise(m: usize, t: usize) -> Result<(), ConstructionError> {
    if t < 2 || m < t {
        return Err(invalid(format!("needs m >= t >= 2, got m = {m}, t = {t}")));
    }
    Ok(())
}

/// Every member is `A ∪ B_i` with `A = {n - l_s + 1, ..., n}` and `B_i` from
/// [`round_robin_packing`] over `[n - l_s]`, so every `t` members meet in
/// exactly `A`. Member size is `floor((n - l_s)(t - 1)/m) + l_s`.
pub fn twise_shared_core(n: usize, m: usize, t: usize, ls: usize) -> Result<SetFamily, ConstructionError> {
    check_twise(m, t)?;
    if n < ls || (n - ls) * (t - 1) < m {
        return Err(invalid(format!(
            "needs n >= l_s + m/(t-1), got n = {n}, l_s = {ls}, m = {m}, t = {t}"
        )));
    }
    let pool: Vec<u32> = (1..=(n - ls) as u32).collect();
    let core: Vec<u32> = ((n - ls + 1) as u32..=n as u32).collect();
    let sets: Vec<Vec<u32>> = round_robin_packing(&pool, m, t)
        .into_iter()
        .map(|b| b.into_iter().chain(core.iter().copied()).collect())
        .collect();
    let distinct = sets.iter().all_unique();
    Ok(SetFamily::from_unsorted(n, sets, distinct)?)
}

/// One block `A_T` of `l_s` fresh elements per `t`-subset `T` of members
/// (blocks laid out from label 1 in lexicographic order of `T`), plus a
/// [`round_robin_packing`] of the remaining elements. Every `t` members meet
/// in exactly their block. Needs `n >= C(m, t) l_s`.
///
/// When the packing is empty and `m = t`, all members coincide; the family
/// is then returned with `distinct_required = false`.
pub fn twise_disjoint_cores(n: usize, m: usize, t: usize, ls: usize) -> Result<SetFamily, ConstructionError> {
    check_twise(m, t)?;
    let blocks = binom_checked(m as u64, t as u64)
        .and_then(|c| c.checked_mul(ls as u128))
        .filter(|&b| b <= n as u128)
        .ok_or_else(|| {
            invalid(format!(
                "needs n >= C(m,t) l_s, got n = {n}, m = {m}, t = {t}, l_s = {ls}"
            ))
        })? as usize;
    let mut sets = vec![Vec::new(); m];
    let mut next = 1u32;
    for tuple in (0..m).combinations(t) {
        let block: Vec<u32> = (next..next + ls as u32).collect();
        next += ls as u32;
        for &i in &tuple {
            sets[i].extend_from_slice(&block);
        }
    }
    let pool: Vec<u32> = ((blocks + 1) as u32..=n as u32).collect();
    for (set, extra) in sets.iter_mut().zip(round_robin_packing(&pool, m, t)) {
        set.extend(extra);
    }
    let distinct = sets.iter().all_unique();
    Ok(SetFamily::from_unsorted(n, sets, distinct)?)
}

/// Side record naming the construction behind an emitted family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub construction: String,
    pub params: BTreeMap<String, u64>,
    /// Law the family is advertised to satisfy, in `exact:..`/`atmost:..` syntax.
    pub law: String,
    pub t: usize,
}

/// A named construction with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Sunflower { m: usize, l: usize },
    Curves { p: u64, l: u64 },
    Strip { p: u64, t: u64 },
    Plane { q: u64 },
    Trim { q: u64, n: u64 },
    TwiseSharedCore { n: usize, m: usize, t: usize, ls: usize },
    TwiseDisjointCores { n: usize, m: usize, t: usize, ls: usize },
}

impl Construction {
    pub fn name(&self) -> &'static str {
        match self {
            Construction::Sunflower { .. } => "sunflower",
            Construction::Curves { .. } => "curves",
            Construction::Strip { .. } => "strip",
            Construction::Plane { .. } => "plane",
            Construction::Trim { .. } => "trim",
            Construction::TwiseSharedCore { .. } => "twise-core",
            Construction::TwiseDisjointCores { .. } => "twise-disjoint",
        }
    }

    /// The law every output of this construction satisfies.
    pub fn law(&self) -> IntersectionLaw {
        let with_t = |law: IntersectionLaw, t: usize| law.with_t(t).expect("t >= 2 checked on build");
        match *self {
            Construction::Sunflower { l, .. } => IntersectionLaw::single(l),
            Construction::Curves { l, .. } => IntersectionLaw::at_most(l as usize),
            Construction::Strip { .. } | Construction::Trim { .. } => IntersectionLaw::at_most(1),
            Construction::Plane { .. } => IntersectionLaw::single(1),
            Construction::TwiseSharedCore { t, ls, .. } | Construction::TwiseDisjointCores { t, ls, .. } => {
                with_t(IntersectionLaw::single(ls), t.max(2))
            }
        }
    }

    fn params(&self) -> BTreeMap<String, u64> {
        let pairs: Vec<(&str, u64)> = match *self {
            Construction::Sunflower { m, l } => vec![("m", m as u64), ("l", l as u64)],
            Construction::Curves { p, l } => vec![("p", p), ("l", l)],
            Construction::Strip { p, t } => vec![("p", p), ("t", t)],
            Construction::Plane { q } => vec![("q", q)],
            Construction::Trim { q, n } => vec![("q", q), ("n", n)],
            Construction::TwiseSharedCore { n, m, t, ls } | Construction::TwiseDisjointCores { n, m, t, ls } => {
                vec![("n", n as u64), ("m", m as u64), ("t", t as u64), ("ls", ls as u64)]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }

    pub fn build(&self) -> Result<(SetFamily, Provenance), ConstructionError> {
        let family = match *self {
            Construction::Sunflower { m, l } => sunflower(m, l)?,
            Construction::Curves { p, l } => polynomial_curves(p, l)?,
            Construction::Strip { p, t } => affine_strip_trim(p, t)?,
            Construction::Plane { q } => projective_plane(q)?,
            Construction::Trim { q, n } => projective_trim(q, n)?,
            Construction::TwiseSharedCore { n, m, t, ls } => twise_shared_core(n, m, t, ls)?,
            Construction::TwiseDisjointCores { n, m, t, ls } => twise_disjoint_cores(n, m, t, ls)?,
        };
        let law = self.law();
        let provenance = Provenance {
            construction: self.name().to_string(),
            params: self.params(),
            law: law.to_string(),
            t: law.t(),
        };
        Ok((family, provenance))
    }
}
