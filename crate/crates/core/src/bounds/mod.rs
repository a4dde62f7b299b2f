//! Closed-form values and bounds for `kappa` (largest member size of an
//! `m`-family) and `mu` (largest family of `k`-sets).
//!
//! Every floor is taken on exact integers or rationals.

mod report;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{binom, binom_checked, floor_ratio, isqrt, prime_power, smallest_prime_geq_sqrt, Rational};
use crate::family::{IntersectionLaw, LawKind};

pub use report::{best_bounds, BoundItem, BoundOptions, BoundParams, BoundReport, Direction, Quantity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("arithmetic overflow evaluating {0}")]
    Overflow(&'static str),
}

fn out_of_domain(msg: impl Into<String>) -> BoundsError {
    BoundsError::OutOfDomain(msg.into())
}

/// An integer extended with both infinities; `NegInf < Finite(_) < PosInf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Extended {
    pub fn finite(self) -> Option<i64> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::PosInf => write!(f, "+inf"),
        }
    }
}

/// Where a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Citation {
    /// `k <= n`, `mu <= C(n, k)` and similar counting facts.
    Trivial,
    /// A single member may be all of `[n]`.
    SingletonFamily,
    /// Pairwise disjoint members: `floor(n / m)`.
    DisjointMembers,
    /// Exact value for two members: `floor((n + l) / 2)`.
    TwoMembers,
    /// Exact two-case value for three members.
    ThreeMembers,
    /// Exact three-case value for four members.
    FourMembers,
    /// Recursive lower bound obtained by adding one full level of subsets.
    RecursiveLevels,
    /// Floor of the fractional relaxation optimum.
    FractionalRelaxation,
    /// Sunflower with core of size `l_s`: `kappa >= l_s + 1`.
    Sunflower,
    /// `mu_{<=l}(n, k) <= n(n-1)...(n-l) / (k(k-1)...(k-l))`.
    CountingAtMost,
    /// Graphs of polynomials of degree at most `l` over `F_p`.
    PolynomialCurves,
    /// Lines of the affine plane over `F_p` restricted to a strip of columns.
    AffineStrip,
    /// `floor(n / p(sqrt n)) <= kappa_{<=1}(n, n) <= sqrt(n - 3/4) + 1/2`.
    SquareRootSandwich,
    /// Lines of the projective plane of prime-power order `q`.
    ProjectivePlane,
    /// Projective plane lines with their point on a fixed line removed.
    ProjectiveTrim,
    /// Shared core plus a packing with multiplicity `t - 1`.
    SharedCorePacking,
    /// Edge-deletion count in the element/member incidence graph.
    TwiseCounting,
    /// Disjoint cores per `t`-subset of members plus a packing.
    DisjointCores,
    /// Fisher's inequality: `m <= n`.
    Fisher,
    /// Erdős–Ko–Rado: `m <= C(n-1, k-1)` for `k <= n/2`.
    ErdosKoRado,
    /// Ray-Chaudhuri–Wilson: `m <= C(n, s)`.
    RayChaudhuriWilson,
    /// Hegedűs: `m <= C(n - l_1, s)` for large `n`.
    Hegedus,
    /// Deza–Erdős–Frankl product bound; only valid beyond an unknown `n_0`.
    DezaErdosFrankl,
    /// Optimum of the signature integer program.
    AssignmentSolver,
    /// Exhaustive search.
    Oracle,
}

impl Citation {
    pub fn describe(self) -> &'static str {
        match self {
            Citation::Trivial => "trivial counting bound",
            Citation::SingletonFamily => "single member equal to [n]",
            Citation::DisjointMembers => "pairwise disjoint members, floor(n/m)",
            Citation::TwoMembers => "two members, floor((n+l)/2)",
            Citation::ThreeMembers => "three members, two-case formula",
            Citation::FourMembers => "four members, three-case formula",
            Citation::RecursiveLevels => "recursive lower bound over full subset levels",
            Citation::FractionalRelaxation => "floor of the fractional relaxation",
            Citation::Sunflower => "sunflower with an l_s-element core",
            Citation::CountingAtMost => "at-most-l counting bound n(n-1)..(n-l)/(k(k-1)..(k-l))",
            Citation::PolynomialCurves => "polynomial curves of degree <= l over F_p",
            Citation::AffineStrip => "affine lines restricted to a column strip",
            Citation::SquareRootSandwich => "floor(n/p(sqrt n)) <= kappa <= sqrt(n-3/4)+1/2",
            Citation::ProjectivePlane => "projective plane of prime-power order",
            Citation::ProjectiveTrim => "trimmed projective plane",
            Citation::SharedCorePacking => "shared core plus (t-1)-fold packing",
            Citation::TwiseCounting => "t-wise incidence counting",
            Citation::DisjointCores => "disjoint cores per t-subset plus packing",
            Citation::Fisher => "Fisher's inequality",
            Citation::ErdosKoRado => "Erdős–Ko–Rado theorem",
            Citation::RayChaudhuriWilson => "Ray-Chaudhuri–Wilson theorem",
            Citation::Hegedus => "Hegedűs theorem",
            Citation::DezaErdosFrankl => "Deza–Erdős–Frankl theorem (heuristic, n0 unknown)",
            Citation::AssignmentSolver => "exact assignment integer program",
            Citation::Oracle => "exhaustive search",
        }
    }
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let key = serde_json::to_value(self).expect("citation serializes");
        write!(f, "{}", key.as_str().unwrap_or_default())
    }
}

/// Exact `kappa_{l}(n, m)` where a closed form is known: `l = 0` (any `m`,
/// `n >= m`) and `l >= 1` with `m <= 4` and `n >= l + m` (`m = 1` needs no
/// lower bound on `n`).
pub fn kappa_exact_small(l: u64, n: u64, m: u64) -> Result<u64, BoundsError> {
    kappa_exact_small_cited(l, n, m).map(|(v, _)| v)
}

pub(crate) fn kappa_exact_small_cited(l: u64, n: u64, m: u64) -> Result<(u64, Citation), BoundsError> {
    if m == 0 {
        return Err(out_of_domain("m must be at least 1"));
    }
    if l == 0 {
        if n < m {
            return Err(out_of_domain(format!("l = 0 needs n >= m, got n = {n}, m = {m}")));
        }
        return Ok((n / m, Citation::DisjointMembers));
    }
    if m == 1 {
        if n == 0 {
            return Err(out_of_domain("n must be positive"));
        }
        return Ok((n, Citation::SingletonFamily));
    }
    if m > 4 {
        return Err(out_of_domain(format!("no closed form for m = {m} > 4")));
    }
    if n < l + m {
        return Err(out_of_domain(format!(
            "m = {m} needs n >= l + {m}, got n = {n}, l = {l}"
        )));
    }
    let half = (n + l) / 2;
    Ok(match m {
        2 => (half, Citation::TwoMembers),
        3 if n < 3 * l => (half, Citation::ThreeMembers),
        3 => (l + n / 3, Citation::ThreeMembers),
        4 if n < 2 * l => (half, Citation::FourMembers),
        4 if n < 6 * l => ((3 * n + 6 * l) / 8, Citation::FourMembers),
        4 => ((n + 6 * l) / 4, Citation::FourMembers),
        _ => unreachable!(),
    })
}

/// Recursive lower bound: the best of
/// `kappa_{l - C(m-2, i-2)}(n - C(m, i), m) + C(m-1, i-1)` over `2 <= i <= m`,
/// bottoming out at `floor(n'/m)` when the reduced `l` reaches zero.
pub fn kappa_lower_recursive(l: u64, n: u64, m: u64) -> Result<Extended, BoundsError> {
    if l < 1 || m < l {
        return Err(out_of_domain(format!("needs m >= l >= 1, got l = {l}, m = {m}")));
    }
    let mut memo = HashMap::new();
    Ok(recursive_levels(l as i64, n as i64, m as i64, &mut memo))
}

fn recursive_levels(l: i64, n: i64, m: i64, memo: &mut HashMap<(i64, i64), Extended>) -> Extended {
    if l < 0 || n < 0 {
        return Extended::NegInf;
    }
    if l == 0 {
        return if n >= m {
            Extended::Finite(n / m)
        } else {
            Extended::NegInf
        };
    }
    if let Some(&v) = memo.get(&(l, n)) {
        return v;
    }
    let mut best = Extended::NegInf;
    for i in 2..=m {
        let reduced = recursive_levels(l - binom(m - 2, i - 2) as i64, n - binom(m, i) as i64, m, memo);
        if let Extended::Finite(v) = reduced {
            best = best.max(Extended::Finite(v + binom(m - 1, i - 1) as i64));
        }
    }
    memo.insert((l, n), best);
    best
}

/// Optimum of the fractional relaxation, supported on levels `s` and `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracSolution {
    pub value: Rational,
    pub s: u64,
    pub t: u64,
    pub alpha: Rational,
    pub beta: Rational,
}

fn rbinom(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom(n, k))
}

/// Picks `s = floor(r)`, `t = ceil(r)` for the root `r >= 1` of
/// `r (r - 1) = m (m - 1) l / n`, using exact comparisons only.
pub(crate) fn fractional_levels(l: &Rational, n: &Rational, m: u64) -> (u64, u64) {
    let target = Rational::from_integer((m * m.saturating_sub(1)) as i128) * l / n;
    let fits = |s: u64| Rational::from_integer((s * (s - 1)) as i128) <= target;
    let mut s = 1;
    while s < m && fits(s + 1) {
        s += 1;
    }
    let exact = Rational::from_integer((s * (s - 1)) as i128) == target;
    (s, if exact { s } else { s + 1 })
}

/// Closed-form fractional optimum `kappa^frac_l(n, m)` for real `n > l >= 0`.
pub fn kappa_frac(l: Rational, n: Rational, m: u64) -> Result<FracSolution, BoundsError> {
    if m == 0 {
        return Err(out_of_domain("m must be at least 1"));
    }
    if l < Rational::zero() || n <= l {
        return Err(out_of_domain(format!("needs n > l >= 0, got l = {l}, n = {n}")));
    }
    let (s, t) = fractional_levels(&l, &n, m);
    let (mi, si, ti) = (m as i64, s as i64, t as i64);
    if s == t {
        let alpha = n / rbinom(mi, si);
        let value = Rational::from_integer(s as i128) * n / Rational::from_integer(m as i128);
        return Ok(FracSolution {
            value,
            s,
            t,
            alpha,
            beta: Rational::zero(),
        });
    }
    let (a11, a12) = (rbinom(mi, si), rbinom(mi, ti));
    let (a21, a22) = (rbinom(mi - 2, si - 2), rbinom(mi - 2, ti - 2));
    let det = a11 * a22 - a12 * a21;
    debug_assert!(!det.is_zero());
    let alpha = (n * a22 - a12 * l) / det;
    let beta = (a11 * l - a21 * n) / det;
    let value = rbinom(mi - 1, si - 1) * alpha + rbinom(mi - 1, ti - 1) * beta;
    Ok(FracSolution {
        value,
        s,
        t,
        alpha,
        beta,
    })
}

/// `floor(kappa^frac_l(n, m))`, an upper bound on `kappa_l(n, m)`.
pub fn kappa_upper_frac(l: u64, n: u64, m: u64) -> Result<i64, BoundsError> {
    let sol = kappa_frac(Rational::from_integer(l as i128), Rational::from_integer(n as i128), m)?;
    Ok(floor_ratio(&sol.value) as i64)
}

/// `floor(n(n-1)...(n-l) / (k(k-1)...(k-l)))` for `n >= k > l >= 1`.
pub fn mu_upper_atmost(n: u64, k: u64, l: u64) -> Result<u128, BoundsError> {
    if !(n >= k && k > l && l >= 1) {
        return Err(out_of_domain(format!(
            "needs n >= k > l >= 1, got n = {n}, k = {k}, l = {l}"
        )));
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..=l {
        num = num
            .checked_mul((n - i) as u128)
            .ok_or(BoundsError::Overflow("falling factorial"))?;
        den = den
            .checked_mul((k - i) as u128)
            .ok_or(BoundsError::Overflow("falling factorial"))?;
    }
    Ok(num / den)
}

/// One classical upper bound on `mu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicalBound {
    pub value: u128,
    pub cite: Citation,
    /// True for bounds whose validity threshold is not known explicitly.
    pub heuristic: bool,
}

/// All classical upper bounds on `mu_L(n, k)` whose hypotheses hold.
/// Only pairwise laws are covered.
pub fn mu_upper_classical(n: u64, k: u64, law: &IntersectionLaw) -> Vec<ClassicalBound> {
    let mut out = Vec::new();
    if law.t() != 2 {
        return out;
    }
    let mut push = |value: Option<u128>, cite, heuristic| {
        if let Some(value) = value {
            out.push(ClassicalBound { value, cite, heuristic });
        }
    };
    if let LawKind::Positive = law.kind() {
        if k >= 1 && 2 * k <= n {
            push(binom_checked(n - 1, k - 1), Citation::ErdosKoRado, false);
        }
        return out;
    }
    let values = law.values().expect("finite law");
    let s = values.len() as u64;
    let l_max = *values.last().expect("nonempty law") as u64;
    let l_min = values[0] as u64;

    if let [l] = values[..] {
        if l >= 1 {
            push(Some(n as u128), Citation::Fisher, false);
        }
    }
    if l_max < k {
        push(binom_checked(n, s), Citation::RayChaudhuriWilson, false);
    }
    if l_min >= 1 && l_max < k {
        let threshold = binom_checked(k * k, l_min + 1)
            .and_then(|b| b.checked_mul(s as u128))
            .and_then(|b| b.checked_add(l_min as u128));
        if threshold.is_some_and(|th| n as u128 >= th) {
            push(binom_checked(n - l_min, s), Citation::Hegedus, false);
        }
    }
    if s <= k && k <= n && l_max < k {
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        let mut ok = true;
        for &li in &values {
            match (
                num.checked_mul(n as u128 - li as u128),
                den.checked_mul(k as u128 - li as u128),
            ) {
                (Some(a), Some(b)) => (num, den) = (a, b),
                _ => ok = false,
            }
        }
        if ok {
            push(Some(num / den), Citation::DezaErdosFrankl, true);
        }
    }
    out
}

/// Bounds on `kappa_{<=1}(n, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Leq1Bounds {
    pub lower: u64,
    pub upper: u64,
    pub exact: Option<u64>,
    /// Prime power `q` with `n` in `[q^2, q^2 + q + 1]`, when one exists.
    pub q: Option<u64>,
    /// Least prime not below `sqrt(n)`.
    pub prime: u64,
}

/// Largest `k >= 1` with `k (k - 1) <= n - 1`, i.e. `floor(sqrt(n - 3/4) + 1/2)`.
pub fn sqrt_upper(n: u64) -> u64 {
    let mut k = isqrt(n) + 1;
    while k * (k - 1) > n - 1 {
        k -= 1;
    }
    k
}

pub fn kappa_leq1_nn_bounds(n: u64) -> Result<Leq1Bounds, BoundsError> {
    if n < 2 {
        return Err(out_of_domain("needs n >= 2"));
    }
    let prime = smallest_prime_geq_sqrt(n);
    let lower = n / prime;
    let upper = sqrt_upper(n);
    let r = isqrt(n);
    let q = (n <= r * r + r + 1 && prime_power(r).is_some()).then_some(r);
    let exact = q.map(|q| if n == q * q + q + 1 { q + 1 } else { q });
    Ok(Leq1Bounds {
        lower,
        upper,
        exact,
        q,
        prime,
    })
}

fn check_twise(ls: u64, m: u64, t: u64) -> Result<(), BoundsError> {
    if t < 2 || m < t {
        return Err(out_of_domain(format!("needs m >= t >= 2, got m = {m}, t = {t}")));
    }
    let _ = ls;
    Ok(())
}

/// `t`-wise lower and upper bounds for a law whose largest value is `ls`:
/// `floor((n - ls)(t - 1)/m) + ls <= kappa <= floor(n(t-1)/m + ls C(m,t)/m)`.
/// Requires `n >= ls + m/(t-1)`.
pub fn kappa_twise_bounds(ls: u64, n: u64, m: u64, t: u64) -> Result<(u64, u64), BoundsError> {
    check_twise(ls, m, t)?;
    if n < ls || (n - ls) * (t - 1) < m {
        return Err(out_of_domain(format!(
            "needs n >= l_s + m/(t-1), got n = {n}, l_s = {ls}, m = {m}, t = {t}"
        )));
    }
    let lower = (n - ls) * (t - 1) / m + ls;
    Ok((lower, twise_upper(ls, n, m, t)?))
}

fn twise_upper(ls: u64, n: u64, m: u64, t: u64) -> Result<u64, BoundsError> {
    let cores = binom_checked(m, t)
        .and_then(|c| c.checked_mul(ls as u128))
        .ok_or(BoundsError::Overflow("C(m,t) l_s"))?;
    Ok(((n as u128 * (t - 1) as u128 + cores) / m as u128) as u64)
}

/// Exact `t`-wise value `floor(n(t-1)/m + ls C(m,t)/m)` once `n >= C(m,t) ls`;
/// `None` below that threshold.
pub fn kappa_twise_exact(ls: u64, n: u64, m: u64, t: u64) -> Result<Option<u64>, BoundsError> {
    check_twise(ls, m, t)?;
    let threshold = binom_checked(m, t)
        .and_then(|c| c.checked_mul(ls as u128))
        .ok_or(BoundsError::Overflow("C(m,t) l_s"))?;
    if (n as u128) < threshold {
        return Ok(None);
    }
    twise_upper(ls, n, m, t).map(Some)
}

/// True when `alpha` and `beta` of the fractional optimum are both integers.
pub fn fractional_is_integral(sol: &FracSolution) -> bool {
    sol.alpha.denom().is_one() && sol.beta.denom().is_one()
}
