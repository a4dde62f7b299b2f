//! Combines every applicable bound into one interval.

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use super::{
    kappa_exact_small_cited, kappa_leq1_nn_bounds, kappa_lower_recursive, kappa_twise_bounds, kappa_twise_exact,
    kappa_upper_frac, mu_upper_atmost, mu_upper_classical, BoundsError, Citation, Extended,
};
use crate::arith::{binom_checked, is_prime, prime_power};
use crate::assignment::{solve_kappa_ilp_with, SolveOutcome, SolverBudget};
use crate::constructions::{
    affine_strip_trim, polynomial_curves, projective_plane, projective_trim, sunflower, twise_disjoint_cores,
    twise_shared_core, ConstructionError,
};
use crate::family::{verify, IntersectionLaw, LawKind, SetFamily};
use crate::oracle::{oracle_kappa, oracle_mu, SearchBudget, MAX_GROUND};

/// Families larger than this are not materialized as witnesses.
const WITNESS_GROUND_CAP: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Kappa,
    Mu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
    Exact,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
            Direction::Exact => "exact",
        })
    }
}

/// What is being bounded. `kappa` is over families of distinct members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundParams {
    Kappa { n: u64, m: u64, law: IntersectionLaw },
    Mu { n: u64, k: u64, law: IntersectionLaw },
}

impl BoundParams {
    pub fn quantity(&self) -> Quantity {
        match self {
            BoundParams::Kappa { .. } => Quantity::Kappa,
            BoundParams::Mu { .. } => Quantity::Mu,
        }
    }

    pub fn law(&self) -> &IntersectionLaw {
        match self {
            BoundParams::Kappa { law, .. } | BoundParams::Mu { law, .. } => law,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BoundParams::Kappa { n, m, law } => json!({"n": n, "m": m, "law": law.to_string(), "t": law.t()}),
            BoundParams::Mu { n, k, law } => json!({"n": n, "k": k, "law": law.to_string(), "t": law.t()}),
        }
    }
}

/// Which expensive hooks [`best_bounds`] may call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoundOptions {
    pub solver: Option<SolverBudget>,
    pub oracle: Option<SearchBudget>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundItem {
    pub value: Extended,
    pub dir: Direction,
    pub cite: Citation,
    pub note: String,
    pub witness: Option<SetFamily>,
    /// Reported but never used for the aggregate.
    pub heuristic: bool,
}

impl BoundItem {
    fn new(value: Extended, dir: Direction, cite: Citation, note: impl Into<String>) -> Self {
        BoundItem {
            value,
            dir,
            cite,
            note: note.into(),
            witness: None,
            heuristic: false,
        }
    }

    fn with_witness(mut self, witness: Option<SetFamily>) -> Self {
        self.witness = witness;
        self
    }

    fn bounds_below(&self) -> bool {
        !self.heuristic && matches!(self.dir, Direction::Lower | Direction::Exact)
    }

    fn bounds_above(&self) -> bool {
        !self.heuristic && matches!(self.dir, Direction::Upper | Direction::Exact)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub params: BoundParams,
    pub lower: Extended,
    pub upper: Extended,
    pub exact: Option<i64>,
    pub items: Vec<BoundItem>,
    /// Non-empty only if some lower item exceeds some upper item.
    pub diagnostics: Vec<String>,
}

impl BoundReport {
    pub fn quantity(&self) -> Quantity {
        self.params.quantity()
    }

    fn from_items(params: BoundParams, items: Vec<BoundItem>) -> Self {
        let lower = items
            .iter()
            .filter(|i| i.bounds_below())
            .map(|i| i.value)
            .max()
            .unwrap_or(Extended::NegInf);
        let upper = items
            .iter()
            .filter(|i| i.bounds_above())
            .map(|i| i.value)
            .min()
            .unwrap_or(Extended::PosInf);
        let mut diagnostics = Vec::new();
        for lo in items.iter().filter(|i| i.bounds_below()) {
            for hi in items.iter().filter(|i| i.bounds_above()) {
                if lo.value > hi.value {
                    diagnostics.push(format!(
                        "{} {} ({}) exceeds {} {} ({})",
                        lo.dir, lo.value, lo.cite, hi.dir, hi.value, hi.cite
                    ));
                }
            }
        }
        let exact = (lower == upper).then(|| lower.finite()).flatten();
        BoundReport {
            params,
            lower,
            upper,
            exact,
            items,
            diagnostics,
        }
    }

    /// The first witness attaining the aggregated lower bound.
    pub fn witness(&self) -> Option<&SetFamily> {
        self.items
            .iter()
            .filter(|i| i.bounds_below() && i.value == self.lower)
            .find_map(|i| i.witness.as_ref())
    }

    pub fn to_json(&self) -> Value {
        let ext = |e: Extended| e.finite();
        json!({
            "quantity": self.quantity(),
            "params": self.params.to_json(),
            "lower": ext(self.lower),
            "upper": ext(self.upper),
            "exact": self.exact,
            "items": self.items.iter().map(|i| json!({
                "value": ext(i.value),
                "dir": i.dir,
                "cite": i.cite,
                "note": i.note,
            })).collect::<Vec<_>>(),
        })
    }
}

fn fin(v: impl TryInto<i64>) -> Extended {
    v.try_into().map_or(Extended::PosInf, Extended::Finite)
}

fn usize_of(v: u64) -> Option<usize> {
    usize::try_from(v).ok()
}

/// A construction's output if it can be built cheaply and is valid for `law`
/// with distinct members, padded to ground set `n`.
fn checked(family: Option<SetFamily>, n: u64, law: &IntersectionLaw) -> Option<SetFamily> {
    let family = family?.with_ground(usize_of(n)?).ok()?;
    (family.distinct_required() && verify(&family, law).valid).then_some(family)
}

fn small(n: u64) -> bool {
    n as usize <= WITNESS_GROUND_CAP
}

/// Tightest interval for `kappa` or `mu` from every applicable formula and,
/// if asked, the solver and the oracle.
pub fn best_bounds(params: &BoundParams, options: &BoundOptions) -> Result<BoundReport, BoundsError> {
    let items = match params {
        BoundParams::Kappa { n, m, law } => kappa_items(*n, *m, law, options)?,
        BoundParams::Mu { n, k, law } => mu_items(*n, *k, law, options)?,
    };
    Ok(BoundReport::from_items(params.clone(), items))
}

fn kappa_items(n: u64, m: u64, law: &IntersectionLaw, options: &BoundOptions) -> Result<Vec<BoundItem>, BoundsError> {
    if n == 0 || m == 0 {
        return Err(BoundsError::OutOfDomain("kappa needs n >= 1 and m >= 1".into()));
    }
    let mut items = vec![BoundItem::new(
        fin(n),
        Direction::Upper,
        Citation::Trivial,
        "members are subsets of [n]",
    )];
    // m distinct k-sets need C(n, k) >= m.
    let fits = |k: u64| binom_checked(n, k).is_none_or(|c| c >= m as u128);
    let largest = (0..=n).rev().find(|&k| fits(k));
    match largest {
        Some(k) if k < n => items.push(BoundItem::new(
            fin(k),
            Direction::Upper,
            Citation::Trivial,
            format!("C(n,{}) < m distinct members", k + 1),
        )),
        Some(_) => {}
        None => {
            items.push(BoundItem::new(
                Extended::NegInf,
                Direction::Exact,
                Citation::Trivial,
                "C(n,k) < m for every k",
            ));
            return Ok(items);
        }
    }
    let t = law.t() as u64;
    if m == 1 || t > m {
        let k = largest.expect("checked above");
        let witness = (small(n) && m <= 64).then(|| {
            let sets = (0..m as usize).map(|i| nth_k_subset(n as u32, k as u32, i)).collect();
            SetFamily::new(n as usize, sets).expect("labels lie in [n]")
        });
        items.push(
            BoundItem::new(
                fin(k),
                Direction::Exact,
                Citation::Trivial,
                "fewer members than t: law is vacuous",
            )
            .with_witness(witness.filter(|w| w.has_distinct_members())),
        );
        return Ok(items);
    }

    match law.kind() {
        LawKind::Positive => positive_kappa(n, m, t, &mut items),
        _ => {
            let values = law.values().expect("finite law");
            let single = values.len() == 1;
            if t == 2 {
                for &l in &values {
                    pairwise_single_kappa(n, m, l as u64, single, law, &mut items);
                }
                if let LawKind::AtMost(1) = law.kind() {
                    if m == n && n >= 2 {
                        leq1_square(n, law, &mut items)?;
                    }
                }
            }
            twise_items(n, m, t, *values.last().expect("nonempty law") as u64, law, &mut items);
        }
    }
    hooks_kappa(n, m, law, options, &mut items);
    Ok(items)
}

/// The `i`-th `k`-subset of `[n]` in lexicographic order, wrapping around.
fn nth_k_subset(n: u32, k: u32, i: usize) -> Vec<u32> {
    use itertools::Itertools;
    (1..=n).combinations(k as usize).cycle().nth(i).unwrap_or_default()
}

fn positive_kappa(n: u64, m: u64, t: u64, items: &mut Vec<BoundItem>) {
    // Any t sets of size k with t(n - k) < n share a point: their complements cannot cover [n].
    let fits = |k: u64| binom_checked(n, k).is_none_or(|c| c >= m as u128);
    if let Some(k) = (1..=n).rev().filter(|&k| t * (n - k) < n).find(|&k| fits(k)) {
        items.push(BoundItem::new(
            fin(k),
            Direction::Lower,
            Citation::Trivial,
            "complements of t members cannot cover [n]",
        ));
    }
}

fn pairwise_single_kappa(n: u64, m: u64, l: u64, single: bool, law: &IntersectionLaw, items: &mut Vec<BoundItem>) {
    let dir_exact = if single { Direction::Exact } else { Direction::Lower };
    if let Ok((v, cite)) = kappa_exact_small_cited(l, n, m) {
        let witness = if l == 0 && small(n) {
            let k = (n / m) as u32;
            let sets = (0..m as u32).map(|i| (i * k + 1..=(i + 1) * k).collect()).collect();
            checked(SetFamily::new(n as usize, sets).ok(), n, law)
        } else {
            None
        };
        items.push(BoundItem::new(fin(v), dir_exact, cite, format!("l = {l}")).with_witness(witness));
    }
    if l >= 1 && m >= l {
        if let Ok(v) = kappa_lower_recursive(l, n, m) {
            if v != Extended::NegInf {
                items.push(BoundItem::new(
                    v,
                    Direction::Lower,
                    Citation::RecursiveLevels,
                    format!("l = {l}"),
                ));
            }
        }
    }
    if single && n > l {
        if let Ok(v) = kappa_upper_frac(l, n, m) {
            items.push(BoundItem::new(
                fin(v),
                Direction::Upper,
                Citation::FractionalRelaxation,
                format!("l = {l}"),
            ));
        }
    }
    if n >= m + l {
        let witness = if small(n) {
            checked(
                usize_of(m).zip(usize_of(l)).and_then(|(m, l)| sunflower(m, l).ok()),
                n,
                law,
            )
        } else {
            None
        };
        items.push(
            BoundItem::new(
                fin(l + 1),
                Direction::Lower,
                Citation::Sunflower,
                format!("core of {l}, n >= m + l"),
            )
            .with_witness(witness),
        );
    }
}

fn leq1_square(n: u64, law: &IntersectionLaw, items: &mut Vec<BoundItem>) -> Result<(), BoundsError> {
    let b = kappa_leq1_nn_bounds(n)?;
    let strip = if small(n) {
        let p = b.prime;
        let columns = n / p;
        let family = if columns == p {
            polynomial_curves(p, 1).ok()
        } else if columns >= 1 {
            affine_strip_trim(p, p - columns).ok()
        } else {
            None
        };
        checked(family.map(|f| f.truncated(n as usize)), n, law)
    } else {
        None
    };
    items.push(
        BoundItem::new(
            fin(b.lower),
            Direction::Lower,
            Citation::SquareRootSandwich,
            format!("p = {}", b.prime),
        )
        .with_witness(strip),
    );
    items.push(BoundItem::new(
        fin(b.upper),
        Direction::Upper,
        Citation::SquareRootSandwich,
        "k(k-1) <= n-1",
    ));
    if let (Some(q), Some(exact)) = (b.q, b.exact) {
        let plane = n == q * q + q + 1;
        let witness = if !small(n) || q > 64 {
            None
        } else if plane {
            checked(projective_plane(q).ok(), n, law)
        } else {
            checked(projective_trim(q, n).ok(), n, law)
        };
        let cite = if plane {
            Citation::ProjectivePlane
        } else {
            Citation::ProjectiveTrim
        };
        items.push(BoundItem::new(fin(exact), Direction::Exact, cite, format!("q = {q}")).with_witness(witness));
    }
    Ok(())
}

fn twise_items(n: u64, m: u64, t: u64, ls: u64, law: &IntersectionLaw, items: &mut Vec<BoundItem>) {
    let note = format!("t = {t}, l_s = {ls}");
    let build = |f: fn(usize, usize, usize, usize) -> Result<SetFamily, ConstructionError>| {
        if !small(n) {
            return None;
        }
        let args = (usize_of(n)?, usize_of(m)?, usize_of(t)?, usize_of(ls)?);
        checked(f(args.0, args.1, args.2, args.3).ok(), n, law)
    };
    if let Ok((lower, upper)) = kappa_twise_bounds(ls, n, m, t) {
        let witness = build(twise_shared_core);
        // The value only stands if the construction has distinct members,
        // which is checked whenever it is small enough to build.
        if witness.is_some() || !small(n) {
            items.push(
                BoundItem::new(fin(lower), Direction::Lower, Citation::SharedCorePacking, note.clone())
                    .with_witness(witness),
            );
        }
        items.push(BoundItem::new(
            fin(upper),
            Direction::Upper,
            Citation::TwiseCounting,
            note.clone(),
        ));
    }
    if let Ok(Some(exact)) = kappa_twise_exact(ls, n, m, t) {
        let witness = build(twise_disjoint_cores);
        if witness.is_some() || !small(n) {
            items.push(
                BoundItem::new(fin(exact), Direction::Lower, Citation::DisjointCores, note).with_witness(witness),
            );
        }
    }
}

fn hooks_kappa(n: u64, m: u64, law: &IntersectionLaw, options: &BoundOptions, items: &mut Vec<BoundItem>) {
    if let (Some(budget), Some(l)) = (options.solver, law.single_value()) {
        // The solver counts families with repeats allowed; they agree with
        // distinct families once n >= l + m.
        if law.t() == 2 && (2..=10).contains(&m) && n >= l as u64 + m {
            match solve_kappa_ilp_with(l as u64, m as usize, n, budget) {
                Ok(SolveOutcome::Optimal { value, .. }) => {
                    items.push(BoundItem::new(
                        fin(value),
                        Direction::Exact,
                        Citation::AssignmentSolver,
                        "optimal",
                    ));
                }
                Ok(SolveOutcome::Unknown { lower, upper, .. }) => {
                    items.push(BoundItem::new(
                        fin(lower),
                        Direction::Lower,
                        Citation::AssignmentSolver,
                        "budget exhausted",
                    ));
                    items.push(BoundItem::new(
                        fin(upper),
                        Direction::Upper,
                        Citation::AssignmentSolver,
                        "budget exhausted",
                    ));
                }
                Ok(SolveOutcome::Infeasible) => {
                    items.push(BoundItem::new(
                        Extended::NegInf,
                        Direction::Exact,
                        Citation::AssignmentSolver,
                        "infeasible",
                    ));
                }
                Err(_) => {}
            }
        }
    }
    if let Some(budget) = options.oracle {
        if (1..=MAX_GROUND as u64).contains(&n) {
            let r = oracle_kappa(n as usize, m as usize, law, true, budget);
            let value = r.value.map_or(Extended::NegInf, fin);
            if r.exact {
                items.push(
                    BoundItem::new(value, Direction::Exact, Citation::Oracle, format!("{} nodes", r.nodes))
                        .with_witness(r.witness),
                );
            } else if let Some(upper) = r.upper {
                items.push(BoundItem::new(
                    fin(upper),
                    Direction::Upper,
                    Citation::Oracle,
                    "budget exhausted",
                ));
            }
        }
    }
}

fn mu_items(n: u64, k: u64, law: &IntersectionLaw, options: &BoundOptions) -> Result<Vec<BoundItem>, BoundsError> {
    if n == 0 {
        return Err(BoundsError::OutOfDomain("mu needs n >= 1".into()));
    }
    let all = binom_checked(n, k).map_or(Extended::PosInf, fin);
    let mut items = vec![BoundItem::new(
        all,
        Direction::Upper,
        Citation::Trivial,
        "all k-subsets of [n]",
    )];
    if k > n {
        items.push(BoundItem::new(
            Extended::Finite(0),
            Direction::Exact,
            Citation::Trivial,
            "k > n",
        ));
        return Ok(items);
    }
    items.push(BoundItem::new(
        Extended::Finite(1),
        Direction::Lower,
        Citation::Trivial,
        "a single member",
    ));
    let t = law.t() as u64;

    if t == 2 {
        match law.kind() {
            LawKind::Positive => {
                if 2 * k > n {
                    items.push(BoundItem::new(
                        all,
                        Direction::Exact,
                        Citation::Trivial,
                        "2k > n: every pair meets",
                    ));
                } else if k >= 1 {
                    let star = binom_checked(n - 1, k - 1).map_or(Extended::PosInf, fin);
                    items.push(BoundItem::new(
                        star,
                        Direction::Lower,
                        Citation::ErdosKoRado,
                        "all k-sets through one point",
                    ));
                }
            }
            LawKind::AtMost(l) => {
                let l = *l as u64;
                if k <= l + 1 {
                    items.push(BoundItem::new(
                        all,
                        Direction::Exact,
                        Citation::Trivial,
                        "distinct k-sets meet in at most k-1",
                    ));
                } else if let Ok(v) = mu_upper_atmost(n, k, l) {
                    items.push(BoundItem::new(
                        fin(v),
                        Direction::Upper,
                        Citation::CountingAtMost,
                        format!("l = {l}"),
                    ));
                }
                if is_prime(k) && k > l && n >= k * k {
                    let witness = if small(n) && k.checked_pow(l as u32 + 1).is_some_and(|c| c <= 1 << 16) {
                        checked(polynomial_curves(k, l).ok(), n, law)
                    } else {
                        None
                    };
                    let count = k.checked_pow(l as u32 + 1).map_or(Extended::PosInf, fin);
                    items.push(
                        BoundItem::new(
                            count,
                            Direction::Lower,
                            Citation::PolynomialCurves,
                            format!("p = {k}, l = {l}"),
                        )
                        .with_witness(witness),
                    );
                }
            }
            LawKind::Exact(_) => {}
        }
        if law.values().as_deref() == Some(&[0]) && k >= 1 {
            items.push(BoundItem::new(
                fin(n / k),
                Direction::Exact,
                Citation::DisjointMembers,
                "pairwise disjoint members",
            ));
        }
        if law.admits(1) && k >= 3 {
            plane_items(n, k, law, &mut items);
        }
        if let Some(values) = law.values() {
            for l in values.into_iter().map(|l| l as u64).filter(|&l| l < k) {
                let petals = (n - l) / (k - l);
                if petals >= 2 {
                    items.push(BoundItem::new(
                        fin(petals),
                        Direction::Lower,
                        Citation::Sunflower,
                        format!("core of {l}, petals of {}", k - l),
                    ));
                }
            }
        }
        for b in mu_upper_classical(n, k, law) {
            let mut item = BoundItem::new(fin(b.value), Direction::Upper, b.cite, b.cite.describe());
            item.heuristic = b.heuristic;
            items.push(item);
        }
    }
    if let Some(budget) = options.oracle {
        if n <= MAX_GROUND as u64 {
            let r = oracle_mu(n as usize, k as usize, law, budget);
            let value = fin(r.value.unwrap_or(0));
            let dir = if r.exact { Direction::Exact } else { Direction::Lower };
            let note = if r.exact {
                format!("{} nodes", r.nodes)
            } else {
                "budget exhausted".to_string()
            };
            items.push(BoundItem::new(value, dir, Citation::Oracle, note).with_witness(r.witness));
        }
    }
    Ok(items)
}

/// Lines of a projective plane of order `q = k - 1`: `q^2 + q + 1` members
/// meeting pairwise in exactly one point.
fn plane_items(n: u64, k: u64, law: &IntersectionLaw, items: &mut Vec<BoundItem>) {
    let q = k - 1;
    let points = q * q + q + 1;
    if prime_power(q).is_none() || n < points {
        return;
    }
    let witness = if small(n) && q <= 32 {
        checked(projective_plane(q).ok(), n, law)
    } else {
        None
    };
    items.push(
        BoundItem::new(
            fin(points),
            Direction::Lower,
            Citation::ProjectivePlane,
            format!("q = {q}"),
        )
        .with_witness(witness),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kappa(n: u64, m: u64, law: &str) -> BoundReport {
        let params = BoundParams::Kappa {
            n,
            m,
            law: law.parse().unwrap(),
        };
        best_bounds(&params, &BoundOptions::default()).unwrap()
    }

    fn mu(n: u64, k: u64, law: &str) -> BoundReport {
        let params = BoundParams::Mu {
            n,
            k,
            law: law.parse().unwrap(),
        };
        best_bounds(&params, &BoundOptions::default()).unwrap()
    }

    fn cites(r: &BoundReport) -> Vec<Citation> {
        r.items.iter().map(|i| i.cite).collect()
    }

    #[test]
    fn kappa_three_members() {
        let r = kappa(9, 3, "exact:1");
        assert_eq!(r.exact, Some(4));
        for c in [
            Citation::ThreeMembers,
            Citation::RecursiveLevels,
            Citation::FractionalRelaxation,
        ] {
            assert!(cites(&r).contains(&c), "{c}");
        }
        assert!(r.diagnostics.is_empty());
    }

    #[test]
    fn kappa_disjoint() {
        let r = kappa(6, 3, "exact:0");
        assert_eq!(r.exact, Some(2));
        let w = r.witness().unwrap();
        assert_eq!(w.uniform_size(), Some(2));
    }

    #[test]
    fn kappa_square_root() {
        let r = kappa(7, 7, "atmost:1");
        assert_eq!(r.exact, Some(3));
        assert!(verify(r.witness().unwrap(), &IntersectionLaw::at_most(1)).valid);
        let r = kappa(8, 8, "atmost:1");
        assert_eq!(
            (r.lower, r.upper, r.exact),
            (Extended::Finite(2), Extended::Finite(3), None)
        );
    }

    #[test]
    fn kappa_twise() {
        let law = IntersectionLaw::single(1).with_t(3).unwrap();
        let params = BoundParams::Kappa { n: 9, m: 4, law };
        let r = best_bounds(&params, &BoundOptions::default()).unwrap();
        assert_eq!(r.exact, Some(5));
    }

    #[test]
    fn mu_at_most_one() {
        let r = mu(4, 2, "atmost:1");
        assert_eq!(r.upper, Extended::Finite(6));
        let r = mu(9, 3, "atmost:1");
        assert_eq!(r.upper, Extended::Finite(12));
        assert_eq!(r.lower, Extended::Finite(9));
        assert!(cites(&r).contains(&Citation::PolynomialCurves));
    }

    #[test]
    fn mu_curves_lower() {
        let r = mu(4, 2, "atmost:1");
        let curves = r.items.iter().find(|i| i.cite == Citation::PolynomialCurves).unwrap();
        assert_eq!(curves.value, Extended::Finite(4));
        assert_eq!(curves.witness.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn heuristic_items_never_set_the_upper() {
        let r = mu(100, 3, "exact:1,2");
        let def = r.items.iter().find(|i| i.cite == Citation::DezaErdosFrankl).unwrap();
        assert!(def.heuristic);
        assert_eq!(r.upper, Extended::Finite(4851));
    }

    #[test]
    fn hooks_tighten() {
        let params = BoundParams::Kappa {
            n: 8,
            m: 8,
            law: IntersectionLaw::at_most(1),
        };
        let options = BoundOptions {
            solver: None,
            oracle: Some(SearchBudget::default()),
        };
        let r = best_bounds(&params, &options).unwrap();
        assert_eq!(r.exact, Some(3));

        let params = BoundParams::Kappa {
            n: 20,
            m: 5,
            law: IntersectionLaw::single(2),
        };
        let options = BoundOptions {
            solver: Some(SolverBudget::default()),
            oracle: None,
        };
        let r = best_bounds(&params, &options).unwrap();
        assert!(r.exact.is_some());
        assert!(r.diagnostics.is_empty());
    }

    #[test]
    fn json_shape() {
        let v = kappa(8, 8, "atmost:1").to_json();
        assert_eq!(v["quantity"], "kappa");
        assert_eq!(v["exact"], Value::Null);
        assert_eq!(v["params"]["law"], "atmost:1");
        assert!(v["items"]
            .as_array()
            .unwrap()
            .iter()
            .all(|i| i["dir"].is_string() && i["cite"].is_string()));
        let v = mu(5, 2, "positive").to_json();
        assert_eq!(v["items"][0]["dir"], "upper");
    }

    #[test]
    fn infinite_values_serialize_as_null() {
        let r = kappa(2, 5, "exact:1");
        assert_eq!(r.exact, None);
        assert_eq!(r.lower, Extended::NegInf);
        assert_eq!(r.to_json()["lower"], Value::Null);
    }
}
