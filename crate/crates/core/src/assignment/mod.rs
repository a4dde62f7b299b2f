//! Element signatures of `{l}`-intersecting uniform families.
//!
//! For a family `F_1, ..., F_m` on `[n]`, the signature of an element `a` is
//! `{i : a ∈ F_i}`. Counting elements per signature gives an *assignment*
//! `phi : 2^[m] -> N` with
//!
//! * `Σ_A phi(A) = n`,
//! * `Σ_{A ∋ x} phi(A) = v` for every `x` (the common member size),
//! * `Σ_{A ⊇ {x,y}} phi(A) = l` for every pair `x ≠ y`.
//!
//! Differences of assignments are *extenders*: integer maps with total 0,
//! equal element sums `v(tau)` and zero pair sums.
//!
//! Subsets of `[m]` are bitmasks; bit `i` stands for member `i + 1`.

mod fractional;
mod solver;
mod tables;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::arith::Rational;
use crate::family::SetFamily;

pub use fractional::{balanced_fractional_optimum, lrst_check, symmetrize, LevelProfile};
pub use solver::{solve_kappa_ilp, solve_kappa_ilp_with, SolveOutcome, SolverBudget, StartBound};
pub use tables::{
    builtin_extender_tables, four_member_optimum, three_member_optimum, two_member_optimum, ExtenderTable, TableRow,
};

/// Largest `m` for which maps over all `2^m` subsets are built.
pub const MAX_MEMBERS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignmentError {
    #[error("expected {expected} values (one per subset), got {got}")]
    DomainSize { expected: usize, got: usize },
    #[error("maps over different member counts ({0} and {1})")]
    MemberMismatch(usize, usize),
    #[error("m = {0} exceeds the supported {MAX_MEMBERS}")]
    TooManyMembers(usize),
    #[error("not a valid assignment: {0}")]
    Invalid(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
}

/// Scalar for assignment values: `i64` or exact rationals.
pub trait Weight:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_int(v: i64) -> Self;
    fn to_json(&self) -> Value;
}

impl Weight for i64 {
    fn from_int(v: i64) -> Self {
        v
    }

    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl Weight for Rational {
    fn from_int(v: i64) -> Self {
        Rational::from_integer(v as i128)
    }

    /// Integers as JSON numbers, other values as `["p", "q"]`.
    fn to_json(&self) -> Value {
        if self.is_integer() {
            match i64::try_from(*self.numer()) {
                Ok(v) => json!(v),
                Err(_) => json!([self.numer().to_string(), "1"]),
            }
        } else {
            json!([self.numer().to_string(), self.denom().to_string()])
        }
    }
}

/// A value for every subset of `[m]`, indexed by bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsetMap<T> {
    m: usize,
    values: Vec<T>,
}

pub type Assignment = SubsetMap<i64>;
pub type FracAssignment = SubsetMap<Rational>;
pub type Extender = SubsetMap<i64>;

fn check_members(m: usize) -> Result<(), AssignmentError> {
    if m > MAX_MEMBERS {
        return Err(AssignmentError::TooManyMembers(m));
    }
    Ok(())
}

impl<T: Weight> SubsetMap<T> {
    pub fn new(m: usize, values: Vec<T>) -> Result<Self, AssignmentError> {
        check_members(m)?;
        if values.len() != 1 << m {
            return Err(AssignmentError::DomainSize {
                expected: 1 << m,
                got: values.len(),
            });
        }
        Ok(SubsetMap { m, values })
    }

    pub fn zeros(m: usize) -> Result<Self, AssignmentError> {
        check_members(m)?;
        Ok(SubsetMap {
            m,
            values: vec![T::zero(); 1 << m],
        })
    }

    /// The balanced map taking `levels[|A|]` on every `A`.
    pub fn from_levels(m: usize, levels: &[T]) -> Result<Self, AssignmentError> {
        check_members(m)?;
        if levels.len() != m + 1 {
            return Err(AssignmentError::DomainSize {
                expected: m + 1,
                got: levels.len(),
            });
        }
        let values = (0..1usize << m)
            .map(|mask| levels[mask.count_ones() as usize].clone())
            .collect();
        Ok(SubsetMap { m, values })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, mask: usize) -> &T {
        &self.values[mask]
    }

    pub fn set(&mut self, mask: usize, value: T) {
        self.values[mask] = value;
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    fn sum_where(&self, pred: impl Fn(usize) -> bool) -> T {
        self.values
            .iter()
            .enumerate()
            .filter(|&(mask, _)| pred(mask))
            .fold(T::zero(), |acc, (_, v)| acc + v.clone())
    }

    /// `Σ_{A ∋ x} phi(A)` for 0-based member `x`.
    pub fn element_sum(&self, x: usize) -> T {
        self.sum_where(|mask| mask >> x & 1 == 1)
    }

    /// `Σ_{A ⊇ {x, y}} phi(A)` for 0-based members `x ≠ y`.
    pub fn pair_sum(&self, x: usize, y: usize) -> T {
        let both = 1 << x | 1 << y;
        self.sum_where(|mask| mask & both == both)
    }

    /// Common element sum and common pair sum, if both exist. For `m <= 1`
    /// the pair sum is reported as 0.
    fn regular_sums(&self) -> Option<(T, T)> {
        if self.m == 0 {
            return Some((T::zero(), T::zero()));
        }
        let v = self.element_sum(0);
        if (1..self.m).any(|x| self.element_sum(x) != v) {
            return None;
        }
        if self.m == 1 {
            return Some((v, T::zero()));
        }
        let l = self.pair_sum(0, 1);
        for x in 0..self.m {
            for y in x + 1..self.m {
                if self.pair_sum(x, y) != l {
                    return None;
                }
            }
        }
        Some((v, l))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| *v >= T::zero())
    }

    /// `(l, n, v)` if this is a valid assignment for some `l` and `n`.
    pub fn assignment_params(&self) -> Option<(T, T, T)> {
        if !self.is_nonnegative() {
            return None;
        }
        let (v, l) = self.regular_sums()?;
        Some((l, self.total(), v))
    }

    pub fn is_balanced(&self) -> bool {
        self.levels().is_some()
    }

    /// Per-level values when balanced.
    pub fn levels(&self) -> Option<Vec<T>> {
        let mut levels: Vec<Option<T>> = vec![None; self.m + 1];
        for (mask, v) in self.values.iter().enumerate() {
            match &levels[mask.count_ones() as usize] {
                Some(seen) if seen != v => return None,
                Some(_) => {}
                None => levels[mask.count_ones() as usize] = Some(v.clone()),
            }
        }
        Some(
            levels
                .into_iter()
                .map(|v| v.expect("every level is populated"))
                .collect(),
        )
    }

    pub fn try_add(&self, other: &SubsetMap<T>) -> Result<SubsetMap<T>, AssignmentError> {
        if self.m != other.m {
            return Err(AssignmentError::MemberMismatch(self.m, other.m));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(SubsetMap { m: self.m, values })
    }

    /// `{"m": .., "phi": {"<mask>": ..}, "value": ..}` with every mask listed.
    pub fn to_json(&self, value: Option<&T>) -> Value {
        let phi: Map<String, Value> = self
            .values
            .iter()
            .enumerate()
            .map(|(mask, v)| (mask.to_string(), v.to_json()))
            .collect();
        json!({
            "m": self.m,
            "phi": phi,
            "value": value.map_or(Value::Null, Weight::to_json),
        })
    }
}

impl FracAssignment {
    pub fn from_integral(phi: &Assignment) -> Self {
        SubsetMap {
            m: phi.m,
            values: phi.values.iter().map(|&v| Rational::from_integer(v as i128)).collect(),
        }
    }
}

/// Subset label like `∅`, `1`, `13`, `{1,10}` for display.
pub fn subset_label(mask: usize, m: usize) -> String {
    if mask == 0 {
        return "∅".to_string();
    }
    let members: Vec<String> = (0..m)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    if m < 10 {
        members.concat()
    } else {
        format!("{{{}}}", members.join(","))
    }
}

/// Result of checking the assignment or extender equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check<T> {
    pub valid: bool,
    /// The common element sum when `valid`.
    pub value: Option<T>,
}

/// Whether `phi` is a nonnegative `(l, m, n)`-assignment.
pub fn check_assignment<T: Weight>(phi: &SubsetMap<T>, l: &T, m: usize, n: &T) -> Result<Check<T>, AssignmentError> {
    if phi.m != m {
        return Err(AssignmentError::MemberMismatch(phi.m, m));
    }
    let ok = match phi.assignment_params() {
        Some((pl, pn, v)) if pn == *n && (m < 2 || pl == *l) => Some(v),
        _ => None,
    };
    Ok(Check {
        valid: ok.is_some(),
        value: ok,
    })
}

/// Whether `tau` has total 0, equal element sums and zero pair sums.
pub fn check_extender<T: Weight>(tau: &SubsetMap<T>) -> Check<T> {
    let ok = match tau.regular_sums() {
        Some((v, l)) if l.is_zero() && tau.total().is_zero() => Some(v),
        _ => None,
    };
    Check {
        valid: ok.is_some(),
        value: ok,
    }
}

/// Whether `phi + tau` stays nonnegative; with `phi` an assignment and `tau`
/// an extender this is exactly "`phi + tau` is an assignment".
pub fn is_compatible<T: Weight>(phi: &SubsetMap<T>, tau: &SubsetMap<T>) -> Result<bool, AssignmentError> {
    if phi.m != tau.m {
        return Err(AssignmentError::MemberMismatch(phi.m, tau.m));
    }
    Ok(phi
        .values
        .iter()
        .zip(&tau.values)
        .all(|(a, b)| a.clone() + b.clone() >= T::zero()))
}

/// `lighter ≼ heavier`: every negative entry of `lighter` is at least the
/// corresponding entry of `heavier`. Anything compatible with `heavier`'s
/// negative part is then compatible with `lighter`'s.
pub fn precedes<T: Weight>(lighter: &SubsetMap<T>, heavier: &SubsetMap<T>) -> Result<bool, AssignmentError> {
    if lighter.m != heavier.m {
        return Err(AssignmentError::MemberMismatch(lighter.m, heavier.m));
    }
    Ok(lighter
        .values
        .iter()
        .zip(&heavier.values)
        .all(|(a, b)| *a >= T::zero() || a >= b))
}

/// Signature counts of a uniform family whose pairwise intersections all
/// have one common size.
pub fn from_family(family: &SetFamily) -> Result<Assignment, AssignmentError> {
    let m = family.len();
    check_members(m)?;
    if m == 0 {
        return Err(AssignmentError::Invalid("empty family".into()));
    }
    if family.uniform_size().is_none() {
        return Err(AssignmentError::Invalid("family is not uniform".into()));
    }
    let mut signature = vec![0usize; family.n() + 1];
    for (i, set) in family.sets().iter().enumerate() {
        for &e in set {
            signature[e as usize] |= 1 << i;
        }
    }
    let mut phi = Assignment::zeros(m)?;
    for &mask in &signature[1..] {
        phi.values[mask] += 1;
    }
    if phi.regular_sums().is_none() {
        return Err(AssignmentError::Invalid("pairwise intersections differ in size".into()));
    }
    Ok(phi)
}

/// The family realizing `phi`: `phi(A)` fresh elements per subset `A`, taken
/// in increasing mask order; member `i` collects the elements whose subset
/// contains `i`. Members may coincide, so `distinct_required` is false.
pub fn to_family(phi: &Assignment) -> Result<SetFamily, AssignmentError> {
    let (_, n, _) = phi
        .assignment_params()
        .ok_or_else(|| AssignmentError::Invalid("sums are not regular or a value is negative".into()))?;
    if n <= 0 {
        return Err(AssignmentError::Invalid(
            "an assignment with total 0 has no ground set".into(),
        ));
    }
    let mut sets = vec![Vec::new(); phi.m];
    let mut next = 1u32;
    for (mask, &count) in phi.values.iter().enumerate() {
        for e in next..next + count as u32 {
            for (i, set) in sets.iter_mut().enumerate() {
                if mask >> i & 1 == 1 {
                    set.push(e);
                }
            }
        }
        next += count as u32;
    }
    SetFamily::with_distinct(n as usize, sets, false).map_err(|e| AssignmentError::Invalid(e.to_string()))
}
