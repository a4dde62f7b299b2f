//! Balanced fractional assignments: the level linear program, symmetrization
//! and the three-level exchange inequality.

use num_traits::Zero;
use serde_json::{json, Value};

use super::{AssignmentError, FracAssignment, Weight};
use crate::arith::{binom, Rational};

fn rb(n: i64, k: i64) -> Rational {
    Rational::from_integer(binom(n, k))
}

/// Values `phi(0..=m)` of a balanced assignment, one per subset size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelProfile {
    pub m: usize,
    pub levels: Vec<Rational>,
}

impl LevelProfile {
    /// `Σ C(m, i) phi(i)`.
    pub fn ground(&self) -> Rational {
        self.weighted(|i| rb(self.m as i64, i))
    }

    /// `Σ C(m-2, i-2) phi(i)`.
    pub fn pair(&self) -> Rational {
        self.weighted(|i| rb(self.m as i64 - 2, i - 2))
    }

    /// `Σ C(m-1, i-1) phi(i)`, the member size.
    pub fn value(&self) -> Rational {
        self.weighted(|i| rb(self.m as i64 - 1, i - 1))
    }

    fn weighted(&self, coeff: impl Fn(i64) -> Rational) -> Rational {
        self.levels.iter().enumerate().map(|(i, v)| coeff(i as i64) * v).sum()
    }

    /// Levels carrying positive weight.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.m).filter(|&i| self.levels[i] > Rational::zero()).collect()
    }

    pub fn to_assignment(&self) -> FracAssignment {
        FracAssignment::from_levels(self.m, &self.levels).expect("m + 1 levels")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "levels": self.levels.iter().map(Weight::to_json).collect::<Vec<_>>(),
            "value": self.value().to_json(),
        })
    }
}

/// Best basic solution of the level program
/// `max Σ C(m-1,i-1) x_i` s.t. `Σ C(m,i) x_i = n`, `Σ C(m-2,i-2) x_i = l`,
/// `x >= 0`, found by enumerating every support of size one or two.
/// For `m = 1` the pair equation is void and dropped.
pub fn balanced_fractional_optimum(l: Rational, m: usize, n: Rational) -> Result<LevelProfile, AssignmentError> {
    if m == 0 || l < Rational::zero() || n <= l {
        return Err(AssignmentError::OutOfDomain(format!(
            "needs m >= 1 and n > l >= 0, got m = {m}, l = {l}, n = {n}"
        )));
    }
    let mi = m as i64;
    let row1 = |i: usize| rb(mi, i as i64);
    let row2 = |i: usize| {
        if m == 1 {
            Rational::zero()
        } else {
            rb(mi - 2, i as i64 - 2)
        }
    };
    let rhs2 = if m == 1 { Rational::zero() } else { l };
    let mut best: Option<LevelProfile> = None;
    let mut consider = |levels: Vec<Rational>| {
        let candidate = LevelProfile { m, levels };
        if best.as_ref().is_none_or(|b| candidate.value() > b.value()) {
            best = Some(candidate);
        }
    };
    for i in 0..=m {
        let x = n / row1(i);
        if x >= Rational::zero() && row2(i) * x == rhs2 {
            let mut levels = vec![Rational::zero(); m + 1];
            levels[i] = x;
            consider(levels);
        }
    }
    for i in 0..=m {
        for j in i + 1..=m {
            let det = row1(i) * row2(j) - row1(j) * row2(i);
            if det.is_zero() {
                continue;
            }
            let x = (n * row2(j) - row1(j) * rhs2) / det;
            let y = (row1(i) * rhs2 - row2(i) * n) / det;
            if x > Rational::zero() && y > Rational::zero() {
                let mut levels = vec![Rational::zero(); m + 1];
                levels[i] = x;
                levels[j] = y;
                consider(levels);
            }
        }
    }
    best.ok_or_else(|| AssignmentError::OutOfDomain("level program is infeasible".into()))
}

/// Averages `phi` over each subset size. Preserves the assignment equations
/// and the value; the result is balanced.
pub fn symmetrize(phi: &FracAssignment) -> Result<FracAssignment, AssignmentError> {
    if phi.assignment_params().is_none() {
        return Err(AssignmentError::Invalid("symmetrize needs a valid assignment".into()));
    }
    let m = phi.m();
    let mut sums = vec![Rational::zero(); m + 1];
    for (mask, v) in phi.values().iter().enumerate() {
        sums[mask.count_ones() as usize] += v;
    }
    let levels: Vec<Rational> = sums
        .iter()
        .enumerate()
        .map(|(i, s)| s / rb(m as i64, i as i64))
        .collect();
    FracAssignment::from_levels(m, &levels)
}

/// For `0 <= r < s < t <= m`, solves
/// `C(m,r) a + C(m,t) b = C(m,s)`, `C(m-2,r-2) a + C(m-2,t-2) b = C(m-2,s-2)`
/// and reports whether `C(m-1,r-1) a + C(m-1,t-1) b < C(m-1,s-1)`: moving
/// weight from levels `r` and `t` onto `s` strictly gains value.
pub fn lrst_check(r: usize, s: usize, t: usize, m: usize) -> Result<bool, AssignmentError> {
    if !(r < s && s < t && t <= m) {
        return Err(AssignmentError::OutOfDomain(format!(
            "needs 0 <= r < s < t <= m, got {r}, {s}, {t}, {m}"
        )));
    }
    let (r, s, t, m) = (r as i64, s as i64, t as i64, m as i64);
    let det = rb(m, r) * rb(m - 2, t - 2) - rb(m, t) * rb(m - 2, r - 2);
    if det.is_zero() {
        return Err(AssignmentError::OutOfDomain("degenerate exchange system".into()));
    }
    let alpha = (rb(m, s) * rb(m - 2, t - 2) - rb(m, t) * rb(m - 2, s - 2)) / det;
    let beta = (rb(m, r) * rb(m - 2, s - 2) - rb(m, s) * rb(m - 2, r - 2)) / det;
    Ok(rb(m - 1, r - 1) * alpha + rb(m - 1, t - 1) * beta < rb(m - 1, s - 1))
}
