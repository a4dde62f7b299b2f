//! Exact maximization of `v(phi)` over integer `(l, m, n)`-assignments.
//!
//! For a target value `k` the pair and singleton values are forced by the
//! values `y_A = phi(A)` on subsets with `|A| >= 3`:
//!
//! * `phi({x,y}) = l - P(x,y)` with `P(x,y) = Σ_{A ⊇ {x,y}} y_A`,
//! * `phi({x}) = k - (m-1) l + Σ_{A ∋ x} (|A| - 2) y_A`,
//! * `phi(∅) = n - m k + C(m,2) l - Σ_A C(|A|-1, 2) y_A`.
//!
//! So `k` is attainable iff some `y >= 0` keeps every pair load at most `l`,
//! gives every member coverage `Σ_{A ∋ x} (|A|-2) y_A >= (m-1) l - k`, and
//! spends at most `n - m k + C(m,2) l` of the budget `Σ C(|A|-1,2) y_A`.
//! The search is a depth-first branch over `y` with capacity and budget
//! pruning; `k` goes down from a start bound to the first attainable value.

use itertools::Itertools;

use super::{check_assignment, Assignment, AssignmentError, MAX_MEMBERS};
use crate::arith::binom;
use crate::bounds::kappa_upper_frac;

/// Where the downward scan over `k` starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartBound {
    /// `floor` of the fractional relaxation.
    #[default]
    Fractional,
    /// `floor((n + C(m,2) l) / m)`, read off the budget equation alone.
    Counting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverBudget {
    pub max_nodes: u64,
    pub start: StartBound,
}

impl Default for SolverBudget {
    fn default() -> Self {
        SolverBudget {
            max_nodes: 50_000_000,
            start: StartBound::Fractional,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Optimal {
        value: i64,
        witness: Assignment,
        nodes: u64,
    },
    Infeasible,
    /// The node budget ran out while deciding `upper`; `lower` is attained.
    Unknown {
        lower: i64,
        upper: i64,
        nodes: u64,
    },
}

impl SolveOutcome {
    pub fn value(&self) -> Option<i64> {
        match self {
            SolveOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

pub fn solve_kappa_ilp(l: u64, m: usize, n: u64) -> Result<SolveOutcome, AssignmentError> {
    solve_kappa_ilp_with(l, m, n, SolverBudget::default())
}

struct Var {
    mask: usize,
    cover: i64,
    cost: i64,
    pairs: Vec<usize>,
    /// Index of the variable this one may not exceed (symmetry breaking).
    bounded_by: Option<usize>,
}

struct Search<'a> {
    m: usize,
    l: i64,
    vars: &'a [Var],
    deficit: i64,
    pair_load: Vec<i64>,
    coverage: Vec<i64>,
    budget: i64,
    values: Vec<i64>,
    nodes: u64,
    max_nodes: u64,
    exhausted: bool,
}

fn pair_index(m: usize, x: usize, y: usize) -> usize {
    x * m + y
}

impl Search<'_> {
    fn missing(&self) -> i64 {
        self.coverage.iter().map(|&c| (self.deficit - c).max(0)).sum()
    }

    fn cap(&self, var: &Var) -> i64 {
        let pair_cap = var.pairs.iter().map(|&p| self.l - self.pair_load[p]).min().unwrap_or(0);
        let mut cap = pair_cap.min(self.budget / var.cost);
        if let Some(j) = var.bounded_by {
            cap = cap.min(self.values[j]);
        }
        cap
    }

    /// Whether the variables from `idx` on can still close every deficit.
    fn can_finish(&self, idx: usize) -> bool {
        let missing = self.missing();
        if missing == 0 {
            return true;
        }
        // each unit of a 3-set covers 3 at cost 1; larger sets cover less per cost
        if missing > 3 * self.budget {
            return false;
        }
        let mut reach = vec![0i64; self.m];
        for var in &self.vars[idx..] {
            let cap = var
                .pairs
                .iter()
                .map(|&p| self.l - self.pair_load[p])
                .min()
                .unwrap_or(0)
                .min(self.budget / var.cost);
            if cap > 0 {
                for (x, r) in reach.iter_mut().enumerate() {
                    if var.mask >> x & 1 == 1 {
                        *r += var.cover * cap;
                    }
                }
            }
        }
        (0..self.m).all(|x| self.coverage[x] + reach[x] >= self.deficit)
    }

    fn apply(&mut self, idx: usize, delta: i64) {
        let var = &self.vars[idx];
        for &p in &var.pairs {
            self.pair_load[p] += delta;
        }
        for x in 0..self.m {
            if var.mask >> x & 1 == 1 {
                self.coverage[x] += var.cover * delta;
            }
        }
        self.budget -= var.cost * delta;
        self.values[idx] += delta;
    }

    fn dfs(&mut self, idx: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.exhausted = true;
            return false;
        }
        if self.missing() == 0 {
            return true;
        }
        if idx == self.vars.len() || !self.can_finish(idx) {
            return false;
        }
        let cap = self.cap(&self.vars[idx]);
        for value in (0..=cap).rev() {
            self.apply(idx, value);
            let found = self.dfs(idx + 1);
            if found {
                return true;
            }
            self.apply(idx, -value);
            if self.exhausted {
                return false;
            }
        }
        false
    }
}

fn variables(m: usize) -> Vec<Var> {
    let mut masks: Vec<usize> = (0..1usize << m).filter(|mask| mask.count_ones() >= 3).collect();
    masks.sort_by_key(|&mask| (std::cmp::Reverse(mask.count_ones()), std::cmp::Reverse(mask)));
    let full = (1usize << m) - 1;
    let mut vars: Vec<Var> = masks
        .iter()
        .map(|&mask| {
            let size = mask.count_ones() as i64;
            let members: Vec<usize> = (0..m).filter(|&x| mask >> x & 1 == 1).collect();
            let pairs = members
                .iter()
                .tuple_combinations()
                .map(|(&x, &y)| pair_index(m, x, y))
                .collect();
            Var {
                mask,
                cover: size - 2,
                cost: binom(size - 1, 2) as i64,
                pairs,
                bounded_by: None,
            }
        })
        .collect();
    // the (m-1)-sets come as [M-{1}, M-{2}, ...]; sorting members by the
    // value of their complement keeps these nonincreasing
    if m >= 4 {
        let positions: Vec<usize> = (0..m)
            .map(|x| vars.iter().position(|v| v.mask == full & !(1 << x)).expect("present"))
            .collect();
        for w in positions.windows(2) {
            vars[w[1]].bounded_by = Some(w[0]);
        }
    }
    vars
}

/// Lexicographically smallest image of `phi` under member permutations,
/// comparing subsets by size and then by mask. Skipped above 7 members.
fn canonical(phi: &Assignment) -> Assignment {
    let m = phi.m();
    if m > 7 {
        return phi.clone();
    }
    let mut order: Vec<usize> = (0..1usize << m).collect();
    order.sort_by_key(|&mask| (mask.count_ones(), mask));
    let permute = |perm: &[usize]| -> Assignment {
        let mut out = Assignment::zeros(m).expect("small m");
        for (mask, &v) in phi.values().iter().enumerate() {
            let image = (0..m)
                .filter(|&x| mask >> x & 1 == 1)
                .fold(0, |acc, x| acc | 1 << perm[x]);
            out.set(image, v);
        }
        out
    };
    let key = |a: &Assignment| order.iter().map(|&mask| *a.get(mask)).collect::<Vec<_>>();
    (0..m)
        .permutations(m)
        .map(|perm| permute(&perm))
        .min_by_key(key)
        .expect("at least one permutation")
}

/// Maximum `v(phi)` over integer `(l, m, n)`-assignments.
pub fn solve_kappa_ilp_with(l: u64, m: usize, n: u64, budget: SolverBudget) -> Result<SolveOutcome, AssignmentError> {
    if m == 0 {
        return Err(AssignmentError::OutOfDomain("m must be at least 1".into()));
    }
    if m > MAX_MEMBERS.min(10) {
        return Err(AssignmentError::TooManyMembers(m));
    }
    let (li, ni, mi) = (l as i64, n as i64, m as i64);
    let full = (1usize << m) - 1;
    if m == 1 {
        let mut witness = Assignment::zeros(1)?;
        witness.set(1, ni);
        return Ok(SolveOutcome::Optimal {
            value: ni,
            witness,
            nodes: 0,
        });
    }
    if n < l {
        return Ok(SolveOutcome::Infeasible);
    }
    let start = if n == l {
        li
    } else {
        let bound = match budget.start {
            StartBound::Fractional => {
                kappa_upper_frac(l, n, m as u64).map_err(|e| AssignmentError::OutOfDomain(e.to_string()))?
            }
            StartBound::Counting => (ni + binom(mi, 2) as i64 * li) / mi,
        };
        bound.min(ni)
    };

    let vars = variables(m);
    let mut nodes = 0;
    for k in (li..=start).rev() {
        let budget_left = ni - mi * k + binom(mi, 2) as i64 * li;
        if budget_left < 0 {
            continue;
        }
        let mut search = Search {
            m,
            l: li,
            vars: &vars,
            deficit: (mi - 1) * li - k,
            pair_load: vec![0; m * m],
            coverage: vec![0; m],
            budget: budget_left,
            values: vec![0; vars.len()],
            nodes: 0,
            max_nodes: budget.max_nodes.saturating_sub(nodes),
            exhausted: false,
        };
        let found = search.dfs(0);
        nodes += search.nodes;
        if search.exhausted {
            return Ok(SolveOutcome::Unknown {
                lower: li,
                upper: k,
                nodes,
            });
        }
        if found {
            let mut phi = Assignment::zeros(m)?;
            for (var, &y) in vars.iter().zip(&search.values) {
                phi.set(var.mask, y);
            }
            for (x, y) in (0..m).tuple_combinations() {
                phi.set(1 << x | 1 << y, li - search.pair_load[pair_index(m, x, y)]);
            }
            for x in 0..m {
                phi.set(1 << x, k - (mi - 1) * li + search.coverage[x]);
            }
            phi.set(0, search.budget);
            debug_assert!(phi.get(full) >= &0);
            let witness = canonical(&phi);
            let check = check_assignment(&witness, &li, m, &ni)?;
            assert!(
                check.valid && check.value == Some(k),
                "solver produced an invalid assignment"
            );
            return Ok(SolveOutcome::Optimal {
                value: k,
                witness,
                nodes,
            });
        }
    }
    unreachable!("k = l is always attainable when n >= l")
}
