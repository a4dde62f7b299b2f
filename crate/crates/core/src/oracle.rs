//! Exhaustive search on small instances.
//!
//! `oracle_kappa` and `oracle_mu` evaluate the definitions directly: members
//! are `k`-subsets of `[n]` held as `u64` masks, the first member is pinned to
//! `{1, ..., k}` and the remaining ones are found by a clique search over the
//! pairwise-compatibility graph. `oracle_assignment` enumerates integer
//! assignments with no reformulation beyond forcing the pair and singleton
//! values.

use std::time::{Duration, Instant};

use itertools::Itertools;
use serde_json::{json, Value};

use crate::family::{IntersectionLaw, LawKind, SetFamily};

/// Largest ground set the masks can hold.
pub const MAX_GROUND: usize = 64;

/// Vertex count above which the compatibility graph is not built.
pub const MAX_VERTICES: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            time_limit: None,
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            time_limit: None,
        }
    }
}

/// Outcome of an exhaustive search.
///
/// When `exact` is false the search ran out of budget: `value` is then the
/// best value certified so far and `upper` the best upper bound proven.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    /// The optimum, `None` meaning no family exists (`-inf`) or, if not
    /// exact, that nothing was certified.
    pub value: Option<u64>,
    pub upper: Option<u64>,
    pub exact: bool,
    pub witness: Option<SetFamily>,
    pub nodes: u64,
    pub millis: u128,
}

impl OracleResult {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value,
            "exact": self.exact,
            "witness": self.witness.as_ref().map(SetFamily::to_json),
            "nodes": self.nodes,
            "millis": self.millis as u64,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not_assign(&mut self, other: &Bits) {
        self.0.iter_mut().zip(&other.0).for_each(|(a, b)| *a &= !b);
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.0[i].trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }
}

struct Abort;

/// Members are `k`-subsets; `verts[0]` is `{1, ..., k}` and every other
/// vertex is pairwise compatible with it.
struct Search<'a> {
    law: &'a IntersectionLaw,
    /// Whether joining members needs the `t`-wise check.
    t_wise: bool,
    verts: Vec<u64>,
    /// Compatibility between different vertices; no loops.
    adj: Vec<Bits>,
    /// Whether a member is compatible with a copy of itself.
    self_ok: bool,
    nodes: u64,
    budget: SearchBudget,
    start: Instant,
}

impl<'a> Search<'a> {
    /// Keeps only the vertices compatible with the pinned first member.
    fn build(
        n: usize,
        k: usize,
        law: &'a IntersectionLaw,
        mode: Mode,
        budget: SearchBudget,
        start: Instant,
        nodes: u64,
    ) -> Option<Self> {
        let pinned: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let pair_ok = pair_predicate(law, mode);
        let t_wise = mode == Mode::Twise;
        let mut verts = vec![pinned];
        for combo in (0..n).combinations(k) {
            let mask = combo.iter().fold(0u64, |acc, &i| acc | 1 << i);
            if mask != pinned && pair_ok((mask & pinned).count_ones() as usize) {
                verts.push(mask);
                if verts.len() > MAX_VERTICES {
                    return None;
                }
            }
        }
        let len = verts.len();
        let mut adj = vec![Bits::empty(len); len];
        for i in 0..len {
            for j in i + 1..len {
                if pair_ok((verts[i] & verts[j]).count_ones() as usize) {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        Some(Search {
            law,
            t_wise,
            verts,
            adj,
            self_ok: pair_ok(k),
            nodes,
            budget,
            start,
        })
    }

    fn tick(&mut self) -> Result<(), Abort> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Abort);
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.budget.time_limit {
                if self.start.elapsed() > limit {
                    return Err(Abort);
                }
            }
        }
        Ok(())
    }

    /// Whether `v` can join `chosen` under the `t`-wise law.
    fn extends(&self, chosen: &[usize], v: usize) -> bool {
        if !self.t_wise {
            return true;
        }
        let t = self.law.t();
        if chosen.len() + 1 < t {
            return true;
        }
        let mask = self.verts[v];
        chosen.iter().combinations(t - 1).all(|others| {
            let meet = others.iter().fold(mask, |acc, &&i| acc & self.verts[i]);
            self.law.admits(meet.count_ones() as usize)
        })
    }

    /// Greedy colouring of `cand`, returned as (vertex, colour) with colours
    /// nondecreasing.
    fn colour(&self, cand: &Bits) -> Vec<(usize, usize)> {
        let mut order = Vec::with_capacity(cand.count());
        let mut uncoloured = cand.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut queue = uncoloured.clone();
            while let Some(v) = queue.first() {
                queue.remove(v);
                uncoloured.remove(v);
                queue.and_not_assign(&self.adj[v]);
                order.push((v, colour));
            }
        }
        order
    }

    /// Looks for `target` members in total, distinct, extending `chosen`.
    fn find_distinct(&mut self, chosen: &mut Vec<usize>, cand: Bits, target: usize) -> Result<bool, Abort> {
        self.tick()?;
        if chosen.len() == target {
            return Ok(true);
        }
        let order = self.colour(&cand);
        let mut cand = cand;
        for &(v, colour) in order.iter().rev() {
            if chosen.len() + colour < target {
                return Ok(false);
            }
            if self.extends(chosen, v) {
                let next = cand.and(&self.adj[v]);
                chosen.push(v);
                if self.find_distinct(chosen, next, target)? {
                    return Ok(true);
                }
                chosen.pop();
            }
            cand.remove(v);
        }
        Ok(false)
    }

    /// Members may repeat: candidates are indices `>= v`, in ascending order.
    fn find_repeating(&mut self, chosen: &mut Vec<usize>, cand: Bits, target: usize) -> Result<bool, Abort> {
        self.tick()?;
        if chosen.len() == target {
            return Ok(true);
        }
        let can_repeat = self.self_ok && !cand.is_empty();
        if !can_repeat && chosen.len() + cand.count() < target {
            return Ok(false);
        }
        let order: Vec<usize> = cand.iter().collect();
        for v in order {
            if self.extends(chosen, v) {
                let mut next = cand.and(&self.adj[v]);
                if self.self_ok {
                    next.insert(v);
                }
                (0..v).for_each(|u| next.remove(u));
                chosen.push(v);
                if self.find_repeating(chosen, next, target)? {
                    return Ok(true);
                }
                chosen.pop();
            }
        }
        Ok(false)
    }

    /// Maximum clique containing vertex 0, branch and bound on colourings.
    fn max_clique(&mut self, chosen: &mut Vec<usize>, cand: Bits, best: &mut Vec<usize>) -> Result<(), Abort> {
        self.tick()?;
        if chosen.len() > best.len() {
            *best = chosen.clone();
        }
        let order = self.colour(&cand);
        let mut cand = cand;
        for &(v, colour) in order.iter().rev() {
            if chosen.len() + colour <= best.len() {
                return Ok(());
            }
            if self.extends(chosen, v) {
                let next = cand.and(&self.adj[v]);
                chosen.push(v);
                self.max_clique(chosen, next, best)?;
                chosen.pop();
            }
            cand.remove(v);
        }
        Ok(())
    }

    fn family(&self, n: usize, members: &[usize], distinct: bool) -> SetFamily {
        let mut sets: Vec<Vec<u32>> = members
            .iter()
            .map(|&v| {
                (0..n)
                    .filter(|&i| self.verts[v] >> i & 1 == 1)
                    .map(|i| i as u32 + 1)
                    .collect()
            })
            .collect();
        sets.sort();
        SetFamily::with_distinct(n, sets, distinct).expect("labels lie in [n]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Pairwise,
    Twise,
    /// Fewer members than `t`: no constraint at all.
    Vacuous,
}

impl Mode {
    fn of(law: &IntersectionLaw, members: usize) -> Mode {
        match law.t() {
            2 => Mode::Pairwise,
            t if t > members => Mode::Vacuous,
            _ => Mode::Twise,
        }
    }
}

/// Pairwise condition on intersection sizes. For `t`-wise laws a pair's
/// intersection contains that of every `t`-tuple through it, so it must reach
/// the smallest admitted value.
fn pair_predicate(law: &IntersectionLaw, mode: Mode) -> impl Fn(usize) -> bool + '_ {
    let floor = match law.kind() {
        LawKind::Exact(values) => values[0],
        LawKind::AtMost(_) => 0,
        LawKind::Positive => 1,
    };
    move |size| match mode {
        Mode::Pairwise => law.admits(size),
        Mode::Twise => size >= floor,
        Mode::Vacuous => true,
    }
}

fn check_ground(n: usize) {
    assert!(
        (1..=MAX_GROUND).contains(&n),
        "oracle ground set must have 1..={MAX_GROUND} points, got {n}"
    );
}

/// Largest `k` such that some `m` members (pairwise distinct if `distinct`)
/// of `[n]` choose `k` satisfy `law`, searching `k = n, n - 1, ..., 0`.
///
/// # Panics
/// If `n` is 0 or exceeds [`MAX_GROUND`], or `m` is 0.
pub fn oracle_kappa(n: usize, m: usize, law: &IntersectionLaw, distinct: bool, budget: SearchBudget) -> OracleResult {
    check_ground(n);
    assert!(m >= 1, "oracle_kappa needs m >= 1");
    let start = Instant::now();
    let mode = Mode::of(law, m);
    let mut nodes = 0;
    let finish = |value, upper, exact, witness, nodes| OracleResult {
        value,
        upper,
        exact,
        witness,
        nodes,
        millis: start.elapsed().as_millis(),
    };
    for k in (0..=n).rev() {
        let Some(mut search) = Search::build(n, k, law, mode, budget, start, nodes) else {
            return finish(None, Some(k as u64), false, None, nodes);
        };
        let mut chosen = vec![0];
        let outcome = if distinct {
            let cand = search.adj[0].clone();
            search.find_distinct(&mut chosen, cand, m)
        } else {
            let mut cand = search.adj[0].clone();
            if search.self_ok {
                cand.insert(0);
            }
            search.find_repeating(&mut chosen, cand, m)
        };
        nodes = search.nodes;
        match outcome {
            Ok(true) => {
                let witness = search.family(n, &chosen, distinct);
                return finish(Some(k as u64), Some(k as u64), true, Some(witness), nodes);
            }
            Ok(false) => {}
            Err(Abort) => return finish(None, Some(k as u64), false, None, nodes),
        }
    }
    finish(None, None, true, None, nodes)
}

/// Largest number of distinct `k`-subsets of `[n]` satisfying `law`.
///
/// # Panics
/// If `n` is 0 or exceeds [`MAX_GROUND`].
pub fn oracle_mu(n: usize, k: usize, law: &IntersectionLaw, budget: SearchBudget) -> OracleResult {
    check_ground(n);
    let start = Instant::now();
    let done = |value: u64, exact: bool, upper: u64, witness, nodes| OracleResult {
        value: Some(value),
        upper: Some(upper),
        exact,
        witness: Some(witness),
        nodes,
        millis: start.elapsed().as_millis(),
    };
    if k > n {
        let empty = SetFamily::new(n, vec![]).expect("n >= 1");
        return done(0, true, 0, empty, 0);
    }
    let total = crate::arith::binom_checked(n as u64, k as u64).map_or(u64::MAX, |c| c.min(u64::MAX as u128) as u64);
    let Some(mut search) = Search::build(
        n,
        k,
        law,
        if law.t() > 2 { Mode::Twise } else { Mode::Pairwise },
        budget,
        start,
        0,
    ) else {
        let single = SetFamily::new(n, vec![(1..=k as u32).collect()]).expect("labels lie in [n]");
        return done(1, false, total, single, 0);
    };
    let cand = search.adj[0].clone();
    let mut best = vec![0];
    let outcome = search.max_clique(&mut vec![0], cand, &mut best);
    let witness = search.family(n, &best, true);
    let upper = if outcome.is_ok() { best.len() as u64 } else { total };
    done(best.len() as u64, outcome.is_ok(), upper, witness, search.nodes)
}

/// Maximum value of an integer `(l, m, n)`-assignment by enumeration, `None`
/// when none exists.
///
/// Every subset of size at least two contains a pair whose sum is `l`, so
/// those values range over `0..=l`; each combination is tried, the pair sums
/// are checked, and then every `v` in `0..=n` is tried with the singleton and
/// empty-set values it forces.
///
/// # Panics
/// If `m` is 0 or exceeds 6.
pub fn oracle_assignment(l: u64, m: usize, n: u64) -> Option<u64> {
    assert!((1..=6).contains(&m), "oracle_assignment supports 1 <= m <= 6");
    let (l, n) = (l as i64, n as i64);
    let big: Vec<usize> = (0..1usize << m).filter(|a| a.count_ones() >= 2).collect();
    let pairs: Vec<usize> = big.iter().copied().filter(|a| a.count_ones() == 2).collect();
    let mut phi = vec![0i64; 1 << m];
    let mut best = None;
    enumerate_big(&big, 0, &pairs, l, m, n, &mut phi, &mut best);
    best
}

#[allow(clippy::too_many_arguments)]
fn enumerate_big(
    big: &[usize],
    idx: usize,
    pairs: &[usize],
    l: i64,
    m: usize,
    n: i64,
    phi: &mut [i64],
    best: &mut Option<u64>,
) {
    let pair_sum = |phi: &[i64], p: usize| big.iter().filter(|&&a| a & p == p).map(|&a| phi[a]).sum::<i64>();
    if idx == big.len() {
        if pairs.iter().any(|&p| pair_sum(phi, p) != l) {
            return;
        }
        let upper = big.iter().map(|&a| phi[a]).sum::<i64>();
        for v in (0..=n).rev() {
            let mut full = phi.to_vec();
            let mut ok = true;
            for x in 0..m {
                let have: i64 = big.iter().filter(|&&a| a >> x & 1 == 1).map(|&a| phi[a]).sum();
                full[1 << x] = v - have;
                ok &= full[1 << x] >= 0;
            }
            let used: i64 = upper + (0..m).map(|x| full[1 << x]).sum::<i64>();
            full[0] = n - used;
            if ok && full[0] >= 0 {
                if best.is_none_or(|b| v as u64 > b) {
                    *best = Some(v as u64);
                }
                return;
            }
        }
        return;
    }
    let a = big[idx];
    for value in 0..=l {
        phi[a] = value;
        // Every pair inside `a` already assigned must stay within `l`.
        let within = pairs.iter().filter(|&&p| a & p == p).all(|&p| pair_sum(phi, p) <= l);
        let total: i64 = big[..=idx].iter().map(|&b| phi[b]).sum();
        if !within || total > n {
            break;
        }
        enumerate_big(big, idx + 1, pairs, l, m, n, phi, best);
    }
    phi[a] = 0;
}
