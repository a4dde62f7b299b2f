//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 6 and 7 fail on inputs that are wrong at the source (two
//! misprinted extender rows; degree-2 curves over F_2 are not distinct).
//! They are listed in `KNOWN_FAILURES` with the exact reason expected, so the
//! target exits non-zero on any other outcome.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use isect::assignment::{
    builtin_extender_tables, check_extender, from_family, lrst_check, solve_kappa_ilp, solve_kappa_ilp_with, to_family,
    Assignment, ExtenderTable, SolverBudget, StartBound,
};
use isect::bounds::{
    fractional_is_integral, kappa_exact_small, kappa_frac, kappa_leq1_nn_bounds, kappa_lower_recursive,
    mu_upper_atmost, Extended,
};
use isect::constructions::{
    gf, polynomial_curves, projective_plane, projective_trim, twise_disjoint_cores, twise_shared_core,
};
use isect::oracle::{oracle_kappa, SearchBudget};
use isect::{read_family, verify, write_family, FamilyFormat, IntersectionLaw, Rational};
use isect_cli::{run_suite, Suite};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion number and the failure messages it is expected to produce.
const KNOWN_FAILURES: &[(u32, &[&str])] = &[
    (
        6,
        &[
            "quad-regulators rho_1: not an extender",
            "quad-balanced-critical tau_3: not an extender",
        ],
    ),
    (
        7,
        &[
            "p=2 l=2: 4 distinct members, expected 8",
            "p=2 l=2: counting bound undefined",
        ],
    ),
];

struct Outcome {
    failures: Vec<String>,
    checked: usize,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            checked: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

fn oracle_value(n: u64, m: u64, law: &IntersectionLaw) -> Option<u64> {
    let r = oracle_kappa(n as usize, m as usize, law, true, budget());
    assert!(r.exact, "oracle budget exhausted at n={n} m={m}");
    if let Some(w) = &r.witness {
        assert!(verify(w, law).valid);
    }
    r.value
}

fn two_members(out: &mut Outcome) {
    for l in 1..=3 {
        for n in l + 2..=12 {
            let got = oracle_value(n, 2, &IntersectionLaw::single(l as usize));
            out.check(got == Some((n + l) / 2), || format!("l={l} n={n}: {got:?}"));
        }
    }
}

fn three_members(out: &mut Outcome) {
    for l in 1..=3u64 {
        for n in l + 3..=11 {
            let expected = if n <= 3 * l { (n + l) / 2 } else { (n + 3 * l) / 3 };
            let got = oracle_value(n, 3, &IntersectionLaw::single(l as usize));
            out.check(got == Some(expected), || format!("l={l} n={n}: {got:?} != {expected}"));
        }
    }
    let got = oracle_value(5, 3, &IntersectionLaw::single(2));
    out.check(got == Some(3), || format!("l=2 n=5: {got:?}"));
}

fn four_member_formula(l: u64, n: u64) -> u64 {
    if n < 2 * l {
        (n + l) / 2
    } else if n < 6 * l {
        (3 * n + 6 * l) / 8
    } else {
        (n + 6 * l) / 4
    }
}

fn four_members(out: &mut Outcome) {
    for l in 1..=3u64 {
        for n in l + 4..=60 {
            let expected = four_member_formula(l, n);
            let got = solve_kappa_ilp(l, 4, n).unwrap().value();
            out.check(got == Some(expected as i64), || {
                format!("solver l={l} n={n}: {got:?} != {expected}")
            });
            if n <= 9 {
                let oracle = oracle_value(n, 4, &IntersectionLaw::single(l as usize));
                out.check(oracle == Some(expected), || format!("oracle l={l} n={n}: {oracle:?}"));
            }
        }
    }
    for (l, n, expected) in [(1, 6, 3), (2, 7, 4), (5, 9, 7)] {
        let got = solve_kappa_ilp(l, 4, n).unwrap().value();
        out.check(got == Some(expected), || format!("spot l={l} n={n}: {got:?}"));
        out.check(kappa_exact_small(l, n, 4) == Ok(expected as u64), || {
            format!("formula l={l} n={n}")
        });
    }
}

fn sandwich(out: &mut Outcome) {
    let counting = SolverBudget {
        start: StartBound::Counting,
        ..SolverBudget::default()
    };
    for l in 1..=3u64 {
        for m in l.max(1)..=4 {
            for n in l + m..=60 {
                let lower = kappa_lower_recursive(l, n, m).unwrap();
                let solved = solve_kappa_ilp_with(l, m as usize, n, counting).unwrap().value();
                let frac = kappa_frac(Rational::from_integer(l as i128), Rational::from_integer(n as i128), m).unwrap();
                let floor = frac.value.floor().to_integer() as i64;
                let Some(v) = solved else {
                    out.check(false, || format!("l={l} m={m} n={n}: solver gave no optimum"));
                    continue;
                };
                out.check(lower <= Extended::Finite(v) && v <= floor, || {
                    format!("l={l} m={m} n={n}: {lower} <= {v} <= {floor} fails")
                });
                if fractional_is_integral(&frac) {
                    out.check(v == floor, || {
                        format!("l={l} m={m} n={n}: integral levels but {v} != {floor}")
                    });
                }
            }
        }
    }
    // Integral levels at l=1, m=4, n=6: solver, fractional floor and closed form all give 3.
    let frac = kappa_frac(Rational::from_integer(1), Rational::from_integer(6), 4).unwrap();
    let solved = solve_kappa_ilp(1, 4, 6).unwrap().value();
    out.check(
        fractional_is_integral(&frac) && frac.value == Rational::from_integer(3) && solved == Some(3),
        || format!("l=1 m=4 n=6: frac {} solver {solved:?}", frac.value),
    );
    out.check(kappa_exact_small(1, 6, 4) == Ok(3), || {
        "l=1 m=4 n=6: closed form".into()
    });
}

fn fractional(out: &mut Outcome) {
    for m in 1..=12u64 {
        for l in 0..=4i128 {
            for n2 in (2 * l + 1)..=60 {
                let (l_r, n_r) = (Rational::from_integer(l), Rational::new(n2, 2));
                let sol = kappa_frac(l_r, n_r, m).unwrap();
                let c = |a: u64, b: u64| Rational::from_integer(binomial(a as i64, b as i64));
                let (s, t) = (sol.s, sol.t);
                let zero = Rational::from_integer(0);
                out.check(sol.alpha >= zero && sol.beta >= zero, || {
                    format!("sign m={m} l={l} n={n_r}")
                });
                let ground = c(m, s) * sol.alpha + if s == t { zero } else { c(m, t) * sol.beta };
                out.check(ground == n_r, || format!("ground m={m} l={l} n={n_r}"));
                if m >= 2 {
                    let pair = c(m - 2, s.wrapping_sub(2)) * sol.alpha
                        + if s == t {
                            zero
                        } else {
                            c(m - 2, t.wrapping_sub(2)) * sol.beta
                        };
                    out.check(s == t || pair == l_r, || format!("pair m={m} l={l} n={n_r}"));
                }
            }
        }
    }
    let mut triples = 0;
    for m in 2..=12 {
        for t in 2..=m {
            for s in 1..t {
                for r in 0..s {
                    triples += 1;
                    let ok = lrst_check(r, s, t, m).unwrap();
                    out.check(ok, || format!("lrst ({r},{s},{t},{m})"));
                }
            }
        }
    }
    out.check(triples >= 286, || format!("only {triples} triples"));
}

fn binomial(n: i64, k: i64) -> i128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn extender_tables(out: &mut Outcome) {
    for row in builtin_extender_tables() {
        let check = check_extender(&row.tau);
        let label = format!("{} {}", row.table.name(), row.name);
        if !check.valid {
            out.check(false, || format!("{label}: not an extender"));
            continue;
        }
        let expected = match row.table {
            ExtenderTable::QuadBalancedCritical => {
                let levels = row.tau.levels().expect("balanced row");
                Some((1..=4).map(|i| binomial(3, i as i64 - 1) as i64 * levels[i]).sum())
            }
            _ => row.stated_value,
        };
        out.check(check.value == expected, || {
            format!("{label}: value {:?} != {expected:?}", check.value)
        });
    }
}

fn curves(out: &mut Outcome) {
    for p in [2u64, 3, 5] {
        for l in [1u64, 2] {
            if p < l {
                continue;
            }
            let family = polynomial_curves(p, l).unwrap();
            let expected = p.pow(l as u32 + 1);
            let mut sets = family.sets().to_vec();
            sets.sort();
            sets.dedup();
            out.check(sets.len() as u64 == expected, || {
                format!("p={p} l={l}: {} distinct members, expected {expected}", sets.len())
            });
            out.check(
                family.n() as u64 == p * p && family.uniform_size() == Some(p as usize),
                || format!("p={p} l={l}: wrong shape"),
            );
            out.check(verify(&family, &IntersectionLaw::at_most(l as usize)).valid, || {
                format!("p={p} l={l}: does not verify")
            });
            match mu_upper_atmost(p * p, p, l) {
                Ok(bound) => out.check(expected as u128 <= bound, || {
                    format!("p={p} l={l}: {expected} > {bound}")
                }),
                Err(_) => out.check(false, || format!("p={p} l={l}: counting bound undefined")),
            }
        }
    }
}

fn plane_values(out: &mut Outcome) {
    for n in 4..=13u64 {
        let got = oracle_value(n, n, &IntersectionLaw::at_most(1)).unwrap();
        let bounds = kappa_leq1_nn_bounds(n).unwrap();
        let expected = match n {
            4..=6 => Some(2),
            7 | 9..=12 => Some(3),
            13 => Some(4),
            _ => None,
        };
        out.check(bounds.exact == expected, || {
            format!("n={n}: formula gives {:?}", bounds.exact)
        });
        match expected {
            Some(v) => out.check(got == v, || format!("n={n}: oracle {got} != {v}")),
            None => out.check(bounds.lower <= got && got <= bounds.upper, || {
                format!("n={n}: oracle {got} outside [{}, {}]", bounds.lower, bounds.upper)
            }),
        }
    }
}

fn twise(out: &mut Outcome) {
    for m in 2..=5usize {
        for t in 2..=m {
            for ls in 1..=2usize {
                let cores = binomial(m as i64, t as i64) as usize * ls;
                let law = IntersectionLaw::single(ls).with_t(t).unwrap();
                for n in cores..=cores + 20 {
                    let family = twise_disjoint_cores(n, m, t, ls).unwrap();
                    let size = (n * (t - 1) + cores) / m;
                    out.check(
                        verify(&family, &law).valid && family.uniform_size() == Some(size),
                        || format!("disjoint cores m={m} t={t} ls={ls} n={n}"),
                    );
                    if let Ok(family) = twise_shared_core(n, m, t, ls) {
                        let size = (n - ls) * (t - 1) / m + ls;
                        out.check(
                            verify(&family, &law).valid && family.uniform_size() == Some(size),
                            || format!("shared core m={m} t={t} ls={ls} n={n}"),
                        );
                    }
                }
            }
        }
    }
}

fn projective(out: &mut Outcome) {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let plane = projective_plane(q).unwrap();
        let points = (q * q + q + 1) as usize;
        out.check(plane.n() == points && plane.len() == points, || format!("q={q}: shape"));
        out.check(plane.uniform_size() == Some(q as usize + 1), || {
            format!("q={q}: line size")
        });
        out.check(verify(&plane, &IntersectionLaw::single(1)).valid, || {
            format!("q={q}: lines")
        });
    }
    for q in [2u64, 3, 4] {
        for n in q * q..=q * q + q {
            let family = projective_trim(q, n).unwrap();
            out.check(
                family.len() as u64 == n && verify(&family, &IntersectionLaw::at_most(1)).valid,
                || format!("trim q={q} n={n}"),
            );
        }
    }
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        let f = gf(q).unwrap();
        let all: Vec<u32> = f.elements().collect();
        let mut ok = all.len() as u64 == q;
        for &a in &all {
            ok &= f.add(a, 0) == a && f.mul(a, 1) == a && f.add(a, f.neg(a)) == 0;
            ok &= a == 0 || f.inv(a).is_some_and(|b| f.mul(a, b) == 1);
            for &b in &all {
                ok &= f.add(a, b) == f.add(b, a) && f.mul(a, b) == f.mul(b, a);
                for &c in &all {
                    ok &= f.add(f.add(a, b), c) == f.add(a, f.add(b, c));
                    ok &= f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
                    ok &= f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
                }
            }
        }
        out.check(ok, || format!("GF({q}) axioms"));
    }
}

/// A random valid assignment: uniform level values plus a few permuted
/// extenders from the built-in tables, kept nonnegative.
fn random_assignment(rng: &mut ChaCha8Rng, extenders: &[Assignment]) -> Assignment {
    loop {
        let m = rng.gen_range(1..=4usize);
        let levels: Vec<i64> = (0..=m).map(|_| rng.gen_range(0..=3)).collect();
        let mut phi = Assignment::from_levels(m, &levels).unwrap();
        for _ in 0..rng.gen_range(0..=3) {
            let pool: Vec<&Assignment> = extenders.iter().filter(|e| e.m() == m).collect();
            if pool.is_empty() {
                break;
            }
            let tau = permuted(pool[rng.gen_range(0..pool.len())], rng);
            if let Ok(next) = phi.try_add(&tau) {
                if next.is_nonnegative() {
                    phi = next;
                }
            }
        }
        let total = phi.total();
        if (1..=30).contains(&total) {
            return phi;
        }
    }
}

fn permuted(tau: &Assignment, rng: &mut ChaCha8Rng) -> Assignment {
    use rand::seq::SliceRandom;
    let m = tau.m();
    let mut perm: Vec<usize> = (0..m).collect();
    perm.shuffle(rng);
    let mut out = Assignment::zeros(m).unwrap();
    for mask in 0..1usize << m {
        let image = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(0, |acc, i| acc | 1 << perm[i]);
        out.set(image, *tau.get(mask));
    }
    out
}

fn round_trips(out: &mut Outcome) {
    let extenders: Vec<Assignment> = builtin_extender_tables()
        .into_iter()
        .filter(|row| check_extender(row.effective()).valid)
        .map(|row| row.effective().clone())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x15ec7);
    for i in 0..200 {
        let phi = random_assignment(&mut rng, &extenders);
        let back = to_family(&phi).and_then(|f| from_family(&f));
        out.check(back.as_ref() == Ok(&phi), || {
            format!("assignment #{i}: {:?}", phi.values())
        });
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data");
    let mut files: Vec<PathBuf> = fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for path in files {
        let bytes = fs::read(&path).unwrap();
        let same = read_family(&bytes).map(|f| write_family(&f, FamilyFormat::detect(&bytes)) == bytes);
        out.check(same == Ok(true), || format!("{}: not preserved", path.display()));
    }
}

fn conjecture(out: &mut Outcome) {
    let table = run_suite(Suite::Conjecture, budget());
    out.check(table.failures() == 0, || table.summary());
    out.checked += table.checked().saturating_sub(1);
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, fn(&mut Outcome));
    let criteria: [Criterion; 12] = [
        (1, "two-member grid", two_members),
        (2, "three-member grid", three_members),
        (3, "four-member formula via solver", four_members),
        (4, "recursive and fractional sandwich", sandwich),
        (5, "fractional equations and exchange inequality", fractional),
        (6, "extender tables", extender_tables),
        (7, "polynomial curves", curves),
        (8, "square-root sandwich and plane values", plane_values),
        (9, "t-wise constructions", twise),
        (10, "finite fields and projective planes", projective),
        (11, "round trips", round_trips),
        (12, "conjecture table", conjecture),
    ];
    let mut unexpected = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let mut out = Outcome::new();
        run(&mut out);
        let secs = start.elapsed().as_secs_f64();
        let verdict = if out.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "{verdict} criterion {id}: {name} ({} checks, {} failed, {secs:.2}s)",
            out.checked,
            out.failures.len()
        );
        for failure in &out.failures {
            println!("    {failure}");
        }
        let known = KNOWN_FAILURES
            .iter()
            .find(|(k, _)| *k == id)
            .map_or(&[][..], |(_, f)| *f);
        if out.failures.iter().map(String::as_str).ne(known.iter().copied()) {
            println!("    unexpected outcome; expected failures: {known:?}");
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
