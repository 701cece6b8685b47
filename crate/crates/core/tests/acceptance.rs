//! Acceptance suite: one test and one printed PASS/FAIL line per criterion.
//! All comparisons are exact; tolerances are zero.

use std::collections::BTreeSet;
use std::io::Write;

use ckembed::cardinal::Cardinal;
use ckembed::decide::{cellularity_bound, regression_table, szlenk_of};
use ckembed::funcalc::{probe_points, FunctionRep, Q};
use ckembed::ordinal::{gamma_of, ExtendedOrdinal, Ordinal};
use ckembed::space::{height, ms_normal_form, top_card, Space};
use ckembed::synthesis::{
    composition_operator, synth_cantor_sum_surjection, synth_interval_embedding, synth_surjection, Operator, Region,
};
use ckembed::verify::{
    mutate, oracle_derived_membership, random_below, random_function, random_host, random_space, run_checks,
    run_mutant, Check, MutantKind, TrialConfig,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    // straight to the process stdout: the harness only captures `println!`
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n:>2} [{verdict}] {name}: {detail}").unwrap();
    out.flush().unwrap();
}

/// The five heights and three multiplicities of the synthesis criteria.
fn instances() -> Vec<(Ordinal, u64)> {
    let alphas = ["1", "2", "w", "w+1", "w^(2)"];
    alphas.iter().flat_map(|a| (1..=3).map(move |m| (o(a), m))).collect()
}

fn hosts(alpha: &Ordinal, m: u64, count: usize, seed: u64) -> Vec<Space> {
    let cfg = TrialConfig { max_depth: 2, ..TrialConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_host(&mut rng, &cfg, alpha, m)).collect()
}

/// `max |f|` over probe points: evaluation only, independent of the
/// special-form norm recursion.
fn probe_norm(space: &Space, f: &FunctionRep) -> Q {
    probe_points(space, f).unwrap().iter().map(|p| f.eval(p).unwrap().abs()).max().unwrap()
}

#[test]
fn criterion_01_szlenk_formula() {
    let mut ok = true;
    for a in 0..=2u64 {
        let alpha = Ordinal::nat(a);
        // C([1, w^(w^a)]) is the interval with exponent w^a
        let k = Space::interval(Ordinal::omega_pow(&alpha), 1);
        let expected = ExtendedOrdinal::Ord(Ordinal::omega_pow(&alpha.succ()));
        ok &= szlenk_of(&k).value() == &expected;
    }
    report(1, "Szlenk formula", ok, "Sz(C([1,w^(w^a)])) = w^(a+1) for a = 0,1,2");
    assert!(ok);
}

#[test]
fn criterion_02_derivative_oracle() {
    let cfg = TrialConfig { max_depth: 4, max_children: 3, ..TrialConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut samples, mut agreed) = (0, 0);
    let mut first = None;
    for i in 0..50 {
        let s = random_space(&mut rng, &cfg);
        let h = match height(&s) {
            ExtendedOrdinal::Ord(h) => h.add(&Ordinal::nat(2)),
            _ => o("w^(2)"),
        };
        for j in 0..5 {
            let beta = if j == 0 { Ordinal::zero() } else { random_below(&mut rng, &h, 3) };
            let r = oracle_derived_membership(&s, &beta, 100, 1000 * i + j).unwrap();
            samples += r.samples;
            agreed += r.agreed;
            if first.is_none() {
                first = r.first_disagreement;
            }
        }
    }
    let ok = samples == 25_000 && agreed == samples;
    report(2, "derivative closed form vs membership oracle", ok, &format!("{agreed}/{samples} agree {first:?}"));
    assert!(ok);
}

#[test]
fn criterion_03_embedding_soundness() {
    let checks: BTreeSet<Check> =
        [Check::Linear, Check::Isometry, Check::Pnpp, Check::Positive, Check::Support].into_iter().collect();
    let (mut operators, mut failures, mut oracle_failures) = (0, 0, 0);
    let mut first = None;
    for (i, (alpha, m)) in instances().into_iter().enumerate() {
        for (j, k) in hosts(&alpha, m, 10, 300 + i as u64).into_iter().enumerate() {
            let t = synth_interval_embedding(&k, &alpha, m, &Region::Whole).unwrap();
            let cfg = TrialConfig { seed: (i * 10 + j) as u64, trials: 100, checks: checks.clone(), ..TrialConfig::default() };
            let r = run_checks(&t, &cfg);
            operators += 1;
            if !r.all_passed() {
                failures += 1;
                first.get_or_insert(format!("{k} a={alpha} m={m}: {r}"));
            }
            // independent norm oracle on a few inputs
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..5 {
                let f = random_function(&mut rng, t.canonical_domain(), &cfg).unwrap();
                let tf = t.apply(&f).unwrap();
                if probe_norm(t.canonical_codomain(), &tf) != probe_norm(t.canonical_domain(), &f) {
                    oracle_failures += 1;
                }
            }
        }
    }
    let ok = operators == 150 && failures == 0 && oracle_failures == 0;
    report(
        3,
        "embedding synthesis soundness",
        ok,
        &format!("{operators} operators, {failures} failing, {oracle_failures} probe-norm mismatches {first:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_composition_soundness() {
    let checks: BTreeSet<Check> = [Check::Isometry, Check::Lattice, Check::Algebra].into_iter().collect();
    let (mut operators, mut failures) = (0, 0);
    let mut first = None;
    for (i, (alpha, m)) in instances().into_iter().enumerate() {
        for (j, k) in hosts(&alpha, m, 10, 300 + i as u64).into_iter().enumerate() {
            let rho = synth_surjection(&k, &alpha, m, &Region::Whole).unwrap();
            let t = composition_operator(rho).unwrap();
            let cfg = TrialConfig { seed: (i * 10 + j) as u64, trials: 100, checks: checks.clone(), ..TrialConfig::default() };
            let r = run_checks(&t, &cfg);
            operators += 1;
            if !r.all_passed() || r.counts.len() != 3 {
                failures += 1;
                first.get_or_insert(format!("{k} a={alpha} m={m}: {r}"));
            }
        }
    }
    let ok = operators == 150 && failures == 0;
    report(4, "surjection/composition soundness", ok, &format!("{operators} operators, {failures} failing {first:?}"));
    assert!(ok);
}

#[test]
fn criterion_05_cellularity_of_derived_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bad = Vec::new();
    for alpha in [o("1"), o("2"), o("w"), o("w+1")] {
        for n in 1..=4u64 {
            let mut parts: Vec<Space> = (0..n).map(|_| Space::interval(alpha.clone(), 1)).collect();
            // scattered noise of height at most alpha
            for _ in 0..rng.gen_range(1..=3) {
                parts.push(if rng.gen_bool(0.5) {
                    Space::Fin(rng.gen_range(1..5))
                } else {
                    Space::interval(random_below(&mut rng, &alpha, 2), rng.gen_range(1..=3))
                });
            }
            let k = Space::Sum(parts);
            let b = cellularity_bound(&k, &ExtendedOrdinal::Ord(alpha.clone()), n + 2);
            if (b.value, b.witness_max, b.next_fails) != (Cardinal::Finite(n), n, true) {
                bad.push(format!("{k}: {b:?}"));
            }
        }
    }
    let ok = bad.is_empty();
    report(5, "cellularity of derived sets", ok, &format!("16 instances, mismatches {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_06_cellularity_of_perfect_kernel() {
    let mut mismatches = Vec::new();
    let mut certificates_ok = true;
    for k_atoms in 1..=3u64 {
        let mut parts: Vec<Space> = (0..k_atoms).map(|_| Space::Cantor).collect();
        parts.push(Space::interval(o("3"), 1));
        let k = Space::Sum(parts);
        let b = cellularity_bound(&k, &ExtendedOrdinal::Infinity, 6);
        if (b.value, b.witness_max) != (Cardinal::Finite(k_atoms), k_atoms) {
            mismatches.push(format!("{k}: value {} witnessed up to {}", b.value, b.witness_max));
        }
        // the K_{k,Delta} surjection certificates themselves are exact
        let rho = synth_cantor_sum_surjection(&k, k_atoms).unwrap();
        let t = composition_operator(rho).unwrap();
        let checks = [Check::Isometry, Check::Lattice, Check::Algebra].into_iter().collect();
        certificates_ok &= run_checks(&t, &TrialConfig { trials: 100, checks, ..TrialConfig::default() }).all_passed();
    }
    let ok = mismatches.is_empty() && certificates_ok;
    report(
        6,
        "cellularity of perfect kernel",
        ok,
        &format!("certificates exact: {certificates_ok}; mismatches against (Finite(k), k): {mismatches:?}"),
    );
    assert!(ok);
}

#[test]
fn criterion_07_ms_normal_form() {
    let cfg = TrialConfig { max_depth: 3, ..TrialConfig::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut bad) = (0, Vec::new());
    while tested < 100 {
        let s = random_space(&mut rng, &cfg);
        if !s.countable() {
            continue;
        }
        tested += 1;
        let (a, m) = ms_normal_form(&s).unwrap();
        let form = Space::interval(a.clone(), m);
        let c = s.canonical_tree().unwrap();
        let good = ms_normal_form(&form).unwrap() == (a.clone(), m)
            && height(&form) == height(&s)
            && top_card(&form).unwrap() == top_card(&s).unwrap()
            && height(&c) == height(&s)
            && top_card(&c).unwrap() == top_card(&s).unwrap()
            && ms_normal_form(&c).unwrap() == (a, m);
        if !good {
            bad.push(s.to_string());
        }
    }
    let ok = bad.is_empty();
    report(7, "Mazurkiewicz-Sierpinski normal form", ok, &format!("{tested} spaces, failing {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_08_regression_table() {
    let (plain, ch) = (regression_table(false), regression_table(true));
    let mut bad = Vec::new();
    for (a, b) in plain.iter().zip(&ch) {
        if a.verdict.answer != a.expected || a.verdict.rule != a.expected_rule {
            bad.push(format!("{} {} got {} [{}]", a.condition, a.l, a.verdict.answer, a.verdict.rule));
        }
        if a.verdict.answer != b.verdict.answer || a.verdict.rule != b.verdict.rule {
            bad.push(format!("{} {} changes under CH", a.condition, a.l));
        }
    }
    let ok = bad.is_empty() && plain.len() == 7;
    report(8, "implications regression table", ok, &format!("{} rows, problems {bad:?}", plain.len()));
    assert!(ok);
}

/// Ordinals below epsilon_0 with nested exponents.
fn random_cnf(rng: &mut impl Rng, depth: u32) -> Ordinal {
    let n = rng.gen_range(0..=3);
    let mut exps: Vec<Ordinal> = (0..n)
        .map(|_| if depth == 0 || rng.gen_bool(0.4) { Ordinal::nat(rng.gen_range(0..4)) } else { random_cnf(rng, depth - 1) })
        .collect();
    exps.sort_by(|a, b| b.cmp(a));
    exps.dedup();
    Ordinal::make(exps.into_iter().map(|e| (e, rng.gen_range(1..=4))).collect()).unwrap()
}

#[test]
fn criterion_09_ordinal_laws() {
    let start = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut bad = 0;
    for _ in 0..1000 {
        let (a, b, c) = (random_cnf(&mut rng, 2), random_cnf(&mut rng, 2), random_cnf(&mut rng, 2));
        if a.add(&b).add(&c) != a.add(&b.add(&c)) {
            bad += 1;
        }
        let (lo, hi) = if a <= b { (&a, &b) } else { (&b, &a) };
        if lo.add(&lo.left_subtract(hi).unwrap()) != *hi {
            bad += 1;
        }
        let (ga, gb) = (gamma_of(&ExtendedOrdinal::Ord(a.clone())), gamma_of(&ExtendedOrdinal::Ord(b.clone())));
        if gamma_of(ga.value()) != ga {
            bad += 1;
        }
        if (a <= b) && ga.value() > gb.value() {
            bad += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = bad == 0 && elapsed.as_secs_f64() < 1.0;
    report(9, "ordinal kernel laws", ok, &format!("1000 triples, {bad} violations, {elapsed:?}"));
    assert!(ok);
}

#[test]
fn criterion_10_mutant_sensitivity() {
    let cfg = TrialConfig { seed: 0, trials: 200, ..TrialConfig::default() };
    let (mut total, mut detected) = (0, 0);
    let mut missed = Vec::new();
    for (i, alpha) in ["1", "2", "w", "w+1", "w^(2)"].iter().map(|a| o(a)).enumerate() {
        for k in hosts(&alpha, 1, 3, 1000 + i as u64) {
            let t: Operator = synth_interval_embedding(&k, &alpha, 1, &Region::Whole).unwrap();
            for kind in MutantKind::ALL {
                let Some(m) = mutate(&t.to_json(), kind) else { continue };
                total += 1;
                if run_mutant(&m, &cfg).detected() {
                    detected += 1;
                } else {
                    missed.push(format!("{} on {k} a={alpha}", kind.name()));
                }
            }
        }
    }
    let ok = total == 45 && detected == total;
    report(10, "mutant sensitivity", ok, &format!("{detected}/{total} detected, missed {missed:?}"));
    assert!(ok);
}
