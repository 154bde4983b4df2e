//! Randomized engine properties, shared by the `properties` tests and the
//! acceptance driver.

#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use qjet_core::jets::{sparse_rank, RankEngine, SparseRow};
use qjet_core::nahm::{evaluate_with, preset, EvalOptions};
use qjet_core::series::{inv_pochhammer, pochhammer, series_eq};
use qjet_core::{HalfInt, QSeries};

pub const PROPERTY_NAMES: [&str; 5] =
    ["ring laws", "truncation closure", "pochhammer inverse", "enumeration order independence", "modular vs exact rank"];

/// Terms `(twice qexp, charge, coeff)` and a truncation order (doubled).
fn raw_series(charged: bool) -> impl Strategy<Value = (Vec<(i64, i64, i64)>, i64)> {
    let charge = if charged { -2i64..=2 } else { 0i64..=0 };
    (prop::collection::vec((0i64..30, charge, -5i64..=5), 0..8), 4i64..30)
}

fn build(raw: &(Vec<(i64, i64, i64)>, i64), charged: bool) -> QSeries {
    let rank = usize::from(charged);
    let mut s = QSeries::zero(HalfInt::from_twice(raw.1), rank);
    for &(e, c, k) in &raw.0 {
        let charges = if charged { vec![c] } else { vec![] };
        s.add_term(HalfInt::from_twice(e), charges, BigInt::from(k));
    }
    s
}

fn same(a: &QSeries, b: &QSeries, what: &str) -> Result<(), TestCaseError> {
    let verdict = series_eq(a, b).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(verdict.is_equal(), "{what}: {verdict:?}");
    Ok(())
}

fn ok<T>(r: qjet_core::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

fn ring_laws(runner: &mut TestRunner) -> Result<(), String> {
    let strat = (any::<bool>(), raw_series(true), raw_series(true), raw_series(true));
    run(runner, strat, |(charged, ra, rb, rc)| {
        let (a, b, c) = (build(&ra, charged), build(&rb, charged), build(&rc, charged));
        let one = QSeries::one(a.order(), a.charge_rank());
        same(&ok(a.add(&b))?, &ok(b.add(&a))?, "a+b = b+a")?;
        same(&ok(a.mul(&b))?, &ok(b.mul(&a))?, "ab = ba")?;
        same(&ok(ok(a.mul(&b))?.mul(&c))?, &ok(a.mul(&ok(b.mul(&c))?))?, "(ab)c = a(bc)")?;
        same(&ok(a.mul(&ok(b.add(&c))?))?, &ok(ok(a.mul(&b))?.add(&ok(a.mul(&c))?))?, "a(b+c) = ab+ac")?;
        same(&ok(a.mul(&one))?, &a, "a*1 = a")?;
        prop_assert!(ok(a.sub(&a))?.is_empty(), "a-a = 0");
        Ok(())
    })
}

fn truncation_closure(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (raw_series(true), raw_series(true)), |(ra, rb)| {
        let (a, b) = (build(&ra, true), build(&rb, true));
        let order = a.order().min(b.order());
        for s in [ok(a.add(&b))?, ok(a.mul(&b))?, ok(a.sub(&b))?] {
            prop_assert_eq!(s.order(), order);
            prop_assert!(s.terms().all(|(e, _, c)| e < order && *c != BigInt::from(0)));
        }
        // truncating first changes nothing below the order
        let lower = HalfInt::from_twice(order.twice() / 2);
        same(&ok(a.truncated(lower).mul(&b.truncated(lower)))?, &ok(a.mul(&b))?.truncated(lower), "truncate then multiply")
    })
}

fn pochhammer_inverse(runner: &mut TestRunner) -> Result<(), String> {
    run(runner, (0u32..20, 1i64..40), |(n, ord)| {
        let order = HalfInt::from_int(ord);
        let product = ok(pochhammer(n, order).mul(&inv_pochhammer(n, order)))?;
        same(&product, &QSeries::one(order, 0), "(q)_n / (q)_n = 1")?;
        // 1/(q)_n counts partitions into parts <= n
        let inv = inv_pochhammer(n, order);
        for k in 0..ord.min(12) {
            let expected = partitions_bounded(k as usize, n as usize);
            prop_assert_eq!(ok(inv.coeff(HalfInt::from_int(k), &[]))?, BigInt::from(expected));
        }
        Ok(())
    })
}

fn partitions_bounded(total: usize, largest: usize) -> u64 {
    let mut ways = vec![0u64; total + 1];
    ways[0] = 1;
    for part in 1..=largest.min(total.max(1)) {
        for s in part..=total {
            ways[s] += ways[s - part];
        }
    }
    ways[total]
}

const ORDER_PRESETS: [&str; 6] = ["cartan-a3", "B-a3", "Bprime-a3", "sl3-three", "b2-char", "b2-quintuple"];

fn enumeration_order(runner: &mut TestRunner) -> Result<(), String> {
    let strat = (0..ORDER_PRESETS.len(), Just(()).prop_perturb(|_, mut rng| rng.next_u64()), any::<bool>(), 3i64..9);
    run(runner, strat, |(which, seed, parallel, ord)| {
        let spec = ok(preset(ORDER_PRESETS[which]))?;
        let l = spec.var_count();
        // Fisher-Yates from the drawn seed
        let mut perm: Vec<usize> = (0..l).collect();
        let mut state = seed | 1;
        for i in (1..l).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            perm.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let order = HalfInt::from_int(ord);
        let base = ok(evaluate_with(&spec, order, &EvalOptions { parallel: false, ..EvalOptions::default() }))?;
        let shuffled = ok(evaluate_with(&spec.permuted(&perm), order, &EvalOptions { parallel, ..EvalOptions::default() }))?;
        same(&base, &shuffled, "permuted variables")
    })
}

fn modular_vs_exact(runner: &mut TestRunner) -> Result<(), String> {
    // With entries in [-3, 3] and at most 12 columns every minor is below
    // 2^61 - 1 in absolute value (Hadamard), so the two ranks must agree.
    let row = prop::collection::vec((0u32..12, -3i64..=3), 0..6);
    run(runner, prop::collection::vec(row, 0..14), |rows: Vec<SparseRow>| {
        prop_assert_eq!(sparse_rank(&rows, RankEngine::Exact), sparse_rank(&rows, RankEngine::Modular));
        Ok(())
    })
}

fn run<S: Strategy>(
    runner: &mut TestRunner,
    strat: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner.run(&strat, test).map_err(|e| e.to_string())
}

/// Runs the named property for `cases` random cases from a fixed seed.
pub fn run_property(name: &str, cases: u32) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, proptest::test_runner::TestRng::deterministic_rng(config_algorithm()));
    match name {
        "ring laws" => ring_laws(&mut runner),
        "truncation closure" => truncation_closure(&mut runner),
        "pochhammer inverse" => pochhammer_inverse(&mut runner),
        "enumeration order independence" => enumeration_order(&mut runner),
        "modular vs exact rank" => modular_vs_exact(&mut runner),
        _ => Err(format!("unknown property `{name}`")),
    }
}

fn config_algorithm() -> proptest::test_runner::RngAlgorithm {
    proptest::test_runner::RngAlgorithm::ChaCha
}
