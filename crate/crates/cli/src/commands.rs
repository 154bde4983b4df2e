use qjet_core::jets::{hilbert_series_with, jet_preset, verify_classically_free, JetOptions, RankEngine};
use qjet_core::nahm::{
    b2_product_factors, build_b2_char_form, build_b2_quintuple_form, build_b_form, build_bprime_form, build_cartan_side,
    build_d4_form, evaluate_with, expand_form_difference, prop43_table_check, verify_identity, CartanType, EvalOptions,
    FormKind,
};
use qjet_core::quiver::{codim, enumerate_reps, verify_theorem51, QuiverA};
use qjet_core::qweyl::{ordered_product_check, pentagon_factors, product_identity, NCAlgebra, OrderedKind};
use qjet_core::series::{euler_product, series_eq, series_leq};
use qjet_core::HalfInt;

use crate::report::{Check, Report, Verdict};
use crate::{Engine, Failure, Forms, Global, Jets, Kind, Outcome, Variant, Verify};

pub const NOTE_DENOMINATOR: &str = "denominator (q)_{n_ij} of the sl_n sums read as (q)_{m_ij}";
pub const NOTE_B2_EXPONENT: &str = "exponent n_3^3 in the B2 upper-bound argument read as n_3^2";
pub const NOTE_D4_AS_PRINTED: &str = "D4 relation W23*W23 = W24*W24 kept as printed (the V reading is preset d4-D-v)";
pub const NOTE_D4_V: &str = "D4 relation W23*W23 = W24*W24 read as W23*V23 = W24*V24";
pub const NOTE_D4_COMPLETED: &str =
    "D4 list completed with W13^2, W14^2, W13*W14, V13^2, V14^2, V13*V14, which are absent from the printed relations";
pub const NOTE_D4_LABELS: &str = "D4 sum: m_ij are the e_i - e_j variables, n_ij the e_i + e_j variables";
pub const NOTE_TRUNCATED: &str = "jet equality is consistent to the stated weight, not proved";

fn q(order: i64) -> HalfInt {
    HalfInt::from_int(order)
}

fn eval_opts(global: &Global, with_charges: bool) -> EvalOptions {
    EvalOptions { with_charges, node_budget: global.budget, ..EvalOptions::default() }
}

fn jet_opts(global: &Global, multigraded: bool, engine: Engine) -> JetOptions {
    JetOptions {
        multigraded,
        engine: match engine {
            Engine::Exact => RankEngine::Exact,
            Engine::Modular => RankEngine::Modular,
        },
        max_matrix_dim: global.budget.map(|b| b as usize),
        parallel: true,
    }
}

fn positive(name: &str, v: i64) -> Result<(), Failure> {
    if v < 1 {
        return Err(Failure::Usage(format!("--{name} must be at least 1, got {v}")));
    }
    Ok(())
}

pub fn verify(cmd: &Verify, global: &Global) -> Outcome {
    match cmd {
        Verify::Thm1 { variant, n, order, charges } => {
            positive("order", *order)?;
            let lhs = match variant {
                Variant::A => build_b_form(*n)?,
                Variant::B => build_bprime_form(*n)?,
            };
            let rhs = build_cartan_side(CartanType::A, *n)?;
            let mut r = Report::new("verify thm1")
                .preset(lhs.name.clone())
                .preset(rhs.name.clone())
                .order("q", order)
                .order("charges", charges)
                .note(NOTE_DENOMINATOR);
            let c = verify_identity(&lhs, &rhs, q(*order), &eval_opts(global, *charges))?;
            r.check(Check::comparison(format!("{} = {}", lhs.name, rhs.name), &c));
            Ok(r)
        }
        Verify::Pentagon { xdeg, qorder, drop_middle } => {
            positive("xdeg", *xdeg as i64)?;
            let mut r = Report::new("verify pentagon").order("xdeg", xdeg).order("qorder", qorder);
            let alg = NCAlgebra::a_type(2);
            for (label, shifted) in [("phi(y) phi(x) = phi(x) phi(-yx) phi(y)", false), ("half-shifted arguments", true)] {
                let (lhs, rhs) = pentagon_factors(shifted, *drop_middle);
                let c = product_identity(&alg, &lhs, &rhs, *xdeg, q(*qorder))?;
                let label = if *drop_middle { format!("{label}, middle factor dropped") } else { label.to_string() };
                r.check(Check::comparison(label, &c));
            }
            Ok(r)
        }
        Verify::OrderedProduct { kind, xdeg, qorder } => {
            positive("xdeg", *xdeg as i64)?;
            let parsed = parse_ordered(kind)?;
            let mut r = Report::new("verify ordered-product").preset(kind.clone()).order("xdeg", xdeg).order("qorder", qorder);
            r.check(Check::comparison("ordered product", &ordered_product_check(parsed, *xdeg, q(*qorder))?));
            Ok(r)
        }
        Verify::Quiver { rank, orientation, kmax, order } => quiver(*rank, orientation, *kmax, *order, global),
        Verify::B2 { order, charges } => {
            positive("order", *order)?;
            let (a, b) = (build_b2_char_form(), build_b2_quintuple_form());
            let mut r = Report::new("verify b2")
                .preset(a.name.clone())
                .preset(b.name.clone())
                .order("q", order)
                .order("charges", charges)
                .note(NOTE_B2_EXPONENT);
            let c = verify_identity(&a, &b, q(*order), &eval_opts(global, *charges))?;
            r.check(Check::comparison(format!("{} = {}", a.name, b.name), &c));
            Ok(r)
        }
        Verify::B2Product { order } => {
            positive("order", *order)?;
            let spec = build_b2_char_form();
            let opts = eval_opts(global, false);
            let sum = evaluate_with(&spec, q(*order), &opts)?;
            let product = euler_product(&b2_product_factors(), q(*order))?;
            let mut r = Report::new("verify b2-product").preset(spec.name.clone()).preset("cartan-a3").preset("cartan-a2").order("q", order);
            r.check(Check::comparison("sum = (-q;q)(-q;q^2)^2 / (q,q^4;q^5)", &series_eq(&sum, &product)?));
            let a2 = evaluate_with(&build_cartan_side(CartanType::A, 3)?, q(*order), &opts)?;
            let a1 = evaluate_with(&build_cartan_side(CartanType::A, 2)?, q(*order), &opts)?;
            r.check(Check::comparison("sum = cartan-a3 * cartan-a2", &series_eq(&sum, &a2.mul(&a1)?)?));
            Ok(r)
        }
        Verify::D4 { order, primed } => {
            positive("order", *order)?;
            let lhs = build_d4_form(*primed);
            let rhs = build_cartan_side(CartanType::D, 4)?;
            let mut r = Report::new("verify d4")
                .preset(lhs.name.clone())
                .preset(rhs.name.clone())
                .order("q", order)
                .order("charges", false)
                .note(NOTE_D4_LABELS);
            let opts = eval_opts(global, false);
            if *primed {
                // the primed sum is an upper bound, not an identity
                let sum = evaluate_with(&lhs, q(*order), &opts)?;
                let cartan = evaluate_with(&rhs, q(*order), &opts)?;
                r.check(Check::inequality(format!("{} <= {}", rhs.name, lhs.name), &series_leq(&cartan, &sum)?));
            } else {
                let c = verify_identity(&lhs, &rhs, q(*order), &opts)?;
                r.check(Check::comparison(format!("{} = {}", lhs.name, rhs.name), &c));
            }
            Ok(r)
        }
    }
}

fn parse_ordered(kind: &str) -> Result<OrderedKind, Failure> {
    if kind == "d4" {
        return Ok(OrderedKind::D4);
    }
    kind.strip_prefix('a')
        .and_then(|n| n.parse().ok())
        .map(OrderedKind::A)
        .ok_or_else(|| Failure::Usage(format!("--type must be aN or d4, got `{kind}`")))
}

/// Every vector in `[0, kmax]^rank`, last coordinate fastest.
fn boxed_vectors(rank: usize, kmax: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..rank {
        out = out.into_iter().flat_map(|v: Vec<i64>| (0..=kmax).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

const LISTED_REPS: usize = 200;

fn quiver(rank: usize, orientation: &str, kmax: i64, order: i64, global: &Global) -> Outcome {
    positive("order", order)?;
    if kmax < 0 {
        return Err(Failure::Usage(format!("--kmax must be nonnegative, got {kmax}")));
    }
    let quiver = QuiverA::parse(orientation)?;
    if quiver.rank() != rank {
        return Err(Failure::Usage(format!("orientation `{orientation}` has {} arrows, rank {rank} needs {}", orientation.len(), rank.saturating_sub(1))));
    }
    let mut r = Report::new("verify quiver").preset(format!("A{rank} {quiver}")).order("kmax", kmax).order("q", order);
    let mut listed = 0;
    let mut seen: u64 = 0;
    for k in boxed_vectors(rank, kmax) {
        let reps = enumerate_reps(&quiver, &k)?;
        seen += reps.len() as u64;
        if let Some(cap) = global.budget.filter(|&cap| seen > cap) {
            return Err(Failure::Budget(format!("budget exceeded: quiver representations reached {seen} (cap {cap})")));
        }
        r.check(Check::comparison(format!("k={k:?}"), &verify_theorem51(&quiver, &k, q(order))?));
        for rep in reps.iter().filter(|_| k.iter().any(|&x| x > 0)) {
            if listed < LISTED_REPS {
                r.details.push(format!("k={k:?}: {rep} codim {}", codim(&quiver, rep)));
            }
            listed += 1;
        }
    }
    if listed > LISTED_REPS {
        r.details.push(format!("{} more representations not listed", listed - LISTED_REPS));
    }
    Ok(r)
}

fn d4_note(preset: &str) -> Option<&'static str> {
    match preset {
        "d4-D" => Some(NOTE_D4_AS_PRINTED),
        "d4-D-v" => Some(NOTE_D4_V),
        "d4-D-v+" => Some(NOTE_D4_COMPLETED),
        _ => None,
    }
}

pub fn jets(cmd: &Jets, global: &Global) -> Outcome {
    match cmd {
        Jets::Hilbert { preset, weight, multigraded, engine } => {
            let p = jet_preset(preset)?;
            let result = hilbert_series_with(&p, *weight, &jet_opts(global, *multigraded, *engine))?;
            let mut r = Report::new("jets hilbert").preset(p.name.clone()).order("weight", weight).order("multigraded", multigraded);
            if let Some(n) = d4_note(preset) {
                r = r.note(n);
            }
            if result.modular_rejected {
                r = r.note("modular rank disagreed with the exact engine on a low weight; recomputed exactly");
            }
            r.details.push(format!("HS = {}", result.series.display_with_order()));
            r.details.push(format!("{} blocks, largest {} x {}", result.blocks, result.largest_rows, result.largest_cols));
            Ok(r)
        }
        Jets::ClassicallyFree { n, weight, engine } => {
            let result = verify_classically_free(*n, *weight, &jet_opts(global, false, *engine))?;
            let mut r = Report::new("jets classically-free")
                .preset(format!("sl{n}-A"))
                .preset(format!("B-a{n}"))
                .order("weight", weight)
                .note(NOTE_DENOMINATOR)
                .note(NOTE_TRUNCATED);
            r.check(Check::comparison("HS(J(A)) = B sum", &result.comparison));
            r.details.push(format!("HS = {}", result.hilbert.display_with_order()));
            Ok(r)
        }
    }
}

pub fn forms(cmd: &Forms) -> Outcome {
    let Forms::ExpandDiff { n, kind } = cmd;
    let form_kind = match kind {
        Kind::B => FormKind::B,
        Kind::Bprime => FormKind::Bprime,
    };
    let poly = expand_form_difference(*n, form_kind)?;
    let name = match kind {
        Kind::B => "B",
        Kind::Bprime => "Bprime",
    };
    let mut r = Report::new("forms expand-diff").preset(format!("{name}-a{}", n + 1)).order("n", n);
    r.details.push(format!("difference = {poly}"));
    if *kind == Kind::Bprime {
        let table = prop43_table_check(*n)?;
        for row in &table.rows {
            let verdict = if row.matches() { Verdict::Equal } else { Verdict::Mismatch };
            let check = Check::plain(format!("{:?} {}: table {}, actual {}", row.term_type, row.monomial, row.expected, row.actual), verdict);
            r.check(check);
        }
        let stray = if table.stray_k_products.is_empty() { Verdict::Equal } else { Verdict::Mismatch };
        r.check(Check::plain(format!("no k_i k_j with j > i + 1 ({} found)", table.stray_k_products.len()), stray));
    }
    Ok(r)
}
