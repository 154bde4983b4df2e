use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::rank::{sparse_rank, SparseRow};
use super::{monomial_mul, JetPoly, JetPreset, JetVar, Monomial};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::nahm::{build_b_form, evaluate_with, EvalOptions, NahmSumSpec};
use crate::series::{series_eq, series_leq, Comparison, Inequality, QSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankEngine {
    /// Fraction-free integer elimination.
    Exact,
    /// Elimination modulo `2^61 - 1`, cross-checked against the exact
    /// engine on the low weights.
    Modular,
}

/// Weights up to which a modular run is cross-checked.
pub const MODULAR_CHECK_WEIGHT: usize = 8;

#[derive(Clone, Debug)]
pub struct JetOptions {
    /// Refine the series by charge; needs charge-homogeneous relations.
    pub multigraded: bool,
    pub engine: RankEngine,
    /// Largest allowed row or column count of a single block.
    pub max_matrix_dim: Option<usize>,
    pub parallel: bool,
}

impl Default for JetOptions {
    fn default() -> Self {
        JetOptions { multigraded: false, engine: RankEngine::Exact, max_matrix_dim: None, parallel: true }
    }
}

#[derive(Clone, Debug)]
pub struct HilbertResult {
    /// Coefficients through `q^max_weight`; the series is truncated at
    /// `q^{max_weight + 1}`.
    pub series: QSeries,
    pub blocks: usize,
    pub largest_rows: usize,
    pub largest_cols: usize,
    /// The modular engine disagreed with the exact one on a low weight and
    /// the whole computation was redone exactly.
    pub modular_rejected: bool,
}

pub fn hilbert_series(preset: &JetPreset, max_weight: usize, multigraded: bool) -> Result<QSeries> {
    let opts = JetOptions { multigraded, ..JetOptions::default() };
    Ok(hilbert_series_with(preset, max_weight, &opts)?.series)
}

/// Integer basis of the rational null space of `rows` (vectors of length `dim`).
fn integer_nullspace(rows: &[Vec<i64>], dim: usize) -> Vec<Vec<i64>> {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..dim {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let lead = m[row][col].clone();
        for x in m[row].iter_mut() {
            *x /= &lead;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..dim {
                    let d = &f * &m[row][j];
                    m[i][j] -= d;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![BigRational::zero(); dim];
        v[free] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[r][free].clone();
        }
        let den = v.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
        basis.push(v.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer().to_i64().unwrap_or(0)).collect());
    }
    basis
}

/// Grading of each generator: polynomial degree (when every relation is
/// homogeneous in it), then charge functionals the relations respect.
struct Grading {
    keys: Vec<Vec<i64>>,
    /// Offset of the charge part in a key, when the charge is kept exactly.
    charge_offset: Option<usize>,
}

fn grading(preset: &JetPreset, multigraded: bool) -> Result<Grading> {
    let degree = preset.relations.iter().all(|f| f.degrees().len() == 1);
    let g = preset.generators.len();
    let mut keys: Vec<Vec<i64>> = vec![if degree { vec![1] } else { Vec::new() }; g];
    let offset = keys.first().map_or(0, Vec::len);
    if multigraded {
        if !preset.charge_homogeneous() {
            return Err(Error::InvalidArgument(format!(
                "relations of `{}` are not homogeneous for the charge grading",
                preset.name
            )));
        }
        for (k, c) in keys.iter_mut().zip(&preset.charges) {
            k.extend(c);
        }
        return Ok(Grading { keys, charge_offset: Some(offset) });
    }
    if !preset.charges.is_empty() {
        let mut diffs = Vec::new();
        for f in &preset.relations {
            let cs = preset.relation_charges(f);
            for c in cs.iter().skip(1) {
                diffs.push(c.iter().zip(&cs[0]).map(|(a, b)| a - b).collect());
            }
        }
        let functionals = integer_nullspace(&diffs, preset.charge_rank());
        for (k, c) in keys.iter_mut().zip(&preset.charges) {
            k.extend(functionals.iter().map(|phi| phi.iter().zip(c).map(|(a, b)| a * b).sum::<i64>()));
        }
    }
    Ok(Grading { keys, charge_offset: None })
}

fn monomial_key(keys: &[Vec<i64>], m: &[JetVar], len: usize) -> Vec<i64> {
    let mut k = vec![0; len];
    for v in m {
        for (acc, x) in k.iter_mut().zip(&keys[v.gen as usize]) {
            *acc += x;
        }
    }
    k
}

/// Every monomial of weight `w`, grouped by grading key.
fn monomials_by_key(gens: usize, w: usize, keys: &[Vec<i64>], klen: usize) -> HashMap<Vec<i64>, Vec<Monomial>> {
    let vars: Vec<JetVar> =
        (0..gens as u16).flat_map(|gen| (1..=w.max(1) as u16).map(move |depth| JetVar { gen, depth })).collect();
    let mut out: HashMap<Vec<i64>, Vec<Monomial>> = HashMap::new();
    let mut cur = Vec::new();
    fn rec(vars: &[JetVar], start: usize, rest: usize, cur: &mut Monomial, emit: &mut dyn FnMut(&Monomial)) {
        if rest == 0 {
            emit(cur);
            return;
        }
        for i in start..vars.len() {
            let d = vars[i].depth as usize;
            if d <= rest {
                cur.push(vars[i]);
                rec(vars, i, rest - d, cur, emit);
                cur.pop();
            }
        }
    }
    rec(&vars, 0, w, &mut cur, &mut |m| {
        out.entry(monomial_key(keys, m, klen)).or_default().push(m.clone());
    });
    out
}

struct Derived {
    key: Vec<i64>,
    terms: Vec<(Monomial, i64)>,
}

fn to_terms(p: &JetPoly) -> Result<Vec<(Monomial, i64)>> {
    p.terms()
        .map(|(m, c)| {
            c.to_i64()
                .map(|c| (m.clone(), c))
                .ok_or_else(|| Error::InvalidArgument("derivative coefficients exceed 64 bits".into()))
        })
        .collect()
}

fn sub_key(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Dimension of every `(weight, key)` block of the quotient through `max_weight`.
pub fn hilbert_series_with(preset: &JetPreset, max_weight: usize, opts: &JetOptions) -> Result<HilbertResult> {
    preset.validate()?;
    let grading = grading(preset, opts.multigraded)?;
    let klen = grading.keys.first().map_or(0, Vec::len);
    let gens = preset.generators.len();
    let by_weight: Vec<HashMap<Vec<i64>, Vec<Monomial>>> =
        (0..=max_weight).map(|w| monomials_by_key(gens, w, &grading.keys, klen)).collect();

    let mut derived: Vec<Vec<Derived>> = (0..=max_weight).map(|_| Vec::new()).collect();
    for f in &preset.relations {
        let w0 = f.homogeneous_weight().expect("validated");
        let mut p = f.clone();
        for w in w0..=max_weight {
            if let Some((m, _)) = p.terms().next() {
                let key = monomial_key(&grading.keys, m, klen);
                derived[w].push(Derived { key, terms: to_terms(&p)? });
            }
            p = p.apply_t();
        }
    }

    let tasks: Vec<(usize, &Vec<i64>, &Vec<Monomial>)> = by_weight
        .iter()
        .enumerate()
        .flat_map(|(w, buckets)| {
            let mut keys: Vec<_> = buckets.iter().collect();
            keys.sort();
            keys.into_iter().map(move |(k, cols)| (w, k, cols))
        })
        .collect();

    let block = |&(w, key, cols): &(usize, &Vec<i64>, &Vec<Monomial>)| -> Result<(Vec<SparseRow>, usize)> {
        let index: HashMap<&Monomial, u32> = cols.iter().enumerate().map(|(i, m)| (m, i as u32)).collect();
        let mut rows = Vec::new();
        for (wf, list) in derived.iter().enumerate().take(w + 1) {
            for d in list {
                let Some(mults) = by_weight[w - wf].get(&sub_key(key, &d.key)) else { continue };
                for mu in mults {
                    let row: SparseRow = d.terms.iter().map(|(m, c)| (index[&monomial_mul(mu, m)], *c)).collect();
                    rows.push(row);
                }
            }
        }
        if let Some(cap) = opts.max_matrix_dim {
            let dim = rows.len().max(cols.len());
            if dim > cap {
                return Err(Error::BudgetExceeded {
                    what: format!("matrix dimension at weight {w}"),
                    count: dim as u64,
                    cap: cap as u64,
                });
            }
        }
        Ok((rows, cols.len()))
    };
    let run = |engine: RankEngine, limit: usize| -> Result<Vec<(usize, usize, usize)>> {
        let one = |t: &(usize, &Vec<i64>, &Vec<Monomial>)| -> Result<(usize, usize, usize)> {
            if t.0 > limit {
                return Ok((0, 0, 0));
            }
            let (rows, ncols) = block(t)?;
            let rank = sparse_rank(&rows, engine);
            Ok((ncols - rank, rows.len(), ncols))
        };
        if opts.parallel {
            tasks.par_iter().map(one).collect()
        } else {
            tasks.iter().map(one).collect()
        }
    };

    let mut dims = run(opts.engine, max_weight)?;
    let mut modular_rejected = false;
    if opts.engine == RankEngine::Modular {
        let exact = run(RankEngine::Exact, max_weight.min(MODULAR_CHECK_WEIGHT))?;
        let agree = tasks.iter().zip(dims.iter().zip(&exact)).all(|(t, (m, e))| t.0 > MODULAR_CHECK_WEIGHT || m == e);
        if !agree {
            modular_rejected = true;
            dims = run(RankEngine::Exact, max_weight)?;
        }
    }

    let order = HalfInt::from_int(max_weight as i64 + 1);
    let rank = if grading.charge_offset.is_some() { preset.charge_rank() } else { 0 };
    let mut series = QSeries::zero(order, rank);
    for ((w, key, _), (dim, _, _)) in tasks.iter().zip(&dims) {
        let charges = grading.charge_offset.map_or_else(Vec::new, |o| key[o..].to_vec());
        series.add_term(HalfInt::from_int(*w as i64), charges, BigInt::from(*dim));
    }
    Ok(HilbertResult {
        series,
        blocks: tasks.len(),
        largest_rows: dims.iter().map(|d| d.1).max().unwrap_or(0),
        largest_cols: dims.iter().map(|d| d.2).max().unwrap_or(0),
        modular_rejected,
    })
}

/// A jet Hilbert series set against a Nahm sum at the same truncation.
#[derive(Clone, Debug)]
pub struct ClassicalFreeness {
    pub hilbert: QSeries,
    pub character: QSeries,
    /// Equality: consistent with classical freeness through the weight.
    pub comparison: Comparison,
    /// The character never exceeds the Hilbert series.
    pub character_below: Inequality,
}

pub fn compare_with_nahm(preset: &JetPreset, spec: &NahmSumSpec, max_weight: usize, opts: &JetOptions) -> Result<ClassicalFreeness> {
    let hilbert = hilbert_series_with(preset, max_weight, opts)?.series;
    let order = HalfInt::from_int(max_weight as i64 + 1);
    let eval = EvalOptions { with_charges: opts.multigraded, ..EvalOptions::default() };
    let character = evaluate_with(spec, order, &eval)?;
    let comparison = series_eq(&hilbert, &character)?;
    let character_below = series_leq(&character, &hilbert)?;
    Ok(ClassicalFreeness { hilbert, character, comparison, character_below })
}

/// `J_infty` of the `sl_n` presentation against the lattice sum with form B.
pub fn verify_classically_free(n: usize, max_weight: usize, opts: &JetOptions) -> Result<ClassicalFreeness> {
    compare_with_nahm(&super::sln_a(n)?, &build_b_form(n)?, max_weight, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::parse_relation_file;
    use crate::nahm::{build_cartan_side, CartanType};

    fn coeffs(s: &QSeries) -> Vec<i64> {
        s.integer_coeffs().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn square_relation_gives_rogers_ramanujan() {
        let p = parse_relation_file("x2", "x^2").unwrap();
        let hs = hilbert_series(&p, 7, false).unwrap();
        assert_eq!(coeffs(&hs), vec![1, 1, 1, 1, 2, 2, 3, 3]);
        let cartan = evaluate_with(&build_cartan_side(CartanType::A, 2).unwrap(), HalfInt::from_int(8), &EvalOptions::default())
            .unwrap()
            .drop_charges();
        assert!(series_eq(&hs, &cartan).unwrap().is_equal());
    }

    #[test]
    fn cube_relation() {
        // sum q^{(a+b)^2 + a^2} / (q)_a (q)_b
        let p = parse_relation_file("x3", "x^3").unwrap();
        let hs = hilbert_series(&p, 6, false).unwrap();
        let mut expect = QSeries::zero(HalfInt::from_int(7), 0);
        for a in 0..3i64 {
            for b in 0..7i64 {
                let e = (a + b) * (a + b) + a * a;
                if e > 6 {
                    continue;
                }
                let t = crate::series::inv_pochhammer(a as u32, HalfInt::from_int(7))
                    .mul(&crate::series::inv_pochhammer(b as u32, HalfInt::from_int(7)))
                    .unwrap()
                    .shifted(HalfInt::from_int(e), &[]);
                expect = expect.add(&t).unwrap();
            }
        }
        assert!(series_eq(&hs, &expect).unwrap().is_equal());
    }

    #[test]
    fn modular_agrees() {
        let p = crate::jets::sln_a(3).unwrap();
        let opts = JetOptions { multigraded: true, engine: RankEngine::Modular, ..JetOptions::default() };
        let r = hilbert_series_with(&p, 6, &opts).unwrap();
        assert!(!r.modular_rejected);
        let exact = hilbert_series(&p, 6, true).unwrap();
        assert_eq!(r.series, exact);
    }

    #[test]
    fn budget_reports_weight() {
        let p = crate::jets::sln_a(3).unwrap();
        let opts = JetOptions { max_matrix_dim: Some(3), ..JetOptions::default() };
        match hilbert_series_with(&p, 6, &opts) {
            Err(Error::BudgetExceeded { what, .. }) => assert!(what.contains("weight")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sl3_classically_free() {
        let opts = JetOptions { multigraded: true, ..JetOptions::default() };
        let r = verify_classically_free(3, 6, &opts).unwrap();
        assert!(r.comparison.is_equal(), "{:?}", r.comparison);
    }

    #[test]
    fn nullspace_basis() {
        let b = integer_nullspace(&[vec![0, 0, 1, -1]], 4);
        assert_eq!(b.len(), 3);
        for v in &b {
            assert_eq!(v[2], v[3]);
        }
    }

    #[test]
    fn multigrading_refused_for_inhomogeneous() {
        let d = crate::jets::d4_d(crate::jets::D4Reading::AsWritten);
        assert!(hilbert_series(&d, 2, true).is_err());
    }
}
