//! Lattice sums of Nahm type,
//!
//! ```text
//!   sum_{m >= 0} q^{Q(m)} y^{U m} / ((q)_{m_1} ... (q)_{m_l}),   Q(m) = m^T A m + b.m
//! ```
//!
//! together with the forms that occur in the fermionic character identities
//! for level one principal subspaces, certified enumeration bounds, and the
//! symbolic bookkeeping of quadratic-form differences.

mod bound;
mod difference;
mod evaluate;
mod forms;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::poly::SparsePoly;
use crate::series::{series_eq, Comparison};

pub use bound::{compute_bound, BoundStrategy, EnumerationBound};
pub use difference::{expand_form_difference, prop43_table_check, FormKind, TableReport, TableRow, TermType};
pub use evaluate::{evaluate, evaluate_with, EvalOptions};
pub use forms::{
    b2_product_factors, b_family_terms, build_b2_char_form, build_b2_quintuple_form, build_b_form, build_bprime_form,
    build_cartan_side, build_d4_form, build_sl3_three_form, d4_labels, lambda_rows, pair_label, preset, preset_names, BFamily,
    CartanType, D4_B_TERMS,
};

/// One side of a fermionic identity: exponent `Q(m) = m^T quadratic m +
/// linear . m`, charges `U m`, and a `(q)_{m_i}` denominator per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NahmSumSpec {
    pub name: String,
    pub labels: Vec<String>,
    pub quadratic: Vec<Vec<BigRational>>,
    pub linear: Vec<BigRational>,
    pub charges: Vec<Vec<i64>>,
}

/// `2 Q(m) = sum diag2_i m_i^2 + sum_{i<j} cross2_ij m_i m_j + sum lin2_i m_i`
/// with integer coefficients.
#[derive(Clone, Debug)]
pub(crate) struct DoubledForm {
    pub diag2: Vec<i64>,
    pub cross2: Vec<Vec<i64>>,
    pub lin2: Vec<i64>,
}

impl DoubledForm {
    pub fn twice_exponent(&self, m: &[i64]) -> i64 {
        let mut total = 0;
        for i in 0..m.len() {
            if m[i] == 0 {
                continue;
            }
            total += self.diag2[i] * m[i] * m[i] + self.lin2[i] * m[i];
            for j in i + 1..m.len() {
                total += self.cross2[i][j] * m[i] * m[j];
            }
        }
        total
    }
}

fn to_i64_exact(r: &BigRational, what: &str) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::InvalidForm(format!("{what} = {r} is not integral")));
    }
    r.to_integer().to_i64().ok_or_else(|| Error::InvalidForm(format!("{what} = {r} out of range")))
}

impl NahmSumSpec {
    /// Builds a spec from `sum c * m_i * m_j` monomial terms (`i == j` for squares).
    pub fn from_terms(
        name: impl Into<String>,
        labels: Vec<String>,
        terms: &[(usize, usize, BigRational)],
        linear: Vec<BigRational>,
        charges: Vec<Vec<i64>>,
    ) -> Self {
        let l = labels.len();
        let mut quadratic = vec![vec![BigRational::zero(); l]; l];
        let half = BigRational::new(1.into(), 2.into());
        for (i, j, c) in terms {
            if i == j {
                quadratic[*i][*i] += c;
            } else {
                quadratic[*i][*j] += c * &half;
                quadratic[*j][*i] += c * &half;
            }
        }
        NahmSumSpec { name: name.into(), labels, quadratic, linear, charges }
    }

    pub fn var_count(&self) -> usize {
        self.labels.len()
    }

    pub fn charge_rank(&self) -> usize {
        self.charges.len()
    }

    pub fn validate(&self) -> Result<()> {
        let l = self.labels.len();
        if self.quadratic.len() != l || self.quadratic.iter().any(|row| row.len() != l) {
            return Err(Error::InvalidForm(format!("quadratic form must be {l}x{l}")));
        }
        if self.linear.len() != l {
            return Err(Error::InvalidForm(format!("linear part must have length {l}")));
        }
        if self.charges.iter().any(|row| row.len() != l) {
            return Err(Error::InvalidForm(format!("charge rows must have length {l}")));
        }
        for i in 0..l {
            for j in 0..i {
                if self.quadratic[i][j] != self.quadratic[j][i] {
                    return Err(Error::InvalidForm(format!("quadratic form not symmetric at ({i},{j})")));
                }
            }
        }
        self.doubled()?;
        Ok(())
    }

    /// Integer coefficients of `2 Q`; fails unless `Q` takes half-integer
    /// values through integral coefficients of `2Q`.
    pub(crate) fn doubled(&self) -> Result<DoubledForm> {
        let l = self.labels.len();
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        let mut diag2 = vec![0; l];
        let mut cross2 = vec![vec![0; l]; l];
        let mut lin2 = vec![0; l];
        for i in 0..l {
            diag2[i] = to_i64_exact(&(&self.quadratic[i][i] * &two), "2*quadratic diagonal")?;
            lin2[i] = to_i64_exact(&(&self.linear[i] * &two), "2*linear")?;
            for j in i + 1..l {
                let c = to_i64_exact(&(&self.quadratic[i][j] * &four), "4*quadratic off-diagonal")?;
                cross2[i][j] = c;
                cross2[j][i] = c;
            }
        }
        Ok(DoubledForm { diag2, cross2, lin2 })
    }

    /// `Q(m)` as an exact half-integer.
    pub fn exponent(&self, m: &[i64]) -> Result<HalfInt> {
        Ok(HalfInt::from_twice(self.doubled()?.twice_exponent(m)))
    }

    pub fn charge_of(&self, m: &[i64]) -> Vec<i64> {
        self.charges.iter().map(|row| row.iter().zip(m).map(|(u, x)| u * x).sum()).collect()
    }

    /// The exponent `Q` as a polynomial in the labels.
    pub fn exponent_poly(&self) -> SparsePoly {
        let l = self.labels.len();
        let mut p = SparsePoly::zero(&self.labels);
        let two = BigRational::from_integer(2.into());
        for i in 0..l {
            let mut e = vec![0; l];
            e[i] = 2;
            p.add_term(e, self.quadratic[i][i].clone());
            let mut e = vec![0; l];
            e[i] = 1;
            p.add_term(e, self.linear[i].clone());
            for j in i + 1..l {
                let mut e = vec![0; l];
                e[i] = 1;
                e[j] = 1;
                p.add_term(e, &self.quadratic[i][j] * &two);
            }
        }
        p
    }

    /// Charge row `r` as a linear polynomial in the labels.
    pub fn charge_poly(&self, r: usize) -> SparsePoly {
        let l = self.labels.len();
        let mut p = SparsePoly::zero(&self.labels);
        for (i, &u) in self.charges[r].iter().enumerate() {
            let mut e = vec![0; l];
            e[i] = 1;
            p.add_term(e, BigRational::from_integer(u.into()));
        }
        p
    }

    /// Same sum with variables listed in the order `perm` (a permutation of
    /// `0..l`): new variable `i` is old variable `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> NahmSumSpec {
        NahmSumSpec {
            name: self.name.clone(),
            labels: perm.iter().map(|&p| self.labels[p].clone()).collect(),
            quadratic: perm.iter().map(|&a| perm.iter().map(|&b| self.quadratic[a][b].clone()).collect()).collect(),
            linear: perm.iter().map(|&p| self.linear[p].clone()).collect(),
            charges: self.charges.iter().map(|row| perm.iter().map(|&p| row[p]).collect()).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&SpecFile::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<NahmSumSpec> {
        let file: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let spec = NahmSumSpec::try_from(file)?;
        spec.validate()?;
        Ok(spec)
    }
}

/// On-disk form description; rationals are strings such as `"-1/2"`.
#[derive(Serialize, Deserialize)]
struct SpecFile {
    name: String,
    labels: Vec<String>,
    quadratic: Vec<Vec<String>>,
    #[serde(default)]
    linear: Option<Vec<String>>,
    #[serde(default)]
    charges: Vec<Vec<i64>>,
}

pub(crate) fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

impl From<&NahmSumSpec> for SpecFile {
    fn from(s: &NahmSumSpec) -> Self {
        SpecFile {
            name: s.name.clone(),
            labels: s.labels.clone(),
            quadratic: s.quadratic.iter().map(|row| row.iter().map(format_rational).collect()).collect(),
            linear: Some(s.linear.iter().map(format_rational).collect()),
            charges: s.charges.clone(),
        }
    }
}

impl TryFrom<SpecFile> for NahmSumSpec {
    type Error = Error;
    fn try_from(f: SpecFile) -> Result<Self> {
        let l = f.labels.len();
        let quadratic = f
            .quadratic
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let linear = match f.linear {
            Some(v) => v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?,
            None => vec![BigRational::zero(); l],
        };
        Ok(NahmSumSpec { name: f.name, labels: f.labels, quadratic, linear, charges: f.charges })
    }
}

/// Compares two Nahm sums at a common truncation order.
pub fn verify_identity(lhs: &NahmSumSpec, rhs: &NahmSumSpec, order: HalfInt, opts: &EvalOptions) -> Result<Comparison> {
    if opts.with_charges && lhs.charge_rank() != rhs.charge_rank() {
        return Err(Error::ChargeRankMismatch { left: lhs.charge_rank(), right: rhs.charge_rank() });
    }
    let a = evaluate_with(lhs, order, opts)?;
    let b = evaluate_with(rhs, order, opts)?;
    series_eq(&a, &b)
}

/// `label -> value` bindings for grounding symbolic forms at `m`.
pub fn bind_labels(labels: &[String], m: &[i64]) -> HashMap<String, BigRational> {
    labels.iter().cloned().zip(m.iter().map(|&v| BigRational::from_integer(v.into()))).collect()
}

/// Least common multiple of the denominators of `values`.
pub(crate) fn common_denominator<'a>(values: impl Iterator<Item = &'a BigRational>) -> BigInt {
    values.fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub(crate) fn is_nonnegative(r: &BigRational) -> bool {
    !r.is_negative()
}
