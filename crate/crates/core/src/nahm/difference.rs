use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::forms::{build_b_form, build_bprime_form, pair_label, pairs};
use crate::error::{Error, Result};
use crate::poly::{rat, SparsePoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormKind {
    B,
    Bprime,
}

/// The six kinds of terms involving `m_{i1,n+1}`; the third kind covers
/// both the case `j2 + 1 < n + 1` and the one where `m_{i2,n+1}` is the
/// partner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TermType {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub term_type: TermType,
    pub monomial: String,
    pub expected: i64,
    #[serde(serialize_with = "ser_rational")]
    pub actual: BigRational,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.actual == rat(self.expected, 1)
    }
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&super::format_rational(r))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub n: usize,
    pub rows: Vec<TableRow>,
    /// `k_i k_j` monomials with `j > i + 1` that survived.
    pub stray_k_products: Vec<String>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.stray_k_products.is_empty() && self.rows.iter().all(TableRow::matches)
    }
}

fn k_label(i: usize) -> String {
    format!("k{i}")
}

/// Variables of the difference polynomial for rank `n` (`n + 1` points):
/// `k_1..k_n` followed by the non-simple `m_{s,l}`, `l >= s + 2`.
fn difference_vars(n: usize) -> Vec<String> {
    let mut vars: Vec<String> = (1..=n).map(k_label).collect();
    vars.extend(pairs(n + 1).into_iter().filter(|&(s, l)| l >= s + 2).map(|(s, l)| pair_label("m", s, l, n + 1)));
    vars
}

/// `F(m) - k^T A k / 2` for the rank `n` form `F` (B or B'), rewritten in the
/// coordinates `k_i = lambda_i(m)` and the non-simple `m_{s,l}`: each
/// `m_{i,i+1}` is replaced by `k_i - sum m_{s,l}` over the other segments
/// covering `i`.
pub fn expand_form_difference(n: usize, kind: FormKind) -> Result<SparsePoly> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("form difference needs rank n >= 3, got {n}")));
    }
    let spec = match kind {
        FormKind::B => build_b_form(n + 1)?,
        FormKind::Bprime => build_bprime_form(n + 1)?,
    };
    let vars = difference_vars(n);
    let form = spec.exponent_poly().over(&union(&spec.labels, &vars))?;
    let all = form.vars().to_vec();
    let mut bindings = HashMap::new();
    for i in 1..=n {
        let mut p = SparsePoly::var(&all, &k_label(i))?;
        for (s, l) in pairs(n + 1) {
            if s <= i && i < l && l >= s + 2 {
                p = p.sub(&SparsePoly::var(&all, &pair_label("m", s, l, n + 1))?);
            }
        }
        bindings.insert(pair_label("m", i, i + 1, n + 1), p);
    }
    let substituted = form.substitute(&bindings);
    let mut cartan = SparsePoly::zero(&all);
    for i in 1..=n {
        let ki = SparsePoly::var(&all, &k_label(i))?;
        cartan = cartan.add(&ki.mul(&ki));
        if i < n {
            cartan = cartan.sub(&ki.mul(&SparsePoly::var(&all, &k_label(i + 1))?));
        }
    }
    substituted.sub(&cartan).over(&vars)
}

fn union(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

/// Compares every coefficient of a term involving `m_{i1,n+1}` with the
/// six-type table, and checks that no `k_i k_j` with `j > i + 1` survives.
pub fn prop43_table_check(n: usize) -> Result<TableReport> {
    let poly = expand_form_difference(n, FormKind::Bprime)?;
    let m = |a: usize, b: usize| pair_label("m", a, b, n + 1);
    let coeff = |x: &str, y: &str| -> Result<BigRational> {
        if x == y {
            poly.coeff(&[(x, 2)])
        } else {
            poly.coeff(&[(x, 1), (y, 1)])
        }
    };
    let mut rows = Vec::new();
    let mut push = |t: TermType, x: String, y: String, expected: i64| -> Result<()> {
        let actual = coeff(&x, &y)?;
        let monomial = if x == y { format!("{x}^2") } else { format!("{x}*{y}") };
        rows.push(TableRow { term_type: t, monomial, expected, actual });
        Ok(())
    };
    let n_i = n as i64;
    for i1 in 1..n {
        let top = m(i1, n + 1);
        for (a, b) in pairs(n + 1) {
            if b < a + 2 || (a, b) == (i1, n + 1) {
                continue;
            }
            // partner m_{a,b} = m_{i2, j2+1}
            let (i2, j2) = (a as i64, b as i64 - 1);
            let i1v = i1 as i64;
            if b == n + 1 {
                if a > i1 {
                    push(TermType::III, m(a, b), top.clone(), 2 * (n_i - i2))?;
                }
            } else if b < i1 {
                push(TermType::I, m(a, b), top.clone(), 0)?;
            } else if a < i1 {
                push(TermType::II, m(a, b), top.clone(), 2 * (j2 - i1v) + 1)?;
            } else {
                push(TermType::III, m(a, b), top.clone(), 2 * (j2 - i2))?;
            }
        }
        for i in 1..=n {
            let expected = if i < i1 {
                push(TermType::IV, k_label(i), top.clone(), 0)?;
                continue;
            } else if i == i1 || i == n {
                -1
            } else {
                -2
            };
            push(TermType::V, k_label(i), top.clone(), expected)?;
        }
        push(TermType::VI, top.clone(), top.clone(), n_i - i1 as i64)?;
    }
    let mut stray = Vec::new();
    for i in 1..=n {
        for j in i + 2..=n {
            let c = poly.coeff(&[(&k_label(i), 1), (&k_label(j), 1)])?;
            if !c.is_zero() {
                stray.push(format!("k{i}*k{j}"));
            }
        }
    }
    Ok(TableReport { n, rows, stray_k_products: stray })
}
