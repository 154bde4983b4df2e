//! Truncated q-series with exact integer coefficients and optional charge
//! multi-exponents.
//!
//! A [`QSeries`] stores `sum c(e, u) q^e y^u + O(q^N)` where `e` is a
//! half-integer, `u` an integer vector of length `charge_rank`, and `N` the
//! exclusive truncation order. Every binary operation truncates at the smaller
//! of its operands' orders.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

pub type Charges = Vec<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    order: HalfInt,
    charge_rank: usize,
    terms: BTreeMap<(HalfInt, Charges), BigInt>,
}

/// Location and values of the first coefficient where two series disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub qexp: HalfInt,
    pub charges: Charges,
    pub left: BigInt,
    pub right: BigInt,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}", self.qexp)?;
        if !self.charges.is_empty() {
            write!(f, " charges {:?}", self.charges)?;
        }
        write!(f, ": {} vs {}", self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Comparison {
    Equal,
    Mismatch(Mismatch),
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Inequality {
    Holds,
    Violation(Mismatch),
}

impl Inequality {
    pub fn holds(&self) -> bool {
        matches!(self, Inequality::Holds)
    }
}

/// One factor `(sign q^shift; q^step)_inf^exponent`, that is
/// `prod_{k>=0} (1 - sign q^{shift + k step})^exponent`, of an Euler product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerFactor {
    pub sign: i8,
    pub shift: i64,
    pub step: i64,
    pub exponent: i64,
}

impl EulerFactor {
    pub fn new(sign: i8, shift: i64, step: i64, exponent: i64) -> Self {
        EulerFactor { sign, shift, step, exponent }
    }
}

impl QSeries {
    pub fn zero(order: HalfInt, charge_rank: usize) -> Self {
        QSeries { order, charge_rank, terms: BTreeMap::new() }
    }

    pub fn one(order: HalfInt, charge_rank: usize) -> Self {
        QSeries::monomial(BigInt::one(), HalfInt::ZERO, vec![0; charge_rank], order)
    }

    /// `coeff * q^qexp * y^charges`, or zero if `qexp >= order`.
    pub fn monomial(coeff: BigInt, qexp: HalfInt, charges: Charges, order: HalfInt) -> Self {
        let mut s = QSeries::zero(order, charges.len());
        s.add_term(qexp, charges, coeff);
        s
    }

    /// Uncharged series with integer exponents `0..coeffs.len()`.
    pub fn from_coeffs<I>(coeffs: I, order: HalfInt) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let mut s = QSeries::zero(order, 0);
        for (e, c) in coeffs.into_iter().enumerate() {
            s.add_term(HalfInt::from_int(e as i64), Vec::new(), c.into());
        }
        s
    }

    pub fn order(&self) -> HalfInt {
        self.order
    }

    pub fn charge_rank(&self) -> usize {
        self.charge_rank
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order: q-exponent, then charges lexicographically.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &Charges, &BigInt)> {
        self.terms.iter().map(|((e, u), c)| (*e, u, c))
    }

    /// Accumulates `coeff q^qexp y^charges`; terms at or beyond the order are
    /// dropped and cancellations are purged.
    pub fn add_term(&mut self, qexp: HalfInt, charges: Charges, coeff: BigInt) {
        assert_eq!(charges.len(), self.charge_rank, "charge vector length");
        if qexp >= self.order || coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((qexp, charges)) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_rank(&self, other: &QSeries) -> Result<()> {
        if self.charge_rank != other.charge_rank {
            return Err(Error::ChargeRankMismatch { left: self.charge_rank, right: other.charge_rank });
        }
        Ok(())
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.check_rank(other)?;
        let order = self.order.min(other.order);
        let mut out = self.truncated(order);
        for ((e, u), c) in &other.terms {
            out.add_term(*e, u.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QSeries {
        QSeries {
            order: self.order,
            charge_rank: self.charge_rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, factor: &BigInt) -> QSeries {
        if factor.is_zero() {
            return QSeries::zero(self.order, self.charge_rank);
        }
        QSeries {
            order: self.order,
            charge_rank: self.charge_rank,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * factor)).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        self.check_rank(other)?;
        let order = self.order.min(other.order);
        let mut out = QSeries::zero(order, self.charge_rank);
        for ((ea, ua), ca) in &self.terms {
            for ((eb, ub), cb) in &other.terms {
                let e = *ea + *eb;
                if e >= order {
                    // terms of `other` are sorted by exponent
                    break;
                }
                let u: Charges = ua.iter().zip(ub).map(|(x, y)| x + y).collect();
                out.add_term(e, u, ca * cb);
            }
        }
        Ok(out)
    }

    /// Multiplies by `q^shift * y^charges`.
    pub fn shifted(&self, shift: HalfInt, charges: &[i64]) -> QSeries {
        assert_eq!(charges.len(), self.charge_rank, "charge vector length");
        let mut out = QSeries::zero(self.order, self.charge_rank);
        for ((e, u), c) in &self.terms {
            let u: Charges = u.iter().zip(charges).map(|(x, y)| x + y).collect();
            out.add_term(*e + shift, u, c.clone());
        }
        out
    }

    pub fn truncated(&self, order: HalfInt) -> QSeries {
        let order = order.min(self.order);
        QSeries {
            order,
            charge_rank: self.charge_rank,
            terms: self.terms.iter().filter(|((e, _), _)| *e < order).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Sets every charge variable to 1.
    pub fn drop_charges(&self) -> QSeries {
        let mut out = QSeries::zero(self.order, 0);
        for ((e, _), c) in &self.terms {
            out.add_term(*e, Vec::new(), c.clone());
        }
        out
    }

    /// Keeps the terms whose charge vector satisfies `keep`.
    pub fn filter_charges(&self, mut keep: impl FnMut(&[i64]) -> bool) -> QSeries {
        QSeries {
            order: self.order,
            charge_rank: self.charge_rank,
            terms: self.terms.iter().filter(|((_, u), _)| keep(u)).map(|(k, c)| (k.clone(), c.clone())).collect(),
        }
    }

    /// Keeps only the charge coordinates listed in `keep`, summing terms that
    /// collide.
    pub fn project_charges(&self, keep: &[usize]) -> QSeries {
        let mut out = QSeries::zero(self.order, keep.len());
        for ((e, u), c) in &self.terms {
            out.add_term(*e, keep.iter().map(|&i| u[i]).collect(), c.clone());
        }
        out
    }

    /// Coefficient of `q^qexp y^charges`; querying at or past the truncation
    /// order is an error.
    pub fn coeff(&self, qexp: HalfInt, charges: &[i64]) -> Result<BigInt> {
        if qexp >= self.order {
            return Err(Error::OutOfRange { qexp, order: self.order });
        }
        if charges.len() != self.charge_rank {
            return Err(Error::ChargeLength { expected: self.charge_rank, got: charges.len() });
        }
        Ok(self.terms.get(&(qexp, charges.to_vec())).cloned().unwrap_or_default())
    }

    /// Coefficients of integer powers `q^0 .. q^{len-1}` of an uncharged (or
    /// charge-summed) series; half-integer exponents are ignored.
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let len = self.order.ceil().max(0) as usize;
        let mut out = vec![BigInt::zero(); len];
        for ((e, _), c) in &self.terms {
            if let Some(i) = e.to_int() {
                if i >= 0 && (i as usize) < len {
                    out[i as usize] += c;
                }
            }
        }
        out
    }

    pub fn all_coefficients_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Canonical rendering with the truncation term appended.
    pub fn display_with_order(&self) -> String {
        let body = self.to_string();
        format!("{body} + O(q^{})", self.order)
    }
}

/// Walks both series in canonical order up to the smaller truncation and
/// reports the first position where `accept(left, right)` fails.
fn first_failure(a: &QSeries, b: &QSeries, accept: impl Fn(&BigInt, &BigInt) -> bool) -> Result<Option<Mismatch>> {
    a.check_rank(b)?;
    let order = a.order.min(b.order);
    let zero = BigInt::zero();
    let mut ia = a.terms.iter().take_while(|((e, _), _)| *e < order).peekable();
    let mut ib = b.terms.iter().take_while(|((e, _), _)| *e < order).peekable();
    loop {
        let (key, ca, cb) = match (ia.peek(), ib.peek()) {
            (None, None) => return Ok(None),
            (Some((ka, ca)), None) => (*ka, *ca, &zero),
            (None, Some((kb, cb))) => (*kb, &zero, *cb),
            (Some((ka, ca)), Some((kb, cb))) => match ka.cmp(kb) {
                std::cmp::Ordering::Less => (*ka, *ca, &zero),
                std::cmp::Ordering::Greater => (*kb, &zero, *cb),
                std::cmp::Ordering::Equal => (*ka, *ca, *cb),
            },
        };
        if !accept(ca, cb) {
            return Ok(Some(Mismatch { qexp: key.0, charges: key.1.clone(), left: ca.clone(), right: cb.clone() }));
        }
        let key = key.clone();
        if ia.peek().is_some_and(|(k, _)| **k == key) {
            ia.next();
        }
        if ib.peek().is_some_and(|(k, _)| **k == key) {
            ib.next();
        }
    }
}

/// Coefficientwise equality up to the smaller truncation order.
pub fn series_eq(a: &QSeries, b: &QSeries) -> Result<Comparison> {
    Ok(match first_failure(a, b, |x, y| x == y)? {
        None => Comparison::Equal,
        Some(m) => Comparison::Mismatch(m),
    })
}

/// Coefficientwise `a <= b` up to the smaller truncation order.
pub fn series_leq(a: &QSeries, b: &QSeries) -> Result<Inequality> {
    Ok(match first_failure(a, b, |x, y| x <= y)? {
        None => Inequality::Holds,
        Some(m) => Inequality::Violation(m),
    })
}

/// Number of integer exponents strictly below `order` that are >= 0.
pub(crate) fn dense_len(order: HalfInt) -> usize {
    order.ceil().max(0) as usize
}

/// Multiplies a dense series in place by `1 + sign*q^a`.
pub(crate) fn dense_mul_binomial(c: &mut [BigInt], sign: i64, a: usize) {
    if a >= c.len() {
        return;
    }
    for j in (a..c.len()).rev() {
        let (lo, hi) = c.split_at_mut(j);
        let src = &lo[j - a];
        if src.is_zero() {
            continue;
        }
        if sign > 0 {
            hi[0] += src;
        } else {
            hi[0] -= src;
        }
    }
}

/// Divides a dense series in place by `1 + sign*q^a`, `a >= 1`.
pub(crate) fn dense_div_binomial(c: &mut [BigInt], sign: i64, a: usize) {
    debug_assert!(a >= 1);
    for j in a..c.len() {
        let (lo, hi) = c.split_at_mut(j);
        let src = &lo[j - a];
        if src.is_zero() {
            continue;
        }
        if sign > 0 {
            hi[0] -= src;
        } else {
            hi[0] += src;
        }
    }
}

/// `(q)_n = prod_{i=1..n} (1 - q^i)` truncated at `order`.
pub fn pochhammer(n: u32, order: HalfInt) -> QSeries {
    let mut c = vec![BigInt::zero(); dense_len(order)];
    if let Some(first) = c.first_mut() {
        *first = BigInt::one();
    }
    for i in 1..=n as usize {
        dense_mul_binomial(&mut c, -1, i);
    }
    QSeries::from_coeffs(c, order)
}

/// `1/(q)_n = prod_{i=1..n} sum_k q^{ik}` truncated at `order`.
pub fn inv_pochhammer(n: u32, order: HalfInt) -> QSeries {
    QSeries::from_coeffs(inv_pochhammer_dense(n, dense_len(order)), order)
}

pub(crate) fn inv_pochhammer_dense(n: u32, len: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); len];
    if let Some(first) = c.first_mut() {
        *first = BigInt::one();
    }
    for i in 1..=n as usize {
        if i >= len {
            break;
        }
        dense_div_binomial(&mut c, -1, i);
    }
    c
}

/// Expands `prod_f (f.sign q^{f.shift}; q^{f.step})_inf^{f.exponent}`.
pub fn euler_product(factors: &[EulerFactor], order: HalfInt) -> Result<QSeries> {
    let mut c = vec![BigInt::zero(); dense_len(order)];
    if let Some(first) = c.first_mut() {
        *first = BigInt::one();
    }
    for f in factors {
        if f.shift < 1 || f.step < 1 {
            return Err(Error::DivergentFactor { shift: f.shift, step: f.step });
        }
        if f.sign != 1 && f.sign != -1 {
            return Err(Error::InvalidArgument(format!("factor sign must be +1 or -1, got {}", f.sign)));
        }
        let sign = -(f.sign as i64);
        let mut a = f.shift as usize;
        while a < c.len() {
            for _ in 0..f.exponent.unsigned_abs() {
                if f.exponent > 0 {
                    dense_mul_binomial(&mut c, sign, a);
                } else {
                    dense_div_binomial(&mut c, sign, a);
                }
            }
            a += f.step as usize;
        }
    }
    Ok(QSeries::from_coeffs(c, order))
}

fn write_power(out: &mut String, base: &str, exp: HalfInt) {
    out.push_str(base);
    if exp == HalfInt::from_int(1) {
        return;
    }
    match exp.to_int() {
        Some(v) if v >= 0 => {
            let _ = write!(out, "^{v}");
        }
        _ => {
            let _ = write!(out, "^{{{exp}}}");
        }
    }
}

/// Renders `c * q^e * y1^u1 * ...` without its sign; `None` means the
/// monomial is 1.
pub(crate) fn render_monomial(qexp: HalfInt, charges: &[i64], charge_prefix: &str) -> Option<String> {
    let mut parts = Vec::new();
    if qexp != HalfInt::ZERO {
        let mut s = String::new();
        write_power(&mut s, "q", qexp);
        parts.push(s);
    }
    for (i, &u) in charges.iter().enumerate() {
        if u != 0 {
            let mut s = String::new();
            write_power(&mut s, &format!("{charge_prefix}{}", i + 1), HalfInt::from_int(u));
            parts.push(s);
        }
    }
    (!parts.is_empty()).then(|| parts.join("*"))
}

pub(crate) fn render_signed_terms<'a>(
    terms: impl Iterator<Item = (&'a BigInt, Option<String>)>,
    out: &mut fmt::Formatter<'_>,
) -> fmt::Result {
    let mut first = true;
    for (c, mono) in terms {
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                out.write_str("-")?;
            }
        } else {
            out.write_str(if neg { " - " } else { " + " })?;
        }
        first = false;
        match mono {
            None => write!(out, "{mag}")?,
            Some(m) if mag.is_one() => out.write_str(&m)?,
            Some(m) => write!(out, "{mag}*{m}")?,
        }
    }
    if first {
        out.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render_signed_terms(self.terms.iter().map(|((e, u), c)| (c, render_monomial(*e, u, "y"))), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(v: i64) -> HalfInt {
        HalfInt::from_int(v)
    }

    fn poly(coeffs: &[i64], order: i64) -> QSeries {
        QSeries::from_coeffs(coeffs.iter().copied(), h(order))
    }

    #[test]
    fn add_cancels_and_truncates() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, -1], 10);
        assert_eq!(a.add(&b).unwrap().to_string(), "2");

        let half = QSeries::monomial(BigInt::one(), HalfInt::from_twice(1), vec![], h(3));
        assert_eq!(half.add(&half).unwrap().to_string(), "2*q^{1/2}");

        let c = poly(&[1, 1, 1, 1, 1, 1, 1], 5);
        let d = poly(&[1, 1, 1, 1, 1, 1, 1, 1], 8);
        let s = c.add(&d).unwrap();
        assert_eq!(s.order(), h(5));
        assert_eq!(s.to_string(), "2 + 2*q + 2*q^2 + 2*q^3 + 2*q^4");
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let a = QSeries::one(h(3), 1);
        let b = QSeries::one(h(3), 0);
        assert_eq!(a.add(&b), Err(Error::ChargeRankMismatch { left: 1, right: 0 }));
        assert!(a.mul(&b).is_err());
    }

    #[test]
    fn mul_examples() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, -1], 10);
        assert_eq!(a.mul(&b).unwrap().to_string(), "1 - q^2");

        let geo = poly(&[1; 10], 10);
        assert_eq!(b.mul(&geo).unwrap().to_string(), "1");

        let x = QSeries::monomial(BigInt::one(), h(0), vec![1, 0], h(5));
        let y = QSeries::monomial(BigInt::one(), h(1), vec![0, 1], h(5));
        assert_eq!(x.mul(&y).unwrap().to_string(), "q*y1*y2");
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(0, h(10)).to_string(), "1");
        assert_eq!(pochhammer(1, h(10)).to_string(), "1 - q");
        assert_eq!(pochhammer(3, h(10)).to_string(), "1 - q - q^2 + q^4 + q^5 - q^6");
        assert_eq!(inv_pochhammer(0, h(10)).to_string(), "1");
        assert_eq!(inv_pochhammer(1, h(4)).to_string(), "1 + q + q^2 + q^3");
        for n in 0..=12 {
            let p = pochhammer(n, h(30)).mul(&inv_pochhammer(n, h(30))).unwrap();
            assert_eq!(p, QSeries::one(h(30), 0), "n = {n}");
        }
    }

    #[test]
    fn euler_product_examples() {
        let euler = euler_product(&[EulerFactor::new(1, 1, 1, 1)], h(6)).unwrap();
        assert_eq!(euler.to_string(), "1 - q - q^2 + q^5");
        let dist = euler_product(&[EulerFactor::new(-1, 1, 1, 1)], h(3)).unwrap();
        assert_eq!(dist.to_string(), "1 + q + q^2");
        assert_eq!(
            euler_product(&[EulerFactor::new(-1, 0, 1, 1)], h(3)),
            Err(Error::DivergentFactor { shift: 0, step: 1 })
        );
        // negative exponent inverts
        let inv = euler_product(&[EulerFactor::new(1, 1, 1, -1)], h(12)).unwrap();
        assert_eq!(inv.mul(&euler_product(&[EulerFactor::new(1, 1, 1, 1)], h(12)).unwrap()).unwrap(), QSeries::one(h(12), 0));
    }

    #[test]
    fn coeff_contract() {
        let s = poly(&[1, 2], 5);
        assert_eq!(s.coeff(h(1), &[]).unwrap(), BigInt::from(2));
        assert_eq!(s.coeff(h(2), &[]).unwrap(), BigInt::zero());
        assert!(matches!(s.coeff(h(5), &[]), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn comparison_examples() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[1, 2], 10);
        assert_eq!(series_eq(&a, &a).unwrap(), Comparison::Equal);
        assert_eq!(
            series_eq(&a, &b).unwrap(),
            Comparison::Mismatch(Mismatch { qexp: h(1), charges: vec![], left: 1.into(), right: 2.into() })
        );
        let c = poly(&[1, 1, 1, 1, 1, 7], 5);
        let d = poly(&[1, 1, 1, 1, 1, 1, 1, 1], 8);
        assert!(series_eq(&c, &d).unwrap().is_equal());

        assert!(series_leq(&a, &b).unwrap().holds());
        assert!(matches!(series_leq(&b, &a).unwrap(), Inequality::Violation(m) if m.qexp == h(1)));
        assert!(series_leq(&b, &b).unwrap().holds());
    }

    #[test]
    fn rendering() {
        let mut s = QSeries::zero(h(5), 1);
        s.add_term(h(0), vec![0], 1.into());
        s.add_term(h(1), vec![0], 2.into());
        s.add_term(h(2), vec![1], 3.into());
        assert_eq!(s.to_string(), "1 + 2*q + 3*q^2*y1");
        assert_eq!(s.display_with_order(), "1 + 2*q + 3*q^2*y1 + O(q^5)");
        let mut t = QSeries::zero(h(5), 2);
        t.add_term(HalfInt::from_twice(3), vec![2, -1], (-1).into());
        assert_eq!(t.to_string(), "-q^{3/2}*y1^2*y2^{-1}");
        assert_eq!(QSeries::zero(h(1), 0).to_string(), "0");
    }
}
