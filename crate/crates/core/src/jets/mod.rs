//! Weight-truncated Hilbert series of infinite jet algebras.
//!
//! A generator `g` of the base ring gives jet variables `(g, d)`, `d >= 1`,
//! standing for `x_{g,(-d)}` with q-weight `d`. The derivation `T` sends
//! `x_{g,(-d)}` to `-d x_{g,(-d-1)}`. The differential ideal of a relation
//! `f` of weight `w` meets weight `w + s` in `T^s f` times monomials, so each
//! graded piece is a finite linear algebra problem.

mod hilbert;
mod parse;
mod presets;
mod rank;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use hilbert::{
    compare_with_nahm, hilbert_series, hilbert_series_with, verify_classically_free, ClassicalFreeness, HilbertResult, JetOptions,
    RankEngine,
};
pub use parse::parse_relation_file;
pub use presets::{b2_a, b2_b, d4_d, jet_preset, jet_preset_names, sln_a, sln_b, sln_h, D4Reading};
pub use rank::{sparse_rank, SparseRow};

/// The jet variable `x_{gen,(-depth)}`, `depth >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JetVar {
    pub gen: u16,
    pub depth: u16,
}

/// A monomial as a sorted list of variables, repeated by multiplicity.
pub type Monomial = Vec<JetVar>;

pub fn monomial_weight(m: &[JetVar]) -> usize {
    m.iter().map(|v| v.depth as usize).sum()
}

/// Product of two sorted monomials.
pub fn monomial_mul(a: &[JetVar], b: &[JetVar]) -> Monomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A polynomial in jet variables with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JetPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl JetPoly {
    pub fn zero() -> Self {
        JetPoly::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        let mut p = JetPoly::zero();
        p.add_term(Vec::new(), c.into());
        p
    }

    /// `x_{gen,(-depth)}`.
    pub fn var(gen: u16, depth: u16) -> Self {
        let mut p = JetPoly::zero();
        p.add_term(vec![JetVar { gen, depth }], BigInt::one());
        p
    }

    pub fn add_term(&mut self, mut mono: Monomial, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        mono.sort_unstable();
        let entry = self.terms.entry(mono).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[JetVar]) -> BigInt {
        let mut key = mono.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &JetPoly) -> JetPoly {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, k: &BigInt) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &JetPoly) -> JetPoly {
        let mut out = JetPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term(monomial_mul(a, b), ca * cb);
            }
        }
        out
    }

    /// The distinct weights of the terms.
    pub fn weights(&self) -> Vec<usize> {
        let mut w: Vec<usize> = self.terms.keys().map(|m| monomial_weight(m)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    /// The common weight, if the polynomial is nonzero and homogeneous.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        match self.weights().as_slice() {
            [w] => Some(*w),
            _ => None,
        }
    }

    /// Polynomial degrees of the terms, deduplicated.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(Vec::len).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Image under the derivation `T`.
    pub fn apply_t(&self) -> JetPoly {
        let mut out = JetPoly::zero();
        for (m, c) in &self.terms {
            for pos in 0..m.len() {
                let v = m[pos];
                let mut next = m.clone();
                next[pos] = JetVar { gen: v.gen, depth: v.depth + 1 };
                out.add_term(next, c * -(v.depth as i64));
            }
        }
        out
    }

    pub fn apply_t_n(&self, s: usize) -> JetPoly {
        let mut p = self.clone();
        for _ in 0..s {
            p = p.apply_t();
        }
        p
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .iter()
                .map(|v| {
                    let name = names.get(v.gen as usize).cloned().unwrap_or_else(|| format!("g{}", v.gen));
                    if v.depth == 1 {
                        name
                    } else {
                        format!("{name}(-{})", v.depth)
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&format!("{abs}*"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl fmt::Display for JetPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// A presented commutative algebra: generators (with optional charges) and
/// homogeneous relations in the depth-one variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetPreset {
    pub name: String,
    pub generators: Vec<String>,
    /// One charge vector per generator; empty when the preset is ungraded.
    pub charges: Vec<Vec<i64>>,
    pub relations: Vec<JetPoly>,
}

impl JetPreset {
    pub fn charge_rank(&self) -> usize {
        self.charges.first().map_or(0, Vec::len)
    }

    pub fn generator_index(&self, name: &str) -> Option<u16> {
        self.generators.iter().position(|g| g == name).map(|i| i as u16)
    }

    /// Every relation must be nonzero, homogeneous of weight at least 2, and
    /// written in depth-one variables.
    pub fn validate(&self) -> crate::Result<()> {
        use crate::Error;
        if !self.charges.is_empty() {
            if self.charges.len() != self.generators.len() {
                return Err(Error::InvalidArgument("one charge vector per generator".into()));
            }
            let r = self.charge_rank();
            if self.charges.iter().any(|c| c.len() != r) {
                return Err(Error::InvalidArgument("charge vectors of unequal length".into()));
            }
        }
        for f in &self.relations {
            let w = f.homogeneous_weight().ok_or_else(|| {
                Error::InvalidArgument(format!("relation `{}` is not homogeneous", f.render(&self.generators)))
            })?;
            if w < 2 {
                return Err(Error::InvalidArgument(format!("relation `{}` has weight {w}", f.render(&self.generators))));
            }
            if f.terms().any(|(m, _)| m.iter().any(|v| v.depth != 1 || v.gen as usize >= self.generators.len())) {
                return Err(Error::InvalidArgument("relations use depth-one generator variables only".into()));
            }
        }
        Ok(())
    }

    /// Whether every relation is homogeneous for the charge grading.
    pub fn charge_homogeneous(&self) -> bool {
        !self.charges.is_empty() && self.relations.iter().all(|f| self.relation_charges(f).len() <= 1)
    }

    fn monomial_charge(&self, m: &[JetVar]) -> Vec<i64> {
        let mut c = vec![0; self.charge_rank()];
        for v in m {
            for (acc, x) in c.iter_mut().zip(&self.charges[v.gen as usize]) {
                *acc += x;
            }
        }
        c
    }

    fn relation_charges(&self, f: &JetPoly) -> Vec<Vec<i64>> {
        let mut cs: Vec<Vec<i64>> = f.terms().map(|(m, _)| self.monomial_charge(m)).collect();
        cs.sort();
        cs.dedup();
        cs
    }
}

/// `T^s f` for every relation `f` and every `s` keeping the weight `<= max_weight`.
pub fn generate_ideal(preset: &JetPreset, max_weight: usize) -> Vec<JetPoly> {
    let mut out = Vec::new();
    for f in &preset.relations {
        let w = f.homogeneous_weight().unwrap_or(usize::MAX);
        if w > max_weight {
            continue;
        }
        let mut p = f.clone();
        out.push(p.clone());
        for _ in w..max_weight {
            p = p.apply_t();
            out.push(p.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(d: u16) -> JetVar {
        JetVar { gen: 0, depth: d }
    }

    #[test]
    fn derivation_rules() {
        let p = JetPoly::var(0, 1).apply_t();
        assert_eq!(p.coeff(&[x(2)]), BigInt::from(-1));
        assert_eq!(p.len(), 1);
        let sq = JetPoly::var(0, 1).mul(&JetPoly::var(0, 1)).apply_t();
        assert_eq!(sq.coeff(&[x(1), x(2)]), BigInt::from(-2));
        assert_eq!(sq.len(), 1);
        assert!(JetPoly::constant(5).apply_t().is_empty());
        // T(x_{(-2)}) = -2 x_{(-3)}
        assert_eq!(JetPoly::var(0, 2).apply_t().coeff(&[x(3)]), BigInt::from(-2));
    }

    #[test]
    fn t_raises_weight() {
        let f = JetPoly::var(0, 1).mul(&JetPoly::var(1, 1)).sub(&JetPoly::var(2, 1).mul(&JetPoly::var(2, 1)));
        let mut p = f.clone();
        for s in 0..5 {
            assert_eq!(p.homogeneous_weight(), Some(2 + s));
            p = p.apply_t();
        }
    }

    #[test]
    fn ideal_of_square() {
        let preset = JetPreset {
            name: "x2".into(),
            generators: vec!["x".into()],
            charges: vec![],
            relations: vec![JetPoly::var(0, 1).mul(&JetPoly::var(0, 1))],
        };
        let ideal = generate_ideal(&preset, 4);
        let weights: Vec<_> = ideal.iter().map(|p| p.homogeneous_weight().unwrap()).collect();
        assert_eq!(weights, vec![2, 3, 4]);
        // T^2(x^2) = 2 x_{-2}^2 + 4 x_{-1} x_{-3}
        assert_eq!(ideal[2].coeff(&[x(2), x(2)]), BigInt::from(2));
        assert_eq!(ideal[2].coeff(&[x(1), x(3)]), BigInt::from(4));
    }
}
