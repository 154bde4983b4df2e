//! Exact multivariate polynomials over the rationals in named symbols.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial with rational coefficients. `vars` fixes the meaning of each
/// exponent slot; operations between polynomials over different variable
/// lists first merge the lists by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl SparsePoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        SparsePoly { vars: vars.iter().map(|s| s.as_ref().to_string()).collect(), terms: BTreeMap::new() }
    }

    pub fn constant<S: AsRef<str>>(vars: &[S], c: BigRational) -> Self {
        let mut p = SparsePoly::zero(vars);
        let n = p.vars.len();
        p.add_term(vec![0; n], c);
        p
    }

    /// The polynomial consisting of the single symbol `name`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self> {
        let mut p = SparsePoly::zero(vars);
        let idx = p.index_of(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let mut e = vec![0; p.vars.len()];
        e[idx] = 1;
        p.add_term(e, BigRational::one());
        Ok(p)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        assert_eq!(exps.len(), self.vars.len());
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Re-expresses this polynomial over `vars`, which must contain every
    /// symbol that occurs with nonzero exponent.
    pub fn over(&self, vars: &[String]) -> Result<SparsePoly> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut out = SparsePoly::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = k,
                    None => return Err(Error::UnknownSymbol(self.vars[i].clone())),
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    fn merged_vars(&self, other: &SparsePoly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned(&self, other: &SparsePoly) -> (SparsePoly, SparsePoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.merged_vars(other);
        (self.over(&vars).expect("superset"), other.over(&vars).expect("superset"))
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> SparsePoly {
        let mut out = SparsePoly::zero(&self.vars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let (a, b) = self.aligned(other);
        let mut out = SparsePoly::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::constant(&self.vars, BigRational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Coefficient of the monomial `prod name^k`; symbols absent from the
    /// list have exponent 0.
    pub fn coeff(&self, monomial: &[(&str, u32)]) -> Result<BigRational> {
        let mut e = vec![0; self.vars.len()];
        for &(name, k) in monomial {
            match self.index_of(name) {
                Some(i) => e[i] += k,
                None if k == 0 => {}
                None => return Ok(BigRational::zero()),
            }
        }
        Ok(self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero))
    }

    /// Simultaneous substitution of each bound symbol by a polynomial.
    /// Unbound symbols stay as they are.
    pub fn substitute(&self, bindings: &HashMap<String, SparsePoly>) -> SparsePoly {
        let mut vars: Vec<String> = self.vars.iter().filter(|v| !bindings.contains_key(*v)).cloned().collect();
        let mut names: Vec<&String> = bindings.keys().collect();
        names.sort();
        for name in names {
            for v in &bindings[name].vars {
                if !vars.contains(v) {
                    vars.push(v.clone());
                }
            }
        }
        let images: Vec<SparsePoly> = self
            .vars
            .iter()
            .map(|v| match bindings.get(v) {
                Some(p) => p.over(&vars).expect("superset"),
                None => SparsePoly::var(&vars, v).expect("kept"),
            })
            .collect();
        let mut power_cache: HashMap<(usize, u32), SparsePoly> = HashMap::new();
        let mut out = SparsePoly::zero(&vars);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(&vars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let pw = power_cache.entry((i, k)).or_insert_with(|| images[i].pow(k));
                term = term.mul(pw);
            }
            for (te, tc) in term.terms {
                out.add_term(te, tc);
            }
        }
        out
    }

    /// Evaluates at integer/rational values for every symbol that occurs.
    pub fn ground(&self, values: &HashMap<String, BigRational>) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let v = values.get(&self.vars[i]).ok_or_else(|| Error::UnboundSymbol(self.vars[i].clone()))?;
                for _ in 0..k {
                    t *= v;
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Total degree of the highest-degree term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Monomial as `(symbol, exponent)` pairs, skipping zero exponents.
    pub fn describe_monomial(&self, e: &[u32]) -> Vec<(String, u32)> {
        e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, &k)| (self.vars[i].clone(), k)).collect()
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded order: highest total degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{k}", self.vars[i]) })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(vars: &[&str], name: &str) -> SparsePoly {
        SparsePoly::var(vars, name).unwrap()
    }

    #[test]
    fn square_of_sum() {
        let vars = ["m1", "m2"];
        let s = v(&vars, "m1").add(&v(&vars, "m2"));
        let sq = s.mul(&s);
        assert_eq!(sq.to_string(), "m1^2 + 2*m1*m2 + m2^2");
        assert_eq!(sq.coeff(&[("m1", 1), ("m2", 1)]).unwrap(), rat(2, 1));
    }

    #[test]
    fn coefficient_lookup() {
        let vars = ["m1", "m2"];
        let p = v(&vars, "m1").pow(2).add(&v(&vars, "m1").mul(&v(&vars, "m2")).scale(&rat(3, 1)));
        assert_eq!(p.coeff(&[("m1", 1), ("m2", 1)]).unwrap(), rat(3, 1));
        assert_eq!(p.coeff(&[("m2", 2)]).unwrap(), rat(0, 1));
        assert_eq!(p.coeff(&[("zz", 1)]).unwrap(), rat(0, 1));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let p = v(&["k1"], "k1").pow(2);
        let target = v(&["m12", "m13"], "m12").add(&v(&["m12", "m13"], "m13"));
        let mut b = HashMap::new();
        b.insert("k1".to_string(), target.clone());
        assert_eq!(p.substitute(&b), target.mul(&target));

        // swap a <-> b
        let vars = ["a", "b"];
        let p = v(&vars, "a").add(&v(&vars, "b").scale(&rat(2, 1)));
        let mut b = HashMap::new();
        b.insert("a".to_string(), v(&vars, "b"));
        b.insert("b".to_string(), v(&vars, "a"));
        let swapped = p.substitute(&b);
        assert_eq!(swapped.coeff(&[("a", 1)]).unwrap(), rat(2, 1));
        assert_eq!(swapped.coeff(&[("b", 1)]).unwrap(), rat(1, 1));
    }

    #[test]
    fn grounding_requires_all_symbols() {
        let vars = ["a", "b"];
        let p = v(&vars, "a").mul(&v(&vars, "b"));
        let mut vals = HashMap::new();
        vals.insert("a".to_string(), rat(3, 1));
        assert_eq!(p.ground(&vals), Err(Error::UnboundSymbol("b".into())));
        vals.insert("b".to_string(), rat(1, 2));
        assert_eq!(p.ground(&vals).unwrap(), rat(3, 2));
    }

    #[test]
    fn mixed_universes_merge() {
        let p = v(&["a"], "a");
        let q = v(&["b"], "b");
        let s = p.add(&q);
        assert_eq!(s.vars(), &["a".to_string(), "b".to_string()]);
        assert!(s.sub(&q).sub(&p).is_zero());
    }
}
