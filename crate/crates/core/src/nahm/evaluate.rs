use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::bound::{compute_bound, BoundStrategy};
use super::{common_denominator, DoubledForm, NahmSumSpec};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::series::{dense_div_binomial, inv_pochhammer_dense, QSeries};

#[derive(Clone, Debug)]
pub struct EvalOptions {
    /// Keep the charge variables; otherwise they are set to 1.
    pub with_charges: bool,
    /// Abort once this many index vectors have been visited.
    pub node_budget: Option<u64>,
    pub parallel: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { with_charges: true, node_budget: None, parallel: true }
    }
}

/// Expands the sum through `O(q^order)`, charges included.
pub fn evaluate(spec: &NahmSumSpec, order: HalfInt) -> Result<QSeries> {
    evaluate_with(spec, order, &EvalOptions::default())
}

/// `D * LB(x) = sum_{a<=b} quad[a][b] x_a x_b + lin . x + constant` where
/// `LB` bounds `Q` from below over all completions of the prefix `x`.
#[derive(Clone, Debug)]
struct Level {
    quad: Vec<Vec<i128>>,
    lin: Vec<i128>,
    constant: i128,
    denom: i128,
}

impl Level {
    fn eval(&self, x: &[i64]) -> i128 {
        let mut total = self.constant;
        for a in 0..x.len() {
            let xa = x[a] as i128;
            if xa == 0 {
                continue;
            }
            let mut row = self.lin[a];
            for b in a..x.len() {
                row += self.quad[a][b] * x[b] as i128;
            }
            total += row * xa;
        }
        total
    }
}

fn to_i128(r: &BigInt) -> Result<i128> {
    r.to_i128().ok_or_else(|| Error::InvalidForm("pruning bound does not fit in 128 bits".into()))
}

/// Converts the rational quadratic `x^T s x + w.x + c` to a [`Level`].
fn integer_level(s: &[Vec<BigRational>], w: &[BigRational], c: &BigRational) -> Result<Level> {
    let two = BigRational::from_integer(2.into());
    let i = w.len();
    let mut coeffs: Vec<BigRational> = Vec::new();
    for a in 0..i {
        for b in a..i {
            coeffs.push(if a == b { s[a][a].clone() } else { &s[a][b] * &two });
        }
    }
    let denom = common_denominator(coeffs.iter().chain(w).chain(std::iter::once(c)).chain(std::iter::once(&BigRational::new(1.into(), 2.into()))));
    let scale = |r: &BigRational| to_i128(&(r * BigRational::from_integer(denom.clone())).to_integer());
    let mut quad = vec![vec![0i128; i]; i];
    let mut it = coeffs.iter();
    for a in 0..i {
        for b in a..i {
            quad[a][b] = scale(it.next().expect("coefficient"))?;
        }
    }
    Ok(Level { quad, lin: w.iter().map(scale).collect::<Result<_>>()?, constant: scale(c)?, denom: to_i128(&denom)? })
}

fn invert(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::from_integer(1.into()) } else { BigRational::zero() }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).expect("invertible block");
        a.swap(k, p);
        inv.swap(k, p);
        let piv = a[k][k].clone();
        for j in 0..n {
            a[k][j] /= &piv;
            inv[k][j] /= &piv;
        }
        for r in 0..n {
            if r == k || a[r][k].is_zero() {
                continue;
            }
            let f = a[r][k].clone();
            for j in 0..n {
                let d = &f * &a[k][j];
                a[r][j] -= d;
                let e = &f * &inv[k][j];
                inv[r][j] -= e;
            }
        }
    }
    inv
}

/// Lower bounds for every prefix length. With nonnegative coefficients the
/// partial form is exact over nonnegative completions; otherwise the real
/// minimum over the remaining variables (a Schur complement) is used.
fn pruning_levels(spec: &NahmSumSpec, nonneg: bool) -> Result<Vec<Level>> {
    let l = spec.var_count();
    let q = &spec.quadratic;
    let lin = &spec.linear;
    let mut levels = Vec::with_capacity(l + 1);
    for i in 0..=l {
        let a: Vec<Vec<BigRational>> = (0..i).map(|r| q[r][..i].to_vec()).collect();
        if nonneg || i == l {
            levels.push(integer_level(&a, &lin[..i], &BigRational::zero())?);
            continue;
        }
        let b: Vec<Vec<BigRational>> = (0..i).map(|r| q[r][i..].to_vec()).collect();
        let c: Vec<Vec<BigRational>> = (i..l).map(|r| q[r][i..].to_vec()).collect();
        let cinv = invert(&c);
        let k = l - i;
        // B C^{-1}
        let bc: Vec<Vec<BigRational>> = (0..i)
            .map(|r| (0..k).map(|j| (0..k).fold(BigRational::zero(), |acc, t| acc + &b[r][t] * &cinv[t][j])).collect())
            .collect();
        let s: Vec<Vec<BigRational>> = (0..i)
            .map(|r| (0..i).map(|t| &a[r][t] - (0..k).fold(BigRational::zero(), |acc, j| acc + &bc[r][j] * &b[t][j])).collect())
            .collect();
        let ly = &lin[i..];
        let w: Vec<BigRational> =
            (0..i).map(|r| &lin[r] - (0..k).fold(BigRational::zero(), |acc, j| acc + &bc[r][j] * &ly[j])).collect();
        let quarter = BigRational::new(1.into(), 4.into());
        let mut cval = BigRational::zero();
        for x in 0..k {
            for y in 0..k {
                cval -= &ly[x] * &cinv[x][y] * &ly[y] * &quarter;
            }
        }
        levels.push(integer_level(&s, &w, &cval)?);
    }
    Ok(levels)
}

struct Ctx<'a> {
    levels: Vec<Level>,
    form: DoubledForm,
    charges: Option<&'a [Vec<i64>]>,
    caps: Vec<i64>,
    twice_order: i64,
    /// added to doubled exponents so that accumulator indices are nonnegative
    offset: i64,
    visited: AtomicU64,
    budget: Option<u64>,
}

type Acc = HashMap<Vec<i64>, Vec<BigInt>>;

impl Ctx<'_> {
    /// Number of integer steps `t >= 0` still below the order, or `None`
    /// when the prefix cannot contribute.
    fn room(&self, prefix: &[i64]) -> Option<usize> {
        let lv = &self.levels[prefix.len()];
        let target = (lv.denom / 2) * self.twice_order as i128;
        let v = lv.eval(prefix);
        if v >= target {
            return None;
        }
        let gap = target - v;
        Some(((gap + lv.denom - 1) / lv.denom) as usize)
    }

    fn tick(&self) -> Result<()> {
        let n = self.visited.fetch_add(1, Ordering::Relaxed) + 1;
        if let Some(cap) = self.budget {
            if n > cap {
                return Err(Error::BudgetExceeded { what: "enumerated index vectors".into(), count: n, cap });
            }
        }
        Ok(())
    }

    fn leaf(&self, m: &[i64], series: &[BigInt], acc: &mut Acc) {
        let e2 = self.form.twice_exponent(m);
        let key: Vec<i64> = match self.charges {
            Some(rows) => rows.iter().map(|row| row.iter().zip(m).map(|(u, x)| u * x).sum()).collect(),
            None => Vec::new(),
        };
        let width = (self.twice_order + self.offset) as usize;
        let slot = acc.entry(key).or_insert_with(|| vec![BigInt::zero(); width]);
        for (t, c) in series.iter().enumerate() {
            let idx = e2 + 2 * t as i64;
            if idx >= self.twice_order {
                break;
            }
            if !c.is_zero() {
                slot[(idx + self.offset) as usize] += c;
            }
        }
    }

    /// Assigns variable `m.len()` given `series = prod_{j < m.len()} 1/(q)_{m_j}`.
    fn descend(&self, m: &mut Vec<i64>, series: &[BigInt], acc: &mut Acc) -> Result<()> {
        let d = m.len();
        if d == self.caps.len() {
            self.leaf(m, series, acc);
            return Ok(());
        }
        let mut buf = series.to_vec();
        let mut seen = false;
        m.push(0);
        for v in 0..=self.caps[d] {
            if v > 0 {
                dense_div_binomial(&mut buf, -1, v as usize);
            }
            m[d] = v;
            match self.room(m) {
                None if seen => break,
                None => continue,
                Some(len) => {
                    seen = true;
                    self.tick()?;
                    let len = len.min(buf.len());
                    self.descend(m, &buf[..len], acc)?;
                }
            }
        }
        m.pop();
        Ok(())
    }
}

fn merge(mut a: Acc, b: Acc) -> Acc {
    for (k, v) in b {
        match a.get_mut(&k) {
            Some(slot) => {
                for (x, y) in slot.iter_mut().zip(v) {
                    *x += y;
                }
            }
            None => {
                a.insert(k, v);
            }
        }
    }
    a
}

/// Expands the sum through `O(q^order)` by a pruned depth-first walk over
/// the certified box.
pub fn evaluate_with(spec: &NahmSumSpec, order: HalfInt, opts: &EvalOptions) -> Result<QSeries> {
    let bound = compute_bound(spec, order)?;
    let nonneg = bound.strategy == BoundStrategy::NonnegativeCoefficients;
    let levels = pruning_levels(spec, nonneg)?;
    let rank = if opts.with_charges { spec.charge_rank() } else { 0 };
    let mut out = QSeries::zero(order, rank);
    let twice_order = order.twice();
    // global lower bound of 2Q
    let root = &levels[0];
    let min_twice = (2 * root.constant).div_euclid(root.denom) as i64;
    let offset = (-min_twice).max(0);
    let ctx = Ctx {
        levels,
        form: spec.doubled()?,
        charges: opts.with_charges.then_some(spec.charges.as_slice()),
        caps: bound.per_variable_max.clone(),
        twice_order,
        offset,
        visited: AtomicU64::new(0),
        budget: opts.node_budget,
    };
    let Some(root_len) = ctx.room(&[]) else {
        return Ok(out);
    };
    let acc = if ctx.caps.is_empty() {
        let mut acc = Acc::new();
        ctx.leaf(&[], &inv_pochhammer_dense(0, root_len), &mut acc);
        acc
    } else {
        let firsts: Vec<i64> = (0..=ctx.caps[0]).filter(|&v| ctx.room(&[v]).is_some()).collect();
        let run = |v: i64| -> Result<Acc> {
            ctx.tick()?;
            let len = ctx.room(&[v]).expect("feasible").min(root_len);
            let series = inv_pochhammer_dense(v as u32, len);
            let mut acc = Acc::new();
            let mut m = vec![v];
            ctx.descend(&mut m, &series, &mut acc)?;
            Ok(acc)
        };
        if opts.parallel {
            firsts.par_iter().map(|&v| run(v)).try_reduce(Acc::new, |a, b| Ok(merge(a, b)))?
        } else {
            firsts.iter().try_fold(Acc::new(), |a, &v| Ok::<_, Error>(merge(a, run(v)?)))?
        }
    };
    for (key, coeffs) in acc {
        for (idx, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                out.add_term(HalfInt::from_twice(idx as i64 - offset), key.clone(), c);
            }
        }
    }
    Ok(out)
}
