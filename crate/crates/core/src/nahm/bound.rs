use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{is_nonnegative, NahmSumSpec};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// How the box of summation indices was certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundStrategy {
    /// Nonnegative coefficients and positive diagonal: `Q(m) >= a_ii m_i^2`.
    NonnegativeCoefficients,
    /// `Q(m) >= mu |m|^2 + b.m` with `mu` a certified lower bound on the
    /// smallest eigenvalue; every contributing `m` has `|m|^2 <= norm_sq_bound`.
    PositiveDefinite { lambda_min_lower: BigRational, norm_sq_bound: BigRational },
}

/// A box `0 <= m_i <= per_variable_max[i]` containing every index vector
/// with `Q(m) < order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationBound {
    pub per_variable_max: Vec<i64>,
    pub strategy: BoundStrategy,
}

fn half_to_rational(h: HalfInt) -> BigRational {
    BigRational::new(h.twice().into(), 2.into())
}

/// Largest integer `t >= 0` with `t^2 <= x` (0 for negative `x`).
fn floor_sqrt(x: &BigRational) -> i64 {
    if x.is_negative() {
        return 0;
    }
    let n: BigInt = x.floor().to_integer();
    i64::try_from(n.sqrt()).unwrap_or(i64::MAX)
}

/// Symmetric elimination with diagonal pivots. Returns `None` if the matrix
/// is not positive semidefinite, otherwise whether it is definite.
fn definiteness(m: &[Vec<BigRational>]) -> Option<bool> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut definite = true;
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_negative() {
            return None;
        }
        if p.is_zero() {
            if (k + 1..n).any(|j| !a[k][j].is_zero()) {
                return None;
            }
            definite = false;
            continue;
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k + 1..n {
                let d = &f * &a[k][j];
                a[i][j] -= d;
            }
        }
    }
    Some(definite)
}

pub(crate) fn is_positive_definite(m: &[Vec<BigRational>]) -> bool {
    definiteness(m) == Some(true)
}

fn shifted(m: &[Vec<BigRational>], mu: &BigRational) -> Vec<Vec<BigRational>> {
    let mut out = m.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= mu;
    }
    out
}

/// A rational `mu > 0` with `m - mu I` positive semidefinite, found by
/// bisection with an exact test at every step.
fn certified_lambda_min(m: &[Vec<BigRational>]) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mut lo = BigRational::zero();
    let mut hi = m.iter().enumerate().map(|(i, r)| r[i].clone()).min().unwrap_or_else(BigRational::zero);
    if definiteness(&shifted(m, &hi)).is_some() {
        return hi;
    }
    for _ in 0..40 {
        let mid = (&lo + &hi) / &two;
        if definiteness(&shifted(m, &mid)).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Certifies a finite enumeration box for `Q(m) < order`; fails with
/// [`Error::NotCoercive`] when neither criterion applies.
pub fn compute_bound(spec: &NahmSumSpec, order: HalfInt) -> Result<EnumerationBound> {
    spec.validate()?;
    let l = spec.var_count();
    let ord = half_to_rational(order);
    let q = &spec.quadratic;
    let nonneg = (0..l).all(|i| q[i][i].is_positive() && is_nonnegative(&spec.linear[i]) && q[i].iter().all(is_nonnegative));
    if nonneg {
        let per_variable_max = (0..l).map(|i| floor_sqrt(&(&ord / &q[i][i]))).collect();
        return Ok(EnumerationBound { per_variable_max, strategy: BoundStrategy::NonnegativeCoefficients });
    }
    if !is_positive_definite(q) {
        return Err(Error::NotCoercive);
    }
    let mu = certified_lambda_min(q);
    if !mu.is_positive() {
        return Err(Error::NotCoercive);
    }
    // Q(m) >= mu |m|^2 - L |m| with L the l1 norm of the negative linear part
    let l1: BigRational = spec.linear.iter().filter(|c| c.is_negative()).map(|c| -c).sum();
    let norm_sq_bound = if l1.is_zero() {
        if ord.is_negative() {
            BigRational::zero()
        } else {
            &ord / &mu
        }
    } else {
        let vertex = (&l1 / (&mu * BigRational::from_integer(2.into()))).ceil();
        let mut r = vertex.to_integer();
        loop {
            let rr = BigRational::from_integer(r.clone());
            if &mu * &rr * &rr - &l1 * &rr >= ord {
                break;
            }
            r += 1;
        }
        let below = BigRational::from_integer(r - 1);
        &below * &below
    };
    let cap = floor_sqrt(&norm_sq_bound);
    Ok(EnumerationBound {
        per_variable_max: vec![cap; l],
        strategy: BoundStrategy::PositiveDefinite { lambda_min_lower: mu, norm_sq_bound },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nahm::{build_b2_char_form, build_cartan_side, CartanType};
    use crate::poly::rat;

    fn h(v: i64) -> HalfInt {
        HalfInt::from_int(v)
    }

    #[test]
    fn a2_cartan_example() {
        let spec = build_cartan_side(CartanType::A, 3).unwrap();
        let b = compute_bound(&spec, h(25)).unwrap();
        match &b.strategy {
            BoundStrategy::PositiveDefinite { lambda_min_lower, norm_sq_bound } => {
                assert_eq!(*lambda_min_lower, rat(1, 2));
                assert_eq!(*norm_sq_bound, rat(50, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(b.per_variable_max, vec![7, 7]);
    }

    #[test]
    fn nonnegative_case() {
        let spec = build_cartan_side(CartanType::A, 2).unwrap();
        let b = compute_bound(&spec, h(10)).unwrap();
        assert_eq!(b.strategy, BoundStrategy::NonnegativeCoefficients);
        assert_eq!(b.per_variable_max, vec![3]);
    }

    #[test]
    fn mixed_sign_positive_definite() {
        let spec = build_b2_char_form();
        let b = compute_bound(&spec, h(20)).unwrap();
        assert!(matches!(b.strategy, BoundStrategy::PositiveDefinite { .. }));
        // brute force: every point with Q < 20 inside a generous box lies in the bound
        for r1 in 0..30 {
            for r2 in 0..30 {
                for r3 in 0..30 {
                    let m = [r1, r2, r3];
                    if spec.exponent(&m).unwrap() < h(20) {
                        assert!(m.iter().zip(&b.per_variable_max).all(|(x, c)| x <= c), "{m:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn negative_linear_part() {
        let mut spec = build_cartan_side(CartanType::A, 2).unwrap();
        spec.linear = vec![rat(-3, 1)];
        let b = compute_bound(&spec, h(5)).unwrap();
        // k^2 - 3k < 5 for k <= 4
        assert!(b.per_variable_max[0] >= 4);
    }

    #[test]
    fn indefinite_rejected() {
        let mut spec = build_cartan_side(CartanType::A, 3).unwrap();
        spec.quadratic[0][1] = rat(-2, 1);
        spec.quadratic[1][0] = rat(-2, 1);
        assert_eq!(compute_bound(&spec, h(5)), Err(Error::NotCoercive));
        let mut semi = build_cartan_side(CartanType::A, 3).unwrap();
        semi.quadratic[0][1] = rat(-1, 1);
        semi.quadratic[1][0] = rat(-1, 1);
        assert_eq!(compute_bound(&semi, h(5)), Err(Error::NotCoercive));
    }
}
