//! Rank of sparse integer matrices by incremental echelon reduction, either
//! exactly (fraction-free over the integers) or modulo the prime `2^61 - 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::hilbert::RankEngine;

/// A row as `(column, coefficient)` pairs; columns need not be sorted.
pub type SparseRow = Vec<(u32, i64)>;

const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn to_mod(c: i64) -> u64 {
    c.rem_euclid(P as i64) as u64
}

/// Rank of the matrix with the given rows. Columns are processed sparsest
/// first, which keeps fill-in low for the monomial-heavy matrices here.
pub fn sparse_rank(rows: &[SparseRow], engine: RankEngine) -> usize {
    let order = column_order(rows);
    let relabel = |row: &SparseRow| -> SparseRow {
        let mut r: SparseRow = row.iter().filter(|(_, c)| *c != 0).map(|&(col, c)| (order[col as usize], c)).collect();
        r.sort_unstable_by_key(|&(col, _)| col);
        // merge repeated columns
        let mut out: SparseRow = Vec::with_capacity(r.len());
        for (col, c) in r {
            match out.last_mut() {
                Some((last, acc)) if *last == col => *acc += c,
                _ => out.push((col, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        out
    };
    match engine {
        RankEngine::Modular => modular_rank(rows.iter().map(relabel), order.len()),
        RankEngine::Exact => exact_rank(rows.iter().map(relabel), order.len()),
    }
}

/// New position of every column: ascending by number of rows touching it.
fn column_order(rows: &[SparseRow]) -> Vec<u32> {
    let ncols = rows.iter().flat_map(|r| r.iter().map(|&(c, _)| c as usize + 1)).max().unwrap_or(0);
    let mut support = vec![0usize; ncols];
    for r in rows {
        for &(c, _) in r {
            support[c as usize] += 1;
        }
    }
    let mut cols: Vec<usize> = (0..ncols).collect();
    cols.sort_by_key(|&c| (support[c], c));
    let mut order = vec![0u32; ncols];
    for (pos, c) in cols.into_iter().enumerate() {
        order[c] = pos as u32;
    }
    order
}

fn modular_rank(rows: impl Iterator<Item = SparseRow>, ncols: usize) -> usize {
    let mut pivots: Vec<Option<Vec<(u32, u64)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut r: Vec<(u32, u64)> = row.into_iter().map(|(c, v)| (c, to_mod(v))).filter(|&(_, v)| v != 0).collect();
        while let Some(&(lead, a)) = r.first() {
            match &pivots[lead as usize] {
                Some(p) => r = axpy_mod(&r, a, p),
                None => {
                    let inv = pow_mod(a, P - 2);
                    let normalized = r.iter().map(|&(c, v)| (c, mul_mod(v, inv))).collect();
                    pivots[lead as usize] = Some(normalized);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `r - a * p` where `p` has leading coefficient 1 at the lead column of `r`.
fn axpy_mod(r: &[(u32, u64)], a: u64, p: &[(u32, u64)]) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i]);
            i += 1;
        } else if take_p {
            out.push((p[j].0, (P - mul_mod(a, p[j].1)) % P));
            j += 1;
        } else {
            let v = (r[i].1 + P - mul_mod(a, p[j].1)) % P;
            if v != 0 {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn exact_rank(rows: impl Iterator<Item = SparseRow>, ncols: usize) -> usize {
    let mut pivots: Vec<Option<Vec<(u32, BigInt)>>> = vec![None; ncols];
    let mut rank = 0;
    for row in rows {
        let mut r: Vec<(u32, BigInt)> = row.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect();
        while let Some((lead, _)) = r.first() {
            let lead = *lead as usize;
            match &pivots[lead] {
                Some(p) => r = eliminate(&r, p),
                None => {
                    make_primitive(&mut r);
                    pivots[lead] = Some(r);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// `b r - a p` with `a`, `b` the leading coefficients of `r` and `p`,
/// divided by the gcd of the leading pair.
fn eliminate(r: &[(u32, BigInt)], p: &[(u32, BigInt)]) -> Vec<(u32, BigInt)> {
    let g = r[0].1.gcd(&p[0].1);
    let a = &r[0].1 / &g;
    let b = &p[0].1 / &g;
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (1, 1);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push((r[i].0, &b * &r[i].1));
            i += 1;
        } else if take_p {
            out.push((p[j].0, -(&a * &p[j].1)));
            j += 1;
        } else {
            let v = &b * &r[i].1 - &a * &p[j].1;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn make_primitive(r: &mut [(u32, BigInt)]) {
    let mut g = BigInt::zero();
    for (_, c) in r.iter() {
        g = g.gcd(c);
        if g == BigInt::from(1) {
            break;
        }
    }
    if g.is_zero() {
        return;
    }
    if r[0].1.is_negative() {
        g = -g;
    }
    for (_, c) in r.iter_mut() {
        *c /= &g;
    }
}
