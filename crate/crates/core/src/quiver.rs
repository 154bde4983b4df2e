//! Representations of type A quivers, recorded by the multiplicities of
//! their indecomposable summands (segments), and the orbit codimension
//! formula behind the partition identity
//! `1/prod (q)_{k_i} = sum_eta q^{codim eta} / prod (q)_{m_I(eta)}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::nahm::{build_bprime_form, evaluate_with, EvalOptions};
use crate::series::{dense_div_binomial, dense_len, series_eq, Comparison, QSeries};

/// An A-type quiver on vertices `1..=rank`; `right[v-1]` tells whether the
/// arrow `a_v` between `v` and `v+1` points from `v` to `v+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverA {
    right: Vec<bool>,
}

impl QuiverA {
    pub fn new(rank: usize, right: Vec<bool>) -> Result<Self> {
        if rank == 0 || right.len() != rank - 1 {
            return Err(Error::InvalidArgument(format!("rank {rank} quiver needs {} arrow directions", rank.saturating_sub(1))));
        }
        Ok(QuiverA { right })
    }

    pub fn equioriented(rank: usize) -> Self {
        QuiverA { right: vec![true; rank.saturating_sub(1)] }
    }

    /// Parses `RRL`-style orientation strings; the empty string is rank 1.
    pub fn parse(s: &str) -> Result<Self> {
        let right = s
            .chars()
            .map(|c| match c {
                'R' | 'r' => Ok(true),
                'L' | 'l' => Ok(false),
                _ => Err(Error::Parse(format!("orientation letters are R or L, got `{c}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(QuiverA { right })
    }

    pub fn rank(&self) -> usize {
        self.right.len() + 1
    }

    /// Every orientation of the given rank, in lexicographic order of `LR` strings.
    pub fn all_orientations(rank: usize) -> Vec<QuiverA> {
        let arrows = rank.saturating_sub(1);
        (0..1u32 << arrows)
            .map(|bits| QuiverA { right: (0..arrows).rev().map(|i| bits >> i & 1 == 1).collect() })
            .collect()
    }

    /// Direction of `a_v`, or `None` if there is no such arrow.
    fn arrow(&self, v: usize) -> Option<bool> {
        (v >= 1).then(|| self.right.get(v - 1).copied()).flatten()
    }

    /// Every segment `[a,b]`, `1 <= a <= b <= rank`, in lexicographic order.
    pub fn segments(&self) -> Vec<Segment> {
        let r = self.rank();
        (1..=r).flat_map(|a| (a..=r).map(move |b| Segment { a, b })).collect()
    }
}

impl fmt::Display for QuiverA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &r in &self.right {
            f.write_str(if r { "R" } else { "L" })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segment {
    pub a: usize,
    pub b: usize,
}

impl Segment {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || a > b {
            return Err(Error::InvalidArgument(format!("[{a},{b}] is not a segment")));
        }
        Ok(Segment { a, b })
    }

    fn contains(&self, v: usize) -> bool {
        self.a <= v && v <= self.b
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.a, self.b)
    }
}

/// A representation up to isomorphism: a multiplicity for every segment.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuiverRep {
    mult: BTreeMap<Segment, u32>,
}

impl QuiverRep {
    pub fn from_pairs(pairs: &[(Segment, u32)]) -> Self {
        let mut rep = QuiverRep::default();
        for &(s, m) in pairs {
            if m > 0 {
                *rep.mult.entry(s).or_insert(0) += m;
            }
        }
        rep
    }

    pub fn multiplicity(&self, s: Segment) -> u32 {
        self.mult.get(&s).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Segment, u32)> + '_ {
        self.mult.iter().map(|(s, m)| (*s, *m))
    }

    pub fn dimension_vector(&self, rank: usize) -> Vec<i64> {
        (1..=rank).map(|v| self.iter().filter(|(s, _)| s.contains(v)).map(|(_, m)| m as i64).sum()).collect()
    }
}

impl fmt::Display for QuiverRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(s, m)| format!("{s}^{m}")).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn dimension_vector(quiver: &QuiverA, rep: &QuiverRep) -> Vec<i64> {
    rep.dimension_vector(quiver.rank())
}

/// Every representation with dimension vector `k`, in lexicographic order
/// of the multiplicity vector over [`QuiverA::segments`].
pub fn enumerate_reps(quiver: &QuiverA, k: &[i64]) -> Result<Vec<QuiverRep>> {
    if k.len() != quiver.rank() || k.iter().any(|&x| x < 0) {
        return Err(Error::InvalidArgument(format!("dimension vector must have {} nonnegative entries", quiver.rank())));
    }
    let segs = quiver.segments();
    let mut out = Vec::new();
    let mut rest = k.to_vec();
    let mut chosen = vec![0u32; segs.len()];
    fill(&segs, 0, &mut rest, &mut chosen, &mut out);
    Ok(out)
}

fn fill(segs: &[Segment], idx: usize, rest: &mut [i64], chosen: &mut [u32], out: &mut Vec<QuiverRep>) {
    if idx == segs.len() {
        if rest.iter().all(|&x| x == 0) {
            out.push(QuiverRep::from_pairs(&segs.iter().copied().zip(chosen.iter().copied()).collect::<Vec<_>>()));
        }
        return;
    }
    let s = segs[idx];
    // vertex s.a - 1 is covered by no later segment
    if s.a >= 2 && s.b == s.a && rest[s.a - 2] != 0 {
        return;
    }
    let cap = (s.a..=s.b).map(|v| rest[v - 1]).min().unwrap_or(0);
    for m in 0..=cap {
        chosen[idx] = m as u32;
        for v in s.a..=s.b {
            rest[v - 1] -= m;
        }
        fill(segs, idx + 1, rest, chosen, out);
        for v in s.a..=s.b {
            rest[v - 1] += m;
        }
    }
    chosen[idx] = 0;
}

/// Which of the three strand conditions an ordered pair `(I, J)` meets.
pub fn strand_conditions(quiver: &QuiverA, i: Segment, j: Segment) -> [bool; 3] {
    // (1) I = [w, x-1], J = [x, z]
    let c1 = i.b + 1 == j.a;
    // (2) I = [w, y], J = [x, z], w < x <= y < z, a_{x-1} and a_y agree
    let (w, y, x, z) = (i.a, i.b, j.a, j.b);
    let overlap = w < x && x <= y && y < z;
    let same = match (quiver.arrow(x - 1), quiver.arrow(y)) {
        (Some(p), Some(q)) => Some(p == q),
        _ => None,
    };
    let c2 = overlap && same == Some(true);
    // (3) I = [x, y] nested strictly inside J = [w, z], a_{x-1} and a_y disagree
    let (x3, y3, w3, z3) = (i.a, i.b, j.a, j.b);
    let nested = w3 < x3 && x3 <= y3 && y3 < z3;
    let differ = match (quiver.arrow(x3 - 1), quiver.arrow(y3)) {
        (Some(p), Some(q)) => Some(p != q),
        _ => None,
    };
    let c3 = nested && differ == Some(true);
    [c1, c2, c3]
}

/// `sum m_I m_J` over ordered pairs meeting a strand condition, counted once
/// per condition met.
pub fn codim(quiver: &QuiverA, rep: &QuiverRep) -> i64 {
    let mut total = 0;
    for (i, mi) in rep.iter() {
        for (j, mj) in rep.iter() {
            let hits = strand_conditions(quiver, i, j).iter().filter(|&&c| c).count() as i64;
            total += hits * mi as i64 * mj as i64;
        }
    }
    total
}

fn inv_product(ms: impl Iterator<Item = u32>, len: usize) -> Vec<BigInt> {
    let mut acc = vec![BigInt::default(); len];
    if len > 0 {
        acc[0] = BigInt::one();
    }
    for m in ms {
        for i in 1..=m as usize {
            if i >= len {
                break;
            }
            dense_div_binomial(&mut acc, -1, i);
        }
    }
    acc
}

/// `1/prod (q)_{k_i}` against `sum_eta q^{codim} / prod (q)_{m_I}`.
pub fn verify_theorem51(quiver: &QuiverA, k: &[i64], order: HalfInt) -> Result<Comparison> {
    let len = dense_len(order);
    let lhs = QSeries::from_coeffs(inv_product(k.iter().map(|&x| x as u32), len), order);
    let mut rhs = QSeries::zero(order, 0);
    for rep in enumerate_reps(quiver, k)? {
        let c = codim(quiver, &rep);
        let room = len.saturating_sub(c as usize);
        for (t, v) in inv_product(rep.iter().map(|(_, m)| m), room).into_iter().enumerate() {
            rhs.add_term(HalfInt::from_int(c + t as i64), Vec::new(), v);
        }
    }
    series_eq(&lhs, &rhs)
}

/// Every dimension vector with entries in `0..=kmax[i]`.
fn box_points(kmax: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &cap in kmax {
        out = out.into_iter().flat_map(|p| (0..=cap).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

/// Both sides of the charged identity `sum x^k/prod (q)_{k_i} = sum_eta
/// q^{codim} x^{dim eta}/prod (q)_{m_I}` over the box `k <= kmax`, each term
/// multiplied by `q^{weight(k)}`.
fn generating_series_weighted(
    quiver: &QuiverA,
    points: &[Vec<i64>],
    order: HalfInt,
    weight: impl Fn(&[i64]) -> i64 + Sync,
) -> Result<(QSeries, QSeries)> {
    let rank = quiver.rank();
    let len = dense_len(order);
    let parts: Vec<(QSeries, QSeries)> = points
        .par_iter()
        .map(|k| -> Result<(QSeries, QSeries)> {
            let shift = weight(k);
            let mut lhs = QSeries::zero(order, rank);
            let mut rhs = QSeries::zero(order, rank);
            let room = len.saturating_sub(shift.max(0) as usize);
            for (t, v) in inv_product(k.iter().map(|&x| x as u32), room).into_iter().enumerate() {
                lhs.add_term(HalfInt::from_int(shift + t as i64), k.clone(), v);
            }
            for rep in enumerate_reps(quiver, k)? {
                let c = codim(quiver, &rep) + shift;
                let room = len.saturating_sub(c.max(0) as usize);
                for (t, v) in inv_product(rep.iter().map(|(_, m)| m), room).into_iter().enumerate() {
                    rhs.add_term(HalfInt::from_int(c + t as i64), k.clone(), v);
                }
            }
            Ok((lhs, rhs))
        })
        .collect::<Result<_>>()?;
    let mut lhs = QSeries::zero(order, rank);
    let mut rhs = QSeries::zero(order, rank);
    for (l, r) in parts {
        lhs = lhs.add(&l)?;
        rhs = rhs.add(&r)?;
    }
    Ok((lhs, rhs))
}

pub fn quiver_generating_series(quiver: &QuiverA, kmax: &[i64], order: HalfInt) -> Result<(QSeries, QSeries)> {
    if kmax.len() != quiver.rank() {
        return Err(Error::InvalidArgument(format!("box needs {} entries", quiver.rank())));
    }
    generating_series_weighted(quiver, &box_points(kmax), order, |_| 0)
}

/// `k^T A k / 2` for the Cartan matrix of type `A_rank`.
pub fn half_cartan_norm(k: &[i64]) -> i64 {
    let sq: i64 = k.iter().map(|x| x * x).sum();
    let cross: i64 = k.windows(2).map(|w| w[0] * w[1]).sum();
    sq - cross
}

/// Result of comparing the equioriented quiver side with the B' Nahm sum
/// for `sl_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeReport {
    pub series: Comparison,
    /// Representations checked pointwise, and the first one (if any) where
    /// `codim != B'(m) - k^T A k / 2`.
    pub pointwise_checked: usize,
    pub pointwise_failure: Option<(QuiverRep, i64, HalfInt)>,
}

/// Compares `sum_eta q^{codim + k^T A k/2} x^k / prod (q)_{m_I}` over the
/// equioriented quiver of rank `n - 1` with the charged B' sum, through
/// `q^order`, identifying `m_{[i,j]}` with `m_{i,j+1}`.
pub fn bprime_bridge(n: usize, order: HalfInt) -> Result<BridgeReport> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bridge needs n >= 2, got {n}")));
    }
    let quiver = QuiverA::equioriented(n - 1);
    let rank = n - 1;
    // the smallest eigenvalue of A/2 exceeds 1/(rank+1)^2 in type A
    let cap = (order.ceil().max(0) as f64 * ((rank + 1) * (rank + 1)) as f64).sqrt().ceil() as i64;
    let points: Vec<Vec<i64>> =
        box_points(&vec![cap; rank]).into_iter().filter(|k| HalfInt::from_int(half_cartan_norm(k)) < order).collect();
    let (_, quiver_side) = generating_series_weighted(&quiver, &points, order, half_cartan_norm)?;
    let spec = build_bprime_form(n)?;
    let nahm = evaluate_with(&spec, order, &EvalOptions::default())?;
    let series = series_eq(&quiver_side, &nahm)?;

    let segs = quiver.segments();
    let label_index = |s: Segment| {
        // m_{i,j+1} in the pair order of the B' spec
        let mut idx = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                if (i, j) == (s.a, s.b + 1) {
                    return idx;
                }
                idx += 1;
            }
        }
        unreachable!("segment inside the quiver")
    };
    let mut checked = 0;
    let mut failure = None;
    'outer: for k in &points {
        for rep in enumerate_reps(&quiver, k)? {
            checked += 1;
            let mut m = vec![0i64; segs.len()];
            for (s, mult) in rep.iter() {
                m[label_index(s)] = mult as i64;
            }
            let c = codim(&quiver, &rep);
            let expect = spec.exponent(&m)? - HalfInt::from_int(half_cartan_norm(k));
            if HalfInt::from_int(c) != expect {
                failure = Some((rep, c, expect));
                break 'outer;
            }
        }
    }
    Ok(BridgeReport { series, pointwise_checked: checked, pointwise_failure: failure })
}

/// `1/((q)_m (q)_n)` against `sum_{n2} q^{(m-n2)(n-n2)} / ((q)_{m-n2} (q)_{n2} (q)_{n-n2})`.
pub fn two_vertex_identity(m: u32, n: u32, order: HalfInt) -> Result<Comparison> {
    let len = dense_len(order);
    let lhs = QSeries::from_coeffs(inv_product([m, n].into_iter(), len), order);
    let mut rhs = QSeries::zero(order, 0);
    for n2 in 0..=m.min(n) {
        let shift = ((m - n2) * (n - n2)) as usize;
        let room = len.saturating_sub(shift);
        for (t, v) in inv_product([m - n2, n2, n - n2].into_iter(), room).into_iter().enumerate() {
            rhs.add_term(HalfInt::from_int((shift + t) as i64), Vec::new(), v);
        }
    }
    series_eq(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(a: usize, b: usize) -> Segment {
        Segment::new(a, b).unwrap()
    }

    fn h(v: i64) -> HalfInt {
        HalfInt::from_int(v)
    }

    #[test]
    fn dimension_vectors() {
        assert_eq!(QuiverRep::from_pairs(&[(seg(1, 2), 1)]).dimension_vector(2), vec![1, 1]);
        assert_eq!(QuiverRep::from_pairs(&[(seg(1, 1), 1), (seg(2, 2), 1)]).dimension_vector(2), vec![1, 1]);
        assert_eq!(QuiverRep::from_pairs(&[(seg(1, 1), 2), (seg(1, 2), 1)]).dimension_vector(2), vec![3, 1]);
    }

    #[test]
    fn enumeration_examples() {
        let q = QuiverA::equioriented(2);
        let reps = enumerate_reps(&q, &[1, 1]).unwrap();
        assert_eq!(reps.len(), 2);
        assert!(reps.contains(&QuiverRep::from_pairs(&[(seg(1, 2), 1)])));
        assert!(reps.contains(&QuiverRep::from_pairs(&[(seg(1, 1), 1), (seg(2, 2), 1)])));
        let reps = enumerate_reps(&QuiverA::equioriented(1), &[3]).unwrap();
        assert_eq!(reps, vec![QuiverRep::from_pairs(&[(seg(1, 1), 3)])]);
        let reps = enumerate_reps(&q, &[2, 1]).unwrap();
        assert_eq!(reps.len(), 2);
        for rep in &reps {
            assert_eq!(rep.dimension_vector(2), vec![2, 1]);
        }
    }

    #[test]
    fn codim_examples() {
        let q2 = QuiverA::equioriented(2);
        assert_eq!(codim(&q2, &QuiverRep::from_pairs(&[(seg(1, 1), 1), (seg(2, 2), 1)])), 1);
        let q3 = QuiverA::equioriented(3);
        assert_eq!(codim(&q3, &QuiverRep::from_pairs(&[(seg(1, 2), 1), (seg(2, 3), 1)])), 1);
        for s in q3.segments() {
            assert_eq!(codim(&q3, &QuiverRep::from_pairs(&[(s, 1)])), 0);
        }
        // mixed orientation exercises the nested condition
        let mixed = QuiverA::parse("RL").unwrap();
        assert_eq!(strand_conditions(&mixed, seg(2, 2), seg(1, 3)), [false, false, true]);
        assert_eq!(mixed.to_string(), "RL");
    }

    #[test]
    fn theorem_small() {
        let q2 = QuiverA::equioriented(2);
        assert!(verify_theorem51(&q2, &[1, 1], h(10)).unwrap().is_equal());
        assert!(verify_theorem51(&QuiverA::equioriented(1), &[2], h(10)).unwrap().is_equal());
        let mixed = QuiverA::parse("RL").unwrap();
        for k in box_points(&[3, 3, 3]) {
            if k.iter().sum::<i64>() <= 6 {
                assert!(verify_theorem51(&mixed, &k, h(12)).unwrap().is_equal(), "{k:?}");
            }
        }
    }

    #[test]
    fn generating_series_constant_term() {
        let (l, r) = quiver_generating_series(&QuiverA::equioriented(2), &[1, 1], h(6)).unwrap();
        assert_eq!(l.coeff(h(0), &[0, 0]).unwrap(), BigInt::one());
        assert_eq!(r.coeff(h(0), &[0, 0]).unwrap(), BigInt::one());
        assert!(series_eq(&l, &r).unwrap().is_equal());
    }

    #[test]
    fn two_vertex() {
        assert!(two_vertex_identity(1, 1, h(10)).unwrap().is_equal());
        assert!(two_vertex_identity(3, 2, h(12)).unwrap().is_equal());
    }

    #[test]
    fn orientations_listed() {
        let all: Vec<String> = QuiverA::all_orientations(3).iter().map(|q| q.to_string()).collect();
        assert_eq!(all, vec!["LL", "LR", "RL", "RR"]);
        assert!(QuiverA::parse("RX").is_err());
    }
}
