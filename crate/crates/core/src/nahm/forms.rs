use num_rational::BigRational;
use num_traits::Zero;

use super::NahmSumSpec;
use crate::error::{Error, Result};
use crate::poly::rat;
use crate::series::EulerFactor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanType {
    A,
    D,
}

/// Label of the variable `m_{i,j}`; compact form for `n < 10`.
pub fn pair_label(prefix: &str, i: usize, j: usize, n: usize) -> String {
    if n < 10 {
        format!("{prefix}{i}{j}")
    } else {
        format!("{prefix}{i}_{j}")
    }
}

/// Pairs `(i, j)`, `1 <= i < j <= n`, in lexicographic order.
pub(crate) fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            out.push((i, j));
        }
    }
    out
}

fn cartan_matrix(kind: CartanType, rank: usize) -> Result<Vec<Vec<i64>>> {
    let mut a = vec![vec![0i64; rank]; rank];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let edges: Vec<(usize, usize)> = match kind {
        CartanType::A => (0..rank.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        CartanType::D => {
            if rank != 4 {
                return Err(Error::UnsupportedType { kind: 'D', rank });
            }
            // central node 2
            vec![(0, 1), (1, 2), (1, 3)]
        }
    };
    for (i, j) in edges {
        a[i][j] = -1;
        a[j][i] = -1;
    }
    Ok(a)
}

/// `sum q^{k^T A k / 2} x^k / prod (q)_{k_i}` with `A` the Cartan matrix.
///
/// Type A is indexed by `n` of `sl_n` (so `n - 1` variables); type D only
/// supports rank 4.
pub fn build_cartan_side(kind: CartanType, n: usize) -> Result<NahmSumSpec> {
    let (rank, name) = match kind {
        CartanType::A => {
            if n < 2 {
                return Err(Error::UnsupportedType { kind: 'A', rank: n });
            }
            (n - 1, format!("cartan-a{n}"))
        }
        CartanType::D => (n, format!("cartan-d{n}")),
    };
    let a = cartan_matrix(kind, rank)?;
    let labels = (1..=rank).map(|i| format!("k{i}")).collect();
    let quadratic = a.iter().map(|row| row.iter().map(|&v| rat(v, 2)).collect()).collect();
    let charges = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
    Ok(NahmSumSpec { name, labels, quadratic, linear: vec![BigRational::zero(); rank], charges })
}

/// Rows of `lambda_i = sum_{s <= i < l} m_{s,l}`, `i = 1..n-1`, over [`pairs`].
pub fn lambda_rows(n: usize) -> Vec<Vec<i64>> {
    let ps = pairs(n);
    (1..n).map(|i| ps.iter().map(|&(s, l)| i64::from(s <= i && i < l)).collect()).collect()
}

/// Which summation family of the B form produced a product term.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BFamily {
    /// `i1 < i2`, `j1 < j2`, `j1 > i2 + 1`
    Crossing,
    /// `i1 = i2`, `j1 <= j2`
    SameStart,
    /// `j1 = j2`, `i1 < i2`
    SameEnd,
    /// `m_{i,i+1} m_{j,j'}` with `j < i < i+1 < j'`
    Nested,
}

/// One product term `m_a m_b` of the B form with its family.
pub type BTerm = ((usize, usize), (usize, usize), BFamily);

/// Product terms of the B form, one entry per summand of each family
/// (families are accumulated additively).
pub fn b_family_terms(n: usize) -> Vec<BTerm> {
    let ps = pairs(n);
    let mut out = Vec::new();
    for &(i1, j1) in &ps {
        for &(i2, j2) in &ps {
            if i1 < i2 && j1 < j2 && j1 > i2 + 1 {
                out.push(((i1, j1), (i2, j2), BFamily::Crossing));
            }
            if i1 == i2 && j1 <= j2 {
                out.push(((i1, j1), (i2, j2), BFamily::SameStart));
            }
            if j1 == j2 && i1 < i2 {
                out.push(((i1, j1), (i2, j2), BFamily::SameEnd));
            }
        }
    }
    for i in 1..n {
        for j in 1..i {
            for jp in i + 2..=n {
                out.push(((i, i + 1), (j, jp), BFamily::Nested));
            }
        }
    }
    out
}

fn spec_from_pair_terms(name: String, n: usize, products: impl Iterator<Item = ((usize, usize), (usize, usize))>) -> NahmSumSpec {
    let ps = pairs(n);
    let index = |p: (usize, usize)| ps.iter().position(|&q| q == p).expect("pair");
    let terms: Vec<(usize, usize, BigRational)> = products.map(|(a, b)| (index(a), index(b), rat(1, 1))).collect();
    let labels = ps.iter().map(|&(i, j)| pair_label("m", i, j, n)).collect();
    NahmSumSpec::from_terms(name, labels, &terms, vec![BigRational::zero(); ps.len()], lambda_rows(n))
}

/// The B form over the `n(n-1)/2` variables `m_{i,j}`.
pub fn build_b_form(n: usize) -> Result<NahmSumSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("B form needs n >= 2, got {n}")));
    }
    Ok(spec_from_pair_terms(format!("B-a{n}"), n, b_family_terms(n).into_iter().map(|(a, b, _)| (a, b))))
}

/// The B' form: one family, `i1 <= i2`, `j1 <= j2`, `j1 > i2`.
pub fn build_bprime_form(n: usize) -> Result<NahmSumSpec> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("B' form needs n >= 2, got {n}")));
    }
    let ps = pairs(n);
    let mut products = Vec::new();
    for &(i1, j1) in &ps {
        for &(i2, j2) in &ps {
            if i1 <= i2 && j1 <= j2 && j1 > i2 {
                products.push(((i1, j1), (i2, j2)));
            }
        }
    }
    Ok(spec_from_pair_terms(format!("Bprime-a{n}"), n, products.into_iter()))
}

/// `n1^2 + n2^2 + n3^2 + n1 n3 + n2 n3` with charges `x^{n1+n3} y^{n2+n3}`,
/// the three-variable sum for `sl_3` written directly rather than through
/// the pair labels.
pub fn build_sl3_three_form() -> NahmSumSpec {
    let labels = vec!["n1".into(), "n2".into(), "n3".into()];
    let terms = [(0, 0, rat(1, 1)), (1, 1, rat(1, 1)), (2, 2, rat(1, 1)), (0, 2, rat(1, 1)), (1, 2, rat(1, 1))];
    NahmSumSpec::from_terms("sl3-three", labels, &terms, vec![BigRational::zero(); 3], vec![vec![1, 0, 1], vec![0, 1, 1]])
}

/// `r1^2 + (r2+r3)^2 + r3^2 - r1(r2 + 2 r3)`, charges `y1^{r1} y2^{2 r3 + r2}`.
pub fn build_b2_char_form() -> NahmSumSpec {
    let labels = vec!["r1".into(), "r2".into(), "r3".into()];
    let terms = [
        (0, 0, rat(1, 1)),
        (1, 1, rat(1, 1)),
        (1, 2, rat(2, 1)),
        (2, 2, rat(2, 1)),
        (0, 1, rat(-1, 1)),
        (0, 2, rat(-2, 1)),
    ];
    NahmSumSpec::from_terms("b2-char", labels, &terms, vec![BigRational::zero(); 3], vec![vec![1, 0, 0], vec![0, 1, 2]])
}

/// `n1^2 + n2^2 + (n3+n5)^2 + n4^2 + n3^2 + (2 n3 + n5) n1 + n4 (n1 + n2) + n3 n4`,
/// charges `y1^{n1+n2+n4} y2^{2n1+2n3+n4+n5}`.
pub fn build_b2_quintuple_form() -> NahmSumSpec {
    let labels = (1..=5).map(|i| format!("n{i}")).collect();
    let (n1, n2, n3, n4, n5) = (0, 1, 2, 3, 4);
    let terms = [
        (n1, n1, rat(1, 1)),
        (n2, n2, rat(1, 1)),
        (n3, n3, rat(1, 1)),
        (n3, n5, rat(2, 1)),
        (n5, n5, rat(1, 1)),
        (n4, n4, rat(1, 1)),
        (n3, n3, rat(1, 1)),
        (n3, n1, rat(2, 1)),
        (n5, n1, rat(1, 1)),
        (n4, n1, rat(1, 1)),
        (n4, n2, rat(1, 1)),
        (n3, n4, rat(1, 1)),
    ];
    NahmSumSpec::from_terms(
        "b2-quintuple",
        labels,
        &terms,
        vec![BigRational::zero(); 5],
        vec![vec![1, 1, 0, 1, 0], vec![2, 0, 2, 1, 1]],
    )
}

/// `(-q;q)_inf (-q;q^2)_inf^2 / (q, q^4; q^5)_inf`, the conjectured product
/// side of the uncharged B2 character.
pub fn b2_product_factors() -> Vec<EulerFactor> {
    vec![
        EulerFactor::new(-1, 1, 1, 1),
        EulerFactor::new(-1, 1, 2, 2),
        EulerFactor::new(1, 1, 5, -1),
        EulerFactor::new(1, 4, 5, -1),
    ]
}

/// Labels of the twelve D4 variables: `m12..m34` then `n12..n34`.
pub fn d4_labels() -> Vec<String> {
    let mut out: Vec<String> = pairs(4).iter().map(|&(i, j)| format!("m{i}{j}")).collect();
    out.extend(pairs(4).iter().map(|&(i, j)| format!("n{i}{j}")));
    out
}

/// Monomials of the twelve-variable D4 form with their coefficients.
pub const D4_B_TERMS: &[(&str, &str, i64)] = &[
    ("m12", "m12", 1),
    ("m12", "m13", 1),
    ("m12", "m14", 1),
    ("m12", "n12", 1),
    ("m12", "n13", 1),
    ("m12", "n14", 1),
    ("m13", "m13", 1),
    ("m13", "m14", 1),
    ("m13", "m23", 1),
    ("m13", "m24", 1),
    ("m13", "n12", 2),
    ("m13", "n13", 1),
    ("m13", "n14", 1),
    ("m13", "n23", 1),
    ("m13", "n24", 1),
    ("m14", "m14", 1),
    ("m14", "m24", 1),
    ("m14", "m34", 1),
    ("m14", "n12", 1),
    ("m14", "n13", 1),
    ("m14", "n23", 1),
    ("m23", "m23", 1),
    ("m23", "m24", 1),
    ("m23", "n12", 1),
    ("m23", "n23", 1),
    ("m23", "n24", 1),
    ("m24", "m24", 1),
    ("m24", "m34", 1),
    ("m24", "n12", 1),
    ("m24", "n23", 1),
    ("m34", "m34", 1),
    ("m34", "n12", 1),
    ("m34", "n13", 1),
    ("m34", "n23", 1),
    ("n12", "n12", 1),
    ("n12", "n13", 1),
    ("n12", "n14", 1),
    ("n12", "n23", 2),
    ("n12", "n24", 1),
    ("n12", "n34", 1),
    ("n13", "n13", 1),
    ("n13", "n14", 1),
    ("n13", "n23", 1),
    ("n13", "n34", 1),
    ("n14", "n14", 1),
    ("n14", "n23", 1),
    ("n14", "n24", 1),
    ("n14", "n34", 1),
    ("n23", "n23", 1),
    ("n23", "n24", 1),
    ("n23", "n34", 1),
    ("n24", "n24", 1),
    ("n24", "n34", 1),
    ("n34", "n34", 1),
];

/// Charge rows lambda_1..lambda_4 of the D4 form, as sums of labels.
const D4_LAMBDA: [&[(&str, i64)]; 4] = [
    &[("m12", 1), ("m13", 1), ("m14", 1), ("n14", 1), ("n13", 1), ("n12", 1)],
    &[("m23", 1), ("m14", 1), ("m13", 1), ("m24", 1), ("n24", 1), ("n23", 1), ("n13", 1), ("n12", 2), ("n14", 1)],
    &[("m34", 1), ("m14", 1), ("m24", 1), ("n23", 1), ("n13", 1), ("n12", 1)],
    &[("n34", 1), ("n14", 1), ("n24", 1), ("n23", 1), ("n13", 1), ("n12", 1)],
];

/// The twelve-variable D4 form; `primed` removes `n12 n23 + n12 m13`.
pub fn build_d4_form(primed: bool) -> NahmSumSpec {
    let labels = d4_labels();
    let idx = |s: &str| labels.iter().position(|l| l == s).expect("d4 label");
    let mut terms: Vec<(usize, usize, BigRational)> = D4_B_TERMS.iter().map(|&(a, b, c)| (idx(a), idx(b), rat(c, 1))).collect();
    if primed {
        terms.push((idx("n12"), idx("n23"), rat(-1, 1)));
        terms.push((idx("n12"), idx("m13"), rat(-1, 1)));
    }
    let charges = D4_LAMBDA
        .iter()
        .map(|row| {
            let mut r = vec![0; labels.len()];
            for &(name, c) in row.iter() {
                r[idx(name)] += c;
            }
            r
        })
        .collect();
    let name = if primed { "d4-prime" } else { "d4" };
    NahmSumSpec::from_terms(name, labels.clone(), &terms, vec![BigRational::zero(); labels.len()], charges)
}

pub fn preset_names() -> Vec<String> {
    vec![
        "cartan-a{n}".into(),
        "cartan-d4".into(),
        "B-a{n}".into(),
        "Bprime-a{n}".into(),
        "sl3-three".into(),
        "b2-char".into(),
        "b2-quintuple".into(),
        "d4".into(),
        "d4-prime".into(),
    ]
}

/// Looks up a named preset such as `cartan-a3`, `B-a4`, `Bprime-a5`, `d4`.
pub fn preset(name: &str) -> Result<NahmSumSpec> {
    let parse_n = |rest: &str| rest.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("unknown preset `{name}`")));
    if let Some(rest) = name.strip_prefix("cartan-a") {
        return build_cartan_side(CartanType::A, parse_n(rest)?);
    }
    if let Some(rest) = name.strip_prefix("Bprime-a") {
        return build_bprime_form(parse_n(rest)?);
    }
    if let Some(rest) = name.strip_prefix("B-a") {
        return build_b_form(parse_n(rest)?);
    }
    match name {
        "cartan-d4" => build_cartan_side(CartanType::D, 4),
        "sl3-three" => Ok(build_sl3_three_form()),
        "b2-char" => Ok(build_b2_char_form()),
        "b2-quintuple" => Ok(build_b2_quintuple_form()),
        "d4" => Ok(build_d4_form(false)),
        "d4-prime" => Ok(build_d4_form(true)),
        _ => Err(Error::InvalidArgument(format!("unknown preset `{name}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::poly::SparsePoly;

    fn poly_of(spec: &NahmSumSpec) -> String {
        spec.exponent_poly().to_string()
    }

    #[test]
    fn b2_product_low_terms() {
        let p = crate::series::euler_product(&b2_product_factors(), HalfInt::from_int(3)).unwrap();
        assert_eq!(p.coeff(HalfInt::from_int(1), &[]).unwrap(), 4.into());
    }

    #[test]
    fn sl3_three_variable_form() {
        let s = build_sl3_three_form();
        assert_eq!(poly_of(&s), "n1^2 + n1*n3 + n2^2 + n2*n3 + n3^2");
        assert_eq!(s.charge_of(&[1, 2, 3]), vec![4, 5]);
    }

    #[test]
    fn cartan_forms() {
        assert_eq!(poly_of(&build_cartan_side(CartanType::A, 2).unwrap()), "k1^2");
        assert_eq!(poly_of(&build_cartan_side(CartanType::A, 3).unwrap()), "k1^2 - k1*k2 + k2^2");
        let d4 = build_cartan_side(CartanType::D, 4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j {
                    rat(1, 1)
                } else if [(0, 1), (1, 2), (1, 3)].contains(&(i.min(j), i.max(j))) {
                    rat(-1, 2)
                } else {
                    rat(0, 1)
                };
                assert_eq!(d4.quadratic[i][j], expect, "({i},{j})");
            }
        }
        assert!(build_cartan_side(CartanType::D, 5).is_err());
        assert!(build_cartan_side(CartanType::A, 1).is_err());
    }

    #[test]
    fn b_form_small_ranks() {
        let b3 = build_b_form(3).unwrap();
        assert_eq!(poly_of(&b3), "m12^2 + m12*m13 + m13^2 + m13*m23 + m23^2");
        assert_eq!(b3.charges, vec![vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(b3.exponent(&[1, 0, 1]).unwrap(), HalfInt::from_int(2));
        let b2 = build_b_form(2).unwrap();
        assert_eq!(poly_of(&b2), "m12^2");
        assert_eq!(b2.charges, vec![vec![1]]);
    }

    #[test]
    fn bprime_small_ranks() {
        let p3 = build_bprime_form(3).unwrap();
        assert_eq!(p3.exponent_poly(), build_b_form(3).unwrap().exponent_poly());
        assert_eq!(poly_of(&build_bprime_form(2).unwrap()), "m12^2");
        let b4 = build_b_form(4).unwrap().exponent_poly();
        let p4 = build_bprime_form(4).unwrap().exponent_poly();
        assert_eq!(p4.coeff(&[("m13", 1), ("m24", 1)]).unwrap(), rat(1, 1));
        assert_eq!(b4.coeff(&[("m13", 1), ("m24", 1)]).unwrap(), rat(0, 1));
        assert_eq!(b4.coeff(&[("m14", 1), ("m23", 1)]).unwrap(), rat(1, 1));
    }

    #[test]
    fn b2_forms() {
        let c = build_b2_char_form();
        assert_eq!(c.exponent(&[1, 0, 0]).unwrap(), HalfInt::from_int(1));
        assert_eq!(c.charge_of(&[1, 0, 0]), vec![1, 0]);
        let q = build_b2_quintuple_form();
        assert_eq!(q.exponent(&[0, 0, 1, 0, 0]).unwrap(), HalfInt::from_int(2));
        assert_eq!(q.charge_of(&[0, 0, 1, 0, 0]), vec![0, 2]);
    }

    #[test]
    fn d4_forms() {
        let b = build_d4_form(false);
        for i in 0..12 {
            assert_eq!(b.quadratic[i][i], rat(1, 1));
        }
        let p = b.exponent_poly();
        assert_eq!(p.coeff(&[("m13", 1), ("n12", 1)]).unwrap(), rat(2, 1));
        let diff = p.sub(&build_d4_form(true).exponent_poly());
        let labels = d4_labels();
        let expect = SparsePoly::var(&labels, "n12")
            .unwrap()
            .mul(&SparsePoly::var(&labels, "n23").unwrap().add(&SparsePoly::var(&labels, "m13").unwrap()));
        assert_eq!(diff, expect);
        let mut at = vec![0; 12];
        at[labels.iter().position(|l| l == "n12").unwrap()] = 1;
        at[labels.iter().position(|l| l == "n23").unwrap()] = 1;
        let gap = b.exponent(&at).unwrap() - build_d4_form(true).exponent(&at).unwrap();
        assert_eq!(gap, HalfInt::from_int(1));
        assert_eq!(b.charge_rank(), 4);
    }

    #[test]
    fn presets_resolve() {
        for name in ["cartan-a2", "cartan-a5", "cartan-d4", "B-a3", "Bprime-a4", "b2-char", "b2-quintuple", "d4", "d4-prime"] {
            let s = preset(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.name, name);
        }
        assert!(preset("nope").is_err());
        assert!(preset("B-ax").is_err());
    }

    #[test]
    fn json_roundtrip() {
        let s = build_b2_char_form();
        let back = NahmSumSpec::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(NahmSumSpec::from_json(r#"{"name":"x","labels":["a"],"quadratic":[["1/3"]]}"#).is_err());
    }
}
