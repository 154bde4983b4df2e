//! Presentations of the algebras whose jet Hilbert series are compared
//! with the Nahm sums.
//!
//! The `sl_n` generators are `E[i,j]`, `1 <= i < j <= n`, with charge
//! `e_i + ... + e_{j-1}`. For `B_2` the simple roots are `e1 - e2` and `e2`;
//! for `D_4` they are `e1 - e2`, `e2 - e3` (the central node), `e3 - e4` and
//! `e3 + e4`.

use std::fmt::Write;

use super::parse::parse_relation_file;
use super::JetPreset;
use crate::error::{Error, Result};

fn e(i: usize, j: usize) -> String {
    format!("E[{i},{j}]")
}

fn sl_header(n: usize) -> String {
    let mut s = String::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let charge: Vec<String> = (1..n).map(|k| if i <= k && k < j { "1" } else { "0" }.to_string()).collect();
            writeln!(s, "gen {} {}", e(i, j), charge.join(" ")).unwrap();
        }
    }
    s
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sl_n presets need n >= 2, got {n}")));
    }
    Ok(())
}

/// Index quadruples `i1 <= i2 < j1 <= j2`.
fn quadruples(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out = Vec::new();
    for i1 in 1..=n {
        for i2 in i1..=n {
            for j1 in i2 + 1..=n {
                for j2 in j1..=n {
                    out.push((i1, i2, j1, j2));
                }
            }
        }
    }
    out
}

/// `E_{i1,j1} E_{i2,j2} + E_{i1,j2} E_{i2,j1}` for `i1 <= i2 < j1 <= j2`.
pub fn sln_a(n: usize) -> Result<JetPreset> {
    check_n(n)?;
    let mut s = sl_header(n);
    for (i1, i2, j1, j2) in quadruples(n) {
        writeln!(s, "{}*{} + {}*{}", e(i1, j1), e(i2, j2), e(i1, j2), e(i2, j1)).unwrap();
    }
    parse_relation_file(&format!("sl{n}-A"), &s)
}

/// Monomial ideal: products sharing an endpoint, crossings `i1 < i2 < j1 - 1 < j2 - 1`,
/// and a simple root strictly inside another segment.
pub fn sln_b(n: usize) -> Result<JetPreset> {
    check_n(n)?;
    let mut s = sl_header(n);
    for (i1, i2, j1, j2) in quadruples(n) {
        let shared = i1 == i2 || j1 == j2;
        let crossing = i1 < i2 && j1 < j2 && j1 > i2 + 1;
        if shared || crossing {
            writeln!(s, "{}*{}", e(i1, j1), e(i2, j2)).unwrap();
        }
    }
    for i in 1..n {
        for j in 1..i {
            for j2 in i + 2..=n {
                writeln!(s, "{}*{}", e(i, i + 1), e(j, j2)).unwrap();
            }
        }
    }
    parse_relation_file(&format!("sl{n}-B"), &s)
}

/// Monomial ideal of every product `E_{i1,j1} E_{i2,j2}` with `i1 <= i2 < j1 <= j2`.
pub fn sln_h(n: usize) -> Result<JetPreset> {
    check_n(n)?;
    let mut s = sl_header(n);
    for (i1, i2, j1, j2) in quadruples(n) {
        writeln!(s, "{}*{}", e(i1, j1), e(i2, j2)).unwrap();
    }
    parse_relation_file(&format!("sl{n}-H"), &s)
}

const B2_HEADER: &str = "\
gen x[e1+e2] 1 2
gen x[e1-e2] 1 0
gen x[e2] 0 1
gen x[e1] 1 1
";

const B2_COMMON: &str = "\
x[e1+e2]^2
x[e1-e2]^2
x[e2]*x[e1+e2]
x[e1]*x[e1-e2]
x[e1]*x[e1+e2]
x[e2]^3
x[e2]^2*x[e1]
";

pub fn b2_a() -> JetPreset {
    let text = format!("{B2_HEADER}{B2_COMMON}x[e1]^2 - x[e1+e2]*x[e1-e2]\n");
    parse_relation_file("b2-A", &text).expect("valid B2 relations")
}

pub fn b2_b() -> JetPreset {
    let text = format!("{B2_HEADER}{B2_COMMON}x[e1]^2\n");
    parse_relation_file("b2-B", &text).expect("valid B2 relations")
}

/// The two readings of the `D_4` relation listing both `W23 W23` and
/// `W23 W23 = W24 W24`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D4Reading {
    /// As printed: `W23 W23 = W24 W24`.
    AsWritten,
    /// `W23 V23 = W24 V24`.
    VVariant,
    /// The V reading plus the six products `x_a x_b` with `(a, b) >= 1`
    /// absent from the list: `W13^2`, `W14^2`, `W13 W14` and the same for `V`.
    VCompleted,
}

const D4_HEADER: &str = "\
gen W[12] 1 2 1 1
gen W[13] 1 1 1 1
gen W[14] 1 1 0 1
gen W[23] 0 1 1 1
gen W[24] 0 1 0 1
gen W[34] 0 0 0 1
gen V[12] 1 0 0 0
gen V[13] 1 1 0 0
gen V[14] 1 1 1 0
gen V[23] 0 1 0 0
gen V[24] 0 1 1 0
gen V[34] 0 0 1 0
";

const D4_RELATIONS: &str = "\
W[12]*W[23]
W[12]*W[24]
W[13]*W[34]
W[23]*W[34]
W[12]*W[12]
W[12]*W[13]
W[12]*W[14]
W[23]*W[23]
W[23]*W[24]
W[24]*W[24]
W[34]*W[34]
W[13]*W[23]
W[14]*W[24]
W[14]*W[34]
W[24]*W[34]
-W[13]*W[24] = W[23]*W[14] = W[12]*W[34]
W[12]*V[23]
W[12]*V[24]
W[13]*V[34]
W[23]*V[34]
W[12]*V[13]
W[13]*V[12]
W[12]*V[14]
W[14]*V[12]
W[23]*V[24]
W[24]*V[23]
W[13]*V[14]
W[14]*V[13]
W[12]*V[12] = W[13]*V[13] = W[14]*V[14]
@AMBIGUOUS@
-W[13]*V[24] = W[23]*V[14] = W[12]*V[34]
-W[14]*V[23] = W[24]*V[13]
V[12]*V[12]
V[12]*V[13]
V[12]*V[14]
V[23]*V[23]
V[23]*V[24]
V[24]*V[24]
V[34]*V[34]
V[13]*V[23]
V[14]*V[24]
V[14]*V[34]
V[24]*V[34]
-V[13]*V[24] = V[23]*V[14]
W[13]*V[23] + W[23]*V[13] = W[24]*V[14] + W[14]*V[24]
";

pub fn d4_d(reading: D4Reading) -> JetPreset {
    let (line, name) = match reading {
        D4Reading::AsWritten => ("W[23]*W[23] = W[24]*W[24]", "d4-D"),
        D4Reading::VVariant => ("W[23]*V[23] = W[24]*V[24]", "d4-D-v"),
        D4Reading::VCompleted => (
            "W[23]*V[23] = W[24]*V[24]\nW[13]^2\nW[14]^2\nW[13]*W[14]\nV[13]^2\nV[14]^2\nV[13]*V[14]",
            "d4-D-v+",
        ),
    };
    let text = format!("{D4_HEADER}{}", D4_RELATIONS.replace("@AMBIGUOUS@", line));
    parse_relation_file(name, &text).expect("valid D4 relations")
}

pub fn jet_preset_names() -> Vec<String> {
    ["sl{n}-A", "sl{n}-B", "sl{n}-H", "b2-A", "b2-B", "d4-D", "d4-D-v", "d4-D-v+"].iter().map(|s| s.to_string()).collect()
}

/// Looks up `sl3-A`, `sl4-H`, `b2-B`, `d4-D`, `d4-D-v` and so on.
pub fn jet_preset(name: &str) -> Result<JetPreset> {
    let unknown = || Error::InvalidArgument(format!("unknown jet preset `{name}`"));
    match name {
        "b2-A" => return Ok(b2_a()),
        "b2-B" => return Ok(b2_b()),
        "d4-D" => return Ok(d4_d(D4Reading::AsWritten)),
        "d4-D-v" => return Ok(d4_d(D4Reading::VVariant)),
        "d4-D-v+" => return Ok(d4_d(D4Reading::VCompleted)),
        _ => {}
    }
    let rest = name.strip_prefix("sl").ok_or_else(unknown)?;
    let (n, kind) = rest.split_once('-').ok_or_else(unknown)?;
    let n: usize = n.parse().map_err(|_| unknown())?;
    match kind {
        "A" => sln_a(n),
        "B" => sln_b(n),
        "H" => sln_h(n),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::JetVar;
    use num_bigint::BigInt;

    #[test]
    fn sl3_counts() {
        let a = sln_a(3).unwrap();
        assert_eq!(a.generators, vec!["E[1,2]", "E[1,3]", "E[2,3]"]);
        assert_eq!(a.relations.len(), 5);
        assert_eq!(a.charges, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        assert!(a.charge_homogeneous());
        // the square relation keeps its factor 2
        let e12 = JetVar { gen: 0, depth: 1 };
        assert_eq!(a.relations[0].coeff(&[e12, e12]), BigInt::from(2));
        assert_eq!(sln_b(3).unwrap().relations.len(), 5);
        assert_eq!(sln_h(3).unwrap().relations.len(), 5);
    }

    #[test]
    fn sl4_monomial_ideals() {
        let b = sln_b(4).unwrap();
        let h = sln_h(4).unwrap();
        let render = |p: &JetPreset| {
            let mut v: Vec<String> = p.relations.iter().map(|r| r.render(&p.generators)).collect();
            v.sort();
            v
        };
        let rb = render(&b);
        let rh = render(&h);
        // the simple root nested inside [1,4]
        assert!(rb.contains(&"E[1,4]*E[2,3]".to_string()));
        assert!(!rh.contains(&"E[1,4]*E[2,3]".to_string()));
        // the crossing pair with adjacent ends
        assert!(rh.contains(&"E[1,3]*E[2,4]".to_string()));
        assert!(!rb.contains(&"E[1,3]*E[2,4]".to_string()));
        assert_eq!(rb.len(), rh.len());
    }

    #[test]
    fn b2_and_d4() {
        let a = b2_a();
        assert_eq!(a.generators.len(), 4);
        assert_eq!(a.relations.len(), 8);
        let weights: Vec<usize> = a.relations.iter().map(|r| r.homogeneous_weight().unwrap()).collect();
        assert_eq!(weights.iter().filter(|&&w| w == 3).count(), 2);
        assert!(a.charge_homogeneous());
        let d = d4_d(D4Reading::AsWritten);
        assert_eq!(d.generators.len(), 12);
        assert!(!d.charge_homogeneous());
        let v = d4_d(D4Reading::VVariant);
        assert!(v.charge_homogeneous());
        assert_eq!(d.relations.len(), v.relations.len());
        assert_eq!(d4_d(D4Reading::VCompleted).relations.len(), v.relations.len() + 6);
    }

    #[test]
    fn lookup() {
        assert_eq!(jet_preset("sl4-H").unwrap().name, "sl4-H");
        assert!(jet_preset("sl4-Q").is_err());
        assert!(jet_preset("b3-A").is_err());
        assert!(sln_a(1).is_err());
    }
}
