//! Plain-text relation files.
//!
//! ```text
//! # comment
//! gen E[1,2] 1 0        # optional: declare a generator and its charge
//! E[1,2]^2
//! E[1,3]*E[2,4] + E[1,4]*E[2,3]
//! -W[13]*W[24] = W[23]*W[14] = W[12]*W[34]
//! ```
//!
//! A chain `a = b = c` contributes `a - b` and `b - c`. Generators not
//! declared with `gen` are added in order of first appearance; charges are
//! kept only if every generator declares one.

use num_bigint::BigInt;
use num_traits::One;

use super::{JetPoly, JetPreset, JetVar};
use crate::error::{Error, Result};

struct Names {
    generators: Vec<String>,
    charges: Vec<Option<Vec<i64>>>,
}

impl Names {
    fn index(&mut self, name: &str) -> u16 {
        match self.generators.iter().position(|g| g == name) {
            Some(i) => i as u16,
            None => {
                self.generators.push(name.to_string());
                self.charges.push(None);
                (self.generators.len() - 1) as u16
            }
        }
    }
}

pub fn parse_relation_file(name: &str, text: &str) -> Result<JetPreset> {
    let mut names = Names { generators: Vec::new(), charges: Vec::new() };
    let mut relations = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix("gen ") {
            let mut parts = rest.split_whitespace();
            let gname = parts.next().ok_or_else(|| err("`gen` needs a name".into()))?;
            let charge = parts
                .map(|t| t.parse::<i64>().map_err(|_| err(format!("bad charge entry `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            let idx = names.index(gname) as usize;
            names.charges[idx] = (!charge.is_empty()).then_some(charge);
            continue;
        }
        let sides = line
            .split('=')
            .map(|side| parse_expr(side.trim(), &mut names).map_err(&err))
            .collect::<Result<Vec<_>>>()?;
        if sides.len() == 1 {
            relations.push(sides.into_iter().next().unwrap());
        } else {
            for pair in sides.windows(2) {
                relations.push(pair[0].sub(&pair[1]));
            }
        }
    }
    let charges = if !names.charges.is_empty() && names.charges.iter().all(Option::is_some) {
        names.charges.into_iter().map(Option::unwrap).collect()
    } else {
        Vec::new()
    };
    let preset = JetPreset { name: name.to_string(), generators: names.generators, charges, relations };
    preset.validate()?;
    Ok(preset)
}

fn parse_expr(s: &str, names: &mut Names) -> std::result::Result<JetPoly, String> {
    if s.is_empty() {
        return Err("empty side".into());
    }
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let mut out = JetPoly::zero();
    let mut first = true;
    loop {
        skip_ws(&chars, &mut pos);
        if pos >= chars.len() {
            break;
        }
        let mut sign = BigInt::one();
        if chars[pos] == '+' || chars[pos] == '-' {
            if chars[pos] == '-' {
                sign = -sign;
            }
            pos += 1;
        } else if !first {
            return Err(format!("expected `+` or `-` at `{}`", chars[pos..].iter().collect::<String>()));
        }
        first = false;
        let (coeff, mono) = parse_term(&chars, &mut pos, names)?;
        out.add_term(mono, sign * coeff);
    }
    Ok(out)
}

fn skip_ws(c: &[char], pos: &mut usize) {
    while *pos < c.len() && c[*pos].is_whitespace() {
        *pos += 1;
    }
}

fn parse_term(c: &[char], pos: &mut usize, names: &mut Names) -> std::result::Result<(BigInt, Vec<JetVar>), String> {
    let mut coeff = BigInt::one();
    let mut mono = Vec::new();
    loop {
        skip_ws(c, pos);
        if *pos >= c.len() {
            return Err("dangling operator".into());
        }
        if c[*pos].is_ascii_digit() {
            let start = *pos;
            while *pos < c.len() && c[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let n: BigInt = c[start..*pos].iter().collect::<String>().parse().map_err(|_| "bad integer".to_string())?;
            coeff *= n;
        } else if c[*pos].is_alphabetic() || c[*pos] == '_' {
            let start = *pos;
            while *pos < c.len() && (c[*pos].is_alphanumeric() || c[*pos] == '_') {
                *pos += 1;
            }
            if *pos < c.len() && (c[*pos] == '[' || c[*pos] == '{') {
                let close = if c[*pos] == '[' { ']' } else { '}' };
                while *pos < c.len() && c[*pos] != close {
                    *pos += 1;
                }
                if *pos == c.len() {
                    return Err(format!("unclosed `{close}`"));
                }
                *pos += 1;
            }
            let name: String = c[start..*pos].iter().collect();
            let gen = names.index(&name);
            skip_ws(c, pos);
            let mut power = 1;
            if *pos < c.len() && c[*pos] == '^' {
                *pos += 1;
                skip_ws(c, pos);
                let start = *pos;
                while *pos < c.len() && c[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                power = c[start..*pos].iter().collect::<String>().parse::<usize>().map_err(|_| format!("bad exponent on `{name}`"))?;
            }
            mono.extend(std::iter::repeat_n(JetVar { gen, depth: 1 }, power));
        } else {
            return Err(format!("unexpected `{}`", c[*pos]));
        }
        skip_ws(c, pos);
        if *pos < c.len() && c[*pos] == '*' {
            *pos += 1;
            continue;
        }
        return Ok((coeff, mono));
    }
}
