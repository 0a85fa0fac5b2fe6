//! Text form of polynomials.
//!
//! Two inputs are accepted: ascending comma-separated coefficients (`"1,0,1"`) and
//! symbolic sums in `X` (`"X^2+1"`, `"2x^3 - X + 1"`). Output is always symbolic,
//! descending, without spaces, omitting a coefficient of one on non-constant terms.

use std::fmt;

use crate::error::{Error, Result};
use crate::ffpoly::field::FiniteField;
use crate::ffpoly::poly::Poly;

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        if coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (k, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "X")?,
                (1, c) => write!(f, "{c}X")?,
                (k, 1) => write!(f, "X^{k}")?,
                (k, c) => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Parses either accepted format over `field`.
pub fn parse_poly(field: &FiniteField, text: &str) -> Result<Poly> {
    if text.trim().is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    if text.contains(',') || text.trim().chars().all(|c| c.is_ascii_digit()) {
        parse_list(field, text)
    } else {
        parse_symbolic(field, text)
    }
}

fn parse_list(field: &FiniteField, text: &str) -> Result<Poly> {
    let q = field.order() as u64;
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for part in text.split(',') {
        let lead = part.len() - part.trim_start().len();
        let tok = part.trim();
        let pos = offset + lead;
        if tok.is_empty() {
            return Err(err(pos, "missing coefficient"));
        }
        if !tok.chars().all(|c| c.is_ascii_digit()) {
            return Err(err(pos, format!("invalid coefficient {tok:?}")));
        }
        let v: u64 = tok.parse().map_err(|_| err(pos, format!("coefficient {tok} too large")))?;
        if v >= q {
            return Err(err(pos, format!("coefficient {v} is not below q = {q}")));
        }
        coeffs.push(v as u32);
        offset += part.len() + 1;
    }
    Ok(Poly::from_raw(field, coeffs))
}

fn parse_symbolic(field: &FiniteField, text: &str) -> Result<Poly> {
    let q = field.order() as u64;
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut coeffs: Vec<u32> = Vec::new();
    let mut i = 0;
    let number = |i: &mut usize| -> Option<(usize, u64)> {
        let start = *i;
        let mut v: u64 = 0;
        while *i < chars.len() && chars[*i].1.is_ascii_digit() {
            v = v.saturating_mul(10).saturating_add(chars[*i].1 as u64 - '0' as u64);
            *i += 1;
        }
        (*i > start).then(|| (chars[start].0, v))
    };
    while i < chars.len() {
        let term_pos = chars[i].0;
        let mut negative = false;
        if chars[i].1 == '+' || chars[i].1 == '-' {
            negative = chars[i].1 == '-';
            i += 1;
        } else if i > 0 {
            return Err(err(term_pos, format!("expected '+' or '-', found {:?}", chars[i].1)));
        }
        if i >= chars.len() {
            return Err(err(text.len(), "dangling sign"));
        }
        let coeff = match number(&mut i) {
            Some((pos, v)) => {
                if v >= q {
                    return Err(err(pos, format!("coefficient {v} is not below q = {q}")));
                }
                if i < chars.len() && chars[i].1 == '*' {
                    i += 1;
                }
                Some(v)
            }
            None => None,
        };
        let mut exp = 0usize;
        if i < chars.len() && (chars[i].1 == 'X' || chars[i].1 == 'x') {
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i].1 == '^' {
                i += 1;
                let pos = chars.get(i).map_or(text.len(), |c| c.0);
                let (_, e) = number(&mut i).ok_or_else(|| err(pos, "missing exponent"))?;
                exp =
                    usize::try_from(e).ok().filter(|&e| e <= 1 << 16).ok_or_else(|| err(pos, "exponent too large"))?;
            }
        } else if coeff.is_none() {
            let (pos, c) = chars.get(i).map_or((text.len(), ' '), |&(p, c)| (p, c));
            return Err(err(pos, format!("unexpected {c:?}")));
        }
        let mut c = coeff.unwrap_or(1) as u32;
        if negative {
            c = field.neg(c);
        }
        if coeffs.len() <= exp {
            coeffs.resize(exp + 1, 0);
        }
        coeffs[exp] = field.add(coeffs[exp], c);
    }
    Ok(Poly::from_raw(field, coeffs))
}
