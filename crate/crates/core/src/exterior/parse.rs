//! The Salamon-style text grammar for forms.
//!
//! A form is a `+`/`-` separated sum of terms `[coef*]word`, where `word` is a
//! string of generator digits (`12` is `e^1∧e^2`) and `coef` an integer or
//! fraction `p/q`. The single token `0` is the zero form.

use num::bigint::BigInt;
use num::Zero;

use super::form::Form;
use crate::error::{parse_err, Result};
use crate::scalar::Q;

/// Parse a homogeneous form of the given degree over `dim` generators.
pub fn parse_form(text: &str, dim: usize, degree: usize) -> Result<Form<Q>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(parse_err(text, "empty expression"));
    }
    if compact == "0" {
        return Ok(Form::zero(dim, degree));
    }
    let mut out = Form::zero(dim, degree);
    for (negative, term) in split_terms(&compact).map_err(|r| parse_err(text, r))? {
        let (coef, word) = match term.split_once('*') {
            Some((c, w)) => (parse_coef(c).map_err(|r| parse_err(text, r))?, w),
            None => (Q::from_integer(1.into()), term),
        };
        if word.len() != degree {
            return Err(parse_err(
                text,
                format!(
                    "term {term:?} has degree {} but {degree} was expected",
                    word.len()
                ),
            ));
        }
        let mut indices = Vec::with_capacity(word.len());
        for ch in word.chars() {
            let i = ch
                .to_digit(10)
                .ok_or_else(|| parse_err(text, format!("unexpected character {ch:?}")))?
                as usize;
            if i == 0 || i > dim {
                return Err(parse_err(text, format!("index {i} out of range 1..={dim}")));
            }
            if indices.contains(&i) {
                return Err(parse_err(text, format!("duplicate index {i} in {word:?}")));
            }
            indices.push(i);
        }
        let coef = if negative { -coef } else { coef };
        out = out.add(&Form::monomial(dim, &indices, coef));
    }
    Ok(out)
}

fn split_terms(s: &str) -> std::result::Result<Vec<(bool, &str)>, String> {
    let mut terms = Vec::new();
    let mut start = 0;
    let mut negative = false;
    let bytes = s.as_bytes();
    let mut i = 0;
    if matches!(bytes.first(), Some(b'+') | Some(b'-')) {
        negative = bytes[0] == b'-';
        start = 1;
        i = 1;
    }
    while i <= bytes.len() {
        if i == bytes.len() || bytes[i] == b'+' || bytes[i] == b'-' {
            let term = &s[start..i];
            if term.is_empty() {
                return Err("empty term".into());
            }
            terms.push((negative, term));
            if i < bytes.len() {
                negative = bytes[i] == b'-';
            }
            start = i + 1;
        }
        i += 1;
    }
    Ok(terms)
}

fn parse_coef(s: &str) -> std::result::Result<Q, String> {
    let parse_int = |t: &str| {
        t.parse::<BigInt>()
            .map_err(|_| format!("bad coefficient {s:?}"))
    };
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Q::new(parse_int(n)?, d)
        }
        None => Q::from_integer(parse_int(s)?),
    };
    Ok(q)
}
