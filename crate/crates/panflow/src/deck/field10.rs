//! Ten-column numeric fields for `6E10.0` records.
//!
//! Canonical rendering keeps five significant digits inside ten columns:
//!
//! * `" 1.000E+00"` when the fifth digit is zero (sign column, four digits);
//! * `" 12345E-04"` otherwise, an integer mantissa with a shifted exponent.
//!
//! Both read under Fortran `E10.0` and parse as plain decimal floats. A
//! negative field abuts the one before it, so records are split by column,
//! not by whitespace.

pub const WIDTH: usize = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} does not fit a ten-column field")]
    FieldOverflow(f64),
    #[error("non-numeric field {0:?}")]
    ParseError(String),
}

/// Renders `x` in exactly [`WIDTH`] columns.
pub fn format_field10(x: f64) -> Result<String, FieldError> {
    if !x.is_finite() {
        return Err(FieldError::FieldOverflow(x));
    }
    let sign = if x < 0.0 { '-' } else { ' ' };
    let sci = format!("{:.4e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp > 99 {
        return Err(FieldError::FieldOverflow(x));
    }
    if exp < -99 {
        return Ok(" 0.000E+00".to_string());
    }
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let out = if digits.ends_with('0') || exp - 4 < -99 {
        if digits.ends_with('0') {
            format!("{sign}{}E{}", &mantissa[..5], exponent(exp))
        } else {
            // below the integer form's exponent range; four digits are
            // still far inside the absolute round-trip bound here
            let sci = format!("{:.3e}", x.abs());
            let (m, e) = sci.split_once('e').expect("exponent form");
            let e: i32 = e.parse().expect("integer exponent");
            if e < -99 {
                return Ok(" 0.000E+00".to_string());
            }
            format!("{sign}{m}E{}", exponent(e))
        }
    } else {
        format!("{sign}{digits}E{}", exponent(exp - 4))
    };
    debug_assert_eq!(out.len(), WIDTH);
    Ok(out)
}

fn exponent(e: i32) -> String {
    format!("{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// Reads one field with Fortran `E10.0` leniency: `D` exponents, exponents
/// without a letter (`1.2345-05`) and embedded blanks are accepted; an
/// all-blank field is zero.
pub fn parse_field10(s: &str) -> Result<f64, FieldError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(0.0);
    }
    let bad = || FieldError::ParseError(s.to_string());
    let mut t = compact.replace(['D', 'd'], "E");
    if !t.contains(['E', 'e']) {
        // letterless exponent: a sign after the first mantissa character
        if let Some(k) = t
            .char_indices()
            .skip(1)
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
        {
            t.insert(k, 'E');
        }
    }
    if t.contains(|c: char| c.is_ascii_alphabetic() && c != 'E' && c != 'e') {
        return Err(bad());
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

/// Splits a fixed-column record into fields of [`WIDTH`] columns; a short
/// final field is allowed.
pub fn split_record(line: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = line;
    while !rest.is_empty() {
        let k = rest.len().min(WIDTH);
        let (a, b) = rest.split_at(k);
        out.push(a);
        rest = b;
    }
    out
}

/// Formats values into records of at most `per_line` fields.
pub fn records(values: &[f64], per_line: usize) -> Result<Vec<String>, FieldError> {
    values
        .chunks(per_line)
        .map(|c| {
            c.iter()
                .map(|v| format_field10(*v))
                .collect::<Result<String, _>>()
        })
        .collect()
}
