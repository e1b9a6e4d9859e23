//! Angle and grid expressions accepted on the command line.
//!
//! A value is a product/quotient of numbers and `pi` (`pi/2`, `-3*pi/4`,
//! `0.25`). A grid is either a comma list of values or an inclusive
//! `start:stop:count` range.

use std::f64::consts::PI;

fn atom(token: &str) -> Result<f64, String> {
    let t = token.trim();
    if t.starts_with(['+', '-']) {
        return Err(format!("unexpected sign in '{token}'"));
    }
    match t {
        "pi" | "PI" | "π" => Ok(PI),
        _ => {
            if let Some(num) = t.strip_suffix("pi").or_else(|| t.strip_suffix('π')) {
                // `2pi`-style shorthand.
                return num
                    .parse::<f64>()
                    .map(|v| v * PI)
                    .map_err(|_| format!("cannot parse '{token}'"));
            }
            t.parse::<f64>().map_err(|_| format!("cannot parse '{token}'"))
        }
    }
}

/// Parses one scalar expression.
pub fn parse_value(expr: &str) -> Result<f64, String> {
    let s = expr.trim();
    if s.is_empty() {
        return Err("empty value".into());
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut start = 0;
    for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), '*'))) {
        if ch == '*' || ch == '/' {
            let a = atom(&body[start..i]).map_err(|e| format!("{e} in '{expr}'"))?;
            value = if op == '*' { value * a } else { value / a };
            op = ch;
            start = i + 1;
        }
    }
    let v = sign * value;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{expr}' is not finite"))
    }
}

/// Parses a list or inclusive range into grid points, in order.
pub fn parse_grid(expr: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = expr.split(':').collect();
    match parts.len() {
        1 => expr.split(',').map(parse_value).collect(),
        3 => {
            let start = parse_value(parts[0])?;
            let stop = parse_value(parts[1])?;
            let count: usize = parts[2]
                .trim()
                .parse()
                .map_err(|_| format!("range count '{}' is not a non-negative integer", parts[2]))?;
            Ok(match count {
                0 => Vec::new(),
                1 => vec![start],
                n => (0..n)
                    .map(|k| start + (stop - start) * k as f64 / (n - 1) as f64)
                    .collect(),
            })
        }
        _ => Err(format!("'{expr}' is neither a list nor start:stop:count")),
    }
}
