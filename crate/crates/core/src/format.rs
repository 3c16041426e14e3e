//! Locale-independent number rendering for CSV output.

/// Renders `x` in plain decimal notation with at most nine significant
/// digits, trailing zeros removed. Never uses an exponent.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let decimals = |v: f64| (8 - v.abs().log10().floor() as i32).max(0) as usize;
    let mut d = decimals(x);
    let mut s = format!("{:.*}", d, x);
    // Rounding can carry into a new leading digit (9.9999999996 -> 10.00000000).
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded != 0.0 && decimals(rounded) < d {
        d = decimals(rounded);
        s = format!("{:.*}", d, x);
    }
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        s.truncate(trimmed.len());
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}
