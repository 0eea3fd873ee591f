//! Engineering-notation number handling.

/// Parse a SPICE number such as `45n`, `1.5meg`, `3.3V` or `1e-9`.
///
/// Scale suffixes `f p n u m k meg g` are case-insensitive; any letters following the
/// numeric part and optional suffix are treated as a unit and ignored. Returns `None` for
/// malformed or non-finite input.
pub fn parse_value(token: &str) -> Option<f64> {
    let bytes = token.as_bytes();
    let mut i = 0;
    if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
        i += 1;
    }
    let digits_start = i;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    let mut mantissa_digits = i - digits_start;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        let frac_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        mantissa_digits += i - frac_start;
    }
    if mantissa_digits == 0 {
        return None;
    }
    let mantissa_end = i;
    let mut exponent: i32 = 0;
    // Exponent only when followed by digits, so `1e` falls through to the unit rule.
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        let mut j = i + 1;
        if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
            j += 1;
        }
        let exp_start = j;
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        if j > exp_start {
            exponent = token[i + 1..j].parse().ok()?;
            i = j;
        }
    }
    let rest = &token[i..];
    if !rest.chars().all(|c| c.is_ascii_alphabetic()) {
        return None;
    }
    let lower = rest.to_ascii_lowercase();
    let scale = if lower.starts_with("meg") {
        6
    } else {
        match lower.chars().next() {
            Some('f') => -15,
            Some('p') => -12,
            Some('n') => -9,
            Some('u') => -6,
            Some('m') => -3,
            Some('k') => 3,
            Some('g') => 9,
            _ => 0,
        }
    };
    // Fold the suffix into the decimal exponent so `45n` is exactly the double nearest 45e-9.
    let total = exponent.checked_add(scale)?;
    let value: f64 = format!("{}e{total}", &token[..mantissa_end]).parse().ok()?;
    value.is_finite().then_some(value)
}

/// Shortest text that parses back to exactly `value`.
pub fn format_value(value: f64) -> String {
    format!("{value:e}")
}
