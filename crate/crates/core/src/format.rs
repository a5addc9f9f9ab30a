//! Fixed-precision number formatting shared by every file writer.

/// Significant digits used in all data files.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with 12 significant digits in scientific notation, e.g.
/// `3.50000000000e0`. Locale-independent and deterministic.
pub fn sig(x: f64) -> String {
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
}

/// Rounds `x` to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    sig(x).parse().unwrap_or(x)
}
