//! Locale-independent number formatting for CSV and table output.

/// Significant digits used for every float written by this crate.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant digits and prints the
/// shortest decimal that reads back as the rounded value.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("scientific notation parses");
    // -0 prints as "-0".
    if rounded == 0.0 {
        return "0".to_string();
    }
    rounded.to_string()
}
