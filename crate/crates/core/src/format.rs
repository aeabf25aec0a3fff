//! Number formatting shared by the CSV and JSON writers.

pub const DEFAULT_SIG_DIGITS: usize = 12;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

/// `x` rounded to `digits` significant digits, printed in plain decimal
/// notation with the shortest representation of the rounded value.
/// Integral values keep a trailing `.0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    let r = round_sig(x, digits);
    if !r.is_finite() {
        return format!("{r}");
    }
    // normalise negative zero
    let r = if r == 0.0 { 0.0 } else { r };
    if r.fract() == 0.0 && r.abs() < 1e16 {
        format!("{r:.1}")
    } else {
        format!("{r}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_and_layout() {
        assert_eq!(format_sig(1.0, 12), "1.0");
        assert_eq!(format_sig(0.0, 12), "0.0");
        assert_eq!(format_sig(-0.0, 12), "0.0");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(2.0f64.sqrt(), 12), "1.41421356237");
        assert_eq!(format_sig(1.0 / 3.0, 4), "0.3333");
        assert_eq!(format_sig(123456.789, 3), "123000.0");
        assert_eq!(format_sig(1.5e-10, 12), "0.00000000015");
        assert_eq!(format_sig(f64::NEG_INFINITY, 12), "-inf");
    }

    #[test]
    fn rounded_value_is_stable() {
        for x in [0.1, 2.838481409273698, 1e-7, 12_345.678_9] {
            let r = round_sig(x, 12);
            assert_eq!(round_sig(r, 12), r);
            assert_eq!(format_sig(x, 12).parse::<f64>().unwrap(), r);
        }
    }
}
