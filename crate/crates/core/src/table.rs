//! CSV formatting shared by reports and the command line.

/// Real number with 15 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.14e}")
    } else {
        format!("{x}")
    }
}

/// Joins already formatted fields with commas.
pub fn row<S: AsRef<str>>(fields: &[S]) -> String {
    fields.iter().map(|f| f.as_ref()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(num(1.0 / 3.0), "3.33333333333333e-1");
        assert_eq!(num(-2.5e10), "-2.50000000000000e10");
        assert_eq!(num(f64::NAN), "NaN");
        assert_eq!(row(&["a", "b"]), "a,b");
    }
}
