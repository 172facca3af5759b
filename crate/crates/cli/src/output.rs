//! Number formatting and the three output formats.

use clap::ValueEnum;
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    JsonLines,
}

/// `%.15g`: 15 significant digits, trailing zeros dropped, exponent form
/// outside `1e-5 ..= 1e15`. Negative zero prints as `0`.
pub fn g15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        trim(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `re im`.
pub fn complex(z: Complex64) -> String {
    format!("{} {}", g15(z.re), g15(z.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(g15(2.0), "2");
        assert_eq!(g15(-0.0), "0");
        assert_eq!(g15(0.1 + 0.2), "0.3");
        assert_eq!(g15(1.0 / 3.0), "0.333333333333333");
        assert_eq!(g15(123456.789), "123456.789");
        assert_eq!(g15(1e-7), "1e-07");
        assert_eq!(g15(-2.5e20), "-2.5e+20");
        assert_eq!(g15(4.0e14), "400000000000000");
        assert_eq!(complex(Complex64::new(4.0, 0.0)), "4 0");
    }
}
