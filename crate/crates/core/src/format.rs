//! Number formatting shared by the CSV writers.

/// Formats `v` with 9 significant digits, like C's `%.9g`.
pub fn sig9(v: f64) -> String {
    if v.is_nan() {
        return String::new();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.8e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::sig9;

    #[test]
    fn formats() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(4.0), "4");
        assert_eq!(sig9(0.5), "0.5");
        assert_eq!(sig9(1.0 / 3.0), "0.333333333");
        assert_eq!(sig9(2000.123456789), "2000.12346");
        assert_eq!(sig9(-12.5), "-12.5");
        assert_eq!(sig9(2.5e-7), "2.5e-7");
        assert_eq!(sig9(1.234567891e12), "1.23456789e12");
        assert_eq!(sig9(f64::NAN), "");
    }
}
