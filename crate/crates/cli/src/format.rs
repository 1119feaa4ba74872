//! Plain-text number formatting and CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

/// Significant digits printed for every floating-point field.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Formats `x` with [`SIGNIFICANT_DIGITS`] significant digits, trailing zeros
/// removed, switching to scientific notation for very small or large values.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim(mantissa.to_string()), exp)
    }
}

fn trim(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// A CSV table with a fixed header.
pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[String]) -> Self {
        Self { text: header.join(",") + "\n", columns: header.len() }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let mut first = true;
        for v in values {
            if !first {
                self.text.push(',');
            }
            first = false;
            let _ = write!(self.text, "{}", sig(*v));
        }
        self.text.push('\n');
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        fs::write(path, &self.text)
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// `p0, p1, ..., p{n-1}` followed by `extra`.
pub fn header(n: usize, extra: &[&str]) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).chain(extra.iter().map(|s| s.to_string())).collect()
}
