//! Number formatting and file writers shared by the subcommands.

use std::fmt::Write as _;
use std::io::{self, Write as _};
use std::path::Path;

/// `v` with 12 significant digits, trailing zeros dropped.
pub fn sig12(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0".into();
    }
    let exp = format!("{v:.11e}");
    let e: i32 = exp.rsplit('e').next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let decimals = (11 - e).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// Rounds `v` to the value its 12-digit rendering denotes.
pub fn round12(v: f64) -> f64 {
    sig12(v).parse().unwrap_or(v)
}

/// Fixed 9-decimal coordinate, never printed as `-0`.
pub fn coord(v: f64) -> String {
    let s = format!("{v:.9}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Writes `text` to `out`, or to stdout when no path is given. A reader
/// closing the pipe early is not an error.
pub fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => match io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            other => other,
        },
    }
}

/// CSV with the given header and rows of numbers.
pub fn csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut s = String::new();
    s.push_str(header);
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| sig12(v)).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::excessive_precision)]
    fn significant_digits() {
        assert_eq!(sig12(0.5), "0.5");
        assert_eq!(sig12(0.07000000000000001), "0.07");
        assert_eq!(sig12(0.268375177532385), "0.268375177532");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(123.456), "123.456");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-0.0287616190), "-0.028761619");
    }

    #[test]
    fn coordinates() {
        assert_eq!(coord(-0.0), "0.000000000");
        assert_eq!(coord(-1e-12), "0.000000000");
        assert_eq!(coord(1.5), "1.500000000");
        assert_eq!(coord(-2.25), "-2.250000000");
    }
}
