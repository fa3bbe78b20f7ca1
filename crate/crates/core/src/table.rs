//! Plain-text number formatting shared by the CSV writers.

/// 17 significant digits, `.` decimal separator: enough to round-trip an
/// `f64` bit-exactly.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes one comma-separated line terminated by `\n`.
pub fn write_row<W: std::io::Write + ?Sized>(w: &mut W, fields: &[String]) -> std::io::Result<()> {
    w.write_all(fields.join(",").as_bytes())?;
    w.write_all(b"\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    }
}
