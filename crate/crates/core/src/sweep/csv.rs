use std::io::{self, Write};

use super::SweepTable;

/// Scientific notation with 12 significant digits and a lowercase exponent,
/// e.g. `1.84500568169e-11`. Negative zero is written as zero.
pub fn format_number(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Writes the table as comma-separated values with LF line endings and
/// returns the number of bytes written.
pub fn emit_csv<W: Write>(table: &SweepTable, sink: &mut W) -> io::Result<usize> {
    let mut out = String::new();
    let header: Vec<String> = table.columns.iter().map(|c| c.header()).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&x| format_number(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    sink.write_all(out.as_bytes())?;
    Ok(out.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Column;

    fn table(rows: Vec<Vec<f64>>) -> SweepTable {
        SweepTable {
            columns: vec![Column {
                name: "current".into(),
                unit: "A",
            }],
            rows,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        let n = emit_csv(&table(vec![]), &mut buf).unwrap();
        assert_eq!(buf, b"current_A\n");
        assert_eq!(n, buf.len());
    }

    #[test]
    fn twelve_significant_digits() {
        let mut buf = Vec::new();
        emit_csv(&table(vec![vec![1.845_005_681_688_772e-11]]), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "current_A\n1.84500568169e-11\n"
        );
        assert_eq!(format_number(-0.0), "0.00000000000e0");
        assert_eq!(format_number(-2.5e9), "-2.50000000000e9");
    }

    #[test]
    fn repeated_emission_is_identical() {
        let t = table(vec![vec![1.0], vec![-3.25e-24], vec![7.0e3]]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        emit_csv(&t, &mut a).unwrap();
        emit_csv(&t, &mut b).unwrap();
        assert_eq!(a, b);
        assert!(!a.contains(&b'\r'));
        assert!(!String::from_utf8(a)
            .unwrap()
            .lines()
            .any(|l| l.ends_with(',')));
    }

    struct Broken;

    impl Write for Broken {
        fn write(&mut self, _: &[u8]) -> io::Result<usize> {
            Err(io::Error::other("sink closed"))
        }
        fn flush(&mut self) -> io::Result<()> {
            Ok(())
        }
    }

    #[test]
    fn sink_failure_propagates() {
        assert!(emit_csv(&table(vec![vec![1.0]]), &mut Broken).is_err());
    }
}
