//! Deterministic output: every floating-point scalar is printed with 17
//! significant digits (`{:.16e}`), which round-trips f64 exactly, so two
//! runs of the same command produce byte-identical bytes. JSON is compact;
//! CSV uses comma separators, a header row, LF line endings, and no
//! quoting (no emitted field contains a comma).

use std::io::{self, Write as _};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::Formatter;

/// One floating-point scalar, fixed at 17 significant digits.
pub fn float17(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON formatter that routes every f64 through [`float17`]. Non-finite
/// values never reach `write_f64` — serde_json serializes them as null.
struct SciFormatter;

impl Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(float17(value).as_bytes())
    }
}

/// Serializes any value as compact JSON with deterministic float text.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("report types serialize without error");
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Assembles a CSV document: header + rows, LF endings, trailing newline.
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = header.join(",");
    text.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        text.push_str(&row.join(","));
        text.push('\n');
    }
    text
}

/// Writes `text` to `out` (refusing to clobber without `force`) or stdout.
/// A trailing newline is guaranteed either way.
pub fn emit(mut text: String, out: Option<&Path>, force: bool) -> Result<(), String> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => {
            if path.exists() && !force {
                return Err(format!(
                    "{} already exists; pass --force to overwrite",
                    path.display()
                ));
            }
            std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => {
            io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("cannot write stdout: {e}"))?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float17_round_trips() {
        for &v in &[
            0.0,
            1.0,
            -8.502226334224999e-4,
            std::f64::consts::PI,
            1e-300,
            -3.75,
        ] {
            let text = float17(v);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{text}");
        }
    }

    #[test]
    fn json_floats_use_scientific_notation() {
        #[derive(Serialize)]
        struct Row {
            x: f64,
            n: u32,
        }
        let text = to_json(&Row { x: 0.5, n: 7 });
        assert_eq!(text, r#"{"x":5.0000000000000000e-1,"n":7}"#);
    }

    #[test]
    fn csv_is_lf_terminated_with_header() {
        let text = to_csv(
            &["a", "b"],
            &[vec!["1".into(), "2".into()], vec!["3".into(), "4".into()]],
        );
        assert_eq!(text, "a,b\n1,2\n3,4\n");
        assert!(!text.contains('\r'));
    }
}
