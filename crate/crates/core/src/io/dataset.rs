use std::io::{BufRead, Write};

use super::IoError;
use crate::sequences::{Label, LabeledWindow, Origin};

const HEADER: &str = "#label\tstrand\torigin\tbases";

/// Write windows as TSV `label, strand, seq_id:offset, bases` under a
/// `#` header line.
pub fn write_dataset(mut writer: impl Write, windows: &[LabeledWindow]) -> Result<(), IoError> {
    writeln!(writer, "{HEADER}")?;
    for w in windows {
        let o = &w.origin;
        writeln!(writer, "{}\t{}\t{}:{}\t{}", w.label, o.strand, o.seq_id, o.offset, w.bases)?;
    }
    writer.flush()?;
    Ok(())
}

/// Inverse of [`write_dataset`]; `#` lines and blank lines are skipped.
pub fn read_dataset(reader: impl BufRead) -> Result<Vec<LabeledWindow>, IoError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |reason: String| IoError::MalformedDataset { line: i + 1, reason };
        let fields: Vec<&str> = line.split('\t').collect();
        let [label, strand, origin, bases] = fields[..] else {
            return Err(bad(format!("expected 4 tab-separated fields, found {}", fields.len())));
        };
        let label: Label = label.parse().map_err(|e| bad(format!("{e}")))?;
        let strand = strand.parse().map_err(|e| bad(format!("{e}")))?;
        let (seq_id, offset) = origin.rsplit_once(':').ok_or_else(|| bad(format!("origin {origin:?} lacks ':offset'")))?;
        let offset = offset.parse().map_err(|_| bad(format!("bad offset {offset:?}")))?;
        let origin = Origin { seq_id: seq_id.to_string(), offset, strand };
        out.push(LabeledWindow::new(bases, label, origin).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{generate_synthetic, SyntheticSpec};

    #[test]
    fn write_read_round_trip() {
        let windows = generate_synthetic(&SyntheticSpec::new(54, 5, 5, 3)).unwrap();
        let mut buf = Vec::new();
        write_dataset(&mut buf, &windows).unwrap();
        assert_eq!(read_dataset(&buf[..]).unwrap(), windows);
        let mut again = Vec::new();
        write_dataset(&mut again, &read_dataset(&buf[..]).unwrap()).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn seq_ids_may_contain_colons() {
        let w = read_dataset("coding\t+\tchr1:x:40\tACG\n".as_bytes()).unwrap();
        assert_eq!(w[0].origin.seq_id, "chr1:x");
        assert_eq!(w[0].origin.offset, 40);
    }

    #[test]
    fn rejects_malformed_rows() {
        for text in ["coding\t+\ts:1\n", "maybe\t+\ts:1\tACG\n", "coding\t+\ts\tACG\n", "coding\t+\ts:1\tACGN\n"] {
            assert!(matches!(read_dataset(text.as_bytes()), Err(IoError::MalformedDataset { line: 1, .. })), "{text}");
        }
    }
}
