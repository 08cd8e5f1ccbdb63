use std::collections::BTreeMap;
use std::io::BufRead;

use super::IoError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub seq_id: String,
    /// 1-based inclusive.
    pub start: usize,
    pub end: usize,
}

/// Read `seq_id<TAB>CDS<TAB>start<TAB>end` lines; `#` lines are comments.
/// Returns the CDS intervals of each sequence, sorted and checked disjoint.
pub fn read_annotations(reader: impl BufRead) -> Result<BTreeMap<String, Vec<(usize, usize)>>, IoError> {
    let mut out: BTreeMap<String, Vec<(usize, usize)>> = BTreeMap::new();
    let mut lines = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = |reason: String| IoError::MalformedAnnotation { line: lineno, reason };
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let [seq_id, feature, start, end] = fields[..] else {
            return Err(bad(format!("expected 4 tab-separated fields, got {}", fields.len())));
        };
        if feature != "CDS" {
            return Err(bad(format!("feature must be CDS, got {feature:?}")));
        }
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| bad(format!("{s:?}: {e}")));
        let (start, end) = (parse(start)?, parse(end)?);
        if start == 0 || start > end {
            return Err(bad(format!("interval [{start}, {end}] must satisfy 1 <= start <= end")));
        }
        lines.push(AnnotationRecord { seq_id: seq_id.to_string(), start, end });
        out.entry(seq_id.to_string()).or_default().push((start, end));
    }
    for (id, intervals) in &mut out {
        intervals.sort_unstable();
        if let Some(w) = intervals.windows(2).find(|w| w[1].0 <= w[0].1) {
            let line = lines
                .iter()
                .position(|r| &r.seq_id == id && (r.start, r.end) == w[1])
                .map_or(0, |p| p + 1);
            return Err(IoError::MalformedAnnotation {
                line,
                reason: format!("{id}: [{}, {}] overlaps [{}, {}]", w[1].0, w[1].1, w[0].0, w[0].1),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_intervals_and_skips_comments() {
        let text = "# header\nchr1\tCDS\t10\t20\n\nchr1\tCDS\t1\t5\nchr2\tCDS\t3\t3\n";
        let a = read_annotations(text.as_bytes()).unwrap();
        assert_eq!(a["chr1"], vec![(1, 5), (10, 20)]);
        assert_eq!(a["chr2"], vec![(3, 3)]);
    }

    #[test]
    fn rejects_bad_lines() {
        for text in ["chr1\texon\t1\t5\n", "chr1\tCDS\t0\t5\n", "chr1\tCDS\t6\t5\n", "chr1\tCDS\t1\n", "chr1\tCDS\tx\t5\n"] {
            assert!(matches!(read_annotations(text.as_bytes()), Err(IoError::MalformedAnnotation { .. })), "{text}");
        }
        let overlap = "chr1\tCDS\t1\t5\nchr1\tCDS\t5\t9\n";
        assert!(matches!(read_annotations(overlap.as_bytes()), Err(IoError::MalformedAnnotation { line: 2, .. })));
    }
}
