use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::IoError;

pub const RESULTS_HEADER: &str = "algorithm,length,coding_acc,noncoding_acc,overall_acc,seed";

/// One evaluated (algorithm, window length, seed) combination. Accuracies
/// are fractions in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub length: usize,
    pub coding_acc: f64,
    pub noncoding_acc: f64,
    pub overall_acc: f64,
    pub seed: u64,
}

/// Fixed six-decimal formatting keeps the file byte-stable across runs.
pub fn write_results(mut writer: impl Write, rows: &[ResultRow]) -> Result<(), IoError> {
    writeln!(writer, "{RESULTS_HEADER}")?;
    for r in rows {
        writeln!(
            writer,
            "{},{},{:.6},{:.6},{:.6},{}",
            r.algorithm, r.length, r.coding_acc, r.noncoding_acc, r.overall_acc, r.seed
        )?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_results(reader: impl BufRead) -> Result<Vec<ResultRow>, IoError> {
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == RESULTS_HEADER) {
            continue;
        }
        let bad = |reason: String| IoError::MalformedResults { line: i + 1, reason };
        let f: Vec<&str> = line.split(',').collect();
        let [algorithm, length, coding, noncoding, overall, seed] = f[..] else {
            return Err(bad(format!("expected 6 fields, found {}", f.len())));
        };
        let acc = |s: &str| s.parse::<f64>().map_err(|_| bad(format!("bad accuracy {s:?}")));
        rows.push(ResultRow {
            algorithm: algorithm.to_string(),
            length: length.parse().map_err(|_| bad(format!("bad length {length:?}")))?,
            coding_acc: acc(coding)?,
            noncoding_acc: acc(noncoding)?,
            overall_acc: acc(overall)?,
            seed: seed.parse().map_err(|_| bad(format!("bad seed {seed:?}")))?,
        });
    }
    Ok(rows)
}

/// Plot-ready summary: one row per (length, algorithm) with accuracies in
/// percent, averaged over seeds. Lengths ascend; algorithms keep their order
/// of first appearance.
pub fn plot_csv(rows: &[ResultRow]) -> String {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<(usize, usize), Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        let a = match order.iter().position(|&a| a == r.algorithm) {
            Some(a) => a,
            None => {
                order.push(&r.algorithm);
                order.len() - 1
            }
        };
        groups.entry((r.length, a)).or_default().push(r);
    }
    let mut out = String::from("length,algorithm,coding_pct,noncoding_pct,overall_pct,runs\n");
    for ((length, a), g) in groups {
        let mean = |f: fn(&ResultRow) -> f64| 100.0 * g.iter().map(|r| f(r)).sum::<f64>() / g.len() as f64;
        out.push_str(&format!(
            "{length},{},{:.2},{:.2},{:.2},{}\n",
            order[a],
            mean(|r| r.coding_acc),
            mean(|r| r.noncoding_acc),
            mean(|r| r.overall_acc),
            g.len()
        ));
    }
    out
}
