use std::io::BufRead;

use super::IoError;
use crate::sequences::DnaSequence;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub id: String,
    pub description: String,
    /// Upper-case, over `A, C, G, T, N`.
    pub bases: String,
}

impl FastaRecord {
    pub fn to_sequence(&self) -> DnaSequence {
        DnaSequence::new(self.id.clone(), &self.bases).expect("validated on read")
    }
}

/// Parse multi-record FASTA. Sequence lines are concatenated and upper-cased;
/// blank lines are ignored.
pub fn read_fasta(reader: impl BufRead) -> Result<Vec<FastaRecord>, IoError> {
    let mut records: Vec<FastaRecord> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        let lineno = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('>') {
            let header = header.trim();
            let (id, description) = match header.split_once(char::is_whitespace) {
                Some((id, rest)) => (id, rest.trim()),
                None => (header, ""),
            };
            if id.is_empty() {
                return Err(IoError::MalformedFasta { line: lineno, reason: "empty record id".into() });
            }
            records.push(FastaRecord { id: id.into(), description: description.into(), bases: String::new() });
        } else {
            let record = records.last_mut().ok_or_else(|| IoError::MalformedFasta {
                line: lineno,
                reason: "sequence data before the first header".into(),
            })?;
            let upper = line.to_ascii_uppercase();
            if let Some(bad) = upper.chars().find(|c| !matches!(c, 'A' | 'C' | 'G' | 'T' | 'N')) {
                return Err(IoError::MalformedFasta { line: lineno, reason: format!("invalid base {bad:?}") });
            }
            record.bases.push_str(&upper);
        }
    }
    Ok(records)
}
