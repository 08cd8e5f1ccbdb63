//! DNA sequences, codons, benchmark windowing and window encodings.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

use crate::baselines::CodonTable;
use crate::ca::FuzzyConfiguration;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("invalid base {symbol:?} at position {position}")]
    InvalidBase { symbol: char, position: usize },
    #[error("ambiguous base N at position {position}")]
    AmbiguousBase { position: usize },
    #[error("length {len} is not a multiple of {multiple}")]
    BadLength { len: usize, multiple: usize },
    #[error("bad interval: {0}")]
    BadInterval(String),
    #[error("window length must be positive")]
    ZeroLength,
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Noncoding = 0,
    Coding = 1,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Noncoding, Label::Coding];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        match i {
            0 => Some(Label::Noncoding),
            1 => Some(Label::Coding),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Noncoding => "noncoding",
            Label::Coding => "coding",
        })
    }
}

impl FromStr for Label {
    type Err = SequenceError;
    fn from_str(s: &str) -> Result<Self, SequenceError> {
        match s {
            "coding" => Ok(Label::Coding),
            "noncoding" => Ok(Label::Noncoding),
            other => Err(SequenceError::UnknownLabel(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strand {
    Forward,
    Reverse,
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strand::Forward => "+",
            Strand::Reverse => "-",
        })
    }
}

impl FromStr for Strand {
    type Err = SequenceError;
    fn from_str(s: &str) -> Result<Self, SequenceError> {
        match s {
            "+" => Ok(Strand::Forward),
            "-" => Ok(Strand::Reverse),
            other => Err(SequenceError::UnknownLabel(other.to_string())),
        }
    }
}

/// A named sequence over `A, C, G, T, N`, stored upper-case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaSequence {
    pub id: String,
    bases: String,
}

impl DnaSequence {
    pub fn new(id: impl Into<String>, bases: &str) -> Result<Self, SequenceError> {
        let bases = bases.to_ascii_uppercase();
        for (position, symbol) in bases.chars().enumerate() {
            if !matches!(symbol, 'A' | 'C' | 'G' | 'T' | 'N') {
                return Err(SequenceError::InvalidBase { symbol, position });
            }
        }
        Ok(DnaSequence { id: id.into(), bases })
    }

    pub fn bases(&self) -> &str {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn reverse_complement(&self) -> DnaSequence {
        DnaSequence { id: self.id.clone(), bases: reverse_complement(&self.bases) }
    }

    pub fn codons(&self) -> Result<Vec<Codon>, SequenceError> {
        split_codons(&self.bases)
    }
}

/// Watson-Crick complement then reversal. `N` maps to `N`; the input is
/// expected to be upper-case.
pub fn reverse_complement(bases: &str) -> String {
    bases
        .bytes()
        .rev()
        .map(|b| match b {
            b'A' => 'T',
            b'T' => 'A',
            b'C' => 'G',
            b'G' => 'C',
            other => other as char,
        })
        .collect()
}

pub(crate) fn base_index(symbol: u8, position: usize) -> Result<usize, SequenceError> {
    match symbol {
        b'A' => Ok(0),
        b'C' => Ok(1),
        b'G' => Ok(2),
        b'T' => Ok(3),
        b'N' => Err(SequenceError::AmbiguousBase { position }),
        other => Err(SequenceError::InvalidBase { symbol: other as char, position }),
    }
}

const BASES: [char; 4] = ['A', 'C', 'G', 'T'];

/// A nucleotide triplet, indexed `16 * b1 + 4 * b2 + b3` with `A < C < G < T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codon(u8);

impl Codon {
    pub fn from_index(index: usize) -> Option<Codon> {
        (index < 64).then_some(Codon(index as u8))
    }

    pub fn parse(triplet: &str) -> Result<Codon, SequenceError> {
        let bytes = triplet.as_bytes();
        if bytes.len() != 3 {
            return Err(SequenceError::BadLength { len: bytes.len(), multiple: 3 });
        }
        Codon::from_bytes(&bytes.to_ascii_uppercase(), 0)
    }

    fn from_bytes(bytes: &[u8], offset: usize) -> Result<Codon, SequenceError> {
        let mut index = 0;
        for (k, &b) in bytes.iter().enumerate() {
            index = index * 4 + base_index(b, offset + k)?;
        }
        Ok(Codon(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Codon> {
        (0..64u8).map(Codon)
    }
}

impl fmt::Display for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index();
        write!(f, "{}{}{}", BASES[i >> 4], BASES[(i >> 2) & 3], BASES[i & 3])
    }
}

/// Consecutive non-overlapping triplets in frame 0.
pub fn split_codons(bases: &str) -> Result<Vec<Codon>, SequenceError> {
    let bytes = bases.as_bytes();
    if !bytes.len().is_multiple_of(3) {
        return Err(SequenceError::BadLength { len: bytes.len(), multiple: 3 });
    }
    bytes
        .chunks_exact(3)
        .enumerate()
        .map(|(k, c)| Codon::from_bytes(c, 3 * k))
        .collect()
}

/// Base-6 alphabet index of consecutive frame-0 hexamers (`0..4096`).
pub(crate) fn split_hexamers(bases: &str) -> Result<Vec<usize>, SequenceError> {
    let bytes = bases.as_bytes();
    if !bytes.len().is_multiple_of(6) {
        return Err(SequenceError::BadLength { len: bytes.len(), multiple: 6 });
    }
    bytes
        .chunks_exact(6)
        .enumerate()
        .map(|(k, h)| {
            h.iter()
                .enumerate()
                .try_fold(0usize, |acc, (j, &b)| Ok(acc * 4 + base_index(b, 6 * k + j)?))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Origin {
    pub seq_id: String,
    /// 1-based start of the window on the forward strand.
    pub offset: usize,
    pub strand: Strand,
}

/// A fixed-length, N-free window with its class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledWindow {
    pub bases: String,
    pub label: Label,
    pub origin: Origin,
}

impl LabeledWindow {
    pub fn new(bases: &str, label: Label, origin: Origin) -> Result<Self, SequenceError> {
        let bases = bases.to_ascii_uppercase();
        for (position, b) in bases.bytes().enumerate() {
            base_index(b, position)?;
        }
        Ok(LabeledWindow { bases, label, origin })
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn reverse_complement(&self) -> LabeledWindow {
        LabeledWindow {
            bases: reverse_complement(&self.bases),
            label: self.label,
            origin: Origin { strand: Strand::Reverse, ..self.origin.clone() },
        }
    }
}

/// How a window becomes an initial CA configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", content = "table", rename_all = "snake_case")]
pub enum EncodingScheme {
    /// One cell per base: `A = 0, C = 1/3, G = 2/3, T = 1`.
    BaseQuartile,
    /// One cell per codon: frequency in the table divided by the table maximum.
    CodonFreq(CodonTable),
}

impl EncodingScheme {
    pub fn name(&self) -> &'static str {
        match self {
            EncodingScheme::BaseQuartile => "base",
            EncodingScheme::CodonFreq(_) => "codon",
        }
    }

    pub fn cells_for(&self, window_len: usize) -> Result<usize, SequenceError> {
        match self {
            EncodingScheme::BaseQuartile => Ok(window_len),
            EncodingScheme::CodonFreq(_) if window_len.is_multiple_of(3) => Ok(window_len / 3),
            EncodingScheme::CodonFreq(_) => Err(SequenceError::BadLength { len: window_len, multiple: 3 }),
        }
    }

    /// Smallest nonzero cell value the scheme can produce.
    pub fn resolution(&self) -> f64 {
        match self {
            EncodingScheme::BaseQuartile => 1.0 / 3.0,
            EncodingScheme::CodonFreq(table) => table.min() / table.max(),
        }
    }
}

pub fn encode(window: &LabeledWindow, scheme: &EncodingScheme) -> Result<FuzzyConfiguration, SequenceError> {
    encode_bases(&window.bases, scheme)
}

/// Encoding applies to raw upper-case bases; used for unlabeled input too.
pub fn encode_bases(bases: &str, scheme: &EncodingScheme) -> Result<FuzzyConfiguration, SequenceError> {
    let cells = match scheme {
        EncodingScheme::BaseQuartile => bases
            .bytes()
            .enumerate()
            .map(|(i, b)| base_index(b, i).map(|k| k as f64 / 3.0))
            .collect::<Result<Vec<_>, _>>()?,
        EncodingScheme::CodonFreq(table) => {
            let max = table.max();
            split_codons(bases)?.into_iter().map(|c| table.get(c) / max).collect()
        }
    };
    Ok(FuzzyConfiguration::new(cells).expect("encodings stay in [0, 1]"))
}

/// Tile `seq` into non-overlapping windows of length `len`, labelling each as
/// coding (inside one CDS interval) or noncoding (outside all of them).
///
/// Intervals are 1-based inclusive. Windows that straddle a boundary or
/// contain `N`, and the trailing fragment, are dropped. With `add_revcomp`
/// the reverse complement of every kept window follows the forward windows.
pub fn extract_windows(
    seq: &DnaSequence,
    len: usize,
    cds_intervals: &[(usize, usize)],
    add_revcomp: bool,
) -> Result<Vec<LabeledWindow>, SequenceError> {
    if len == 0 {
        return Err(SequenceError::ZeroLength);
    }
    let mut intervals = cds_intervals.to_vec();
    intervals.sort_unstable();
    for &(start, end) in &intervals {
        if start == 0 || start > end || end > seq.len() {
            return Err(SequenceError::BadInterval(format!(
                "[{start}, {end}] is not within 1..={} of {}",
                seq.len(),
                seq.id
            )));
        }
    }
    for pair in intervals.windows(2) {
        if pair[1].0 <= pair[0].1 {
            return Err(SequenceError::BadInterval(format!(
                "[{}, {}] overlaps [{}, {}]",
                pair[0].0, pair[0].1, pair[1].0, pair[1].1
            )));
        }
    }

    let mut out = Vec::new();
    let mut start = 1;
    while start + len - 1 <= seq.len() {
        let end = start + len - 1;
        let bases = &seq.bases[start - 1..end];
        let inside = intervals.iter().any(|&(s, e)| s <= start && end <= e);
        let overlaps = intervals.iter().any(|&(s, e)| s <= end && start <= e);
        let label = if inside {
            Some(Label::Coding)
        } else if !overlaps {
            Some(Label::Noncoding)
        } else {
            None
        };
        if let (Some(label), false) = (label, bases.contains('N')) {
            let origin = Origin { seq_id: seq.id.clone(), offset: start, strand: Strand::Forward };
            out.push(LabeledWindow { bases: bases.to_string(), label, origin });
        }
        start += len;
    }
    if add_revcomp {
        let reversed: Vec<_> = out.iter().map(LabeledWindow::reverse_complement).collect();
        out.extend(reversed);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(b: &str) -> DnaSequence {
        DnaSequence::new("s", b).unwrap()
    }

    #[test]
    fn reverse_complement_examples() {
        assert_eq!(reverse_complement("AGGACC"), "GGTCCT");
        assert_eq!(reverse_complement("ACGT"), "ACGT");
        assert_eq!(reverse_complement("ANT"), "ANT");
        assert_eq!(seq("acgg").reverse_complement().bases(), "CCGT");
    }

    #[test]
    fn validation() {
        assert_eq!(
            DnaSequence::new("x", "ACXG"),
            Err(SequenceError::InvalidBase { symbol: 'X', position: 2 })
        );
        assert_eq!(seq("acgtn").bases(), "ACGTN");
    }

    #[test]
    fn codon_splitting() {
        let c = split_codons("AGGACC").unwrap();
        assert_eq!(c.iter().map(|c| c.to_string()).collect::<Vec<_>>(), vec!["AGG", "ACC"]);
        assert_eq!(split_codons("AGGAC"), Err(SequenceError::BadLength { len: 5, multiple: 3 }));
        assert!(split_codons("").unwrap().is_empty());
        assert_eq!(split_codons("AGGANC"), Err(SequenceError::AmbiguousBase { position: 4 }));
        assert_eq!(Codon::parse("TTT").unwrap().index(), 63);
        assert_eq!(Codon::parse("aaa").unwrap().index(), 0);
    }

    #[test]
    fn base_quartile_encoding() {
        let p = encode_bases("ACGT", &EncodingScheme::BaseQuartile).unwrap();
        assert_eq!(p.cells(), &[0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0]);
        let zeros = encode_bases(&"A".repeat(54), &EncodingScheme::BaseQuartile).unwrap();
        assert!(zeros.cells().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn codon_frequency_encoding() {
        // AGG is the most frequent codon at 0.22, ACC sits at 0.11.
        let mut freq = [0.0; 64];
        let agg = Codon::parse("AGG").unwrap().index();
        let acc = Codon::parse("ACC").unwrap().index();
        let rest = (1.0 - 0.22 - 0.11) / 62.0;
        for (i, f) in freq.iter_mut().enumerate() {
            *f = if i == agg {
                0.22
            } else if i == acc {
                0.11
            } else {
                rest
            };
        }
        let scheme = EncodingScheme::CodonFreq(CodonTable::new(freq).unwrap());
        let p = encode_bases("AGGACC", &scheme).unwrap();
        assert_eq!(p.cells()[0], 1.0);
        assert!((p.cells()[1] - 0.5).abs() < 1e-15);
        assert_eq!(
            encode_bases("AGGAC", &scheme),
            Err(SequenceError::BadLength { len: 5, multiple: 3 })
        );
    }

    #[test]
    fn windowing_protocol() {
        let w = extract_windows(&seq("ACGTACGTAC"), 3, &[], false).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.iter().map(|w| w.origin.offset).collect::<Vec<_>>(), vec![1, 4, 7]);
        assert!(w.iter().all(|w| w.label == Label::Noncoding));

        let w = extract_windows(&seq("ACGTAC"), 3, &[(1, 3)], false).unwrap();
        assert_eq!(w.iter().map(|w| w.label).collect::<Vec<_>>(), vec![Label::Coding, Label::Noncoding]);

        assert!(extract_windows(&seq("ACGTAC"), 4, &[(1, 3)], false).unwrap().is_empty());
    }

    #[test]
    fn windowing_drops_ambiguous_and_adds_revcomp() {
        let w = extract_windows(&seq("ACGNACAAG"), 3, &[(7, 9)], true).unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w[0].bases, "ACG");
        assert_eq!(w[1].label, Label::Coding);
        assert_eq!(w[2].bases, "CGT");
        assert_eq!(w[2].origin.strand, Strand::Reverse);
        assert_eq!(w[3].bases, "CTT");
        assert_eq!(w[3].label, Label::Coding);
    }

    #[test]
    fn windowing_rejects_bad_intervals() {
        let s = seq("ACGTAC");
        assert!(matches!(extract_windows(&s, 3, &[(0, 2)], false), Err(SequenceError::BadInterval(_))));
        assert!(matches!(extract_windows(&s, 3, &[(2, 7)], false), Err(SequenceError::BadInterval(_))));
        assert!(matches!(extract_windows(&s, 3, &[(4, 3)], false), Err(SequenceError::BadInterval(_))));
        assert!(matches!(extract_windows(&s, 3, &[(1, 3), (3, 5)], false), Err(SequenceError::BadInterval(_))));
        assert_eq!(extract_windows(&s, 0, &[], false), Err(SequenceError::ZeroLength));
    }

    fn dna(max: usize) -> impl Strategy<Value = String> {
        prop::collection::vec(prop::sample::select(vec!['A', 'C', 'G', 'T']), 0..max)
            .prop_map(|v| v.into_iter().collect())
    }

    proptest! {
        #[test]
        fn revcomp_is_involution(s in dna(200)) {
            prop_assert_eq!(reverse_complement(&reverse_complement(&s)), s);
        }

        #[test]
        fn codons_concatenate_back(s in dna(90)) {
            let s = &s[..s.len() / 3 * 3];
            let joined: String = split_codons(s).unwrap().iter().map(|c| c.to_string()).collect();
            prop_assert_eq!(joined, s);
        }

        #[test]
        fn base_encoding_is_injective(a in dna(30), b in dna(30)) {
            let ea = encode_bases(&a, &EncodingScheme::BaseQuartile).unwrap();
            let eb = encode_bases(&b, &EncodingScheme::BaseQuartile).unwrap();
            prop_assert_eq!(a == b, ea == eb);
        }

        #[test]
        fn windows_are_disjoint_and_strand_balanced(s in dna(300), len in 1usize..20, cut in 0usize..300) {
            let sq = seq(&s);
            let intervals = if sq.len() > 2 { vec![(1, 1 + cut % (sq.len() - 1))] } else { vec![] };
            let w = extract_windows(&sq, len, &intervals, true).unwrap();
            prop_assert!(w.iter().all(|w| w.len() == len));
            let (fwd, rev): (Vec<_>, Vec<_>) = w.iter().partition(|w| w.origin.strand == Strand::Forward);
            prop_assert_eq!(fwd.len(), rev.len());
            for (f, r) in fwd.iter().zip(&rev) {
                prop_assert_eq!(f.label, r.label);
            }
            for pair in fwd.windows(2) {
                prop_assert!(pair[0].origin.offset + len <= pair[1].origin.offset);
            }
        }
    }
}
