//! Splitting a document into denoised text (the hardest-to-read sentences)
//! and noise text.
//!
//! For a document of `n` sentences and threshold `t`, the `ceil(t * n)`
//! sentences with the highest difficulty key are denoised. Ties at the
//! selection boundary go to the earlier sentence. Both halves of a
//! [`Partition`] are kept in document order.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::output::write_atomic;
use crate::readability::{difficulty_key, sentence_vectors, IndexKind, ReadabilityVector};
use crate::relminer::{ConceptMatcher, ConceptPair};
use crate::textseg::Document;

/// Fraction of sentences to extract, in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub const DEFAULT: Threshold = Threshold(0.30);
    pub const FULL: Threshold = Threshold(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 && value <= 1.0 {
            Ok(Threshold(value))
        } else {
            Err(Error::InvalidThreshold(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `ceil(t * n)`, at least 1 and at most `n` for a non-empty document.
    pub fn select_count(self, n: usize) -> usize {
        if n == 0 {
            return 0;
        }
        let exact = self.0 * n as f64;
        // 0.3 * 10 evaluates to 3.0000000000000004; snap products that are
        // integral up to rounding before taking the ceiling.
        let nearest = exact.round();
        let k = if (exact - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            exact.ceil()
        };
        (k as usize).clamp(1, n)
    }
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::DEFAULT
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.0)
    }
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("invalid threshold {s:?}: not a number")))?;
        Threshold::new(value)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum SelectionRounding {
    #[default]
    Ceil,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenoiseConfig {
    pub kind: IndexKind,
    pub threshold: Threshold,
    pub rounding: SelectionRounding,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig {
            kind: IndexKind::Fi,
            threshold: Threshold::DEFAULT,
            rounding: SelectionRounding::Ceil,
        }
    }
}

impl DenoiseConfig {
    pub fn new(kind: IndexKind, threshold: Threshold) -> Self {
        DenoiseConfig {
            kind,
            threshold,
            rounding: SelectionRounding::Ceil,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Denoised,
    Noise,
}

impl Part {
    pub fn name(self) -> &'static str {
        match self {
            Part::Denoised => "denoised",
            Part::Noise => "noise",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub doc_id: String,
    pub denoised: Vec<usize>,
    pub noise: Vec<usize>,
    pub config: DenoiseConfig,
}

impl Partition {
    pub fn len(&self) -> usize {
        self.denoised.len() + self.noise.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn part_of(&self, sentence_index: usize) -> Option<Part> {
        if self.denoised.binary_search(&sentence_index).is_ok() {
            Some(Part::Denoised)
        } else if self.noise.binary_search(&sentence_index).is_ok() {
            Some(Part::Noise)
        } else {
            None
        }
    }

    /// `(sentence_index, part)` for every sentence, in document order.
    pub fn records(&self) -> Vec<(usize, Part)> {
        let mut all: Vec<(usize, Part)> = self
            .denoised
            .iter()
            .map(|&i| (i, Part::Denoised))
            .chain(self.noise.iter().map(|&i| (i, Part::Noise)))
            .collect();
        all.sort_unstable_by_key(|&(i, _)| i);
        all
    }
}

/// Sentence indices from hardest to easiest; equal keys keep document order.
pub fn difficulty_order(scores: &[ReadabilityVector], kind: IndexKind) -> Vec<usize> {
    let keys: Vec<f64> = scores
        .iter()
        .map(|v| difficulty_key(v.get(kind), kind))
        .collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    order
}

fn partition_from_order(doc: &Document, order: &[usize], config: DenoiseConfig) -> Partition {
    let k = config.threshold.select_count(order.len());
    let mut denoised = order[..k].to_vec();
    let mut noise = order[k..].to_vec();
    denoised.sort_unstable();
    noise.sort_unstable();
    Partition {
        doc_id: doc.id.clone(),
        denoised,
        noise,
        config,
    }
}

fn check_alignment(doc: &Document, scores: &[ReadabilityVector]) -> Result<()> {
    if doc.is_empty() {
        return Err(Error::validation(format!(
            "document {:?} has no sentences",
            doc.id
        )));
    }
    if scores.len() != doc.len() {
        return Err(Error::Alignment {
            expected: doc.len(),
            found: scores.len(),
        });
    }
    Ok(())
}

pub fn denoise(
    doc: &Document,
    scores: &[ReadabilityVector],
    config: DenoiseConfig,
) -> Result<Partition> {
    check_alignment(doc, scores)?;
    let order = difficulty_order(scores, config.kind);
    Ok(partition_from_order(doc, &order, config))
}

/// One partition per threshold. Partitions share a single difficulty
/// ordering, so a sentence denoised at `t` is denoised at every `t' > t`.
pub fn sweep(
    doc: &Document,
    kind: IndexKind,
    thresholds: &[f64],
) -> Result<Vec<(Threshold, Partition)>> {
    let thresholds: Vec<Threshold> = thresholds
        .iter()
        .map(|&t| Threshold::new(t))
        .collect::<Result<_>>()?;
    let scores = sentence_vectors(doc)?;
    check_alignment(doc, &scores)?;
    let order = difficulty_order(&scores, kind);
    Ok(thresholds
        .into_iter()
        .map(|t| (t, partition_from_order(doc, &order, DenoiseConfig::new(kind, t))))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub threshold: Threshold,
    pub pair: ConceptPair,
    pub frequency: usize,
}

/// Co-occurrence frequency of each pair inside the denoised text, per threshold.
pub fn stability_report(
    doc: &Document,
    kind: IndexKind,
    pairs: &[ConceptPair],
    thresholds: &[f64],
) -> Result<Vec<StabilityRow>> {
    if pairs.is_empty() {
        return Err(Error::validation("stability report needs at least one concept pair"));
    }
    let partitions = sweep(doc, kind, thresholds)?;
    let matchers: Vec<(ConceptMatcher, ConceptMatcher)> = pairs
        .iter()
        .map(|p| (ConceptMatcher::new(p.a()), ConceptMatcher::new(p.b())))
        .collect();
    let mut rows = Vec::with_capacity(partitions.len() * pairs.len());
    for (threshold, partition) in &partitions {
        for (pair, (ma, mb)) in pairs.iter().zip(&matchers) {
            let frequency = partition
                .denoised
                .iter()
                .filter(|&&i| {
                    let s = &doc.sentences[i];
                    ma.matches(s) && mb.matches(s)
                })
                .count();
            rows.push(StabilityRow {
                threshold: *threshold,
                pair: pair.clone(),
                frequency,
            });
        }
    }
    Ok(rows)
}

pub const PARTITION_HEADER: &str = "doc_id\tsentence_index\tpart";

pub fn write_partition<W: Write + ?Sized>(out: &mut W, partition: &Partition) -> std::io::Result<()> {
    for (index, part) in partition.records() {
        writeln!(out, "{}\t{}\t{}", partition.doc_id, index, part.name())?;
    }
    Ok(())
}

/// Denoised sentences of `doc`, one per line, in document order.
pub fn denoised_text(doc: &Document, partition: &Partition) -> String {
    let mut text = String::new();
    for &i in &partition.denoised {
        text.push_str(&doc.sentences[i].text);
        text.push('\n');
    }
    text
}

/// Writes `<doc_id>.denoised.txt` for every document into `out_dir`.
/// Documents without sentences produce an empty file.
pub fn export_denoised_corpus(
    docs: &[Document],
    config: DenoiseConfig,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::with_capacity(docs.len());
    for doc in docs {
        let text = if doc.is_empty() {
            String::new()
        } else {
            let scores = sentence_vectors(doc)?;
            denoised_text(doc, &denoise(doc, &scores, config)?)
        };
        let path = out_dir.join(format!("{}.denoised.txt", doc.id));
        write_atomic(&path, |w| w.write_all(text.as_bytes()))?;
        written.push(path);
    }
    Ok(written)
}
