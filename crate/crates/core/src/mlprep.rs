//! Sentence feature vectors and SMOTE oversampling for relation-bearing
//! sentence classification.
//!
//! The base schema has 16 features (see [`BASE_FEATURES`]). When a
//! semantic-word lexicon is supplied a 17th column, `semantic_word_count`,
//! is appended; [`Lexicons::schema`] reports the schema in force.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::readability::{ReadabilityVector, IndexKind};
use crate::relminer::{normalize_concept, ConceptMatcher};
use crate::textseg::Document;

pub const BASE_FEATURES: [&str; 16] = [
    "fi",
    "fres",
    "smog",
    "forcast",
    "fkri",
    "word_count",
    "syllables_per_word",
    "complex_word_count",
    "monosyllable_count",
    "mean_token_tf",
    "mean_isf",
    "stopword_ratio",
    "acronym_count",
    "entity_gazetteer_count",
    "verb_gazetteer_count",
    "relative_position",
];

pub const SEMANTIC_FEATURE: &str = "semantic_word_count";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    Positive,
    Negative,
}

impl Label {
    pub fn parse(s: &str) -> Option<Label> {
        match s.trim().to_ascii_lowercase().as_str() {
            "positive" | "pos" | "1" | "+" | "yes" | "true" => Some(Label::Positive),
            "negative" | "neg" | "0" | "-" | "no" | "false" => Some(Label::Negative),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub doc_id: String,
    pub sentence_index: usize,
    pub values: Vec<f64>,
    pub label: Option<Label>,
}

/// Term lists used by feature extraction. Stopwords are required.
#[derive(Debug, Clone, Default)]
pub struct Lexicons {
    pub stopwords: Option<HashSet<String>>,
    pub entities: Vec<String>,
    pub verbs: Vec<String>,
    pub semantic: Option<Vec<String>>,
}

impl Lexicons {
    pub fn with_stopwords<S: AsRef<str>>(stopwords: &[S]) -> Self {
        Lexicons {
            stopwords: Some(stopwords.iter().map(|s| normalize_concept(s.as_ref())).collect()),
            ..Default::default()
        }
    }

    pub fn schema(&self) -> Vec<String> {
        let mut names: Vec<String> = BASE_FEATURES.iter().map(|s| s.to_string()).collect();
        if self.semantic.is_some() {
            names.push(SEMANTIC_FEATURE.to_string());
        }
        names
    }
}

/// Reads a one-term-per-line lexicon; blank lines and `#` comments skipped.
pub fn load_terms(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(normalize_concept)
        .filter(|t| !t.is_empty())
        .collect())
}

fn is_acronym(stripped: &str) -> bool {
    let mut letters = 0;
    for c in stripped.chars().filter(|c| c.is_alphabetic()) {
        if !c.is_uppercase() {
            return false;
        }
        letters += 1;
    }
    letters >= 2
}

fn gazetteer_count(matchers: &[ConceptMatcher], words: &[&str]) -> usize {
    matchers.iter().map(|m| m.count_in(words)).sum()
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// One vector per sentence of `doc`, unlabeled.
pub fn extract_features(
    doc: &Document,
    scores: &[ReadabilityVector],
    lexicons: &Lexicons,
) -> Result<Vec<FeatureVector>> {
    let stopwords = lexicons
        .stopwords
        .as_ref()
        .ok_or_else(|| Error::Config("a stopword lexicon is required for feature extraction".into()))?;
    if scores.len() != doc.len() {
        return Err(Error::Alignment {
            expected: doc.len(),
            found: scores.len(),
        });
    }
    let matchers = |terms: &[String]| terms.iter().map(|t| ConceptMatcher::new(t)).collect::<Vec<_>>();
    let entities = matchers(&lexicons.entities);
    let verbs = matchers(&lexicons.verbs);
    let semantic = lexicons.semantic.as_deref().map(matchers);

    let words: Vec<Vec<&str>> = doc.sentences.iter().map(|s| s.words().collect()).collect();
    let total_words: usize = words.iter().map(Vec::len).sum();
    let mut term_count: HashMap<&str, usize> = HashMap::new();
    let mut sentence_freq: HashMap<&str, usize> = HashMap::new();
    for sentence_words in &words {
        for &w in sentence_words {
            *term_count.entry(w).or_default() += 1;
        }
        for w in sentence_words.iter().copied().collect::<BTreeSet<_>>() {
            *sentence_freq.entry(w).or_default() += 1;
        }
    }
    let n = doc.len();

    let mut out = Vec::with_capacity(n);
    for ((sentence, sentence_words), readability) in doc.sentences.iter().zip(&words).zip(scores) {
        let content: Vec<&str> = sentence_words
            .iter()
            .copied()
            .filter(|w| !stopwords.contains(*w))
            .collect();
        let wc = sentence.word_count as f64;
        let stop = (sentence_words.len() - content.len()) as f64;
        let mut values = Vec::with_capacity(BASE_FEATURES.len() + 1);
        values.extend(IndexKind::ALL.iter().map(|&k| readability.get(k)));
        values.extend([
            wc,
            if wc > 0.0 { sentence.syllable_count as f64 / wc } else { 0.0 },
            sentence.complex_word_count as f64,
            sentence.monosyllable_count as f64,
            mean(content.iter().map(|w| term_count[w] as f64 / total_words as f64)),
            mean(content.iter().map(|w| (n as f64 / sentence_freq[w] as f64).ln())),
            if wc > 0.0 { stop / wc } else { 0.0 },
            sentence.tokens.iter().filter(|t| is_acronym(t.stripped())).count() as f64,
            gazetteer_count(&entities, sentence_words) as f64,
            gazetteer_count(&verbs, sentence_words) as f64,
            if n > 1 { sentence.index as f64 / (n - 1) as f64 } else { 0.0 },
        ]);
        if let Some(semantic) = &semantic {
            values.push(gazetteer_count(semantic, sentence_words) as f64);
        }
        out.push(FeatureVector {
            doc_id: doc.id.clone(),
            sentence_index: sentence.index,
            values,
            label: None,
        });
    }
    Ok(out)
}

pub type LabelMap = HashMap<(String, usize), Label>;

/// Parses `doc_id<TAB>sentence_index<TAB>label` records. A leading header
/// line starting with `doc_id` is skipped.
pub fn parse_labels(text: &str) -> Result<LabelMap, (usize, String)> {
    let mut labels = LabelMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("doc_id")) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let [doc_id, index, label] = cols[..] else {
            return Err((i + 1, "expected doc_id<TAB>sentence_index<TAB>label".into()));
        };
        let index: usize = index
            .trim()
            .parse()
            .map_err(|e| (i + 1, format!("bad sentence index: {e}")))?;
        let label = Label::parse(label).ok_or_else(|| (i + 1, format!("unknown label {label:?}")))?;
        labels.insert((doc_id.trim().to_string(), index), label);
    }
    Ok(labels)
}

pub fn load_labels(path: &Path) -> Result<LabelMap> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_labels(&text).map_err(|(line, message)| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    })
}

pub fn apply_labels(vectors: &mut [FeatureVector], labels: &LabelMap) {
    for v in vectors {
        v.label = labels.get(&(v.doc_id.clone(), v.sentence_index)).copied();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmoteConfig {
    /// Nearest minority neighbours considered per sample.
    pub k: usize,
    /// Synthetic samples generated per minority sample.
    pub multiplier: usize,
    pub seed: u64,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        SmoteConfig {
            k: 5,
            multiplier: 1,
            seed: 0,
        }
    }
}

/// A synthetic point together with how it was made:
/// `vector = minority[origin] + gap * (minority[neighbor] - minority[origin])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub vector: FeatureVector,
    pub origin: usize,
    pub neighbor: usize,
    pub gap: f64,
}

fn validate_minority(minority: &[FeatureVector], config: &SmoteConfig) -> Result<usize> {
    let n = minority.len();
    if n < 2 {
        return Err(Error::validation(format!(
            "SMOTE needs at least 2 minority samples, got {n}"
        )));
    }
    if config.k < 1 || config.k > n - 1 {
        return Err(Error::validation(format!(
            "SMOTE k = {} outside 1..={} for {n} minority samples",
            config.k,
            n - 1
        )));
    }
    if config.multiplier < 1 {
        return Err(Error::validation("SMOTE multiplier must be at least 1"));
    }
    let dim = minority[0].values.len();
    for v in minority {
        if v.values.len() != dim {
            return Err(Error::validation(format!(
                "feature length mismatch: {} vs {dim}",
                v.values.len()
            )));
        }
        if v.values.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("feature values must be finite"));
        }
    }
    Ok(dim)
}

/// Z-scores using minority statistics; constant columns keep unit scale.
fn standardize(minority: &[FeatureVector], dim: usize) -> Vec<Vec<f64>> {
    let n = minority.len() as f64;
    let mut mean = vec![0.0; dim];
    for v in minority {
        for (m, x) in mean.iter_mut().zip(&v.values) {
            *m += x / n;
        }
    }
    let mut sd = vec![0.0; dim];
    for v in minority {
        for ((s, x), m) in sd.iter_mut().zip(&v.values).zip(&mean) {
            *s += (x - m).powi(2) / n;
        }
    }
    let sd: Vec<f64> = sd
        .into_iter()
        .map(|v| if v > 0.0 { v.sqrt() } else { 1.0 })
        .collect();
    minority
        .iter()
        .map(|v| {
            v.values
                .iter()
                .zip(&mean)
                .zip(&sd)
                .map(|((x, m), s)| (x - m) / s)
                .collect()
        })
        .collect()
}

/// Indices of the `k` nearest other points under squared Euclidean distance;
/// equal distances resolve to the lower index.
fn nearest_neighbors(points: &[Vec<f64>], k: usize) -> Vec<Vec<usize>> {
    (0..points.len())
        .map(|i| {
            let mut dist: Vec<(f64, usize)> = (0..points.len())
                .filter(|&j| j != i)
                .map(|j| {
                    let d = points[i]
                        .iter()
                        .zip(&points[j])
                        .map(|(a, b)| (a - b).powi(2))
                        .sum::<f64>();
                    (d, j)
                })
                .collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            dist.into_iter().take(k).map(|(_, j)| j).collect()
        })
        .collect()
}

/// SMOTE with provenance. Each minority sample draws from its own RNG
/// stream derived from the seed, so output does not depend on processing
/// order.
pub fn smote_samples(minority: &[FeatureVector], config: &SmoteConfig) -> Result<Vec<SyntheticSample>> {
    let dim = validate_minority(minority, config)?;
    let neighbors = nearest_neighbors(&standardize(minority, dim), config.k);
    let mut out = Vec::with_capacity(minority.len() * config.multiplier);
    for (origin, x) in minority.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(origin as u64);
        for _ in 0..config.multiplier {
            let neighbor = neighbors[origin][rng.gen_range(0..config.k)];
            let gap: f64 = rng.gen();
            let nn = &minority[neighbor];
            let values = x
                .values
                .iter()
                .zip(&nn.values)
                .map(|(&a, &b)| {
                    // rounding may step an ulp past the segment end
                    (a + gap * (b - a)).clamp(a.min(b), a.max(b))
                })
                .collect();
            out.push(SyntheticSample {
                vector: FeatureVector {
                    doc_id: format!("smote:{}", x.doc_id),
                    sentence_index: x.sentence_index,
                    values,
                    label: Some(Label::Positive),
                },
                origin,
                neighbor,
                gap,
            });
        }
    }
    Ok(out)
}

/// Synthetic minority vectors, `|minority| * multiplier` of them, labeled positive.
pub fn smote(minority: &[FeatureVector], config: &SmoteConfig) -> Result<Vec<FeatureVector>> {
    Ok(smote_samples(minority, config)?
        .into_iter()
        .map(|s| s.vector)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub positive: usize,
    pub negative: usize,
    /// negative / positive; infinite when there are no positives.
    pub skew_ratio: f64,
}

pub fn balance_report(data: &[FeatureVector]) -> Result<BalanceReport> {
    let mut positive = 0;
    let mut negative = 0;
    for v in data {
        match v.label {
            Some(Label::Positive) => positive += 1,
            Some(Label::Negative) => negative += 1,
            None => {
                return Err(Error::validation(format!(
                    "unlabeled vector {}:{}",
                    v.doc_id, v.sentence_index
                )))
            }
        }
    }
    let skew_ratio = if positive == 0 {
        f64::INFINITY
    } else {
        negative as f64 / positive as f64
    };
    Ok(BalanceReport {
        positive,
        negative,
        skew_ratio,
    })
}

fn label_cell(label: Option<Label>) -> &'static str {
    match label {
        Some(Label::Positive) => "1",
        Some(Label::Negative) => "0",
        None => "?",
    }
}

/// Header naming the schema plus `label`, then one numeric row per vector.
pub fn write_features<W: Write + ?Sized>(
    out: &mut W,
    schema: &[String],
    vectors: &[FeatureVector],
) -> std::io::Result<()> {
    writeln!(out, "{},label", schema.join(","))?;
    for v in vectors {
        for x in &v.values {
            write!(out, "{x:.4},")?;
        }
        writeln!(out, "{}", label_cell(v.label))?;
    }
    Ok(())
}

/// Reads a file produced by [`write_features`]. Rows get `doc_id = "row"`
/// and their 0-based row number as `sentence_index`.
pub fn read_features(path: &Path) -> Result<(Vec<String>, Vec<FeatureVector>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header".into()))?;
    let mut schema: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    if schema.pop().as_deref() != Some("label") {
        return Err(parse_err(1, "last header column must be `label`".into()));
    }
    let mut vectors = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != schema.len() + 1 {
            return Err(parse_err(
                i + 2,
                format!("expected {} columns, found {}", schema.len() + 1, cells.len()),
            ));
        }
        let values = cells[..schema.len()]
            .iter()
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(i + 2, format!("bad number: {e}")))?;
        let last = cells[schema.len()].trim();
        let label = if last == "?" {
            None
        } else {
            Some(Label::parse(last).ok_or_else(|| parse_err(i + 2, format!("unknown label {last:?}")))?)
        };
        vectors.push(FeatureVector {
            doc_id: "row".into(),
            sentence_index: vectors.len(),
            values,
            label,
        });
    }
    Ok((schema, vectors))
}
