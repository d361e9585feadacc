//! Concept-pair mining over denoised text.
//!
//! Concepts are matched as whole, case-insensitive token runs inside a
//! sentence's normalized words, so "ion" never matches inside "ischemia".
//! A pair's frequency is the number of denoised sentences that contain both
//! concepts. Re-ranking uses a per-pair contingency table:
//!
//! * TP: denoised sentences containing both concepts
//! * FP: denoised sentences containing exactly one of them
//! * FN: noise sentences containing both
//!
//! with `ppv = TP / (TP + FP)` and `sensitivity = TP / (TP + FN)`, and 0/0
//! taken as 0.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::io::Write;
use std::ops::AddAssign;
use std::path::Path;

use crate::denoiser::{Part, Partition};
use crate::error::{Error, Result};
use crate::textseg::{Document, Sentence};

/// Lowercases, strips punctuation from each token and joins with single spaces.
pub fn normalize_concept(concept: &str) -> String {
    concept
        .split_whitespace()
        .map(|t| t.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// An unordered pair of distinct, normalized concepts; stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConceptPair {
    a: String,
    b: String,
}

impl ConceptPair {
    pub fn new(a: &str, b: &str) -> Result<Self> {
        let (a, b) = (normalize_concept(a), normalize_concept(b));
        if a.is_empty() || b.is_empty() {
            return Err(Error::validation("concept pair member is empty"));
        }
        if a == b {
            return Err(Error::validation(format!("concept pair repeats {a:?}")));
        }
        Ok(if a < b {
            ConceptPair { a, b }
        } else {
            ConceptPair { a: b, b: a }
        })
    }

    pub fn a(&self) -> &str {
        &self.a
    }

    pub fn b(&self) -> &str {
        &self.b
    }
}

impl fmt::Display for ConceptPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Finds a concept's token run inside a sentence.
#[derive(Debug, Clone)]
pub struct ConceptMatcher {
    tokens: Vec<String>,
}

impl ConceptMatcher {
    pub fn new(concept: &str) -> Self {
        ConceptMatcher {
            tokens: normalize_concept(concept)
                .split(' ')
                .filter(|t| !t.is_empty())
                .map(str::to_string)
                .collect(),
        }
    }

    pub fn matches(&self, sentence: &Sentence) -> bool {
        let words: Vec<&str> = sentence.words().collect();
        self.matches_words(&words)
    }

    pub fn matches_words(&self, words: &[&str]) -> bool {
        self.count_in(words) > 0
    }

    /// Non-overlapping occurrences of the concept in `words`.
    pub fn count_in(&self, words: &[&str]) -> usize {
        let n = self.tokens.len();
        if n == 0 || words.len() < n {
            return 0;
        }
        let mut count = 0;
        let mut i = 0;
        while i + n <= words.len() {
            if self.tokens.iter().zip(&words[i..i + n]).all(|(t, w)| t == w) {
                count += 1;
                i += n;
            } else {
                i += 1;
            }
        }
        count
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairTally {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl PairTally {
    pub fn ppv(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn sensitivity(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }
}

impl AddAssign for PairTally {
    fn add_assign(&mut self, rhs: Self) {
        self.tp += rhs.tp;
        self.fp += rhs.fp;
        self.fn_ += rhs.fn_;
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedPair {
    pub pair: ConceptPair,
    pub frequency: usize,
    /// Only set once the pair has been re-ranked.
    pub ppv: Option<f64>,
    pub sensitivity: Option<f64>,
    pub rank: usize,
    pub gold_related: Option<bool>,
}

/// The concept list of a mining run, with all unordered pairs over it.
#[derive(Debug, Clone)]
pub struct ConceptMiner {
    concepts: Vec<String>,
    matchers: Vec<ConceptMatcher>,
}

impl ConceptMiner {
    /// Concepts are normalized and de-duplicated; at least one is required.
    pub fn new<S: AsRef<str>>(concepts: &[S]) -> Result<Self> {
        let unique: BTreeSet<String> = concepts
            .iter()
            .map(|c| normalize_concept(c.as_ref()))
            .filter(|c| !c.is_empty())
            .collect();
        if unique.is_empty() {
            return Err(Error::validation("concept list is empty"));
        }
        let concepts: Vec<String> = unique.into_iter().collect();
        let matchers = concepts.iter().map(|c| ConceptMatcher::new(c)).collect();
        Ok(ConceptMiner { concepts, matchers })
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn pairs(&self) -> Vec<ConceptPair> {
        let mut out = Vec::new();
        for i in 0..self.concepts.len() {
            for j in i + 1..self.concepts.len() {
                out.push(
                    ConceptPair::new(&self.concepts[i], &self.concepts[j])
                        .expect("concepts are distinct and non-empty"),
                );
            }
        }
        out
    }

    /// For each sentence, which concepts it contains.
    fn presence(&self, doc: &Document) -> Vec<Vec<bool>> {
        doc.sentences
            .iter()
            .map(|s| {
                let words: Vec<&str> = s.words().collect();
                self.matchers.iter().map(|m| m.matches_words(&words)).collect()
            })
            .collect()
    }

    /// Contingency tallies for every pair that occurs together anywhere in
    /// the document (pairs never seen together are omitted).
    pub fn tally(&self, doc: &Document, partition: &Partition) -> BTreeMap<ConceptPair, PairTally> {
        let presence = self.presence(doc);
        let parts: Vec<Option<Part>> = (0..doc.len()).map(|i| partition.part_of(i)).collect();
        let n = self.concepts.len();
        let mut out = BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut t = PairTally::default();
                for (row, part) in presence.iter().zip(&parts) {
                    match (row[i], row[j], part) {
                        (true, true, Some(Part::Denoised)) => t.tp += 1,
                        (true, true, Some(Part::Noise)) => t.fn_ += 1,
                        (true, false, Some(Part::Denoised)) | (false, true, Some(Part::Denoised)) => {
                            t.fp += 1
                        }
                        _ => {}
                    }
                }
                if t.tp + t.fn_ > 0 {
                    let pair = ConceptPair::new(&self.concepts[i], &self.concepts[j])
                        .expect("concepts are distinct and non-empty");
                    out.insert(pair, t);
                }
            }
        }
        out
    }
}

/// Number of denoised sentences containing both members of each pair.
pub fn cooccurrence_counts<S: AsRef<str>>(
    partition: &Partition,
    doc: &Document,
    concepts: &[S],
) -> Result<BTreeMap<ConceptPair, usize>> {
    let miner = ConceptMiner::new(concepts)?;
    Ok(miner
        .tally(doc, partition)
        .into_iter()
        .filter(|(_, t)| t.tp > 0)
        .map(|(p, t)| (p, t.tp))
        .collect())
}

/// Sentences (any part) in `doc` that contain both concepts of `pair`.
pub fn pair_frequency(doc: &Document, sentence_indices: &[usize], pair: &ConceptPair) -> usize {
    let (ma, mb) = (ConceptMatcher::new(pair.a()), ConceptMatcher::new(pair.b()));
    sentence_indices
        .iter()
        .filter(|&&i| {
            let words: Vec<&str> = doc.sentences[i].words().collect();
            ma.matches_words(&words) && mb.matches_words(&words)
        })
        .count()
}

/// Competition ranks over an already sorted list: equal neighbours share a
/// rank and the next distinct item skips ahead (1, 2, 2, 4).
fn assign_ranks<T>(items: &mut [T], same: impl Fn(&T, &T) -> bool, set: impl Fn(&mut T, usize)) {
    let mut rank = 0;
    for i in 0..items.len() {
        if i == 0 || !same(&items[i - 1], &items[i]) {
            rank = i + 1;
        }
        set(&mut items[i], rank);
    }
}

pub fn rank_by_frequency(counts: &BTreeMap<ConceptPair, usize>) -> Vec<RankedPair> {
    let mut ranked: Vec<RankedPair> = counts
        .iter()
        .map(|(pair, &frequency)| RankedPair {
            pair: pair.clone(),
            frequency,
            ppv: None,
            sensitivity: None,
            rank: 0,
            gold_related: None,
        })
        .collect();
    // stable sort keeps the map's lexicographic order among equal frequencies
    ranked.sort_by_key(|r| std::cmp::Reverse(r.frequency));
    assign_ranks(&mut ranked, |x, y| x.frequency == y.frequency, |r, k| r.rank = k);
    ranked
}

/// Ranks tallies by descending `(ppv, sensitivity)`; frequency is TP.
pub fn rank_tallies(tallies: &BTreeMap<ConceptPair, PairTally>) -> Vec<RankedPair> {
    let mut ranked: Vec<RankedPair> = tallies
        .iter()
        .map(|(pair, t)| RankedPair {
            pair: pair.clone(),
            frequency: t.tp,
            ppv: Some(t.ppv()),
            sensitivity: Some(t.sensitivity()),
            rank: 0,
            gold_related: None,
        })
        .collect();
    let key = |r: &RankedPair| (r.ppv.unwrap_or(0.0), r.sensitivity.unwrap_or(0.0));
    ranked.sort_by(|x, y| {
        let (kx, ky) = (key(x), key(y));
        ky.0.total_cmp(&kx.0).then(ky.1.total_cmp(&kx.1))
    });
    assign_ranks(&mut ranked, |x, y| key(x) == key(y), |r, k| r.rank = k);
    ranked
}

/// Re-ranks the pairs of `counts` by PPV, then sensitivity.
pub fn rerank_by_ppv_sensitivity(
    partition: &Partition,
    doc: &Document,
    counts: &BTreeMap<ConceptPair, usize>,
) -> Vec<RankedPair> {
    let mut tallies = BTreeMap::new();
    for pair in counts.keys() {
        let (ma, mb) = (ConceptMatcher::new(pair.a()), ConceptMatcher::new(pair.b()));
        let mut t = PairTally::default();
        for s in &doc.sentences {
            let words: Vec<&str> = s.words().collect();
            let (ha, hb) = (ma.matches_words(&words), mb.matches_words(&words));
            match (ha && hb, ha || hb, partition.part_of(s.index)) {
                (true, _, Some(Part::Denoised)) => t.tp += 1,
                (true, _, Some(Part::Noise)) => t.fn_ += 1,
                (false, true, Some(Part::Denoised)) => t.fp += 1,
                _ => {}
            }
        }
        tallies.insert(pair.clone(), t);
    }
    rank_tallies(&tallies)
}

pub type GoldRelations = BTreeSet<ConceptPair>;

/// Marks each ranked pair as related or not according to `gold`.
pub fn annotate_gold(ranked: &mut [RankedPair], gold: &GoldRelations) {
    for r in ranked {
        r.gold_related = Some(gold.contains(&r.pair));
    }
}

/// Share of ranked pairs that appear in the gold relation set.
pub fn accuracy_against_gold(ranked: &[RankedPair], gold: &GoldRelations) -> Result<f64> {
    if ranked.is_empty() {
        return Err(Error::validation("no ranked pairs to score against gold"));
    }
    let hits = ranked.iter().filter(|r| gold.contains(&r.pair)).count();
    Ok(hits as f64 / ranked.len() as f64)
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// One concept per line.
pub fn load_concepts(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(content_lines(&text).map(|(_, l)| l.to_string()).collect())
}

/// `conceptA<TAB>conceptB` per line.
pub fn load_gold(path: &Path) -> Result<GoldRelations> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gold(&text).map_err(|(line, message)| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    })
}

fn parse_gold(text: &str) -> Result<GoldRelations, (usize, String)> {
    content_lines(text)
        .map(|(n, line)| {
            let mut cols = line.split('\t');
            match (cols.next(), cols.next()) {
                (Some(a), Some(b)) => ConceptPair::new(a, b).map_err(|e| (n, e.to_string())),
                _ => Err((n, "expected conceptA<TAB>conceptB".to_string())),
            }
        })
        .collect()
}

pub const RANKED_HEADER: &str =
    "rank\tconcept_a\tconcept_b\tfrequency\tppv\tsensitivity\tsemantic_relation";

pub fn write_ranked<W: Write + ?Sized>(out: &mut W, ranked: &[RankedPair]) -> std::io::Result<()> {
    let fmt_opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |x| format!("{x:.4}"));
    for r in ranked {
        let gold = match r.gold_related {
            Some(true) => "Yes",
            Some(false) => "No",
            None => "-",
        };
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.rank,
            r.pair.a(),
            r.pair.b(),
            r.frequency,
            fmt_opt(r.ppv),
            fmt_opt(r.sensitivity),
            gold
        )?;
    }
    Ok(())
}
