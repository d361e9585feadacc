//! Sentence segmentation, tokenization and syllable counting.
//!
//! Everything downstream (readability scores, denoising, feature extraction)
//! consumes the [`Document`] produced here, so the rules are deliberately
//! deterministic:
//!
//! * tokens are whitespace-delimited chunks with leading/trailing punctuation
//!   stripped; internal hyphens and apostrophes keep a token whole;
//! * a sentence ends at `.`, `!` or `?` when the next chunk starts with an
//!   uppercase letter, a digit or an opening quote, unless the chunk is a
//!   known abbreviation;
//! * syllables are counted as vowel groups with silent-`e` and consonant-`le`
//!   corrections, backed by an overridable exception table.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Words with at least this many syllables are "complex".
pub const COMPLEX_WORD_SYLLABLES: u32 = 3;

const DEFAULT_ABBREVIATIONS: &[&str] = &[
    "dr.", "mr.", "mrs.", "ms.", "prof.", "st.", "jr.", "sr.", "fig.", "figs.", "eq.", "eqs.",
    "ref.", "refs.", "no.", "vol.", "vs.", "approx.", "e.g.", "i.e.", "et al.", "cf.", "ca.",
    "resp.", "a.m.", "p.m.", "dept.", "univ.", "inc.", "ltd.", "corp.", "sp.", "spp.", "var.",
];

const DEFAULT_SYLLABLE_EXCEPTIONS: &[(&str, u32)] = &[
    ("area", 3),
    ("being", 2),
    ("biomedical", 5),
    ("business", 2),
    ("create", 2),
    ("created", 3),
    ("idea", 3),
    ("ideas", 3),
    ("ischemia", 4),
    ("ischemic", 3),
    ("science", 2),
    ("sciences", 3),
];

const CLOSING_PUNCT: &[char] = &['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}', '\u{bb}'];
const OPENING_QUOTES: &[char] = &['"', '\'', '\u{201c}', '\u{2018}', '\u{ab}'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    /// Original characters of the whitespace-delimited chunk.
    pub surface: String,
    /// Lowercased with leading/trailing punctuation removed; empty for non-words.
    pub normalized: String,
    pub syllables: u32,
    pub is_word: bool,
}

impl Token {
    /// The surface form with leading and trailing punctuation removed.
    pub fn stripped(&self) -> &str {
        strip_punct(&self.surface)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SentenceStats {
    pub words: usize,
    pub syllables: usize,
    pub complex_words: usize,
    pub monosyllables: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sentence {
    pub index: usize,
    pub text: String,
    pub tokens: Vec<Token>,
    pub word_count: usize,
    pub syllable_count: usize,
    pub complex_word_count: usize,
    pub monosyllable_count: usize,
}

impl Sentence {
    /// Builds a sentence and derives its counts from `tokens`.
    pub fn new(index: usize, text: impl Into<String>, tokens: Vec<Token>) -> Self {
        let stats = sentence_stats(&tokens);
        Sentence {
            index,
            text: text.into(),
            tokens,
            word_count: stats.words,
            syllable_count: stats.syllables,
            complex_word_count: stats.complex_words,
            monosyllable_count: stats.monosyllables,
        }
    }

    pub fn stats(&self) -> SentenceStats {
        SentenceStats {
            words: self.word_count,
            syllables: self.syllable_count,
            complex_words: self.complex_word_count,
            monosyllables: self.monosyllable_count,
        }
    }

    /// Normalized forms of the word tokens, in order.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens
            .iter()
            .filter(|t| t.is_word)
            .map(|t| t.normalized.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    pub source_path: Option<PathBuf>,
}

impl Document {
    /// Segments `text` with the default rules.
    pub fn from_text(id: impl Into<String>, text: &str) -> Self {
        Segmenter::default().segment(id, text)
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Sentence texts joined by single spaces.
    pub fn text(&self) -> String {
        join_sentences(&self.sentences)
    }
}

pub fn join_sentences(sentences: &[Sentence]) -> String {
    sentences
        .iter()
        .map(|s| s.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Word counts for one sentence's tokens. Non-word tokens contribute nothing.
pub fn sentence_stats(tokens: &[Token]) -> SentenceStats {
    tokens
        .iter()
        .filter(|t| t.is_word)
        .fold(SentenceStats::default(), |mut acc, t| {
            acc.words += 1;
            acc.syllables += t.syllables as usize;
            if t.syllables >= COMPLEX_WORD_SYLLABLES {
                acc.complex_words += 1;
            } else if t.syllables == 1 {
                acc.monosyllables += 1;
            }
            acc
        })
}

fn strip_punct(s: &str) -> &str {
    s.trim_matches(|c: char| !c.is_alphanumeric())
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y')
}

/// Vowel-group syllable counter with an exception table.
#[derive(Debug, Clone)]
pub struct SyllableCounter {
    exceptions: HashMap<String, u32>,
}

impl Default for SyllableCounter {
    fn default() -> Self {
        SyllableCounter {
            exceptions: DEFAULT_SYLLABLE_EXCEPTIONS
                .iter()
                .map(|&(w, n)| (w.to_string(), n))
                .collect(),
        }
    }
}

impl SyllableCounter {
    /// A counter with no exceptions at all, pure heuristic.
    pub fn heuristic_only() -> Self {
        SyllableCounter {
            exceptions: HashMap::new(),
        }
    }

    /// Adds or replaces an exception. The count must lie in `1..=letters`.
    pub fn insert_exception(&mut self, word: &str, count: u32) -> Result<()> {
        let word = word.trim().to_lowercase();
        let letters = word.chars().filter(|c| c.is_alphabetic()).count() as u32;
        if letters == 0 {
            return Err(Error::NotAWord(word));
        }
        if count == 0 || count > letters {
            return Err(Error::validation(format!(
                "syllable exception {word:?}: count {count} outside 1..={letters}"
            )));
        }
        self.exceptions.insert(word, count);
        Ok(())
    }

    /// Merges a `word<TAB>count` lexicon over the current table.
    pub fn load_lexicon(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        self.merge_lexicon(&text).map_err(|(line, message)| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    fn merge_lexicon(&mut self, text: &str) -> Result<(), (usize, String)> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, count) = line
                .split_once('\t')
                .ok_or_else(|| (i + 1, "expected word<TAB>count".to_string()))?;
            let count: u32 = count
                .trim()
                .parse()
                .map_err(|e| (i + 1, format!("bad syllable count: {e}")))?;
            self.insert_exception(word, count)
                .map_err(|e| (i + 1, e.to_string()))?;
        }
        Ok(())
    }

    /// Syllables in `word`; case-insensitive, always at least 1.
    pub fn count(&self, word: &str) -> Result<u32> {
        let lower = word.to_lowercase();
        if !lower.chars().any(char::is_alphabetic) {
            return Err(Error::NotAWord(word.to_string()));
        }
        if let Some(&n) = self.exceptions.get(strip_punct(&lower)) {
            return Ok(n);
        }
        let total: u32 = lower
            .split(|c: char| !c.is_alphabetic())
            .filter(|seg| !seg.is_empty())
            .map(|seg| match self.exceptions.get(seg) {
                Some(&n) => n,
                None => vowel_group_syllables(seg),
            })
            .sum();
        Ok(total.max(1))
    }

    fn token_syllables(&self, stripped: &str) -> u32 {
        match self.count(stripped) {
            Ok(n) => n,
            // digits only: one syllable per digit group
            Err(_) => stripped
                .split(|c: char| !c.is_numeric())
                .filter(|g| !g.is_empty())
                .count() as u32,
        }
    }
}

/// Vowel groups in a lowercase, letters-only segment. May return 0 for
/// vowelless segments ("t" in "don't"); callers floor the word total at 1.
fn vowel_group_syllables(seg: &str) -> u32 {
    let chars: Vec<char> = seg.chars().collect();
    let mut groups = 0u32;
    let mut in_group = false;
    for &c in &chars {
        let v = is_vowel(c);
        if v && !in_group {
            groups += 1;
        }
        in_group = v;
    }
    let n = chars.len();
    if groups > 1 && chars[n - 1] == 'e' {
        let prev = chars[n - 2];
        let consonant_le = prev == 'l' && n >= 3 && !is_vowel(chars[n - 3]);
        if !consonant_le && !is_vowel(prev) {
            groups -= 1;
        }
    }
    groups
}

/// Syllables in `word` under the default exception table.
pub fn count_syllables(word: &str) -> Result<u32> {
    SyllableCounter::default().count(word)
}

/// Abbreviations that never end a sentence. Entries may span several
/// whitespace-separated chunks ("et al.").
#[derive(Debug, Clone)]
pub struct Abbreviations {
    entries: Vec<Vec<String>>,
}

impl Default for Abbreviations {
    fn default() -> Self {
        Abbreviations::new(DEFAULT_ABBREVIATIONS.iter().copied())
    }
}

impl Abbreviations {
    pub fn new<'a>(items: impl IntoIterator<Item = &'a str>) -> Self {
        let mut abbr = Abbreviations { entries: vec![] };
        for item in items {
            abbr.insert(item);
        }
        abbr
    }

    pub fn insert(&mut self, abbreviation: &str) {
        let mut words: Vec<String> = abbreviation
            .split_whitespace()
            .map(str::to_lowercase)
            .collect();
        let Some(last) = words.last_mut() else {
            return;
        };
        if !last.ends_with('.') {
            last.push('.');
        }
        if !self.entries.contains(&words) {
            self.entries.push(words);
        }
    }

    /// One abbreviation per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Abbreviations::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        ))
    }

    /// Whether the sentence-so-far (`chunks`, last chunk with closing
    /// punctuation already removed) ends in an abbreviation.
    fn ends_with_abbreviation(&self, chunks: &[&str]) -> bool {
        self.entries.iter().any(|entry| {
            if entry.len() > chunks.len() {
                return false;
            }
            let tail = &chunks[chunks.len() - entry.len()..];
            entry.iter().zip(tail).enumerate().all(|(i, (want, got))| {
                let got = if i == 0 {
                    got.trim_start_matches(|c: char| !c.is_alphanumeric())
                } else {
                    got
                };
                got.to_lowercase() == *want
            })
        })
    }
}

/// Rule-based segmenter.
#[derive(Debug, Clone, Default)]
pub struct Segmenter {
    pub abbreviations: Abbreviations,
    pub syllables: SyllableCounter,
}

impl Segmenter {
    pub fn new(abbreviations: Abbreviations, syllables: SyllableCounter) -> Self {
        Segmenter {
            abbreviations,
            syllables,
        }
    }

    pub fn tokenize(&self, chunk: &str) -> Token {
        let stripped = strip_punct(chunk);
        let is_word = !stripped.is_empty();
        Token {
            surface: chunk.to_string(),
            normalized: stripped.to_lowercase(),
            syllables: if is_word {
                self.syllables.token_syllables(stripped)
            } else {
                0
            },
            is_word,
        }
    }

    /// Splits `text` into sentences. Zero-word fragments are dropped and the
    /// survivors renumbered from 0.
    pub fn segment(&self, id: impl Into<String>, text: &str) -> Document {
        let chunks: Vec<&str> = text.split_whitespace().collect();
        let mut sentences = Vec::new();
        let mut start = 0;
        for i in 0..chunks.len() {
            let end_here = match chunks.get(i + 1) {
                None => true,
                Some(next) => self.is_boundary(&chunks[start..=i], next),
            };
            if end_here {
                let part = &chunks[start..=i];
                let tokens: Vec<Token> = part.iter().map(|c| self.tokenize(c)).collect();
                let sentence = Sentence::new(sentences.len(), part.join(" "), tokens);
                if sentence.word_count > 0 {
                    sentences.push(sentence);
                }
                start = i + 1;
            }
        }
        Document {
            id: id.into(),
            sentences,
            source_path: None,
        }
    }

    /// Like [`Segmenter::segment`] but starting from raw bytes.
    pub fn segment_bytes(&self, id: impl Into<String>, bytes: &[u8]) -> Result<Document> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Decode {
            offset: e.valid_up_to(),
        })?;
        Ok(self.segment(id, text))
    }

    fn is_boundary(&self, sentence: &[&str], next: &str) -> bool {
        let last = sentence[sentence.len() - 1];
        let core = last.trim_end_matches(CLOSING_PUNCT);
        let Some(term) = core.chars().last() else {
            return false;
        };
        if !matches!(term, '.' | '!' | '?') {
            return false;
        }
        let Some(first) = next.chars().next() else {
            return false;
        };
        if !(first.is_uppercase() || first.is_numeric() || OPENING_QUOTES.contains(&first)) {
            return false;
        }
        if term == '.' {
            let mut probe: Vec<&str> = sentence[..sentence.len() - 1].to_vec();
            probe.push(core);
            if self.abbreviations.ends_with_abbreviation(&probe) {
                return false;
            }
        }
        true
    }
}

/// Segments with the default rules.
pub fn segment(text: &str) -> Document {
    Segmenter::default().segment("", text)
}

/// Reads a UTF-8 text file into a document whose id is the file stem.
pub fn read_document(segmenter: &Segmenter, path: &Path) -> Result<Document> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut doc = segmenter.segment_bytes(id, &bytes).map_err(|e| match e {
        Error::Decode { offset } => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: format!("invalid UTF-8 at byte offset {offset}"),
        },
        other => other,
    })?;
    doc.source_path = Some(path.to_path_buf());
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word_counts(doc: &Document) -> Vec<usize> {
        doc.sentences.iter().map(|s| s.word_count).collect()
    }

    #[test]
    fn two_simple_sentences() {
        let doc = segment("The cat sat. It slept.");
        assert_eq!(word_counts(&doc), vec![3, 2]);
        assert_eq!(doc.sentences[1].index, 1);
    }

    #[test]
    fn empty_and_blank_input() {
        assert!(segment("").is_empty());
        assert!(segment("  \n\t ").is_empty());
    }

    #[test]
    fn abbreviations_do_not_split() {
        let doc = segment("Dr. Smith arrived at 5 p.m. today.");
        assert_eq!(doc.len(), 1);
        assert_eq!(doc.sentences[0].word_count, 7);

        let doc = segment("As shown by Perez et al. The result held. See Fig. 3 for details.");
        assert_eq!(word_counts(&doc), vec![9, 5]);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        let doc = segment("Levels rose by approx. half. then fell.");
        assert_eq!(doc.len(), 1);
    }

    #[test]
    fn quotes_and_digits_start_sentences() {
        let doc = segment("He said \"stop.\" \"Why?\" she asked. 2012 was dry!");
        assert_eq!(word_counts(&doc), vec![3, 3, 3]);
    }

    #[test]
    fn zero_word_fragments_are_dropped() {
        let doc = segment("!!! Hello there. ... ");
        assert_eq!(doc.len(), 1);
        assert_eq!(doc.sentences[0].text, "Hello there. ...");
        let doc = segment("?? ! Fine.");
        assert_eq!(doc.len(), 1);
        assert_eq!(doc.sentences[0].index, 0);
    }

    #[test]
    fn custom_abbreviation_file_entries() {
        let mut abbr = Abbreviations::new([]);
        abbr.insert("Nucl");
        let seg = Segmenter::new(abbr, SyllableCounter::default());
        assert_eq!(seg.segment("d", "See Nucl. Acids Res. Then stop.").len(), 2);
        // "dr." is no longer known
        assert_eq!(seg.segment("d", "Ask Dr. Who.").len(), 2);
    }

    #[test]
    fn syllable_examples() {
        assert_eq!(count_syllables("cat").unwrap(), 1);
        assert_eq!(count_syllables("readability").unwrap(), 5);
        assert_eq!(count_syllables("make").unwrap(), 1);
        assert_eq!(count_syllables("understanding").unwrap(), 4);
        assert_eq!(count_syllables("the").unwrap(), 1);
        assert_eq!(count_syllables("table").unwrap(), 2);
        assert_eq!(count_syllables("whale").unwrap(), 1);
        assert_eq!(count_syllables("agree").unwrap(), 2);
        assert_eq!(count_syllables("large-scale").unwrap(), 2);
        assert_eq!(count_syllables("don't").unwrap(), 1);
        assert_eq!(count_syllables("CT").unwrap(), 1);
        assert_eq!(count_syllables("READABILITY").unwrap(), 5);
    }

    #[test]
    fn syllable_exceptions_and_overrides() {
        assert_eq!(count_syllables("Ischemia").unwrap(), 4);
        assert_eq!(
            SyllableCounter::heuristic_only().count("ischemia").unwrap(),
            3
        );
        let mut counter = SyllableCounter::default();
        counter.merge_lexicon("# comment\nfire\t2\n\nischemia\t3\n").unwrap();
        assert_eq!(counter.count("fire").unwrap(), 2);
        assert_eq!(counter.count("ischemia").unwrap(), 3);
        assert!(counter.merge_lexicon("cat\t9\n").is_err());
        assert!(counter.merge_lexicon("cat 1\n").is_err());
    }

    #[test]
    fn not_a_word() {
        assert!(matches!(count_syllables("123"), Err(Error::NotAWord(_))));
        assert!(matches!(count_syllables("--"), Err(Error::NotAWord(_))));
    }

    #[test]
    fn tokens() {
        let seg = Segmenter::default();
        let t = seg.tokenize("(Large-scale,");
        assert!(t.is_word);
        assert_eq!(t.normalized, "large-scale");
        assert_eq!(t.syllables, 2);

        let t = seg.tokenize("2012.");
        assert!(t.is_word);
        assert_eq!(t.normalized, "2012");
        assert_eq!(t.syllables, 1);
        assert_eq!(seg.tokenize("3.5").syllables, 2);

        let t = seg.tokenize("--");
        assert!(!t.is_word);
        assert_eq!(t.normalized, "");
        assert_eq!(t.syllables, 0);
    }

    #[test]
    fn stats() {
        let seg = Segmenter::default();
        let toks = |s: &str| s.split_whitespace().map(|c| seg.tokenize(c)).collect::<Vec<_>>();
        let s = sentence_stats(&toks("The cat sat"));
        assert_eq!(
            (s.words, s.syllables, s.complex_words, s.monosyllables),
            (3, 3, 0, 3)
        );
        let s = sentence_stats(&toks("Understanding readability"));
        assert_eq!(
            (s.words, s.syllables, s.complex_words, s.monosyllables),
            (2, 9, 2, 0)
        );
        assert_eq!(sentence_stats(&[]), SentenceStats::default());
        assert_eq!(sentence_stats(&toks("-- ... !")), SentenceStats::default());
    }

    #[test]
    fn invalid_utf8_reports_offset() {
        let err = Segmenter::default()
            .segment_bytes("x", b"abc \xff def")
            .unwrap_err();
        assert!(matches!(err, Error::Decode { offset: 4 }));
    }
}
