//! The five readability indices and their difficulty ordering.
//!
//! With W = words, S = sentences, Syl = syllables, C = complex words
//! (three or more syllables) and M = monosyllabic words:
//!
//! | index   | formula                                        | harder text |
//! |---------|------------------------------------------------|-------------|
//! | FI      | `0.4 * (W/S + 100 * C/W)`                      | higher      |
//! | FRES    | `206.835 - 1.015 * W/S - 84.6 * Syl/W`         | lower       |
//! | SMOG    | `1.0430 * sqrt(C * 30/S) + 3.1291`             | higher      |
//! | FORCAST | `20 - (M * 150/W) / 10`                        | higher      |
//! | FKRI    | `0.39 * W/S + 11.8 * Syl/W - 15.59`            | higher      |
//!
//! A single sentence is scored with S = 1. Scores are never clamped.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textseg::{Document, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IndexKind {
    /// Gunning Fog index.
    Fi,
    /// Flesch reading ease score.
    Fres,
    Smog,
    Forcast,
    /// Flesch-Kincaid grade level.
    Fkri,
}

impl IndexKind {
    pub const ALL: [IndexKind; 5] = [
        IndexKind::Fi,
        IndexKind::Fres,
        IndexKind::Smog,
        IndexKind::Forcast,
        IndexKind::Fkri,
    ];

    /// True when a higher score means harder text. Only FRES is inverted.
    pub fn higher_is_harder(self) -> bool {
        !matches!(self, IndexKind::Fres)
    }

    pub fn name(self) -> &'static str {
        match self {
            IndexKind::Fi => "fi",
            IndexKind::Fres => "fres",
            IndexKind::Smog => "smog",
            IndexKind::Forcast => "forcast",
            IndexKind::Fkri => "fkri",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IndexKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IndexKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::validation(format!(
                    "unknown index {s:?} (expected one of fi, fres, smog, forcast, fkri)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Sentence,
    Document,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadabilityVector {
    pub fi: f64,
    pub fres: f64,
    pub smog: f64,
    pub forcast: f64,
    pub fkri: f64,
    pub basis: Basis,
}

impl ReadabilityVector {
    pub fn get(&self, kind: IndexKind) -> f64 {
        match kind {
            IndexKind::Fi => self.fi,
            IndexKind::Fres => self.fres,
            IndexKind::Smog => self.smog,
            IndexKind::Forcast => self.forcast,
            IndexKind::Fkri => self.fkri,
        }
    }
}

/// Raw counts over a scored unit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
    pub complex_words: usize,
    pub monosyllables: usize,
}

impl TextCounts {
    pub fn score(&self, kind: IndexKind) -> Result<f64> {
        if self.words == 0 {
            return Err(Error::Unscorable("no words"));
        }
        if self.sentences == 0 {
            return Err(Error::Unscorable("no sentences"));
        }
        let w = self.words as f64;
        let s = self.sentences as f64;
        let words_per_sentence = w / s;
        let syllables_per_word = self.syllables as f64 / w;
        let complex = self.complex_words as f64;
        Ok(match kind {
            IndexKind::Fi => 0.4 * (words_per_sentence + 100.0 * complex / w),
            IndexKind::Fres => 206.835 - 1.015 * words_per_sentence - 84.6 * syllables_per_word,
            IndexKind::Smog => 1.0430 * (complex * 30.0 / s).sqrt() + 3.1291,
            IndexKind::Forcast => 20.0 - (self.monosyllables as f64 * 150.0 / w) / 10.0,
            IndexKind::Fkri => 0.39 * words_per_sentence + 11.8 * syllables_per_word - 15.59,
        })
    }

    fn vector(&self, basis: Basis) -> Result<ReadabilityVector> {
        Ok(ReadabilityVector {
            fi: self.score(IndexKind::Fi)?,
            fres: self.score(IndexKind::Fres)?,
            smog: self.score(IndexKind::Smog)?,
            forcast: self.score(IndexKind::Forcast)?,
            fkri: self.score(IndexKind::Fkri)?,
            basis,
        })
    }
}

/// Anything that can be scored: a sentence or a whole document.
pub trait Scorable {
    fn counts(&self) -> TextCounts;
    fn basis(&self) -> Basis;
}

impl Scorable for Sentence {
    fn counts(&self) -> TextCounts {
        TextCounts {
            words: self.word_count,
            sentences: 1,
            syllables: self.syllable_count,
            complex_words: self.complex_word_count,
            monosyllables: self.monosyllable_count,
        }
    }

    fn basis(&self) -> Basis {
        Basis::Sentence
    }
}

impl Scorable for Document {
    fn counts(&self) -> TextCounts {
        self.sentences
            .iter()
            .fold(TextCounts::default(), |mut acc, s| {
                acc.words += s.word_count;
                acc.sentences += 1;
                acc.syllables += s.syllable_count;
                acc.complex_words += s.complex_word_count;
                acc.monosyllables += s.monosyllable_count;
                acc
            })
    }

    fn basis(&self) -> Basis {
        Basis::Document
    }
}

pub fn score<U: Scorable + ?Sized>(unit: &U, kind: IndexKind) -> Result<f64> {
    unit.counts().score(kind)
}

pub fn score_vector<U: Scorable + ?Sized>(unit: &U) -> Result<ReadabilityVector> {
    unit.counts().vector(unit.basis())
}

/// Per-sentence vectors in document order.
pub fn score_all(doc: &Document) -> Result<Vec<(usize, ReadabilityVector)>> {
    if doc.is_empty() {
        return Err(Error::Unscorable("document has no sentences"));
    }
    doc.sentences
        .iter()
        .map(|s| Ok((s.index, score_vector(s)?)))
        .collect()
}

/// Just the vectors of [`score_all`], aligned with `doc.sentences`.
pub fn sentence_vectors(doc: &Document) -> Result<Vec<ReadabilityVector>> {
    doc.sentences.iter().map(score_vector).collect()
}

/// Maps a raw score to a key that grows with reading difficulty.
pub fn difficulty_key(value: f64, kind: IndexKind) -> f64 {
    if kind.higher_is_harder() {
        value
    } else {
        -value
    }
}

pub const SCORE_HEADER: &str = "doc_id\tsentence_index\tfi\tfres\tsmog\tforcast\tfkri";

/// Writes one tab-separated record per sentence with 4-decimal reals.
pub fn write_scores<W: Write + ?Sized>(
    out: &mut W,
    doc_id: &str,
    scores: &[(usize, ReadabilityVector)],
) -> std::io::Result<()> {
    for (index, v) in scores {
        writeln!(
            out,
            "{doc_id}\t{index}\t{:.4}\t{:.4}\t{:.4}\t{:.4}\t{:.4}",
            v.fi, v.fres, v.smog, v.forcast, v.fkri
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textseg::segment;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn the_cat_sat() {
        let doc = segment("The cat sat.");
        let s = &doc.sentences[0];
        assert!(close(score(s, IndexKind::Fres).unwrap(), 119.19));
        assert!(close(score(s, IndexKind::Fi).unwrap(), 1.2));
        assert!(close(score(s, IndexKind::Forcast).unwrap(), 5.0));
        assert!(close(score(s, IndexKind::Smog).unwrap(), 3.1291));
        // 0.39*3 + 11.8*1 - 15.59
        assert!(close(score(s, IndexKind::Fkri).unwrap(), -2.62));
    }

    #[test]
    fn unscorable_units() {
        let empty = Document::default();
        assert!(matches!(
            score(&empty, IndexKind::Fi),
            Err(Error::Unscorable(_))
        ));
        assert!(score_all(&empty).is_err());
        let counts = TextCounts {
            words: 0,
            sentences: 1,
            ..Default::default()
        };
        assert!(counts.score(IndexKind::Fres).is_err());
    }

    #[test]
    fn score_all_order_and_consistency() {
        let doc = segment("The cat sat. It slept soundly on the mat.");
        let all = score_all(&doc).unwrap();
        assert_eq!(all.iter().map(|(i, _)| *i).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(all[0].1.basis, Basis::Sentence);

        let single = segment("Glutamate accumulates during ischemia.");
        let v = score_all(&single).unwrap()[0].1;
        let d = score_vector(&single).unwrap();
        assert_eq!(d.basis, Basis::Document);
        for kind in IndexKind::ALL {
            assert_eq!(v.get(kind), score(&single.sentences[0], kind).unwrap());
            assert_eq!(v.get(kind), d.get(kind));
        }

        let same = segment("Cells divide rapidly. Cells divide rapidly.");
        let all = score_all(&same).unwrap();
        assert_eq!(all[0].1, all[1].1);
    }

    #[test]
    fn difficulty_direction() {
        assert_eq!(difficulty_key(10.0, IndexKind::Fi), 10.0);
        assert_eq!(difficulty_key(30.0, IndexKind::Fres), -30.0);
        let fres = [90.0, 30.0, 60.0];
        let mut order: Vec<usize> = (0..3).collect();
        order.sort_by(|&a, &b| {
            difficulty_key(fres[b], IndexKind::Fres).total_cmp(&difficulty_key(fres[a], IndexKind::Fres))
        });
        assert_eq!(order, vec![1, 2, 0]);
    }

    #[test]
    fn parse_kind() {
        assert_eq!("FI".parse::<IndexKind>().unwrap(), IndexKind::Fi);
        assert_eq!("forcast".parse::<IndexKind>().unwrap(), IndexKind::Forcast);
        assert!("ari".parse::<IndexKind>().is_err());
    }

    #[test]
    fn score_records() {
        let doc = segment("The cat sat.");
        let mut buf = Vec::new();
        write_scores(&mut buf, "d1", &score_all(&doc).unwrap()).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "d1\t0\t1.2000\t119.1900\t3.1291\t5.0000\t-2.6200\n"
        );
    }
}
