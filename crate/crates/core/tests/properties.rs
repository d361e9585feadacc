use std::collections::BTreeSet;

use proptest::prelude::*;

use textdenoise::denoiser::{denoise, stability_report, sweep, DenoiseConfig, Threshold};
use textdenoise::evalstats::{kfold_split, paired_t, prf, ConfusionCounts, FoldScores, T_CRITICAL_DF9};
use textdenoise::mlprep::{extract_features, smote, FeatureVector, Label, Lexicons, SmoteConfig};
use textdenoise::readability::{
    difficulty_key, score, score_vector, sentence_vectors, IndexKind, TextCounts,
};
use textdenoise::relminer::{
    cooccurrence_counts, pair_frequency, rank_by_frequency, rerank_by_ppv_sensitivity,
    ConceptMatcher, ConceptMiner, ConceptPair,
};
use textdenoise::textseg::{count_syllables, segment, Document, COMPLEX_WORD_SYLLABLES};

const WORDS: &[&str] = &[
    "glutamate", "ischemia", "levels", "neurons", "increase", "10min", "5min", "CA4", "the",
    "of", "in", "rose", "after", "cells", "protein", "synthesis", "blood", "flow", "rapidly",
    "significantly", "hippocampal", "a", "was", "measured", "during", "reperfusion", "ATP",
];

const CONCEPTS: &[&str] = &["glutamate", "ischemia", "levels", "neurons", "increase", "10min"];

fn kind() -> impl Strategy<Value = IndexKind> {
    prop::sample::select(IndexKind::ALL.to_vec())
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Text of 1..max sentences, each starting with a capital and ending in a
/// terminator, so every sentence boundary is unambiguous.
fn text(max_sentences: usize) -> impl Strategy<Value = String> {
    let sentence = (
        prop::collection::vec(prop::sample::select(WORDS.to_vec()), 1..14),
        prop::sample::select(vec![".", "!", "?"]),
    )
        .prop_map(|(words, end)| {
            let mut s = capitalize(words[0]);
            for w in &words[1..] {
                s.push(' ');
                s.push_str(w);
            }
            s.push_str(end);
            s
        });
    prop::collection::vec(sentence, 1..max_sentences).prop_map(|v| v.join(" "))
}

fn doc(max_sentences: usize) -> impl Strategy<Value = Document> {
    text(max_sentences).prop_map(|t| segment(&t))
}

fn sentence_texts(doc: &Document) -> Vec<String> {
    doc.sentences.iter().map(|s| s.text.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // textseg

    #[test]
    fn segmentation_is_idempotent(raw in "[A-Za-z0-9 .,!?;:'\"()-]{0,200}") {
        let first = segment(&raw);
        let second = segment(&first.text());
        prop_assert_eq!(sentence_texts(&first), sentence_texts(&second));
    }

    #[test]
    fn every_word_lands_in_one_sentence(raw in "[A-Za-z0-9 .,!?'-]{0,200}") {
        let expected: Vec<String> = raw
            .split_whitespace()
            .filter(|c| c.chars().any(char::is_alphanumeric))
            .map(str::to_string)
            .collect();
        let got: Vec<String> = segment(&raw)
            .sentences
            .iter()
            .flat_map(|s| s.tokens.iter().filter(|t| t.is_word).map(|t| t.surface.clone()))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn syllables_bounded_by_letters(word in "[a-zA-Z]{1,24}") {
        let n = count_syllables(&word).unwrap();
        prop_assert!(n >= 1);
        prop_assert!(n as usize <= word.len());
        prop_assert_eq!(n, count_syllables(&word.to_uppercase()).unwrap());
    }

    #[test]
    fn word_classes_partition_counts(d in doc(6)) {
        for s in &d.sentences {
            let words: Vec<u32> = s.tokens.iter().filter(|t| t.is_word).map(|t| t.syllables).collect();
            let mono = words.iter().filter(|&&n| n == 1).count();
            let complex = words.iter().filter(|&&n| n >= COMPLEX_WORD_SYLLABLES).count();
            prop_assert_eq!(s.monosyllable_count, mono);
            prop_assert_eq!(s.complex_word_count, complex);
            prop_assert!(mono + complex <= s.word_count);
            prop_assert_eq!(s.syllable_count, words.iter().map(|&n| n as usize).sum::<usize>());
        }
    }

    // readability

    #[test]
    fn fi_rises_with_complex_share(w in 2usize..60, c in 1usize..30, syl in 0usize..4) {
        prop_assume!(2 * c <= w);
        let base = TextCounts { words: w, sentences: 1, syllables: w + syl + 2 * c, complex_words: c, monosyllables: 0 };
        let doubled = TextCounts { complex_words: 2 * c, ..base };
        prop_assert!(doubled.score(IndexKind::Fi).unwrap() > base.score(IndexKind::Fi).unwrap());
        let fi = base.score(IndexKind::Fi).unwrap();
        prop_assert!((fi - 0.4 * (w as f64 + 100.0 * c as f64 / w as f64)).abs() < 1e-9);
    }

    #[test]
    fn fres_falls_with_length_and_syllables(w in 1usize..80, syl in 1usize..200) {
        let base = TextCounts { words: w, sentences: 1, syllables: syl, complex_words: 0, monosyllables: 0 };
        let more_syllables = TextCounts { syllables: syl + 1, ..base };
        let longer = TextCounts { words: 2 * w, syllables: 2 * syl, ..base };
        let fres = base.score(IndexKind::Fres).unwrap();
        prop_assert!(more_syllables.score(IndexKind::Fres).unwrap() < fres);
        prop_assert!(longer.score(IndexKind::Fres).unwrap() < fres);
    }

    #[test]
    fn difficulty_key_direction(a in -200.0f64..200.0, b in -200.0f64..200.0) {
        prop_assume!(a != b);
        let fres = difficulty_key(a, IndexKind::Fres) < difficulty_key(b, IndexKind::Fres);
        let fi = difficulty_key(a, IndexKind::Fi) < difficulty_key(b, IndexKind::Fi);
        prop_assert_eq!(fres, a > b);
        prop_assert_eq!(fi, a < b);
    }

    #[test]
    fn single_sentence_document_matches_sentence(t in text(2)) {
        let d = segment(&t);
        prop_assume!(d.len() == 1);
        let v = score_vector(&d).unwrap();
        for k in IndexKind::ALL {
            prop_assert_eq!(v.get(k), score(&d.sentences[0], k).unwrap());
        }
    }

    #[test]
    fn scores_ignore_letter_case(t in text(6)) {
        let lower = segment(&t);
        let upper = segment(&t.to_uppercase());
        prop_assert_eq!(lower.len(), upper.len());
        prop_assert_eq!(sentence_vectors(&lower).unwrap(), sentence_vectors(&upper).unwrap());
    }

    // denoiser

    #[test]
    fn denoise_is_repeatable(d in doc(30), k in kind(), t in 1u32..=100) {
        let config = DenoiseConfig::new(k, Threshold::new(t as f64 / 100.0).unwrap());
        let scores = sentence_vectors(&d).unwrap();
        let a = denoise(&d, &scores, config).unwrap();
        let b = denoise(&d, &scores, config).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.denoised.len() + a.noise.len(), d.len());
    }

    #[test]
    fn stability_is_monotone(d in doc(25), k in kind()) {
        let miner = ConceptMiner::new(CONCEPTS).unwrap();
        let thresholds = [0.1, 0.2, 0.3, 0.5, 0.7, 1.0];
        let rows = stability_report(&d, k, &miner.pairs(), &thresholds).unwrap();
        for pair in miner.pairs() {
            let freq: Vec<usize> = rows.iter().filter(|r| r.pair == pair).map(|r| r.frequency).collect();
            prop_assert_eq!(freq.len(), thresholds.len());
            prop_assert!(freq.windows(2).all(|w| w[0] <= w[1]), "{} {:?}", pair, freq);
        }
    }

    // relminer

    #[test]
    fn counting_is_symmetric(d in doc(20), i in 0usize..6, j in 0usize..6) {
        prop_assume!(i != j);
        let all: Vec<usize> = (0..d.len()).collect();
        let ab = ConceptPair::new(CONCEPTS[i], CONCEPTS[j]).unwrap();
        let ba = ConceptPair::new(CONCEPTS[j], CONCEPTS[i]).unwrap();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(pair_frequency(&d, &all, &ab), pair_frequency(&d, &all, &ba));
        let p = sweep(&d, IndexKind::Fi, &[0.3]).unwrap().remove(0).1;
        let fwd = cooccurrence_counts(&p, &d, &[CONCEPTS[i], CONCEPTS[j]]).unwrap();
        let rev = cooccurrence_counts(&p, &d, &[CONCEPTS[j], CONCEPTS[i]]).unwrap();
        prop_assert_eq!(fwd, rev);
    }

    #[test]
    fn tallies_split_whole_document_counts(d in doc(25), k in kind(), t in 1u32..=10) {
        let miner = ConceptMiner::new(CONCEPTS).unwrap();
        let p = denoise(&d, &sentence_vectors(&d).unwrap(), DenoiseConfig::new(k, Threshold::new(t as f64 / 10.0).unwrap())).unwrap();
        let tallies = miner.tally(&d, &p);
        for pair in miner.pairs() {
            let (ma, mb) = (ConceptMatcher::new(pair.a()), ConceptMatcher::new(pair.b()));
            let whole = d.sentences.iter().filter(|s| ma.matches(s) && mb.matches(s)).count();
            let tally = tallies.get(&pair).copied().unwrap_or_default();
            prop_assert_eq!(tally.tp + tally.fn_, whole);
            prop_assert!((0.0..=1.0).contains(&tally.ppv()));
            prop_assert!((0.0..=1.0).contains(&tally.sensitivity()));
        }
    }

    #[test]
    fn full_threshold_has_perfect_sensitivity(d in doc(20), k in kind()) {
        let miner = ConceptMiner::new(CONCEPTS).unwrap();
        let p = denoise(&d, &sentence_vectors(&d).unwrap(), DenoiseConfig::new(k, Threshold::FULL)).unwrap();
        for (_, t) in miner.tally(&d, &p) {
            if t.tp > 0 {
                prop_assert_eq!(t.sensitivity(), 1.0);
            }
        }
    }

    #[test]
    fn rerank_permutes_frequency_ranking(d in doc(25), k in kind()) {
        let p = denoise(&d, &sentence_vectors(&d).unwrap(), DenoiseConfig::new(k, Threshold::DEFAULT)).unwrap();
        let counts = cooccurrence_counts(&p, &d, CONCEPTS).unwrap();
        let by_freq: BTreeSet<ConceptPair> = rank_by_frequency(&counts).into_iter().map(|r| r.pair).collect();
        let reranked = rerank_by_ppv_sensitivity(&p, &d, &counts);
        prop_assert_eq!(reranked.len(), by_freq.len());
        let set: BTreeSet<ConceptPair> = reranked.iter().map(|r| r.pair.clone()).collect();
        prop_assert_eq!(set, by_freq);
        for w in reranked.windows(2) {
            prop_assert!(w[0].rank <= w[1].rank);
            prop_assert!(w[0].ppv >= w[1].ppv);
        }
    }

    // evalstats

    #[test]
    fn f_lies_between_p_and_r(tp in 0u64..500, fp in 0u64..500, fn_ in 0u64..500) {
        let m = prf(ConfusionCounts::new(tp, fp, fn_));
        for v in [m.precision, m.recall, m.f_score] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        if m.precision > 0.0 && m.recall > 0.0 {
            prop_assert!(m.f_score <= m.precision.max(m.recall) + 1e-15);
            prop_assert!(m.f_score >= m.precision.min(m.recall) - 1e-15);
        }
    }

    #[test]
    fn kfold_covers_every_item(n in 2usize..200, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(n >= k);
        let items: Vec<usize> = (0..n).collect();
        let folds = kfold_split(&items, k, seed).unwrap();
        prop_assert_eq!(folds.len(), k);
        let mut seen: Vec<usize> = folds.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, items);
        let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(&folds, &kfold_split(&(0..n).collect::<Vec<_>>(), k, seed).unwrap());
    }

    #[test]
    fn t_is_antisymmetric(a in prop::collection::vec(0.0f64..100.0, 10), b in prop::collection::vec(0.0f64..100.0, 10)) {
        let s = FoldScores::new(a, b).unwrap();
        let (x, y) = (paired_t(&s), paired_t(&s.swapped()));
        prop_assert!((x.t + y.t).abs() < 1e-9);
        prop_assert_eq!(x.significant, Some(x.t >= T_CRITICAL_DF9));
    }

    // mlprep

    #[test]
    fn features_ignore_case_and_trailing_space(t in text(6)) {
        let lex = Lexicons {
            entities: vec!["glutamate".into(), "atp".into()],
            verbs: vec!["rose".into(), "measured".into()],
            ..Lexicons::with_stopwords(&["the", "of", "in", "a", "was", "after", "during"])
        };
        let features = |raw: &str| {
            let d = segment(raw);
            extract_features(&d, &sentence_vectors(&d).unwrap(), &lex).unwrap()
        };
        let base = features(&t);
        let padded = features(&format!("{t}  \n\t "));
        prop_assert_eq!(&base, &padded);
        let upper = features(&t.to_uppercase());
        prop_assert_eq!(base.len(), upper.len());
        let acronym = 12;
        for (x, y) in base.iter().zip(&upper) {
            for (i, (a, b)) in x.values.iter().zip(&y.values).enumerate() {
                if i != acronym {
                    prop_assert_eq!(a, b, "feature {}", i);
                }
            }
        }
    }

    #[test]
    fn smote_output_size(n in 2usize..20, dim in 1usize..6, mult in 1usize..4, seed in any::<u64>()) {
        let minority: Vec<FeatureVector> = (0..n)
            .map(|i| FeatureVector {
                doc_id: format!("d{i}"),
                sentence_index: i,
                values: (0..dim).map(|j| ((i * 7 + j * 3) % 11) as f64).collect(),
                label: Some(Label::Positive),
            })
            .collect();
        let config = SmoteConfig { k: (n - 1).min(5), multiplier: mult, seed };
        let out = smote(&minority, &config).unwrap();
        prop_assert_eq!(out.len(), n * mult);
        prop_assert!(out.iter().all(|v| v.label == Some(Label::Positive) && v.doc_id.starts_with("smote:")));
    }
}

#[test]
fn critical_value_is_pinned() {
    assert_eq!(T_CRITICAL_DF9, 2.26);
}
