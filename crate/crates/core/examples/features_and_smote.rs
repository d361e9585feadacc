//! Build per-sentence feature vectors and oversample the positive class.
//!
//!     cargo run --example features_and_smote

use std::path::Path;

use textdenoise::cli::load_corpus;
use textdenoise::mlprep::{
    balance_report, extract_features, load_terms, smote, write_features, Label, Lexicons,
    SmoteConfig,
};
use textdenoise::readability::sentence_vectors;
use textdenoise::textseg::Segmenter;

fn main() -> textdenoise::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let lex = data.join("lexicons");
    let lexicons = Lexicons {
        stopwords: Some(load_terms(&lex.join("stopwords.txt"))?.into_iter().collect()),
        entities: load_terms(&lex.join("entities.txt"))?,
        verbs: load_terms(&lex.join("verbs.txt"))?,
        semantic: Some(load_terms(&lex.join("semantic.txt"))?),
    };

    let corpus = load_corpus(&data.join("ischemia"), &Segmenter::default())?;
    let mut vectors = Vec::new();
    for doc in &corpus.documents {
        vectors.extend(extract_features(doc, &sentence_vectors(doc)?, &lexicons)?);
    }
    // toy labels: a sentence is positive when it names glutamate
    for (v, s) in vectors.iter_mut().zip(corpus.documents.iter().flat_map(|d| &d.sentences)) {
        let positive = s.words().any(|w| w == "glutamate");
        v.label = Some(if positive { Label::Positive } else { Label::Negative });
    }
    let before = balance_report(&vectors)?;

    let minority: Vec<_> = vectors.iter().filter(|v| v.label == Some(Label::Positive)).cloned().collect();
    let synthetic = smote(&minority, &SmoteConfig { k: 3, multiplier: 1, seed: 42 })?;
    vectors.extend(synthetic);
    let after = balance_report(&vectors)?;

    eprintln!(
        "positive/negative before {}/{}, after {}/{}",
        before.positive, before.negative, after.positive, after.negative
    );
    write_features(&mut std::io::stdout().lock(), &lexicons.schema(), &vectors).expect("stdout");
    Ok(())
}
