//! Rank concept pairs in denoised text and compare with a gold relation list.
//!
//!     cargo run --example mine_relations

use std::collections::BTreeMap;
use std::path::Path;

use textdenoise::cli::load_corpus;
use textdenoise::denoiser::{denoise, DenoiseConfig};
use textdenoise::readability::sentence_vectors;
use textdenoise::relminer::{
    accuracy_against_gold, annotate_gold, load_concepts, load_gold, rank_by_frequency,
    rank_tallies, write_ranked, ConceptMiner, PairTally, RANKED_HEADER,
};
use textdenoise::textseg::Segmenter;

fn main() -> textdenoise::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let corpus = load_corpus(&data.join("ischemia"), &Segmenter::default())?;
    let miner = ConceptMiner::new(&load_concepts(&data.join("concepts.txt"))?)?;
    let gold = load_gold(&data.join("gold.tsv"))?;

    let mut tallies: BTreeMap<_, PairTally> = BTreeMap::new();
    for doc in &corpus.documents {
        let partition = denoise(doc, &sentence_vectors(doc)?, DenoiseConfig::default())?;
        for (pair, t) in miner.tally(doc, &partition) {
            *tallies.entry(pair).or_default() += t;
        }
    }
    tallies.retain(|_, t| t.tp > 0);

    let mut by_frequency = rank_by_frequency(&tallies.iter().map(|(p, t)| (p.clone(), t.tp)).collect());
    let mut by_ppv = rank_tallies(&tallies);
    annotate_gold(&mut by_frequency, &gold);
    annotate_gold(&mut by_ppv, &gold);

    let mut out = std::io::stdout().lock();
    for (name, ranked) in [("frequency", &by_frequency), ("ppv, sensitivity", &by_ppv)] {
        println!("ranked by {name} (accuracy {:.2})", accuracy_against_gold(ranked, &gold)?);
        println!("{RANKED_HEADER}");
        write_ranked(&mut out, ranked).expect("stdout");
        println!();
    }
    Ok(())
}
