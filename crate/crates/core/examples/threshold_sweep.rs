//! Sweep denoising thresholds and watch concept-pair frequencies settle.
//!
//!     cargo run --example threshold_sweep

use std::path::Path;

use textdenoise::denoiser::{stability_report, sweep};
use textdenoise::readability::IndexKind;
use textdenoise::relminer::{load_concepts, ConceptMiner};
use textdenoise::textseg::{read_document, Segmenter};

fn main() -> textdenoise::Result<()> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let doc = read_document(&Segmenter::default(), &data.join("ischemia/glutamate_release.txt"))?;
    let thresholds = [0.1, 0.2, 0.3, 0.4, 0.5, 0.7, 1.0];

    for (t, p) in sweep(&doc, IndexKind::Fi, &thresholds)? {
        println!("t={t}  denoised {:?}", p.denoised);
    }

    let miner = ConceptMiner::new(&load_concepts(&data.join("concepts.txt"))?)?;
    let rows = stability_report(&doc, IndexKind::Fi, &miner.pairs(), &thresholds)?;
    println!("\npair frequency in denoised text per threshold:");
    for pair in miner.pairs() {
        let freq: Vec<usize> = rows.iter().filter(|r| r.pair == pair).map(|r| r.frequency).collect();
        if freq.last() > Some(&0) {
            println!("  {:<22} {:?}", pair.to_string(), freq);
        }
    }
    Ok(())
}
