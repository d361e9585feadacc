//! Keep the hardest 30% of a document's sentences by Gunning Fog.
//!
//!     cargo run --example denoise_document [path/to/file.txt]

use std::path::PathBuf;

use textdenoise::denoiser::{denoise, denoised_text, DenoiseConfig, Threshold};
use textdenoise::readability::{sentence_vectors, IndexKind};
use textdenoise::textseg::{read_document, Segmenter};

fn main() -> textdenoise::Result<()> {
    let path = std::env::args_os().nth(1).map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/ischemia/glutamate_release.txt")
    });
    let doc = read_document(&Segmenter::default(), &path)?;
    let scores = sentence_vectors(&doc)?;
    let config = DenoiseConfig::new(IndexKind::Fi, Threshold::DEFAULT);
    let partition = denoise(&doc, &scores, config)?;

    println!(
        "{}: {} of {} sentences kept at {} {}",
        doc.id,
        partition.denoised.len(),
        doc.len(),
        config.kind,
        config.threshold
    );
    for (index, part) in partition.records() {
        println!("  [{:<8}] fi={:>6.2}  {}", part.name(), scores[index].fi, doc.sentences[index].text);
    }
    println!("\ndenoised text:\n{}", denoised_text(&doc, &partition));
    Ok(())
}
