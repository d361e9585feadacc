//! Write the denoised text of every bundled document to a directory.
//!
//!     cargo run --example export_corpus [out_dir] [threshold]

use std::path::{Path, PathBuf};

use textdenoise::cli::load_corpus;
use textdenoise::denoiser::{export_denoised_corpus, DenoiseConfig, Threshold};
use textdenoise::readability::IndexKind;
use textdenoise::textseg::Segmenter;

fn main() -> textdenoise::Result<()> {
    let mut args = std::env::args().skip(1);
    let out_dir = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("textdenoise-export"));
    let threshold: Threshold = args.next().as_deref().unwrap_or("0.3").parse()?;

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ischemia");
    let corpus = load_corpus(&data, &Segmenter::default())?;
    let config = DenoiseConfig::new(IndexKind::Fres, threshold);
    for path in export_denoised_corpus(&corpus.documents, config, &out_dir)? {
        let kept = std::fs::read_to_string(&path).map(|t| t.lines().count()).unwrap_or(0);
        println!("{} ({kept} sentences)", path.display());
    }
    Ok(())
}
