//! Readability-driven text reduction.
//!
//! Sentences that are hard to read tend to carry the relations, entities and
//! claims of a text. This crate scores every sentence with five readability
//! indices, keeps the hardest fraction as the *denoised* text and supplies
//! the tools to work with it:
//!
//! * [`textseg`]: sentence segmentation, tokens, syllable counts
//! * [`readability`]: FI, FRES, SMOG, FORCAST and FKRI
//! * [`denoiser`]: denoised/noise partitions, threshold sweeps, corpus export
//! * [`relminer`]: concept-pair co-occurrence ranking by frequency and PPV
//! * [`evalstats`]: micro/macro P/R/F, k-fold splits, paired t-test
//! * [`mlprep`]: per-sentence feature vectors and SMOTE oversampling
//! * [`cli`]: the `textdenoise` command-line front end
//!
//! ```
//! use textdenoise::{denoise, sentence_vectors, DenoiseConfig, Document};
//!
//! let doc = Document::from_text(
//!     "note",
//!     "The cat sat. Glutamate excitotoxicity accompanies cerebral ischemia. It rained.",
//! );
//! let scores = sentence_vectors(&doc).unwrap();
//! let part = denoise(&doc, &scores, DenoiseConfig::default()).unwrap();
//! assert_eq!(part.denoised, vec![1]);
//! ```

pub mod cli;
pub mod denoiser;
pub mod error;
pub mod evalstats;
pub mod mlprep;
mod output;
pub mod readability;
pub mod relminer;
pub mod textseg;

pub use denoiser::{denoise, sweep, DenoiseConfig, Partition, Threshold};
pub use error::{Error, Result};
pub use readability::{
    difficulty_key, score, score_all, sentence_vectors, IndexKind, ReadabilityVector,
};
pub use relminer::{ConceptPair, RankedPair};
pub use textseg::{count_syllables, segment, Document, Segmenter, Sentence, Token};
