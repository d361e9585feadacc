//! Segment a passage and print the five readability indices per sentence.
//!
//!     cargo run --example segment_and_score

use textdenoise::readability::{score_all, IndexKind};
use textdenoise::textseg::Segmenter;

const PASSAGE: &str = "Transient global ischemia produces a rapid increase in extracellular \
glutamate. We studied this in rats. Results were reported by Perez et al. in 2006. \
Neurons in the CA4 subfield showed delayed degeneration.";

fn main() -> textdenoise::Result<()> {
    let doc = Segmenter::default().segment("passage", PASSAGE);
    let scores = score_all(&doc)?;
    print!("{:>3}  {:>5} {:>4} {:>4}", "#", "words", "syl", "cplx");
    for kind in IndexKind::ALL {
        print!(" {:>8}", kind.name());
    }
    println!();
    for (sentence, (index, v)) in doc.sentences.iter().zip(&scores) {
        print!(
            "{index:>3}  {:>5} {:>4} {:>4}",
            sentence.word_count, sentence.syllable_count, sentence.complex_word_count
        );
        for kind in IndexKind::ALL {
            print!(" {:>8.2}", v.get(kind));
        }
        println!("  {}", sentence.text);
    }
    Ok(())
}
