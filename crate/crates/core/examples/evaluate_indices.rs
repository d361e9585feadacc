//! Micro/macro metrics for competing indices, k-fold assignment and a
//! paired t-test over per-fold scores.
//!
//!     cargo run --example evaluate_indices

use textdenoise::evalstats::{
    kfold_split, paired_t, write_metrics, ConfusionCounts, FoldScores, MetricsRow, METRICS_HEADER,
};

fn main() -> textdenoise::Result<()> {
    let rows = vec![
        MetricsRow::compute("smog", &[ConfusionCounts::new(23, 1, 5)])?,
        MetricsRow::compute(
            "forcast",
            &[ConfusionCounts::new(10, 1, 6), ConfusionCounts::new(8, 3, 5)],
        )?,
    ];
    println!("{METRICS_HEADER}");
    write_metrics(&mut std::io::stdout().lock(), &rows).expect("stdout");

    let docs: Vec<String> = (1..=24).map(|i| format!("doc{i:02}")).collect();
    println!();
    for (i, fold) in kfold_split(&docs, 10, 7)?.iter().enumerate() {
        println!("fold {:>2}: {}", i + 1, fold.join(" "));
    }

    let denoised = vec![27.1, 25.4, 29.0, 26.3, 28.8, 24.9, 27.7, 26.0, 28.2, 27.5];
    let full_text = vec![25.0, 24.8, 26.1, 25.5, 26.0, 24.1, 25.9, 25.2, 26.4, 25.8];
    let t = paired_t(&FoldScores::new(denoised, full_text)?);
    println!(
        "\npaired t = {:.3} (df {}), mean difference {:.2}, significant: {:?}",
        t.t, t.df, t.mean_difference, t.significant
    );
    Ok(())
}
