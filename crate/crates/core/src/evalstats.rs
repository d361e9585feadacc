//! Precision/recall/F, micro and macro averaging, k-fold splits and the
//! paired t-test used to compare two systems over cross-validation folds.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Two-tailed Student's t critical value at 95% confidence, df = 9.
pub const T_CRITICAL_DF9: f64 = 2.26;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn new(tp: u64, fp: u64, fn_: u64) -> Self {
        ConfusionCounts { tp, fp, fn_ }
    }
}

impl std::ops::Add for ConfusionCounts {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        ConfusionCounts {
            tp: self.tp + rhs.tp,
            fp: self.fp + rhs.fp,
            fn_: self.fn_ + rhs.fn_,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_score: f64,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    ratio(2.0 * p * r, p + r)
}

pub fn prf(c: ConfusionCounts) -> Prf {
    let tp = c.tp as f64;
    let precision = ratio(tp, tp + c.fp as f64);
    let recall = ratio(tp, tp + c.fn_ as f64);
    Prf {
        precision,
        recall,
        f_score: harmonic(precision, recall),
    }
}

/// Metrics of the summed counts.
pub fn micro_average(items: &[ConfusionCounts]) -> Result<Prf> {
    if items.is_empty() {
        return Err(Error::validation("micro average of an empty list"));
    }
    Ok(prf(items.iter().copied().fold(ConfusionCounts::default(), |a, b| a + b)))
}

/// Unweighted mean of per-item precision and recall; F is their harmonic mean.
pub fn macro_average(items: &[ConfusionCounts]) -> Result<Prf> {
    if items.is_empty() {
        return Err(Error::validation("macro average of an empty list"));
    }
    let n = items.len() as f64;
    let (p, r) = items.iter().map(|&c| prf(c)).fold((0.0, 0.0), |(p, r), m| {
        (p + m.precision, r + m.recall)
    });
    let (precision, recall) = (p / n, r / n);
    Ok(Prf {
        precision,
        recall,
        f_score: harmonic(precision, recall),
    })
}

/// Shuffles `items` with a seeded RNG and deals them into `k` contiguous
/// folds whose sizes differ by at most one (larger folds last).
pub fn kfold_split<T: Clone>(items: &[T], k: usize, seed: u64) -> Result<Vec<Vec<T>>> {
    if k < 2 {
        return Err(Error::validation(format!("k-fold needs k >= 2, got {k}")));
    }
    if items.len() < k {
        return Err(Error::validation(format!(
            "cannot split {} items into {k} folds",
            items.len()
        )));
    }
    let mut shuffled = items.to_vec();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let base = items.len() / k;
    let extra = items.len() % k;
    let mut folds = Vec::with_capacity(k);
    let mut rest = shuffled.as_slice();
    for i in 0..k {
        let size = base + usize::from(i >= k - extra);
        let (fold, tail) = rest.split_at(size);
        folds.push(fold.to_vec());
        rest = tail;
    }
    Ok(folds)
}

/// Per-fold scores of two systems evaluated on the same folds.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldScores {
    system_a: Vec<f64>,
    system_b: Vec<f64>,
}

impl FoldScores {
    pub fn new(system_a: Vec<f64>, system_b: Vec<f64>) -> Result<Self> {
        if system_a.len() != system_b.len() {
            return Err(Error::validation(format!(
                "fold score lists differ in length: {} vs {}",
                system_a.len(),
                system_b.len()
            )));
        }
        if system_a.len() < 2 {
            return Err(Error::validation("paired t-test needs at least 2 folds"));
        }
        if system_a.iter().chain(&system_b).any(|v| !v.is_finite()) {
            return Err(Error::validation("fold scores must be finite"));
        }
        Ok(FoldScores { system_a, system_b })
    }

    pub fn folds(&self) -> usize {
        self.system_a.len()
    }

    pub fn swapped(&self) -> Self {
        FoldScores {
            system_a: self.system_b.clone(),
            system_b: self.system_a.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    /// `±inf` when every fold differs by the same nonzero amount.
    pub t: f64,
    pub mean_difference: f64,
    pub sd_difference: f64,
    pub df: usize,
    /// `t >= 2.26`; only defined for 10 folds.
    pub significant: Option<bool>,
}

pub fn is_significant(t: f64, folds: usize) -> Option<bool> {
    (folds == 10).then_some(t >= T_CRITICAL_DF9)
}

/// Paired Student's t over per-fold differences `a - b`.
pub fn paired_t(scores: &FoldScores) -> TTest {
    let n = scores.folds();
    let diffs: Vec<f64> = scores
        .system_a
        .iter()
        .zip(&scores.system_b)
        .map(|(a, b)| a - b)
        .collect();
    let mean = diffs.iter().sum::<f64>() / n as f64;
    let var = diffs.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    // spread at rounding level of the differences counts as zero variance
    let scale = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let t = if sd <= 1e-12 * scale {
        if mean == 0.0 {
            0.0
        } else {
            f64::INFINITY.copysign(mean)
        }
    } else {
        mean / (sd / (n as f64).sqrt())
    };
    TTest {
        t,
        mean_difference: mean,
        sd_difference: sd,
        df: n - 1,
        significant: is_significant(t, n),
    }
}

/// Micro and macro metrics for one readability index.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub index: String,
    pub micro: Prf,
    pub macro_: Prf,
}

impl MetricsRow {
    pub fn compute(index: impl Into<String>, items: &[ConfusionCounts]) -> Result<Self> {
        Ok(MetricsRow {
            index: index.into(),
            micro: micro_average(items)?,
            macro_: macro_average(items)?,
        })
    }
}

pub const METRICS_HEADER: &str = "index\tmicro_p\tmicro_r\tmicro_f\tmacro_p\tmacro_r\tmacro_f";

/// Percent values with two decimals.
pub fn write_metrics<W: Write + ?Sized>(out: &mut W, rows: &[MetricsRow]) -> std::io::Result<()> {
    for r in rows {
        writeln!(
            out,
            "{}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}\t{:.2}",
            r.index,
            100.0 * r.micro.precision,
            100.0 * r.micro.recall,
            100.0 * r.micro.f_score,
            100.0 * r.macro_.precision,
            100.0 * r.macro_.recall,
            100.0 * r.macro_.f_score,
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn smog_row() {
        let m = prf(ConfusionCounts::new(23, 1, 5));
        assert_eq!(format!("{:.2}", 100.0 * m.precision), "95.83");
        assert_eq!(format!("{:.2}", 100.0 * m.recall), "82.14");
        assert_eq!(format!("{:.2}", 100.0 * m.f_score), "88.46");
    }

    #[test]
    fn degenerate_and_perfect() {
        assert_eq!(prf(ConfusionCounts::default()), Prf::default());
        let m = prf(ConfusionCounts::new(5, 0, 0));
        assert_eq!((m.precision, m.recall, m.f_score), (1.0, 1.0, 1.0));
    }

    #[test]
    fn micro_sums_counts() {
        let m = micro_average(&[ConfusionCounts::new(1, 1, 0), ConfusionCounts::new(1, 0, 1)]).unwrap();
        for v in [m.precision, m.recall, m.f_score] {
            assert!(close(v, 2.0 / 3.0, 1e-12));
        }
        let one = ConfusionCounts::new(4, 2, 7);
        assert_eq!(micro_average(&[one]).unwrap(), prf(one));
        assert_eq!(micro_average(&[ConfusionCounts::default(); 3]).unwrap(), Prf::default());
        assert!(micro_average(&[]).is_err());
    }

    #[test]
    fn macro_means_per_item_metrics() {
        let m = macro_average(&[ConfusionCounts::new(1, 0, 0), ConfusionCounts::new(1, 1, 1)]).unwrap();
        assert_eq!(m.precision, 0.75);
        assert_eq!(m.recall, 0.75);
        assert_eq!(m.f_score, 0.75);
        let one = ConfusionCounts::new(4, 2, 7);
        let single = macro_average(&[one]).unwrap();
        assert!(close(single.f_score, prf(one).f_score, 1e-12));
        let same = macro_average(&[one; 4]).unwrap();
        assert!(close(same.precision, prf(one).precision, 1e-12));
        assert!(close(same.recall, prf(one).recall, 1e-12));
        assert!(macro_average(&[]).is_err());
    }

    #[test]
    fn fold_shapes() {
        let ids: Vec<u32> = (0..10).collect();
        let folds = kfold_split(&ids, 10, 7).unwrap();
        assert!(folds.iter().all(|f| f.len() == 1));

        let ids: Vec<u32> = (0..11).collect();
        let mut sizes: Vec<usize> = kfold_split(&ids, 10, 7).unwrap().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, [vec![1; 9], vec![2]].concat());

        assert_eq!(kfold_split(&ids, 3, 99).unwrap(), kfold_split(&ids, 3, 99).unwrap());
        assert_ne!(kfold_split(&ids, 3, 99).unwrap(), kfold_split(&ids, 3, 100).unwrap());
        assert!(kfold_split(&ids, 12, 1).is_err());
        assert!(kfold_split(&ids, 1, 1).is_err());
    }

    #[test]
    fn t_on_identical_and_shifted() {
        let a: Vec<f64> = (0..10).map(|i| 20.0 + i as f64 * 0.37).collect();
        let same = paired_t(&FoldScores::new(a.clone(), a.clone()).unwrap());
        assert_eq!(same.t, 0.0);
        assert_eq!(same.significant, Some(false));

        let shifted: Vec<f64> = a.iter().map(|x| x + 1.0).collect();
        let r = paired_t(&FoldScores::new(shifted.clone(), a.clone()).unwrap());
        assert!(r.t.is_infinite() && r.t > 0.0);
        assert_eq!(r.significant, Some(true));
        let r = paired_t(&FoldScores::new(a, shifted).unwrap());
        assert!(r.t.is_infinite() && r.t < 0.0);
        assert_eq!(r.significant, Some(false));
    }

    #[test]
    fn t_one_to_ten() {
        let a: Vec<f64> = (1..=10).map(f64::from).collect();
        let r = paired_t(&FoldScores::new(a, vec![0.0; 10]).unwrap());
        assert!(close(r.mean_difference, 5.5, 1e-12));
        assert!(close(r.sd_difference, 3.0277, 1e-4));
        assert!(close(r.t, 5.745, 1e-3));
        assert_eq!(r.df, 9);
        assert_eq!(r.significant, Some(true));
    }

    #[test]
    fn significance_only_for_ten_folds() {
        assert_eq!(is_significant(2.26, 10), Some(true));
        assert_eq!(is_significant(2.2599, 10), Some(false));
        assert_eq!(is_significant(5.0, 5), None);
    }

    #[test]
    fn fold_scores_validation() {
        assert!(FoldScores::new(vec![1.0], vec![1.0]).is_err());
        assert!(FoldScores::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(FoldScores::new(vec![1.0, f64::NAN], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn metrics_report_format() {
        let row = MetricsRow::compute("smog", &[ConfusionCounts::new(23, 1, 5)]).unwrap();
        let mut buf = Vec::new();
        write_metrics(&mut buf, &[row]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "smog\t95.83\t82.14\t88.46\t95.83\t82.14\t88.46\n"
        );
    }
}
