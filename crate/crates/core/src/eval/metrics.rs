use std::collections::HashSet;

use crate::recommend::Ranking;
use crate::{Error, Result};

/// Per-post (or averaged) scores at cut-off `k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricSet {
    pub ndcg: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub k: usize,
}

impl MetricSet {
    /// Scores one ranking against the relevant tags. `relevant` is treated
    /// as a set.
    pub fn score<S: AsRef<str>>(recommended: &Ranking, relevant: &[S], k: usize) -> Result<Self> {
        let relevant = relevant_set(relevant)?;
        check_k(k)?;
        let top: Vec<&str> = recommended.tags().take(k).collect();
        let (precision, recall, f1) = set_metrics(&top, &relevant);
        Ok(MetricSet {
            ndcg: ndcg(&top, &relevant, k),
            precision,
            recall,
            f1,
            k,
        })
    }
}

/// nDCG@k with binary relevance and a `log2(i + 1)` discount; the ideal
/// DCG places `min(k, |relevant|)` hits at the top.
pub fn ndcg_at_k<S: AsRef<str>>(recommended: &Ranking, relevant: &[S], k: usize) -> Result<f64> {
    let relevant = relevant_set(relevant)?;
    check_k(k)?;
    let top: Vec<&str> = recommended.tags().take(k).collect();
    Ok(ndcg(&top, &relevant, k))
}

/// Precision, recall and F1 over the top `k` tags.
///
/// Precision divides by `min(k, len(recommended))`, so a short ranking is
/// not penalized for the slots it did not fill; an empty ranking scores 0.
pub fn set_metrics_at_k<S: AsRef<str>>(
    recommended: &Ranking,
    relevant: &[S],
    k: usize,
) -> Result<(f64, f64, f64)> {
    let relevant = relevant_set(relevant)?;
    check_k(k)?;
    let top: Vec<&str> = recommended.tags().take(k).collect();
    Ok(set_metrics(&top, &relevant))
}

fn relevant_set<S: AsRef<str>>(relevant: &[S]) -> Result<HashSet<&str>> {
    if relevant.is_empty() {
        return Err(Error::EmptyRelevantSet);
    }
    Ok(relevant.iter().map(AsRef::as_ref).collect())
}

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::BadParam("k must be at least 1".into()));
    }
    Ok(())
}

fn discount(position: usize) -> f64 {
    1.0 / ((position + 2) as f64).log2()
}

fn ndcg(top: &[&str], relevant: &HashSet<&str>, k: usize) -> f64 {
    let dcg: f64 = top
        .iter()
        .enumerate()
        .filter(|(_, t)| relevant.contains(*t))
        .map(|(i, _)| discount(i))
        .sum();
    let idcg: f64 = (0..k.min(relevant.len())).map(discount).sum();
    dcg / idcg
}

fn set_metrics(top: &[&str], relevant: &HashSet<&str>) -> (f64, f64, f64) {
    if top.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let hits = top.iter().filter(|t| relevant.contains(*t)).count() as f64;
    let precision = hits / top.len() as f64;
    let recall = hits / relevant.len() as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    (precision, recall, f1)
}
