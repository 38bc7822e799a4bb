//! Offline evaluation: replay held-out posts through recommenders and score
//! the rankings.

mod metrics;
mod report;

use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;

pub use metrics::{ndcg_at_k, set_metrics_at_k, MetricSet};
pub use report::{render_report, ReportFormat};

use crate::folksonomy::{Folksonomy, Post, SplitPair, TagId};
use crate::recommend::{
    self, actr_recommend_ids, cf_recommend_ids, girptm_recommend_ids, mp_r_ids, mp_ur_ids,
    ActrParams, FolkRank, FolkrankParams, GirptmParams, Ranking,
};
use crate::{Error, Result};

/// A recommender together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Algorithm {
    MpR,
    MpU,
    MpUr { beta: f64 },
    Cf { neighbors: usize },
    FolkRank(FolkrankParams),
    Girptm(GirptmParams),
    Actr(ActrParams),
}

impl Algorithm {
    /// Display name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::MpR => "MP_r",
            Algorithm::MpU => "MP_u",
            Algorithm::MpUr { .. } => "MP_ur",
            Algorithm::Cf { .. } => "CF",
            Algorithm::FolkRank(_) => "FR",
            Algorithm::Girptm(_) => "GIRPTM",
            Algorithm::Actr(_) => "ACT-R",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Algorithm::MpUr { beta } => recommend::check_beta(*beta),
            Algorithm::Cf { neighbors: 0 } => {
                Err(Error::BadParam("neighbors must be at least 1".into()))
            }
            Algorithm::FolkRank(p) => p.validate(),
            Algorithm::Girptm(p) => p.validate(),
            Algorithm::Actr(p) => p.validate(),
            _ => Ok(()),
        }
    }

    /// Full ranking for one query. `t_ref` is only read by the time-aware
    /// recommenders.
    pub fn recommend(
        &self,
        train: &Folksonomy,
        user: &str,
        resource: &str,
        t_ref: i64,
    ) -> Result<Ranking> {
        self.validate()?;
        Prepared::new(self, train)?.recommend(train, user, resource, t_ref)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An algorithm with any per-training-set state it needs.
enum Prepared<'a> {
    Stateless(&'a Algorithm),
    FolkRank(FolkRank),
}

impl<'a> Prepared<'a> {
    fn new(algorithm: &'a Algorithm, train: &Folksonomy) -> Result<Self> {
        Ok(match algorithm {
            Algorithm::FolkRank(params) => Prepared::FolkRank(FolkRank::new(train, *params)?),
            other => Prepared::Stateless(other),
        })
    }

    fn scores(
        &self,
        train: &Folksonomy,
        user: &str,
        resource: &str,
        t_ref: i64,
    ) -> Result<Vec<(TagId, f64)>> {
        let u = train.user_id(user);
        let r = train.resource_id(resource);
        let algorithm = match self {
            Prepared::FolkRank(fr) => return fr.recommend_ids(train, u, r),
            Prepared::Stateless(a) => a,
        };
        let scores = match algorithm {
            Algorithm::MpR => r.map(|r| mp_r_ids(train, r)).unwrap_or_default(),
            Algorithm::MpU => mp_ur_ids(train, u, None, 1.0),
            Algorithm::MpUr { beta } => mp_ur_ids(train, u, r, *beta),
            Algorithm::Cf { neighbors } => cf_recommend_ids(train, u, r, *neighbors),
            Algorithm::Girptm(p) => girptm_recommend_ids(train, u, r, p, t_ref)?,
            Algorithm::Actr(p) => actr_recommend_ids(train, u, r, p, t_ref)?,
            Algorithm::FolkRank(_) => unreachable!("prepared separately"),
        };
        Ok(scores)
    }

    fn recommend(
        &self,
        train: &Folksonomy,
        user: &str,
        resource: &str,
        t_ref: i64,
    ) -> Result<Ranking> {
        let scores = match self.scores(train, user, resource, t_ref) {
            Err(Error::EmptyCandidates) => Vec::new(),
            other => other?,
        };
        Ok(Ranking::from_tag_scores(train, scores))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub algorithm: String,
    /// Arithmetic mean over test posts.
    pub metrics: MetricSet,
    pub n_test_posts: usize,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub k: usize,
    pub rows: Vec<ReportRow>,
}

/// Scores each algorithm on every test post of `split`.
///
/// Recommenders see only `split.train`; time-aware ones use the test post's
/// timestamp as the reference time. Posts are scored in parallel but
/// averaged in test-post order, so the result does not depend on
/// scheduling.
pub fn evaluate(split: &SplitPair, algorithms: &[Algorithm], k: usize) -> Result<EvalReport> {
    if split.test.is_empty() {
        return Err(Error::NoTestPosts);
    }
    if k == 0 {
        return Err(Error::BadParam("k must be at least 1".into()));
    }
    for a in algorithms {
        a.validate()?;
    }

    let mut rows = Vec::with_capacity(algorithms.len());
    for algorithm in algorithms {
        let start = Instant::now();
        let prepared = Prepared::new(algorithm, &split.train)?;
        let per_post: Vec<MetricSet> = split
            .test
            .par_iter()
            .map(|post| score_post(&prepared, &split.train, post, k))
            .collect::<Result<_>>()?;
        rows.push(ReportRow {
            algorithm: algorithm.name().to_owned(),
            metrics: mean(&per_post, k),
            n_test_posts: per_post.len(),
            wall_time: start.elapsed(),
        });
    }
    Ok(EvalReport { k, rows })
}

fn score_post(
    prepared: &Prepared<'_>,
    train: &Folksonomy,
    post: &Post,
    k: usize,
) -> Result<MetricSet> {
    let mut ranking =
        prepared.recommend(train, &post.user_id, &post.resource_id, post.timestamp)?;
    ranking.truncate(k);
    MetricSet::score(&ranking, &post.tags, k)
}

fn mean(sets: &[MetricSet], k: usize) -> MetricSet {
    let n = sets.len() as f64;
    let mut sum = MetricSet {
        k,
        ..MetricSet::default()
    };
    for m in sets {
        sum.ndcg += m.ndcg;
        sum.precision += m.precision;
        sum.recall += m.recall;
        sum.f1 += m.f1;
    }
    MetricSet {
        ndcg: sum.ndcg / n,
        precision: sum.precision / n,
        recall: sum.recall / n,
        f1: sum.f1 / n,
        k,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folksonomy::tests::build;
    use crate::split_leave_latest;

    #[test]
    fn mp_r_hits_exactly() {
        let f = build(&[
            ("v", "r", "a", 1),
            ("v", "r", "b", 1),
            ("u", "r0", "z", 2),
            ("u", "r", "a", 3),
            ("u", "r", "b", 3),
        ]);
        let split = split_leave_latest(&f).unwrap();
        let report = evaluate(&split, &[Algorithm::MpR], 10).unwrap();
        assert_eq!(report.rows[0].metrics.ndcg, 1.0);
        assert_eq!(report.rows[0].n_test_posts, 1);
    }

    #[test]
    fn rows_share_post_count() {
        let f = build(&[
            ("u", "r1", "a", 1),
            ("u", "r2", "b", 2),
            ("v", "r1", "a", 1),
            ("v", "r3", "c", 5),
        ]);
        let split = split_leave_latest(&f).unwrap();
        let report = evaluate(
            &split,
            &[Algorithm::MpR, Algorithm::Actr(ActrParams::default())],
            5,
        )
        .unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].n_test_posts, report.rows[1].n_test_posts);
    }

    #[test]
    fn rejects_bad_inputs() {
        let f = build(&[("u", "r1", "a", 1), ("u", "r2", "b", 2)]);
        let split = split_leave_latest(&f).unwrap();
        assert!(evaluate(&split, &[Algorithm::MpR], 0).is_err());
        assert!(evaluate(&split, &[Algorithm::MpUr { beta: 3.0 }], 5).is_err());
        let empty = SplitPair {
            train: split.train.clone(),
            test: Vec::new(),
        };
        assert!(matches!(
            evaluate(&empty, &[Algorithm::MpR], 5),
            Err(Error::NoTestPosts)
        ));
    }

    #[test]
    fn algorithm_recommend_matches_direct_call() {
        let f = build(&[
            ("u", "r1", "a", 1),
            ("u", "r2", "b", 2),
            ("v", "r2", "c", 3),
        ]);
        let via_enum = Algorithm::Actr(ActrParams::default())
            .recommend(&f, "u", "r2", 10)
            .unwrap();
        let direct = recommend::actr_recommend(&f, "u", "r2", &ActrParams::default(), 10).unwrap();
        assert_eq!(via_enum, direct);
        assert_eq!(
            Algorithm::MpU.recommend(&f, "u", "r2", 0).unwrap(),
            recommend::mp_u(&f, "u")
        );
    }
}
