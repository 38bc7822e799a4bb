//! Recency-based baseline standing in for GIRPTM.
//!
//! This is a surrogate, not the published model: a tag's user score is
//! `ln(1 + freq) * exp(-(t_ref - last_use) / tau)`, softmax-normalized and
//! mixed with the softmax of the resource's tag counts.

use super::{check_beta, mix_softmax, Ranking};
use crate::folksonomy::{Folksonomy, ResourceId, TagId, UserId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GirptmParams {
    /// Exponential recency time constant in seconds.
    pub recency_tau: f64,
    pub mix_beta: f64,
}

impl Default for GirptmParams {
    fn default() -> Self {
        GirptmParams {
            recency_tau: 2_419_200.0,
            mix_beta: 0.5,
        }
    }
}

impl GirptmParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.recency_tau > 0.0 && self.recency_tau.is_finite()) {
            return Err(Error::BadParam(format!(
                "tau must be positive, got {}",
                self.recency_tau
            )));
        }
        check_beta(self.mix_beta)
    }
}

/// User-side score of a tag used `freq` times, last at `last_use`.
pub(crate) fn recency_score(freq: usize, last_use: i64, t_ref: i64, tau: f64) -> f64 {
    let age = t_ref.saturating_sub(last_use).max(0) as f64;
    (1.0 + freq as f64).ln() * (-age / tau).exp()
}

pub fn girptm_recommend(
    train: &Folksonomy,
    user: &str,
    resource: &str,
    params: &GirptmParams,
    t_ref: i64,
) -> Result<Ranking> {
    params.validate()?;
    let scores = girptm_recommend_ids(
        train,
        train.user_id(user),
        train.resource_id(resource),
        params,
        t_ref,
    )?;
    Ok(Ranking::from_tag_scores(train, scores))
}

pub(crate) fn girptm_recommend_ids(
    train: &Folksonomy,
    user: Option<UserId>,
    resource: Option<ResourceId>,
    params: &GirptmParams,
    t_ref: i64,
) -> Result<Vec<(TagId, f64)>> {
    let user_logits: Vec<(TagId, f64)> = match user {
        Some(u) => train
            .user_tag_events(u)
            .iter()
            .map(|(t, usages)| {
                let last = *usages.last().expect("events are non-empty");
                (
                    *t,
                    recency_score(usages.len(), last, t_ref, params.recency_tau),
                )
            })
            .collect(),
        None => Vec::new(),
    };
    let resource_logits: Vec<(TagId, f64)> = match resource {
        Some(r) => train
            .resource_tag_counts(r)
            .iter()
            .map(|&(t, n)| (t, f64::from(n)))
            .collect(),
        None => Vec::new(),
    };
    if user_logits.is_empty() && resource_logits.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    Ok(mix_softmax(user_logits, resource_logits, params.mix_beta))
}
