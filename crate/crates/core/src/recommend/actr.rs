//! Activation-based tag recommendation.
//!
//! A tag's activation for a user is its base-level activation
//!
//! ```text
//! B(t) = ln( Σ_j max(min_lag, t_ref - t_j)^(-d) )
//! ```
//!
//! over the timestamps `t_j` of the user's earlier uses of `t`, plus an
//! associative term that spreads from the tags already on the target
//! resource:
//!
//! ```text
//! S(t) = Σ_{c ∈ C(r)} P(t | c) / |C(r)|
//! ```
//!
//! Frequent use raises `B`, and power-law decay makes recent use count
//! more than old use. The user side is softmax-normalized and mixed with
//! the softmax of the resource's tag counts.

use std::collections::BTreeMap;

use super::{check_beta, mix_softmax, Ranking};
use crate::folksonomy::{cooccurrence_prob_ids, Folksonomy, ResourceId, TagId, UserId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActrParams {
    /// Power-law decay exponent `d`.
    pub decay: f64,
    /// Weight of the user component in the final mix.
    pub mix_beta: f64,
    /// Lower bound on usage lags in seconds, so a use at `t_ref` stays finite.
    pub min_lag: i64,
}

impl Default for ActrParams {
    fn default() -> Self {
        ActrParams {
            decay: 0.5,
            mix_beta: 0.5,
            min_lag: 1,
        }
    }
}

impl ActrParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.decay > 0.0 && self.decay.is_finite()) {
            return Err(Error::BadParam(format!(
                "decay must be positive, got {}",
                self.decay
            )));
        }
        check_beta(self.mix_beta)?;
        if self.min_lag < 1 {
            return Err(Error::BadParam(format!(
                "min_lag must be at least 1 second, got {}",
                self.min_lag
            )));
        }
        Ok(())
    }
}

/// `ln Σ max(min_lag, t_ref - t_j)^(-decay)` over `usages`. Returns
/// negative infinity for an empty history.
pub fn base_level_activation(usages: &[i64], t_ref: i64, decay: f64, min_lag: i64) -> f64 {
    usages
        .iter()
        .map(|&t| (t_ref.saturating_sub(t).max(min_lag) as f64).powf(-decay))
        .sum::<f64>()
        .ln()
}

/// Base-level activation of every tag the user has used. Unknown users
/// yield an empty map.
pub fn bll_activation(
    train: &Folksonomy,
    user: &str,
    params: &ActrParams,
    t_ref: i64,
) -> BTreeMap<String, f64> {
    let Some(u) = train.user_id(user) else {
        return BTreeMap::new();
    };
    bll_ids(train, u, params, t_ref)
        .into_iter()
        .map(|(t, b)| (train.tag_name(t).to_owned(), b))
        .collect()
}

pub(crate) fn bll_ids(
    train: &Folksonomy,
    u: UserId,
    params: &ActrParams,
    t_ref: i64,
) -> Vec<(TagId, f64)> {
    train
        .user_tag_events(u)
        .iter()
        .map(|(t, usages)| {
            (
                *t,
                base_level_activation(usages, t_ref, params.decay, params.min_lag),
            )
        })
        .collect()
}

/// Mean co-occurrence probability of `tag` given each tag already assigned
/// to `resource`. Zero for resources without tags.
pub fn associative_activation(train: &Folksonomy, resource: &str, tag: &str) -> f64 {
    let (Some(r), Some(t)) = (train.resource_id(resource), train.tag_id(tag)) else {
        return 0.0;
    };
    associative_ids(train, r, t)
}

fn associative_ids(train: &Folksonomy, r: ResourceId, t: TagId) -> f64 {
    let cues = train.resource_tag_counts(r);
    if cues.is_empty() {
        return 0.0;
    }
    let weight = 1.0 / cues.len() as f64;
    cues.iter()
        .map(|&(c, _)| weight * cooccurrence_prob_ids(train, c, t))
        .sum()
}

pub fn actr_recommend(
    train: &Folksonomy,
    user: &str,
    resource: &str,
    params: &ActrParams,
    t_ref: i64,
) -> Result<Ranking> {
    params.validate()?;
    let scores = actr_recommend_ids(
        train,
        train.user_id(user),
        train.resource_id(resource),
        params,
        t_ref,
    )?;
    Ok(Ranking::from_tag_scores(train, scores))
}

pub(crate) fn actr_recommend_ids(
    train: &Folksonomy,
    user: Option<UserId>,
    resource: Option<ResourceId>,
    params: &ActrParams,
    t_ref: i64,
) -> Result<Vec<(TagId, f64)>> {
    let mut user_logits = match user {
        Some(u) => bll_ids(train, u, params, t_ref),
        None => Vec::new(),
    };
    if let Some(r) = resource {
        for (t, a) in &mut user_logits {
            *a += associative_ids(train, r, *t);
        }
    }
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
