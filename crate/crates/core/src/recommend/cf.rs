use std::collections::{BTreeMap, HashMap};

use super::popularity::mp_r_ids;
use super::Ranking;
use crate::folksonomy::{Folksonomy, ResourceId, TagId, UserId};

pub const DEFAULT_NEIGHBORS: usize = 20;

/// Up to `n` users most similar to `user`, by cosine similarity of binary
/// user-tag profiles. Only users with positive similarity are returned,
/// sorted by (similarity desc, user id asc).
pub fn cf_neighbors(train: &Folksonomy, user: &str, n: usize) -> Vec<(String, f64)> {
    let Some(u) = train.user_id(user) else {
        return Vec::new();
    };
    neighbors_ids(train, u, n)
        .into_iter()
        .map(|(v, sim)| (train.user_name(v).to_owned(), sim))
        .collect()
}

/// Scores each tag by the summed similarity of the neighbors who assigned
/// it to `resource`. Falls back to MP_r when no neighbor tagged the
/// resource.
pub fn cf_recommend(train: &Folksonomy, user: &str, resource: &str, n: usize) -> Ranking {
    let scores = cf_recommend_ids(train, train.user_id(user), train.resource_id(resource), n);
    Ranking::from_tag_scores(train, scores)
}

pub(crate) fn cf_recommend_ids(
    train: &Folksonomy,
    user: Option<UserId>,
    resource: Option<ResourceId>,
    n: usize,
) -> Vec<(TagId, f64)> {
    let Some(r) = resource else {
        return Vec::new();
    };
    let neighbors = match user {
        Some(u) => neighbors_ids(train, u, n),
        None => Vec::new(),
    };
    let votes = neighbor_votes(train, &neighbors, r);
    if votes.iter().all(|&(_, s)| s == 0.0) {
        return mp_r_ids(train, r);
    }
    votes
}

/// Σ sim(u, v) · [v assigned t to r], summed in neighbor order.
pub(crate) fn neighbor_votes(
    train: &Folksonomy,
    neighbors: &[(UserId, f64)],
    r: ResourceId,
) -> Vec<(TagId, f64)> {
    let mut scores: BTreeMap<TagId, f64> = BTreeMap::new();
    for &(v, sim) in neighbors {
        if let Some(post) = train.post_index(v, r) {
            for &t in train.post_tags(post) {
                *scores.entry(t).or_insert(0.0) += sim;
            }
        }
    }
    scores.into_iter().collect()
}

pub(crate) fn neighbors_ids(train: &Folksonomy, u: UserId, n: usize) -> Vec<(UserId, f64)> {
    let profile = train.user_tag_events(u);
    if profile.is_empty() || n == 0 {
        return Vec::new();
    }
    let mut overlap: HashMap<UserId, u32> = HashMap::new();
    for (t, _) in profile {
        for &v in train.tag_users(*t) {
            if v != u {
                *overlap.entry(v).or_insert(0) += 1;
            }
        }
    }
    let u_len = profile.len() as f64;
    let mut sims: Vec<(UserId, f64)> = overlap
        .into_iter()
        .map(|(v, shared)| {
            let v_len = train.user_tag_events(v).len() as f64;
            (v, f64::from(shared) / (u_len * v_len).sqrt())
        })
        .collect();
    sims.sort_unstable_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| train.user_name(a.0).cmp(train.user_name(b.0)))
    });
    sims.truncate(n);
    sims
}
