use super::{check_beta, merge_weighted, Ranking};
use crate::folksonomy::{Folksonomy, ResourceId, TagId, UserId};
use crate::Result;

/// Tags by relative frequency on the resource (count / total count).
pub fn mp_r(train: &Folksonomy, resource: &str) -> Ranking {
    match train.resource_id(resource) {
        Some(r) => Ranking::from_tag_scores(train, mp_r_ids(train, r)),
        None => Ranking::default(),
    }
}

/// Tags by relative frequency in the user's posts.
pub fn mp_u(train: &Folksonomy, user: &str) -> Ranking {
    match train.user_id(user) {
        Some(u) => Ranking::from_tag_scores(train, mp_u_ids(train, u)),
        None => Ranking::default(),
    }
}

/// `beta * MP_u + (1 - beta) * MP_r` over the union of both candidate sets.
/// A component with zero weight contributes no candidates, so `beta = 1`
/// reproduces [`mp_u`] and `beta = 0` reproduces [`mp_r`] exactly.
pub fn mp_ur(train: &Folksonomy, user: &str, resource: &str, beta: f64) -> Result<Ranking> {
    check_beta(beta)?;
    let scores = mp_ur_ids(
        train,
        train.user_id(user),
        train.resource_id(resource),
        beta,
    );
    Ok(Ranking::from_tag_scores(train, scores))
}

pub(crate) fn mp_r_ids(train: &Folksonomy, r: ResourceId) -> Vec<(TagId, f64)> {
    relative(train.resource_tag_counts(r).iter().map(|&(t, n)| (t, n)))
}

pub(crate) fn mp_u_ids(train: &Folksonomy, u: UserId) -> Vec<(TagId, f64)> {
    relative(
        train
            .user_tag_events(u)
            .iter()
            .map(|(t, events)| (*t, events.len() as u32)),
    )
}

pub(crate) fn mp_ur_ids(
    train: &Folksonomy,
    user: Option<UserId>,
    resource: Option<ResourceId>,
    beta: f64,
) -> Vec<(TagId, f64)> {
    let user_side = match user {
        Some(u) if beta > 0.0 => mp_u_ids(train, u),
        _ => Vec::new(),
    };
    let resource_side = match resource {
        Some(r) if beta < 1.0 => mp_r_ids(train, r),
        _ => Vec::new(),
    };
    merge_weighted(&user_side, beta, &resource_side, 1.0 - beta)
}

fn relative(counts: impl Iterator<Item = (TagId, u32)> + Clone) -> Vec<(TagId, f64)> {
    let total: u32 = counts.clone().map(|(_, n)| n).sum();
    if total == 0 {
        return Vec::new();
    }
    counts
        .map(|(t, n)| (t, f64::from(n) / f64::from(total)))
        .collect()
}
