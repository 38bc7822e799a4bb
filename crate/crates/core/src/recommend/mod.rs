//! Tag recommenders.
//!
//! Every recommender is a pure function of a training [`Folksonomy`] and a
//! (user, resource) query and returns a [`Ranking`]. Unknown users and
//! resources are not errors; they simply contribute no candidates.
//!
//! | name     | scores a tag by                                                |
//! |----------|----------------------------------------------------------------|
//! | MP_r     | how often it was assigned to the resource                      |
//! | MP_u     | how often the user assigned it                                 |
//! | MP_ur    | convex mix of the two relative frequencies                     |
//! | CF       | cosine-weighted votes of similar users on the resource         |
//! | FolkRank | preference-biased minus unbiased weight spreading              |
//! | GIRPTM   | frequency times exponential recency (surrogate), mixed with MP_r |
//! | ACT-R    | base-level activation plus context association, mixed with MP_r |

mod actr;
mod cf;
mod folkrank;
mod girptm;
mod popularity;

use std::cmp::Ordering;
use std::collections::BTreeMap;

pub use actr::{
    actr_recommend, associative_activation, base_level_activation, bll_activation, ActrParams,
};
pub use cf::{cf_neighbors, cf_recommend, DEFAULT_NEIGHBORS};
pub use folkrank::{
    folkrank_recommend, folkrank_weights, FolkRank, FolkrankParams, Node, Spread, TripartiteGraph,
};
pub use girptm::{girptm_recommend, GirptmParams};
pub use popularity::{mp_r, mp_u, mp_ur};

pub(crate) use actr::actr_recommend_ids;
pub(crate) use cf::cf_recommend_ids;
pub(crate) use girptm::girptm_recommend_ids;
pub(crate) use popularity::{mp_r_ids, mp_ur_ids};

use crate::folksonomy::{Folksonomy, TagId};
use crate::{Error, Result};

/// Tags with scores, descending by score, ties broken by ascending tag.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Ranking {
    entries: Vec<(String, f64)>,
}

impl Ranking {
    /// Sorts arbitrary (tag, score) pairs. When a tag appears more than once
    /// its highest score wins.
    ///
    /// Panics if a score is not finite.
    pub fn from_scores<I>(scores: I) -> Ranking
    where
        I: IntoIterator<Item = (String, f64)>,
    {
        let mut entries: Vec<(String, f64)> = scores.into_iter().collect();
        assert!(
            entries.iter().all(|(_, s)| s.is_finite()),
            "ranking scores must be finite"
        );
        entries.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.total_cmp(&a.1)));
        entries.dedup_by(|later, earlier| later.0 == earlier.0);
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        Ranking { entries }
    }

    /// `scores` must not repeat a tag id.
    pub(crate) fn from_tag_scores(f: &Folksonomy, mut scores: Vec<(TagId, f64)>) -> Ranking {
        debug_assert!(scores.iter().all(|(_, s)| s.is_finite()));
        scores.sort_unstable_by(|a, b| {
            b.1.total_cmp(&a.1)
                .then_with(|| f.tag_lex_rank(a.0).cmp(&f.tag_lex_rank(b.0)))
        });
        Ranking {
            entries: scores
                .into_iter()
                .map(|(t, s)| (f.tag_name(t).to_owned(), s))
                .collect(),
        }
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.entries
    }

    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(t, _)| t.as_str())
    }

    pub fn score(&self, tag: &str) -> Option<f64> {
        self.entries.iter().find(|(t, _)| t == tag).map(|&(_, s)| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn truncate(&mut self, k: usize) {
        self.entries.truncate(k);
    }

    /// True when entries are strictly ordered by (score desc, tag asc) and
    /// every score is finite.
    pub fn is_well_formed(&self) -> bool {
        self.entries.iter().all(|(_, s)| s.is_finite())
            && self
                .entries
                .windows(2)
                .all(|w| match w[1].1.total_cmp(&w[0].1) {
                    Ordering::Less => true,
                    Ordering::Equal => w[0].0 < w[1].0,
                    Ordering::Greater => false,
                })
    }
}

/// Softmax over a score map, computed with max subtraction.
pub fn normalize_softmax<K: Ord + Clone>(scores: &BTreeMap<K, f64>) -> Result<BTreeMap<K, f64>> {
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    if scores.values().any(|v| !v.is_finite()) {
        return Err(Error::BadParam("softmax input must be finite".into()));
    }
    let mut values: Vec<f64> = scores.values().copied().collect();
    softmax_in_place(&mut values);
    Ok(scores.keys().cloned().zip(values).collect())
}

pub(crate) fn softmax_in_place(values: &mut [f64]) {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in values.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in values.iter_mut() {
        *v /= sum;
    }
}

/// Convex combination `beta * user + (1 - beta) * resource` of two
/// softmax-normalized logit lists, each sorted by tag id. A side whose
/// weight is zero contributes neither mass nor candidates.
pub(crate) fn mix_softmax(
    mut user: Vec<(TagId, f64)>,
    mut resource: Vec<(TagId, f64)>,
    beta: f64,
) -> Vec<(TagId, f64)> {
    if beta == 0.0 {
        user.clear();
    }
    if beta == 1.0 {
        resource.clear();
    }
    for side in [&mut user, &mut resource] {
        if !side.is_empty() {
            let mut values: Vec<f64> = side.iter().map(|&(_, v)| v).collect();
            softmax_in_place(&mut values);
            for ((_, v), s) in side.iter_mut().zip(values) {
                *v = s;
            }
        }
    }
    merge_weighted(&user, beta, &resource, 1.0 - beta)
}

/// Merges two tag-id-sorted lists into `wa * a + wb * b` over their union.
pub(crate) fn merge_weighted(
    a: &[(TagId, f64)],
    wa: f64,
    b: &[(TagId, f64)],
    wb: f64,
) -> Vec<(TagId, f64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x.0 == y.0 => {
                i += 1;
                j += 1;
                (x.0, wa * x.1 + wb * y.1)
            }
            (Some(x), Some(y)) if x.0 < y.0 => {
                i += 1;
                (x.0, wa * x.1)
            }
            (Some(x), None) => {
                i += 1;
                (x.0, wa * x.1)
            }
            (_, Some(y)) => {
                j += 1;
                (y.0, wb * y.1)
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::BadParam(format!(
            "beta must lie in [0, 1], got {beta}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softmax_symmetric() {
        let m = BTreeMap::from([("a", 0.0), ("b", 0.0)]);
        let s = normalize_softmax(&m).unwrap();
        assert_eq!(s["a"], 0.5);
        assert_eq!(s["b"], 0.5);
    }

    #[test]
    fn softmax_ln2_ratio() {
        let m = BTreeMap::from([("a", 2f64.ln()), ("b", 0.0)]);
        let s = normalize_softmax(&m).unwrap();
        assert!((s["a"] - 2.0 / 3.0).abs() < 1e-12);
        assert!((s["b"] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn softmax_empty_and_nan() {
        assert!(matches!(
            normalize_softmax::<&str>(&BTreeMap::new()),
            Err(Error::EmptyInput)
        ));
        let m = BTreeMap::from([("a", f64::NAN)]);
        assert!(normalize_softmax(&m).is_err());
    }

    #[test]
    fn softmax_large_inputs_stay_finite() {
        let m = BTreeMap::from([("a", 1000.0), ("b", 999.0)]);
        let s = normalize_softmax(&m).unwrap();
        assert!((s["a"] + s["b"] - 1.0).abs() < 1e-12);
        assert!(s["a"] > s["b"]);
    }

    #[test]
    fn ranking_sort_and_dedup() {
        let r = Ranking::from_scores(vec![
            ("rock".to_string(), 1.0),
            ("pop".to_string(), 1.0),
            ("jazz".to_string(), 2.0),
            ("pop".to_string(), 0.5),
        ]);
        assert_eq!(r.tags().collect::<Vec<_>>(), vec!["jazz", "pop", "rock"]);
        assert_eq!(r.score("pop"), Some(1.0));
        assert!(r.is_well_formed());
    }

    #[test]
    #[should_panic(expected = "finite")]
    fn ranking_rejects_nan() {
        Ranking::from_scores(vec![("a".to_string(), f64::NAN)]);
    }

    #[test]
    fn merge_covers_union() {
        let a = [(TagId(0), 1.0), (TagId(2), 1.0)];
        let b = [(TagId(1), 1.0), (TagId(2), 1.0)];
        let m = merge_weighted(&a, 0.25, &b, 0.75);
        assert_eq!(m, vec![(TagId(0), 0.25), (TagId(1), 0.75), (TagId(2), 1.0)]);
    }

    #[test]
    fn activation_chain_hand_oracle() {
        // B = {rock: 0, pop: -1.7680}; one cue `a` with P(rock|a) = 0 and
        // P(pop|a) = 1 gives A = {rock: 0, pop: -0.7680}. The resource
        // carries only `a`, once.
        let (rock, pop, a) = (TagId(0), TagId(1), TagId(2));
        let bll_pop = (100f64.powf(-0.5) + 200f64.powf(-0.5)).ln();
        let user = vec![(rock, 0.0 + 0.0), (pop, bll_pop + 1.0)];
        let mixed = mix_softmax(user, vec![(a, 1.0)], 0.5);

        let e = (bll_pop + 1.0).exp();
        let expected = [
            (rock, 0.5 / (1.0 + e)),
            (pop, 0.5 * e / (1.0 + e)),
            (a, 0.5),
        ];
        for ((t, s), (et, es)) in mixed.iter().zip(expected) {
            assert_eq!(*t, et);
            assert!((s - es).abs() < 1e-15);
        }
        assert!((mixed[0].1 - 0.3415).abs() < 1e-4);
        assert!((mixed[1].1 - 0.1585).abs() < 1e-4);
    }

    #[test]
    fn zero_weight_side_drops_candidates() {
        let user = vec![(TagId(0), 3.0)];
        let resource = vec![(TagId(1), 1.0)];
        assert_eq!(
            mix_softmax(user.clone(), resource.clone(), 1.0),
            vec![(TagId(0), 1.0)]
        );
        assert_eq!(mix_softmax(user, resource, 0.0), vec![(TagId(1), 1.0)]);
    }

    #[test]
    fn beta_bounds() {
        assert!(check_beta(0.0).is_ok());
        assert!(check_beta(1.0).is_ok());
        assert!(check_beta(1.1).is_err());
        assert!(check_beta(f64::NAN).is_err());
    }
}
