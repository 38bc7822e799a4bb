//! Synthetic narrow folksonomy with drifting user interests.
//!
//! Tags are grouped into topics. Each user has a personal, Zipf-weighted
//! list of favourite topics and, within each topic, a personal Zipf-weighted
//! ordering of its tags, so every user reuses a few tags heavily.
//!
//! Drift: a user is always "in" one topic. Before each post the user moves
//! to a freshly drawn topic with probability `switch_prob`, otherwise stays.
//! Tags of the next post come from the current topic, so the tags of the
//! most recent posts predict it better than lifetime tag frequencies do.
//!
//! Narrowness: most posts annotate a brand-new resource. With probability
//! `reuse_prob` the user instead picks an existing resource of the current
//! topic; if they have already tagged it a new one is created instead.
//! This gives |P|/|R| of at most 1 / (1 - reuse_prob).

use std::collections::{HashMap, HashSet};

use folkrec_core::TagAssignment;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct SynthConfig {
    pub users: usize,
    pub min_posts: usize,
    pub max_posts: usize,
    pub topics: usize,
    pub tags_per_topic: usize,
    /// Favourite topics per user.
    pub topics_per_user: usize,
    pub switch_prob: f64,
    pub reuse_prob: f64,
    pub max_tags_per_post: usize,
    pub zipf_exponent: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            users: 600,
            min_posts: 3,
            max_posts: 20,
            topics: 120,
            tags_per_topic: 12,
            topics_per_user: 6,
            switch_prob: 0.35,
            reuse_prob: 0.2,
            max_tags_per_post: 3,
            zipf_exponent: 1.1,
            seed: 1,
        }
    }
}

fn zipf(n: usize, s: f64) -> WeightedIndex<f64> {
    WeightedIndex::new((1..=n).map(|i| 1.0 / (i as f64).powf(s))).expect("n > 0")
}

/// Generates assignments in user order, each user's posts in time order.
pub fn generate(cfg: &SynthConfig) -> Vec<TagAssignment> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let topic_zipf = zipf(cfg.topics_per_user, 1.0);
    let tag_zipf = zipf(cfg.tags_per_topic, cfg.zipf_exponent);
    let mut topic_resources: HashMap<usize, Vec<(usize, String)>> = HashMap::new();
    let mut next_resource = 0usize;
    let mut out = Vec::new();

    for user in 0..cfg.users {
        let user_id = format!("user{user:05}");
        let mut favourites: Vec<usize> = (0..cfg.topics).collect();
        favourites.shuffle(&mut rng);
        favourites.truncate(cfg.topics_per_user);
        // Personal tag order per topic, fixed for the user's lifetime.
        let mut tag_order: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut mine: HashSet<String> = HashSet::new();

        let n_posts = rng.random_range(cfg.min_posts..=cfg.max_posts);
        let mut topic = favourites[topic_zipf.sample(&mut rng)];
        let mut ts: i64 = rng.random_range(0..1_000_000);

        for _ in 0..n_posts {
            if rng.random::<f64>() < cfg.switch_prob {
                topic = favourites[topic_zipf.sample(&mut rng)];
            }
            ts += rng.random_range(3_600..7 * 86_400);

            let candidates = topic_resources.entry(topic).or_default();
            let reused = if !candidates.is_empty() && rng.random::<f64>() < cfg.reuse_prob {
                let (owner, r) = &candidates[rng.random_range(0..candidates.len())];
                (*owner != user && !mine.contains(r)).then(|| r.clone())
            } else {
                None
            };
            let resource = reused.unwrap_or_else(|| {
                let r = format!("res{next_resource:07}");
                next_resource += 1;
                candidates.push((user, r.clone()));
                r
            });
            mine.insert(resource.clone());

            let order = tag_order.entry(topic).or_insert_with(|| {
                let mut v: Vec<usize> = (0..cfg.tags_per_topic).collect();
                v.shuffle(&mut rng);
                v
            });
            let n_tags = rng.random_range(1..=cfg.max_tags_per_post.min(cfg.tags_per_topic));
            let mut picked = Vec::with_capacity(n_tags);
            while picked.len() < n_tags {
                let local = order[tag_zipf.sample(&mut rng)];
                if !picked.contains(&local) {
                    picked.push(local);
                }
            }
            for local in picked {
                out.push(TagAssignment {
                    user_id: user_id.clone(),
                    resource_id: resource.clone(),
                    tag: format!("topic{topic:03}_tag{local:02}"),
                    timestamp: ts,
                });
            }
        }
    }
    out
}

pub fn to_tsv(assignments: &[TagAssignment]) -> String {
    let mut s = String::with_capacity(assignments.len() * 40);
    for a in assignments {
        s.push_str(&a.user_id);
        s.push('\t');
        s.push_str(&a.resource_id);
        s.push('\t');
        s.push_str(&a.tag);
        s.push('\t');
        s.push_str(&a.timestamp.to_string());
        s.push('\n');
    }
    s
}
