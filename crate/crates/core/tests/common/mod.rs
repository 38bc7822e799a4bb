//! Test-only oracles and generators. Nothing here calls into the code paths
//! it is used to check: every oracle works from the public post list.
#![allow(dead_code)]

pub mod synth;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use folkrec_core::recommend::Node;
use folkrec_core::{Folksonomy, Post, TagAssignment};
use rand::Rng;

pub fn assignment(u: &str, r: &str, t: &str, ts: i64) -> TagAssignment {
    TagAssignment {
        user_id: u.into(),
        resource_id: r.into(),
        tag: t.into(),
        timestamp: ts,
    }
}

pub fn build(rows: &[(&str, &str, &str, i64)]) -> Folksonomy {
    Folksonomy::from_assignments(rows.iter().map(|&(u, r, t, ts)| assignment(u, r, t, ts)))
}

/// Small random folksonomy: up to `max_posts` posts over the given entity
/// pools, each post carrying 1..=3 tags.
pub fn random_folksonomy<R: Rng>(
    rng: &mut R,
    users: usize,
    resources: usize,
    tags: usize,
    max_posts: usize,
) -> Folksonomy {
    let n_posts = rng.random_range(1..=max_posts);
    let mut rows = Vec::new();
    for _ in 0..n_posts {
        let u = format!("u{}", rng.random_range(0..users));
        let r = format!("r{}", rng.random_range(0..resources));
        let ts = rng.random_range(0..50i64);
        for _ in 0..rng.random_range(1..=3) {
            let t = format!("t{}", rng.random_range(0..tags));
            rows.push(assignment(&u, &r, &t, ts));
        }
    }
    Folksonomy::from_assignments(rows)
}

pub type PostKey = (String, String);

/// Maximal p-core by exhaustive enumeration of post subsets. A subset is
/// valid when every user, resource and tag occurring in it occurs in at
/// least `p` of its posts; valid subsets are closed under union, so the
/// union of all of them is the unique maximum.
pub fn brute_force_p_core(posts: &[Post], p: usize) -> BTreeSet<PostKey> {
    assert!(posts.len() <= 16, "enumeration is exponential");
    let n = posts.len();
    let mut union_mask = 0u32;
    let mut best_mask = 0u32;
    for mask in 0u32..(1 << n) {
        let mut counts: HashMap<(u8, &str), usize> = HashMap::new();
        for (i, post) in posts.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            *counts.entry((0, &post.user_id)).or_default() += 1;
            *counts.entry((1, &post.resource_id)).or_default() += 1;
            for t in &post.tags {
                *counts.entry((2, t)).or_default() += 1;
            }
        }
        if counts.values().all(|&c| c >= p) {
            union_mask |= mask;
            if mask.count_ones() > best_mask.count_ones() {
                best_mask = mask;
            }
        }
    }
    assert_eq!(union_mask, best_mask, "maximal valid subset must be unique");
    posts
        .iter()
        .enumerate()
        .filter(|(i, _)| union_mask & (1 << i) != 0)
        .map(|(_, p)| (p.user_id.clone(), p.resource_id.clone()))
        .collect()
}

pub fn post_keys(f: &Folksonomy) -> BTreeSet<PostKey> {
    f.posts().map(|p| (p.user_id, p.resource_id)).collect()
}

/// Dense-matrix weight spreading on the user/resource/tag graph, built
/// straight from the post list.
pub struct DenseFolkRank {
    pub nodes: Vec<Node>,
    matrix: Vec<Vec<f64>>,
}

impl DenseFolkRank {
    pub fn new(posts: &[Post]) -> Self {
        let mut nodes: BTreeSet<Node> = BTreeSet::new();
        for p in posts {
            nodes.insert(Node::User(p.user_id.clone()));
            nodes.insert(Node::Resource(p.resource_id.clone()));
            for t in &p.tags {
                nodes.insert(Node::Tag(t.clone()));
            }
        }
        let nodes: Vec<Node> = nodes.into_iter().collect();
        let index: HashMap<&Node, usize> = nodes.iter().enumerate().map(|(i, n)| (n, i)).collect();
        let n = nodes.len();
        let mut w = vec![vec![0.0; n]; n];
        let mut add = |a: &Node, b: &Node| {
            let (i, j) = (index[a], index[b]);
            w[i][j] += 1.0;
            w[j][i] += 1.0;
        };
        for p in posts {
            let u = Node::User(p.user_id.clone());
            let r = Node::Resource(p.resource_id.clone());
            add(&u, &r);
            for t in &p.tags {
                let t = Node::Tag(t.clone());
                add(&u, &t);
                add(&r, &t);
            }
        }
        // Column-normalize.
        for j in 0..n {
            let col: f64 = (0..n).map(|i| w[i][j]).sum();
            if col > 0.0 {
                for row in w.iter_mut() {
                    row[j] /= col;
                }
            }
        }
        DenseFolkRank { nodes, matrix: w }
    }

    /// Returns the weights, the number of iterations and the final residual.
    pub fn spread(
        &self,
        preference: &HashMap<Node, f64>,
        lambda: f64,
        tolerance: f64,
        max_iter: usize,
    ) -> (HashMap<Node, f64>, usize, f64) {
        let n = self.nodes.len();
        let total: f64 = preference.values().sum();
        let p: Vec<f64> = self
            .nodes
            .iter()
            .map(|node| preference.get(node).copied().unwrap_or(0.0) / total)
            .collect();
        let mut w = vec![1.0 / n as f64; n];
        let mut iterations = 0;
        let mut residual = f64::INFINITY;
        while iterations < max_iter {
            let next: Vec<f64> = (0..n)
                .map(|i| {
                    lambda * (0..n).map(|j| self.matrix[i][j] * w[j]).sum::<f64>()
                        + (1.0 - lambda) * p[i]
                })
                .collect();
            residual = w.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            w = next;
            iterations += 1;
            if residual < tolerance {
                break;
            }
        }
        (
            self.nodes.iter().cloned().zip(w).collect(),
            iterations,
            residual,
        )
    }
}

pub fn l1_distance(a: &HashMap<Node, f64>, b: &HashMap<Node, f64>) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().map(|(k, v)| (v - b[k]).abs()).sum()
}

/// nDCG@k straight from the definition.
pub fn direct_ndcg(recommended: &[String], relevant: &BTreeSet<String>, k: usize) -> f64 {
    let mut dcg = 0.0;
    for (i, tag) in recommended.iter().take(k).enumerate() {
        if relevant.contains(tag) {
            dcg += 1.0 / ((i + 1) as f64 + 1.0).log2();
        }
    }
    let mut idcg = 0.0;
    for i in 1..=k.min(relevant.len()) {
        idcg += 1.0 / (i as f64 + 1.0).log2();
    }
    dcg / idcg
}

/// (precision, recall, f1) straight from the definition.
pub fn direct_set_metrics(
    recommended: &[String],
    relevant: &BTreeSet<String>,
    k: usize,
) -> (f64, f64, f64) {
    let top = &recommended[..recommended.len().min(k)];
    if top.is_empty() {
        return (0.0, 0.0, 0.0);
    }
    let hits = top.iter().filter(|t| relevant.contains(*t)).count() as f64;
    let p = hits / top.len() as f64;
    let r = hits / relevant.len() as f64;
    let f1 = if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    };
    (p, r, f1)
}

/// Random (ranking tags, relevant set, k) case over a small vocabulary.
pub fn random_metric_case<R: Rng>(rng: &mut R) -> (Vec<String>, BTreeSet<String>, usize) {
    let vocab = 20;
    let len = rng.random_range(0..=15);
    let mut pool: Vec<usize> = (0..vocab).collect();
    for i in 0..len {
        let j = rng.random_range(i..vocab);
        pool.swap(i, j);
    }
    let recommended: Vec<String> = pool[..len].iter().map(|i| format!("t{i:02}")).collect();
    let n_rel = rng.random_range(1..=6);
    let relevant: BTreeSet<String> = (0..n_rel)
        .map(|_| format!("t{:02}", rng.random_range(0..vocab)))
        .collect();
    let k = rng.random_range(1..=12);
    (recommended, relevant, k)
}

/// Ranking whose order is exactly `tags`.
pub fn ranking_of(tags: &[String]) -> folkrec_core::Ranking {
    let n = tags.len() as f64;
    folkrec_core::Ranking::from_scores(
        tags.iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), n - i as f64)),
    )
}

pub fn count_map<I: IntoIterator<Item = String>>(it: I) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for s in it {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}
