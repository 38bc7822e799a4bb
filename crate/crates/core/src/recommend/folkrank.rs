//! FolkRank: PageRank-style weight spreading over the undirected
//! user–resource–tag graph, run once with a preference for the query user
//! and resource and once with a uniform preference. Tags are ranked by the
//! difference.

use std::collections::HashMap;

use super::Ranking;
use crate::folksonomy::{Folksonomy, ResourceId, TagId, UserId};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FolkrankParams {
    /// Share of weight passed along edges each step; the rest is reset to
    /// the preference vector.
    pub spread_lambda: f64,
    /// Stop once the L1 change between iterations drops below this.
    pub tolerance: f64,
    pub max_iter: usize,
    /// Extra preference mass on the query user and resource. `None` means
    /// the number of graph nodes.
    pub preference_boost: Option<f64>,
}

impl Default for FolkrankParams {
    fn default() -> Self {
        FolkrankParams {
            spread_lambda: 0.7,
            tolerance: 1e-8,
            max_iter: 200,
            preference_boost: None,
        }
    }
}

impl FolkrankParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.spread_lambda > 0.0 && self.spread_lambda < 1.0) {
            return Err(Error::BadParam(format!(
                "lambda must lie in (0, 1), got {}",
                self.spread_lambda
            )));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::BadParam("tolerance must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::BadParam("max_iter must be at least 1".into()));
        }
        if let Some(b) = self.preference_boost {
            if !(b >= 0.0 && b.is_finite()) {
                return Err(Error::BadParam(format!(
                    "preference boost must be >= 0, got {b}"
                )));
            }
        }
        Ok(())
    }
}

/// A vertex of the folksonomy graph, addressed by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    User(String),
    Resource(String),
    Tag(String),
}

/// Result of one spreading run. The weights are usable even when the run
/// stopped at `max_iter` without converging.
#[derive(Clone, Debug)]
pub struct Spread {
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

impl Spread {
    fn into_result(self) -> Result<Vec<f64>> {
        if self.converged {
            Ok(self.weights)
        } else {
            Err(Error::NoConvergence {
                iterations: self.iterations,
                residual: self.residual,
            })
        }
    }
}

/// Weighted undirected graph over users, resources and tags in CSR form.
///
/// Node order is users, then resources, then tags. Edge weights: user–tag
/// is the number of the user's posts carrying the tag, resource–tag the
/// number of posts assigning the tag to the resource, and user–resource is
/// 1 per post.
#[derive(Clone, Debug)]
pub struct TripartiteGraph {
    n_users: usize,
    n_resources: usize,
    n_tags: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    degree: Vec<f64>,
}

impl TripartiteGraph {
    pub fn new(f: &Folksonomy) -> TripartiteGraph {
        let (n_users, n_resources, n_tags) = (f.n_users(), f.n_resources(), f.n_tags());
        let n = n_users + n_resources + n_tags;
        let user = |u: UserId| u.index();
        let resource = |r: ResourceId| n_users + r.index();
        let tag = |t: TagId| n_users + n_resources + t.index();

        let mut edges: Vec<(u32, u32, f64)> = Vec::new();
        let mut push = |a: usize, b: usize, w: f64| {
            edges.push((a as u32, b as u32, w));
            edges.push((b as u32, a as u32, w));
        };
        for u in f.user_ids() {
            for (t, events) in f.user_tag_events(u) {
                push(user(u), tag(*t), events.len() as f64);
            }
        }
        for r in 0..n_resources as u32 {
            let r = ResourceId(r);
            for &(t, count) in f.resource_tag_counts(r) {
                push(resource(r), tag(t), f64::from(count));
            }
        }
        for p in f.post_records() {
            push(user(p.user), resource(p.resource), 1.0);
        }
        edges.sort_unstable_by_key(|e| (e.0, e.1));

        let mut offsets = vec![0usize; n + 1];
        for &(a, _, _) in &edges {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<u32> = edges.iter().map(|e| e.1).collect();
        let weights: Vec<f64> = edges.iter().map(|e| e.2).collect();
        let degree = (0..n)
            .map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();

        TripartiteGraph {
            n_users,
            n_resources,
            n_tags,
            offsets,
            targets,
            weights,
            degree,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_users + self.n_resources + self.n_tags
    }

    pub fn user_node(&self, u: UserId) -> usize {
        u.index()
    }

    pub fn resource_node(&self, r: ResourceId) -> usize {
        self.n_users + r.index()
    }

    pub fn tag_node(&self, t: TagId) -> usize {
        self.n_users + self.n_resources + t.index()
    }

    /// Iterates `w <- lambda * A * w + (1 - lambda) * p` from the uniform
    /// vector, where `A` is the column-normalized adjacency matrix and `p`
    /// is `preference` scaled to sum to 1. `preference` must be
    /// non-negative with positive sum.
    pub fn spread(&self, preference: &[f64], params: &FolkrankParams) -> Spread {
        let n = self.n_nodes();
        assert_eq!(
            preference.len(),
            n,
            "preference length must equal node count"
        );
        if n == 0 {
            return Spread {
                weights: Vec::new(),
                iterations: 0,
                residual: 0.0,
                converged: true,
            };
        }
        let total: f64 = preference.iter().sum();
        let reset: Vec<f64> = preference
            .iter()
            .map(|p| (1.0 - params.spread_lambda) * p / total)
            .collect();

        let mut w = vec![1.0 / n as f64; n];
        let mut next = vec![0.0; n];
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        while iterations < params.max_iter {
            next.copy_from_slice(&reset);
            for (j, (&wj, &deg)) in w.iter().zip(&self.degree).enumerate() {
                if deg == 0.0 {
                    continue;
                }
                let share = params.spread_lambda * wj / deg;
                for e in self.offsets[j]..self.offsets[j + 1] {
                    next[self.targets[e] as usize] += self.weights[e] * share;
                }
            }
            residual = w.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
            std::mem::swap(&mut w, &mut next);
            iterations += 1;
            if residual < params.tolerance {
                break;
            }
        }
        Spread {
            weights: w,
            iterations,
            residual,
            converged: residual < params.tolerance,
        }
    }

    /// Uniform mass 1 per node plus `boost` on each of the given nodes.
    fn boosted_preference(&self, boosted: &[usize], boost: f64) -> Vec<f64> {
        let mut p = vec![1.0; self.n_nodes()];
        for &i in boosted {
            p[i] += boost;
        }
        p
    }
}

/// Spreads weight from `preference` and returns the final weight of every
/// node. Nodes absent from `preference` get mass 0.
pub fn folkrank_weights(
    train: &Folksonomy,
    preference: &HashMap<Node, f64>,
    params: &FolkrankParams,
) -> Result<HashMap<Node, f64>> {
    params.validate()?;
    let graph = TripartiteGraph::new(train);
    let mut p = vec![0.0; graph.n_nodes()];
    for (node, &mass) in preference {
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::BadParam(format!(
                "preference mass {mass} for {node:?}"
            )));
        }
        let idx = match node {
            Node::User(name) => train.user_id(name).map(|u| graph.user_node(u)),
            Node::Resource(name) => train.resource_id(name).map(|r| graph.resource_node(r)),
            Node::Tag(name) => train.tag_id(name).map(|t| graph.tag_node(t)),
        }
        .ok_or_else(|| Error::BadParam(format!("preference names unknown node {node:?}")))?;
        p[idx] += mass;
    }
    let total: f64 = p.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::BadParam("preference masses are all zero".into()));
    }
    let weights = graph.spread(&p, params).into_result()?;

    let mut out = HashMap::with_capacity(weights.len());
    for u in train.user_ids() {
        out.insert(
            Node::User(train.user_name(u).to_owned()),
            weights[graph.user_node(u)],
        );
    }
    for r in 0..train.n_resources() as u32 {
        let r = ResourceId(r);
        out.insert(
            Node::Resource(train.resource_name(r).to_owned()),
            weights[graph.resource_node(r)],
        );
    }
    for t in train.tag_ids() {
        out.insert(
            Node::Tag(train.tag_name(t).to_owned()),
            weights[graph.tag_node(t)],
        );
    }
    Ok(out)
}

/// FolkRank prepared against one training folksonomy: the graph and the
/// uniform-preference baseline are computed once and shared by all queries.
#[derive(Clone, Debug)]
pub struct FolkRank {
    graph: TripartiteGraph,
    baseline: Vec<f64>,
    params: FolkrankParams,
}

impl FolkRank {
    pub fn new(train: &Folksonomy, params: FolkrankParams) -> Result<FolkRank> {
        params.validate()?;
        let graph = TripartiteGraph::new(train);
        let baseline = graph
            .spread(&vec![1.0; graph.n_nodes()], &params)
            .into_result()?;
        Ok(FolkRank {
            graph,
            baseline,
            params,
        })
    }

    pub fn recommend(&self, train: &Folksonomy, user: &str, resource: &str) -> Result<Ranking> {
        let scores = self.recommend_ids(train, train.user_id(user), train.resource_id(resource))?;
        Ok(Ranking::from_tag_scores(train, scores))
    }

    pub(crate) fn recommend_ids(
        &self,
        train: &Folksonomy,
        user: Option<UserId>,
        resource: Option<ResourceId>,
    ) -> Result<Vec<(TagId, f64)>> {
        let boosted: Vec<usize> = user
            .map(|u| self.graph.user_node(u))
            .into_iter()
            .chain(resource.map(|r| self.graph.resource_node(r)))
            .collect();
        let boost = self
            .params
            .preference_boost
            .unwrap_or(self.graph.n_nodes() as f64);

        let preferred = if boosted.is_empty() || boost == 0.0 {
            self.baseline.clone()
        } else {
            let pref = self.graph.boosted_preference(&boosted, boost);
            self.graph.spread(&pref, &self.params).into_result()?
        };
        Ok(train
            .tag_ids()
            .map(|t| {
                let i = self.graph.tag_node(t);
                (t, preferred[i] - self.baseline[i])
            })
            .collect())
    }
}

/// Ranks every training tag by preference-biased minus baseline weight.
pub fn folkrank_recommend(
    train: &Folksonomy,
    user: &str,
    resource: &str,
    params: &FolkrankParams,
) -> Result<Ranking> {
    FolkRank::new(train, *params)?.recommend(train, user, resource)
}
