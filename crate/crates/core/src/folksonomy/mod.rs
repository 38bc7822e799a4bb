//! The indexed folksonomy: users, resources, tags, their assignments and
//! the posts that group them, plus the derived lookup tables every
//! recommender reads from.
//!
//! A [`Folksonomy`] is immutable once built. Pruning and splitting produce
//! new folksonomies by re-indexing a subset of posts.

mod parse;
mod pcore;
mod split;
mod stats;

use std::collections::HashMap;
use std::io::{self, Write};

pub use parse::{parse_dataset, ParseOptions};
pub use pcore::p_core;
pub use split::{split_leave_latest, write_posts_tsv, SplitPair};
pub use stats::{compute_stats, DatasetStats};

use crate::{Error, Result};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(pub(crate) u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }
    };
}

id_type!(
    /// Dense index of a user within one folksonomy.
    UserId
);
id_type!(
    /// Dense index of a resource within one folksonomy.
    ResourceId
);
id_type!(
    /// Dense index of a tag within one folksonomy.
    TagId
);

/// One (user, resource, tag, timestamp) tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TagAssignment {
    pub user_id: String,
    pub resource_id: String,
    pub tag: String,
    pub timestamp: i64,
}

/// All tags one user gave one resource, treated as a single tagging event.
///
/// `tags` is sorted and deduplicated; `timestamp` is the earliest
/// timestamp among the post's assignments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Post {
    pub user_id: String,
    pub resource_id: String,
    pub tags: Vec<String>,
    pub timestamp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PostRecord {
    pub(crate) user: UserId,
    pub(crate) resource: ResourceId,
    /// Sorted by tag id.
    pub(crate) tags: Vec<TagId>,
    pub(crate) timestamp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct AssignmentRecord {
    post: u32,
    tag: TagId,
    timestamp: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }
}

/// Incrementally groups assignments into posts. Entity ids are assigned in
/// order of first appearance, so rebuilding from the same ordered
/// assignments yields an identical folksonomy.
#[derive(Default)]
pub(crate) struct Builder {
    users: Interner,
    resources: Interner,
    tags: Interner,
    posts: Vec<PostRecord>,
    post_lookup: HashMap<(UserId, ResourceId), u32>,
    assignments: Vec<AssignmentRecord>,
    assignment_lookup: HashMap<(u32, TagId), usize>,
}

impl Builder {
    pub(crate) fn add(&mut self, user: &str, resource: &str, tag: &str, timestamp: i64) {
        let user = UserId(self.users.intern(user));
        let resource = ResourceId(self.resources.intern(resource));
        let tag = TagId(self.tags.intern(tag));

        let posts = &mut self.posts;
        let post = *self.post_lookup.entry((user, resource)).or_insert_with(|| {
            posts.push(PostRecord {
                user,
                resource,
                tags: Vec::new(),
                timestamp,
            });
            (posts.len() - 1) as u32
        });
        let record = &mut self.posts[post as usize];
        record.timestamp = record.timestamp.min(timestamp);

        match self.assignment_lookup.get(&(post, tag)) {
            Some(&i) => {
                let a = &mut self.assignments[i];
                a.timestamp = a.timestamp.min(timestamp);
            }
            None => {
                self.assignment_lookup
                    .insert((post, tag), self.assignments.len());
                self.assignments.push(AssignmentRecord {
                    post,
                    tag,
                    timestamp,
                });
                record.tags.push(tag);
            }
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub(crate) fn finish(self) -> Folksonomy {
        let Builder {
            users,
            resources,
            tags,
            mut posts,
            post_lookup,
            assignments,
            ..
        } = self;
        for p in &mut posts {
            p.tags.sort_unstable();
        }
        let n_users = users.names.len();
        let n_resources = resources.names.len();
        let n_tags = tags.names.len();

        let mut user_posts = vec![Vec::new(); n_users];
        let mut resource_posts = vec![Vec::new(); n_resources];
        for (i, p) in posts.iter().enumerate() {
            user_posts[p.user.index()].push(i as u32);
            resource_posts[p.resource.index()].push(i as u32);
        }
        for list in &mut user_posts {
            list.sort_by_key(|&i| (posts[i as usize].timestamp, i));
        }

        // (user, tag, timestamp) triples, grouped after sorting.
        let mut usage: Vec<(UserId, TagId, i64)> = posts
            .iter()
            .flat_map(|p| p.tags.iter().map(move |&t| (p.user, t, p.timestamp)))
            .collect();
        usage.sort_unstable();
        let mut user_tag_events: Vec<Vec<(TagId, Vec<i64>)>> = vec![Vec::new(); n_users];
        for (u, t, ts) in usage {
            let events = &mut user_tag_events[u.index()];
            match events.last_mut() {
                Some((last, times)) if *last == t => times.push(ts),
                _ => events.push((t, vec![ts])),
            }
        }

        let mut pairs: Vec<(ResourceId, TagId)> = posts
            .iter()
            .flat_map(|p| p.tags.iter().map(move |&t| (p.resource, t)))
            .collect();
        pairs.sort_unstable();
        let mut resource_tag_counts: Vec<Vec<(TagId, u32)>> = vec![Vec::new(); n_resources];
        for (r, t) in pairs {
            let counts = &mut resource_tag_counts[r.index()];
            match counts.last_mut() {
                Some((last, n)) if *last == t => *n += 1,
                _ => counts.push((t, 1)),
            }
        }

        let mut tag_post_count = vec![0u32; n_tags];
        let mut tag_pair_post_count: HashMap<(TagId, TagId), u32> = HashMap::new();
        for p in &posts {
            for (i, &a) in p.tags.iter().enumerate() {
                tag_post_count[a.index()] += 1;
                for &b in &p.tags[i + 1..] {
                    *tag_pair_post_count.entry((a, b)).or_insert(0) += 1;
                }
            }
        }

        let mut tag_users: Vec<Vec<UserId>> = vec![Vec::new(); n_tags];
        for (u, events) in user_tag_events.iter().enumerate() {
            for (t, _) in events {
                tag_users[t.index()].push(UserId(u as u32));
            }
        }

        let mut by_name: Vec<u32> = (0..n_tags as u32).collect();
        by_name.sort_unstable_by(|&a, &b| tags.names[a as usize].cmp(&tags.names[b as usize]));
        let mut tag_lex_rank = vec![0u32; n_tags];
        for (rank, &t) in by_name.iter().enumerate() {
            tag_lex_rank[t as usize] = rank as u32;
        }

        Folksonomy {
            users,
            resources,
            tags,
            posts,
            assignments,
            post_lookup,
            user_posts,
            resource_posts,
            user_tag_events,
            resource_tag_counts,
            tag_post_count,
            tag_pair_post_count,
            tag_users,
            tag_lex_rank,
        }
    }
}

/// The indexed corpus.
///
/// Ids ([`UserId`], [`ResourceId`], [`TagId`]) are dense indices local to one
/// folksonomy; a pruned or split folksonomy assigns fresh ids. Every
/// per-entity list is stored in a fixed order so iteration never depends on
/// hashing.
#[derive(Clone, Debug)]
pub struct Folksonomy {
    users: Interner,
    resources: Interner,
    tags: Interner,
    posts: Vec<PostRecord>,
    assignments: Vec<AssignmentRecord>,
    post_lookup: HashMap<(UserId, ResourceId), u32>,
    /// Ascending by timestamp.
    user_posts: Vec<Vec<u32>>,
    resource_posts: Vec<Vec<u32>>,
    /// Per user, sorted by tag id; usage timestamps ascending.
    user_tag_events: Vec<Vec<(TagId, Vec<i64>)>>,
    /// Per resource, sorted by tag id.
    resource_tag_counts: Vec<Vec<(TagId, u32)>>,
    tag_post_count: Vec<u32>,
    /// Keyed by (smaller id, larger id).
    tag_pair_post_count: HashMap<(TagId, TagId), u32>,
    tag_users: Vec<Vec<UserId>>,
    tag_lex_rank: Vec<u32>,
}

impl PartialEq for Folksonomy {
    fn eq(&self, other: &Self) -> bool {
        // Everything else is derived from these.
        self.users.names == other.users.names
            && self.resources.names == other.resources.names
            && self.tags.names == other.tags.names
            && self.posts == other.posts
            && self.assignments == other.assignments
    }
}

impl Folksonomy {
    /// Builds a folksonomy from already-normalized assignments. Duplicate
    /// (user, resource, tag) triples collapse to the earliest one.
    pub fn from_assignments<I>(assignments: I) -> Folksonomy
    where
        I: IntoIterator<Item = TagAssignment>,
    {
        let mut b = Builder::default();
        for a in assignments {
            b.add(&a.user_id, &a.resource_id, &a.tag, a.timestamp);
        }
        b.finish()
    }

    /// Rebuilds from the assignments of the posts for which `keep` holds,
    /// preserving their original order.
    pub(crate) fn retain_posts(&self, keep: impl Fn(usize) -> bool) -> Folksonomy {
        let mut b = Builder::default();
        for a in &self.assignments {
            if keep(a.post as usize) {
                let p = &self.posts[a.post as usize];
                b.add(
                    self.user_name(p.user),
                    self.resource_name(p.resource),
                    self.tag_name(a.tag),
                    a.timestamp,
                );
            }
        }
        b.finish()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }
    pub fn n_users(&self) -> usize {
        self.users.names.len()
    }
    pub fn n_resources(&self) -> usize {
        self.resources.names.len()
    }
    pub fn n_tags(&self) -> usize {
        self.tags.names.len()
    }
    pub fn n_assignments(&self) -> usize {
        self.assignments.len()
    }
    pub fn n_posts(&self) -> usize {
        self.posts.len()
    }

    pub fn user_id(&self, name: &str) -> Option<UserId> {
        self.users.get(name).map(UserId)
    }
    pub fn resource_id(&self, name: &str) -> Option<ResourceId> {
        self.resources.get(name).map(ResourceId)
    }
    pub fn tag_id(&self, name: &str) -> Option<TagId> {
        self.tags.get(name).map(TagId)
    }

    pub fn user_name(&self, id: UserId) -> &str {
        &self.users.names[id.index()]
    }
    pub fn resource_name(&self, id: ResourceId) -> &str {
        &self.resources.names[id.index()]
    }
    pub fn tag_name(&self, id: TagId) -> &str {
        &self.tags.names[id.index()]
    }

    pub fn users(&self) -> impl Iterator<Item = &str> {
        self.users.names.iter().map(String::as_str)
    }
    pub fn resources(&self) -> impl Iterator<Item = &str> {
        self.resources.names.iter().map(String::as_str)
    }
    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.tags.names.iter().map(String::as_str)
    }

    pub fn user_ids(&self) -> impl Iterator<Item = UserId> {
        (0..self.n_users() as u32).map(UserId)
    }
    pub fn tag_ids(&self) -> impl Iterator<Item = TagId> {
        (0..self.n_tags() as u32).map(TagId)
    }

    /// The `i`-th post in construction order.
    pub fn post(&self, i: usize) -> Post {
        let p = &self.posts[i];
        let mut tags: Vec<String> = p
            .tags
            .iter()
            .map(|&t| self.tag_name(t).to_owned())
            .collect();
        tags.sort_unstable();
        Post {
            user_id: self.user_name(p.user).to_owned(),
            resource_id: self.resource_name(p.resource).to_owned(),
            tags,
            timestamp: p.timestamp,
        }
    }

    pub fn posts(&self) -> impl Iterator<Item = Post> + '_ {
        (0..self.posts.len()).map(|i| self.post(i))
    }

    pub(crate) fn post_records(&self) -> &[PostRecord] {
        &self.posts
    }

    pub fn assignments(&self) -> impl Iterator<Item = TagAssignment> + '_ {
        self.assignments.iter().map(|a| {
            let p = &self.posts[a.post as usize];
            TagAssignment {
                user_id: self.user_name(p.user).to_owned(),
                resource_id: self.resource_name(p.resource).to_owned(),
                tag: self.tag_name(a.tag).to_owned(),
                timestamp: a.timestamp,
            }
        })
    }

    /// Index of the post `user` made on `resource`, if any.
    pub fn post_index(&self, user: UserId, resource: ResourceId) -> Option<usize> {
        self.post_lookup.get(&(user, resource)).map(|&i| i as usize)
    }

    /// Post indices of `user`, ascending by timestamp.
    pub fn user_post_indices(&self, user: UserId) -> &[u32] {
        &self.user_posts[user.index()]
    }

    pub fn resource_post_indices(&self, resource: ResourceId) -> &[u32] {
        &self.resource_posts[resource.index()]
    }

    pub(crate) fn post_tags(&self, i: usize) -> &[TagId] {
        &self.posts[i].tags
    }

    /// Per tag used by `user`: the timestamps (ascending) of the posts in
    /// which the user assigned it. Sorted by tag id.
    pub fn user_tag_events(&self, user: UserId) -> &[(TagId, Vec<i64>)] {
        &self.user_tag_events[user.index()]
    }

    /// Per tag on `resource`: the number of posts assigning it. Sorted by
    /// tag id.
    pub fn resource_tag_counts(&self, resource: ResourceId) -> &[(TagId, u32)] {
        &self.resource_tag_counts[resource.index()]
    }

    /// Number of posts containing `tag`.
    pub fn tag_post_count(&self, tag: TagId) -> u32 {
        self.tag_post_count[tag.index()]
    }

    /// Number of posts containing both tags. For `a == b` this is the
    /// post count of `a`.
    pub fn tag_pair_post_count(&self, a: TagId, b: TagId) -> u32 {
        if a == b {
            return self.tag_post_count(a);
        }
        let key = if a < b { (a, b) } else { (b, a) };
        self.tag_pair_post_count.get(&key).copied().unwrap_or(0)
    }

    /// Users who used `tag` at least once, ascending by id.
    pub fn tag_users(&self, tag: TagId) -> &[UserId] {
        &self.tag_users[tag.index()]
    }

    /// Position of the tag in lexicographic order of tag names.
    pub fn tag_lex_rank(&self, tag: TagId) -> u32 {
        self.tag_lex_rank[tag.index()]
    }

    /// Writes every assignment as a `user\tresource\ttag\ttimestamp` line.
    pub fn write_tsv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for a in &self.assignments {
            let p = &self.posts[a.post as usize];
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                self.user_name(p.user),
                self.resource_name(p.resource),
                self.tag_name(a.tag),
                a.timestamp
            )?;
        }
        Ok(())
    }
}

/// P(target | cue): the share of posts containing `cue` that also contain
/// `target`.
pub fn cooccurrence_prob(f: &Folksonomy, cue: &str, target: &str) -> Result<f64> {
    let cue = f
        .tag_id(cue)
        .ok_or_else(|| Error::UnknownTag(cue.to_owned()))?;
    Ok(match f.tag_id(target) {
        Some(target) => cooccurrence_prob_ids(f, cue, target),
        None => 0.0,
    })
}

pub(crate) fn cooccurrence_prob_ids(f: &Folksonomy, cue: TagId, target: TagId) -> f64 {
    let n = f.tag_post_count(cue);
    if n == 0 {
        return 0.0;
    }
    f64::from(f.tag_pair_post_count(cue, target)) / f64::from(n)
}
