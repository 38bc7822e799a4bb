mod common;

use std::collections::BTreeSet;

use common::{assignment, brute_force_p_core, post_keys};
use folkrec_core::{
    compute_stats, cooccurrence_prob, p_core, parse_dataset, split_leave_latest, Folksonomy,
    ParseOptions, TagAssignment,
};
use proptest::prelude::*;

fn assignments(max_posts: usize) -> impl Strategy<Value = Vec<TagAssignment>> {
    prop::collection::vec(
        (
            0..4u8,
            0..5u8,
            prop::collection::vec(0..6u8, 1..4),
            0..30i64,
        ),
        1..=max_posts,
    )
    .prop_map(|posts| {
        posts
            .into_iter()
            .flat_map(|(u, r, tags, ts)| {
                tags.into_iter().map(move |t| {
                    assignment(&format!("u{u}"), &format!("r{r}"), &format!("t{t}"), ts)
                })
            })
            .collect()
    })
}

fn entity_sets(f: &Folksonomy) -> (BTreeSet<String>, BTreeSet<String>, BTreeSet<String>) {
    (
        f.users().map(str::to_owned).collect(),
        f.resources().map(str::to_owned).collect(),
        f.tags().map(str::to_owned).collect(),
    )
}

proptest! {
    #[test]
    fn stats_identities(rows in assignments(30)) {
        let f = Folksonomy::from_assignments(rows.clone());
        let s = compute_stats(&f).unwrap();
        prop_assert!(s.n_posts <= s.n_assignments);
        prop_assert!(s.n_posts >= s.n_users);
        prop_assert_eq!(s.narrowness() * s.n_resources as f64, s.n_posts as f64);
        prop_assert!(s.narrowness() >= 1.0);

        let distinct_pairs: BTreeSet<_> =
            rows.iter().map(|a| (a.user_id.clone(), a.resource_id.clone())).collect();
        prop_assert_eq!(s.n_posts, distinct_pairs.len());
        let distinct_triples: BTreeSet<_> = rows
            .iter()
            .map(|a| (a.user_id.clone(), a.resource_id.clone(), a.tag.clone()))
            .collect();
        prop_assert_eq!(s.n_assignments, distinct_triples.len());
    }

    #[test]
    fn tsv_round_trip(rows in assignments(20)) {
        let f = Folksonomy::from_assignments(rows);
        let mut buf = Vec::new();
        f.write_tsv(&mut buf).unwrap();
        let back = parse_dataset(&buf[..], ParseOptions::default()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn p_core_idempotent_and_monotone(rows in assignments(12), p in 1usize..5) {
        let f = Folksonomy::from_assignments(rows);
        let core = p_core(&f, p);
        prop_assert_eq!(p_core(&core, p), core.clone());

        let tighter = p_core(&f, p + 1);
        let (u1, r1, t1) = entity_sets(&core);
        let (u2, r2, t2) = entity_sets(&tighter);
        prop_assert!(u2.is_subset(&u1));
        prop_assert!(r2.is_subset(&r1));
        prop_assert!(t2.is_subset(&t1));
    }

    #[test]
    fn p_core_matches_enumeration(rows in assignments(12), p in 1usize..4) {
        let f = Folksonomy::from_assignments(rows);
        let posts: Vec<_> = f.posts().collect();
        prop_assert_eq!(post_keys(&p_core(&f, p)), brute_force_p_core(&posts, p));
    }

    #[test]
    fn split_partitions_posts(rows in assignments(30)) {
        let f = Folksonomy::from_assignments(rows);
        let Ok(split) = split_leave_latest(&f) else {
            // Only legal when nobody has two posts.
            prop_assert!(f.user_ids().all(|u| f.user_post_indices(u).len() < 2));
            return Ok(());
        };
        prop_assert_eq!(split.train.n_posts() + split.test.len(), f.n_posts());
        let train = post_keys(&split.train);
        for post in &split.test {
            prop_assert!(!train.contains(&(post.user_id.clone(), post.resource_id.clone())));
            prop_assert!(split.train.user_id(&post.user_id).is_some());
            // Held out post is the user's latest.
            let latest = f
                .posts()
                .filter(|p| p.user_id == post.user_id)
                .map(|p| (p.timestamp, p.resource_id))
                .max()
                .unwrap();
            prop_assert_eq!(latest, (post.timestamp, post.resource_id.clone()));
        }
        let again = split_leave_latest(&f).unwrap();
        prop_assert_eq!(&again.train, &split.train);
        prop_assert_eq!(&again.test, &split.test);
    }

    #[test]
    fn cooccurrence_in_unit_interval(rows in assignments(20)) {
        let f = Folksonomy::from_assignments(rows);
        let tags: Vec<String> = f.tags().map(str::to_owned).collect();
        for c in &tags {
            prop_assert_eq!(cooccurrence_prob(&f, c, c).unwrap(), 1.0);
            for t in &tags {
                let p = cooccurrence_prob(&f, c, t).unwrap();
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}

#[test]
fn p_core_worked_example() {
    let f = common::build(&[
        ("uA", "r1", "a", 1),
        ("uA", "r2", "b", 2),
        ("uB", "r1", "c", 3),
    ]);
    let posts: Vec<_> = f.posts().collect();
    let expected = brute_force_p_core(&posts, 2);
    assert!(expected.is_empty());
    assert_eq!(post_keys(&p_core(&f, 2)), expected);
}

#[test]
fn p_core_shared_tags_example() {
    // Same shape as above but with one shared tag: still collapses, since
    // uB and r2 each occur once.
    let f = common::build(&[
        ("uA", "r1", "x", 1),
        ("uA", "r2", "x", 2),
        ("uB", "r1", "x", 3),
    ]);
    let posts: Vec<_> = f.posts().collect();
    assert_eq!(post_keys(&p_core(&f, 2)), brute_force_p_core(&posts, 2));
}

#[test]
fn no_orphans_after_pruning() {
    let f = common::build(&[
        ("u1", "r1", "x", 1),
        ("u1", "r2", "x", 2),
        ("u2", "r1", "x", 3),
        ("u2", "r2", "x", 4),
        ("u2", "r2", "rare", 4),
    ]);
    let core = p_core(&f, 2);
    // The post carrying `rare` goes, and u2/r2 drop to one post each.
    assert!(core.tag_id("rare").is_none());
    let used: BTreeSet<String> = core.posts().flat_map(|p| p.tags).collect();
    let declared: BTreeSet<String> = core.tags().map(str::to_owned).collect();
    assert_eq!(used, declared);
}
