use std::io::{self, Write};

use super::{Folksonomy, Post};
use crate::{Error, Result};

/// Training folksonomy plus held-out posts.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub train: Folksonomy,
    /// One post per eligible user, in user order of the source folksonomy.
    pub test: Vec<Post>,
}

/// Holds out each user's latest post.
///
/// Users with a single post keep it in training and contribute no test post.
/// Timestamp ties go to the lexicographically greatest resource id.
pub fn split_leave_latest(f: &Folksonomy) -> Result<SplitPair> {
    if f.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut held_out = vec![false; f.n_posts()];
    let mut test = Vec::new();
    for user in f.user_ids() {
        let posts = f.user_post_indices(user);
        if posts.len() < 2 {
            continue;
        }
        let latest = posts
            .iter()
            .map(|&i| i as usize)
            .max_by(|&a, &b| {
                let (pa, pb) = (&f.post_records()[a], &f.post_records()[b]);
                pa.timestamp.cmp(&pb.timestamp).then_with(|| {
                    f.resource_name(pa.resource)
                        .cmp(f.resource_name(pb.resource))
                })
            })
            .expect("at least two posts");
        held_out[latest] = true;
        test.push(f.post(latest));
    }
    if test.is_empty() {
        return Err(Error::NoTestPosts);
    }
    Ok(SplitPair {
        train: f.retain_posts(|i| !held_out[i]),
        test,
    })
}

/// Writes posts in the input TSV format, one line per tag, each carrying the
/// post timestamp.
pub fn write_posts_tsv<W: Write>(posts: &[Post], mut out: W) -> io::Result<()> {
    for p in posts {
        for t in &p.tags {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                p.user_id, p.resource_id, t, p.timestamp
            )?;
        }
    }
    Ok(())
}
