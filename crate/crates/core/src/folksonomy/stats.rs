use std::fmt;

use super::Folksonomy;
use crate::{Error, Result};

/// Corpus size counts. `narrowness` (posts per resource) is the sparsity
/// measure: close to 1 means almost every resource was tagged once.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DatasetStats {
    pub n_users: usize,
    pub n_resources: usize,
    pub n_tags: usize,
    pub n_assignments: usize,
    pub n_posts: usize,
}

impl DatasetStats {
    pub fn narrowness(&self) -> f64 {
        self.n_posts as f64 / self.n_resources as f64
    }

    /// Narrowness truncated (not rounded) to three decimals, computed
    /// exactly on the integer counts.
    pub fn narrowness_text(&self) -> String {
        if self.n_resources == 0 {
            return "nan".into();
        }
        let milli = self.n_posts as u128 * 1000 / self.n_resources as u128;
        format!("{}.{:03}", milli / 1000, milli % 1000)
    }

    /// Machine-readable `key\tvalue` lines.
    pub fn key_values(&self) -> String {
        format!(
            "users\t{}\nresources\t{}\ntags\t{}\nassignments\t{}\nposts\t{}\nnarrowness\t{}\n",
            self.n_users,
            self.n_resources,
            self.n_tags,
            self.n_assignments,
            self.n_posts,
            self.narrowness_text()
        )
    }
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("|U| users", self.n_users.to_string()),
            ("|R| resources", self.n_resources.to_string()),
            ("|T| tags", self.n_tags.to_string()),
            ("|Y| assignments", self.n_assignments.to_string()),
            ("|P| posts", self.n_posts.to_string()),
            ("|P|/|R| narrowness", self.narrowness_text()),
        ];
        let width = rows.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<20} {v:>width$}")?;
        }
        Ok(())
    }
}

pub fn compute_stats(f: &Folksonomy) -> Result<DatasetStats> {
    if f.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(DatasetStats {
        n_users: f.n_users(),
        n_resources: f.n_resources(),
        n_tags: f.n_tags(),
        n_assignments: f.n_assignments(),
        n_posts: f.n_posts(),
    })
}
