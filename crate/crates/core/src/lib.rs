//! Tag recommendation for social tagging systems.
//!
//! The crate is organised around an immutable, fully indexed [`Folksonomy`]
//! (users, resources, tags and the posts that connect them). Recommenders are
//! plain functions over a training folksonomy; the [`eval`] module replays
//! held-out posts through them and scores the rankings with nDCG@k and
//! set-based metrics.
//!
//! ```
//! use folkrec_core::{parse_dataset, split_leave_latest, recommend, ParseOptions};
//!
//! let tsv = "u1\tr1\trock\t10\nu1\tr2\trock\t20\nu1\tr3\tpop\t30\n";
//! let f = parse_dataset(tsv.as_bytes(), ParseOptions::default()).unwrap();
//! let split = split_leave_latest(&f).unwrap();
//! let ranking = recommend::mp_u(&split.train, "u1");
//! assert_eq!(ranking.tags().collect::<Vec<_>>(), vec!["rock"]);
//! ```

pub mod cli;
mod error;
pub mod eval;
pub mod folksonomy;
pub mod recommend;

pub use error::{Error, Result};
pub use eval::{
    evaluate, ndcg_at_k, render_report, set_metrics_at_k, Algorithm, EvalReport, MetricSet,
    ReportFormat, ReportRow,
};
pub use folksonomy::{
    compute_stats, cooccurrence_prob, p_core, parse_dataset, split_leave_latest, DatasetStats,
    Folksonomy, ParseOptions, Post, ResourceId, SplitPair, TagAssignment, TagId, UserId,
};
pub use recommend::{ActrParams, FolkrankParams, GirptmParams, Ranking};
