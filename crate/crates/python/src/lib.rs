//! Python bindings for `folkrec_core`.
//!
//! Rankings come back as lists of `(tag, score)` tuples, statistics and
//! report rows as dicts. Every error raised by the library surfaces as
//! `folkrec.FolkrecError`, a `ValueError` subclass.

use std::fs::File;
use std::io::BufReader;

use folkrec_core::recommend::DEFAULT_NEIGHBORS;
use folkrec_core::{
    self as core, ActrParams, Algorithm, FolkrankParams, GirptmParams, ParseOptions, Ranking,
    ReportFormat,
};
use pyo3::create_exception;
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    folkrec,
    FolkrecError,
    PyValueError,
    "Error raised by folkrec."
);

fn err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => FolkrecError::new_err(other.to_string()),
    }
}

/// Indexed tagging corpus.
#[pyclass(module = "folkrec", frozen)]
pub struct Folksonomy {
    inner: core::Folksonomy,
}

#[pymethods]
impl Folksonomy {
    /// Builds a corpus from `(user, resource, tag, timestamp)` tuples.
    #[new]
    fn new(assignments: Vec<(String, String, String, i64)>) -> Self {
        let rows = assignments
            .into_iter()
            .map(
                |(user_id, resource_id, tag, timestamp)| core::TagAssignment {
                    user_id,
                    resource_id,
                    tag,
                    timestamp,
                },
            );
        Folksonomy {
            inner: core::Folksonomy::from_assignments(rows),
        }
    }

    /// Parses tab-separated `user, resource, tag, timestamp` lines.
    #[staticmethod]
    #[pyo3(signature = (text, normalize=true))]
    fn from_tsv(text: &str, normalize: bool) -> PyResult<Self> {
        let opts = ParseOptions {
            normalize_tags: normalize,
        };
        let inner = core::parse_dataset(text.as_bytes(), opts).map_err(err)?;
        Ok(Folksonomy { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (path, normalize=true))]
    fn from_path(py: Python<'_>, path: std::path::PathBuf, normalize: bool) -> PyResult<Self> {
        let opts = ParseOptions {
            normalize_tags: normalize,
        };
        let file = File::open(&path)
            .map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
        let inner = py
            .detach(|| core::parse_dataset(BufReader::new(file), opts))
            .map_err(err)?;
        Ok(Folksonomy { inner })
    }

    fn to_tsv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_tsv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("names are UTF-8"))
    }

    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let s = core::compute_stats(&self.inner).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("users", s.n_users)?;
        d.set_item("resources", s.n_resources)?;
        d.set_item("tags", s.n_tags)?;
        d.set_item("assignments", s.n_assignments)?;
        d.set_item("posts", s.n_posts)?;
        d.set_item("narrowness", s.narrowness())?;
        Ok(d)
    }

    fn p_core(&self, p: usize) -> PyResult<Folksonomy> {
        if p == 0 {
            return Err(FolkrecError::new_err("p must be at least 1"));
        }
        Ok(Folksonomy {
            inner: core::p_core(&self.inner, p),
        })
    }

    /// Holds out each user's latest post. Returns `(train, test_posts)`
    /// with posts as `(user, resource, tags, timestamp)`.
    #[allow(clippy::type_complexity)]
    fn split(&self) -> PyResult<(Folksonomy, Vec<(String, String, Vec<String>, i64)>)> {
        let split = core::split_leave_latest(&self.inner).map_err(err)?;
        let test = split
            .test
            .into_iter()
            .map(|p| (p.user_id, p.resource_id, p.tags, p.timestamp))
            .collect();
        Ok((Folksonomy { inner: split.train }, test))
    }

    fn posts(&self) -> Vec<(String, String, Vec<String>, i64)> {
        self.inner
            .posts()
            .map(|p| (p.user_id, p.resource_id, p.tags, p.timestamp))
            .collect()
    }

    fn users(&self) -> Vec<String> {
        self.inner.users().map(str::to_owned).collect()
    }

    fn resources(&self) -> Vec<String> {
        self.inner.resources().map(str::to_owned).collect()
    }

    fn tags(&self) -> Vec<String> {
        self.inner.tags().map(str::to_owned).collect()
    }

    fn cooccurrence(&self, cue: &str, target: &str) -> PyResult<f64> {
        core::cooccurrence_prob(&self.inner, cue, target).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.n_assignments()
    }

    fn __repr__(&self) -> String {
        format!(
            "Folksonomy(users={}, resources={}, tags={}, posts={}, assignments={})",
            self.inner.n_users(),
            self.inner.n_resources(),
            self.inner.n_tags(),
            self.inner.n_posts(),
            self.inner.n_assignments()
        )
    }
}

/// Recommender parameters shared by `recommend` and `evaluate`.
#[derive(Clone, Copy, Debug)]
struct Params {
    beta: f64,
    decay: f64,
    min_lag: i64,
    tau: f64,
    spread_lambda: f64,
    epsilon: f64,
    max_iter: usize,
    boost: Option<f64>,
    neighbors: usize,
}

impl Params {
    fn algorithm(&self, name: &str) -> PyResult<Algorithm> {
        let a = match name.to_ascii_lowercase().as_str() {
            "mpr" | "mp_r" => Algorithm::MpR,
            "mpu" | "mp_u" => Algorithm::MpU,
            "mpur" | "mp_ur" => Algorithm::MpUr { beta: self.beta },
            "cf" => Algorithm::Cf {
                neighbors: self.neighbors,
            },
            "folkrank" | "fr" => Algorithm::FolkRank(FolkrankParams {
                spread_lambda: self.spread_lambda,
                tolerance: self.epsilon,
                max_iter: self.max_iter,
                preference_boost: self.boost,
            }),
            "girptm" => Algorithm::Girptm(GirptmParams {
                recency_tau: self.tau,
                mix_beta: self.beta,
            }),
            "actr" | "act-r" => Algorithm::Actr(ActrParams {
                decay: self.decay,
                mix_beta: self.beta,
                min_lag: self.min_lag,
            }),
            other => {
                return Err(FolkrecError::new_err(format!(
                    "unknown algorithm `{other}`; expected one of mpr, mpu, mpur, cf, folkrank, girptm, actr"
                )))
            }
        };
        a.validate().map_err(err)?;
        Ok(a)
    }
}

fn entries(r: Ranking) -> Vec<(String, f64)> {
    r.entries().to_vec()
}

/// Top-k tags for `user` annotating `resource`. `t_ref` defaults to the
/// latest timestamp in the corpus.
#[pyfunction]
#[pyo3(signature = (
    folksonomy, algorithm, user, resource, k=10, t_ref=None, *,
    beta=0.5, decay=0.5, min_lag=1, tau=2_419_200.0, spread_lambda=0.7,
    epsilon=1e-8, max_iter=200, boost=None, neighbors=DEFAULT_NEIGHBORS
))]
#[allow(clippy::too_many_arguments)]
fn recommend(
    py: Python<'_>,
    folksonomy: &Folksonomy,
    algorithm: &str,
    user: &str,
    resource: &str,
    k: usize,
    t_ref: Option<i64>,
    beta: f64,
    decay: f64,
    min_lag: i64,
    tau: f64,
    spread_lambda: f64,
    epsilon: f64,
    max_iter: usize,
    boost: Option<f64>,
    neighbors: usize,
) -> PyResult<Vec<(String, f64)>> {
    let params = Params {
        beta,
        decay,
        min_lag,
        tau,
        spread_lambda,
        epsilon,
        max_iter,
        boost,
        neighbors,
    };
    let algo = params.algorithm(algorithm)?;
    let f = &folksonomy.inner;
    let t_ref = t_ref.unwrap_or_else(|| f.posts().map(|p| p.timestamp).max().unwrap_or(0));
    let mut ranking = py
        .detach(|| algo.recommend(f, user, resource, t_ref))
        .map_err(err)?;
    ranking.truncate(k);
    Ok(entries(ranking))
}

fn ranking_of(tags: &[String]) -> Ranking {
    let n = tags.len() as f64;
    Ranking::from_scores(
        tags.iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), n - i as f64)),
    )
}

/// nDCG@k of a ranked tag list against a relevant set.
#[pyfunction]
fn ndcg_at_k(ranked: Vec<String>, relevant: Vec<String>, k: usize) -> PyResult<f64> {
    core::ndcg_at_k(&ranking_of(&ranked), &relevant, k).map_err(err)
}

/// `(precision, recall, f1)` at k.
#[pyfunction]
fn set_metrics_at_k(
    ranked: Vec<String>,
    relevant: Vec<String>,
    k: usize,
) -> PyResult<(f64, f64, f64)> {
    core::set_metrics_at_k(&ranking_of(&ranked), &relevant, k).map_err(err)
}

/// Result of `evaluate`.
#[pyclass(module = "folkrec", frozen)]
pub struct EvalReport {
    inner: core::EvalReport,
}

#[pymethods]
impl EvalReport {
    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    /// One dict per algorithm.
    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.inner
            .rows
            .iter()
            .map(|row| {
                let d = PyDict::new(py);
                d.set_item("algorithm", &row.algorithm)?;
                d.set_item("ndcg", row.metrics.ndcg)?;
                d.set_item("precision", row.metrics.precision)?;
                d.set_item("recall", row.metrics.recall)?;
                d.set_item("f1", row.metrics.f1)?;
                d.set_item("test_posts", row.n_test_posts)?;
                d.set_item("seconds", row.wall_time.as_secs_f64())?;
                Ok(d)
            })
            .collect()
    }

    /// Renders as `"table"` or `"csv"`.
    #[pyo3(signature = (format="table"))]
    fn render(&self, format: &str) -> PyResult<String> {
        let format: ReportFormat = format.parse().map_err(err)?;
        core::render_report(&self.inner, format).map_err(err)
    }
}

/// Splits the corpus (latest post per user held out) and scores each
/// algorithm on the held-out posts.
#[pyfunction]
#[pyo3(signature = (
    folksonomy, algorithms, k=10, *,
    beta=0.5, decay=0.5, min_lag=1, tau=2_419_200.0, spread_lambda=0.7,
    epsilon=1e-8, max_iter=200, boost=None, neighbors=DEFAULT_NEIGHBORS
))]
#[allow(clippy::too_many_arguments)]
fn evaluate(
    py: Python<'_>,
    folksonomy: &Folksonomy,
    algorithms: Vec<String>,
    k: usize,
    beta: f64,
    decay: f64,
    min_lag: i64,
    tau: f64,
    spread_lambda: f64,
    epsilon: f64,
    max_iter: usize,
    boost: Option<f64>,
    neighbors: usize,
) -> PyResult<EvalReport> {
    let params = Params {
        beta,
        decay,
        min_lag,
        tau,
        spread_lambda,
        epsilon,
        max_iter,
        boost,
        neighbors,
    };
    let algos = algorithms
        .iter()
        .map(|a| params.algorithm(a))
        .collect::<PyResult<Vec<_>>>()?;
    let f = &folksonomy.inner;
    let inner = py
        .detach(|| {
            let split = core::split_leave_latest(f)?;
            core::evaluate(&split, &algos, k)
        })
        .map_err(err)?;
    Ok(EvalReport { inner })
}

#[pymodule]
pub fn folkrec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FolkrecError", m.py().get_type::<FolkrecError>())?;
    m.add_class::<Folksonomy>()?;
    m.add_class::<EvalReport>()?;
    m.add_function(wrap_pyfunction!(recommend, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(ndcg_at_k, m)?)?;
    m.add_function(wrap_pyfunction!(set_metrics_at_k, m)?)?;
    Ok(())
}
