//! Exhaustive scans of all free trees in a range of orders.
//!
//! Each order is split into enumeration [`Chunk`]s. Worker threads pull
//! chunks from a shared counter, evaluate every tree, and send their matches
//! to the calling thread, which writes them in chunk order. Output is
//! therefore identical for any worker count. After each chunk the output is
//! flushed and, if requested, a checkpoint records how far the scan got.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::checks::{check_log_concave, ViolationJson};
use crate::engine::{independence_polynomial_auto, independence_polynomial_tree};
use crate::enumeration::{chunks, parents_from_levels, Chunk, MAX_ORDER};
use crate::graph::{Graph, Tree};
use crate::poly::Polynomial;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search job: {0}")]
    InvalidJob(String),
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("invalid checkpoint: {0}")]
    Checkpoint(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SearchError + '_ {
    move |source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Which trees a scan reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    NonLogConcave,
    NonUnimodal,
    /// Not log-concave, with every violation at least `d` below the degree.
    ViolationOffsetAtLeast(usize),
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::NonLogConcave => f.write_str("non-log-concave"),
            Predicate::NonUnimodal => f.write_str("non-unimodal"),
            Predicate::ViolationOffsetAtLeast(d) => write!(f, "offset-at-least:{d}"),
        }
    }
}

impl FromStr for Predicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "non-log-concave" => Ok(Predicate::NonLogConcave),
            "non-unimodal" => Ok(Predicate::NonUnimodal),
            _ => s
                .strip_prefix("offset-at-least:")
                .and_then(|d| d.parse().ok())
                .map(Predicate::ViolationOffsetAtLeast)
                .ok_or_else(|| {
                    format!(
                        "unknown predicate {s:?}; expected non-log-concave, non-unimodal \
                         or offset-at-least:D"
                    )
                }),
        }
    }
}

/// A test applied to each tree's coefficient list (ascending, exact).
pub trait TreeFilter: Sync {
    /// Stable name, recorded in checkpoints.
    fn name(&self) -> String;
    fn matches(&self, coeffs: &[u64]) -> bool;
}

fn violation_offsets(c: &[u64]) -> impl Iterator<Item = usize> + '_ {
    let alpha = c.len() - 1;
    c.windows(3).enumerate().filter_map(move |(i, w)| {
        let lhs = u128::from(w[1]) * u128::from(w[1]);
        let rhs = u128::from(w[0]) * u128::from(w[2]);
        (lhs < rhs).then_some(alpha - (i + 1))
    })
}

impl TreeFilter for Predicate {
    fn name(&self) -> String {
        self.to_string()
    }

    fn matches(&self, c: &[u64]) -> bool {
        match *self {
            Predicate::NonLogConcave => violation_offsets(c).next().is_some(),
            Predicate::NonUnimodal => {
                let mut descended = false;
                c.windows(2).any(|w| {
                    descended |= w[1] < w[0];
                    descended && w[1] > w[0]
                })
            }
            Predicate::ViolationOffsetAtLeast(d) => {
                violation_offsets(c).min().is_some_and(|m| m >= d)
            }
        }
    }
}

/// Independence polynomial of the tree with the given preorder depths, with
/// machine-word coefficients. Exact for every supported order: a tree on
/// `n ≤ 32` vertices has at most `2^n` independent sets.
pub fn tree_coefficients_u64(levels: &[usize]) -> Vec<u64> {
    let n = levels.len();
    let parent = parents_from_levels(levels);
    let mut excluded: Vec<Vec<u64>> = vec![vec![1]; n];
    let mut included: Vec<Vec<u64>> = vec![vec![0, 1]; n];
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    // children follow their parents in preorder
    for v in (1..n).rev() {
        let p = parent[v].expect("non-root positions have parents");
        let ex = std::mem::take(&mut excluded[v]);
        let inc = std::mem::take(&mut included[v]);
        let mut total = ex.clone();
        total.resize(inc.len().max(ex.len()), 0);
        for (t, x) in total.iter_mut().zip(&inc) {
            *t += x;
        }
        excluded[p] = mul(&excluded[p], &total);
        included[p] = mul(&included[p], &ex);
    }
    let mut out = std::mem::take(&mut excluded[0]);
    let inc = &included[0];
    out.resize(out.len().max(inc.len()), 0);
    for (t, x) in out.iter_mut().zip(inc) {
        *t += x;
    }
    while out.len() > 1 && out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// One line of search output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexampleRecord {
    pub n: usize,
    pub graph6: String,
    pub alpha: usize,
    pub coeffs: Vec<String>,
    pub violations: Vec<ViolationJson>,
}

impl CounterexampleRecord {
    pub fn from_tree(t: &Tree) -> CounterexampleRecord {
        let g = t.to_graph();
        let poly = independence_polynomial_tree(t);
        let report = check_log_concave(&poly);
        CounterexampleRecord {
            n: g.order(),
            graph6: g.to_graph6().expect("search orders fit graph6"),
            alpha: report.alpha,
            coeffs: poly.to_decimal_strings(),
            violations: report.violations.iter().map(ViolationJson::from).collect(),
        }
    }

    /// Decodes `graph6`, recomputes everything, and compares.
    pub fn verify(&self) -> Result<(), String> {
        let g = Graph::from_graph6(&self.graph6).map_err(|e| e.to_string())?;
        if g.order() != self.n {
            return Err(format!(
                "graph6 has {} vertices, record says {}",
                g.order(),
                self.n
            ));
        }
        if !g.is_tree() {
            return Err(format!("{} is not a tree", self.graph6));
        }
        let poly = independence_polynomial_auto(&g);
        let claimed = Polynomial::from_decimal_strings(&self.coeffs)?;
        if poly != claimed {
            return Err(format!(
                "{}: coefficients differ, recomputed {poly}",
                self.graph6
            ));
        }
        let report = check_log_concave(&poly);
        let violations: Vec<ViolationJson> =
            report.violations.iter().map(ViolationJson::from).collect();
        if report.alpha != self.alpha || violations != self.violations {
            return Err(format!("{}: alpha or violations differ", self.graph6));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchJob {
    pub min_n: usize,
    pub max_n: usize,
    pub predicate: Predicate,
    pub workers: usize,
    pub output_path: PathBuf,
    pub checkpoint_path: Option<PathBuf>,
    /// Continue from `checkpoint_path` instead of starting over.
    pub resume: bool,
    /// Stop after writing this many chunks, as if killed. For testing.
    pub halt_after_chunks: Option<u64>,
}

impl SearchJob {
    pub fn new(min_n: usize, max_n: usize, predicate: Predicate, output_path: PathBuf) -> Self {
        SearchJob {
            min_n,
            max_n,
            predicate,
            workers: 1,
            output_path,
            checkpoint_path: None,
            resume: false,
            halt_after_chunks: None,
        }
    }

    fn validate(&self) -> Result<(), SearchError> {
        if !(1 <= self.min_n && self.min_n <= self.max_n && self.max_n <= MAX_ORDER) {
            return Err(SearchError::InvalidJob(format!(
                "need 1 <= min_n <= max_n <= {MAX_ORDER}, got {}..={}",
                self.min_n, self.max_n
            )));
        }
        if self.workers == 0 {
            return Err(SearchError::InvalidJob("workers must be at least 1".into()));
        }
        if self.resume && self.checkpoint_path.is_none() {
            return Err(SearchError::InvalidJob(
                "resume needs a checkpoint path".into(),
            ));
        }
        Ok(())
    }

    fn fingerprint(&self, filter: &dyn TreeFilter) -> String {
        format!(
            "orders={}..={};predicate={};chunking=v1",
            self.min_n,
            self.max_n,
            filter.name()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderSummary {
    pub n: usize,
    pub trees_scanned: u64,
    pub counterexamples_found: u64,
    pub elapsed_secs: f64,
    pub chunks_total: usize,
    /// Id of the last chunk written, if any.
    pub last_chunk: Option<usize>,
}

impl OrderSummary {
    pub fn is_complete(&self) -> bool {
        self.last_chunk.map(|c| c + 1) == Some(self.chunks_total)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub orders: Vec<OrderSummary>,
    /// False when the run stopped early through `halt_after_chunks`.
    pub completed: bool,
}

impl SearchSummary {
    pub fn total_found(&self) -> u64 {
        self.orders.iter().map(|o| o.counterexamples_found).sum()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct Checkpoint {
    fingerprint: String,
    output_bytes: u64,
    orders: Vec<OrderSummary>,
}

impl Checkpoint {
    fn load(path: &Path) -> Result<Checkpoint, SearchError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text)
            .map_err(|e| SearchError::Checkpoint(format!("{}: {e}", path.display())))
    }

    fn store(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        let text = serde_json::to_string_pretty(self).expect("checkpoints serialize");
        fs::write(&tmp, text).map_err(io_err(&tmp))?;
        fs::rename(&tmp, path).map_err(io_err(path))
    }
}

struct ChunkResult {
    index: usize,
    trees: u64,
    lines: Vec<String>,
}

fn scan_chunk(chunk: &Chunk, filter: &dyn TreeFilter) -> (u64, Vec<String>) {
    let mut cursor = chunk.trees();
    let mut trees = 0;
    let mut lines = Vec::new();
    while let Some(levels) = cursor.advance() {
        trees += 1;
        if filter.matches(&tree_coefficients_u64(levels)) {
            let t =
                Tree::from_parents(parents_from_levels(levels)).expect("level sequences are trees");
            let record = CounterexampleRecord::from_tree(&t);
            lines.push(serde_json::to_string(&record).expect("records serialize"));
        }
    }
    (trees, lines)
}

/// Runs `job` with its own predicate.
pub fn run_search(job: &SearchJob) -> Result<SearchSummary, SearchError> {
    run_search_with(job, &job.predicate)
}

/// Runs `job`, reporting the trees accepted by `filter`.
pub fn run_search_with(
    job: &SearchJob,
    filter: &dyn TreeFilter,
) -> Result<SearchSummary, SearchError> {
    job.validate()?;
    let fingerprint = job.fingerprint(filter);
    let mut orders: Vec<OrderSummary> = Vec::new();
    let mut chunk_lists: Vec<Vec<Chunk>> = Vec::new();
    for n in job.min_n..=job.max_n {
        let list = chunks(n).map_err(|e| SearchError::InvalidJob(e.to_string()))?;
        orders.push(OrderSummary {
            n,
            trees_scanned: 0,
            counterexamples_found: 0,
            elapsed_secs: 0.0,
            chunks_total: list.len(),
            last_chunk: None,
        });
        chunk_lists.push(list);
    }

    let out_path = &job.output_path;
    let file = if job.resume {
        let cp_path = job.checkpoint_path.as_deref().expect("validated");
        let cp = Checkpoint::load(cp_path)?;
        if cp.fingerprint != fingerprint {
            return Err(SearchError::Checkpoint(format!(
                "checkpoint is for job {:?}, not {:?}",
                cp.fingerprint, fingerprint
            )));
        }
        let same_chunking = cp.orders.len() == orders.len()
            && cp
                .orders
                .iter()
                .zip(&orders)
                .all(|(a, b)| a.n == b.n && a.chunks_total == b.chunks_total);
        if !same_chunking {
            return Err(SearchError::Checkpoint(
                "chunk layout differs from this build".into(),
            ));
        }
        orders = cp.orders;
        let file = OpenOptions::new()
            .write(true)
            .open(out_path)
            .map_err(io_err(out_path))?;
        let len = file.metadata().map_err(io_err(out_path))?.len();
        if len < cp.output_bytes {
            return Err(SearchError::Checkpoint(format!(
                "output has {len} bytes, checkpoint expects at least {}",
                cp.output_bytes
            )));
        }
        // drop anything written after the last checkpoint
        file.set_len(cp.output_bytes).map_err(io_err(out_path))?;
        file
    } else {
        File::create(out_path).map_err(io_err(out_path))?
    };
    let mut out_bytes = file.metadata().map_err(io_err(out_path))?.len();
    let mut out = BufWriter::new(file);
    io::Seek::seek(&mut out, io::SeekFrom::End(0)).map_err(io_err(out_path))?;

    let mut chunks_written: u64 = 0;
    let mut records_written: u64 = 0;
    for (slot, list) in chunk_lists.iter().enumerate() {
        let start = orders[slot].last_chunk.map_or(0, |c| c + 1);
        if start >= list.len() {
            continue;
        }
        let started = Instant::now();
        let base_elapsed = orders[slot].elapsed_secs;
        let next = AtomicUsize::new(start);
        let stop = AtomicBool::new(false);
        let (tx, rx) = mpsc::channel::<ChunkResult>();
        let mut halted = false;
        let outcome: Result<(), SearchError> = std::thread::scope(|scope| {
            for _ in 0..job.workers.min(list.len() - start) {
                let tx = tx.clone();
                let (next, stop) = (&next, &stop);
                scope.spawn(move || loop {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let index = next.fetch_add(1, Ordering::Relaxed);
                    let Some(chunk) = list.get(index) else { break };
                    let (trees, lines) = scan_chunk(chunk, filter);
                    if tx
                        .send(ChunkResult {
                            index,
                            trees,
                            lines,
                        })
                        .is_err()
                    {
                        break;
                    }
                });
            }
            drop(tx);

            let mut pending: BTreeMap<usize, ChunkResult> = BTreeMap::new();
            let mut expected = start;
            let result = (|| {
                for result in rx.iter() {
                    pending.insert(result.index, result);
                    while let Some(ready) = pending.remove(&expected) {
                        let summary = &mut orders[slot];
                        for line in &ready.lines {
                            if records_written.is_multiple_of(100) {
                                let record: CounterexampleRecord = serde_json::from_str(line)
                                    .map_err(|e| SearchError::SelfCheck(e.to_string()))?;
                                record.verify().map_err(SearchError::SelfCheck)?;
                            }
                            records_written += 1;
                            out.write_all(line.as_bytes()).map_err(io_err(out_path))?;
                            out.write_all(b"\n").map_err(io_err(out_path))?;
                            out_bytes += line.len() as u64 + 1;
                        }
                        out.flush().map_err(io_err(out_path))?;
                        summary.trees_scanned += ready.trees;
                        summary.counterexamples_found += ready.lines.len() as u64;
                        summary.last_chunk = Some(expected);
                        summary.elapsed_secs = base_elapsed + started.elapsed().as_secs_f64();
                        expected += 1;
                        chunks_written += 1;
                        if let Some(cp_path) = &job.checkpoint_path {
                            Checkpoint {
                                fingerprint: fingerprint.clone(),
                                output_bytes: out_bytes,
                                orders: orders.clone(),
                            }
                            .store(cp_path)?;
                        }
                        if job.halt_after_chunks.is_some_and(|h| chunks_written >= h) {
                            halted = true;
                            return Ok(());
                        }
                    }
                }
                Ok(())
            })();
            stop.store(true, Ordering::Relaxed);
            drop(rx);
            result
        });
        outcome?;
        if halted {
            return Ok(SearchSummary {
                orders,
                completed: false,
            });
        }
    }
    Ok(SearchSummary {
        orders,
        completed: true,
    })
}
