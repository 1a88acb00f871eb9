use std::fs;
use std::io::Write;
use std::path::Path;

use indpoly::search::{
    run_search, run_search_with, CounterexampleRecord, Predicate, SearchError, SearchJob,
    TreeFilter,
};

const FREE_TREE_COUNTS: [u64; 16] = [
    1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320,
];

/// Accepts trees whose total number of independent sets is divisible by `m`,
/// to get a nonempty, irregular output.
struct TotalDivisibleBy(u64);

impl TreeFilter for TotalDivisibleBy {
    fn name(&self) -> String {
        format!("total-divisible-by:{}", self.0)
    }

    fn matches(&self, coeffs: &[u64]) -> bool {
        coeffs.iter().sum::<u64>() % self.0 == 0
    }
}

fn job(dir: &Path, name: &str, min_n: usize, max_n: usize, workers: usize) -> SearchJob {
    let mut job = SearchJob::new(
        min_n,
        max_n,
        Predicate::NonLogConcave,
        dir.join(format!("{name}.jsonl")),
    );
    job.workers = workers;
    job
}

#[test]
fn trivial_and_small_scans() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_search(&job(dir.path(), "one", 1, 1, 2)).unwrap();
    assert_eq!(s.orders[0].trees_scanned, 1);
    assert_eq!(s.orders[0].counterexamples_found, 0);

    let s = run_search(&job(dir.path(), "ten", 10, 10, 3)).unwrap();
    assert_eq!(s.orders[0].trees_scanned, 106);
    assert_eq!(s.orders[0].counterexamples_found, 0);
    assert!(s.completed && s.orders[0].is_complete());
    assert_eq!(
        fs::read_to_string(dir.path().join("ten.jsonl")).unwrap(),
        ""
    );
}

#[test]
fn chunk_counts_sum_to_known_totals() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_search(&job(dir.path(), "all", 1, 16, 4)).unwrap();
    for o in &s.orders {
        assert_eq!(o.trees_scanned, FREE_TREE_COUNTS[o.n - 1], "n = {}", o.n);
        assert!(o.is_complete());
    }
    assert_eq!(s.total_found(), 0);
}

#[test]
fn output_is_identical_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let filter = TotalDivisibleBy(5);
    let mut outputs = Vec::new();
    for workers in [1, 2, 3, 8] {
        let j = job(dir.path(), &format!("w{workers}"), 5, 14, workers);
        let s = run_search_with(&j, &filter).unwrap();
        assert!(s.total_found() > 100);
        outputs.push(fs::read(&j.output_path).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));

    // every record verifies and matches the filter
    let text = String::from_utf8(outputs.pop().unwrap()).unwrap();
    for line in text.lines() {
        let record: CounterexampleRecord = serde_json::from_str(line).unwrap();
        record.verify().unwrap();
        let total: u64 = record
            .coeffs
            .iter()
            .map(|c| c.parse::<u64>().unwrap())
            .sum();
        assert_eq!(total % 5, 0);
    }
}

#[test]
fn resume_after_kill_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let filter = TotalDivisibleBy(3);
    let full = job(dir.path(), "full", 16, 16, 2);
    let reference = run_search_with(&full, &filter).unwrap();
    let expected = fs::read(&full.output_path).unwrap();
    let chunks_total = reference.orders[0].chunks_total as u64;
    assert!(chunks_total > 10);

    for halt in [1, chunks_total / 3, chunks_total - 1] {
        let mut j = job(dir.path(), "killed", 16, 16, 3);
        j.checkpoint_path = Some(dir.path().join("killed.ckpt"));
        j.halt_after_chunks = Some(halt);
        let partial = run_search_with(&j, &filter).unwrap();
        assert!(!partial.completed);
        assert_eq!(partial.orders[0].last_chunk, Some(halt as usize - 1));

        // a torn line written after the checkpoint must be discarded
        let mut f = fs::OpenOptions::new()
            .append(true)
            .open(&j.output_path)
            .unwrap();
        f.write_all(b"{\"n\":16,\"graph6\":\"O").unwrap();
        drop(f);

        j.halt_after_chunks = None;
        j.resume = true;
        j.workers = 1;
        let resumed = run_search_with(&j, &filter).unwrap();
        assert!(resumed.completed);
        assert_eq!(resumed.orders[0].trees_scanned, 19320);
        assert_eq!(
            resumed.orders[0].counterexamples_found,
            reference.orders[0].counterexamples_found
        );
        assert_eq!(
            fs::read(&j.output_path).unwrap(),
            expected,
            "halt after {halt}"
        );
    }
}

#[test]
fn resume_rejects_a_different_job() {
    let dir = tempfile::tempdir().unwrap();
    let mut j = job(dir.path(), "a", 8, 12, 1);
    j.checkpoint_path = Some(dir.path().join("a.ckpt"));
    j.halt_after_chunks = Some(2);
    run_search(&j).unwrap();

    let mut other = j.clone();
    other.halt_after_chunks = None;
    other.resume = true;
    other.predicate = Predicate::NonUnimodal;
    assert!(matches!(
        run_search(&other),
        Err(SearchError::Checkpoint(_))
    ));
    other.predicate = Predicate::NonLogConcave;
    other.max_n = 13;
    assert!(matches!(
        run_search(&other),
        Err(SearchError::Checkpoint(_))
    ));

    let mut missing = j.clone();
    missing.resume = true;
    missing.checkpoint_path = Some(dir.path().join("missing.ckpt"));
    assert!(matches!(run_search(&missing), Err(SearchError::Io { .. })));

    fs::write(dir.path().join("a.ckpt"), "not json").unwrap();
    let mut garbled = j.clone();
    garbled.resume = true;
    assert!(matches!(
        run_search(&garbled),
        Err(SearchError::Checkpoint(_))
    ));
}

#[test]
fn resume_of_a_finished_run_is_a_no_op() {
    let dir = tempfile::tempdir().unwrap();
    let filter = TotalDivisibleBy(4);
    let mut j = job(dir.path(), "done", 6, 11, 2);
    j.checkpoint_path = Some(dir.path().join("done.ckpt"));
    let first = run_search_with(&j, &filter).unwrap();
    let bytes = fs::read(&j.output_path).unwrap();
    j.resume = true;
    let again = run_search_with(&j, &filter).unwrap();
    assert_eq!(fs::read(&j.output_path).unwrap(), bytes);
    assert_eq!(first.total_found(), again.total_found());
}
