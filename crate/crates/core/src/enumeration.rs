//! Free trees of a fixed order, one per isomorphism class.
//!
//! Trees are produced as level sequences rooted at their center, in
//! decreasing lexicographic order, by the constant-amortized-time successor
//! rule of Wright, Richmond, Odlyzko and McKay. The sequence space is split
//! into [`Chunk`]s keyed by short prefixes; each chunk can be entered
//! directly, without generating anything before it.

use std::cmp::Ordering;

use thiserror::Error;

use crate::graph::Tree;

/// Largest supported order.
pub const MAX_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("tree order must be in 1..={MAX_ORDER}, got {0}")]
    OrderOutOfRange(usize),
    #[error("malformed level sequence: {0}")]
    MalformedLevelSequence(String),
}

/// Depths of the vertices of a rooted tree in depth-first preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelSequence {
    levels: Vec<usize>,
}

impl LevelSequence {
    pub fn new(levels: Vec<usize>) -> Result<Self, EnumerationError> {
        let malformed = |msg: String| Err(EnumerationError::MalformedLevelSequence(msg));
        match levels.first() {
            None => return malformed("empty sequence".into()),
            Some(&0) => {}
            Some(&d) => return malformed(format!("root depth must be 0, got {d}")),
        }
        for (i, pair) in levels.windows(2).enumerate() {
            if pair[1] == 0 || pair[1] > pair[0] + 1 {
                return malformed(format!(
                    "depth {} at position {} after depth {}",
                    pair[1],
                    i + 1,
                    pair[0]
                ));
            }
        }
        Ok(LevelSequence { levels })
    }

    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn to_tree(&self) -> Tree {
        tree_from_level_sequence(self)
    }
}

/// Parent of each position; position 0 has none.
pub fn parents_from_levels(levels: &[usize]) -> Vec<Option<usize>> {
    let mut last_at_depth: Vec<usize> = Vec::with_capacity(levels.len());
    let mut parent = Vec::with_capacity(levels.len());
    for (i, &d) in levels.iter().enumerate() {
        parent.push(d.checked_sub(1).map(|up| last_at_depth[up]));
        last_at_depth.truncate(d);
        last_at_depth.push(i);
    }
    parent
}

/// The parent of position `i` is the nearest earlier position one level up.
pub fn tree_from_level_sequence(seq: &LevelSequence) -> Tree {
    Tree::from_parents(parents_from_levels(&seq.levels)).expect("valid level sequences are trees")
}

/// Centroid vertices of a tree: one, or two adjacent ones.
pub fn centroids(t: &Tree) -> Vec<usize> {
    let n = t.order();
    let mut size = vec![1usize; n];
    for v in t.postorder() {
        if let Some(p) = t.parent(v) {
            size[p] += size[v];
        }
    }
    let children = t.children();
    let heaviest = |v: usize| {
        let below = children[v].iter().map(|&c| size[c]).max().unwrap_or(0);
        below.max(n - size[v])
    };
    let best = (0..n).map(heaviest).min().expect("trees are nonempty");
    (0..n).filter(|&v| heaviest(v) == best).collect()
}

fn rooted_code(adj: &[Vec<usize>], root: usize) -> String {
    let n = adj.len();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    parent[root] = root;
    order.push(root);
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &u in &adj[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                order.push(u);
            }
        }
    }
    let mut codes: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut root_code = String::new();
    for &v in order.iter().rev() {
        let mut kids = std::mem::take(&mut codes[v]);
        kids.sort_unstable();
        let code = format!("({})", kids.concat());
        if v == root {
            root_code = code;
        } else {
            codes[parent[v]].push(code);
        }
    }
    root_code
}

/// Parenthesis encoding of the tree rooted at its centroid, children sorted;
/// with two centroids the smaller encoding wins. Equal strings iff the trees
/// are isomorphic.
pub fn canonical_form(t: &Tree) -> String {
    let g = t.to_graph();
    let adj: Vec<Vec<usize>> = (0..g.order()).map(|v| g.neighbors(v).to_vec()).collect();
    centroids(t)
        .into_iter()
        .map(|c| rooted_code(&adj, c))
        .min()
        .expect("every tree has a centroid")
}

const INF: usize = usize::MAX;

/// Successor-rule registers, 1-based positions with the root at level 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct State {
    /// Last position whose level is not 2.
    p: usize,
    /// Parent of `p`.
    q: usize,
    /// End of the first path of the first root subtree.
    h1: usize,
    /// End of the first path of the remaining tree.
    h2: usize,
    /// Last position of the first root subtree.
    r: usize,
    /// First position where the rest stops mirroring the first subtree,
    /// `n + 1` if it mirrors it completely, [`INF`] when not tracked.
    c: usize,
}

/// Rebuilds the successor registers for a valid center-rooted sequence.
fn state_from_sequence(l: &[usize], w: &[usize]) -> State {
    let n = l.len() - 1;
    let p = (1..=n)
        .rev()
        .find(|&i| l[i] != 2)
        .expect("the root has level 1");
    let q = w[p];
    let r = (3..=n).find(|&i| l[i] == 2).map_or(n, |i| i - 1);
    let mut h1 = 1;
    while h1 < n && l[h1 + 1] == h1 + 1 {
        h1 += 1;
    }
    let mut h2 = r + 1;
    while h2 < n && l[h2 + 1] > l[h2] {
        h2 += 1;
    }
    let c = if l[h2] + 1 == l[h1] && n - h2 == r - h1 {
        let d = h2 - h1;
        (r + 1..=n).find(|&i| l[i] + 1 != l[i - d]).unwrap_or(n + 1)
    } else {
        INF
    };
    State { p, q, h1, h2, r, c }
}

/// Whether every vertex's child subtrees are in nonincreasing lexicographic
/// order, treating the final subtree of the prefix as possibly unfinished.
fn canonical_so_far(l: &[usize]) -> bool {
    let m = l.len();
    for s in 0..m {
        let base = l[s];
        let mut prev: Option<&[usize]> = None;
        let mut i = s + 1;
        while i < m && l[i] > base {
            let mut j = i + 1;
            while j < m && l[j] > base + 1 {
                j += 1;
            }
            let cur = &l[i..j];
            if prev.is_some_and(|p| cur.cmp(p) == Ordering::Greater) {
                return false;
            }
            prev = Some(cur);
            i = j;
        }
    }
    true
}

/// Whether a first subtree on positions `2..=r` of height `h` can be followed
/// by a rest that keeps the root central.
fn close_feasible(n: usize, r: usize, h: usize) -> bool {
    let rest = n - r;
    rest >= h || (rest + 1 == h && r - 1 <= rest + 1)
}

/// Lexicographically largest valid sequence starting with `key`; `key` is a
/// chunk key, so one exists.
fn first_completion(n: usize, key: &[usize]) -> Vec<usize> {
    let mut l = key.to_vec();
    let closed = l.len() >= 3 && l[l.len() - 1] == 2;
    if !closed {
        if l.len() == 1 {
            l.push(2);
        }
        let mut h = l.iter().max().copied().unwrap_or(1) - 1;
        loop {
            let m = l.len();
            let top = l[m - 1] + 1;
            let next = (3..=top).rev().find(|&v| {
                l.push(v);
                let ok = canonical_so_far(&l) && close_feasible(n, m + 1, h.max(v - 1));
                l.pop();
                ok
            });
            match next {
                Some(v) => {
                    l.push(v);
                    h = h.max(v - 1);
                }
                None => {
                    l.push(2);
                    break;
                }
            }
        }
    }
    // The rest repeats the first subtree for as long as room allows.
    let r = l.len() - 1;
    let first = l[1..r].to_vec();
    let mut i = 1;
    while l.len() < n {
        l.push(first[i % first.len()]);
        i += 1;
    }
    l
}

/// The order-`n` chunk keys, with the root at level 1, in decreasing order.
fn chunk_keys(n: usize, len: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, len: usize, key: &mut Vec<usize>, h: usize, out: &mut Vec<Vec<usize>>) {
        let m = key.len();
        if m == len {
            if close_feasible(n, m, h) {
                out.push(key.clone());
            }
            return;
        }
        let top = key[m - 1] + 1;
        for v in (2..=top).rev() {
            if v == 2 && m >= 2 {
                if close_feasible(n, m, h) {
                    key.push(2);
                    out.push(key.clone());
                    key.pop();
                }
                continue;
            }
            key.push(v);
            let h2 = h.max(v - 1);
            if canonical_so_far(key) && close_feasible(n, m + 1, h2) {
                rec(n, len, key, h2, out);
            }
            key.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, len, &mut vec![1], 0, &mut out);
    out
}

/// Length of the prefixes that key the chunks of order `n`.
pub fn chunk_prefix_length(n: usize) -> usize {
    (n / 2 + 1).min(n)
}

/// A contiguous run of the order-`n` enumeration: the trees whose level
/// sequence starts with `prefix`.
///
/// The prefix is the first `chunk_prefix_length(n)` levels, cut short just
/// after the start of the root's second subtree when that comes earlier.
/// These keys are prefix-free, so the chunks partition the trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub n: usize,
    pub id: usize,
    /// Root at depth 0.
    pub prefix: Vec<usize>,
}

impl Chunk {
    /// Cursor over this chunk's trees, positioned at its first one.
    pub fn trees(&self) -> FreeTrees {
        FreeTrees::for_prefix(self.n, &self.prefix)
    }
}

/// All chunks of order `n`, in enumeration order.
pub fn chunks(n: usize) -> Result<Vec<Chunk>, EnumerationError> {
    check_order(n)?;
    if n <= 3 {
        return Ok(vec![Chunk {
            n,
            id: 0,
            prefix: vec![0],
        }]);
    }
    Ok(chunk_keys(n, chunk_prefix_length(n))
        .into_iter()
        .enumerate()
        .map(|(id, key)| Chunk {
            n,
            id,
            prefix: key.iter().map(|d| d - 1).collect(),
        })
        .collect())
}

fn check_order(n: usize) -> Result<(), EnumerationError> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(EnumerationError::OrderOutOfRange(n))
    }
}

/// Cursor over center-rooted level sequences in decreasing order.
///
/// [`FreeTrees::advance`] reuses one buffer, so a full scan allocates only
/// `O(n)` working state.
#[derive(Clone, Debug)]
pub struct FreeTrees {
    n: usize,
    l: Vec<usize>,
    w: Vec<usize>,
    st: State,
    /// Stop once positions `1..=key_len` change.
    key_len: usize,
    key: Vec<usize>,
    started: bool,
    done: bool,
    view: Vec<usize>,
}

impl FreeTrees {
    pub fn new(n: usize) -> Result<Self, EnumerationError> {
        check_order(n)?;
        Ok(Self::for_prefix(n, &[0]))
    }

    fn for_prefix(n: usize, prefix: &[usize]) -> Self {
        let key: Vec<usize> = prefix.iter().map(|d| d + 1).collect();
        let seq: Vec<usize> = match n {
            1 => vec![1],
            2 => vec![1, 2],
            3 => vec![1, 2, 2],
            _ => first_completion(n, &key),
        };
        let mut l = vec![0; n + 2];
        l[1..=n].copy_from_slice(&seq);
        let mut w = vec![0; n + 2];
        let depths: Vec<usize> = seq.iter().map(|d| d - 1).collect();
        for (i, p) in parents_from_levels(&depths).into_iter().enumerate() {
            w[i + 1] = p.map_or(0, |p| p + 1);
        }
        let st = if n <= 3 {
            State {
                p: 1,
                q: 0,
                h1: 1,
                h2: n,
                r: n,
                c: INF,
            }
        } else {
            state_from_sequence(&l[..=n], &w)
        };
        FreeTrees {
            n,
            l,
            w,
            st,
            key_len: key.len(),
            key,
            started: false,
            done: false,
            view: Vec::with_capacity(n),
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Moves to the next tree and returns its depths (root 0).
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if self.started {
            if self.st.q == 0 {
                self.done = true;
                return None;
            }
            self.step();
            if self.l[1..=self.key_len] != self.key[..] {
                self.done = true;
                return None;
            }
        }
        self.started = true;
        self.view.clear();
        self.view.extend(self.l[1..=self.n].iter().map(|d| d - 1));
        Some(&self.view)
    }

    /// Counts the remaining trees without building them.
    pub fn count_remaining(mut self) -> u64 {
        let mut count = 0;
        while self.advance().is_some() {
            count += 1;
        }
        count
    }

    fn step(&mut self) {
        let n = self.n;
        let l = &mut self.l;
        let w = &mut self.w;
        let State {
            mut p,
            mut q,
            mut h1,
            mut h2,
            mut r,
            mut c,
        } = self.st;
        let mut fixit = false;
        let mut needr = false;
        let mut needc = false;
        let mut needh2 = false;

        if c == n + 1
            || (p == h2
                && ((l[h1] == l[h2] + 1 && n - h2 > r - h1)
                    || (l[h1] == l[h2] && n - h2 + 1 < r - h1)))
        {
            if l[r] > 3 {
                p = r;
                q = w[r];
                if h1 == r {
                    h1 -= 1;
                }
                fixit = true;
            } else {
                p = r;
                r -= 1;
                q = 2;
            }
        }
        if p <= h1 {
            h1 = p - 1;
        }
        if p <= r {
            needr = true;
        } else if p <= h2 {
            needh2 = true;
        } else if l[h2] + 1 == l[h1] && n - h2 == r - h1 {
            if p <= c {
                needc = true;
            }
        } else {
            c = INF;
        }

        let oldp = p;
        let delta = p - q;
        let oldlq = l[q];
        let oldwq = w[q];
        p = INF;
        for i in oldp..=n {
            l[i] = l[i - delta];
            if l[i] == 2 {
                w[i] = 1;
            } else {
                p = i;
                q = if l[i] == oldlq {
                    oldwq
                } else {
                    w[i - delta] + delta
                };
                w[i] = q;
            }
            if needr && l[i] == 2 {
                needr = false;
                needh2 = true;
                r = i - 1;
            }
            if needh2 && l[i] <= l[i - 1] && i > r + 1 {
                needh2 = false;
                h2 = i - 1;
                if l[h2] + 1 == l[h1] && n - h2 == r - h1 {
                    needc = true;
                } else {
                    c = INF;
                }
            }
            if needc {
                if l[i] + 1 != l[h1 + i - h2] {
                    needc = false;
                    c = i;
                } else {
                    c = i + 1;
                }
            }
        }

        if fixit {
            r = n - h1 + 1;
            for i in r + 1..=n {
                l[i] = i - r + 1;
                w[i] = i - 1;
            }
            w[r + 1] = 1;
            h2 = n;
            p = n;
            q = p - 1;
            c = INF;
        } else {
            if p == INF {
                p = if l[oldp - 1] != 2 { oldp - 1 } else { oldp - 2 };
                q = w[p];
            }
            if needh2 {
                h2 = n;
                c = if l[h2] + 1 == l[h1] && h1 == r {
                    n + 1
                } else {
                    INF
                };
            }
        }
        self.st = State { p, q, h1, h2, r, c };
    }
}

impl Iterator for FreeTrees {
    type Item = LevelSequence;

    fn next(&mut self) -> Option<LevelSequence> {
        self.advance().map(|levels| LevelSequence {
            levels: levels.to_vec(),
        })
    }
}

/// Every free tree on `n` vertices, once each.
pub fn enumerate_free_trees(n: usize) -> Result<impl Iterator<Item = Tree>, EnumerationError> {
    Ok(FreeTrees::new(n)?.map(|s| s.to_tree()))
}
