//! Simple undirected graphs and rooted trees.
//!
//! Both types are immutable once built. Vertex ids are dense and 0-based;
//! every operation that removes vertices relabels the survivors compactly,
//! preserving their relative order.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Largest order representable in the short and long graph6 forms.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not a tree")]
    NotATree,
    #[error("invalid parent array: {0}")]
    InvalidParents(String),
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("edge list line {line}: {msg}")]
    EdgeList { line: usize, msg: String },
}

/// An undirected simple graph stored as sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.order())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    /// Adjacency lists must already be symmetric, sorted and loop-free.
    fn from_adjacency_unchecked(adj: Vec<Vec<usize>>) -> Self {
        debug_assert!(adjacency_is_valid(&adj));
        Graph { adj }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn closed_neighborhood(&self, v: usize) -> Result<Vec<usize>, GraphError> {
        if v >= self.order() {
            return Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.order(),
            });
        }
        let mut set = self.adj[v].clone();
        let pos = set.binary_search(&v).unwrap_err();
        set.insert(pos, v);
        Ok(set)
    }

    /// The subgraph induced by the vertices not in `removed`. Ids outside
    /// `[0, n)` in `removed` are ignored.
    pub fn delete_vertices(&self, removed: &[usize]) -> Graph {
        let n = self.order();
        let mut keep = vec![true; n];
        for &v in removed {
            if v < n {
                keep[v] = false;
            }
        }
        let mut relabel = vec![usize::MAX; n];
        let mut next = 0;
        for v in 0..n {
            if keep[v] {
                relabel[v] = next;
                next += 1;
            }
        }
        let adj = (0..n)
            .filter(|&v| keep[v])
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| keep[u])
                    .map(|&u| relabel[u])
                    .collect()
            })
            .collect();
        Graph::from_adjacency_unchecked(adj)
    }

    /// Splits the graph into connected components. Each component comes with
    /// the original id of each of its vertices; components are ordered by
    /// their smallest original vertex.
    pub fn connected_components(&self) -> Vec<(Graph, Vec<usize>)> {
        let n = self.order();
        let mut comp = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = members.len();
            comp[start] = id;
            queue.push_back(start);
            let mut verts = Vec::new();
            while let Some(v) = queue.pop_front() {
                verts.push(v);
                for &u in &self.adj[v] {
                    if comp[u] == usize::MAX {
                        comp[u] = id;
                        queue.push_back(u);
                    }
                }
            }
            verts.sort_unstable();
            members.push(verts);
        }
        if members.len() == 1 {
            return vec![(self.clone(), members.pop().unwrap())];
        }
        let mut local = vec![0; n];
        for verts in &members {
            for (i, &v) in verts.iter().enumerate() {
                local[v] = i;
            }
        }
        members
            .into_iter()
            .map(|verts| {
                let adj = verts
                    .iter()
                    .map(|&v| self.adj[v].iter().map(|&u| local[u]).collect())
                    .collect();
                (Graph::from_adjacency_unchecked(adj), verts)
            })
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.order() <= 1 || self.connected_components().len() == 1
    }

    /// Connected with exactly `n - 1` edges. The empty graph is not a tree.
    pub fn is_tree(&self) -> bool {
        let n = self.order();
        n >= 1 && self.size() == n - 1 && self.is_connected()
    }

    /// Disjoint union; the vertices of `other` are shifted past ours.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.order();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|list| list.iter().map(|&u| u + shift).collect()),
        );
        Graph::from_adjacency_unchecked(adj)
    }

    pub fn to_tree(&self, root: usize) -> Result<Tree, GraphError> {
        Tree::from_graph(self, root)
    }

    /// Decodes one graph6 line (short or long form, no `>>graph6<<` header).
    pub fn from_graph6(text: &str) -> Result<Graph, GraphError> {
        let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
        let bad = |msg: &str| GraphError::Graph6(msg.to_string());
        if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
            return Err(GraphError::Graph6(format!(
                "byte {b} outside the printable range 63..=126"
            )));
        }
        let (n, body) = match bytes {
            [] => return Err(bad("empty input")),
            [126, 126, ..] => return Err(bad("8-byte order prefix is not supported")),
            [126, rest @ ..] => {
                if rest.len() < 3 {
                    return Err(bad("truncated long-form order prefix"));
                }
                let n = rest[..3]
                    .iter()
                    .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
                if n < 63 {
                    return Err(bad("long-form order prefix used for n < 63"));
                }
                (n, &rest[3..])
            }
            [first, rest @ ..] => (usize::from(first - 63), rest),
        };
        let bits = n * n.saturating_sub(1) / 2;
        let expected = bits.div_ceil(6);
        if body.len() != expected {
            return Err(GraphError::Graph6(format!(
                "expected {expected} adjacency bytes for n = {n}, found {}",
                body.len()
            )));
        }
        let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
        if (bits..expected * 6).any(bit) {
            return Err(bad("nonzero padding bits"));
        }
        let mut adj = vec![Vec::new(); n];
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if bit(k) {
                    adj[u].push(v);
                    adj[v].push(u);
                }
                k += 1;
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph::from_adjacency_unchecked(adj))
    }

    /// Encodes the graph as a graph6 line (without newline).
    pub fn to_graph6(&self) -> Result<String, GraphError> {
        let n = self.order();
        if n > GRAPH6_MAX_ORDER {
            return Err(GraphError::Graph6(format!(
                "order {n} exceeds the supported maximum {GRAPH6_MAX_ORDER}"
            )));
        }
        let mut out = Vec::with_capacity(4 + (n * n) / 12 + 1);
        if n < 63 {
            out.push(63 + n as u8);
        } else {
            out.push(126);
            for shift in [12, 6, 0] {
                out.push(63 + ((n >> shift) & 63) as u8);
            }
        }
        let mut acc = 0u8;
        let mut filled = 0;
        for v in 1..n {
            for u in 0..v {
                acc = (acc << 1) | u8::from(self.has_edge(u, v));
                filled += 1;
                if filled == 6 {
                    out.push(63 + acc);
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(63 + (acc << (6 - filled)));
        }
        Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
    }

    /// Parses the edge-list text format: a mandatory `n <count>` line, then one
    /// `u v` pair per line. Lines starting with `#` and blank lines are skipped.
    pub fn from_edge_list(text: &str) -> Result<Graph, GraphError> {
        let err = |line: usize, msg: String| GraphError::EdgeList { line, msg };
        let mut n = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match n {
                None => match fields.as_slice() {
                    ["n", count] => {
                        n = Some(count.parse::<usize>().map_err(|e| {
                            err(line_no, format!("bad vertex count {count:?}: {e}"))
                        })?)
                    }
                    _ => return Err(err(line_no, "expected header line `n <count>`".into())),
                },
                Some(_) => match fields.as_slice() {
                    [a, b] => {
                        let parse = |s: &str| {
                            s.parse::<usize>()
                                .map_err(|e| err(line_no, format!("bad vertex id {s:?}: {e}")))
                        };
                        edges.push((parse(a)?, parse(b)?));
                    }
                    _ => return Err(err(line_no, format!("expected `u v`, found {line:?}"))),
                },
            }
        }
        let n = n.ok_or_else(|| err(0, "missing header line `n <count>`".into()))?;
        Graph::from_edges(n, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.order());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn adjacency_is_valid(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    adj.iter().enumerate().all(|(v, list)| {
        list.windows(2).all(|w| w[0] < w[1])
            && list
                .iter()
                .all(|&u| u < n && u != v && adj[u].binary_search(&v).is_ok())
    })
}

/// A rooted tree given by parent pointers.
///
/// `parent[root]` is `None`; every other vertex has a parent and following
/// parents from any vertex reaches the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    root: usize,
    parent: Vec<Option<usize>>,
}

impl Tree {
    /// Validates and wraps a parent array.
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Tree, GraphError> {
        let n = parent.len();
        if n == 0 {
            return Err(GraphError::InvalidParents(
                "a tree has at least one vertex".into(),
            ));
        }
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        let &[root] = roots.as_slice() else {
            return Err(GraphError::InvalidParents(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        };
        if let Some((v, p)) = parent
            .iter()
            .enumerate()
            .find_map(|(v, p)| p.filter(|&p| p >= n || p == v).map(|p| (v, p)))
        {
            return Err(GraphError::InvalidParents(format!(
                "vertex {v} has invalid parent {p}"
            )));
        }
        // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root
        let mut state = vec![0u8; n];
        state[root] = 2;
        let mut walk = Vec::new();
        for start in 0..n {
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                walk.push(v);
                v = parent[v].expect("only the root lacks a parent");
            }
            if state[v] == 1 {
                return Err(GraphError::InvalidParents(format!(
                    "cycle through vertex {v}"
                )));
            }
            for u in walk.drain(..) {
                state[u] = 2;
            }
        }
        Ok(Tree { root, parent })
    }

    /// Roots a tree-shaped graph at `root`, keeping vertex ids.
    pub fn from_graph(g: &Graph, root: usize) -> Result<Tree, GraphError> {
        if root >= g.order() {
            return Err(GraphError::VertexOutOfRange {
                vertex: root,
                n: g.order(),
            });
        }
        if !g.is_tree() {
            return Err(GraphError::NotATree);
        }
        let mut parent = vec![None; g.order()];
        let mut seen = vec![false; g.order()];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = Some(v);
                    stack.push(u);
                }
            }
        }
        Ok(Tree { root, parent })
    }

    /// The single-vertex tree.
    pub fn singleton() -> Tree {
        Tree {
            root: 0,
            parent: vec![None],
        }
    }

    pub fn order(&self) -> usize {
        self.parent.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.order(), self.edges()).expect("tree edges are valid")
    }

    /// Children lists in increasing id order.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.order()];
        for (p, v) in self.edges() {
            children[p].push(v);
        }
        children
    }

    /// Vertices in an order where every vertex precedes its parent. Built with
    /// an explicit stack, so arbitrarily deep trees are fine.
    pub fn postorder(&self) -> Vec<usize> {
        let children = self.children();
        let mut order = Vec::with_capacity(self.order());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(children[v].iter().copied());
        }
        order.reverse();
        order
    }
}
