//! Finite graphs with a fixed vertex order, edge subsets as bitmasks, and the
//! partitions of the vertex set they induce.
//!
//! Edges are stored as pairs `(i, j)` with `i <= j`, sorted lexicographically;
//! the sort is stable so parallel edges produced by contraction keep their
//! relative order. Loops and parallel edges are representable (contraction
//! creates them) but the simple-graph constructor rejects them.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge endpoint {vertex} out of range (graph has {n_vertices} vertices)")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },
    #[error("loop ({v},{v}) not allowed in a simple graph")]
    LoopInSimpleGraph { v: usize },
    #[error("duplicate edge ({i},{j}) not allowed in a simple graph")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge index {index} out of range ({n_edges} edges)")]
    EdgeOutOfRange { index: usize, n_edges: usize },
    #[error("cannot contract the loop ({v},{v})")]
    ContractLoop { v: usize },
    #[error("graphs have different vertex counts ({0} vs {1})")]
    VertexCountMismatch(usize, usize),
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("graph has more than {max} edges")]
    TooManyEdges { max: usize },
}

const MAX_EDGES: usize = 64;

/// Subset of the edges of a fixed graph, as a bitmask over edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EdgeSubset(u64);

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn from_bits(bits: u64) -> Self {
        EdgeSubset(bits)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        let mut bits = 0u64;
        for i in indices {
            assert!(i < MAX_EDGES);
            bits |= 1 << i;
        }
        EdgeSubset(bits)
    }

    /// All edges of a graph with `n_edges` edges.
    pub fn full(n_edges: usize) -> Self {
        assert!(n_edges <= MAX_EDGES);
        if n_edges == 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << n_edges) - 1)
        }
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < MAX_EDGES && self.0 & (1 << index) != 0
    }

    pub fn with(&self, index: usize) -> Self {
        EdgeSubset(self.0 | (1 << index))
    }

    pub fn without(&self, index: usize) -> Self {
        EdgeSubset(self.0 & !(1 << index))
    }

    pub fn union(&self, other: EdgeSubset) -> Self {
        EdgeSubset(self.0 | other.0)
    }

    pub fn intersection(&self, other: EdgeSubset) -> Self {
        EdgeSubset(self.0 & other.0)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Edge indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_EDGES).filter(move |i| self.contains(*i))
    }

    /// All subsets of the edge set of a graph with `n_edges` edges, ascending
    /// by bitmask.
    pub fn all_subsets(n_edges: usize) -> impl Iterator<Item = EdgeSubset> {
        assert!(n_edges < 63, "subset enumeration limited to < 63 edges");
        (0..(1u64 << n_edges)).map(EdgeSubset)
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "e{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Partition of the vertex set `{0, .., n-1}` into disjoint nonempty blocks.
///
/// Canonical form: each block sorted ascending, blocks sorted by their
/// minimum element, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    n_vertices: usize,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>, n_vertices: usize) -> Result<Self, GraphError> {
        let mut seen = vec![false; n_vertices];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(GraphError::BadPartition("empty block".into()));
            }
            block.sort_unstable();
            for &v in block.iter() {
                if v >= n_vertices {
                    return Err(GraphError::BadPartition(format!("vertex {v} out of range")));
                }
                if seen[v] {
                    return Err(GraphError::BadPartition(format!(
                        "vertex {v} appears twice"
                    )));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GraphError::BadPartition(
                "blocks do not cover the vertex set".into(),
            ));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Partition { blocks, n_vertices })
    }

    pub fn singletons(n_vertices: usize) -> Self {
        Partition {
            blocks: (0..n_vertices).map(|v| vec![v]).collect(),
            n_vertices,
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Index of the block containing `v`.
    pub fn block_of(&self, v: usize) -> usize {
        self.blocks
            .iter()
            .position(|b| b.binary_search(&v).is_ok())
            .expect("vertex in some block")
    }

    /// True iff every block of `self` is contained in a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> Result<bool, GraphError> {
        if self.n_vertices != coarser.n_vertices {
            return Err(GraphError::VertexCountMismatch(
                self.n_vertices,
                coarser.n_vertices,
            ));
        }
        let mut owner = vec![0usize; self.n_vertices];
        for (bi, block) in coarser.blocks.iter().enumerate() {
            for &v in block {
                owner[v] = bi;
            }
        }
        Ok(self
            .blocks
            .iter()
            .all(|block| block.iter().all(|&v| owner[v] == owner[block[0]])))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, "|")?;
            }
            for (j, v) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
        }
        write!(f, "}}")
    }
}

/// Finite graph with ordered vertices `0..n` and lexicographically sorted
/// oriented edges. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// General constructor: normalizes endpoints to `(min, max)` and sorts
    /// edges canonically. Loops and parallel edges are kept.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if edges.len() > MAX_EDGES {
            return Err(GraphError::TooManyEdges { max: MAX_EDGES });
        }
        let mut norm: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if j >= n_vertices {
                return Err(GraphError::VertexOutOfRange {
                    vertex: j,
                    n_vertices,
                });
            }
            norm.push((i, j));
        }
        norm.sort(); // stable
        Ok(Graph {
            n_vertices,
            edges: norm,
        })
    }

    /// Simple-graph constructor: rejects loops and duplicate pairs.
    pub fn simple(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let g = Graph::new(n_vertices, edges)?;
        for (k, &(i, j)) in g.edges.iter().enumerate() {
            if i == j {
                return Err(GraphError::LoopInSimpleGraph { v: i });
            }
            if k > 0 && g.edges[k - 1] == (i, j) {
                return Err(GraphError::DuplicateEdge { i, j });
            }
        }
        Ok(g)
    }

    pub fn edgeless(n_vertices: usize) -> Self {
        Graph {
            n_vertices,
            edges: Vec::new(),
        }
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph {
            n_vertices: n,
            edges,
        }
    }

    /// Path `0-1-..-(n-1)`.
    pub fn path(n: usize) -> Self {
        Graph {
            n_vertices: n,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    /// Cycle `0-1-..-(n-1)-0`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        edges.sort();
        Graph {
            n_vertices: n,
            edges,
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, index: usize) -> Result<(usize, usize), GraphError> {
        self.edges
            .get(index)
            .copied()
            .ok_or(GraphError::EdgeOutOfRange {
                index,
                n_edges: self.edges.len(),
            })
    }

    pub fn full_subset(&self) -> EdgeSubset {
        EdgeSubset::full(self.edge_count())
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|&(i, j)| i != j) && self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Index of the simple edge `(i, j)` (first match on multigraphs).
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let pair = (a.min(b), a.max(b));
        self.edges.iter().position(|&e| e == pair)
    }

    /// Connected components of the spanning subgraph `[Γ:S]`.
    pub fn components(&self, s: EdgeSubset) -> Partition {
        let mut parent: Vec<usize> = (0..self.n_vertices).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut root = v;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = v;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for idx in s.iter() {
            if idx >= self.edges.len() {
                break;
            }
            let (i, j) = self.edges[idx];
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            if ri != rj {
                let (lo, hi) = (ri.min(rj), ri.max(rj));
                parent[hi] = lo;
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of_root = vec![usize::MAX; self.n_vertices];
        for v in 0..self.n_vertices {
            let r = find(&mut parent, v);
            if block_of_root[r] == usize::MAX {
                block_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[block_of_root[r]].push(v);
        }
        // roots are block minima and appear in ascending order, so the
        // result is already canonical
        Partition {
            blocks,
            n_vertices: self.n_vertices,
        }
    }

    /// The map Φ from edge subsets to vertex partitions; alias of
    /// [`Graph::components`]. Order preserving: `S ⊆ S'` implies `phi(S)`
    /// refines `phi(S')`.
    pub fn phi(&self, s: EdgeSubset) -> Partition {
        self.components(s)
    }

    /// Number of connected components `l(S)` of `[Γ:S]`.
    pub fn component_count(&self, s: EdgeSubset) -> usize {
        self.components(s).len()
    }

    /// True iff `[Γ:S]` has no cycle, i.e. `|S| + l(S) = n`.
    /// Loops and parallel edges inside `s` force `false`.
    pub fn is_forest(&self, s: EdgeSubset) -> bool {
        s.len() + self.component_count(s) == self.n_vertices
    }

    /// Splits `s` into internal and external edges: `α ∈ s` is external iff
    /// removing it disconnects a component of `[Γ:S]`, internal otherwise.
    pub fn classify_edges(&self, s: EdgeSubset) -> (EdgeSubset, EdgeSubset) {
        let l = self.component_count(s);
        let mut internal = EdgeSubset::EMPTY;
        let mut external = EdgeSubset::EMPTY;
        for alpha in s.iter() {
            let l_removed = self.component_count(s.without(alpha));
            if l_removed == l {
                internal = internal.with(alpha);
            } else {
                debug_assert_eq!(l_removed, l + 1);
                external = external.with(alpha);
            }
        }
        (internal, external)
    }

    /// Graph with edge `e` removed.
    pub fn delete_edge(&self, e: usize) -> Result<Graph, GraphError> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(Graph {
            n_vertices: self.n_vertices,
            edges,
        })
    }

    /// Graph with edge `e = (i, j)` contracted: `j` is merged into `i` and
    /// vertices above `j` shift down by one. Loops and parallel edges created
    /// by the merge are kept.
    pub fn contract_edge(&self, e: usize) -> Result<Graph, GraphError> {
        Ok(self.contract_edge_mapped(e)?.0)
    }

    /// As [`Graph::contract_edge`], also returning for every old edge index
    /// its index in the contracted graph (`None` for `e` itself).
    pub fn contract_edge_mapped(
        &self,
        e: usize,
    ) -> Result<(Graph, Vec<Option<usize>>), GraphError> {
        let (i, j) = self.edge(e)?;
        if i == j {
            return Err(GraphError::ContractLoop { v: i });
        }
        let relabel = |v: usize| {
            if v == j {
                i
            } else if v > j {
                v - 1
            } else {
                v
            }
        };
        let mut pairs: Vec<((usize, usize), usize)> = Vec::with_capacity(self.edges.len() - 1);
        for (idx, &(a, b)) in self.edges.iter().enumerate() {
            if idx == e {
                continue;
            }
            let (x, y) = (relabel(a), relabel(b));
            pairs.push(((x.min(y), x.max(y)), idx));
        }
        pairs.sort_by_key(|&(pair, _)| pair); // stable: parallel edges keep order
        let mut map = vec![None; self.edges.len()];
        let mut edges = Vec::with_capacity(pairs.len());
        for (new_idx, (pair, old_idx)) in pairs.into_iter().enumerate() {
            map[old_idx] = Some(new_idx);
            edges.push(pair);
        }
        Ok((
            Graph {
                n_vertices: self.n_vertices - 1,
                edges,
            },
            map,
        ))
    }

    /// All simple cycles, each once in canonical form: the walk starts at its
    /// minimal vertex and the second vertex is smaller than the last.
    /// Requires a simple graph.
    pub fn enumerate_cycles(&self) -> Vec<Vec<usize>> {
        assert!(
            self.is_simple(),
            "cycle enumeration requires a simple graph"
        );
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for nbrs in &mut adj {
            nbrs.sort_unstable();
        }
        let mut cycles = Vec::new();
        let mut path = Vec::new();
        let mut on_path = vec![false; self.n_vertices];
        for start in 0..self.n_vertices {
            path.push(start);
            on_path[start] = true;
            self.cycle_dfs(start, start, &adj, &mut path, &mut on_path, &mut cycles);
            on_path[start] = false;
            path.pop();
        }
        cycles
    }

    fn cycle_dfs(
        &self,
        start: usize,
        current: usize,
        adj: &[Vec<usize>],
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        for &next in &adj[current] {
            if next == start && path.len() >= 3 {
                if path[1] < path[path.len() - 1] {
                    cycles.push(path.clone());
                }
            } else if next > start && !on_path[next] {
                path.push(next);
                on_path[next] = true;
                self.cycle_dfs(start, next, adj, path, on_path, cycles);
                on_path[next] = false;
                path.pop();
            }
        }
    }

    /// Edge subset traversed by a cycle given as a vertex sequence.
    pub fn cycle_edge_set(&self, cycle: &[usize]) -> EdgeSubset {
        let mut s = EdgeSubset::EMPTY;
        for k in 0..cycle.len() {
            let a = cycle[k];
            let b = cycle[(k + 1) % cycle.len()];
            let idx = self
                .edge_index(a, b)
                .unwrap_or_else(|| panic!("cycle uses missing edge ({a},{b})"));
            s = s.with(idx);
        }
        s
    }

    /// Canonical encoding for memo tables: vertex count plus the sorted edge
    /// multiset. Collisions across isomorphic graphs are missed cache hits,
    /// never wrong answers.
    pub fn canonical_key(&self) -> (usize, Vec<(usize, usize)>) {
        (self.n_vertices, self.edges.clone())
    }

    /// Human-readable name of edge `idx`, e.g. `01` for the edge `(0,1)`.
    pub fn edge_name(&self, idx: usize) -> String {
        let (i, j) = self.edges[idx];
        format!("{i}.{j}")
    }

    /// Formats an edge subset through the graph's edge pairs.
    pub fn subset_name(&self, s: EdgeSubset) -> String {
        let names: Vec<String> = s.iter().map(|i| self.edge_name(i)).collect();
        format!("{{{}}}", names.join(" "))
    }

    /// Parses the graph text format:
    ///
    /// ```text
    /// # comment
    /// vertices N
    /// i j
    /// ```
    ///
    /// One edge per line, 0-based endpoints, loops as `i i`, duplicates
    /// allowed. Edges are sorted canonically.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut n_vertices: Option<usize> = None;
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut edge_lines: Vec<usize> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if n_vertices.is_none() {
                let mut parts = content.split_whitespace();
                match (parts.next(), parts.next(), parts.next()) {
                    (Some("vertices"), Some(n), None) => {
                        let n: usize = n.parse().map_err(|_| GraphError::Parse {
                            line,
                            message: format!("invalid vertex count `{n}`"),
                        })?;
                        n_vertices = Some(n);
                    }
                    _ => {
                        return Err(GraphError::Parse {
                            line,
                            message: "expected header `vertices N`".into(),
                        })
                    }
                }
                continue;
            }
            let mut parts = content.split_whitespace();
            match (parts.next(), parts.next(), parts.next()) {
                (Some(a), Some(b), None) => {
                    let parse_endpoint = |tok: &str| -> Result<usize, GraphError> {
                        tok.parse().map_err(|_| GraphError::Parse {
                            line,
                            message: format!("invalid vertex `{tok}`"),
                        })
                    };
                    edges.push((parse_endpoint(a)?, parse_endpoint(b)?));
                    edge_lines.push(line);
                }
                _ => {
                    return Err(GraphError::Parse {
                        line,
                        message: "expected an edge line `i j`".into(),
                    })
                }
            }
        }
        let n = n_vertices.ok_or(GraphError::Parse {
            line: text.lines().count() + 1,
            message: "missing header `vertices N`".into(),
        })?;
        // report out-of-range endpoints with their line number
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a.max(b) >= n {
                return Err(GraphError::Parse {
                    line: edge_lines[k],
                    message: format!(
                        "edge endpoint {} out of range (graph has {n} vertices)",
                        a.max(b)
                    ),
                });
            }
        }
        Graph::new(n, edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph(n={}, edges=[", self.n_vertices)?;
        for (k, (i, j)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{i}.{j}")?;
        }
        write!(f, "])")
    }
}
