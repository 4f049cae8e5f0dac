//! Graph representation and the graph-theoretic primitives everything else
//! consumes: connectivity, pairwise minimum edge cuts, global edge
//! connectivity, and the independence number.

use crate::{Error, Result};
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

/// Immutable simple undirected graph with vertices `0..n`.
///
/// Edges are stored normalized (`u < v`), deduplicated, and sorted
/// lexicographically; adjacency lists are derived from the edge list at
/// construction. The graph is never mutated after construction, so shared
/// references are safe across threads; every operation keeps its scratch
/// state (visited arrays, residual capacities) local to the call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj_off: Vec<usize>,
    adj_dat: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph from a vertex count and a list of edges.
    ///
    /// Pairs are normalized to `u < v` and deduplicated. A self-loop or an
    /// out-of-range endpoint is rejected with an error naming the pair.
    pub fn build(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::validation(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::validation(format!("edge ({u}, {v}) is a self-loop")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(Graph::from_normalized(n, norm, None))
    }

    /// Internal constructor; `edges` must already be normalized, sorted and
    /// deduplicated.
    fn from_normalized(
        n: usize,
        edges: Vec<(usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Graph {
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut adj_off = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        adj_off.push(0);
        for v in 0..n {
            acc += deg[v];
            adj_off.push(acc);
        }
        let mut cursor: Vec<usize> = adj_off[..n].to_vec();
        let mut adj_dat = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            adj_dat[cursor[u]] = v;
            cursor[u] += 1;
            adj_dat[cursor[v]] = u;
            cursor[v] += 1;
        }
        // Neighbor lists come out sorted because the edge list is sorted
        // lexicographically: for fixed u the v's arrive in order, and lower
        // endpoints are appended in order of the first coordinate.
        for v in 0..n {
            adj_dat[adj_off[v]..adj_off[v + 1]].sort_unstable();
        }
        Graph {
            n,
            edges,
            adj_off,
            adj_dat,
            labels,
        }
    }

    /// Attaches per-vertex display labels (bit strings, residues, ...).
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::validation(format!(
                "label count {} does not match vertex count {}",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges, normalized `u < v` and sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj_dat[self.adj_off[v]..self.adj_off[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj_off[v + 1] - self.adj_off[v]
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n == 0 {
            return None;
        }
        let d = self.degree(0);
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        let (a, b) = (u.min(v), u.max(v));
        self.edges.binary_search(&(a, b)).is_ok()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    /// True iff every vertex is reachable from vertex 0. A graph with a
    /// single vertex counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1usize;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Component id per vertex plus the component count.
    pub(crate) fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0usize;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        (comp, next)
    }

    /// Maximum number of edge-disjoint `(u, v)`-paths, which equals the
    /// minimum `(u, v)` edge-cut size. Returns 0 iff `u` and `v` lie in
    /// different components.
    pub fn min_edge_cut(&self, u: usize, v: usize) -> Result<usize> {
        if u >= self.n || v >= self.n {
            return Err(Error::validation(format!(
                "vertex pair ({u}, {v}) out of range 0..{}",
                self.n
            )));
        }
        if u == v {
            return Err(Error::validation(format!(
                "min_edge_cut requires two distinct vertices, got ({u}, {u})"
            )));
        }
        let mut flow = UnitFlow::new(self);
        Ok(flow.max_flow_capped(u, v, usize::MAX))
    }

    /// Global edge connectivity λ: the minimum number of edges whose removal
    /// disconnects the graph. 0 for graphs that are already disconnected or
    /// have fewer than two vertices.
    ///
    /// Fixing source 0 and scanning all sinks suffices: some global minimum
    /// cut separates vertex 0 from something.
    pub fn edge_connectivity(&self) -> usize {
        if self.n < 2 || !self.is_connected() {
            return 0;
        }
        let mut flow = UnitFlow::new(self);
        let mut best = usize::MAX;
        for v in 1..self.n {
            flow.reset();
            best = best.min(flow.max_flow_capped(0, v, best));
            if best == 0 {
                break;
            }
        }
        best
    }

    /// 2-coloring when the graph is bipartite, `None` otherwise.
    pub fn bipartition(&self) -> Option<Vec<u8>> {
        let mut color = vec![u8::MAX; self.n];
        let mut stack = Vec::new();
        for s in 0..self.n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        stack.push(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Exact maximum independent set size.
    ///
    /// Bipartite graphs are solved through maximum matching (size is
    /// `n - matching`); everything else falls to branch and bound with a
    /// greedy-coloring bound. Worst case is exponential; intended for
    /// graphs up to a few dozen vertices.
    pub fn independence_number(&self) -> usize {
        self.independence_witness().0
    }

    /// Independence number together with one maximum independent set.
    pub fn independence_witness(&self) -> (usize, Vec<usize>) {
        if self.n == 0 {
            return (0, Vec::new());
        }
        let (size, mut set) = match self.bipartition() {
            Some(color) => bipartite_max_independent(self, &color),
            None => branch_bound_max_independent(self),
        };
        set.sort_unstable();
        debug_assert!(is_independent(self, &set));
        debug_assert_eq!(set.len(), size);
        (size, set)
    }

    /// New graph with the edges of `faults` absent. Labels carry over.
    pub fn remove_edges(&self, faults: &EdgeSet) -> Result<Graph> {
        let mut keep = vec![true; self.edges.len()];
        for &(u, v) in faults.pairs() {
            match self.edges.binary_search(&(u, v)) {
                Ok(i) => keep[i] = false,
                Err(_) => {
                    return Err(Error::validation(format!(
                        "({u}, {v}) is not an edge of the host graph"
                    )))
                }
            }
        }
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter_map(|(&e, &k)| k.then_some(e))
            .collect();
        Ok(Graph::from_normalized(self.n, edges, self.labels.clone()))
    }

    /// Hot-path variant of [`Graph::remove_edges`]: removes edges by index
    /// into [`Graph::edges`] and drops labels. Indices must be valid and
    /// distinct.
    pub(crate) fn remove_edge_indices(&self, fault: &[usize]) -> Graph {
        let mut keep = vec![true; self.edges.len()];
        for &i in fault {
            debug_assert!(keep[i], "duplicate fault index {i}");
            keep[i] = false;
        }
        let edges = self
            .edges
            .iter()
            .zip(&keep)
            .filter_map(|(&e, &k)| k.then_some(e))
            .collect();
        Graph::from_normalized(self.n, edges, None)
    }
}

/// An ordered list of distinct edges of a host graph, used as a fault set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSet {
    pairs: Vec<(usize, usize)>,
}

impl EdgeSet {
    /// Validates that every pair is an edge of `host` and that no pair
    /// repeats. Pairs are normalized to `u < v`; input order is kept.
    pub fn new(host: &Graph, pairs: &[(usize, usize)]) -> Result<EdgeSet> {
        let mut seen = vec![false; host.m()];
        let mut norm = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            let (a, b) = (u.min(v), u.max(v));
            let idx = host.edges.binary_search(&(a, b)).map_err(|_| {
                Error::validation(format!("({u}, {v}) is not an edge of the host graph"))
            })?;
            if seen[idx] {
                return Err(Error::validation(format!(
                    "edge ({a}, {b}) appears twice in the fault set"
                )));
            }
            seen[idx] = true;
            norm.push((a, b));
        }
        Ok(EdgeSet { pairs: norm })
    }

    pub(crate) fn from_indices(host: &Graph, indices: &[usize]) -> EdgeSet {
        EdgeSet {
            pairs: indices.iter().map(|&i| host.edges[i]).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Connectivity decided through the adjacency-matrix power criterion: the
/// graph is connected iff `A^(n-1) + A^(n-2)` has no zero entry.
///
/// Kept as an independent cross-check for [`Graph::is_connected`]; products
/// are taken over the boolean semiring so entries cannot overflow.
pub fn matrix_connectivity_oracle(g: &Graph) -> bool {
    let n = g.n();
    if n <= 1 {
        return true;
    }
    let blocks = n.div_ceil(64);
    let mut a = vec![vec![0u64; blocks]; n];
    for &(u, v) in g.edges() {
        a[u][v / 64] |= 1 << (v % 64);
        a[v][u / 64] |= 1 << (u % 64);
    }
    let p = bool_mat_pow(&a, n - 2);
    let q = bool_mat_mul(&p, &a);
    for u in 0..n {
        for v in 0..n {
            let bit = (p[u][v / 64] | q[u][v / 64]) >> (v % 64) & 1;
            if bit == 0 {
                return false;
            }
        }
    }
    true
}

fn bool_identity(n: usize, blocks: usize) -> Vec<Vec<u64>> {
    let mut id = vec![vec![0u64; blocks]; n];
    for (v, row) in id.iter_mut().enumerate() {
        row[v / 64] |= 1 << (v % 64);
    }
    id
}

fn bool_mat_mul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.len();
    let blocks = a[0].len();
    let mut c = vec![vec![0u64; blocks]; n];
    for i in 0..n {
        for (jb, &word) in a[i].iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let j = jb * 64 + w.trailing_zeros() as usize;
                w &= w - 1;
                for k in 0..blocks {
                    c[i][k] |= b[j][k];
                }
            }
        }
    }
    c
}

fn bool_mat_pow(a: &[Vec<u64>], mut e: usize) -> Vec<Vec<u64>> {
    let mut result = bool_identity(a.len(), a[0].len());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = bool_mat_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = bool_mat_mul(&base, &base);
        }
    }
    result
}

pub(crate) const UNSET: u32 = u32::MAX;

/// Unit-capacity max-flow over the standard reduction of an undirected graph:
/// each edge becomes two opposite arcs of capacity 1. Augmenting paths are
/// found by breadth-first search (shortest first).
pub(crate) struct UnitFlow {
    head: Vec<u32>,
    arc_to: Vec<u32>,
    arc_pair: Vec<u32>,
    res: Vec<u8>,
    parent: Vec<u32>,
    visited: Vec<bool>,
    queue: Vec<u32>,
}

impl UnitFlow {
    pub fn new(g: &Graph) -> UnitFlow {
        let n = g.n();
        let m = g.m();
        let mut head = vec![0u32; n + 1];
        for &(u, v) in g.edges() {
            head[u + 1] += 1;
            head[v + 1] += 1;
        }
        for v in 0..n {
            head[v + 1] += head[v];
        }
        let mut cursor = head.clone();
        let mut arc_to = vec![0u32; 2 * m];
        let mut arc_pair = vec![0u32; 2 * m];
        for &(u, v) in g.edges() {
            let a = cursor[u];
            cursor[u] += 1;
            let b = cursor[v];
            cursor[v] += 1;
            arc_to[a as usize] = v as u32;
            arc_to[b as usize] = u as u32;
            arc_pair[a as usize] = b;
            arc_pair[b as usize] = a;
        }
        UnitFlow {
            head,
            arc_to,
            arc_pair,
            res: vec![1u8; 2 * m],
            parent: vec![UNSET; n],
            visited: vec![false; n],
            queue: Vec::with_capacity(n),
        }
    }

    /// Restores all residual capacities to 1, discarding previous flow.
    pub fn reset(&mut self) {
        self.res.fill(1);
    }

    /// Pushes augmenting paths from `s` to `t` until the flow reaches `cap`
    /// or no augmenting path remains, returning the flow found. When the
    /// result is below `cap` it is the exact max flow and
    /// [`UnitFlow::last_search_side`] describes a minimum cut.
    pub fn max_flow_capped(&mut self, s: usize, t: usize, cap: usize) -> usize {
        let mut flow = 0usize;
        while flow < cap {
            if !self.bfs(s, t) {
                break;
            }
            let mut v = t as u32;
            while v != s as u32 {
                let a = self.parent[v as usize];
                self.res[a as usize] -= 1;
                let back = self.arc_pair[a as usize];
                self.res[back as usize] += 1;
                v = self.arc_to[back as usize];
            }
            flow += 1;
        }
        flow
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.visited.fill(false);
        self.queue.clear();
        self.queue.push(s as u32);
        self.visited[s] = true;
        let mut qi = 0;
        while qi < self.queue.len() {
            let u = self.queue[qi] as usize;
            qi += 1;
            for a in self.head[u]..self.head[u + 1] {
                if self.res[a as usize] == 0 {
                    continue;
                }
                let v = self.arc_to[a as usize] as usize;
                if !self.visited[v] {
                    self.visited[v] = true;
                    self.parent[v] = a;
                    if v == t {
                        return true;
                    }
                    self.queue.push(v as u32);
                }
            }
        }
        false
    }

    /// Vertices reachable from the source in the residual graph of the last
    /// (failed) search: the source side of a minimum cut.
    pub fn last_search_side(&self) -> &[bool] {
        &self.visited
    }
}

fn is_independent(g: &Graph, set: &[usize]) -> bool {
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if g.has_edge(u, v) {
                return false;
            }
        }
    }
    true
}

/// König construction: maximum matching by augmenting paths, then the
/// complement of the minimum vertex cover.
fn bipartite_max_independent(g: &Graph, color: &[u8]) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut mate = vec![UNSET; n];
    let mut visited = vec![false; n];
    let mut matching = 0usize;
    for u in 0..n {
        if color[u] != 0 {
            continue;
        }
        visited.fill(false);
        if kuhn_augment(g, u, &mut mate, &mut visited) {
            matching += 1;
        }
    }
    // Alternating reachability from unmatched left vertices.
    let mut z = vec![false; n];
    let mut stack: Vec<usize> = (0..n)
        .filter(|&u| color[u] == 0 && mate[u] == UNSET)
        .collect();
    for &u in &stack {
        z[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in g.neighbors(u) {
            if z[v] {
                continue;
            }
            z[v] = true;
            let w = mate[v];
            if w != UNSET && !z[w as usize] {
                z[w as usize] = true;
                stack.push(w as usize);
            }
        }
    }
    // Minimum cover = (left not in Z) ∪ (right in Z); the independent set is
    // its complement.
    let set: Vec<usize> = (0..n)
        .filter(|&v| if color[v] == 0 { z[v] } else { !z[v] })
        .collect();
    debug_assert_eq!(set.len(), n - matching);
    (n - matching, set)
}

fn kuhn_augment(g: &Graph, u: usize, mate: &mut [u32], visited: &mut [bool]) -> bool {
    for &v in g.neighbors(u) {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        if mate[v] == UNSET || kuhn_augment(g, mate[v] as usize, mate, visited) {
            mate[v] = u as u32;
            mate[u] = v as u32;
            return true;
        }
    }
    false
}

/// Word-array bitset sized at construction.
#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn zeroed(n: usize) -> Bits {
        Bits(vec![0u64; n.div_ceil(64).max(1)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn test(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(b, &word)| {
            std::iter::successors((word != 0).then_some(word), |&w| {
                let next = w & (w - 1);
                (next != 0).then_some(next)
            })
            .map(move |w| b * 64 + w.trailing_zeros() as usize)
        })
    }
}

/// Maximum independent set as a maximum clique of the complement, searched
/// with the greedy-coloring bound: candidates are colored greedily, and a
/// branch is cut when |current| + color(v) cannot beat the incumbent.
fn branch_bound_max_independent(g: &Graph) -> (usize, Vec<usize>) {
    let n = g.n();
    let mut comp: Vec<Bits> = (0..n)
        .map(|u| {
            let mut row = Bits::zeroed(n);
            for v in 0..n {
                if v != u && !g.has_edge(u, v) {
                    row.set(v);
                }
            }
            row
        })
        .collect();

    // Branch order: descending complement degree, the classic static order.
    let mut order: Vec<usize> = (0..n).collect();
    let comp_deg: Vec<usize> = comp.iter().map(|row| row.ones().count()).collect();
    order.sort_by(|&a, &b| comp_deg[b].cmp(&comp_deg[a]).then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // Relabel so vertex i is the i-th branch vertex.
    let relabeled: Vec<Bits> = order
        .iter()
        .map(|&u| {
            let mut row = Bits::zeroed(n);
            for v in comp[u].ones() {
                row.set(rank[v]);
            }
            row
        })
        .collect();
    comp = relabeled;

    let mut cand = Bits::zeroed(n);
    for i in 0..n {
        cand.set(i);
    }
    let mut current = Vec::new();
    let mut best: (usize, Vec<usize>) = (0, Vec::new());
    expand_clique(&comp, cand, &mut current, &mut best);
    let set = best.1.iter().map(|&i| order[i]).collect();
    (best.0, set)
}

fn expand_clique(comp: &[Bits], mut cand: Bits, current: &mut Vec<usize>, best: &mut (usize, Vec<usize>)) {
    if cand.is_empty() {
        if current.len() > best.0 {
            *best = (current.len(), current.clone());
        }
        return;
    }
    // Greedy coloring of the candidates; a clique can take at most one
    // vertex per color class.
    let verts: Vec<usize> = cand.ones().collect();
    let mut color = vec![0usize; verts.len()];
    let mut classes: Vec<Bits> = Vec::new();
    for (i, &v) in verts.iter().enumerate() {
        let mut c = 0;
        loop {
            if c == classes.len() {
                classes.push(Bits::zeroed(comp.len()));
            }
            // The class must stay independent in the complement graph, i.e.
            // v must not be comp-adjacent to anything already in it.
            let conflict = classes[c].ones().any(|w| comp[v].test(w));
            if !conflict {
                classes[c].set(v);
                color[i] = c + 1;
                break;
            }
            c += 1;
        }
    }
    let mut ordered: Vec<(usize, usize)> = verts.iter().copied().zip(color).collect();
    ordered.sort_by_key(|&(_, c)| c);

    for idx in (0..ordered.len()).rev() {
        let (v, c) = ordered[idx];
        if current.len() + c <= best.0 {
            return;
        }
        current.push(v);
        let mut next = cand.clone();
        next.and_assign(&comp[v]);
        expand_clique(comp, next, current, best);
        current.pop();
        cand.clear(v);
    }
}

// ---------------------------------------------------------------------------
// Graph text format
// ---------------------------------------------------------------------------
//
// Lines starting with '#' are comments. The first data line is "<n> <m>",
// followed by exactly m lines "<u> <v>" with 0 <= u < v < n, ASCII decimal,
// single-space separated. The canonical writer sorts edges lexicographically,
// so output bytes are reproducible.

/// Graph read from a text file plus the `# spec=` comment, when present.
#[derive(Debug)]
pub struct GraphFile {
    pub graph: Graph,
    pub spec: Option<String>,
}

pub fn write_graph_text<W: Write>(w: &mut W, g: &Graph, spec: Option<&str>) -> std::io::Result<()> {
    if let Some(s) = spec {
        let degree = match g.regular_degree() {
            Some(d) => d.to_string(),
            None => format!("{}..{}", g.min_degree(), g.max_degree()),
        };
        writeln!(w, "# spec={} n={} m={} degree={}", s, g.n(), g.m(), degree)?;
    }
    writeln!(w, "{} {}", g.n(), g.m())?;
    for &(u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_graph_text<R: BufRead>(r: R) -> Result<GraphFile> {
    let mut spec = None;
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::validation(format!("line {lineno}: {e}")))?;
        let trimmed = line.trim_end();
        if trimmed.starts_with('#') {
            if let Some(rest) = trimmed.trim_start_matches('#').trim_start().strip_prefix("spec=") {
                spec = Some(
                    rest.split_whitespace()
                        .next()
                        .unwrap_or_default()
                        .to_string(),
                );
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let (a, b) = trimmed.split_once(' ').ok_or_else(|| {
            Error::validation(format!(
                "line {lineno}: expected two space-separated integers, got {trimmed:?}"
            ))
        })?;
        let parse = |s: &str| -> Result<usize> {
            s.parse().map_err(|_| {
                Error::validation(format!("line {lineno}: {s:?} is not a valid integer"))
            })
        };
        let (x, y) = (parse(a)?, parse(b)?);
        match header {
            None => header = Some((x, y)),
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(Error::validation(format!(
                        "line {lineno}: found more than the declared {m} edges"
                    )));
                }
                if x >= y {
                    return Err(Error::validation(format!(
                        "line {lineno}: edges must satisfy u < v, got {x} {y}"
                    )));
                }
                if y >= n {
                    return Err(Error::validation(format!(
                        "line {lineno}: endpoint {y} outside 0..{n}"
                    )));
                }
                edges.push((x, y));
            }
        }
    }
    let (n, m) = header.ok_or_else(|| Error::validation("missing \"<n> <m>\" header line"))?;
    if edges.len() != m {
        return Err(Error::validation(format!(
            "header declares {m} edges but {} were listed",
            edges.len()
        )));
    }
    let graph = Graph::build(n, &edges)?;
    if graph.m() != m {
        return Err(Error::validation(format!(
            "edge list contains {} duplicates",
            m - graph.m()
        )));
    }
    Ok(GraphFile { graph, spec })
}

pub fn write_graph_file(path: &Path, g: &Graph, spec: Option<&str>) -> Result<()> {
    let mut buf = Vec::new();
    write_graph_text(&mut buf, g, spec).map_err(|e| Error::io(path, e))?;
    crate::report::write_atomic(path, &buf)
}

pub fn read_graph_file(path: &Path) -> Result<GraphFile> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_graph_text(std::io::BufReader::new(file))
}

/// Renders a graph as its text format in memory (test and logging helper).
pub fn graph_to_string(g: &Graph, spec: Option<&str>) -> String {
    let mut buf = Vec::new();
    write_graph_text(&mut buf, g, spec).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("graph text is ASCII")
}

/// Compact `{(u,v), ...}` rendering for error messages and reports.
pub fn format_edge_list(edges: &[(usize, usize)]) -> String {
    let mut s = String::from("{");
    for (i, (u, v)) in edges.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "({u},{v})");
    }
    s.push('}');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(n: usize) -> Graph {
        Graph::build(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let mut e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        e.push((n - 1, 0));
        Graph::build(n, &e).unwrap()
    }

    fn hypercube4() -> Graph {
        crate::topology::hypercube(4).unwrap()
    }

    #[test]
    fn build_normalizes_and_dedups() {
        let g = Graph::build(3, &[(1, 0), (1, 2), (0, 2), (2, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!((g.degree(0), g.degree(1), g.degree(2)), (2, 2, 2));
    }

    #[test]
    fn build_k2() {
        let g = Graph::build(2, &[(0, 1)]).unwrap();
        assert_eq!((g.degree(0), g.degree(1)), (1, 1));
    }

    #[test]
    fn build_rejects_self_loop_naming_pair() {
        let err = Graph::build(4, &[(0, 0)]).unwrap_err();
        assert!(err.to_string().contains("(0, 0)"), "{err}");
        assert!(err.to_string().contains("self-loop"), "{err}");
    }

    #[test]
    fn build_rejects_out_of_range() {
        let err = Graph::build(3, &[(0, 3)]).unwrap_err();
        assert!(err.to_string().contains("(0, 3)"), "{err}");
    }

    #[test]
    fn connectivity_basics() {
        let two_edges = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_edges.is_connected());
        assert!(Graph::build(1, &[]).unwrap().is_connected());
        assert!(path(3).is_connected());
    }

    #[test]
    fn q4_minus_any_three_edges_stays_connected() {
        // λ(Q4) = 4, so no 3 removals can disconnect it; check every triple.
        let g = hypercube4();
        let m = g.m();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    assert!(g.remove_edge_indices(&[a, b, c]).is_connected());
                }
            }
        }
    }

    #[test]
    fn sixteen_vertices_fourteen_edges_disconnected() {
        // Fewer than n-1 edges can never connect n vertices.
        let g = Graph::build(16, &(0..14).map(|i| (i, i + 1)).collect::<Vec<_>>()).unwrap();
        assert_eq!(g.m(), 14);
        assert!(!g.is_connected());
    }

    #[test]
    fn matrix_oracle_examples() {
        assert!(matrix_connectivity_oracle(&path(3)));
        let two_triangles =
            Graph::build(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!matrix_connectivity_oracle(&two_triangles));
    }

    #[test]
    fn matrix_oracle_matches_bfs_on_random_q4_subgraphs() {
        let g = hypercube4();
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let keep: Vec<(usize, usize)> = g
                .edges()
                .iter()
                .copied()
                .filter(|_| next() % 4 != 0)
                .collect();
            let sub = Graph::build(g.n(), &keep).unwrap();
            assert_eq!(sub.is_connected(), matrix_connectivity_oracle(&sub));
        }
    }

    #[test]
    fn min_edge_cut_examples() {
        let c8 = cycle(8);
        assert_eq!(c8.min_edge_cut(0, 4).unwrap(), 2);
        let k2 = Graph::build(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.min_edge_cut(0, 1).unwrap(), 1);
        let q4 = hypercube4();
        for u in 0..16 {
            for v in u + 1..16 {
                assert_eq!(q4.min_edge_cut(u, v).unwrap(), 4, "pair ({u},{v})");
            }
        }
    }

    #[test]
    fn min_edge_cut_rejects_equal_vertices() {
        let g = path(3);
        assert!(g.min_edge_cut(1, 1).is_err());
    }

    #[test]
    fn min_edge_cut_zero_when_disconnected() {
        let g = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.min_edge_cut(0, 2).unwrap(), 0);
    }

    /// Minimum (u,v)-cut by brute force over all edge subsets; only for tiny
    /// graphs, used to validate the flow implementation independently.
    fn brute_force_min_cut(g: &Graph, s: usize, t: usize) -> usize {
        let m = g.m();
        assert!(m <= 16);
        let mut best = usize::MAX;
        for mask in 0u32..1 << m {
            let removed: Vec<usize> =
                (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            if removed.len() as usize >= best {
                continue;
            }
            let h = g.remove_edge_indices(&removed);
            let (comp, _) = h.components();
            if comp[s] != comp[t] {
                best = removed.len();
            }
        }
        best
    }

    #[test]
    fn flow_matches_brute_force_cut_on_small_graphs() {
        let graphs = [
            cycle(6),
            path(5),
            Graph::build(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (2, 4)]).unwrap(),
        ];
        for g in &graphs {
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    assert_eq!(
                        g.min_edge_cut(u, v).unwrap(),
                        brute_force_min_cut(g, u, v),
                        "pair ({u},{v})"
                    );
                }
            }
        }
    }

    #[test]
    fn edge_connectivity_examples() {
        assert_eq!(hypercube4().edge_connectivity(), 4);
        assert_eq!(crate::topology::ary_cube(4, 2).unwrap().edge_connectivity(), 4);
        assert_eq!(
            crate::topology::circulant(16, &[1, 4]).unwrap().edge_connectivity(),
            4
        );
        assert_eq!(cycle(8).edge_connectivity(), 2);
        let disconnected = Graph::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(disconnected.edge_connectivity(), 0);
    }

    #[test]
    fn min_cut_bounded_by_degrees_and_lambda_by_min_degree() {
        let graphs = [hypercube4(), cycle(7), path(6)];
        for g in &graphs {
            for u in 0..g.n() {
                for v in u + 1..g.n() {
                    let cut = g.min_edge_cut(u, v).unwrap();
                    assert!(cut <= g.degree(u).min(g.degree(v)));
                }
            }
            assert!(g.edge_connectivity() <= g.min_degree());
        }
    }

    fn brute_force_independence(g: &Graph) -> usize {
        assert!(g.n() <= 20);
        let mut best = 0;
        'outer: for mask in 0u32..1 << g.n() {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            for &(u, v) in g.edges() {
                if mask >> u & 1 == 1 && mask >> v & 1 == 1 {
                    continue 'outer;
                }
            }
            best = size;
        }
        best
    }

    #[test]
    fn independence_examples() {
        assert_eq!(hypercube4().independence_number(), 8);
        assert_eq!(cycle(5).independence_number(), 2);
        assert_eq!(Graph::build(2, &[(0, 1)]).unwrap().independence_number(), 1);
    }

    #[test]
    fn independence_matches_brute_force_on_random_graphs() {
        let mut state = 0xD1B54A32D192ED03u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..40 {
            let n = 6 + (trial % 9);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if next() % 100 < 35 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::build(n, &edges).unwrap();
            let (size, witness) = g.independence_witness();
            assert_eq!(size, brute_force_independence(&g), "n={n} trial={trial}");
            assert!(is_independent(&g, &witness));
            assert_eq!(witness.len(), size);
        }
    }

    #[test]
    fn bipartite_matching_route_agrees_with_branch_and_bound() {
        // Force the branch-and-bound route on bipartite inputs and compare.
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for trial in 0..25 {
            let left = 3 + (trial % 5);
            let right = 3 + (trial % 4);
            let n = left + right;
            let mut edges = Vec::new();
            for u in 0..left {
                for v in 0..right {
                    if next() % 100 < 40 {
                        edges.push((u, left + v));
                    }
                }
            }
            let g = Graph::build(n, &edges).unwrap();
            let color = g.bipartition().expect("construction is bipartite");
            let (via_matching, _) = bipartite_max_independent(&g, &color);
            let (via_bb, _) = branch_bound_max_independent(&g);
            assert_eq!(via_matching, via_bb, "trial={trial}");
        }
    }

    #[test]
    fn remove_edges_examples() {
        let tri = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let f = EdgeSet::new(&tri, &[(0, 2)]).unwrap();
        let p = tri.remove_edges(&f).unwrap();
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(tri.m(), 3, "input graph must be unchanged");

        let k2 = Graph::build(2, &[(0, 1)]).unwrap();
        let f = EdgeSet::new(&k2, &[(0, 1)]).unwrap();
        assert!(!k2.remove_edges(&f).unwrap().is_connected());
    }

    #[test]
    fn remove_edges_rejects_non_edge() {
        let tri = Graph::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(EdgeSet::new(&tri, &[(0, 1), (0, 1)]).is_err());
        let other = Graph::build(4, &[(2, 3)]).unwrap();
        let f = EdgeSet::new(&other, &[(2, 3)]).unwrap();
        let err = tri.remove_edges(&f).unwrap_err();
        assert!(err.to_string().contains("(2, 3)"), "{err}");
    }

    #[test]
    fn remove_then_restore_reproduces_edges() {
        let g = hypercube4();
        let f = EdgeSet::new(&g, &g.edges()[..5].to_vec()).unwrap();
        let removed = g.remove_edges(&f).unwrap();
        let mut restored: Vec<(usize, usize)> = removed.edges().to_vec();
        restored.extend_from_slice(f.pairs());
        let back = Graph::build(g.n(), &restored).unwrap();
        assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn text_format_canonical_bytes() {
        let tri = Graph::build(3, &[(1, 2), (0, 2), (0, 1)]).unwrap();
        assert_eq!(graph_to_string(&tri, None), "3 3\n0 1\n0 2\n1 2\n");
        let labeled = graph_to_string(&tri, Some("demo"));
        assert_eq!(labeled, "# spec=demo n=3 m=3 degree=2\n3 3\n0 1\n0 2\n1 2\n");
    }

    #[test]
    fn text_format_reads_comments_and_spec() {
        let text = "# a comment\n# spec=hypercube:n=2 n=4 m=4 degree=2\n4 4\n0 1\n0 2\n1 3\n2 3\n";
        let parsed = read_graph_text(text.as_bytes()).unwrap();
        assert_eq!(parsed.spec.as_deref(), Some("hypercube:n=2"));
        assert_eq!(parsed.graph.m(), 4);
    }

    #[test]
    fn text_format_errors_carry_line_numbers() {
        let missing = read_graph_text("3 2\n0 1\n".as_bytes()).unwrap_err();
        assert!(missing.to_string().contains("declares 2"), "{missing}");
        let order = read_graph_text("3 1\n1 0\n".as_bytes()).unwrap_err();
        assert!(order.to_string().contains("line 2"), "{order}");
        let extra = read_graph_text("2 1\n0 1\n0 1\n".as_bytes()).unwrap_err();
        assert!(extra.to_string().contains("line 3"), "{extra}");
    }

    proptest! {
        #[test]
        fn build_invariants_hold(n in 1usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..30)) {
            let edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .collect();
            let g = Graph::build(n, &edges).unwrap();
            let degsum: usize = (0..n).map(|v| g.degree(v)).sum();
            prop_assert_eq!(degsum, 2 * g.m());
            for &(u, v) in g.edges() {
                prop_assert!(u < v);
                prop_assert!(g.neighbors(u).contains(&v));
                prop_assert!(g.neighbors(v).contains(&u));
            }
        }

        #[test]
        fn text_round_trip(n in 1usize..10, raw in proptest::collection::vec((0usize..10, 0usize..10), 0..20)) {
            let edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .collect();
            let g = Graph::build(n, &edges).unwrap();
            let text = graph_to_string(&g, None);
            let back = read_graph_text(text.as_bytes()).unwrap().graph;
            prop_assert_eq!(back.edges(), g.edges());
            prop_assert_eq!(back.n(), g.n());
        }

        #[test]
        fn bfs_and_matrix_oracle_agree(n in 2usize..12, raw in proptest::collection::vec((0usize..12, 0usize..12), 0..24)) {
            let edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|&(u, v)| u < n && v < n && u != v)
                .collect();
            let g = Graph::build(n, &edges).unwrap();
            prop_assert_eq!(g.is_connected(), matrix_connectivity_oracle(&g));
        }
    }
}
