//! Labeled simple graphs on at most [`MAX_ORDER`] vertices.
//!
//! Vertices are dense local indices `0..n`. Each vertex also carries a stable
//! label that survives induced deletion, so paths built on a subgraph can be
//! expressed in the identities of the graph it was cut from.

use std::fmt;

use crate::error::GraphError;

/// Largest supported vertex count (adjacency rows are single `u64` bit-sets).
pub const MAX_ORDER: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    labels: Vec<usize>,
    adj: Vec<u64>,
}

/// Result of a diameter computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diameter {
    Finite(usize),
    /// At least one pair of vertices has no connecting path.
    Disconnected,
}

impl Diameter {
    /// True when the graph is connected with diameter at most `k`.
    pub fn at_most(self, k: usize) -> bool {
        matches!(self, Diameter::Finite(d) if d <= k)
    }

    pub fn is(self, k: usize) -> bool {
        self == Diameter::Finite(k)
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Disconnected => f.write_str("unreachable"),
        }
    }
}

/// Single-source BFS distances, indexed by local vertex index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    pub source: usize,
    pub dist: Vec<Option<usize>>,
}

impl DistanceTable {
    pub fn get(&self, v: usize) -> Option<usize> {
        self.dist[v]
    }

    /// Largest finite distance, or `None` if some vertex is unreachable.
    pub fn eccentricity(&self) -> Option<usize> {
        self.dist
            .iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
}

#[inline]
pub(crate) fn bit(i: usize) -> u64 {
    1u64 << i
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

impl Graph {
    /// Edgeless graph on `n` vertices labeled `0..n`.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        if n > MAX_ORDER {
            return Err(GraphError::TooManyVertices { n, max: MAX_ORDER });
        }
        Ok(Graph {
            labels: (0..n).collect(),
            adj: vec![0; n],
        })
    }

    /// Graph on `n` vertices labeled `0..n` with the given edges (local indices).
    /// Duplicate edges are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n)?;
        for (a, b) in edges {
            g.insert_edge(a, b)?;
        }
        Ok(g)
    }

    /// Replaces the vertex labels. Labels must be pairwise distinct.
    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Graph, GraphError> {
        if labels.len() != self.order() {
            return Err(GraphError::LabelCount {
                expected: self.order(),
                got: labels.len(),
            });
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateLabel { label: w[0] });
        }
        self.labels = labels;
        Ok(self)
    }

    pub(crate) fn insert_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.order();
        for x in [a, b] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if a == b {
            return Err(GraphError::Loop { vertex: a });
        }
        self.adj[a] |= bit(b);
        self.adj[b] |= bit(a);
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn index_of(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Bit-set of all local indices.
    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.order())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a] & bit(b) != 0
    }

    /// Adjacency test by label; false if either label is unknown.
    pub fn has_edge_labels(&self, a: usize, b: usize) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge(i, j),
            _ => false,
        }
    }

    /// Neighborhood of `v` as a bit-set of local indices.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn neighbor_indices(&self, v: usize) -> impl Iterator<Item = usize> {
        bits(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order of local indices.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.order() {
            for j in bits(self.adj[i] & !full_mask(i + 1)) {
                out.push((i, j));
            }
        }
        out
    }

    /// Complement on the same labels.
    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(i, row)| !row & all & !bit(i))
            .collect();
        Graph {
            labels: self.labels.clone(),
            adj,
        }
    }

    /// Removes the vertices with the given labels, keeping the surviving
    /// labels and their relative order.
    pub fn induced_delete(&self, removed: &[usize]) -> Result<Graph, GraphError> {
        let mut drop = 0u64;
        for &label in removed {
            let i = self
                .index_of(label)
                .ok_or(GraphError::UnknownLabel { label })?;
            drop |= bit(i);
        }
        Ok(self.induced_by_mask(self.vertex_mask() & !drop))
    }

    /// Subgraph induced by the local indices in `keep`.
    pub(crate) fn induced_by_mask(&self, keep: u64) -> Graph {
        let kept: Vec<usize> = bits(keep).collect();
        let mut adj = vec![0u64; kept.len()];
        for (new_i, &old_i) in kept.iter().enumerate() {
            for (new_j, &old_j) in kept.iter().enumerate() {
                if self.has_edge(old_i, old_j) {
                    adj[new_i] |= bit(new_j);
                }
            }
        }
        Graph {
            labels: kept.iter().map(|&i| self.labels[i]).collect(),
            adj,
        }
    }

    pub fn bfs_distances(&self, source: usize) -> DistanceTable {
        let n = self.order();
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        let mut seen = bit(source);
        let mut frontier = bit(source);
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u64;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            next &= !seen;
            for v in bits(next) {
                dist[v] = Some(d);
            }
            seen |= next;
            frontier = next;
        }
        DistanceTable { source, dist }
    }

    /// Bit-sets of vertices at distance exactly 0, 1, 2, ... from `source`.
    pub(crate) fn bfs_layers(&self, source: usize) -> Vec<u64> {
        let mut layers = vec![bit(source)];
        let mut seen = bit(source);
        loop {
            let mut next = 0u64;
            for v in bits(*layers.last().unwrap()) {
                next |= self.adj[v];
            }
            next &= !seen;
            if next == 0 {
                return layers;
            }
            seen |= next;
            layers.push(next);
        }
    }

    pub fn diameter(&self) -> Diameter {
        let n = self.order();
        let all = self.vertex_mask();
        let mut diam = 0;
        for s in 0..n {
            let layers = self.bfs_layers(s);
            let reached = layers.iter().fold(0, |acc, l| acc | l);
            if reached != all {
                return Diameter::Disconnected;
            }
            diam = diam.max(layers.len() - 1);
        }
        Diameter::Finite(diam)
    }

    pub fn is_connected(&self) -> bool {
        self.order() == 0 || self.component_count() == 1
    }

    pub fn component_count(&self) -> usize {
        let mut unseen = self.vertex_mask();
        let mut count = 0;
        while unseen != 0 {
            let s = unseen.trailing_zeros() as usize;
            let reached = self.bfs_layers(s).iter().fold(0, |acc, l| acc | l);
            unseen &= !reached;
            count += 1;
        }
        count
    }

    /// True when `G` or its complement is the join of a single vertex with a
    /// disconnected graph on the remaining `n - 1` vertices.
    pub fn is_isolated_join_pattern(&self) -> bool {
        fn dominated_disconnected(g: &Graph) -> bool {
            let n = g.order();
            (0..n).any(|v| {
                g.degree(v) == n - 1
                    && !g
                        .induced_by_mask(g.vertex_mask() & !bit(v))
                        .is_connected()
            })
        }
        self.order() >= 3 && (dominated_disconnected(self) || dominated_disconnected(&self.complement()))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .map(|(i, j)| (self.labels[i], self.labels[j]))
            .collect();
        f.debug_struct("Graph")
            .field("labels", &self.labels)
            .field("edges", &edges)
            .finish()
    }
}
