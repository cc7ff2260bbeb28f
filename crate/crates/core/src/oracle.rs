//! Exact minimum weighted congestion over all simple-path routings, by
//! branch and bound. Only practical for very small graphs.

use crate::error::OracleError;
use crate::graph::{bit, bits, Graph};
use crate::constructor::bfs_routing;
use crate::routing::{weighted_congestion, Path, Routing};

/// Default vertex limit for [`min_congestion_routing`].
pub const ORACLE_MAX_ORDER: usize = 6;

#[derive(Clone, Debug)]
pub struct OptimalRouting {
    pub routing: Routing,
    pub w: u64,
    /// Search nodes expanded.
    pub nodes: u64,
}

struct Candidate {
    len: u64,
    edges: Vec<usize>,
    vertices: Vec<usize>,
}

fn simple_paths(g: &Graph, s: usize, t: usize, edge_id: &[Vec<usize>]) -> Vec<Candidate> {
    fn dfs(
        g: &Graph,
        t: usize,
        stack: &mut Vec<usize>,
        visited: u64,
        edge_id: &[Vec<usize>],
        out: &mut Vec<Candidate>,
    ) {
        let cur = *stack.last().unwrap();
        for next in bits(g.neighbors(cur) & !visited) {
            stack.push(next);
            if next == t {
                out.push(Candidate {
                    len: (stack.len() - 1) as u64,
                    edges: stack.windows(2).map(|w| edge_id[w[0]][w[1]]).collect(),
                    vertices: stack.clone(),
                });
            } else {
                dfs(g, t, stack, visited | bit(next), edge_id, out);
            }
            stack.pop();
        }
    }
    let mut out = Vec::new();
    dfs(g, t, &mut vec![s], bit(s), edge_id, &mut out);
    out.sort_by(|a, b| a.len.cmp(&b.len).then_with(|| a.vertices.cmp(&b.vertices)));
    out
}

struct BranchAndBound<'a> {
    pairs: &'a [Vec<Candidate>],
    /// Sum of squared shortest lengths of pairs `k..`.
    remaining_sq: Vec<u64>,
    edges: u64,
    weights: Vec<u64>,
    choice: Vec<usize>,
    best: u64,
    best_choice: Vec<usize>,
    nodes: u64,
}

impl BranchAndBound<'_> {
    fn search(&mut self, k: usize, total: u64, current_max: u64) {
        self.nodes += 1;
        if k == self.pairs.len() {
            if current_max < self.best {
                self.best = current_max;
                self.best_choice = self.choice.clone();
            }
            return;
        }
        // Every edge weight is an integer and the weights sum to Σ‖P‖².
        let average = (total + self.remaining_sq[k]).div_ceil(self.edges);
        if current_max.max(average) >= self.best {
            return;
        }
        let pairs = self.pairs;
        for (i, cand) in pairs[k].iter().enumerate() {
            if cand.len >= self.best {
                break;
            }
            if cand.edges.iter().any(|&e| self.weights[e] + cand.len >= self.best) {
                continue;
            }
            let mut new_max = current_max;
            for &e in &cand.edges {
                self.weights[e] += cand.len;
                new_max = new_max.max(self.weights[e]);
            }
            self.choice[k] = i;
            self.search(k + 1, total + cand.len * cand.len, new_max);
            for &e in &cand.edges {
                self.weights[e] -= cand.len;
            }
        }
    }
}

pub fn min_congestion_routing(g: &Graph) -> Result<OptimalRouting, OracleError> {
    min_congestion_routing_with_limit(g, ORACLE_MAX_ORDER)
}

/// Pairs are assigned in decreasing shortest-path distance; candidate paths
/// per pair are tried by increasing length, then lexicographically.
pub fn min_congestion_routing_with_limit(
    g: &Graph,
    max_order: usize,
) -> Result<OptimalRouting, OracleError> {
    let n = g.order();
    if n > max_order {
        return Err(OracleError::TooLarge { n, max: max_order });
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let edge_list = g.edges();
    let mut edge_id = vec![vec![usize::MAX; n]; n];
    for (k, &(a, b)) in edge_list.iter().enumerate() {
        edge_id[a][b] = k;
        edge_id[b][a] = k;
    }

    let mut pairs: Vec<Vec<Candidate>> = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            pairs.push(simple_paths(g, s, t, &edge_id));
        }
    }
    // Stable sort keeps lexicographic pair order among equal distances.
    pairs.sort_by(|a, b| b[0].len.cmp(&a[0].len));

    let mut remaining_sq = vec![0; pairs.len() + 1];
    for k in (0..pairs.len()).rev() {
        remaining_sq[k] = remaining_sq[k + 1] + pairs[k][0].len * pairs[k][0].len;
    }

    // Any valid routing bounds the optimum; starting one above its
    // congestion guarantees the search still records a solution.
    let seed = weighted_congestion(g, &bfs_routing(g)).map_or(u64::MAX, |c| c.w + 1);
    let mut bb = BranchAndBound {
        pairs: &pairs,
        remaining_sq,
        edges: edge_list.len().max(1) as u64,
        weights: vec![0; edge_list.len()],
        choice: vec![0; pairs.len()],
        best: seed,
        best_choice: vec![0; pairs.len()],
        nodes: 0,
    };
    bb.search(0, 0, 0);

    let routing = Routing::from_paths(bb.best_choice.iter().zip(&pairs).map(|(&i, cands)| {
        Path::new(cands[i].vertices.iter().map(|&v| g.label(v)).collect()).unwrap()
    }))
    .expect("one path per pair");
    Ok(OptimalRouting {
        routing,
        w: if pairs.is_empty() { 0 } else { bb.best },
        nodes: bb.nodes,
    })
}
