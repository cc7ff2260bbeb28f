//! Standard graph families and a reproducible Erdős–Rényi sampler.

use crate::error::GraphError;
use crate::graph::{bit, Graph};

fn nonempty(n: usize) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::NoVertices);
    }
    Graph::empty(n)
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path_graph(n: usize) -> Result<Graph, GraphError> {
    let mut g = nonempty(n)?;
    for i in 1..n {
        g.insert_edge(i - 1, i)?;
    }
    Ok(g)
}

/// Cycle on `n` vertices. For `n < 3` this is the path on `n` vertices.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    let mut g = path_graph(n)?;
    if n >= 3 {
        g.insert_edge(n - 1, 0)?;
    }
    Ok(g)
}

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    Ok(nonempty(n)?.complement())
}

pub fn empty(n: usize) -> Result<Graph, GraphError> {
    nonempty(n)
}

/// Star with center 0 and `n - 1` leaves.
pub fn star(n: usize) -> Result<Graph, GraphError> {
    let mut g = nonempty(n)?;
    for i in 1..n {
        g.insert_edge(0, i)?;
    }
    Ok(g)
}

/// Disjoint union of `a` and `b` plus every edge between them. Vertices of
/// `a` come first, then those of `b`; labels are `0..n`.
pub fn join(a: &Graph, b: &Graph) -> Result<Graph, GraphError> {
    let (na, nb) = (a.order(), b.order());
    let mut g = nonempty(na + nb)?;
    for (i, j) in a.edges() {
        g.insert_edge(i, j)?;
    }
    for (i, j) in b.edges() {
        g.insert_edge(na + i, na + j)?;
    }
    for i in 0..na {
        for j in 0..nb {
            g.insert_edge(i, na + j)?;
        }
    }
    Ok(g)
}

/// xorshift64* generator.
///
/// State update: `x ^= x >> 12; x ^= x << 25; x ^= x >> 27`, output
/// `x * 0x2545F4914F6CDD1D` (wrapping). A zero seed is replaced by
/// `0x9E3779B97F4A7C15`. [`XorShift64Star::next_f64`] takes the top 53 output
/// bits and divides by 2^53, giving a value in `[0, 1)`.
#[derive(Clone, Debug)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { 0x9E37_79B9_7F4A_7C15 } else { seed };
        XorShift64Star { state }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// G(n, p): one draw per unordered pair `(i, j)`, `i < j`, in lexicographic
/// order `(0,1), (0,2), ..., (0,n-1), (1,2), ...`; the edge is present iff the
/// draw is `< p`.
pub fn random_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability { p });
    }
    let mut g = nonempty(n)?;
    let mut rng = XorShift64Star::new(seed);
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_f64() < p {
                g.insert_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// Labeled graph number `code` on `n` vertices: bit `k` of `code` is the
/// `k`-th pair in the same lexicographic order as [`random_gnp`].
pub fn labeled_graph(n: usize, code: u64) -> Result<Graph, GraphError> {
    let mut g = nonempty(n)?;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if code & bit(k) != 0 {
                g.insert_edge(i, j)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_is_join_of_k1_and_empty() {
        let s = star(4).unwrap();
        assert_eq!(s.degrees(), vec![3, 1, 1, 1]);
        let j = join(&complete(1).unwrap(), &empty(3).unwrap()).unwrap();
        assert_eq!(j, s);
    }

    #[test]
    fn cycle_is_two_regular() {
        assert!(cycle(5).unwrap().degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = random_gnp(8, 0.5, 42).unwrap();
        let b = random_gnp(8, 0.5, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(random_gnp(8, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(random_gnp(8, 1.0, 1).unwrap().edge_count(), 28);
    }

    #[test]
    fn xorshift_reference_stream() {
        // First outputs for seed 1, computed by hand from the update rule.
        let mut x: u64 = 1;
        let mut expect = Vec::new();
        for _ in 0..3 {
            x ^= x >> 12;
            x ^= x << 25;
            x ^= x >> 27;
            expect.push(x.wrapping_mul(0x2545F4914F6CDD1D));
        }
        let mut rng = XorShift64Star::new(1);
        let got: Vec<u64> = (0..3).map(|_| rng.next_u64()).collect();
        assert_eq!(got, expect);
        assert_eq!(got[0], 5180492295206395165);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(path_graph(0), Err(GraphError::NoVertices));
        assert!(matches!(
            random_gnp(4, 1.5, 0),
            Err(GraphError::InvalidProbability { .. })
        ));
    }

    #[test]
    fn labeled_codes_match_pair_order() {
        let g = labeled_graph(4, 0b000111).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (0, 3)]);
    }
}
