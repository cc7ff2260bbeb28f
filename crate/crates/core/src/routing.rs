//! Paths, routings and weighted congestion.
//!
//! A routing picks exactly one simple path for every unordered pair of
//! distinct vertices. The weighted congestion of an edge is the total length
//! of the routing paths that use it; the congestion of the routing is the
//! maximum over edges. If a graph on `n` vertices has a routing of
//! congestion `w`, its algebraic connectivity is at least `n / w`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{RoutingError, SpectralError};
use crate::graph::Graph;
use crate::spectral;

/// Slack allowed when comparing `λ2` against `n / w`.
pub const THEOREM2_TOLERANCE: f64 = 1e-8;

/// A vertex sequence (by label) stored with the smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    pub fn new(mut vertices: Vec<usize>) -> Result<Path, RoutingError> {
        if vertices.len() < 2 {
            return Err(RoutingError::PathTooShort);
        }
        if vertices[0] > vertices[vertices.len() - 1] {
            vertices.reverse();
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.vertices[0], self.vertices[self.vertices.len() - 1])
    }

    /// Consecutive vertex pairs, each normalized to `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}

/// One path per unordered pair, keyed by `(min, max)` endpoint labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Routing {
    paths: BTreeMap<(usize, usize), Path>,
}

impl Routing {
    pub fn new() -> Self {
        Routing::default()
    }

    /// Builds a routing from a list, rejecting two paths for the same pair.
    pub fn from_paths<I: IntoIterator<Item = Path>>(paths: I) -> Result<Routing, RoutingError> {
        let mut r = Routing::new();
        for p in paths {
            let (x, y) = p.endpoints();
            if r.insert(p).is_some() {
                return Err(RoutingError::DuplicatePair { x, y });
            }
        }
        Ok(r)
    }

    /// Inserts a path, returning the one it replaced for the same pair.
    pub fn insert(&mut self, path: Path) -> Option<Path> {
        self.paths.insert(path.endpoints(), path)
    }

    pub fn get(&self, x: usize, y: usize) -> Option<&Path> {
        self.paths.get(&(x.min(y), x.max(y)))
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> impl Iterator<Item = &Path> {
        self.paths.values()
    }

    /// Renames every vertex through `map`.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Routing {
        Routing::from_paths(
            self.paths()
                .map(|p| Path::new(p.vertices.iter().map(|&v| map(v)).collect()).unwrap()),
        )
        .expect("relabeling must be injective")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    MissingPair { x: usize, y: usize },
    UnknownVertex { label: usize },
    NotSimple { x: usize, y: usize },
    NotAnEdge { x: usize, y: usize, a: usize, b: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingPair { x, y } => write!(f, "missing pair {{{x}, {y}}}"),
            Violation::UnknownVertex { label } => write!(f, "unknown vertex {label}"),
            Violation::NotSimple { x, y } => write!(f, "path for {{{x}, {y}}} repeats a vertex"),
            Violation::NotAnEdge { x, y, a, b } => {
                write!(f, "path for {{{x}, {y}}} uses non-edge {a}-{b}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoutingReport {
    pub violations: Vec<Violation>,
    pub paths_checked: usize,
}

impl RoutingReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for RoutingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid ({} paths)", self.paths_checked);
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks totality, simplicity and that every step is an edge of `g`.
pub fn validate_routing(g: &Graph, r: &Routing) -> RoutingReport {
    let mut violations = Vec::new();
    let labels = g.labels();
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    for (i, &x) in sorted.iter().enumerate() {
        for &y in &sorted[i + 1..] {
            if r.get(x, y).is_none() {
                violations.push(Violation::MissingPair { x, y });
            }
        }
    }
    for p in r.paths() {
        let (x, y) = p.endpoints();
        let idx: Vec<Option<usize>> = p.vertices.iter().map(|&v| g.index_of(v)).collect();
        let mut known = true;
        for (&v, i) in p.vertices.iter().zip(&idx) {
            if i.is_none() {
                violations.push(Violation::UnknownVertex { label: v });
                known = false;
            }
        }
        if !p.is_simple() {
            violations.push(Violation::NotSimple { x, y });
        }
        if known {
            for (w, iw) in p.vertices.windows(2).zip(idx.windows(2)) {
                if !g.has_edge(iw[0].unwrap(), iw[1].unwrap()) {
                    violations.push(Violation::NotAnEdge { x, y, a: w[0], b: w[1] });
                }
            }
        }
    }
    RoutingReport {
        violations,
        paths_checked: r.len(),
    }
}

/// Per-edge weighted congestion (keyed by `(min, max)` label pairs, every
/// edge of the graph present) and its maximum.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CongestionReport {
    pub per_edge: BTreeMap<(usize, usize), u64>,
    pub w: u64,
}

impl CongestionReport {
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.per_edge.get(&(a.min(b), a.max(b))).copied().unwrap_or(0)
    }
}

/// Congestion without validation; steps that are not edges of `g` are
/// still counted under their label pair.
pub(crate) fn congestion_unchecked(g: &Graph, r: &Routing) -> CongestionReport {
    let mut per_edge: BTreeMap<(usize, usize), u64> = g
        .edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (g.label(a), g.label(b));
            ((x.min(y), x.max(y)), 0)
        })
        .collect();
    for p in r.paths() {
        let len = p.length() as u64;
        for e in p.edges() {
            *per_edge.entry(e).or_insert(0) += len;
        }
    }
    let w = per_edge.values().copied().max().unwrap_or(0);
    CongestionReport { per_edge, w }
}

pub fn weighted_congestion(g: &Graph, r: &Routing) -> Result<CongestionReport, RoutingError> {
    let report = validate_routing(g, r);
    if !report.is_valid() {
        return Err(RoutingError::Invalid(report.to_string()));
    }
    Ok(congestion_unchecked(g, r))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: usize,
    pub w: u64,
    pub bound: f64,
    pub lambda2: f64,
    pub holds: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum BoundCheckError {
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Compares `λ2(g)` with `n / w` for a valid routing.
pub fn spectral_bound_check(g: &Graph, r: &Routing) -> Result<BoundReport, BoundCheckError> {
    let congestion = weighted_congestion(g, r)?;
    let lambda2 = spectral::lambda2(g)?;
    Ok(bound_report(g.order(), congestion.w, lambda2))
}

pub(crate) fn bound_report(n: usize, w: u64, lambda2: f64) -> BoundReport {
    let bound = n as f64 / w as f64;
    BoundReport {
        n,
        w,
        bound,
        lambda2,
        holds: lambda2 >= bound - THEOREM2_TOLERANCE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, cycle, path_graph, star};

    fn path(v: &[usize]) -> Path {
        Path::new(v.to_vec()).unwrap()
    }

    fn direct(g: &Graph) -> Routing {
        Routing::from_paths(g.edges().into_iter().map(|(a, b)| path(&[a, b]))).unwrap()
    }

    fn p4_routing() -> Routing {
        Routing::from_paths(
            [
                &[0, 1][..],
                &[1, 2],
                &[2, 3],
                &[0, 1, 2],
                &[1, 2, 3],
                &[0, 1, 2, 3],
            ]
            .map(path),
        )
        .unwrap()
    }

    #[test]
    fn canonical_orientation() {
        let p = path(&[3, 2, 1]);
        assert_eq!(p.vertices(), &[1, 2, 3]);
        assert_eq!(p.length(), 2);
        assert_eq!(Path::new(vec![1]), Err(RoutingError::PathTooShort));
    }

    #[test]
    fn validation_examples() {
        let k3 = complete(3).unwrap();
        assert!(validate_routing(&k3, &direct(&k3)).is_valid());

        let p4 = path_graph(4).unwrap();
        let mut r = p4_routing();
        r.paths.remove(&(0, 3));
        let rep = validate_routing(&p4, &r);
        assert_eq!(rep.violations, vec![Violation::MissingPair { x: 0, y: 3 }]);

        let mut r = p4_routing();
        r.insert(path(&[0, 2, 3]));
        let rep = validate_routing(&p4, &r);
        assert_eq!(
            rep.violations,
            vec![Violation::NotAnEdge { x: 0, y: 3, a: 0, b: 2 }]
        );

        let mut r = direct(&k3);
        r.insert(path(&[0, 1, 0, 2]));
        assert!(rep_has_non_simple(&validate_routing(&k3, &r)));
    }

    fn rep_has_non_simple(r: &RoutingReport) -> bool {
        r.violations.iter().any(|v| matches!(v, Violation::NotSimple { .. }))
    }

    #[test]
    fn duplicate_pairs_rejected() {
        assert_eq!(
            Routing::from_paths([path(&[0, 1]), path(&[1, 0])]),
            Err(RoutingError::DuplicatePair { x: 0, y: 1 })
        );
    }

    #[test]
    fn congestion_examples() {
        let k4 = complete(4).unwrap();
        let c = weighted_congestion(&k4, &direct(&k4)).unwrap();
        assert!(c.per_edge.values().all(|&x| x == 1));
        assert_eq!(c.w, 1);

        let p4 = path_graph(4).unwrap();
        let c = weighted_congestion(&p4, &p4_routing()).unwrap();
        assert_eq!(c.per_edge.values().copied().collect::<Vec<_>>(), vec![6, 8, 6]);
        assert_eq!(c.w, 8);

        let s = star(4).unwrap();
        let mut r = direct(&s);
        for (a, b) in [(1, 2), (1, 3), (2, 3)] {
            r.insert(path(&[a, 0, b]));
        }
        let c = weighted_congestion(&s, &r).unwrap();
        assert_eq!(c.w, 5);
        assert!(c.per_edge.values().all(|&x| x == 5));
    }

    #[test]
    fn congestion_sum_is_sum_of_squared_lengths() {
        let p4 = path_graph(4).unwrap();
        let r = p4_routing();
        let c = weighted_congestion(&p4, &r).unwrap();
        let lhs: u64 = c.per_edge.values().sum();
        let rhs: u64 = r.paths().map(|p| (p.length() * p.length()) as u64).sum();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invalid_routing_has_no_congestion() {
        let p4 = path_graph(4).unwrap();
        assert!(matches!(
            weighted_congestion(&p4, &Routing::new()),
            Err(RoutingError::Invalid(_))
        ));
    }

    #[test]
    fn bound_examples() {
        let k2 = complete(2).unwrap();
        let b = spectral_bound_check(&k2, &direct(&k2)).unwrap();
        assert_eq!(b.bound, 2.0);
        assert!((b.lambda2 - 2.0).abs() < 1e-9 && b.holds);

        let b = spectral_bound_check(&path_graph(4).unwrap(), &p4_routing()).unwrap();
        assert_eq!((b.w, b.bound), (8, 0.5));
        assert!(b.holds);

        let c5 = cycle(5).unwrap();
        let mut r = direct(&c5);
        for i in 0..5 {
            r.insert(path(&[i, (i + 1) % 5, (i + 2) % 5]));
        }
        let b = spectral_bound_check(&c5, &r).unwrap();
        assert_eq!((b.w, b.bound), (5, 1.0));
        assert!(b.holds && (b.lambda2 - 1.381966011250105).abs() < 1e-9);
    }
}
