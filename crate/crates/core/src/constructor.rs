//! Recursive construction of a low-congestion routing in a graph or its
//! complement.
//!
//! * If `G` (or `Ḡ`) has diameter at most 2, route every non-adjacent pair
//!   through a common neighbor. Every edge then carries weight at most
//!   `2n - 3`.
//! * Otherwise both have diameter exactly 3. Pick an adjacent pair `u, v` that
//!   dominates `G` (they are at distance 3 in `Ḡ`) and a pair `u', v'` at
//!   distance 3 in `G`. One of `u', v'` is adjacent to `v` but not `u`; call it
//!   `v'`. Route `H = G - {v, v'}` recursively, then add paths from `v` (through
//!   `u` when needed) and from `v'` (through `v`). The added weight on every
//!   edge is given by a fixed table, and the total stays within `5n/2` as long
//!   as `|X| <= (n - 2)/2`, where `X` holds the vertices adjacent to `u` only.
//!
//! The same step applies verbatim to `Ḡ`. The recursion on `H` has to
//! produce a routing on the same side it is extended on, so the search tries
//! every witness quadruple and removed pair on each side, with memoization
//! by removed vertex set. If every branch fails, a BFS routing is emitted and
//! the certificate is marked uncertified.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use crate::error::ConstructError;
use crate::graph::{bit, bits, Graph};
use crate::routing::{congestion_unchecked, validate_routing, CongestionReport, Path, Routing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Graph,
    Complement,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Graph => Side::Complement,
            Side::Complement => Side::Graph,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Side::Graph => "graph",
            Side::Complement => "complement",
        }
    }

    pub fn pick<'a>(self, graph: &'a Graph, complement: &'a Graph) -> &'a Graph {
        match self {
            Side::Graph => graph,
            Side::Complement => complement,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    BaseGraph,
    BaseComplement,
    ExtendGraph,
    ExtendComplement,
    Fallback,
}

impl Case {
    fn base(side: Side) -> Case {
        match side {
            Side::Graph => Case::BaseGraph,
            Side::Complement => Case::BaseComplement,
        }
    }

    fn extend(side: Side) -> Case {
        match side {
            Side::Graph => Case::ExtendGraph,
            Side::Complement => Case::ExtendComplement,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::BaseGraph => "base-graph",
            Case::BaseComplement => "base-complement",
            Case::ExtendGraph => "extend-graph",
            Case::ExtendComplement => "extend-complement",
            Case::Fallback => "fallback",
        }
    }

    pub fn from_name(name: &str) -> Option<Case> {
        [
            Case::BaseGraph,
            Case::BaseComplement,
            Case::ExtendGraph,
            Case::ExtendComplement,
            Case::Fallback,
        ]
        .into_iter()
        .find(|c| c.name() == name)
    }
}

/// Vertex roles (labels) at one extension step, in the frame of the side
/// being routed: `u, v` dominate, `u', v'` are at distance 3, and `v, v'` are
/// removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Roles {
    pub u: usize,
    pub v: usize,
    pub u_prime: usize,
    pub v_prime: usize,
}

/// A witness quadruple with the X/Y/Z partition relative to `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessConfig {
    pub u: usize,
    pub v: usize,
    pub u_prime: usize,
    pub v_prime: usize,
    /// Adjacent to `u` only.
    pub x: Vec<usize>,
    /// Adjacent to `v` only.
    pub y: Vec<usize>,
    /// Adjacent to both.
    pub z: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelRecord {
    /// Vertex count at this level.
    pub order: usize,
    pub case: Case,
    pub roles: Option<Roles>,
    pub x_size: Option<usize>,
    /// Candidates tried and abandoned at this level before the one used.
    pub backtracks: usize,
    /// Whether the added per-edge weights matched the extension table.
    pub increment_law: Option<bool>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub attempts: u64,
    pub backtracks: u64,
    pub memo_hits: u64,
    pub cap_hits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstructOptions {
    /// Maximum removed-pair candidates tried per level.
    pub attempt_cap: usize,
    /// Recompute the per-edge increment of every extension against the table.
    pub check_increments: bool,
}

impl Default for ConstructOptions {
    fn default() -> Self {
        ConstructOptions {
            attempt_cap: 64,
            check_increments: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub order: usize,
    pub side: Side,
    pub routing: Routing,
    pub congestion: CongestionReport,
    /// `w <= floor(5n/2)`.
    pub bound_ok: bool,
    pub routing_valid: bool,
    /// Built entirely from base and extension steps with all preconditions
    /// met, valid, within bound, and every increment table reproduced.
    pub certified: bool,
    /// Outermost level first.
    pub trace: Vec<LevelRecord>,
    pub stats: SearchStats,
}

impl Certificate {
    pub fn w(&self) -> u64 {
        self.congestion.w
    }

    pub fn extensions(&self) -> usize {
        self.trace
            .iter()
            .filter(|l| matches!(l.case, Case::ExtendGraph | Case::ExtendComplement))
            .count()
    }

    pub fn is_fallback(&self) -> bool {
        self.trace.iter().any(|l| l.case == Case::Fallback)
    }
}

/// `2w <= 5n`, i.e. `w <= floor(5n/2)` for integer `w`.
pub fn within_five_halves(n: usize, w: u64) -> bool {
    2 * w <= 5 * n as u64
}

#[derive(Clone, Copy, Debug)]
struct Partition {
    x: u64,
    y: u64,
    z: u64,
}

fn classify(f: &Graph, u: usize, v: usize) -> Partition {
    let nu = f.neighbors(u) & !bit(v);
    let nv = f.neighbors(v) & !bit(u);
    Partition {
        x: nu & !nv,
        y: nv & !nu,
        z: nu & nv,
    }
}

fn labels_of(f: &Graph, mask: u64) -> Vec<usize> {
    bits(mask).map(|i| f.label(i)).collect()
}

fn path_of(f: &Graph, locals: &[usize]) -> Path {
    Path::new(locals.iter().map(|&i| f.label(i)).collect()).expect("paths have two or more vertices")
}

/// Pairs `(i, j)`, `i < j`, at distance exactly 3.
fn distance_three_pairs(f: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..f.order() {
        let layers = f.bfs_layers(i);
        if let Some(&layer) = layers.get(3) {
            out.extend(bits(layer).filter(|&j| j > i).map(|j| (i, j)));
        }
    }
    out
}

/// Routing with direct edges and, for non-adjacent pairs, a path through a
/// common neighbor chosen by `pick` (an index into the ascending candidate
/// list).
pub fn base_routing_diam2_with<F>(f: &Graph, mut pick: F) -> Result<Routing, ConstructError>
where
    F: FnMut(&[usize]) -> usize,
{
    let diameter = f.diameter();
    if f.order() >= 2 && !diameter.at_most(2) {
        return Err(ConstructError::DiameterTooLarge(diameter));
    }
    let n = f.order();
    let mut r = Routing::new();
    let mut candidates = Vec::with_capacity(n);
    for a in 0..n {
        for b in a + 1..n {
            if f.has_edge(a, b) {
                r.insert(path_of(f, &[a, b]));
            } else {
                candidates.clear();
                candidates.extend(bits(f.neighbors(a) & f.neighbors(b)));
                let mid = candidates[pick(&candidates)];
                r.insert(path_of(f, &[a, mid, b]));
            }
        }
    }
    Ok(r)
}

/// [`base_routing_diam2_with`] using the smallest-index common neighbor.
pub fn base_routing_diam2(f: &Graph) -> Result<Routing, ConstructError> {
    base_routing_diam2_with(f, |_| 0)
}

/// All witness quadruples of `g`, in lexicographic order of `(u, v, u', v')`
/// with `u < v` and `u' < v'` (labels taken from local index order).
pub fn find_witness_pairs(g: &Graph) -> Result<Vec<WitnessConfig>, ConstructError> {
    let gc = g.complement();
    if !(g.diameter().is(3) && gc.diameter().is(3)) {
        return Err(ConstructError::NotDiameterThree);
    }
    let dominating = distance_three_pairs(&gc);
    let far = distance_three_pairs(g);
    let mut out = Vec::new();
    for &(u, v) in &dominating {
        let p = classify(g, u, v);
        for &(up, vp) in &far {
            out.push(WitnessConfig {
                u: g.label(u),
                v: g.label(v),
                u_prime: g.label(up),
                v_prime: g.label(vp),
                x: labels_of(g, p.x),
                y: labels_of(g, p.y),
                z: labels_of(g, p.z),
            });
        }
    }
    if out.is_empty() {
        return Err(ConstructError::NoWitnesses);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    u: usize,
    v: usize,
    u_prime: usize,
    v_prime: usize,
    x_size: usize,
}

/// Removed-pair candidates for extending in `f`, ordered by `|X|` then by
/// the labels of `v`, `v'`, `u`, `u'`. Candidates removing the same vertex
/// pair recurse on the same subgraph, so only the first is kept.
fn extension_candidates(f: &Graph, fc: &Graph) -> Vec<Candidate> {
    let n = f.order();
    let dominating = distance_three_pairs(fc);
    let far = distance_three_pairs(f);
    let mut out = Vec::new();
    for &(a, b) in &dominating {
        for (u, v) in [(a, b), (b, a)] {
            let p = classify(f, u, v);
            let x_size = p.x.count_ones() as usize;
            if 2 * x_size + 2 > n {
                continue;
            }
            for &(c, d) in &far {
                // One of c, d lies in X and the other in Y.
                let (u_prime, v_prime) = if p.y & bit(d) != 0 && p.x & bit(c) != 0 {
                    (c, d)
                } else if p.y & bit(c) != 0 && p.x & bit(d) != 0 {
                    (d, c)
                } else {
                    debug_assert!(false, "distance-3 pair not split by X/Y");
                    continue;
                };
                out.push(Candidate {
                    u,
                    v,
                    u_prime,
                    v_prime,
                    x_size,
                });
            }
        }
    }
    let key = |c: &Candidate| {
        (
            c.x_size,
            f.label(c.v),
            f.label(c.v_prime),
            f.label(c.u),
            f.label(c.u_prime),
        )
    };
    out.sort_by_key(key);
    let mut seen = vec![false; n * n];
    out.retain(|c| {
        let k = c.v.min(c.v_prime) * n + c.v.max(c.v_prime);
        !std::mem::replace(&mut seen[k], true)
    });
    out
}

fn extend_paths(f: &Graph, u: usize, v: usize, vp: usize, sub: &Routing) -> Routing {
    let mut r = sub.clone();
    for z in 0..f.order() {
        if z == v || z == vp {
            continue;
        }
        let from_v: Vec<usize> = if z == u || f.has_edge(v, z) {
            vec![v, z]
        } else {
            vec![v, u, z]
        };
        let mut from_vp = Vec::with_capacity(from_v.len() + 1);
        from_vp.push(vp);
        from_vp.extend_from_slice(&from_v);
        r.insert(path_of(f, &from_v));
        r.insert(path_of(f, &from_vp));
    }
    r.insert(path_of(f, &[vp, v]));
    r
}

fn index(f: &Graph, label: usize) -> Result<usize, ConstructError> {
    f.index_of(label).ok_or(ConstructError::UnknownLabel(label))
}

/// Extends a routing of `f - {v, vp}` to a routing of `f` by adding paths
/// from `v` (direct, or via `u` for vertices adjacent to `u` only) and from
/// `vp` (via `v`). Vertices are given by label.
pub fn extend_routing(
    f: &Graph,
    u: usize,
    v: usize,
    vp: usize,
    sub: &Routing,
) -> Result<Routing, ConstructError> {
    let (ui, vi, vpi) = (index(f, u)?, index(f, v)?, index(f, vp)?);
    if vpi == ui || vpi == vi {
        return Err(ConstructError::VpCollision { vp });
    }
    if !f.has_edge(ui, vi) {
        return Err(ConstructError::MissingEdge { u, v });
    }
    let covered = f.neighbors(ui) | f.neighbors(vi);
    if let Some(z) = bits(f.vertex_mask() & !covered).next() {
        return Err(ConstructError::DominationFailure { z: f.label(z) });
    }
    if !f.has_edge(vi, vpi) {
        return Err(ConstructError::VpNotAdjacent { v, vp });
    }
    let h = f.induced_by_mask(f.vertex_mask() & !bit(vi) & !bit(vpi));
    let report = validate_routing(&h, sub);
    if !report.is_valid() {
        return Err(ConstructError::InvalidSubRouting(report.to_string()));
    }
    Ok(extend_paths(f, ui, vi, vpi, sub))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncrementMismatch {
    pub edge: (usize, usize),
    pub expected: u64,
    pub actual: i64,
}

/// Checks that `extended` adds exactly the tabulated weight to each edge of
/// `f` relative to `sub`:
///
/// | edge                          | added weight     |
/// |-------------------------------|------------------|
/// | `vu`                          | `5|X| + 3`       |
/// | `v'v`                         | `2n - 3 + |X|`   |
/// | `uz`, `z ∈ X`                 | `5`              |
/// | `vz`, `z ∈ (Y ∪ Z) \ {v'}`    | `3`              |
/// | any other                     | `0`              |
pub fn check_extension_increments(
    f: &Graph,
    u: usize,
    v: usize,
    vp: usize,
    sub: &Routing,
    extended: &Routing,
) -> Result<(), Vec<IncrementMismatch>> {
    let (ui, vi, vpi) = match (f.index_of(u), f.index_of(v), f.index_of(vp)) {
        (Some(a), Some(b), Some(c)) => (a, b, c),
        _ => return Err(Vec::new()),
    };
    increments_local(f, ui, vi, vpi, sub, extended)
}

fn increments_local(
    f: &Graph,
    u: usize,
    v: usize,
    vp: usize,
    sub: &Routing,
    extended: &Routing,
) -> Result<(), Vec<IncrementMismatch>> {
    let n = f.order() as u64;
    let h = f.induced_by_mask(f.vertex_mask() & !bit(v) & !bit(vp));
    let before = congestion_unchecked(&h, sub);
    let after = congestion_unchecked(f, extended);
    let p = classify(f, u, v);
    let x = p.x.count_ones() as u64;
    let v_side = (p.y | p.z) & !bit(vp);

    let mut mismatches = Vec::new();
    for (a, b) in f.edges() {
        let is = |s: usize, t: usize| (a, b) == (s.min(t), s.max(t));
        let other = |s: usize| if a == s { Some(b) } else if b == s { Some(a) } else { None };
        let expected = if is(u, v) {
            5 * x + 3
        } else if is(v, vp) {
            2 * n - 3 + x
        } else if other(u).is_some_and(|z| p.x & bit(z) != 0) {
            5
        } else if other(v).is_some_and(|z| v_side & bit(z) != 0) {
            3
        } else {
            0
        };
        let (la, lb) = (f.label(a), f.label(b));
        let actual = after.get(la, lb) as i64 - before.get(la, lb) as i64;
        if actual != expected as i64 {
            mismatches.push(IncrementMismatch {
                edge: (la.min(lb), la.max(lb)),
                expected,
                actual,
            });
        }
    }
    if mismatches.is_empty() {
        Ok(())
    } else {
        Err(mismatches)
    }
}

/// Shortest-path routing choosing the smallest-index predecessor at each
/// BFS layer. Pairs in different components are skipped.
pub fn bfs_routing(f: &Graph) -> Routing {
    let mut r = Routing::new();
    for s in 0..f.order() {
        let layers = f.bfs_layers(s);
        let mut depth = vec![usize::MAX; f.order()];
        for (d, &layer) in layers.iter().enumerate() {
            for t in bits(layer) {
                depth[t] = d;
            }
        }
        for t in s + 1..f.order() {
            if depth[t] == usize::MAX {
                continue;
            }
            let mut walk = vec![t];
            let mut cur = t;
            for d in (0..depth[t]).rev() {
                cur = (f.neighbors(cur) & layers[d]).trailing_zeros() as usize;
                walk.push(cur);
            }
            r.insert(path_of(f, &walk));
        }
    }
    r
}

struct Solution {
    routing: Routing,
    levels: Vec<LevelRecord>,
}

struct Search {
    sides: [Graph; 2],
    options: ConstructOptions,
    memo: HashMap<(u64, Side), Option<Rc<Solution>>>,
    stats: SearchStats,
}

impl Search {
    fn graph(&self, side: Side) -> &Graph {
        match side {
            Side::Graph => &self.sides[0],
            Side::Complement => &self.sides[1],
        }
    }

    fn solve(&mut self, mask: u64, side: Side) -> Option<Rc<Solution>> {
        if let Some(hit) = self.memo.get(&(mask, side)) {
            self.stats.memo_hits += 1;
            return hit.clone();
        }
        let result = self.solve_uncached(mask, side);
        self.memo.insert((mask, side), result.clone());
        result
    }

    fn solve_uncached(&mut self, mask: u64, side: Side) -> Option<Rc<Solution>> {
        let f = self.graph(side).induced_by_mask(mask);
        let n = f.order();
        let diameter = f.diameter();
        if n <= 1 || diameter.at_most(2) {
            let routing = base_routing_diam2(&f).ok()?;
            return Some(Rc::new(Solution {
                routing,
                levels: vec![LevelRecord {
                    order: n,
                    case: Case::base(side),
                    roles: None,
                    x_size: None,
                    backtracks: 0,
                    increment_law: None,
                }],
            }));
        }
        let fc = self.graph(side.other()).induced_by_mask(mask);
        if !(diameter.is(3) && fc.diameter().is(3)) {
            return None;
        }

        let top_index: Vec<usize> = bits(mask).collect();
        for (k, c) in extension_candidates(&f, &fc).into_iter().enumerate() {
            if k == self.options.attempt_cap {
                self.stats.cap_hits += 1;
                break;
            }
            self.stats.attempts += 1;
            let removed = bit(top_index[c.v]) | bit(top_index[c.v_prime]);
            let Some(sub) = self.solve(mask & !removed, side) else {
                self.stats.backtracks += 1;
                continue;
            };
            let routing = extend_paths(&f, c.u, c.v, c.v_prime, &sub.routing);
            let increment_law = self.options.check_increments.then(|| {
                increments_local(&f, c.u, c.v, c.v_prime, &sub.routing, &routing).is_ok()
            });
            let mut levels = Vec::with_capacity(sub.levels.len() + 1);
            levels.push(LevelRecord {
                order: n,
                case: Case::extend(side),
                roles: Some(Roles {
                    u: f.label(c.u),
                    v: f.label(c.v),
                    u_prime: f.label(c.u_prime),
                    v_prime: f.label(c.v_prime),
                }),
                x_size: Some(c.x_size),
                // Every earlier candidate failed.
                backtracks: k,
                increment_law,
            });
            levels.extend(sub.levels.iter().cloned());
            return Some(Rc::new(Solution { routing, levels }));
        }
        None
    }
}

pub fn construct(g: &Graph) -> Certificate {
    construct_with(g, &ConstructOptions::default())
}

pub fn construct_with(g: &Graph, options: &ConstructOptions) -> Certificate {
    let n = g.order();
    let gc = g.complement();
    let mut search = Search {
        sides: [g.clone(), gc.clone()],
        options: *options,
        memo: HashMap::new(),
        stats: SearchStats::default(),
    };
    let all = g.vertex_mask();

    let found = [Side::Graph, Side::Complement]
        .into_iter()
        .find_map(|side| search.solve(all, side).map(|s| (side, s)));
    let (side, routing, trace, from_cases) = match found {
        Some((side, sol)) => (side, sol.routing.clone(), sol.levels.clone(), true),
        None => {
            let side = if g.diameter().is(3) {
                Side::Graph
            } else if gc.diameter().is(3) {
                Side::Complement
            } else if g.is_connected() {
                Side::Graph
            } else {
                Side::Complement
            };
            let level = LevelRecord {
                order: n,
                case: Case::Fallback,
                roles: None,
                x_size: None,
                backtracks: search.stats.backtracks as usize,
                increment_law: None,
            };
            (side, bfs_routing(side.pick(g, &gc)), vec![level], false)
        }
    };

    let host = side.pick(g, &gc);
    let routing_valid = validate_routing(host, &routing).is_valid();
    let congestion = congestion_unchecked(host, &routing);
    let bound_ok = within_five_halves(n, congestion.w);
    let increments_ok = trace.iter().all(|l| l.increment_law != Some(false));
    Certificate {
        order: n,
        side,
        certified: from_cases && routing_valid && bound_ok && increments_ok,
        routing,
        congestion,
        bound_ok,
        routing_valid,
        trace,
        stats: search.stats,
    }
}
