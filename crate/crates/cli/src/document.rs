//! Certificate documents: the JSON form of a constructed routing together
//! with the spectral checks it supports, and independent re-verification.

use std::collections::BTreeMap;
use std::fmt;

use lapspread::constructor::{within_five_halves, Case, LevelRecord, Roles};
use lapspread::graph6::encode_graph6;
use lapspread::routing::{validate_routing, weighted_congestion, THEOREM2_TOLERANCE};
use lapspread::scan::{CHECK_TOLERANCE, THEOREM1_BOUND};
use lapspread::spectral::lambda2;
use lapspread::{construct, Certificate, Graph, Path, Routing, Side};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Agreement required between recorded and recomputed eigenvalues. Stored
/// values carry 12 significant digits.
const LAMBDA_AGREEMENT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocSide {
    Graph,
    Complement,
}

impl From<Side> for DocSide {
    fn from(s: Side) -> Self {
        match s {
            Side::Graph => DocSide::Graph,
            Side::Complement => DocSide::Complement,
        }
    }
}

impl DocSide {
    fn pick<'a>(self, g: &'a Graph, complement: &'a Graph) -> &'a Graph {
        match self {
            DocSide::Graph => g,
            DocSide::Complement => complement,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRef {
    pub graph6: String,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeCongestion {
    pub edge: [usize; 2],
    pub congestion: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocRoles {
    pub u: usize,
    pub v: usize,
    pub u_prime: usize,
    pub v_prime: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceLevel {
    pub order: usize,
    pub case: String,
    pub roles: Option<DocRoles>,
    pub x_size: Option<usize>,
    pub backtracks: usize,
    pub increment_law: Option<bool>,
}

impl From<&LevelRecord> for TraceLevel {
    fn from(l: &LevelRecord) -> Self {
        TraceLevel {
            order: l.order,
            case: l.case.name().to_string(),
            roles: l.roles.map(|Roles { u, v, u_prime, v_prime }| DocRoles { u, v, u_prime, v_prime }),
            x_size: l.x_size,
            backtracks: l.backtracks,
            increment_law: l.increment_law,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    pub routing_valid: bool,
    /// `w <= floor(5n/2)`.
    pub congestion_bound: bool,
    /// `λ2(side) >= n/w - 1e-8`.
    pub theorem2: bool,
    /// `max(λ2(G), λ2(Ḡ)) >= 2/5 - 1e-8`.
    pub theorem1: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.routing_valid && self.congestion_bound && self.theorem2 && self.theorem1
    }

    fn named(&self) -> [(&'static str, bool); 4] {
        [
            ("routing_valid", self.routing_valid),
            ("congestion_bound", self.congestion_bound),
            ("theorem2", self.theorem2),
            ("theorem1", self.theorem1),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub graph: GraphRef,
    pub side: DocSide,
    /// One vertex sequence per pair, smaller endpoint first, sorted by pair.
    pub paths: Vec<Vec<usize>>,
    pub per_edge_congestion: Vec<EdgeCongestion>,
    pub w: u64,
    /// `n / w`.
    pub bound: f64,
    pub lambda2_side: f64,
    pub lambda2_graph: f64,
    pub lambda2_complement: f64,
    pub certified: bool,
    /// Outermost level first.
    pub trace: Vec<TraceLevel>,
    pub checks: Checks,
}

/// Rounds to 12 significant digits. Magnitudes below `1e-12` are eigensolver
/// noise around a zero eigenvalue and become exactly zero.
pub fn round12(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

struct Spectra {
    graph: f64,
    complement: f64,
}

impl Spectra {
    fn of(g: &Graph, complement: &Graph) -> Spectra {
        Spectra {
            graph: lambda2(g).expect("order checked by caller"),
            complement: lambda2(complement).expect("order checked by caller"),
        }
    }

    fn side(&self, side: DocSide) -> f64 {
        match side {
            DocSide::Graph => self.graph,
            DocSide::Complement => self.complement,
        }
    }

    fn theorem1(&self) -> bool {
        self.graph.max(self.complement) >= THEOREM1_BOUND - CHECK_TOLERANCE
    }
}

fn theorem2(n: usize, w: u64, lambda: f64) -> bool {
    w > 0 && lambda >= n as f64 / w as f64 - THEOREM2_TOLERANCE
}

impl CertificateDocument {
    /// Builds the document for `g` (at least two vertices) from a
    /// constructed certificate.
    pub fn from_certificate(g: &Graph, cert: &Certificate) -> CertificateDocument {
        let n = g.order();
        let spectra = Spectra::of(g, &g.complement());
        let side = DocSide::from(cert.side);
        let w = cert.w();
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            graph: GraphRef {
                graph6: encode_graph6(g).expect("order checked by caller"),
                n,
            },
            side,
            paths: cert.routing.paths().map(|p| p.vertices().to_vec()).collect(),
            per_edge_congestion: cert
                .congestion
                .per_edge
                .iter()
                .map(|(&(a, b), &c)| EdgeCongestion { edge: [a, b], congestion: c })
                .collect(),
            w,
            bound: n as f64 / w as f64,
            lambda2_side: round12(spectra.side(side)),
            lambda2_graph: round12(spectra.graph),
            lambda2_complement: round12(spectra.complement),
            certified: cert.certified,
            trace: cert.trace.iter().map(TraceLevel::from).collect(),
            checks: Checks {
                routing_valid: cert.routing_valid,
                congestion_bound: within_five_halves(n, w),
                theorem2: theorem2(n, w, spectra.side(side)),
                theorem1: spectra.theorem1(),
            },
        }
    }

    pub fn route(g: &Graph) -> CertificateDocument {
        CertificateDocument::from_certificate(g, &construct(g))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<CertificateDocument, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// `None` when the check passed.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub outcomes: Vec<CheckOutcome>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.failure.is_none())
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| o.failure.is_some())
    }

    fn record(&mut self, name: &'static str, failure: Option<String>) {
        self.outcomes.push(CheckOutcome { name, failure });
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match &o.failure {
                None => writeln!(f, "PASS {}", o.name)?,
                Some(why) => writeln!(f, "FAIL {}: {why}", o.name)?,
            }
        }
        let failed = self.failed().count();
        if failed == 0 {
            writeln!(f, "verified: all {} checks reproduced", self.outcomes.len())
        } else {
            writeln!(f, "verification failed: {failed} of {} checks", self.outcomes.len())
        }
    }
}

fn routing_from_paths(paths: &[Vec<usize>]) -> Result<Routing, String> {
    let mut routing = Routing::new();
    for p in paths {
        let path = Path::new(p.clone()).map_err(|e| format!("path {p:?}: {e}"))?;
        let (x, y) = path.endpoints();
        if routing.insert(path).is_some() {
            return Err(format!("duplicate path for pair {{{x}, {y}}}"));
        }
    }
    Ok(routing)
}

/// Re-derives every recorded quantity of `doc` from `g` and the listed paths.
pub fn verify(doc: &CertificateDocument, g: &Graph) -> Verification {
    let mut v = Verification::default();
    let n = g.order();

    let graph6 = encode_graph6(g).unwrap_or_default();
    if doc.graph.graph6 != graph6 || doc.graph.n != n {
        v.record(
            "graph_match",
            Some(format!(
                "mismatched graph: certificate is for {:?} (n = {}), input is {graph6:?} (n = {n})",
                doc.graph.graph6, doc.graph.n
            )),
        );
        return v;
    }
    v.record("graph_match", None);

    let complement = g.complement();
    let side_graph = doc.side.pick(g, &complement);

    let routing = routing_from_paths(&doc.paths);
    let routing_failure = match &routing {
        Err(e) => Some(e.clone()),
        Ok(r) => {
            let report = validate_routing(side_graph, r);
            report.violations.first().map(|first| {
                let more = report.violations.len() - 1;
                if more == 0 {
                    first.to_string()
                } else {
                    format!("{first} (and {more} more)")
                }
            })
        }
    };
    let routing_valid = routing_failure.is_none();
    v.record("paths", routing_failure);

    let congestion = match &routing {
        Ok(r) if routing_valid => weighted_congestion(side_graph, r).ok(),
        _ => None,
    };
    let congestion_failure = match &congestion {
        None => Some("congestion mismatch: not recomputable from an invalid routing".to_string()),
        Some(c) => {
            let recorded: BTreeMap<(usize, usize), u64> = doc
                .per_edge_congestion
                .iter()
                .map(|e| ((e.edge[0].min(e.edge[1]), e.edge[0].max(e.edge[1])), e.congestion))
                .collect();
            if c.w != doc.w {
                Some(format!("congestion mismatch: recorded w = {}, recomputed w = {}", doc.w, c.w))
            } else if recorded != c.per_edge || recorded.len() != doc.per_edge_congestion.len() {
                let edge = c
                    .per_edge
                    .iter()
                    .find(|(e, w)| recorded.get(e) != Some(w))
                    .map(|(e, _)| *e)
                    .or_else(|| recorded.keys().find(|e| !c.per_edge.contains_key(e)).copied());
                Some(match edge {
                    Some((a, b)) => format!(
                        "congestion mismatch on edge {a}-{b}: recorded {:?}, recomputed {:?}",
                        recorded.get(&(a, b)),
                        c.per_edge.get(&(a, b))
                    ),
                    None => "congestion mismatch: duplicate edge entries".to_string(),
                })
            } else {
                None
            }
        }
    };
    v.record("congestion", congestion_failure);

    let w = congestion.as_ref().map_or(doc.w, |c| c.w);
    let bound = n as f64 / w as f64;
    v.record(
        "bound",
        (doc.bound != bound).then(|| format!("recorded bound {} but n / w = {bound}", doc.bound)),
    );

    let spectra = (n >= 2).then(|| Spectra::of(g, &complement));
    let lambda_failure = match &spectra {
        None => Some("graph has fewer than two vertices".to_string()),
        Some(s) => [
            ("lambda2_side", doc.lambda2_side, s.side(doc.side)),
            ("lambda2_graph", doc.lambda2_graph, s.graph),
            ("lambda2_complement", doc.lambda2_complement, s.complement),
        ]
        .into_iter()
        .find(|(_, recorded, actual)| (recorded - actual).abs() > LAMBDA_AGREEMENT)
        .map(|(name, recorded, actual)| format!("{name}: recorded {recorded}, recomputed {actual:.12}")),
    };
    v.record("lambda2_values", lambda_failure);

    let recomputed = Checks {
        routing_valid,
        congestion_bound: within_five_halves(n, w),
        theorem2: spectra.as_ref().is_some_and(|s| theorem2(n, w, s.side(doc.side))),
        theorem1: spectra.as_ref().is_some_and(Spectra::theorem1),
    };
    for ((name, recorded), (_, actual)) in doc.checks.named().into_iter().zip(recomputed.named()) {
        let failure = if recorded != actual {
            Some(format!("recorded {recorded}, recomputed {actual}"))
        } else if !actual {
            Some("check does not hold".to_string())
        } else {
            None
        };
        v.record(name, failure);
    }

    v.record("trace", trace_failure(doc, n, recomputed.all()));
    v
}

/// A certified document must carry a trace of base and extension levels
/// starting at the full order, with every increment table reproduced.
fn trace_failure(doc: &CertificateDocument, n: usize, checks_hold: bool) -> Option<String> {
    let mut cases = Vec::with_capacity(doc.trace.len());
    for level in &doc.trace {
        match Case::from_name(&level.case) {
            Some(c) => cases.push(c),
            None => return Some(format!("unknown case {:?}", level.case)),
        }
    }
    let first_order = doc.trace.first().map(|l| l.order);
    if first_order.is_some_and(|o| o != n) {
        return Some(format!("outermost level has order {}, graph has {n}", first_order.unwrap()));
    }
    if doc.trace.windows(2).any(|w| w[1].order + 2 != w[0].order) {
        return Some("each level must remove exactly two vertices".to_string());
    }
    if !doc.certified {
        return None;
    }
    if doc.trace.is_empty() {
        return Some("certified document without a trace".to_string());
    }
    if cases.contains(&Case::Fallback) {
        return Some("certified document contains a fallback level".to_string());
    }
    if doc.trace.iter().any(|l| l.increment_law == Some(false)) {
        return Some("certified document records an increment mismatch".to_string());
    }
    if !checks_hold {
        return Some("certified document whose checks do not all hold".to_string());
    }
    None
}
