//! Corpus scans: per-graph spectra, constructed certificates and checks,
//! aggregated per vertex count.
//!
//! Graphs are analyzed in chunks. With the `parallel` feature each chunk is
//! mapped on the rayon pool; results are always folded in corpus order, so
//! reports do not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;

use crate::constructor::{construct_with, ConstructOptions, Side};
use crate::error::{GraphError, ScanError};
use crate::generators::{labeled_graph, random_gnp};
use crate::graph::Graph;
use crate::graph6::encode_graph6;
use crate::oracle::{min_congestion_routing, ORACLE_MAX_ORDER};
use crate::routing::{bound_report, THEOREM2_TOLERANCE};
use crate::spectral::{compare_complement_spectra, laplacian_spectrum};

/// Lower bound on `max(λ2(G), λ2(Ḡ))`.
pub const THEOREM1_BOUND: f64 = 0.4;
/// Tolerance for scalar spectral checks.
pub const CHECK_TOLERANCE: f64 = 1e-8;
/// Largest order for built-in labeled enumeration.
pub const MAX_BUILTIN_ORDER: usize = 7;

const CHUNK: u64 = 4096;
const KEPT_IDS: usize = 8;
const KEPT_FAILURES: usize = 100;

#[derive(Clone, Debug)]
pub struct ScanOptions {
    /// Run the exact oracle on connected graphs with at most 6 vertices.
    pub oracle: bool,
    /// Use the rayon pool when the `parallel` feature is enabled.
    pub parallel: bool,
    /// Keep every record in the report.
    pub keep_records: bool,
    pub construct: ConstructOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            oracle: false,
            parallel: true,
            keep_records: false,
            construct: ConstructOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRecord {
    /// graph6 string.
    pub id: String,
    pub n: usize,
    pub lambda2_graph: f64,
    pub lambda2_complement: f64,
    pub sum: f64,
    pub max: f64,
    pub side: Side,
    pub w: u64,
    pub certified: bool,
    pub fallback: bool,
    pub routing_valid: bool,
    /// `λ2(side) >= n / w - 1e-8`.
    pub theorem2: bool,
    /// `max >= 2/5 - 1e-8`.
    pub theorem1: bool,
    pub complement_deviation: f64,
    /// Zero-eigenvalue multiplicity equals the component count on both sides.
    pub components_ok: bool,
    pub join_pattern: bool,
    pub extensions: usize,
    pub increment_law_ok: bool,
    pub optimal_w: Option<u64>,
    /// `n / w* <= λ2 + 1e-8` and, when routed in `G`, `w >= w*`.
    pub oracle_ok: Option<bool>,
}

impl ScanRecord {
    pub const HEADER: &'static str =
        "# graph6\tn\tlambda2\tlambda2_complement\tsum\tmax\tside\tw\tcertified\tw_star";

    pub fn to_line(&self) -> String {
        format!(
            "{}\t{}\t{:.12}\t{:.12}\t{:.12}\t{:.12}\t{}\t{}\t{}\t{}",
            self.id,
            self.n,
            self.lambda2_graph,
            self.lambda2_complement,
            self.sum,
            self.max,
            self.side,
            self.w,
            self.certified,
            self.optimal_w.map_or("-".to_string(), |w| w.to_string()),
        )
    }
}

/// Spectra, certificate and checks for one graph.
pub fn analyze_graph(g: &Graph, options: &ScanOptions) -> Result<ScanRecord, ScanError> {
    let id = encode_graph6(g)?;
    let n = g.order();
    if n < 2 {
        return Err(ScanError::TooSmall { id });
    }
    let gc = g.complement();
    let sg = laplacian_spectrum(g)?;
    let sc = laplacian_spectrum(&gc)?;
    let components_ok = sg.zero_multiplicity() == g.component_count()
        && sc.zero_multiplicity() == gc.component_count();
    let (l2g, l2c) = (sg.second(), sc.second());
    let complement_deviation = compare_complement_spectra(n, sg, sc).max_deviation;

    let cert = construct_with(g, &options.construct);
    let lambda_side = match cert.side {
        Side::Graph => l2g,
        Side::Complement => l2c,
    };
    let theorem2 = cert.w() > 0 && bound_report(n, cert.w(), lambda_side).holds;
    let max = l2g.max(l2c);

    let (optimal_w, oracle_ok) = if options.oracle && n <= ORACLE_MAX_ORDER && g.is_connected() {
        let opt = min_congestion_routing(g).expect("guarded by order and connectivity");
        let spectral_ok = n as f64 / opt.w as f64 <= l2g + THEOREM2_TOLERANCE;
        let dominance_ok = cert.side != Side::Graph || cert.w() >= opt.w;
        (Some(opt.w), Some(spectral_ok && dominance_ok))
    } else {
        (None, None)
    };

    Ok(ScanRecord {
        id,
        n,
        lambda2_graph: l2g,
        lambda2_complement: l2c,
        sum: l2g + l2c,
        max,
        side: cert.side,
        w: cert.w(),
        certified: cert.certified,
        fallback: cert.is_fallback(),
        routing_valid: cert.routing_valid,
        theorem2,
        theorem1: max >= THEOREM1_BOUND - CHECK_TOLERANCE,
        complement_deviation,
        components_ok,
        join_pattern: g.is_isolated_join_pattern(),
        extensions: cert.extensions(),
        increment_law_ok: cert.trace.iter().all(|l| l.increment_law != Some(false)),
        optimal_w,
        oracle_ok,
    })
}

/// Smallest (or largest) value seen, with the first few graphs attaining it
/// within [`CHECK_TOLERANCE`].
#[derive(Clone, Debug, PartialEq)]
pub struct Extremum {
    pub value: f64,
    pub attainers: u64,
    pub ids: Vec<String>,
    minimize: bool,
}

impl Extremum {
    fn new(minimize: bool) -> Self {
        Extremum {
            value: if minimize { f64::INFINITY } else { f64::NEG_INFINITY },
            attainers: 0,
            ids: Vec::new(),
            minimize,
        }
    }

    fn better(&self, a: f64, b: f64) -> bool {
        if self.minimize {
            a < b - CHECK_TOLERANCE
        } else {
            a > b + CHECK_TOLERANCE
        }
    }

    fn merge(&mut self, other: &Extremum) {
        if other.attainers == 0 || self.better(self.value, other.value) {
            return;
        }
        if self.attainers == 0 || self.better(other.value, self.value) {
            *self = other.clone();
            return;
        }
        self.value = if self.minimize {
            self.value.min(other.value)
        } else {
            self.value.max(other.value)
        };
        self.attainers += other.attainers;
        let room = KEPT_IDS.saturating_sub(self.ids.len());
        self.ids.extend(other.ids.iter().take(room).cloned());
    }

    fn offer(&mut self, value: f64, id: &str) {
        let single = Extremum {
            value,
            attainers: 1,
            ids: vec![id.to_string()],
            minimize: self.minimize,
        };
        self.merge(&single);
    }
}

/// Count of graphs failing one check, with the first ids.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Failures {
    pub count: u64,
    pub ids: Vec<String>,
}

impl Failures {
    fn record(&mut self, failed: bool, id: &str) {
        if failed {
            self.count += 1;
            if self.ids.len() < KEPT_FAILURES {
                self.ids.push(id.to_string());
            }
        }
    }

    fn merge(&mut self, other: &Failures) {
        self.count += other.count;
        let room = KEPT_FAILURES.saturating_sub(self.ids.len());
        self.ids.extend(other.ids.iter().take(room).cloned());
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrderSummary {
    pub graphs: u64,
    pub min_sum: Extremum,
    pub min_max: Extremum,
    /// Largest `w / floor(5n/2)`.
    pub max_ratio: Extremum,
    pub max_w_over_n: f64,
    pub max_complement_deviation: f64,
    pub extensions: u64,
    pub uncertified: Failures,
    pub fallbacks: Failures,
    pub invalid_routings: Failures,
    pub theorem1: Failures,
    pub theorem2: Failures,
    /// `λ2(G) + λ2(Ḡ) < 1 - 1e-8`.
    pub conjecture: Failures,
    pub complement_identity: Failures,
    pub components: Failures,
    pub increment_law: Failures,
    /// Sum equal to 1 without the isolated-join pattern.
    pub equality_without_join: Failures,
    /// Isolated-join pattern with a sum different from 1.
    pub join_without_equality: Failures,
    pub oracle_checked: u64,
    pub oracle: Failures,
}

impl Default for OrderSummary {
    fn default() -> Self {
        OrderSummary {
            graphs: 0,
            min_sum: Extremum::new(true),
            min_max: Extremum::new(true),
            max_ratio: Extremum::new(false),
            max_w_over_n: 0.0,
            max_complement_deviation: 0.0,
            extensions: 0,
            uncertified: Failures::default(),
            fallbacks: Failures::default(),
            invalid_routings: Failures::default(),
            theorem1: Failures::default(),
            theorem2: Failures::default(),
            conjecture: Failures::default(),
            complement_identity: Failures::default(),
            components: Failures::default(),
            increment_law: Failures::default(),
            equality_without_join: Failures::default(),
            join_without_equality: Failures::default(),
            oracle_checked: 0,
            oracle: Failures::default(),
        }
    }
}

impl OrderSummary {
    pub fn observe(&mut self, r: &ScanRecord) {
        let id = r.id.as_str();
        self.graphs += 1;
        self.min_sum.offer(r.sum, id);
        self.min_max.offer(r.max, id);
        let cap = (5 * r.n / 2) as f64;
        self.max_ratio.offer(r.w as f64 / cap, id);
        self.max_w_over_n = self.max_w_over_n.max(r.w as f64 / r.n as f64);
        self.max_complement_deviation = self.max_complement_deviation.max(r.complement_deviation);
        self.extensions += r.extensions as u64;
        self.uncertified.record(!r.certified, id);
        self.fallbacks.record(r.fallback, id);
        self.invalid_routings.record(!r.routing_valid, id);
        self.theorem1.record(!r.theorem1, id);
        self.theorem2.record(!r.theorem2, id);
        self.conjecture.record(r.sum < 1.0 - CHECK_TOLERANCE, id);
        self.complement_identity
            .record(r.complement_deviation > CHECK_TOLERANCE, id);
        self.components.record(!r.components_ok, id);
        self.increment_law.record(!r.increment_law_ok, id);
        let equality = (r.sum - 1.0).abs() <= CHECK_TOLERANCE;
        self.equality_without_join.record(equality && !r.join_pattern, id);
        self.join_without_equality.record(r.join_pattern && !equality, id);
        if let Some(ok) = r.oracle_ok {
            self.oracle_checked += 1;
            self.oracle.record(!ok, id);
        }
    }

    pub fn merge(&mut self, o: &OrderSummary) {
        self.graphs += o.graphs;
        self.min_sum.merge(&o.min_sum);
        self.min_max.merge(&o.min_max);
        self.max_ratio.merge(&o.max_ratio);
        self.max_w_over_n = self.max_w_over_n.max(o.max_w_over_n);
        self.max_complement_deviation = self.max_complement_deviation.max(o.max_complement_deviation);
        self.extensions += o.extensions;
        self.oracle_checked += o.oracle_checked;
        for (a, b) in self.failures_mut().into_iter().zip(o.failures()) {
            a.1.merge(b.1);
        }
    }

    /// Named failure counters, in report order.
    pub fn failures(&self) -> Vec<(&'static str, &Failures)> {
        vec![
            ("uncertified", &self.uncertified),
            ("fallbacks", &self.fallbacks),
            ("invalid_routings", &self.invalid_routings),
            ("theorem1_failures", &self.theorem1),
            ("theorem2_failures", &self.theorem2),
            ("conjecture_failures", &self.conjecture),
            ("complement_identity_failures", &self.complement_identity),
            ("component_count_mismatches", &self.components),
            ("increment_law_failures", &self.increment_law),
            ("equality_without_join", &self.equality_without_join),
            ("join_without_equality", &self.join_without_equality),
            ("oracle_failures", &self.oracle),
        ]
    }

    fn failures_mut(&mut self) -> Vec<(&'static str, &mut Failures)> {
        vec![
            ("uncertified", &mut self.uncertified),
            ("fallbacks", &mut self.fallbacks),
            ("invalid_routings", &mut self.invalid_routings),
            ("theorem1_failures", &mut self.theorem1),
            ("theorem2_failures", &mut self.theorem2),
            ("conjecture_failures", &mut self.conjecture),
            ("complement_identity_failures", &mut self.complement_identity),
            ("component_count_mismatches", &mut self.components),
            ("increment_law_failures", &mut self.increment_law),
            ("equality_without_join", &mut self.equality_without_join),
            ("join_without_equality", &mut self.join_without_equality),
            ("oracle_failures", &mut self.oracle),
        ]
    }

    fn render(&self, scope: &str, out: &mut String) {
        let ext = |e: &Extremum| format!("{:.12} (attained by {}: {})", e.value, e.attainers, e.ids.join(" "));
        let _ = writeln!(out, "# [{scope}] graphs = {}", self.graphs);
        let _ = writeln!(out, "# [{scope}] min_sum = {}", ext(&self.min_sum));
        let _ = writeln!(out, "# [{scope}] min_max = {}", ext(&self.min_max));
        let _ = writeln!(out, "# [{scope}] max_w_ratio = {}", ext(&self.max_ratio));
        let _ = writeln!(out, "# [{scope}] max_w_over_n = {:.12}", self.max_w_over_n);
        let _ = writeln!(
            out,
            "# [{scope}] max_complement_deviation = {:.3e}",
            self.max_complement_deviation
        );
        let _ = writeln!(out, "# [{scope}] extensions = {}", self.extensions);
        let _ = writeln!(out, "# [{scope}] oracle_checked = {}", self.oracle_checked);
        for (name, f) in self.failures() {
            let _ = write!(out, "# [{scope}] {name} = {}", f.count);
            for id in &f.ids {
                let _ = write!(out, " {id}");
            }
            out.push('\n');
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct ScanReport {
    pub per_order: BTreeMap<usize, OrderSummary>,
    /// Filled when [`ScanOptions::keep_records`] is set.
    pub records: Vec<ScanRecord>,
}

impl ScanReport {
    pub fn observe(&mut self, r: &ScanRecord) {
        self.per_order.entry(r.n).or_default().observe(r);
    }

    pub fn overall(&self) -> OrderSummary {
        let mut all = OrderSummary::default();
        for s in self.per_order.values() {
            all.merge(s);
        }
        all
    }

    /// Aggregate block: per-order summaries followed by the overall one.
    pub fn render_aggregate(&self) -> String {
        let mut out = String::new();
        for (n, s) in &self.per_order {
            s.render(&format!("n={n}"), &mut out);
        }
        self.overall().render("all", &mut out);
        out
    }
}

/// A sequence of graphs addressable by position.
#[derive(Clone, Debug)]
pub enum Corpus {
    /// Every labeled graph for each order in `n_min..=n_max`; graph `code`
    /// has edge `k` (lexicographic pair order) iff bit `k` of `code` is set.
    Labeled { n_min: usize, n_max: usize },
    Graphs(Vec<Graph>),
    /// `count` samples of G(n, p) with seeds `seed, seed + 1, ...`.
    Sample { n: usize, p: f64, seed: u64, count: u64 },
}

impl Corpus {
    pub fn labeled(n_max: usize) -> Result<Corpus, ScanError> {
        if !(2..=MAX_BUILTIN_ORDER).contains(&n_max) {
            return Err(ScanError::OrderOutOfRange(n_max));
        }
        Ok(Corpus::Labeled { n_min: 2, n_max })
    }

    pub fn len(&self) -> u64 {
        match self {
            Corpus::Labeled { n_min, n_max } => (*n_min..=*n_max).map(|n| 1u64 << (n * (n - 1) / 2)).sum(),
            Corpus::Graphs(gs) => gs.len() as u64,
            Corpus::Sample { count, .. } => *count,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn graph(&self, mut index: u64) -> Result<Graph, GraphError> {
        match self {
            Corpus::Labeled { n_min, n_max } => {
                for n in *n_min..=*n_max {
                    let size = 1u64 << (n * (n - 1) / 2);
                    if index < size {
                        return labeled_graph(n, index);
                    }
                    index -= size;
                }
                panic!("corpus index out of range")
            }
            Corpus::Graphs(gs) => Ok(gs[index as usize].clone()),
            Corpus::Sample { n, p, seed, .. } => random_gnp(*n, *p, seed.wrapping_add(index)),
        }
    }
}

fn map_indices<T, F>(range: Range<u64>, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    let _ = parallel;
    range.map(f).collect()
}

/// Analyzes every graph of `corpus`, calling `on_record` in corpus order.
pub fn scan<F>(corpus: &Corpus, options: &ScanOptions, mut on_record: F) -> Result<ScanReport, ScanError>
where
    F: FnMut(&ScanRecord),
{
    let mut report = ScanReport::default();
    let total = corpus.len();
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let chunk = map_indices(start..end, options.parallel, |i| {
            analyze_graph(&corpus.graph(i)?, options)
        });
        for record in chunk {
            let record = record?;
            report.observe(&record);
            on_record(&record);
            if options.keep_records {
                report.records.push(record);
            }
        }
        start = end;
    }
    Ok(report)
}

/// All labeled graphs with `2 <= n <= n_max` (at most 7).
pub fn exhaustive_scan(n_max: usize, options: &ScanOptions) -> Result<ScanReport, ScanError> {
    scan(&Corpus::labeled(n_max)?, options, |_| {})
}
