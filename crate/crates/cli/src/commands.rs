use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lapspread::oracle::{min_congestion_routing_with_limit, ORACLE_MAX_ORDER};
use lapspread::scan::{scan, Corpus, ScanOptions, ScanRecord, ScanReport, MAX_BUILTIN_ORDER};
use lapspread::spectral::laplacian_spectrum;
use lapspread::graph6::encode_graph6;
use lapspread::Graph;

use crate::document::{verify, CertificateDocument, SCHEMA_VERSION};
use crate::error::CliError;
use crate::input::{read_corpus, read_graph, read_text, Format};
use crate::Status;

#[derive(Debug, Parser)]
#[command(name = "lapspread", version, about = "Laplacian spread certificates for small graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a routing certificate and check it.
    Route(RouteArgs),
    /// Re-verify a certificate against a graph.
    Verify(VerifyArgs),
    /// Print the Laplacian spectrum of a graph and of its complement.
    Spectrum(GraphInput),
    /// Scan a corpus: every labeled graph, a graph6 file or G(n, p) samples.
    Scan(ScanArgs),
    /// Minimum weighted congestion by exhaustive search.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file (graph6 or edge list).
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Auto)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Write the certificate here instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    pub cert: PathBuf,
    #[command(flatten)]
    pub graph: GraphInput,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["n", "corpus"])))]
pub struct ScanArgs {
    /// Largest order of the labeled enumeration, or the order of sampled graphs.
    #[arg(long)]
    pub n: Option<usize>,
    /// graph6 corpus file, one graph per line.
    #[arg(long, value_name = "FILE")]
    pub corpus: Option<PathBuf>,
    /// Scan this many G(n, p) samples instead of every labeled graph.
    #[arg(long, value_name = "COUNT", requires = "n")]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0.5, requires = "sample")]
    pub p: f64,
    #[arg(long, default_value_t = 1, requires = "sample")]
    pub seed: u64,
    /// Also run the exact oracle on connected graphs with at most 6 vertices.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads; 1 scans sequentially.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Print only the aggregate block.
    #[arg(long)]
    pub summary_only: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Refuse graphs with more vertices than this.
    #[arg(long, default_value_t = ORACLE_MAX_ORDER)]
    pub max_n: usize,
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let _ = io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

/// Twelve decimals, printing eigensolver noise around zero as zero.
fn fixed12(x: f64) -> String {
    format!("{:.12}", if x.abs() < 1e-12 { 0.0 } else { x })
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::CheckFailed
    }
}

fn needs_two(g: &Graph, path: &Path) -> Result<(), CliError> {
    if g.order() < 2 {
        return Err(CliError::Usage(format!(
            "{}: graph needs at least two vertices",
            path.display()
        )));
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Route(a) => route(&a),
        Command::Verify(a) => verify_cmd(&a),
        Command::Spectrum(a) => spectrum(&a),
        Command::Scan(a) => scan_cmd(&a),
        Command::Oracle(a) => oracle(&a),
    }
}

fn route(a: &RouteArgs) -> Result<Status, CliError> {
    let g = read_graph(&a.graph.input, a.graph.format)?;
    needs_two(&g, &a.graph.input)?;
    let doc = CertificateDocument::route(&g);
    write_output(a.out.as_deref(), &doc.to_json())?;
    let check = verify(&doc, &g);
    if !check.passed() {
        eprint!("{check}");
    } else if !doc.certified {
        eprintln!("note: no certified construction found; routing comes from the BFS fallback");
    }
    Ok(status(check.passed()))
}

fn verify_cmd(a: &VerifyArgs) -> Result<Status, CliError> {
    let doc = CertificateDocument::from_json(&read_text(&a.cert)?).map_err(|source| {
        CliError::Certificate {
            path: a.cert.clone(),
            source,
        }
    })?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(CliError::SchemaVersion(doc.schema_version));
    }
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let v = verify(&doc, &g);
    print!("{v}");
    Ok(status(v.passed()))
}

fn spectrum(a: &GraphInput) -> Result<Status, CliError> {
    let g = read_graph(&a.input, a.format)?;
    needs_two(&g, &a.input)?;
    let sg = laplacian_spectrum(&g).expect("order checked");
    let sc = laplacian_spectrum(&g.complement()).expect("order checked");
    let mut out = format!(
        "# graph6 {}\n# n {}\n# laplacian eigenvalues, ascending\n",
        encode_graph6(&g).map_err(|source| CliError::Graph {
            path: a.input.clone(),
            source
        })?,
        g.order()
    );
    for v in &sg.values {
        out.push_str(&format!("{}\n", fixed12(*v)));
    }
    out.push_str("# complement eigenvalues, ascending\n");
    for v in &sc.values {
        out.push_str(&format!("{}\n", fixed12(*v)));
    }
    let (l2, l2c) = (sg.second(), sc.second());
    out.push_str(&format!("lambda2 = {}\n", fixed12(l2)));
    out.push_str(&format!("lambda2_complement = {}\n", fixed12(l2c)));
    out.push_str(&format!("sum = {}\n", fixed12(l2 + l2c)));
    out.push_str(&format!("spread = {}\n", fixed12(sg.largest() - l2)));
    out.push_str(&format!("zero_multiplicity = {}\n", sg.zero_multiplicity()));
    write_output(None, &out)?;
    Ok(Status::Pass)
}

fn corpus_for(a: &ScanArgs) -> Result<Corpus, CliError> {
    if let Some(path) = &a.corpus {
        return Ok(Corpus::Graphs(read_corpus(path)?));
    }
    let n = a.n.expect("clap requires --n or --corpus");
    match a.sample {
        Some(count) => {
            if !(0.0..=1.0).contains(&a.p) {
                return Err(CliError::Usage(format!("--p {} is outside [0, 1]", a.p)));
            }
            if !(2..=lapspread::graph6::GRAPH6_MAX_ORDER).contains(&n) {
                return Err(CliError::Usage(format!("--n {n} is outside 2..=62 for sampling")));
            }
            Ok(Corpus::Sample { n, p: a.p, seed: a.seed, count })
        }
        None => {
            if !(2..=MAX_BUILTIN_ORDER).contains(&n) {
                return Err(CliError::Usage(format!(
                    "--n {n}: built-in enumeration covers 2..={MAX_BUILTIN_ORDER}; pass --corpus for other orders"
                )));
            }
            Ok(Corpus::labeled(n)?)
        }
    }
}

fn run_scan<F: FnMut(&ScanRecord)>(
    corpus: &Corpus,
    options: &ScanOptions,
    jobs: Option<usize>,
    on_record: F,
) -> Result<ScanReport, CliError> {
    #[cfg(feature = "parallel")]
    if let Some(j) = jobs.filter(|&j| j > 1) {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--jobs {j}: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = jobs;
    Ok(scan(corpus, options, on_record)?)
}

fn scan_cmd(a: &ScanArgs) -> Result<Status, CliError> {
    if a.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let corpus = corpus_for(a)?;
    let options = ScanOptions {
        oracle: a.oracle,
        parallel: a.jobs != Some(1),
        ..Default::default()
    };

    let mut sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path).map_err(|source| {
            CliError::Io {
                path: path.clone(),
                source,
            }
        })?)),
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let mut write_err = None;
    let mut emit = |sink: &mut dyn Write, line: &str| {
        if write_err.is_none() {
            if let Err(e) = writeln!(sink, "{line}") {
                write_err = Some(e);
            }
        }
    };
    if !a.summary_only {
        emit(&mut *sink, ScanRecord::HEADER);
    }
    let report = run_scan(&corpus, &options, a.jobs, |r| {
        if !a.summary_only {
            emit(&mut *sink, &r.to_line());
        }
    })?;
    for line in report.render_aggregate().lines() {
        emit(&mut *sink, line);
    }
    let flushed = sink.flush();
    if let Some(source) = write_err.or(flushed.err()) {
        return Err(CliError::Io {
            path: a.out.clone().unwrap_or_else(|| PathBuf::from("<stdout>")),
            source,
        });
    }
    let clean = report.overall().failures().iter().all(|(_, f)| f.is_empty());
    Ok(status(clean))
}

fn oracle(a: &OracleArgs) -> Result<Status, CliError> {
    let g = read_graph(&a.graph.input, a.graph.format)?;
    let opt = min_congestion_routing_with_limit(&g, a.max_n)?;
    let mut out = format!("w* = {}\nnodes = {}\n", opt.w, opt.nodes);
    if g.order() >= 2 {
        let l2 = laplacian_spectrum(&g).expect("order checked").second();
        out.push_str(&format!("n / w* = {}\n", fixed12(g.order() as f64 / opt.w as f64)));
        out.push_str(&format!("lambda2 = {}\n", fixed12(l2)));
    }
    out.push_str("# optimal routing\n");
    for p in opt.routing.paths() {
        out.push_str(&format!("{p}\n"));
    }
    write_output(None, &out)?;
    Ok(Status::Pass)
}
