use std::fs;
use std::path::Path;

use clap::ValueEnum;
use lapspread::edgelist::parse_edge_list;
use lapspread::graph6::{parse_graph6, parse_graph6_corpus};
use lapspread::Graph;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// graph6 when the file is a single printable token, edge list otherwise.
    #[default]
    Auto,
    Graph6,
    Edgelist,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn looks_like_graph6(text: &str) -> bool {
    let mut tokens = text.split_whitespace();
    matches!((tokens.next(), tokens.next()), (Some(t), None) if t.bytes().all(|b| (63..=126).contains(&b)))
}

pub fn parse_graph_text(text: &str, format: Format, origin: &Path) -> Result<Graph, CliError> {
    let graph6 = match format {
        Format::Auto => looks_like_graph6(text),
        Format::Graph6 => true,
        Format::Edgelist => false,
    };
    let parsed = if graph6 {
        parse_graph6(text.trim().as_bytes())
    } else {
        parse_edge_list(text)
    };
    parsed.map_err(|source| CliError::Graph {
        path: origin.to_path_buf(),
        source,
    })
}

pub fn read_graph(path: &Path, format: Format) -> Result<Graph, CliError> {
    parse_graph_text(&read_text(path)?, format, path)
}

pub fn read_corpus(path: &Path) -> Result<Vec<Graph>, CliError> {
    parse_graph6_corpus(&read_text(path)?).map_err(|(line, source)| CliError::Corpus {
        path: path.to_path_buf(),
        line,
        source,
    })
}
