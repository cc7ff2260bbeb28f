//! Plain-text edge lists: a first line holding `n`, then one `u v` pair per line.
//! Blank lines and lines starting with `#` are ignored.

use crate::error::GraphError;
use crate::graph::Graph;

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line, first) = lines.next().ok_or(GraphError::EdgeList {
        line: 1,
        message: "missing vertex count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| GraphError::EdgeList {
        line,
        message: format!("expected a vertex count, found {first:?}"),
    })?;
    let mut g = Graph::empty(n)?;

    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let parsed: Vec<usize> = fields.iter().filter_map(|f| f.parse().ok()).collect();
        if fields.len() != 2 || parsed.len() != 2 {
            return Err(GraphError::EdgeList {
                line,
                message: format!("expected two vertex indices, found {text:?}"),
            });
        }
        g.insert_edge(parsed[0], parsed[1])?;
    }
    Ok(g)
}

/// Renders a graph in edge-list form using local indices.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("{}\n", g.order());
    for (a, b) in g.edges() {
        out.push_str(&format!("{a} {b}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::path_graph;

    #[test]
    fn p4() {
        let g = parse_edge_list("4\n0 1\n1 2\n2 3\n").unwrap();
        assert_eq!(g, path_graph(4).unwrap());
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn vertex_count_only() {
        let g = parse_edge_list("2").unwrap();
        assert_eq!((g.order(), g.edge_count()), (2, 0));
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse_edge_list("3\n0 1\n0 1\n1 0\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn errors() {
        assert_eq!(
            parse_edge_list("3\n0 3\n"),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
        assert_eq!(parse_edge_list("3\n2 2\n"), Err(GraphError::Loop { vertex: 2 }));
        assert!(matches!(
            parse_edge_list("3\n0 x\n"),
            Err(GraphError::EdgeList { line: 2, .. })
        ));
        assert!(matches!(parse_edge_list(""), Err(GraphError::EdgeList { .. })));
        assert!(matches!(parse_edge_list("-1"), Err(GraphError::EdgeList { line: 1, .. })));
    }
}
