//! Tab-separated file formats.
//!
//! * edges: `src<TAB>dst` per line
//! * attributes: `node<TAB>attr[<TAB>weight]`, weight defaults to 1
//! * node tables (labels, assignments): `node<TAB>value`
//!
//! Lines starting with `#` are comments. A comment of the form
//! `#n=<N><TAB>d=<D>` (either key may be omitted) fixes the node and
//! attribute counts instead of inferring them from the largest id.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::AttributedGraph;
use crate::nci::Nci;
use crate::{Error, Result};

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub n: Option<usize>,
    pub d: Option<usize>,
}

impl Header {
    fn merge(&mut self, other: Header, path: &Path) -> Result<()> {
        for (mine, theirs, key) in [(&mut self.n, other.n, "n"), (&mut self.d, other.d, "d")] {
            match (*mine, theirs) {
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::validation(format!(
                        "{}: header {key}={b} disagrees with earlier {key}={a}",
                        path.display()
                    )))
                }
                (None, Some(b)) => *mine = Some(b),
                _ => {}
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Clone)]
pub struct EdgeList {
    pub header: Header,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Default, Clone)]
pub struct AttributeList {
    pub header: Header,
    pub entries: Vec<(usize, usize, f64)>,
}

pub fn load_graph(edge_path: impl AsRef<Path>, attr_path: impl AsRef<Path>) -> Result<AttributedGraph> {
    let edge_path = edge_path.as_ref();
    let attr_path = attr_path.as_ref();
    let edges = read_edges(open(edge_path)?, edge_path)?;
    let attrs = read_attributes(open(attr_path)?, attr_path)?;
    assemble(edges, attrs, edge_path)
}

/// Builds the graph from parsed files, resolving `n` and `d` from the headers
/// or the largest ids seen.
pub fn assemble(edges: EdgeList, attrs: AttributeList, path: &Path) -> Result<AttributedGraph> {
    let mut header = edges.header;
    header.merge(attrs.header, path)?;

    let max_node = edges
        .edges
        .iter()
        .flat_map(|&(s, t)| [s, t])
        .chain(attrs.entries.iter().map(|e| e.0))
        .max();
    let max_attr = attrs.entries.iter().map(|e| e.1).max();
    let seen_n = max_node.map_or(0, |m| m + 1);
    let seen_d = max_attr.map_or(0, |m| m + 1);

    let n = resolve(header.n, seen_n, "node")?;
    let d = resolve(header.d, seen_d, "attribute")?;
    AttributedGraph::new(n, d, edges.edges, attrs.entries)
}

fn resolve(declared: Option<usize>, seen: usize, what: &str) -> Result<usize> {
    match declared {
        Some(v) if v < seen => Err(Error::validation(format!(
            "header declares {v} {what}s but id {} appears",
            seen - 1
        ))),
        Some(v) => Ok(v),
        None => Ok(seen),
    }
}

pub fn read_edges(reader: impl BufRead, path: &Path) -> Result<EdgeList> {
    let mut out = EdgeList::default();
    for_each_record(reader, path, &mut out.header, |line_no, fields| {
        if fields.len() != 2 {
            return Err(parse_error(path, line_no, format!("expected 2 fields, found {}", fields.len())));
        }
        let s = parse_id(fields[0], path, line_no)?;
        let t = parse_id(fields[1], path, line_no)?;
        out.edges.push((s, t));
        Ok(())
    })?;
    Ok(out)
}

pub fn read_attributes(reader: impl BufRead, path: &Path) -> Result<AttributeList> {
    let mut out = AttributeList::default();
    for_each_record(reader, path, &mut out.header, |line_no, fields| {
        if !(2..=3).contains(&fields.len()) {
            return Err(parse_error(path, line_no, format!("expected 2 or 3 fields, found {}", fields.len())));
        }
        let v = parse_id(fields[0], path, line_no)?;
        let a = parse_id(fields[1], path, line_no)?;
        let w = match fields.get(2) {
            None => 1.0,
            Some(s) => s
                .parse::<f64>()
                .map_err(|e| parse_error(path, line_no, format!("bad weight {s:?}: {e}")))?,
        };
        if !w.is_finite() || w < 0.0 {
            return Err(Error::validation(format!(
                "{}:{line_no}: attribute weight {w} must be finite and non-negative",
                path.display()
            )));
        }
        out.entries.push((v, a, w));
        Ok(())
    })?;
    Ok(out)
}

/// Reads `node<TAB>value` rows, keeping the value as text.
pub fn read_node_table(reader: impl BufRead, path: &Path) -> Result<Vec<(usize, String)>> {
    let mut rows = Vec::new();
    let mut header = Header::default();
    for_each_record(reader, path, &mut header, |line_no, fields| {
        if fields.len() != 2 {
            return Err(parse_error(path, line_no, format!("expected 2 fields, found {}", fields.len())));
        }
        rows.push((parse_id(fields[0], path, line_no)?, fields[1].to_string()));
        Ok(())
    })?;
    Ok(rows)
}

pub fn load_node_table(path: impl AsRef<Path>) -> Result<Vec<(usize, String)>> {
    let path = path.as_ref();
    read_node_table(open(path)?, path)
}

/// Reads a `node<TAB>cluster` file into an assignment over `0..n`. Every node
/// must appear exactly once. When `k` is `None` it is one more than the
/// largest cluster id.
pub fn load_assignment(path: impl AsRef<Path>, n: Option<usize>, k: Option<usize>) -> Result<Nci> {
    let path = path.as_ref();
    let rows = load_node_table(path)?;
    let mut pairs = Vec::with_capacity(rows.len());
    for (node, value) in rows {
        let c: usize = value
            .parse()
            .map_err(|_| Error::validation(format!("{}: cluster id {value:?} is not a non-negative integer", path.display())))?;
        pairs.push((node, c));
    }
    let n = n.unwrap_or_else(|| pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0));
    let mut assign = vec![usize::MAX; n];
    for (node, c) in pairs {
        if node >= n {
            return Err(Error::validation(format!("{}: node {node} outside 0..{n}", path.display())));
        }
        if assign[node] != usize::MAX && assign[node] != c {
            return Err(Error::validation(format!("{}: node {node} listed twice", path.display())));
        }
        assign[node] = c;
    }
    if let Some(missing) = assign.iter().position(|&c| c == usize::MAX) {
        return Err(Error::validation(format!("{}: node {missing} has no cluster", path.display())));
    }
    let k = k.unwrap_or_else(|| assign.iter().max().map_or(1, |m| m + 1));
    Nci::new(assign, k).map_err(|e| Error::validation(format!("{}: {e}", path.display())))
}

pub fn write_assignment(path: impl AsRef<Path>, nci: &Nci) -> Result<()> {
    let path = path.as_ref();
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    for (node, c) in nci.assignment().iter().enumerate() {
        writeln!(w, "{node}\t{c}").map_err(io_err)?;
    }
    w.flush().map_err(io_err)
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn for_each_record(
    reader: impl BufRead,
    path: &Path,
    header: &mut Header,
    mut f: impl FnMut(usize, &[&str]) -> Result<()>,
) -> Result<()> {
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(h) = parse_header(comment, path, line_no)? {
                header.merge(h, path)?;
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split(['\t', ' ']).filter(|s| !s.is_empty()).collect();
        f(line_no, &fields)?;
    }
    Ok(())
}

fn parse_header(comment: &str, path: &Path, line_no: usize) -> Result<Option<Header>> {
    let mut header = Header::default();
    let mut any = false;
    for token in comment.split_whitespace() {
        let Some((key, value)) = token.split_once('=') else {
            return Ok(None);
        };
        let slot = match key {
            "n" => &mut header.n,
            "d" => &mut header.d,
            _ => return Ok(None),
        };
        *slot = Some(
            value
                .parse()
                .map_err(|_| parse_error(path, line_no, format!("bad header value {token:?}")))?,
        );
        any = true;
    }
    Ok(any.then_some(header))
}

fn parse_id(field: &str, path: &Path, line_no: usize) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_error(path, line_no, format!("{field:?} is not a non-negative integer id")))
}

fn parse_error(path: &Path, line: usize, message: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}
