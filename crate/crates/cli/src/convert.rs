use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::commands::{CliError, CliResult};
use crate::ConvertArgs;

#[derive(Debug)]
struct Content {
    ids: Vec<String>,
    attrs: Vec<Vec<(usize, f64)>>,
    labels: Vec<String>,
    d: usize,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> CliError {
    CliError::Lib(acmin::Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    })
}

fn parse_content(path: &Path) -> CliResult<Content> {
    let text = read(path)?;
    let mut rows: Vec<(String, Vec<(usize, f64)>, String)> = Vec::new();
    let mut d = None;
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() < 2 {
            return Err(parse_error(path, i + 1, "expected an id, attribute values and a label"));
        }
        let width = fields.len() - 2;
        match d {
            None => d = Some(width),
            Some(w) if w != width => {
                return Err(parse_error(path, i + 1, format!("expected {w} attribute values, found {width}")))
            }
            _ => {}
        }
        let mut attrs = Vec::new();
        for (a, raw) in fields[1..fields.len() - 1].iter().enumerate() {
            let w: f64 = raw
                .parse()
                .map_err(|_| parse_error(path, i + 1, format!("bad attribute value {raw:?}")))?;
            if !w.is_finite() || w < 0.0 {
                return Err(parse_error(path, i + 1, format!("attribute value {raw} is not a finite non-negative number")));
            }
            if w != 0.0 {
                attrs.push((a, w));
            }
        }
        rows.push((fields[0].to_string(), attrs, fields[fields.len() - 1].to_string()));
    }
    if rows.is_empty() {
        return Err(CliError::Invalid(format!("{} has no nodes", path.display())));
    }

    let numeric = rows.iter().all(|r| r.0.parse::<u64>().is_ok());
    if numeric {
        rows.sort_by_key(|r| r.0.parse::<u64>().unwrap());
    } else {
        rows.sort_by(|a, b| a.0.cmp(&b.0));
    }
    for pair in rows.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(CliError::Invalid(format!("{}: node {} appears twice", path.display(), pair[0].0)));
        }
    }

    let mut out = Content {
        ids: Vec::with_capacity(rows.len()),
        attrs: Vec::with_capacity(rows.len()),
        labels: Vec::with_capacity(rows.len()),
        d: d.unwrap_or(0),
    };
    for (id, attrs, label) in rows {
        out.ids.push(id);
        out.attrs.push(attrs);
        out.labels.push(label);
    }
    Ok(out)
}

/// Returns citing -> cited edges between known nodes and the number of
/// citation lines that mention an unknown id.
fn parse_cites(path: &Path, index: &HashMap<&str, usize>, symmetrize: bool) -> CliResult<(BTreeSet<(usize, usize)>, usize)> {
    let text = read(path)?;
    let mut edges = BTreeSet::new();
    let mut dropped = 0;
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(parse_error(path, i + 1, format!("expected 2 fields, found {}", fields.len())));
        }
        let (Some(&cited), Some(&citing)) = (index.get(fields[0]), index.get(fields[1])) else {
            dropped += 1;
            continue;
        };
        edges.insert((citing, cited));
        if symmetrize {
            edges.insert((cited, citing));
        }
    }
    Ok((edges, dropped))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut p = prefix.as_os_str().to_owned();
    p.push(".");
    p.push(ext);
    PathBuf::from(p)
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CliResult {
    let io_err = |e: std::io::Error| CliError::Lib(acmin::Error::Io { path: path.to_path_buf(), source: e });
    let file = fs::File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(file);
    body(&mut w).map_err(io_err)?;
    w.flush().map_err(io_err)
}

pub fn run(args: &ConvertArgs) -> CliResult {
    let content = parse_content(&args.content)?;
    let index: HashMap<&str, usize> = content.ids.iter().enumerate().map(|(i, id)| (id.as_str(), i)).collect();
    let (edges, dropped) = parse_cites(&args.cites, &index, args.symmetrize)?;
    let n = content.ids.len();
    let d = content.d;

    if let Some(parent) = args.out_prefix.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Lib(acmin::Error::Io { path: parent.to_path_buf(), source: e }))?;
    }

    write_file(&with_ext(&args.out_prefix, "edges"), |w| {
        writeln!(w, "#n={n}\td={d}")?;
        for (s, t) in &edges {
            writeln!(w, "{s}\t{t}")?;
        }
        Ok(())
    })?;
    write_file(&with_ext(&args.out_prefix, "attrs"), |w| {
        writeln!(w, "#n={n}\td={d}")?;
        for (v, attrs) in content.attrs.iter().enumerate() {
            for &(a, weight) in attrs {
                if weight == 1.0 {
                    writeln!(w, "{v}\t{a}")?;
                } else {
                    writeln!(w, "{v}\t{a}\t{weight}")?;
                }
            }
        }
        Ok(())
    })?;
    write_file(&with_ext(&args.out_prefix, "labels"), |w| {
        for (v, label) in content.labels.iter().enumerate() {
            writeln!(w, "{v}\t{label}")?;
        }
        Ok(())
    })?;
    write_file(&with_ext(&args.out_prefix, "ids"), |w| {
        for (v, id) in content.ids.iter().enumerate() {
            writeln!(w, "{v}\t{id}")?;
        }
        Ok(())
    })?;

    eprintln!(
        "n={n} d={d} edges={} dropped_citations={dropped} symmetrized={}",
        edges.len(),
        args.symmetrize
    );
    Ok(())
}
