//! Line-oriented text formats and atomic file output.
//!
//! Every format ignores blank lines and `#` comments. Parse errors carry the
//! 1-based line number.
//!
//! | file      | header             | records                                              |
//! |-----------|--------------------|------------------------------------------------------|
//! | hardware  | `chimera N M L`    | `dead_qubit id`, `dead_coupler a b`                  |
//! | graph     | `p graph nv ne`    | `e u v`, optional `v idx label`                      |
//! | qubo      | `p qubo n`         | `q i j c` (`i <= j`), `l idx label`, `o offset`      |
//! | ising     | `p ising n`        | `h i c`, `j i k c` (`i < k`), `l idx label`, `o offset` |

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::chimera::{ChimeraSpec, Fault, HardwareGraph, QubitId};
use crate::embedding::Embedding;
use crate::error::{parse_err, Error, Result};
use crate::problem::ProblemGraph;
use crate::qubo::{IsingModel, QuboMatrix};
use crate::scalar::Scalar;

/// Non-blank, non-comment lines as `(line number, tokens)`.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then(|| (i + 1, line.split_whitespace().collect()))
    })
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .or_else(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<()> {
    if toks.len() != n {
        return parse_err(
            line,
            format!(
                "`{}` takes {} fields, found {}",
                toks[0],
                n - 1,
                toks.len() - 1
            ),
        );
    }
    Ok(())
}

fn located<T>(line: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    })
}

pub fn parse_hardware(text: &str) -> Result<HardwareGraph> {
    let mut recs = records(text);
    let Some((line, head)) = recs.next() else {
        return parse_err(1, "empty hardware file");
    };
    if head[0] != "chimera" {
        return parse_err(
            line,
            format!("expected `chimera N M L`, found `{}`", head[0]),
        );
    }
    arity(line, &head, 4)?;
    let spec = located(
        line,
        ChimeraSpec::new(
            num(line, head[1], "N")?,
            num(line, head[2], "M")?,
            num(line, head[3], "L")?,
        ),
    )?;
    let mut faults = Vec::new();
    for (line, toks) in recs {
        let id = |tok: &str| -> Result<QubitId> {
            let q = QubitId(num(line, tok, "qubit id")?);
            if !spec.contains(q) {
                return parse_err(line, format!("qubit {q} outside {spec}"));
            }
            Ok(q)
        };
        match toks[0] {
            "dead_qubit" => {
                arity(line, &toks, 2)?;
                faults.push(Fault::Qubit(id(toks[1])?));
            }
            "dead_coupler" => {
                arity(line, &toks, 3)?;
                let (a, b) = (id(toks[1])?, id(toks[2])?);
                if !spec.ideal_adjacent(a, b) {
                    return parse_err(line, format!("qubits {a} and {b} share no coupler"));
                }
                faults.push(Fault::Coupler(a, b));
            }
            other => return parse_err(line, format!("unknown record `{other}`")),
        }
    }
    HardwareGraph::build(spec, &faults)
}

pub fn format_hardware(hw: &HardwareGraph) -> String {
    let s = hw.spec();
    let mut out = format!("chimera {} {} {}\n", s.rows, s.cols, s.shore_size);
    for q in hw.dead_qubits() {
        let _ = writeln!(out, "dead_qubit {q}");
    }
    for (a, b) in hw.dead_couplers() {
        let _ = writeln!(out, "dead_coupler {a} {b}");
    }
    out
}

/// Shared header check; returns the declared variable count.
fn header(line: usize, toks: &[&str], kind: &str, fields: usize) -> Result<Vec<usize>> {
    if toks[0] != "p" || toks.get(1) != Some(&kind) {
        return parse_err(line, format!("expected `p {kind}` header"));
    }
    arity(line, toks, 2 + fields)?;
    toks[2..].iter().map(|t| num(line, t, "count")).collect()
}

fn index(line: usize, tok: &str, n: usize) -> Result<usize> {
    let i: usize = num(line, tok, "index")?;
    if i >= n {
        return parse_err(line, format!("index {i} outside 0..{n}"));
    }
    Ok(i)
}

/// Labels default to the index; `l`/`v` records override them.
fn set_label(line: usize, labels: &mut [String], toks: &[&str]) -> Result<()> {
    arity(line, toks, 3)?;
    let i = index(line, toks[1], labels.len())?;
    labels[i] = toks[2].to_string();
    Ok(())
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn write_labels(out: &mut String, tag: &str, labels: &[String]) {
    for (i, l) in labels.iter().enumerate() {
        if *l != i.to_string() {
            let _ = writeln!(out, "{tag} {i} {l}");
        }
    }
}

pub fn parse_problem(text: &str) -> Result<ProblemGraph> {
    let mut recs = records(text);
    let Some((hline, head)) = recs.next() else {
        return parse_err(1, "empty graph file");
    };
    let counts = header(hline, &head, "graph", 2)?;
    let (nv, ne) = (counts[0], counts[1]);
    let mut labels = default_labels(nv);
    let mut edges = Vec::new();
    for (line, toks) in recs {
        match toks[0] {
            "e" => {
                arity(line, &toks, 3)?;
                edges.push((line, index(line, toks[1], nv)?, index(line, toks[2], nv)?));
            }
            "v" => set_label(line, &mut labels, &toks)?,
            other => return parse_err(line, format!("unknown record `{other}`")),
        }
    }
    let mut g = located(hline, ProblemGraph::new(labels))?;
    for (line, u, v) in edges {
        located(line, g.add_edge(u, v))?;
    }
    if g.num_edges() != ne {
        return parse_err(
            hline,
            format!(
                "header declares {ne} edges, file has {} distinct",
                g.num_edges()
            ),
        );
    }
    Ok(g)
}

pub fn format_problem(g: &ProblemGraph) -> String {
    let mut out = format!("p graph {} {}\n", g.num_vertices(), g.num_edges());
    write_labels(&mut out, "v", g.labels());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// QUBO with its variable labels.
pub fn parse_qubo<T: Scalar + FromStr>(text: &str) -> Result<(QuboMatrix<T>, Vec<String>)> {
    let mut recs = records(text);
    let Some((line, head)) = recs.next() else {
        return parse_err(1, "empty QUBO file");
    };
    let n = header(line, &head, "qubo", 1)?[0];
    let mut q = QuboMatrix::new(n);
    let mut labels = default_labels(n);
    for (line, toks) in recs {
        match toks[0] {
            "q" => {
                arity(line, &toks, 4)?;
                let (i, j) = (index(line, toks[1], n)?, index(line, toks[2], n)?);
                if i > j {
                    return parse_err(line, format!("entry ({i},{j}) below the diagonal"));
                }
                q.add(i, j, num(line, toks[3], "coefficient")?)?;
            }
            "l" => set_label(line, &mut labels, &toks)?,
            "o" => {
                arity(line, &toks, 2)?;
                q.set_offset(q.offset() + num(line, toks[1], "offset")?);
            }
            other => return parse_err(line, format!("unknown record `{other}`")),
        }
    }
    Ok((q, labels))
}

pub fn format_qubo<T: Scalar>(q: &QuboMatrix<T>, labels: &[String]) -> String {
    let mut out = format!("p qubo {}\n", q.dim());
    write_labels(&mut out, "l", labels);
    if !q.offset().is_zero() {
        let _ = writeln!(out, "o {}", q.offset());
    }
    for ((i, j), c) in q.iter() {
        let _ = writeln!(out, "q {i} {j} {c}");
    }
    out
}

/// Ising model with labels and constant offset.
pub fn parse_ising<T: Scalar + FromStr>(text: &str) -> Result<(IsingModel<T>, Vec<String>, T)> {
    let mut recs = records(text);
    let Some((line, head)) = recs.next() else {
        return parse_err(1, "empty Ising file");
    };
    let n = header(line, &head, "ising", 1)?[0];
    let mut model = IsingModel::new(n);
    let mut labels = default_labels(n);
    let mut offset = T::zero();
    for (line, toks) in recs {
        match toks[0] {
            "h" => {
                arity(line, &toks, 3)?;
                model.add_field(index(line, toks[1], n)?, num(line, toks[2], "field")?)?;
            }
            "j" => {
                arity(line, &toks, 4)?;
                let (i, k) = (index(line, toks[1], n)?, index(line, toks[2], n)?);
                if i >= k {
                    return parse_err(line, format!("coupling ({i},{k}) needs i < k"));
                }
                model.add_coupling(i, k, num(line, toks[3], "coupling")?)?;
            }
            "l" => set_label(line, &mut labels, &toks)?,
            "o" => {
                arity(line, &toks, 2)?;
                offset = offset + num(line, toks[1], "offset")?;
            }
            other => return parse_err(line, format!("unknown record `{other}`")),
        }
    }
    Ok((model, labels, offset))
}

pub fn format_ising<T: Scalar>(model: &IsingModel<T>, labels: &[String], offset: T) -> String {
    let mut out = format!("p ising {}\n", model.dim());
    write_labels(&mut out, "l", labels);
    if !offset.is_zero() {
        let _ = writeln!(out, "o {offset}");
    }
    for (i, &h) in model.fields().iter().enumerate() {
        if !h.is_zero() {
            let _ = writeln!(out, "h {i} {h}");
        }
    }
    for ((i, k), c) in model.couplings() {
        let _ = writeln!(out, "j {i} {k} {c}");
    }
    out
}

pub fn read_text(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

/// Write through a sibling temp file and rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // temp files start private; outputs should read like any other file
        let mode = std::fs::metadata(path)
            .map(|m| m.permissions().mode())
            .unwrap_or(0o644);
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(mode))?;
    }
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn read_embedding(path: &Path) -> Result<Embedding> {
    Embedding::from_json(&read_text(path)?)
}

pub fn write_embedding(path: &Path, emb: &Embedding) -> Result<()> {
    let mut text = emb.to_json_pretty();
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
