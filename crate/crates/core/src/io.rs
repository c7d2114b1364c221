//! Line-delimited JSON graph files.
//!
//! ```text
//! {"format_version":1,"params":{...},"n":3,"seed":7}
//! {"id":1,"pos":[x,y,z]}              n vertex lines
//! {"src":1,"slot":1,"dst":1}          m*n edge lines, in (src, slot) order
//! {"n":1,"L":6.0,"candidates":0,"denominators":[4.0,5.0]}   optional trace lines
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a file and
//! writing it again reproduces it byte for byte.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{GpmError, Result};
use crate::generator::{EdgeRecord, GpmParams, GraphRecord, TraceRow, VertexId};
use crate::geometry::SpherePoint;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format_version: u32,
    params: GpmParams,
    n: u64,
    seed: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexLine {
    id: VertexId,
    pos: SpherePoint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeLine {
    src: VertexId,
    slot: u32,
    dst: VertexId,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceLine {
    n: u64,
    #[serde(rename = "L")]
    l: f64,
    candidates: u64,
    #[serde(default)]
    denominators: Vec<f64>,
}

/// A graph together with whatever trace rows were stored with it.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphFile {
    pub graph: GraphRecord,
    /// Rows read from a file carry no exact integer breakdown.
    pub trace: Vec<TraceRow>,
}

fn write_line<W: Write, T: Serialize>(out: &mut W, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_graph<W: Write>(out: &mut W, graph: &GraphRecord, trace: &[TraceRow]) -> Result<()> {
    write_line(
        out,
        &Header { format_version: FORMAT_VERSION, params: graph.params.clone(), n: graph.n() as u64, seed: graph.seed },
    )?;
    for (i, pos) in graph.positions.iter().enumerate() {
        write_line(out, &VertexLine { id: i as VertexId + 1, pos: pos.clone() })?;
    }
    for e in &graph.edges {
        write_line(out, &EdgeLine { src: e.source, slot: e.slot, dst: e.target })?;
    }
    for row in trace {
        write_line(
            out,
            &TraceLine { n: row.n, l: row.l, candidates: row.candidates, denominators: row.denominators.clone() },
        )?;
    }
    Ok(())
}

fn parse_line<T: for<'de> Deserialize<'de>>(line: &str, lineno: usize, what: &str) -> Result<T> {
    serde_json::from_str(line)
        .map_err(|e| GpmError::Format { line: lineno, message: format!("bad {what} record: {e}") })
}

fn format_error(line: usize, message: impl Into<String>) -> GpmError {
    GpmError::Format { line, message: message.into() }
}

/// Reads a graph file, validating ids, slots and edge targets. Degrees are
/// recomputed from the edges.
pub fn read_graph<R: BufRead>(input: R) -> Result<GraphFile> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (lineno, first) = match lines.next() {
        Some((no, line)) => (no, line?),
        None => return Err(format_error(1, "empty file")),
    };
    let header: Header = parse_line(&first, lineno, "header")?;
    if header.format_version != FORMAT_VERSION {
        return Err(format_error(1, format!("unsupported format_version {}", header.format_version)));
    }
    header.params.validate().map_err(|e| format_error(1, e.to_string()))?;
    let n = usize::try_from(header.n).map_err(|_| format_error(1, "n too large"))?;
    let m = header.params.m;
    let d = header.params.d;

    let mut positions = Vec::with_capacity(n);
    let mut edges = Vec::with_capacity(n * m);
    let mut trace = Vec::new();
    for (lineno, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if positions.len() < n {
            let v: VertexLine = parse_line(&line, lineno, "vertex")?;
            let expected = positions.len() as VertexId + 1;
            if v.id != expected {
                return Err(format_error(lineno, format!("vertex id {} out of order, expected {expected}", v.id)));
            }
            if v.pos.dim() != d {
                return Err(format_error(
                    lineno,
                    format!("position has {} coordinates, expected {}", v.pos.coords().len(), d + 1),
                ));
            }
            positions.push(v.pos);
        } else if edges.len() < n * m {
            let e: EdgeLine = parse_line(&line, lineno, "edge")?;
            let idx = edges.len();
            let (src, slot) = ((idx / m + 1) as VertexId, (idx % m + 1) as u32);
            if e.src != src || e.slot != slot {
                return Err(format_error(
                    lineno,
                    format!("edge ({}, {}) out of order, expected ({src}, {slot})", e.src, e.slot),
                ));
            }
            if e.dst == 0 || e.dst > e.src {
                return Err(format_error(lineno, format!("edge target {} outside 1..={}", e.dst, e.src)));
            }
            edges.push(EdgeRecord { source: e.src, slot: e.slot, target: e.dst });
        } else {
            let t: TraceLine = parse_line(&line, lineno, "trace")?;
            if t.n == 0 || t.n > header.n {
                return Err(format_error(lineno, format!("trace row for vertex {} outside 1..={}", t.n, header.n)));
            }
            trace.push(TraceRow {
                n: t.n,
                l: t.l,
                candidates: t.candidates,
                denominators: t.denominators,
                exact: None,
            });
        }
    }
    if positions.len() < n {
        return Err(format_error(0, format!("file ends after {} of {n} vertices", positions.len())));
    }
    if edges.len() < n * m {
        return Err(format_error(0, format!("file ends after {} of {} edges", edges.len(), n * m)));
    }
    let graph = GraphRecord::from_parts(header.params, header.seed, positions, edges)?;
    Ok(GraphFile { graph, trace })
}

pub fn write_graph_file(path: &std::path::Path, graph: &GraphRecord, trace: &[TraceRow]) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_graph(&mut out, graph, trace)?;
    out.flush()?;
    Ok(())
}

pub fn read_graph_file(path: &std::path::Path) -> Result<GraphFile> {
    read_graph(std::io::BufReader::new(std::fs::File::open(path)?))
}
