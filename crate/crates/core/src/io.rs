//! CSV files exchanged between pipeline stages.
//!
//! | kind       | row                  | header written       |
//! |------------|----------------------|----------------------|
//! | vertices   | `id,a1,...,an`       | `id,x1,...,xn`       |
//! | edges      | `src,dst,e1,...,em`  | `src,dst,e1,...,em`  |
//! | distances  | `i,j,delta`          | `i,j,delta`          |
//! | similarity | `i,j,sim`            | `i,j,sim`            |
//! | labels     | `id,label`           | `id,label`           |
//! | clusters   | `id,cluster`         | `id,cluster`         |
//!
//! Reals are written in the shortest form that parses back to the same
//! 64-bit value. Output is UTF-8 with LF line endings and no BOM; input may
//! use CRLF and may start with a BOM.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::distance::DistanceRecord;
use crate::error::{Error, Result};
use crate::eval::{EvaluationReport, LabeledDataset};
use crate::graph::{canonical_pair, EdgeVector, VertexVector};
use crate::mcl::Clustering;
use crate::simgraph::{SimilarityEdge, SimilarityGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    Vertices,
    Edges,
    Distances,
    Similarity,
    Labels,
    Clusters,
    /// Raw `a1,...,an,label` rows without ids.
    LabeledRows,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvSchema {
    pub kind: CsvKind,
    /// `None` detects a header from the first row.
    pub has_header: Option<bool>,
    pub delimiter: u8,
}

impl CsvSchema {
    pub fn new(kind: CsvKind) -> Self {
        Self {
            kind,
            has_header: None,
            delimiter: b',',
        }
    }

    pub fn with_delimiter(self, delimiter: char) -> Result<Self> {
        if !delimiter.is_ascii() {
            return Err(Error::Parameter(format!("delimiter `{delimiter}` is not ASCII")));
        }
        Ok(Self {
            delimiter: delimiter as u8,
            ..self
        })
    }

    pub fn with_header(self, has_header: bool) -> Self {
        Self {
            has_header: Some(has_header),
            ..self
        }
    }
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })
}

/// Data rows with their 1-based line numbers, header already dropped.
fn rows<R: Read>(
    input: R,
    schema: &CsvSchema,
    is_header: impl Fn(&csv::StringRecord) -> bool,
) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .delimiter(schema.delimiter)
        .from_reader(input);
    let mut out = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(k as u64 + 1, |p| p.line());
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        if k == 0 && schema.has_header.unwrap_or_else(|| is_header(&rec)) {
            continue;
        }
        out.push((line, rec));
    }
    Ok(out)
}

fn parse_real(field: &str, line: u64) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::parse(line, format!("`{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(line, format!("`{field}` is not a finite number")));
    }
    Ok(v)
}

fn any_non_numeric(rec: &csv::StringRecord, skip: usize) -> bool {
    rec.iter().skip(skip).any(|f| f.parse::<f64>().is_err())
}

fn expect_fields(rec: &csv::StringRecord, line: u64, want: usize, what: &str) -> Result<()> {
    if rec.len() != want {
        return Err(Error::parse(
            line,
            format!("expected {want} fields ({what}), found {}", rec.len()),
        ));
    }
    Ok(())
}

fn writer<W: Write>(out: W, delimiter: u8) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .delimiter(delimiter)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn finish<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner()
        .map_err(|e| Error::Io {
            path: Default::default(),
            source: std::io::Error::new(e.error().kind(), e.error().to_string()),
        })?
        .flush()
        .map_err(|source| Error::Io {
            path: Default::default(),
            source,
        })
}

/// Vertex rows; the attribute count is taken from the first data row.
pub fn read_vertices<R: Read>(input: R, schema: &CsvSchema) -> Result<Vec<VertexVector>> {
    let mut n = None;
    let mut ids = HashSet::new();
    let mut out = Vec::new();
    for (line, rec) in rows(input, schema, |r| r.len() < 2 || any_non_numeric(r, 1))? {
        if rec.len() < 2 {
            return Err(Error::parse(line, "expected an id followed by at least one attribute"));
        }
        let dim = rec.len() - 1;
        if *n.get_or_insert(dim) != dim {
            return Err(Error::parse(
                line,
                format!("expected {} attributes, found {dim}", n.unwrap_or(dim)),
            ));
        }
        let attrs = rec
            .iter()
            .skip(1)
            .map(|f| parse_real(f, line))
            .collect::<Result<Vec<_>>>()?;
        let id = rec[0].to_owned();
        if !ids.insert(id.clone()) {
            return Err(Error::Data(format!("duplicate vertex id `{id}`")).at_line(line));
        }
        out.push(VertexVector { id, attrs });
    }
    Ok(out)
}

pub fn write_vertices<W: Write>(out: W, vertices: &[VertexVector]) -> Result<()> {
    let mut w = writer(out, b',');
    let n = vertices.first().map_or(0, |v| v.attrs.len());
    let mut header = vec!["id".to_owned()];
    header.extend((1..=n).map(|k| format!("x{k}")));
    w.write_record(&header)?;
    for v in vertices {
        let mut row = vec![v.id.clone()];
        row.extend(v.attrs.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Edge rows, canonicalized; the attribute count comes from the first row.
pub fn read_edges<R: Read>(input: R, schema: &CsvSchema) -> Result<Vec<EdgeVector>> {
    let mut m = None;
    let mut pairs = HashSet::new();
    let mut out = Vec::new();
    for (line, rec) in rows(input, schema, |r| r.len() < 3 || any_non_numeric(r, 2))? {
        if rec.len() < 3 {
            return Err(Error::parse(line, "expected two ids followed by at least one attribute"));
        }
        let dim = rec.len() - 2;
        if *m.get_or_insert(dim) != dim {
            return Err(Error::parse(
                line,
                format!("expected {} edge attributes, found {dim}", m.unwrap_or(dim)),
            ));
        }
        let attrs = rec
            .iter()
            .skip(2)
            .map(|f| parse_real(f, line))
            .collect::<Result<Vec<_>>>()?;
        let edge = EdgeVector::new(&rec[0], &rec[1], attrs).map_err(|e| e.at_line(line))?;
        if !pairs.insert((edge.src().to_owned(), edge.dst().to_owned())) {
            return Err(Error::Data(format!(
                "duplicate edge ({}, {})",
                edge.src(),
                edge.dst()
            ))
            .at_line(line));
        }
        out.push(edge);
    }
    Ok(out)
}

pub fn write_edges<W: Write>(out: W, edges: &[EdgeVector]) -> Result<()> {
    let mut w = writer(out, b',');
    let m = edges.first().map_or(0, |e| e.attrs.len());
    let mut header = vec!["src".to_owned(), "dst".to_owned()];
    header.extend((1..=m).map(|k| format!("e{k}")));
    w.write_record(&header)?;
    for e in edges {
        let mut row = vec![e.src().to_owned(), e.dst().to_owned()];
        row.extend(e.attrs.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    finish(w)
}

fn read_triples<R: Read>(
    input: R,
    schema: &CsvSchema,
    what: &str,
) -> Result<Vec<(u64, String, String, f64)>> {
    rows(input, schema, |r| any_non_numeric(r, 2))?
        .into_iter()
        .map(|(line, rec)| {
            expect_fields(&rec, line, 3, what)?;
            let value = parse_real(&rec[2], line)?;
            if rec[0] == rec[1] {
                return Err(Error::Data(format!("self-loop on vertex `{}`", &rec[0])).at_line(line));
            }
            let (i, j) = canonical_pair(&rec[0], &rec[1]);
            Ok((line, i.to_owned(), j.to_owned(), value))
        })
        .collect()
}

pub fn read_distances<R: Read>(input: R, schema: &CsvSchema) -> Result<Vec<DistanceRecord>> {
    read_triples(input, schema, "i,j,delta")?
        .into_iter()
        .map(|(line, i, j, delta)| {
            if delta < 0.0 {
                return Err(Error::Data(format!("negative distance {delta}")).at_line(line));
            }
            Ok(DistanceRecord { i, j, delta })
        })
        .collect()
}

pub fn write_distances<W: Write>(out: W, records: &[DistanceRecord]) -> Result<()> {
    let mut w = writer(out, b',');
    w.write_record(["i", "j", "delta"])?;
    for r in records {
        w.write_record([r.i.as_str(), r.j.as_str(), &r.delta.to_string()])?;
    }
    finish(w)
}

/// Similarity edges; the vertex set is the set of endpoints.
pub fn read_similarity<R: Read>(input: R, schema: &CsvSchema) -> Result<SimilarityGraph> {
    let edges = read_triples(input, schema, "i,j,sim")?
        .into_iter()
        .map(|(line, i, j, sim)| SimilarityEdge::new(i, j, sim).map_err(|e| e.at_line(line)))
        .collect::<Result<Vec<_>>>()?;
    SimilarityGraph::from_edges(edges)
}

pub fn write_similarity<W: Write>(out: W, g: &SimilarityGraph) -> Result<()> {
    let mut w = writer(out, b',');
    w.write_record(["i", "j", "sim"])?;
    for e in &g.edges {
        w.write_record([e.i.as_str(), e.j.as_str(), &e.sim.to_string()])?;
    }
    finish(w)
}

/// `id,label` rows. In auto mode a first row reading `id,label` is the header.
pub fn read_labels<R: Read>(input: R, schema: &CsvSchema) -> Result<LabeledDataset> {
    let is_header = |r: &csv::StringRecord| {
        r.len() == 2 && r[0].eq_ignore_ascii_case("id") && r[1].eq_ignore_ascii_case("label")
    };
    let mut pairs = Vec::new();
    let mut seen = HashSet::new();
    for (line, rec) in rows(input, schema, is_header)? {
        expect_fields(&rec, line, 2, "id,label")?;
        if rec[1].is_empty() {
            return Err(Error::Data(format!("vertex `{}` has an empty label", &rec[0])).at_line(line));
        }
        if !seen.insert(rec[0].to_owned()) {
            return Err(Error::Data(format!("vertex `{}` is labelled twice", &rec[0])).at_line(line));
        }
        pairs.push((rec[0].to_owned(), rec[1].to_owned()));
    }
    LabeledDataset::new(pairs)
}

/// Writes labels in the given vertex order.
pub fn write_labels<W: Write>(out: W, ids: &[String], labels: &LabeledDataset) -> Result<()> {
    let mut w = writer(out, b',');
    w.write_record(["id", "label"])?;
    for id in ids {
        let label = labels
            .label(id)
            .ok_or_else(|| Error::Data(format!("vertex `{id}` has no label")))?;
        w.write_record([id.as_str(), label])?;
    }
    finish(w)
}

pub fn read_clusters<R: Read>(input: R, schema: &CsvSchema) -> Result<Clustering> {
    let is_header = |r: &csv::StringRecord| r.len() == 2 && r[1].parse::<i64>().is_err();
    let mut seen = HashSet::new();
    let mut pairs = Vec::new();
    for (line, rec) in rows(input, schema, is_header)? {
        expect_fields(&rec, line, 2, "id,cluster")?;
        let cluster: i64 = rec[1]
            .parse()
            .map_err(|_| Error::parse(line, format!("`{}` is not an integer cluster id", &rec[1])))?;
        if !seen.insert(rec[0].to_owned()) {
            return Err(Error::Data(format!("vertex `{}` assigned twice", &rec[0])).at_line(line));
        }
        pairs.push((rec[0].to_owned(), cluster));
    }
    Clustering::from_assignment(pairs)
}

pub fn write_clusters<W: Write>(out: W, clustering: &Clustering) -> Result<()> {
    let mut w = writer(out, b',');
    w.write_record(["id", "cluster"])?;
    for (id, c) in clustering.rows() {
        w.write_record([id, &c.to_string()])?;
    }
    finish(w)
}

/// Per-cluster counts and rates, then an `average` row.
pub fn write_report<W: Write>(out: W, report: &EvaluationReport) -> Result<()> {
    let mut w = writer(out, b',');
    let classes = &report.table.classes;
    let mut header = vec!["cluster".to_owned()];
    header.extend(classes.iter().cloned());
    header.extend(["matched_class", "tp", "fp", "p", "n", "tpr", "fpr"].map(String::from));
    w.write_record(&header)?;
    for (k, (row, s)) in report.table.counts.iter().zip(&report.per_cluster).enumerate() {
        let mut rec = vec![format!("C{}", k + 1)];
        rec.extend(row.iter().map(u64::to_string));
        rec.push(classes[s.matched_class].clone());
        rec.extend([s.tp, s.fp, s.p, s.n].map(|x| x.to_string()));
        rec.push(s.tpr.to_string());
        rec.push(s.fpr.to_string());
        w.write_record(&rec)?;
    }
    let mut avg = vec!["average".to_owned()];
    avg.extend(std::iter::repeat_n(String::new(), classes.len() + 5));
    avg.push(report.mean_tpr.to_string());
    avg.push(report.mean_fpr.to_string());
    w.write_record(&avg)?;
    finish(w)
}

/// Raw `a1,...,an,label` rows. Vertices get ids `{id_prefix}1`, `{id_prefix}2`,
/// ... in row order. In auto mode a first row with a non-numeric attribute is
/// the header.
pub fn read_labeled_rows<R: Read>(
    input: R,
    schema: &CsvSchema,
    id_prefix: &str,
) -> Result<(Vec<VertexVector>, LabeledDataset)> {
    let is_header = |r: &csv::StringRecord| r.iter().take(r.len().saturating_sub(1)).any(|f| f.parse::<f64>().is_err());
    let mut n = None;
    let mut vertices = Vec::new();
    let mut pairs = Vec::new();
    for (line, rec) in rows(input, schema, is_header)? {
        if rec.len() < 2 {
            return Err(Error::parse(line, "expected at least one attribute followed by a label"));
        }
        let dim = rec.len() - 1;
        if *n.get_or_insert(dim) != dim {
            return Err(Error::parse(
                line,
                format!("expected {} attributes, found {dim}", n.unwrap_or(dim)),
            ));
        }
        let attrs = rec
            .iter()
            .take(dim)
            .map(|f| parse_real(f, line))
            .collect::<Result<Vec<_>>>()?;
        let label = &rec[dim];
        if label.is_empty() {
            return Err(Error::Data("empty label".into()).at_line(line));
        }
        let id = format!("{id_prefix}{}", vertices.len() + 1);
        pairs.push((id.clone(), label.to_owned()));
        vertices.push(VertexVector { id, attrs });
    }
    Ok((vertices, LabeledDataset::new(pairs)?))
}
