//! Similarity graphs: rescaled distances, Gaussian-kernel thresholding and
//! k-nearest-neighbour graphs.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::distance::DistanceRecord;
use crate::error::{Error, Result};
use crate::graph::{canonical_pair, EdgeVector, MultiAttributedGraph, VertexVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityEdge {
    pub i: String,
    pub j: String,
    pub sim: f64,
}

impl SimilarityEdge {
    /// Canonicalizes the endpoint order and checks `sim ∈ [0, 1]`.
    pub fn new(a: impl Into<String>, b: impl Into<String>, sim: f64) -> Result<Self> {
        let (a, b) = (a.into(), b.into());
        if a == b {
            return Err(Error::Data(format!("self-loop on vertex `{a}`")));
        }
        if !(0.0..=1.0).contains(&sim) {
            return Err(Error::Data(format!("similarity {sim} for ({a}, {b}) is outside [0, 1]")));
        }
        let (i, j) = if a <= b { (a, b) } else { (b, a) };
        Ok(Self { i, j, sim })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<SimilarityEdge>,
    /// Minimum similarity retained, when the graph was thresholded.
    pub threshold: Option<f64>,
}

impl SimilarityGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<SimilarityEdge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(vertices.len());
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(Error::Data(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut pairs = HashSet::with_capacity(edges.len());
        for e in &edges {
            for end in [&e.i, &e.j] {
                if !seen.contains(end.as_str()) {
                    return Err(Error::Referential(end.clone()));
                }
            }
            if !pairs.insert(canonical_pair(&e.i, &e.j)) {
                return Err(Error::Data(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
        }
        Ok(Self {
            vertices,
            edges,
            threshold: None,
        })
    }

    /// Builds a graph whose vertex set is exactly the edge endpoints, in
    /// order of first appearance.
    pub fn from_edges(edges: Vec<SimilarityEdge>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut vertices = Vec::new();
        for e in &edges {
            for end in [&e.i, &e.j] {
                if seen.insert(end.clone()) {
                    vertices.push(end.clone());
                }
            }
        }
        Self::new(vertices, edges)
    }
}

/// Rescales distances to similarities, `sim = 1 − Δ / max Δ`.
///
/// Every record becomes an edge, including the `sim = 0` maximizers.
pub fn magsim(distances: &[DistanceRecord]) -> Result<SimilarityGraph> {
    if distances.is_empty() {
        return Err(Error::Parameter("no distance records".into()));
    }
    let mut d_max = 0.0_f64;
    for r in distances {
        if !r.delta.is_finite() || r.delta < 0.0 {
            return Err(Error::Data(format!(
                "distance ({}, {}) = {} must be finite and >= 0",
                r.i, r.j, r.delta
            )));
        }
        d_max = d_max.max(r.delta);
    }
    if d_max == 0.0 {
        return Err(Error::Degenerate("every distance is zero".into()));
    }
    let edges = distances
        .iter()
        .map(|r| SimilarityEdge::new(r.i.clone(), r.j.clone(), 1.0 - r.delta / d_max))
        .collect::<Result<Vec<_>>>()?;
    SimilarityGraph::from_edges(edges)
}

/// Keeps edges with `sim ≥ t`; the vertex set is unchanged.
pub fn threshold_graph(g: &SimilarityGraph, t: f64) -> Result<SimilarityGraph> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("threshold must be in [0, 1], got {t}")));
    }
    Ok(SimilarityGraph {
        vertices: g.vertices.clone(),
        edges: g.edges.iter().filter(|e| e.sim >= t).cloned().collect(),
        threshold: Some(g.threshold.map_or(t, |old| old.max(t))),
    })
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Parameter(format!("sigma must be finite and > 0, got {sigma}")));
    }
    Ok(())
}

fn squared_distance(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `exp(−‖u − v‖² / 2σ²)`.
pub fn gaussian_kernel(u: &[f64], v: &[f64], sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    if u.len() != v.len() {
        return Err(Error::Dimension(format!(
            "vertex vectors have {} and {} attributes",
            u.len(),
            v.len()
        )));
    }
    Ok(kernel_unchecked(u, v, sigma))
}

fn kernel_unchecked(u: &[f64], v: &[f64], sigma: f64) -> f64 {
    (-squared_distance(u, v) / (2.0 * sigma * sigma)).exp()
}

fn check_vertices(vertices: &[VertexVector]) -> Result<()> {
    let n = vertices.first().map_or(0, |v| v.attrs.len());
    let mut ids = HashSet::with_capacity(vertices.len());
    for v in vertices {
        if v.attrs.len() != n {
            return Err(Error::Dimension(format!(
                "vertex `{}` has {} attributes, expected {n}",
                v.id,
                v.attrs.len()
            )));
        }
        if !ids.insert(v.id.as_str()) {
            return Err(Error::Data(format!("duplicate vertex id `{}`", v.id)));
        }
    }
    Ok(())
}

fn sort_canonical(edges: &mut [SimilarityEdge]) {
    edges.sort_by(|a, b| (&a.i, &a.j).cmp(&(&b.i, &b.j)));
}

/// Gaussian-kernel graph: an edge wherever `κ(u, v) ≥ t`, no self-loops.
pub fn gaussian_graph(vertices: &[VertexVector], sigma: f64, t: f64) -> Result<SimilarityGraph> {
    check_sigma(sigma)?;
    if vertices.len() < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 vertices, got {}",
            vertices.len()
        )));
    }
    if t.is_nan() {
        return Err(Error::Parameter("threshold is NaN".into()));
    }
    check_vertices(vertices)?;
    let mut edges: Vec<SimilarityEdge> = (0..vertices.len())
        .into_par_iter()
        .flat_map_iter(|a| {
            let u = &vertices[a];
            vertices[a + 1..].iter().filter_map(move |v| {
                let k = kernel_unchecked(&u.attrs, &v.attrs, sigma);
                (k >= t).then(|| {
                    let (i, j) = canonical_pair(&u.id, &v.id);
                    SimilarityEdge {
                        i: i.to_owned(),
                        j: j.to_owned(),
                        sim: k,
                    }
                })
            })
        })
        .collect();
    sort_canonical(&mut edges);
    let mut g = SimilarityGraph::new(vertices.iter().map(|v| v.id.clone()).collect(), edges)?;
    g.threshold = Some(t);
    Ok(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KnnMode {
    /// Edge if either endpoint lists the other among its k nearest.
    #[default]
    Union,
    /// Edge only if both endpoints list each other.
    Mutual,
}

/// k-nearest-neighbour graph ranked by Gaussian kernel, weighted by it.
///
/// Ties at the k-th neighbour go to the lexicographically smaller id.
pub fn knn_graph(
    vertices: &[VertexVector],
    k: usize,
    sigma: f64,
    mode: KnnMode,
) -> Result<SimilarityGraph> {
    check_sigma(sigma)?;
    if k == 0 || k >= vertices.len() {
        return Err(Error::Parameter(format!(
            "k must be in [1, {}), got {k}",
            vertices.len()
        )));
    }
    check_vertices(vertices)?;

    let neighbours: Vec<Vec<(usize, f64)>> = vertices
        .par_iter()
        .enumerate()
        .map(|(a, u)| {
            let mut cand: Vec<(usize, f64)> = vertices
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(b, v)| (b, kernel_unchecked(&u.attrs, &v.attrs, sigma)))
                .collect();
            cand.sort_by(|x, y| {
                y.1.total_cmp(&x.1)
                    .then_with(|| vertices[x.0].id.cmp(&vertices[y.0].id))
            });
            cand.truncate(k);
            cand
        })
        .collect();

    let mut count: HashMap<(usize, usize), (u8, f64)> = HashMap::new();
    for (a, list) in neighbours.iter().enumerate() {
        for &(b, sim) in list {
            let entry = count.entry((a.min(b), a.max(b))).or_insert((0, sim));
            entry.0 += 1;
        }
    }
    let needed = match mode {
        KnnMode::Union => 1,
        KnnMode::Mutual => 2,
    };
    let mut edges: Vec<SimilarityEdge> = count
        .into_iter()
        .filter(|(_, (c, _))| *c >= needed)
        .map(|((a, b), (_, sim))| {
            let (i, j) = canonical_pair(&vertices[a].id, &vertices[b].id);
            SimilarityEdge {
                i: i.to_owned(),
                j: j.to_owned(),
                sim,
            }
        })
        .collect();
    sort_canonical(&mut edges);
    SimilarityGraph::new(vertices.iter().map(|v| v.id.clone()).collect(), edges)
}

/// Lifts a similarity graph to a multi-attributed graph with one edge
/// attribute, the similarity.
pub fn to_multiattributed(
    g: &SimilarityGraph,
    vertices: &[VertexVector],
) -> Result<MultiAttributedGraph> {
    let known: HashSet<&str> = vertices.iter().map(|v| v.id.as_str()).collect();
    if let Some(missing) = g.vertices.iter().find(|v| !known.contains(v.as_str())) {
        return Err(Error::Referential(missing.clone()));
    }
    let edges = g
        .edges
        .iter()
        .map(|e| EdgeVector::new(e.i.clone(), e.j.clone(), vec![e.sim]))
        .collect::<Result<Vec<_>>>()?;
    MultiAttributedGraph::with_edge_dim(vertices.to_vec(), edges, 1)
}
