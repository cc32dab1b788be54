//! Markov Clustering (MCL) on a dense column-stochastic matrix.
//!
//! Each iteration expands the flow (matrix power), inflates it (entrywise
//! power followed by column renormalization) and prunes entries below
//! `prune_threshold`. At the fixed point every column holds the flow of one
//! vertex into its attractors; attractor systems become the clusters.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simgraph::SimilarityGraph;

const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MclParams {
    /// Matrix power per iteration, ≥ 2.
    pub expansion: u32,
    /// Entrywise power, > 1.
    pub inflation: f64,
    /// Entries below this are zeroed after inflation.
    pub prune_threshold: f64,
    pub max_iters: usize,
    /// Stop when no entry moves by more than this between iterations.
    pub convergence_eps: f64,
    /// Add a unit-weight loop on every vertex before normalizing.
    pub add_self_loops: bool,
}

impl Default for MclParams {
    fn default() -> Self {
        Self {
            expansion: 2,
            inflation: 2.0,
            prune_threshold: 1e-5,
            max_iters: 100,
            convergence_eps: 1e-6,
            add_self_loops: true,
        }
    }
}

impl MclParams {
    pub fn with_inflation(inflation: f64) -> Self {
        Self {
            inflation,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.expansion < 2 {
            return Err(Error::Parameter(format!("expansion must be >= 2, got {}", self.expansion)));
        }
        if !(self.inflation > 1.0) || !self.inflation.is_finite() {
            return Err(Error::Parameter(format!("inflation must be > 1, got {}", self.inflation)));
        }
        if !(self.prune_threshold >= 0.0) || !self.prune_threshold.is_finite() {
            return Err(Error::Parameter(format!(
                "prune threshold must be >= 0, got {}",
                self.prune_threshold
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be positive".into()));
        }
        if !(self.convergence_eps > 0.0) {
            return Err(Error::Parameter(format!(
                "convergence eps must be > 0, got {}",
                self.convergence_eps
            )));
        }
        Ok(())
    }
}

/// A partition of vertex ids. Cluster ids run from 1 to `clusters.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    clusters: Vec<Vec<String>>,
    assignment: HashMap<String, usize>,
    /// False when MCL stopped at `max_iters` before converging.
    pub converged: bool,
    pub iterations: usize,
}

impl Clustering {
    /// Clusters in the given order; members are sorted.
    pub fn from_groups(groups: Vec<Vec<String>>) -> Result<Self> {
        let mut assignment = HashMap::new();
        let mut clusters = Vec::with_capacity(groups.len());
        for (k, mut members) in groups.into_iter().filter(|g| !g.is_empty()).enumerate() {
            members.sort();
            for id in &members {
                if assignment.insert(id.clone(), k + 1).is_some() {
                    return Err(Error::Data(format!("vertex `{id}` is in two clusters")));
                }
            }
            clusters.push(members);
        }
        Ok(Self {
            clusters,
            assignment,
            converged: true,
            iterations: 0,
        })
    }

    /// From `(vertex, cluster label)` pairs. Clusters are ordered by label and
    /// renumbered `1..=k`.
    pub fn from_assignment(pairs: impl IntoIterator<Item = (String, i64)>) -> Result<Self> {
        let mut by_label: std::collections::BTreeMap<i64, Vec<String>> = Default::default();
        for (id, label) in pairs {
            by_label.entry(label).or_default().push(id);
        }
        Self::from_groups(by_label.into_values().collect())
    }

    /// Orders clusters by descending size, ties by smallest member id.
    fn canonical(mut groups: Vec<Vec<String>>) -> Result<Self> {
        for g in &mut groups {
            g.sort();
        }
        groups.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a[0].cmp(&b[0])));
        Self::from_groups(groups)
    }

    pub fn clusters(&self) -> &[Vec<String>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// 1-based cluster id of a vertex.
    pub fn cluster_of(&self, id: &str) -> Option<usize> {
        self.assignment.get(id).copied()
    }

    /// `(vertex, cluster id)` rows, by cluster then vertex id.
    pub fn rows(&self) -> impl Iterator<Item = (&str, usize)> {
        self.clusters
            .iter()
            .enumerate()
            .flat_map(|(k, ms)| ms.iter().map(move |m| (m.as_str(), k + 1)))
    }
}

/// Square matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.n + row]
    }

    fn set(&mut self, row: usize, col: usize, v: f64) {
        self.data[col * self.n + row] = v;
    }

    fn columns_mut(&mut self) -> rayon::slice::ChunksMut<'_, f64> {
        self.data.par_chunks_mut(self.n)
    }

    fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.n..(col + 1) * self.n]
    }

    /// `self · rhs`; each output column is summed sequentially, so the
    /// result does not depend on the thread count.
    fn mul(&self, rhs: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = Matrix::zeros(n);
        out.columns_mut().enumerate().for_each(|(j, col)| {
            for (k, &b) in rhs.column(j).iter().enumerate() {
                if b != 0.0 {
                    for (c, &a) in col.iter_mut().zip(self.column(k)) {
                        *c += a * b;
                    }
                }
            }
        });
        out
    }

    fn normalize_columns(&mut self) {
        self.columns_mut().for_each(|col| {
            let s: f64 = col.iter().sum();
            if s > 0.0 {
                col.iter_mut().for_each(|x| *x /= s);
            }
        });
    }

    fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    fn is_column_stochastic(&self) -> bool {
        (0..self.n).all(|j| (self.column(j).iter().sum::<f64>() - 1.0).abs() <= STOCHASTIC_TOLERANCE)
    }
}

fn inflate_and_prune(m: &mut Matrix, inflation: f64, prune: f64) {
    m.columns_mut().for_each(|col| {
        col.iter_mut().for_each(|x| *x = x.powf(inflation));
        let s: f64 = col.iter().sum();
        col.iter_mut().for_each(|x| *x /= s);
        // the column maximum always survives so no column empties out
        let (arg, _) = col
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, &x)| if x > best.1 { (i, x) } else { best });
        for (i, x) in col.iter_mut().enumerate() {
            if i != arg && *x < prune {
                *x = 0.0;
            }
        }
        let s: f64 = col.iter().sum();
        col.iter_mut().for_each(|x| *x /= s);
    });
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Reads clusters off the (near) fixed point.
///
/// Attractors are vertices that keep flow on their own diagonal. Attractors
/// exchanging flow form one system, and every other vertex joins the system
/// of its strongest attractor (ties to the smaller vertex id).
fn extract(m: &Matrix, ids: &[String], prune: f64) -> Vec<Vec<String>> {
    let n = m.n;
    let attractor: Vec<bool> = (0..n).map(|a| m.get(a, a) > prune).collect();
    let mut parent: Vec<usize> = (0..n).collect();

    for a in (0..n).filter(|&a| attractor[a]) {
        for b in (a + 1..n).filter(|&b| attractor[b]) {
            if m.get(a, b) > prune || m.get(b, a) > prune {
                union(&mut parent, a, b);
            }
        }
    }

    let stronger = |i: usize, best: Option<usize>, col: usize| match best {
        None => true,
        Some(b) => {
            let (x, y) = (m.get(i, col), m.get(b, col));
            x > y || (x == y && ids[i] < ids[b])
        }
    };
    for j in (0..n).filter(|&j| !attractor[j]) {
        let mut best = None;
        for i in (0..n).filter(|&i| attractor[i] && m.get(i, j) > prune) {
            if stronger(i, best, j) {
                best = Some(i);
            }
        }
        if best.is_none() {
            for i in (0..n).filter(|&i| m.get(i, j) > 0.0) {
                if stronger(i, best, j) {
                    best = Some(i);
                }
            }
        }
        if let Some(b) = best {
            union(&mut parent, j, b);
        }
    }

    let mut groups: HashMap<usize, Vec<String>> = HashMap::new();
    for (v, id) in ids.iter().enumerate().take(n) {
        let root = find(&mut parent, v);
        groups.entry(root).or_default().push(id.clone());
    }
    groups.into_values().collect()
}

/// Clusters a similarity graph. Isolated vertices become singletons.
///
/// Hitting `max_iters` is not an error; the result carries
/// `converged = false`.
pub fn mcl_cluster(g: &SimilarityGraph, params: &MclParams) -> Result<Clustering> {
    params.validate()?;
    let n = g.vertices.len();
    if n == 0 {
        return Err(Error::Parameter("cannot cluster an empty graph".into()));
    }
    let index: HashMap<&str, usize> = g
        .vertices
        .iter()
        .enumerate()
        .map(|(k, v)| (v.as_str(), k))
        .collect();

    let mut m = Matrix::zeros(n);
    for e in &g.edges {
        if !e.sim.is_finite() || e.sim < 0.0 {
            return Err(Error::Data(format!("edge ({}, {}) has weight {}", e.i, e.j, e.sim)));
        }
        let a = *index.get(e.i.as_str()).ok_or_else(|| Error::Referential(e.i.clone()))?;
        let b = *index.get(e.j.as_str()).ok_or_else(|| Error::Referential(e.j.clone()))?;
        m.set(a, b, e.sim);
        m.set(b, a, e.sim);
    }
    for j in 0..n {
        if params.add_self_loops || m.column(j).iter().all(|&x| x == 0.0) {
            m.set(j, j, 1.0);
        }
    }
    m.normalize_columns();

    let mut converged = false;
    let mut iterations = 0;
    while iterations < params.max_iters {
        let mut next = m.mul(&m);
        for _ in 2..params.expansion {
            next = next.mul(&m);
        }
        inflate_and_prune(&mut next, params.inflation, params.prune_threshold);
        debug_assert!(next.is_column_stochastic(), "MCL matrix lost column-stochasticity");
        let change = next.max_abs_diff(&m);
        m = next;
        iterations += 1;
        if change < params.convergence_eps {
            converged = true;
            break;
        }
    }

    let mut clustering = Clustering::canonical(extract(&m, &g.vertices, params.prune_threshold))?;
    clustering.converged = converged;
    clustering.iterations = iterations;
    Ok(clustering)
}
