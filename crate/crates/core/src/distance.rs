//! Edge-weighted Euclidean distance between the vertices of a
//! multi-attributed graph.
//!
//! For a vertex pair `(u, v)` with edge attributes `e`, the aggregate edge
//! weight is `ω = Σ αₖ eₖ`, the shrink factor is `λ = (1 + ω)^-γ`, and the
//! distance is `Δ = √λ · ‖u − v‖₂`. Unlinked pairs have `ω = 0`, so their
//! distance is plain Euclidean.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{MultiAttributedGraph, WeightVector};
use crate::norms::norm_l2;

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceParams {
    alpha: WeightVector,
    gamma: f64,
}

impl DistanceParams {
    pub fn new(alpha: WeightVector, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::Parameter(format!("gamma must be finite and >= 0, got {gamma}")));
        }
        Ok(Self { alpha, gamma })
    }

    /// Uniform `α` over `m` edge attributes and `γ = 1`.
    pub fn uniform(m: usize) -> Result<Self> {
        Self::new(WeightVector::uniform(m)?, 1.0)
    }

    pub fn alpha(&self) -> &WeightVector {
        &self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Distance between two vertices, endpoints in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRecord {
    pub i: String,
    pub j: String,
    pub delta: f64,
}

/// Which vertex pairs [`magdist`] reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairsMode {
    /// Every unordered vertex pair; unlinked pairs use `ω = 0`.
    #[default]
    AllPairs,
    /// Only pairs that have an edge vector.
    EdgeListOnly,
}

/// `ω = Σ αₖ eₖ`.
pub fn aggregate_edge_weight(e: &[f64], alpha: &WeightVector) -> Result<f64> {
    if e.len() != alpha.len() {
        return Err(Error::Dimension(format!(
            "edge vector has {} attributes but alpha has {} weights",
            e.len(),
            alpha.len()
        )));
    }
    Ok(alpha.as_slice().iter().zip(e).map(|(a, x)| a * x).sum())
}

/// `λ = 1 / (1 + ω)^γ`, in `(0, 1]`.
pub fn lambda_factor(omega: f64, gamma: f64) -> Result<f64> {
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::Parameter(format!("omega must be finite and >= 0, got {omega}")));
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Parameter(format!("gamma must be finite and >= 0, got {gamma}")));
    }
    if omega == 0.0 || gamma == 0.0 {
        return Ok(1.0);
    }
    Ok((1.0 + omega).powf(gamma).recip())
}

/// `√λ · ‖u − v‖₂` with `λ` from [`lambda_factor`].
pub fn weighted_distance(u: &[f64], v: &[f64], omega: f64, gamma: f64) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension(format!(
            "vertex vectors have {} and {} attributes",
            u.len(),
            v.len()
        )));
    }
    let lambda = lambda_factor(omega, gamma)?;
    let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    Ok(lambda.sqrt() * norm_l2(&diff)?)
}

/// Distance for every selected vertex pair, sorted by `(i, j)`.
pub fn magdist(
    graph: &MultiAttributedGraph,
    params: &DistanceParams,
    pairs_mode: PairsMode,
) -> Result<Vec<DistanceRecord>> {
    let m = graph.edge_dim();
    if m > 0 && m != params.alpha.len() {
        return Err(Error::Dimension(format!(
            "alpha has {} weights but edges have {m} attributes",
            params.alpha.len()
        )));
    }
    let vertices = graph.vertices();

    let record = |a: usize, b: usize| -> Result<DistanceRecord> {
        let omega = match graph.edge_between(a, b) {
            Some(e) => aggregate_edge_weight(&e.attrs, &params.alpha)?,
            None => 0.0,
        };
        let delta = weighted_distance(&vertices[a].attrs, &vertices[b].attrs, omega, params.gamma)?;
        let (i, j) = crate::graph::canonical_pair(&vertices[a].id, &vertices[b].id);
        Ok(DistanceRecord {
            i: i.to_owned(),
            j: j.to_owned(),
            delta,
        })
    };

    let mut records: Vec<DistanceRecord> = match pairs_mode {
        PairsMode::AllPairs => (0..vertices.len())
            .into_par_iter()
            .map(|a| {
                ((a + 1)..vertices.len())
                    .map(|b| record(a, b))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect(),
        PairsMode::EdgeListOnly => graph
            .edges()
            .par_iter()
            .map(|e| {
                let a = graph
                    .vertex_index(e.src())
                    .ok_or_else(|| Error::Referential(e.src().to_owned()))?;
                let b = graph
                    .vertex_index(e.dst())
                    .ok_or_else(|| Error::Referential(e.dst().to_owned()))?;
                record(a, b)
            })
            .collect::<Result<Vec<_>>>()?,
    };
    records.sort_by(|x, y| (&x.i, &x.j).cmp(&(&y.i, &y.j)));
    Ok(records)
}
