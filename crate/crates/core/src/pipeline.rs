//! End-to-end composition of the stages.
//!
//! `vertices → Gaussian graph → multi-attributed graph (m = 1) →
//! distances → rescaled similarity graph → MCL → evaluation`.

use std::fmt::Write as _;

use crate::distance::{magdist, DistanceParams, DistanceRecord, PairsMode};
use crate::error::{Error, Result};
use crate::eval::{contingency, tpr_fpr, EvaluationReport, LabeledDataset};
use crate::graph::{MultiAttributedGraph, VertexVector, WeightVector};
use crate::mcl::{mcl_cluster, Clustering, MclParams};
use crate::simgraph::{gaussian_graph, magsim, threshold_graph, to_multiattributed, SimilarityGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub sigma: f64,
    /// Kernel cut-off for the Gaussian graph.
    pub threshold: f64,
    /// Edge weights; `None` means uniform.
    pub alpha: Option<Vec<f64>>,
    pub gamma: f64,
    pub pairs_mode: PairsMode,
    /// Similarity cut applied to the rescaled graph before clustering.
    pub min_sim: f64,
    pub mcl: MclParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            sigma: 1.0,
            threshold: 0.55,
            alpha: None,
            gamma: 1.0,
            pairs_mode: PairsMode::AllPairs,
            min_sim: 0.0,
            mcl: MclParams::default(),
        }
    }
}

impl PipelineConfig {
    /// Distance parameters for a graph with edge dimension `m`.
    pub fn distance_params(&self, m: usize) -> Result<DistanceParams> {
        let alpha = match &self.alpha {
            Some(a) => {
                if m > 0 && a.len() != m {
                    return Err(Error::Dimension(format!(
                        "alpha has {} weights but edges have {m} attributes",
                        a.len()
                    )));
                }
                WeightVector::new(a.clone())?
            }
            None => WeightVector::uniform(m.max(1))?,
        };
        DistanceParams::new(alpha, self.gamma)
    }
}

#[derive(Debug, Clone)]
pub struct GraphClustering {
    pub distances: Vec<DistanceRecord>,
    /// Rescaled similarities after the `min_sim` cut, with every vertex kept.
    pub similarity: SimilarityGraph,
    pub clustering: Clustering,
    pub report: Option<EvaluationReport>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub gaussian: SimilarityGraph,
    pub graph: MultiAttributedGraph,
    pub result: GraphClustering,
}

fn evaluate(clustering: &Clustering, labels: Option<&LabeledDataset>) -> Result<Option<EvaluationReport>> {
    labels
        .map(|l| contingency(clustering, l).and_then(|t| tpr_fpr(&t)))
        .transpose()
}

/// Rescales distances, keeps every graph vertex (isolated ones included)
/// and applies the `min_sim` cut.
pub fn similarity_from_distances(
    graph: &MultiAttributedGraph,
    distances: &[DistanceRecord],
    min_sim: f64,
) -> Result<SimilarityGraph> {
    let rescaled = magsim(distances)?;
    let full = SimilarityGraph::new(
        graph.vertices().iter().map(|v| v.id.clone()).collect(),
        rescaled.edges,
    )?;
    threshold_graph(&full, min_sim)
}

/// Distances, similarities, clusters and (with labels) scores for a
/// multi-attributed graph.
pub fn cluster_graph(
    graph: &MultiAttributedGraph,
    cfg: &PipelineConfig,
    labels: Option<&LabeledDataset>,
) -> Result<GraphClustering> {
    let params = cfg.distance_params(graph.edge_dim())?;
    let distances = magdist(graph, &params, cfg.pairs_mode)?;
    let similarity = similarity_from_distances(graph, &distances, cfg.min_sim)?;
    let clustering = mcl_cluster(&similarity, &cfg.mcl)?;
    let report = evaluate(&clustering, labels)?;
    Ok(GraphClustering {
        distances,
        similarity,
        clustering,
        report,
    })
}

/// Full pipeline from plain vertex vectors.
pub fn run(
    vertices: &[VertexVector],
    labels: Option<&LabeledDataset>,
    cfg: &PipelineConfig,
) -> Result<PipelineOutput> {
    let gaussian = gaussian_graph(vertices, cfg.sigma, cfg.threshold)?;
    let graph = to_multiattributed(&gaussian, vertices)?;
    let result = cluster_graph(&graph, cfg, labels)?;
    Ok(PipelineOutput {
        gaussian,
        graph,
        result,
    })
}

/// One clustering run inside a sweep.
#[derive(Debug, Clone)]
pub struct SweepEntry {
    /// `None` for the Gaussian baseline, which has no distance step.
    pub gamma: Option<f64>,
    pub min_sim: Option<f64>,
    pub inflation: f64,
    pub clusters: usize,
    pub converged: bool,
    pub report: EvaluationReport,
}

impl SweepEntry {
    fn label(&self) -> String {
        match (self.gamma, self.min_sim) {
            (Some(g), Some(t)) => format!("gamma={g} min_sim={t} inflation={}", self.inflation),
            _ => format!("gaussian inflation={}", self.inflation),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub classes: usize,
    /// Rescaled-distance runs.
    pub magsim: Vec<SweepEntry>,
    /// Gaussian graph clustered directly.
    pub gaussian: Vec<SweepEntry>,
}

/// Picks the run with as many clusters as classes if any exist, then the
/// largest `TPR − FPR`, then the smallest FPR. Earlier entries win full ties.
pub fn best_entry(entries: &[SweepEntry], classes: usize) -> Option<&SweepEntry> {
    let key = |e: &SweepEntry| {
        (
            e.clusters == classes,
            e.report.mean_tpr - e.report.mean_fpr,
            -e.report.mean_fpr,
        )
    };
    entries.iter().fold(None, |best: Option<&SweepEntry>, e| match best {
        Some(b) if key(b).partial_cmp(&key(e)) != Some(std::cmp::Ordering::Less) => Some(b),
        _ => Some(e),
    })
}

impl SweepReport {
    pub fn best_magsim(&self) -> Option<&SweepEntry> {
        best_entry(&self.magsim, self.classes)
    }

    pub fn best_gaussian(&self) -> Option<&SweepEntry> {
        best_entry(&self.gaussian, self.classes)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (title, entries, best) in [
            ("rescaled-distance graph", &self.magsim, self.best_magsim()),
            ("gaussian graph", &self.gaussian, self.best_gaussian()),
        ] {
            let _ = writeln!(out, "== {title} ==");
            for e in entries {
                let _ = writeln!(
                    out,
                    "{:<44} clusters={:<3} tpr={:.4} fpr={:.4}{}",
                    e.label(),
                    e.clusters,
                    e.report.mean_tpr,
                    e.report.mean_fpr,
                    if e.converged { "" } else { " (not converged)" }
                );
            }
            if let Some(b) = best {
                let _ = writeln!(out, "best: {}", b.label());
                out.push_str(&b.report.render_text());
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the pipeline over every `(γ, min_sim, inflation)` combination and
/// clusters the Gaussian graph directly at each inflation.
pub fn sweep(
    vertices: &[VertexVector],
    labels: &LabeledDataset,
    base: &PipelineConfig,
    gammas: &[f64],
    min_sims: &[f64],
    inflations: &[f64],
) -> Result<SweepReport> {
    let gaussian = gaussian_graph(vertices, base.sigma, base.threshold)?;
    let graph = to_multiattributed(&gaussian, vertices)?;

    let run_mcl = |g: &SimilarityGraph, inflation: f64, gamma, min_sim| -> Result<SweepEntry> {
        let params = MclParams {
            inflation,
            ..base.mcl.clone()
        };
        let c = mcl_cluster(g, &params)?;
        let report = tpr_fpr(&contingency(&c, labels)?)?;
        Ok(SweepEntry {
            gamma,
            min_sim,
            inflation,
            clusters: c.len(),
            converged: c.converged,
            report,
        })
    };

    let mut magsim_runs = Vec::new();
    for &gamma in gammas {
        let cfg = PipelineConfig {
            gamma,
            ..base.clone()
        };
        let distances = magdist(&graph, &cfg.distance_params(1)?, cfg.pairs_mode)?;
        for &min_sim in min_sims {
            let rescaled = similarity_from_distances(&graph, &distances, min_sim)?;
            for &inflation in inflations {
                magsim_runs.push(run_mcl(&rescaled, inflation, Some(gamma), Some(min_sim))?);
            }
        }
    }
    let gaussian_runs = inflations
        .iter()
        .map(|&inflation| run_mcl(&gaussian, inflation, None, None))
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepReport {
        classes: labels.classes().len(),
        magsim: magsim_runs,
        gaussian: gaussian_runs,
    })
}
