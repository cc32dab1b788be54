//! Scoring clusters against known classes.
//!
//! Each cluster is matched to its majority class. Within that cluster the
//! matched members are true positives and everyone else a false positive;
//! `TPR = TP / P` and `FPR = FP / N`, where `P` counts the matched class
//! and `N` all other classes.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mcl::Clustering;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    labels: HashMap<String, String>,
    classes: Vec<String>,
}

impl LabeledDataset {
    /// Classes are ordered by first appearance.
    pub fn new(rows: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut labels = HashMap::new();
        let mut classes = Vec::new();
        let mut seen = HashSet::new();
        for (id, label) in rows {
            if label.is_empty() {
                return Err(Error::Data(format!("vertex `{id}` has an empty label")));
            }
            if seen.insert(label.clone()) {
                classes.push(label.clone());
            }
            if labels.insert(id.clone(), label).is_some() {
                return Err(Error::Data(format!("vertex `{id}` is labelled twice")));
            }
        }
        Ok(Self { labels, classes })
    }

    pub fn label(&self, id: &str) -> Option<&str> {
        self.labels.get(id).map(String::as_str)
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Cluster-by-class counts.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub classes: Vec<String>,
    /// `counts[c][k]` = members of cluster `c` labelled `classes[k]`.
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(classes: Vec<String>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if let Some(row) = counts.iter().find(|r| r.len() != classes.len()) {
            return Err(Error::Dimension(format!(
                "contingency row has {} entries for {} classes",
                row.len(),
                classes.len()
            )));
        }
        Ok(Self { classes, counts })
    }

    pub fn cluster_sizes(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn class_totals(&self) -> Vec<u64> {
        (0..self.classes.len())
            .map(|k| self.counts.iter().map(|r| r[k]).sum())
            .collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterScore {
    /// Index into the table's classes.
    pub matched_class: usize,
    pub tp: u64,
    pub fp: u64,
    pub p: u64,
    pub n: u64,
    pub tpr: f64,
    pub fpr: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub table: ContingencyTable,
    pub per_cluster: Vec<ClusterScore>,
    pub mean_tpr: f64,
    pub mean_fpr: f64,
}

/// Counts cluster members per class.
pub fn contingency(clustering: &Clustering, dataset: &LabeledDataset) -> Result<ContingencyTable> {
    let col: HashMap<&str, usize> = dataset
        .classes
        .iter()
        .enumerate()
        .map(|(k, c)| (c.as_str(), k))
        .collect();
    let counts = clustering
        .clusters()
        .iter()
        .map(|members| {
            let mut row = vec![0u64; dataset.classes.len()];
            for id in members {
                let label = dataset
                    .label(id)
                    .ok_or_else(|| Error::Data(format!("vertex `{id}` has no label")))?;
                row[col[label]] += 1;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    ContingencyTable::new(dataset.classes.clone(), counts)
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Per-cluster and mean TPR/FPR under majority-class matching.
///
/// Ties for the majority go to the earlier class. `P` and `N` are taken
/// from the table's class totals.
pub fn tpr_fpr(table: &ContingencyTable) -> Result<EvaluationReport> {
    if table.counts.is_empty() || table.classes.is_empty() {
        return Err(Error::Parameter("empty contingency table".into()));
    }
    let totals = table.class_totals();
    let grand = table.total();
    let per_cluster: Vec<ClusterScore> = table
        .counts
        .iter()
        .map(|row| {
            let matched = row
                .iter()
                .enumerate()
                .fold(0, |best, (k, &c)| if c > row[best] { k } else { best });
            let tp = row[matched];
            let fp = row.iter().sum::<u64>() - tp;
            let p = totals[matched];
            let n = grand - p;
            ClusterScore {
                matched_class: matched,
                tp,
                fp,
                p,
                n,
                tpr: ratio(tp, p),
                fpr: ratio(fp, n),
            }
        })
        .collect();
    let k = per_cluster.len() as f64;
    let mean_tpr = per_cluster.iter().map(|s| s.tpr).sum::<f64>() / k;
    let mean_fpr = per_cluster.iter().map(|s| s.fpr).sum::<f64>() / k;
    Ok(EvaluationReport {
        table: table.clone(),
        per_cluster,
        mean_tpr,
        mean_fpr,
    })
}

impl EvaluationReport {
    /// Plain-text table with full-precision and two-decimal rates.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let classes = &self.table.classes;
        let width = classes.iter().map(String::len).max().unwrap_or(0).max(5);
        let _ = write!(out, "{:<8}", "cluster");
        for c in classes {
            let _ = write!(out, " {c:>width$}");
        }
        let _ = writeln!(out, "  {:<width$} {:>6} {:>6}  {:>20} {:>20}", "match", "TPR", "FPR", "TPR (full)", "FPR (full)");
        for (k, (row, s)) in self.table.counts.iter().zip(&self.per_cluster).enumerate() {
            let _ = write!(out, "{:<8}", format!("C{}", k + 1));
            for c in row {
                let _ = write!(out, " {c:>width$}");
            }
            let _ = writeln!(
                out,
                "  {:<width$} {:>6.2} {:>6.2}  {:>20} {:>20}",
                classes[s.matched_class], s.tpr, s.fpr, s.tpr, s.fpr
            );
        }
        let pad = 8 + classes.len() * (width + 1);
        let _ = writeln!(
            out,
            "{:<pad$}  {:<width$} {:>6.2} {:>6.2}  {:>20} {:>20}",
            "average", "", self.mean_tpr, self.mean_fpr, self.mean_tpr, self.mean_fpr
        );
        out
    }
}
