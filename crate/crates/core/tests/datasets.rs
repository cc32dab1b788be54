//! Bundled datasets under `data/` at the workspace root.

use std::path::PathBuf;

use magdist::eval::{contingency, tpr_fpr};
use magdist::io::{open, read_edges, read_labels, read_vertices, CsvKind, CsvSchema};
use magdist::mcl::mcl_cluster;
use magdist::pipeline::{cluster_graph, PipelineConfig};
use magdist::simgraph::gaussian_graph;
use magdist::{LabeledDataset, MclParams, MultiAttributedGraph, VertexVector};

fn data(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(file)
}

fn vertices(file: &str) -> Vec<VertexVector> {
    read_vertices(open(&data(file)).unwrap(), &CsvSchema::new(CsvKind::Vertices)).unwrap()
}

fn labels(file: &str) -> LabeledDataset {
    read_labels(open(&data(file)).unwrap(), &CsvSchema::new(CsvKind::Labels)).unwrap()
}

#[test]
fn iris_gaussian_graph_size() {
    let v = vertices("iris_vertices.csv");
    let g = gaussian_graph(&v, 1.0, 0.55).unwrap();
    assert_eq!(g.vertices.len(), 150);
    assert_eq!(g.edges.len(), 2957);
}

#[test]
fn iris_gaussian_graph_clusters() {
    let v = vertices("iris_vertices.csv");
    let g = gaussian_graph(&v, 1.0, 0.55).unwrap();
    let c = mcl_cluster(&g, &MclParams::default()).unwrap();
    let t = contingency(&c, &labels("iris_labels.csv")).unwrap();
    assert_eq!(t.counts, vec![vec![0, 50, 40], vec![50, 0, 0], vec![0, 0, 10]]);
    let r = tpr_fpr(&t).unwrap();
    assert!((r.mean_tpr - 0.73).abs() <= 0.005 && (r.mean_fpr - 0.13).abs() <= 0.005);
}

#[test]
fn synthetic_groups_are_recovered() {
    let v = vertices("synthetic/vertices.csv");
    let e = read_edges(open(&data("synthetic/edges.csv")).unwrap(), &CsvSchema::new(CsvKind::Edges)).unwrap();
    let g = MultiAttributedGraph::new(v, e).unwrap();
    assert_eq!((g.vertices().len(), g.vertex_dim(), g.edge_dim()), (300, 110, 2));
    let cfg = PipelineConfig {
        alpha: Some(vec![0.5, 0.5]),
        min_sim: 0.3,
        ..PipelineConfig::default()
    };
    let out = cluster_graph(&g, &cfg, Some(&labels("synthetic/labels.csv"))).unwrap();
    let r = out.report.unwrap();
    assert_eq!(out.clustering.len(), 3);
    assert!(r.mean_tpr >= 0.95, "{}", r.render_text());
}
