//! write → read → write must reproduce every CSV file byte for byte.

use magdist::distance::DistanceRecord;
use magdist::io::{self, CsvKind, CsvSchema};
use magdist::{Clustering, EdgeVector, LabeledDataset, SimilarityEdge, SimilarityGraph, VertexVector};
use proptest::prelude::*;

fn schema(kind: CsvKind) -> CsvSchema {
    CsvSchema::new(kind)
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
    ]
}

fn non_negative() -> impl Strategy<Value = f64> {
    finite().prop_map(f64::abs)
}

#[derive(Debug, Clone)]
struct Fixture {
    vertices: Vec<VertexVector>,
    /// `(a, b)` index pairs with `a < b`.
    pairs: Vec<(usize, usize)>,
    edge_attrs: Vec<Vec<f64>>,
    values: Vec<f64>,
    sims: Vec<f64>,
    labels: Vec<String>,
    cluster_ids: Vec<i64>,
}

fn fixture() -> impl Strategy<Value = Fixture> {
    (1usize..=50, 1usize..=4, 0usize..=3).prop_flat_map(|(n, dim, m)| {
        let ids = proptest::collection::hash_set("[a-z]{1,3}[0-9]{0,2}", n);
        let attrs = proptest::collection::vec(proptest::collection::vec(finite(), dim), n);
        let all_pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
        let pairs = proptest::sample::subsequence(all_pairs.clone(), 0..=all_pairs.len().min(60));
        let per_pair = all_pairs.len().min(60);
        (
            ids,
            attrs,
            pairs,
            proptest::collection::vec(proptest::collection::vec(non_negative(), m.max(1)), per_pair),
            proptest::collection::vec(non_negative(), per_pair),
            proptest::collection::vec(0.0f64..=1.0, per_pair),
            proptest::collection::vec("[A-Z][a-z-]{0,6}", n),
            proptest::collection::vec(-5i64..20, n),
        )
            .prop_map(|(ids, attrs, pairs, edge_attrs, values, sims, labels, cluster_ids)| {
                let mut ids: Vec<String> = ids.into_iter().map(|s| format!("v{s}")).collect();
                ids.sort();
                Fixture {
                    vertices: ids.into_iter().zip(attrs).map(|(id, a)| VertexVector::new(id, a)).collect(),
                    pairs,
                    edge_attrs,
                    values,
                    sims,
                    labels,
                    cluster_ids,
                }
            })
    })
}

impl Fixture {
    fn id(&self, k: usize) -> &str {
        &self.vertices[k].id
    }

    fn edges(&self) -> Vec<EdgeVector> {
        self.pairs
            .iter()
            .zip(&self.edge_attrs)
            .map(|(&(a, b), e)| EdgeVector::new(self.id(b), self.id(a), e.clone()).unwrap())
            .collect()
    }

    fn distances(&self) -> Vec<DistanceRecord> {
        self.pairs
            .iter()
            .zip(&self.values)
            .map(|(&(a, b), &delta)| DistanceRecord {
                i: self.id(a).to_owned(),
                j: self.id(b).to_owned(),
                delta,
            })
            .collect()
    }

    fn similarity(&self) -> SimilarityGraph {
        let edges = self
            .pairs
            .iter()
            .zip(&self.sims)
            .map(|(&(a, b), &s)| SimilarityEdge::new(self.id(a), self.id(b), s).unwrap())
            .collect();
        SimilarityGraph::from_edges(edges).unwrap()
    }

    fn ids(&self) -> Vec<String> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    fn labels(&self) -> LabeledDataset {
        LabeledDataset::new(self.ids().into_iter().zip(self.labels.clone())).unwrap()
    }

    fn clustering(&self) -> Clustering {
        Clustering::from_assignment(self.ids().into_iter().zip(self.cluster_ids.clone())).unwrap()
    }
}

fn bytes(f: impl FnOnce(&mut Vec<u8>) -> magdist::Result<()>) -> Vec<u8> {
    let mut out = Vec::new();
    f(&mut out).unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn vertices_round_trip(fx in fixture()) {
        let first = bytes(|w| io::write_vertices(w, &fx.vertices));
        let back = io::read_vertices(first.as_slice(), &schema(CsvKind::Vertices)).unwrap();
        prop_assert_eq!(&back, &fx.vertices);
        prop_assert_eq!(bytes(|w| io::write_vertices(w, &back)), first);
    }

    #[test]
    fn edges_round_trip(fx in fixture()) {
        let edges = fx.edges();
        let first = bytes(|w| io::write_edges(w, &edges));
        let back = io::read_edges(first.as_slice(), &schema(CsvKind::Edges)).unwrap();
        prop_assert_eq!(&back, &edges);
        prop_assert_eq!(bytes(|w| io::write_edges(w, &back)), first);
    }

    #[test]
    fn distances_round_trip(fx in fixture()) {
        let d = fx.distances();
        let first = bytes(|w| io::write_distances(w, &d));
        let back = io::read_distances(first.as_slice(), &schema(CsvKind::Distances)).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(bytes(|w| io::write_distances(w, &back)), first);
    }

    #[test]
    fn similarity_round_trip(fx in fixture()) {
        let g = fx.similarity();
        let first = bytes(|w| io::write_similarity(w, &g));
        let back = io::read_similarity(first.as_slice(), &schema(CsvKind::Similarity)).unwrap();
        prop_assert_eq!(&back.edges, &g.edges);
        prop_assert_eq!(bytes(|w| io::write_similarity(w, &back)), first);
    }

    #[test]
    fn labels_round_trip(fx in fixture()) {
        let ids = fx.ids();
        let labels = fx.labels();
        let first = bytes(|w| io::write_labels(w, &ids, &labels));
        let back = io::read_labels(first.as_slice(), &schema(CsvKind::Labels)).unwrap();
        prop_assert_eq!(&back, &labels);
        prop_assert_eq!(bytes(|w| io::write_labels(w, &ids, &back)), first);
    }

    #[test]
    fn clusters_round_trip(fx in fixture()) {
        let c = fx.clustering();
        let first = bytes(|w| io::write_clusters(w, &c));
        let back = io::read_clusters(first.as_slice(), &schema(CsvKind::Clusters)).unwrap();
        prop_assert_eq!(back.clusters(), c.clusters());
        prop_assert_eq!(bytes(|w| io::write_clusters(w, &back)), first);
    }
}

#[test]
fn empty_files_round_trip() {
    let e = bytes(|w| io::write_edges(w, &[]));
    assert!(io::read_edges(e.as_slice(), &schema(CsvKind::Edges)).unwrap().is_empty());
    let v = bytes(|w| io::write_vertices(w, &[]));
    assert!(io::read_vertices(v.as_slice(), &schema(CsvKind::Vertices)).unwrap().is_empty());
}
