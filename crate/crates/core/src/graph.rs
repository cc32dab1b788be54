//! Multi-attributed graph model.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Tolerance for a weight vector summing to one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Orders two vertex ids so the lexicographically smaller one comes first.
pub fn canonical_pair<'a>(a: &'a str, b: &'a str) -> (&'a str, &'a str) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexVector {
    pub id: String,
    pub attrs: Vec<f64>,
}

impl VertexVector {
    pub fn new(id: impl Into<String>, attrs: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            attrs,
        }
    }
}

/// Attribute vector of an undirected vertex pair.
///
/// Endpoints are stored in canonical order, so `(a, b)` and `(b, a)` build
/// the same value.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeVector {
    src: String,
    dst: String,
    pub attrs: Vec<f64>,
}

impl EdgeVector {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, attrs: Vec<f64>) -> Result<Self> {
        let (src, dst) = (src.into(), dst.into());
        if src == dst {
            return Err(Error::Data(format!("self-loop on vertex `{src}`")));
        }
        if let Some(x) = attrs.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::Data(format!(
                "edge ({src}, {dst}) has attribute {x}; edge attributes must be finite and >= 0"
            )));
        }
        let (src, dst) = if src <= dst { (src, dst) } else { (dst, src) };
        Ok(Self { src, dst, attrs })
    }

    pub fn src(&self) -> &str {
        &self.src
    }

    pub fn dst(&self) -> &str {
        &self.dst
    }
}

/// Non-negative coefficients summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Dimension("weight vector is empty".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::Parameter(format!("weights must be finite and >= 0, got {w}")));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::Parameter(format!("weights must sum to 1, got {sum}")));
        }
        Ok(Self(weights))
    }

    /// Every coefficient equal to `1/m`.
    pub fn uniform(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Dimension("weight vector is empty".into()));
        }
        Self::new(vec![1.0 / m as f64; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Vertices with `n`-dimensional attributes and vertex pairs with
/// `m`-dimensional edge attributes. A pair without an entry has the zero
/// edge vector.
#[derive(Debug, Clone)]
pub struct MultiAttributedGraph {
    vertices: Vec<VertexVector>,
    edges: Vec<EdgeVector>,
    n: usize,
    m: usize,
    index: HashMap<String, usize>,
    edge_index: HashMap<(usize, usize), usize>,
}

impl MultiAttributedGraph {
    /// Builds a graph, inferring the edge dimension from the first edge
    /// (0 when there are no edges).
    pub fn new(vertices: Vec<VertexVector>, edges: Vec<EdgeVector>) -> Result<Self> {
        let m = edges.first().map_or(0, |e| e.attrs.len());
        Self::with_edge_dim(vertices, edges, m)
    }

    pub fn with_edge_dim(
        vertices: Vec<VertexVector>,
        edges: Vec<EdgeVector>,
        m: usize,
    ) -> Result<Self> {
        let n = vertices.first().map_or(0, |v| v.attrs.len());
        let mut index = HashMap::with_capacity(vertices.len());
        for (pos, v) in vertices.iter().enumerate() {
            if v.attrs.len() != n {
                return Err(Error::Dimension(format!(
                    "vertex `{}` has {} attributes, expected {n}",
                    v.id,
                    v.attrs.len()
                )));
            }
            if n == 0 {
                return Err(Error::Dimension(format!("vertex `{}` has no attributes", v.id)));
            }
            if let Some(x) = v.attrs.iter().find(|x| !x.is_finite()) {
                return Err(Error::Data(format!("vertex `{}` has non-finite attribute {x}", v.id)));
            }
            if index.insert(v.id.clone(), pos).is_some() {
                return Err(Error::Data(format!("duplicate vertex id `{}`", v.id)));
            }
        }

        let mut edge_index = HashMap::with_capacity(edges.len());
        for (pos, e) in edges.iter().enumerate() {
            if e.attrs.len() != m || m == 0 {
                return Err(Error::Dimension(format!(
                    "edge ({}, {}) has {} attributes, expected {m}",
                    e.src,
                    e.dst,
                    e.attrs.len()
                )));
            }
            let a = *index
                .get(&e.src)
                .ok_or_else(|| Error::Referential(e.src.clone()))?;
            let b = *index
                .get(&e.dst)
                .ok_or_else(|| Error::Referential(e.dst.clone()))?;
            let key = (a.min(b), a.max(b));
            if edge_index.insert(key, pos).is_some() {
                return Err(Error::Data(format!("duplicate edge ({}, {})", e.src, e.dst)));
            }
        }

        Ok(Self {
            vertices,
            edges,
            n,
            m,
            index,
            edge_index,
        })
    }

    pub fn vertices(&self) -> &[VertexVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeVector] {
        &self.edges
    }

    /// Vertex attribute dimension.
    pub fn vertex_dim(&self) -> usize {
        self.n
    }

    /// Edge attribute dimension; 0 for a graph built without edges.
    pub fn edge_dim(&self) -> usize {
        self.m
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Edge attributes between two vertex positions, `None` for the zero vector.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<&EdgeVector> {
        self.edge_index
            .get(&(a.min(b), a.max(b)))
            .map(|&pos| &self.edges[pos])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(id: &str, attrs: &[f64]) -> VertexVector {
        VertexVector::new(id, attrs.to_vec())
    }

    #[test]
    fn edge_is_canonical() {
        let a = EdgeVector::new("v3", "v2", vec![0.36, 0.64]).unwrap();
        let b = EdgeVector::new("v2", "v3", vec![0.36, 0.64]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.src(), "v2");
    }

    #[test]
    fn edge_rejects_self_loop_and_negative() {
        assert!(matches!(EdgeVector::new("v1", "v1", vec![0.5]), Err(Error::Data(_))));
        assert!(matches!(EdgeVector::new("v1", "v2", vec![-0.5]), Err(Error::Data(_))));
        assert!(matches!(EdgeVector::new("v1", "v2", vec![f64::NAN]), Err(Error::Data(_))));
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.5, -0.5]).is_err());
        assert!(WeightVector::new(vec![]).is_err());
        assert_eq!(WeightVector::uniform(4).unwrap().as_slice(), &[0.25; 4]);
    }

    #[test]
    fn graph_validation() {
        let verts = vec![v("a", &[0.0, 1.0]), v("b", &[1.0, 1.0])];
        let ok = MultiAttributedGraph::new(
            verts.clone(),
            vec![EdgeVector::new("b", "a", vec![0.5]).unwrap()],
        )
        .unwrap();
        assert_eq!(ok.vertex_dim(), 2);
        assert_eq!(ok.edge_dim(), 1);
        assert!(ok.edge_between(1, 0).is_some());

        let dup = vec![v("a", &[0.0]), v("a", &[1.0])];
        assert!(matches!(MultiAttributedGraph::new(dup, vec![]), Err(Error::Data(_))));

        let ragged = vec![v("a", &[0.0]), v("b", &[1.0, 2.0])];
        assert!(matches!(MultiAttributedGraph::new(ragged, vec![]), Err(Error::Dimension(_))));

        let unknown = vec![EdgeVector::new("a", "zz", vec![1.0]).unwrap()];
        assert!(matches!(
            MultiAttributedGraph::new(verts.clone(), unknown),
            Err(Error::Referential(id)) if id == "zz"
        ));

        let twice = vec![
            EdgeVector::new("a", "b", vec![1.0]).unwrap(),
            EdgeVector::new("b", "a", vec![0.5]).unwrap(),
        ];
        assert!(matches!(MultiAttributedGraph::new(verts, twice), Err(Error::Data(_))));
    }
}
