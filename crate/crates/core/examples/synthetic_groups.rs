//! Writes the synthetic two-channel graph under `data/synthetic/`.
//!
//! 300 vertices in 3 planted groups of 100. Each vertex is a binary
//! 110-term vector drawn from its group's term profile. Edges carry two
//! overlap scores in [0, 1], standing in for shared hashtags and close
//! posting times; most edges stay inside a group.
//!
//! Run with `cargo run -p magdist --example synthetic_groups [OUT_DIR]`.

use std::path::PathBuf;

use magdist::io::{create, write_edges, write_labels, write_vertices};
use magdist::{EdgeVector, LabeledDataset, VertexVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_190_411;
const GROUPS: usize = 3;
const PER_GROUP: usize = 100;
const TERMS: usize = 110;
/// Terms favoured by each group; the remaining terms are background.
const TOPIC_TERMS: usize = 30;
const P_TOPIC: f64 = 0.45;
const P_BACKGROUND: f64 = 0.04;
const P_EDGE_INSIDE: f64 = 0.12;
const P_EDGE_ACROSS: f64 = 0.004;

fn main() -> magdist::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data/synthetic"));
    std::fs::create_dir_all(&out).map_err(|source| magdist::Error::Io {
        path: out.clone(),
        source,
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let group_names = ["topic1", "topic2", "topic3"];
    let mut vertices = Vec::with_capacity(GROUPS * PER_GROUP);
    let mut group_of = Vec::with_capacity(GROUPS * PER_GROUP);
    for g in 0..GROUPS {
        let topic = g * TOPIC_TERMS..(g + 1) * TOPIC_TERMS;
        for k in 0..PER_GROUP {
            let attrs = (0..TERMS)
                .map(|t| {
                    let p = if topic.contains(&t) { P_TOPIC } else { P_BACKGROUND };
                    if rng.gen_bool(p) {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            vertices.push(VertexVector::new(format!("t{:03}", g * PER_GROUP + k + 1), attrs));
            group_of.push(g);
        }
    }

    let mut edges = Vec::new();
    for a in 0..vertices.len() {
        for b in (a + 1)..vertices.len() {
            let inside = group_of[a] == group_of[b];
            let p = if inside { P_EDGE_INSIDE } else { P_EDGE_ACROSS };
            if !rng.gen_bool(p) {
                continue;
            }
            let (hashtags, time) = if inside {
                (rng.gen_range(0.3..1.0), rng.gen_range(0.2..1.0))
            } else {
                (rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.4))
            };
            let round = |x: f64| (x * 1000.0).round() / 1000.0;
            edges.push(EdgeVector::new(
                vertices[a].id.clone(),
                vertices[b].id.clone(),
                vec![round(hashtags), round(time)],
            )?);
        }
    }

    let labels = LabeledDataset::new(
        vertices
            .iter()
            .zip(&group_of)
            .map(|(v, &g)| (v.id.clone(), group_names[g].to_owned())),
    )?;
    let ids: Vec<String> = vertices.iter().map(|v| v.id.clone()).collect();

    write_vertices(create(&out.join("vertices.csv"))?, &vertices)?;
    write_edges(create(&out.join("edges.csv"))?, &edges)?;
    write_labels(create(&out.join("labels.csv"))?, &ids, &labels)?;
    eprintln!("{} vertices, {} edges -> {}", vertices.len(), edges.len(), out.display());
    Ok(())
}
