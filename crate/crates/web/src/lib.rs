//! Browser demo: generate a point set, walk its flip graph one flip at a
//! time, and ask for the regularity verdict and link of the triangulation
//! on screen.
//!
//! Every operation is a plain function from strings to a JSON string so the
//! native tests exercise exactly what the page calls.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use fliplab::flipgraph::link_of;
use fliplab::generators::GeneratorSpec;
use fliplab::regularity::is_regular_triangulation;
use fliplab::{FlipGraph, FlipKind, Kind, PointSet, Triangulation};

/// Largest sets the page will enumerate; beyond these a browser tab stalls.
pub const EDGE_CAP: usize = 9;
pub const BISTELLAR_CAP: usize = 7;

fn points(text: &str) -> Result<Arc<PointSet>, String> {
    PointSet::parse(text).map(Arc::new).map_err(|e| e.to_string())
}

fn triangulation(ps: Arc<PointSet>, text: &str) -> Result<Triangulation, String> {
    Triangulation::from_json(ps, text).map_err(|e| e.to_string())
}

/// Points in the line format for `family` (`convex`, `twisted`,
/// `mother-concurrent`, `mother-skew` or `random`). `size` is `n`, or `k`
/// for twisted double-gons.
pub fn generate_points(family: &str, size: usize, seed: u64) -> Result<String, String> {
    let spec = match family {
        "convex" => GeneratorSpec::ConvexGon { n: size },
        "twisted" => GeneratorSpec::TwistedDoubleGon { k: size },
        "mother-concurrent" => GeneratorSpec::MotherExample { concurrent: true },
        "mother-skew" => GeneratorSpec::MotherExample { concurrent: false },
        "random" => GeneratorSpec::Random {
            n: size,
            seed,
            bound: 1000,
        },
        other => return Err(format!("unknown family {other:?}")),
    };
    spec.generate().map(|ps| ps.to_text()).map_err(|e| e.to_string())
}

/// The whole flip graph of `kind` (`edge` or `bistellar`) with every node's
/// triangulation and labelled neighbours.
pub fn explore_json(points_text: &str, kind: &str) -> Result<String, String> {
    let ps = points(points_text)?;
    let (kind, cap) = match kind {
        "edge" => (FlipKind::Edge, EDGE_CAP),
        "bistellar" => (FlipKind::Bistellar, BISTELLAR_CAP),
        other => return Err(format!("unknown flip kind {other:?}")),
    };
    let g = FlipGraph::build(ps.clone(), kind, Some(cap)).map_err(|e| e.to_string())?;
    let nodes: Vec<Value> = (0..g.len())
        .map(|i| {
            let t = g.node(i);
            let neighbors: Vec<Value> = g
                .neighbors(i)
                .iter()
                .map(|(j, x)| json!({"to": j, "flip": x.to_string()}))
                .collect();
            json!({
                "triangulation": serde_json::from_str::<Value>(&t.to_json()).expect("valid json"),
                "neighbors": neighbors,
            })
        })
        .collect();
    let out = json!({
        "points": ps.points().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
        "hull": ps.hull(),
        "kind": g.kind(),
        "min_degree": g.min_degree(),
        "edge_count": g.edge_count(),
        "nodes": nodes,
    });
    Ok(out.to_string())
}

/// Regularity of a triangulation, lifting every point; carries either a
/// verified height function or a verified infeasibility certificate.
pub fn regularity_json(points_text: &str, triangulation_json: &str) -> Result<String, String> {
    let t = triangulation(points(points_text)?, triangulation_json)?;
    Ok(is_regular_triangulation(&t).to_json_value().to_string())
}

/// Link of a triangulation: its flippable elements and the compatible
/// pairs with their weights. `kind` is `full` or `partial`.
pub fn link_json(points_text: &str, triangulation_json: &str, kind: &str) -> Result<String, String> {
    let t = triangulation(points(points_text)?, triangulation_json)?;
    let kind = match kind {
        "full" if t.kind() == Kind::Full => Kind::Full,
        "full" => return Err("a full link needs a full triangulation".into()),
        "partial" => Kind::Partial,
        other => return Err(format!("unknown link kind {other:?}")),
    };
    let l = link_of(&t, kind);
    let edges: Vec<Value> = l
        .edges()
        .iter()
        .map(|e| json!({"a": e.a, "b": e.b, "class": e.class, "weight": e.weight}))
        .collect();
    let out = json!({
        "nodes": l.nodes().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "edges": edges,
        "min_degree": l.min_degree(),
        "complement_has_c4": l.complement_has_c4(),
    });
    Ok(out.to_string())
}

#[wasm_bindgen]
pub fn generate(family: &str, size: usize, seed: u32) -> Result<String, JsError> {
    generate_points(family, size, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn explore(points_text: &str, kind: &str) -> Result<String, JsError> {
    explore_json(points_text, kind).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn regularity(points_text: &str, triangulation_json: &str) -> Result<String, JsError> {
    regularity_json(points_text, triangulation_json).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn link(points_text: &str, triangulation_json: &str, kind: &str) -> Result<String, JsError> {
    link_json(points_text, triangulation_json, kind).map_err(|e| JsError::new(&e))
}
