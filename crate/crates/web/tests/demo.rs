use fliplab_web::{explore_json, generate_points, link_json, regularity_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("operation succeeds")).unwrap()
}

#[test]
fn hexagon_walk_visits_fourteen_triangulations() {
    let pts = generate_points("convex", 6, 0).unwrap();
    let g = parse(explore_json(&pts, "edge"));
    let nodes = g["nodes"].as_array().unwrap();
    assert_eq!(nodes.len(), 14);
    assert_eq!(g["min_degree"], 3);
    // Following a neighbour and flipping back returns to the start.
    let first = &nodes[0]["neighbors"][0];
    let to = first["to"].as_u64().unwrap() as usize;
    assert!(nodes[to]["neighbors"].as_array().unwrap().iter().any(|n| n["to"] == 0));
}

#[test]
fn twisted_sets_show_both_verdicts() {
    let pts = generate_points("twisted", 3, 0).unwrap();
    let g = parse(explore_json(&pts, "edge"));
    let mut seen = [false; 2];
    for node in g["nodes"].as_array().unwrap() {
        let r = parse(regularity_json(&pts, &node["triangulation"].to_string()));
        let regular = r["regular"].as_bool().unwrap();
        let proof = if regular { "witness_verified" } else { "certificate_verified" };
        assert_eq!(r[proof], true);
        seen[regular as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn link_weights_are_two_or_three() {
    let pts = generate_points("random", 7, 5).unwrap();
    let g = parse(explore_json(&pts, "bistellar"));
    let t = g["nodes"][0]["triangulation"].to_string();
    let l = parse(link_json(&pts, &t, "partial"));
    assert_eq!(l["complement_has_c4"], false);
    for e in l["edges"].as_array().unwrap() {
        assert!(e["weight"] == 2 || e["weight"] == 3);
    }
}

#[test]
fn bad_input_is_an_error_not_a_panic() {
    assert!(explore_json("0 0\n1 1\n2 2\n", "edge").is_err());
    assert!(explore_json(&generate_points("convex", 10, 0).unwrap(), "edge").is_err());
    assert!(generate_points("spiral", 5, 0).is_err());
    let pts = generate_points("convex", 5, 0).unwrap();
    assert!(regularity_json(&pts, "{\"vertices\": [0]}").is_err());
}
