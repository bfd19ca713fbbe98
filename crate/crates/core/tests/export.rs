mod common;

use collab_core::export::{export_graph, import_graph, round_sig9, DocumentParams};
use collab_core::graph::{Mode, ProjectionParams};
use collab_core::layout::{init_layout, render_attributes, LayoutParams};

#[test]
fn round_trip_random_graphs() {
    let mut rng = common::rng(77);
    for k in 0..40 {
        let n = 1 + k * 2;
        let g = common::random_projected(&mut rng, n, 0.1);
        let layout = init_layout(&g, k as u64);
        let attrs = render_attributes(&g);
        let params = DocumentParams {
            projection: Some(ProjectionParams::new(Mode::Author, 2, 3)),
            layout: Some(LayoutParams {
                seed: k as u64,
                ..Default::default()
            }),
        };
        let bytes = export_graph(&g, &layout, &attrs, params).unwrap();
        let back = import_graph(&bytes).unwrap();
        assert_eq!(back.graph, g);
        assert_eq!(back.params, params);
        for i in 0..n {
            assert_eq!(
                back.layout.positions[i],
                layout.positions[i].map(round_sig9)
            );
        }
        assert_eq!(
            back.attrs.sizes,
            attrs
                .sizes
                .iter()
                .copied()
                .map(round_sig9)
                .collect::<Vec<_>>()
        );
        let again = export_graph(&back.graph, &back.layout, &back.attrs, back.params).unwrap();
        assert_eq!(again, bytes);
    }
}

#[test]
fn export_is_deterministic_and_sorted() {
    let g = common::random_projected(&mut common::rng(4), 60, 0.1);
    let layout = init_layout(&g, 1);
    let attrs = render_attributes(&g);
    let a = export_graph(&g, &layout, &attrs, DocumentParams::default()).unwrap();
    let b = export_graph(&g, &layout, &attrs, DocumentParams::default()).unwrap();
    assert_eq!(a, b);

    let doc: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let ids: Vec<&str> = doc["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["id"].as_str().unwrap())
        .collect();
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
    let edges: Vec<(&str, &str)> = doc["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["source"].as_str().unwrap(), e["target"].as_str().unwrap()))
        .collect();
    assert!(edges.iter().all(|(s, t)| s < t));
    assert!(edges.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(doc["meta"]["schema_version"], 1);
    assert_eq!(doc["meta"]["stats"]["node_count"], 60);
    let node_keys: Vec<&String> = doc["nodes"][0].as_object().unwrap().keys().collect();
    assert_eq!(
        node_keys,
        [
            "color_scalar",
            "counterpart_count",
            "id",
            "label",
            "size",
            "weighted_degree",
            "x",
            "y"
        ]
    );
}

#[test]
fn floats_have_at_most_nine_significant_digits() {
    let g = common::random_projected(&mut common::rng(6), 30, 0.2);
    let layout = init_layout(&g, 2);
    let text = String::from_utf8(
        export_graph(
            &g,
            &layout,
            &render_attributes(&g),
            DocumentParams::default(),
        )
        .unwrap(),
    )
    .unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    for n in doc["nodes"].as_array().unwrap() {
        for key in ["x", "y", "size", "color_scalar"] {
            let raw = n[key].to_string();
            let mantissa = raw
                .trim_start_matches('-')
                .split(['e', 'E'])
                .next()
                .unwrap();
            let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
            let significant = digits.trim_start_matches('0').trim_end_matches('0');
            assert!(significant.len() <= 9, "{key} = {raw}");
        }
    }
}

#[test]
fn neighborhood_view_keeps_coordinates() {
    let mut rng = common::rng(21);
    let g = common::random_projected(&mut rng, 80, 0.04);
    let layout = init_layout(&g, 3);
    let view = import_graph(
        &export_graph(
            &g,
            &layout,
            &render_attributes(&g),
            DocumentParams::default(),
        )
        .unwrap(),
    )
    .unwrap();
    for center in g.nodes().iter().step_by(7) {
        for depth in 0..4 {
            let sub = view.neighborhood(&center.id, depth).unwrap();
            let want = common::oracle_ball(&g, &center.id, depth);
            assert_eq!(
                sub.graph
                    .nodes()
                    .iter()
                    .map(|n| n.id.clone())
                    .collect::<std::collections::BTreeSet<_>>(),
                want
            );
            for (i, n) in sub.graph.nodes().iter().enumerate() {
                let j = view.graph.index_of(&n.id).unwrap();
                assert_eq!(sub.layout.positions[i], view.layout.positions[j]);
                assert_eq!(sub.attrs.sizes[i], view.attrs.sizes[j]);
                assert_eq!(sub.attrs.colors[i], view.attrs.colors[j]);
            }
        }
    }
    assert!(view.neighborhood("absent", 1).is_err());
}
