#![allow(dead_code)]

use std::path::PathBuf;

use mgcolor_core::{parse_document, LottieDocument, Rgba};
use serde_json::{json, Value};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_dir().join(name)).unwrap()
}

pub fn fixture(name: &str) -> LottieDocument {
    parse_document(&fixture_text(name)).unwrap()
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

pub fn hex(s: &str) -> Rgba {
    Rgba::from_hex(s).unwrap()
}

pub fn color_json(c: &Rgba) -> Value {
    json!([c.r, c.g, c.b, c.a])
}

pub fn rect_path(x0: f64, y0: f64, x1: f64, y1: f64) -> Value {
    json!({"ty": "sh", "ks": {"a": 0, "k": {
        "c": true,
        "v": [[x0, y0], [x1, y0], [x1, y1], [x0, y1]],
        "i": [[0, 0], [0, 0], [0, 0], [0, 0]],
        "o": [[0, 0], [0, 0], [0, 0], [0, 0]]
    }}})
}

pub fn fill(c: &Rgba) -> Value {
    json!({"ty": "fl", "c": {"a": 0, "k": color_json(c)}, "o": {"a": 0, "k": 100}})
}

pub fn keyed_fill(keys: &[(f64, Rgba)], hold: bool) -> Value {
    let k: Vec<Value> = keys
        .iter()
        .map(|(t, c)| {
            let mut key = json!({"t": t, "s": color_json(c)});
            if hold {
                key["h"] = json!(1);
            }
            key
        })
        .collect();
    json!({"ty": "fl", "c": {"a": 1, "k": k}, "o": {"a": 0, "k": 100}})
}

pub fn group(items: Vec<Value>) -> Value {
    let mut it = items;
    it.push(json!({"ty": "tr", "p": {"a": 0, "k": [0, 0]}, "a": {"a": 0, "k": [0, 0]},
        "s": {"a": 0, "k": [100, 100]}, "r": {"a": 0, "k": 0}, "o": {"a": 0, "k": 100}}));
    json!({"ty": "gr", "it": it})
}

pub fn shape_layer(ind: usize, shapes: Vec<Value>, ip: f64, op: f64) -> Value {
    json!({"ty": 4, "ind": ind, "nm": format!("L{ind}"), "ip": ip, "op": op, "st": 0,
        "ks": {"p": {"a": 0, "k": [0, 0, 0]}, "s": {"a": 0, "k": [100, 100, 100]}}, "shapes": shapes})
}

pub fn document(layers: Vec<Value>, op: f64) -> Value {
    json!({"v": "5.7.4", "fr": 30, "ip": 0, "op": op, "w": 512, "h": 512, "layers": layers})
}

/// One square per (color, side, layer window); each in its own layer.
pub fn squares_doc(items: &[(Rgba, f64, f64, f64)], op: f64) -> LottieDocument {
    let layers = items
        .iter()
        .enumerate()
        .map(|(i, (c, side, ip, lop))| shape_layer(i + 1, vec![group(vec![rect_path(0.0, 0.0, *side, *side), fill(c)])], *ip, *lop))
        .collect();
    mgcolor_core::lottie::document_from_value(document(layers, op)).unwrap()
}

/// A random scene: layers of squares painted from a small shared palette,
/// some paints keyframed, layers with their own visibility windows.
pub fn random_scene(rng: &mut impl rand::Rng) -> LottieDocument {
    let op = 90.0;
    let n_colors = rng.gen_range(2..=7);
    let colors: Vec<Rgba> = (0..n_colors)
        .map(|_| Rgba::from_bytes(rng.gen(), rng.gen(), rng.gen()))
        .collect();
    let n_layers = rng.gen_range(1..=5);
    let mut layers = Vec::new();
    for li in 0..n_layers {
        let mut shapes = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let x = rng.gen_range(0..100) as f64;
            let side = rng.gen_range(4..80) as f64;
            let paint = if rng.gen_bool(0.3) {
                let mut t = rng.gen_range(0..20) as f64;
                let keys: Vec<(f64, Rgba)> = (0..rng.gen_range(2..=3))
                    .map(|_| {
                        let k = (t, colors[rng.gen_range(0..colors.len())]);
                        t += rng.gen_range(5..30) as f64;
                        k
                    })
                    .collect();
                keyed_fill(&keys, rng.gen_bool(0.5))
            } else {
                fill(&colors[rng.gen_range(0..colors.len())])
            };
            shapes.push(group(vec![rect_path(x, x, x + side, x + side * 0.5), paint]));
        }
        let ip = rng.gen_range(0..30) as f64;
        let lop = (ip + rng.gen_range(10..80) as f64).min(op);
        layers.push(shape_layer(li + 1, shapes, ip, lop));
    }
    mgcolor_core::lottie::document_from_value(document(layers, op)).unwrap()
}
