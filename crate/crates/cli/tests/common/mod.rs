#![allow(dead_code)]

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpStream};
use std::path::PathBuf;

use mgcolor_core::color::hsl_to_rgb;
use mgcolor_core::lottie::document_from_value;
use mgcolor_core::{Hsl, LottieDocument, Rgba};
use rand::Rng;
use serde_json::{json, Value};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixture_dir().join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
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

/// Runs the CLI in-process: (exit code, stdout, stderr).
pub fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["mgcolor"];
    argv.extend_from_slice(args);
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = mgcolor_cli::run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("{e}: {s}"))
}

// ---- document builders ----

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

pub fn group(name: &str, items: Vec<Value>) -> Value {
    let mut it = items;
    it.push(json!({"ty": "tr", "p": {"a": 0, "k": [0, 0]}, "a": {"a": 0, "k": [0, 0]},
        "s": {"a": 0, "k": [100, 100]}, "r": {"a": 0, "k": 0}, "o": {"a": 0, "k": 100}}));
    json!({"ty": "gr", "nm": name, "it": it})
}

pub fn shape_layer(ind: usize, shapes: Vec<Value>, ip: f64, op: f64) -> Value {
    json!({"ty": 4, "ind": ind, "nm": format!("L{ind}"), "ip": ip, "op": op, "st": 0,
        "ks": {"p": {"a": 0, "k": [0, 0, 0]}, "s": {"a": 0, "k": [100, 100, 100]}}, "shapes": shapes})
}

pub fn document(layers: Vec<Value>, fr: f64, op: f64) -> Value {
    json!({"v": "5.7.4", "fr": fr, "ip": 0, "op": op, "w": 1920, "h": 1080, "layers": layers})
}

pub fn to_doc(v: Value) -> LottieDocument {
    document_from_value(v).unwrap()
}

/// Layers of squares painted from a small shared palette, some paints
/// keyframed, each layer with its own visibility window.
pub fn random_scene(rng: &mut impl Rng) -> Value {
    let op = 90.0;
    let n_colors = rng.gen_range(2..=7);
    let colors: Vec<Rgba> = (0..n_colors).map(|_| Rgba::from_bytes(rng.gen(), rng.gen(), rng.gen())).collect();
    let mut layers = Vec::new();
    for li in 0..rng.gen_range(1..=5) {
        let mut shapes = Vec::new();
        for si in 0..rng.gen_range(1..=3) {
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
            shapes.push(group(&format!("s{si}"), vec![rect_path(x, x, x + side, x + side * 0.5), paint]));
        }
        let ip = rng.gen_range(0..30) as f64;
        let lop = (ip + rng.gen_range(10..80) as f64).min(op);
        layers.push(shape_layer(li + 1, shapes, ip, lop));
    }
    document(layers, 30.0, op)
}

/// Squares with a given color, side and layer window, one layer each.
pub fn squares(items: &[(Rgba, f64, f64, f64)], op: f64) -> Value {
    let layers = items
        .iter()
        .enumerate()
        .map(|(i, (c, side, ip, lop))| {
            shape_layer(i + 1, vec![group("sq", vec![rect_path(0.0, 0.0, *side, *side), fill(c)])], *ip, *lop)
        })
        .collect();
    document(layers, 30.0, op)
}

// ---- the four-scene retargeting fixture ----

pub const RETARGET_TARGETS: [&str; 4] = ["#023E73", "#085CA6", "#8C4265", "#D9B97E"];

/// Hue rotation applied to each target family to produce the "before" video.
pub const RETARGET_ROTATIONS: [f64; 4] = [-70.0, 80.0, 60.0, 40.0];

pub fn hsl_of(c: &Rgba) -> Hsl {
    mgcolor_core::color::rgb_to_hsl(*c)
}

/// Base color of family `i` before retargeting.
pub fn retarget_source(i: usize) -> Rgba {
    let t = hsl_of(&hex(RETARGET_TARGETS[i]));
    hsl_to_rgb(Hsl { h: t.h + RETARGET_ROTATIONS[i], s: t.s, l: t.l })
}

/// Four 2-second scenes. Each scene is dominated by one family (base plus
/// two lightness variants) and every scene shares a smaller off-white
/// backdrop (smaller than any hero even summed over all four scenes), so
/// the families are the four heaviest theme colors.
pub fn retarget_document() -> Value {
    let scene_len = 60.0;
    let backdrop = hex("#f2efe8");
    let mut layers = Vec::new();
    let mut ind = 1;
    for scene in 0..4 {
        let ip = scene as f64 * scene_len;
        let op = ip + scene_len;
        let base = hsl_of(&retarget_source(scene));
        let variant = |dl: f64| hsl_to_rgb(Hsl { h: base.h, s: base.s, l: base.l + dl });
        // the scene's own family, plus smaller cameos of the others
        let mut shapes = vec![
            group("hero", vec![rect_path(0.0, 0.0, 400.0, 300.0), fill(&variant(0.0))]),
            group("shade", vec![rect_path(0.0, 300.0, 220.0, 420.0), fill(&variant(-0.03))]),
            group("light", vec![rect_path(400.0, 0.0, 520.0, 140.0), fill(&variant(0.03))]),
            group("backdrop", vec![rect_path(600.0, 0.0, 800.0, 100.0), fill(&backdrop)]),
        ];
        for other in (0..4).filter(|o| *o != scene) {
            let c = retarget_source(other);
            let x = 900.0 + other as f64 * 50.0;
            shapes.push(group("cameo", vec![rect_path(x, 0.0, x + 40.0, 40.0), fill(&c)]));
        }
        layers.push(shape_layer(ind, shapes, ip, op));
        ind += 1;
    }
    let mut doc = document(layers, 30.0, 4.0 * scene_len);
    doc["nm"] = json!("four scenes");
    doc
}

// ---- the performance document ----

/// 60 s at 30 fps with 200 shapes in 20 layers; a third of the fills are
/// keyframed.
pub fn perf_document(rng: &mut impl Rng) -> Value {
    let fr = 30.0;
    let op = 60.0 * fr;
    let palette: Vec<Rgba> = (0..24).map(|_| Rgba::from_bytes(rng.gen(), rng.gen(), rng.gen())).collect();
    let mut layers = Vec::new();
    for li in 0..20 {
        let mut shapes = Vec::new();
        for si in 0..10 {
            let x = rng.gen_range(0.0..1800.0);
            let y = rng.gen_range(0.0..1000.0);
            let w = rng.gen_range(10.0..300.0);
            let h = rng.gen_range(10.0..300.0);
            let pick = |rng: &mut dyn rand::RngCore| palette[(rng.next_u32() as usize) % palette.len()];
            let paint = if si % 3 == 0 {
                let keys: Vec<(f64, Rgba)> = (0..5).map(|k| (k as f64 * op / 5.0, pick(rng))).collect();
                keyed_fill(&keys, false)
            } else {
                fill(&pick(rng))
            };
            shapes.push(group(&format!("shape{si}"), vec![rect_path(x, y, x + w, y + h), paint]));
        }
        let ip = if li % 4 == 0 { 0.0 } else { rng.gen_range(0.0..op / 2.0).floor() };
        let lop = if li % 4 == 0 { op } else { (ip + rng.gen_range(fr..op)).min(op).floor() };
        layers.push(shape_layer(li + 1, shapes, ip, lop));
    }
    document(layers, fr, op)
}

// ---- a minimal blocking HTTP/1.1 client ----

pub struct HttpReply {
    pub status: u16,
    pub body: String,
}

impl HttpReply {
    pub fn json(&self) -> Value {
        parse(&self.body)
    }
}

pub fn http(addr: SocketAddr, method: &str, path: &str, body: Option<&str>) -> HttpReply {
    let mut stream = TcpStream::connect(addr).unwrap();
    let body = body.unwrap_or("");
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    stream.write_all(req.as_bytes()).unwrap();
    let mut raw = Vec::new();
    stream.read_to_end(&mut raw).unwrap();
    let text = String::from_utf8(raw).unwrap();
    let (head, rest) = text.split_once("\r\n\r\n").unwrap();
    let status: u16 = head.split_whitespace().nth(1).unwrap().parse().unwrap();
    let chunked = head.to_ascii_lowercase().contains("transfer-encoding: chunked");
    let body = if chunked { dechunk(rest) } else { rest.to_string() };
    HttpReply { status, body }
}

fn dechunk(mut s: &str) -> String {
    let mut out = String::new();
    loop {
        let (size, rest) = s.split_once("\r\n").unwrap();
        let n = usize::from_str_radix(size.trim(), 16).unwrap();
        if n == 0 {
            return out;
        }
        out.push_str(&rest[..n]);
        s = &rest[n + 2..];
    }
}

/// Starts the service on an ephemeral port in a background runtime.
pub fn start_service(config: mgcolor_service::ServiceConfig) -> (tokio::runtime::Runtime, SocketAddr) {
    let rt = tokio::runtime::Builder::new_multi_thread().worker_threads(2).enable_all().build().unwrap();
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let addr = listener.local_addr().unwrap();
    rt.spawn(mgcolor_service::serve_on(listener, config));
    (rt, addr)
}
