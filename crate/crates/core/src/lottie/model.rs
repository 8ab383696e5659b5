use serde_json::Value;

use super::paint::ColorProperty;
use super::transform::Transform2D;
use super::value::{as_f64, parse_optional, AnimatedValue, JsonMap};
use crate::error::{Error, Result};
use crate::geometry::{BezierPath, Point};

/// A parsed Lottie animation.
///
/// Every node keeps the JSON object it was parsed from. Serialization
/// starts from that object and overwrites only the editable parts (layer
/// shape lists, group item lists and paint colors), so fields the model does
/// not understand survive untouched. The remaining typed fields are read-only
/// views of the stored JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct LottieDocument {
    pub frame_rate: f64,
    pub in_point: f64,
    pub out_point: f64,
    pub width: f64,
    pub height: f64,
    pub layers: Vec<Layer>,
    raw: JsonMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerType {
    Shape,
    Precomposition,
    /// Any other layer type, carried opaquely.
    Unsupported,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub name: Option<String>,
    /// The layer's `ind` id, used for parenting.
    pub index: Option<i64>,
    pub parent: Option<i64>,
    pub in_point: f64,
    pub out_point: f64,
    pub layer_type: LayerType,
    pub transform: Transform2D,
    pub shapes: Vec<ShapeItem>,
    raw: JsonMap,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ShapeKind {
    Group(Vec<ShapeItem>),
    Path(BezierPath),
    /// Rectangle primitive (`rc`), centered at `position`.
    Rect { position: AnimatedValue, size: AnimatedValue },
    /// Ellipse primitive (`el`), centered at `position`.
    Ellipse { position: AnimatedValue, size: AnimatedValue },
    Fill(Paint),
    Stroke(Paint),
    Transform(Transform2D),
    /// Gradients, modifiers, repeaters, ...: preserved, not analyzed.
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShapeItem {
    pub name: Option<String>,
    pub kind: ShapeKind,
    raw: JsonMap,
}

/// A solid fill or stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct Paint {
    pub color: ColorProperty,
    /// Opacity in percent.
    pub opacity: AnimatedValue,
}

impl ShapeItem {
    pub fn children(&self) -> &[ShapeItem] {
        match &self.kind {
            ShapeKind::Group(items) => items,
            _ => &[],
        }
    }

    pub fn paint(&self) -> Option<&Paint> {
        match &self.kind {
            ShapeKind::Fill(p) | ShapeKind::Stroke(p) => Some(p),
            _ => None,
        }
    }

    pub fn paint_mut(&mut self) -> Option<&mut Paint> {
        match &mut self.kind {
            ShapeKind::Fill(p) | ShapeKind::Stroke(p) => Some(p),
            _ => None,
        }
    }

    /// The item's `ty` code.
    pub fn type_code(&self) -> &str {
        self.raw.get("ty").and_then(Value::as_str).unwrap_or("")
    }

    fn to_json(&self) -> Value {
        let mut out = self.raw.clone();
        match &self.kind {
            ShapeKind::Group(items) if out.contains_key("it") || !items.is_empty() => {
                out.insert("it".into(), Value::Array(items.iter().map(ShapeItem::to_json).collect()));
            }
            ShapeKind::Fill(p) | ShapeKind::Stroke(p) => {
                out.insert("c".into(), p.color.to_json());
            }
            _ => {}
        }
        Value::Object(out)
    }
}

impl Layer {
    pub fn display_name(&self, position: usize) -> String {
        match &self.name {
            Some(n) if !n.is_empty() => n.clone(),
            _ => format!("Layer {}", self.index.unwrap_or(position as i64)),
        }
    }

    /// Fields the model does not interpret.
    pub fn unrecognized_fields(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.raw.iter().filter(|(k, _)| {
            !matches!(k.as_str(), "nm" | "ind" | "parent" | "ip" | "op" | "ty" | "ks" | "shapes")
        })
    }

    fn to_json(&self) -> Value {
        let mut out = self.raw.clone();
        if self.layer_type == LayerType::Shape && out.contains_key("shapes") {
            out.insert("shapes".into(), Value::Array(self.shapes.iter().map(ShapeItem::to_json).collect()));
        }
        Value::Object(out)
    }
}

impl LottieDocument {
    pub fn unrecognized_fields(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.raw
            .iter()
            .filter(|(k, _)| !matches!(k.as_str(), "fr" | "ip" | "op" | "w" | "h" | "layers"))
    }

    pub fn to_json_value(&self) -> Value {
        let mut out = self.raw.clone();
        out.insert("layers".into(), Value::Array(self.layers.iter().map(Layer::to_json).collect()));
        Value::Object(out)
    }

    /// Document duration in frames.
    pub fn duration(&self) -> f64 {
        self.out_point - self.in_point
    }

    /// Layer by `ind` id.
    pub fn layer_by_id(&self, id: i64) -> Option<&Layer> {
        self.layers.iter().find(|l| l.index == Some(id))
    }
}

/// Parses Lottie JSON text.
pub fn parse_document(text: &str) -> Result<LottieDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::MalformedJson(e.to_string()))?;
    document_from_value(value)
}

/// Builds a document from an already-decoded JSON value.
pub fn document_from_value(value: Value) -> Result<LottieDocument> {
    let Value::Object(mut raw) = value else {
        return Err(Error::UnsupportedDocument("top level is not an object".into()));
    };
    let required = |key: &str, what: &str| -> Result<f64> {
        match raw.get(key) {
            None => Err(Error::UnsupportedDocument(format!("missing {what} (`{key}`)"))),
            Some(v) => as_f64(v, &format!("$.{key}")),
        }
    };
    let frame_rate = required("fr", "frame rate")?;
    let in_point = required("ip", "in point")?;
    let out_point = required("op", "out point")?;
    if frame_rate.is_nan() || frame_rate <= 0.0 {
        return Err(Error::UnsupportedDocument(format!("frame rate must be positive, got {frame_rate}")));
    }
    if in_point.is_nan() || out_point.is_nan() || in_point >= out_point {
        return Err(Error::UnsupportedDocument(format!(
            "in point {in_point} must precede out point {out_point}"
        )));
    }
    let optional = |key: &str| -> Result<f64> {
        raw.get(key).map_or(Ok(0.0), |v| as_f64(v, &format!("$.{key}")))
    };
    let width = optional("w")?;
    let height = optional("h")?;
    let layers = match raw.get("layers") {
        None => return Err(Error::UnsupportedDocument("missing layer list (`layers`)".into())),
        Some(Value::Array(items)) => items
            .iter()
            .enumerate()
            .map(|(i, l)| parse_layer(l, &format!("$.layers[{i}]"), in_point, out_point))
            .collect::<Result<Vec<_>>>()?,
        Some(_) => return Err(Error::structure("$.layers", "expected an array")),
    };
    // Owned children live in the typed tree only.
    raw.insert("layers".into(), Value::Null);
    Ok(LottieDocument { frame_rate, in_point, out_point, width, height, layers, raw })
}

/// Serializes to compact JSON text.
pub fn serialize_document(doc: &LottieDocument) -> String {
    doc.to_json_value().to_string()
}

fn opt_string(obj: &JsonMap, key: &str) -> Option<String> {
    obj.get(key).and_then(Value::as_str).map(str::to_string)
}

fn opt_int(obj: &JsonMap, key: &str) -> Option<i64> {
    obj.get(key).and_then(|v| v.as_i64().or_else(|| v.as_f64().map(|f| f as i64)))
}

fn parse_layer(v: &Value, path: &str, doc_in: f64, doc_out: f64) -> Result<Layer> {
    let mut raw = v
        .as_object()
        .ok_or_else(|| Error::structure(path, "expected a layer object"))?
        .clone();
    let frame = |key: &str, default: f64| -> Result<f64> {
        raw.get(key).map_or(Ok(default), |v| as_f64(v, &format!("{path}.{key}")))
    };
    let in_point = frame("ip", doc_in)?;
    let out_point = frame("op", doc_out)?;
    if in_point > out_point {
        return Err(Error::structure(path, format!("layer in point {in_point} exceeds out point {out_point}")));
    }
    let layer_type = match opt_int(&raw, "ty") {
        Some(4) => LayerType::Shape,
        Some(0) => LayerType::Precomposition,
        _ => LayerType::Unsupported,
    };
    let transform = Transform2D::parse_value(raw.get("ks"), &format!("{path}.ks"))?;
    let shapes = match (layer_type, raw.get("shapes")) {
        (LayerType::Shape, Some(Value::Array(items))) => parse_items(items, &format!("{path}.shapes"))?,
        (LayerType::Shape, Some(_)) => return Err(Error::structure(format!("{path}.shapes"), "expected an array")),
        _ => Vec::new(),
    };
    if layer_type == LayerType::Shape && raw.contains_key("shapes") {
        raw.insert("shapes".into(), Value::Null);
    }
    Ok(Layer {
        name: opt_string(&raw, "nm"),
        index: opt_int(&raw, "ind"),
        parent: opt_int(&raw, "parent"),
        in_point,
        out_point,
        layer_type,
        transform,
        shapes,
        raw,
    })
}

fn parse_items(items: &[Value], path: &str) -> Result<Vec<ShapeItem>> {
    items
        .iter()
        .enumerate()
        .map(|(i, item)| parse_item(item, &format!("{path}[{i}]")))
        .collect()
}

fn parse_item(v: &Value, path: &str) -> Result<ShapeItem> {
    let mut raw = v
        .as_object()
        .ok_or_else(|| Error::structure(path, "expected a shape object"))?
        .clone();
    let ty = raw.get("ty").and_then(Value::as_str).unwrap_or("").to_string();
    let kind = match ty.as_str() {
        "gr" => match raw.get("it") {
            Some(Value::Array(items)) => ShapeKind::Group(parse_items(items, &format!("{path}.it"))?),
            Some(_) => return Err(Error::structure(format!("{path}.it"), "expected an array")),
            None => ShapeKind::Group(Vec::new()),
        },
        "sh" => {
            let ks = raw
                .get("ks")
                .ok_or_else(|| Error::structure(path, "path is missing `ks`"))?;
            ShapeKind::Path(parse_path_property(ks, &format!("{path}.ks"))?)
        }
        "rc" | "el" => {
            let position = parse_optional(&raw, "p", path, &[0.0, 0.0])?;
            let size = parse_optional(&raw, "s", path, &[0.0, 0.0])?;
            if ty == "rc" {
                ShapeKind::Rect { position, size }
            } else {
                ShapeKind::Ellipse { position, size }
            }
        }
        "fl" | "st" => {
            let c = raw
                .get("c")
                .ok_or_else(|| Error::structure(path, "paint is missing color `c`"))?;
            let paint = Paint {
                color: ColorProperty::parse(c, &format!("{path}.c"))?,
                opacity: parse_optional(&raw, "o", path, &[100.0])?,
            };
            if ty == "fl" {
                ShapeKind::Fill(paint)
            } else {
                ShapeKind::Stroke(paint)
            }
        }
        "tr" => ShapeKind::Transform(Transform2D::parse(&raw, path)?),
        _ => ShapeKind::Unsupported(ty),
    };
    match &kind {
        ShapeKind::Group(_) if raw.contains_key("it") => {
            raw.insert("it".into(), Value::Null);
        }
        ShapeKind::Fill(_) | ShapeKind::Stroke(_) => {
            raw.insert("c".into(), Value::Null);
        }
        _ => {}
    }
    Ok(ShapeItem { name: opt_string(&raw, "nm"), kind, raw })
}

/// Reads the path's static shape, or its first keyframe's shape.
fn parse_path_property(ks: &Value, path: &str) -> Result<BezierPath> {
    let obj = ks
        .as_object()
        .ok_or_else(|| Error::structure(path, "expected a property object"))?;
    let k = obj
        .get("k")
        .ok_or_else(|| Error::structure(path, "property is missing `k`"))?;
    let kpath = format!("{path}.k");
    match k {
        Value::Object(_) => parse_bezier(k, &kpath),
        Value::Array(frames) => {
            let first = frames
                .first()
                .ok_or_else(|| Error::structure(&kpath, "keyframe list is empty"))?;
            let shape = first
                .get("s")
                .ok_or_else(|| Error::structure(format!("{kpath}[0]"), "keyframe is missing `s`"))?;
            match shape {
                Value::Array(shapes) if !shapes.is_empty() => parse_bezier(&shapes[0], &format!("{kpath}[0].s[0]")),
                Value::Object(_) => parse_bezier(shape, &format!("{kpath}[0].s")),
                _ => Err(Error::structure(format!("{kpath}[0].s"), "expected a shape")),
            }
        }
        _ => Err(Error::structure(kpath, "expected a shape object")),
    }
}

fn parse_points(obj: &JsonMap, key: &str, path: &str) -> Result<Option<Vec<Point>>> {
    let Some(v) = obj.get(key) else {
        return Ok(None);
    };
    let kpath = format!("{path}.{key}");
    let items = v
        .as_array()
        .ok_or_else(|| Error::structure(&kpath, "expected an array of points"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ppath = format!("{kpath}[{i}]");
            match p.as_array().map(Vec::as_slice) {
                Some([x, y, ..]) => Ok([as_f64(x, &ppath)?, as_f64(y, &ppath)?]),
                _ => Err(Error::structure(ppath, "expected an [x, y] point")),
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

fn parse_bezier(v: &Value, path: &str) -> Result<BezierPath> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::structure(path, "expected a shape object"))?;
    let vertices = parse_points(obj, "v", path)?.unwrap_or_default();
    let n = vertices.len();
    let in_tangents = parse_points(obj, "i", path)?.unwrap_or_else(|| vec![[0.0; 2]; n]);
    let out_tangents = parse_points(obj, "o", path)?.unwrap_or_else(|| vec![[0.0; 2]; n]);
    if in_tangents.len() != n || out_tangents.len() != n {
        return Err(Error::structure(
            path,
            format!(
                "vertex/tangent counts differ: v={n}, i={}, o={}",
                in_tangents.len(),
                out_tangents.len()
            ),
        ));
    }
    let closed = obj.get("c").and_then(Value::as_bool).unwrap_or(false);
    Ok(BezierPath { vertices, in_tangents, out_tangents, closed })
}
