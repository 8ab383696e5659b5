//! Numeric animated properties (positions, scales, opacities, ...) read from
//! Lottie property objects. These are read-only views; the stored JSON is
//! what gets serialized.

use serde_json::{Number, Value};

use crate::error::{Error, Result};

pub type JsonMap = serde_json::Map<String, Value>;

/// Emits a JSON number, using the integer form for integral values so
/// re-serialized documents keep the input's `30` rather than `30.0`.
pub(crate) fn num(v: f64) -> Value {
    if v.is_finite() && v.fract() == 0.0 && v.abs() < 9.007_199_254_740_992e15 {
        if v == 0.0 {
            return Value::from(0);
        }
        return Value::from(v as i64);
    }
    Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub(crate) fn as_f64(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| Error::structure(path, "expected a number"))
}

pub(crate) fn flag(v: Option<&Value>) -> bool {
    match v {
        Some(Value::Bool(b)) => *b,
        Some(Value::Number(n)) => n.as_f64().is_some_and(|x| x != 0.0),
        _ => false,
    }
}

/// True when `k` is a list of keyframe objects rather than a static value.
pub(crate) fn is_keyframe_list(k: &Value) -> bool {
    matches!(k, Value::Array(items) if items.first().is_some_and(Value::is_object))
}

/// A numeric vector property, static or keyframed.
#[derive(Debug, Clone, PartialEq)]
pub enum AnimatedValue {
    Static(Vec<f64>),
    Keyed(Vec<(f64, Vec<f64>)>),
}

impl AnimatedValue {
    pub fn constant(values: &[f64]) -> Self {
        AnimatedValue::Static(values.to_vec())
    }

    /// Hold-style sample: the value of the last keyframe at or before
    /// `frame`, or the first keyframe before the animation starts.
    pub fn sample(&self, frame: f64) -> Vec<f64> {
        match self {
            AnimatedValue::Static(v) => v.clone(),
            AnimatedValue::Keyed(keys) => {
                let mut current = &keys[0].1;
                for (t, v) in keys {
                    if *t <= frame {
                        current = v;
                    } else {
                        break;
                    }
                }
                current.clone()
            }
        }
    }

    pub fn sample_component(&self, frame: f64, i: usize, default: f64) -> f64 {
        self.sample(frame).get(i).copied().unwrap_or(default)
    }

    pub fn is_animated(&self) -> bool {
        matches!(self, AnimatedValue::Keyed(_))
    }
}

fn numbers(v: &Value, path: &str) -> Result<Vec<f64>> {
    match v {
        Value::Number(_) => Ok(vec![as_f64(v, path)?]),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, x)| as_f64(x, &format!("{path}[{i}]")))
            .collect(),
        _ => Err(Error::structure(path, "expected a number or an array of numbers")),
    }
}

/// Parses a property object `{"a": 0|1, "k": ...}`.
pub(crate) fn parse_animated(prop: &Value, path: &str) -> Result<AnimatedValue> {
    let obj = prop
        .as_object()
        .ok_or_else(|| Error::structure(path, "expected a property object"))?;
    let k = obj
        .get("k")
        .ok_or_else(|| Error::structure(path, "property is missing `k`"))?;
    let kpath = format!("{path}.k");
    if !is_keyframe_list(k) {
        return Ok(AnimatedValue::Static(numbers(k, &kpath)?));
    }
    let items = k.as_array().expect("checked by is_keyframe_list");
    let mut keys: Vec<(f64, Vec<f64>)> = Vec::with_capacity(items.len());
    let mut carried: Option<Vec<f64>> = None;
    for (i, item) in items.iter().enumerate() {
        let ipath = format!("{kpath}[{i}]");
        let kf = item
            .as_object()
            .ok_or_else(|| Error::structure(&ipath, "expected a keyframe object"))?;
        let t = kf
            .get("t")
            .ok_or_else(|| Error::structure(&ipath, "keyframe is missing `t`"))
            .and_then(|t| as_f64(t, &format!("{ipath}.t")))?;
        let value = match kf.get("s") {
            Some(s) => numbers(s, &format!("{ipath}.s"))?,
            // Legacy exports close the list with a time-only keyframe whose
            // value is the previous keyframe's `e`.
            None => carried
                .clone()
                .or_else(|| keys.last().map(|k| k.1.clone()))
                .ok_or_else(|| Error::structure(&ipath, "first keyframe has no value"))?,
        };
        carried = match kf.get("e") {
            Some(e) => Some(numbers(e, &format!("{ipath}.e"))?),
            None => None,
        };
        keys.push((t, value));
    }
    Ok(AnimatedValue::Keyed(keys))
}

pub(crate) fn parse_optional(
    obj: &JsonMap,
    key: &str,
    path: &str,
    default: &[f64],
) -> Result<AnimatedValue> {
    match obj.get(key) {
        Some(v) => parse_animated(v, &format!("{path}.{key}")),
        None => Ok(AnimatedValue::constant(default)),
    }
}
