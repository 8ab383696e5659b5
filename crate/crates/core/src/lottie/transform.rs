use serde_json::Value;

use super::value::{flag, parse_optional, AnimatedValue, JsonMap};
use crate::error::{Error, Result};
use crate::geometry::Affine;

#[derive(Debug, Clone, PartialEq)]
pub enum Position {
    Combined(AnimatedValue),
    Split { x: AnimatedValue, y: AnimatedValue },
}

/// Layer (`ks`) or group (`tr`) transform: anchor, position, scale in
/// percent, rotation in degrees. Skew is not modeled.
#[derive(Debug, Clone, PartialEq)]
pub struct Transform2D {
    pub anchor: AnimatedValue,
    pub position: Position,
    pub scale: AnimatedValue,
    pub rotation: AnimatedValue,
}

impl Default for Transform2D {
    fn default() -> Self {
        Transform2D {
            anchor: AnimatedValue::constant(&[0.0, 0.0]),
            position: Position::Combined(AnimatedValue::constant(&[0.0, 0.0])),
            scale: AnimatedValue::constant(&[100.0, 100.0]),
            rotation: AnimatedValue::constant(&[0.0]),
        }
    }
}

impl Transform2D {
    pub(crate) fn parse(obj: &JsonMap, path: &str) -> Result<Self> {
        let position = match obj.get("p") {
            Some(Value::Object(p)) if flag(p.get("s")) => Position::Split {
                x: parse_optional(p, "x", &format!("{path}.p"), &[0.0])?,
                y: parse_optional(p, "y", &format!("{path}.p"), &[0.0])?,
            },
            Some(_) => Position::Combined(parse_optional(obj, "p", path, &[0.0, 0.0])?),
            None => Position::Combined(AnimatedValue::constant(&[0.0, 0.0])),
        };
        let rotation_key = if obj.contains_key("r") { "r" } else { "rz" };
        Ok(Transform2D {
            anchor: parse_optional(obj, "a", path, &[0.0, 0.0])?,
            position,
            scale: parse_optional(obj, "s", path, &[100.0, 100.0])?,
            rotation: parse_optional(obj, rotation_key, path, &[0.0])?,
        })
    }

    pub(crate) fn parse_value(v: Option<&Value>, path: &str) -> Result<Self> {
        match v {
            None => Ok(Self::default()),
            Some(Value::Object(obj)) => Self::parse(obj, path),
            Some(_) => Err(Error::structure(path, "expected a transform object")),
        }
    }

    /// `T(position) · R(rotation) · S(scale/100) · T(-anchor)` sampled
    /// hold-style at `frame`.
    pub fn matrix_at(&self, frame: f64) -> Affine {
        let (px, py) = match &self.position {
            Position::Combined(p) => (p.sample_component(frame, 0, 0.0), p.sample_component(frame, 1, 0.0)),
            Position::Split { x, y } => (x.sample_component(frame, 0, 0.0), y.sample_component(frame, 0, 0.0)),
        };
        let ax = self.anchor.sample_component(frame, 0, 0.0);
        let ay = self.anchor.sample_component(frame, 1, 0.0);
        let sx = self.scale.sample_component(frame, 0, 100.0) / 100.0;
        let sy = self.scale.sample_component(frame, 1, sx * 100.0) / 100.0;
        let rot = self.rotation.sample_component(frame, 0, 0.0);
        Affine::translate(px, py)
            .then_inner(&Affine::rotate_degrees(rot))
            .then_inner(&Affine::scale(sx, sy))
            .then_inner(&Affine::translate(-ax, -ay))
    }
}
