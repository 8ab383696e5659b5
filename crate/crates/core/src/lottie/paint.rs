//! Solid paint colors (`c` of fills and strokes), static or keyframed.

use serde_json::{json, Value};

use super::value::{as_f64, flag, is_keyframe_list, num, JsonMap};
use crate::color::Rgba;
use crate::error::{Error, Result};

/// How a color array was written: component count and channel scale.
/// Edits keep the dialect of the value they replace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorFormat {
    pub components: u8,
    pub byte_scale: bool,
}

impl Default for ColorFormat {
    fn default() -> Self {
        ColorFormat { components: 4, byte_scale: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorValue {
    pub rgba: Rgba,
    pub format: ColorFormat,
}

impl ColorValue {
    pub fn new(rgba: Rgba) -> Self {
        ColorValue { rgba, format: ColorFormat::default() }
    }

    /// Same dialect, new color.
    pub fn with_rgba(&self, rgba: Rgba) -> Self {
        ColorValue { rgba, format: self.format }
    }

    /// Reads `[r, g, b]` or `[r, g, b, a]`. Any channel above 1 marks the
    /// whole array as 0–255 scaled.
    pub(crate) fn parse(v: &Value, path: &str) -> Result<Self> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::structure(path, "expected a color array"))?;
        if items.len() != 3 && items.len() != 4 {
            return Err(Error::structure(path, format!("color has {} components, expected 3 or 4", items.len())));
        }
        let mut channels = [1.0; 4];
        for (i, item) in items.iter().enumerate() {
            channels[i] = as_f64(item, &format!("{path}[{i}]"))?;
        }
        let byte_scale = channels[..items.len()].iter().any(|&c| c > 1.0);
        let scale = if byte_scale { 255.0 } else { 1.0 };
        let alpha = if items.len() == 4 { channels[3] / scale } else { 1.0 };
        let rgba = Rgba::new(channels[0] / scale, channels[1] / scale, channels[2] / scale, alpha);
        Ok(ColorValue { rgba, format: ColorFormat { components: items.len() as u8, byte_scale } })
    }

    pub(crate) fn to_json(&self) -> Value {
        let c = self.rgba;
        let channels = [c.r, c.g, c.b, c.a];
        let out = channels[..self.format.components as usize]
            .iter()
            .map(|&v| {
                if self.format.byte_scale {
                    let scaled = v * 255.0;
                    let rounded = scaled.round();
                    num(if (scaled - rounded).abs() < 1e-9 { rounded } else { scaled })
                } else {
                    num(v)
                }
            })
            .collect();
        Value::Array(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColorKeyframe {
    pub frame: f64,
    pub value: ColorValue,
    /// Legacy end-of-segment value (`e`).
    pub end: Option<ColorValue>,
    has_start: bool,
    raw: JsonMap,
}

impl ColorKeyframe {
    /// A keyframe with linear in/out easing.
    pub fn linear(frame: f64, value: ColorValue) -> Self {
        let mut raw = JsonMap::new();
        raw.insert("t".into(), Value::Null);
        raw.insert("s".into(), Value::Null);
        raw.insert("i".into(), json!({"x": [1], "y": [1]}));
        raw.insert("o".into(), json!({"x": [0], "y": [0]}));
        ColorKeyframe { frame, value, end: None, has_start: true, raw }
    }

    /// Hold keyframes jump to the next value instead of interpolating.
    pub fn is_hold(&self) -> bool {
        flag(self.raw.get("h"))
    }

    pub fn set_hold(&mut self) {
        self.raw.insert("h".into(), Value::from(1));
        self.raw.remove("i");
        self.raw.remove("o");
    }

    /// Easing and other keyframe fields carried through unchanged.
    pub fn easing(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.raw.iter().filter(|(k, _)| !matches!(k.as_str(), "t" | "s" | "e"))
    }

    fn to_json(&self) -> Value {
        let mut out = self.raw.clone();
        out.insert("t".into(), num(self.frame));
        if self.has_start {
            out.insert("s".into(), self.value.to_json());
        } else {
            out.remove("s");
        }
        match &self.end {
            Some(e) => {
                out.insert("e".into(), e.to_json());
            }
            None => {
                out.remove("e");
            }
        }
        Value::Object(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ColorAnimation {
    Static(ColorValue),
    /// Sorted by strictly increasing frame, never empty.
    Keyframed(Vec<ColorKeyframe>),
}

/// A paint color property. Exactly one of static / keyframed.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorProperty {
    pub animation: ColorAnimation,
    raw: JsonMap,
}

impl ColorProperty {
    pub fn fixed(rgba: Rgba) -> Self {
        let mut raw = JsonMap::new();
        raw.insert("a".into(), Value::Null);
        raw.insert("k".into(), Value::Null);
        ColorProperty { animation: ColorAnimation::Static(ColorValue::new(rgba)), raw }
    }

    pub(crate) fn parse(v: &Value, path: &str) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::structure(path, "expected a color property object"))?;
        let k = obj
            .get("k")
            .ok_or_else(|| Error::structure(path, "color property is missing `k`"))?;
        let kpath = format!("{path}.k");
        let animation = if is_keyframe_list(k) {
            ColorAnimation::Keyframed(parse_keyframes(k.as_array().unwrap(), &kpath)?)
        } else {
            ColorAnimation::Static(ColorValue::parse(k, &kpath)?)
        };
        Ok(ColorProperty { animation, raw: obj.clone() })
    }

    pub(crate) fn to_json(&self) -> Value {
        let mut out = self.raw.clone();
        let animated = self.is_animated();
        if out.contains_key("a") || animated {
            out.insert("a".into(), Value::from(animated as u8));
        }
        let k = match &self.animation {
            ColorAnimation::Static(c) => c.to_json(),
            ColorAnimation::Keyframed(keys) => Value::Array(keys.iter().map(ColorKeyframe::to_json).collect()),
        };
        out.insert("k".into(), k);
        Value::Object(out)
    }

    pub fn is_animated(&self) -> bool {
        matches!(self.animation, ColorAnimation::Keyframed(_))
    }

    pub fn keyframes(&self) -> &[ColorKeyframe] {
        match &self.animation {
            ColorAnimation::Static(_) => &[],
            ColorAnimation::Keyframed(k) => k,
        }
    }

    /// Dialect of the first stored value.
    pub fn format(&self) -> ColorFormat {
        match &self.animation {
            ColorAnimation::Static(c) => c.format,
            ColorAnimation::Keyframed(k) => k[0].value.format,
        }
    }

    /// Hold-style attribution: the start value of the keyframe segment
    /// containing `frame`.
    pub fn value_at_hold(&self, frame: f64) -> Rgba {
        match &self.animation {
            ColorAnimation::Static(c) => c.rgba,
            ColorAnimation::Keyframed(keys) => {
                let idx = keys.iter().rposition(|k| k.frame <= frame).unwrap_or(0);
                keys[idx].value.rgba
            }
        }
    }

    /// Rendered value at `frame`: linear interpolation between keyframes,
    /// jumping at hold keyframes, constant outside the keyed range.
    pub fn value_at(&self, frame: f64) -> Rgba {
        let keys = match &self.animation {
            ColorAnimation::Static(c) => return c.rgba,
            ColorAnimation::Keyframed(keys) => keys,
        };
        if frame <= keys[0].frame {
            return keys[0].value.rgba;
        }
        let idx = keys.iter().rposition(|k| k.frame <= frame).unwrap_or(0);
        let Some(next) = keys.get(idx + 1) else {
            return keys[idx].value.rgba;
        };
        let key = &keys[idx];
        if key.is_hold() {
            return key.value.rgba;
        }
        let target = key.end.map_or(next.value.rgba, |e| e.rgba);
        let t = (frame - key.frame) / (next.frame - key.frame);
        key.value.rgba.lerp(&target, t)
    }

    /// Every distinct color value stored in the property (statics, keyframe
    /// starts and legacy ends), in storage order.
    pub fn stored_colors(&self) -> Vec<Rgba> {
        let mut out: Vec<Rgba> = Vec::new();
        let mut push = |c: Rgba| {
            if !out.iter().any(|o| o.key() == c.key()) {
                out.push(c);
            }
        };
        match &self.animation {
            ColorAnimation::Static(c) => push(c.rgba),
            ColorAnimation::Keyframed(keys) => {
                for k in keys {
                    push(k.value.rgba);
                    if let Some(e) = k.end {
                        push(e.rgba);
                    }
                }
            }
        }
        out
    }

    /// Rewrites stored values through `f`; returns whether anything changed.
    pub fn map_colors(&mut self, mut f: impl FnMut(Rgba) -> Option<Rgba>) -> bool {
        let mut changed = false;
        let mut apply = |v: &mut ColorValue| {
            if let Some(new) = f(v.rgba) {
                if new.key() != v.rgba.key() {
                    v.rgba = new;
                    changed = true;
                }
            }
        };
        match &mut self.animation {
            ColorAnimation::Static(c) => apply(c),
            ColorAnimation::Keyframed(keys) => {
                for k in keys.iter_mut() {
                    apply(&mut k.value);
                    if let Some(e) = k.end.as_mut() {
                        apply(e);
                    }
                }
            }
        }
        changed
    }

    /// Replaces the keyframes, keeping legacy `e` values consistent with the
    /// new neighbours.
    pub(crate) fn set_keyframes(&mut self, mut keys: Vec<ColorKeyframe>) {
        let legacy = keys.iter().any(|k| k.end.is_some());
        let last = keys.len().saturating_sub(1);
        for i in 0..keys.len() {
            let next = keys.get(i + 1).map(|k| k.value);
            let k = &mut keys[i];
            if i < last {
                k.has_start = true;
            }
            if legacy && k.has_start {
                k.end = next;
            }
        }
        self.animation = ColorAnimation::Keyframed(keys);
    }
}

fn parse_keyframes(items: &[Value], path: &str) -> Result<Vec<ColorKeyframe>> {
    let mut keys: Vec<ColorKeyframe> = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let ipath = format!("{path}[{i}]");
        let obj = item
            .as_object()
            .ok_or_else(|| Error::structure(&ipath, "expected a keyframe object"))?;
        let frame = obj
            .get("t")
            .ok_or_else(|| Error::structure(&ipath, "keyframe is missing `t`"))
            .and_then(|t| as_f64(t, &format!("{ipath}.t")))?;
        if let Some(prev) = keys.last() {
            if frame <= prev.frame {
                return Err(Error::structure(&ipath, "keyframe frames must be strictly increasing"));
            }
        }
        let end = obj.get("e").map(|e| ColorValue::parse(e, &format!("{ipath}.e"))).transpose()?;
        let (value, has_start) = match obj.get("s") {
            Some(s) => (ColorValue::parse(s, &format!("{ipath}.s"))?, true),
            None => {
                let prev = keys
                    .last()
                    .ok_or_else(|| Error::structure(&ipath, "first keyframe has no value"))?;
                (prev.end.unwrap_or(prev.value), false)
            }
        };
        keys.push(ColorKeyframe { frame, value, end, has_start, raw: obj.clone() });
    }
    if keys.is_empty() {
        return Err(Error::structure(path, "keyframe list is empty"));
    }
    Ok(keys)
}
