use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::{LottieDocument, Paint, ShapeItem, ShapeKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaintSlot {
    Fill,
    Stroke,
}

/// Stable handle to one fill or stroke: the layer's position in the layer
/// list, then child indices from the layer's `shapes` down through group
/// `it` lists. Ordering follows document order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorAddress {
    pub layer_index: usize,
    pub shape_path: Vec<usize>,
    pub slot: PaintSlot,
}

impl ColorAddress {
    pub fn new(layer_index: usize, shape_path: Vec<usize>, slot: PaintSlot) -> Self {
        ColorAddress { layer_index, shape_path, slot }
    }

    /// JSON pointer of the paint's color property (`.../c`).
    pub fn json_pointer(&self) -> String {
        let mut out = format!("/layers/{}", self.layer_index);
        for (depth, idx) in self.shape_path.iter().enumerate() {
            out.push_str(if depth == 0 { "/shapes/" } else { "/it/" });
            out.push_str(&idx.to_string());
        }
        out.push_str("/c");
        out
    }
}

impl fmt::Display for ColorAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slot = match self.slot {
            PaintSlot::Fill => "fill",
            PaintSlot::Stroke => "stroke",
        };
        let path: Vec<String> = self.shape_path.iter().map(usize::to_string).collect();
        write!(f, "layer {} / [{}] / {slot}", self.layer_index, path.join(","))
    }
}

fn slot_matches(item: &ShapeItem, slot: PaintSlot) -> bool {
    matches!(
        (&item.kind, slot),
        (ShapeKind::Fill(_), PaintSlot::Fill) | (ShapeKind::Stroke(_), PaintSlot::Stroke)
    )
}

/// The unique paint at `addr`.
pub fn resolve_address<'a>(doc: &'a LottieDocument, addr: &ColorAddress) -> Result<&'a Paint> {
    let not_found = || Error::AddressNotFound(addr.clone());
    let layer = doc.layers.get(addr.layer_index).ok_or_else(not_found)?;
    let (first, rest) = addr.shape_path.split_first().ok_or_else(not_found)?;
    let mut item = layer.shapes.get(*first).ok_or_else(not_found)?;
    for idx in rest {
        item = item.children().get(*idx).ok_or_else(not_found)?;
    }
    if !slot_matches(item, addr.slot) {
        return Err(not_found());
    }
    item.paint().ok_or_else(not_found)
}

pub fn resolve_address_mut<'a>(doc: &'a mut LottieDocument, addr: &ColorAddress) -> Result<&'a mut Paint> {
    let not_found = || Error::AddressNotFound(addr.clone());
    let layer = doc.layers.get_mut(addr.layer_index).ok_or_else(not_found)?;
    let (first, rest) = addr.shape_path.split_first().ok_or_else(not_found)?;
    let mut item = layer.shapes.get_mut(*first).ok_or_else(not_found)?;
    for idx in rest {
        item = match &mut item.kind {
            ShapeKind::Group(children) => children.get_mut(*idx).ok_or_else(not_found)?,
            _ => return Err(not_found()),
        };
    }
    if !slot_matches(item, addr.slot) {
        return Err(not_found());
    }
    item.paint_mut().ok_or_else(not_found)
}

/// All fills and strokes of shape layers, in document (pre-)order.
pub fn paints(doc: &LottieDocument) -> Vec<(ColorAddress, &Paint)> {
    fn walk<'a>(items: &'a [ShapeItem], layer: usize, prefix: &mut Vec<usize>, out: &mut Vec<(ColorAddress, &'a Paint)>) {
        for (i, item) in items.iter().enumerate() {
            prefix.push(i);
            match &item.kind {
                ShapeKind::Fill(p) => out.push((ColorAddress::new(layer, prefix.clone(), PaintSlot::Fill), p)),
                ShapeKind::Stroke(p) => out.push((ColorAddress::new(layer, prefix.clone(), PaintSlot::Stroke), p)),
                ShapeKind::Group(children) => walk(children, layer, prefix, out),
                _ => {}
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for (li, layer) in doc.layers.iter().enumerate() {
        walk(&layer.shapes, li, &mut Vec::new(), &mut out);
    }
    out
}

/// Addresses of every fill and stroke, in document order.
pub fn paint_addresses(doc: &LottieDocument) -> Vec<ColorAddress> {
    paints(doc).into_iter().map(|(a, _)| a).collect()
}

/// Visits every fill and stroke mutably, in document order.
pub fn for_each_paint_mut(doc: &mut LottieDocument, mut f: impl FnMut(&ColorAddress, &mut Paint)) {
    fn walk(
        items: &mut [ShapeItem],
        layer: usize,
        prefix: &mut Vec<usize>,
        f: &mut dyn FnMut(&ColorAddress, &mut Paint),
    ) {
        for (i, item) in items.iter_mut().enumerate() {
            prefix.push(i);
            match &mut item.kind {
                ShapeKind::Fill(p) => f(&ColorAddress::new(layer, prefix.clone(), PaintSlot::Fill), p),
                ShapeKind::Stroke(p) => f(&ColorAddress::new(layer, prefix.clone(), PaintSlot::Stroke), p),
                ShapeKind::Group(children) => walk(children, layer, prefix, f),
                _ => {}
            }
            prefix.pop();
        }
    }
    for (li, layer) in doc.layers.iter_mut().enumerate() {
        walk(&mut layer.shapes, li, &mut Vec::new(), &mut f);
    }
}

/// Every distinct color value stored in any paint, in document order.
pub fn stored_colors(doc: &LottieDocument) -> Vec<crate::color::Rgba> {
    let mut out: Vec<crate::color::Rgba> = Vec::new();
    for (_, paint) in paints(doc) {
        for c in paint.color.stored_colors() {
            if !out.iter().any(|o| o.key() == c.key()) {
                out.push(c);
            }
        }
    }
    out
}
