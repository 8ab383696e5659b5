//! Flattens a document into color occurrences: one record per paint and
//! color segment, carrying the painted geometry's approximate area and the
//! frames during which the color is shown.

use std::collections::HashMap;

use serde::Serialize;

use crate::color::{ColorKey, Rgba};
use crate::error::{Error, Result};
use crate::geometry::{bounding_box_area, rect_area, Affine};
use crate::lottie::{ColorAddress, ColorAnimation, Layer, LayerType, LottieDocument, Paint, PaintSlot, ShapeItem, ShapeKind};

/// Half-open frame interval `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameInterval {
    pub start: f64,
    pub end: f64,
}

impl FrameInterval {
    pub fn new(start: f64, end: f64) -> Self {
        FrameInterval { start, end }
    }

    pub fn contains(&self, frame: f64) -> bool {
        self.start <= frame && frame < self.end
    }

    pub fn duration(&self) -> f64 {
        (self.end - self.start).max(0.0)
    }

    pub fn intersect(&self, other: &FrameInterval) -> FrameInterval {
        let start = self.start.max(other.start);
        FrameInterval { start, end: self.end.min(other.end).max(start) }
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorOccurrence {
    pub address: ColorAddress,
    pub color: Rgba,
    /// Paint opacity in `[0, 1]` at the start of the interval.
    pub opacity: f64,
    /// Sum of the bounding-box areas of the geometry the paint applies to.
    pub area: f64,
    pub interval: FrameInterval,
    pub element_id: String,
    pub animated: bool,
}

impl ColorOccurrence {
    /// Visual presence: area × frames shown.
    pub fn weight(&self) -> f64 {
        self.area * self.interval.duration()
    }
}

/// Something the extractor skipped or could not measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtractionWarning {
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct OccurrenceSet {
    pub occurrences: Vec<ColorOccurrence>,
    pub total_weight: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<ExtractionWarning>,
}

/// Identifier of a layer in element listings: display name and position.
pub fn element_id(layer: &Layer, position: usize) -> String {
    format!("{}#{}", layer.display_name(position), position)
}

/// World transform of a layer at `frame`, including its parent chain.
pub fn layer_matrix(doc: &LottieDocument, position: usize, frame: f64) -> Affine {
    let mut matrix = doc.layers[position].transform.matrix_at(frame);
    let mut parent = doc.layers[position].parent;
    // Bounded walk: a malformed parent cycle must not hang extraction.
    for _ in 0..doc.layers.len() {
        let Some(layer) = parent.and_then(|id| doc.layer_by_id(id)) else {
            break;
        };
        matrix = layer.transform.matrix_at(frame).then_inner(&matrix);
        parent = layer.parent;
    }
    matrix
}

/// Visible interval of a layer clipped to the document.
pub fn layer_interval(doc: &LottieDocument, layer: &Layer) -> FrameInterval {
    FrameInterval::new(layer.in_point, layer.out_point).intersect(&FrameInterval::new(doc.in_point, doc.out_point))
}

fn group_matrix(items: &[ShapeItem], base: &Affine, frame: f64) -> Affine {
    items
        .iter()
        .find_map(|item| match &item.kind {
            ShapeKind::Transform(t) => Some(base.then_inner(&t.matrix_at(frame))),
            _ => None,
        })
        .unwrap_or(*base)
}

/// Bounding-box area of one item's geometry; groups sum their contents.
fn geometry_area(item: &ShapeItem, matrix: &Affine, frame: f64) -> f64 {
    match &item.kind {
        ShapeKind::Path(path) => bounding_box_area(path, matrix),
        ShapeKind::Rect { position, size } | ShapeKind::Ellipse { position, size } => {
            let p = [position.sample_component(frame, 0, 0.0), position.sample_component(frame, 1, 0.0)];
            let s = [size.sample_component(frame, 0, 0.0), size.sample_component(frame, 1, 0.0)];
            rect_area(p, s, matrix)
        }
        ShapeKind::Group(children) => {
            let inner = group_matrix(children, matrix, frame);
            children.iter().map(|c| geometry_area(c, &inner, frame)).sum()
        }
        _ => 0.0,
    }
}

struct Walker<'a> {
    doc: &'a LottieDocument,
    out: OccurrenceSet,
}

impl Walker<'_> {
    fn walk(
        &mut self,
        items: &[ShapeItem],
        matrix: &Affine,
        frame: f64,
        layer: usize,
        prefix: &mut Vec<usize>,
        visible: FrameInterval,
        element: &str,
    ) {
        let matrix = group_matrix(items, matrix, frame);
        // A paint covers every geometry listed before it in the same group.
        let mut covered = 0.0;
        for (i, item) in items.iter().enumerate() {
            prefix.push(i);
            match &item.kind {
                ShapeKind::Fill(p) | ShapeKind::Stroke(p) => {
                    let slot = if matches!(item.kind, ShapeKind::Fill(_)) { PaintSlot::Fill } else { PaintSlot::Stroke };
                    let address = ColorAddress::new(layer, prefix.clone(), slot);
                    self.push_paint(address, p, covered, visible, element);
                }
                ShapeKind::Group(children) => {
                    self.walk(children, &matrix, frame, layer, prefix, visible, element);
                    covered += geometry_area(item, &matrix, frame);
                }
                ShapeKind::Path(path) => {
                    if path.is_empty() {
                        self.warn(layer, prefix, "path has no vertices; area 0");
                    }
                    covered += geometry_area(item, &matrix, frame);
                }
                ShapeKind::Rect { .. } | ShapeKind::Ellipse { .. } => covered += geometry_area(item, &matrix, frame),
                ShapeKind::Unsupported(ty) if matches!(ty.as_str(), "gf" | "gs") => {
                    self.warn(layer, prefix, "gradient paint is not analyzed");
                }
                _ => {}
            }
            prefix.pop();
        }
    }

    fn warn(&mut self, layer: usize, prefix: &[usize], message: &str) {
        let mut location = format!("/layers/{layer}");
        for (depth, idx) in prefix.iter().enumerate() {
            location.push_str(if depth == 0 { "/shapes/" } else { "/it/" });
            location.push_str(&idx.to_string());
        }
        self.out.warnings.push(ExtractionWarning { location, message: message.to_string() });
    }

    fn push_paint(&mut self, address: ColorAddress, paint: &Paint, area: f64, visible: FrameInterval, element: &str) {
        let opacity_at = |frame: f64| (paint.opacity.sample_component(frame, 0, 100.0) / 100.0).clamp(0.0, 1.0);
        let emit = |color: Rgba, interval: FrameInterval, animated: bool, out: &mut OccurrenceSet| {
            out.occurrences.push(ColorOccurrence {
                address: address.clone(),
                color,
                opacity: opacity_at(interval.start),
                area,
                interval,
                element_id: element.to_string(),
                animated,
            });
        };
        match &paint.color.animation {
            ColorAnimation::Static(c) => emit(c.rgba, visible, false, &mut self.out),
            ColorAnimation::Keyframed(keys) => {
                let before = self.out.occurrences.len();
                for (i, key) in keys.iter().enumerate() {
                    let start = if i == 0 { f64::NEG_INFINITY } else { key.frame };
                    let end = keys.get(i + 1).map_or(f64::INFINITY, |k| k.frame);
                    let segment = FrameInterval::new(start, end).intersect(&visible);
                    if !segment.is_empty() {
                        emit(key.value.rgba, segment, true, &mut self.out);
                    }
                }
                if self.out.occurrences.len() == before {
                    // Never visible: keep the paint addressable with zero weight.
                    let at = FrameInterval::new(visible.start, visible.start);
                    emit(paint.color.value_at_hold(visible.start), at, true, &mut self.out);
                }
            }
        }
    }
}

/// Every color occurrence in document order.
pub fn extract_occurrences(doc: &LottieDocument) -> OccurrenceSet {
    let mut walker = Walker { doc, out: OccurrenceSet::default() };
    for (li, layer) in doc.layers.iter().enumerate() {
        if layer.layer_type != LayerType::Shape {
            continue;
        }
        let visible = layer_interval(walker.doc, layer);
        let matrix = layer_matrix(walker.doc, li, visible.start);
        let element = element_id(layer, li);
        walker.walk(&layer.shapes, &matrix, visible.start, li, &mut Vec::new(), visible, &element);
    }
    let mut set = walker.out;
    set.total_weight = set.occurrences.iter().map(ColorOccurrence::weight).sum();
    set
}

impl OccurrenceSet {
    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    /// Summed weight per distinct color, colors in canonical order.
    pub fn color_weights(&self) -> Vec<(Rgba, f64)> {
        let mut index: HashMap<ColorKey, usize> = HashMap::new();
        let mut out: Vec<(Rgba, f64)> = Vec::new();
        for occ in &self.occurrences {
            let slot = *index.entry(occ.color.key()).or_insert_with(|| {
                out.push((occ.color, 0.0));
                out.len() - 1
            });
            out[slot].1 += occ.weight();
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        out
    }

    /// Distinct colors in canonical order.
    pub fn distinct_colors(&self) -> Vec<Rgba> {
        self.color_weights().into_iter().map(|(c, _)| c).collect()
    }

    pub fn contains_color(&self, color: &Rgba) -> bool {
        let key = color.key();
        self.occurrences.iter().any(|o| o.color.key() == key)
    }

    /// Each distinct color's share of the total weight.
    pub fn proportions(&self) -> Result<Vec<(Rgba, f64)>> {
        if self.total_weight <= 0.0 {
            return Err(Error::ZeroWeightDocument);
        }
        Ok(self
            .color_weights()
            .into_iter()
            .map(|(c, w)| (c, w / self.total_weight))
            .collect())
    }

    /// Distinct document colors whose hex notation is `hex`.
    pub fn colors_with_hex(&self, hex: &Rgba) -> Vec<Rgba> {
        let target = hex.to_hex();
        self.distinct_colors().into_iter().filter(|c| c.to_hex() == target).collect()
    }
}

/// Share of the total weight carried by exactly `color`.
pub fn proportion(set: &OccurrenceSet, color: &Rgba) -> Result<f64> {
    if set.total_weight <= 0.0 {
        return Err(Error::ZeroWeightDocument);
    }
    let key = color.key();
    let weight: f64 = set
        .occurrences
        .iter()
        .filter(|o| o.color.key() == key)
        .map(ColorOccurrence::weight)
        .sum();
    Ok(weight / set.total_weight)
}
