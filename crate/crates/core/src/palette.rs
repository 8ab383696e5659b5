//! The timeline mosaic: for sampled frames, the colors on screen merged by
//! value, stacked in a fixed perceptual order, each block as tall as
//! `alpha · √area`.
//!
//! Block order is decided once, when the palette is first built, by ΔE from
//! LAB black (ties by hex). Later recolors move blocks' colors but never their
//! rank, so an edited color stays where the user found it.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::color::{delta_e, rgb_to_lab, ColorKey, Lab, Rgba};
use crate::error::{Error, Result};
use crate::lottie::{ColorAddress, LottieDocument};
use crate::occurrence::OccurrenceSet;

pub const DEFAULT_ALPHA_MIN: f64 = 0.2;
pub const DEFAULT_ALPHA_MAX: f64 = 4.0;
pub const DEFAULT_ZOOM: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DocBounds {
    pub in_point: f64,
    pub out_point: f64,
    pub frame_rate: f64,
}

impl DocBounds {
    pub fn of(doc: &LottieDocument) -> Self {
        DocBounds { in_point: doc.in_point, out_point: doc.out_point, frame_rate: doc.frame_rate }
    }

    /// Two columns per second.
    pub fn default_step(&self) -> f64 {
        (self.frame_rate / 2.0).max(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PaletteConfig {
    /// Frames per column; `None` means two columns per second.
    pub step: Option<f64>,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub zoom: f64,
}

impl Default for PaletteConfig {
    fn default() -> Self {
        PaletteConfig { step: None, alpha_min: DEFAULT_ALPHA_MIN, alpha_max: DEFAULT_ALPHA_MAX, zoom: DEFAULT_ZOOM }
    }
}

impl PaletteConfig {
    pub fn alpha(&self) -> f64 {
        zoom_alpha(self.alpha_min, self.alpha_max, self.zoom)
    }
}

/// `alpha_min + zoom/100 · (alpha_max − alpha_min)`.
pub fn zoom_alpha(alpha_min: f64, alpha_max: f64, zoom_percent: f64) -> f64 {
    alpha_min + (zoom_percent / 100.0) * (alpha_max - alpha_min)
}

/// Position of a color in the stacking order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderKey {
    /// ΔE from LAB (0, 0, 0) of the color as it was when ranked.
    pub sort_key: f64,
    /// Lowercase hex of that color.
    pub tie: String,
}

impl OrderKey {
    pub fn of(color: &Rgba) -> Self {
        OrderKey { sort_key: sort_key(color), tie: color.to_hex() }
    }

    fn cmp(&self, other: &OrderKey) -> Ordering {
        self.sort_key.total_cmp(&other.sort_key).then_with(|| self.tie.cmp(&other.tie))
    }
}

/// ΔE between a color and LAB black.
pub fn sort_key(color: &Rgba) -> f64 {
    delta_e(rgb_to_lab(*color), Lab { l: 0.0, a: 0.0, b: 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub original: Rgba,
    pub current: Rgba,
    pub key: OrderKey,
}

/// Color ranking captured at build time. Entries follow their color through
/// recolors; their keys never change.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct FrozenOrder {
    entries: Vec<RankEntry>,
}

impl FrozenOrder {
    pub fn from_colors(colors: &[Rgba]) -> Self {
        let mut order = FrozenOrder::default();
        order.extend(colors);
        order
    }

    /// Ranks colors not seen before by their own key; existing entries are
    /// untouched.
    pub fn extend(&mut self, colors: &[Rgba]) {
        for c in colors {
            if !self.contains(c) {
                self.entries.push(RankEntry { original: *c, current: *c, key: OrderKey::of(c) });
            }
        }
        self.entries.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.original.canonical_cmp(&b.original)));
    }

    pub fn contains(&self, color: &Rgba) -> bool {
        let key = color.key();
        self.entries.iter().any(|e| e.current.key() == key)
    }

    pub fn entries(&self) -> &[RankEntry] {
        &self.entries
    }

    /// Stacking key of a color currently in the palette: the smallest key of
    /// the entries that now carry it. Unranked colors use their own key.
    pub fn key_of(&self, color: &Rgba) -> OrderKey {
        let key = color.key();
        self.entries
            .iter()
            .filter(|e| e.current.key() == key)
            .map(|e| &e.key)
            .min_by(|a, b| a.cmp(b))
            .cloned()
            .unwrap_or_else(|| OrderKey::of(color))
    }

    /// Rank of a current color, 0 = bottom of the stack.
    pub fn rank_of(&self, color: &Rgba) -> Option<usize> {
        let key = color.key();
        self.entries.iter().position(|e| e.current.key() == key)
    }

    fn recolor(&mut self, mapping: &HashMap<ColorKey, Rgba>) {
        for e in &mut self.entries {
            if let Some(new) = mapping.get(&e.current.key()) {
                e.current = *new;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorBlock {
    pub color: Rgba,
    pub height: f64,
    /// Paints showing this color in the column, in document order.
    pub occurrences: Vec<ColorAddress>,
    /// Frozen stacking key (ΔE from black when ranked).
    pub sort_key: f64,
    pub merged_area: f64,
    #[serde(skip)]
    order: OrderKey,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaletteColumn {
    pub frame: f64,
    /// Bottom-to-top stacking order.
    pub blocks: Vec<ColorBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenePalette {
    pub columns: Vec<PaletteColumn>,
    pub alpha: f64,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub step: f64,
    pub bounds: DocBounds,
    pub order: FrozenOrder,
}

fn column_frames(bounds: &DocBounds, step: f64) -> Vec<f64> {
    let mut frames = Vec::new();
    let mut i = 0u64;
    loop {
        let f = bounds.in_point + i as f64 * step;
        if f >= bounds.out_point {
            break;
        }
        frames.push(f);
        i += 1;
    }
    frames
}

fn build_column(set: &OccurrenceSet, frame: f64, alpha: f64, order: &FrozenOrder) -> PaletteColumn {
    let mut index: HashMap<ColorKey, usize> = HashMap::new();
    let mut blocks: Vec<(Rgba, f64, BTreeSet<ColorAddress>)> = Vec::new();
    for occ in set.occurrences.iter().filter(|o| o.interval.contains(frame)) {
        let slot = *index.entry(occ.color.key()).or_insert_with(|| {
            blocks.push((occ.color, 0.0, BTreeSet::new()));
            blocks.len() - 1
        });
        blocks[slot].1 += occ.area;
        blocks[slot].2.insert(occ.address.clone());
    }
    let mut blocks: Vec<ColorBlock> = blocks
        .into_iter()
        .map(|(color, area, addresses)| {
            let order = order.key_of(&color);
            ColorBlock {
                color,
                height: alpha * area.sqrt(),
                occurrences: addresses.into_iter().collect(),
                sort_key: order.sort_key,
                merged_area: area,
                order,
            }
        })
        .collect();
    sort_blocks(&mut blocks);
    PaletteColumn { frame, blocks }
}

fn sort_blocks(blocks: &mut [ColorBlock]) {
    blocks.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.color.canonical_cmp(&b.color)));
}

/// Builds the palette, ranking all of the set's colors afresh.
pub fn build_palette(set: &OccurrenceSet, bounds: DocBounds, step: f64, alpha: f64) -> Result<ScenePalette> {
    let order = FrozenOrder::from_colors(&set.distinct_colors());
    build_palette_with_order(set, bounds, step, alpha, &order)
}

/// Builds the palette reusing a previously captured ranking; colors it does
/// not know are ranked by their own key.
pub fn build_palette_with_order(
    set: &OccurrenceSet,
    bounds: DocBounds,
    step: f64,
    alpha: f64,
    order: &FrozenOrder,
) -> Result<ScenePalette> {
    if !(step >= 1.0) {
        return Err(Error::InvalidParameter(format!("column step must be at least 1 frame, got {step}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    let mut order = order.clone();
    order.extend(&set.distinct_colors());
    let columns = column_frames(&bounds, step)
        .into_iter()
        .map(|f| build_column(set, f, alpha, &order))
        .collect();
    Ok(ScenePalette {
        columns,
        alpha,
        alpha_min: DEFAULT_ALPHA_MIN.min(alpha),
        alpha_max: DEFAULT_ALPHA_MAX.max(alpha),
        step,
        bounds,
        order,
    })
}

/// Convenience: palette for a document under `config`.
pub fn palette_for(set: &OccurrenceSet, bounds: DocBounds, config: &PaletteConfig) -> Result<ScenePalette> {
    let step = config.step.unwrap_or_else(|| bounds.default_step());
    let mut palette = build_palette(set, bounds, step, config.alpha())?;
    palette.alpha_min = config.alpha_min;
    palette.alpha_max = config.alpha_max;
    Ok(palette)
}

impl ScenePalette {
    /// Rescales to the zoom level (percent); blocks and order are unchanged.
    pub fn rezoom(&self, zoom_percent: f64) -> Result<ScenePalette> {
        if !(0.0..=100.0).contains(&zoom_percent) {
            return Err(Error::InvalidParameter(format!("zoom must be within [0, 100], got {zoom_percent}")));
        }
        let alpha = zoom_alpha(self.alpha_min, self.alpha_max, zoom_percent);
        let mut out = self.clone();
        out.alpha = alpha;
        for block in out.columns.iter_mut().flat_map(|c| c.blocks.iter_mut()) {
            block.height = alpha * block.merged_area.sqrt();
        }
        Ok(out)
    }

    /// Zoom percent corresponding to the current alpha.
    pub fn zoom(&self) -> f64 {
        if self.alpha_max == self.alpha_min {
            return 0.0;
        }
        (self.alpha - self.alpha_min) / (self.alpha_max - self.alpha_min) * 100.0
    }

    /// Replaces block colors through `mapping` without re-ranking. Blocks
    /// that end up sharing a color merge at the lower position.
    pub fn recolor_blocks(&self, mapping: &[(Rgba, Rgba)]) -> Result<ScenePalette> {
        for (old, _) in mapping {
            if !self.order.contains(old) {
                return Err(Error::UnknownColor(old.to_hex()));
            }
        }
        let lookup: HashMap<ColorKey, Rgba> = mapping.iter().map(|(o, n)| (o.key(), *n)).collect();
        let mut out = self.clone();
        out.order.recolor(&lookup);
        for column in &mut out.columns {
            let mut merged: Vec<ColorBlock> = Vec::with_capacity(column.blocks.len());
            let mut index: HashMap<ColorKey, usize> = HashMap::with_capacity(column.blocks.len());
            for mut block in column.blocks.drain(..) {
                if let Some(new) = lookup.get(&block.color.key()) {
                    block.color = *new;
                }
                match index.get(&block.color.key()).map(|&i| &mut merged[i]) {
                    Some(existing) => {
                        existing.merged_area += block.merged_area;
                        let mut addrs: BTreeSet<ColorAddress> = existing.occurrences.drain(..).collect();
                        addrs.extend(block.occurrences);
                        existing.occurrences = addrs.into_iter().collect();
                        existing.height = out.alpha * existing.merged_area.sqrt();
                    }
                    None => {
                        index.insert(block.color.key(), merged.len());
                        merged.push(block);
                    }
                }
            }
            for block in &mut merged {
                block.order = out.order.key_of(&block.color);
                block.sort_key = block.order.sort_key;
            }
            sort_blocks(&mut merged);
            column.blocks = merged;
        }
        Ok(out)
    }

    /// The column sampled at the largest frame not after `frame`.
    pub fn column_at_frame(&self, frame: f64) -> Result<&PaletteColumn> {
        let b = &self.bounds;
        if !(frame >= b.in_point && frame < b.out_point) || self.columns.is_empty() {
            return Err(Error::OutOfBounds { frame, start: b.in_point, end: b.out_point });
        }
        let idx = ((frame - b.in_point) / self.step).floor() as usize;
        Ok(&self.columns[idx.min(self.columns.len() - 1)])
    }

    /// Static SVG mosaic: one rect per block, columns left to right, blocks
    /// stacked upward from the baseline in rank order.
    pub fn to_svg(&self, column_width: f64) -> String {
        let tallest = self
            .columns
            .iter()
            .map(|c| c.blocks.iter().map(|b| b.height).sum::<f64>())
            .fold(0.0, f64::max);
        let width = column_width * self.columns.len() as f64;
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{tallest}\" viewBox=\"0 0 {width} {tallest}\">\n"
        );
        for (i, column) in self.columns.iter().enumerate() {
            let x = i as f64 * column_width;
            let mut y = tallest;
            for block in &column.blocks {
                y -= block.height;
                svg.push_str(&format!(
                    "  <rect x=\"{x}\" y=\"{y}\" width=\"{column_width}\" height=\"{}\" fill=\"{}\" data-frame=\"{}\"/>\n",
                    block.height,
                    block.color.to_hex(),
                    column.frame
                ));
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lottie::PaintSlot;
    use crate::occurrence::{ColorOccurrence, FrameInterval};

    fn occ(layer: usize, color: Rgba, area: f64, start: f64, end: f64) -> ColorOccurrence {
        ColorOccurrence {
            address: ColorAddress::new(layer, vec![1], PaintSlot::Fill),
            color,
            opacity: 1.0,
            area,
            interval: FrameInterval::new(start, end),
            element_id: format!("l#{layer}"),
            animated: false,
        }
    }

    fn set(occurrences: Vec<ColorOccurrence>) -> OccurrenceSet {
        let total_weight = occurrences.iter().map(|o| o.weight()).sum();
        OccurrenceSet { occurrences, total_weight, warnings: vec![] }
    }

    const BOUNDS: DocBounds = DocBounds { in_point: 0.0, out_point: 60.0, frame_rate: 30.0 };

    #[test]
    fn single_color_height_is_root_area() {
        let p = build_palette(&set(vec![occ(0, Rgba::WHITE, 16.0, 0.0, 60.0)]), BOUNDS, 15.0, 1.0).unwrap();
        assert_eq!(p.columns.len(), 4);
        assert!(p.columns.iter().all(|c| c.blocks.len() == 1 && c.blocks[0].height == 4.0));
    }

    #[test]
    fn identical_colors_merge_before_root() {
        let red = Rgba::opaque(1.0, 0.0, 0.0);
        let p = build_palette(&set(vec![occ(0, red, 9.0, 0.0, 60.0), occ(1, red, 16.0, 0.0, 60.0)]), BOUNDS, 30.0, 2.0)
            .unwrap();
        let b = &p.columns[0].blocks;
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].merged_area, 25.0);
        assert_eq!(b[0].height, 10.0);
        assert_eq!(b[0].occurrences.len(), 2);
    }

    #[test]
    fn zoom_endpoints() {
        let p = build_palette(&set(vec![occ(0, Rgba::WHITE, 16.0, 0.0, 60.0)]), BOUNDS, 15.0, 1.0).unwrap();
        assert_eq!(p.rezoom(0.0).unwrap().alpha, DEFAULT_ALPHA_MIN);
        assert_eq!(p.rezoom(100.0).unwrap().alpha, DEFAULT_ALPHA_MAX);
        let mid = p.rezoom(50.0).unwrap();
        assert!((mid.alpha - 2.1).abs() < 1e-12);
        assert!((mid.columns[0].blocks[0].height - 2.1 * 4.0).abs() < 1e-12);
        assert!(p.rezoom(101.0).is_err());
    }

    #[test]
    fn columns_floor_to_step_grid() {
        let p = build_palette(&set(vec![occ(0, Rgba::WHITE, 1.0, 0.0, 60.0)]), BOUNDS, 12.0, 1.0).unwrap();
        assert_eq!(p.column_at_frame(30.0).unwrap().frame, 24.0);
        assert_eq!(p.column_at_frame(0.0).unwrap().frame, 0.0);
        assert_eq!(p.column_at_frame(59.0).unwrap().frame, 48.0);
        assert!(p.column_at_frame(60.0).is_err());
        assert!(p.column_at_frame(-1.0).is_err());
    }

    #[test]
    fn recolor_keeps_rank() {
        let dark = Rgba::from_hex("#101010").unwrap();
        let light = Rgba::from_hex("#c0c0c0").unwrap();
        let p = build_palette(&set(vec![occ(0, dark, 4.0, 0.0, 60.0), occ(1, light, 4.0, 0.0, 60.0)]), BOUNDS, 30.0, 1.0)
            .unwrap();
        let q = p.recolor_blocks(&[(dark, Rgba::WHITE)]).unwrap();
        let first = &q.columns[0].blocks[0];
        assert_eq!(first.color, Rgba::WHITE);
        assert_eq!(first.sort_key, sort_key(&dark));
        assert_eq!(p.recolor_blocks(&[]).unwrap(), p);
        assert_eq!(p.recolor_blocks(&[(Rgba::BLACK, Rgba::WHITE)]), Err(Error::UnknownColor("#000000".into())));
    }

    #[test]
    fn rejects_bad_parameters() {
        let s = set(vec![]);
        assert!(build_palette(&s, BOUNDS, 0.5, 1.0).is_err());
        assert!(build_palette(&s, BOUNDS, 1.0, 0.0).is_err());
        assert!(build_palette(&s, BOUNDS, 1.0, 1.0).unwrap().columns.iter().all(|c| c.blocks.is_empty()));
    }
}
