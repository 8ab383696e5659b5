//! Color edits: recolor one color everywhere, recolor one paint around a
//! single frame, or shift a group of colors along one HSL channel. Edits run
//! as commands that snapshot the paints they touch, so they can be undone
//! exactly.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::color::{hsl_to_rgb, normalize_hue, rgb_to_hsl, ColorKey, Hsl, Rgba};
use crate::error::{Error, Result};
use crate::lottie::{
    for_each_paint_mut, resolve_address, resolve_address_mut, stored_colors, ColorAddress, ColorKeyframe,
    ColorProperty, LottieDocument,
};
use crate::occurrence::OccurrenceSet;
use crate::theme::similar_colors;

/// Frames on each side of a frame-isolated edit.
pub const DEFAULT_RAMP: f64 = 6.0;

/// Old color → new color, one entry per edited color.
pub type ColorMapping = Vec<(Rgba, Rgba)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HslChannel {
    Hue,
    Saturation,
    Lightness,
}

/// A single-channel HSL adjustment: degrees for hue, `[-1, 1]` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HslShift {
    pub channel: HslChannel,
    pub delta: f64,
}

impl HslShift {
    pub fn hue(delta: f64) -> Self {
        HslShift { channel: HslChannel::Hue, delta }
    }

    pub fn saturation(delta: f64) -> Self {
        HslShift { channel: HslChannel::Saturation, delta }
    }

    pub fn lightness(delta: f64) -> Self {
        HslShift { channel: HslChannel::Lightness, delta }
    }
}

/// Applies `shift` to one color. Hue wraps around the circle; saturation
/// and lightness clamp to `[0, 1]`. A shift that leaves the channel where it
/// was returns the input bit-for-bit, and hue shifts leave achromatic colors
/// alone. Alpha is kept.
pub fn shift_color(color: Rgba, shift: &HslShift) -> Rgba {
    let hsl = rgb_to_hsl(color);
    let shifted = match shift.channel {
        HslChannel::Hue => {
            if hsl.s == 0.0 || shift.delta.rem_euclid(360.0) == 0.0 {
                return color;
            }
            Hsl { h: normalize_hue(hsl.h + shift.delta), ..hsl }
        }
        HslChannel::Saturation => {
            let s = (hsl.s + shift.delta).clamp(0.0, 1.0);
            if s == hsl.s {
                return color;
            }
            Hsl { s, ..hsl }
        }
        HslChannel::Lightness => {
            let l = (hsl.l + shift.delta).clamp(0.0, 1.0);
            if l == hsl.l {
                return color;
            }
            Hsl { l, ..hsl }
        }
    };
    hsl_to_rgb(shifted).with_alpha(color.a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupOrigin {
    Auto { theme: Rgba, threshold: f64 },
    Manual,
}

/// A set of distinct document colors edited together.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorGroup {
    members: Vec<Rgba>,
    pub origin: GroupOrigin,
}

fn dedup_canonical(mut colors: Vec<Rgba>) -> Vec<Rgba> {
    colors.sort_by(|a, b| a.canonical_cmp(b));
    colors.dedup_by(|a, b| a.key() == b.key());
    colors
}

impl ColorGroup {
    /// Members in canonical order.
    pub fn members(&self) -> &[Rgba] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, color: &Rgba) -> bool {
        let key = color.key();
        self.members.iter().any(|m| m.key() == key)
    }

    /// A hand-picked group; every color must occur in `set`.
    pub fn manual(colors: &[Rgba], set: &OccurrenceSet) -> Result<ColorGroup> {
        for c in colors {
            if !set.contains_color(c) {
                return Err(Error::UnknownColor(c.to_hex()));
            }
        }
        let members = dedup_canonical(colors.to_vec());
        if members.is_empty() {
            return Err(Error::EmptyGroup);
        }
        Ok(ColorGroup { members, origin: GroupOrigin::Manual })
    }

    /// `(members ∪ add) \ remove`. Added colors must occur in `set`.
    pub fn edit_members(&self, add: &[Rgba], remove: &[Rgba], set: &OccurrenceSet) -> Result<ColorGroup> {
        for c in add {
            if !set.contains_color(c) {
                return Err(Error::UnknownColor(c.to_hex()));
            }
        }
        let removed: Vec<ColorKey> = remove.iter().map(Rgba::key).collect();
        let mut members: Vec<Rgba> = self.members.iter().chain(add).copied().collect();
        members.retain(|m| !removed.contains(&m.key()));
        let members = dedup_canonical(members);
        if members.is_empty() {
            return Err(Error::EmptyGroup);
        }
        Ok(ColorGroup { members, origin: self.origin.clone() })
    }

    /// Errors unless every member occurs in `set`.
    pub fn validate(&self, set: &OccurrenceSet) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::EmptyGroup);
        }
        match self.members.iter().find(|m| !set.contains_color(m)) {
            Some(missing) => Err(Error::UnknownColor(missing.to_hex())),
            None => Ok(()),
        }
    }

    /// Members after a recolor, keeping the group's origin.
    pub fn remapped(&self, mapping: &[(Rgba, Rgba)]) -> ColorGroup {
        let lookup: HashMap<ColorKey, Rgba> = mapping.iter().map(|(o, n)| (o.key(), *n)).collect();
        let members = self.members.iter().map(|m| lookup.get(&m.key()).copied().unwrap_or(*m)).collect();
        ColorGroup { members: dedup_canonical(members), origin: self.origin.clone() }
    }
}

/// Document colors within `threshold` ΔE of `theme`.
pub fn group_auto(theme: &Rgba, set: &OccurrenceSet, threshold: f64) -> Result<ColorGroup> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!("threshold must be non-negative, got {threshold}")));
    }
    let members = similar_colors(theme, &set.distinct_colors(), threshold);
    if members.is_empty() {
        return Err(Error::EmptyGroup);
    }
    Ok(ColorGroup { members: dedup_canonical(members), origin: GroupOrigin::Auto { theme: *theme, threshold } })
}

/// The edits the engine knows how to apply.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EditKind {
    /// Every stored occurrence of `from` becomes `to`.
    SetRgb { from: Rgba, to: Rgba },
    /// Every member of `group` moves along one HSL channel.
    GroupShift { group: ColorGroup, shift: HslShift },
    /// The paint at `address` peaks at `color` on `frame`, ramping from and
    /// back to its original color over `ramp` frames.
    FrameIsolated { address: ColorAddress, frame: f64, color: Rgba, ramp: f64 },
    /// Several exact colors rewritten at once, e.g. every stored color that
    /// prints as one hex.
    Remap { mapping: ColorMapping },
}

impl EditKind {
    /// RGB assignment for a selection; refused for multi-color groups.
    pub fn set_rgb_for_group(group: &ColorGroup, to: Rgba) -> Result<EditKind> {
        match group.members() {
            [single] => Ok(EditKind::SetRgb { from: *single, to }),
            members => Err(Error::RgbGroupEdit(members.len())),
        }
    }
}

/// Document colors a hex names: every distinct color printing as that hex.
pub fn colors_for_hex(set: &OccurrenceSet, hex: &Rgba) -> Result<Vec<Rgba>> {
    let found = set.colors_with_hex(hex);
    if found.is_empty() {
        return Err(Error::UnknownColor(hex.to_hex()));
    }
    Ok(found)
}

/// The document color a hex most likely means: the heaviest color printing
/// as that hex, or the hex itself when none does.
pub fn anchor_color(set: &OccurrenceSet, hex: &Rgba) -> Rgba {
    let target = hex.to_hex();
    set.color_weights()
        .into_iter()
        .filter(|(c, _)| c.to_hex() == target)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(*hex, |(c, _)| c)
}

/// RGB assignment addressed by hex.
pub fn set_rgb_by_hex(set: &OccurrenceSet, from: &Rgba, to: Rgba) -> Result<EditKind> {
    match colors_for_hex(set, from)?.as_slice() {
        [single] => Ok(EditKind::SetRgb { from: *single, to }),
        many => Ok(EditKind::Remap { mapping: many.iter().map(|c| (*c, to)).collect() }),
    }
}

/// Manual group from hex notation.
pub fn group_by_hex(set: &OccurrenceSet, hexes: &[Rgba]) -> Result<ColorGroup> {
    let mut colors = Vec::new();
    for h in hexes {
        colors.extend(colors_for_hex(set, h)?);
    }
    ColorGroup::manual(&colors, set)
}

/// What an edit changed.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EditOutcome {
    pub mapping: ColorMapping,
    pub changed: Vec<ColorAddress>,
}

type Snapshot = Vec<(ColorAddress, ColorProperty)>;

/// An applied edit with the paint states before and after it.
#[derive(Debug, Clone, PartialEq)]
pub struct EditCommand {
    pub kind: EditKind,
    pub outcome: EditOutcome,
    before: Snapshot,
    after: Snapshot,
}

fn restore(doc: &mut LottieDocument, snapshot: &Snapshot) -> Result<()> {
    for (addr, prop) in snapshot {
        resolve_address_mut(doc, addr)?.color = prop.clone();
    }
    Ok(())
}

/// Rewrites every stored color found in `lookup`; returns the prior state of
/// each paint that changed.
fn recolor_everywhere(doc: &mut LottieDocument, lookup: &HashMap<ColorKey, Rgba>) -> Snapshot {
    let mut before = Vec::new();
    for_each_paint_mut(doc, |addr, paint| {
        let prior = paint.color.clone();
        if paint.color.map_colors(|c| lookup.get(&c.key()).copied()) {
            before.push((addr.clone(), prior));
        }
    });
    before
}

fn ensure_present(doc: &LottieDocument, color: &Rgba) -> Result<()> {
    let key = color.key();
    if stored_colors(doc).iter().any(|c| c.key() == key) {
        Ok(())
    } else {
        Err(Error::UnknownColor(color.to_hex()))
    }
}

fn group_mapping(group: &ColorGroup, shift: &HslShift) -> ColorMapping {
    group.members().iter().map(|m| (*m, shift_color(*m, shift))).collect()
}

fn frame_isolate(prop: &mut ColorProperty, frame: f64, color: Rgba, ramp: f64, start: f64, end: f64) {
    let original = prop.clone();
    let format = prop.format();
    let pre = (frame - ramp).max(start);
    let post = (frame + ramp).min(end);
    let existing = original.keyframes();
    let mut keys: Vec<ColorKeyframe> = existing.iter().filter(|k| k.frame < pre).cloned().collect();
    let value = |rgba: Rgba| crate::lottie::ColorValue { rgba, format };
    if pre < frame {
        keys.push(ColorKeyframe::linear(pre, value(original.value_at(pre))));
    }
    keys.push(ColorKeyframe::linear(frame, value(color)));
    if post > frame {
        let mut tail = ColorKeyframe::linear(post, value(original.value_at(post)));
        // Keep a held segment held after the ramp ends.
        let governing = existing.iter().rposition(|k| k.frame <= post);
        if let Some(g) = governing {
            if existing[g].is_hold() && g + 1 < existing.len() {
                tail.set_hold();
            }
        }
        keys.push(tail);
    }
    keys.extend(existing.iter().filter(|k| k.frame > post).cloned());
    prop.set_keyframes(keys);
}

fn run(doc: &mut LottieDocument, kind: &EditKind) -> Result<(EditOutcome, Snapshot)> {
    match kind {
        EditKind::SetRgb { from, to } => {
            ensure_present(doc, from)?;
            let lookup = HashMap::from([(from.key(), *to)]);
            let before = recolor_everywhere(doc, &lookup);
            let changed = before.iter().map(|(a, _)| a.clone()).collect();
            Ok((EditOutcome { mapping: vec![(*from, *to)], changed }, before))
        }
        EditKind::GroupShift { group, shift } => {
            if group.is_empty() {
                return Err(Error::EmptyGroup);
            }
            for m in group.members() {
                ensure_present(doc, m)?;
            }
            let mapping = group_mapping(group, shift);
            let lookup: HashMap<ColorKey, Rgba> = mapping.iter().map(|(o, n)| (o.key(), *n)).collect();
            let before = recolor_everywhere(doc, &lookup);
            let changed = before.iter().map(|(a, _)| a.clone()).collect();
            Ok((EditOutcome { mapping, changed }, before))
        }
        EditKind::Remap { mapping } => {
            if mapping.is_empty() {
                return Err(Error::EmptyGroup);
            }
            for (from, _) in mapping {
                ensure_present(doc, from)?;
            }
            let lookup: HashMap<ColorKey, Rgba> = mapping.iter().map(|(o, n)| (o.key(), *n)).collect();
            let before = recolor_everywhere(doc, &lookup);
            let changed = before.iter().map(|(a, _)| a.clone()).collect();
            Ok((EditOutcome { mapping: mapping.clone(), changed }, before))
        }
        EditKind::FrameIsolated { address, frame, color, ramp } => {
            if !(*ramp > 0.0) {
                return Err(Error::InvalidParameter(format!("ramp must be positive, got {ramp}")));
            }
            let layer = doc
                .layers
                .get(address.layer_index)
                .ok_or_else(|| Error::AddressNotFound(address.clone()))?;
            let (start, end) = (layer.in_point, layer.out_point);
            let paint = resolve_address_mut(doc, address)?;
            if !(*frame >= start && *frame < end) {
                return Err(Error::FrameOutOfRange { frame: *frame, start, end });
            }
            let prior = paint.color.clone();
            frame_isolate(&mut paint.color, *frame, *color, *ramp, start, end);
            Ok((EditOutcome { mapping: Vec::new(), changed: vec![address.clone()] }, vec![(address.clone(), prior)]))
        }
    }
}

fn capture_after(doc: &LottieDocument, before: &Snapshot) -> Snapshot {
    before
        .iter()
        .map(|(addr, _)| {
            let paint = resolve_address(doc, addr).expect("edited address resolves");
            (addr.clone(), paint.color.clone())
        })
        .collect()
}

/// Undo stack with a single redo slot, filled by the latest undo and cleared
/// by any new edit.
#[derive(Debug, Clone, Default)]
pub struct EditLog {
    applied: Vec<EditCommand>,
    redo: Option<EditCommand>,
}

impl EditLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.applied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.applied.is_empty()
    }

    pub fn applied(&self) -> &[EditCommand] {
        &self.applied
    }

    pub fn can_redo(&self) -> bool {
        self.redo.is_some()
    }

    /// Applies `kind` to `doc` in place and records it. On error the document
    /// is left untouched.
    pub fn execute(&mut self, doc: &mut LottieDocument, kind: EditKind) -> Result<EditOutcome> {
        let (outcome, before) = run(doc, &kind)?;
        let after = capture_after(doc, &before);
        self.applied.push(EditCommand { kind, outcome: outcome.clone(), before, after });
        self.redo = None;
        Ok(outcome)
    }

    /// Reverts the latest edit, returning it.
    pub fn undo(&mut self, doc: &mut LottieDocument) -> Result<&EditCommand> {
        let command = self.applied.pop().ok_or(Error::EmptyLog)?;
        restore(doc, &command.before)?;
        Ok(self.redo.insert(command))
    }

    /// Re-applies the edit reverted by the immediately preceding undo.
    pub fn redo(&mut self, doc: &mut LottieDocument) -> Result<&EditCommand> {
        let command = self.redo.take().ok_or(Error::NothingToRedo)?;
        restore(doc, &command.after)?;
        self.applied.push(command);
        Ok(self.applied.last().unwrap())
    }
}

/// Shifts every member of `group` along one HSL channel everywhere it is
/// stored. Colors outside the group are untouched.
pub fn apply_group_shift(
    doc: &LottieDocument,
    set: &OccurrenceSet,
    group: &ColorGroup,
    shift: &HslShift,
) -> Result<(LottieDocument, ColorMapping)> {
    group.validate(set)?;
    let mut out = doc.clone();
    let (outcome, _) = run(&mut out, &EditKind::GroupShift { group: group.clone(), shift: *shift })?;
    Ok((out, outcome.mapping))
}

/// Replaces `old` with `new` in every paint, static values and keyframes.
pub fn apply_set_rgb(doc: &LottieDocument, old: &Rgba, new: &Rgba) -> Result<LottieDocument> {
    let mut out = doc.clone();
    run(&mut out, &EditKind::SetRgb { from: *old, to: *new })?;
    Ok(out)
}

/// Recolors one paint around `frame` only: keyframes at `frame − ramp`
/// (original), `frame` (`color`) and `frame + ramp` (original), clamped to
/// the layer's interval. Keyframes outside the window are kept.
pub fn apply_frame_isolated(
    doc: &LottieDocument,
    address: &ColorAddress,
    frame: f64,
    color: &Rgba,
    ramp: f64,
) -> Result<LottieDocument> {
    let mut out = doc.clone();
    run(&mut out, &EditKind::FrameIsolated { address: address.clone(), frame, color: *color, ramp })?;
    Ok(out)
}

/// Functional undo: the document before the latest logged edit.
pub fn undo(doc: &LottieDocument, log: &mut EditLog) -> Result<LottieDocument> {
    let mut out = doc.clone();
    log.undo(&mut out)?;
    Ok(out)
}
