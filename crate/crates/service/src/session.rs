//! One editing session: a document plus the views derived from it.

use mgcolor_core::elements::{build_element_list, elements_with_color, ElementEntry};
use mgcolor_core::palette::{build_palette_with_order, DocBounds, PaletteConfig};
use mgcolor_core::recolor::{group_auto, group_by_hex, anchor_color, ColorGroup, EditKind, EditLog, EditOutcome};
use mgcolor_core::report;
use mgcolor_core::{
    extract_occurrences, extract_theme, parse_document, serialize_document, Error, LottieDocument, OccurrenceSet,
    Rgba, ScenePalette, ThemeConfig, ThemeSwatch,
};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::wire::{EditRequest, SelectRequest};

#[derive(Debug, Clone)]
pub struct SessionSettings {
    pub theme: ThemeConfig,
    pub threshold: f64,
    pub palette: PaletteConfig,
}

impl Default for SessionSettings {
    fn default() -> Self {
        SessionSettings {
            theme: ThemeConfig::default(),
            threshold: mgcolor_core::theme::DEFAULT_SIMILARITY_THRESHOLD,
            palette: PaletteConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub settings: SessionSettings,
    pub document: LottieDocument,
    pub occurrences: OccurrenceSet,
    pub theme: Vec<ThemeSwatch>,
    pub palette: Arc<ScenePalette>,
    pub elements: Vec<ElementEntry>,
    pub selection: Option<ColorGroup>,
    pub log: EditLog,
    pub playhead: f64,
    /// Palettes before each applied edit, for undo.
    palette_history: Vec<Arc<ScenePalette>>,
    /// Palette the last undo replaced, for redo.
    palette_redo: Option<Arc<ScenePalette>>,
}

/// Theme for the current document; documents without weighted color get
/// an empty theme instead of an error.
fn theme_for(set: &OccurrenceSet, cfg: &ThemeConfig) -> Result<Vec<ThemeSwatch>, Error> {
    match extract_theme(set, cfg) {
        Ok(t) => Ok(t),
        Err(Error::EmptyDocument | Error::ZeroWeightDocument) => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

impl Session {
    pub fn create(id: String, upload: &str, settings: SessionSettings) -> Result<Session, Error> {
        let document = parse_document(upload)?;
        let occurrences = extract_occurrences(&document);
        let theme = theme_for(&occurrences, &settings.theme)?;
        let palette = mgcolor_core::palette::palette_for(&occurrences, DocBounds::of(&document), &settings.palette)?;
        let elements = build_element_list(&document, &occurrences);
        let playhead = document.in_point;
        Ok(Session {
            id,
            settings,
            document,
            occurrences,
            theme,
            palette: Arc::new(palette),
            elements,
            selection: None,
            log: EditLog::new(),
            playhead,
            palette_history: Vec::new(),
            palette_redo: None,
        })
    }

    pub fn summary(&self) -> Value {
        json!({
            "id": self.id,
            "layers": self.document.layers.len(),
            "paints": mgcolor_core::lottie::paint_addresses(&self.document).len(),
            "occurrences": self.occurrences.occurrences.len(),
            "distinct_colors": self.occurrences.distinct_colors().len(),
            "frame_rate": self.document.frame_rate,
            "in_point": self.document.in_point,
            "out_point": self.document.out_point,
            "columns": self.palette.columns.len(),
            "theme": report::theme_json(&self.theme, &self.settings.theme),
            "warnings": self.occurrences.warnings,
        })
    }

    /// Palette at the requested zoom and column step, keeping the session's
    /// frozen order.
    pub fn palette_view(&self, zoom: Option<f64>, step: Option<f64>) -> Result<ScenePalette, Error> {
        let palette = match step {
            Some(step) if step != self.palette.step => {
                let mut p = build_palette_with_order(
                    &self.occurrences,
                    self.palette.bounds,
                    step,
                    self.palette.alpha,
                    &self.palette.order,
                )?;
                p.alpha_min = self.palette.alpha_min;
                p.alpha_max = self.palette.alpha_max;
                p
            }
            _ => (*self.palette).clone(),
        };
        match zoom {
            Some(z) => palette.rezoom(z),
            None => Ok(palette),
        }
    }

    pub fn highlighted_elements(&self) -> Vec<String> {
        self.selection
            .as_ref()
            .map(|g| elements_with_color(&self.elements, g.members()))
            .unwrap_or_default()
    }

    pub fn selection_json(&self) -> Value {
        report::selection_json(self.selection.as_ref(), &self.highlighted_elements())
    }

    pub fn state(&self, zoom: Option<f64>, step: Option<f64>) -> Result<Value, Error> {
        Ok(json!({
            "id": self.id,
            "theme": report::theme_json(&self.theme, &self.settings.theme),
            "palette": report::palette_json(&self.palette_view(zoom, step)?),
            "elements": self.elements,
            "selection": self.selection_json(),
            "playhead": self.playhead,
            "edits": self.log.len(),
            "can_undo": !self.log.is_empty(),
            "can_redo": self.log.can_redo(),
        }))
    }

    pub fn export(&self) -> String {
        serialize_document(&self.document)
    }

    /// Group described by a selection request, without storing it.
    pub fn resolve_selection(&self, request: &SelectRequest) -> Result<Option<ColorGroup>, Error> {
        let set = &self.occurrences;
        match request {
            SelectRequest::Auto { theme, threshold } => {
                let anchor = anchor_color(set, theme);
                Ok(Some(group_auto(&anchor, set, threshold.unwrap_or(self.settings.threshold))?))
            }
            SelectRequest::Manual(colors) => Ok(Some(group_by_hex(set, colors)?)),
            SelectRequest::Edit { add, remove } => {
                let current = self.selection.as_ref().ok_or(Error::EmptyGroup)?;
                let mut adds = Vec::new();
                for h in add {
                    adds.extend(mgcolor_core::recolor::colors_for_hex(set, h)?);
                }
                let removes: Vec<Rgba> = remove.iter().flat_map(|h| set.colors_with_hex(h)).collect();
                Ok(Some(current.edit_members(&adds, &removes, set)?))
            }
            SelectRequest::Clear => Ok(None),
        }
    }

    pub fn select(&mut self, request: &SelectRequest) -> Result<Value, Error> {
        self.selection = self.resolve_selection(request)?;
        Ok(self.selection_json())
    }

    /// Selection response for a group that is not stored.
    pub fn selection_preview(&self, group: Option<&ColorGroup>) -> Value {
        let ids = group.map(|g| elements_with_color(&self.elements, g.members())).unwrap_or_default();
        report::selection_json(group, &ids)
    }

    pub fn command_for(&self, request: &EditRequest) -> Result<EditKind, Error> {
        request.to_command(&self.occurrences, self.selection.as_ref())
    }

    /// Applies an edit and refreshes the derived views. The palette is
    /// patched through the edit's color mapping, never re-sorted.
    pub fn apply(&mut self, command: EditKind) -> Result<EditOutcome, Error> {
        let previous_palette = self.palette.clone();
        let frame = match &command {
            EditKind::FrameIsolated { frame, .. } => Some(*frame),
            _ => None,
        };
        let outcome = self.log.execute(&mut self.document, command)?;
        self.palette_history.push(previous_palette);
        self.palette_redo = None;
        self.refresh(&outcome, frame.is_some());
        if let Some(f) = frame {
            self.playhead = f;
        }
        Ok(outcome)
    }

    fn refresh(&mut self, outcome: &EditOutcome, rebuild: bool) {
        self.occurrences = extract_occurrences(&self.document);
        self.theme = theme_for(&self.occurrences, &self.settings.theme).unwrap_or_default();
        self.elements = build_element_list(&self.document, &self.occurrences);
        let patched = if outcome.mapping.is_empty() {
            None
        } else {
            self.palette.recolor_blocks(&outcome.mapping).ok()
        };
        if !rebuild {
            if let Some(p) = patched {
                self.palette = Arc::new(p);
            }
            self.follow_selection(&outcome.mapping);
            return;
        }
        let base = patched.map(Arc::new).unwrap_or_else(|| self.palette.clone());
        // New colors and keyframes (frame-isolated edits) need fresh columns;
        // new colors join the frozen order by their own key.
        self.palette = build_palette_with_order(&self.occurrences, base.bounds, base.step, base.alpha, &base.order)
            .map(|mut p| {
                p.alpha_min = base.alpha_min;
                p.alpha_max = base.alpha_max;
                Arc::new(p)
            })
            .unwrap_or(base);
        self.follow_selection(&outcome.mapping);
    }

    /// Moves the selection through a color mapping and drops members that no
    /// longer occur; an emptied selection is cleared.
    fn follow_selection(&mut self, mapping: &[(Rgba, Rgba)]) {
        self.selection = self.selection.take().and_then(|g| {
            let g = g.remapped(mapping);
            let gone: Vec<Rgba> = g.members().iter().filter(|c| !self.occurrences.contains_color(c)).copied().collect();
            g.edit_members(&[], &gone, &self.occurrences).ok()
        });
    }

    pub fn undo(&mut self) -> Result<Value, Error> {
        let command = self.log.undo(&mut self.document)?.clone();
        let inverse: Vec<(Rgba, Rgba)> = command.outcome.mapping.iter().map(|(a, b)| (*b, *a)).collect();
        self.occurrences = extract_occurrences(&self.document);
        self.theme = theme_for(&self.occurrences, &self.settings.theme).unwrap_or_default();
        self.elements = build_element_list(&self.document, &self.occurrences);
        if let Some(p) = self.palette_history.pop() {
            self.palette_redo = Some(std::mem::replace(&mut self.palette, p));
        }
        self.follow_selection(&inverse);
        Ok(json!({
            "undone": kind_name(&command.kind),
            "mapping": report::mapping_json(&inverse),
            "changed": command.outcome.changed,
            "edits": self.log.len(),
            "can_redo": self.log.can_redo(),
            "theme": report::theme_json(&self.theme, &self.settings.theme),
        }))
    }

    pub fn redo(&mut self) -> Result<Value, Error> {
        let command = self.log.redo(&mut self.document)?.clone();
        self.occurrences = extract_occurrences(&self.document);
        self.theme = theme_for(&self.occurrences, &self.settings.theme).unwrap_or_default();
        self.elements = build_element_list(&self.document, &self.occurrences);
        if let Some(p) = self.palette_redo.take() {
            self.palette_history.push(std::mem::replace(&mut self.palette, p));
        }
        self.follow_selection(&command.outcome.mapping);
        Ok(json!({
            "redone": kind_name(&command.kind),
            "mapping": report::mapping_json(&command.outcome.mapping),
            "changed": command.outcome.changed,
            "edits": self.log.len(),
            "theme": report::theme_json(&self.theme, &self.settings.theme),
        }))
    }
}

pub fn kind_name(kind: &EditKind) -> &'static str {
    match kind {
        EditKind::SetRgb { .. } => "set_rgb",
        EditKind::GroupShift { .. } => "group_shift",
        EditKind::FrameIsolated { .. } => "frame_isolated",
        EditKind::Remap { .. } => "set_rgb",
    }
}
