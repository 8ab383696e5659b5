//! JSON views shared by the CLI and the session service, so both front ends
//! print the same shapes for the same library results.

use serde_json::{json, Value};

use crate::color::Rgba;
use crate::elements::ElementEntry;
use crate::error::Result;
use crate::occurrence::{proportion, OccurrenceSet};
use crate::palette::ScenePalette;
use crate::recolor::{ColorGroup, EditOutcome};
use crate::theme::{ThemeConfig, ThemeSwatch};

/// Occurrence records with their color's document proportion.
pub fn occurrences_json(set: &OccurrenceSet) -> Result<Value> {
    let mut records = Vec::with_capacity(set.occurrences.len());
    for occ in &set.occurrences {
        records.push(json!({
            "address": occ.address,
            "pointer": occ.address.json_pointer(),
            "element_id": occ.element_id,
            "color": occ.color,
            "opacity": occ.opacity,
            "area": occ.area,
            "interval": occ.interval,
            "animated": occ.animated,
            "proportion": proportion(set, &occ.color)?,
        }));
    }
    Ok(json!({
        "total_weight": set.total_weight,
        "occurrences": records,
        "warnings": set.warnings,
    }))
}

pub fn swatch_json(swatch: &ThemeSwatch) -> Value {
    json!({
        "color": swatch.color,
        "proportion": swatch.proportion,
        "color_proportion": swatch.color_proportion(),
        "member_count": swatch.members.len(),
        "members": swatch.members,
    })
}

pub fn theme_json(theme: &[ThemeSwatch], cfg: &ThemeConfig) -> Value {
    json!({
        "k": cfg.k,
        "seed": cfg.seed,
        "swatches": theme.iter().map(swatch_json).collect::<Vec<_>>(),
    })
}

pub fn palette_json(palette: &ScenePalette) -> Value {
    let mut v = serde_json::to_value(palette).expect("palette serializes");
    v["zoom"] = json!(palette.zoom());
    v
}

pub fn elements_json(entries: &[ElementEntry]) -> Value {
    json!({ "elements": entries })
}

pub fn colors_json(colors: &[Rgba]) -> Value {
    Value::Array(colors.iter().map(|c| Value::String(c.to_hex())).collect())
}

/// A selection with the element ids it highlights.
pub fn selection_json(group: Option<&ColorGroup>, element_ids: &[String]) -> Value {
    match group {
        None => json!({ "members": [], "origin": null, "elements": [] }),
        Some(g) => json!({
            "members": colors_json(g.members()),
            "origin": g.origin,
            "elements": element_ids,
        }),
    }
}

pub fn mapping_json(mapping: &[(Rgba, Rgba)]) -> Value {
    Value::Array(mapping.iter().map(|(from, to)| json!({ "from": from, "to": to })).collect())
}

pub fn outcome_json(outcome: &EditOutcome) -> Value {
    json!({
        "mapping": mapping_json(&outcome.mapping),
        "changed": outcome.changed,
    })
}
