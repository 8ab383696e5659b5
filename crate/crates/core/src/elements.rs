//! Element list: colors grouped by layer and by the group tree inside each
//! shape layer.

use std::collections::HashSet;

use serde::Serialize;

use crate::color::{ColorKey, Rgba};
use crate::lottie::{ColorAddress, LayerType, LottieDocument, ShapeItem, ShapeKind};
use crate::occurrence::{element_id, OccurrenceSet};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColorBubble {
    pub color: Rgba,
    pub address: ColorAddress,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElementEntry {
    pub element_id: String,
    pub display_name: String,
    /// Paints owned directly by this entry, largest area first.
    pub colors: Vec<ColorBubble>,
    pub children: Vec<ElementEntry>,
}

impl ElementEntry {
    /// Pre-order traversal of this entry and its descendants.
    pub fn walk(&self) -> Vec<&ElementEntry> {
        let mut out = vec![self];
        for child in &self.children {
            out.extend(child.walk());
        }
        out
    }

    fn has_any(&self, colors: &HashSet<ColorKey>) -> bool {
        self.colors.iter().any(|b| colors.contains(&b.color.key())) || self.children.iter().any(|c| c.has_any(colors))
    }
}

fn group_entry(
    items: &[ShapeItem],
    id: String,
    display_name: String,
    layer: usize,
    prefix: &mut Vec<usize>,
    set: &OccurrenceSet,
) -> ElementEntry {
    let mut colors = Vec::new();
    let mut children = Vec::new();
    for (i, item) in items.iter().enumerate() {
        prefix.push(i);
        match &item.kind {
            ShapeKind::Fill(_) | ShapeKind::Stroke(_) => {
                for occ in set
                    .occurrences
                    .iter()
                    .filter(|o| o.address.layer_index == layer && o.address.shape_path == *prefix)
                {
                    let seen = colors
                        .iter()
                        .any(|b: &ColorBubble| b.color.key() == occ.color.key() && b.address == occ.address);
                    if !seen {
                        colors.push(ColorBubble { color: occ.color, address: occ.address.clone(), area: occ.area });
                    }
                }
            }
            ShapeKind::Group(children_items) => {
                let name = item.name.clone().filter(|n| !n.is_empty()).unwrap_or_else(|| format!("Group {i}"));
                let child_id = format!("{id}/{name}#{i}");
                children.push(group_entry(children_items, child_id, name, layer, prefix, set));
            }
            _ => {}
        }
        prefix.pop();
    }
    // Stable: equal areas keep document order.
    colors.sort_by(|a, b| b.area.total_cmp(&a.area));
    ElementEntry { element_id: id, display_name, colors, children }
}

/// One top-level entry per shape layer, in layer order; nesting mirrors the
/// group tree.
pub fn build_element_list(doc: &LottieDocument, set: &OccurrenceSet) -> Vec<ElementEntry> {
    doc.layers
        .iter()
        .enumerate()
        .filter(|(_, l)| l.layer_type == LayerType::Shape)
        .map(|(li, layer)| group_entry(&layer.shapes, element_id(layer, li), layer.display_name(li), li, &mut Vec::new(), set))
        .collect()
}

/// Ids of entries whose subtree shows any of `colors`, in pre-order.
pub fn elements_with_color(entries: &[ElementEntry], colors: &[Rgba]) -> Vec<String> {
    let keys: HashSet<ColorKey> = colors.iter().map(Rgba::key).collect();
    if keys.is_empty() {
        return Vec::new();
    }
    entries
        .iter()
        .flat_map(ElementEntry::walk)
        .filter(|e| e.has_any(&keys))
        .map(|e| e.element_id.clone())
        .collect()
}

/// Every address listed in the tree, in pre-order.
pub fn listed_addresses(entries: &[ElementEntry]) -> Vec<ColorAddress> {
    let mut out: Vec<ColorAddress> = Vec::new();
    for entry in entries.iter().flat_map(ElementEntry::walk) {
        for bubble in &entry.colors {
            if !out.contains(&bubble.address) {
                out.push(bubble.address.clone());
            }
        }
    }
    out
}
