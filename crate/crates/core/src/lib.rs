//! Color analysis and editing for vector motion-graphics animations stored
//! as Lottie JSON.
//!
//! The pipeline:
//!
//! 1. [`lottie::parse_document`] reads the animation into a typed tree that
//!    preserves everything it does not model.
//! 2. [`occurrence::extract_occurrences`] lists every color use with its
//!    approximate area and frame interval.
//! 3. [`theme::extract_theme`] clusters the distinct colors (weighted
//!    K-Means in CIE LAB) into a small set of theme swatches,
//!    [`palette::build_palette`] lays the colors out on the timeline, and
//!    [`elements::build_element_list`] groups them by layer.
//! 4. [`recolor`] applies single-color, frame-isolated and group HSL edits as
//!    undoable commands, and [`lottie::serialize_document`] writes the result.

pub mod color;
pub mod elements;
pub mod error;
pub mod geometry;
pub mod json_diff;
pub mod lottie;
pub mod occurrence;
pub mod palette;
pub mod recolor;
pub mod report;
pub mod theme;

pub use color::{delta_e, Hsl, Lab, Rgba};
pub use error::{Error, Result};
pub use lottie::{parse_document, serialize_document, ColorAddress, LottieDocument, PaintSlot};
pub use occurrence::{extract_occurrences, ColorOccurrence, OccurrenceSet};
pub use palette::{build_palette, PaletteConfig, ScenePalette};
pub use theme::{extract_theme, ThemeConfig, ThemeSwatch};
