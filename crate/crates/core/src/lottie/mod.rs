//! A typed subset of the Lottie (bodymovin) JSON format: shape layers with
//! groups, paths, rectangles, ellipses, solid fills and strokes. Everything
//! else is carried through opaquely.

mod address;
mod model;
mod paint;
mod transform;
mod value;

pub use address::{
    for_each_paint_mut, paint_addresses, paints, resolve_address, resolve_address_mut, stored_colors, ColorAddress,
    PaintSlot,
};
pub use model::{
    document_from_value, parse_document, serialize_document, Layer, LayerType, LottieDocument, Paint, ShapeItem,
    ShapeKind,
};
pub use paint::{ColorAnimation, ColorFormat, ColorKeyframe, ColorProperty, ColorValue};
pub use transform::{Position, Transform2D};
pub use value::{AnimatedValue, JsonMap};
