//! Planar geometry: affine transforms, cubic Bézier paths, bounding boxes.

use serde::{Deserialize, Serialize};

pub type Point = [f64; 2];

/// 2D affine map `(x, y) -> (a·x + c·y + e, b·x + d·y + f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Default for Affine {
    fn default() -> Self {
        Affine::IDENTITY
    }
}

impl Affine {
    pub const IDENTITY: Affine = Affine { a: 1.0, b: 0.0, c: 0.0, d: 1.0, e: 0.0, f: 0.0 };

    pub fn translate(x: f64, y: f64) -> Self {
        Affine { e: x, f: y, ..Self::IDENTITY }
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Affine { a: sx, d: sy, ..Self::IDENTITY }
    }

    pub fn rotate_degrees(deg: f64) -> Self {
        let (sin, cos) = deg.to_radians().sin_cos();
        Affine { a: cos, b: sin, c: -sin, d: cos, e: 0.0, f: 0.0 }
    }

    /// `self ∘ inner`: applies `inner` first.
    pub fn then_inner(&self, inner: &Affine) -> Affine {
        Affine {
            a: self.a * inner.a + self.c * inner.b,
            b: self.b * inner.a + self.d * inner.b,
            c: self.a * inner.c + self.c * inner.d,
            d: self.b * inner.c + self.d * inner.d,
            e: self.a * inner.e + self.c * inner.f + self.e,
            f: self.b * inner.e + self.d * inner.f + self.f,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        [self.a * p[0] + self.c * p[1] + self.e, self.b * p[0] + self.d * p[1] + self.f]
    }
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn from_points<I: IntoIterator<Item = Point>>(points: I) -> Option<Rect> {
        let mut iter = points.into_iter();
        let first = iter.next()?;
        let mut rect = Rect { min: first, max: first };
        for p in iter {
            rect.min[0] = rect.min[0].min(p[0]);
            rect.min[1] = rect.min[1].min(p[1]);
            rect.max[0] = rect.max[0].max(p[0]);
            rect.max[1] = rect.max[1].max(p[1]);
        }
        Some(rect)
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn corners(&self) -> [Point; 4] {
        [self.min, [self.max[0], self.min[1]], self.max, [self.min[0], self.max[1]]]
    }
}

/// A cubic Bézier spline in Lottie's vertex/tangent form: tangents are offsets
/// relative to their vertex.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BezierPath {
    pub vertices: Vec<Point>,
    pub in_tangents: Vec<Point>,
    pub out_tangents: Vec<Point>,
    pub closed: bool,
}

impl BezierPath {
    /// Closed polygon with zero tangents.
    pub fn polygon(vertices: Vec<Point>) -> Self {
        let n = vertices.len();
        BezierPath { vertices, in_tangents: vec![[0.0; 2]; n], out_tangents: vec![[0.0; 2]; n], closed: true }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Anchors followed by the absolute positions of both control handles.
    pub fn hull_points(&self) -> impl Iterator<Item = Point> + '_ {
        let anchors = self.vertices.iter().copied();
        let handles = self.vertices.iter().enumerate().flat_map(move |(i, v)| {
            let tin = self.in_tangents.get(i).copied().unwrap_or([0.0; 2]);
            let tout = self.out_tangents.get(i).copied().unwrap_or([0.0; 2]);
            [[v[0] + tin[0], v[1] + tin[1]], [v[0] + tout[0], v[1] + tout[1]]]
        });
        anchors.chain(handles)
    }

    /// Bounding box of the mapped anchors and control points. A Bézier curve
    /// lies in the convex hull of its control polygon, so this box contains
    /// the curve (it may be larger than the tight box).
    pub fn bounding_box(&self, transform: &Affine) -> Option<Rect> {
        Rect::from_points(self.hull_points().map(|p| transform.apply(p)))
    }
}

/// Area of the axis-aligned bounding box of `path` under `transform`.
/// An empty path has area 0.
pub fn bounding_box_area(path: &BezierPath, transform: &Affine) -> f64 {
    path.bounding_box(transform).map_or(0.0, |r| r.area())
}

/// Area of the bounding box of an axis-aligned rectangle (center/size form)
/// after transformation.
pub fn rect_area(center: Point, size: Point, transform: &Affine) -> f64 {
    let half = [size[0].abs() / 2.0, size[1].abs() / 2.0];
    let local = Rect { min: [center[0] - half[0], center[1] - half[1]], max: [center[0] + half[0], center[1] + half[1]] };
    Rect::from_points(local.corners().into_iter().map(|p| transform.apply(p))).map_or(0.0, |r| r.area())
}
