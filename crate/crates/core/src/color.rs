//! Color representations used across the engine: sRGB with alpha, HSL, and
//! CIE LAB (D65), plus the CIE76 color difference.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ColorParseError;

/// sRGB -> XYZ (D65) matrix, IEC 61966-2-1.
const SRGB_TO_XYZ: [[f64; 3]; 3] = [
    [0.4124564, 0.3575761, 0.1804375],
    [0.2126729, 0.7151522, 0.0721750],
    [0.0193339, 0.1191920, 0.9503041],
];

/// Exact inverse of [`SRGB_TO_XYZ`], so LAB roundtrips are not limited by
/// the published 7-digit inverse.
static XYZ_TO_SRGB: LazyLock<[[f64; 3]; 3]> = LazyLock::new(|| invert3(&SRGB_TO_XYZ));

fn invert3(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let c = [
        [cof(1, 2, 1, 2), -cof(1, 2, 0, 2), cof(1, 2, 0, 1)],
        [-cof(0, 2, 1, 2), cof(0, 2, 0, 2), -cof(0, 2, 0, 1)],
        [cof(0, 1, 1, 2), -cof(0, 1, 0, 2), cof(0, 1, 0, 1)],
    ];
    let det = m[0][0] * c[0][0] + m[0][1] * c[0][1] + m[0][2] * c[0][2];
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = c[j][i] / det;
        }
    }
    out
}

// 6/29, the LAB linear-segment knee.
const LAB_DELTA: f64 = 6.0 / 29.0;

/// An sRGB color with straight alpha. Channels are kept in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rgba {
    pub r: f64,
    pub g: f64,
    pub b: f64,
    pub a: f64,
}

/// Hue in degrees `[0, 360)`, saturation and lightness in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hsl {
    pub h: f64,
    pub s: f64,
    pub l: f64,
}

/// CIE L*a*b* relative to the D65 white of the sRGB primaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lab {
    pub l: f64,
    pub a: f64,
    pub b: f64,
}

/// Exact identity of an [`Rgba`] value, usable as a map key.
///
/// Two colors share a key iff every channel is bit-identical (with `-0.0`
/// folded into `0.0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorKey([u64; 4]);

fn clamp01(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

fn canonical_bits(v: f64) -> u64 {
    if v == 0.0 {
        0.0f64.to_bits()
    } else {
        v.to_bits()
    }
}

impl Rgba {
    pub const BLACK: Rgba = Rgba { r: 0.0, g: 0.0, b: 0.0, a: 1.0 };
    pub const WHITE: Rgba = Rgba { r: 1.0, g: 1.0, b: 1.0, a: 1.0 };

    /// Builds a color, clamping every channel into `[0, 1]`.
    pub fn new(r: f64, g: f64, b: f64, a: f64) -> Self {
        Rgba { r: clamp01(r), g: clamp01(g), b: clamp01(b), a: clamp01(a) }
    }

    pub fn opaque(r: f64, g: f64, b: f64) -> Self {
        Self::new(r, g, b, 1.0)
    }

    pub fn from_bytes(r: u8, g: u8, b: u8) -> Self {
        Self::opaque(r as f64 / 255.0, g as f64 / 255.0, b as f64 / 255.0)
    }

    pub fn with_alpha(self, a: f64) -> Self {
        Rgba { a: clamp01(a), ..self }
    }

    pub fn key(&self) -> ColorKey {
        ColorKey([
            canonical_bits(self.r),
            canonical_bits(self.g),
            canonical_bits(self.b),
            canonical_bits(self.a),
        ])
    }

    /// Lowercase `#rrggbb`; alpha is not printed.
    pub fn to_hex(&self) -> String {
        let byte = |v: f64| (clamp01(v) * 255.0).round() as u8;
        format!("#{:02x}{:02x}{:02x}", byte(self.r), byte(self.g), byte(self.b))
    }

    /// Parses `#rrggbb` or `rrggbb`, case-insensitive. Alpha is 1.
    pub fn from_hex(text: &str) -> Result<Self, ColorParseError> {
        let digits = text.trim().strip_prefix('#').unwrap_or(text.trim());
        if digits.len() != 6 || !digits.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(ColorParseError(text.to_string()));
        }
        let channel = |i: usize| u8::from_str_radix(&digits[i..i + 2], 16).unwrap();
        Ok(Self::from_bytes(channel(0), channel(2), channel(4)))
    }

    pub fn to_lab(&self) -> Lab {
        rgb_to_lab(*self)
    }

    pub fn to_hsl(&self) -> Hsl {
        rgb_to_hsl(*self)
    }

    /// Total order used wherever colors must be listed deterministically:
    /// by hex string, then by exact channel bits.
    pub fn canonical_cmp(&self, other: &Rgba) -> Ordering {
        self.to_hex().cmp(&other.to_hex()).then_with(|| self.key().cmp(&other.key()))
    }

    /// Channel-wise linear interpolation.
    pub fn lerp(&self, other: &Rgba, t: f64) -> Rgba {
        let mix = |x: f64, y: f64| x + (y - x) * t;
        Rgba::new(mix(self.r, other.r), mix(self.g, other.g), mix(self.b, other.b), mix(self.a, other.a))
    }
}

impl fmt::Display for Rgba {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl FromStr for Rgba {
    type Err = ColorParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rgba::from_hex(s)
    }
}

impl Serialize for Rgba {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Rgba {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Rgba::from_hex(&text).map_err(serde::de::Error::custom)
    }
}

fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn linear_to_srgb(c: f64) -> f64 {
    if c <= 0.0031308 {
        c * 12.92
    } else {
        1.055 * c.powf(1.0 / 2.4) - 0.055
    }
}

fn mul3(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

// White is the image of sRGB (1,1,1), so white maps to L=100, a=b=0 exactly.
fn white_point() -> [f64; 3] {
    mul3(&SRGB_TO_XYZ, [1.0, 1.0, 1.0])
}

fn lab_f(t: f64) -> f64 {
    if t > LAB_DELTA.powi(3) {
        t.cbrt()
    } else {
        t / (3.0 * LAB_DELTA * LAB_DELTA) + 4.0 / 29.0
    }
}

fn lab_f_inv(t: f64) -> f64 {
    if t > LAB_DELTA {
        t * t * t
    } else {
        3.0 * LAB_DELTA * LAB_DELTA * (t - 4.0 / 29.0)
    }
}

/// sRGB -> linear -> XYZ (D65) -> LAB. Alpha is ignored.
pub fn rgb_to_lab(c: Rgba) -> Lab {
    let linear = [srgb_to_linear(c.r), srgb_to_linear(c.g), srgb_to_linear(c.b)];
    let xyz = mul3(&SRGB_TO_XYZ, linear);
    let white = white_point();
    let fx = lab_f(xyz[0] / white[0]);
    let fy = lab_f(xyz[1] / white[1]);
    let fz = lab_f(xyz[2] / white[2]);
    Lab { l: 116.0 * fy - 16.0, a: 500.0 * (fx - fy), b: 200.0 * (fy - fz) }
}

/// Inverse of [`rgb_to_lab`]; out-of-gamut results are clamped per channel.
/// The returned color is opaque.
pub fn lab_to_rgb(c: Lab) -> Rgba {
    let fy = (c.l + 16.0) / 116.0;
    let fx = fy + c.a / 500.0;
    let fz = fy - c.b / 200.0;
    let white = white_point();
    let xyz = [white[0] * lab_f_inv(fx), white[1] * lab_f_inv(fy), white[2] * lab_f_inv(fz)];
    let linear = mul3(&XYZ_TO_SRGB, xyz);
    Rgba::opaque(
        linear_to_srgb(linear[0]),
        linear_to_srgb(linear[1]),
        linear_to_srgb(linear[2]),
    )
}

pub fn rgb_to_hsl(c: Rgba) -> Hsl {
    let max = c.r.max(c.g).max(c.b);
    let min = c.r.min(c.g).min(c.b);
    let l = (max + min) / 2.0;
    let d = max - min;
    if d == 0.0 {
        return Hsl { h: 0.0, s: 0.0, l };
    }
    let s = d / (1.0 - (2.0 * l - 1.0).abs());
    let h = if max == c.r {
        60.0 * ((c.g - c.b) / d)
    } else if max == c.g {
        60.0 * ((c.b - c.r) / d + 2.0)
    } else {
        60.0 * ((c.r - c.g) / d + 4.0)
    };
    Hsl { h: normalize_hue(h), s: clamp01(s), l }
}

/// HSL -> opaque RGB.
pub fn hsl_to_rgb(c: Hsl) -> Rgba {
    let h = normalize_hue(c.h);
    let s = clamp01(c.s);
    let l = clamp01(c.l);
    let chroma = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = chroma * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (chroma, x, 0.0),
        1 => (x, chroma, 0.0),
        2 => (0.0, chroma, x),
        3 => (0.0, x, chroma),
        4 => (x, 0.0, chroma),
        _ => (chroma, 0.0, x),
    };
    let m = l - chroma / 2.0;
    Rgba::opaque(r1 + m, g1 + m, b1 + m)
}

/// Wraps any angle into `[0, 360)`.
pub fn normalize_hue(h: f64) -> f64 {
    let wrapped = h.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs.
    if wrapped >= 360.0 {
        0.0
    } else {
        wrapped
    }
}

/// CIE76 color difference: Euclidean distance in LAB.
pub fn delta_e(x: Lab, y: Lab) -> f64 {
    ((x.l - y.l).powi(2) + (x.a - y.a).powi(2) + (x.b - y.b).powi(2)).sqrt()
}

/// ΔE between two sRGB colors.
pub fn delta_e_rgb(x: Rgba, y: Rgba) -> f64 {
    delta_e(rgb_to_lab(x), rgb_to_lab(y))
}
