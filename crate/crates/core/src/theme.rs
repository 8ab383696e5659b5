//! Theme colors: weighted K-Means over the document's distinct colors in
//! CIE LAB, reporting each cluster's most prominent actual color.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::color::{delta_e, rgb_to_lab, Lab, Rgba};
use crate::error::{Error, Result};
use crate::occurrence::OccurrenceSet;

/// ΔE radius used to gather colors similar to a theme color.
pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThemeConfig {
    pub k: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Stop when no centroid moves by more than this ΔE.
    pub convergence_epsilon: f64,
    /// Independent k-means++ starts; the lowest-inertia run wins.
    pub restarts: usize,
}

impl Default for ThemeConfig {
    fn default() -> Self {
        ThemeConfig { k: 5, seed: 42, max_iterations: 100, convergence_epsilon: 1e-6, restarts: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterMember {
    pub color: Rgba,
    pub proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThemeSwatch {
    /// The cluster member with the highest proportion.
    pub color: Rgba,
    /// Combined proportion of the whole cluster.
    pub proportion: f64,
    /// Members in canonical color order.
    pub members: Vec<ClusterMember>,
}

impl ThemeSwatch {
    pub fn color_proportion(&self) -> f64 {
        self.members
            .iter()
            .find(|m| m.color.key() == self.color.key())
            .map_or(0.0, |m| m.proportion)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Cluster index per input point.
    pub assignment: Vec<usize>,
    pub centroids: Vec<Lab>,
    /// Σ weight · ΔE² to the assigned centroid.
    pub inertia: f64,
    /// Inertia after each iteration of the winning run.
    pub inertia_trace: Vec<f64>,
}

fn dist2(a: &Lab, b: &Lab) -> f64 {
    (a.l - b.l).powi(2) + (a.a - b.a).powi(2) + (a.b - b.b).powi(2)
}

/// Weighted inertia of a partition, each cluster measured from its weighted
/// mean.
pub fn weighted_inertia(points: &[Lab], weights: &[f64], assignment: &[usize], k: usize) -> f64 {
    let centroids = update_centroids(points, weights, assignment, &vec![Lab { l: 0.0, a: 0.0, b: 0.0 }; k]);
    points
        .iter()
        .zip(weights)
        .zip(assignment)
        .map(|((p, w), &c)| w * dist2(p, &centroids[c]))
        .sum()
}

fn nearest(p: &Lab, centroids: &[Lab]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in centroids.iter().enumerate() {
        let d = dist2(p, c);
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

fn pick_weighted(rng: &mut ChaCha8Rng, scores: &[f64]) -> Option<usize> {
    let total: f64 = scores.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return None;
    }
    let mut target = rng.gen::<f64>() * total;
    for (i, s) in scores.iter().enumerate() {
        if *s <= 0.0 {
            continue;
        }
        if target < *s {
            return Some(i);
        }
        target -= s;
    }
    scores.iter().rposition(|s| *s > 0.0)
}

/// Weighted k-means++ seeding: first center ∝ weight, later ones ∝
/// weight · D².
fn seed_centroids(points: &[Lab], weights: &[f64], k: usize, rng: &mut ChaCha8Rng) -> Vec<Lab> {
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let first = pick_weighted(rng, weights).unwrap_or(0);
    chosen.push(first);
    while chosen.len() < k {
        let scores: Vec<f64> = points
            .iter()
            .zip(weights)
            .map(|(p, w)| w * chosen.iter().map(|&c| dist2(p, &points[c])).fold(f64::INFINITY, f64::min))
            .collect();
        let next = pick_weighted(rng, &scores)
            .or_else(|| (0..points.len()).find(|i| !chosen.contains(i)))
            .unwrap_or(0);
        chosen.push(next);
    }
    chosen.into_iter().map(|i| points[i]).collect()
}

fn update_centroids(points: &[Lab], weights: &[f64], assignment: &[usize], previous: &[Lab]) -> Vec<Lab> {
    let k = previous.len();
    let mut sums = vec![(0.0, 0.0, 0.0, 0.0); k];
    for ((p, w), &c) in points.iter().zip(weights).zip(assignment) {
        let s = &mut sums[c];
        s.0 += w * p.l;
        s.1 += w * p.a;
        s.2 += w * p.b;
        s.3 += w;
    }
    sums.iter()
        .zip(previous)
        .map(|(s, prev)| if s.3 > 0.0 { Lab { l: s.0 / s.3, a: s.1 / s.3, b: s.2 / s.3 } } else { *prev })
        .collect()
}

/// Gives every empty cluster the point that currently costs the most,
/// taken from a cluster that has points to spare.
fn fill_empty_clusters(points: &[Lab], weights: &[f64], assignment: &mut [usize], centroids: &mut [Lab]) {
    let k = centroids.len();
    loop {
        let mut counts = vec![0usize; k];
        for &c in assignment.iter() {
            counts[c] += 1;
        }
        let Some(empty) = counts.iter().position(|&n| n == 0) else {
            return;
        };
        let donor = (0..points.len())
            .filter(|&i| counts[assignment[i]] > 1)
            .max_by(|&i, &j| {
                let ci = weights[i] * dist2(&points[i], &centroids[assignment[i]]);
                let cj = weights[j] * dist2(&points[j], &centroids[assignment[j]]);
                ci.partial_cmp(&cj).unwrap_or(Ordering::Equal).then(j.cmp(&i))
            });
        let Some(donor) = donor else {
            return;
        };
        assignment[donor] = empty;
        centroids[empty] = points[donor];
    }
}

fn lloyd(points: &[Lab], weights: &[f64], mut centroids: Vec<Lab>, max_iterations: usize, epsilon: f64) -> KMeansResult {
    let mut assignment: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    let mut trace = Vec::new();
    for _ in 0..max_iterations.max(1) {
        fill_empty_clusters(points, weights, &mut assignment, &mut centroids);
        let updated = update_centroids(points, weights, &assignment, &centroids);
        let shift = centroids
            .iter()
            .zip(&updated)
            .map(|(a, b)| delta_e(*a, *b))
            .fold(0.0, f64::max);
        centroids = updated;
        trace.push(cost(points, weights, &assignment, &centroids));
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        let stable = next == assignment;
        assignment = next;
        if stable || shift < epsilon {
            break;
        }
    }
    fill_empty_clusters(points, weights, &mut assignment, &mut centroids);
    refine(points, weights, &mut assignment, centroids.len(), max_iterations);
    let centroids = update_centroids(points, weights, &assignment, &centroids);
    let inertia = cost(points, weights, &assignment, &centroids);
    if trace.last().is_none_or(|&last| inertia < last) {
        trace.push(inertia);
    }
    KMeansResult { assignment, centroids, inertia, inertia_trace: trace }
}

/// Hartigan refinement: moves single points between clusters while a move
/// lowers the weighted inertia, which Lloyd steps alone can miss.
fn refine(points: &[Lab], weights: &[f64], assignment: &mut [usize], k: usize, max_passes: usize) {
    let mut sums = vec![(0.0, 0.0, 0.0, 0.0, 0usize); k];
    for ((p, w), &c) in points.iter().zip(weights).zip(assignment.iter()) {
        let s = &mut sums[c];
        s.0 += w * p.l;
        s.1 += w * p.a;
        s.2 += w * p.b;
        s.3 += w;
        s.4 += 1;
    }
    let centroid = |s: &(f64, f64, f64, f64, usize)| Lab { l: s.0 / s.3, a: s.1 / s.3, b: s.2 / s.3 };
    for _ in 0..max_passes.max(1) {
        let mut moved = false;
        for i in 0..points.len() {
            let (p, w, from) = (&points[i], weights[i], assignment[i]);
            let src = sums[from];
            if src.4 <= 1 || w <= 0.0 {
                continue;
            }
            let removal = if src.3 - w > 0.0 { src.3 * w / (src.3 - w) * dist2(p, &centroid(&src)) } else { 0.0 };
            let mut best = (from, 0.0);
            for (to, dst) in sums.iter().enumerate() {
                if to == from || dst.3 <= 0.0 {
                    continue;
                }
                let gain = dst.3 * w / (dst.3 + w) * dist2(p, &centroid(dst)) - removal;
                if gain < best.1 - 1e-12 * removal.max(1.0) {
                    best = (to, gain);
                }
            }
            if best.0 != from {
                let to = best.0;
                for (c, sign) in [(from, -1.0), (to, 1.0)] {
                    let s = &mut sums[c];
                    s.0 += sign * w * p.l;
                    s.1 += sign * w * p.a;
                    s.2 += sign * w * p.b;
                    s.3 += sign * w;
                    if sign > 0.0 {
                        s.4 += 1;
                    } else {
                        s.4 -= 1;
                    }
                }
                assignment[i] = to;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

fn cost(points: &[Lab], weights: &[f64], assignment: &[usize], centroids: &[Lab]) -> f64 {
    points
        .iter()
        .zip(weights)
        .zip(assignment)
        .map(|((p, w), &c)| w * dist2(p, &centroids[c]))
        .sum()
}

const EXHAUSTIVE_SEEDINGS: usize = 256;

/// All k-subsets of `0..n` in lexicographic order, or none when there would
/// be more than `limit`.
fn small_subsets(n: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut count = 1usize;
    for i in 0..k {
        count = count * (n - i) / (i + 1);
        if count > limit {
            return Vec::new();
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Weighted K-Means (Lloyd iterations from seeded k-means++ starts, then
/// single-point refinement). The
/// result is a deterministic function of the inputs and `cfg.seed`.
pub fn weighted_kmeans(points: &[Lab], weights: &[f64], k: usize, cfg: &ThemeConfig) -> KMeansResult {
    assert_eq!(points.len(), weights.len());
    let k = k.clamp(1, points.len().max(1));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best: Option<KMeansResult> = None;
    for _ in 0..cfg.restarts.max(1) {
        let seeds = seed_centroids(points, weights, k, &mut rng);
        let run = lloyd(points, weights, seeds, cfg.max_iterations, cfg.convergence_epsilon);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    // Small inputs: also start from every k-subset of the points.
    for subset in small_subsets(points.len(), k, EXHAUSTIVE_SEEDINGS) {
        let seeds = subset.iter().map(|&i| points[i]).collect();
        let run = lloyd(points, weights, seeds, cfg.max_iterations, cfg.convergence_epsilon);
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    best.expect("at least one restart")
}

/// Picks a cluster's swatch: highest proportion, then closest to the
/// centroid, then lowest hex.
fn representative(members: &[(Rgba, f64, Lab)], centroid: &Lab) -> Rgba {
    members
        .iter()
        .min_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap_or(Ordering::Equal)
                .then_with(|| {
                    delta_e(a.2, *centroid)
                        .partial_cmp(&delta_e(b.2, *centroid))
                        .unwrap_or(Ordering::Equal)
                })
                .then_with(|| a.0.canonical_cmp(&b.0))
        })
        .map(|m| m.0)
        .expect("clusters are non-empty")
}

/// Theme swatches sorted by descending cluster proportion.
pub fn extract_theme(set: &OccurrenceSet, cfg: &ThemeConfig) -> Result<Vec<ThemeSwatch>> {
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if set.is_empty() {
        return Err(Error::EmptyDocument);
    }
    let colors: Vec<(Rgba, f64)> = set
        .proportions()?
        .into_iter()
        .filter(|(_, p)| *p > 0.0)
        .collect();
    let points: Vec<Lab> = colors.iter().map(|(c, _)| rgb_to_lab(*c)).collect();
    let weights: Vec<f64> = colors.iter().map(|(_, p)| *p).collect();

    let (assignment, centroids) = if colors.len() <= cfg.k {
        ((0..colors.len()).collect::<Vec<_>>(), points.clone())
    } else {
        let run = weighted_kmeans(&points, &weights, cfg.k, cfg);
        (run.assignment, run.centroids)
    };

    let mut swatches = Vec::new();
    for (cluster, centroid) in centroids.iter().enumerate() {
        let members: Vec<(Rgba, f64, Lab)> = colors
            .iter()
            .zip(&points)
            .zip(&assignment)
            .filter(|(_, &a)| a == cluster)
            .map(|(((c, p), lab), _)| (*c, *p, *lab))
            .collect();
        if members.is_empty() {
            continue;
        }
        swatches.push(ThemeSwatch {
            color: representative(&members, centroid),
            proportion: members.iter().map(|m| m.1).sum(),
            members: members.iter().map(|m| ClusterMember { color: m.0, proportion: m.1 }).collect(),
        });
    }
    swatches.sort_by(|a, b| {
        b.proportion
            .partial_cmp(&a.proportion)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.color.canonical_cmp(&b.color))
    });
    Ok(swatches)
}

/// Candidates within `threshold` ΔE of `theme`, in input order.
pub fn similar_colors(theme: &Rgba, candidates: &[Rgba], threshold: f64) -> Vec<Rgba> {
    let reference = rgb_to_lab(*theme);
    candidates
        .iter()
        .filter(|c| delta_e(reference, rgb_to_lab(**c)) <= threshold)
        .copied()
        .collect()
}
