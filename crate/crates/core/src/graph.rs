//! Quickshift parent-graph construction, component labelling, and local
//! maxima counting.
//!
//! Both graph builders give each pixel at most one outgoing edge, toward a
//! neighbor with strictly higher value; pixels with no qualifying neighbor
//! are roots. Superpixels are the connected components of the resulting
//! forest.

use crate::field::DensityField;
use crate::image::{GridError, Image, LabelMap, Region};
use crate::math;
use crate::params::Hyperparams;
use crate::theory::ShapeCase;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Image and density field dimensions differ.
    DimensionMismatch {
        image: (usize, usize),
        field: (usize, usize),
    },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DimensionMismatch { image, field } => write!(
                f,
                "image is {}x{} but field is {}x{}",
                image.0, image.1, field.0, field.1
            ),
        }
    }
}

impl core::error::Error for GraphError {}

/// Lookout geometry: the Chebyshev window intersected with the Euclidean
/// disk of radius `max_dist`. Disk when the cutoff is inside the window,
/// full square when it exceeds the window diagonal, rounded square between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborhoodSpec {
    pub k_w: u32,
    pub max_dist: f64,
    pub shape: ShapeCase,
}

impl NeighborhoodSpec {
    pub fn new(k_w: u32, max_dist: f64) -> Self {
        Self {
            k_w,
            max_dist,
            shape: ShapeCase::classify(k_w as f64, max_dist),
        }
    }
}

/// Precomputed lookout offsets for one `(k_w, max_dist)` pair.
#[derive(Debug, Clone)]
pub struct LookoutOffsets {
    /// Offsets excluding `(0, 0)`, sorted by (squared distance, row-major).
    by_distance: Vec<(i32, i32)>,
    k_w: u32,
}

impl LookoutOffsets {
    pub fn new(k_w: u32, max_dist: f64) -> Self {
        let k = k_w as i32;
        let dm2 = max_dist * max_dist;
        let mut offs = Vec::new();
        for a in -k..=k {
            for b in -k..=k {
                if a == 0 && b == 0 {
                    continue;
                }
                let d2 = (a * a + b * b) as f64;
                if d2 <= dm2 {
                    offs.push((a, b));
                }
            }
        }
        offs.sort_by_key(|&(a, b)| ((a as i64) * (a as i64) + (b as i64) * (b as i64), a, b));
        Self { by_distance: offs, k_w }
    }

    pub fn k_w(&self) -> u32 {
        self.k_w
    }
}

/// In-bounds pixels with Chebyshev distance <= `k_w` AND Euclidean distance
/// <= `max_dist` from `(i, j)`, row-major, including `(i, j)` itself.
pub fn neighborhood(
    i: usize,
    j: usize,
    height: usize,
    width: usize,
    k_w: u32,
    max_dist: f64,
) -> Vec<(usize, usize)> {
    let dm2 = max_dist * max_dist;
    let (r0, r1) = crate::density::axis_range(i, height, k_w);
    let (c0, c1) = crate::density::axis_range(j, width, k_w);
    let mut out = Vec::new();
    for u in r0..=r1 {
        let di = i as f64 - u as f64;
        for v in c0..=c1 {
            let dj = j as f64 - v as f64;
            if di * di + dj * dj <= dm2 {
                out.push((u, v));
            }
        }
    }
    out
}

/// Per-pixel optional parent; at most one outgoing edge, no cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParentGraph {
    height: usize,
    width: usize,
    parents: Vec<u32>,
}

impl ParentGraph {
    fn new(height: usize, width: usize) -> Self {
        assert!(height * width < ROOT as usize, "image too large for u32 indexing");
        Self {
            height,
            width,
            parents: vec![ROOT; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn parent(&self, row: usize, col: usize) -> Option<(usize, usize)> {
        let p = self.parents[row * self.width + col];
        if p == ROOT {
            None
        } else {
            Some(((p as usize) / self.width, (p as usize) % self.width))
        }
    }

    pub fn is_root(&self, row: usize, col: usize) -> bool {
        self.parents[row * self.width + col] == ROOT
    }

    pub fn num_roots(&self) -> usize {
        self.parents.iter().filter(|&&p| p == ROOT).count()
    }

    /// Raw parent slots (`u32::MAX` = root), row-major.
    pub fn raw_parents(&self) -> &[u32] {
        &self.parents
    }

    /// Assembles a graph from raw parent slots as produced by the row-range
    /// fillers. Indices are bounds-checked; the value ordering invariant is
    /// the fillers' responsibility.
    pub fn from_raw(height: usize, width: usize, parents: Vec<u32>) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if parents.len() != height * width {
            return Err(GridError::SizeMismatch {
                expected: height * width,
                actual: parents.len(),
            });
        }
        Ok(Self { height, width, parents })
    }
}

/// Fills parent slots for `rows` of the simplified construction: parent of
/// `(i, j)` is the spatially closest in-bounds lookout point with a strictly
/// greater value, ties in distance broken toward the smallest row-major
/// index. The color term plays no role.
pub fn simplified_parents_rows(
    field: &DensityField,
    offsets: &LookoutOffsets,
    rows: core::ops::Range<usize>,
    out: &mut [u32],
) {
    let (h, w) = field.dims();
    debug_assert_eq!(out.len(), rows.len() * w);
    let values = field.values();
    let mut idx = 0;
    for i in rows {
        for j in 0..w {
            let here = values[i * w + j];
            let mut slot = ROOT;
            for &(a, b) in &offsets.by_distance {
                let u = i as i64 + a as i64;
                let v = j as i64 + b as i64;
                if u < 0 || v < 0 || u >= h as i64 || v >= w as i64 {
                    continue;
                }
                let cand = (u as usize) * w + v as usize;
                if values[cand] > here {
                    slot = cand as u32;
                    break;
                }
            }
            out[idx] = slot;
            idx += 1;
        }
    }
}

/// Simplified quickshift graph over an arbitrary array.
pub fn build_graph_simplified(field: &DensityField, k_w: u32, max_dist: f64) -> ParentGraph {
    let (h, w) = field.dims();
    let offsets = LookoutOffsets::new(k_w, max_dist);
    let mut graph = ParentGraph::new(h, w);
    simplified_parents_rows(field, &offsets, 0..h, &mut graph.parents);
    graph
}

/// How the original construction applies the `max_dist` cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OriginalVariantMode {
    /// Candidates are restricted to 5-D distance <= `max_dist` before the
    /// argmin (cutoff on the unsquared distance).
    #[default]
    Standard,
    /// skimage-style: argmin over all higher-density candidates first, then
    /// the edge is kept only if the SQUARED distance is <= `max_dist`.
    CompatSquaredDm,
}

/// Fills parent slots for `rows` of the original construction. The distance
/// is the 5-D one: squared spatial offset plus squared scaled color offset.
pub fn original_parents_rows(
    image: &Image,
    field: &DensityField,
    hp: &Hyperparams,
    mode: OriginalVariantMode,
    rows: core::ops::Range<usize>,
    out: &mut [u32],
) {
    let (h, w) = image.dims();
    debug_assert_eq!(out.len(), rows.len() * w);
    let values = field.values();
    let k_w = hp.window_radius();
    let ratio2 = hp.color_ratio() * hp.color_ratio();
    let dm = hp.max_dist();
    let cutoff2 = dm * dm;
    let mut idx = 0;
    for i in rows {
        let (r0, r1) = crate::density::axis_range(i, h, k_w);
        for j in 0..w {
            let (c0, c1) = crate::density::axis_range(j, w, k_w);
            let here = values[i * w + j];
            let center = image.get(i, j);
            let mut best = f64::INFINITY;
            let mut slot = ROOT;
            for u in r0..=r1 {
                let di = i as f64 - u as f64;
                for v in c0..=c1 {
                    let cand = u * w + v;
                    if values[cand] <= here {
                        continue;
                    }
                    let dj = j as f64 - v as f64;
                    let px = image.get(u, v);
                    let dc = {
                        let d0 = center[0] - px[0];
                        let d1 = center[1] - px[1];
                        let d2 = center[2] - px[2];
                        d0 * d0 + d1 * d1 + d2 * d2
                    };
                    let dist2 = di * di + dj * dj + ratio2 * dc;
                    if mode == OriginalVariantMode::Standard && dist2 > cutoff2 {
                        continue;
                    }
                    // Row-major scan: strict < keeps the earliest on ties.
                    if dist2 < best {
                        best = dist2;
                        slot = cand as u32;
                    }
                }
            }
            if mode == OriginalVariantMode::CompatSquaredDm && slot != ROOT && best > dm {
                slot = ROOT;
            }
            out[idx] = slot;
            idx += 1;
        }
    }
}

/// Original quickshift graph: parent minimizes the 5-D distance among
/// higher-density window neighbors within the cutoff.
pub fn build_graph_original(
    image: &Image,
    field: &DensityField,
    hp: &Hyperparams,
    mode: OriginalVariantMode,
) -> Result<ParentGraph, GraphError> {
    if image.dims() != field.dims() {
        return Err(GraphError::DimensionMismatch {
            image: image.dims(),
            field: field.dims(),
        });
    }
    let (h, w) = image.dims();
    let mut graph = ParentGraph::new(h, w);
    original_parents_rows(image, field, hp, mode, 0..h, &mut graph.parents);
    Ok(graph)
}

/// Pixels of `region` whose value strictly exceeds every other in-bounds
/// lookout point, in row-major order.
pub fn local_maxima(
    field: &DensityField,
    k_w: u32,
    max_dist: f64,
    region: Region,
) -> Vec<(usize, usize)> {
    let (h, w) = field.dims();
    region.validate(h, w).expect("region inside field");
    let offsets = LookoutOffsets::new(k_w, max_dist);
    let values = field.values();
    let mut maxima = Vec::new();
    for (i, j) in region.iter() {
        let here = values[i * w + j];
        let mut is_max = true;
        for &(a, b) in &offsets.by_distance {
            let u = i as i64 + a as i64;
            let v = j as i64 + b as i64;
            if u < 0 || v < 0 || u >= h as i64 || v >= w as i64 {
                continue;
            }
            if values[u as usize * w + v as usize] >= here {
                is_max = false;
                break;
            }
        }
        if is_max {
            maxima.push((i, j));
        }
    }
    maxima
}

/// Labels every pixel with its root's component id. Labels are assigned in
/// row-major order of the roots, so label 0 belongs to the first root.
pub fn connected_components(graph: &ParentGraph) -> LabelMap {
    let n = graph.parents.len();
    let w = graph.width;
    // Resolve each pixel's root with path memoization (linear total work).
    let mut root = vec![ROOT; n];
    let mut path = Vec::new();
    for start in 0..n {
        if root[start] != ROOT {
            continue;
        }
        let mut cur = start;
        loop {
            if root[cur] != ROOT {
                break;
            }
            let parent = graph.parents[cur];
            if parent == ROOT {
                root[cur] = cur as u32;
                break;
            }
            path.push(cur);
            cur = parent as usize;
        }
        let r = root[cur];
        for &p in &path {
            root[p] = r;
        }
        path.clear();
    }

    let mut label_of_root = vec![ROOT; n];
    let mut next = 0u32;
    for idx in 0..n {
        if graph.parents[idx] == ROOT {
            label_of_root[idx] = next;
            next += 1;
        }
    }
    let labels: Vec<u32> = root.iter().map(|&r| label_of_root[r as usize]).collect();
    LabelMap::from_labels(n / w, w, labels).expect("labels are contiguous by construction")
}

/// Number of distinct labels appearing inside `region`.
pub fn count_superpixels(labels: &LabelMap, region: Region) -> usize {
    region
        .validate(labels.height(), labels.width())
        .expect("region inside label map");
    let mut seen = vec![false; labels.num_labels() as usize];
    let mut count = 0;
    for (i, j) in region.iter() {
        let l = labels.get(i, j) as usize;
        if !seen[l] {
            seen[l] = true;
            count += 1;
        }
    }
    count
}

/// Largest spatial parent-edge length in the graph (for the diameter bound).
pub fn max_edge_length(graph: &ParentGraph) -> f64 {
    let mut best = 0.0f64;
    for i in 0..graph.height {
        for j in 0..graph.width {
            if let Some((u, v)) = graph.parent(i, j) {
                let di = i as f64 - u as f64;
                let dj = j as f64 - v as f64;
                best = best.max(math::sqrt(di * di + dj * dj));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(h: usize, w: usize, vals: &[f64]) -> DensityField {
        DensityField::from_values(h, w, vals.to_vec()).unwrap()
    }

    #[test]
    fn neighborhood_is_window_when_no_cutoff() {
        let n = neighborhood(5, 5, 11, 11, 3, f64::INFINITY);
        assert_eq!(n, crate::density::window(5, 5, 11, 11, 3));
    }

    #[test]
    fn neighborhood_disk_and_rounded_counts() {
        // Brute-force counts: 13 points with u^2+v^2 <= 4; 45 = 49 minus the
        // four corners at distance sqrt(18) > 4.
        assert_eq!(neighborhood(10, 10, 21, 21, 3, 2.0).len(), 13);
        assert_eq!(neighborhood(10, 10, 21, 21, 3, 4.0).len(), 45);
        assert!(neighborhood(10, 10, 21, 21, 3, 2.0).contains(&(10, 10)));
    }

    #[test]
    fn neighborhood_spec_shape_tags() {
        assert_eq!(NeighborhoodSpec::new(15, 10.0).shape, ShapeCase::Disk);
        assert_eq!(NeighborhoodSpec::new(15, 18.0).shape, ShapeCase::RoundedSquare);
        assert_eq!(NeighborhoodSpec::new(15, f64::INFINITY).shape, ShapeCase::Square);
    }

    #[test]
    fn simplified_three_by_three_increasing() {
        let f = field(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let g = build_graph_simplified(&f, 3, f64::INFINITY);
        assert_eq!(g.num_roots(), 1);
        assert!(g.is_root(2, 2));
        // Nearest strictly-greater neighbor of (0,0) at distance 1: (0,1)
        // beats (1,0) by the row-major tie rule.
        assert_eq!(g.parent(0, 0), Some((0, 1)));
    }

    #[test]
    fn simplified_all_point_to_center_max() {
        let mut vals = [1.0; 9];
        vals[4] = 2.0;
        let g = build_graph_simplified(&field(3, 3, &vals), 3, f64::INFINITY);
        for i in 0..3 {
            for j in 0..3 {
                if (i, j) == (1, 1) {
                    assert!(g.is_root(i, j));
                } else {
                    assert_eq!(g.parent(i, j), Some((1, 1)), "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn simplified_constant_field_all_roots() {
        let g = build_graph_simplified(&field(2, 3, &[5.0; 6]), 2, f64::INFINITY);
        assert_eq!(g.num_roots(), 6);
    }

    #[test]
    fn original_all_roots_when_densities_tie() {
        // Constant image with no tie-break noise: all interior densities
        // coincide, and the strict inequality never links equal pixels. Use
        // an interior-sized window so the whole field ties.
        let img = Image::filled(4, 4, [7.0, 7.0, 7.0]).unwrap();
        let hp = Hyperparams::new(2.0, f64::INFINITY).unwrap().with_noise_scale(0.0).unwrap();
        let p = field(4, 4, &[crate::density::delta_sum(2, 2, 9, 9, 2.0, 6); 16]);
        let g = build_graph_original(&img, &p, &hp, OriginalVariantMode::Standard).unwrap();
        assert_eq!(g.num_roots(), 16);
    }

    #[test]
    fn original_chain_with_injected_field() {
        let img = Image::filled(1, 3, [0.0; 3]).unwrap();
        let f = field(1, 3, &[1.0, 2.0, 3.0]);
        let hp = Hyperparams::new(5.0, f64::INFINITY).unwrap().with_color_ratio(0.0).unwrap();
        let g = build_graph_original(&img, &f, &hp, OriginalVariantMode::Standard).unwrap();
        assert_eq!(g.parent(0, 0), Some((0, 1)));
        assert_eq!(g.parent(0, 1), Some((0, 2)));
        assert!(g.is_root(0, 2));
    }

    #[test]
    fn original_cutoff_severs_all_edges() {
        let img = Image::filled(1, 3, [0.0; 3]).unwrap();
        let f = field(1, 3, &[1.0, 2.0, 3.0]);
        let hp = Hyperparams::new(5.0, 0.5).unwrap().with_color_ratio(0.0).unwrap();
        let g = build_graph_original(&img, &f, &hp, OriginalVariantMode::Standard).unwrap();
        assert_eq!(g.num_roots(), 3);
    }

    #[test]
    fn original_rejects_mismatched_field() {
        let img = Image::filled(2, 2, [0.0; 3]).unwrap();
        let f = field(1, 3, &[1.0, 2.0, 3.0]);
        let hp = Hyperparams::new(5.0, 10.0).unwrap();
        assert!(build_graph_original(&img, &f, &hp, OriginalVariantMode::Standard).is_err());
    }

    #[test]
    fn compat_mode_squares_the_threshold() {
        // Distance to the only higher neighbor is 2 (squared 4). A cutoff of
        // 3 keeps the edge under the squared-compat convention only if
        // 4 <= 3 fails, so it cuts; with cutoff 5 the compat mode keeps it
        // while the standard mode (2 <= 5) also keeps it. Use cutoff 2.5:
        // standard keeps (2 <= 2.5), compat cuts (4 > 2.5).
        let img = Image::filled(1, 3, [0.0; 3]).unwrap();
        let f = field(1, 3, &[3.0, 1.0, 2.0]);
        let hp = Hyperparams::new(1.0, 2.5).unwrap().with_color_ratio(0.0).unwrap();
        let std_g = build_graph_original(&img, &f, &hp, OriginalVariantMode::Standard).unwrap();
        let compat_g =
            build_graph_original(&img, &f, &hp, OriginalVariantMode::CompatSquaredDm).unwrap();
        // Pixel (0,2): higher neighbors at (0,0) distance 2.
        assert_eq!(std_g.parent(0, 2), Some((0, 0)));
        assert!(compat_g.is_root(0, 2));
    }

    #[test]
    fn local_maxima_examples() {
        let increasing = field(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        assert_eq!(
            local_maxima(&increasing, 3, f64::INFINITY, Region::full(3, 3)),
            vec![(2, 2)]
        );
        let constant = field(3, 3, &[1.0; 9]);
        assert!(local_maxima(&constant, 3, f64::INFINITY, Region::full(3, 3)).is_empty());
        let single = field(1, 1, &[0.5]);
        assert_eq!(local_maxima(&single, 3, f64::INFINITY, Region::full(1, 1)), vec![(0, 0)]);
    }

    #[test]
    fn components_examples() {
        // All roots on 2x2.
        let g = build_graph_simplified(&field(2, 2, &[1.0; 4]), 1, f64::INFINITY);
        assert_eq!(connected_components(&g).num_labels(), 4);

        // 1x3 chain.
        let g = build_graph_simplified(&field(1, 3, &[1.0, 2.0, 3.0]), 3, f64::INFINITY);
        let labels = connected_components(&g);
        assert_eq!(labels.num_labels(), 1);

        // 2x2 with a single maximum at (1,1): everything funnels there even
        // with the cutoff at 1 (no diagonal steps).
        let g = build_graph_simplified(&field(2, 2, &[1.0, 2.0, 10.0, 20.0]), 1, 1.0);
        let labels = connected_components(&g);
        assert_eq!(labels.num_labels(), 1);

        // Two disjoint chains on a line: [2,1,4,3] with cutoff 1 gives
        // (0,1)->(0,0) (tie toward the smaller row-major index) and
        // (0,3)->(0,2), with (0,0) and (0,2) roots.
        let g = build_graph_simplified(&field(1, 4, &[2.0, 1.0, 4.0, 3.0]), 1, 1.0);
        assert_eq!(g.parent(0, 1), Some((0, 0)));
        let labels = connected_components(&g);
        assert_eq!(labels.num_labels(), 2);
        // Labels assigned by row-major root order: root (0,0) is label 0.
        assert_eq!(labels.labels(), &[0, 0, 1, 1]);
    }

    #[test]
    fn count_superpixels_examples() {
        let g = build_graph_simplified(&field(2, 2, &[1.0; 4]), 1, f64::INFINITY);
        let labels = connected_components(&g);
        assert_eq!(count_superpixels(&labels, Region::full(2, 2)), 4);
        assert_eq!(count_superpixels(&labels, Region::new(1, 1, 1, 1)), 1);
    }

    #[test]
    fn region_with_components_crossing_but_no_maxima() {
        // Three identical rows, strictly increasing along each row. Vertical
        // neighbors are equal, so rows never link; each row is one component
        // rooted at its right end. The left column contains no local maximum
        // yet meets all three components.
        let mut vals = Vec::new();
        for _ in 0..3 {
            vals.extend_from_slice(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        }
        let f = field(3, 5, &vals);
        let g = build_graph_simplified(&f, 1, 1.0);
        let labels = connected_components(&g);
        assert_eq!(labels.num_labels(), 3);
        let left_col = Region::new(0, 0, 3, 1);
        assert_eq!(count_superpixels(&labels, left_col), 3);
        assert!(local_maxima(&f, 1, 1.0, left_col).is_empty());
    }

    #[test]
    fn parent_edges_respect_the_cutoff() {
        let f = DensityField::from_fn(12, 12, |i, j| ((i * 31 + j * 17) % 97) as f64).unwrap();
        for &dm in &[1.0, 2.5, 4.0] {
            let g = build_graph_simplified(&f, 5, dm);
            assert!(max_edge_length(&g) <= dm + 1e-12);
        }
    }
}
