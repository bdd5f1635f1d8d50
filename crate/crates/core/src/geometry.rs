//! Axis-aligned domains and the point-set generators used by the benchmark
//! geometries: uniform meshes, seeded grid subsamples, circle arcs and the
//! strongly non-uniform segments-with-spheres configuration.
//!
//! All generators are pure functions of their arguments (including seeds), so
//! repeated calls reproduce identical point sets.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// An axis-aligned box `[lo_1, hi_1] x ... x [lo_d, hi_d]` with `1 <= d <= 3`.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.is_empty() || lo.len() > 3 {
            return Err(Error::UnsupportedDim(lo.len()));
        }
        for (d, (&a, &b)) in lo.iter().zip(hi.iter()).enumerate() {
            if !(a < b) || !a.is_finite() || !b.is_finite() {
                return Err(Error::InvalidBox { dim: d, lo: a, hi: b });
            }
        }
        Ok(Self { lo, hi })
    }

    /// Square / cube of side `side` with lower corner `corner`.
    pub fn cube(corner: &[f64], side: f64) -> Result<Self> {
        let lo = corner.to_vec();
        let hi = corner.iter().map(|&c| c + side).collect();
        Self::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| 0.5 * (a + b))
            .collect()
    }

    pub fn contains(&self, p: &[f64], tol: f64) -> bool {
        p.len() == self.dim()
            && p.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&x, (&a, &b))| x >= a - tol && x <= b + tol)
    }
}

/// An ordered list of `d`-dimensional points, stored flat in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || dim > 3 {
            return Err(Error::UnsupportedDim(dim));
        }
        if coords.len() % dim != 0 {
            return Err(Error::LengthMismatch {
                expected: coords.len() / dim * dim,
                got: coords.len(),
            });
        }
        Ok(Self { dim, coords })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    /// The subset at the given indices, in index order.
    pub fn subset(&self, indices: &[usize]) -> PointSet {
        let mut out = PointSet::empty(self.dim);
        for &i in indices {
            out.push(self.point(i));
        }
        out
    }

    /// All points of `self` followed by all points of `other`.
    pub fn concat(&self, other: &PointSet) -> Result<PointSet> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        PointSet::new(self.dim, coords)
    }
}

/// Per-dimension equispaced coordinates including the box endpoints; a count
/// of 1 collapses to the midpoint.
fn equispaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![0.5 * (lo + hi)];
    }
    let step = (hi - lo) / (count - 1) as f64;
    (0..count).map(|i| lo + step * i as f64).collect()
}

/// Tensor-product uniform mesh over `boxd` with `counts[i]` points per
/// dimension (endpoints included, count 1 means the midpoint).
pub fn uniform_grid(boxd: &AxisBox, counts: &[usize]) -> Result<PointSet> {
    if counts.len() != boxd.dim() {
        return Err(Error::DimMismatch {
            expected: boxd.dim(),
            got: counts.len(),
        });
    }
    for &c in counts {
        if c == 0 {
            return Err(Error::EmptyCount(c));
        }
    }
    let axes: Vec<Vec<f64>> = (0..boxd.dim())
        .map(|d| equispaced(boxd.lo()[d], boxd.hi()[d], counts[d]))
        .collect();
    Ok(tensor_points(&axes))
}

/// Cartesian product of per-dimension coordinate lists, last dimension fastest.
pub(crate) fn tensor_points(axes: &[Vec<f64>]) -> PointSet {
    let dim = axes.len();
    let total: usize = axes.iter().map(|a| a.len()).product();
    let mut coords = Vec::with_capacity(total * dim);
    let mut idx = vec![0usize; dim];
    for _ in 0..total {
        for d in 0..dim {
            coords.push(axes[d][idx[d]]);
        }
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < axes[d].len() {
                break;
            }
            idx[d] = 0;
        }
    }
    PointSet { dim, coords }
}

/// Per-dimension resolution of the implicit grid that [`random_points`]
/// subsamples from.
pub const SUBSAMPLE_GRID_PER_DIM: usize = 100;

/// `n` points drawn without replacement from a uniform 100-per-dimension grid
/// over `boxd`. Deterministic for a fixed seed.
pub fn random_points(boxd: &AxisBox, n: usize, seed: u64) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::EmptyCount(0));
    }
    let counts = vec![SUBSAMPLE_GRID_PER_DIM; boxd.dim()];
    let grid = uniform_grid(boxd, &counts)?;
    if n > grid.len() {
        return Err(Error::SampleTooLarge {
            requested: n,
            available: grid.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = sample(&mut rng, grid.len(), n).into_vec();
    Ok(grid.subset(&picked))
}

/// `n` points equispaced in angle on the arc of radius `radius` around
/// `center`, spanning `[angle_lo, angle_hi]` inclusive. A single point sits at
/// `angle_lo`.
pub fn arc_points(
    center: [f64; 2],
    radius: f64,
    angle_lo: f64,
    angle_hi: f64,
    n: usize,
) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::EmptyCount(0));
    }
    if !(angle_lo < angle_hi) {
        return Err(Error::InvalidBox {
            dim: 0,
            lo: angle_lo,
            hi: angle_hi,
        });
    }
    let mut out = PointSet::empty(2);
    for i in 0..n {
        let t = if n == 1 {
            angle_lo
        } else {
            angle_lo + (angle_hi - angle_lo) * i as f64 / (n - 1) as f64
        };
        out.push(&[center[0] + radius * t.cos(), center[1] + radius * t.sin()]);
    }
    Ok(out)
}

/// Seed of the rejection sampler that fills the spheres in
/// [`segments_with_spheres`]; fixed so the geometry is reproducible.
pub const SPHERE_FILL_SEED: u64 = 0x5e67_3d00;

/// Strongly non-uniform 3D geometry: per side, a unit segment carrying `n`
/// equispaced points plus a sphere of diameter `1/n` at its inner end holding
/// `25 n` points, so each side has `26 n` points. The spheres sit between the
/// segments and their surfaces are `1/n` apart. Layout on the x axis, with
/// `eps = 1/n`:
///
/// ```text
/// [--- segment X ---][sph X]  eps  [sph Y][--- segment Y ---]
///  -1-3eps/2  -3eps/2       -eps/2 eps/2         1+3eps/2
/// ```
///
/// Sphere points come from seeded rejection sampling in the bounding cube.
pub fn segments_with_spheres(n: usize) -> Result<(PointSet, PointSet)> {
    if n == 0 {
        return Err(Error::EmptyCount(0));
    }
    let eps = 1.0 / n as f64;
    let radius = 0.5 * eps;
    let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_FILL_SEED);

    let build_side = |rng: &mut ChaCha8Rng, sign: f64| -> PointSet {
        let mut pts = PointSet::empty(3);
        // segment [3eps/2, 1 + 3eps/2] (mirrored for sign < 0), n points
        let inner = 1.5 * eps;
        for x in equispaced(inner, inner + 1.0, n) {
            pts.push(&[sign * x, 0.0, 0.0]);
        }
        // sphere of diameter eps centred at the segment's inner end side
        let center = sign * eps;
        let mut placed = 0;
        while placed < 25 * n {
            let p = [
                center + rng.gen_range(-radius..=radius),
                rng.gen_range(-radius..=radius),
                rng.gen_range(-radius..=radius),
            ];
            let d2 = (p[0] - center) * (p[0] - center) + p[1] * p[1] + p[2] * p[2];
            if d2 <= radius * radius {
                pts.push(&p);
                placed += 1;
            }
        }
        pts
    };

    let x_side = build_side(&mut rng, -1.0);
    let y_side = build_side(&mut rng, 1.0);
    Ok((x_side, y_side))
}

/// Index split of a segments-with-spheres side: `0..n` are segment points,
/// `n..26n` are sphere points.
pub fn segment_point_count(n: usize) -> usize {
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn uniform_grid_counts_match() {
        let b = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let g = uniform_grid(&b, &[50, 50]).unwrap();
        assert_eq!(g.len(), 2500);
    }

    #[test]
    fn uniform_grid_single_count_is_midpoint() {
        let b = AxisBox::new(vec![0.0], vec![1.0]).unwrap();
        let g = uniform_grid(&b, &[1]).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g.point(0), &[0.5]);
    }

    #[test]
    fn uniform_grid_includes_endpoints() {
        let b = AxisBox::new(vec![0.0], vec![2.0]).unwrap();
        let g = uniform_grid(&b, &[3]).unwrap();
        let xs: Vec<f64> = g.iter().map(|p| p[0]).collect();
        assert_eq!(xs, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn uniform_grid_rejects_zero_count() {
        let b = AxisBox::new(vec![0.0], vec![1.0]).unwrap();
        assert!(matches!(uniform_grid(&b, &[0]), Err(Error::EmptyCount(0))));
    }

    #[test]
    fn random_points_subsamples_distinct_grid_points() {
        let b = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let p = random_points(&b, 500, 7).unwrap();
        assert_eq!(p.len(), 500);
        // all points on the 100x100 grid and pairwise distinct
        let mut seen = std::collections::HashSet::new();
        for pt in p.iter() {
            assert!(b.contains(pt, 0.0));
            let key = (
                (pt[0] * 99.0).round() as i64,
                (pt[1] * 99.0).round() as i64,
            );
            assert!((pt[0] - key.0 as f64 / 99.0).abs() < 1e-12);
            assert!(seen.insert(key), "duplicate sample {key:?}");
        }
    }

    #[test]
    fn random_points_deterministic_and_guarded() {
        let b = AxisBox::cube(&[0.0, 0.0], 1.0).unwrap();
        let a = random_points(&b, 137, 42).unwrap();
        let c = random_points(&b, 137, 42).unwrap();
        assert_eq!(a, c);
        assert!(matches!(random_points(&b, 0, 1), Err(Error::EmptyCount(0))));
        assert!(matches!(
            random_points(&b, 10_001, 1),
            Err(Error::SampleTooLarge { .. })
        ));
    }

    #[test]
    fn arc_points_endpoints() {
        let p = arc_points([0.0, 0.0], 1.0, 0.0, std::f64::consts::FRAC_PI_2, 2).unwrap();
        assert!((p.point(0)[0] - 1.0).abs() < 1e-15 && p.point(0)[1].abs() < 1e-15);
        assert!(p.point(1)[0].abs() < 1e-15 && (p.point(1)[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arc_points_single_point_at_lo() {
        let p = arc_points([1.0, 2.0], 2.0, 0.3, 0.9, 1).unwrap();
        assert_eq!(p.len(), 1);
        assert!((p.point(0)[0] - (1.0 + 2.0 * 0.3f64.cos())).abs() < 1e-15);
    }

    #[test]
    fn segments_with_spheres_sizes() {
        let (x, y) = segments_with_spheres(200).unwrap();
        assert_eq!(x.len(), 5200);
        assert_eq!(y.len(), 5200);
        let (x1, y1) = segments_with_spheres(1).unwrap();
        assert_eq!(x1.len(), 26);
        assert_eq!(y1.len(), 26);
    }

    #[test]
    fn segments_with_spheres_sphere_points_near_segment_end() {
        let n = 25;
        let eps = 1.0 / n as f64;
        let (x, y) = segments_with_spheres(n).unwrap();
        // inner segment endpoints sit at -1.5 eps and +1.5 eps
        for (side, sign) in [(&x, -1.0), (&y, 1.0)] {
            let end = [sign * 1.5 * eps, 0.0, 0.0];
            for i in n..side.len() {
                let p = side.point(i);
                let d = ((p[0] - end[0]).powi(2) + p[1].powi(2) + p[2].powi(2)).sqrt();
                assert!(d <= eps + 1e-12, "sphere point {d} beyond {eps}");
            }
        }
        // sides never touch: gap eps between sphere surfaces
        for px in x.iter() {
            assert!(px[0] < -0.5 * eps + 1e-12);
        }
        for py in y.iter() {
            assert!(py[0] > 0.5 * eps - 1e-12);
        }
    }

    #[test]
    fn segments_with_spheres_deterministic() {
        let (a, _) = segments_with_spheres(10).unwrap();
        let (b, _) = segments_with_spheres(10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_boxes_rejected() {
        assert!(AxisBox::new(vec![0.0], vec![0.0]).is_err());
        assert!(AxisBox::new(vec![1.0], vec![0.0]).is_err());
        assert!(AxisBox::new(vec![], vec![]).is_err());
        assert!(AxisBox::new(vec![0.0; 4], vec![1.0; 4]).is_err());
    }

    proptest! {
        #[test]
        fn generated_points_lie_in_box(
            lo in -5.0f64..5.0,
            side in 0.1f64..10.0,
            c0 in 1usize..6,
            c1 in 1usize..6,
        ) {
            let b = AxisBox::cube(&[lo, lo], side).unwrap();
            let g = uniform_grid(&b, &[c0, c1]).unwrap();
            prop_assert_eq!(g.len(), c0 * c1);
            for p in g.iter() {
                prop_assert!(b.contains(p, 1e-12));
            }
        }

        #[test]
        fn random_points_in_box(seed in 0u64..1000, n in 1usize..50) {
            let b = AxisBox::cube(&[-1.0, 2.0], 3.0).unwrap();
            let pts = random_points(&b, n, seed).unwrap();
            prop_assert_eq!(pts.len(), n);
            for p in pts.iter() {
                prop_assert!(b.contains(p, 0.0));
            }
        }

        #[test]
        fn arc_points_on_circle(n in 1usize..40, r in 0.1f64..5.0) {
            let p = arc_points([0.3, -0.7], r, -0.4, 1.1, n).unwrap();
            for pt in p.iter() {
                let d = ((pt[0] - 0.3).powi(2) + (pt[1] + 0.7).powi(2)).sqrt();
                prop_assert!((d - r).abs() < 1e-12);
            }
        }
    }
}
