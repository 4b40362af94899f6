//! Support-function envelopes of unions of polytopes.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{support_over, ConstraintPolytope};
use crate::error::{Error, Result};

/// Tolerance for matching a queried direction against a stored one.
const DIR_MATCH_TOL: f64 = 1e-9;

/// A fixed set of nonnegative unit directions, all of dimension two
/// (`(R0, R1)`, stored with a zero third component) or three.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionSet {
    dim: usize,
    dirs: Vec<[f64; 3]>,
}

fn normalize(d: [f64; 3]) -> Option<[f64; 3]> {
    let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if !(n > 0.0) || !n.is_finite() || d.iter().any(|&x| x < 0.0) {
        return None;
    }
    Some([d[0] / n, d[1] / n, d[2] / n])
}

const CANONICAL_2D: [[f64; 3]; 4] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [1.0, 1.0, 0.0], [2.0, 1.0, 0.0]];

const CANONICAL_3D: [[f64; 3]; 8] = [
    [1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, 0.0, 1.0],
    [1.0, 1.0, 0.0],
    [1.0, 0.0, 1.0],
    [0.0, 1.0, 1.0],
    [1.0, 1.0, 1.0],
    [2.0, 1.0, 1.0],
];

impl DirectionSet {
    /// Normalizes and de-duplicates `dirs`.
    pub fn new(dim: usize, dirs: impl IntoIterator<Item = [f64; 3]>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidDirection(format!("direction sets are 2-D or 3-D, not {dim}-D")));
        }
        let mut set = Self { dim, dirs: Vec::new() };
        for d in dirs {
            if dim == 2 && d[2] != 0.0 {
                return Err(Error::InvalidDirection(format!("{d:?} leaves the (R0, R1) plane")));
            }
            let u = normalize(d)
                .ok_or_else(|| Error::InvalidDirection(format!("{d:?} is not a nonzero nonnegative direction")))?;
            if set.position(&u).is_none() {
                set.dirs.push(u);
            }
        }
        if set.dirs.is_empty() {
            return Err(Error::InvalidDirection("empty direction set".into()));
        }
        Ok(set)
    }

    /// `n` evenly spaced angles across the quadrant plus the canonical
    /// facet normals.
    pub fn fan_2d(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDirection("a fan needs at least two directions".into()));
        }
        let step = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
        let fan = (0..n).map(|i| {
            let t = i as f64 * step;
            [t.cos().max(0.0), t.sin(), 0.0]
        });
        Self::new(2, fan.chain(CANONICAL_2D))
    }

    /// `n` quasi-uniform directions over the positive octant plus the
    /// canonical facet normals.
    pub fn fibonacci_3d(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDirection("need at least one direction".into()));
        }
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let grid = (0..n).map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = (i as f64 * inv_phi).fract() * std::f64::consts::FRAC_PI_2;
            [r * t.cos(), r * t.sin(), z]
        });
        Self::new(3, grid.chain(CANONICAL_3D))
    }

    /// The 181-direction half-degree fan.
    pub fn default_2d() -> Self {
        Self::fan_2d(181).expect("static fan")
    }

    /// 512 octant directions.
    pub fn default_3d() -> Self {
        Self::fibonacci_3d(512).expect("static grid")
    }

    pub fn canonical_2d() -> Self {
        Self::new(2, CANONICAL_2D).expect("static directions")
    }

    pub fn canonical_3d() -> Self {
        Self::new(3, CANONICAL_3D).expect("static directions")
    }

    /// Canonical facet normals in the given dimension, unnormalized.
    pub fn canonical_normals(dim: usize) -> &'static [[f64; 3]] {
        if dim == 2 {
            &CANONICAL_2D
        } else {
            &CANONICAL_3D
        }
    }

    /// `n` uniformly random nonnegative directions.
    pub fn random<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Result<Self> {
        let dirs: Vec<[f64; 3]> = (0..n)
            .map(|_| {
                let mut d = [0.0; 3];
                for x in d.iter_mut().take(dim) {
                    // Half-normal components give a uniform law on the octant.
                    let g: f64 = rng.sample(rand_distr::StandardNormal);
                    *x = g.abs() + 1e-12;
                }
                d
            })
            .collect();
        Self::new(dim, dirs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64; 3]> {
        self.dirs.iter()
    }

    pub fn get(&self, i: usize) -> [f64; 3] {
        self.dirs[i]
    }

    fn position(&self, unit: &[f64; 3]) -> Option<usize> {
        self.dirs
            .iter()
            .position(|d| d.iter().zip(unit).all(|(a, b)| (a - b).abs() < DIR_MATCH_TOL))
    }
}

/// Support values of a convex region along every direction of a set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionEnvelope {
    directions: DirectionSet,
    support: Vec<f64>,
}

impl RegionEnvelope {
    pub fn from_parts(directions: DirectionSet, support: Vec<f64>) -> Result<Self> {
        if directions.len() != support.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} support values for {} directions",
                support.len(),
                directions.len()
            )));
        }
        Ok(Self { directions, support })
    }

    pub fn directions(&self) -> &DirectionSet {
        &self.directions
    }

    pub fn values(&self) -> &[f64] {
        &self.support
    }

    /// Support along `dir`, which must be a positive multiple of a stored
    /// direction; the value scales with `|dir|`.
    pub fn support_along(&self, dir: &[f64]) -> Result<f64> {
        let mut d = [0.0; 3];
        for (o, &x) in d.iter_mut().zip(dir) {
            *o = x;
        }
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let unit = normalize(d).ok_or_else(|| Error::InvalidDirection(format!("{dir:?}")))?;
        let i = self
            .directions
            .position(&unit)
            .ok_or_else(|| Error::InvalidDirection(format!("{dir:?} is not in the direction set")))?;
        Ok(self.support[i] * n)
    }

    /// Largest `|self − other|` over directions and where it happens.
    pub fn max_abs_difference(&self, other: &RegionEnvelope) -> Result<(f64, [f64; 3])> {
        if self.directions != other.directions {
            return Err(Error::DirectionMismatch);
        }
        Ok(self
            .support
            .iter()
            .zip(&other.support)
            .zip(self.directions.iter())
            .map(|((a, b), d)| ((a - b).abs(), *d))
            .fold((0.0, self.directions.get(0)), |acc, x| if x.0 > acc.0 { x } else { acc }))
    }
}

fn polytope_direction(poly: &ConstraintPolytope, d: &[f64; 3], dim: usize) -> Result<Vec<f64>> {
    if poly.dim() != dim {
        return Err(Error::InvalidDirection(format!(
            "{}-D directions for a {}-D region",
            dim,
            poly.dim()
        )));
    }
    Ok(d[..dim].to_vec())
}

/// Supports of one polytope along a whole direction set, sharing a single
/// vertex enumeration.
pub fn polytope_supports(poly: &ConstraintPolytope, dirs: &DirectionSet) -> Result<Vec<f64>> {
    if poly.is_empty() {
        polytope_direction(poly, &dirs.get(0), dirs.dim())?;
        return Ok(vec![f64::NEG_INFINITY; dirs.len()]);
    }
    let vertices = poly.vertices();
    dirs.iter()
        .map(|d| {
            let d = polytope_direction(poly, d, dirs.dim())?;
            if d.iter().enumerate().any(|(i, &x)| x > 0.0 && !poly.covers(i)) {
                Ok(f64::INFINITY)
            } else {
                Ok(support_over(&vertices, &d))
            }
        })
        .collect()
}

/// Running pointwise maximum of supports over many polytopes.
#[derive(Debug, Clone)]
pub struct EnvelopeAccumulator {
    directions: DirectionSet,
    values: Vec<f64>,
    members: u64,
}

impl EnvelopeAccumulator {
    pub fn new(directions: &DirectionSet) -> Self {
        Self {
            directions: directions.clone(),
            values: vec![f64::NEG_INFINITY; directions.len()],
            members: 0,
        }
    }

    pub fn add(&mut self, poly: &ConstraintPolytope) -> Result<()> {
        let s = polytope_supports(poly, &self.directions)?;
        for (v, x) in self.values.iter_mut().zip(s) {
            *v = v.max(x);
        }
        self.members += 1;
        Ok(())
    }

    pub fn merge(mut self, other: Self) -> Self {
        for (v, x) in self.values.iter_mut().zip(other.values) {
            *v = v.max(x);
        }
        self.members += other.members;
        self
    }

    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn finish(self) -> Result<RegionEnvelope> {
        if self.values.iter().any(|v| *v == f64::NEG_INFINITY) {
            return Err(Error::EmptyRegion);
        }
        if self.values.iter().any(|v| v.is_infinite()) {
            return Err(Error::Unbounded);
        }
        RegionEnvelope::from_parts(self.directions, self.values)
    }
}

/// Support function of the convex hull of a union: the pointwise maximum of
/// the members' supports.
pub fn envelope_of_union(polys: &[ConstraintPolytope], directions: &DirectionSet) -> Result<RegionEnvelope> {
    if polys.is_empty() {
        return Err(Error::InvalidParameter("envelope of an empty family".into()));
    }
    polys
        .par_iter()
        .try_fold(
            || EnvelopeAccumulator::new(directions),
            |mut acc, p| {
                acc.add(p)?;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| EnvelopeAccumulator::new(directions), |a, b| Ok(a.merge(b)))?
        .finish()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    /// Largest `inner − outer` support difference.
    pub max_violation: f64,
    pub worst_direction: [f64; 3],
    pub dominated: bool,
}

/// Checks `inner ⊆ outer + slack` direction by direction.
pub fn envelope_dominates(
    outer: &RegionEnvelope,
    inner: &RegionEnvelope,
    slack: f64,
) -> Result<DominanceReport> {
    if outer.directions != inner.directions {
        return Err(Error::DirectionMismatch);
    }
    let (max_violation, worst_direction) = inner
        .support
        .iter()
        .zip(&outer.support)
        .zip(outer.directions.iter())
        .map(|((i, o), d)| (i - o, *d))
        .fold((f64::NEG_INFINITY, outer.directions.get(0)), |acc, x| if x.0 > acc.0 { x } else { acc });
    // Allow for the rounding in `inner − outer` when the two are equal up to slack.
    let dominated = max_violation <= slack + 1e-12 * (1.0 + slack.abs());
    Ok(DominanceReport { max_violation, worst_direction, dominated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::LinearConstraint;

    fn poly2(rows: &[([u32; 2], f64)]) -> ConstraintPolytope {
        ConstraintPolytope::rates2(rows.iter().map(|(c, b)| LinearConstraint::new(c.to_vec(), *b, "")).collect())
            .unwrap()
    }

    #[test]
    fn direction_set_sizes() {
        assert_eq!(DirectionSet::default_2d().len(), 182);
        let d3 = DirectionSet::default_3d();
        assert_eq!(d3.len(), 520);
        assert!(d3.iter().all(|d| d.iter().all(|&x| x >= 0.0)));
        assert!(d3.iter().all(|d| ((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn union_hull_of_two_segments() {
        let a = poly2(&[([1, 0], 1.0), ([0, 1], 0.0)]);
        let b = poly2(&[([1, 0], 0.0), ([0, 1], 1.0)]);
        let env = envelope_of_union(&[a, b], &DirectionSet::default_2d()).unwrap();
        assert!((env.support_along(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nested_union_is_the_larger() {
        let small = poly2(&[([1, 1], 1.0)]);
        let big = poly2(&[([1, 1], 2.0)]);
        let dirs = DirectionSet::default_2d();
        let env = envelope_of_union(&[small, big.clone()], &dirs).unwrap();
        assert_eq!(env, envelope_of_union(&[big], &dirs).unwrap());
    }

    #[test]
    fn dominance_examples() {
        let dirs = DirectionSet::default_2d();
        let env = envelope_of_union(&[poly2(&[([1, 0], 1.0), ([1, 1], 2.0)])], &dirs).unwrap();
        assert_eq!(envelope_dominates(&env, &env, 0.0).unwrap().max_violation, 0.0);
        let half = RegionEnvelope::from_parts(dirs.clone(), env.values().iter().map(|v| v * 0.5).collect()).unwrap();
        assert!(envelope_dominates(&env, &half, 0.0).unwrap().max_violation <= 0.0);
        let up = RegionEnvelope::from_parts(dirs.clone(), env.values().iter().map(|v| v + 0.5).collect()).unwrap();
        let r = envelope_dominates(&env, &up, 0.5).unwrap();
        assert!((r.max_violation - 0.5).abs() < 1e-12);
        assert!(r.dominated);
        let other = RegionEnvelope::from_parts(DirectionSet::canonical_2d(), vec![0.0; 4]).unwrap();
        assert!(matches!(envelope_dominates(&env, &other, 0.0), Err(Error::DirectionMismatch)));
    }

    #[test]
    fn canonical_queries_scale_with_norm() {
        let dirs = DirectionSet::default_2d();
        let env = envelope_of_union(&[poly2(&[([1, 0], 1.0), ([1, 1], 2.0)])], &dirs).unwrap();
        assert!((env.support_along(&[2.0, 1.0]).unwrap() - 3.0).abs() < 1e-12);
        assert!(env.support_along(&[1.0, 0.3]).is_err());
    }
}
