//! Rate-region geometry in `(R0, R1, R2)`.
//!
//! A [`ConstraintPolytope`] is a list of rows `Σ cᵢ Rᵢ ≤ rhs` with small
//! nonnegative integer coefficients, plus implied nonnegativity of every rate.
//! Regions are compared through support functions, which is exact for the
//! convex closures the bounds are stated as.

mod envelope;
mod fm;
mod vertex;

pub use envelope::{
    envelope_dominates, envelope_of_union, polytope_supports, DirectionSet, DominanceReport, EnvelopeAccumulator,
    RegionEnvelope,
};
pub use fm::{fm_eliminate, fm_eliminate_all, Inequality, LinearSystem};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use vertex::enumerate_vertices;

pub const R0: &str = "R0";
pub const R1: &str = "R1";
pub const R2: &str = "R2";

/// Geometry feasibility tolerance.
pub const GEOM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateVector {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RateVector {
    pub fn new(r0: f64, r1: f64, r2: f64) -> Self {
        Self { r0, r1, r2 }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        match name {
            R0 => Some(self.r0),
            R1 => Some(self.r1),
            R2 => Some(self.r2),
            _ => None,
        }
    }
}

/// One row `Σ coeffs[i]·x[i] ≤ rhs`. An infinite `rhs` means the row is
/// absent; a negative one makes the region empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub coeffs: Vec<u32>,
    pub rhs: f64,
    #[serde(default)]
    pub label: String,
}

impl LinearConstraint {
    pub fn new(coeffs: Vec<u32>, rhs: f64, label: impl Into<String>) -> Self {
        Self { coeffs, rhs, label: label.into() }
    }

    pub fn lhs(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(&c, &v)| c as f64 * v).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintPolytope {
    variables: Vec<String>,
    constraints: Vec<LinearConstraint>,
}

impl ConstraintPolytope {
    pub fn new(variables: &[&str], constraints: Vec<LinearConstraint>) -> Result<Self> {
        if variables.is_empty() || variables.len() > 3 {
            return Err(Error::ShapeMismatch("a rate region has one to three variables".into()));
        }
        for c in &constraints {
            if c.coeffs.len() != variables.len() {
                return Err(Error::ShapeMismatch(format!(
                    "row `{}` has {} coefficients for {} variables",
                    c.label,
                    c.coeffs.len(),
                    variables.len()
                )));
            }
            if c.coeffs.iter().all(|&k| k == 0) {
                return Err(Error::ShapeMismatch(format!("row `{}` has no nonzero coefficient", c.label)));
            }
            if c.rhs.is_nan() || c.rhs == f64::NEG_INFINITY {
                return Err(Error::InvalidParameter(format!("row `{}` has rhs {}", c.label, c.rhs)));
            }
        }
        Ok(Self { variables: variables.iter().map(|s| s.to_string()).collect(), constraints })
    }

    /// Region over `(R0, R1, R2)`.
    pub fn rates3(constraints: Vec<LinearConstraint>) -> Result<Self> {
        Self::new(&[R0, R1, R2], constraints)
    }

    /// Region over `(R0, R1)`.
    pub fn rates2(constraints: Vec<LinearConstraint>) -> Result<Self> {
        Self::new(&[R0, R1], constraints)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn with_constraint(mut self, c: LinearConstraint) -> Result<Self> {
        let names: Vec<&str> = self.variables.iter().map(String::as_str).collect();
        self.constraints.push(c);
        Self::new(&names, self.constraints)
    }

    /// Some row has a negative right-hand side, so not even the origin fits.
    pub fn is_empty(&self) -> bool {
        self.constraints.iter().any(|c| c.rhs < 0.0)
    }

    /// Every variable appears in some finite row.
    pub fn is_bounded(&self) -> bool {
        (0..self.dim()).all(|i| self.covers(i))
    }

    fn covers(&self, i: usize) -> bool {
        self.constraints.iter().any(|c| c.coeffs[i] > 0 && c.rhs.is_finite())
    }

    /// Vertices of the region (empty when the region is empty).
    pub fn vertices(&self) -> Vec<Vec<f64>> {
        if self.is_empty() {
            return Vec::new();
        }
        let n = self.dim();
        let mut rows: Vec<(Vec<f64>, f64)> = self
            .constraints
            .iter()
            .filter(|c| c.rhs.is_finite())
            .map(|c| (c.coeffs.iter().map(|&k| k as f64).collect(), c.rhs))
            .collect();
        for i in 0..n {
            let mut a = vec![0.0; n];
            a[i] = -1.0;
            rows.push((a, 0.0));
        }
        enumerate_vertices(&rows, n)
    }

    fn check_direction(&self, dir: &[f64]) -> Result<()> {
        if dir.len() != self.dim() {
            return Err(Error::InvalidDirection(format!(
                "direction has {} components for {} variables",
                dir.len(),
                self.dim()
            )));
        }
        if dir.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) || dir.iter().all(|&d| d == 0.0) {
            return Err(Error::InvalidDirection(format!("{dir:?} is not a nonzero nonnegative direction")));
        }
        Ok(())
    }

    /// `max dir·r` over the region: `+∞` if unbounded along `dir`, `−∞` if
    /// the region is empty.
    pub fn support(&self, dir: &[f64]) -> Result<f64> {
        self.check_direction(dir)?;
        if self.is_empty() {
            return Ok(f64::NEG_INFINITY);
        }
        if (0..self.dim()).any(|i| dir[i] > 0.0 && !self.covers(i)) {
            return Ok(f64::INFINITY);
        }
        Ok(support_over(&self.vertices(), dir))
    }

    /// Every row holds within `tol` and every coordinate is at least `−tol`.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        point.len() == self.dim()
            && point.iter().all(|&x| x >= -tol)
            && self.constraints.iter().all(|c| c.lhs(point) <= c.rhs + tol)
    }

    pub fn contains_rate(&self, r: &RateVector, tol: f64) -> bool {
        let p: Option<Vec<f64>> = self.variables.iter().map(|n| r.get(n)).collect();
        p.is_some_and(|p| self.contains(&p, tol))
    }

    /// Sets `R2 = 0` and drops rows that only constrained `R2`.
    pub fn project_r2_zero(&self) -> Result<ConstraintPolytope> {
        let Some(k) = self.variables.iter().position(|n| n == R2) else {
            return Ok(self.clone());
        };
        let keep: Vec<&str> = self
            .variables
            .iter()
            .filter(|n| *n != R2)
            .map(String::as_str)
            .collect();
        let mut rows = Vec::new();
        for c in &self.constraints {
            let coeffs: Vec<u32> = c
                .coeffs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &v)| v)
                .collect();
            if coeffs.iter().any(|&v| v > 0) {
                rows.push(LinearConstraint::new(coeffs, c.rhs, c.label.clone()));
            } else if c.rhs < 0.0 {
                // Vacuous in the remaining rates but still infeasible.
                let mut coeffs = vec![0; keep.len()];
                coeffs[0] = 1;
                rows.push(LinearConstraint::new(coeffs, c.rhs, c.label.clone()));
            }
        }
        Self::new(&keep, rows)
    }

    pub fn to_linear_system(&self) -> LinearSystem {
        let n = self.dim();
        let mut rows: Vec<Inequality> = self
            .constraints
            .iter()
            .map(|c| Inequality::new(c.coeffs.iter().map(|&k| k as f64).collect(), c.rhs))
            .collect();
        for i in 0..n {
            let mut a = vec![0.0; n];
            a[i] = -1.0;
            rows.push(Inequality::new(a, 0.0));
        }
        LinearSystem::new(&self.variables.iter().map(String::as_str).collect::<Vec<_>>(), rows)
            .expect("dimensions agree by construction")
    }
}

pub(crate) fn support_over(vertices: &[Vec<f64>], dir: &[f64]) -> f64 {
    vertices
        .iter()
        .map(|v| v.iter().zip(dir).map(|(a, b)| a * b).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}
