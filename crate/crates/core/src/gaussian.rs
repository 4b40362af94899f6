//! Closed-form regions for the scalar Gaussian broadcast channel.
//!
//! Every region is a union over one or two power-split parameters in
//! `[0, 1]`: `alpha` and `beta` for the outer bound, `beta` alone for the
//! inner regions. Rates are in bits.

use rayon::prelude::*;
use serde::Serialize;

use crate::channels::GaussianBc;
use crate::error::{Error, Result};
use crate::regions::{ConstraintPolytope, DirectionSet, EnvelopeAccumulator, LinearConstraint, RegionEnvelope};

/// `½ log2(1 + x)`, with `psi(∞) = ∞`.
pub fn psi(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::InvalidParameter(format!("psi needs a nonnegative argument, got {x}")));
    }
    Ok(ps(x))
}

fn ps(x: f64) -> f64 {
    if x.is_infinite() {
        f64::INFINITY
    } else {
        0.5 * x.ln_1p() / std::f64::consts::LN_2
    }
}

fn check_param(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

fn require_stronger_first(ch: &GaussianBc) -> Result<()> {
    if !ch.first_is_stronger() {
        return Err(Error::NotApplicable(format!(
            "needs |a| >= |b| (got a = {}, b = {}); swap the receivers",
            ch.a, ch.b
        )));
    }
    Ok(())
}

fn require_correlated(ch: &GaussianBc) -> Result<()> {
    if !ch.perfectly_correlated() {
        return Err(Error::NotApplicable(format!(
            "needs perfectly correlated noises, got lambda = {}; use the half-bit regions",
            ch.lambda
        )));
    }
    if ch.is_degraded_alignment() {
        return Err(Error::NotApplicable("lambda = b/a is the degraded case".into()));
    }
    Ok(())
}

fn require_partly_correlated(ch: &GaussianBc) -> Result<()> {
    if ch.perfectly_correlated() {
        return Err(Error::NotApplicable(
            "needs |lambda| < 1; use the exact regions for perfectly correlated noises".into(),
        ));
    }
    Ok(())
}

fn require_no_forward_link(ch: &GaussianBc) -> Result<()> {
    if ch.c12 != 0.0 {
        return Err(Error::NotApplicable(format!("needs c12 = 0, got {}", ch.c12)));
    }
    Ok(())
}

/// Rate of the cloud layer at receiver 2 when a fraction `beta` of the power
/// is superposed on top: `psi((1-β)b²P / (βb²P + 1))`.
fn cloud2(ch: &GaussianBc, beta: f64) -> f64 {
    let g = ch.b * ch.b * ch.power;
    ps((1.0 - beta) * g / (beta * g + 1.0))
}

fn cloud1(ch: &GaussianBc, alpha: f64) -> f64 {
    let g = ch.a * ch.a * ch.power;
    ps((1.0 - alpha) * g / (alpha * g + 1.0))
}

/// The mixed coefficient `(κ + a²)/2` of the half-bit regions, written as
/// `(a² + b² − 2λab + (1 − λ²)a²) / (2(1 − λ²))`.
fn half_bit_coefficient(ch: &GaussianBc) -> f64 {
    let (a, b, l) = (ch.a, ch.b, ch.lambda);
    (a * a + b * b - 2.0 * l * a * b + (1.0 - l * l) * a * a) / (2.0 * (1.0 - l * l))
}

fn half_link(c: f64) -> f64 {
    (c - 0.5).max(0.0)
}

/// The eight outer-bound right-hand sides at `(alpha, beta)`, `+∞` where
/// `κ = ∞` removes the row.
pub fn outer_rows(ch: &GaussianBc, alpha: f64, beta: f64) -> [f64; 8] {
    let k = ch.kappa();
    let p = ch.power;
    let psi1 = if k.is_infinite() { f64::INFINITY } else { ps(alpha * k * p) };
    let psi2 = if k.is_infinite() { f64::INFINITY } else { ps(beta * k * p) };
    let s = cloud2(ch, beta);
    let b2 = ch.b * ch.b * p;
    let c1 = cloud1(ch, alpha);
    [
        c1 + ch.c21,
        psi2 + s,
        s + ch.c12,
        psi1 + ps((1.0 - alpha) * b2 / (alpha * b2 + 1.0)),
        ps(beta * ch.a * ch.a * p) + s + ch.c12 + ch.c21,
        psi2 + s + ch.c12,
        psi1 + c1 + ch.c21,
        ps(k * p),
    ]
}

const OUTER_SHAPE: [([u32; 3], &str); 8] = [
    ([1, 1, 0], "receiver 1 total"),
    ([0, 1, 0], "receiver 1 private"),
    ([1, 0, 1], "receiver 2 total"),
    ([0, 0, 1], "receiver 2 private"),
    ([1, 1, 1], "sum with both links"),
    ([1, 1, 1], "sum through receiver 2"),
    ([1, 1, 1], "sum through receiver 1"),
    ([1, 1, 1], "joint observation"),
];

/// The outer bound at one `(alpha, beta)`. Rows that become vacuous at
/// `κ = ∞` are left out.
pub fn outer_polytope_g(ch: &GaussianBc, alpha: f64, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    require_stronger_first(ch)?;
    check_param("alpha", alpha)?;
    check_param("beta", beta)?;
    let rows = outer_rows(ch, alpha, beta)
        .into_iter()
        .zip(OUTER_SHAPE)
        .filter(|(rhs, _)| rhs.is_finite())
        .map(|(rhs, (c, label))| LinearConstraint::new(c.to_vec(), rhs, label))
        .collect();
    ConstraintPolytope::rates3(rows)
}

/// `0, step, 2·step, …, 1`, with the last point clamped to 1.
pub fn param_grid(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 0.25) {
        return Err(Error::InvalidParameter(format!("parameter step {step} outside (0, 0.25]")));
    }
    let n = (1.0 / step - 1e-9).ceil() as usize;
    if n > 1_000_000 {
        return Err(Error::GridTooLarge { points: n as u128 + 1, limit: 1_000_001 });
    }
    Ok((0..=n).map(|k| (k as f64 * step).min(1.0)).collect())
}

fn add_region(acc: &mut EnvelopeAccumulator, poly: ConstraintPolytope, dim: usize) -> Result<()> {
    if dim == 2 && poly.dim() == 3 {
        acc.add(&poly.project_r2_zero()?)
    } else {
        acc.add(&poly)
    }
}

/// Envelope of the outer bound over an `(alpha, beta)` grid. A 2-D direction
/// set restricts to `R2 = 0`.
pub fn outer_envelope_g(ch: &GaussianBc, param_step: f64, directions: &DirectionSet) -> Result<RegionEnvelope> {
    let grid = param_grid(param_step)?;
    if (grid.len() as u128).pow(2) > crate::simplex::MAX_GRID_POINTS {
        return Err(Error::GridTooLarge {
            points: (grid.len() as u128).pow(2),
            limit: crate::simplex::MAX_GRID_POINTS,
        });
    }
    let dim = directions.dim();
    grid.par_iter()
        .try_fold(
            || EnvelopeAccumulator::new(directions),
            |mut acc, &alpha| {
                for &beta in &grid {
                    add_region(&mut acc, outer_polytope_g(ch, alpha, beta)?, dim)?;
                }
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| EnvelopeAccumulator::new(directions), |a, b| Ok(a.merge(b)))?
        .finish()
}

/// The `(R0, R1)` capacity region with degraded message sets and perfectly
/// correlated noises, at one `beta`. With `|a| < |b|` the union is attained
/// at `beta = 0`, which is used regardless of the argument.
pub fn correlated_degraded_capacity(ch: &GaussianBc, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    require_correlated(ch)?;
    check_param("beta", beta)?;
    let beta = if ch.first_is_stronger() { beta } else { 0.0 };
    let s = cloud2(ch, beta);
    let p = ch.power;
    ConstraintPolytope::rates2(vec![
        LinearConstraint::new(vec![1, 0], s + ch.c12, "common at receiver 2"),
        LinearConstraint::new(vec![1, 1], ps(ch.a * ch.a * p) + ch.c21, "receiver 1 total"),
        LinearConstraint::new(vec![1, 1], ps(beta * ch.a * ch.a * p) + s + ch.c12 + ch.c21, "both links"),
    ])
}

/// The `(R0, R1, R2)` capacity region with perfectly correlated noises and
/// only the `2 → 1` link, at one `beta`.
pub fn correlated_one_sided_capacity(ch: &GaussianBc, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    require_correlated(ch)?;
    require_no_forward_link(ch)?;
    require_stronger_first(ch)?;
    check_param("beta", beta)?;
    let s = cloud2(ch, beta);
    ConstraintPolytope::rates3(vec![
        LinearConstraint::new(vec![1, 0, 1], s, "receiver 2 total"),
        LinearConstraint::new(vec![1, 1, 1], ps(beta * ch.a * ch.a * ch.power) + s + ch.c21, "sum"),
    ])
}

/// Right-hand sides of the half-bit `(R0, R1)` region.
pub fn half_bit_degraded_rows(ch: &GaussianBc, beta: f64) -> [f64; 5] {
    let s = cloud2(ch, beta);
    let p = ch.power;
    let a2 = ch.a * ch.a * p;
    let c = half_bit_coefficient(ch) * p;
    let h = half_link(ch.c21);
    [s + ch.c12, ps(a2) + h, ps(c), ps(beta * a2) + s + h + ch.c12, ps(beta * c) + s + ch.c12]
}

/// An achievable `(R0, R1)` region within half a bit of capacity for
/// partly correlated noises, at one `beta`.
pub fn half_bit_degraded_region(ch: &GaussianBc, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    require_partly_correlated(ch)?;
    require_stronger_first(ch)?;
    check_param("beta", beta)?;
    let r = half_bit_degraded_rows(ch, beta);
    ConstraintPolytope::rates2(vec![
        LinearConstraint::new(vec![1, 0], r[0], "common at receiver 2"),
        LinearConstraint::new(vec![1, 1], r[1], "receiver 1 direct"),
        LinearConstraint::new(vec![1, 1], r[2], "joint observation"),
        LinearConstraint::new(vec![1, 1], r[3], "both links"),
        LinearConstraint::new(vec![1, 1], r[4], "through receiver 2"),
    ])
}

pub fn half_bit_one_sided_rows(ch: &GaussianBc, beta: f64) -> [f64; 4] {
    let s = cloud2(ch, beta);
    let p = ch.power;
    let c = half_bit_coefficient(ch) * p;
    [s, ps(c), ps(beta * ch.a * ch.a * p) + s + half_link(ch.c21), ps(beta * c) + s]
}

/// An achievable `(R0, R1, R2)` region within half a bit of capacity with
/// only the `2 → 1` link, at one `beta`.
pub fn half_bit_one_sided_region(ch: &GaussianBc, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    require_partly_correlated(ch)?;
    require_no_forward_link(ch)?;
    require_stronger_first(ch)?;
    check_param("beta", beta)?;
    let r = half_bit_one_sided_rows(ch, beta);
    ConstraintPolytope::rates3(vec![
        LinearConstraint::new(vec![1, 0, 1], r[0], "receiver 2 total"),
        LinearConstraint::new(vec![1, 1, 1], r[1], "joint observation"),
        LinearConstraint::new(vec![1, 1, 1], r[2], "with link"),
        LinearConstraint::new(vec![1, 1, 1], r[3], "through receiver 2"),
    ])
}

pub fn decode_forward_rows(ch: &GaussianBc, beta: f64) -> [f64; 3] {
    let s = cloud2(ch, beta);
    let a2 = ch.a * ch.a * ch.power;
    [s + ch.c12, ps(a2), ps(beta * a2) + s + ch.c12]
}

/// The decode-and-forward inner region at one `beta`: receiver 1 decodes
/// everything and forwards over the `1 → 2` link; `c21` and `lambda` play
/// no role.
pub fn decode_forward_region(ch: &GaussianBc, beta: f64) -> Result<ConstraintPolytope> {
    ch.validate()?;
    check_param("beta", beta)?;
    let r = decode_forward_rows(ch, beta);
    ConstraintPolytope::rates3(vec![
        LinearConstraint::new(vec![1, 0, 1], r[0], "receiver 2 total"),
        LinearConstraint::new(vec![1, 1, 1], r[1], "receiver 1 decodes all"),
        LinearConstraint::new(vec![1, 1, 1], r[2], "superposition with link"),
    ])
}

/// Envelope of a one-parameter family over a `beta` grid. 3-D regions are
/// restricted to `R2 = 0` for 2-D direction sets.
pub fn beta_envelope<F>(step: f64, directions: &DirectionSet, region: F) -> Result<RegionEnvelope>
where
    F: Fn(f64) -> Result<ConstraintPolytope> + Sync,
{
    let grid = param_grid(step)?;
    let dim = directions.dim();
    grid.par_iter()
        .try_fold(
            || EnvelopeAccumulator::new(directions),
            |mut acc, &beta| {
                add_region(&mut acc, region(beta)?, dim)?;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(|| EnvelopeAccumulator::new(directions), |a, b| Ok(a.merge(b)))?
        .finish()
}

/// Worst-case distance in bits between the decode-and-forward region and
/// capacity: `½ log2(2 / (1 − |λ|))`, infinite at `|λ| = 1`.
pub fn decode_forward_gap_bound(lambda: f64) -> f64 {
    if lambda.abs() >= 1.0 {
        f64::INFINITY
    } else {
        0.5 * (2.0 / (1.0 - lambda.abs())).log2()
    }
}

/// The tighter `½ log2(2 / (1 − λ²))`, valid when `λab ≥ 0`.
pub fn decode_forward_gap_bound_aligned(lambda: f64) -> f64 {
    if lambda.abs() >= 1.0 {
        f64::INFINITY
    } else {
        0.5 * (2.0 / (1.0 - lambda * lambda)).log2()
    }
}

/// Largest `outer − inner` over the parameter grid for one pair of rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowGap {
    pub theorem: String,
    /// 1-based `(inner row, outer row)`.
    pub row_pair: (usize, usize),
    pub worst_params: WorstParams,
    pub max_gap_bits: f64,
    pub bound_bits: f64,
    /// `bound − max_gap`; negative means the certificate fails.
    pub slack_bits: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstParams {
    pub alpha: f64,
    pub beta: f64,
}

impl RowGap {
    pub fn holds(&self, tol: f64) -> bool {
        self.slack_bits >= -tol
    }
}

pub const HALF_BIT_DEGRADED: &str = "half-bit-degraded";
pub const HALF_BIT_ONE_SIDED: &str = "half-bit-one-sided";
pub const DECODE_FORWARD: &str = "decode-forward";
pub const DECODE_FORWARD_ALIGNED: &str = "decode-forward-aligned";

const HALF_BIT_DEGRADED_PAIRS: [(usize, usize); 5] = [(1, 3), (2, 1), (3, 8), (4, 5), (5, 6)];
const HALF_BIT_ONE_SIDED_PAIRS: [(usize, usize); 4] = [(1, 3), (2, 8), (3, 5), (4, 6)];
const DECODE_FORWARD_PAIRS: [(usize, usize); 3] = [(1, 3), (2, 8), (3, 6)];

fn pair_gaps(
    name: &str,
    pairs: &[(usize, usize)],
    bound: f64,
    grid: &[f64],
    outer: impl Fn(f64, f64) -> [f64; 8],
    inner: impl Fn(f64) -> Vec<f64>,
) -> Vec<RowGap> {
    let mut worst: Vec<(f64, WorstParams)> = vec![(f64::NEG_INFINITY, WorstParams { alpha: 0.0, beta: 0.0 }); pairs.len()];
    for &beta in grid {
        let inn = inner(beta);
        for &alpha in grid {
            let out = outer(alpha, beta);
            for (k, &(i, o)) in pairs.iter().enumerate() {
                let gap = out[o - 1] - inn[i - 1];
                if gap > worst[k].0 {
                    worst[k] = (gap, WorstParams { alpha, beta });
                }
            }
        }
    }
    pairs
        .iter()
        .zip(worst)
        .map(|(&row_pair, (gap, params))| RowGap {
            theorem: name.to_string(),
            row_pair,
            worst_params: params,
            max_gap_bits: gap,
            bound_bits: bound,
            slack_bits: bound - gap,
        })
        .collect()
}

/// Row-by-row comparison of each approximate inner region against the
/// outer bound at the same `beta` and the worst `alpha`.
///
/// The one-sided region is compared with the outer bound at `c12 = 0`. The
/// aligned decode-and-forward bound is reported only when `λab ≥ 0`.
pub fn gap_certificate(ch: &GaussianBc, param_step: f64) -> Result<Vec<RowGap>> {
    ch.validate()?;
    require_partly_correlated(ch)?;
    require_stronger_first(ch)?;
    let grid = param_grid(param_step)?;
    let one_sided = GaussianBc { c12: 0.0, ..*ch };
    let mut out = pair_gaps(
        HALF_BIT_DEGRADED,
        &HALF_BIT_DEGRADED_PAIRS,
        0.5,
        &grid,
        |a, b| outer_rows(ch, a, b),
        |b| half_bit_degraded_rows(ch, b).to_vec(),
    );
    out.extend(pair_gaps(
        HALF_BIT_ONE_SIDED,
        &HALF_BIT_ONE_SIDED_PAIRS,
        0.5,
        &grid,
        |a, b| outer_rows(&one_sided, a, b),
        |b| half_bit_one_sided_rows(&one_sided, b).to_vec(),
    ));
    let df = |name, bound| {
        pair_gaps(name, &DECODE_FORWARD_PAIRS, bound, &grid, |a, b| outer_rows(ch, a, b), |b| {
            decode_forward_rows(ch, b).to_vec()
        })
    };
    out.extend(df(DECODE_FORWARD, decode_forward_gap_bound(ch.lambda)));
    if ch.lambda * ch.a * ch.b >= 0.0 {
        out.extend(df(DECODE_FORWARD_ALIGNED, decode_forward_gap_bound_aligned(ch.lambda)));
    }
    Ok(out)
}

/// Largest `outer − inner` support difference over a direction set, for
/// one inner region. This is a region-level view of the row-wise gaps; it is
/// reported, not certified.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionGap {
    pub theorem: String,
    pub max_gap_bits: f64,
    pub direction: [f64; 3],
}

/// Support differences of the three approximate regions against the outer
/// bound over the canonical directions of each region's dimension.
pub fn direction_gaps(ch: &GaussianBc, param_step: f64) -> Result<Vec<DirectionGap>> {
    ch.validate()?;
    require_partly_correlated(ch)?;
    require_stronger_first(ch)?;
    let d2 = DirectionSet::canonical_2d();
    let d3 = DirectionSet::canonical_3d();
    let one_sided = GaussianBc { c12: 0.0, ..*ch };
    let gap = |name: &str, outer: RegionEnvelope, inner: RegionEnvelope| {
        let (g, dir) = outer
            .values()
            .iter()
            .zip(inner.values())
            .zip(outer.directions().iter())
            .map(|((o, i), d)| (o - i, *d))
            .fold((f64::NEG_INFINITY, [0.0; 3]), |a, b| if b.0 > a.0 { b } else { a });
        DirectionGap { theorem: name.to_string(), max_gap_bits: g, direction: dir }
    };
    Ok(vec![
        gap(
            HALF_BIT_DEGRADED,
            outer_envelope_g(ch, param_step, &d2)?,
            beta_envelope(param_step, &d2, |b| half_bit_degraded_region(ch, b))?,
        ),
        gap(
            HALF_BIT_ONE_SIDED,
            outer_envelope_g(&one_sided, param_step, &d3)?,
            beta_envelope(param_step, &d3, |b| half_bit_one_sided_region(&one_sided, b))?,
        ),
        gap(
            DECODE_FORWARD,
            outer_envelope_g(ch, param_step, &d3)?,
            beta_envelope(param_step, &d3, |b| decode_forward_region(ch, b))?,
        ),
    ])
}
