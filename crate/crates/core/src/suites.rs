//! Named verification runs. Each suite evaluates a set of checks with
//! explicit tolerances and reports pass/fail per check.
//!
//! Suites are deterministic for a fixed seed: random draws are made
//! sequentially from one seeded generator before any parallel work.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channels::{example_channel, Channel, DmBroadcastChannel, ExampleParams, GaussianBc};
use crate::dm_bounds::{
    alpha1_star, alpha2_star, degraded_message_envelope, degraded_message_envelopes, partial_rate_system,
    primitive_relay_rate, AuxFactorization, DegradedVariant, FactorCards, InnerTerms, ZetaForm, PARTIAL_RATES,
};
use crate::error::{Error, Result};
use crate::gaussian::{
    beta_envelope, correlated_degraded_capacity, correlated_one_sided_capacity, decode_forward_region,
    gap_certificate, outer_envelope_g, DECODE_FORWARD, DECODE_FORWARD_ALIGNED, HALF_BIT_DEGRADED,
    HALF_BIT_ONE_SIDED,
};
use crate::info::{binary_entropy, vars, Conditional, JointPmf};
use crate::regions::{fm_eliminate_all, polytope_supports, DirectionSet, RegionEnvelope};
use crate::simplex::dirichlet_uniform;

pub const SUITE_NAMES: [&str; 11] = [
    "info-properties",
    "fm-equivalence",
    "alpha-star",
    "dm-example1",
    "dm-example2-cutset",
    "relay-largest-rate",
    "gauss-correlated-degraded",
    "gauss-correlated-one-sided",
    "gauss-gaps",
    "gauss-degraded",
    "gauss-vanishing-power",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 7 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    /// `measured <= threshold`
    #[serde(rename = "<=")]
    AtMost,
    /// `measured >= threshold`
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub description: String,
    pub measured: f64,
    pub threshold: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl Check {
    pub fn at_most(description: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            description: description.into(),
            measured,
            threshold,
            comparison: Comparison::AtMost,
            pass: measured <= threshold,
        }
    }

    pub fn at_least(description: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self {
            description: description.into(),
            measured,
            threshold,
            comparison: Comparison::AtLeast,
            pass: measured >= threshold,
        }
    }

    /// `|measured − target| <= tol`, reported as the absolute deviation.
    pub fn near(description: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        let dev = (measured - target).abs();
        Self::at_most(format!("{} (target {target})", description.into()), if dev.is_nan() { f64::INFINITY } else { dev }, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SuiteReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn run_suite(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    let start = Instant::now();
    let checks = match name {
        "info-properties" => info_properties(config.seed)?,
        "fm-equivalence" => fm_equivalence(config.seed)?,
        "alpha-star" => alpha_star(config.seed)?,
        "dm-example1" => dm_example1()?,
        "dm-example2-cutset" => dm_example2_cutset()?,
        "relay-largest-rate" => relay_largest_rate(config.seed)?,
        "gauss-correlated-degraded" => gauss_correlated_degraded()?,
        "gauss-correlated-one-sided" => gauss_correlated_one_sided()?,
        "gauss-gaps" => gauss_gaps(config.seed)?,
        "gauss-degraded" => gauss_degraded()?,
        "gauss-vanishing-power" => gauss_vanishing_power()?,
        other => {
            return Err(Error::UnknownSuite { name: other.to_string(), valid: SUITE_NAMES.join(", ") })
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { suite: name.to_string(), seed: config.seed, checks, pass, wall_time: start.elapsed() })
}

fn dm_example(name: &str, p: f64, c12: f64, c21: f64) -> Result<DmBroadcastChannel> {
    match example_channel(name, ExampleParams { p, c12, c21, ..Default::default() })? {
        Channel::Dm(d) => Ok(d),
        Channel::Gaussian(_) => unreachable!("{name} is discrete"),
    }
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Largest `a − b` over matched directions.
fn max_excess(a: &RegionEnvelope, b: &RegionEnvelope) -> f64 {
    max_of(a.values().iter().zip(b.values()).map(|(x, y)| x - y))
}

fn supports(dirs: &[Vec<f64>], f: impl Fn(&[f64]) -> Result<f64>) -> Result<Vec<f64>> {
    dirs.iter().map(|d| f(d)).collect()
}

/// Difference of two support values, treating equal infinities as equal.
fn support_gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

// ---------------------------------------------------------------- info

const INFO_TOL: f64 = 1e-10;

fn random_joint(rng: &mut ChaCha8Rng, names: &[&str]) -> Result<JointPmf> {
    let cards: Vec<usize> = names.iter().map(|_| rng.random_range(2..=4)).collect();
    let n = cards.iter().product();
    JointPmf::new(names, &cards, dirichlet_uniform(rng, n))
}

/// `H(last | rest)` for a row-major joint whose last variable has `card`
/// symbols: the mass-weighted entropy of each normalized row.
fn conditional_entropy(probs: &[f64], card: usize) -> f64 {
    probs
        .chunks(card)
        .map(|row| {
            let m: f64 = row.iter().sum();
            if m == 0.0 {
                return 0.0;
            }
            m * row.iter().filter(|&&p| p > 0.0).map(|&p| -(p / m) * (p / m).log2()).sum::<f64>()
        })
        .sum()
}

fn info_properties(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = 0.0f64;
    let mut mi_chain = 0.0f64;
    let mut min_info = f64::INFINITY;
    let mut dpi = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let j = random_joint(&mut rng, &["A", "B", "C"])?;
        let h = |s: &[&str]| j.entropy(s);
        // H(A,B,C) = H(A) + H(B|A) + H(C|A,B), conditional terms summed row by row.
        let lhs = h(&["A", "B", "C"])?;
        let ab = j.marginal(&["A", "B"])?;
        let rhs = h(&["A"])? + conditional_entropy(ab.probs(), ab.cards()[1]) + conditional_entropy(j.probs(), j.cards()[2]);
        chain = chain.max((lhs - rhs).abs());
        let i = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
        let split = i(&["A"], &["B"], &[])? + i(&["A"], &["C"], &["B"])?;
        mi_chain = mi_chain.max((i(&["A"], &["B", "C"], &[])? - split).abs());
        for v in [i(&["A"], &["B"], &[])?, i(&["A"], &["B"], &["C"])?, i(&["B"], &["C"], &["A"])?, h(&["A"])?] {
            min_info = min_info.min(v);
        }

        // A -> B -> C by construction.
        let ab = random_joint(&mut rng, &["A", "B"])?;
        let cb = ab.card("B")?;
        let cc = rng.random_range(2..=4);
        let rows: Vec<f64> = (0..cb).flat_map(|_| dirichlet_uniform(&mut rng, cc)).collect();
        let abc = ab.extend(&["B"], &Conditional::new(&[cb], cc, rows)?, &[("C", cc)])?;
        let gap = abc.mutual_information(&["A"], &["C"], &[])? - abc.mutual_information(&["A"], &["B"], &[])?;
        dpi = dpi.max(gap);
    }
    Ok(vec![
        Check::at_most("entropy chain rule, max |error| over 1000 joints", chain, INFO_TOL),
        Check::at_most("mutual-information chain rule, max |error|", mi_chain, INFO_TOL),
        Check::at_least("smallest entropy or (conditional) mutual information", min_info, -INFO_TOL),
        Check::at_most("data processing on A-B-C chains, max I(A;C) - I(A;B)", dpi, INFO_TOL),
    ])
}

// ---------------------------------------------------------------- fm

const BINARY: FactorCards = FactorCards { u: 2, v: 2, w: 2, yhat1: 2, yhat2: 2 };

fn random_binary_channel(rng: &mut ChaCha8Rng) -> Result<DmBroadcastChannel> {
    let t: Vec<f64> = (0..2).flat_map(|_| dirichlet_uniform(rng, 4)).collect();
    let c12 = rng.random_range(0.0..1.0);
    let c21 = rng.random_range(0.0..1.0);
    DmBroadcastChannel::new(2, 2, 2, t, c12, c21)
}

fn random_directions(rng: &mut ChaCha8Rng, n: usize) -> Result<Vec<Vec<f64>>> {
    Ok(DirectionSet::random(3, n, rng)?.iter().map(|d| d.to_vec()).collect())
}

fn fm_equivalence(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for _ in 0..100 {
        let ch = random_binary_channel(&mut rng)?;
        let f = AuxFactorization::random(&mut rng, &ch, BINARY, false)?;
        let dirs = random_directions(&mut rng, 50)?;
        cases.push((ch, f, dirs));
    }
    let alphas = [0.0, 0.5, 1.0];
    let results: Vec<(f64, bool)> = cases
        .par_iter()
        .map(|(ch, f, dirs)| {
            let terms = InnerTerms::evaluate(ch, f)?;
            let mut worst = 0.0f64;
            for &alpha in &alphas {
                let sys = partial_rate_system(ch, f, alpha)?;
                let projected = fm_eliminate_all(&sys, &PARTIAL_RATES[3..])?;
                let poly = terms.inner1_alpha(alpha, ZetaForm::Clipped)?;
                let a = supports(dirs, |d| projected.support(d))?;
                let b = supports(dirs, |d| poly.support(d))?;
                worst = worst.max(max_of(a.iter().zip(&b).map(|(x, y)| support_gap(*x, *y))));
            }
            let feasible = terms_feasible(&terms, &alphas);
            Ok((worst, feasible))
        })
        .collect::<Result<_>>()?;
    let matched = results.iter().filter(|(w, _)| *w <= 1e-9).count();
    let worst = max_of(results.iter().map(|r| r.0));
    let feasible = results.iter().filter(|r| r.1).count();
    let worst_feasible = max_of(results.iter().filter(|r| r.1).map(|r| r.0));
    Ok(vec![
        Check::at_least(
            "fraction of 100 random binary factorizations whose projected partial-rate system matches the five-row region (alpha in {0, 0.5, 1}, 50 directions)",
            matched as f64 / results.len() as f64,
            1.0,
        ),
        Check::at_most("largest support difference over all cases", worst, 1e-9),
        Check::at_most(
            format!("largest support difference over the {feasible} cases where the binning cost fits the private budgets"),
            if feasible == 0 { 0.0 } else { worst_feasible },
            1e-9,
        ),
    ])
}

/// The private decoding budgets can absorb the binning cost at every split.
fn terms_feasible(t: &InnerTerms, alphas: &[f64]) -> bool {
    alphas.iter().all(|&a| {
        let [a1, _, d1, _] = t.partial_caps(a).expect("valid split");
        a1 + d1 >= t.u_v_w
    })
}

// ---------------------------------------------------------------- alpha*

fn alpha_star(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for _ in 0..100 {
        let ch = random_binary_channel(&mut rng)?;
        let f1 = AuxFactorization::random(&mut rng, &ch, BINARY, false)?;
        let f2 = AuxFactorization::random(&mut rng, &ch, BINARY, true)?;
        cases.push((ch, f1, f2));
    }
    let dirs = DirectionSet::default_3d();
    let alphas: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
    let excess: Vec<(f64, f64, f64)> = cases
        .par_iter()
        .map(|(ch, f1, f2)| {
            let t1 = InnerTerms::evaluate(ch, f1)?;
            let t2 = InnerTerms::evaluate(ch, f2)?;
            let best1 = polytope_supports(&t1.inner1()?, &dirs)?;
            let best2 = polytope_supports(&t2.inner2()?, &dirs)?;
            let (mut e1, mut e2) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for &a in &alphas {
                let s1 = polytope_supports(&t1.inner1_alpha(a, ZetaForm::Unclipped)?, &dirs)?;
                let s2 = polytope_supports(&t2.inner2_alpha(a, ZetaForm::Unclipped)?, &dirs)?;
                e1 = e1.max(max_of(s1.iter().zip(&best1).map(|(x, y)| excess_over(*x, *y))));
                e2 = e2.max(max_of(s2.iter().zip(&best2).map(|(x, y)| excess_over(*x, *y))));
            }
            // The closed form must coincide with the split it was derived at.
            let at1 = polytope_supports(&t1.inner1_alpha(alpha1_star(&t1), ZetaForm::Unclipped)?, &dirs)?;
            let at2 = polytope_supports(&t2.inner2_alpha(alpha2_star(&t2), ZetaForm::Unclipped)?, &dirs)?;
            let same = max_of(
                at1.iter().zip(&best1).chain(at2.iter().zip(&best2)).map(|(x, y)| support_gap(*x, *y)),
            );
            Ok((e1, e2, same))
        })
        .collect::<Result<_>>()?;
    Ok(vec![
        Check::at_most(
            "receiver 2 quantizes first: largest support excess of any of 21 splits over the optimal split",
            max_of(excess.iter().map(|e| e.0)),
            1e-9,
        ),
        Check::at_most(
            "receiver 1 quantizes first: largest support excess of any of 21 splits over the optimal split",
            max_of(excess.iter().map(|e| e.1)),
            1e-9,
        ),
        Check::at_most(
            "closed form equals the split-parameterized region at the optimal split",
            max_of(excess.iter().map(|e| e.2)),
            1e-9,
        ),
    ])
}

fn excess_over(x: f64, best: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else {
        x - best
    }
}

// ---------------------------------------------------------------- discrete examples

/// `max_p min(I(X;Y1) + c21, H(X))` for `Y1 = X ⊕ Z`, `P(Z = 0) = z`, by a
/// fine 1-D sweep.
fn example1_sum_oracle(z: f64, c21: f64) -> f64 {
    max_of((0..=100_000).map(|k| {
        let p = k as f64 / 100_000.0;
        let py1 = p * z + (1.0 - p) * (1.0 - z);
        let i = binary_entropy(py1) - binary_entropy(z);
        (i + c21).min(binary_entropy(p))
    }))
}

fn dm_example1() -> Result<Vec<Check>> {
    let dirs = DirectionSet::canonical_2d();
    let mut checks = Vec::new();
    let ch = dm_example("dm-ex1", 0.2, 0.3, 0.5)?;
    let env = degraded_message_envelope(&ch, 1e-3, 1, &dirs, true)?;
    checks.push(Check::near("common-rate support, C12 = 0.3", env.support_along(&[1.0, 0.0])?, 0.3, 1e-9));
    let sum = env.support_along(&[1.0, 1.0])?;
    checks.push(Check::near("sum-rate support, C21 = 0.5", sum, 1.0 - binary_entropy(0.2) + 0.5, 2e-3));
    checks.push(Check::near("sum-rate support against a 1-D input sweep, C21 = 0.5", sum, example1_sum_oracle(0.2, 0.5), 2e-3));
    let ch = dm_example("dm-ex1", 0.2, 0.3, 0.9)?;
    let env = degraded_message_envelope(&ch, 1e-3, 1, &dirs, true)?;
    checks.push(Check::near("sum-rate support, C21 = 0.9", env.support_along(&[1.0, 1.0])?, 1.0, 2e-3));
    Ok(checks)
}

/// The 181 half-degree directions of the `(R0, R1)` quadrant.
pub fn half_degree_fan() -> DirectionSet {
    let step = std::f64::consts::FRAC_PI_2 / 180.0;
    DirectionSet::new(2, (0..=180).map(|i| {
        let t = i as f64 * step;
        [t.cos().max(0.0), t.sin(), 0.0]
    }))
    .expect("static fan")
}

fn dm_example2_cutset() -> Result<Vec<Check>> {
    let ch = dm_example("dm-ex2", 0.2, 0.0, 0.9)?;
    let dirs = half_degree_fan();
    let variants = [
        DegradedVariant { c12: 0.0, c21: 0.9, include_joint_row: true },
        DegradedVariant { c12: 0.0, c21: 0.9, include_joint_row: false },
        DegradedVariant { c12: 0.1, c21: 0.9, include_joint_row: true },
    ];
    let envs = degraded_message_envelopes(&ch, 0.02, 3, &dirs, &variants)?;
    let (cap, cutset, linked) = (&envs[0], &envs[1], &envs[2]);
    Ok(vec![
        Check::at_most("capacity inside the cut-set bound, largest excess (C12 = 0)", max_excess(cap, cutset), 1e-9),
        Check::at_least("cut-set bound exceeds capacity along some direction (C12 = 0)", max_excess(cutset, cap), 0.01),
        Check::at_most("capacity grows with C12: largest loss from 0 to 0.1", max_excess(cap, linked), 1e-9),
        Check::at_least("capacity at C12 = 0.1 exceeds capacity at C12 = 0 along some direction", max_excess(linked, cap), 0.01),
    ])
}

fn relay_largest_rate(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Independent binary symmetric observations at the relay and receiver.
    let bsc = |e1: f64, e2: f64, c12: f64| {
        let mut t = Vec::new();
        for x in 0..2usize {
            for y1 in 0..2usize {
                for y2 in 0..2usize {
                    let p1 = if x == y1 { 1.0 - e1 } else { e1 };
                    let p2 = if x == y2 { 1.0 - e2 } else { e2 };
                    t.push(p1 * p2);
                }
            }
        }
        DmBroadcastChannel::new(2, 2, 2, t, c12, 0.0)
    };
    let uniform = JointPmf::new(&[vars::W, vars::X], &[1, 2], vec![0.5, 0.5])?;
    let direct = 1.0 - binary_entropy(0.2);
    let no_link = primitive_relay_rate(&bsc(0.1, 0.2, 0.0)?, &uniform, &Conditional::trivial(&[1, 2]))?;
    let forward = Conditional::from_fn(&[1, 2], 2, |r, y| if r % 2 == y { 1.0 } else { 0.0 })?;
    let wide = bsc(0.1, 0.2, 10.0)?;
    let full = primitive_relay_rate(&wide, &uniform, &forward)?;
    let joint = {
        let j = crate::info::extend_with_channel(&uniform.clone().with_names(&[vars::W, vars::X])?, &wide)?;
        j.mutual_information(&[vars::X], &[vars::Y1, vars::Y2], &[])?
    };
    // Random (W, X) and quantizers never beat the cut-set bound.
    let ch = bsc(0.1, 0.2, 0.3)?;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..200 {
        let pwx = JointPmf::new(&[vars::W, vars::X], &[2, 2], dirichlet_uniform(&mut rng, 4))?;
        let rows: Vec<f64> = (0..4).flat_map(|_| dirichlet_uniform(&mut rng, 3)).collect();
        let q1 = Conditional::new(&[2, 2], 3, rows)?;
        let r = primitive_relay_rate(&ch, &pwx, &q1)?;
        let j = crate::info::extend_with_channel(&pwx, &ch)?;
        let cut = j
            .mutual_information(&[vars::X], &[vars::Y1, vars::Y2], &[])?
            .min(j.mutual_information(&[vars::X], &[vars::Y2], &[])? + ch.c12);
        worst = worst.max(r - cut);
    }
    Ok(vec![
        Check::near("no link, no quantizer: direct rate 1 - h(0.2)", no_link, direct, 1e-12),
        Check::near("wide link, relay forwards its observation: I(X;Y1,Y2)", full, joint, 1e-12),
        Check::at_most("200 random distributions, largest excess over the cut-set bound", worst, 1e-12),
    ])
}

// ---------------------------------------------------------------- Gaussian

fn gauss(a: f64, b: f64, lambda: f64, power: f64, c12: f64, c21: f64) -> Result<GaussianBc> {
    GaussianBc::new(a, b, lambda, power, c12, c21)
}

fn gauss_correlated_degraded() -> Result<Vec<Check>> {
    let dirs = DirectionSet::default_2d();
    let mut checks = Vec::new();
    for p in [0.5, 1.0, 4.0] {
        let ch = gauss(1.0, 0.5, 1.0, p, 0.2, 0.7)?;
        let cap = beta_envelope(1e-3, &dirs, |b| correlated_degraded_capacity(&ch, b))?;
        let outer = outer_envelope_g(&ch, 1e-2, &dirs)?;
        checks.push(Check::at_most(format!("P = {p}: capacity exceeds the outer bound by at most"), max_excess(&cap, &outer), 3e-3));
        checks.push(Check::at_most(format!("P = {p}: outer bound exceeds capacity by at most"), max_excess(&outer, &cap), 3e-3));
    }
    Ok(checks)
}

fn gauss_correlated_one_sided() -> Result<Vec<Check>> {
    let ch = gauss(1.0, 0.5, 1.0, 4.0, 0.0, 0.3)?;
    let dirs = DirectionSet::canonical_3d();
    let env = beta_envelope(1e-3, &dirs, |b| correlated_one_sided_capacity(&ch, b))?;
    // Oracle: maximize each linear functional over a fine beta sweep of the
    // two-row region by hand.
    let s = |beta: f64| 0.5 * (1.0 + (1.0 - beta) * 1.0 / (beta + 1.0)).log2();
    let sum_rate = |beta: f64| 0.5 * (1.0 + 4.0 * beta).log2() + s(beta) + 0.3;
    let n = 100_000;
    let betas = (0..=n).map(|k| k as f64 / n as f64);
    let r0r2 = max_of(betas.clone().map(|b| s(b).min(sum_rate(b))));
    let total = max_of(betas.map(sum_rate));
    let outer = outer_envelope_g(&ch, 1e-2, &dirs)?;
    Ok(vec![
        Check::near("support along (1,0,1)", env.support_along(&[1.0, 0.0, 1.0])?, r0r2, 1e-6),
        Check::near("support along (1,1,1)", env.support_along(&[1.0, 1.0, 1.0])?, total, 1e-6),
        Check::at_most("capacity exceeds the outer bound by at most", max_excess(&env, &outer), 3e-3),
        Check::at_most("outer bound exceeds capacity by at most", max_excess(&outer, &env), 3e-3),
    ])
}

fn gauss_gaps(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut channels = Vec::new();
    for _ in 0..500 {
        let mut a: f64 = rng.random_range(-3.0..3.0);
        let mut b: f64 = rng.random_range(-3.0..3.0);
        if a.abs() < b.abs() {
            std::mem::swap(&mut a, &mut b);
        }
        let lambda = rng.random_range(-0.99..=0.99);
        let power = 10f64.powf(rng.random_range(-3.0..=2.0));
        let c12 = rng.random_range(0.0..=2.0);
        let c21 = rng.random_range(0.0..=2.0);
        channels.push(gauss(a, b, lambda, power, c12, c21)?);
    }
    let rows: Vec<_> = channels
        .par_iter()
        .map(|ch| gap_certificate(ch, 0.01))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let worst = |names: &[&str]| {
        max_of(rows.iter().filter(|r| names.contains(&r.theorem.as_str())).map(|r| -r.slack_bits))
    };
    let aligned = rows.iter().filter(|r| r.theorem == DECODE_FORWARD_ALIGNED).count() / 3;
    Ok(vec![
        Check::at_most(
            "half-bit regions: largest paired-row gap minus 0.5 bit over 500 random channels",
            worst(&[HALF_BIT_DEGRADED, HALF_BIT_ONE_SIDED]),
            1e-9,
        ),
        Check::at_most(
            "decode-and-forward: largest paired-row gap minus 0.5 log2(2/(1-|lambda|))",
            worst(&[DECODE_FORWARD]),
            1e-9,
        ),
        Check::at_most(
            format!("decode-and-forward, {aligned} channels with lambda*a*b >= 0: largest gap minus 0.5 log2(2/(1-lambda^2))"),
            worst(&[DECODE_FORWARD_ALIGNED]),
            1e-9,
        ),
    ])
}

fn gauss_degraded() -> Result<Vec<Check>> {
    let dirs = DirectionSet::canonical_3d();
    let mut checks = Vec::new();
    for (a, b, l) in [(2.0, 1.0, 0.5), (1.0, -0.5, -0.5)] {
        let ch = gauss(a, b, l, 1.0, 0.3, 0.5)?;
        let df = beta_envelope(1e-2, &dirs, |beta| decode_forward_region(&ch, beta))?;
        let outer = outer_envelope_g(&ch, 1e-2, &dirs)?;
        let (diff, _) = df.max_abs_difference(&outer)?;
        checks.push(Check::at_most(format!("a = {a}, b = {b}, lambda = {l}: decode-and-forward vs outer bound"), diff, 1e-6));
    }
    Ok(checks)
}

fn gauss_vanishing_power() -> Result<Vec<Check>> {
    let dirs = DirectionSet::canonical_2d();
    let mirror = |power: f64| -> Result<RegionEnvelope> {
        let ch = match example_channel("g-mirror", ExampleParams { power, c12: 1.0, c21: 1.0, ..Default::default() })? {
            Channel::Gaussian(g) => g,
            Channel::Dm(_) => unreachable!("g-mirror is Gaussian"),
        };
        beta_envelope(1e-3, &dirs, |b| correlated_degraded_capacity(&ch, b))
    };
    let env = mirror(1.0)?;
    let mut checks = vec![
        Check::near("P = 1: common-rate support", env.support_along(&[1.0, 0.0])?, 1.5, 1e-9),
        Check::near("P = 1: sum-rate support", env.support_along(&[1.0, 1.0])?, 1.5, 1e-9),
    ];
    let mut prev = f64::INFINITY;
    let mut worst_rise = f64::NEG_INFINITY;
    let mut last = f64::NAN;
    for k in 0..=6 {
        let s = mirror(10f64.powi(-k))?.support_along(&[1.0, 0.0])?;
        worst_rise = worst_rise.max(s - prev);
        prev = s;
        last = s;
    }
    checks.push(Check::at_most("common-rate support decreases as P = 10^-k falls, largest rise", worst_rise, 0.0));
    checks.push(Check::at_least("P = 1e-6: common-rate support lower end", last, 0.999));
    checks.push(Check::at_most("P = 1e-6: common-rate support upper end", last, 1.0 + 1e-6));
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_names() {
        let err = run_suite("nope", &SuiteConfig::default()).unwrap_err();
        assert!(err.to_string().contains("gauss-gaps"));
    }

    #[test]
    fn near_reports_deviation() {
        let c = Check::near("x", 1.0, 1.1, 0.2);
        assert!(c.pass);
        assert!((c.measured - 0.1).abs() < 1e-12);
        assert!(!Check::near("x", f64::NAN, 1.0, 1.0).pass);
    }

    #[test]
    fn fast_suites_are_deterministic() {
        let cfg = SuiteConfig { seed: 3 };
        let a = run_suite("info-properties", &cfg).unwrap();
        let b = run_suite("info-properties", &cfg).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
        assert!(a.pass, "{:?}", a.failed().collect::<Vec<_>>());
    }

    #[test]
    fn fan_has_181_directions() {
        assert_eq!(half_degree_fan().len(), 181);
    }
}
