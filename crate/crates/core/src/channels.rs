//! Broadcast channels with conferencing links, structural checks and the
//! worked example channels.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{entropy_bits, Conditional, MASS_TOL};
use crate::simplex::SimplexGrid;

fn check_link(name: &str, c: f64) -> Result<()> {
    if !(c.is_finite() && c >= 0.0) {
        return Err(Error::InvalidChannel(format!("{name} = {c} must be finite and nonnegative")));
    }
    Ok(())
}

/// A discrete memoryless broadcast channel `P(y1, y2 | x)` with conferencing
/// link capacities `c12` (receiver 1 to 2) and `c21` (receiver 2 to 1).
#[derive(Debug, Clone, PartialEq)]
pub struct DmBroadcastChannel {
    x_card: usize,
    y1_card: usize,
    y2_card: usize,
    transition: Conditional,
    pub c12: f64,
    pub c21: f64,
}

/// The map `y2 = f(x, y1)` of a semi-deterministic channel, defined where
/// `(x, y1)` has positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiDeterministicMap {
    y1_card: usize,
    map: Vec<Option<usize>>,
}

impl SemiDeterministicMap {
    pub fn get(&self, x: usize, y1: usize) -> Option<usize> {
        self.map[x * self.y1_card + y1]
    }
}

/// Outcome of a grid search for an input that makes receiver 2 better than
/// receiver 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoreCapableReport {
    /// Smallest `I(X;Y1) - I(X;Y2)` seen. Negative means the channel is
    /// certainly not more capable; nonnegative is evidence, not proof.
    pub min_gap: f64,
    pub worst_input: Vec<f64>,
    pub points: u64,
}

impl DmBroadcastChannel {
    /// `transition` holds one row per input symbol, each flattened over
    /// `(y1, y2)` with `y2` varying fastest.
    pub fn new(
        x_card: usize,
        y1_card: usize,
        y2_card: usize,
        transition: Vec<f64>,
        c12: f64,
        c21: f64,
    ) -> Result<Self> {
        check_link("c12", c12)?;
        check_link("c21", c21)?;
        let transition = Conditional::new(&[x_card], y1_card * y2_card, transition)
            .map_err(|e| Error::InvalidChannel(e.to_string()))?;
        Ok(Self { x_card, y1_card, y2_card, transition, c12, c21 })
    }

    /// Builds a channel from a deterministic-plus-noise description:
    /// `noise[z]` is the law of a noise symbol and `outputs(x, z)` the
    /// resulting `(y1, y2)`.
    pub fn from_noise(
        x_card: usize,
        y1_card: usize,
        y2_card: usize,
        noise: &[f64],
        outputs: impl Fn(usize, usize) -> (usize, usize),
        c12: f64,
        c21: f64,
    ) -> Result<Self> {
        let mut t = vec![0.0; x_card * y1_card * y2_card];
        for x in 0..x_card {
            for (z, &pz) in noise.iter().enumerate() {
                let (y1, y2) = outputs(x, z);
                t[(x * y1_card + y1) * y2_card + y2] += pz;
            }
        }
        Self::new(x_card, y1_card, y2_card, t, c12, c21)
    }

    pub fn x_card(&self) -> usize {
        self.x_card
    }

    pub fn y1_card(&self) -> usize {
        self.y1_card
    }

    pub fn y2_card(&self) -> usize {
        self.y2_card
    }

    pub fn transition(&self) -> &Conditional {
        &self.transition
    }

    pub fn prob(&self, x: usize, y1: usize, y2: usize) -> f64 {
        self.transition.prob(x, y1 * self.y2_card + y2)
    }

    pub fn with_links(mut self, c12: f64, c21: f64) -> Result<Self> {
        check_link("c12", c12)?;
        check_link("c21", c21)?;
        self.c12 = c12;
        self.c21 = c21;
        Ok(self)
    }

    /// Returns the map when `Y2 = f(X, Y1)`.
    pub fn is_semi_deterministic(&self) -> Option<SemiDeterministicMap> {
        let mut map = vec![None; self.x_card * self.y1_card];
        for x in 0..self.x_card {
            for y1 in 0..self.y1_card {
                let mass: f64 = (0..self.y2_card).map(|y2| self.prob(x, y1, y2)).sum();
                if mass <= MASS_TOL {
                    continue;
                }
                let carriers: Vec<usize> = (0..self.y2_card)
                    .filter(|&y2| self.prob(x, y1, y2) > MASS_TOL)
                    .collect();
                if carriers.len() != 1 {
                    return None;
                }
                map[x * self.y1_card + y1] = Some(carriers[0]);
            }
        }
        Some(SemiDeterministicMap { y1_card: self.y1_card, map })
    }

    /// `I(X;Y1)` and `I(X;Y2)` for an input law.
    pub fn marginal_informations(&self, px: &[f64]) -> (f64, f64) {
        let mut y1_rows = vec![0.0; self.x_card * self.y1_card];
        let mut y2_rows = vec![0.0; self.x_card * self.y2_card];
        for x in 0..self.x_card {
            for y1 in 0..self.y1_card {
                for y2 in 0..self.y2_card {
                    let p = self.prob(x, y1, y2);
                    y1_rows[x * self.y1_card + y1] += p;
                    y2_rows[x * self.y2_card + y2] += p;
                }
            }
        }
        (
            input_output_information(px, &y1_rows, self.y1_card),
            input_output_information(px, &y2_rows, self.y2_card),
        )
    }

    /// Sweeps input laws on a simplex grid looking for `I(X;Y2) > I(X;Y1)`.
    pub fn more_capable_evidence(&self, grid_step: f64) -> Result<MoreCapableReport> {
        if !(grid_step > 0.0 && grid_step <= 0.5) {
            return Err(Error::InvalidParameter(format!("grid step {grid_step} outside (0, 0.5]")));
        }
        let grid = SimplexGrid::new(self.x_card, grid_step)?;
        let (min_gap, worst_input, points) = grid.par_fold(
            || (f64::INFINITY, Vec::new(), 0u64),
            |acc, px| {
                let (i1, i2) = self.marginal_informations(px);
                let gap = i1 - i2;
                if gap < acc.0 {
                    acc.0 = gap;
                    acc.1 = px.to_vec();
                }
                acc.2 += 1;
            },
            |a, b| {
                // Ties go to the lexicographically smaller input for a stable report.
                let keep_a = a.0 < b.0 || (a.0 == b.0 && a.1 <= b.1);
                let points = a.2 + b.2;
                let (g, w) = if keep_a { (a.0, a.1) } else { (b.0, b.1) };
                (g, w, points)
            },
        );
        Ok(MoreCapableReport { min_gap, worst_input, points })
    }
}

/// `I(X;Y)` for input `px` and a row-major channel `rows[x * card + y]`.
pub fn input_output_information(px: &[f64], rows: &[f64], card: usize) -> f64 {
    let mut py = vec![0.0; card];
    let mut h_cond = 0.0;
    for (x, &p) in px.iter().enumerate() {
        let row = &rows[x * card..(x + 1) * card];
        for (acc, &q) in py.iter_mut().zip(row) {
            *acc += p * q;
        }
        h_cond += p * entropy_bits(row);
    }
    (entropy_bits(&py) - h_cond).max(0.0)
}

/// The scalar Gaussian broadcast channel `Y1 = aX + Z1`, `Y2 = bX + Z2` with
/// unit-variance noises of correlation `lambda` and input power `power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianBc {
    pub a: f64,
    pub b: f64,
    pub lambda: f64,
    pub power: f64,
    pub c12: f64,
    pub c21: f64,
}

/// Tolerance for deciding `lambda * a == b` and `|lambda| == 1`.
pub const LAMBDA_TOL: f64 = 1e-12;

impl GaussianBc {
    pub fn new(a: f64, b: f64, lambda: f64, power: f64, c12: f64, c21: f64) -> Result<Self> {
        let ch = Self { a, b, lambda, power, c12, c21 };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.b.is_finite()) {
            return Err(Error::InvalidChannel("gains must be finite".into()));
        }
        if !(self.lambda.abs() <= 1.0) {
            return Err(Error::InvalidChannel(format!(
                "noise correlation {} outside [-1, 1]",
                self.lambda
            )));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::InvalidChannel(format!("power {} must be positive", self.power)));
        }
        check_link("c12", self.c12)?;
        check_link("c21", self.c21)
    }

    pub fn kappa(&self) -> f64 {
        kappa(self.a, self.b, self.lambda)
    }

    /// Noises are perfectly correlated.
    pub fn perfectly_correlated(&self) -> bool {
        self.lambda.abs() >= 1.0 - LAMBDA_TOL
    }

    /// Receiver 1 has the stronger gain, `|a| >= |b|`.
    pub fn first_is_stronger(&self) -> bool {
        self.a.abs() >= self.b.abs()
    }

    /// `lambda = b / a`, the physically degraded case.
    pub fn is_degraded_alignment(&self) -> bool {
        (self.lambda * self.a - self.b).abs() <= LAMBDA_TOL
    }
}

/// The effective SNR coefficient `(a² + b² − 2λab) / (1 − λ²)`.
///
/// At `|λ| = 1` it is `a²` when `λa = b` (the limit along the degraded line)
/// and `+∞` otherwise.
pub fn kappa(a: f64, b: f64, lambda: f64) -> f64 {
    if lambda.abs() >= 1.0 - LAMBDA_TOL {
        if (lambda.signum() * a - b).abs() <= LAMBDA_TOL {
            a * a
        } else {
            f64::INFINITY
        }
    } else {
        (a * a + b * b - 2.0 * lambda * a * b) / (1.0 - lambda * lambda)
    }
}

/// Either kind of channel.
#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Dm(DmBroadcastChannel),
    Gaussian(GaussianBc),
}

impl Channel {
    pub fn kind(&self) -> &'static str {
        match self {
            Channel::Dm(_) => "dm",
            Channel::Gaussian(_) => "gaussian",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ChannelSpec = serde_json::from_str(text)?;
        spec.try_into()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&ChannelSpec::from(self))?)
    }
}

/// On-disk channel description.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Dm {
        x_card: usize,
        y1_card: usize,
        y2_card: usize,
        /// One row per input symbol, flattened over `(y1, y2)`.
        transition: Vec<Vec<f64>>,
        #[serde(default)]
        c12: f64,
        #[serde(default)]
        c21: f64,
    },
    Gaussian {
        a: f64,
        b: f64,
        lambda: f64,
        power: f64,
        #[serde(default)]
        c12: f64,
        #[serde(default)]
        c21: f64,
    },
}

impl TryFrom<ChannelSpec> for Channel {
    type Error = Error;

    fn try_from(spec: ChannelSpec) -> Result<Self> {
        match spec {
            ChannelSpec::Dm { x_card, y1_card, y2_card, transition, c12, c21 } => {
                if transition.len() != x_card {
                    return Err(Error::InvalidChannel(format!(
                        "{} transition rows for {x_card} inputs",
                        transition.len()
                    )));
                }
                let flat = transition.into_iter().flatten().collect();
                Ok(Channel::Dm(DmBroadcastChannel::new(x_card, y1_card, y2_card, flat, c12, c21)?))
            }
            ChannelSpec::Gaussian { a, b, lambda, power, c12, c21 } => {
                Ok(Channel::Gaussian(GaussianBc::new(a, b, lambda, power, c12, c21)?))
            }
        }
    }
}

impl From<&Channel> for ChannelSpec {
    fn from(ch: &Channel) -> Self {
        match ch {
            Channel::Dm(d) => ChannelSpec::Dm {
                x_card: d.x_card,
                y1_card: d.y1_card,
                y2_card: d.y2_card,
                transition: d.transition.probs().chunks(d.y1_card * d.y2_card).map(<[f64]>::to_vec).collect(),
                c12: d.c12,
                c21: d.c21,
            },
            Channel::Gaussian(g) => ChannelSpec::Gaussian {
                a: g.a,
                b: g.b,
                lambda: g.lambda,
                power: g.power,
                c12: g.c12,
                c21: g.c21,
            },
        }
    }
}

/// Caller-supplied numbers for [`example_channel`]. `p` is `P(Z = 0)` for the
/// binary examples and `power` is used by the Gaussian ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams {
    pub p: f64,
    pub power: f64,
    pub c12: f64,
    pub c21: f64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self { p: 0.2, power: 1.0, c12: 0.0, c21: 0.0 }
    }
}

pub const EXAMPLE_NAMES: [&str; 5] = ["dm-ex1", "dm-ex2", "g-mirror", "g-noise-at-2", "g-noise-at-1"];

/// The worked example channels:
///
/// * `dm-ex1`: `Y1 = X ⊕ Z`, `Y2 = Z`
/// * `dm-ex2`: `Y1 = Z`, `Y2 = X ⊕ Z`
/// * `g-mirror`: `Y1 = X + Z`, `Y2 = X − Z`
/// * `g-noise-at-2`: `Y1 = X + Z`, `Y2 = Z`
/// * `g-noise-at-1`: `Y1 = Z`, `Y2 = X + Z`
pub fn example_channel(name: &str, params: ExampleParams) -> Result<Channel> {
    let ExampleParams { p, power, c12, c21 } = params;
    let noise = [p, 1.0 - p];
    match name {
        "dm-ex1" => Ok(Channel::Dm(DmBroadcastChannel::from_noise(
            2, 2, 2, &noise, |x, z| (x ^ z, z), c12, c21,
        )?)),
        "dm-ex2" => Ok(Channel::Dm(DmBroadcastChannel::from_noise(
            2, 2, 2, &noise, |x, z| (z, x ^ z), c12, c21,
        )?)),
        // Y2 = X - Z = 1·X + (-Z): unit gains with anti-correlated noises.
        "g-mirror" => Ok(Channel::Gaussian(GaussianBc::new(1.0, 1.0, -1.0, power, c12, c21)?)),
        "g-noise-at-2" => Ok(Channel::Gaussian(GaussianBc::new(1.0, 0.0, 1.0, power, c12, c21)?)),
        "g-noise-at-1" => Ok(Channel::Gaussian(GaussianBc::new(0.0, 1.0, 1.0, power, c12, c21)?)),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}
