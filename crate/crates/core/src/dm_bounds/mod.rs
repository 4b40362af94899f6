//! Inner, outer and capacity regions for discrete memoryless channels.
//!
//! Every bound is evaluated at one fixed auxiliary distribution and returned
//! as a [`ConstraintPolytope`](crate::regions::ConstraintPolytope); the
//! regions themselves are convex closures over distributions, which the
//! grid functions build as support-function envelopes.

mod capacity;
mod inner;
mod outer;
mod partial;
mod relay;

pub use capacity::{
    capacity_substitution, degraded_message_capacity, degraded_message_envelope, degraded_message_envelopes,
    DegradedVariant,
    more_capable_capacity, more_capable_envelope, substitution_envelope,
};
pub use inner::{alpha1_star, alpha2_star, InnerTerms, ZetaForm};
pub use outer::{outer_envelope, outer_polytope, OuterGrid};
pub use partial::{partial_rate_system, PARTIAL_RATES};
pub use relay::primitive_relay_rate;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::DmBroadcastChannel;
use crate::error::{Error, Result};
use crate::info::{compose_joint, vars, Conditional, JointPmf};
use crate::regions::ConstraintPolytope;
use crate::simplex::dirichlet_uniform;

/// An auxiliary distribution over `(U, V, X)` for the outer bound.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterAux {
    joint: JointPmf,
}

impl OuterAux {
    /// `probs` is row-major over `(u, v, x)`.
    pub fn new(u_card: usize, v_card: usize, x_card: usize, probs: Vec<f64>) -> Result<Self> {
        Ok(Self { joint: JointPmf::new(&[vars::U, vars::V, vars::X], &[u_card, v_card, x_card], probs)? })
    }

    pub fn joint(&self) -> &JointPmf {
        &self.joint
    }
}

/// The auxiliary bundle of the inner bounds: `P(u,v,w,x)`, the first
/// receiver's quantizer `P(ŷ1 | u, w, y1)` and the second receiver's
/// quantizer, given `y2` alone or `(w, y2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxFactorization {
    pub aux: JointPmf,
    pub q1: Conditional,
    pub q2: Conditional,
}

/// Alphabet sizes of the auxiliaries and quantizer outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCards {
    pub u: usize,
    pub v: usize,
    pub w: usize,
    pub yhat1: usize,
    pub yhat2: usize,
}

impl AuxFactorization {
    /// `aux` must be over four variables, read positionally as `(U,V,W,X)`.
    pub fn new(aux: JointPmf, q1: Conditional, q2: Conditional) -> Result<Self> {
        if aux.cards().len() != 4 {
            return Err(Error::ShapeMismatch("auxiliary joint must be over (U,V,W,X)".into()));
        }
        let aux = aux.with_names(&[vars::U, vars::V, vars::W, vars::X])?;
        let c = aux.cards();
        if q1.given_cards().len() != 3 || q1.given_cards()[..2] != [c[0], c[2]] {
            return Err(Error::ShapeMismatch(format!(
                "first quantizer must condition on (u, w, y1) with |U|={}, |W|={}",
                c[0], c[2]
            )));
        }
        match q2.given_cards().len() {
            1 => {}
            2 if q2.given_cards()[0] == c[2] => {}
            _ => {
                return Err(Error::ShapeMismatch(
                    "second quantizer must condition on y2 or (w, y2)".into(),
                ))
            }
        }
        Ok(Self { aux, q1, q2 })
    }

    pub fn cards(&self) -> FactorCards {
        let c = self.aux.cards();
        FactorCards { u: c[0], v: c[1], w: c[2], yhat1: self.q1.out_card(), yhat2: self.q2.out_card() }
    }

    /// The second quantizer looks at `W`.
    pub fn q2_uses_w(&self) -> bool {
        self.q2.given_cards().len() == 2
    }

    pub fn joint(&self, ch: &DmBroadcastChannel) -> Result<JointPmf> {
        if self.q1.given_cards()[2] != ch.y1_card() {
            return Err(Error::ShapeMismatch("first quantizer input differs from |Y1|".into()));
        }
        if *self.q2.given_cards().last().expect("nonempty") != ch.y2_card() {
            return Err(Error::ShapeMismatch("second quantizer input differs from |Y2|".into()));
        }
        compose_joint(&self.aux, ch, &self.q1, &self.q2)
    }

    /// A draw with every simplex sampled from Dirichlet(1).
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        ch: &DmBroadcastChannel,
        cards: FactorCards,
        q2_uses_w: bool,
    ) -> Result<Self> {
        let FactorCards { u, v, w, yhat1, yhat2 } = cards;
        let x = ch.x_card();
        let aux = JointPmf::new(&[vars::U, vars::V, vars::W, vars::X], &[u, v, w, x], dirichlet_uniform(rng, u * v * w * x))?;
        let random_cond = |rng: &mut R, given: &[usize], out: usize| {
            let rows: usize = given.iter().product();
            let probs: Vec<f64> = (0..rows).flat_map(|_| dirichlet_uniform(rng, out)).collect();
            Conditional::new(given, out, probs)
        };
        let q1 = random_cond(rng, &[u, w, ch.y1_card()], yhat1)?;
        let q2 = if q2_uses_w {
            random_cond(rng, &[w, ch.y2_card()], yhat2)?
        } else {
            random_cond(rng, &[ch.y2_card()], yhat2)?
        };
        Self::new(aux, q1, q2)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FactorizationSpec = serde_json::from_str(text)?;
        spec.try_into()
    }
}

/// On-disk factorization: `aux` row-major over `(u, v, w, x)`, quantizers as
/// one row per conditioning tuple.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorizationSpec {
    pub cards: FactorCards,
    pub x_card: usize,
    pub y1_card: usize,
    pub y2_card: usize,
    pub aux: Vec<f64>,
    pub q1: Vec<Vec<f64>>,
    pub q2: Vec<Vec<f64>>,
    #[serde(default)]
    pub q2_given_w: bool,
}

impl TryFrom<FactorizationSpec> for AuxFactorization {
    type Error = Error;

    fn try_from(s: FactorizationSpec) -> Result<Self> {
        let FactorCards { u, v, w, yhat1, yhat2 } = s.cards;
        let aux = JointPmf::new(&[vars::U, vars::V, vars::W, vars::X], &[u, v, w, s.x_card], s.aux)?;
        let q1 = Conditional::new(&[u, w, s.y1_card], yhat1, s.q1.into_iter().flatten().collect())?;
        let q2_given: Vec<usize> = if s.q2_given_w { vec![w, s.y2_card] } else { vec![s.y2_card] };
        let q2 = Conditional::new(&q2_given, yhat2, s.q2.into_iter().flatten().collect())?;
        Self::new(aux, q1, q2)
    }
}

/// Shorthand for building a rate row.
pub(crate) fn row(coeffs: [u32; 3], rhs: f64, label: &str) -> crate::regions::LinearConstraint {
    crate::regions::LinearConstraint::new(coeffs.to_vec(), rhs, label)
}

pub(crate) fn row2(coeffs: [u32; 2], rhs: f64, label: &str) -> crate::regions::LinearConstraint {
    crate::regions::LinearConstraint::new(coeffs.to_vec(), rhs, label)
}

pub(crate) fn polytope3(rows: Vec<crate::regions::LinearConstraint>) -> Result<ConstraintPolytope> {
    ConstraintPolytope::rates3(rows)
}
