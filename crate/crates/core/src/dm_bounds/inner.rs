use serde::Serialize;

use crate::channels::DmBroadcastChannel;
use crate::error::{Error, Result};
use crate::info::vars::*;
use crate::regions::ConstraintPolytope;

use super::{polytope3, row, AuxFactorization};

/// How the quantization credit `αC − I(...)` enters the inner bounds:
/// clipped at zero, or used as is. Both give the same union over
/// distributions but differ at a single distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ZetaForm {
    Clipped,
    Unclipped,
}

impl ZetaForm {
    fn apply(self, x: f64) -> f64 {
        match self {
            ZetaForm::Clipped => x.max(0.0),
            ZetaForm::Unclipped => x,
        }
    }
}

/// Every information quantity the inner bounds use, evaluated once per
/// factorization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerTerms {
    /// `I(U,W;Y1)`
    pub uw_y1: f64,
    /// `I(U,W;Y1,Ŷ2)`
    pub uw_y1yh2: f64,
    /// `I(U;Y1|W)`
    pub u_y1_w: f64,
    /// `I(U;Y1,Ŷ2|W)`
    pub u_y1yh2_w: f64,
    /// `I(V,W;Y2)`
    pub vw_y2: f64,
    /// `I(V,W;Ŷ1,Y2)`
    pub vw_yh1y2: f64,
    /// `I(V;Y2|W)`
    pub v_y2_w: f64,
    /// `I(V;Ŷ1,Y2|W)`
    pub v_yh1y2_w: f64,
    /// `I(U;V|W)`, the binning cost.
    pub u_v_w: f64,
    /// `I(Ŷ1;U,Y1|V,W,Y2)`, the first quantizer's cost at receiver 2.
    pub q1_cost: f64,
    /// `I(Ŷ2;Y2|U,W,Y1)`, the second quantizer's cost at receiver 1.
    pub q2_cost: f64,
    /// `I(Ŷ1;U,Y1|W,Y2)`
    pub q1_rate: f64,
    /// `I(Ŷ2;Y2|W,Y1)`
    pub q2_rate: f64,
    pub c12: f64,
    pub c21: f64,
    pub q2_uses_w: bool,
}

fn min(a: f64, b: f64) -> f64 {
    a.min(b)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!("split {alpha} outside [0, 1]")));
    }
    Ok(())
}

impl InnerTerms {
    pub fn evaluate(ch: &DmBroadcastChannel, f: &AuxFactorization) -> Result<Self> {
        let j = f.joint(ch)?;
        let i = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
        Ok(Self {
            uw_y1: i(&[U, W], &[Y1], &[])?,
            uw_y1yh2: i(&[U, W], &[Y1, YHAT2], &[])?,
            u_y1_w: i(&[U], &[Y1], &[W])?,
            u_y1yh2_w: i(&[U], &[Y1, YHAT2], &[W])?,
            vw_y2: i(&[V, W], &[Y2], &[])?,
            vw_yh1y2: i(&[V, W], &[YHAT1, Y2], &[])?,
            v_y2_w: i(&[V], &[Y2], &[W])?,
            v_yh1y2_w: i(&[V], &[YHAT1, Y2], &[W])?,
            u_v_w: i(&[U], &[V], &[W])?,
            q1_cost: i(&[YHAT1], &[U, Y1], &[V, W, Y2])?,
            q2_cost: i(&[YHAT2], &[Y2], &[U, W, Y1])?,
            q1_rate: i(&[YHAT1], &[U, Y1], &[W, Y2])?,
            q2_rate: i(&[YHAT2], &[Y2], &[W, Y1])?,
            c12: ch.c12,
            c21: ch.c21,
            q2_uses_w: f.q2_uses_w(),
        })
    }

    fn require_q2_without_w(&self) -> Result<()> {
        if self.q2_uses_w {
            return Err(Error::NotApplicable(
                "this region needs the second quantizer to ignore W".into(),
            ));
        }
        Ok(())
    }

    /// The five right-hand sides `[R0+R1, R0+R2, sum, sum, 2R0+R1+R2]` of
    /// the region where receiver 2 quantizes first and receiver 1 splits its
    /// link, a fraction `alpha` to quantization.
    pub fn inner1_alpha_rhs(&self, alpha: f64, form: ZetaForm) -> Result<[f64; 5]> {
        check_alpha(alpha)?;
        let z1 = form.apply(alpha * self.c12 - self.q1_cost);
        let z2 = form.apply(self.c21 - self.q2_cost);
        let df = (1.0 - alpha) * self.c12;
        let a2 = min(self.uw_y1 + z2, self.uw_y1yh2);
        let d2 = min(self.vw_y2 + z1 + df, self.vw_yh1y2 + df);
        let a1 = min(self.u_y1_w + z2, self.u_y1yh2_w);
        let d1 = min(self.v_y2_w + z1, self.v_yh1y2_w);
        let i = self.u_v_w;
        Ok([a2, d2, a1 + d2 - i, a2 + d1 - i, a2 + d2 - i])
    }

    pub fn inner1_alpha(&self, alpha: f64, form: ZetaForm) -> Result<ConstraintPolytope> {
        self.require_q2_without_w()?;
        five_rows(self.inner1_alpha_rhs(alpha, form)?)
    }

    /// The same region with the split chosen optimally, in closed form.
    pub fn inner1(&self) -> Result<ConstraintPolytope> {
        self.require_q2_without_w()?;
        let k = self.c21 - self.q2_cost;
        let j = self.c12 - self.q1_cost;
        let a2 = min(self.uw_y1 + k, self.uw_y1yh2);
        let a1 = min(self.u_y1_w + k, self.u_y1yh2_w);
        let d2 = self.vw_y2 + j;
        let d1 = min(self.v_y2_w + j, self.v_yh1y2_w);
        let i = self.u_v_w;
        five_rows([a2, d2, a1 + d2 - i, a2 + d1 - i, a2 + d2 - i])
    }

    /// Right-hand sides of the region where receiver 1 quantizes first and
    /// receiver 2 splits its link, a fraction `alpha` to quantization.
    pub fn inner2_alpha_rhs(&self, alpha: f64, form: ZetaForm) -> Result<[f64; 5]> {
        check_alpha(alpha)?;
        let e1 = form.apply(self.c12 - self.q1_cost);
        let e2 = form.apply(alpha * self.c21 - self.q2_cost);
        let df = (1.0 - alpha) * self.c21;
        let a2 = min(self.uw_y1 + e2 + df, self.uw_y1yh2 + df);
        let a1 = min(self.u_y1_w + e2, self.u_y1yh2_w);
        let d1 = min(self.v_y2_w + e1, self.v_yh1y2_w);
        let i = self.u_v_w;
        Ok([a2, self.vw_y2, a1 + self.vw_y2 - i, a2 + d1 - i, a2 + self.vw_y2 - i])
    }

    pub fn inner2_alpha(&self, alpha: f64, form: ZetaForm) -> Result<ConstraintPolytope> {
        five_rows(self.inner2_alpha_rhs(alpha, form)?)
    }

    pub fn inner2(&self) -> Result<ConstraintPolytope> {
        let k = self.c21 - self.q2_cost;
        let j = self.c12 - self.q1_cost;
        let a2 = self.uw_y1 + k;
        let a1 = min(self.u_y1_w + k, self.u_y1yh2_w);
        let d1 = min(self.v_y2_w + j, self.v_yh1y2_w);
        let i = self.u_v_w;
        five_rows([a2, self.vw_y2, a1 + self.vw_y2 - i, a2 + d1 - i, a2 + self.vw_y2 - i])
    }

    /// Per-receiver caps `[A1, A2, D1, D2]` used by the partial-rate system
    /// (clipped credits).
    pub(crate) fn partial_caps(&self, alpha: f64) -> Result<[f64; 4]> {
        check_alpha(alpha)?;
        let z1 = (alpha * self.c12 - self.q1_cost).max(0.0);
        let z2 = (self.c21 - self.q2_cost).max(0.0);
        let df = (1.0 - alpha) * self.c12;
        Ok([
            min(self.u_y1_w + z2, self.u_y1yh2_w),
            min(self.uw_y1 + z2, self.uw_y1yh2),
            min(self.v_y2_w + z1, self.v_yh1y2_w),
            min(self.vw_y2 + z1 + df, self.vw_yh1y2 + df),
        ])
    }
}

fn five_rows(rhs: [f64; 5]) -> Result<ConstraintPolytope> {
    polytope3(vec![
        row([1, 1, 0], rhs[0], "receiver 1 total"),
        row([1, 0, 1], rhs[1], "receiver 2 total"),
        row([1, 1, 1], rhs[2], "sum, receiver 1 private"),
        row([1, 1, 1], rhs[3], "sum, receiver 2 private"),
        row([2, 1, 1], rhs[4], "common counted twice"),
    ])
}

/// Optimal quantization share of the `1 → 2` link: `min(I(Ŷ1;U,Y1|W,Y2)/C12, 1)`,
/// zero without a link.
pub fn alpha1_star(terms: &InnerTerms) -> f64 {
    if terms.c12 <= 0.0 {
        0.0
    } else {
        (terms.q1_rate / terms.c12).min(1.0)
    }
}

/// Optimal quantization share of the `2 → 1` link: `min(I(Ŷ2;Y2|W,Y1)/C21, 1)`.
pub fn alpha2_star(terms: &InnerTerms) -> f64 {
    if terms.c21 <= 0.0 {
        0.0
    } else {
        (terms.q2_rate / terms.c21).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{example_channel, Channel, ExampleParams};
    use crate::dm_bounds::{FactorCards, AuxFactorization};
    use crate::info::{Conditional, JointPmf};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bsc_pair(e1: f64, e2: f64, c12: f64, c21: f64) -> DmBroadcastChannel {
        let mut t = Vec::new();
        for x in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    let p1 = if x == y1 { 1.0 - e1 } else { e1 };
                    let p2 = if x == y2 { 1.0 - e2 } else { e2 };
                    t.push(p1 * p2);
                }
            }
        }
        DmBroadcastChannel::new(2, 2, 2, t, c12, c21).unwrap()
    }

    /// U = X uniform, V = W = constant, both quantizers trivial.
    fn point_to_point(ch: &DmBroadcastChannel) -> AuxFactorization {
        let aux = JointPmf::new(&["U", "V", "W", "X"], &[2, 1, 1, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        AuxFactorization::new(aux, Conditional::trivial(&[2, 1, ch.y1_card()]), Conditional::trivial(&[ch.y2_card()]))
            .unwrap()
    }

    #[test]
    fn degenerate_auxiliaries_give_point_to_point_rows() {
        let ch = bsc_pair(0.1, 0.3, 0.2, 0.4);
        let t = InnerTerms::evaluate(&ch, &point_to_point(&ch)).unwrap();
        let p = t.inner1().unwrap();
        let cap = 1.0 - crate::info::binary_entropy(0.1);
        assert!((p.constraints()[0].rhs - cap).abs() < 1e-12);
        assert_eq!(t.q1_cost, 0.0);
        assert_eq!(t.q2_cost, 0.0);
    }

    #[test]
    fn zero_split_clips_to_zero() {
        let ch = bsc_pair(0.1, 0.3, 0.5, 0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cards = FactorCards { u: 2, v: 2, w: 2, yhat1: 2, yhat2: 2 };
        let f = AuxFactorization::random(&mut rng, &ch, cards, false).unwrap();
        let t = InnerTerms::evaluate(&ch, &f).unwrap();
        let clipped = t.inner1_alpha_rhs(0.0, ZetaForm::Clipped).unwrap();
        let by_hand = (t.vw_y2 + 0.5).min(t.vw_yh1y2 + 0.5);
        assert!((clipped[1] - by_hand).abs() < 1e-12);
    }

    #[test]
    fn optimal_split_matches_closed_form() {
        let ch = bsc_pair(0.1, 0.3, 0.5, 0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cards = FactorCards { u: 2, v: 2, w: 2, yhat1: 2, yhat2: 2 };
        for _ in 0..50 {
            let f = AuxFactorization::random(&mut rng, &ch, cards, false).unwrap();
            let t = InnerTerms::evaluate(&ch, &f).unwrap();
            let at_star = t.inner1_alpha_rhs(alpha1_star(&t), ZetaForm::Unclipped).unwrap();
            let closed: Vec<f64> = t.inner1().unwrap().constraints().iter().map(|c| c.rhs).collect();
            for (a, b) in at_star.iter().zip(&closed) {
                assert!((a - b).abs() < 1e-12, "{at_star:?} vs {closed:?}");
            }
            let f2 = AuxFactorization::random(&mut rng, &ch, cards, true).unwrap();
            let t2 = InnerTerms::evaluate(&ch, &f2).unwrap();
            let at_star = t2.inner2_alpha_rhs(alpha2_star(&t2), ZetaForm::Unclipped).unwrap();
            let closed: Vec<f64> = t2.inner2().unwrap().constraints().iter().map(|c| c.rhs).collect();
            for (a, b) in at_star.iter().zip(&closed) {
                assert!((a - b).abs() < 1e-12, "{at_star:?} vs {closed:?}");
            }
        }
    }

    #[test]
    fn alpha_star_examples() {
        let ch = match example_channel("dm-ex1", ExampleParams { c12: 0.6, ..Default::default() }).unwrap() {
            Channel::Dm(d) => d,
            _ => unreachable!(),
        };
        let mut t = InnerTerms::evaluate(&ch, &point_to_point(&ch)).unwrap();
        assert_eq!(alpha1_star(&t), 0.0);
        t.q1_rate = 0.3;
        assert!((alpha1_star(&t) - 0.5).abs() < 1e-15);
        t.q1_rate = 0.9;
        assert_eq!(alpha1_star(&t), 1.0);
        t.c12 = 0.0;
        assert_eq!(alpha1_star(&t), 0.0);
    }

    #[test]
    fn inner1_rejects_w_dependent_second_quantizer() {
        let ch = bsc_pair(0.1, 0.3, 0.5, 0.4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cards = FactorCards { u: 2, v: 2, w: 2, yhat1: 2, yhat2: 2 };
        let f = AuxFactorization::random(&mut rng, &ch, cards, true).unwrap();
        let t = InnerTerms::evaluate(&ch, &f).unwrap();
        assert!(matches!(t.inner1(), Err(Error::NotApplicable(_))));
        assert!(t.inner2().is_ok());
    }

    #[test]
    fn inner2_common_row_without_w_or_quantizer() {
        let ch = bsc_pair(0.1, 0.3, 0.5, 0.4);
        // V = X, U = W = constant, Ŷ2 trivial.
        let aux = JointPmf::new(&["U", "V", "W", "X"], &[1, 2, 1, 2], vec![0.4, 0.0, 0.0, 0.6]).unwrap();
        let f = AuxFactorization::new(aux, Conditional::trivial(&[1, 1, 2]), Conditional::trivial(&[2])).unwrap();
        let t = InnerTerms::evaluate(&ch, &f).unwrap();
        let rhs = t.inner2_alpha_rhs(0.0, ZetaForm::Clipped).unwrap();
        let (_, i2) = ch.marginal_informations(&[0.4, 0.6]);
        assert!((rhs[1] - i2).abs() < 1e-12);
    }
}
