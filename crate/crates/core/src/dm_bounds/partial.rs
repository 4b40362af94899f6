use crate::channels::DmBroadcastChannel;
use crate::error::Result;
use crate::regions::{Inequality, LinearSystem};

use super::{AuxFactorization, InnerTerms};

/// Unknowns of the partial-rate system: the three message rates, the split
/// of each private rate into a part carried by the common cloud (`R10`,
/// `R20`) and a part carried by the receiver's own codebook (`R11`, `R22`),
/// and the two binning rates.
pub const PARTIAL_RATES: [&str; 9] = ["R0", "R1", "R2", "R10", "R11", "R20", "R22", "B1", "B2"];

/// The decoding and binning constraints over partial rates before they are
/// eliminated, for the region where receiver 2 quantizes first and receiver
/// 1 gives a fraction `alpha` of its link to quantization.
///
/// The common cloud carries `R0 + R10 + R20`. Projecting onto `(R0,R1,R2)`
/// recovers the five-row region up to the extra feasibility condition that
/// the binning cost fits within the two private decoding budgets.
pub fn partial_rate_system(ch: &DmBroadcastChannel, f: &AuxFactorization, alpha: f64) -> Result<LinearSystem> {
    let t = InnerTerms::evaluate(ch, f)?;
    partial_rate_system_from_terms(&t, alpha)
}

pub(crate) fn partial_rate_system_from_terms(t: &InnerTerms, alpha: f64) -> Result<LinearSystem> {
    let [a1, a2, d1, d2] = t.partial_caps(alpha)?;
    //              R0   R1   R2   R10  R11  R20  R22  B1   B2
    let mut rows = vec![
        ([0., 0., 0., 0., 0., 0., 0., -1., -1.], -t.u_v_w),
        ([0., 0., 0., 0., 1., 0., 0., 1., 0.], a1),
        ([1., 0., 0., 1., 1., 1., 0., 1., 0.], a2),
        ([0., 0., 0., 0., 0., 0., 1., 0., 1.], d1),
        ([1., 0., 0., 1., 0., 1., 1., 0., 1.], d2),
        ([0., -1., 0., 1., 1., 0., 0., 0., 0.], 0.0),
        ([0., 1., 0., -1., -1., 0., 0., 0., 0.], 0.0),
        ([0., 0., -1., 0., 0., 1., 1., 0., 0.], 0.0),
        ([0., 0., 1., 0., 0., -1., -1., 0., 0.], 0.0),
    ];
    for i in 0..9 {
        let mut a = [0.0; 9];
        a[i] = -1.0;
        rows.push((a, 0.0));
    }
    LinearSystem::new(
        &PARTIAL_RATES,
        rows.into_iter().map(|(a, b)| Inequality::new(a.to_vec(), b)).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::fm_eliminate_all;

    fn zero_terms() -> InnerTerms {
        InnerTerms {
            uw_y1: 0.0,
            uw_y1yh2: 0.0,
            u_y1_w: 0.0,
            u_y1yh2_w: 0.0,
            vw_y2: 0.0,
            vw_yh1y2: 0.0,
            v_y2_w: 0.0,
            v_yh1y2_w: 0.0,
            u_v_w: 0.0,
            q1_cost: 0.0,
            q2_cost: 0.0,
            q1_rate: 0.0,
            q2_rate: 0.0,
            c12: 0.0,
            c21: 0.0,
            q2_uses_w: false,
        }
    }

    #[test]
    fn all_zero_terms_pin_every_rate() {
        let sys = partial_rate_system_from_terms(&zero_terms(), 0.5).unwrap();
        let out = fm_eliminate_all(&sys, &PARTIAL_RATES[3..]).unwrap();
        for d in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            assert!(out.support(&d).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn independent_codebooks_need_no_binning() {
        let mut t = zero_terms();
        t.uw_y1 = 0.6;
        t.uw_y1yh2 = 0.7;
        t.u_y1_w = 0.3;
        t.u_y1yh2_w = 0.4;
        t.vw_y2 = 0.5;
        t.vw_yh1y2 = 0.5;
        t.v_y2_w = 0.2;
        t.v_yh1y2_w = 0.25;
        let sys = partial_rate_system_from_terms(&t, 0.0).unwrap();
        // B1 = B2 = 0 and all of R1 in R11 is feasible.
        let x = [0.1, 0.3, 0.2, 0.0, 0.3, 0.0, 0.2, 0.0, 0.0];
        assert!(sys.is_feasible_point(&x, 1e-12));
    }
}
