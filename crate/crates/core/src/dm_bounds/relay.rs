use crate::channels::DmBroadcastChannel;
use crate::error::{Error, Result};
use crate::info::{extend_with_channel, vars::*, Conditional, JointPmf};

/// Achievable rate of the primitive relay channel: receiver 1 acts as the
/// relay, sends over the `1 → 2` link, and receiver 2 decodes.
///
/// `pwx` is a joint over `(W, X)` read positionally; `q1` is the relay's
/// quantizer `P(ŷ1 | w, y1)`. `c21` plays no role.
pub fn primitive_relay_rate(ch: &DmBroadcastChannel, pwx: &JointPmf, q1: &Conditional) -> Result<f64> {
    if pwx.cards().len() != 2 || pwx.cards()[1] != ch.x_card() {
        return Err(Error::ShapeMismatch(format!("expected a joint over (W, X) with |X| = {}", ch.x_card())));
    }
    let wx = pwx.clone().with_names(&[W, X])?;
    let j = extend_with_channel(&wx, ch)?.extend(&[W, Y1], q1, &[(YHAT1, q1.out_card())])?;
    let i = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
    let cost = i(&[YHAT1], &[Y1], &[X, W, Y2])?;
    let w_y1 = i(&[W], &[Y1], &[])?;
    let terms = [
        i(&[X], &[Y2], &[])? + ch.c12 - cost,
        w_y1 + i(&[X], &[YHAT1, Y2], &[W])?,
        w_y1 + i(&[X], &[Y2], &[W])? + ch.c12 - cost,
    ];
    Ok(terms.into_iter().fold(f64::INFINITY, f64::min))
}
