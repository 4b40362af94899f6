use crate::channels::DmBroadcastChannel;
use crate::error::{Error, Result};
use crate::info::{extend_with_channel, vars::*};
use crate::regions::{ConstraintPolytope, DirectionSet, EnvelopeAccumulator, RegionEnvelope};
use crate::simplex::SimplexGrid;

use super::{polytope3, row, OuterAux};

/// The eleven-row outer bound at one `P(u, v, x)`.
pub fn outer_polytope(ch: &DmBroadcastChannel, aux: &OuterAux) -> Result<ConstraintPolytope> {
    let cards = aux.joint().cards();
    if cards[2] != ch.x_card() {
        return Err(Error::ShapeMismatch(format!(
            "auxiliary input alphabet {} differs from |X| = {}",
            cards[2],
            ch.x_card()
        )));
    }
    let cap = ch.x_card() + 2;
    if cards[0] > cap || cards[1] > cap {
        return Err(Error::InvalidParameter(format!("|U| and |V| are limited to |X|+2 = {cap}")));
    }
    let j = extend_with_channel(aux.joint(), ch)?;
    let i = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
    let (c12, c21) = (ch.c12, ch.c21);
    let x_y1 = i(&[X], &[Y1], &[])?;
    let x_y2 = i(&[X], &[Y2], &[])?;
    let u_y1 = i(&[U], &[Y1], &[])?;
    let v_y2 = i(&[V], &[Y2], &[])?;
    let x_y1_y2v = i(&[X], &[Y1], &[Y2, V])?;
    let x_y2_y1v = i(&[X], &[Y2], &[Y1, V])?;
    let x_y2_y1u = i(&[X], &[Y2], &[Y1, U])?;
    let x_y1_y2u = i(&[X], &[Y1], &[Y2, U])?;
    let x_y1_v = i(&[X], &[Y1], &[V])?;
    let x_y2_u = i(&[X], &[Y2], &[U])?;
    let x_y1y2 = i(&[X], &[Y1, Y2], &[])?;
    polytope3(vec![
        row([1, 1, 0], u_y1 + c21, "I(U;Y1)+C21"),
        row([0, 1, 0], x_y1_y2v + x_y2, "I(X;Y1|Y2,V)+I(X;Y2)"),
        row([0, 1, 0], x_y2_y1v + x_y1, "I(X;Y2|Y1,V)+I(X;Y1)"),
        row([1, 0, 1], v_y2 + c12, "I(V;Y2)+C12"),
        row([0, 0, 1], x_y2_y1u + x_y1, "I(X;Y2|Y1,U)+I(X;Y1)"),
        row([0, 0, 1], x_y1_y2u + x_y2, "I(X;Y1|Y2,U)+I(X;Y2)"),
        row([1, 1, 1], x_y1_v + v_y2 + c12 + c21, "I(X;Y1|V)+I(V;Y2)+C12+C21"),
        row([1, 1, 1], x_y2_u + u_y1 + c12 + c21, "I(X;Y2|U)+I(U;Y1)+C12+C21"),
        row([1, 1, 1], x_y1_y2v + x_y2 + c12, "I(X;Y1|Y2,V)+I(X;Y2)+C12"),
        row([1, 1, 1], x_y2_y1u + x_y1 + c21, "I(X;Y2|Y1,U)+I(X;Y1)+C21"),
        row([1, 1, 1], x_y1y2, "I(X;Y1,Y2)"),
    ])
}

/// Auxiliary alphabet sizes for the outer-bound grid. `None` means `|X|+2`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OuterGrid {
    pub u_card: Option<usize>,
    pub v_card: Option<usize>,
}

/// Envelope of the outer bound over a simplex grid on `P(u, v, x)`.
///
/// With a 2-D direction set the polytopes are first restricted to `R2 = 0`.
pub fn outer_envelope(
    ch: &DmBroadcastChannel,
    grid_step: f64,
    directions: &DirectionSet,
    cards: OuterGrid,
) -> Result<RegionEnvelope> {
    if !(grid_step > 0.0 && grid_step <= 0.5) {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} outside (0, 0.5]")));
    }
    let x = ch.x_card();
    let u = cards.u_card.unwrap_or(x + 2);
    let v = cards.v_card.unwrap_or(x + 2);
    let grid = SimplexGrid::new(u * v * x, grid_step)?;
    let project = directions.dim() == 2;
    grid.par_fold(
        || Ok(EnvelopeAccumulator::new(directions)),
        |acc: &mut Result<EnvelopeAccumulator>, p| {
            let Ok(a) = acc else { return };
            let step = OuterAux::new(u, v, x, p.to_vec())
                .and_then(|aux| outer_polytope(ch, &aux))
                .and_then(|poly| if project { poly.project_r2_zero() } else { Ok(poly) })
                .and_then(|poly| a.add(&poly));
            if let Err(e) = step {
                *acc = Err(e);
            }
        },
        |a, b| Ok(a?.merge(b?)),
    )?
    .finish()
}
