use crate::channels::{DmBroadcastChannel, MoreCapableReport};
use crate::error::{Error, Result};
use crate::info::{extend_with_channel, vars::*, Conditional, JointPmf};
use crate::regions::{ConstraintPolytope, DirectionSet, EnvelopeAccumulator, RegionEnvelope};
use crate::simplex::SimplexGrid;

use super::{polytope3, row, row2, AuxFactorization, InnerTerms};

fn require_semi_deterministic(ch: &DmBroadcastChannel) -> Result<()> {
    if ch.is_semi_deterministic().is_none() {
        return Err(Error::NotApplicable("channel is not semi-deterministic (Y2 is not a function of X and Y1)".into()));
    }
    Ok(())
}

fn vx_joint(ch: &DmBroadcastChannel, pvx: &JointPmf) -> Result<JointPmf> {
    if pvx.cards().len() != 2 || pvx.cards()[1] != ch.x_card() {
        return Err(Error::ShapeMismatch(format!("expected a joint over (V, X) with |X| = {}", ch.x_card())));
    }
    let vx = pvx.clone().with_names(&[V, X])?;
    extend_with_channel(&vx, ch)
}

struct VxTerms {
    v_y2: f64,
    x_y1: f64,
    x_y1_v: f64,
    x_y1y2_v: f64,
    x_y1y2: f64,
}

impl VxTerms {
    fn evaluate(ch: &DmBroadcastChannel, pvx: &JointPmf) -> Result<Self> {
        let j = vx_joint(ch, pvx)?;
        let i = |a: &[&str], b: &[&str], c: &[&str]| j.mutual_information(a, b, c);
        Ok(Self {
            v_y2: i(&[V], &[Y2], &[])?,
            x_y1: i(&[X], &[Y1], &[])?,
            x_y1_v: i(&[X], &[Y1], &[V])?,
            x_y1y2_v: i(&[X], &[Y1, Y2], &[V])?,
            x_y1y2: i(&[X], &[Y1, Y2], &[])?,
        })
    }

    fn degraded_polytope(&self, c12: f64, c21: f64, include_joint_row: bool) -> Result<ConstraintPolytope> {
        let t = self;
        let mut rows = vec![
            row2([1, 0], t.v_y2 + c12, "I(V;Y2)+C12"),
            row2([1, 1], t.x_y1 + c21, "I(X;Y1)+C21"),
            row2([1, 1], t.x_y1_v + t.v_y2 + c12 + c21, "I(X;Y1|V)+I(V;Y2)+C12+C21"),
        ];
        if include_joint_row {
            rows.push(row2([1, 1], t.x_y1y2_v + t.v_y2 + c12, "I(X;Y1,Y2|V)+I(V;Y2)+C12"));
        }
        rows.push(row2([1, 1], t.x_y1y2, "I(X;Y1,Y2)"));
        ConstraintPolytope::rates2(rows)
    }
}

/// The `(R0, R1)` capacity region with degraded message sets at one
/// `P(v, x)`, given as a joint over `(V, X)` read positionally.
///
/// Without the row that sees `(Y1, Y2)` jointly, the rows are those of the
/// cut-set bound.
pub fn degraded_message_capacity(
    ch: &DmBroadcastChannel,
    pvx: &JointPmf,
    include_joint_row: bool,
) -> Result<ConstraintPolytope> {
    require_semi_deterministic(ch)?;
    VxTerms::evaluate(ch, pvx)?.degraded_polytope(ch.c12, ch.c21, include_joint_row)
}

/// The `(R0, R1, R2)` capacity region at one `P(v, x)` when only receiver 2
/// can talk to receiver 1; `c12` is ignored.
///
/// The region is the capacity only for more-capable channels; callers should
/// check [`DmBroadcastChannel::more_capable_evidence`].
pub fn more_capable_capacity(ch: &DmBroadcastChannel, pvx: &JointPmf) -> Result<ConstraintPolytope> {
    require_semi_deterministic(ch)?;
    let t = VxTerms::evaluate(ch, pvx)?;
    let c21 = ch.c21;
    polytope3(vec![
        row([1, 0, 1], t.v_y2, "I(V;Y2)"),
        row([1, 1, 1], t.x_y1 + c21, "I(X;Y1)+C21"),
        row([1, 1, 1], t.x_y1_v + t.v_y2 + c21, "I(X;Y1|V)+I(V;Y2)+C21"),
        row([1, 1, 1], t.x_y1y2_v + t.v_y2, "I(X;Y1,Y2|V)+I(V;Y2)"),
        row([1, 1, 1], t.x_y1y2, "I(X;Y1,Y2)"),
    ])
}

/// The inner-bound factorization that achieves both capacity regions:
/// `U = X`, `V = W` carry the common cloud, the first quantizer is
/// constant and the second is the identity on `Y2`.
pub fn capacity_substitution(ch: &DmBroadcastChannel, pvx: &JointPmf) -> Result<AuxFactorization> {
    if pvx.cards().len() != 2 || pvx.cards()[1] != ch.x_card() {
        return Err(Error::ShapeMismatch(format!("expected a joint over (V, X) with |X| = {}", ch.x_card())));
    }
    let (v, x) = (pvx.cards()[0], pvx.cards()[1]);
    let mut probs = vec![0.0; x * v * v * x];
    for vi in 0..v {
        for xi in 0..x {
            // (u, v, w, x) = (x, v, v, x)
            probs[((xi * v + vi) * v + vi) * x + xi] = pvx.probs()[vi * x + xi];
        }
    }
    let aux = JointPmf::new(&[U, V, W, X], &[x, v, v, x], probs)?;
    AuxFactorization::new(
        aux,
        Conditional::trivial(&[x, v, ch.y1_card()]),
        Conditional::identity(ch.y2_card()),
    )
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= 0.5) {
        return Err(Error::InvalidParameter(format!("grid step {step} outside (0, 0.5]")));
    }
    Ok(())
}

/// Folds `make` over a simplex grid on `P(v, x)`.
fn vx_envelope(
    ch: &DmBroadcastChannel,
    step: f64,
    v_card: usize,
    directions: &DirectionSet,
    make: impl Fn(&JointPmf) -> Result<ConstraintPolytope> + Sync + Send,
) -> Result<RegionEnvelope> {
    check_step(step)?;
    if v_card == 0 {
        return Err(Error::InvalidParameter("|V| must be positive".into()));
    }
    let x = ch.x_card();
    let grid = SimplexGrid::new(v_card * x, step)?;
    grid.par_fold(
        || Ok(EnvelopeAccumulator::new(directions)),
        |acc: &mut Result<EnvelopeAccumulator>, p| {
            let Ok(a) = acc else { return };
            let step = JointPmf::new(&[V, X], &[v_card, x], p.to_vec())
                .and_then(|pvx| make(&pvx))
                .and_then(|poly| a.add(&poly));
            if let Err(e) = step {
                *acc = Err(e);
            }
        },
        |a, b| Ok(a?.merge(b?)),
    )?
    .finish()
}

/// Link capacities and row choice for one evaluation of the
/// degraded-message region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegradedVariant {
    pub c12: f64,
    pub c21: f64,
    pub include_joint_row: bool,
}

/// Envelopes of several [`DegradedVariant`]s of one channel in a single pass
/// over the `P(v, x)` grid; the information terms are shared.
pub fn degraded_message_envelopes(
    ch: &DmBroadcastChannel,
    step: f64,
    v_card: usize,
    directions: &DirectionSet,
    variants: &[DegradedVariant],
) -> Result<Vec<RegionEnvelope>> {
    require_semi_deterministic(ch)?;
    check_step(step)?;
    if directions.dim() != 2 {
        return Err(Error::InvalidDirection("degraded-message region is over (R0, R1)".into()));
    }
    if v_card == 0 {
        return Err(Error::InvalidParameter("|V| must be positive".into()));
    }
    let x = ch.x_card();
    let grid = SimplexGrid::new(v_card * x, step)?;
    let fresh = || Ok(variants.iter().map(|_| EnvelopeAccumulator::new(directions)).collect::<Vec<_>>());
    let accs = grid.par_fold(
        fresh,
        |acc: &mut Result<Vec<EnvelopeAccumulator>>, p| {
            let Ok(accs) = acc else { return };
            let step = JointPmf::new(&[V, X], &[v_card, x], p.to_vec())
                .and_then(|pvx| VxTerms::evaluate(ch, &pvx))
                .and_then(|t| {
                    for (a, var) in accs.iter_mut().zip(variants) {
                        a.add(&t.degraded_polytope(var.c12, var.c21, var.include_joint_row)?)?;
                    }
                    Ok(())
                });
            if let Err(e) = step {
                *acc = Err(e);
            }
        },
        |a, b| Ok(a?.into_iter().zip(b?).map(|(x, y)| x.merge(y)).collect()),
    )?;
    accs.into_iter().map(EnvelopeAccumulator::finish).collect()
}

/// Envelope of [`degraded_message_capacity`] over a grid on `P(v, x)`.
/// `directions` must be 2-D.
pub fn degraded_message_envelope(
    ch: &DmBroadcastChannel,
    step: f64,
    v_card: usize,
    directions: &DirectionSet,
    include_joint_row: bool,
) -> Result<RegionEnvelope> {
    require_semi_deterministic(ch)?;
    if directions.dim() != 2 {
        return Err(Error::InvalidDirection("degraded-message region is over (R0, R1)".into()));
    }
    vx_envelope(ch, step, v_card, directions, |pvx| degraded_message_capacity(ch, pvx, include_joint_row))
}

/// Envelope of [`more_capable_capacity`], plus the grid evidence for the
/// more-capable hypothesis on the same step.
pub fn more_capable_envelope(
    ch: &DmBroadcastChannel,
    step: f64,
    v_card: usize,
    directions: &DirectionSet,
) -> Result<(RegionEnvelope, MoreCapableReport)> {
    require_semi_deterministic(ch)?;
    if directions.dim() != 3 {
        return Err(Error::InvalidDirection("more-capable region is over (R0, R1, R2)".into()));
    }
    let report = ch.more_capable_evidence(step)?;
    let env = vx_envelope(ch, step, v_card, directions, |pvx| more_capable_capacity(ch, pvx))?;
    Ok((env, report))
}

/// Envelope of the first inner bound restricted to [`capacity_substitution`]
/// over a grid on `P(v, x)`. A 2-D direction set restricts to `R2 = 0`.
pub fn substitution_envelope(
    ch: &DmBroadcastChannel,
    step: f64,
    v_card: usize,
    directions: &DirectionSet,
) -> Result<RegionEnvelope> {
    let project = directions.dim() == 2;
    vx_envelope(ch, step, v_card, directions, |pvx| {
        let f = capacity_substitution(ch, pvx)?;
        let poly = InnerTerms::evaluate(ch, &f)?.inner1()?;
        if project {
            poly.project_r2_zero()
        } else {
            Ok(poly)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{example_channel, Channel, ExampleParams};
    use crate::info::binary_entropy;

    fn dm(name: &str, c12: f64, c21: f64) -> DmBroadcastChannel {
        match example_channel(name, ExampleParams { p: 0.2, c12, c21, ..Default::default() }).unwrap() {
            Channel::Dm(d) => d,
            _ => unreachable!(),
        }
    }

    fn rhs(p: &ConstraintPolytope) -> Vec<f64> {
        p.constraints().iter().map(|c| c.rhs).collect()
    }

    #[test]
    fn constant_v_leaves_the_link() {
        let ch = dm("dm-ex1", 0.3, 0.5);
        let pvx = JointPmf::new(&["V", "X"], &[1, 2], vec![0.5, 0.5]).unwrap();
        let p = degraded_message_capacity(&ch, &pvx, true).unwrap();
        assert!((rhs(&p)[0] - 0.3).abs() < 1e-12);
        let q = more_capable_capacity(&ch, &pvx).unwrap();
        assert!(rhs(&q)[0].abs() < 1e-12);
    }

    #[test]
    fn example_one_collapses_to_three_rows() {
        // Y2 = Z carries nothing about X, so I(V;Y2) = 0 and (Y1, Y2) reveals X.
        let ch = dm("dm-ex1", 0.3, 0.5);
        let pvx = JointPmf::new(&["V", "X"], &[2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let r = rhs(&degraded_message_capacity(&ch, &pvx, true).unwrap());
        let ix_y1 = 1.0 - binary_entropy(0.2);
        assert!((r[0] - 0.3).abs() < 1e-12);
        assert!((r[1] - (ix_y1 + 0.5)).abs() < 1e-12);
        assert!((r[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn example_two_joint_row_is_conditional_entropy() {
        let ch = dm("dm-ex2", 0.0, 0.9);
        // V = X: H(X|V) = 0 and the joint row is I(X;Y2) + C12.
        let pvx = JointPmf::new(&["V", "X"], &[2, 2], vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let r = rhs(&degraded_message_capacity(&ch, &pvx, true).unwrap());
        assert!((r[3] - r[0]).abs() < 1e-12);
        let without = degraded_message_capacity(&ch, &pvx, false).unwrap();
        assert_eq!(without.constraints().len(), 4);
    }

    #[test]
    fn rejects_non_semi_deterministic() {
        let ch = DmBroadcastChannel::new(2, 2, 2, vec![0.25; 8], 0.0, 0.0).unwrap();
        let pvx = JointPmf::new(&["V", "X"], &[1, 2], vec![0.5, 0.5]).unwrap();
        assert!(matches!(degraded_message_capacity(&ch, &pvx, true), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn substitution_reproduces_capacity_rows() {
        for name in ["dm-ex1", "dm-ex2"] {
            let ch = dm(name, 0.3, 0.5);
            let grid = SimplexGrid::new(6, 0.25).unwrap();
            for p in grid.points() {
                let pvx = JointPmf::new(&["V", "X"], &[3, 2], p).unwrap();
                let cap = degraded_message_capacity(&ch, &pvx, true).unwrap();
                let f = capacity_substitution(&ch, &pvx).unwrap();
                let inner = InnerTerms::evaluate(&ch, &f).unwrap().inner1().unwrap().project_r2_zero().unwrap();
                for d in DirectionSet::fan_2d(16).unwrap().iter() {
                    let a = cap.support(&d[..2]).unwrap();
                    let b = inner.support(&d[..2]).unwrap();
                    assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b} along {d:?}");
                }
            }
        }
    }

    #[test]
    fn example_one_envelope() {
        let ch = dm("dm-ex1", 0.1, 0.9);
        let env = degraded_message_envelope(&ch, 0.01, 1, &DirectionSet::canonical_2d(), true).unwrap();
        assert!((env.support_along(&[1.0, 1.0]).unwrap() - 1.0).abs() < 1e-9);
        assert!((env.support_along(&[1.0, 0.0]).unwrap() - 0.1).abs() < 1e-9);
    }
}
