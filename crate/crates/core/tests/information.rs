use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use confbc::channels::DmBroadcastChannel;
use confbc::dm_bounds::{AuxFactorization, FactorCards};
use confbc::info::vars::*;
use confbc::info::{entropy_bits, Conditional, JointPmf, Pmf};

/// Positive weights normalized to a distribution.
fn simplex(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_map(|w| {
        // Keep a few exact zeros to exercise the 0·log 0 convention.
        let w: Vec<f64> = w.iter().map(|x| if *x < 0.1 { 0.0 } else { *x }).collect();
        let total: f64 = w.iter().sum();
        if total == 0.0 {
            let mut u = vec![0.0; w.len()];
            u[0] = 1.0;
            u
        } else {
            w.iter().map(|x| x / total).collect()
        }
    })
}

fn joint_abc(cards: [usize; 3]) -> impl Strategy<Value = JointPmf> {
    simplex(cards.iter().product()).prop_map(move |p| JointPmf::new(&["A", "B", "C"], &cards, p).unwrap())
}

fn cards3() -> impl Strategy<Value = [usize; 3]> {
    (1usize..4, 1usize..4, 1usize..4).prop_map(|(a, b, c)| [a, b, c])
}

/// Rows of a random conditional, each a distribution over `out` symbols.
fn conditional(rows: usize, out: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(simplex(out), rows).prop_map(|r| r.concat())
}

/// `H(A|B)` from the definition: the entropy of each conditional row,
/// weighted by `P(b)`.
fn conditional_entropy_by_rows(j: &JointPmf) -> f64 {
    let (ca, cb) = (j.cards()[0], j.cards()[1]);
    let p = j.probs();
    (0..cb)
        .map(|b| {
            let col: Vec<f64> = (0..ca).map(|a| p[a * cb + b]).collect();
            let pb: f64 = col.iter().sum();
            if pb == 0.0 {
                0.0
            } else {
                pb * entropy_bits(&col.iter().map(|x| x / pb).collect::<Vec<_>>())
            }
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn mutual_information_chain_rule(j in cards3().prop_flat_map(joint_abc)) {
        let whole = j.mutual_information(&["A"], &["B", "C"], &[]).unwrap();
        let first = j.mutual_information(&["A"], &["B"], &[]).unwrap();
        let rest = j.mutual_information(&["A"], &["C"], &["B"]).unwrap();
        prop_assert!((whole - first - rest).abs() <= 1e-10);
    }

    #[test]
    fn conditional_entropy_matches_row_average(p in (1usize..5, 1usize..5).prop_flat_map(|(a, b)| {
        simplex(a * b).prop_map(move |p| JointPmf::new(&["A", "B"], &[a, b], p).unwrap())
    })) {
        let by_rows = conditional_entropy_by_rows(&p);
        let by_difference = p.entropy(&["A", "B"]).unwrap() - p.entropy(&["B"]).unwrap();
        prop_assert!((by_rows - by_difference).abs() <= 1e-10);
    }

    #[test]
    fn information_is_nonnegative(j in cards3().prop_flat_map(joint_abc)) {
        for (a, b, c) in [
            (&["A"][..], &["B"][..], &[][..]),
            (&["A"], &["C"], &["B"]),
            (&["A", "B"], &["C"], &[]),
            (&["B"], &["A", "C"], &[]),
            (&["C"], &["A"], &["B"]),
        ] {
            prop_assert!(j.mutual_information(a, b, c).unwrap() >= -1e-10);
        }
        prop_assert!(j.entropy(&["A", "B", "C"]).unwrap() >= -1e-10);
    }

    #[test]
    fn symmetric_and_bounded_by_entropy(j in cards3().prop_flat_map(joint_abc)) {
        let ab = j.mutual_information(&["A"], &["B"], &[]).unwrap();
        let ba = j.mutual_information(&["B"], &["A"], &[]).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12);
        prop_assert!(ab <= j.entropy(&["A"]).unwrap().min(j.entropy(&["B"]).unwrap()) + 1e-10);
    }

    #[test]
    fn data_processing_on_a_markov_chain(
        (pa, ab, bc) in (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(a, b, c)| {
            (simplex(a), conditional(a, b).prop_map(move |p| (a, b, p)), conditional(b, c).prop_map(move |p| (b, c, p)))
        })
    ) {
        let (na, nb, pab) = ab;
        let (_, nc, pbc) = bc;
        prop_assume!(pa.len() == na);
        let j = JointPmf::from_pmf("A", &Pmf::new(pa).unwrap())
            .extend(&["A"], &Conditional::new(&[na], nb, pab).unwrap(), &[("B", nb)])
            .unwrap()
            .extend(&["B"], &Conditional::new(&[nb], nc, pbc).unwrap(), &[("C", nc)])
            .unwrap();
        let ac = j.mutual_information(&["A"], &["C"], &[]).unwrap();
        let ab = j.mutual_information(&["A"], &["B"], &[]).unwrap();
        prop_assert!(ac <= ab + 1e-10);
        // A and C are independent given B.
        prop_assert!(j.mutual_information(&["A"], &["C"], &["B"]).unwrap().abs() <= 1e-10);
    }

    #[test]
    fn composed_joint_keeps_the_auxiliary_marginal(seed in any::<u64>(), t in conditional(2, 4), q2_uses_w in any::<bool>()) {
        let ch = DmBroadcastChannel::new(2, 2, 2, t, 0.0, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cards = FactorCards { u: 2, v: 2, w: 2, yhat1: 2, yhat2: 3 };
        let f = AuxFactorization::random(&mut rng, &ch, cards, q2_uses_w).unwrap();
        let joint = f.joint(&ch).unwrap();
        let back = joint.marginal(&[U, V, W, X]).unwrap();
        for (x, y) in back.probs().iter().zip(f.aux.probs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        let total: f64 = joint.probs().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn binary_symmetric_channel_capacity() {
    let eps: f64 = 0.11;
    let j = JointPmf::from_pmf("X", &Pmf::uniform(2))
        .extend(&["X"], &Conditional::new(&[2], 2, vec![1.0 - eps, eps, eps, 1.0 - eps]).unwrap(), &[("Y", 2)])
        .unwrap();
    let h = -(eps * eps.log2() + (1.0 - eps) * (1.0 - eps).log2());
    assert_abs_diff_eq!(j.mutual_information(&["X"], &["Y"], &[]).unwrap(), 1.0 - h, epsilon = 1e-12);
}
