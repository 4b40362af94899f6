use proptest::prelude::*;

use confbc::channels::{Channel, DmBroadcastChannel, GaussianBc};
use confbc::export::{
    boundary_2d, boundary_csv, boundary_svg, envelope_csv, format_number, parse_boundary_csv, parse_envelope_csv,
};
use confbc::regions::{envelope_of_union, ConstraintPolytope, DirectionSet, LinearConstraint};

/// A channel with `Y2 = g(X, Y1)` for a random table `g` and random `P(y1|x)`.
fn semi_deterministic() -> impl Strategy<Value = DmBroadcastChannel> {
    (prop::collection::vec(0.01f64..1.0, 6), prop::collection::vec(0usize..3, 6)).prop_map(|(w, g)| {
        let mut t = vec![0.0; 2 * 3 * 3];
        for x in 0..2 {
            let row = &w[x * 3..x * 3 + 3];
            let s: f64 = row.iter().sum();
            for y1 in 0..3 {
                t[(x * 3 + y1) * 3 + g[x * 3 + y1]] = row[y1] / s;
            }
        }
        DmBroadcastChannel::new(2, 3, 3, t, 0.1, 0.2).unwrap()
    })
}

/// Applies a permutation to the `Y2` symbols.
fn relabel_y2(ch: &DmBroadcastChannel, perm: &[usize]) -> DmBroadcastChannel {
    let (x, y1, y2) = (ch.x_card(), ch.y1_card(), ch.y2_card());
    let mut t = vec![0.0; x * y1 * y2];
    for a in 0..x {
        for b in 0..y1 {
            for c in 0..y2 {
                t[(a * y1 + b) * y2 + perm[c]] = ch.prob(a, b, c);
            }
        }
    }
    DmBroadcastChannel::new(x, y1, y2, t, ch.c12, ch.c21).unwrap()
}

fn staircase() -> impl Strategy<Value = ConstraintPolytope> {
    (0.1f64..2.0, 0.1f64..2.0, 0.1f64..3.0).prop_map(|(a, b, s)| {
        ConstraintPolytope::rates2(vec![
            LinearConstraint::new(vec![1, 0], a, ""),
            LinearConstraint::new(vec![0, 1], b, ""),
            LinearConstraint::new(vec![1, 1], s, ""),
        ])
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn semi_determinism_survives_relabeling(ch in semi_deterministic(), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
        prop_assert!(ch.is_semi_deterministic().is_some());
        prop_assert!(relabel_y2(&ch, &perm).is_semi_deterministic().is_some());
    }

    #[test]
    fn noisy_second_output_is_not_semi_deterministic(ch in semi_deterministic(), leak in 0.01f64..0.5) {
        // Spread some of the mass of (x = 0, y1 = 0) onto a second Y2 symbol.
        let mut t: Vec<f64> = ch.transition().probs().to_vec();
        let hit = (0..3).find(|&c| t[c] > 0.0).unwrap();
        let other = (hit + 1) % 3;
        let moved = t[hit] * leak;
        t[hit] -= moved;
        t[other] += moved;
        let noisy = DmBroadcastChannel::new(2, 3, 3, t, 0.0, 0.0).unwrap();
        prop_assert!(noisy.is_semi_deterministic().is_none());
    }

    #[test]
    fn channel_json_round_trips(a in -3.0f64..3.0, b in -3.0f64..3.0, l in -1.0f64..1.0, p in 0.01f64..10.0) {
        let ch = Channel::Gaussian(GaussianBc::new(a, b, l, p, 0.3, 0.4).unwrap());
        let back = Channel::from_json(&ch.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, ch);
    }

    #[test]
    fn envelope_csv_round_trips_and_is_stable(polys in prop::collection::vec(staircase(), 1..4)) {
        let dirs = DirectionSet::default_2d();
        let env = envelope_of_union(&polys, &dirs).unwrap();
        let text = envelope_csv(&env);
        prop_assert_eq!(&text, &envelope_csv(&envelope_of_union(&polys, &dirs).unwrap()));
        let back = parse_envelope_csv(&text).unwrap();
        prop_assert_eq!(back.directions().dim(), 2);
        for (x, y) in back.values().iter().zip(env.values()) {
            prop_assert!((x - y).abs() <= 1e-8 * (1.0 + y.abs()));
        }
    }

    #[test]
    fn svg_has_one_polyline_per_region_matching_the_csv(polys in prop::collection::vec(staircase(), 1..4)) {
        let dirs = DirectionSet::default_2d();
        let regions: Vec<(String, Vec<[f64; 2]>)> = polys
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let env = envelope_of_union(std::slice::from_ref(p), &dirs).unwrap();
                (format!("r{i}"), boundary_2d(&env).unwrap())
            })
            .collect();
        let svg = boundary_svg(&regions);
        prop_assert_eq!(svg.matches("<polyline").count(), regions.len());
        for (name, pts) in &regions {
            let csv = boundary_csv(pts);
            let coords: Vec<String> = parse_boundary_csv(&csv)
                .unwrap()
                .iter()
                .map(|p| format!("{},{}", format_number(p[0]), format_number(p[1])))
                .collect();
            let needle = format!("data-region=\"{name}\"");
            let line = svg.lines().find(|l| l.contains(&needle)).unwrap();
            let points = format!("points=\"{}\"", coords.join(" "));
            prop_assert!(line.contains(&points));
        }
    }
}
