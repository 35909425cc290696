//! Statistical and structural invariants of the generators.

use std::f64::consts::TAU;

use asd_core::controlled::{deploy_controlled, deploy_controlled_parallel};
use asd_core::density::deployment_pdf;
use asd_core::geometry::{angular_cdf, sample_points, MEMBERSHIP_TOLERANCE};
use asd_core::gof::{chi_square_gof, ks_test, pearson};
use asd_core::plan::{LayerSpec, NetworkPlan};
use asd_core::rng::SeededRng;
use asd_core::uncontrolled::{deploy_auto, AutoConfig};
use asd_core::RingSector;
use proptest::prelude::*;

#[test]
fn angles_are_uniform_over_100_bins() {
    let s = RingSector::new(0.2, 1.0, 0.5, 2.5).unwrap();
    let n = 200_000;
    let pts = sample_points(&s, n, &mut SeededRng::new(31));
    let mut bins = [0u64; 100];
    for p in &pts {
        let v = angular_cdf(&s, p.angle());
        bins[((v * 100.0) as usize).min(99)] += 1;
    }
    let t = chi_square_gof(&bins, &[n as f64 / 100.0; 100]);
    assert!(t.passes(0.01), "p = {}", t.p_value);
    let ks = ks_test(&pts.iter().map(|p| p.angle()).collect::<Vec<_>>(), |a| {
        angular_cdf(&s, a)
    });
    assert!(ks.passes(0.01), "p = {}", ks.p_value);
}

#[test]
fn radius_and_angle_are_uncorrelated() {
    let s = RingSector::new(0.3, 2.0, 1.0, 4.0).unwrap();
    let pts = sample_points(&s, 100_000, &mut SeededRng::new(8));
    let r: Vec<f64> = pts.iter().map(|p| p.radius()).collect();
    let a: Vec<f64> = pts.iter().map(|p| p.angle()).collect();
    assert!(pearson(&r, &a).abs() < 0.02);
}

#[test]
fn sector_ending_at_full_turn() {
    let s = RingSector::new(0.5, 1.0, 1.5 * std::f64::consts::PI, TAU).unwrap();
    let pts = sample_points(&s, 10_000, &mut SeededRng::new(1));
    assert!(pts.iter().all(|p| p.x >= -1e-12 && p.y <= 1e-12));
    assert!(pts.iter().all(|p| s.contains(*p, MEMBERSHIP_TOLERANCE)));
}

fn arb_plan() -> impl Strategy<Value = NetworkPlan> {
    prop::collection::vec(
        (
            0.1f64..2.0,
            prop::collection::vec(0.05f64..1.0, 0..4),
            prop::collection::vec(0u64..200, 4),
        ),
        1..5,
    )
    .prop_map(|layers| {
        let mut r = 0.0;
        let specs = layers
            .into_iter()
            .map(|(width, gaps, counts)| {
                r += width;
                // strictly increasing bounds inside (0, 2pi)
                let total: f64 = gaps.iter().sum::<f64>() + 0.5;
                let mut acc = 0.0;
                let bounds: Vec<f64> = gaps
                    .iter()
                    .map(|g| {
                        acc += g;
                        TAU * acc / total
                    })
                    .collect();
                let k = bounds.len() + 1;
                LayerSpec::new(r, bounds, counts[..k].to_vec())
            })
            .collect();
        NetworkPlan::new(specs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn controlled_conserves_counts_and_membership(plan in arb_plan(), seed in any::<u64>()) {
        for dep in [deploy_controlled(&plan, seed).unwrap(), deploy_controlled_parallel(&plan, seed).unwrap()] {
            prop_assert_eq!(dep.len() as u64, plan.total_nodes());
            let want: Vec<usize> = plan.layers.iter()
                .flat_map(|l| l.sector_counts.iter().map(|&c| c as usize))
                .collect();
            prop_assert_eq!(dep.run_counts(), want);
            prop_assert!(dep.membership_violations(MEMBERSHIP_TOLERANCE).is_empty());
            for (p, t) in dep.points.iter().zip(&dep.tags) {
                // interior points land where the plan says
                if let Some((i, j)) = plan.locate(*p) {
                    let run = dep.runs.iter().find(|r| r.tag == *t).unwrap();
                    if run.geometry.contains(*p, -1e-9) {
                        prop_assert_eq!((i as u32, j as u32), (t.layer, t.sector));
                    }
                }
            }
        }
    }

    #[test]
    fn pdf_integrates_to_one(plan in arb_plan(), seed in any::<u64>(), bins in 1usize..80) {
        prop_assume!(plan.total_nodes() > 0);
        let dep = deploy_controlled(&plan, seed).unwrap();
        let pdf = deployment_pdf(&dep, bins, bins + 3).unwrap();
        prop_assert_eq!(pdf.grid.out_of_bounds(), 0);
        prop_assert!((pdf.riemann_sum() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn auto_conserves_nodes(radius in 0.01f64..100.0, max_layers in 2u32..30, extra in 0u64..5000, seed in any::<u64>()) {
        let n = max_layers as u64 + extra;
        let real = deploy_auto(&AutoConfig::new(radius, max_layers, n).unwrap(), seed).unwrap();
        prop_assert_eq!(real.deployment.len() as u64, n);
        prop_assert!((2..=max_layers).contains(&real.layer_count));
        prop_assert!(real.inner_nodes >= real.outer_nodes);
        prop_assert!(real.inner_nodes - real.outer_nodes < real.layer_count as u64);
        prop_assert!(real.layer_radii.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(*real.layer_radii.last().unwrap(), radius);
        prop_assert!(real.deployment.membership_violations(MEMBERSHIP_TOLERANCE).is_empty());
    }
}
