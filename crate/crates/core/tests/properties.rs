use num_rational::Ratio;
use opsplit::harness::{
    efficiency_gain, largest_dt_for_target, read_records, write_records, DtSearch, MetricKind, WorkPrecisionRecord,
};
use opsplit::numerics::{spline_shift, Boundary};
use opsplit::splitting::SplittingMethod;
use opsplit::vlasov::{EcdiConfig, FieldSchedule, Species};
use opsplit::{verify_order_conditions, MethodId, VlasovConfig};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn efficiency_gain_identity(delta in 0.05f64..20.0, rho in 0.0f64..5.0) {
        let eta = efficiency_gain(delta, rho);
        prop_assert!((eta + (1.0 + rho) / delta - 1.0).abs() <= 4.0 * f64::EPSILON * (1.0 + (1.0 + rho) / delta));
    }

    #[test]
    fn strang_of_any_order_is_exactly_second_order(perm in (2usize..6).prop_flat_map(permutation)) {
        let m = SplittingMethod::<Ratio<i64>>::strang(&perm).unwrap();
        let r = verify_order_conditions(&m, Ratio::from_integer(0));
        prop_assert_eq!(r.satisfied_to_order, 2);
        prop_assert_eq!(r.max_abs_residual, Ratio::from_integer(0));
        prop_assert_eq!(m.count_subintegrations(), 2 * perm.len() - 1);
    }

    #[test]
    fn looser_target_never_gives_smaller_step(
        c in 0.1f64..50.0,
        p in 1.0f64..4.0,
        lo in 1e-3f64..1e-2,
        t1 in 1e-6f64..1e-1,
        factor in 1.0f64..100.0,
    ) {
        let err = |dt: f64| Ok(c * dt.powf(p));
        let tight = t1;
        let loose = t1 * factor;
        prop_assume!(err(lo).unwrap() <= tight);
        for search in [DtSearch::continuous(lo, 1.0), DtSearch::WholeSteps { span: 1.0, n_min: 1, n_max: (1.0 / lo) as usize }] {
            let a = largest_dt_for_target(err, tight, search).unwrap();
            let b = largest_dt_for_target(err, loose, search).unwrap();
            prop_assert!(b.dt >= a.dt, "{search:?}: {} < {}", b.dt, a.dt);
            prop_assert!(a.error <= tight && b.error <= loose);
            prop_assert!(a.monotonicity_violations.is_empty());
        }
    }

    #[test]
    fn records_round_trip_through_csv(
        rows in prop::collection::vec(
            ("[A-Za-z0-9()-]{1,14}", 1e-6f64..10.0, 1usize..100_000, 0.0f64..1e3, any::<bool>(), 0.0f64..1e4, 0usize..50),
            1..12,
        )
    ) {
        let records: Vec<WorkPrecisionRecord> = rows
            .into_iter()
            .map(|(method, dt, steps, error, energy, wall_seconds, repeats)| WorkPrecisionRecord {
                method,
                dt,
                steps,
                error,
                metric: if energy { MetricKind::MaxEnergyDeviation } else { MetricKind::Mrms },
                wall_seconds,
                repeats,
            })
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.csv");
        write_records(&path, &records).unwrap();
        prop_assert_eq!(read_records(&path).unwrap(), records);
    }

    #[test]
    fn periodic_shift_conserves_the_sum(
        values in prop::collection::vec(-5.0f64..5.0, 4..64),
        shift in -40.0f64..40.0,
    ) {
        let out = spline_shift(&values, shift, Boundary::Periodic, 0.0).unwrap();
        let before: f64 = values.iter().sum();
        let after: f64 = out.iter().sum();
        let scale: f64 = values.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((after - before).abs() <= 1e-12 * scale, "{before} vs {after}");
    }

    #[test]
    fn whole_cell_periodic_shift_rotates(values in prop::collection::vec(-5.0f64..5.0, 4..40), cells in -60i32..60) {
        let n = values.len() as i32;
        let out = spline_shift(&values, cells as f64, Boundary::Periodic, 0.0).unwrap();
        for (i, v) in out.iter().enumerate() {
            let src = (i as i32 - cells).rem_euclid(n) as usize;
            prop_assert!((v - values[src]).abs() <= 1e-12, "i = {i}: {v} vs {}", values[src]);
        }
    }

    #[test]
    fn shifting_constant_data_is_exact(c in -3.0f64..3.0, n in 4usize..40, shift in -10.0f64..10.0) {
        let out = spline_shift(&vec![c; n], shift, Boundary::Periodic, 0.0).unwrap();
        prop_assert!(out.iter().all(|v| (v - c).abs() <= 1e-13));
    }

    #[test]
    fn vlasov_config_round_trips_through_key_values(
        dt in 1e-5f64..1.0,
        nx in 4usize..512,
        alpha2 in 0.0f64..2.0,
        epsilon in 0.0f64..0.5,
        method in prop::sample::select(MethodId::all()),
        ions in any::<bool>(),
        field in prop::sample::select(vec![FieldSchedule::AfterFirstAdvection, FieldSchedule::AfterFirstStage, FieldSchedule::Disabled]),
        stride in 1usize..20,
    ) {
        let cfg = VlasovConfig {
            dt,
            nx,
            alpha2,
            epsilon,
            method,
            perturbed: if ions { Species::Ions } else { Species::Electrons },
            field,
            stride,
            ..EcdiConfig::two_stream()
        };
        let back = VlasovConfig::from_str_with_defaults(&cfg.to_kv_string()).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
