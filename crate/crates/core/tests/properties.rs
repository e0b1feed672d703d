use knotstat::experiments::split_indices;
use knotstat::invariants::{determinant, mahler_measure, DEFAULT_MAHLER_POINTS};
use knotstat::knot_data::{parse_csv_str, parse_json_str, vectorize_jones, Dataset, HyperbolicInvariants, KnotRecord};
use knotstat::poly::{LaurentPoly1, LaurentPoly2, Term2};
use knotstat::stats::pearson;
use num_complex::Complex64;
use proptest::prelude::*;

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-9i64..=-1, 1i64..=9]
}

fn laurent() -> impl Strategy<Value = LaurentPoly1> {
    (-10i64..10, nonzero(), prop::collection::vec(-9i64..=9, 0..10), nonzero()).prop_map(|(lo, first, mid, last)| {
        let mut coeffs = vec![first];
        coeffs.extend(mid);
        coeffs.push(last);
        LaurentPoly1::new(lo, coeffs).unwrap()
    })
}

fn khovanov() -> impl Strategy<Value = Option<LaurentPoly2>> {
    prop::option::of(prop::collection::btree_map((-5i64..5, -12i64..12), nonzero(), 1..6).prop_map(|terms| {
        LaurentPoly2::from_terms(terms.into_iter().map(|((i, j), c)| Term2 { i, j, c })).unwrap()
    }))
}

fn positive() -> impl Strategy<Value = Option<f64>> {
    prop::option::of(1e-3f64..40.0)
}

fn record() -> impl Strategy<Value = KnotRecord> {
    (
        (3u32..17, any::<bool>(), laurent(), khovanov()),
        (positive(), positive(), positive(), positive()),
        (prop::option::of(-3.0f64..3.0), prop::option::of(-3.0f64..3.0), prop::option::of(0.0f64..0.5)),
    )
        .prop_map(|((crossing_number, alternating, jones, khovanov), (vol, lon, mer, cusp), (mu_x, mu_y, cs))| {
            KnotRecord {
                name: String::new(),
                crossing_number,
                alternating,
                jones,
                khovanov,
                hyperbolic: HyperbolicInvariants {
                    vol,
                    longitude_length: lon,
                    meridian_length: mer,
                    mu_x,
                    mu_y,
                    cusp_volume: cusp,
                    chern_simons: cs,
                },
            }
        })
}

fn dataset() -> impl Strategy<Value = Dataset> {
    prop::collection::vec(record(), 1..12).prop_map(|mut records| {
        for (i, r) in records.iter_mut().enumerate() {
            r.name = format!("{}_{i}", r.crossing_number);
        }
        Dataset::new(records, "generated").unwrap()
    })
}

proptest! {
    #[test]
    fn mahler_ignores_shift_and_mirror(p in laurent(), k in -6i64..6) {
        let m = mahler_measure(&p, DEFAULT_MAHLER_POINTS).unwrap();
        let shifted = mahler_measure(&p.shifted(k), DEFAULT_MAHLER_POINTS).unwrap();
        let mirrored = mahler_measure(&p.mirrored(), DEFAULT_MAHLER_POINTS).unwrap();
        prop_assert!((m - shifted).abs() <= 1e-12 * m);
        prop_assert!((m - mirrored).abs() <= 1e-9 * m);
        prop_assert!(m >= 1.0 - 1e-9);
    }

    #[test]
    fn determinant_matches_complex_evaluation(p in laurent()) {
        let at_minus_one = p.eval(Complex64::new(-1.0, 0.0)).unwrap().norm().round() as u64;
        match determinant(&p) {
            Ok(d) => prop_assert_eq!(d, at_minus_one),
            Err(_) => prop_assert_eq!(at_minus_one, 0),
        }
    }

    #[test]
    fn pearson_is_symmetric_and_affine_invariant(
        pairs in prop::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 3..40),
        scale in 0.1f64..10.0,
        offset in -10.0f64..10.0,
    ) {
        let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        if let Ok(r) = pearson(&x, &y) {
            prop_assert!((r - pearson(&y, &x).unwrap()).abs() < 1e-12);
            let moved: Vec<f64> = x.iter().map(|v| scale * v + offset).collect();
            prop_assert!((r - pearson(&moved, &y).unwrap()).abs() < 1e-9);
            prop_assert!(r.abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn datasets_survive_csv_and_json(ds in dataset()) {
        let csv = parse_csv_str(&ds.to_csv_string(), "csv").unwrap();
        prop_assert_eq!(csv.records(), ds.records());
        let json = parse_json_str(&ds.to_json_string(), "json").unwrap();
        prop_assert_eq!(json.records(), ds.records());
    }

    #[test]
    fn jones_rows_decode_to_the_polynomial(ds in dataset()) {
        let (x, window) = vectorize_jones(&ds).unwrap();
        prop_assert_eq!(x.rows(), ds.len());
        for (row, rec) in x.iter_rows().zip(ds.iter()) {
            prop_assert_eq!(&window.decode(row).unwrap(), &rec.jones);
        }
    }

    #[test]
    fn splits_partition_the_indices(n in 2usize..300, fraction in 0.05f64..0.95, seed in any::<u64>()) {
        let n_train = (fraction * n as f64).ceil() as usize;
        if n_train >= n {
            prop_assert!(split_indices(n, fraction, seed).is_err());
            return Ok(());
        }
        let (train, test) = split_indices(n, fraction, seed).unwrap();
        prop_assert_eq!(train.len(), n_train);
        let mut all: Vec<usize> = train.into_iter().chain(test).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
    }
}
