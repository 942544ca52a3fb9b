use std::path::PathBuf;

use pmar::estimators::{fit_method, EstimatorConfig, Method};
use pmar::gpsim::{simulate_example1, Dataset};
use pmar::io::{load_housing, model_from_json, model_to_json, read_dataset, save_model, load_model, write_dataset};
use pmar::numerics::{mean, sample_sd, Matrix, RngStream};
use pmar::Error;
use proptest::prelude::*;

fn arb_dataset() -> impl Strategy<Value = Dataset> {
    (1usize..30, 1usize..3, 1usize..3).prop_flat_map(|(n, dx, dz)| {
        (
            prop::collection::vec(-1e6f64..1e6, n * dx),
            prop::collection::vec(-1e6f64..1e6, n * dz),
            prop::collection::vec(prop::option::of(-1e3f64..1e3), n),
            prop::collection::vec(any::<bool>(), n),
            prop::collection::vec(0.0f64..=1.0, n),
        )
            .prop_map(move |(x, z, y, s, p)| {
                // Selected rows always carry an outcome.
                let y = y.into_iter().zip(&s).map(|(v, &b)| if b { Some(v.unwrap_or(0.5)) } else { v }).collect();
                Dataset::new(Matrix::new(n, dx, x).unwrap(), Matrix::new(n, dz, z).unwrap(), Some(y), Some(s), Some(p))
                    .unwrap()
            })
    })
}

proptest! {
    #[test]
    fn oracle_csv_round_trip(d in arb_dataset()) {
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf, true).unwrap();
        prop_assert_eq!(read_dataset(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn public_csv_drops_unselected_outcomes(d in arb_dataset()) {
        let mut buf = Vec::new();
        write_dataset(&d, &mut buf, false).unwrap();
        let back = read_dataset(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &d.without_oracle());
        let s = back.s.as_ref().unwrap();
        for (y, &sel) in back.y.as_ref().unwrap().iter().zip(s) {
            prop_assert_eq!(y.is_some(), sel);
        }
    }
}

#[test]
fn schema_errors() {
    assert!(matches!(read_dataset("z,y\n1,2\n".as_bytes()), Err(Error::Schema(c)) if c == ["x"]));
    assert!(matches!(read_dataset("x,z,s\n1,2,3\n".as_bytes()), Err(Error::SchemaValue { line: 2, .. })));
    assert!(matches!(read_dataset("x,z,p\n1,2,1.5\n".as_bytes()), Err(Error::SchemaValue { .. })));
    assert!(matches!(read_dataset("x,z\n1,abc\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
    let d = read_dataset("x1,x2,z\n1,2,3\n4,5,6\n".as_bytes()).unwrap();
    assert_eq!((d.x.cols(), d.z.cols(), d.n()), (2, 1, 2));
    assert!(d.y.is_none() && d.s.is_none() && d.p.is_none());
}

#[test]
fn models_round_trip_bitwise() {
    let train = simulate_example1(150, &mut RngStream::new(6, 0).rng()).unwrap();
    let q = Matrix::column(&(0..50).map(|i| -6.0 + 0.25 * i as f64).collect::<Vec<_>>());
    let dir = tempfile::tempdir().unwrap();
    for m in Method::ALL {
        let model = fit_method(m, &train, &EstimatorConfig::default()).unwrap();
        let back = model_from_json(&model_to_json(&model).unwrap()).unwrap();
        assert_eq!(back, model);
        let path = dir.path().join(format!("{m}.json"));
        save_model(&model, &path).unwrap();
        let loaded = load_model(&path).unwrap();
        let a: Vec<u64> = model.predict(&q).unwrap().iter().map(|v| v.to_bits()).collect();
        let b: Vec<u64> = loaded.predict(&q).unwrap().iter().map(|v| v.to_bits()).collect();
        assert_eq!(a, b);
    }
}

#[test]
fn model_version_is_checked() {
    let train = simulate_example1(100, &mut RngStream::new(6, 0).rng()).unwrap();
    let json = model_to_json(&fit_method(Method::Naive, &train, &EstimatorConfig::default()).unwrap()).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    doc["format_version"] = serde_json::json!(999);
    assert!(model_from_json(&doc.to_string()).is_err());
}

#[test]
fn housing_columns() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/boston.csv");
    let raw = load_housing(&path, false).unwrap();
    assert_eq!(raw.n(), 506);
    assert!((raw.x[(0, 0)] - 6.575).abs() < 1e-12);
    assert!((raw.z[(0, 0)] - 4.98).abs() < 1e-12);
    assert!((raw.oracle_y().unwrap()[0] - 24.0).abs() < 1e-12);
    let std = load_housing(&path, true).unwrap();
    for col in [std.x.col_values(0), std.z.col_values(0), std.oracle_y().unwrap()] {
        assert!(mean(&col).abs() < 1e-12);
        assert!((sample_sd(&col) - 1.0).abs() < 1e-12);
    }
}
