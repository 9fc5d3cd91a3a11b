use std::f64::consts::PI;

use hgbos::io::{
    decode_pgm, encode_pgm, export_series_csv, load_fgrid, load_pgm, save_fgrid, save_pgm,
    write_map_csv, BitDepth,
};
use hgbos::mask::dilate_mask;
use hgbos::{phase_diff, wrap_phase, Error, Image, Mask, PhaseMap};
use proptest::prelude::*;

#[test]
fn wrap_convention() {
    assert_eq!(wrap_phase(0.0), 0.0);
    assert!(wrap_phase(2.0 * PI).abs() < 1e-15);
    assert!((wrap_phase(-1.5 * PI) - PI / 2.0).abs() < 1e-15);
    assert_eq!(wrap_phase(PI), PI);
    assert_eq!(wrap_phase(-PI), PI);
    assert!(wrap_phase(f64::INFINITY).is_nan());
}

#[test]
fn difference_of_opposite_phases() {
    let a = PhaseMap::wrapped(2, 1, vec![3.0, 1.0]).unwrap();
    let b = PhaseMap::wrapped(2, 1, vec![-3.0, f64::NAN]).unwrap();
    let d = phase_diff(&a, &b).unwrap();
    assert!((d.get(0, 0) - (6.0 - 2.0 * PI)).abs() < 1e-15);
    assert!((d.get(0, 0) + 0.2832).abs() < 1e-4);
    assert!(!d.is_valid(1, 0));
    let c = PhaseMap::wrapped(1, 2, vec![0.0, 0.0]).unwrap();
    assert!(matches!(phase_diff(&a, &c), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn dilation_is_clipped_chebyshev_ball() {
    let m = Mask::from_fn(6, 5, |x, y| (x, y) == (1, 1)).unwrap();
    let d = dilate_mask(&m, 2);
    for y in 0..5 {
        for x in 0..6 {
            assert_eq!(d.is_excluded(x, y), x <= 3 && y <= 3, "({x}, {y})");
        }
    }
    assert_eq!(dilate_mask(&m, 0), m);
    let empty = Mask::empty(6, 5).unwrap();
    assert_eq!(dilate_mask(&empty, 7), empty);
}

#[test]
fn pgm_sample_mapping() {
    let mut bytes = b"P5\n2 2\n255\n".to_vec();
    bytes.extend([0, 128, 255, 64]);
    let img = decode_pgm(&bytes).unwrap();
    assert_eq!(img.data(), &[0.0, 128.0 / 255.0, 1.0, 64.0 / 255.0]);
    match decode_pgm(b"P2\n2 2\n255\n0 1 2 3\n") {
        Err(Error::Format { offset, .. }) => assert_eq!(offset, 0),
        other => panic!("expected format error, got {other:?}"),
    }
    match decode_pgm(b"P5\n2 2\n255\n\x01\x02") {
        Err(Error::Format { offset, .. }) => assert!(offset >= 11),
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn pgm_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let img = Image::from_fn(7, 3, |x, y| (x * 3 + y) as f64 / 27.0).unwrap();
    for (depth, bound) in [(BitDepth::Eight, 0.5 / 255.0), (BitDepth::Sixteen, 0.5 / 65535.0)] {
        let path = dir.path().join("f.pgm");
        save_pgm(&img, &path, depth).unwrap();
        let back = load_pgm(&path).unwrap();
        let worst = img.data().iter().zip(back.data()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst <= bound + 1e-15, "{worst}");
    }
}

#[test]
fn fgrid_files_keep_sentinels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.fgrid");
    let map = PhaseMap::wrapped(3, 1, vec![0.0, PI, f64::NAN]).unwrap();
    save_fgrid(&map, &path).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..4], b"FGR1");
    let back = load_fgrid(&path).unwrap();
    assert!(back.data().iter().zip(map.data()).all(|(a, b)| a.to_bits() == b.to_bits()));
    assert!(back.is_wrapped());

    std::fs::write(&path, b"XXXX\x01\0\0\0\x01\0\0\0\0\0\0\0\0\0\0\0").unwrap();
    assert!(matches!(load_fgrid(&path), Err(Error::Format { .. })));
    let mut short = b"FGR1\x04\0\0\0\x04\0\0\0".to_vec();
    short.extend(std::iter::repeat_n(0u8, 15 * 8));
    std::fs::write(&path, short).unwrap();
    assert!(matches!(load_fgrid(&path), Err(Error::Format { .. })));
}

#[test]
fn csv_layouts() {
    assert_eq!(export_series_csv(&[(0, 1.5), (1, f64::NAN)]), "x,value\n0,1.5\n1,\n");
    assert_eq!(export_series_csv(&[]), "x,value\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let map = PhaseMap::wrapped(2, 2, vec![0.1, 0.2, f64::NAN, 0.4]).unwrap();
    write_map_csv(&map, &path).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "x,y,value\n0,0,0.1\n1,0,0.2\n0,1,\n1,1,0.4\n"
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn pgm_quantization_bound(w in 1usize..9, h in 1usize..9, vals in proptest::collection::vec(0.0f64..=1.0, 64)) {
        let img = Image::new(w, h, vals[..w * h].to_vec()).unwrap();
        let back = decode_pgm(&encode_pgm(&img, BitDepth::Eight).unwrap()).unwrap();
        for (a, b) in img.data().iter().zip(back.data()) {
            prop_assert!((a - b).abs() <= 0.5 / 255.0 + 1e-15);
        }
    }

    #[test]
    fn wrap_is_idempotent_and_congruent(x in -1e8f64..1e8) {
        let y = wrap_phase(x);
        prop_assert!(y > -PI && y <= PI);
        prop_assert_eq!(wrap_phase(y), y);
        let turns = (x - y) / (2.0 * PI);
        prop_assert!((turns - turns.round()).abs() < 1e-6);
    }
}
