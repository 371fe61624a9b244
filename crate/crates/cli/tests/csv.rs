use longwave_cli::table::{invariants_csv, parse_profile, profile_csv, read_profile, write_profile};
use longwave_core::diff::DerivativeScheme;
use longwave_core::invariants::{compute_invariants, InvariantSet};
use longwave_core::model::{PeriodicGrid, PhysicalParams, WaveField};
use longwave_core::diff::DiffOperator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn water() -> PhysicalParams {
    PhysicalParams::new(9.81, 1.0, 1000.0, 0.0728).unwrap()
}

#[test]
fn random_fields_round_trip_bit_for_bit() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let dir = tempfile::tempdir().unwrap();
    for case in 0..50 {
        let n = 2 * rng.gen_range(4..100);
        let length = rng.gen_range(0.1..1e4);
        let grid = PeriodicGrid::new(length, n).unwrap();
        let scale = 10f64.powi(rng.gen_range(-300..300));
        let h: Vec<f64> = (0..n)
            .map(|j| match j % 7 {
                0 => 0.0,
                1 => -0.0,
                2 => f64::MIN_POSITIVE,
                _ => scale * rng.gen_range(-1.0..1.0),
            })
            .collect();
        let t = rng.gen_range(0.0..1e3);
        let field = WaveField::new(grid, h, t).unwrap();
        let path = dir.path().join(format!("p{case}.csv"));
        write_profile(&path, &field, &water(), DerivativeScheme::CenteredFourthOrder).unwrap();
        let back = read_profile(&path).unwrap().to_field("p").unwrap();
        assert_eq!(back.grid().len(), n);
        assert_eq!(back.grid().length().to_bits(), length.to_bits());
        assert_eq!(back.t().to_bits(), t.to_bits());
        for (a, b) in field.h().iter().zip(back.h()) {
            assert_eq!(a.to_bits(), b.to_bits(), "case {case}");
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, profile_csv(&back, &water(), DerivativeScheme::CenteredFourthOrder));
    }
}

#[test]
fn zero_field_writes_literal_zeros() {
    let grid = PeriodicGrid::new(8.0, 8).unwrap();
    let text = profile_csv(&WaveField::zeros(grid), &water(), DerivativeScheme::Spectral);
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    let rows: Vec<&str> = text.lines().skip_while(|l| l.starts_with('#')).collect();
    assert_eq!(rows[0], "x,h");
    assert_eq!(rows.len(), 9);
    assert!(rows[1..].iter().all(|r| r.ends_with(",0")));
    let p = parse_profile(&text, "mem").unwrap();
    for key in ["t", "N", "L", "H", "g", "rho", "T", "sigma", "scheme"] {
        assert!(p.header.contains_key(key), "missing {key}");
    }
    assert_eq!(p.header["scheme"], "spectral");
    assert_eq!(p.header["N"], "8");
    let sigma: f64 = p.header["sigma"].parse().unwrap();
    assert_eq!(sigma.to_bits(), water().sigma().to_bits());
}

#[test]
fn invariants_table_layout() {
    let grid = PeriodicGrid::new(8.0, 8).unwrap();
    let params = water();
    let ops = DiffOperator::spectral(grid);
    let inv = compute_invariants(&WaveField::zeros(grid), &params, -1.0 / 12.0, &ops);
    let text = invariants_csv(&[inv], -1.0 / 12.0);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["t,Q,E,M,Hfun,xg_dot", "0,0,0,0,0,"]);

    let with_rate = InvariantSet {
        xg_dot: Some(1.5),
        ..inv
    };
    let text = invariants_csv(&[inv, with_rate], -1.0 / 12.0);
    let last = text.lines().last().unwrap();
    assert!(last.ends_with(",1.5000000000000000e0"), "{last}");
}

#[test]
fn malformed_profiles_are_rejected() {
    let good = profile_csv(
        &WaveField::zeros(PeriodicGrid::new(4.0, 8).unwrap()),
        &water(),
        DerivativeScheme::Spectral,
    );
    assert!(parse_profile(&good.replace("x,h", "x;h"), "m").is_err());
    assert!(parse_profile(&good.replacen(",0\n", ",zero\n", 1), "m").is_err());
    let short: String = good.lines().take(good.lines().count() - 1).map(|l| format!("{l}\n")).collect();
    assert!(parse_profile(&short, "m").and_then(|p| p.to_field("m")).is_err());
}
