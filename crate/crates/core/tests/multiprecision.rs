// Reference values computed in 256-bit arithmetic.

use astro_float::{BigFloat, Consts, RoundingMode};
use ypfa_core::model::{PhysicalConstants, YukawaParams};
use ypfa_core::numeric::{shape_factor, shape_factor_series, Regime};
use ypfa_core::yukawa::yukawa_pair_energy;

const P: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, P)
}

fn to_f64(x: &BigFloat) -> f64 {
    let s = format!("{x}");
    s.parse::<f64>().unwrap_or_else(|_| panic!("cannot parse {s}"))
}

/// 1 − 2/u + e^{−u}(1 + 2/u), every operation at 256 bits.
fn phi_mp(u: f64, cc: &mut Consts) -> BigFloat {
    let u = bf(u);
    let two_over_u = bf(2.0).div(&u, P, RM);
    let e = u.neg().exp(P, RM, cc);
    let one = bf(1.0);
    let tail = e.mul(&one.add(&two_over_u, P, RM), P, RM);
    one.sub(&two_over_u, P, RM).add(&tail, P, RM)
}

fn rel_mp(x: f64, reference: &BigFloat) -> f64 {
    let d = bf(x).sub(reference, P, RM).div(reference, P, RM);
    to_f64(&d).abs()
}

#[test]
fn shape_factor_at_lambda_equal_radius() {
    let mut cc = Consts::new().unwrap();
    // λ = R: Φ = 2 e^{-2}
    let two_e = bf(2.0).mul(&bf(-2.0).exp(P, RM, &mut cc), P, RM);
    let (phi, _) = shape_factor(2.0);
    assert!(rel_mp(phi, &two_e) < 2e-16);
    assert!(rel_mp(phi, &phi_mp(2.0, &mut cc)) < 2e-16);
}

#[test]
fn series_matches_multiprecision_closed_form_on_small_u() {
    let mut cc = Consts::new().unwrap();
    let n = 60;
    for i in 0..=n {
        let u = 1e-4 * 100f64.powf(i as f64 / n as f64);
        let reference = phi_mp(u, &mut cc);
        let (phi, regime) = shape_factor(u);
        assert_eq!(regime, Regime::SeriesSmallU);
        let e = rel_mp(phi, &reference);
        assert!(e < 1e-14, "u={u}: rel err {e}");
        assert_eq!(phi, shape_factor_series(u));
    }
}

#[test]
fn shape_factor_across_the_whole_range() {
    let mut cc = Consts::new().unwrap();
    for &u in &[1e-8, 1e-3, 0.3, 0.999, 1.0, 1.001, 5.0, 50.0, 3000.0] {
        let (phi, _) = shape_factor(u);
        let e = rel_mp(phi, &phi_mp(u, &mut cc));
        assert!(e < 1e-14, "u={u}: rel err {e}");
    }
}

#[test]
fn point_pair_energy() {
    let mut cc = Consts::new().unwrap();
    let c = PhysicalConstants::default();
    let p = YukawaParams::new(0.7, 2e-6).unwrap();
    let (m1, m2, r) = (3e-3, 5e-4, 7e-6);
    let u = yukawa_pair_energy(m1, m2, r, &p, &c).unwrap();
    let reference = bf(-0.7)
        .mul(&bf(c.g), P, RM)
        .mul(&bf(m1), P, RM)
        .mul(&bf(m2), P, RM)
        .mul(&bf(-r / 2e-6).exp(P, RM, &mut cc), P, RM)
        .div(&bf(r), P, RM);
    // r/λ is rounded once in double precision, so a few ulps are expected
    assert!(rel_mp(u, &reference) < 1e-15);
}
