//! Scalar reductions of the boundary-law fixed-point systems.
//!
//! Each multi-dimensional consistency system used in this crate admits a
//! one-dimensional reduction: a scalar map whose fixed points, or a scalar
//! polynomial whose roots, enumerate the invariant-subspace solutions. The
//! functions here are those reductions plus the critical-activity formulas
//! attached to them. Evaluations that would overflow in the power form are
//! done in the log domain.

use num::{BigInt, BigRational};

use crate::error::{Error, Result};
use crate::roots::Polynomial;

/// Scalar recursion on the index-two invariant subspace of the
/// weakly periodic system: `f(x) = lambda * x^2 / ((x^2 + lambda)(x - 1))`,
/// defined for `x > 1`.
pub fn f_i2(x: f64, lambda: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain {
            value: x,
            reason: "f_i2 requires x > 1",
        });
    }
    Ok(lambda * x * x / ((x * x + lambda) * (x - 1.0)))
}

/// Degree-six polynomial whose positive roots beyond the shared
/// translation-invariant root enumerate the nontrivial period-two
/// orbits of [`f_i2`]. Ascending coefficients.
pub fn h6(lambda: f64) -> Polynomial {
    Polynomial::new(vec![
        lambda * lambda,
        -3.0 * lambda * lambda,
        2.0 * lambda * (2.0 * lambda + 1.0),
        -lambda * (2.0 * lambda + 5.0),
        5.0 * lambda + 1.0,
        -(lambda + 2.0),
        1.0,
    ])
}

/// Exact rational coefficients of [`h6`] for a rational activity.
pub fn h6_rational(lambda: &BigRational) -> Vec<BigRational> {
    let int = |n: i64| BigRational::from_integer(BigInt::from(n));
    let l2 = lambda * lambda;
    vec![
        l2.clone(),
        -int(3) * &l2,
        int(2) * lambda * (int(2) * lambda + int(1)),
        -lambda * (int(2) * lambda + int(5)),
        int(5) * lambda + int(1),
        -(lambda + int(2)),
        int(1),
    ]
}

/// Critical activity as a function of the tangency location `x > 1` of
/// the period-two reduction. The radicand is a perfect square plus a
/// positive remainder on x > 1, so the square root is always real.
pub fn phi_wp(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain {
            value: x,
            reason: "phi_wp requires x > 1",
        });
    }
    let radicand = x * x * x * x - 2.0 * x * x * x + 3.0 * x * x - 2.0 * x + 1.0;
    debug_assert!(radicand > 0.0);
    let num = x * x * (x * x * x - 5.0 * x * x + 5.0 * x - 2.0) - x * x * x * radicand.sqrt();
    let den = -2.0 * (x - 1.0) * (2.0 * x * x - 2.0 * x + 1.0);
    Ok(num / den)
}

/// Integer coefficients (ascending) of the degree-twelve polynomial whose
/// root on (1, infinity) locates the tangency of the period-two reduction.
pub const PSI12_COEFFS: [i64; 13] = [
    16, -152, 712, -2160, 4696, -7696, 9736, -9592, 7312, -4224, 1760, -480, 64,
];

pub fn psi12() -> Polynomial {
    Polynomial::new(PSI12_COEFFS.iter().map(|&c| c as f64).collect())
}

/// Fixed-point map of the one-dimensional reduction of the `stick`
/// system: `f(z) = lambda * (z^k / (z+1)^k + 1)^k`.
pub fn stick_f(z: f64, k: u32, lambda: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "stick reduction requires z > 0",
        });
    }
    let kf = k as f64;
    let ratio = (kf * (z.ln() - z.ln_1p())).exp();
    Ok(lambda * (ratio + 1.0).powi(k as i32))
}

/// Activity as a function of the fixed-point location:
/// `phi(z) = z / (z^k / (z+1)^k + 1)^k`. Solving `stick_f(z) = z` for
/// lambda gives exactly this.
pub fn stick_phi(z: f64, k: u32) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "stick reduction requires z > 0",
        });
    }
    let kf = k as f64;
    let ratio = (kf * (z.ln() - z.ln_1p())).exp();
    Ok(z / (ratio + 1.0).powi(k as i32))
}

/// Sign-equivalent form of the extremum condition of [`stick_phi`]:
/// the critical locations are the roots of
/// `z^{k+1} + (1+z)^{k+1} + z^k - k^2 z^k`, evaluated here divided by
/// `z^k` to stay in range for large k.
pub fn stick_h_scaled(z: f64, k: u32) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "stick reduction requires z > 0",
        });
    }
    let kf = k as f64;
    Ok(z + 1.0 - kf * kf + ((kf + 1.0) * z.ln_1p() - kf * z.ln()).exp())
}

/// Fixed-point map of the one-dimensional reduction of the `key`
/// system: `f(z) = lambda * (z / (lambda (2z+1)^k)^{1/(k+1)} + 1)^k`.
pub fn key_f(z: f64, k: u32, lambda: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "key reduction requires z > 0",
        });
    }
    let kf = k as f64;
    let log_root = (lambda.ln() + kf * (2.0 * z + 1.0).ln()) / (kf + 1.0);
    let t = (z.ln() - log_root).exp();
    Ok(lambda * (t + 1.0).powi(k as i32))
}

/// Activity as a function of the fixed-point location for the `key`
/// reduction:
/// `phi1(z) = z^{k+1} (2(k-1)z + k^2 + k - 1)^{k+1} / (2z+1)^{2k+1}`,
/// evaluated in the log domain.
pub fn key_phi1(z: f64, k: u32) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "key reduction requires z > 0",
        });
    }
    let kf = k as f64;
    let inner = 2.0 * (kf - 1.0) * z + kf * kf + kf - 1.0;
    Ok(((kf + 1.0) * (z.ln() + inner.ln()) - (2.0 * kf + 1.0) * (2.0 * z + 1.0).ln()).exp())
}

/// Sign of `phi1'` is the sign of this quadratic in z:
/// `4(k-1) z^2 - 2(k^3 - k^2 - k + 2) z + (k^3 + 2k^2 - 1)`.
/// Its discriminant is exactly `4 k^2 D1(k)`, so the roots are the
/// extremum locations returned by [`key_extrema`].
pub fn key_phi1_deriv_sign_quadratic(z: f64, k: u32) -> f64 {
    let kf = k as f64;
    4.0 * (kf - 1.0) * z * z - 2.0 * (kf * kf * kf - kf * kf - kf + 2.0) * z
        + (kf * kf * kf + 2.0 * kf * kf - 1.0)
}

/// Discriminant-driving integer `D1(k) = k^4 - 2k^3 - 5k^2 + 2k + 5`,
/// computed exactly. Positive iff the `key` reduction has extrema.
pub fn key_d1(k: u32) -> i64 {
    let k = k as i64;
    k * k * k * k - 2 * k * k * k - 5 * k * k + 2 * k + 5
}

/// Extremum locations `z_{1,2}` of [`key_phi1`], the roots of the
/// derivative quadratic. Returns `(z_plus, z_minus)` with
/// `z_plus > z_minus`. Errors for k < 4 where the discriminant is
/// negative and the reduction is monotone.
pub fn key_extrema(k: u32) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::InvalidSpec("key reduction needs k >= 2".into()));
    }
    let d1 = key_d1(k);
    if d1 <= 0 {
        return Err(Error::NegativeDiscriminant(k));
    }
    let kf = k as f64;
    let s = (d1 as f64).sqrt();
    let b = kf * kf * kf - kf * kf - kf + 2.0;
    let den = 4.0 * (kf - 1.0);
    Ok(((b + kf * s) / den, (b - kf * s) / den))
}

/// Closed-form critical activities of the `key` reduction,
/// `((k-1)/(2k))^k * [(k^3-k^2-k+2 +/- k sqrt(D1)) (k^2+k+1 +/- sqrt(D1))]^{k+1}
///  / (4 (k^2-k+1 +/- sqrt(D1))^{2k+1})`,
/// returned as `(lambda1, lambda2)` with `lambda1 < lambda2`. The `+`
/// branch equals `phi1` at the larger extremum and yields the smaller
/// value.
pub fn key_lambda_cr(k: u32) -> Result<(f64, f64)> {
    let d1 = key_d1(k);
    if d1 <= 0 {
        return Err(Error::NegativeDiscriminant(k));
    }
    let kf = k as f64;
    let s = (d1 as f64).sqrt();
    let branch = |sgn: f64| -> f64 {
        let a = kf * kf * kf - kf * kf - kf + 2.0 + sgn * kf * s;
        let b = kf * kf + kf + 1.0 + sgn * s;
        let c = kf * kf - kf + 1.0 + sgn * s;
        (kf * ((kf - 1.0) / (2.0 * kf)).ln() + (kf + 1.0) * (a * b).ln()
            - 4.0_f64.ln()
            - (2.0 * kf + 1.0) * c.ln())
        .exp()
    };
    let (lp, lm) = (branch(1.0), branch(-1.0));
    Ok(if lp < lm { (lp, lm) } else { (lm, lp) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::eval_rational;
    use num::BigInt;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn f_i2_fixed_at_ti_root() {
        // x = 2 solves x^3 - x^2 = 4, the shared translation-invariant
        // root at lambda = 4, and is a fixed point of the reduction
        let y = f_i2(2.0, 4.0).unwrap();
        assert!((y - 2.0).abs() < 1e-15, "y = {y}");
    }

    #[test]
    fn f_i2_rejects_domain() {
        assert!(f_i2(1.0, 4.0).is_err());
        assert!(f_i2(0.5, 4.0).is_err());
    }

    #[test]
    fn h6_exact_value_at_two_four() {
        // tangency anchor: h6(2) = 0 exactly at lambda = 4
        let coeffs = h6_rational(&rat(4));
        assert_eq!(eval_rational(&coeffs, &rat(2)), rat(0));
        assert_eq!(h6(4.0).eval(2.0), 0.0);
    }

    #[test]
    fn h6_rational_matches_float() {
        let cf = h6(5.0);
        let cr = h6_rational(&rat(5));
        for (a, b) in cf.coeffs().iter().zip(cr.iter()) {
            let bf: f64 = b.numer().to_string().parse::<f64>().unwrap()
                / b.denom().to_string().parse::<f64>().unwrap();
            assert_eq!(*a, bf);
        }
    }

    #[test]
    fn h6_roots_at_lambda_five() {
        // frozen: exactly two positive roots, swapped by the reduction map
        let p = h6(5.0);
        let r1 = 1.381_966_011_250_105_f64;
        let r2 = 3.618_033_988_749_895_f64;
        assert!(p.eval(r1).abs() < 1e-9);
        assert!(p.eval(r2).abs() < 1e-9);
        let y1 = f_i2(r1, 5.0).unwrap();
        let y2 = f_i2(r2, 5.0).unwrap();
        assert!((y1 - r2).abs() < 1e-9, "f(r1) = {y1}");
        assert!((y2 - r1).abs() < 1e-9, "f(r2) = {y2}");
    }

    #[test]
    fn phi_wp_anchor() {
        assert!((phi_wp(2.0).unwrap() - 4.0).abs() < 1e-14);
        assert!(phi_wp(1.0).is_err());
    }

    #[test]
    fn psi12_anchors() {
        let p = psi12();
        assert_eq!(p.eval(1.0), -8.0);
        assert_eq!(p.eval(2.0), 0.0);
        // exact check at x = 2 over the rationals
        let coeffs: Vec<BigRational> = PSI12_COEFFS.iter().map(|&c| rat(c)).collect();
        assert_eq!(eval_rational(&coeffs, &rat(2)), rat(0));
    }

    #[test]
    fn psi12_single_sign_change_on_interval() {
        let p = psi12();
        let mut changes = 0;
        let mut last = p.eval(1.0 + 1e-9).signum();
        for i in 1..=100_000 {
            let x = 1.0 + 99.0 * i as f64 / 100_000.0;
            let s = p.eval(x).signum();
            if s != last && s != 0.0 {
                changes += 1;
                last = s;
            }
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn stick_phi_inverts_stick_f() {
        // lambda = phi(z) makes z a fixed point of the map
        for k in [5u32, 6, 7] {
            for z in [0.5, 2.0, 7.0] {
                let lam = stick_phi(z, k).unwrap();
                let y = stick_f(z, k, lam).unwrap();
                assert!((y - z).abs() < 1e-9 * z, "k={k} z={z} y={y}");
            }
        }
    }

    #[test]
    fn stick_h_roots_frozen_k5() {
        let f = |z: f64| stick_h_scaled(z, 5).unwrap();
        let z1 = 2.080_826_065_568_521_f64;
        let z2 = 7.869_247_636_241_744_f64;
        assert!(f(z1).abs() < 1e-8, "{}", f(z1));
        assert!(f(z2).abs() < 1e-7, "{}", f(z2));
        // sign pattern: positive, negative between, positive after
        assert!(f(1.0) > 0.0);
        assert!(f(4.0) < 0.0);
        assert!(f(20.0) > 0.0);
    }

    #[test]
    fn stick_h_negative_at_k_plus_one() {
        // witness point inside the root interval for every k >= 5
        for k in 5..=200u32 {
            let v = stick_h_scaled((k + 1) as f64, k).unwrap();
            assert!(v < 0.0, "k = {k}, value = {v}");
        }
    }

    #[test]
    fn stick_critical_values_frozen() {
        let cases = [
            (5u32, 0.880_047_855_784_047_7, 1.078_094_053_603_498_6),
            (6, 0.665_588_727_1, 1.207_665_882_8),
            (7, 0.466_197_597_9, 1.347_647_459_0),
        ];
        for (k, l1, l2) in cases {
            let f = |z: f64| stick_h_scaled(z, k).unwrap();
            let cfg = crate::roots::IsolationConfig::default();
            let brs = crate::roots::isolate_roots(f, 1.0, 200.0, &cfg).unwrap();
            assert_eq!(brs.len(), 2, "k = {k}");
            let z1 = crate::roots::refine_root(f, &brs[0], 1e-12).unwrap();
            let z2 = crate::roots::refine_root(f, &brs[1], 1e-12).unwrap();
            let lam1 = stick_phi(z2, k).unwrap();
            let lam2 = stick_phi(z1, k).unwrap();
            assert!((lam1 - l1).abs() < 1e-8, "k={k} lam1={lam1}");
            assert!((lam2 - l2).abs() < 1e-8, "k={k} lam2={lam2}");
        }
    }

    #[test]
    fn key_d1_exact_values() {
        assert_eq!(key_d1(2), -11);
        assert_eq!(key_d1(3), -7);
        assert_eq!(key_d1(4), 61);
    }

    #[test]
    fn key_extrema_frozen_k4() {
        let (zp, zm) = key_extrema(4).unwrap();
        assert!((zp - 6.436_749_891_968_884).abs() < 1e-12);
        assert!((zm - 1.229_916_774_697_782).abs() < 1e-12);
        assert!(matches!(key_extrema(3), Err(Error::NegativeDiscriminant(3))));
        assert!(matches!(key_extrema(2), Err(Error::NegativeDiscriminant(2))));
    }

    #[test]
    fn key_closed_forms_match_phi1_at_extrema() {
        for k in 4..=10u32 {
            let (zp, zm) = key_extrema(k).unwrap();
            let (l1, l2) = key_lambda_cr(k).unwrap();
            let pp = key_phi1(zp, k).unwrap();
            let pm = key_phi1(zm, k).unwrap();
            let (e1, e2) = if pp < pm { (pp, pm) } else { (pm, pp) };
            assert!((l1 - e1).abs() <= 1e-9 * e1.abs(), "k={k}: {l1} vs {e1}");
            assert!((l2 - e2).abs() <= 1e-9 * e2.abs(), "k={k}: {l2} vs {e2}");
        }
    }

    #[test]
    fn key_band_frozen_k4() {
        let (l1, l2) = key_lambda_cr(4).unwrap();
        assert!((l1 - 368.590_361_674_389_56).abs() < 1e-9 * l1);
        assert!((l2 - 506.074_698_389_833_77).abs() < 1e-9 * l2);
    }

    #[test]
    fn key_f_fixed_point_frozen_at_band_midpoint() {
        // frozen against an independent solve: at the midpoint of the
        // k = 4 critical band the scalar map has its fixed point here
        let lam = 437.332_530_032_111_7_f64;
        let z = 6_995.987_120_713_644_f64;
        let y = key_f(z, 4, lam).unwrap();
        assert!((y - z).abs() < 1e-6 * z, "y = {y}");
    }

    #[test]
    fn key_deriv_quadratic_sign_at_extrema() {
        for k in 4..=8u32 {
            let (zp, zm) = key_extrema(k).unwrap();
            let scale = (k as f64).powi(4);
            assert!(key_phi1_deriv_sign_quadratic(zp, k).abs() < 1e-7 * scale);
            assert!(key_phi1_deriv_sign_quadratic(zm, k).abs() < 1e-7 * scale);
            let mid = 0.5 * (zp + zm);
            assert!(key_phi1_deriv_sign_quadratic(mid, k) < 0.0);
        }
    }

    #[test]
    fn key_quadratic_discriminant_identity_exact() {
        // discriminant of the derivative-sign quadratic equals 4 k^2 D1
        for k in 2..=50i64 {
            let b = 2 * (k * k * k - k * k - k + 2);
            let c = k * k * k + 2 * k * k - 1;
            let a = 4 * (k - 1);
            assert_eq!(b * b - 4 * a * c, 4 * k * k * key_d1(k as u32));
        }
    }

    #[test]
    fn key_phi1_deriv_sign_matches_finite_differences() {
        for k in [4u32, 6] {
            for j in 1..=100 {
                let z = 0.2 * j as f64;
                let h = 1e-6 * z.max(1.0);
                let d = (key_phi1(z + h, k).unwrap() - key_phi1(z - h, k).unwrap()) / (2.0 * h);
                let q = key_phi1_deriv_sign_quadratic(z, k);
                let (zp, zm) = key_extrema(k).unwrap();
                // skip samples too close to the extrema where both vanish
                if (z - zp).abs() < 1e-2 || (z - zm).abs() < 1e-2 {
                    continue;
                }
                assert_eq!(d.signum(), q.signum(), "k={k} z={z} d={d} q={q}");
            }
        }
    }
}
