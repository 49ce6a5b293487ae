//! Critical activities and phase-regime classification.
//!
//! Each model is classified through its certified scalar reduction: the
//! fixed points are isolated and counted by the roots module, critical
//! activities come from the closed-form or isolated extrema of the
//! activity curve, and the regime follows from the certified count. A
//! narrow band around each critical activity is reported as `Critical`:
//! a tangency is a measure-zero event that floating point cannot pin to
//! a single activity value.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::reductions;
use crate::roots::{
    count_fixed_points, isolate_roots, refine_root, Certificate, IsolationConfig, RootBracket,
};

/// Half-width of the activity band classified as critical.
pub const CRITICAL_BAND: f64 = 1e-9;

/// Largest supported tree order; beyond this the log-domain evaluations
/// themselves lose accuracy.
pub const MAX_K: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Model {
    #[serde(rename = "stick")]
    StickTi,
    #[serde(rename = "key")]
    KeyTi,
    #[serde(rename = "wp")]
    WpIndex4,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "stick" => Ok(Model::StickTi),
            "key" => Ok(Model::KeyTi),
            "wp" => Ok(Model::WpIndex4),
            other => Err(Error::UnknownGraph(other.to_string())),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::StickTi => "stick",
            Model::KeyTi => "key",
            Model::WpIndex4 => "wp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Unique,
    Critical,
    Multiple,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Unique => "Unique",
            Regime::Critical => "Critical",
            Regime::Multiple => "Multiple",
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriticalValues {
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseReport {
    pub model: Model,
    pub k: u32,
    pub lambda: f64,
    pub regime: Regime,
    /// Translation-invariant solutions (tangency candidates counted once).
    pub ti_count: usize,
    /// Weakly periodic non-periodic solutions; 0 for the TI models.
    pub wp_count: usize,
    pub roots: Vec<f64>,
    pub critical_values: Option<CriticalValues>,
    #[serde(skip)]
    pub brackets: Vec<RootBracket>,
}

fn validate_k(k: u32, min: u32) -> Result<()> {
    if k < min {
        return Err(Error::InvalidSpec(format!("k must be >= {min}, got {k}")));
    }
    if k > MAX_K {
        return Err(Error::InvalidSpec(format!("k capped at {MAX_K}, got {k}")));
    }
    Ok(())
}

/// Critical activities for the stick model (k >= 5): isolate the two
/// extremum locations z1 < z2 of the activity curve and return
/// `(phi(z2), phi(z1))`, i.e. (lambda1, lambda2) with lambda1 < lambda2.
pub fn critical_stick(k: u32) -> Result<(f64, f64)> {
    validate_k(k, 1)?;
    if k < 5 {
        return Err(Error::NoCriticalPoints(k));
    }
    let (z1, z2) = stick_extrema(k)?;
    Ok((
        reductions::stick_phi(z2, k)?,
        reductions::stick_phi(z1, k)?,
    ))
}

/// Extremum locations z1 < z2 of the stick activity curve.
fn stick_extrema(k: u32) -> Result<(f64, f64)> {
    let f = |z: f64| reductions::stick_h_scaled(z, k).unwrap_or(f64::INFINITY);
    let hi = 2.0 * (k as f64) * (k as f64) + 10.0;
    let cfg = IsolationConfig::default();
    let brs = isolate_roots(f, 1e-6, hi, &cfg)?;
    let sign: Vec<_> = brs
        .iter()
        .filter(|b| b.certificate != Certificate::TangencyCandidate)
        .collect();
    if sign.len() != 2 {
        return Err(Error::NoCriticalPoints(k));
    }
    let z1 = refine_root(f, sign[0], 1e-12)?;
    let z2 = refine_root(f, sign[1], 1e-12)?;
    Ok((z1, z2))
}

/// Critical data for the weakly periodic two-state model (k = 2, i = 1):
/// the tangency location x0 of the period-two reduction (the root of the
/// degree-12 polynomial on (1, 100)) and the critical activity phi(x0).
pub fn critical_wp() -> Result<(f64, f64)> {
    let p = reductions::psi12();
    let f = |x: f64| p.eval(x);
    let cfg = IsolationConfig::default();
    let brs = isolate_roots(f, 1.0, 100.0, &cfg)?;
    let sign: Vec<_> = brs
        .iter()
        .filter(|b| b.certificate != Certificate::TangencyCandidate)
        .collect();
    if sign.len() != 1 {
        return Err(Error::InvalidSpec(format!(
            "expected one tangency location, found {} brackets",
            sign.len()
        )));
    }
    let x0 = refine_root(f, sign[0], 1e-12)?;
    let lambda_cr = reductions::phi_wp(x0)?;
    Ok((x0, lambda_cr))
}

/// Critical activities for the key model, k >= 4.
pub fn critical_key(k: u32) -> Result<(f64, f64)> {
    validate_k(k, 2)?;
    reductions::key_lambda_cr(k)
}

fn in_band(lambda: f64, lambda_cr: f64) -> bool {
    (lambda - lambda_cr).abs() < CRITICAL_BAND
}

/// Scan upper bound for fixed-point counting; all right-hand sides are
/// bounded well below it and the bound is asserted, not assumed.
fn z_max(k: u32, lambda: f64) -> f64 {
    (4.0 * lambda * 3.0_f64.powi(k as i32)).max(10.0)
}

struct ScalarCount {
    simple: Vec<f64>,
    tangencies: Vec<RootBracket>,
    brackets: Vec<RootBracket>,
}

fn count_scalar<F: Fn(f64) -> f64 + Copy>(f: F, lo: f64, hi: f64) -> Result<ScalarCount> {
    let cfg = IsolationConfig {
        log_spaced: true,
        ..IsolationConfig::default()
    };
    let fp = count_fixed_points(f, lo, hi, &cfg)?;
    let g = |x: f64| f(x) - x;
    let mut simple = Vec::new();
    for b in &fp.brackets {
        simple.push(refine_root(g, b, 1e-12)?);
    }
    let mut brackets = fp.brackets;
    brackets.extend(fp.tangencies.iter().copied());
    Ok(ScalarCount {
        simple,
        tangencies: fp.tangencies,
        brackets,
    })
}

/// Near a critical activity the reduction curve is tangent to the
/// diagonal at a known location: the pair of almost-coincident roots (or
/// the near-touch) there is reported as one tangency candidate instead
/// of an ill-conditioned count.
fn merge_at_tangency(count: &mut ScalarCount, x_t: f64) {
    let w = 0.05 * x_t.max(1.0);
    count.simple.retain(|&x| (x - x_t).abs() > w);
    count
        .tangencies
        .retain(|b| b.hi < x_t - w || b.lo > x_t + w);
    count
        .brackets
        .retain(|b| b.hi < x_t - w || b.lo > x_t + w);
    let t = RootBracket {
        lo: x_t - w,
        hi: x_t + w,
        certificate: Certificate::TangencyCandidate,
    };
    count.tangencies.push(t);
    count.brackets.push(t);
}

fn regime_from(count_total: usize, forced_critical: bool, has_tangency: bool) -> Regime {
    if forced_critical || has_tangency {
        Regime::Critical
    } else if count_total <= 1 {
        Regime::Unique
    } else {
        Regime::Multiple
    }
}

fn classify_scalar_ti<F: Fn(f64) -> f64 + Copy>(
    model: Model,
    k: u32,
    lambda: f64,
    f: F,
    criticals: Option<(f64, f64)>,
    tangency_location: impl Fn(f64) -> Option<f64>,
) -> Result<PhaseReport> {
    let hi = z_max(k, lambda);
    if !(f(hi) < hi) {
        return Err(Error::Domain {
            value: hi,
            reason: "scan bound must dominate the reduction map",
        });
    }
    let mut count = count_scalar(f, 1e-9, hi)?;
    let mut forced = false;
    if let Some((l1, l2)) = criticals {
        for lc in [l1, l2] {
            if in_band(lambda, lc) {
                forced = true;
                if let Some(x_t) = tangency_location(lc) {
                    merge_at_tangency(&mut count, x_t);
                }
            }
        }
    }
    let ti_count = count.simple.len() + count.tangencies.len();
    let regime = regime_from(ti_count, forced, !count.tangencies.is_empty());
    let mut roots = count.simple.clone();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(PhaseReport {
        model,
        k,
        lambda,
        regime,
        ti_count,
        wp_count: 0,
        roots,
        critical_values: criticals.map(|(lambda1, lambda2)| CriticalValues { lambda1, lambda2 }),
        brackets: count.brackets,
    })
}

/// Phase classification for the stick model from its scalar reduction.
pub fn classify_stick(k: u32, lambda: f64) -> Result<PhaseReport> {
    validate_k(k, 1)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            value: lambda,
            reason: "activity must be positive",
        });
    }
    let criticals = match critical_stick(k) {
        Ok(c) => Some(c),
        Err(Error::NoCriticalPoints(_)) => None,
        Err(e) => return Err(e),
    };
    let extrema = if criticals.is_some() {
        Some(stick_extrema(k)?)
    } else {
        None
    };
    classify_scalar_ti(
        Model::StickTi,
        k,
        lambda,
        |z| reductions::stick_f(z, k, lambda).unwrap_or(f64::INFINITY),
        criticals,
        |lc| {
            let (z1, z2) = extrema?;
            let (l1, l2) = criticals?;
            // lambda1 is attained at the larger extremum z2
            if (lc - l1).abs() <= (lc - l2).abs() {
                Some(z2)
            } else {
                Some(z1)
            }
        },
    )
}

/// Phase classification for the key model from its scalar reduction.
/// The regime is ruled by the certified count; the closed-form band is
/// reported alongside it.
pub fn classify_key(k: u32, lambda: f64) -> Result<PhaseReport> {
    validate_k(k, 2)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            value: lambda,
            reason: "activity must be positive",
        });
    }
    let criticals = match critical_key(k) {
        Ok(c) => Some(c),
        Err(Error::NegativeDiscriminant(_)) => None,
        Err(e) => return Err(e),
    };
    classify_scalar_ti(
        Model::KeyTi,
        k,
        lambda,
        |z| reductions::key_f(z, k, lambda).unwrap_or(f64::INFINITY),
        criticals,
        |_| None,
    )
}

/// Phase classification for the weakly periodic two-state model
/// (k = 2, i = 1). The translation-invariant solution is the unique
/// root of x^3 - x^2 - lambda on (1, inf); weakly periodic pairs are the
/// certified roots of the degree-six reduction, each verified to lift to
/// the full eight-component system.
pub fn classify_wp(lambda: f64) -> Result<PhaseReport> {
    if !(lambda > 0.0) {
        return Err(Error::Domain {
            value: lambda,
            reason: "activity must be positive",
        });
    }
    let (k, i) = (2u32, 1u32);
    let cubic = crate::roots::Polynomial::new(vec![-lambda, 0.0, -1.0, 1.0]);
    debug_assert_eq!(crate::roots::descartes_positive_bound(&cubic)?, 1);
    let cubic_hi = (2.0 * lambda.cbrt() + 4.0).max(4.0);
    let cfg = IsolationConfig::default();
    let ti_brs = isolate_roots(|x| cubic.eval(x), 1.0, cubic_hi, &cfg)?;
    let ti_sign: Vec<_> = ti_brs
        .iter()
        .filter(|b| b.certificate != Certificate::TangencyCandidate)
        .collect();
    if ti_sign.len() != 1 {
        return Err(Error::InvalidSpec(format!(
            "expected a unique translation-invariant root, found {}",
            ti_sign.len()
        )));
    }
    let x_ti = refine_root(|x| cubic.eval(x), ti_sign[0], 1e-12)?;

    let (x0, lambda_cr) = critical_wp()?;
    let p = reductions::h6(lambda);
    // Cauchy bound on the roots of the degree-six reduction
    let h6_hi = 1.0
        + p.coeffs()[..6]
            .iter()
            .map(|c| c.abs())
            .fold(0.0, f64::max);
    let brs = isolate_roots(|x| p.eval(x), 1.0, h6_hi.max(8.0), &cfg)?;
    let mut wp_roots = Vec::new();
    let mut tangencies = Vec::new();
    let mut brackets = Vec::new();
    for b in &brs {
        if b.certificate == Certificate::TangencyCandidate {
            tangencies.push(*b);
            brackets.push(*b);
        } else {
            wp_roots.push(refine_root(|x| p.eval(x), b, 1e-12)?);
            brackets.push(*b);
        }
    }
    let forced = in_band(lambda, lambda_cr);
    if forced {
        let mut count = ScalarCount {
            simple: wp_roots,
            tangencies,
            brackets,
        };
        merge_at_tangency(&mut count, x0);
        wp_roots = count.simple;
        tangencies = count.tangencies;
        brackets = count.brackets;
    }

    // every recovered pair must back-solve the eight-component system
    for &x in &wp_roots {
        let y = reductions::f_i2(x, lambda)?;
        let z1 = (x - 1.0) / lambda;
        let z2 = (y - 1.0) / lambda;
        let z8 = crate::systems::wp_lift(z1, z2, z1, z2, k, i, lambda)?;
        let r = crate::systems::wp8_residual(z8, k, i, lambda)?;
        if r > 1e-10 {
            return Err(Error::InvalidSpec(format!(
                "weakly periodic root {x} fails the full-system residual: {r}"
            )));
        }
    }

    let wp_count = wp_roots.len() + tangencies.len();
    let regime = regime_from(1 + wp_count, forced, !tangencies.is_empty());
    let mut roots = vec![x_ti];
    roots.extend(wp_roots.iter().copied());
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(PhaseReport {
        model: Model::WpIndex4,
        k,
        lambda,
        regime,
        ti_count: 1,
        wp_count,
        roots,
        critical_values: Some(CriticalValues {
            lambda1: lambda_cr,
            lambda2: lambda_cr,
        }),
        brackets,
    })
}

/// Classify one activity for any model.
pub fn classify(model: Model, k: u32, lambda: f64) -> Result<PhaseReport> {
    match model {
        Model::StickTi => classify_stick(k, lambda),
        Model::KeyTi => classify_key(k, lambda),
        Model::WpIndex4 => {
            if k != 2 {
                return Err(Error::InvalidSpec(format!(
                    "the weakly periodic model is defined for k = 2, got {k}"
                )));
            }
            classify_wp(lambda)
        }
    }
}

/// One report per grid activity, ordered by activity.
pub fn sweep(model: Model, k: u32, grid: &[f64]) -> Result<Vec<PhaseReport>> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("empty activity grid".into()));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidSpec(
            "activity grid must be strictly increasing".into(),
        ));
    }
    grid.iter().map(|&l| classify(model, k, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_wp_recovers_tangency() {
        let (x0, lcr) = critical_wp().unwrap();
        assert!((x0 - 2.0).abs() < 1e-9, "x0 = {x0}");
        assert!((lcr - 4.0).abs() < 1e-9, "lcr = {lcr}");
    }

    #[test]
    fn critical_stick_matches_reported_decimals() {
        let cases = [
            (5u32, 0.880_047_854_3, 1.078_094_055),
            (6, 0.665_588_726_7, 1.207_665_883),
            (7, 0.466_197_598_7, 1.347_647_46),
        ];
        for (k, l1, l2) in cases {
            let (a, b) = critical_stick(k).unwrap();
            assert!((a - l1).abs() < 1e-6, "k={k}: {a}");
            assert!((b - l2).abs() < 1e-6, "k={k}: {b}");
        }
    }

    #[test]
    fn critical_stick_small_k_has_none() {
        for k in [1u32, 2, 3, 4] {
            assert!(matches!(
                critical_stick(k),
                Err(Error::NoCriticalPoints(_))
            ));
        }
    }

    #[test]
    fn stick_regimes_around_the_band() {
        let (l1, l2) = critical_stick(5).unwrap();
        let r = classify_stick(5, 0.5).unwrap();
        assert_eq!(r.regime, Regime::Unique);
        assert_eq!(r.ti_count, 1);
        let r = classify_stick(5, 1.0).unwrap();
        assert_eq!(r.regime, Regime::Multiple);
        assert_eq!(r.ti_count, 3);
        let r = classify_stick(5, 2.0 * l2).unwrap();
        assert_eq!(r.regime, Regime::Unique);
        let r = classify_stick(5, l1).unwrap();
        assert_eq!(r.regime, Regime::Critical, "{r:?}");
        assert_eq!(r.ti_count, 2, "{r:?}");
        let r = classify_stick(5, l2).unwrap();
        assert_eq!(r.regime, Regime::Critical, "{r:?}");
        assert_eq!(r.ti_count, 2, "{r:?}");
    }

    #[test]
    fn stick_small_k_unique() {
        for k in [2u32, 3, 4] {
            for lam in [0.01, 1.0, 7.3, 100.0] {
                let r = classify_stick(k, lam).unwrap();
                assert_eq!(r.regime, Regime::Unique, "k={k} lam={lam}");
                assert_eq!(r.ti_count, 1);
            }
        }
    }

    #[test]
    fn near_critical_counts_bracket_the_tangency() {
        let (l1, _) = critical_stick(5).unwrap();
        let below = classify_stick(5, l1 - 1e-6).unwrap();
        let above = classify_stick(5, l1 + 1e-6).unwrap();
        assert_eq!(below.ti_count, 1, "{below:?}");
        assert_eq!(above.ti_count, 3, "{above:?}");
    }

    #[test]
    fn key_small_k_unique() {
        for k in [2u32, 3] {
            for lam in [0.1, 1.0, 10.0] {
                let r = classify_key(k, lam).unwrap();
                assert_eq!(r.regime, Regime::Unique, "k={k} lam={lam}");
                assert_eq!(r.ti_count, 1);
                assert!(r.critical_values.is_none());
            }
        }
    }

    #[test]
    fn key_unique_outside_band() {
        let (l1, l2) = critical_key(4).unwrap();
        for lam in [0.5 * l1, 2.0 * l2] {
            let r = classify_key(4, lam).unwrap();
            assert_eq!(r.regime, Regime::Unique, "lam={lam}: {r:?}");
            assert_eq!(r.ti_count, 1);
        }
    }

    #[test]
    fn wp_theorem_counts() {
        let r = classify_wp(3.0).unwrap();
        assert_eq!(r.regime, Regime::Unique);
        assert_eq!((r.ti_count, r.wp_count), (1, 0));

        let r = classify_wp(4.0).unwrap();
        assert_eq!(r.regime, Regime::Critical, "{r:?}");
        assert_eq!((r.ti_count, r.wp_count), (1, 1), "{r:?}");

        let r = classify_wp(5.0).unwrap();
        assert_eq!(r.regime, Regime::Multiple);
        assert_eq!((r.ti_count, r.wp_count), (1, 2), "{r:?}");
        // frozen root locations at lambda = 5
        assert!(r.roots.iter().any(|&x| (x - 1.381_966_011_3).abs() < 1e-8));
        assert!(r.roots.iter().any(|&x| (x - 3.618_033_988_7).abs() < 1e-8));
    }

    #[test]
    fn wp_band_edges_are_critical() {
        for lam in [4.0 - 1e-10, 4.0 + 1e-10] {
            let r = classify_wp(lam).unwrap();
            assert_eq!(r.regime, Regime::Critical, "lam={lam}: {r:?}");
            assert_eq!(r.ti_count + r.wp_count, 2, "lam={lam}: {r:?}");
        }
    }

    #[test]
    fn wp_ti_root_frozen() {
        // x^3 - x^2 - 4 has the exact root 2
        let r = classify_wp(4.0).unwrap();
        assert!(r.roots.iter().any(|&x| (x - 2.0).abs() < 1e-11), "{r:?}");
    }

    #[test]
    fn sweep_regime_pattern_stick() {
        let reports = sweep(
            Model::StickTi,
            5,
            &[0.5, 0.880_047_855_784_047_7, 1.0, 1.078_094_053_603_498_6, 1.2],
        )
        .unwrap();
        let regimes: Vec<Regime> = reports.iter().map(|r| r.regime).collect();
        assert_eq!(
            regimes,
            vec![
                Regime::Unique,
                Regime::Critical,
                Regime::Multiple,
                Regime::Critical,
                Regime::Unique
            ],
            "{reports:?}"
        );
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        assert!(sweep(Model::WpIndex4, 2, &[]).is_err());
        assert!(sweep(Model::WpIndex4, 2, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn classify_dispatch() {
        assert!(classify(Model::WpIndex4, 3, 1.0).is_err());
        assert!(classify(Model::WpIndex4, 2, 1.0).is_ok());
        assert!(classify(Model::StickTi, 5, 1.0).is_ok());
    }
}
