//! Certified real-root isolation and refinement for scalar functions on an
//! interval. Every count produced by the phase module goes through this
//! machinery: a root is only counted when it sits in a bracket with a sign
//! change (or a Descartes certificate), and near-double roots are reported
//! as tangency candidates instead of being guessed at.

use crate::error::{Error, Result};
use num::BigRational;

/// What justifies the claim that a bracket contains a root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certificate {
    /// f(lo) and f(hi) have opposite signs.
    SignChange,
    /// Descartes bound on the interval equals one.
    DescartesOne,
    /// A dip of |f| to (near) zero without a resolvable sign change.
    /// Carries no uniqueness guarantee; phase classification treats it
    /// as a double root.
    TangencyCandidate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
    pub certificate: Certificate,
}

/// Dense real polynomial, ascending coefficient order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Trims trailing (near-)zero leading coefficients exactly equal to zero.
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![0.0]);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * i as f64)
            .collect();
        Polynomial::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }
}

/// Exact Horner evaluation over the rationals, for regression anchors.
pub fn eval_rational(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let zero = BigRational::from_integer(0.into());
    coeffs.iter().rev().fold(zero, |acc, c| acc * x + c)
}

/// Number of sign changes in the coefficient sequence: an upper bound,
/// matching parity, on the number of positive real roots.
pub fn descartes_positive_bound(p: &Polynomial) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut changes = 0usize;
    let mut last: Option<bool> = None;
    for &c in p.coeffs() {
        if c == 0.0 {
            continue;
        }
        let pos = c > 0.0;
        if let Some(prev) = last {
            if prev != pos {
                changes += 1;
            }
        }
        last = Some(pos);
    }
    Ok(changes)
}

/// Controls for [`isolate_roots`].
#[derive(Debug, Clone, Copy)]
pub struct IsolationConfig {
    /// Number of initial grid cells.
    pub subdivisions: usize,
    /// Geometric instead of arithmetic grid spacing (requires lo > 0).
    pub log_spaced: bool,
    /// Recursion depth when chasing a sign change inside a dip of |f|.
    pub max_depth: u32,
    /// Absolute |f| threshold (times local scale) below which an
    /// unresolved dip is reported as a tangency candidate.
    pub tangency_tol: f64,
}

impl Default for IsolationConfig {
    fn default() -> Self {
        IsolationConfig {
            subdivisions: 4096,
            log_spaced: false,
            max_depth: 60,
            tangency_tol: 1e-8,
        }
    }
}

fn grid_point(lo: f64, hi: f64, i: usize, n: usize, log_spaced: bool) -> f64 {
    if i == 0 {
        return lo;
    }
    if i == n {
        return hi;
    }
    let t = i as f64 / n as f64;
    if log_spaced {
        (lo.ln() + t * (hi.ln() - lo.ln())).exp()
    } else {
        lo + t * (hi - lo)
    }
}

/// Golden-section minimisation of |f| on [a, b]; returns (x, |f(x)|).
fn minimize_abs<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c).abs();
    let mut fd = f(d).abs();
    for _ in 0..200 {
        if (b - a).abs() <= f64::EPSILON * (a.abs() + b.abs() + 1.0) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c).abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d).abs();
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x).abs())
}

/// Chase a possible root pair or tangency inside a dip cell where the
/// endpoint signs agree. Repeatedly rescans a shrinking window around
/// the minimum of |f|; a sign change found at any level yields certified
/// brackets, otherwise a near-zero bottom is flagged as a tangency.
fn resolve_dip<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    cfg: &IsolationConfig,
    out: &mut Vec<RootBracket>,
) {
    const SCAN: usize = 64;
    let scale = fa.abs().max(fb.abs()).max(1.0);
    let (mut lo, mut hi) = (a, b);
    for _ in 0..cfg.max_depth {
        let xs: Vec<f64> = (0..=SCAN)
            .map(|j| lo + (hi - lo) * j as f64 / SCAN as f64)
            .collect();
        let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let mut found = false;
        for j in 0..SCAN {
            let (u, v) = (vs[j], vs[j + 1]);
            if u == 0.0 {
                continue;
            }
            if v != 0.0 && u.signum() != v.signum() {
                out.push(RootBracket {
                    lo: xs[j],
                    hi: xs[j + 1],
                    certificate: Certificate::SignChange,
                });
                found = true;
            }
        }
        if found {
            return;
        }
        // shrink around the smallest |f| sample
        let (jmin, _) = vs
            .iter()
            .enumerate()
            .min_by(|(_, p), (_, q)| p.abs().partial_cmp(&q.abs()).unwrap())
            .unwrap();
        let new_lo = xs[jmin.saturating_sub(1)];
        let new_hi = xs[(jmin + 1).min(SCAN)];
        if (new_hi - new_lo) <= f64::EPSILON * (new_lo.abs() + new_hi.abs() + 1.0) {
            lo = new_lo;
            hi = new_hi;
            break;
        }
        lo = new_lo;
        hi = new_hi;
    }
    let (x, fmin) = minimize_abs(f, lo, hi);
    if fmin <= cfg.tangency_tol * scale {
        let w = (hi - lo).max(1e-12);
        out.push(RootBracket {
            lo: (x - 0.5 * w).max(a),
            hi: (x + 0.5 * w).min(b),
            certificate: Certificate::TangencyCandidate,
        });
    }
}

/// Isolate the real roots of `f` on [lo, hi] by grid scan plus adaptive
/// bisection. Brackets are disjoint and sorted left to right; tangency
/// candidates (double-root suspects) are flagged, not counted as two.
pub fn isolate_roots<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &IsolationConfig,
) -> Result<Vec<RootBracket>> {
    if !(lo < hi) {
        return Err(Error::InvalidSpec(format!("bad interval [{lo}, {hi}]")));
    }
    if cfg.log_spaced && lo <= 0.0 {
        return Err(Error::InvalidSpec("log spacing requires lo > 0".into()));
    }
    let n = cfg.subdivisions.max(2);
    // nudge endpoints off exact zeros
    let mut xs: Vec<f64> = (0..=n).map(|i| grid_point(lo, hi, i, n, cfg.log_spaced)).collect();
    let mut vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    if vs[0] == 0.0 {
        xs[0] = lo + (xs[1] - lo) * 1e-9;
        vs[0] = f(xs[0]);
    }
    if vs[n] == 0.0 {
        xs[n] = hi - (hi - xs[n - 1]) * 1e-9;
        vs[n] = f(xs[n]);
    }

    let mut out = Vec::new();
    let mut i = 0usize;
    while i < n {
        let (a, b, fa, fb) = (xs[i], xs[i + 1], vs[i], vs[i + 1]);
        if fa == 0.0 {
            // grid hit a root exactly: bracket it with its neighbours
            out.push(RootBracket {
                lo: if i == 0 { a } else { xs[i - 1] },
                hi: b,
                certificate: Certificate::SignChange,
            });
            i += 1;
            continue;
        }
        if fb != 0.0 && fa.signum() != fb.signum() {
            out.push(RootBracket { lo: a, hi: b, certificate: Certificate::SignChange });
            i += 1;
            continue;
        }
        // interior local minimum of |f|: candidate for a pair of close
        // roots or a tangency
        if i > 0 && i + 2 <= n {
            let dip = vs[i].abs() < vs[i - 1].abs() && vs[i + 1].abs() < vs[i + 2].abs();
            let is_local_min = dip && vs[i].abs().min(vs[i + 1].abs()) < vs[i - 1].abs().min(vs[i + 2].abs());
            if is_local_min && fb != 0.0 && fa.signum() == fb.signum() {
                resolve_dip(&f, a, b, fa, fb, cfg, &mut out);
                i += 1;
                continue;
            }
        }
        i += 1;
    }
    // merge duplicates from dip recursion overlapping adjacent cells
    out.sort_by(|p, q| p.lo.partial_cmp(&q.lo).unwrap());
    out.dedup_by(|b, a| {
        a.certificate == b.certificate && (b.lo - a.lo).abs() < f64::EPSILON * (1.0 + a.lo.abs())
    });
    Ok(out)
}

/// Bisection refinement of a certified bracket to absolute tolerance `tol`.
pub fn refine_root<F: Fn(f64) -> f64>(f: F, bracket: &RootBracket, tol: f64) -> Result<f64> {
    match bracket.certificate {
        Certificate::SignChange | Certificate::DescartesOne => {}
        Certificate::TangencyCandidate => return Err(Error::CertificateViolated),
    }
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = f(a);
    if fa == 0.0 {
        return Ok(a);
    }
    let fb = f(b);
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::CertificateViolated);
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= tol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Certified count of fixed points of `f` on (lo, hi): roots of f(x) - x.
#[derive(Debug, Clone)]
pub struct FixedPointCount {
    /// Number of certified simple roots.
    pub count: usize,
    pub brackets: Vec<RootBracket>,
    /// Tangency candidates, reported separately.
    pub tangencies: Vec<RootBracket>,
}

pub fn count_fixed_points<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &IsolationConfig,
) -> Result<FixedPointCount> {
    let g = |x: f64| f(x) - x;
    let all = isolate_roots(g, lo, hi, cfg)?;
    let (brackets, tangencies): (Vec<_>, Vec<_>) = all
        .into_iter()
        .partition(|b| b.certificate != Certificate::TangencyCandidate);
    Ok(FixedPointCount { count: brackets.len(), brackets, tangencies })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(lambda: f64) -> Polynomial {
        // x^3 - x^2 - lambda
        Polynomial::new(vec![-lambda, 0.0, -1.0, 1.0])
    }

    #[test]
    fn descartes_cubic_has_one_change() {
        for lambda in [0.5, 1.0, 4.0, 100.0] {
            assert_eq!(descartes_positive_bound(&cubic(lambda)).unwrap(), 1);
        }
    }

    #[test]
    fn descartes_constant_is_zero() {
        let p = Polynomial::new(vec![5.0]);
        assert_eq!(descartes_positive_bound(&p).unwrap(), 0);
    }

    #[test]
    fn descartes_zero_polynomial_errors() {
        let p = Polynomial::new(vec![0.0]);
        assert!(descartes_positive_bound(&p).is_err());
    }

    #[test]
    fn refine_cubic_root_at_two() {
        let p = cubic(4.0);
        let brackets = isolate_roots(|x| p.eval(x), 1.0, 3.0, &IsolationConfig::default()).unwrap();
        assert_eq!(brackets.len(), 1);
        let r = refine_root(|x| p.eval(x), &brackets[0], 1e-13).unwrap();
        assert!((r - 2.0).abs() < 1e-12, "r = {r}");
    }

    #[test]
    fn refine_cubic_root_lambda_one() {
        let p = cubic(1.0);
        let brackets = isolate_roots(|x| p.eval(x), 1.0, 2.0, &IsolationConfig::default()).unwrap();
        assert_eq!(brackets.len(), 1);
        let r = refine_root(|x| p.eval(x), &brackets[0], 1e-12).unwrap();
        assert!((r - 1.465_571_231_9).abs() < 1e-9, "r = {r}");
    }

    #[test]
    fn refine_rejects_bad_certificate() {
        let b = RootBracket { lo: 0.5, hi: 1.5, certificate: Certificate::SignChange };
        // x^2 + 1 has no root; endpoint signs agree
        assert!(matches!(
            refine_root(|x| x * x + 1.0, &b, 1e-10),
            Err(Error::CertificateViolated)
        ));
    }

    #[test]
    fn tangency_candidate_detected_for_perfect_square() {
        // (x-2)^2 touches zero at x = 2
        let f = |x: f64| (x - 2.0) * (x - 2.0);
        let brackets = isolate_roots(f, 1.0, 3.1, &IsolationConfig::default()).unwrap();
        assert_eq!(brackets.len(), 1, "{brackets:?}");
        assert_eq!(brackets[0].certificate, Certificate::TangencyCandidate);
        assert!(brackets[0].lo <= 2.0 && 2.0 <= brackets[0].hi);
    }

    #[test]
    fn close_pair_resolved_by_dip_recursion() {
        // roots at 2 +/- 1e-5, far below the grid resolution
        let f = |x: f64| (x - 2.0 - 1e-5) * (x - 2.0 + 1e-5);
        let brackets = isolate_roots(f, 1.0, 3.1, &IsolationConfig::default()).unwrap();
        let signs = brackets
            .iter()
            .filter(|b| b.certificate == Certificate::SignChange)
            .count();
        assert_eq!(signs, 2, "{brackets:?}");
    }

    #[test]
    fn sign_change_brackets_reevaluate() {
        let p = cubic(7.0);
        let f = |x: f64| p.eval(x);
        for b in isolate_roots(f, 1.0, 5.0, &IsolationConfig::default()).unwrap() {
            if b.certificate == Certificate::SignChange {
                assert!(f(b.lo) * f(b.hi) < 0.0);
            }
        }
    }

    #[test]
    fn exact_rational_eval() {
        use num::BigInt;
        let r = |n: i64| BigRational::from_integer(BigInt::from(n));
        // x^2 - 4 at x = 2 is exactly 0
        let coeffs = vec![r(-4), r(0), r(1)];
        assert_eq!(eval_rational(&coeffs, &r(2)), r(0));
    }
}
