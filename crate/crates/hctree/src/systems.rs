//! Boundary-law fixed-point systems.
//!
//! Translation-invariant boundary laws for a four-state constraint graph
//! are normalised so the law at the reference state 3 equals 1; the
//! remaining components `(z0, z1, z2)` satisfy a three-dimensional
//! consistency system generated from the adjacency rows. The two-state
//! graph reduces to a single scalar recursion. Weakly periodic laws with
//! an index-four subgroup live on eight components `z1..z8`, with a
//! four-component subsystem on `(z1, z2, z7, z8)` after elimination.

use crate::error::{Error, Result};
use crate::model::ConstraintGraph;

/// Options for damped fixed-point iteration.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointOptions {
    /// Step size in `z <- (1 - a) z + a F(z)`.
    pub damping: f64,
    /// Sup-norm convergence tolerance.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        FixedPointOptions {
            damping: 0.5,
            tol: 1e-12,
            max_iter: 100_000,
        }
    }
}

/// Scalar recursion for the two-state graph: `z' = (1 + lambda z)^{-k}`.
pub fn two_state_ti_map(z: f64, k: u32, lambda: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain {
            value: z,
            reason: "boundary-law component must be nonnegative",
        });
    }
    Ok((-(k as f64) * (lambda * z).ln_1p()).exp())
}

/// One step of the translation-invariant consistency map for a four-state
/// graph, with state 3 as the normalised reference state:
/// `z_i' = lambda * (sum_{j ~ i} zhat_j / sum_{j ~ 3} zhat_j)^k`
/// where `zhat = (z0, z1, z2, 1)`.
pub fn ti_map_generic(
    graph: &ConstraintGraph,
    k: u32,
    lambda: f64,
    z: [f64; 3],
) -> Result<[f64; 3]> {
    if graph.num_states() != 4 {
        return Err(Error::WrongStateCount {
            expected: 4,
            got: graph.num_states(),
        });
    }
    let zhat = [z[0], z[1], z[2], 1.0];
    let row = |i: usize| -> f64 {
        (0..4).filter(|&j| graph.admissible(i, j)).map(|j| zhat[j]).sum()
    };
    let den = row(3);
    if den == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let mut out = [0.0; 3];
    for (i, slot) in out.iter_mut().enumerate() {
        *slot = lambda * (row(i) / den).powi(k as i32);
    }
    Ok(out)
}

fn check_wp_index(k: u32, i: u32) -> Result<()> {
    if i < 1 || i > k + 1 {
        return Err(Error::LabelingInfeasible { i, k });
    }
    Ok(())
}

/// One step of the eight-component weakly periodic consistency map.
/// `i` is the size of the generator subset defining the index-four
/// subgroup; exponents split each vertex's k descendants into `i` (or
/// `i - 1`) subset directions and the rest.
pub fn wp8_map(z: [f64; 8], k: u32, i: u32, lambda: f64) -> Result<[f64; 8]> {
    check_wp_index(k, i)?;
    let p = |zj: f64, e: f64| (-e * (lambda * zj).ln_1p()).exp();
    let (fi, fk) = (i as f64, k as f64);
    let [z1, z2, z3, z4, z5, z6, z7, z8] = z;
    Ok([
        p(z4, fi) * p(z2, fk - fi),
        p(z6, fi) * p(z1, fk - fi),
        p(z4, fi - 1.0) * p(z2, fk - fi + 1.0),
        p(z3, fi - 1.0) * p(z7, fk - fi + 1.0),
        p(z6, fi - 1.0) * p(z1, fk - fi + 1.0),
        p(z5, fi - 1.0) * p(z8, fk - fi + 1.0),
        p(z5, fi) * p(z8, fk - fi),
        p(z3, fi) * p(z7, fk - fi),
    ])
}

/// Sup-norm residual of the eight-component system at `z`.
pub fn wp8_residual(z: [f64; 8], k: u32, i: u32, lambda: f64) -> Result<f64> {
    let fz = wp8_map(z, k, i, lambda)?;
    Ok(z
        .iter()
        .zip(fz.iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// Shared factor of the four-component map:
/// `w(a, b, c) = (1+la)^k / ((1+la)^{k/i} + l b^{1-1/i})^i / (1+lc)^{k-i}`.
fn wp4_w(a: f64, b: f64, c: f64, k: u32, i: u32, lambda: f64) -> f64 {
    let (fi, fk) = (i as f64, k as f64);
    let la = (lambda * a).ln_1p();
    let inner = (fk / fi * la).exp() + lambda * b.powf(1.0 - 1.0 / fi);
    (fk * la - fi * inner.ln() - (fk - fi) * (lambda * c).ln_1p()).exp()
}

/// One step of the four-component map on `(z1, z2, z7, z8)` obtained by
/// eliminating `z3..z6`. The diagonal `{z1 = z7, z2 = z8}` is invariant
/// bitwise: paired components are computed by the same expression on
/// identical arguments.
pub fn wp4_map(z: [f64; 4], k: u32, i: u32, lambda: f64) -> Result<[f64; 4]> {
    check_wp_index(k, i)?;
    let [z1, z2, z7, z8] = z;
    Ok([
        wp4_w(z7, z8, z2, k, i, lambda),
        wp4_w(z8, z7, z1, k, i, lambda),
        wp4_w(z1, z2, z8, k, i, lambda),
        wp4_w(z2, z1, z7, k, i, lambda),
    ])
}

/// Reconstruct the full eight-component law from `(z1, z2, z7, z8)`.
/// For `i = 1` the eliminated components are explicit; otherwise the
/// two decoupled pairs `(z3, z4)` and `(z5, z6)` are solved by damped
/// iteration.
pub fn wp_lift(
    z1: f64,
    z2: f64,
    z7: f64,
    z8: f64,
    k: u32,
    i: u32,
    lambda: f64,
) -> Result<[f64; 8]> {
    check_wp_index(k, i)?;
    let (fi, fk) = (i as f64, k as f64);
    let p = |zj: f64, e: f64| (-e * (lambda * zj).ln_1p()).exp();
    if i == 1 {
        return Ok([
            z1,
            z2,
            p(z2, fk),
            p(z7, fk),
            p(z1, fk),
            p(z8, fk),
            z7,
            z8,
        ]);
    }
    let opts = FixedPointOptions::default();
    let pair = |anchor_a: f64, anchor_b: f64| -> Result<(f64, f64)> {
        // x = p(y, i-1) p(anchor_a, k-i+1), y = p(x, i-1) p(anchor_b, k-i+1)
        let (mut x, mut y) = (0.5, 0.5);
        for _ in 0..opts.max_iter {
            let xn = p(y, fi - 1.0) * p(anchor_a, fk - fi + 1.0);
            let yn = p(x, fi - 1.0) * p(anchor_b, fk - fi + 1.0);
            let xd = (1.0 - opts.damping) * x + opts.damping * xn;
            let yd = (1.0 - opts.damping) * y + opts.damping * yn;
            if (xd - x).abs().max((yd - y).abs()) < opts.tol {
                return Ok((xd, yd));
            }
            x = xd;
            y = yd;
        }
        Err(Error::NoConvergence(opts.max_iter))
    };
    let (z3, z4) = pair(z2, z7)?;
    let (z5, z6) = pair(z1, z8)?;
    Ok([z1, z2, z3, z4, z5, z6, z7, z8])
}

/// Damped fixed-point iteration `z <- (1 - a) z + a F(z)` to sup-norm
/// tolerance.
pub fn solve_fixed_point<const N: usize, F>(
    map: F,
    start: [f64; N],
    opts: &FixedPointOptions,
) -> Result<[f64; N]>
where
    F: Fn([f64; N]) -> Result<[f64; N]>,
{
    let mut z = start;
    for _ in 0..opts.max_iter {
        let fz = map(z)?;
        let mut next = [0.0; N];
        let mut delta = 0.0_f64;
        let mut mag = 0.0_f64;
        for j in 0..N {
            next[j] = (1.0 - opts.damping) * z[j] + opts.damping * fz[j];
            delta = delta.max((next[j] - z[j]).abs());
            mag = mag.max(next[j].abs());
        }
        z = next;
        // tolerance scales with the iterate: large laws cannot settle
        // below rounding noise in absolute terms
        if delta < opts.tol * (1.0 + mag) {
            return Ok(z);
        }
    }
    Err(Error::NoConvergence(opts.max_iter))
}
