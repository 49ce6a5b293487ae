//! The key model's closed-form critical band and what certified
//! counting actually finds there.
//!
//! For k >= 4 the activity curve phi1 derived from the key system has
//! two extrema with closed-form values (the band below). Certified
//! root isolation of the scalar fixed-point map, however, finds a single
//! fixed point at every sampled activity, including the band midpoint;
//! the two results are printed side by side rather than reconciled.

use hctree::phase::classify_key;
use hctree::reductions::{key_d1, key_extrema, key_lambda_cr, key_phi1};

fn main() -> hctree::Result<()> {
    for k in 2..=6u32 {
        println!("k = {k}: D1 = {}", key_d1(k));
    }

    let k = 4;
    let (zp, zm) = key_extrema(k)?;
    let (l1, l2) = key_lambda_cr(k)?;
    println!("\nk = {k} extrema: z = {zm:.10} and {zp:.10}");
    println!("closed-form band: [{l1:.10}, {l2:.10}]");
    println!(
        "direct evaluation at the extrema: {:.10} and {:.10}",
        key_phi1(zp, k)?,
        key_phi1(zm, k)?
    );

    println!("\ncertified fixed-point counts:");
    for lambda in [0.5 * l1, 0.5 * (l1 + l2), 2.0 * l2] {
        let r = classify_key(k, lambda)?;
        println!(
            "  lambda = {lambda:.6}: {} fixed point(s), regime {}",
            r.ti_count, r.regime
        );
    }
    Ok(())
}
