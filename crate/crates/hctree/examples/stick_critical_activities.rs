//! Critical activities of the stick model and the regime structure
//! around them: unique below the band, three solutions inside, unique
//! again above.

use hctree::phase::{classify_stick, critical_stick};

fn main() -> hctree::Result<()> {
    for k in 5..=7u32 {
        let (l1, l2) = critical_stick(k)?;
        println!("k = {k}: lambda1 = {l1:.10}, lambda2 = {l2:.10}");
    }

    let k = 5;
    let (l1, l2) = critical_stick(k)?;
    println!("\nregimes across the k = {k} band:");
    for lambda in [0.5 * l1, l1, 0.5 * (l1 + l2), l2, 2.0 * l2] {
        let r = classify_stick(k, lambda)?;
        println!(
            "  lambda = {lambda:.10}: {} ({} fixed points at {:?})",
            r.regime,
            r.ti_count,
            r.roots.iter().map(|x| (x * 1e6).round() / 1e6).collect::<Vec<_>>()
        );
    }

    // small orders never develop extrema: the activity curve is monotone
    for k in 2..=4u32 {
        assert!(critical_stick(k).is_err());
        let r = classify_stick(k, 1.0)?;
        println!("k = {k}: {} for every activity", r.regime);
    }
    Ok(())
}
