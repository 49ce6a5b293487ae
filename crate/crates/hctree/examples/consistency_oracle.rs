//! Exact finite-volume enumeration as an independent check on every
//! boundary law the library produces: translation-invariant laws for the
//! stick and key graphs, and a weakly periodic law on the index-four
//! coset structure. Each solved law must make depth-n and depth-(n-1)
//! marginals agree; a perturbed law must not.

use hctree::model::{BuiltinGraph, ConstraintGraph};
use hctree::oracle::{check_consistency, wp_consistency_check, TiLaw};
use hctree::reductions::f_i2;
use hctree::systems::{
    solve_fixed_point, ti_map_generic, wp_lift, FixedPointOptions,
};

fn main() -> hctree::Result<()> {
    let (k, lambda) = (2u32, 1.0);
    let opts = FixedPointOptions::default();

    for graph in [BuiltinGraph::Stick, BuiltinGraph::Key] {
        let g = ConstraintGraph::builtin(graph);
        let z = solve_fixed_point(
            |z| ti_map_generic(&g, k, lambda, z),
            [1.0; 3],
            &opts,
        )?;
        println!("{graph} law at k = {k}, lambda = {lambda}: {z:?}");
        for n in 1..=2 {
            let v = check_consistency(&g, k, lambda, &TiLaw::FourState(z), n)?;
            println!("  depth {n} vs {}: max violation {v:.3e}", n - 1);
        }
        let bad = TiLaw::FourState([z[0] * 1.02, z[1], z[2]]);
        let v = check_consistency(&g, k, lambda, &bad, 2)?;
        println!("  perturbed law violation {v:.3e} (should be large)");
    }

    // weakly periodic pair for the two-state model at lambda = 5,
    // lifted to all eight components of the coset system
    let lambda = 5.0;
    let x = 0.5 * (5.0 - 5.0f64.sqrt());
    let y = f_i2(x, lambda)?;
    let z1 = (x - 1.0) / lambda;
    let z2 = (y - 1.0) / lambda;
    let z = wp_lift(z1, z2, z1, z2, 2, 1, lambda)?;
    println!("\nweakly periodic law at lambda = {lambda}: {z:?}");
    for n in 2..=3 {
        let v = wp_consistency_check(2, 1, lambda, &z, n)?;
        println!("  depth {n} vs {}: max violation {v:.3e}", n - 1);
    }
    let mut bad = z;
    bad[6] *= 1.05;
    let v = wp_consistency_check(2, 1, lambda, &bad, 2)?;
    println!("  perturbed law violation {v:.3e} (should be large)");
    Ok(())
}
