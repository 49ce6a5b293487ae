//! Solve the two-state boundary-law recursion z = (1 + lambda z)^{-k}
//! and confirm the solution against exact finite-volume enumeration.

use hctree::model::{BuiltinGraph, ConstraintGraph};
use hctree::oracle::{check_consistency, TiLaw};
use hctree::systems::{solve_fixed_point, two_state_ti_map, FixedPointOptions};

fn main() -> hctree::Result<()> {
    let (k, lambda) = (2u32, 4.0);
    let z = solve_fixed_point(
        |z| Ok([two_state_ti_map(z[0], k, lambda)?]),
        [0.5],
        &FixedPointOptions::default(),
    )?[0];
    println!("k = {k}, lambda = {lambda}");
    println!("boundary law z = {z:.12} (exact value 1/4)");

    let graph = ConstraintGraph::builtin(BuiltinGraph::TwoState);
    for n in 1..=3 {
        let v = check_consistency(&graph, k, lambda, &TiLaw::TwoState(z), n)?;
        println!("depth {n} vs {}: max consistency violation {v:.3e}", n - 1);
    }

    // a perturbed law is not consistent: the check has power
    let v = check_consistency(&graph, k, lambda, &TiLaw::TwoState(z * 1.01), 2)?;
    println!("perturbed law violation {v:.3e} (should be large)");
    Ok(())
}
