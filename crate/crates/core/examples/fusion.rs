//! Fuses the two vertices of a localized quiver and compares with the
//! one-vertex classification.

use dqp::catalog::{self, bundle_differences};
use dqp::fusion::{fuse, kappa_check};
use serde_json::json;

fn main() {
    let src = catalog::build("q1", &json!({"case": "1b", "gamma": "1", "alpha": "1/2", "moment_map": true})).unwrap();
    for (kept, absorbed) in [("1", "2"), ("2", "1")] {
        let (ctx, br, mm) = fuse(&src.bracket, src.moment_map.as_ref(), kept, absorbed).unwrap();
        let (kappa, classes) = kappa_check(&ctx, &src.bracket).unwrap();
        println!("fuse {absorbed} onto {kept}: kappa {} on {} triples, {} type classes", kappa.passed, kappa.checked, classes.len());
        let fused = dqp::brackets::Bundle::new(br, mm);
        for (s, phi) in fused.moment_map.as_ref().unwrap().components().iter().enumerate() {
            println!("  Φ_{} = {}", fused.algebra().label(s), fused.algebra().fmt_poly(phi));
        }
        let mu = if kept == "1" { "1/2" } else { "-1/2" };
        let target = catalog::build("free2", &json!({"case": 2, "mu": mu, "gamma": "1", "moment_map": true})).unwrap();
        let renamed = fused
            .with_generator_names(&[("inv_ts", "inv_a"), ("inv_st", "inv_b")])
            .and_then(|b| b.with_labels(&["1"]))
            .unwrap();
        let diffs = bundle_differences(&target, &renamed).unwrap();
        println!("  matches free2 case 2 with μ = {mu}: {}", diffs.is_empty());
        for d in diffs {
            println!("    {d}");
        }
    }
}
