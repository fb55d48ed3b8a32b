//! Surface group algebras, assembled directly and by fusing blocks.

use dqp::brackets::{check_moment_map, check_quasi_poisson, MomentCheckMode};
use dqp::catalog::{bundle_differences, surface, surface_by_fusion, SurfaceSpec};

fn main() {
    for spec in [SurfaceSpec::new(1, 0), SurfaceSpec::new(1, 1), SurfaceSpec::weighted(0, 2, vec![3, 2])] {
        let b = surface(&spec).unwrap();
        let qp = check_quasi_poisson(&b.bracket).unwrap();
        let mm = check_moment_map(&b.bracket, b.moment_map.as_ref().unwrap(), &MomentCheckMode::Symbolic).unwrap();
        let same = surface_by_fusion(&spec).map(|f| bundle_differences(&b, &f).map(|d| d.is_empty()));
        println!("{spec:?}: qp {} moment map {} fusion agrees {:?}", qp.passed, mm.passed, same.map(|r| r.unwrap_or(false)));
        println!("  Φ = {}", b.algebra().fmt_poly(&b.moment_map.as_ref().unwrap().total()));
    }
}
