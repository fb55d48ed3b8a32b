//! Builds one admissible point of every catalog family and checks it.

use dqp::brackets::check_quasi_poisson;
use dqp::catalog;
use serde_json::json;

fn main() {
    let points = [
        ("free1", json!({"mu": "1/2"})),
        ("nilpotent_free1", json!({"k": 3})),
        ("q1", json!({"case": "1b", "gamma": "2", "phi": "3/8", "alpha": "1"})),
        ("q1_fusion", json!({"delta": 1, "gamma": "1"})),
        ("free2", json!({"case": 5})),
        ("nilpotent_sum", json!({"orders": [3, 5]})),
        ("vdb_quiver", json!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"], ["b", "2", "2"]]})),
        ("surface", json!({"genus": 1, "boundaries": 0})),
    ];
    for (name, params) in points {
        let fam = catalog::family(name).expect("known family");
        match catalog::build(name, &params) {
            Ok(b) => {
                let qp = check_quasi_poisson(&b.bracket).expect("checkable");
                println!("{:<16} {:<5} {} generators, qp {}", fam.name, b.algebra().num_vertices(), b.algebra().num_generators(), qp.passed);
            }
            Err(e) => println!("{:<16} rejected: {e}", fam.name),
        }
    }
    // inadmissible parameters are refused with the violated constraint
    println!("{}", catalog::build("free1", &json!({"mu": "1"})).unwrap_err());
}
