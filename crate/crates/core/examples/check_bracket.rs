//! Reads a bundle from JSON and runs the structural checks on it.

use dqp::brackets::{check_cyclic_antisymmetry, check_quasi_poisson, check_typing};
use dqp::json::bundle_from_str;

const DOC: &str = r#"{
  "algebra": {
    "idempotents": ["1", "2"],
    "generators": [{"name": "t", "tail": "1", "head": "2"}, {"name": "s", "tail": "2", "head": "1"}]
  },
  "bracket": {"pairs": [
    {"left": "t", "right": "t", "value": [{"coeff": "1", "w1": ["t", "s", "t"], "w2": ["t"]}, {"coeff": "-1", "w1": ["t"], "w2": ["t", "s", "t"]}]},
    {"left": "t", "right": "s", "value": [{"coeff": "1/2", "w1": ["s", "t"], "w2": ["e1"]}, {"coeff": "-1/2", "w1": ["e2"], "w2": ["t", "s"]}]}
  ]}
}"#;

fn main() {
    let b = bundle_from_str(DOC).expect("well-formed");
    for r in [check_typing(&b.bracket), check_cyclic_antisymmetry(&b.bracket, 50, 1).unwrap(), check_quasi_poisson(&b.bracket).unwrap()] {
        println!("{:<22} {} ({} checked)", r.name, if r.passed { "ok" } else { "FAILED" }, r.checked);
        for w in r.witnesses.iter().take(3) {
            println!("    {:?}: {}", w.inputs, w.residual);
        }
    }
}
