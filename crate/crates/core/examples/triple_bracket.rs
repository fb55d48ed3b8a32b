//! Triple brackets against the quasi-Poisson anomaly term.

use dqp::brackets::{qp_anomaly, triple_bracket};
use dqp::catalog;
use serde_json::json;

fn main() {
    for mu in ["1/2", "1/3"] {
        let b = catalog::build_unchecked("free1", &json!({"mu": mu})).unwrap();
        let alg = b.algebra();
        let t = alg.parse_word_str("t").unwrap();
        let t2 = alg.parse_word_str("t t").unwrap();
        let tb = triple_bracket(&b.bracket, &t, &t2, &t).unwrap();
        let residual = tb.clone() - qp_anomaly(alg, &t, &t2, &t);
        println!("μ = {mu}");
        println!("  ⟪t,t²,t⟫ = {}", alg.fmt_t3(&tb));
        println!("  minus anomaly: {}", if residual.is_zero() { "0".to_string() } else { alg.fmt_t3(&residual) });
    }
}
