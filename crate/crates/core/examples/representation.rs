//! Identities on representation spaces: the double Jacobi identity, the
//! quasi-Poisson identity, and a numeric moment-map check with inverses.

use dqp::catalog;
use dqp::representation::{jacobiator_check, moment_map_numeric_check, qp_rep_check, DimVector, TupleSelection};
use serde_json::json;

fn main() {
    let b = catalog::build("free2", &json!({"case": 2})).unwrap();
    for n in [1, 2, 3] {
        let dims = DimVector::uniform(b.algebra(), n).unwrap();
        let sel = TupleSelection::auto(&dims, 42);
        let jac = jacobiator_check(&b.bracket, &dims, &sel).unwrap();
        let qp = qp_rep_check(&b.bracket, &dims, &sel).unwrap();
        println!("N = {n}: jacobiator vanishes {} ({}), qp {} ({})", jac.passed, jac.checked, qp.passed, qp.checked);
    }

    let v = catalog::build("vdb_quiver", &json!({"vertices": ["1", "2"], "arrows": [["a", "1", "2"]]})).unwrap();
    let dims = DimVector::parse(v.algebra(), "1:2,2:1").unwrap();
    let r = moment_map_numeric_check(&v.bracket, v.moment_map.as_ref().unwrap(), &dims, 5, 42).unwrap();
    println!("moment map at (2,1): {} over {} evaluations", r.passed, r.checked);
}
