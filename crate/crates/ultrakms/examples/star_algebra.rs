// The spanning elements s_mu p_A s_nu^* and the KMS functional check.
//
// Products of spanning elements reduce back to spanning elements (or zero).
// The functional phi(s_mu p_A s_nu^*) = delta_{mu,nu} N(mu)^(-beta) m(A
// cap r(mu)) is checked against the KMS scalar condition on all pairs up to
// a path length, plus the vertex decompositions p_v = sum s_e s_e^*.

use ultrakms::parse::load_ultragraph;
use ultrakms::scalar::Scalar;
use ultrakms::solver::solve_kms;
use ultrakms::star::{adjoint, kms_check, multiply, spanning_elements, StateFunctional};
use ultrakms::state::EdgeWeightN;

fn main() {
    let g = load_ultragraph(
        "vertices: v u\n\
         edge e1 v -> u\n\
         edge e2 v -> u\n\
         edge e3 u -> v\n\
         weight e1 2\nweight e2 2\nweight e3 2\n",
    )
    .unwrap();
    let n = EdgeWeightN::from_graph(&g);

    // a few products in the algebra
    let elems = spanning_elements(&g, 2);
    println!("{} spanning elements up to length 2", elems.len());
    let x = &elems[1];
    let xstar = adjoint(x);
    println!("x      = {}", x.display(&g));
    println!("x* x   = {}", multiply(&g, &xstar, x).display(&g));
    println!("x x*   = {}", multiply(&g, x, &xstar).display(&g));

    // the KMS_{1/2} state from the transfer matrix, pushed through phi
    let beta = Scalar::Float(0.5);
    let sol = solve_kms(&g, &n, &beta, 1e-12);
    let m = sol.states[0].clone();
    let phi = StateFunctional { m: m.clone(), n: n.clone(), beta: beta.clone() };
    for e in &elems[..4.min(elems.len())] {
        println!("phi({}) = {}", e.display(&g), phi.phi_eval(&g, e).unwrap());
    }

    // zero violations across all pairs up to length 3
    let report = kms_check(&g, &m, &n, &beta, 3, 1e-12).unwrap();
    print!("{}", report.render());
    assert!(report.all_pass());

    // nudging one atom produces a concrete violating pair
    let mut bad = m.clone();
    let (v0, a0) = bad.vertices.iter().next().map(|(k, v)| (*k, v.clone())).unwrap();
    bad.vertices.insert(v0, a0 + Scalar::Float(1e-3));
    let report = kms_check(&g, &bad, &n, &beta, 3, 1e-12).unwrap();
    assert!(!report.all_pass());
    for line in report.failures() {
        println!("perturbed: CHECK {} FAIL {}", line.name, line.witness);
    }
}
