// KMS states of a finite ultragraph via the transfer matrix.
//
// A KMS_beta state corresponds to a nonnegative normalized fixed point of
// T_beta(v,u) = sum over edges e with s(e)=v, u in r(e) of N(e)^(-beta).
// The critical inverse temperature beta* is where the spectral radius of
// T_beta crosses 1.

use ultrakms::parse::load_ultragraph;
use ultrakms::scalar::{format_sig, Scalar};
use ultrakms::solver::{build_transfer, critical_beta, finite_lattice, solve_kms, spectral_radius};
use ultrakms::state::{verify_kms_m, write_mfunction, EdgeWeightN, ScaledWeightM};

fn main() {
    // two vertices, double edge v -> u and a return edge, all N(e) = 2
    let g = load_ultragraph(
        "vertices: v u\n\
         edge e1 v -> u\n\
         edge e2 v -> u\n\
         edge e3 u -> v\n\
         weight e1 2\nweight e2 2\nweight e3 2\n",
    )
    .unwrap();
    let n = EdgeWeightN::from_graph(&g);

    // below beta* the radius exceeds 1, above it drops under 1
    for b in [0.25, 0.5, 0.75] {
        let t = build_transfer(&g, &n, &Scalar::Float(b));
        let rho = spectral_radius(&t.to_f64(), 1e-12);
        println!("rho(T_{b}) = {}", format_sig(rho, 12));
    }
    let beta = critical_beta(&g, &n, 0.0, 64.0, 1e-10).unwrap();
    println!("beta* = {}", format_sig(beta, 12));

    // at beta* = 1/2 the fixed point is m(v) = 2 - sqrt(2), m(u) = sqrt(2) - 1
    let sol = solve_kms(&g, &n, &Scalar::Float(0.5), 1e-12);
    assert_eq!(sol.states.len(), 1);
    let m = &sol.states[0];
    print!("{}", write_mfunction(&g, m));

    // the solved state passes every KMS condition on the finite lattice
    let mm = ScaledWeightM::new(n.clone(), Scalar::Float(0.5));
    let report = verify_kms_m(&g, m, &mm, &finite_lattice(&g), 6, 30, 1e-9).unwrap();
    print!("{}", report.render());
    assert!(report.all_pass());

    // away from beta* there is no KMS state at all
    assert!(solve_kms(&g, &n, &Scalar::from_int(1), 1e-12).is_empty());
    println!("beta = 1: EMPTY");
}
