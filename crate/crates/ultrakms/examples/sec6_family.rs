// The worked infinite family end to end.
//
// One sink-free ultragraph: a vertex w emitting edges f_i with full range,
// an infinite emitter B, and chained edges e_i with N(e_i) = d, N(f_i) =
// a^i. KMS states exist iff 3 d_beta^2/(1 - d_beta) <= 1 (with d_beta =
// d^(-beta)/(1 - d^(-beta))) and sum a^(-i beta) converges; then they form
// an interval in the w-mass m_w.

use ultrakms::graph::Ultragraph;
use ultrakms::scalar::{format_sig, Scalar};
use ultrakms::sec6::{
    dbeta, exact_b_condition, kms_states_sec6, paper_b_condition, sec6_lattice, Sec6KmsFamily,
};
use ultrakms::state::{verify_kms_m, EdgeWeightN, ScaledWeightM};

fn main() {
    let g = Ultragraph::sec6();
    let (d, a) = (Scalar::from_int(2), Scalar::from_int(2));

    // the sufficient condition from the source analysis vs the exact one;
    // both flip between beta = 1.7 and beta = 1.9 for d = 2
    for b in [1.5f64, 1.7, 1.75, 1.9, 2.5] {
        let beta = Scalar::Float(b);
        let paper = paper_b_condition(&d, &beta).unwrap();
        let exact = exact_b_condition(&d, &beta).unwrap();
        println!(
            "beta {b}: d_beta = {} paper-condition {} exact-condition {}",
            format_sig(dbeta(&d, &beta).map(|x| x.to_f64()).unwrap_or(f64::INFINITY), 6),
            paper.holds,
            exact.holds,
        );
    }

    // below the threshold the family is empty, with the failing inequality
    match kms_states_sec6(&d, &a, &Scalar::Float(1.5)) {
        Sec6KmsFamily::Empty { reason } => println!("beta 1.5: EMPTY ({reason})"),
        _ => unreachable!(),
    }

    // at beta = 2 everything is rational: the interval and one state
    let beta = Scalar::from_int(2);
    let family = kms_states_sec6(&d, &a, &beta);
    let Sec6KmsFamily::Interval { ref d_beta, ref series, ref mw_min } = family else {
        unreachable!()
    };
    println!("beta 2: d_beta = {d_beta} series = {series} m_w in [{mw_min}, 1]");

    let m = family.state(&Scalar::ratio(1, 2), 40).unwrap();
    println!(
        "m_w = 1/2: m(B) = {} m(v1) = {} m(v4) = {}",
        m.emitters[&ultrakms::graph::SEC6_EMITTER_B],
        m.vertices[&ultrakms::graph::VertexId(1)],
        m.vertices[&ultrakms::graph::VertexId(4)],
    );

    // verify m1-m4 exactly over the family lattice
    let n = EdgeWeightN::Sec6 { d, a };
    let mm = ScaledWeightM::new(n, beta);
    let report = verify_kms_m(&g, &m, &mm, &sec6_lattice(&g, 9), 8, 30, 0.0).unwrap();
    print!("{}", report.render());
    assert!(report.all_pass());

    // outside the interval the construction refuses
    assert!(family.state(&Scalar::ratio(1, 5), 40).is_err());
    println!("m_w = 1/5 rejected: below the admissible minimum");
}
