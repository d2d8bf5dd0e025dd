// State functions as files, and what the verifier reports.
//
// An m-function is a list of emitter atoms, vertex atoms, and tail sums.
// The verifier checks m1 (normalization), m2 (finite-emission balance), m3
// (emitter series), m4 (monotone pairs). Without a tail entry the series
// check can only be certified to the enumeration depth.

use ultrakms::graph::Ultragraph;
use ultrakms::scalar::Scalar;
use ultrakms::sec6::{kms_states_sec6, sec6_lattice};
use ultrakms::state::{
    load_mfunction, verify_kms_m, write_mfunction, EdgeWeightN, ScaledWeightM,
};

fn main() {
    let g = Ultragraph::sec6();
    let (d, a, beta) = (Scalar::from_int(2), Scalar::from_int(2), Scalar::from_int(2));
    let family = kms_states_sec6(&d, &a, &beta);
    let m = family.state(&Scalar::ratio(1, 2), 40).unwrap();

    // round trip through the text format
    let text = write_mfunction(&g, &m);
    print!("{text}");
    let back = load_mfunction(&g, &text).unwrap();
    assert_eq!(write_mfunction(&g, &back), text);

    let n = EdgeWeightN::Sec6 { d, a };
    let mm = ScaledWeightM::new(n, beta);
    let lattice = sec6_lattice(&g, 9);

    // with tails present, m3 is certified exactly
    let report = verify_kms_m(&g, &back, &mm, &lattice, 8, 30, 0.0).unwrap();
    assert!(report.all_pass());
    println!("with tails: all PASS at tol 0");

    // dropping the tails degrades m3 to PASS-AT-DEPTH, still not a failure
    let mut no_tails = back.clone();
    no_tails.tails.clear();
    let report = verify_kms_m(&g, &no_tails, &mm, &lattice, 8, 30, 0.0).unwrap();
    assert!(report.all_pass());
    for line in &report.lines {
        if line.name == "m3" {
            println!("CHECK m3 {} {}", line.verdict, line.witness);
        }
    }

    // a wrong atom is caught with a named witness
    let mut bad = back.clone();
    bad.vertices.insert(ultrakms::graph::VertexId(2), Scalar::ratio(1, 7));
    let report = verify_kms_m(&g, &bad, &mm, &lattice, 8, 30, 0.0).unwrap();
    assert!(!report.all_pass());
    for line in report.failures() {
        println!("CHECK {} FAIL {}", line.name, line.witness);
    }
}
