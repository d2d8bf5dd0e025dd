// Ground states live on the minimal infinite emitters.
//
// A ground state puts all its mass on minimal infinite emitters and zero on
// every vertex atom, so a finite ultragraph has none, while the built-in
// family carries a segment parametrized by the split between w and B.

use ultrakms::graph::Ultragraph;
use ultrakms::parse::load_ultragraph;
use ultrakms::scalar::Scalar;
use ultrakms::sec6::{ground_states_sec6, sec6_lattice};
use ultrakms::solver::{solve_ground, GroundDescription};
use ultrakms::state::verify_ground_m;

fn main() {
    // finite graph: no infinite emitters, no ground states
    let fin = load_ultragraph("vertices: v u\nedge e1 v -> u\nedge e2 u -> v\n").unwrap();
    assert_eq!(solve_ground(&fin).unwrap(), GroundDescription::Empty);
    println!("finite graph: EMPTY");

    // the family: a simplex over the emitters {w}, B
    let g = Ultragraph::sec6();
    match solve_ground(&g).unwrap() {
        GroundDescription::Simplex { emitters } => {
            let names: Vec<String> = emitters.iter().map(|&m| g.emitter_name(m)).collect();
            println!("family: simplex over [{}]", names.join(" "));
        }
        GroundDescription::Empty => unreachable!(),
    }

    // every point of the segment m(B) = t, m({w}) = 1 - t verifies gm1-gm3
    let lattice = sec6_lattice(&g, 9);
    for t in [Scalar::zero(), Scalar::ratio(1, 3), Scalar::one()] {
        let m = ground_states_sec6(&t, 40);
        let report = verify_ground_m(&g, &m, &lattice, 0.0).unwrap();
        assert!(report.all_pass(), "{}", report.render());
        println!("t = {t}: ground conditions PASS (exact)");
    }

    // perturbing a vertex atom off zero breaks gm2
    let mut bad = ground_states_sec6(&Scalar::ratio(1, 3), 40);
    bad.vertices
        .insert(ultrakms::graph::VertexId(1), Scalar::ratio(1, 1000));
    let report = verify_ground_m(&g, &bad, &lattice, 0.0).unwrap();
    assert!(!report.all_pass());
    for line in report.failures() {
        println!("perturbed: CHECK {} FAIL {}", line.name, line.witness);
    }
}
