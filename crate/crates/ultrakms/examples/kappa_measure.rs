// The pre-measure kappa induced by a state function.
//
// kappa(D_{(beta,B),F}) = M(beta) m(B) - sum over e in F of M(beta e) m(r(e)).
// With an exact rational state every identity below closes with residual 0:
// finite additivity over a refinement and the scaling law
// kappa(theta_e(V)) = M(e) kappa(V).

use ultrakms::measure::KappaMeasure;
use ultrakms::parse::{parse_cylinder, parse_general_cylinder};
use ultrakms::report::Verdict;
use ultrakms::scalar::Scalar;
use ultrakms::sec6::kms_states_sec6;
use ultrakms::shift::{refine_general, Base, Cylinder};
use ultrakms::state::{EdgeWeightN, ScaledWeightM};
use ultrakms::graph::Ultragraph;
use std::collections::BTreeSet;

fn main() {
    let g = Ultragraph::sec6();
    let (d, a, beta) = (Scalar::from_int(2), Scalar::from_int(2), Scalar::from_int(2));
    let family = kms_states_sec6(&d, &a, &beta);
    let m = family.state(&Scalar::ratio(1, 2), 40).unwrap();
    let n = EdgeWeightN::Sec6 { d, a };
    let k = KappaMeasure::new(m, ScaledWeightM::new(n, beta));

    // measures of a few cylinders, all exact rationals
    for expr in ["( ; B ; )", "( ; B ; e4)", "(e1 ; B ; )", "(f1 ; r(f1) ; )"] {
        // a mixed base is not a basis shape but still has a kappa value
        let c = parse_cylinder(&g, expr).unwrap_or_else(|_| {
            let (stem, base) = parse_general_cylinder(&g, expr).unwrap();
            Cylinder {
                stem,
                base: Base::FiniteSet(base),
                excluded: BTreeSet::new(),
            }
        });
        println!("kappa {} = {}", c.display(&g), k.kappa(&g, &c).unwrap());
    }

    // additivity: the refinement of D_{(f1, G0)} carries the same mass
    let (stem, base) = parse_general_cylinder(&g, "(f1 ; r(f1) ; )").unwrap();
    let pieces = refine_general(&g, stem.clone(), &base);
    let whole = Cylinder {
        stem,
        base: Base::FiniteSet(base),
        excluded: BTreeSet::new(),
    };
    let (verdict, residual, witness) = k.check_additivity(&g, &whole, &pieces, 6, 30, 0.0).unwrap();
    assert_eq!(verdict, Verdict::Pass, "{witness}");
    println!("additivity over refine: residual = {residual}");

    // scaling under the partial action, exact at tol 0
    let c = parse_cylinder(&g, "( ; B ; )").unwrap();
    for e in ["e1", "f1", "f2"] {
        let eid = g.edge_by_name(e).unwrap();
        let (verdict, residual) = k.check_scaling(&g, eid, &c, 0.0).unwrap();
        assert_eq!(verdict, Verdict::Pass);
        println!("scaling theta_{e}: residual = {residual}");
    }
}
