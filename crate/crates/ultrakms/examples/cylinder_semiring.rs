// The semi-ring of cylinder sets on the shift space of the infinite family.
//
// Basis cylinders are (stem ; base ; excluded edges) with the base either a
// single minimal emitter or a finite-emission set. Refinement splits a
// general base, intersection lands back in the basis, and a difference is a
// finite disjoint union of basis cylinders.

use ultrakms::graph::Ultragraph;
use ultrakms::parse::{parse_cylinder, parse_general_cylinder};
use ultrakms::shift::{
    check_partition, cyl_diff, cyl_intersect, refine_general, theta_apply, Intersection, Letter,
};

fn main() {
    let g = Ultragraph::sec6();

    // D_{(f1, G0)} has the mixed base G0 = {v1,v2,v3} union B; refining it
    // yields one emitter piece and three vertex pieces
    let (stem, base) = parse_general_cylinder(&g, "(f1 ; r(f1) ; )").unwrap();
    let pieces = refine_general(&g, stem, &base);
    for p in &pieces {
        println!("piece {}", p.display(&g));
    }

    // intersecting two basis cylinders stays in the basis
    let c1 = parse_cylinder(&g, "( ; B ; )").unwrap();
    let c2 = parse_cylinder(&g, "( ; B ; e4)").unwrap();
    match cyl_intersect(&g, &c1, &c2) {
        Intersection::Single(c) => println!("intersection {}", c.display(&g)),
        Intersection::Empty => println!("intersection empty"),
        Intersection::Pieces(cs) => println!("intersection in {} pieces", cs.len()),
    }

    // a set difference splits into finitely many basis cylinders; the
    // partition checker walks sampled points and verifies exclusive coverage
    let parts = cyl_diff(&g, &c1, &c2).unwrap();
    for p in &parts {
        println!("diff piece {}", p.display(&g));
    }
    let bad = check_partition(&g, &c1, &[c2], &parts, 6, 30);
    assert!(bad.is_none(), "difference must partition the remainder");
    println!("difference partitions D_(B) minus D_(B;e4)");

    // the partial action: theta_e1 maps D_(B) onto the cylinder with stem e1
    let moved = theta_apply(&g, &[Letter::Forward(g.edge_by_name("e1").unwrap())], &c1).unwrap();
    println!("theta_e1 D_(B) = {}", moved.display(&g));
}
