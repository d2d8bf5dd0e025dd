// The lattice of generalized vertices for the built-in infinite family.
//
// G0 is generated by the vertices and the ranges of edges under finite
// unions and intersections. Sets containing an infinite emitter stay in
// canonical form: minimal emitter references plus a disjoint finite part.

use ultrakms::graph::{EdgeId, GeneralizedVertex, Ultragraph, VertexId};

fn main() {
    let g = Ultragraph::sec6();

    // r(f1) = G0 = {v1, v2, v3} union B, stored as the emitter B plus
    // the three vertices B misses
    let rf1 = g.range(EdgeId(1));
    println!("r(f1)      = {}", g.gv_display(&rf1));

    // r(e1) = {v1} union B
    let re1 = g.range(EdgeId(0));
    println!("r(e1)      = {}", g.gv_display(&re1));

    // r(e4) = {v1, v4} is finite: no emitter survives canonicalization
    let re4 = g.range(EdgeId(6));
    println!("r(e4)      = {}", g.gv_display(&re4));

    // lattice operations keep canonical form
    let both = g.gv_intersect(&re1, &re4);
    println!("r(e1)&r(e4) = {}", g.gv_display(&both));
    let joined = g.gv_union(&re4, &GeneralizedVertex::from_vertices([VertexId(0)]));
    println!("r(e4)|{{w}}  = {}", g.gv_display(&joined));

    // decomposition into minimal emitters and the finite remainder
    let d = g.decompose(&rf1);
    let parts: Vec<String> = d.minimal_parts.iter().map(|&m| g.emitter_name(m)).collect();
    let fin: Vec<String> = d.finite_part.iter().map(|&v| g.vertex_name(v)).collect();
    println!("decompose r(f1): minimal [{}], finite [{}]", parts.join(" "), fin.join(" "));

    // the top element F0 = {w} union G0 and the (RFUM) sanity check
    let top = g.top().unwrap();
    println!("top        = {}", g.gv_display(&top));
    g.check_rfum(8).expect("family satisfies (RFUM)");
    println!("(RFUM) holds to depth 8");
}
