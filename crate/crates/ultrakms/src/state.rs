//! State functions m on the generalized-vertex lattice, edge weights N and
//! their scaled versions M(e) = N(e)^{-beta}, and the verifiers for the KMS
//! conditions m1-m4 and the ground-state conditions.

use std::collections::BTreeMap;

use crate::graph::{EdgeId, Emission, EmitterId, GeneralizedVertex, Ultragraph, VertexId};
use crate::report::{Report, Verdict};
use crate::scalar::Scalar;

#[derive(Debug, thiserror::Error)]
pub enum StateError {
    #[error("no value assigned to atom `{0}`")]
    MissingAtom(String),
    #[error("the lattice has no maximal element and no exhausting sequence was declared")]
    NoExhaustingSequence,
    #[error("m-function parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Edge weights N with N(e) > 1, either an explicit table or the built-in
/// family rule N(e_i) = d, N(f_i) = a^i.
#[derive(Debug, Clone)]
pub enum EdgeWeightN {
    Explicit(BTreeMap<EdgeId, Scalar>),
    Sec6 { d: Scalar, a: Scalar },
}

impl EdgeWeightN {
    /// Explicit table taken from the `weight` lines of a graph file.
    pub fn from_graph(g: &Ultragraph) -> Self {
        EdgeWeightN::Explicit(g.weights.clone())
    }

    pub fn uniform(g: &Ultragraph, value: Scalar) -> Self {
        let n = g.edge_count().expect("uniform weights need a finite graph");
        EdgeWeightN::Explicit((0..n).map(|i| (EdgeId(i), value.clone())).collect())
    }

    pub fn n(&self, e: EdgeId) -> Scalar {
        match self {
            EdgeWeightN::Explicit(map) => map
                .get(&e)
                .cloned()
                .unwrap_or_else(|| panic!("no weight for edge {}", e.0)),
            EdgeWeightN::Sec6 { d, a } => {
                let i = e.0 / 2 + 1;
                if e.0 % 2 == 0 {
                    d.clone()
                } else {
                    a.powi(i as i64)
                }
            }
        }
    }

    /// N(mu) = prod N(e_i); N of the empty path is 1.
    pub fn path(&self, edges: &[EdgeId]) -> Scalar {
        edges
            .iter()
            .fold(Scalar::one(), |acc, &e| acc * self.n(e))
    }
}

/// M(e) = N(e)^{-beta}, with multiplicative extension to paths. Exact when
/// N(e) is rational and beta an exact integer.
#[derive(Debug, Clone)]
pub struct ScaledWeightM {
    pub n: EdgeWeightN,
    pub beta: Scalar,
}

impl ScaledWeightM {
    pub fn new(n: EdgeWeightN, beta: Scalar) -> Self {
        ScaledWeightM { n, beta }
    }

    pub fn edge(&self, e: EdgeId) -> Scalar {
        self.n.n(e).pow(&-self.beta.clone())
    }

    pub fn path(&self, edges: &[EdgeId]) -> Scalar {
        edges
            .iter()
            .fold(Scalar::one(), |acc, &e| acc * self.edge(e))
    }
}

/// Values on atoms: minimal-emitter refs and individual finite-emission
/// vertices. `tails` carries, per emitter atom, the exact value of the full
/// series sum over all of its (infinitely many) outgoing edges, enabling the
/// closed-form m3 check; without it the verdict is PASS-AT-DEPTH.
#[derive(Debug, Clone, Default)]
pub struct MFunction {
    pub emitters: BTreeMap<EmitterId, Scalar>,
    pub vertices: BTreeMap<VertexId, Scalar>,
    pub tails: BTreeMap<EmitterId, Scalar>,
}

impl MFunction {
    fn vertex(&self, g: &Ultragraph, v: VertexId) -> Result<Scalar, StateError> {
        self.vertices
            .get(&v)
            .cloned()
            .ok_or_else(|| StateError::MissingAtom(g.vertex_name(v)))
    }

    fn emitter(&self, g: &Ultragraph, m: EmitterId) -> Result<Scalar, StateError> {
        self.emitters
            .get(&m)
            .cloned()
            .ok_or_else(|| StateError::MissingAtom(g.emitter_name(m)))
    }

    /// Evaluation on any generalized vertex: finite part plus emitter parts,
    /// with inclusion-exclusion over the (finite) pairwise-and-higher
    /// intersections of distinct minimal emitters.
    pub fn m_eval(&self, g: &Ultragraph, gv: &GeneralizedVertex) -> Result<Scalar, StateError> {
        let gv = g.canonicalize_gv(gv);
        let mut total = Scalar::zero();
        for &v in &gv.finite {
            total = total + self.vertex(g, v)?;
        }
        let ems: Vec<EmitterId> = gv.emitters.iter().copied().collect();
        for mask in 1u32..(1 << ems.len()) {
            let members: Vec<EmitterId> = ems
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &m)| m)
                .collect();
            if members.len() == 1 {
                total = total + self.emitter(g, members[0])?;
                continue;
            }
            // intersection of >= 2 distinct emitters is a finite vertex set
            let mut meet = g.emitter_intersection(members[0], members[1]);
            meet.retain(|&v| members[2..].iter().all(|&m| g.emitter_contains(m, v)));
            let mut value = Scalar::zero();
            for v in meet {
                value = value + self.vertex(g, v)?;
            }
            if members.len() % 2 == 0 {
                total = total - value;
            } else {
                total = total + value;
            }
        }
        Ok(total)
    }

    /// One series term M(e) * m(r(e)).
    pub fn term(&self, g: &Ultragraph, mm: &ScaledWeightM, e: EdgeId) -> Result<Scalar, StateError> {
        Ok(mm.edge(e) * self.m_eval(g, &g.range(e))?)
    }

    /// Full series sum over eps(A) when available in closed form: emitter
    /// parts via `tails`, finite part exactly. `None` when a tail is missing.
    pub fn series(
        &self,
        g: &Ultragraph,
        mm: &ScaledWeightM,
        gv: &GeneralizedVertex,
    ) -> Result<Option<Scalar>, StateError> {
        let gv = g.canonicalize_gv(gv);
        let mut total = Scalar::zero();
        for m in &gv.emitters {
            match self.tails.get(m) {
                Some(t) => total = total + t.clone(),
                None => return Ok(None),
            }
        }
        for &v in &gv.finite {
            for e in g.out_edges(v).expect("finite part with infinite emission") {
                total = total + self.term(g, mm, e)?;
            }
        }
        Ok(Some(total))
    }
}

/// a <= b within tol; exact comparison when tol is zero.
fn le_tol(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    if tol == 0.0 {
        a <= b
    } else {
        a.to_f64() <= b.to_f64() + tol
    }
}

fn residual_line(report: &mut Report, name: &str, witness: String, residual: Scalar, tol: f64) {
    let pass = residual.abs().close_to(&Scalar::zero(), tol);
    report.push(
        name,
        if pass { Verdict::Pass } else { Verdict::Fail },
        format!("{witness} residual={residual}"),
    );
}

/// Checks m1 (normalization at the top element), m2 (the fixed-point identity
/// on finite-emission sets), m3 (the series bound on infinite emitters, all
/// |F| <= fbound plus the closed-form tail when present) and m4 (additivity on
/// all pairs). `bound` caps the enumeration of infinite edge families.
pub fn verify_kms_m(
    g: &Ultragraph,
    m: &MFunction,
    mm: &ScaledWeightM,
    lattice: &[GeneralizedVertex],
    fbound: usize,
    bound: usize,
    tol: f64,
) -> Result<Report, StateError> {
    let mut report = Report::new(tol);
    let top = g.top().ok_or(StateError::NoExhaustingSequence)?;
    residual_line(
        &mut report,
        "m1",
        g.gv_display(&top),
        m.m_eval(g, &top)? - Scalar::one(),
        tol,
    );
    for a in lattice {
        let a = g.canonicalize_gv(a);
        if a.is_empty() {
            continue;
        }
        match g.emission(&a) {
            Emission::Finite(edges) => {
                let mut rhs = Scalar::zero();
                for e in edges {
                    rhs = rhs + m.term(g, mm, e)?;
                }
                residual_line(
                    &mut report,
                    "m2",
                    g.gv_display(&a),
                    m.m_eval(g, &a)? - rhs,
                    tol,
                );
            }
            Emission::Infinite => {
                let ma = m.m_eval(g, &a)?;
                let mut terms = Vec::new();
                for e in g.emission_bounded(&a, bound) {
                    terms.push(m.term(g, mm, e)?);
                }
                terms.sort_by(|x, y| y.partial_cmp(x).expect("NaN term"));
                let fsum: Scalar = terms.into_iter().take(fbound).sum();
                let finite_ok = le_tol(&fsum, &ma, tol);
                match m.series(g, mm, &a)? {
                    Some(s) => {
                        let ok = finite_ok && le_tol(&s, &ma, tol);
                        report.push(
                            "m3",
                            if ok { Verdict::Pass } else { Verdict::Fail },
                            format!("{} series={} m={}", g.gv_display(&a), s, ma),
                        );
                    }
                    None => {
                        report.push(
                            "m3",
                            if finite_ok {
                                Verdict::PassAtDepth
                            } else {
                                Verdict::Fail
                            },
                            format!("{} fsum={} m={}", g.gv_display(&a), fsum, ma),
                        );
                    }
                }
            }
        }
    }
    for (i, a) in lattice.iter().enumerate() {
        for b in &lattice[i + 1..] {
            let u = g.gv_union(a, b);
            let n = g.gv_intersect(a, b);
            let res = m.m_eval(g, &u)? + m.m_eval(g, &n)? - m.m_eval(g, a)? - m.m_eval(g, b)?;
            residual_line(
                &mut report,
                "m4",
                format!("{}|{}", g.gv_display(a), g.gv_display(b)),
                res,
                tol,
            );
        }
    }
    Ok(report)
}

/// Ground-state conditions: gm1 normalization, gm2 vanishing on
/// finite-emission sets, gm3 additivity.
pub fn verify_ground_m(
    g: &Ultragraph,
    m: &MFunction,
    lattice: &[GeneralizedVertex],
    tol: f64,
) -> Result<Report, StateError> {
    let mut report = Report::new(tol);
    let top = g.top().ok_or(StateError::NoExhaustingSequence)?;
    residual_line(
        &mut report,
        "gm1",
        g.gv_display(&top),
        m.m_eval(g, &top)? - Scalar::one(),
        tol,
    );
    for a in lattice {
        let a = g.canonicalize_gv(a);
        if a.is_empty() {
            continue;
        }
        if let Emission::Finite(_) = g.emission(&a) {
            residual_line(&mut report, "gm2", g.gv_display(&a), m.m_eval(g, &a)?, tol);
        }
    }
    for (i, a) in lattice.iter().enumerate() {
        for b in &lattice[i + 1..] {
            let u = g.gv_union(a, b);
            let n = g.gv_intersect(a, b);
            let res = m.m_eval(g, &u)? + m.m_eval(g, &n)? - m.m_eval(g, a)? - m.m_eval(g, b)?;
            residual_line(
                &mut report,
                "gm3",
                format!("{}|{}", g.gv_display(a), g.gv_display(b)),
                res,
                tol,
            );
        }
    }
    Ok(report)
}

/// m-function file format: `atom <name> <decimal|p/q>` per line, plus
/// optional `tail <emitter> <value>` lines carrying closed-form series sums.
pub fn load_mfunction(g: &Ultragraph, input: &str) -> Result<MFunction, StateError> {
    let mut m = MFunction::default();
    for (lineno, raw) in input.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap();
        let (name, value) = match (parts.next(), parts.next()) {
            (Some(n), Some(v)) => (n, v),
            _ => {
                return Err(StateError::Parse {
                    line: lineno,
                    msg: format!("expected `{kind} <name> <value>`"),
                })
            }
        };
        let value: Scalar = value.parse().map_err(|_| StateError::Parse {
            line: lineno,
            msg: format!("bad value `{value}`"),
        })?;
        let emitter = g.emitters().into_iter().find(|&e| g.emitter_name(e) == name);
        match kind {
            "atom" => match emitter {
                Some(e) => {
                    m.emitters.insert(e, value);
                }
                None => {
                    let v = g.vertex_by_name(name).map_err(|_| StateError::Parse {
                        line: lineno,
                        msg: format!("unknown atom `{name}`"),
                    })?;
                    m.vertices.insert(v, value);
                }
            },
            "tail" => match emitter {
                Some(e) => {
                    m.tails.insert(e, value);
                }
                None => {
                    return Err(StateError::Parse {
                        line: lineno,
                        msg: format!("tail for non-emitter `{name}`"),
                    })
                }
            },
            other => {
                return Err(StateError::Parse {
                    line: lineno,
                    msg: format!("unrecognized directive `{other}`"),
                })
            }
        }
    }
    Ok(m)
}

pub fn write_mfunction(g: &Ultragraph, m: &MFunction) -> String {
    let mut out = String::new();
    for (&e, v) in &m.emitters {
        out.push_str(&format!("atom {} {}\n", g.emitter_name(e), v));
    }
    for (&v, val) in &m.vertices {
        out.push_str(&format!("atom {} {}\n", g.vertex_name(v), val));
    }
    for (&e, v) in &m.tails {
        out.push_str(&format!("tail {} {}\n", g.emitter_name(e), v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{SEC6_EMITTER_B, SEC6_EMITTER_W};

    /// The section-6 witness d=2, a=2, beta=2, m(w)=1/2: d_beta=1/3,
    /// m(B)=1/4, m(v_{3q+r}) = (1/3)^{q+1}/4, with exact tails.
    fn witness(n_vertices: usize) -> (Ultragraph, MFunction, ScaledWeightM) {
        let g = Ultragraph::sec6();
        let d_beta = Scalar::ratio(1, 3);
        let m_b = Scalar::ratio(1, 4);
        let mut m = MFunction::default();
        m.emitters.insert(SEC6_EMITTER_W, Scalar::ratio(1, 2));
        m.emitters.insert(SEC6_EMITTER_B, m_b.clone());
        for i in 1..=n_vertices {
            let q = (i - 1) / 3;
            m.vertices
                .insert(VertexId(i), d_beta.powi(q as i64 + 1) * m_b.clone());
        }
        // tail(B) = 3 m_B d_beta^2 / (1 - d_beta) = 1/8
        m.tails.insert(SEC6_EMITTER_B, Scalar::ratio(1, 8));
        // tail(w) = S * m(G0) = (1/3)(1/2) = 1/6
        m.tails.insert(SEC6_EMITTER_W, Scalar::ratio(1, 6));
        let mm = ScaledWeightM::new(
            EdgeWeightN::Sec6 {
                d: Scalar::from_int(2),
                a: Scalar::from_int(2),
            },
            Scalar::from_int(2),
        );
        (g, m, mm)
    }

    fn sec6_lattice(g: &Ultragraph, n: usize) -> Vec<GeneralizedVertex> {
        let mut out = vec![
            GeneralizedVertex::from_emitter(SEC6_EMITTER_W),
            GeneralizedVertex::from_emitter(SEC6_EMITTER_B),
            g.range(g.edge_by_name("f1").unwrap()),
            g.top().unwrap(),
        ];
        for i in 1..=n {
            out.push(GeneralizedVertex::from_vertices([VertexId(i)]));
        }
        out
    }

    #[test]
    fn m_eval_example_values() {
        let (g, m, _) = witness(12);
        let g0 = g.range(g.edge_by_name("f1").unwrap());
        assert_eq!(m.m_eval(&g, &g0).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(m.m_eval(&g, &g.top().unwrap()).unwrap(), Scalar::one());
        assert_eq!(
            m.m_eval(&g, &GeneralizedVertex::empty()).unwrap(),
            Scalar::zero()
        );
        assert_eq!(
            m.m_eval(&g, &GeneralizedVertex::from_vertices([VertexId(4)]))
                .unwrap(),
            Scalar::ratio(1, 36)
        );
    }

    #[test]
    fn kms_witness_passes_exactly() {
        let (g, m, mm) = witness(33);
        let report = verify_kms_m(&g, &m, &mm, &sec6_lattice(&g, 12), 8, 30, 0.0).unwrap();
        assert!(report.all_pass(), "{}", report.render());
        // tails present, so no PASS-AT-DEPTH downgrades
        assert!(!report.render().contains("PASS-AT-DEPTH"));
    }

    #[test]
    fn zero_m_fails_m1() {
        let g = Ultragraph::sec6();
        let mut m = MFunction::default();
        m.emitters.insert(SEC6_EMITTER_W, Scalar::zero());
        m.emitters.insert(SEC6_EMITTER_B, Scalar::zero());
        for i in 1..=3 {
            m.vertices.insert(VertexId(i), Scalar::zero());
        }
        let mm = ScaledWeightM::new(
            EdgeWeightN::Sec6 {
                d: Scalar::from_int(2),
                a: Scalar::from_int(2),
            },
            Scalar::from_int(2),
        );
        let report = verify_kms_m(&g, &m, &mm, &[], 4, 8, 0.0).unwrap();
        assert!(report.render().contains("CHECK m1 FAIL"));
    }

    #[test]
    fn perturbed_vertex_fails_m2() {
        let (g, mut m, mm) = witness(33);
        let old = m.vertices[&VertexId(4)].clone();
        m.vertices
            .insert(VertexId(4), old + Scalar::ratio(1, 100));
        let lattice = vec![GeneralizedVertex::from_vertices([VertexId(4)])];
        let report = verify_kms_m(&g, &m, &mm, &lattice, 4, 8, 0.0).unwrap();
        assert!(report.render().contains("CHECK m2 FAIL"), "{}", report.render());
    }

    #[test]
    fn ground_segment_passes() {
        let g = Ultragraph::sec6();
        for t in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::one()] {
            let mut m = MFunction::default();
            m.emitters.insert(SEC6_EMITTER_B, t.clone());
            m.emitters
                .insert(SEC6_EMITTER_W, Scalar::one() - t.clone());
            for i in 1..=12 {
                m.vertices.insert(VertexId(i), Scalar::zero());
            }
            let report = verify_ground_m(&g, &m, &sec6_lattice(&g, 12), 0.0).unwrap();
            assert!(report.all_pass(), "{}", report.render());
        }
    }

    #[test]
    fn ground_perturbation_fails() {
        let g = Ultragraph::sec6();
        let mut m = MFunction::default();
        m.emitters.insert(SEC6_EMITTER_B, Scalar::ratio(1, 2));
        m.emitters.insert(SEC6_EMITTER_W, Scalar::ratio(1, 2));
        for i in 1..=12 {
            m.vertices.insert(VertexId(i), Scalar::zero());
        }
        m.vertices.insert(VertexId(1), Scalar::ratio(1, 10));
        let lattice = vec![GeneralizedVertex::from_vertices([VertexId(1)])];
        let report = verify_ground_m(&g, &m, &lattice, 0.0).unwrap();
        assert!(report.render().contains("CHECK gm2 FAIL"));
    }

    #[test]
    fn mfunction_roundtrip() {
        let (g, m, _) = witness(6);
        let text = write_mfunction(&g, &m);
        let back = load_mfunction(&g, &text).unwrap();
        assert_eq!(back.emitters, m.emitters);
        assert_eq!(back.vertices, m.vertices);
        assert_eq!(back.tails, m.tails);
    }

    #[test]
    fn missing_atom_reported() {
        let (g, m, _) = witness(3);
        let res = m.m_eval(&g, &GeneralizedVertex::from_vertices([VertexId(9)]));
        assert!(matches!(res, Err(StateError::MissingAtom(ref n)) if n == "v9"));
    }
}
