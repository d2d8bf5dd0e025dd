//! Ultragraphs, the generalized-vertex lattice and minimal infinite emitters.
//!
//! An ultragraph is a directed graph whose edges point at *sets* of vertices.
//! Two backends are supported: finite explicit graphs, and presented infinite
//! families (currently the built-in `sec6` family, see [`crate::sec6`]).
//! Elements of the generalized-vertex lattice are kept in canonical form: a
//! finite set of minimal-infinite-emitter references plus a finite vertex set
//! disjoint from all of them.

use std::collections::BTreeSet;
use std::fmt;

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

/// Reference to a declared minimal infinite emitter of a presented family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EmitterId(pub usize);

#[derive(Debug, thiserror::Error)]
pub enum GraphError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("sink detected: vertex `{0}` emits no edge")]
    SinkDetected(String),
    #[error("edge `{0}` has empty range")]
    EmptyRange(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("RFUM violation at edge `{0}`: range uses an undeclared minimal infinite emitter")]
    RfumViolation(String),
    #[error("cannot certify edge `{0}` within enumeration depth {1}")]
    UndecidableAtDepth(String, usize),
}

#[derive(Debug, Clone)]
pub struct FiniteEdge {
    pub name: String,
    pub source: VertexId,
    pub range: BTreeSet<VertexId>,
}

#[derive(Debug, Clone)]
pub struct FiniteGraph {
    pub vertex_names: Vec<String>,
    pub edges: Vec<FiniteEdge>,
}

/// The Section 6 family: vertex 0 is `w`, vertex `i >= 1` is `v_i`; edge
/// `2(i-1)` is `e_i` (source `v_i`), edge `2(i-1)+1` is `f_i` (source `w`).
/// Emitter 0 is the singleton `{w}`, emitter 1 is `B = {v_4, v_5, ...}`.
#[derive(Debug, Clone)]
pub struct Sec6Family {
    /// Declared minimal infinite emitters. Defaults to both; a truncated list
    /// makes `check_rfum` report a violation.
    pub declared: BTreeSet<EmitterId>,
}

pub const SEC6_EMITTER_W: EmitterId = EmitterId(0);
pub const SEC6_EMITTER_B: EmitterId = EmitterId(1);

impl Default for Sec6Family {
    fn default() -> Self {
        Sec6Family {
            declared: [SEC6_EMITTER_W, SEC6_EMITTER_B].into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Backend {
    Finite(FiniteGraph),
    Sec6(Sec6Family),
}

#[derive(Debug, Clone)]
pub struct Ultragraph {
    backend: Backend,
    /// Edge weights N(e) from `weight` lines, when present (finite graphs).
    pub weights: std::collections::BTreeMap<EdgeId, Scalar>,
}

/// Canonical element of the generalized-vertex lattice.
///
/// Invariants: `finite` is disjoint from every emitter in `emitters`, and no
/// vertex of `finite` is itself an (declared) infinite emitter.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedVertex {
    pub emitters: BTreeSet<EmitterId>,
    pub finite: BTreeSet<VertexId>,
}

impl GeneralizedVertex {
    pub fn empty() -> Self {
        GeneralizedVertex {
            emitters: BTreeSet::new(),
            finite: BTreeSet::new(),
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexId>>(vs: I) -> Self {
        GeneralizedVertex {
            emitters: BTreeSet::new(),
            finite: vs.into_iter().collect(),
        }
    }

    pub fn from_emitter(e: EmitterId) -> Self {
        GeneralizedVertex {
            emitters: [e].into_iter().collect(),
            finite: BTreeSet::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.emitters.is_empty() && self.finite.is_empty()
    }

    /// True when the emission of this set is finite, i.e. no emitter part.
    pub fn has_finite_emission(&self) -> bool {
        self.emitters.is_empty()
    }
}

pub enum Emission {
    Finite(Vec<EdgeId>),
    Infinite,
}

/// Unique decomposition of a generalized vertex into minimal infinite
/// emitters plus a finite-emission finite part. With the canonical
/// representation this is a field read-out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub minimal_parts: Vec<EmitterId>,
    pub finite_part: BTreeSet<VertexId>,
}

impl Ultragraph {
    pub fn finite(graph: FiniteGraph) -> Result<Self, GraphError> {
        let g = Ultragraph {
            backend: Backend::Finite(graph),
            weights: Default::default(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn sec6() -> Self {
        Ultragraph {
            backend: Backend::Sec6(Sec6Family::default()),
            weights: Default::default(),
        }
    }

    pub fn sec6_with_declared(declared: BTreeSet<EmitterId>) -> Self {
        Ultragraph {
            backend: Backend::Sec6(Sec6Family { declared }),
            weights: Default::default(),
        }
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.backend, Backend::Finite(_))
    }

    fn validate(&self) -> Result<(), GraphError> {
        if let Backend::Finite(g) = &self.backend {
            for e in &g.edges {
                if e.range.is_empty() {
                    return Err(GraphError::EmptyRange(e.name.clone()));
                }
            }
            for (i, name) in g.vertex_names.iter().enumerate() {
                if !g.edges.iter().any(|e| e.source == VertexId(i)) {
                    return Err(GraphError::SinkDetected(name.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_name(&self, v: VertexId) -> String {
        match &self.backend {
            Backend::Finite(g) => g.vertex_names[v.0].clone(),
            Backend::Sec6(_) => {
                if v.0 == 0 {
                    "w".to_string()
                } else {
                    format!("v{}", v.0)
                }
            }
        }
    }

    pub fn edge_name(&self, e: EdgeId) -> String {
        match &self.backend {
            Backend::Finite(g) => g.edges[e.0].name.clone(),
            Backend::Sec6(_) => {
                let i = e.0 / 2 + 1;
                if e.0 % 2 == 0 {
                    format!("e{i}")
                } else {
                    format!("f{i}")
                }
            }
        }
    }

    pub fn emitter_name(&self, m: EmitterId) -> String {
        match &self.backend {
            Backend::Finite(_) => format!("E{}", m.0),
            Backend::Sec6(_) => {
                if m == SEC6_EMITTER_W {
                    "w".to_string()
                } else {
                    "B".to_string()
                }
            }
        }
    }

    pub fn vertex_by_name(&self, name: &str) -> Result<VertexId, GraphError> {
        match &self.backend {
            Backend::Finite(g) => g
                .vertex_names
                .iter()
                .position(|n| n == name)
                .map(VertexId)
                .ok_or_else(|| GraphError::UnknownVertex(name.to_string())),
            Backend::Sec6(_) => {
                if name == "w" {
                    return Ok(VertexId(0));
                }
                if let Some(i) = name.strip_prefix('v').and_then(|s| s.parse::<usize>().ok()) {
                    if i >= 1 {
                        return Ok(VertexId(i));
                    }
                }
                Err(GraphError::UnknownVertex(name.to_string()))
            }
        }
    }

    pub fn edge_by_name(&self, name: &str) -> Result<EdgeId, GraphError> {
        match &self.backend {
            Backend::Finite(g) => g
                .edges
                .iter()
                .position(|e| e.name == name)
                .map(EdgeId)
                .ok_or_else(|| GraphError::UnknownEdge(name.to_string())),
            Backend::Sec6(_) => {
                let parse = |s: &str| s.parse::<usize>().ok().filter(|i| *i >= 1);
                if let Some(i) = name.strip_prefix('e').and_then(parse) {
                    return Ok(EdgeId(2 * (i - 1)));
                }
                if let Some(i) = name.strip_prefix('f').and_then(parse) {
                    return Ok(EdgeId(2 * (i - 1) + 1));
                }
                Err(GraphError::UnknownEdge(name.to_string()))
            }
        }
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        match &self.backend {
            Backend::Finite(g) => g.edges[e.0].source,
            Backend::Sec6(_) => {
                if e.0 % 2 == 0 {
                    VertexId(e.0 / 2 + 1) // e_i from v_i
                } else {
                    VertexId(0) // f_i from w
                }
            }
        }
    }

    pub fn range(&self, e: EdgeId) -> GeneralizedVertex {
        match &self.backend {
            Backend::Finite(g) => GeneralizedVertex::from_vertices(g.edges[e.0].range.clone()),
            Backend::Sec6(_) => {
                if e.0 % 2 == 1 {
                    // r(f_i) = G^0 = {v1,v2,v3} u B
                    GeneralizedVertex {
                        emitters: [SEC6_EMITTER_B].into_iter().collect(),
                        finite: [VertexId(1), VertexId(2), VertexId(3)].into_iter().collect(),
                    }
                } else {
                    let i = e.0 / 2 + 1;
                    if i <= 3 {
                        // r(e_i) = {v_i} u B
                        GeneralizedVertex {
                            emitters: [SEC6_EMITTER_B].into_iter().collect(),
                            finite: [VertexId(i)].into_iter().collect(),
                        }
                    } else {
                        GeneralizedVertex::from_vertices([VertexId(i - 3), VertexId(i)])
                    }
                }
            }
        }
    }

    /// Declared minimal infinite emitters of the presentation.
    pub fn emitters(&self) -> Vec<EmitterId> {
        match &self.backend {
            Backend::Finite(_) => vec![],
            Backend::Sec6(f) => f.declared.iter().copied().collect(),
        }
    }

    pub fn emitter_contains(&self, m: EmitterId, v: VertexId) -> bool {
        match &self.backend {
            Backend::Finite(_) => false,
            Backend::Sec6(_) => match m {
                SEC6_EMITTER_W => v.0 == 0,
                SEC6_EMITTER_B => v.0 >= 4,
                _ => false,
            },
        }
    }

    /// Pairwise intersection of two distinct minimal infinite emitters; always
    /// a finite vertex set.
    pub fn emitter_intersection(&self, a: EmitterId, b: EmitterId) -> BTreeSet<VertexId> {
        if a == b {
            panic!("emitter_intersection expects distinct emitters");
        }
        // {w} and B are disjoint; no other emitters exist in either backend.
        BTreeSet::new()
    }

    /// Singleton emitter ({v} declared as a minimal infinite emitter), if any.
    pub fn singleton_emitter(&self, v: VertexId) -> Option<EmitterId> {
        match &self.backend {
            Backend::Finite(_) => None,
            Backend::Sec6(f) => {
                if v.0 == 0 && f.declared.contains(&SEC6_EMITTER_W) {
                    Some(SEC6_EMITTER_W)
                } else {
                    None
                }
            }
        }
    }

    /// Vertices of the emitter, in enumeration order, up to `bound`.
    pub fn emitter_vertices(&self, m: EmitterId, bound: usize) -> Vec<VertexId> {
        match &self.backend {
            Backend::Finite(_) => vec![],
            Backend::Sec6(_) => match m {
                SEC6_EMITTER_W => vec![VertexId(0)],
                SEC6_EMITTER_B => (0..bound).map(|i| VertexId(i + 4)).collect(),
                _ => vec![],
            },
        }
    }

    /// Vertices of a generalized vertex, each emitter enumerated up to `bound`.
    pub fn gv_vertices_bounded(&self, gv: &GeneralizedVertex, bound: usize) -> Vec<VertexId> {
        let mut out = BTreeSet::new();
        for &m in &gv.emitters {
            out.extend(self.emitter_vertices(m, bound));
        }
        out.extend(gv.finite.iter().copied());
        out.into_iter().collect()
    }

    /// Edges sourced in the emitter, in enumeration order, up to `bound`.
    pub fn emitter_edges(&self, m: EmitterId, bound: usize) -> Vec<EdgeId> {
        match &self.backend {
            Backend::Finite(_) => vec![],
            Backend::Sec6(_) => match m {
                SEC6_EMITTER_W => (0..bound).map(|i| EdgeId(2 * i + 1)).collect(),
                SEC6_EMITTER_B => (0..bound).map(|i| EdgeId(2 * (i + 3))).collect(),
                _ => vec![],
            },
        }
    }

    /// Outgoing edges of a single vertex. `None` means infinite emission.
    pub fn out_edges(&self, v: VertexId) -> Option<Vec<EdgeId>> {
        match &self.backend {
            Backend::Finite(g) => Some(
                g.edges
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| e.source == v)
                    .map(|(i, _)| EdgeId(i))
                    .collect(),
            ),
            Backend::Sec6(_) => {
                if v.0 == 0 {
                    None // w emits all f_i
                } else {
                    Some(vec![EdgeId(2 * (v.0 - 1))])
                }
            }
        }
    }

    /// Outgoing edges of `v` capped at `bound` (used for bounded oracles on
    /// infinite emitters).
    pub fn out_edges_bounded(&self, v: VertexId, bound: usize) -> Vec<EdgeId> {
        match self.out_edges(v) {
            Some(es) => es,
            None => (0..bound).map(|i| EdgeId(2 * i + 1)).collect(),
        }
    }

    pub fn vertex_count(&self) -> Option<usize> {
        match &self.backend {
            Backend::Finite(g) => Some(g.vertex_names.len()),
            Backend::Sec6(_) => None,
        }
    }

    pub fn edge_count(&self) -> Option<usize> {
        match &self.backend {
            Backend::Finite(g) => Some(g.edges.len()),
            Backend::Sec6(_) => None,
        }
    }

    /// Maximal element of the generalized-vertex lattice, when one exists:
    /// all of G^0 for finite graphs, F^0 for the sec6 family.
    pub fn top(&self) -> Option<GeneralizedVertex> {
        match &self.backend {
            Backend::Finite(g) => Some(GeneralizedVertex::from_vertices(
                (0..g.vertex_names.len()).map(VertexId),
            )),
            Backend::Sec6(f) => {
                if f.declared.len() == 2 {
                    Some(GeneralizedVertex {
                        emitters: f.declared.clone(),
                        finite: [VertexId(1), VertexId(2), VertexId(3)].into_iter().collect(),
                    })
                } else {
                    None
                }
            }
        }
    }

    // ---- lattice operations on canonical generalized vertices ----

    /// Restores the canonical invariants: singleton infinite emitters move to
    /// the emitter side, and the finite part is stripped of vertices already
    /// covered by an emitter. Idempotent.
    pub fn canonicalize_gv(&self, gv: &GeneralizedVertex) -> GeneralizedVertex {
        let mut emitters = gv.emitters.clone();
        let mut finite = BTreeSet::new();
        for &v in &gv.finite {
            if let Some(m) = self.singleton_emitter(v) {
                emitters.insert(m);
            } else {
                finite.insert(v);
            }
        }
        finite.retain(|&v| !emitters.iter().any(|&m| self.emitter_contains(m, v)));
        GeneralizedVertex { emitters, finite }
    }

    pub fn gv_member(&self, v: VertexId, gv: &GeneralizedVertex) -> bool {
        gv.finite.contains(&v) || gv.emitters.iter().any(|&m| self.emitter_contains(m, v))
    }

    pub fn gv_union(&self, a: &GeneralizedVertex, b: &GeneralizedVertex) -> GeneralizedVertex {
        self.canonicalize_gv(&GeneralizedVertex {
            emitters: a.emitters.union(&b.emitters).copied().collect(),
            finite: a.finite.union(&b.finite).copied().collect(),
        })
    }

    pub fn gv_intersect(&self, a: &GeneralizedVertex, b: &GeneralizedVertex) -> GeneralizedVertex {
        let emitters: BTreeSet<EmitterId> = a.emitters.intersection(&b.emitters).copied().collect();
        let mut finite: BTreeSet<VertexId> = BTreeSet::new();
        for &v in a.finite.intersection(&b.finite) {
            finite.insert(v);
        }
        // finite part of one side meeting the emitter part of the other
        for &v in &a.finite {
            if b.emitters.iter().any(|&m| self.emitter_contains(m, v)) {
                finite.insert(v);
            }
        }
        for &v in &b.finite {
            if a.emitters.iter().any(|&m| self.emitter_contains(m, v)) {
                finite.insert(v);
            }
        }
        // distinct emitters intersect in a finite vertex set
        for &ma in &a.emitters {
            for &mb in &b.emitters {
                if ma != mb {
                    finite.extend(self.emitter_intersection(ma, mb));
                }
            }
        }
        self.canonicalize_gv(&GeneralizedVertex { emitters, finite })
    }

    pub fn gv_subset(&self, a: &GeneralizedVertex, b: &GeneralizedVertex) -> bool {
        &self.gv_intersect(a, b) == a
    }

    /// Set difference, defined only when the result stays in the lattice:
    /// both sides must agree on emitters or `b` must avoid `a`'s emitters
    /// entirely in the finite sense. Used for finite-emission bases.
    pub fn gv_diff_finite(
        &self,
        a: &GeneralizedVertex,
        b: &GeneralizedVertex,
    ) -> Option<GeneralizedVertex> {
        if !a.has_finite_emission() || !b.has_finite_emission() {
            return None;
        }
        Some(GeneralizedVertex::from_vertices(
            a.finite.difference(&b.finite).copied(),
        ))
    }

    pub fn decompose(&self, gv: &GeneralizedVertex) -> Decomposition {
        let c = self.canonicalize_gv(gv);
        Decomposition {
            minimal_parts: c.emitters.iter().copied().collect(),
            finite_part: c.finite,
        }
    }

    /// Emission of a canonical generalized vertex. `Infinite` exactly when an
    /// emitter part is present.
    pub fn emission(&self, gv: &GeneralizedVertex) -> Emission {
        if !gv.emitters.is_empty() {
            return Emission::Infinite;
        }
        let mut out = BTreeSet::new();
        for &v in &gv.finite {
            // finite-part vertices have finite emission by the canonical invariant
            out.extend(self.out_edges(v).expect("finite part with infinite emission"));
        }
        Emission::Finite(out.into_iter().collect())
    }

    /// Edges sourced in `gv`, with each emitter enumerated up to `bound`.
    pub fn emission_bounded(&self, gv: &GeneralizedVertex, bound: usize) -> Vec<EdgeId> {
        let mut out = BTreeSet::new();
        for &m in &gv.emitters {
            out.extend(self.emitter_edges(m, bound));
        }
        for &v in &gv.finite {
            out.extend(self.out_edges_bounded(v, bound));
        }
        out.into_iter().collect()
    }

    /// Checks Condition (RFUM): each edge range decomposes into declared
    /// minimal infinite emitters plus single vertices. Ranges are stored in
    /// decomposed form, so the check verifies the presentation: every emitter
    /// a range refers to is declared, each declared emitter really emits
    /// `depth` edges from inside itself, and distinct emitters have finite
    /// intersection at bounded depth.
    pub fn check_rfum(&self, depth: usize) -> Result<(), GraphError> {
        match &self.backend {
            Backend::Finite(_) => Ok(()),
            Backend::Sec6(f) => {
                for &m in [SEC6_EMITTER_W, SEC6_EMITTER_B].iter() {
                    if f.declared.contains(&m) {
                        let edges = self.emitter_edges(m, depth);
                        if edges.len() < depth {
                            return Err(GraphError::UndecidableAtDepth(
                                self.emitter_name(m),
                                depth,
                            ));
                        }
                        for e in edges {
                            if !self.emitter_contains(m, self.source(e)) {
                                return Err(GraphError::RfumViolation(self.edge_name(e)));
                            }
                        }
                    }
                }
                // scan edge ranges (bounded) for undeclared emitter references
                for idx in 0..(2 * depth) {
                    let e = EdgeId(idx);
                    let r = self.range(e);
                    for m in &r.emitters {
                        if !f.declared.contains(m) {
                            return Err(GraphError::RfumViolation(self.edge_name(e)));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn gv_display(&self, gv: &GeneralizedVertex) -> String {
        if gv.is_empty() {
            return "{}".to_string();
        }
        let mut parts: Vec<String> = gv.emitters.iter().map(|&m| self.emitter_name(m)).collect();
        parts.extend(gv.finite.iter().map(|&v| self.vertex_name(v)));
        format!("{{{}}}", parts.join(","))
    }
}

/// Lattice expression over edge ranges, vertex singletons, unions and
/// intersections; evaluation lands in canonical form.
#[derive(Debug, Clone)]
pub enum LatticeExpr {
    Range(EdgeId),
    Vertex(VertexId),
    Union(Box<LatticeExpr>, Box<LatticeExpr>),
    Intersect(Box<LatticeExpr>, Box<LatticeExpr>),
}

impl LatticeExpr {
    pub fn eval(&self, g: &Ultragraph) -> GeneralizedVertex {
        match self {
            LatticeExpr::Range(e) => g.canonicalize_gv(&g.range(*e)),
            LatticeExpr::Vertex(v) => g.canonicalize_gv(&GeneralizedVertex::from_vertices([*v])),
            LatticeExpr::Union(a, b) => g.gv_union(&a.eval(g), &b.eval(g)),
            LatticeExpr::Intersect(a, b) => g.gv_intersect(&a.eval(g), &b.eval(g)),
        }
    }

    /// Direct membership predicate, independent of canonicalization; the
    /// oracle the canonical form is tested against.
    pub fn member(&self, g: &Ultragraph, v: VertexId) -> bool {
        match self {
            LatticeExpr::Range(e) => g.gv_member(v, &g.range(*e)),
            LatticeExpr::Vertex(u) => v == *u,
            LatticeExpr::Union(a, b) => a.member(g, v) || b.member(g, v),
            LatticeExpr::Intersect(a, b) => a.member(g, v) && b.member(g, v),
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v#{}", self.0)
    }
}
