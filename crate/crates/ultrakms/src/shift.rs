//! The shift space of an ultragraph: ultrapaths, the cylinder-set semi-ring
//! and the partial action on semi-ring elements.
//!
//! A cylinder `D_{(beta,B),F}` collects the points extending the stem `beta`
//! into the base `B`, excluding continuations through the finite edge set
//! `F`. Two canonical shapes exist: bases that are minimal infinite emitters
//! (which may carry exclusions and own a tip point) and finite-emission bases
//! (no exclusions, no tip). The semi-ring operations — intersection, relative
//! complement, refinement — return disjoint lists of these shapes; their
//! correctness is checked against the membership predicate, not against the
//! closed formulas of any particular decomposition.

use std::collections::BTreeSet;

use crate::graph::{EdgeId, EmitterId, GeneralizedVertex, Ultragraph, VertexId};

#[derive(Debug, thiserror::Error)]
pub enum ShiftError {
    #[error("invalid path: edge `{0}` does not continue the previous range")]
    InvalidPath(String),
    #[error("base is not contained in the range of the stem")]
    BaseNotInRange,
    #[error("excluded edge `{0}` is not sourced in the base")]
    ExcludedNotInBase(String),
    #[error("cylinder is not contained in the domain of the action")]
    DomainViolation,
    #[error("second cylinder is not a subset of the first")]
    NotSubset,
}

// ---------------------------------------------------------------------------
// Ultrapaths
// ---------------------------------------------------------------------------

/// Pair (alpha, A) of a finite edge path and a generalized vertex inside the
/// range of its last edge. Length-zero ultrapaths are the pairs (A, A).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ultrapath {
    pub edges: Vec<EdgeId>,
    pub terminal: GeneralizedVertex,
}

impl Ultrapath {
    pub fn new(
        g: &Ultragraph,
        edges: Vec<EdgeId>,
        terminal: GeneralizedVertex,
    ) -> Result<Self, ShiftError> {
        check_path(g, &edges)?;
        let terminal = g.canonicalize_gv(&terminal);
        if let Some(&last) = edges.last() {
            let range = g.canonicalize_gv(&g.range(last));
            if !g.gv_subset(&terminal, &range) {
                return Err(ShiftError::BaseNotInRange);
            }
        }
        Ok(Ultrapath { edges, terminal })
    }

    pub fn vertex_set(g: &Ultragraph, a: GeneralizedVertex) -> Self {
        Ultrapath {
            edges: vec![],
            terminal: g.canonicalize_gv(&a),
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn check_path(g: &Ultragraph, edges: &[EdgeId]) -> Result<(), ShiftError> {
    for pair in edges.windows(2) {
        let r = g.range(pair[0]);
        if !g.gv_member(g.source(pair[1]), &r) {
            return Err(ShiftError::InvalidPath(g.edge_name(pair[1])));
        }
    }
    Ok(())
}

/// Concatenation of ultrapaths, covering the length-zero special cases.
/// `None` means the product is undefined.
pub fn concat(g: &Ultragraph, x: &Ultrapath, y: &Ultrapath) -> Option<Ultrapath> {
    match (x.is_empty(), y.is_empty()) {
        (true, true) => {
            let meet = g.gv_intersect(&x.terminal, &y.terminal);
            if meet.is_empty() {
                None
            } else {
                Some(Ultrapath {
                    edges: vec![],
                    terminal: meet,
                })
            }
        }
        (true, false) => {
            // defined iff s(y) lies in the vertex set x
            if g.gv_member(g.source(y.edges[0]), &x.terminal) {
                Some(y.clone())
            } else {
                None
            }
        }
        (false, true) => {
            let meet = g.gv_intersect(&x.terminal, &y.terminal);
            if meet.is_empty() {
                None
            } else {
                Some(Ultrapath {
                    edges: x.edges.clone(),
                    terminal: meet,
                })
            }
        }
        (false, false) => {
            if g.gv_member(g.source(y.edges[0]), &x.terminal) {
                let mut edges = x.edges.clone();
                edges.extend_from_slice(&y.edges);
                Some(Ultrapath {
                    edges,
                    terminal: y.terminal.clone(),
                })
            } else {
                None
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Cylinder sets
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Base {
    /// Minimal infinite emitter: the cylinder owns the tip point (beta, B)
    /// and may exclude finitely many continuation edges.
    Emitter(EmitterId),
    /// Finite-emission vertex set: no tip, no exclusions.
    FiniteSet(GeneralizedVertex),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cylinder {
    pub stem: Vec<EdgeId>,
    pub base: Base,
    pub excluded: BTreeSet<EdgeId>,
}

impl Cylinder {
    pub fn emitter(
        g: &Ultragraph,
        stem: Vec<EdgeId>,
        m: EmitterId,
        excluded: BTreeSet<EdgeId>,
    ) -> Result<Self, ShiftError> {
        check_path(g, &stem)?;
        if let Some(&last) = stem.last() {
            let gv = GeneralizedVertex::from_emitter(m);
            if !g.gv_subset(&gv, &g.canonicalize_gv(&g.range(last))) {
                return Err(ShiftError::BaseNotInRange);
            }
        }
        for &e in &excluded {
            if !g.emitter_contains(m, g.source(e)) {
                return Err(ShiftError::ExcludedNotInBase(g.edge_name(e)));
            }
        }
        Ok(Cylinder {
            stem,
            base: Base::Emitter(m),
            excluded,
        })
    }

    pub fn finite_base(
        g: &Ultragraph,
        stem: Vec<EdgeId>,
        base: GeneralizedVertex,
    ) -> Result<Self, ShiftError> {
        check_path(g, &stem)?;
        let base = g.canonicalize_gv(&base);
        if !base.has_finite_emission() {
            return Err(ShiftError::BaseNotInRange);
        }
        if let Some(&last) = stem.last() {
            if !g.gv_subset(&base, &g.canonicalize_gv(&g.range(last))) {
                return Err(ShiftError::BaseNotInRange);
            }
        }
        Ok(Cylinder {
            stem,
            base: Base::FiniteSet(base),
        excluded: BTreeSet::new(),
        })
    }

    /// Base as a generalized vertex.
    pub fn base_gv(&self) -> GeneralizedVertex {
        match &self.base {
            Base::Emitter(m) => GeneralizedVertex::from_emitter(*m),
            Base::FiniteSet(gv) => gv.clone(),
        }
    }

    pub fn display(&self, g: &Ultragraph) -> String {
        let stem: Vec<String> = self.stem.iter().map(|&e| g.edge_name(e)).collect();
        let base = match &self.base {
            Base::Emitter(m) => g.emitter_name(*m),
            Base::FiniteSet(gv) => g.gv_display(gv),
        };
        let excl: Vec<String> = self.excluded.iter().map(|&e| g.edge_name(e)).collect();
        format!("({} ; {} ; {})", stem.join(" "), base, excl.join(" "))
    }
}

// ---------------------------------------------------------------------------
// Points and membership
// ---------------------------------------------------------------------------

/// A point of the shift space given by a finite description: either a full
/// X_fin point (finite path ending in a minimal infinite emitter) or a finite
/// prefix of an infinite path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Point {
    Fin { path: Vec<EdgeId>, emitter: EmitterId },
    Prefix(Vec<EdgeId>),
}

impl Point {
    pub fn path(&self) -> &[EdgeId] {
        match self {
            Point::Fin { path, .. } => path,
            Point::Prefix(p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    /// The prefix is too short to decide; a definitive answer needs length at
    /// least |stem| + 1.
    NeedLongerPrefix,
}

pub fn cyl_member(g: &Ultragraph, p: &Point, c: &Cylinder) -> Membership {
    let n = c.stem.len();
    let path = p.path();
    if path.len() < n {
        return if path[..] == c.stem[..path.len()] {
            match p {
                // an X_fin point shorter than the stem is never in the cylinder
                Point::Fin { .. } => Membership::Out,
                Point::Prefix(_) => Membership::NeedLongerPrefix,
            }
        } else {
            Membership::Out
        };
    }
    if path[..n] != c.stem[..] {
        return Membership::Out;
    }
    if path.len() == n {
        return match p {
            Point::Fin { emitter, .. } => {
                // the tip: only emitter-based cylinders own one
                if c.base == Base::Emitter(*emitter) {
                    Membership::In
                } else {
                    Membership::Out
                }
            }
            Point::Prefix(_) => Membership::NeedLongerPrefix,
        };
    }
    let first = path[n];
    if c.excluded.contains(&first) {
        return Membership::Out;
    }
    let src = g.source(first);
    let in_base = match &c.base {
        Base::Emitter(m) => g.emitter_contains(*m, src),
        Base::FiniteSet(gv) => g.gv_member(src, gv),
    };
    if in_base {
        Membership::In
    } else {
        Membership::Out
    }
}

// ---------------------------------------------------------------------------
// Semi-ring operations
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Empty,
    Single(Cylinder),
    /// Disjoint pieces; arises only when distinct minimal emitters overlap or
    /// an exclusion cuts through the overlap.
    Pieces(Vec<Cylinder>),
}

impl Intersection {
    pub fn into_vec(self) -> Vec<Cylinder> {
        match self {
            Intersection::Empty => vec![],
            Intersection::Single(c) => vec![c],
            Intersection::Pieces(cs) => cs,
        }
    }
}

/// Splits `D_{(stem, base)}` for an arbitrary generalized-vertex base into
/// disjoint basis cylinders: one emitter piece per minimal part (excluding
/// edges sourced in pairwise overlaps), one singleton piece per overlap
/// vertex, one singleton piece per finite-part vertex.
pub fn refine_general(g: &Ultragraph, stem: Vec<EdgeId>, base: &GeneralizedVertex) -> Vec<Cylinder> {
    let base = g.canonicalize_gv(base);
    let mut out = Vec::new();
    let emitters: Vec<EmitterId> = base.emitters.iter().copied().collect();
    let mut overlap: BTreeSet<VertexId> = BTreeSet::new();
    for (i, &ma) in emitters.iter().enumerate() {
        for &mb in &emitters[i + 1..] {
            overlap.extend(g.emitter_intersection(ma, mb));
        }
    }
    for &m in &emitters {
        let mut excl = BTreeSet::new();
        for &v in &overlap {
            if g.emitter_contains(m, v) {
                excl.extend(g.out_edges(v).expect("overlap vertex with infinite emission"));
            }
        }
        out.push(Cylinder {
            stem: stem.clone(),
            base: Base::Emitter(m),
            excluded: excl,
        });
    }
    for &v in overlap.iter().chain(base.finite.iter()) {
        out.push(Cylinder {
            stem: stem.clone(),
            base: Base::FiniteSet(GeneralizedVertex::from_vertices([v])),
            excluded: BTreeSet::new(),
        });
    }
    out
}

/// Refinement of a single cylinder into disjoint basis pieces (emitter bases
/// and singletons). Basis elements return themselves.
pub fn cyl_refine(g: &Ultragraph, c: &Cylinder) -> Vec<Cylinder> {
    match &c.base {
        Base::Emitter(_) => vec![c.clone()],
        Base::FiniteSet(gv) if gv.finite.len() <= 1 => vec![c.clone()],
        Base::FiniteSet(gv) => refine_general(g, c.stem.clone(), gv),
    }
}

/// The identification `D_{(alpha,A),F} = disjoint union over e in eps(A)\F of
/// D_{(alpha e, r(e))}`, each piece refined into basis form. Requires a
/// finite-emission base.
pub fn expand_finite(
    g: &Ultragraph,
    c: &Cylinder,
    extra_excluded: &BTreeSet<EdgeId>,
) -> Vec<Cylinder> {
    let gv = match &c.base {
        Base::FiniteSet(gv) => gv,
        Base::Emitter(_) => panic!("expand_finite needs a finite-emission base"),
    };
    let edges = match g.emission(gv) {
        crate::graph::Emission::Finite(es) => es,
        crate::graph::Emission::Infinite => unreachable!("finite base with infinite emission"),
    };
    let mut out = Vec::new();
    for e in edges {
        if extra_excluded.contains(&e) {
            continue;
        }
        let mut stem = c.stem.clone();
        stem.push(e);
        out.extend(refine_general(g, stem, &g.range(e)));
    }
    out
}

/// Intersection of two cylinders as a disjoint union of cylinders. For stems
/// where one is a proper prefix of the other the result is the deeper
/// cylinder or empty; for equal stems the base cases apply.
pub fn cyl_intersect(g: &Ultragraph, c1: &Cylinder, c2: &Cylinder) -> Intersection {
    let (shallow, deep) = if c1.stem.len() <= c2.stem.len() {
        (c1, c2)
    } else {
        (c2, c1)
    };
    let n = shallow.stem.len();
    if deep.stem[..n] != shallow.stem[..] {
        return Intersection::Empty;
    }
    if deep.stem.len() > n {
        // the deeper cylinder lives inside one continuation branch
        let first = deep.stem[n];
        if shallow.excluded.contains(&first) {
            return Intersection::Empty;
        }
        let src = g.source(first);
        let in_base = match &shallow.base {
            Base::Emitter(m) => g.emitter_contains(*m, src),
            Base::FiniteSet(gv) => g.gv_member(src, gv),
        };
        return if in_base {
            Intersection::Single(deep.clone())
        } else {
            Intersection::Empty
        };
    }
    // equal stems
    match (&shallow.base, &deep.base) {
        (Base::Emitter(m1), Base::Emitter(m2)) => {
            if m1 == m2 {
                let mut excl = shallow.excluded.clone();
                excl.extend(deep.excluded.iter().copied());
                Intersection::Single(Cylinder {
                    stem: shallow.stem.clone(),
                    base: Base::Emitter(*m1),
                    excluded: excl,
                })
            } else {
                // distinct minimal emitters meet in a finite vertex set
                let meet = g.emitter_intersection(*m1, *m2);
                let mut excl = shallow.excluded.clone();
                excl.extend(deep.excluded.iter().copied());
                branch_pieces(g, &shallow.stem, meet.into_iter(), &excl)
            }
        }
        (Base::Emitter(m), Base::FiniteSet(gv)) | (Base::FiniteSet(gv), Base::Emitter(m)) => {
            let mut excl = shallow.excluded.clone();
            excl.extend(deep.excluded.iter().copied());
            let meet: Vec<VertexId> = gv
                .finite
                .iter()
                .copied()
                .filter(|&v| g.emitter_contains(*m, v))
                .collect();
            // with no exclusions cutting through, the meet stays a single
            // finite-emission cylinder
            let cut = meet.iter().any(|&v| {
                g.out_edges(v)
                    .map(|es| es.iter().any(|e| excl.contains(e)))
                    .unwrap_or(true)
            });
            if meet.is_empty() {
                Intersection::Empty
            } else if !cut {
                Intersection::Single(Cylinder {
                    stem: shallow.stem.clone(),
                    base: Base::FiniteSet(GeneralizedVertex::from_vertices(meet)),
                    excluded: BTreeSet::new(),
                })
            } else {
                branch_pieces(g, &shallow.stem, meet.into_iter(), &excl)
            }
        }
        (Base::FiniteSet(a), Base::FiniteSet(b)) => {
            let meet = g.gv_intersect(a, b);
            if meet.is_empty() {
                Intersection::Empty
            } else {
                Intersection::Single(Cylinder {
                    stem: shallow.stem.clone(),
                    base: Base::FiniteSet(meet),
                    excluded: BTreeSet::new(),
                })
            }
        }
    }
}

/// All continuations of `stem` through vertices of `vs`, skipping excluded
/// edges, refined into basis pieces.
fn branch_pieces<I: Iterator<Item = VertexId>>(
    g: &Ultragraph,
    stem: &[EdgeId],
    vs: I,
    excluded: &BTreeSet<EdgeId>,
) -> Intersection {
    let mut out = Vec::new();
    for v in vs {
        for e in g.out_edges(v).expect("branch through infinite emitter vertex") {
            if excluded.contains(&e) {
                continue;
            }
            let mut stem = stem.to_vec();
            stem.push(e);
            out.extend(refine_general(g, stem, &g.range(e)));
        }
    }
    match out.len() {
        0 => Intersection::Empty,
        1 => Intersection::Single(out.into_iter().next().unwrap()),
        _ => Intersection::Pieces(out),
    }
}

pub fn cyl_subset(g: &Ultragraph, inner: &Cylinder, outer: &Cylinder) -> bool {
    matches!(cyl_intersect(g, outer, inner), Intersection::Single(ref c) if c == inner)
}

/// Relative complement `C \ C1` as a finite disjoint union of semi-ring
/// elements. `C1` must be a subset of `C`.
pub fn cyl_diff(g: &Ultragraph, c: &Cylinder, c1: &Cylinder) -> Result<Vec<Cylinder>, ShiftError> {
    if !cyl_subset(g, c1, c) {
        return Err(ShiftError::NotSubset);
    }
    Ok(diff_inner(g, c, c1))
}

fn diff_inner(g: &Ultragraph, c: &Cylinder, c1: &Cylinder) -> Vec<Cylinder> {
    if c == c1 {
        return vec![];
    }
    if c.stem.len() == c1.stem.len() {
        return match (&c.base, &c1.base) {
            (Base::Emitter(m), Base::Emitter(m1)) => {
                debug_assert_eq!(m, m1);
                let mut out = Vec::new();
                for &e in c1.excluded.difference(&c.excluded) {
                    let mut stem = c.stem.clone();
                    stem.push(e);
                    out.extend(refine_general(g, stem, &g.range(e)));
                }
                out
            }
            (Base::Emitter(m), Base::FiniteSet(gv)) => {
                // remove all continuations through the finite set
                let mut excl = c.excluded.clone();
                for &v in &gv.finite {
                    excl.extend(g.out_edges(v).expect("finite base with infinite emission"));
                }
                vec![Cylinder {
                    stem: c.stem.clone(),
                    base: Base::Emitter(*m),
                    excluded: excl,
                }]
            }
            (Base::FiniteSet(a), Base::FiniteSet(a1)) => {
                let rest: BTreeSet<VertexId> = a.finite.difference(&a1.finite).copied().collect();
                if rest.is_empty() {
                    vec![]
                } else {
                    vec![Cylinder {
                        stem: c.stem.clone(),
                        base: Base::FiniteSet(GeneralizedVertex::from_vertices(rest)),
                        excluded: BTreeSet::new(),
                    }]
                }
            }
            (Base::FiniteSet(_), Base::Emitter(_)) => {
                unreachable!("emitter cylinder inside a finite-emission cylinder")
            }
        };
    }
    // C1 sits strictly inside the branch through its next stem edge.
    let b = c1.stem[c.stem.len()];
    let mut out = remove_branch(g, c, b);
    let mut branch_stem = c.stem.clone();
    branch_stem.push(b);
    let pieces = refine_general(g, branch_stem, &g.range(b));
    for p in pieces {
        match cyl_intersect(g, &p, c1) {
            Intersection::Empty => out.push(p),
            Intersection::Single(i) => {
                if i == p {
                    // the whole piece lies inside C1
                } else {
                    out.extend(diff_inner(g, &p, &i));
                }
            }
            Intersection::Pieces(is) => out.extend(subtract_many(g, p, &is)),
        }
    }
    out
}

/// Removes every disjoint piece of `cuts` from `p`; each cut must lie inside
/// the running remainder.
fn subtract_many(g: &Ultragraph, p: Cylinder, cuts: &[Cylinder]) -> Vec<Cylinder> {
    let mut current = vec![p];
    for cut in cuts {
        let mut next = Vec::new();
        for q in current {
            match cyl_intersect(g, &q, cut) {
                Intersection::Empty => next.push(q),
                Intersection::Single(i) => {
                    if i == q {
                        // fully removed
                    } else {
                        next.extend(diff_inner(g, &q, &i));
                    }
                }
                Intersection::Pieces(is) => next.extend(subtract_many(g, q, &is)),
            }
        }
        current = next;
    }
    current
}

/// `C` minus all continuations through edge `b` at the stem (tips survive).
fn remove_branch(g: &Ultragraph, c: &Cylinder, b: EdgeId) -> Vec<Cylinder> {
    let src = g.source(b);
    match &c.base {
        Base::Emitter(m) => {
            if c.excluded.contains(&b) || !g.emitter_contains(*m, src) {
                return vec![c.clone()];
            }
            let mut excl = c.excluded.clone();
            excl.insert(b);
            vec![Cylinder {
                stem: c.stem.clone(),
                base: Base::Emitter(*m),
                excluded: excl,
            }]
        }
        Base::FiniteSet(gv) => {
            if !gv.finite.contains(&src) {
                return vec![c.clone()];
            }
            let mut out = Vec::new();
            let rest: BTreeSet<VertexId> =
                gv.finite.iter().copied().filter(|&v| v != src).collect();
            if !rest.is_empty() {
                out.push(Cylinder {
                    stem: c.stem.clone(),
                    base: Base::FiniteSet(GeneralizedVertex::from_vertices(rest)),
                    excluded: BTreeSet::new(),
                });
            }
            // keep the other continuations out of the source vertex
            for e in g.out_edges(src).expect("finite base with infinite emission") {
                if e == b {
                    continue;
                }
                let mut stem = c.stem.clone();
                stem.push(e);
                out.extend(refine_general(g, stem, &g.range(e)));
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// Partial action
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    Forward(EdgeId),
    Inverse(EdgeId),
}

/// theta_e prepends `e` to the stem; theta_{e^-1} strips it. Words apply
/// right-to-left, so `theta_apply(&[Forward(a), Forward(b)], V)` is
/// `theta_a(theta_b(V))`.
pub fn theta_apply(g: &Ultragraph, word: &[Letter], v: &Cylinder) -> Result<Cylinder, ShiftError> {
    let mut cur = v.clone();
    for &letter in word.iter().rev() {
        cur = match letter {
            Letter::Forward(e) => theta_edge(g, e, &cur)?,
            Letter::Inverse(e) => theta_inv_edge(g, e, &cur)?,
        };
    }
    Ok(cur)
}

fn theta_edge(g: &Ultragraph, e: EdgeId, v: &Cylinder) -> Result<Cylinder, ShiftError> {
    // V must lie in X_{e^-1}: every source of V in r(e)
    let range = g.canonicalize_gv(&g.range(e));
    if let Some(&first) = v.stem.first() {
        if !g.gv_member(g.source(first), &range) {
            return Err(ShiftError::DomainViolation);
        }
    } else if !g.gv_subset(&v.base_gv(), &range) {
        return Err(ShiftError::DomainViolation);
    }
    let mut stem = vec![e];
    stem.extend_from_slice(&v.stem);
    Ok(Cylinder {
        stem,
        base: v.base.clone(),
        excluded: v.excluded.clone(),
    })
}

fn theta_inv_edge(g: &Ultragraph, e: EdgeId, v: &Cylinder) -> Result<Cylinder, ShiftError> {
    let _ = g;
    if v.stem.first() != Some(&e) {
        return Err(ShiftError::DomainViolation);
    }
    Ok(Cylinder {
        stem: v.stem[1..].to_vec(),
        base: v.base.clone(),
        excluded: v.excluded.clone(),
    })
}

// ---------------------------------------------------------------------------
// Bounded point enumeration (the membership oracle's sample space)
// ---------------------------------------------------------------------------

/// Enumerates finite descriptions of the points of `c`, extending the stem by
/// up to `depth` edges, with infinite families cut at `index_bound`. Returns
/// full-depth prefixes (standing for every infinite path through them) plus
/// all X_fin tips of intermediate length.
pub fn enumerate_points(
    g: &Ultragraph,
    c: &Cylinder,
    depth: usize,
    index_bound: usize,
) -> Vec<Point> {
    let mut out = Vec::new();
    if let Base::Emitter(m) = &c.base {
        out.push(Point::Fin {
            path: c.stem.clone(),
            emitter: *m,
        });
    }
    let base = c.base_gv();
    let first_edges: Vec<EdgeId> = g
        .gv_vertices_bounded(&base, index_bound)
        .into_iter()
        .flat_map(|v| g.out_edges_bounded(v, index_bound))
        .filter(|e| !c.excluded.contains(e))
        .collect();
    for e in first_edges {
        let mut path = c.stem.clone();
        path.push(e);
        extend_points(g, path, depth.saturating_sub(1), index_bound, &mut out);
    }
    out
}

fn extend_points(
    g: &Ultragraph,
    path: Vec<EdgeId>,
    remaining: usize,
    index_bound: usize,
    out: &mut Vec<Point>,
) {
    let last = *path.last().unwrap();
    let range = g.canonicalize_gv(&g.range(last));
    // X_fin tips: minimal emitters inside the range
    for &m in &range.emitters {
        out.push(Point::Fin {
            path: path.clone(),
            emitter: m,
        });
    }
    if remaining == 0 {
        out.push(Point::Prefix(path));
        return;
    }
    for v in g.gv_vertices_bounded(&range, index_bound) {
        for e in g.out_edges_bounded(v, index_bound) {
            let mut next = path.clone();
            next.push(e);
            extend_points(g, next, remaining - 1, index_bound, out);
        }
    }
}

/// Checks that `pieces` are pairwise disjoint and cover exactly the points of
/// `whole` minus those of `removed` (empty `removed` checks a partition of
/// `whole`). Returns the first offending point, if any.
pub fn check_partition(
    g: &Ultragraph,
    whole: &Cylinder,
    removed: &[Cylinder],
    pieces: &[Cylinder],
    depth: usize,
    index_bound: usize,
) -> Option<Point> {
    let mut points = enumerate_points(g, whole, depth, index_bound);
    points.sort();
    points.dedup();
    for p in points {
        let decided = |c: &Cylinder| match cyl_member(g, &p, c) {
            Membership::In => Some(true),
            Membership::Out => Some(false),
            Membership::NeedLongerPrefix => None,
        };
        let mut in_removed = false;
        let mut undecided = false;
        for r in removed {
            match decided(r) {
                Some(true) => in_removed = true,
                Some(false) => {}
                None => undecided = true,
            }
        }
        let mut count = 0usize;
        for c in pieces {
            match decided(c) {
                Some(true) => count += 1,
                Some(false) => {}
                None => undecided = true,
            }
        }
        if undecided {
            continue; // prefix too short for some piece; deeper points decide
        }
        let expected = usize::from(!in_removed);
        if count != expected {
            return Some(p);
        }
    }
    None
}
