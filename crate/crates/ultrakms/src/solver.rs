//! Fixed-point machinery on finite ultragraphs: the transfer matrix induced
//! by conditions m2+m4 at vertex level, the KMS-state simplex at a given
//! beta, the critical-beta search, and the ground-state description.

use crate::graph::{EmitterId, GeneralizedVertex, Ultragraph, VertexId};
use crate::scalar::Scalar;
use crate::state::{EdgeWeightN, MFunction, ScaledWeightM};

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("no critical beta in the search range: {0}")]
    NotFound(String),
    #[error("the lattice has no maximal element and no exhausting sequence was declared")]
    NoExhaustingSequence,
}

/// entry(v,u) = sum over edges e with s(e)=v and u in r(e) of N(e)^{-beta}.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub dim: usize,
    pub entries: Vec<Vec<Scalar>>,
}

impl TransferMatrix {
    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|x| x.to_f64()).collect())
            .collect()
    }
}

pub fn build_transfer(g: &Ultragraph, n: &EdgeWeightN, beta: &Scalar) -> TransferMatrix {
    let dim = g.vertex_count().expect("transfer matrix needs a finite graph");
    let mm = ScaledWeightM::new(n.clone(), beta.clone());
    let mut entries = vec![vec![Scalar::zero(); dim]; dim];
    let edges = g.edge_count().unwrap();
    for e in (0..edges).map(crate::graph::EdgeId) {
        let v = g.source(e).0;
        let w = mm.edge(e);
        for u in g.range(e).finite {
            entries[v][u.0] = entries[v][u.0].clone() + w.clone();
        }
    }
    TransferMatrix { dim, entries }
}

/// Nonnegative normalized fixed points of the transfer matrix at `beta`,
/// reported as the extreme points of the state simplex. Empty when only the
/// zero vector solves.
#[derive(Debug, Clone)]
pub struct KmsSolution {
    pub beta: Scalar,
    pub states: Vec<MFunction>,
}

impl KmsSolution {
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

pub fn solve_kms(g: &Ultragraph, n: &EdgeWeightN, beta: &Scalar, tol: f64) -> KmsSolution {
    let t = build_transfer(g, n, beta);
    // rows of T - I
    let mut a = t.entries.clone();
    for i in 0..t.dim {
        a[i][i] = a[i][i].clone() - Scalar::one();
    }
    // solve (T - I) m = 0: null space of the matrix acting on m, i.e. the
    // matrix with row v giving m(v) = sum_u T(v,u) m(u)
    let basis = null_space(&a, tol);
    let mut states = Vec::new();
    for x in extreme_points(&basis, tol) {
        let vertices = (0..t.dim).map(|i| (VertexId(i), x[i].clone())).collect();
        states.push(MFunction {
            emitters: Default::default(),
            vertices,
            tails: Default::default(),
        });
    }
    KmsSolution {
        beta: beta.clone(),
        states,
    }
}

/// Null space basis via Gauss-Jordan elimination. Pivoting is exact when
/// every entry is exact, otherwise thresholded at `tol`.
pub fn null_space(a: &[Vec<Scalar>], tol: f64) -> Vec<Vec<Scalar>> {
    let rows = a.len();
    if rows == 0 {
        return vec![];
    }
    let cols = a[0].len();
    let exact = a.iter().flatten().all(|x| x.is_exact());
    let nonzero = |x: &Scalar| {
        if exact {
            !x.is_zero()
        } else {
            x.abs().to_f64() > tol
        }
    };
    let mut m: Vec<Vec<Scalar>> = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).max_by(|&i, &j| {
            m[i][c]
                .abs()
                .partial_cmp(&m[j][c].abs())
                .expect("NaN entry")
        }) else {
            break;
        };
        if !nonzero(&m[p][c]) {
            continue;
        }
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in &mut m[r] {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && nonzero(&m[i][c]) {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let delta = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![Scalar::zero(); cols];
        v[fc] = Scalar::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][fc].clone();
        }
        basis.push(v);
    }
    basis
}

/// Extreme points of {x in span(basis) : x >= 0, sum x = 1}: basic feasible
/// solutions obtained by zeroing (dim - 1)-subsets of coordinates.
fn extreme_points(basis: &[Vec<Scalar>], tol: f64) -> Vec<Vec<Scalar>> {
    let dim = basis.len();
    if dim == 0 {
        return vec![];
    }
    let n = basis[0].len();
    let feasible = |x: &[Scalar]| x.iter().all(|v| v.to_f64() >= -tol.max(1e-12));
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    let mut push_unique = |x: Vec<Scalar>| {
        let dup = out.iter().any(|y| {
            x.iter()
                .zip(y)
                .all(|(a, b)| a.close_to(b, tol.max(1e-9)))
        });
        if !dup {
            out.push(x);
        }
    };
    if dim == 1 {
        let total: Scalar = basis[0].iter().cloned().sum();
        if !total.is_zero() {
            let x: Vec<Scalar> = basis[0].iter().map(|v| v.clone() * total.recip()).collect();
            if feasible(&x) {
                push_unique(x);
            }
        }
        return out;
    }
    // each subset Z of coordinates with |Z| = dim-1 pins a candidate vertex
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != dim - 1 {
            continue;
        }
        let mut sys: Vec<Vec<Scalar>> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                sys.push((0..dim).map(|j| basis[j][i].clone()).collect());
                rhs.push(Scalar::zero());
            }
        }
        sys.push(
            (0..dim)
                .map(|j| basis[j].iter().cloned().sum())
                .collect(),
        );
        rhs.push(Scalar::one());
        if let Some(c) = solve_square(&sys, &rhs, tol) {
            let x: Vec<Scalar> = (0..n)
                .map(|i| {
                    (0..dim)
                        .map(|j| c[j].clone() * basis[j][i].clone())
                        .sum()
                })
                .collect();
            if feasible(&x) {
                push_unique(x);
            }
        }
    }
    out
}

/// Solves a square system by elimination; `None` when singular.
fn solve_square(a: &[Vec<Scalar>], b: &[Scalar], tol: f64) -> Option<Vec<Scalar>> {
    let n = b.len();
    let exact = a.iter().flatten().all(|x| x.is_exact());
    let nonzero = |x: &Scalar| {
        if exact {
            !x.is_zero()
        } else {
            x.abs().to_f64() > tol.max(1e-12)
        }
    };
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| {
            m[i][c]
                .abs()
                .partial_cmp(&m[j][c].abs())
                .expect("NaN entry")
        })?;
        if !nonzero(&m[p][c]) {
            return None;
        }
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in &mut m[c] {
            *x = x.clone() * inv.clone();
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let delta = f.clone() * m[c][j].clone();
                    m[i][j] = m[i][j].clone() - delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Spectral radius by power iteration with a deterministic uniform start;
/// falls back to the squared matrix when the iteration oscillates.
pub fn spectral_radius(a: &[Vec<f64>], tol: f64) -> f64 {
    fn iterate(a: &[Vec<f64>], tol: f64) -> Option<f64> {
        let n = a.len();
        let mut x = vec![1.0 / n as f64; n];
        let mut lambda = 0.0;
        for _ in 0..20_000 {
            let y: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| a[i][j] * x[j]).sum())
                .collect();
            let norm: f64 = y.iter().map(|v| v.abs()).sum();
            if norm == 0.0 {
                return Some(0.0);
            }
            let next = norm;
            x = y.iter().map(|v| v / norm).collect();
            if (next - lambda).abs() <= tol * next.max(1.0) {
                return Some(next);
            }
            lambda = next;
        }
        None
    }
    if let Some(r) = iterate(a, tol) {
        return r;
    }
    // period-2 oscillation (bipartite-like structure): use A^2
    let n = a.len();
    let sq: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * a[k][j]).sum())
                .collect()
        })
        .collect();
    iterate(&sq, tol)
        .map(|r| r.sqrt())
        .unwrap_or(f64::NAN)
}

/// Bisection on beta for rho(T_beta) = 1; rho is strictly decreasing in beta
/// because every N(e) > 1.
pub fn critical_beta(
    g: &Ultragraph,
    n: &EdgeWeightN,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, SolverError> {
    let rho = |beta: f64| {
        let t = build_transfer(g, n, &Scalar::Float(beta));
        spectral_radius(&t.to_f64(), tol / 10.0)
    };
    let rlo = rho(lo);
    let rhi = rho(hi);
    if rlo < 1.0 {
        return Err(SolverError::NotFound(format!(
            "rho(T_{lo}) = {rlo} < 1: no KMS state at any beta >= {lo}"
        )));
    }
    if rhi > 1.0 {
        return Err(SolverError::NotFound(format!(
            "rho(T_{hi}) = {rhi} > 1: raise the upper bound"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = (lo + hi) / 2.0;
        if rho(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / 2.0)
}

/// Affine description of the ground-state set: free nonnegative weights on
/// the minimal infinite emitters summing to 1, zero on every finite-emission
/// atom. Finite graphs have no infinite emitters, hence no ground states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundDescription {
    Empty,
    Simplex { emitters: Vec<EmitterId> },
}

pub fn solve_ground(g: &Ultragraph) -> Result<GroundDescription, SolverError> {
    let emitters = g.emitters();
    if emitters.is_empty() {
        return Ok(GroundDescription::Empty);
    }
    g.top().ok_or(SolverError::NoExhaustingSequence)?;
    Ok(GroundDescription::Simplex { emitters })
}

/// Instantiates a ground state from emitter weights; vertex atoms out to
/// `vertex_bound` are pinned to zero so the generic verifier can evaluate.
pub fn ground_state(
    _g: &Ultragraph,
    weights: &[(EmitterId, Scalar)],
    vertex_bound: usize,
) -> MFunction {
    let mut m = MFunction::default();
    for (e, w) in weights {
        m.emitters.insert(*e, w.clone());
        m.tails.insert(*e, Scalar::zero());
    }
    for i in 1..=vertex_bound {
        m.vertices.insert(VertexId(i), Scalar::zero());
    }
    m
}

/// Test lattice for a finite graph: vertex singletons, edge ranges, the top.
pub fn finite_lattice(g: &Ultragraph) -> Vec<GeneralizedVertex> {
    let mut out: Vec<GeneralizedVertex> = (0..g.vertex_count().unwrap())
        .map(|i| GeneralizedVertex::from_vertices([VertexId(i)]))
        .collect();
    for e in (0..g.edge_count().unwrap()).map(crate::graph::EdgeId) {
        out.push(g.range(e));
    }
    out.push(g.top().unwrap());
    out
}
