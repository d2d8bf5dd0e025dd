//! The pre-measure kappa on the cylinder semi-ring and its extension to the
//! generated ring: kappa(D_{(beta,B),F}) = M(beta)m(B) - sum_{e in F}
//! M(beta e)m(r(e)), finite additivity, and the scaling law under theta.

use crate::graph::Ultragraph;
use crate::report::Verdict;
use crate::scalar::Scalar;
use crate::shift::{
    check_partition, cyl_intersect, theta_apply, Cylinder, Intersection, Letter, ShiftError,
};
use crate::state::{MFunction, ScaledWeightM, StateError};

#[derive(Debug, thiserror::Error)]
pub enum MeasureError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error("pieces are not pairwise disjoint: `{0}` meets `{1}`")]
    NotDisjoint(String, String),
    #[error(transparent)]
    Shift(#[from] ShiftError),
}

/// kappa is determined by the state function m and the scaled weights M.
#[derive(Debug, Clone)]
pub struct KappaMeasure {
    pub m: MFunction,
    pub mm: ScaledWeightM,
}

impl KappaMeasure {
    pub fn new(m: MFunction, mm: ScaledWeightM) -> Self {
        KappaMeasure { m, mm }
    }

    /// The defining formula on a single semi-ring element.
    pub fn kappa(&self, g: &Ultragraph, c: &Cylinder) -> Result<Scalar, MeasureError> {
        let mut value = self.mm.path(&c.stem) * self.m.m_eval(g, &c.base_gv())?;
        for &e in &c.excluded {
            let mut stem = c.stem.clone();
            stem.push(e);
            value = value - self.mm.path(&stem) * self.m.m_eval(g, &g.range(e))?;
        }
        Ok(value)
    }

    /// Sum over a claimed-disjoint finite family, with the claim checked.
    pub fn kappa_disjoint(
        &self,
        g: &Ultragraph,
        pieces: &[Cylinder],
    ) -> Result<Scalar, MeasureError> {
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if cyl_intersect(g, a, b) != Intersection::Empty {
                    return Err(MeasureError::NotDisjoint(a.display(g), b.display(g)));
                }
            }
        }
        let mut total = Scalar::zero();
        for c in pieces {
            total = total + self.kappa(g, c)?;
        }
        Ok(total)
    }

    /// Measure of a general finite union via inclusion-exclusion inside the
    /// semi-ring.
    pub fn kappa_union(&self, g: &Ultragraph, cs: &[Cylinder]) -> Result<Scalar, MeasureError> {
        let mut total = Scalar::zero();
        for mask in 1u32..(1 << cs.len()) {
            let members: Vec<&Cylinder> = cs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, c)| c)
                .collect();
            let mut meet = vec![members[0].clone()];
            for c in &members[1..] {
                let mut next = Vec::new();
                for q in &meet {
                    next.extend(cyl_intersect(g, q, c).into_vec());
                }
                meet = next;
            }
            // pieces of an intersection are disjoint by construction
            let mut value = Scalar::zero();
            for c in &meet {
                value = value + self.kappa(g, c)?;
            }
            if members.len() % 2 == 1 {
                total = total + value;
            } else {
                total = total - value;
            }
        }
        Ok(total)
    }

    /// Verifies that `pieces` partition `c` per the membership oracle at the
    /// given depth and that the measures add up. Returns the verdict, the
    /// residual kappa(c) - sum kappa(pieces), and a witness string.
    pub fn check_additivity(
        &self,
        g: &Ultragraph,
        c: &Cylinder,
        pieces: &[Cylinder],
        depth: usize,
        index_bound: usize,
        tol: f64,
    ) -> Result<(Verdict, Scalar, String), MeasureError> {
        if let Some(p) = check_partition(g, c, &[], pieces, depth, index_bound) {
            return Ok((
                Verdict::Fail,
                Scalar::zero(),
                format!("not a partition at point {p:?}"),
            ));
        }
        let total = self.kappa_disjoint(g, pieces)?;
        let residual = self.kappa(g, c)? - total;
        let pass = residual.abs().close_to(&Scalar::zero(), tol);
        Ok((
            if pass { Verdict::Pass } else { Verdict::Fail },
            residual.clone(),
            format!("{} residual={}", c.display(g), residual),
        ))
    }

    /// The scaling law kappa(theta_e(V)) = M(e) kappa(V).
    pub fn check_scaling(
        &self,
        g: &Ultragraph,
        e: crate::graph::EdgeId,
        v: &Cylinder,
        tol: f64,
    ) -> Result<(Verdict, Scalar), MeasureError> {
        let moved = theta_apply(g, &[Letter::Forward(e)], v)?;
        let residual = self.kappa(g, &moved)? - self.mm.edge(e) * self.kappa(g, v)?;
        let pass = residual.abs().close_to(&Scalar::zero(), tol);
        Ok((if pass { Verdict::Pass } else { Verdict::Fail }, residual))
    }
}
