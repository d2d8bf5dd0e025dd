//! The built-in infinite family: vertices {w, v1, v2, ...}, edges e_i sourced
//! at v_i and f_i sourced at w with r(f_i) the whole vertex part, weights
//! N(e_i) = d and N(f_i) = a^i. Closed-form KMS states, the admissibility
//! conditions on the emitter B = {v4, v5, ...}, and the ground-state segment.

use crate::graph::{EmitterId, Ultragraph, VertexId, SEC6_EMITTER_B, SEC6_EMITTER_W};
use crate::scalar::Scalar;
use crate::solver::ground_state;
use crate::state::{EdgeWeightN, MFunction};

#[derive(Debug, thiserror::Error)]
pub enum Sec6Error {
    #[error("d^(-beta) >= 1: the geometric quantity d_beta diverges")]
    DivergentAtZero,
    #[error("m_w = {mw} outside the admissible interval [{lo}, 1]")]
    MwOutOfRange { mw: Scalar, lo: Scalar },
}

#[derive(Debug, Clone)]
pub struct Sec6Params {
    pub d: Scalar,
    pub a: Scalar,
    pub beta: Scalar,
    pub m_w: Option<Scalar>,
}

pub fn build_sec6(params: &Sec6Params) -> (Ultragraph, EdgeWeightN) {
    (
        Ultragraph::sec6(),
        EdgeWeightN::Sec6 {
            d: params.d.clone(),
            a: params.a.clone(),
        },
    )
}

/// d_beta = d^(-beta) / (1 - d^(-beta)).
pub fn dbeta(d: &Scalar, beta: &Scalar) -> Result<Scalar, Sec6Error> {
    let x = d.pow(&-beta.clone());
    if x >= Scalar::one() {
        return Err(Sec6Error::DivergentAtZero);
    }
    Ok(x.clone() * (Scalar::one() - x).recip())
}

/// A sufficient or exact bound on d_beta, with the precondition d_beta < 1
/// tracked explicitly.
#[derive(Debug, Clone)]
pub struct ConditionReport {
    /// d_beta < 1, so the bound's left side is defined.
    pub defined: bool,
    pub holds: bool,
    pub value: Option<Scalar>,
}

/// The sufficient condition 6 d_beta^2 / (1 - d_beta^2) <= 1.
pub fn paper_b_condition(d: &Scalar, beta: &Scalar) -> Result<ConditionReport, Sec6Error> {
    let db = dbeta(d, beta)?;
    if db >= Scalar::one() {
        return Ok(ConditionReport {
            defined: false,
            holds: false,
            value: None,
        });
    }
    let sq = db.powi(2);
    let value = Scalar::from_int(6) * sq.clone() * (Scalar::one() - sq).recip();
    Ok(ConditionReport {
        defined: true,
        holds: value <= Scalar::one(),
        value: Some(value),
    })
}

/// The exact supremum form of m3 at B: 3 d_beta^2 / (1 - d_beta) <= 1. This
/// is the closed form of sum over i >= 4 of d^(-beta)(m(v_{i-3}) + m(v_i))
/// <= m(B) under the geometric vertex rule.
pub fn exact_b_condition(d: &Scalar, beta: &Scalar) -> Result<ConditionReport, Sec6Error> {
    let db = dbeta(d, beta)?;
    if db >= Scalar::one() {
        return Ok(ConditionReport {
            defined: false,
            holds: false,
            value: None,
        });
    }
    let value = Scalar::from_int(3) * db.powi(2) * (Scalar::one() - db.clone()).recip();
    Ok(ConditionReport {
        defined: true,
        holds: value <= Scalar::one(),
        value: Some(value),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum SeriesSum {
    Value(Scalar),
    Divergent,
}

/// sum over i >= 1 of (a^i)^(-beta), the geometric closed form.
pub fn series_sum(a: &Scalar, beta: &Scalar) -> SeriesSum {
    let x = a.pow(&-beta.clone());
    if x >= Scalar::one() {
        return SeriesSum::Divergent;
    }
    SeriesSum::Value(x.clone() * (Scalar::one() - x).recip())
}

/// The admissible KMS family at (d, a, beta): the interval of m_w values
/// with the induced state. Empty carries the reason.
#[derive(Debug, Clone)]
pub enum Sec6KmsFamily {
    Empty { reason: String },
    Interval { d_beta: Scalar, series: Scalar, mw_min: Scalar },
}

pub fn kms_states_sec6(d: &Scalar, a: &Scalar, beta: &Scalar) -> Sec6KmsFamily {
    let db = match dbeta(d, beta) {
        Ok(db) => db,
        Err(_) => {
            return Sec6KmsFamily::Empty {
                reason: "d^(-beta) >= 1".to_string(),
            }
        }
    };
    match exact_b_condition(d, beta).expect("dbeta already computed") {
        ConditionReport { defined: false, .. } => {
            return Sec6KmsFamily::Empty {
                reason: "d_beta >= 1".to_string(),
            }
        }
        ConditionReport { holds: false, .. } => {
            return Sec6KmsFamily::Empty {
                reason: "3 d_beta^2/(1-d_beta) > 1: m3 fails at B".to_string(),
            }
        }
        _ => {}
    }
    let series = match series_sum(a, beta) {
        SeriesSum::Value(s) => s,
        SeriesSum::Divergent => {
            return Sec6KmsFamily::Empty {
                reason: "sum of c_i^(-beta) diverges".to_string(),
            }
        }
    };
    let mw_min = series.clone() * (Scalar::one() + series.clone()).recip();
    Sec6KmsFamily::Interval {
        d_beta: db,
        series,
        mw_min,
    }
}

impl Sec6KmsFamily {
    pub fn is_empty(&self) -> bool {
        matches!(self, Sec6KmsFamily::Empty { .. })
    }

    /// Instantiates the state for a chosen m_w, with vertex atoms populated
    /// out to `vertex_bound` and exact tails for both emitters.
    pub fn state(&self, m_w: &Scalar, vertex_bound: usize) -> Result<MFunction, Sec6Error> {
        let Sec6KmsFamily::Interval { d_beta, series, mw_min } = self else {
            panic!("state() on an empty family");
        };
        if m_w < mw_min || m_w > &Scalar::one() {
            return Err(Sec6Error::MwOutOfRange {
                mw: m_w.clone(),
                lo: mw_min.clone(),
            });
        }
        let m_g0 = Scalar::one() - m_w.clone();
        let m_b = m_g0.clone() * (Scalar::one() + Scalar::from_int(3) * d_beta.clone()).recip();
        let mut m = MFunction::default();
        m.emitters.insert(SEC6_EMITTER_W, m_w.clone());
        m.emitters.insert(SEC6_EMITTER_B, m_b.clone());
        for i in 1..=vertex_bound {
            let q = (i - 1) / 3;
            m.vertices
                .insert(VertexId(i), d_beta.powi(q as i64 + 1) * m_b.clone());
        }
        m.tails.insert(
            SEC6_EMITTER_B,
            Scalar::from_int(3)
                * m_b
                * d_beta.powi(2)
                * (Scalar::one() - d_beta.clone()).recip(),
        );
        m.tails.insert(SEC6_EMITTER_W, series.clone() * m_g0);
        Ok(m)
    }
}

/// Ground states: the segment m(B) = t, m({w}) = 1 - t, every vertex atom 0.
pub fn ground_states_sec6(t: &Scalar, vertex_bound: usize) -> MFunction {
    ground_state(
        &Ultragraph::sec6(),
        &[
            (SEC6_EMITTER_B, t.clone()),
            (SEC6_EMITTER_W, Scalar::one() - t.clone()),
        ],
        vertex_bound,
    )
}

/// Test lattice for the family: emitters, vertex singletons up to `n`, the
/// full-range set G^0 and the top F^0.
pub fn sec6_lattice(g: &Ultragraph, n: usize) -> Vec<crate::graph::GeneralizedVertex> {
    use crate::graph::GeneralizedVertex;
    let mut out = vec![
        GeneralizedVertex::from_emitter(SEC6_EMITTER_W),
        GeneralizedVertex::from_emitter(SEC6_EMITTER_B),
        g.range(crate::graph::EdgeId(1)),
        g.top().unwrap(),
    ];
    for i in 1..=n {
        out.push(GeneralizedVertex::from_vertices([VertexId(i)]));
    }
    out
}

/// Sum of the first `terms` elements of the m3 series at B, the oracle for
/// the closed-form tail.
pub fn b_tail_partial(m: &MFunction, d: &Scalar, beta: &Scalar, terms: usize) -> Scalar {
    let x = d.pow(&-beta.clone());
    let mut total = Scalar::zero();
    for i in 4..4 + terms {
        let prev = m.vertices[&VertexId(i - 3)].clone();
        let cur = m.vertices[&VertexId(i)].clone();
        total = total + x.clone() * (prev + cur);
    }
    total
}

pub fn declared_emitters() -> [EmitterId; 2] {
    [SEC6_EMITTER_W, SEC6_EMITTER_B]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{verify_ground_m, verify_kms_m, ScaledWeightM};

    fn two() -> Scalar {
        Scalar::from_int(2)
    }

    #[test]
    fn dbeta_values() {
        assert_eq!(dbeta(&two(), &two()).unwrap(), Scalar::ratio(1, 3));
        assert_eq!(dbeta(&two(), &Scalar::one()).unwrap(), Scalar::one());
        assert!(matches!(
            dbeta(&two(), &Scalar::zero()),
            Err(Sec6Error::DivergentAtZero)
        ));
        assert!(dbeta(&two(), &Scalar::from_int(40)).unwrap().to_f64() < 1e-11);
    }

    #[test]
    fn paper_condition() {
        let r = paper_b_condition(&two(), &two()).unwrap();
        assert!(r.defined && r.holds);
        assert_eq!(r.value.unwrap(), Scalar::ratio(3, 4));
        let r = paper_b_condition(&two(), &Scalar::one()).unwrap();
        assert!(!r.defined && !r.holds);
        // flip at beta = log2(1 + sqrt 7)
        let flip = (1.0 + 7f64.sqrt()).log2();
        assert!(!paper_b_condition(&two(), &Scalar::Float(flip - 1e-6)).unwrap().holds);
        assert!(paper_b_condition(&two(), &Scalar::Float(flip + 1e-6)).unwrap().holds);
    }

    #[test]
    fn exact_condition() {
        let r = exact_b_condition(&two(), &two()).unwrap();
        assert!(r.holds);
        assert_eq!(r.value.unwrap(), Scalar::ratio(1, 2));
        // flip where 3x^2 + x - 1 = 0, x = (sqrt 13 - 1)/6
        let x = (13f64.sqrt() - 1.0) / 6.0;
        let flip = -(x / (1.0 + x)).log2();
        assert!((flip - 1.7236789686).abs() < 1e-9);
        assert!(!exact_b_condition(&two(), &Scalar::Float(flip - 1e-6)).unwrap().holds);
        assert!(exact_b_condition(&two(), &Scalar::Float(flip + 1e-6)).unwrap().holds);
    }

    #[test]
    fn paper_implies_exact_on_grid() {
        for k in 1..=50 {
            let beta = Scalar::Float(k as f64 / 10.0);
            let Ok(db) = dbeta(&two(), &beta) else { continue };
            if db >= Scalar::one() {
                continue;
            }
            let paper = paper_b_condition(&two(), &beta).unwrap().holds;
            let exact = exact_b_condition(&two(), &beta).unwrap().holds;
            assert!(!paper || exact, "implication fails at beta={beta}");
        }
    }

    #[test]
    fn series_values() {
        assert_eq!(series_sum(&two(), &two()), SeriesSum::Value(Scalar::ratio(1, 3)));
        assert_eq!(series_sum(&two(), &Scalar::zero()), SeriesSum::Divergent);
        // partial-sum oracle
        let mut partial = 0.0;
        for i in 1..=10_000 {
            partial += 4f64.powi(-i);
        }
        assert!((partial - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn witness_state_values() {
        let fam = kms_states_sec6(&two(), &two(), &two());
        let Sec6KmsFamily::Interval { d_beta, series, mw_min } = &fam else {
            panic!("expected interval");
        };
        assert_eq!(*d_beta, Scalar::ratio(1, 3));
        assert_eq!(*series, Scalar::ratio(1, 3));
        assert_eq!(*mw_min, Scalar::ratio(1, 4));
        let m = fam.state(&Scalar::ratio(1, 2), 36).unwrap();
        assert_eq!(m.emitters[&SEC6_EMITTER_B], Scalar::ratio(1, 4));
        assert_eq!(m.vertices[&VertexId(1)], Scalar::ratio(1, 12));
        assert_eq!(m.vertices[&VertexId(4)], Scalar::ratio(1, 36));
        assert!(matches!(
            fam.state(&Scalar::ratio(1, 5), 36),
            Err(Sec6Error::MwOutOfRange { .. })
        ));
    }

    #[test]
    fn witness_passes_verifier_exactly() {
        let fam = kms_states_sec6(&two(), &two(), &two());
        let m = fam.state(&Scalar::ratio(1, 2), 40).unwrap();
        let g = Ultragraph::sec6();
        let mm = ScaledWeightM::new(
            EdgeWeightN::Sec6 { d: two(), a: two() },
            two(),
        );
        let report = verify_kms_m(&g, &m, &mm, &sec6_lattice(&g, 12), 8, 30, 0.0).unwrap();
        assert!(report.all_pass(), "{}", report.render());
    }

    #[test]
    fn mw_one_degenerate() {
        let fam = kms_states_sec6(&two(), &two(), &two());
        let m = fam.state(&Scalar::one(), 12).unwrap();
        assert!(m.emitters[&SEC6_EMITTER_B].is_zero());
        assert!(m.vertices.values().all(|v| v.is_zero()));
    }

    #[test]
    fn low_beta_empty() {
        let fam = kms_states_sec6(&two(), &two(), &Scalar::Float(0.5));
        assert!(fam.is_empty());
    }

    #[test]
    fn recursion_consistency() {
        let fam = kms_states_sec6(&two(), &two(), &two());
        let m = fam.state(&Scalar::ratio(1, 2), 33).unwrap();
        let db = Scalar::ratio(1, 3);
        for i in 1..=30 {
            assert_eq!(
                m.vertices[&VertexId(i + 3)],
                db.clone() * m.vertices[&VertexId(i)].clone()
            );
        }
    }

    #[test]
    fn tail_closed_form_matches_partial_sums() {
        let fam = kms_states_sec6(&two(), &two(), &two());
        let m = fam.state(&Scalar::ratio(1, 2), 155).unwrap();
        let partial = b_tail_partial(&m, &two(), &two(), 150);
        let closed = m.tails[&SEC6_EMITTER_B].clone();
        assert!((partial.to_f64() - closed.to_f64()).abs() < 1e-12);
        assert!(partial < closed);
        // long float oracle: 10^4 terms of the recursion
        let db: f64 = 1.0 / 3.0;
        let x = 0.25;
        let mv = |i: usize| db.powi(((i - 1) / 3 + 1) as i32) * 0.25;
        let mut long = 0.0;
        for i in 4..10_004 {
            long += x * (mv(i - 3) + mv(i));
        }
        assert!((long - closed.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn ground_segment() {
        let g = Ultragraph::sec6();
        for t in [Scalar::zero(), Scalar::ratio(1, 2), Scalar::one()] {
            let m = ground_states_sec6(&t, 12);
            let report = verify_ground_m(&g, &m, &sec6_lattice(&g, 12), 0.0).unwrap();
            assert!(report.all_pass(), "{}", report.render());
        }
        // perturbing a vertex atom fails
        let mut m = ground_states_sec6(&Scalar::ratio(1, 2), 12);
        m.vertices.insert(VertexId(2), Scalar::ratio(1, 1000));
        let report = verify_ground_m(&g, &m, &sec6_lattice(&g, 12), 0.0).unwrap();
        assert!(!report.all_pass());
    }
}
