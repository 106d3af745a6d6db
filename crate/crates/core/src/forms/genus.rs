//! Certification of genus membership through explicit local transition matrices.
//!
//! A witness pair `(Q, s)` claims `Q^t F Q = G` with `Q` integral and of unit
//! determinant wherever `s` does not vanish. The identity certifies that `F` and
//! `G` are isomorphic over the function field; each closed point at which some
//! pair is regular with nonvanishing determinant is certified locally. Closed
//! points are inspected up to a fixed degree; higher degrees stay unverified.

use serde::{Deserialize, Serialize};

use super::GramMatrix;
use crate::curvepoints::{closed_points, coordinate_field, AffinePoint};
use crate::curvering::{FracElem, RingElem, RingMatrix};
use crate::error::{Error, Result};
use crate::finfield::Embedding;
use crate::funcfield::{monic_irreducibles, Poly};

#[derive(Clone, Debug)]
pub struct WitnessPair {
    pub q: RingMatrix,
    /// Every denominator of `q` divides a power of `s`.
    pub s: RingElem,
}

#[derive(Clone, Debug, Default)]
pub struct GenusWitness {
    pub pairs: Vec<WitnessPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenusVerdict {
    Certified,
    GapFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub s: String,
    /// Least `k` with `s^k Q` integral.
    pub s_power: u32,
    pub identity_ok: bool,
    /// `det(Q) s^j` is a nonzero constant for some integer `j`.
    pub det_unit: bool,
    pub det: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedPointLabel {
    pub point: String,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusReport {
    pub schema: u32,
    pub verdict: GenusVerdict,
    pub inspection_degree: usize,
    pub witnesses: Vec<WitnessCheck>,
    pub covered: Vec<ClosedPointLabel>,
    pub uncovered: Vec<ClosedPointLabel>,
    pub note: String,
}

impl GenusReport {
    pub fn uncovered_labels(&self) -> Vec<&str> {
        self.uncovered.iter().map(|p| p.point.as_str()).collect()
    }
}

struct PreparedPair {
    s: RingElem,
    /// `s^k Q`, integral.
    scaled_det: RingElem,
    usable: bool,
}

fn scale_power(q: &RingMatrix, s: &RingElem) -> Result<(u32, RingMatrix)> {
    let max_den = q.entries().iter().map(|e| e.den().degree().unwrap()).max().unwrap_or(0);
    let s_frac = FracElem::from_ring(s.clone());
    let mut cur = q.clone();
    for k in 0..=(max_den as u32 + 1) {
        if cur.is_integral() {
            return Ok((k, cur));
        }
        cur = cur.scale(&s_frac);
    }
    Err(Error::MalformedWitness(format!(
        "a denominator of {q} does not divide any power of {s}"
    )))
}

/// Whether `d * s^j` is a nonzero constant for some `|j| <= bound`.
fn unit_up_to_s_powers(d: &FracElem, s: &RingElem, bound: u32) -> bool {
    if d.is_zero() {
        return false;
    }
    let s_frac = FracElem::from_ring(s.clone());
    let s_inv = s_frac.inv().unwrap();
    let is_unit = |e: &FracElem| e.as_constant().is_some_and(|c| !c.is_zero());
    let (mut up, mut down) = (d.clone(), d.clone());
    for _ in 0..=bound {
        if is_unit(&up) || is_unit(&down) {
            return true;
        }
        up = &up * &s_frac;
        down = &down * &s_inv;
    }
    false
}

/// Checks every pair of `witness` against `F` and `G` and inspects coverage of
/// all closed points of degree `<= degree`.
pub fn verify_genus_witness(
    f: &GramMatrix,
    g: &GramMatrix,
    witness: &GenusWitness,
    degree: usize,
) -> Result<GenusReport> {
    let curve = f.curve().clone();
    if g.curve() != &curve {
        return Err(Error::CurveMismatch);
    }
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch(format!(
            "F has rank {}, G has rank {}",
            f.n(),
            g.n()
        )));
    }
    if witness.pairs.is_empty() {
        return Err(Error::MalformedWitness("no witness pairs".into()));
    }
    let n = f.n() as u32;
    let mut checks = Vec::new();
    let mut prepared = Vec::new();
    for pair in &witness.pairs {
        if pair.q.curve() != &curve || pair.s.curve() != &curve {
            return Err(Error::CurveMismatch);
        }
        if pair.q.n() != f.n() {
            return Err(Error::DimensionMismatch(format!("witness matrix {}", pair.q)));
        }
        if pair.s.is_zero() {
            return Err(Error::MalformedWitness("s must be nonzero".into()));
        }
        let (k, scaled) = scale_power(&pair.q, &pair.s)?;
        let identity_ok = RingMatrix::congruence(&pair.q, f.matrix())? == *g.matrix();
        let det = pair.q.det();
        let det_unit = unit_up_to_s_powers(&det, &pair.s, n * k + 2);
        let scaled_det = scaled.det().as_ring().cloned().expect("integral matrix");
        checks.push(WitnessCheck {
            s: pair.s.to_string(),
            s_power: k,
            identity_ok,
            det_unit,
            det: det.to_string(),
        });
        prepared.push(PreparedPair {
            s: pair.s.clone(),
            scaled_det,
            usable: identity_ok && !det.is_zero(),
        });
    }

    let mut covered = Vec::new();
    let mut uncovered = Vec::new();
    if curve.is_weierstrass() {
        let mut embeddings: Vec<Option<Embedding>> = vec![None; degree + 1];
        for pt in closed_points(&curve, degree)? {
            let e = pt.degree;
            if embeddings[e].is_none() {
                embeddings[e] = Some(coordinate_field(&curve, e)?);
            }
            let emb = embeddings[e].as_ref().unwrap();
            let ok = prepared.iter().any(|p| covers_point(p, emb, &pt));
            let label = ClosedPointLabel {
                point: pt.label(),
                degree: e,
            };
            if ok { &mut covered } else { &mut uncovered }.push(label);
        }
    } else {
        for d in 1..=degree {
            for pi in monic_irreducibles(curve.field(), d) {
                let ok = prepared.iter().any(|p| covers_prime(p, &pi));
                let label = ClosedPointLabel {
                    point: pi.to_string(),
                    degree: d,
                };
                if ok { &mut covered } else { &mut uncovered }.push(label);
            }
        }
    }
    let all_ok = checks.iter().all(|c| c.identity_ok && c.det_unit);
    let verdict = if all_ok && uncovered.is_empty() {
        GenusVerdict::Certified
    } else {
        GenusVerdict::GapFound
    };
    Ok(GenusReport {
        schema: 1,
        verdict,
        inspection_degree: degree,
        witnesses: checks,
        covered,
        uncovered,
        note: format!("coverage inspected for closed points of degree <= {degree}; higher degrees are unverified"),
    })
}

fn covers_point(p: &PreparedPair, emb: &Embedding, pt: &AffinePoint) -> bool {
    p.usable && !p.s.eval_at(emb, &pt.x, &pt.y).is_zero() && !p.scaled_det.eval_at(emb, &pt.x, &pt.y).is_zero()
}

fn covers_prime(p: &PreparedPair, pi: &Poly) -> bool {
    p.usable && !pi.divides(p.s.a()) && !pi.divides(p.scaled_det.a())
}
