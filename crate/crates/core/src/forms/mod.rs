//! Integral forms over the coordinate ring and their local behaviour.

pub mod field;
pub mod genus;
pub mod search;

pub use field::{diagonalize_field, disc_class, field_isomorphic, Diagonalization, FieldForm};
pub use genus::{
    verify_genus_witness, ClosedPointLabel, GenusReport, GenusVerdict, GenusWitness, WitnessCheck, WitnessPair,
};
pub use search::{isom_search, SearchBounds, SearchOutcome, DEFAULT_BUDGET};

use std::fmt;

use crate::curvepoints::{is_singular_point, AffinePoint};
use crate::curvering::{CurveSpec, FracElem, RingMatrix};
use crate::error::{Error, Result};
use crate::finfield::{Embedding, FqElem};
use crate::funcfield::{PrimePoly, ResidueField};

/// A nondegenerate symmetric integral Gram matrix over `O`.
#[derive(Clone, PartialEq, Eq)]
pub struct GramMatrix {
    matrix: RingMatrix,
    det: FracElem,
}

impl GramMatrix {
    pub fn new(matrix: RingMatrix) -> Result<GramMatrix> {
        if !matrix.is_symmetric() {
            return Err(Error::InvalidInput(format!("{matrix} is not symmetric")));
        }
        if !matrix.is_integral() {
            return Err(Error::InvalidInput(format!("{matrix} has non-integral entries")));
        }
        let det = matrix.det();
        if det.is_zero() {
            return Err(Error::Degenerate(format!("{matrix} has zero determinant")));
        }
        Ok(GramMatrix { matrix, det })
    }

    pub fn parse(curve: &CurveSpec, rows: &[&[&str]]) -> Result<GramMatrix> {
        GramMatrix::new(RingMatrix::parse(curve, rows)?)
    }

    pub fn identity(curve: &CurveSpec, n: usize) -> GramMatrix {
        GramMatrix::new(RingMatrix::identity(curve, n)).unwrap()
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.matrix
    }

    pub fn curve(&self) -> &CurveSpec {
        self.matrix.curve()
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn det(&self) -> &FracElem {
        &self.det
    }
}

impl fmt::Debug for GramMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Unimodular: the determinant lies in `F_q^x`.
pub fn is_unimodular(form: &GramMatrix) -> bool {
    form.det.as_constant().is_some_and(|c| !c.is_zero())
}

/// A closed point of the curve at which to localize: a point with coordinates
/// in some `F_{q^d}` (Weierstrass curves) or a monic irreducible (the line).
#[derive(Clone, Debug)]
pub enum Place {
    Point(AffinePoint),
    Prime(PrimePoly),
}

/// Image of an integral form in the residue field at `place`.
pub fn reduce_at(form: &GramMatrix, place: &Place) -> Result<FieldForm> {
    let curve = form.curve();
    let n = form.n();
    match (curve.is_weierstrass(), place) {
        (true, Place::Point(pt)) => {
            let cubic = curve.cubic().unwrap();
            let emb = Embedding::new(curve.field(), pt.field())?;
            if &pt.y * &pt.y != cubic.eval_via(&emb, &pt.x) {
                return Err(Error::InvalidInput(format!("{pt} is not on {curve}")));
            }
            if is_singular_point(curve, pt)? {
                return Err(Error::Singular(format!(
                    "{pt} is a singular point of {curve}; its local ring is not a discrete valuation ring"
                )));
            }
            let entries = form
                .matrix
                .entries()
                .iter()
                .map(|e| e.num().eval_at(&emb, &pt.x, &pt.y))
                .collect();
            FieldForm::new(emb.target(), n, entries)
        }
        (false, Place::Prime(PrimePoly::Finite(pi))) => {
            let rf = ResidueField::new(pi)?;
            let entries: Vec<FqElem> = form
                .matrix
                .entries()
                .iter()
                .map(|e| rf.reduce_poly(e.num().a()))
                .collect();
            FieldForm::new(rf.field(), n, entries)
        }
        (_, Place::Prime(PrimePoly::Infinity)) => Err(Error::InvalidInput(
            "the removed point at infinity is not a prime of O".into(),
        )),
        (true, Place::Prime(_)) => Err(Error::InvalidInput(
            "closed points of a Weierstrass curve are given as points".into(),
        )),
        (false, Place::Point(_)) => Err(Error::InvalidInput(
            "closed points of the affine line are given as monic irreducibles".into(),
        )),
    }
}

/// Compares two unimodular forms over the completed local ring at `place` via
/// their reductions to the residue field.
pub fn local_isomorphic(f: &GramMatrix, g: &GramMatrix, place: &Place) -> Result<bool> {
    if f.curve() != g.curve() {
        return Err(Error::CurveMismatch);
    }
    for (name, form) in [("F", f), ("G", g)] {
        if !is_unimodular(form) {
            return Err(Error::NotUnimodular(format!("{name} has determinant {}", form.det)));
        }
    }
    field_isomorphic(&reduce_at(f, place)?, &reduce_at(g, place)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::make_extension;
    use crate::funcfield::Poly;

    fn e523() -> CurveSpec {
        CurveSpec::weierstrass_ints(&make_extension(5, 1).unwrap(), 2, 3).unwrap()
    }

    fn point(c: &CurveSpec, x: i64, y: i64) -> Place {
        let f = c.field();
        Place::Point(AffinePoint {
            x: f.from_int(x),
            y: f.from_int(y),
            degree: 1,
        })
    }

    #[test]
    fn unimodularity() {
        let c = e523();
        let g = GramMatrix::parse(&c, &[&["0", "2"], &["2", "3*y^2"]]).unwrap();
        assert!(is_unimodular(&g));
        assert_eq!(g.det().as_constant().unwrap(), c.field().from_int(1));
        let line = CurveSpec::polyline(c.field());
        let f = GramMatrix::parse(&line, &[&["(1-x^2)^2", "0"], &["0", "1"]]).unwrap();
        assert!(!is_unimodular(&f));
        assert!(is_unimodular(&GramMatrix::identity(&c, 3)));
        assert!(GramMatrix::parse(&c, &[&["1", "x"], &["0", "1"]]).is_err());
        assert!(GramMatrix::parse(&c, &[&["1/x", "0"], &["0", "1"]]).is_err());
        assert!(matches!(
            GramMatrix::parse(&c, &[&["y", "y"], &["y", "y"]]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn local_comparisons() {
        let f5 = make_extension(5, 1).unwrap();
        let line = CurveSpec::polyline(&f5);
        let a = GramMatrix::parse(&line, &[&["1", "0"], &["0", "1"]]).unwrap();
        let b = GramMatrix::parse(&line, &[&["4", "0"], &["0", "4"]]).unwrap();
        let at_x = Place::Prime(PrimePoly::finite(Poly::x(&f5)).unwrap());
        assert!(local_isomorphic(&a, &b, &at_x).unwrap());
        assert!(local_isomorphic(&a, &a, &at_x).unwrap());
        let two = GramMatrix::parse(&line, &[&["1", "0"], &["0", "2"]]).unwrap();
        assert!(!local_isomorphic(&a, &two, &at_x).unwrap());
        assert!(local_isomorphic(&a, &b, &Place::Prime(PrimePoly::Infinity)).is_err());

        let c = e523();
        let id = GramMatrix::identity(&c, 2);
        let g = GramMatrix::parse(&c, &[&["0", "2"], &["2", "3*y^2"]]).unwrap();
        assert!(local_isomorphic(&id, &g, &point(&c, 1, 1)).unwrap());
        assert!(matches!(
            local_isomorphic(&id, &g, &point(&c, 4, 0)),
            Err(Error::Singular(_))
        ));
        assert!(local_isomorphic(&id, &g, &point(&c, 0, 0)).is_err());
    }

    #[test]
    fn non_unimodular_rejected() {
        let f5 = make_extension(5, 1).unwrap();
        let line = CurveSpec::polyline(&f5);
        let f = GramMatrix::parse(&line, &[&["(1-x^2)^2", "0"], &["0", "1"]]).unwrap();
        let at = Place::Prime(PrimePoly::finite(Poly::x(&f5)).unwrap());
        assert!(matches!(local_isomorphic(&f, &f, &at), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn reduction_at_higher_degree_primes() {
        let f3 = make_extension(3, 1).unwrap();
        let line = CurveSpec::polyline(&f3);
        let f = GramMatrix::parse(&line, &[&["x", "1"], &["1", "0"]]).unwrap();
        let pi = PrimePoly::finite(Poly::parse(&f3, "x^2+1").unwrap()).unwrap();
        let red = reduce_at(&f, &Place::Prime(pi)).unwrap();
        assert_eq!(red.field().q(), 9);
        assert_eq!(red.get(0, 0), &make_extension(3, 2).unwrap().generator());
    }
}
