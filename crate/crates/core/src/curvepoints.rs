//! Points, singularities, group law and Picard orders for Weierstrass curves.
//!
//! Everything here is exhaustive enumeration over the coordinate field.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvering::CurveSpec;
use crate::error::{Error, Result};
use crate::finfield::{make_extension_bounded, Embedding, FqElem, FqField, EXTENSION_BOUND};

/// A point `(x, y)` with coordinates in `F_{q^d}`, `d` minimal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffinePoint {
    pub x: FqElem,
    pub y: FqElem,
    pub degree: usize,
}

impl AffinePoint {
    pub fn field(&self) -> &FqField {
        self.x.field()
    }

    pub fn label(&self) -> String {
        format!("({},{})", self.x, self.y)
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.label(), self.degree)
    }
}

/// A projective point of a Weierstrass curve.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CurvePoint {
    Infinity,
    Affine(AffinePoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCountReport {
    pub schema: u32,
    pub affine: u64,
    pub total: u64,
    pub smooth: bool,
    pub singular_points: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pic_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pic_parity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_torsion: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub warning: Option<String>,
}

const SINGULAR_PIC: &str = "the isomorphism C(F_q) = Pic(C^af) requires a smooth curve; Picard data withheld";

fn require_weierstrass(curve: &CurveSpec) -> Result<()> {
    if curve.is_weierstrass() {
        Ok(())
    } else {
        Err(Error::InvalidInput(
            "the affine line has no Weierstrass points to enumerate; its points are all of A^1".into(),
        ))
    }
}

fn require_smooth(curve: &CurveSpec) -> Result<()> {
    require_weierstrass(curve)?;
    if curve.is_smooth() {
        Ok(())
    } else {
        Err(Error::Singular(SINGULAR_PIC.into()))
    }
}

/// `F_{q^e}` together with the embedding of the curve's base field.
pub fn coordinate_field(curve: &CurveSpec, e: usize) -> Result<Embedding> {
    let base = curve.field();
    let target = make_extension_bounded(base.p(), base.k() * e, EXTENSION_BOUND)?;
    Embedding::new(base, &target)
}

fn embedded_coeffs(curve: &CurveSpec, field: &FqField) -> Result<(FqElem, FqElem)> {
    let (a, b) = curve
        .coefficients()
        .ok_or_else(|| require_weierstrass(curve).unwrap_err())?;
    let emb = Embedding::new(curve.field(), field)?;
    Ok((emb.map(a), emb.map(b)))
}

fn rhs(x: &FqElem, a: &FqElem, b: &FqElem) -> FqElem {
    &(&(&(x * x) * x) + &(a * x)) + b
}

/// Degree over the base field of the smallest field containing both coordinates.
fn exact_degree(curve: &CurveSpec, x: &FqElem, y: &FqElem) -> usize {
    let q = curve.field().q() as u64;
    let e = x.field().k() / curve.field().k();
    let mut qe = 1u64;
    for d in 1..=e {
        qe *= q;
        if e.is_multiple_of(d) && x.pow(qe) == *x && y.pow(qe) == *y {
            return d;
        }
    }
    e
}

/// All affine points of exact degree `e <= d`, grouped by degree, each group in
/// increasing `(x, y)` packed order.
pub fn enumerate_points(curve: &CurveSpec, d: usize) -> Result<Vec<AffinePoint>> {
    require_weierstrass(curve)?;
    let mut out = Vec::new();
    for e in 1..=d {
        let emb = coordinate_field(curve, e)?;
        let field = emb.target().clone();
        let (a, b) = embedded_coeffs(curve, &field)?;
        let pts: Vec<Vec<AffinePoint>> = (0..field.q())
            .into_par_iter()
            .map(|xv| {
                let x = field.elem(xv);
                let r = rhs(&x, &a, &b);
                let ys: Vec<FqElem> = if r.is_zero() {
                    vec![r]
                } else {
                    match r.sqrt() {
                        Some(s) => {
                            let mut v = vec![s.clone(), -&s];
                            v.sort_by_key(|y| y.index());
                            v
                        }
                        None => vec![],
                    }
                };
                ys.into_iter()
                    .filter(|y| exact_degree(curve, &x, y) == e)
                    .map(|y| AffinePoint {
                        x: x.clone(),
                        y,
                        degree: e,
                    })
                    .collect()
            })
            .collect();
        out.extend(pts.into_iter().flatten());
    }
    Ok(out)
}

/// One representative per Galois orbit (closed point) of degree `<= d`; the
/// representative is the conjugate with the smallest packed `(x, y)`.
pub fn closed_points(curve: &CurveSpec, d: usize) -> Result<Vec<AffinePoint>> {
    let q = curve.field().q() as u64;
    let pts = enumerate_points(curve, d)?;
    Ok(pts
        .into_iter()
        .filter(|p| {
            let key = (p.x.index(), p.y.index());
            let (mut x, mut y) = (p.x.clone(), p.y.clone());
            (1..p.degree).all(|_| {
                x = x.pow(q);
                y = y.pow(q);
                (x.index(), y.index()) > key
            })
        })
        .collect())
}

/// Whether `pt` lies on the curve and both partial derivatives vanish there.
pub fn is_singular_point(curve: &CurveSpec, pt: &AffinePoint) -> Result<bool> {
    let (a, b) = embedded_coeffs(curve, pt.field())?;
    let f = pt.field();
    let on = (&pt.y * &pt.y) == rhs(&pt.x, &a, &b);
    let dx = &(&f.from_int(3) * &(&pt.x * &pt.x)) + &a;
    let dy = &f.from_int(2) * &pt.y;
    Ok(on && dx.is_zero() && dy.is_zero())
}

/// Smoothness and the rational singular points (a repeated root of a cubic over
/// a perfect field is rational, so none are missed).
pub fn is_smooth(curve: &CurveSpec) -> Result<(bool, Vec<AffinePoint>)> {
    require_weierstrass(curve)?;
    let field = curve.field();
    let mut sing = Vec::new();
    for x in field.elements() {
        let pt = AffinePoint {
            x,
            y: field.zero(),
            degree: 1,
        };
        if is_singular_point(curve, &pt)? {
            sing.push(pt);
        }
    }
    let smooth = curve.is_smooth();
    debug_assert_eq!(smooth, sing.is_empty());
    Ok((smooth, sing))
}

fn check_on_curve(curve: &CurveSpec, p: &CurvePoint, a: &FqElem, b: &FqElem) -> Result<()> {
    if let CurvePoint::Affine(pt) = p {
        if &pt.y * &pt.y != rhs(&pt.x, a, b) {
            return Err(Error::InvalidInput(format!("{pt} is not on {curve}")));
        }
    }
    Ok(())
}

/// Chord-tangent addition with `Infinity` as identity.
pub fn ec_add(curve: &CurveSpec, p1: &CurvePoint, p2: &CurvePoint) -> Result<CurvePoint> {
    require_smooth(curve)?;
    let (pa, pb) = match (p1, p2) {
        (CurvePoint::Infinity, _) | (_, CurvePoint::Infinity) => {
            let field = match (p1, p2) {
                (CurvePoint::Affine(p), _) | (_, CurvePoint::Affine(p)) => p.field().clone(),
                _ => return Ok(CurvePoint::Infinity),
            };
            let (a, b) = embedded_coeffs(curve, &field)?;
            check_on_curve(curve, p1, &a, &b)?;
            check_on_curve(curve, p2, &a, &b)?;
            return Ok(if matches!(p1, CurvePoint::Infinity) {
                p2.clone()
            } else {
                p1.clone()
            });
        }
        (CurvePoint::Affine(a), CurvePoint::Affine(b)) => (a, b),
    };
    if pa.field() != pb.field() {
        return Err(Error::FieldMismatch);
    }
    let field = pa.field().clone();
    let (a, b) = embedded_coeffs(curve, &field)?;
    check_on_curve(curve, p1, &a, &b)?;
    check_on_curve(curve, p2, &a, &b)?;
    let lambda = if pa.x == pb.x {
        if pa.y == -&pb.y {
            return Ok(CurvePoint::Infinity);
        }
        let num = &(&field.from_int(3) * &(&pa.x * &pa.x)) + &a;
        &num / &(&field.from_int(2) * &pa.y)
    } else {
        &(&pb.y - &pa.y) / &(&pb.x - &pa.x)
    };
    let x3 = &(&(&lambda * &lambda) - &pa.x) - &pb.x;
    let y3 = &(&lambda * &(&pa.x - &x3)) - &pa.y;
    let degree = exact_degree(curve, &x3, &y3);
    Ok(CurvePoint::Affine(AffinePoint { x: x3, y: y3, degree }))
}

pub fn ec_neg(p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine(pt) => CurvePoint::Affine(AffinePoint {
            x: pt.x.clone(),
            y: -&pt.y,
            degree: pt.degree,
        }),
    }
}

/// `n * P` by double-and-add.
pub fn ec_mul(curve: &CurveSpec, mut n: u64, p: &CurvePoint) -> Result<CurvePoint> {
    let mut acc = CurvePoint::Infinity;
    let mut base = p.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = ec_add(curve, &acc, &base)?;
        }
        base = ec_add(curve, &base, &base)?;
        n >>= 1;
    }
    Ok(acc)
}

/// Number of projective `F_q`-points, singular ones included.
pub fn total_points(curve: &CurveSpec) -> Result<u64> {
    Ok(enumerate_points(curve, 1)?.len() as u64 + 1)
}

/// `|Pic(C^af)|`: 1 for the line, `|C(F_q)|` for a smooth cubic.
pub fn pic_af_order(curve: &CurveSpec) -> Result<u64> {
    if !curve.is_weierstrass() {
        return Ok(1);
    }
    require_smooth(curve)?;
    total_points(curve)
}

/// Whether the cubic has a root in `F_q`, i.e. a rational point on the x-axis.
pub fn has_two_torsion(curve: &CurveSpec) -> Result<bool> {
    require_smooth(curve)?;
    let cubic = curve.cubic().unwrap();
    Ok(curve.field().elements().any(|x| cubic.eval(&x).is_zero()))
}

pub fn point_count_report(curve: &CurveSpec) -> Result<PointCountReport> {
    let affine = enumerate_points(curve, 1)?.len() as u64;
    let (smooth, sing) = is_smooth(curve)?;
    let mut report = PointCountReport {
        schema: 1,
        affine,
        total: affine + 1,
        smooth,
        singular_points: sing.iter().map(|p| p.label()).collect(),
        pic_order: None,
        pic_parity: None,
        two_torsion: None,
        warning: None,
    };
    if smooth {
        let order = pic_af_order(curve)?;
        report.pic_order = Some(order);
        report.pic_parity = Some(if order % 2 == 1 { "odd" } else { "even" }.into());
        report.two_torsion = Some(has_two_torsion(curve)?);
    } else {
        report.warning = Some(SINGULAR_PIC.into());
    }
    Ok(report)
}
