//! Coordinate rings `O` of affine curves: `F_q[x]` for the line and
//! `F_q[x,y]/(y^2 - x^3 - ax - b)` for Weierstrass cubics.
//!
//! `O` is free over `F_q[x]` with basis `{1, y}`, so an element is a pair of
//! polynomials `A + B y`. Fractions keep their denominator in `F_q[x]`: a
//! denominator `A + B y` is rationalized by its conjugate `A - B y`, and an
//! element `(A + B y) / D` is integral exactly when `D` divides both `A` and `B`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finfield::{Embedding, FqElem, FqField};
use crate::funcfield::{owned_ops, Poly};

#[derive(Debug, PartialEq, Eq)]
enum CurveKind {
    PolyLine,
    Weierstrass {
        a: FqElem,
        b: FqElem,
        cubic: Poly,
        disc: FqElem,
    },
}

#[derive(Debug, PartialEq, Eq)]
struct CurveData {
    field: FqField,
    kind: CurveKind,
}

/// The base geometry. Equality is structural.
#[derive(Clone, PartialEq, Eq)]
pub struct CurveSpec(Arc<CurveData>);

impl CurveSpec {
    /// The affine line: `O = F_q[x]`.
    pub fn polyline(field: &FqField) -> CurveSpec {
        CurveSpec(Arc::new(CurveData {
            field: field.clone(),
            kind: CurveKind::PolyLine,
        }))
    }

    /// `y^2 = x^3 + a x + b`. Singular cubics are accepted; see [`CurveSpec::is_smooth`].
    pub fn weierstrass(a: &FqElem, b: &FqElem) -> Result<CurveSpec> {
        if a.field() != b.field() {
            return Err(Error::FieldMismatch);
        }
        let field = a.field().clone();
        let cubic = Poly::from_elems(&field, &[b.clone(), a.clone(), field.zero(), field.one()]);
        let disc = &(&field.from_int(-4) * &a.pow(3)) - &(&field.from_int(27) * &b.pow(2));
        Ok(CurveSpec(Arc::new(CurveData {
            field,
            kind: CurveKind::Weierstrass {
                a: a.clone(),
                b: b.clone(),
                cubic,
                disc,
            },
        })))
    }

    /// Convenience for prime-field curves with integer coefficients.
    pub fn weierstrass_ints(field: &FqField, a: i64, b: i64) -> Result<CurveSpec> {
        CurveSpec::weierstrass(&field.from_int(a), &field.from_int(b))
    }

    pub fn field(&self) -> &FqField {
        &self.0.field
    }

    pub fn is_weierstrass(&self) -> bool {
        matches!(self.0.kind, CurveKind::Weierstrass { .. })
    }

    pub fn coefficients(&self) -> Option<(&FqElem, &FqElem)> {
        match &self.0.kind {
            CurveKind::Weierstrass { a, b, .. } => Some((a, b)),
            CurveKind::PolyLine => None,
        }
    }

    /// `x^3 + a x + b`, the value of `y^2`.
    pub fn cubic(&self) -> Option<&Poly> {
        match &self.0.kind {
            CurveKind::Weierstrass { cubic, .. } => Some(cubic),
            CurveKind::PolyLine => None,
        }
    }

    /// `-4a^3 - 27b^2`.
    pub fn discriminant(&self) -> Option<&FqElem> {
        match &self.0.kind {
            CurveKind::Weierstrass { disc, .. } => Some(disc),
            CurveKind::PolyLine => None,
        }
    }

    /// The line is always smooth; a cubic is smooth iff its discriminant is nonzero.
    pub fn is_smooth(&self) -> bool {
        self.discriminant().is_none_or(|d| !d.is_zero())
    }

    pub fn zero(&self) -> RingElem {
        RingElem::from_poly(self, Poly::zero(self.field()))
    }

    pub fn one(&self) -> RingElem {
        RingElem::from_poly(self, Poly::one(self.field()))
    }

    pub fn x(&self) -> RingElem {
        RingElem::from_poly(self, Poly::x(self.field()))
    }

    pub fn y(&self) -> Result<RingElem> {
        if !self.is_weierstrass() {
            return Err(Error::InvalidInput("y is not defined on the affine line".into()));
        }
        let f = self.field();
        Ok(RingElem {
            curve: self.clone(),
            a: Poly::zero(f),
            b: Poly::one(f),
        })
    }

    pub fn constant(&self, c: &FqElem) -> RingElem {
        RingElem::from_poly(self, Poly::constant(c))
    }

    pub fn from_int(&self, n: i64) -> RingElem {
        self.constant(&self.field().from_int(n))
    }

    /// Parses a ring or fraction expression such as `3*y^2` or `1/(x+1)`.
    pub fn parse(&self, text: &str) -> Result<FracElem> {
        crate::expr::parse_frac(self, text)
    }
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            CurveKind::PolyLine => write!(f, "A^1 over {}", self.0.field),
            CurveKind::Weierstrass { cubic, .. } => {
                write!(f, "y^2 = {} over {}", cubic, self.0.field)
            }
        }
    }
}

/// `A(x) + B(x) y` in canonical form (`B = 0` on the line).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    curve: CurveSpec,
    a: Poly,
    b: Poly,
}

impl std::hash::Hash for CurveSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.field.q().hash(state);
    }
}

impl RingElem {
    pub fn from_poly(curve: &CurveSpec, a: Poly) -> RingElem {
        let b = Poly::zero(curve.field());
        RingElem {
            curve: curve.clone(),
            a,
            b,
        }
    }

    pub fn new(curve: &CurveSpec, a: Poly, b: Poly) -> Result<RingElem> {
        if a.field() != curve.field() || b.field() != curve.field() {
            return Err(Error::FieldMismatch);
        }
        if !curve.is_weierstrass() && !b.is_zero() {
            return Err(Error::InvalidInput("y-part must vanish on the affine line".into()));
        }
        Ok(RingElem {
            curve: curve.clone(),
            a,
            b,
        })
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    /// The `1`-component `A`.
    pub fn a(&self) -> &Poly {
        &self.a
    }

    /// The `y`-component `B`.
    pub fn b(&self) -> &Poly {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// `Some(c)` when the element is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<FqElem> {
        (self.b.is_zero() && self.a.is_constant()).then(|| self.a.coeff(0))
    }

    pub fn conj(&self) -> RingElem {
        RingElem {
            curve: self.curve.clone(),
            a: self.a.clone(),
            b: -&self.b,
        }
    }

    /// `u * conj(u) = A^2 - B^2 (x^3 + a x + b)`.
    pub fn norm(&self) -> Poly {
        match self.curve.cubic() {
            None => &self.a * &self.a,
            Some(f) => &(&self.a * &self.a) - &(&(&self.b * &self.b) * f),
        }
    }

    /// A unit of `O` is a nonzero constant. Both characterisations are computed
    /// and must agree.
    pub fn is_unit(&self) -> bool {
        let by_shape = self.as_constant().is_some_and(|c| !c.is_zero());
        let n = self.norm();
        let by_norm = n.is_constant() && !n.is_zero();
        assert_eq!(by_shape, by_norm, "unit tests disagree on {self}");
        by_shape
    }

    pub fn scale(&self, c: &FqElem) -> RingElem {
        RingElem {
            curve: self.curve.clone(),
            a: self.a.scale(c),
            b: self.b.scale(c),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> RingElem {
        RingElem {
            curve: self.curve.clone(),
            a: &self.a * p,
            b: &self.b * p,
        }
    }

    pub fn pow(&self, mut e: u32) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.curve.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `Some(self / d)` when the quotient lies in `O`.
    pub fn exact_div(&self, d: &RingElem) -> Option<RingElem> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let t = self * &d.conj();
        Some(RingElem {
            curve: self.curve.clone(),
            a: t.a.exact_div(&n)?,
            b: t.b.exact_div(&n)?,
        })
    }

    /// All `w` in `O` with `w^2 = self` (at most two, since `O` is a domain).
    ///
    /// Writing `w = A + B y` and `self = P + R y`, the norm gives `N(w)^2 = N(self)`,
    /// so `N(w) = s` for a square root `s` of `N(self)`, and then
    /// `A^2 = (P + s)/2`, `B^2 f = (P - s)/2`.
    pub fn square_roots(&self) -> Vec<RingElem> {
        if self.is_zero() {
            return vec![self.clone()];
        }
        let mut out: Vec<RingElem> = Vec::new();
        let mut push = |w: RingElem| {
            if !out.contains(&w) {
                out.push(w);
            }
        };
        let Some(f) = self.curve.cubic() else {
            if let Some(s) = self.a.sqrt() {
                push(RingElem::from_poly(&self.curve, -&s));
                push(RingElem::from_poly(&self.curve, s));
            }
            return out;
        };
        let Some(n) = self.norm().sqrt() else {
            return out;
        };
        let half = self.curve.field().from_int(2).inv().unwrap();
        for s in [n.clone(), -&n] {
            let a2 = (&self.a + &s).scale(&half);
            let Some(b2) = (&self.a - &s).scale(&half).exact_div(f) else {
                continue;
            };
            let (Some(a), Some(b)) = (a2.sqrt(), b2.sqrt()) else {
                continue;
            };
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let w = RingElem {
                    curve: self.curve.clone(),
                    a: if sa > 0 { a.clone() } else { -&a },
                    b: if sb > 0 { b.clone() } else { -&b },
                };
                if &w * &w == *self {
                    push(w);
                }
            }
        }
        out
    }

    /// Largest `x`-degree of the two components; `None` for zero.
    pub fn x_degree(&self) -> Option<usize> {
        self.a.degree().max(self.b.degree())
    }

    /// Value at a point `(x0, y0)` whose coordinates live in `emb.target()`.
    pub fn eval_at(&self, emb: &Embedding, x0: &FqElem, y0: &FqElem) -> FqElem {
        let av = self.a.eval_via(emb, x0);
        if self.b.is_zero() {
            return av;
        }
        &av + &(&self.b.eval_via(emb, x0) * y0)
    }

    fn check(&self, o: &RingElem) {
        assert!(self.curve == o.curve, "ring elements over different curves");
    }

    pub fn to_parts_string(&self) -> (String, String) {
        (self.a.to_string(), self.b.to_string())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let bs = if self.b.is_one() {
            "y".to_string()
        } else if self.b.c_count() == 1 {
            format!("{}*y", self.b)
        } else {
            format!("({})*y", self.b)
        };
        if self.a.is_zero() {
            f.write_str(&bs)
        } else {
            write!(f, "{}+{}", self.a, bs)
        }
    }
}

impl Poly {
    fn c_count(&self) -> usize {
        self.raw().iter().filter(|&&c| c != 0).count()
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, o: &RingElem) -> RingElem {
        self.check(o);
        RingElem {
            curve: self.curve.clone(),
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        self.check(o);
        RingElem {
            curve: self.curve.clone(),
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            curve: self.curve.clone(),
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        self.check(o);
        let mut a = &self.a * &o.a;
        if let Some(f) = self.curve.cubic() {
            if !self.b.is_zero() && !o.b.is_zero() {
                a = &a + &(&(&self.b * &o.b) * f);
            }
        }
        let b = &(&self.a * &o.b) + &(&self.b * &o.a);
        RingElem {
            curve: self.curve.clone(),
            a,
            b,
        }
    }
}

owned_ops!(RingElem, Add add, Sub sub, Mul mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
    Conj,
    Norm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingResult {
    Elem(RingElem),
    Norm(Poly),
}

/// Checked entry point; `Conj` and `Norm` ignore `v`.
pub fn ring_arith(u: &RingElem, v: &RingElem, op: RingOp) -> Result<RingResult> {
    if u.curve != v.curve {
        return Err(Error::CurveMismatch);
    }
    Ok(match op {
        RingOp::Add => RingResult::Elem(u + v),
        RingOp::Mul => RingResult::Elem(u * v),
        RingOp::Conj => RingResult::Elem(u.conj()),
        RingOp::Norm => RingResult::Norm(u.norm()),
    })
}

/// `num / den` with `den` monic in `F_q[x]` and no common polynomial factor
/// dividing `den`, `A` and `B`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FracElem {
    num: RingElem,
    den: Poly,
}

impl FracElem {
    pub fn new(num: RingElem, den: Poly) -> Result<FracElem> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            let one = Poly::one(den.field());
            return Ok(FracElem { num, den: one });
        }
        let g = num.a.gcd(&num.b).gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                RingElem {
                    curve: num.curve.clone(),
                    a: num.a.exact_div(&g).unwrap(),
                    b: num.b.exact_div(&g).unwrap(),
                },
                den.exact_div(&g).unwrap(),
            )
        };
        let l = den.leading().unwrap();
        if l.is_one() {
            return Ok(FracElem { num, den });
        }
        let li = l.inv()?;
        Ok(FracElem {
            num: num.scale(&li),
            den: den.scale(&li),
        })
    }

    pub fn from_ring(num: RingElem) -> FracElem {
        let den = Poly::one(num.curve.field());
        FracElem { num, den }
    }

    pub fn num(&self) -> &RingElem {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.num.curve
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_ring(&self) -> Option<&RingElem> {
        self.is_integral().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<FqElem> {
        self.as_ring().and_then(|r| r.as_constant())
    }

    pub fn inv(&self) -> Result<FracElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        FracElem::new(self.num.conj().mul_poly(&self.den), self.num.norm())
    }

    pub fn try_div(&self, o: &FracElem) -> Result<FracElem> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> FracElem {
        FracElem::new(self.num.pow(e), self.den.pow(e)).unwrap()
    }

    /// Value at a point where the denominator does not vanish.
    pub fn eval_at(&self, emb: &Embedding, x0: &FqElem, y0: &FqElem) -> Option<FqElem> {
        let d = self.den.eval_via(emb, x0);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval_at(emb, x0, y0) / &d)
    }
}

impl fmt::Display for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for FracElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &FracElem {
    type Output = FracElem;
    fn add(self, o: &FracElem) -> FracElem {
        if self.den == o.den {
            return FracElem::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        let num = &self.num.mul_poly(&o.den) + &o.num.mul_poly(&self.den);
        FracElem::new(num, &self.den * &o.den).unwrap()
    }
}

impl Neg for &FracElem {
    type Output = FracElem;
    fn neg(self) -> FracElem {
        FracElem {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &FracElem {
    type Output = FracElem;
    fn sub(self, o: &FracElem) -> FracElem {
        self + &(-o)
    }
}

impl Mul for &FracElem {
    type Output = FracElem;
    fn mul(self, o: &FracElem) -> FracElem {
        if self.den.is_one() && o.den.is_one() {
            return FracElem::from_ring(&self.num * &o.num);
        }
        FracElem::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

owned_ops!(FracElem, Add add, Sub sub, Mul mul);

/// A square matrix over the fraction field of `O`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    curve: CurveSpec,
    n: usize,
    entries: Vec<FracElem>,
}

impl RingMatrix {
    pub fn new(curve: &CurveSpec, n: usize, entries: Vec<FracElem>) -> Result<RingMatrix> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.curve() != curve) {
            return Err(Error::CurveMismatch);
        }
        Ok(RingMatrix {
            curve: curve.clone(),
            n,
            entries,
        })
    }

    pub fn from_rows(curve: &CurveSpec, rows: Vec<Vec<FracElem>>) -> Result<RingMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        RingMatrix::new(curve, n, rows.into_iter().flatten().collect())
    }

    /// Rows of expressions, e.g. `[["1/y", "3*y"], ["2/y", "2*y"]]`.
    pub fn parse(curve: &CurveSpec, rows: &[&[&str]]) -> Result<RingMatrix> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| curve.parse(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        RingMatrix::from_rows(curve, rows)
    }

    pub fn identity(curve: &CurveSpec, n: usize) -> RingMatrix {
        let entries = (0..n * n)
            .map(|i| FracElem::from_ring(if i / n == i % n { curve.one() } else { curve.zero() }))
            .collect();
        RingMatrix {
            curve: curve.clone(),
            n,
            entries,
        }
    }

    pub fn diagonal(curve: &CurveSpec, diag: Vec<FracElem>) -> RingMatrix {
        let n = diag.len();
        let mut m = RingMatrix::identity(curve, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.entries[i * n + i] = d;
        }
        m
    }

    pub fn curve(&self) -> &CurveSpec {
        &self.curve
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FracElem {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FracElem] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<FracElem>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FracElem> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| e.is_integral())
    }

    pub fn transpose(&self) -> RingMatrix {
        let n = self.n;
        let entries = (0..n * n).map(|i| self.get(i % n, i / n).clone()).collect();
        RingMatrix {
            curve: self.curve.clone(),
            n,
            entries,
        }
    }

    pub fn mul(&self, o: &RingMatrix) -> Result<RingMatrix> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n, o.n)));
        }
        if self.curve != o.curve {
            return Err(Error::CurveMismatch);
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = FracElem::from_ring(self.curve.zero());
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * o.get(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(RingMatrix {
            curve: self.curve.clone(),
            n,
            entries,
        })
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &FracElem) -> RingMatrix {
        RingMatrix {
            curve: self.curve.clone(),
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    /// Determinant by Bareiss elimination on the integral matrix obtained by
    /// clearing each row's denominators.
    pub fn det(&self) -> FracElem {
        let n = self.n;
        let curve = &self.curve;
        if n == 0 {
            return FracElem::from_ring(curve.one());
        }
        let mut scale = Poly::one(curve.field());
        let mut m: Vec<Vec<RingElem>> = Vec::with_capacity(n);
        for row in self.entries.chunks(n) {
            let mut l = Poly::one(curve.field());
            for e in row {
                let g = l.gcd(&e.den);
                l = &l * &e.den.exact_div(&g).unwrap();
            }
            scale = &scale * &l;
            m.push(
                row.iter()
                    .map(|e| e.num.mul_poly(&l.exact_div(&e.den).unwrap()))
                    .collect(),
            );
        }
        let mut sign = false;
        let mut prev = curve.one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = !sign;
                    }
                    None => return FracElem::from_ring(curve.zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let mut d = m[n - 1][n - 1].clone();
        if sign {
            d = -&d;
        }
        FracElem::new(d, scale).unwrap()
    }

    /// `Q^t F Q`.
    pub fn congruence(q: &RingMatrix, f: &RingMatrix) -> Result<RingMatrix> {
        q.transpose().mul(f)?.mul(q)
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatOp {
    Mul,
    Transpose,
    Det,
    /// `M^t N M` with `M` the transition matrix and `N` the form.
    Congruence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatResult {
    Matrix(RingMatrix),
    Scalar(FracElem),
}

pub fn mat_ops(m: &RingMatrix, n: &RingMatrix, op: MatOp) -> Result<MatResult> {
    Ok(match op {
        MatOp::Mul => MatResult::Matrix(m.mul(n)?),
        MatOp::Transpose => MatResult::Matrix(m.transpose()),
        MatOp::Det => MatResult::Scalar(m.det()),
        MatOp::Congruence => MatResult::Matrix(RingMatrix::congruence(m, n)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::make_extension;

    fn e523() -> CurveSpec {
        CurveSpec::weierstrass_ints(&make_extension(5, 1).unwrap(), 2, 3).unwrap()
    }

    fn r(c: &CurveSpec, s: &str) -> RingElem {
        c.parse(s).unwrap().as_ring().unwrap().clone()
    }

    #[test]
    fn curve_flags() {
        let c = e523();
        assert!(!c.is_smooth());
        assert!(c.discriminant().unwrap().is_zero());
        let smooth = CurveSpec::weierstrass_ints(c.field(), 1, 1).unwrap();
        assert_eq!(smooth.discriminant().unwrap(), &c.field().from_int(4));
        assert!(CurveSpec::polyline(c.field()).is_smooth());
        let f7 = make_extension(7, 1).unwrap();
        assert!(CurveSpec::weierstrass(&c.field().one(), &f7.one()).is_err());
    }

    #[test]
    fn defining_relation_and_norms() {
        let c = e523();
        let y = c.y().unwrap();
        let yy = &y * &y;
        assert!(yy.b().is_zero());
        assert_eq!(yy, r(&c, "x^3+2*x+3"));
        assert_eq!(y.norm(), -c.cubic().unwrap());
        let three = c.from_int(3);
        assert_eq!(three.norm(), Poly::constant(&c.field().from_int(9)));
        assert!(matches!(
            ring_arith(&y, &CurveSpec::polyline(c.field()).one(), RingOp::Add),
            Err(Error::CurveMismatch)
        ));
    }

    #[test]
    fn units() {
        let c = e523();
        assert!(c.from_int(3).is_unit());
        assert!(!c.x().is_unit());
        assert!(!c.y().unwrap().is_unit());
        assert!(!c.zero().is_unit());
    }

    #[test]
    fn units_agree_on_small_elements() {
        let c = e523();
        let f = c.field();
        for packed in 0..5u32.pow(4) {
            let d = [packed % 5, packed / 5 % 5, packed / 25 % 5, packed / 125];
            let u = RingElem::new(
                &c,
                Poly::from_ints(f, &[d[0] as i64, d[1] as i64]),
                Poly::from_ints(f, &[d[2] as i64, d[3] as i64]),
            )
            .unwrap();
            let expect = d[1] == 0 && d[2] == 0 && d[3] == 0 && d[0] != 0;
            assert_eq!(u.is_unit(), expect, "{u}");
        }
    }

    #[test]
    fn fractions_rationalize() {
        let c = e523();
        let inv_y = c.parse("1/y").unwrap();
        assert_eq!(inv_y.num(), &c.y().unwrap());
        assert_eq!(inv_y.den(), c.cubic().unwrap());
        assert!(c.parse("y^2/(x+1)").unwrap().is_integral());
        assert_eq!(
            &inv_y * &FracElem::from_ring(c.y().unwrap()),
            FracElem::from_ring(c.one())
        );
        assert!(FracElem::from_ring(c.zero()).inv().is_err());
    }

    #[test]
    fn worked_congruences() {
        let c = e523();
        let g = RingMatrix::parse(&c, &[&["0", "2"], &["2", "3*y^2"]]).unwrap();
        let q = RingMatrix::parse(&c, &[&["1/y", "3*y"], &["2/y", "2*y"]]).unwrap();
        let p = RingMatrix::parse(&c, &[&["3/(x+1)", "x*(x+1)"], &["1/(x+1)", "2*(x+1)^2"]]).unwrap();
        let id = RingMatrix::identity(&c, 2);
        assert_eq!(RingMatrix::congruence(&q, &id).unwrap(), g);
        assert_eq!(RingMatrix::congruence(&p, &id).unwrap(), g);
        assert_eq!(
            g,
            RingMatrix::parse(&c, &[&["0", "2"], &["2", "3*(x^3+2*x+3)"]]).unwrap()
        );
        assert_eq!(RingMatrix::congruence(&id, &g).unwrap(), g);
        assert_eq!(g.det().as_constant().unwrap(), c.field().from_int(1));
        assert_eq!(q.det().as_constant().unwrap(), c.field().from_int(1));
        assert_eq!(p.det().as_constant().unwrap(), c.field().from_int(1));
    }

    #[test]
    fn ring_square_roots() {
        let c = e523();
        for s in ["y", "x+2*y", "3+x*y", "x^2+4", "2", "(x+1)*y+x^2"] {
            let w = r(&c, s);
            let roots = (&w * &w).square_roots();
            assert_eq!(roots.len(), 2, "{s}");
            assert!(roots.contains(&w) && roots.contains(&-&w));
        }
        assert!(r(&c, "y").square_roots().is_empty());
        assert!(r(&c, "2").square_roots().is_empty());
        let line = CurveSpec::polyline(c.field());
        assert_eq!(
            line.parse("(x+3)^2").unwrap().as_ring().unwrap().square_roots().len(),
            2
        );
    }

    #[test]
    fn dimension_errors() {
        let c = e523();
        let a = RingMatrix::identity(&c, 2);
        let b = RingMatrix::identity(&c, 3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch(_))));
        assert!(RingMatrix::new(&c, 2, vec![]).is_err());
        assert!(matches!(
            mat_ops(&a, &b, MatOp::Congruence),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn det_with_pivoting() {
        let c = e523();
        let m = RingMatrix::parse(&c, &[&["0", "y", "1"], &["x", "0", "2"], &["1", "1", "0"]]).unwrap();
        // Cofactor expansion along the first row: -y(0 - 2) + 1(x - 0) = 2y + x.
        assert_eq!(m.det(), c.parse("2*y+x").unwrap());
    }
}
