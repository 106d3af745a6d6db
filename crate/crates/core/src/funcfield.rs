//! `F_q[x]`, its fraction field, places and residue fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::finfield::{make_extension_bounded, Embedding, FqElem, FqField, EXTENSION_BOUND};

/// Work cap (number of trial divisors) for factorization and irreducibility tests.
pub const TRIAL_DIVISION_CAP: u64 = 5_000_000;

/// A polynomial over `F_q`, coefficients least significant first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FqField,
    c: Vec<u32>,
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl Poly {
    pub(crate) fn from_raw(field: &FqField, mut c: Vec<u32>) -> Poly {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly {
            field: field.clone(),
            c,
        }
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.c
    }

    pub fn zero(field: &FqField) -> Poly {
        Poly::from_raw(field, Vec::new())
    }

    pub fn one(field: &FqField) -> Poly {
        Poly::from_raw(field, vec![1])
    }

    pub fn x(field: &FqField) -> Poly {
        Poly::from_raw(field, vec![0, 1])
    }

    pub fn constant(c: &FqElem) -> Poly {
        Poly::from_raw(c.field(), vec![c.index()])
    }

    pub fn from_elems(field: &FqField, coeffs: &[FqElem]) -> Poly {
        Poly::from_raw(field, coeffs.iter().map(|c| c.index()).collect())
    }

    /// Integer coefficients reduced mod `p`, least significant first.
    pub fn from_ints(field: &FqField, coeffs: &[i64]) -> Poly {
        let c = coeffs.iter().map(|&n| field.from_int(n).index()).collect();
        Poly::from_raw(field, c)
    }

    pub fn parse(field: &FqField, text: &str) -> Result<Poly> {
        crate::expr::parse_poly(field, text)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.field.elem(self.c.get(i).copied().unwrap_or(0))
    }

    pub fn coeffs(&self) -> Vec<FqElem> {
        self.c.iter().map(|&v| self.field.elem(v)).collect()
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.c.last().map(|&v| self.field.elem(v))
    }

    pub fn is_monic(&self) -> bool {
        self.c.last() == Some(&1)
    }

    /// Scales to leading coefficient 1; zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.c.last() {
            None | Some(1) => self.clone(),
            Some(&l) => {
                let inv = self.field.inv_raw(l).unwrap();
                self.scale_raw(inv)
            }
        }
    }

    pub fn scale(&self, s: &FqElem) -> Poly {
        self.scale_raw(s.index())
    }

    fn scale_raw(&self, s: u32) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.c.iter().map(|&a| f.mul_raw(a, s)).collect())
    }

    fn check(&self, other: &Poly) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = &self.field;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv_raw(*d.c.last().unwrap()).unwrap();
        let mut r = self.c.clone();
        let mut quot = vec![0u32; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul_raw(r[i], lead_inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dj) in d.c.iter().enumerate() {
                r[i - dd + j] = f.sub_raw(r[i - dd + j], f.mul_raw(c, dj));
            }
        }
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divmod(d)?.1)
    }

    /// `Some(self / d)` when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        match self.divmod(d) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        !self.is_zero() && other.exact_div(self).is_some()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| f.mul_raw(a, f.from_int(i as i64).index()))
            .collect();
        Poly::from_raw(f, c)
    }

    pub fn eval(&self, at: &FqElem) -> FqElem {
        assert!(at.field() == &self.field, "evaluation point outside base field");
        let f = &self.field;
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = f.add_raw(f.mul_raw(acc, at.index()), a);
        }
        f.elem(acc)
    }

    /// Evaluates at a point of an extension, mapping coefficients through `emb`.
    pub fn eval_via(&self, emb: &Embedding, at: &FqElem) -> FqElem {
        let mut acc = emb.target().zero();
        for a in self.coeffs().iter().rev() {
            acc = &(&acc * at) + &emb.map(a);
        }
        acc
    }

    /// Evaluates a polynomial with prime-field coefficients at `z` in any field of
    /// the same characteristic.
    pub(crate) fn eval_prime_coeffs_in(&self, z: &FqElem) -> FqElem {
        let t = z.field();
        let mut acc = t.zero();
        for &a in self.c.iter().rev() {
            acc = &(&acc * z) + &t.from_int(a as i64);
        }
        acc
    }

    /// Monic polynomials of degree `d` in packed-coefficient order.
    pub fn monic_of_degree(field: &FqField, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = field.q() as u64;
        let count = q.pow(d as u32);
        (0..count).map(move |mut packed| {
            let mut c = Vec::with_capacity(d + 1);
            for _ in 0..d {
                c.push((packed % q) as u32);
                packed /= q;
            }
            c.push(1);
            Poly::from_raw(field, c)
        })
    }

    fn trial_work(&self) -> u64 {
        let q = self.field.q() as u64;
        let half = self.degree().unwrap_or(0) / 2;
        (1..=half as u32).map(|d| q.saturating_pow(d)).sum()
    }

    /// Irreducibility by trial division with every monic divisor of degree up to `deg/2`.
    pub fn is_irreducible(&self) -> bool {
        let Some(deg) = self.degree() else {
            return false;
        };
        if deg == 0 {
            return false;
        }
        (1..=deg / 2).all(|d| Poly::monic_of_degree(&self.field, d).all(|g| !g.divides(self)))
    }

    /// A square root, if one exists: `S` with `S^2 = self`. The other root is `-S`.
    pub fn sqrt(&self) -> Option<Poly> {
        let f = &self.field;
        let Some(deg) = self.degree() else {
            return Some(self.clone());
        };
        if deg % 2 == 1 {
            return None;
        }
        let h = deg / 2;
        let lead = self.leading().unwrap().sqrt()?;
        let mut s = vec![0u32; h + 1];
        s[h] = lead.index();
        let inv = f.inv_raw(f.add_raw(s[h], s[h])).unwrap();
        for i in (0..h).rev() {
            let mut acc = self.c[h + i];
            for j in i + 1..h {
                acc = f.sub_raw(acc, f.mul_raw(s[j], s[h + i - j]));
            }
            s[i] = f.mul_raw(acc, inv);
        }
        let root = Poly::from_raw(f, s);
        (&root * &root == *self).then_some(root)
    }

    /// Multiplicity of `prime` in `self`; `None` for the zero polynomial.
    pub fn multiplicity(&self, prime: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut n = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(prime) {
            n += 1;
            cur = q;
        }
        Some(n)
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('+');
            }
            let cs = self.field.elem(a).to_string();
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            match i {
                0 => out.push_str(&cs),
                _ => {
                    if a != 1 {
                        out.push_str(&cs);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let f = &self.field;
        let n = self.c.len().max(rhs.c.len());
        let c = (0..n)
            .map(|i| f.add_raw(self.c.get(i).copied().unwrap_or(0), rhs.c.get(i).copied().unwrap_or(0)))
            .collect();
        Poly::from_raw(f, c)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.c.iter().map(|&a| f.neg_raw(a)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check(rhs);
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![0u32; self.c.len() + rhs.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.c.iter().enumerate() {
                c[i + j] = f.add_raw(c[i + j], f.mul_raw(a, b));
            }
        }
        Poly::from_raw(f, c)
    }
}

macro_rules! owned_ops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
pub(crate) use owned_ops;

owned_ops!(Poly, Add add, Sub sub, Mul mul);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    DivMod,
    Gcd,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyResult {
    Single(Poly),
    Pair(Poly, Poly),
}

pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<PolyResult> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    Ok(match op {
        PolyOp::Add => PolyResult::Single(a + b),
        PolyOp::Mul => PolyResult::Single(a * b),
        PolyOp::DivMod => {
            let (q, r) = a.divmod(b)?;
            PolyResult::Pair(q, r)
        }
        PolyOp::Gcd => PolyResult::Single(a.gcd(b)),
    })
}

/// A place of `F_q(x)`: a monic irreducible, or the infinite place `1/x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PrimePoly {
    Finite(Poly),
    Infinity,
}

impl PrimePoly {
    pub fn finite(p: Poly) -> Result<PrimePoly> {
        if !p.is_monic() || !p.is_irreducible() {
            return Err(Error::InvalidInput(format!("{p} is not a monic irreducible")));
        }
        Ok(PrimePoly::Finite(p))
    }

    pub fn parse(field: &FqField, text: &str) -> Result<PrimePoly> {
        if text.trim() == "inf" {
            Ok(PrimePoly::Infinity)
        } else {
            PrimePoly::finite(Poly::parse(field, text)?)
        }
    }

    /// Degree of the residue field over `F_q`; `1` for the infinite place.
    pub fn degree(&self) -> usize {
        match self {
            PrimePoly::Finite(p) => p.degree().unwrap(),
            PrimePoly::Infinity => 1,
        }
    }
}

impl fmt::Display for PrimePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimePoly::Finite(p) => write!(f, "{p}"),
            PrimePoly::Infinity => f.write_str("inf"),
        }
    }
}

/// Every monic irreducible of degree `d` over `field`, in packed order.
pub fn monic_irreducibles(field: &FqField, d: usize) -> Vec<Poly> {
    Poly::monic_of_degree(field, d).filter(|p| p.is_irreducible()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: FqElem,
    pub factors: Vec<(PrimePoly, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (p, e) in &self.factors {
            if let PrimePoly::Finite(p) = p {
                acc = &acc * &p.pow(*e);
            }
        }
        acc
    }
}

/// `2*(x+1)^2*(x+3)`; the unit is omitted when it is one.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.unit.is_one() || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (p, e) in &self.factors {
            parts.push(if *e == 1 {
                format!("({p})")
            } else {
                format!("({p})^{e}")
            });
        }
        f.write_str(&parts.join("*"))
    }
}

/// Trial division by monic polynomials in increasing degree. The first divisor
/// found in each degree is necessarily irreducible.
pub fn factor(f: &Poly) -> Result<Factorization> {
    if f.is_zero() {
        return Err(Error::ZeroInput("cannot factor the zero polynomial".into()));
    }
    if f.trial_work() > TRIAL_DIVISION_CAP {
        return Err(Error::SizeBound(format!(
            "factoring degree {} over {} needs more than {TRIAL_DIVISION_CAP} trial divisions",
            f.degree().unwrap(),
            f.field
        )));
    }
    let unit = f.leading().unwrap();
    let mut rest = f.monic();
    let mut factors = Vec::new();
    let mut d = 1;
    while 2 * d <= rest.degree().unwrap() {
        for g in Poly::monic_of_degree(&f.field, d) {
            let mut e = 0;
            while let Some(q) = rest.exact_div(&g) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                factors.push((g, e));
            }
        }
        d += 1;
    }
    if rest.degree().unwrap() > 0 {
        factors.push((rest, 1));
    }
    let factors = factors
        .into_iter()
        .map(|(g, e)| {
            debug_assert!(g.is_irreducible());
            (PrimePoly::Finite(g), e)
        })
        .collect();
    Ok(Factorization { unit, factors })
}

/// An element of `F_q(x)`, denominator monic and coprime to the numerator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = num.field.clone();
        if num.is_zero() {
            return Ok(RatFunc {
                num,
                den: Poly::one(&field),
            });
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).unwrap();
        let den = den.exact_div(&g).unwrap();
        let l = den.leading().unwrap().inv()?;
        Ok(RatFunc {
            num: num.scale(&l),
            den: den.scale(&l),
        })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let one = Poly::one(&p.field);
        RatFunc { num: p, den: one }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

pub fn valuation(r: &RatFunc, p: &PrimePoly) -> Result<i64> {
    if r.is_zero() {
        return Err(Error::ZeroInput("valuation of zero is +infinity".into()));
    }
    Ok(match p {
        PrimePoly::Finite(pi) => r.num.multiplicity(pi).unwrap() as i64 - r.den.multiplicity(pi).unwrap() as i64,
        PrimePoly::Infinity => r.den.degree().unwrap() as i64 - r.num.degree().unwrap() as i64,
    })
}

/// `F_q[x]/(pi)` realised inside the canonical field `F_{p^(k deg pi)}`: the
/// base field embeds through [`Embedding::new`] and `x` maps to the root of `pi`
/// of smallest packed value.
#[derive(Clone, Debug)]
pub struct ResidueField {
    prime: Poly,
    embedding: Embedding,
    x_image: FqElem,
}

impl ResidueField {
    pub fn new(prime: &Poly) -> Result<ResidueField> {
        if !prime.is_monic() || !prime.is_irreducible() {
            return Err(Error::InvalidInput(format!("{prime} is not a monic irreducible")));
        }
        let base = prime.field();
        let k = base.k() * prime.degree().unwrap();
        let target = make_extension_bounded(base.p(), k, EXTENSION_BOUND)?;
        let embedding = Embedding::new(base, &target)?;
        let x_image = target
            .elements()
            .find(|z| prime.eval_via(&embedding, z).is_zero())
            .expect("irreducible of degree d splits in the degree d extension");
        Ok(ResidueField {
            prime: prime.clone(),
            embedding,
            x_image,
        })
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    pub fn field(&self) -> &FqField {
        self.embedding.target()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn x_image(&self) -> &FqElem {
        &self.x_image
    }

    pub fn reduce_poly(&self, p: &Poly) -> FqElem {
        p.eval_via(&self.embedding, &self.x_image)
    }

    pub fn reduce(&self, r: &RatFunc) -> Result<FqElem> {
        if r.den.multiplicity(&self.prime).unwrap() > 0 {
            return Err(Error::NotIntegral(self.prime.to_string()));
        }
        let d = self.reduce_poly(&r.den);
        Ok(&self.reduce_poly(&r.num) / &d)
    }
}

pub fn residue_reduce(r: &RatFunc, p: &PrimePoly) -> Result<FqElem> {
    match p {
        PrimePoly::Finite(pi) => ResidueField::new(pi)?.reduce(r),
        PrimePoly::Infinity => Err(Error::InvalidInput(
            "the infinite place is not a prime of the coordinate ring".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::make_extension;
    use proptest::prelude::*;

    fn f5() -> FqField {
        make_extension(5, 1).unwrap()
    }

    fn p(field: &FqField, s: &str) -> Poly {
        Poly::parse(field, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f = f5();
        assert!(p(&f, "1-x").gcd(&p(&f, "1+x")).is_one());
        assert_eq!(&p(&f, "x+1").pow(2) * &p(&f, "x-2"), p(&f, "x^3+2*x+3"));
        let a = p(&f, "3*x^2+x");
        assert_eq!(&a * &Poly::one(&f), a);
        let (q, r) = p(&f, "x^3+2*x+3").divmod(&p(&f, "x+1")).unwrap();
        assert_eq!(q, p(&f, "x^2+4*x+3"));
        assert!(r.is_zero());
        assert!(matches!(a.divmod(&Poly::zero(&f)), Err(Error::DivisionByZero)));
        assert_eq!(p(&f, "2*x+4").gcd(&p(&f, "3*x+1")), p(&f, "x+2"));
    }

    #[test]
    fn factor_examples() {
        let f = f5();
        let fac = factor(&p(&f, "x^3+2*x+3")).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (PrimePoly::Finite(p(&f, "x+1")), 2),
                (PrimePoly::Finite(p(&f, "x+3")), 1)
            ]
        );
        let fac = factor(&p(&f, "x^2-1")).unwrap();
        assert_eq!(
            fac.factors,
            vec![
                (PrimePoly::Finite(p(&f, "x+1")), 1),
                (PrimePoly::Finite(p(&f, "x+4")), 1)
            ]
        );
        let f3 = make_extension(3, 1).unwrap();
        let fac = factor(&p(&f3, "x^2+1")).unwrap();
        assert_eq!(fac.factors, vec![(PrimePoly::Finite(p(&f3, "x^2+1")), 1)]);
        assert!(factor(&Poly::zero(&f)).is_err());
        let big = make_extension(11, 2).unwrap();
        assert!(matches!(factor(&Poly::x(&big).pow(9)), Err(Error::SizeBound(_))));
    }

    #[test]
    fn square_roots() {
        let f = f5();
        let s = p(&f, "2*x^2+x+3");
        let r = (&s * &s).sqrt().unwrap();
        assert!(r == s || r == -&s);
        assert!(p(&f, "x^3").sqrt().is_none());
        assert!(p(&f, "2*x^2").sqrt().is_none());
        assert!(p(&f, "x^2+1").sqrt().is_none());
        assert_eq!(Poly::zero(&f).sqrt(), Some(Poly::zero(&f)));
    }

    #[test]
    fn valuations() {
        let f = f5();
        let r = RatFunc::new(p(&f, "(x+1)^2"), p(&f, "x+3")).unwrap();
        let at = |s: &str| PrimePoly::finite(p(&f, s)).unwrap();
        assert_eq!(valuation(&r, &at("x+1")).unwrap(), 2);
        assert_eq!(
            valuation(&RatFunc::from_poly(p(&f, "x^3")), &PrimePoly::Infinity).unwrap(),
            -3
        );
        let inv_x = RatFunc::new(Poly::one(&f), Poly::x(&f)).unwrap();
        assert_eq!(valuation(&inv_x, &at("x")).unwrap(), -1);
        assert!(valuation(&RatFunc::from_poly(Poly::zero(&f)), &at("x")).is_err());
    }

    #[test]
    fn residues() {
        let f = f5();
        let at = PrimePoly::finite(p(&f, "x+1")).unwrap();
        let r = RatFunc::from_poly(p(&f, "x^2"));
        assert_eq!(residue_reduce(&r, &at).unwrap(), f.from_int(1));
        let r = RatFunc::new(Poly::one(&f), p(&f, "x+3")).unwrap();
        assert_eq!(residue_reduce(&r, &at).unwrap(), f.from_int(3));
        let r = RatFunc::new(Poly::one(&f), p(&f, "x+1")).unwrap();
        assert!(matches!(residue_reduce(&r, &at), Err(Error::NotIntegral(_))));

        let f3 = make_extension(3, 1).unwrap();
        let pi = PrimePoly::finite(p(&f3, "x^2+1")).unwrap();
        let img = residue_reduce(&RatFunc::from_poly(Poly::x(&f3)), &pi).unwrap();
        let f9 = make_extension(3, 2).unwrap();
        assert_eq!(img.field(), &f9);
        assert_eq!(img, f9.generator());
        assert!(residue_reduce(&r, &PrimePoly::Infinity).is_err());
    }

    #[test]
    fn residue_field_over_extension_base() {
        let f9 = make_extension(3, 2).unwrap();
        for pi in monic_irreducibles(&f9, 2) {
            let rf = ResidueField::new(&pi).unwrap();
            assert_eq!(rf.field().q(), 81);
            assert!(rf.reduce_poly(&pi).is_zero());
        }
    }

    #[test]
    fn irreducible_counts() {
        // Gauss: number of monic irreducibles of degree 2 and 3 over F_q.
        for q in [3u32, 5, 7] {
            let f = make_extension(q, 1).unwrap();
            assert_eq!(monic_irreducibles(&f, 2).len() as u32, (q * q - q) / 2);
            assert_eq!(monic_irreducibles(&f, 3).len() as u32, (q * q * q - q) / 3);
        }
    }

    fn arb_poly(field: FqField, max_deg: usize) -> impl Strategy<Value = Poly> {
        let q = field.q();
        proptest::collection::vec(0..q, 0..=max_deg + 1).prop_map(move |c| Poly::from_raw(&field, c))
    }

    fn arb_field() -> impl Strategy<Value = FqField> {
        prop_oneof![Just((3, 1)), Just((5, 1)), Just((7, 1)), Just((3, 2))]
            .prop_map(|(p, k)| make_extension(p, k).unwrap())
    }

    proptest! {
        #[test]
        fn factor_reassembles_and_degree_formula(
            f in arb_field().prop_flat_map(|fd| arb_poly(fd, 8))
        ) {
            prop_assume!(!f.is_zero());
            let fac = factor(&f).unwrap();
            prop_assert_eq!(fac.expand(), f.clone());
            let mut deg = 0;
            for (pp, e) in &fac.factors {
                let PrimePoly::Finite(pi) = pp else { unreachable!() };
                prop_assert!(pi.is_irreducible());
                let r = RatFunc::from_poly(f.clone());
                prop_assert_eq!(valuation(&r, pp).unwrap(), *e as i64);
                deg += *e as usize * pi.degree().unwrap();
            }
            prop_assert_eq!(deg, f.degree().unwrap());
        }

        #[test]
        fn valuation_is_additive(
            (a, b, c) in arb_field().prop_flat_map(|fd| (arb_poly(fd.clone(), 5), arb_poly(fd.clone(), 5), arb_poly(fd, 5)))
        ) {
            prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
            let r = RatFunc::new(a.clone(), b.clone()).unwrap();
            let s = RatFunc::new(c.clone(), a.clone()).unwrap();
            let places: Vec<PrimePoly> = [&a, &b, &c].into_iter()
                .flat_map(|g| factor(g).unwrap().factors.into_iter().map(|(pp, _)| pp))
                .chain([PrimePoly::Infinity]).collect();
            for pp in &places {
                prop_assert_eq!(
                    valuation(&r.mul(&s), pp).unwrap(),
                    valuation(&r, pp).unwrap() + valuation(&s, pp).unwrap()
                );
            }
        }
    }
}
