//! Finite fields `F_q` of odd characteristic.
//!
//! A field is `F_p[t]/(m)` for a monic irreducible `m` of degree `k`. Elements are
//! stored as their coefficient vector packed into a single integer
//! `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`, which doubles as the canonical
//! enumeration order. Multiplication goes through discrete log tables built once
//! per field; fields are cached so that `make_extension` is cheap to call twice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::funcfield::Poly;

/// Largest base field accepted by [`make_extension`].
pub const DESK_BOUND: u64 = 121;

/// Largest field built for residue fields and point enumeration over extensions.
pub const EXTENSION_BOUND: u64 = 10_000;

struct FieldData {
    p: u32,
    k: usize,
    q: u32,
    /// Monic modulus over `F_p`, least significant coefficient first, length `k + 1`.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A finite field `F_q`, `q = p^k`. Cloning is a reference count bump.
#[derive(Clone)]
pub struct FqField(Arc<FieldData>);

impl PartialEq for FqField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FqField {}

impl fmt::Debug for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if self.0.k > 1 {
            write!(f, "[t]/({})", self.modulus_string())?;
        }
        Ok(())
    }
}

impl fmt::Display for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, k)` with `q = p^k`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}

fn field_cache() -> &'static Mutex<HashMap<(u32, usize), FqField>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), FqField>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns `F_{p^k}` with the smallest monic irreducible modulus of degree `k`,
/// ordering moduli by their packed coefficient value. `q` must not exceed
/// [`DESK_BOUND`].
pub fn make_extension(p: u32, k: usize) -> Result<FqField> {
    make_extension_bounded(p, k, DESK_BOUND)
}

/// As [`make_extension`] with an explicit bound on `p^k`.
pub fn make_extension_bounded(p: u32, k: usize, bound: u64) -> Result<FqField> {
    if p == 2 || !is_prime(p as u64) {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    if k == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let q = (p as u64).checked_pow(k as u32).unwrap_or(u64::MAX);
    if q > bound {
        return Err(Error::SizeBound(format!("{p}^{k} = {q} exceeds bound {bound}")));
    }
    if let Some(f) = field_cache().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let modulus = if k == 1 { vec![0, 1] } else { smallest_irreducible(p, k) };
    let field = FqField::build(p, modulus);
    field_cache().lock().unwrap().entry((p, k)).or_insert(field.clone());
    Ok(field)
}

fn prime_field(p: u32) -> FqField {
    make_extension_bounded(p, 1, u64::MAX).expect("odd prime")
}

fn smallest_irreducible(p: u32, k: usize) -> Vec<u32> {
    let fp = prime_field(p);
    let count = (p as u64).pow(k as u32);
    for packed in 0..count {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut r = packed;
        for _ in 0..k {
            coeffs.push((r % p as u64) as u32);
            r /= p as u64;
        }
        coeffs.push(1);
        let poly = Poly::from_raw(&fp, coeffs.clone());
        if poly.is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FqField {
    fn build(p: u32, modulus: Vec<u32>) -> FqField {
        let k = modulus.len() - 1;
        let q = p.pow(k as u32);
        let mut data = FieldData {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        // Find a primitive element by walking powers with schoolbook mulmod.
        for g in 1..q {
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut cur = 1u32;
            loop {
                exp.push(cur);
                cur = slow_mul(&data, cur, g);
                if cur == 1 {
                    break;
                }
            }
            if exp.len() == q as usize - 1 {
                let mut log = vec![0u32; q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                data.exp = exp;
                data.log = log;
                break;
            }
        }
        assert_eq!(data.exp.len(), q as usize - 1, "modulus must be irreducible");
        FqField(Arc::new(data))
    }

    /// Builds `F_p[t]/(m)` for a caller-supplied monic modulus, verifying irreducibility.
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<FqField> {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic of degree >= 1".into()));
        }
        let k = modulus.len() - 1;
        if (p as u64).pow(k as u32) > EXTENSION_BOUND {
            return Err(Error::SizeBound(format!("{p}^{k} exceeds bound {EXTENSION_BOUND}")));
        }
        let coeffs: Vec<u32> = modulus.iter().map(|c| c % p).collect();
        let fp = prime_field(p);
        if !Poly::from_raw(&fp, coeffs.clone()).is_irreducible() {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(FqField::build(p, coeffs))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_string(&self) -> String {
        let fp = prime_field(self.0.p);
        Poly::from_raw(&fp, self.0.modulus.clone()).to_string_in("t")
    }

    pub fn zero(&self) -> FqElem {
        self.elem(0)
    }

    pub fn one(&self) -> FqElem {
        self.elem(1)
    }

    /// The class of `t` (for `k = 1`, `t` reduces to 0 since `m = t`).
    pub fn generator(&self) -> FqElem {
        if self.0.k == 1 {
            self.zero()
        } else {
            self.elem(self.0.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FqElem {
        let p = self.0.p as i64;
        self.elem(n.rem_euclid(p) as u32)
    }

    /// Coefficients least significant first; missing entries are zero.
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FqElem> {
        if coeffs.len() > self.0.k {
            return Err(Error::InvalidInput(format!(
                "{} coefficients given for a degree {} field",
                coeffs.len(),
                self.0.k
            )));
        }
        let p = self.0.p as i64;
        let mut v = 0u32;
        for c in coeffs.iter().rev() {
            v = v * self.0.p + c.rem_euclid(p) as u32;
        }
        Ok(self.elem(v))
    }

    pub(crate) fn elem(&self, v: u32) -> FqElem {
        debug_assert!(v < self.0.q);
        FqElem { field: self.clone(), v }
    }

    /// All elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.0.q).map(move |v| self.elem(v))
    }

    // Raw arithmetic on packed values.

    pub(crate) fn add_raw(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            let d = (a % p + b % p) % p;
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    pub(crate) fn neg_raw(&self, a: u32) -> u32 {
        let p = self.0.p;
        if self.0.k == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let (mut a, mut out, mut place) = (a, 0, 1);
        while a > 0 {
            let d = (p - a % p) % p;
            out += d * place;
            place *= p;
            a /= p;
        }
        out
    }

    pub(crate) fn sub_raw(&self, a: u32, b: u32) -> u32 {
        self.add_raw(a, self.neg_raw(b))
    }

    pub(crate) fn mul_raw(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.k == 1 {
            return ((a as u64 * b as u64) % self.0.p as u64) as u32;
        }
        let n = self.0.q - 1;
        let l = (self.0.log[a as usize] + self.0.log[b as usize]) % n;
        self.0.exp[l as usize]
    }

    pub(crate) fn inv_raw(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let n = self.0.q - 1;
        let l = (n - self.0.log[a as usize]) % n;
        Some(self.0.exp[l as usize])
    }

    pub(crate) fn pow_raw(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn coeffs_raw(&self, mut v: u32) -> Vec<u32> {
        let p = self.0.p;
        (0..self.0.k)
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    fn fmt_raw(&self, v: u32) -> String {
        if self.0.k == 1 {
            return v.to_string();
        }
        let fp = prime_field(self.0.p);
        Poly::from_raw(&fp, self.coeffs_raw(v)).to_string_in("t")
    }
}

/// Multiplication in `F_p[t]/(m)` without log tables; used while building them.
fn slow_mul(data: &FieldData, a: u32, b: u32) -> u32 {
    let (p, k) = (data.p as u64, data.k);
    let digits = |mut v: u32| {
        (0..k)
            .map(|_| {
                let c = v as u64 % p;
                v /= data.p;
                c
            })
            .collect::<Vec<_>>()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k];
    for i in 0..k {
        for j in 0..k {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
        }
    }
    for i in (k..2 * k).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        for j in 0..k {
            let sub = c * data.modulus[j] as u64 % p;
            prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
        }
        prod[i] = 0;
    }
    let mut v = 0u64;
    for i in (0..k).rev() {
        v = v * p + prod[i];
    }
    v as u32
}

/// An element of some [`FqField`].
#[derive(Clone, PartialEq, Eq)]
pub struct FqElem {
    field: FqField,
    v: u32,
}

impl std::hash::Hash for FqElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.v.hash(state);
    }
}

impl FqElem {
    pub fn field(&self) -> &FqField {
        &self.field
    }

    /// Packed coefficient value in `[0, q)`.
    pub fn index(&self) -> u32 {
        self.v
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_raw(self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.v == 0
    }

    pub fn is_one(&self) -> bool {
        self.v == 1
    }

    pub fn inv(&self) -> Result<FqElem> {
        self.field
            .inv_raw(self.v)
            .map(|v| self.field.elem(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.field.elem(self.field.pow_raw(self.v, e))
    }

    /// Euler's criterion: `a^((q-1)/2) = 1`. Zero has no square class.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput("is_square is defined on F_q^x".into()));
        }
        Ok(self.pow((self.field.q() as u64 - 1) / 2).is_one())
    }

    pub fn square_class(&self) -> Result<SquareClass> {
        Ok(if self.is_square()? {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        })
    }

    /// The square root of smallest packed value, found by exhaustive search.
    pub fn sqrt(&self) -> Option<FqElem> {
        (0..self.field.q())
            .find(|&c| self.field.mul_raw(c, c) == self.v)
            .map(|c| self.field.elem(c))
    }

    /// Frobenius-style power `a^(p^e)`.
    pub fn frobenius(&self, q_power: u64) -> FqElem {
        self.pow(q_power)
    }

    fn check(&self, other: &FqElem) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_raw(self.v))
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Raise `a` to the packed value of `b` read as a nonnegative integer.
    Pow,
}

/// Checked binary arithmetic; the operator impls panic where this returns an error.
pub fn field_arith(a: &FqElem, b: &FqElem, op: FieldOp) -> Result<FqElem> {
    a.check(b)?;
    let f = &a.field;
    Ok(match op {
        FieldOp::Add => f.elem(f.add_raw(a.v, b.v)),
        FieldOp::Sub => f.elem(f.sub_raw(a.v, b.v)),
        FieldOp::Mul => f.elem(f.mul_raw(a.v, b.v)),
        FieldOp::Div => f.elem(f.mul_raw(a.v, f.inv_raw(b.v).ok_or(Error::DivisionByZero)?)),
        FieldOp::Pow => a.pow(b.v as u64),
    })
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr<&FqElem> for &FqElem {
            type Output = FqElem;
            fn $m(self, rhs: &FqElem) -> FqElem {
                field_arith(self, rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<FqElem> for FqElem {
            type Output = FqElem;
            fn $m(self, rhs: FqElem) -> FqElem {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FqElem> for FqElem {
            type Output = FqElem;
            fn $m(self, rhs: &FqElem) -> FqElem {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, FieldOp::Add);
binop!(Sub, sub, FieldOp::Sub);
binop!(Mul, mul, FieldOp::Mul);
binop!(Div, div, FieldOp::Div);

impl Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        self.field.elem(self.field.neg_raw(self.v))
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        -&self
    }
}

/// An element of `F_q^x / (F_q^x)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum SquareClass {
    Square,
    NonSquare,
}

impl Mul for SquareClass {
    type Output = SquareClass;
    fn mul(self, rhs: SquareClass) -> SquareClass {
        if self == rhs {
            SquareClass::Square
        } else {
            SquareClass::NonSquare
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareClass::Square => "Square",
            SquareClass::NonSquare => "NonSquare",
        })
    }
}

/// A field embedding `source -> target`, determined by the image of the
/// generator `t` of `source` (a root of its modulus in `target`).
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FqField,
    target: FqField,
    gen_image: FqElem,
}

impl Embedding {
    /// Uses the root of smallest packed value. Requires `k_source | k_target`.
    pub fn new(source: &FqField, target: &FqField) -> Result<Embedding> {
        if source.p() != target.p() || !target.k().is_multiple_of(source.k()) {
            return Err(Error::FieldMismatch);
        }
        let gen_image = if source.k() == 1 {
            target.zero()
        } else {
            let fp = prime_field(source.p());
            let m = Poly::from_raw(&fp, source.modulus().to_vec());
            target
                .elements()
                .find(|z| m.eval_prime_coeffs_in(z).is_zero())
                .ok_or(Error::FieldMismatch)?
        };
        Ok(Embedding {
            source: source.clone(),
            target: target.clone(),
            gen_image,
        })
    }

    pub fn identity(field: &FqField) -> Embedding {
        Embedding {
            source: field.clone(),
            target: field.clone(),
            gen_image: field.generator(),
        }
    }

    pub fn source(&self) -> &FqField {
        &self.source
    }

    pub fn target(&self) -> &FqField {
        &self.target
    }

    pub fn map(&self, a: &FqElem) -> FqElem {
        assert!(a.field == self.source, "element outside embedding source");
        if self.source == self.target {
            return a.clone();
        }
        let t = &self.target;
        let mut acc = t.zero();
        for c in a.coeffs().iter().rev() {
            acc = &(&acc * &self.gen_image) + &t.from_int(*c as i64);
        }
        acc
    }
}
