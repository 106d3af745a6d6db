//! Symmetric bilinear forms over a finite field of odd characteristic.
//!
//! Nondegenerate forms over `F_q` are classified by rank and the square class
//! of the determinant.

use std::fmt;

use crate::error::{Error, Result};
use crate::finfield::{FqElem, FqField, SquareClass};

/// A symmetric `n x n` matrix over `F_q`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldForm {
    field: FqField,
    n: usize,
    entries: Vec<FqElem>,
}

impl FieldForm {
    pub fn new(field: &FqField, n: usize, entries: Vec<FqElem>) -> Result<FieldForm> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {n}x{n} form",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let form = FieldForm {
            field: field.clone(),
            n,
            entries,
        };
        if !(0..n).all(|i| (0..i).all(|j| form.get(i, j) == form.get(j, i))) {
            return Err(Error::InvalidInput("form matrix is not symmetric".into()));
        }
        Ok(form)
    }

    pub fn from_ints(field: &FqField, rows: &[&[i64]]) -> Result<FieldForm> {
        let n = rows.len();
        let entries = rows.iter().flat_map(|r| r.iter().map(|&v| field.from_int(v))).collect();
        FieldForm::new(field, n, entries)
    }

    pub fn diagonal(field: &FqField, diag: &[FqElem]) -> Result<FieldForm> {
        let n = diag.len();
        let mut entries = vec![field.zero(); n * n];
        for (i, d) in diag.iter().enumerate() {
            entries[i * n + i] = d.clone();
        }
        FieldForm::new(field, n, entries)
    }

    pub fn field(&self) -> &FqField {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FqElem {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[FqElem] {
        &self.entries
    }

    /// `T^t F T` for a square `T` given row-major.
    pub fn congruence(&self, t: &[FqElem]) -> FieldForm {
        let n = self.n;
        assert_eq!(t.len(), n * n);
        let mut ft = vec![self.field.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field.zero();
                for k in 0..n {
                    acc = &acc + &(self.get(i, k) * &t[k * n + j]);
                }
                ft[i * n + j] = acc;
            }
        }
        let mut out = vec![self.field.zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = self.field.zero();
                for k in 0..n {
                    acc = &acc + &(&t[k * n + i] * &ft[k * n + j]);
                }
                out[i * n + j] = acc;
            }
        }
        FieldForm {
            field: self.field.clone(),
            n,
            entries: out,
        }
    }

    pub fn det(&self) -> FqElem {
        det(&self.field, self.n, self.entries.clone())
    }

    pub fn rank(&self) -> usize {
        diagonalize_field(self).diag.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }
}

impl fmt::Debug for FieldForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .entries
            .chunks(self.n)
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        write!(f, "{:?} over {}", rows, self.field)
    }
}

/// Determinant over a field by Gaussian elimination.
pub(crate) fn det(field: &FqField, n: usize, mut m: Vec<FqElem>) -> FqElem {
    let mut acc = field.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i * n + k].is_zero()) else {
            return field.zero();
        };
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            acc = -&acc;
        }
        let pivot = m[k * n + k].clone();
        acc = &acc * &pivot;
        let inv = pivot.inv().unwrap();
        for i in k + 1..n {
            let factor = &m[i * n + k] * &inv;
            if factor.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &m[i * n + j] - &(&factor * &m[k * n + j]);
                m[i * n + j] = v;
            }
        }
    }
    acc
}

/// Result of [`diagonalize_field`]: `T^t F T = diag`, with `T` row-major and
/// its columns the new basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagonalization {
    pub diag: Vec<FqElem>,
    pub transform: Vec<FqElem>,
}

/// Congruence diagonalization. At step `i`, a zero pivot is replaced by the
/// lowest-index later basis vector with nonzero norm; failing that, `e_i` is
/// replaced by `e_i + e_j` for the lowest `j` with `B(e_i, e_j) != 0`, which has
/// norm `2 B(e_i, e_j) != 0` in odd characteristic.
pub fn diagonalize_field(form: &FieldForm) -> Diagonalization {
    let n = form.n;
    let field = &form.field;
    let mut m = form.entries.clone();
    let mut t: Vec<FqElem> = (0..n * n)
        .map(|i| if i / n == i % n { field.one() } else { field.zero() })
        .collect();

    // Basis change e_i <- e_i + c e_j, applied to the Gram matrix and T.
    let add_multiple = |m: &mut Vec<FqElem>, t: &mut Vec<FqElem>, i: usize, j: usize, c: &FqElem| {
        for r in 0..n {
            let v = &t[r * n + i] + &(c * &t[r * n + j]);
            t[r * n + i] = v;
        }
        for k in 0..n {
            let v = &m[i * n + k] + &(c * &m[j * n + k]);
            m[i * n + k] = v;
        }
        for k in 0..n {
            let v = &m[k * n + i] + &(c * &m[k * n + j]);
            m[k * n + i] = v;
        }
    };
    let swap = |m: &mut Vec<FqElem>, t: &mut Vec<FqElem>, i: usize, j: usize| {
        for r in 0..n {
            t.swap(r * n + i, r * n + j);
        }
        for k in 0..n {
            m.swap(i * n + k, j * n + k);
        }
        for k in 0..n {
            m.swap(k * n + i, k * n + j);
        }
    };

    for i in 0..n {
        if m[i * n + i].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[j * n + j].is_zero()) {
                swap(&mut m, &mut t, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !m[i * n + j].is_zero()) {
                add_multiple(&mut m, &mut t, i, j, &field.one());
            } else {
                continue;
            }
        }
        let inv = m[i * n + i].inv().unwrap();
        for j in i + 1..n {
            if m[i * n + j].is_zero() {
                continue;
            }
            let c = -&(&m[i * n + j] * &inv);
            add_multiple(&mut m, &mut t, j, i, &c);
        }
    }
    Diagonalization {
        diag: (0..n).map(|i| m[i * n + i].clone()).collect(),
        transform: t,
    }
}

/// Square class of the determinant of a nondegenerate form.
pub fn disc_class(form: &FieldForm) -> Result<SquareClass> {
    let d = form.det();
    if d.is_zero() {
        return Err(Error::Degenerate(format!("{form:?}")));
    }
    d.square_class()
}

/// Isometry over `F_q`: equal rank and equal discriminant class.
pub fn field_isomorphic(f: &FieldForm, g: &FieldForm) -> Result<bool> {
    if f.field != g.field {
        return Err(Error::FieldMismatch);
    }
    let (df, dg) = (disc_class(f)?, disc_class(g)?);
    Ok(f.n == g.n && df == dg)
}
