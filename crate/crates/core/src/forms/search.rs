//! Bounded search for integral isometries `Q` with `Q^t F Q = G`, `det Q` a unit.
//!
//! Entries range over `A(x) + B(x) y` with `deg A, deg B <= deg_x` (and `B = 0`
//! when `deg_y = 0` or on the line). Candidates are numbered by reading the
//! coefficients of `A` then `B` as base-`q` digits.
//!
//! Each column `c_j` must satisfy `f(c_j, c_j) = G_jj`, which does not involve the
//! other columns, so the admissible columns are computed independently: all but
//! the last entry are enumerated and the last one is solved from a quadratic
//! equation by completing the square in `O` (or enumerated when `F_nn` is not a
//! unit). Columns are then combined depth-first under the off-diagonal
//! conditions, and the determinant is checked last.
//!
//! Order: a matrix is ranked by the candidate numbers of `Q - I`, column by
//! column, top to bottom, so the identity is found first whenever it qualifies.
//! The outer loop runs in parallel; the reported witness is the first in this
//! order regardless of scheduling. An exhausted search is evidence of
//! non-isometry within the bounds, not a proof.

use rayon::prelude::*;

use super::GramMatrix;
use crate::curvering::{CurveSpec, FracElem, RingElem, RingMatrix};
use crate::error::{Error, Result};
use crate::funcfield::Poly;

/// Default cap on inner-product evaluations.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest rank accepted by [`isom_search`].
pub const MAX_SEARCH_RANK: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub deg_x: usize,
    pub deg_y: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { q: RingMatrix, evaluations: u64 },
    NoneWithinBounds { evaluations: u64 },
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&RingMatrix> {
        match self {
            SearchOutcome::Found { q, .. } => Some(q),
            SearchOutcome::NoneWithinBounds { .. } => None,
        }
    }

    pub fn evaluations(&self) -> u64 {
        match self {
            SearchOutcome::Found { evaluations, .. } | SearchOutcome::NoneWithinBounds { evaluations } => *evaluations,
        }
    }
}

/// Numbering of the bounded candidate set.
struct Candidates {
    curve: CurveSpec,
    q: u64,
    a_len: usize,
    b_len: usize,
    count: u64,
}

impl Candidates {
    fn new(curve: &CurveSpec, bounds: SearchBounds) -> Candidates {
        let q = curve.field().q() as u64;
        let a_len = bounds.deg_x + 1;
        let b_len = if curve.is_weierstrass() && bounds.deg_y >= 1 {
            a_len
        } else {
            0
        };
        let count = q.checked_pow((a_len + b_len) as u32).unwrap_or(u64::MAX);
        Candidates {
            curve: curve.clone(),
            q,
            a_len,
            b_len,
            count,
        }
    }

    fn elem(&self, mut idx: u64) -> RingElem {
        let mut digits = Vec::with_capacity(self.a_len + self.b_len);
        for _ in 0..self.a_len + self.b_len {
            digits.push((idx % self.q) as u32);
            idx /= self.q;
        }
        let field = self.curve.field();
        let b = digits.split_off(self.a_len);
        let a = Poly::from_raw(field, digits);
        let b = Poly::from_raw(field, b);
        RingElem::new(&self.curve, a, b).unwrap()
    }

    fn index(&self, e: &RingElem) -> Option<u64> {
        let (a, b) = (e.a().raw(), e.b().raw());
        if a.len() > self.a_len || b.len() > self.b_len {
            return None;
        }
        let mut idx = 0u64;
        for i in (0..self.b_len).rev() {
            idx = idx * self.q + b.get(i).copied().unwrap_or(0) as u64;
        }
        for i in (0..self.a_len).rev() {
            idx = idx * self.q + a.get(i).copied().unwrap_or(0) as u64;
        }
        Some(idx)
    }
}

/// An admissible column with its rank key (candidate numbers of `c - e_j`).
#[derive(Clone)]
struct Column {
    key: Vec<u64>,
    entries: Vec<RingElem>,
}

struct Problem {
    n: usize,
    f: Vec<RingElem>,
    g: Vec<RingElem>,
    cands: Candidates,
    budget: u64,
}

/// Evaluation count of one task, failing once `limit` is passed.
struct Meter {
    used: u64,
    limit: u64,
}

impl Meter {
    fn charge(&mut self, k: u64) -> Result<()> {
        self.used += k;
        if self.used > self.limit {
            return Err(Error::BudgetExceeded {
                estimated: self.used as u128,
                cap: self.limit as u128,
            });
        }
        Ok(())
    }
}

/// First columns handled per parallel round; rounds run in order.
const CHUNK: usize = 256;

impl Problem {
    fn f(&self, i: usize, j: usize) -> &RingElem {
        &self.f[i * self.n + j]
    }

    fn g(&self, i: usize, j: usize) -> &RingElem {
        &self.g[i * self.n + j]
    }

    fn delta(&self, i: usize, j: usize) -> RingElem {
        if i == j {
            self.cands.curve.one()
        } else {
            self.cands.curve.zero()
        }
    }

    /// `f(u, v) = u^t F v`.
    fn pairing(&self, u: &[RingElem], v: &[RingElem]) -> RingElem {
        let mut acc = self.cands.curve.zero();
        for (i, ui) in u.iter().enumerate().take(self.n) {
            if ui.is_zero() {
                continue;
            }
            let mut row = self.cands.curve.zero();
            for (k, vk) in v.iter().enumerate().take(self.n) {
                if !vk.is_zero() && !self.f(i, k).is_zero() {
                    row = &row + &(self.f(i, k) * vk);
                }
            }
            acc = &acc + &(ui * &row);
        }
        acc
    }

    fn columns(&self, j: usize) -> Result<(Vec<Column>, u64)> {
        let n = self.n;
        let m = n - 1;
        let c = self.cands.count;
        let prefixes = c.pow(m as u32);
        let last_unit = self.f(m, m).as_constant().filter(|u| !u.is_zero());
        let mut cols: (Vec<Column>, u64) = (0..prefixes)
            .into_par_iter()
            .map(|mut pidx| -> (Vec<Column>, u64) {
                let mut key = Vec::with_capacity(n);
                let mut entries = Vec::with_capacity(n);
                for i in 0..m {
                    let r = pidx % c;
                    pidx /= c;
                    key.push(r);
                    entries.push(&self.cands.elem(r) + &self.delta(i, j));
                }
                let mut rest = self.cands.curve.zero();
                let mut lin = self.cands.curve.zero();
                for i in 0..m {
                    for k in 0..m {
                        rest = &rest + &(&(&entries[i] * self.f(i, k)) * &entries[k]);
                    }
                    lin = &lin + &(self.f(i, m) * &entries[i]);
                }
                let target = self.g(j, j);
                let mut out = Vec::new();
                let mut evals = 0;
                let mut accept = |last: RingElem| {
                    if let Some(r) = self.cands.index(&(&last - &self.delta(m, j))) {
                        let mut k = key.clone();
                        k.push(r);
                        let mut e = entries.clone();
                        e.push(last);
                        out.push(Column { key: k, entries: e });
                    }
                };
                match &last_unit {
                    Some(u) => {
                        evals += 1;
                        // (u c + L)^2 = u (G_jj - rest) + L^2
                        let rhs = &(target - &rest).scale(u) + &(&lin * &lin);
                        let u_inv = u.inv().unwrap();
                        let mut roots: Vec<RingElem> = rhs
                            .square_roots()
                            .into_iter()
                            .map(|w| (&w - &lin).scale(&u_inv))
                            .collect();
                        roots.dedup();
                        for r in roots {
                            accept(r);
                        }
                    }
                    None => {
                        evals += c;
                        let two = self.cands.curve.from_int(2);
                        for t in 0..c {
                            let last = &self.cands.elem(t) + &self.delta(m, j);
                            let val = &(&rest + &(&(&two * &lin) * &last)) + &(&(self.f(m, m) * &last) * &last);
                            if &val == target {
                                accept(last);
                            }
                        }
                    }
                }
                (out, evals)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold((Vec::new(), 0), |(mut cols, total), (out, evals)| {
                cols.extend(out);
                (cols, total + evals)
            });
        // Keys compare from the top entry down.
        cols.0.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(cols)
    }

    /// Depth-first completion of `chosen` with columns from `all[depth..]`.
    fn complete(
        &self,
        all: &[Vec<Column>],
        chosen: &mut Vec<Vec<RingElem>>,
        meter: &mut Meter,
    ) -> Result<Option<RingMatrix>> {
        let depth = chosen.len();
        if depth == self.n {
            let curve = &self.cands.curve;
            let entries = (0..self.n * self.n)
                .map(|idx| FracElem::from_ring(chosen[idx % self.n][idx / self.n].clone()))
                .collect();
            let q = RingMatrix::new(curve, self.n, entries)?;
            let unit = q.det().as_constant().is_some_and(|d| !d.is_zero());
            return Ok(unit.then_some(q));
        }
        for col in &all[depth] {
            meter.charge(depth as u64)?;
            let ok = (0..depth).all(|k| &self.pairing(&chosen[k], &col.entries) == self.g(k, depth));
            if ok {
                chosen.push(col.entries.clone());
                let found = self.complete(all, chosen, meter)?;
                chosen.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
        }
        Ok(None)
    }
}

/// Searches for an integral `Q` with `Q^t F Q = G` and `det Q` in `F_q^x`,
/// entries within `bounds`. Returns the first witness in the order described in
/// the module docs.
pub fn isom_search(f: &GramMatrix, g: &GramMatrix, bounds: SearchBounds, budget: u64) -> Result<SearchOutcome> {
    let curve = f.curve().clone();
    if g.curve() != &curve {
        return Err(Error::CurveMismatch);
    }
    let n = f.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "F has rank {n}, G has rank {}",
            g.n()
        )));
    }
    if n == 0 || n > MAX_SEARCH_RANK {
        return Err(Error::InvalidInput(format!(
            "search supports ranks 1..={MAX_SEARCH_RANK}, got {n}"
        )));
    }
    let cands = Candidates::new(&curve, bounds);
    let ring = |m: &GramMatrix| -> Vec<RingElem> {
        m.matrix()
            .entries()
            .iter()
            .map(|e| e.as_ring().unwrap().clone())
            .collect()
    };
    let problem = Problem {
        n,
        f: ring(f),
        g: ring(g),
        budget,
        cands,
    };
    let c = problem.cands.count as u128;
    let last_unit = problem.f(n - 1, n - 1).as_constant().is_some_and(|u| !u.is_zero());
    let estimate = n as u128 * c.pow(n as u32 - 1) * if last_unit { 1 } else { c };
    if estimate > budget as u128 {
        return Err(Error::BudgetExceeded {
            estimated: estimate,
            cap: budget as u128,
        });
    }

    let mut evaluations = 0;
    let mut all = Vec::with_capacity(n);
    for j in 0..n {
        let (cols, used) = problem.columns(j)?;
        evaluations += used;
        all.push(cols);
    }
    for chunk in all[0].chunks(CHUNK) {
        let limit = problem.budget.saturating_sub(evaluations);
        let results: Vec<(Result<Option<RingMatrix>>, u64)> = chunk
            .par_iter()
            .map(|first| {
                let mut meter = Meter { used: 0, limit };
                let mut chosen = vec![first.entries.clone()];
                let r = problem.complete(&all, &mut chosen, &mut meter);
                (r, meter.used)
            })
            .collect();
        for (r, used) in results {
            evaluations += used;
            if evaluations > problem.budget {
                return Err(Error::BudgetExceeded {
                    estimated: evaluations as u128,
                    cap: problem.budget as u128,
                });
            }
            if let Some(q) = r? {
                return Ok(SearchOutcome::Found { q, evaluations });
            }
        }
    }
    Ok(SearchOutcome::NoneWithinBounds { evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::make_extension;

    #[test]
    fn candidate_numbering_round_trips() {
        let f5 = make_extension(5, 1).unwrap();
        let c = CurveSpec::weierstrass_ints(&f5, 1, 1).unwrap();
        let cands = Candidates::new(&c, SearchBounds { deg_x: 1, deg_y: 1 });
        assert_eq!(cands.count, 625);
        for i in 0..cands.count {
            assert_eq!(cands.index(&cands.elem(i)), Some(i));
        }
        assert_eq!(cands.elem(0), c.zero());
        assert_eq!(cands.elem(1), c.one());
        assert_eq!(cands.index(&c.parse("x^2").unwrap().as_ring().unwrap().clone()), None);
        let line = Candidates::new(&CurveSpec::polyline(&f5), SearchBounds { deg_x: 2, deg_y: 1 });
        assert_eq!(line.count, 125);
    }

    #[test]
    fn identity_comes_first() {
        let f5 = make_extension(5, 1).unwrap();
        for curve in [
            CurveSpec::polyline(&f5),
            CurveSpec::weierstrass_ints(&f5, 2, 3).unwrap(),
        ] {
            let id = GramMatrix::identity(&curve, 2);
            let out = isom_search(&id, &id, SearchBounds { deg_x: 1, deg_y: 1 }, DEFAULT_BUDGET).unwrap();
            assert_eq!(out.witness(), Some(id.matrix()));
        }
    }

    #[test]
    fn finds_a_swap_and_rechecks() {
        let f7 = make_extension(7, 1).unwrap();
        let line = CurveSpec::polyline(&f7);
        let f = GramMatrix::parse(&line, &[&["1", "0"], &["0", "3"]]).unwrap();
        let g = GramMatrix::parse(&line, &[&["3", "0"], &["0", "1"]]).unwrap();
        let out = isom_search(&f, &g, SearchBounds { deg_x: 1, deg_y: 0 }, DEFAULT_BUDGET).unwrap();
        let q = out.witness().unwrap();
        assert_eq!(&RingMatrix::congruence(q, f.matrix()).unwrap(), g.matrix());
        assert!(q.det().as_constant().is_some_and(|d| !d.is_zero()));
    }

    #[test]
    fn budget_is_enforced() {
        let f5 = make_extension(5, 1).unwrap();
        let c = CurveSpec::weierstrass_ints(&f5, 2, 3).unwrap();
        let id = GramMatrix::identity(&c, 3);
        let err = isom_search(&id, &id, SearchBounds { deg_x: 2, deg_y: 1 }, DEFAULT_BUDGET).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        let id4 = GramMatrix::identity(&c, 4);
        assert!(isom_search(&id4, &id4, SearchBounds { deg_x: 0, deg_y: 0 }, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn rank_one_and_non_unit_corner() {
        let f5 = make_extension(5, 1).unwrap();
        let line = CurveSpec::polyline(&f5);
        let f = GramMatrix::parse(&line, &[&["2"]]).unwrap();
        let g = GramMatrix::parse(&line, &[&["3"]]).unwrap();
        // 2 c^2 = 3 needs c^2 = 4, c = 2.
        let out = isom_search(&f, &g, SearchBounds { deg_x: 0, deg_y: 0 }, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.witness().unwrap().get(0, 0), &line.parse("2").unwrap());
        let h = GramMatrix::parse(&line, &[&["1"]]).unwrap();
        assert!(isom_search(&f, &h, SearchBounds { deg_x: 2, deg_y: 0 }, DEFAULT_BUDGET)
            .unwrap()
            .witness()
            .is_none());
        // Non-unit corner entry forces enumeration of the last coordinate.
        let f = GramMatrix::parse(&line, &[&["1", "0"], &["0", "x"]]).unwrap();
        let out = isom_search(&f, &f, SearchBounds { deg_x: 1, deg_y: 0 }, DEFAULT_BUDGET).unwrap();
        assert_eq!(out.witness(), Some(RingMatrix::identity(&line, 2)).as_ref());
    }
}
