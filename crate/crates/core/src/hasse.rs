//! Hasse principle verdicts for unimodular forms over `O`.
//!
//! For rank `n != 2` the principle holds iff `|Pic(C^af)|` is odd; for `n = 2`
//! iff `O` is a UFD, i.e. the Picard group is trivial.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::curvepoints::{has_two_torsion, is_smooth, pic_af_order};
use crate::curvering::CurveSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "Holds",
            Verdict::Fails => "Fails",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseReason {
    pub pic_order: u64,
    /// `"odd"` or `"even"`.
    pub pic_parity: String,
    pub ufd: bool,
    /// Rational point on the x-axis; absent for the line.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub two_torsion: Option<bool>,
    pub criterion: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseDecision {
    pub schema: u32,
    pub verdict: Verdict,
    pub rank: usize,
    pub reason: HasseReason,
}

fn require_smooth(curve: &CurveSpec) -> Result<()> {
    if curve.is_weierstrass() {
        let (smooth, sing) = is_smooth(curve)?;
        if !smooth {
            let pts: Vec<String> = sing.iter().map(|p| p.label()).collect();
            return Err(Error::Singular(format!(
                "{curve} is singular at {}; the criterion needs a smooth curve",
                pts.join(", ")
            )));
        }
    }
    Ok(())
}

pub fn hasse_principle(curve: &CurveSpec, n: usize) -> Result<HasseDecision> {
    if n < 1 {
        return Err(Error::InvalidInput("rank must be at least 1".into()));
    }
    require_smooth(curve)?;
    let order = pic_af_order(curve)?;
    let odd = order % 2 == 1;
    let two_torsion = if curve.is_weierstrass() {
        let t = has_two_torsion(curve)?;
        assert_eq!(t, !odd, "two-torsion disagrees with the parity of {order} on {curve}");
        Some(t)
    } else {
        None
    };
    let ufd = order == 1;
    let (holds, criterion) = if n == 2 {
        (
            ufd,
            format!("rank 2: holds iff O is a UFD, i.e. |Pic| = 1; |Pic| = {order}"),
        )
    } else {
        (odd, format!("rank {n} != 2: holds iff |Pic| is odd; |Pic| = {order}"))
    };
    Ok(HasseDecision {
        schema: 1,
        verdict: if holds { Verdict::Holds } else { Verdict::Fails },
        rank: n,
        reason: HasseReason {
            pic_order: order,
            pic_parity: if odd { "odd" } else { "even" }.into(),
            ufd,
            two_torsion,
            criterion,
        },
    })
}

/// Whether `O` is a UFD.
pub fn ufd_check(curve: &CurveSpec) -> Result<bool> {
    require_smooth(curve)?;
    Ok(pic_af_order(curve)? == 1)
}

/// Lower bound for the number of classes in the genus of the rank 2 identity
/// form, available when `-1` is a square so that `SO_2` is split.
pub fn binary_genus_lower_bound(curve: &CurveSpec) -> Result<Option<u64>> {
    if !curve.is_weierstrass() {
        return Err(Error::InvalidInput("defined for Weierstrass curves".into()));
    }
    require_smooth(curve)?;
    let minus_one = curve.field().from_int(-1);
    if !minus_one.is_square()? {
        return Ok(None);
    }
    Ok(Some(pic_af_order(curve)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finfield::{make_extension, prime_power};

    fn curve(p: u32, a: i64, b: i64) -> CurveSpec {
        CurveSpec::weierstrass_ints(&make_extension(p, 1).unwrap(), a, b).unwrap()
    }

    #[test]
    fn verdicts() {
        let line = CurveSpec::polyline(&make_extension(5, 1).unwrap());
        for n in 1..=5 {
            assert_eq!(hasse_principle(&line, n).unwrap().verdict, Verdict::Holds);
        }
        let c = curve(5, 1, 1);
        assert_eq!(hasse_principle(&c, 3).unwrap().verdict, Verdict::Holds);
        let two = hasse_principle(&c, 2).unwrap();
        assert_eq!(two.verdict, Verdict::Fails);
        assert_eq!(two.reason.pic_order, 9);
        let d = curve(5, -1, 0);
        for n in 1..=5 {
            let h = hasse_principle(&d, n).unwrap();
            assert_eq!(h.verdict, Verdict::Fails);
            assert_eq!(h.reason.two_torsion, Some(true));
        }
        assert!(matches!(hasse_principle(&curve(5, 2, 3), 3), Err(Error::Singular(_))));
        assert!(hasse_principle(&line, 0).is_err());
    }

    #[test]
    fn ufd_and_bound() {
        let f5 = make_extension(5, 1).unwrap();
        assert!(ufd_check(&CurveSpec::polyline(&f5)).unwrap());
        assert!(!ufd_check(&curve(5, 1, 1)).unwrap());
        assert_eq!(binary_genus_lower_bound(&curve(5, 1, 1)).unwrap(), Some(9));
        assert_eq!(binary_genus_lower_bound(&curve(3, 2, 1)).unwrap(), None);
        assert!(binary_genus_lower_bound(&curve(5, 2, 3)).is_err());
    }

    #[test]
    fn laws_over_small_fields() {
        for q in [3u64, 5, 7, 9] {
            let (p, k) = prime_power(q).unwrap();
            let f = make_extension(p, k).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let c = CurveSpec::weierstrass(&a, &b).unwrap();
                    if !c.is_smooth() {
                        continue;
                    }
                    let base = hasse_principle(&c, 1).unwrap();
                    assert_eq!(base.verdict == Verdict::Holds, !has_two_torsion(&c).unwrap());
                    for n in [3, 4, 5] {
                        assert_eq!(hasse_principle(&c, n).unwrap().verdict, base.verdict);
                    }
                    let two = hasse_principle(&c, 2).unwrap().verdict;
                    if ufd_check(&c).unwrap() {
                        assert_eq!(two, Verdict::Holds);
                    }
                    if let Some(m) = binary_genus_lower_bound(&c).unwrap() {
                        if m >= 2 {
                            assert_eq!(two, Verdict::Fails);
                        }
                    }
                }
            }
        }
    }
}
