//! Report documents behind each subcommand. These are plain functions so the
//! Python bindings and tests can call them without going through argv.

use serde::{Deserialize, Serialize};

use crate::curvepoints::{closed_points, is_singular_point};
use crate::curvering::RingMatrix;
use crate::error::{Error, Result};
use crate::finfield::SquareClass;
use crate::forms::{
    disc_class, field_isomorphic, is_unimodular, isom_search, reduce_at, verify_genus_witness, GenusReport, GramMatrix,
    Place, SearchBounds, SearchOutcome, DEFAULT_BUDGET,
};
use crate::funcfield::{monic_irreducibles, PrimePoly};
use crate::schema::{matrix_to_json, BoundsJson, FormFile, SearchFile, WitnessFile};

pub const BUDGET_ENV: &str = "HASSE_FORMS_BUDGET";

pub const DEFAULT_INSPECTION_DEGREE: usize = 2;

/// The search cap, from `HASSE_FORMS_BUDGET` when set.
pub fn budget_from_env() -> Result<u64> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{BUDGET_ENV}={v} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub place: String,
    pub degree: usize,
    /// `ok`, `singular` or `degenerate`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub disc_class: Option<SquareClass>,
    /// Local comparison with `G`, given only when both forms are unimodular.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub isomorphic_to_g: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormReport {
    pub schema: u32,
    pub rank: usize,
    pub det: String,
    pub unimodular: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g_unimodular: Option<bool>,
    pub inspection_degree: usize,
    pub places: Vec<PlaceReport>,
}

fn place_report(
    f: &GramMatrix,
    g: Option<&GramMatrix>,
    place: Place,
    label: String,
    degree: usize,
) -> Result<PlaceReport> {
    let mut r = PlaceReport {
        place: label,
        degree,
        status: "ok".into(),
        disc_class: None,
        isomorphic_to_g: None,
    };
    if let Place::Point(pt) = &place {
        if is_singular_point(f.curve(), pt)? {
            r.status = "singular".into();
            return Ok(r);
        }
    }
    let red = reduce_at(f, &place)?;
    match disc_class(&red) {
        Ok(c) => r.disc_class = Some(c),
        Err(Error::Degenerate(_)) => r.status = "degenerate".into(),
        Err(e) => return Err(e),
    }
    if let Some(g) = g {
        if is_unimodular(f) && is_unimodular(g) {
            r.isomorphic_to_g = Some(field_isomorphic(&red, &reduce_at(g, &place)?)?);
        }
    }
    Ok(r)
}

/// Determinant, unimodularity and residue-field discriminants of `F` at every
/// closed point of degree `<= degree`.
pub fn form_report(file: &FormFile, degree: usize) -> Result<FormReport> {
    let (f, g) = file.load()?;
    if let Some(g) = &g {
        if g.n() != f.n() {
            return Err(Error::DimensionMismatch(format!(
                "F has rank {}, G has rank {}",
                f.n(),
                g.n()
            )));
        }
    }
    let curve = f.curve().clone();
    let mut places = Vec::new();
    if curve.is_weierstrass() {
        for pt in closed_points(&curve, degree)? {
            let (label, d) = (pt.label(), pt.degree);
            places.push(place_report(&f, g.as_ref(), Place::Point(pt), label, d)?);
        }
    } else {
        for d in 1..=degree {
            for pi in monic_irreducibles(curve.field(), d) {
                let label = pi.to_string();
                places.push(place_report(
                    &f,
                    g.as_ref(),
                    Place::Prime(PrimePoly::finite(pi)?),
                    label,
                    d,
                )?);
            }
        }
    }
    Ok(FormReport {
        schema: 1,
        rank: f.n(),
        det: f.det().to_string(),
        unimodular: is_unimodular(&f),
        g_unimodular: g.as_ref().map(is_unimodular),
        inspection_degree: degree,
        places,
    })
}

pub fn genus_report(file: &WitnessFile, degree: Option<usize>) -> Result<GenusReport> {
    let (f, g, w) = file.load()?;
    let d = degree.or(file.degree).unwrap_or(DEFAULT_INSPECTION_DEGREE);
    verify_genus_witness(&f, &g, &w, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub schema: u32,
    /// `Found` or `NoneWithinBounds`.
    pub verdict: String,
    pub bounds: BoundsJson,
    pub budget: u64,
    pub evaluations: u64,
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none", default)]
    pub q: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub det: Option<String>,
    pub note: String,
}

/// Bounds used when neither the file nor the caller gives any.
pub const DEFAULT_BOUNDS: SearchBounds = SearchBounds { deg_x: 1, deg_y: 1 };

pub fn search_report(
    file: &SearchFile,
    deg_x: Option<usize>,
    deg_y: Option<usize>,
    budget: u64,
) -> Result<SearchReport> {
    let (f, g) = file.load()?;
    let base = file.bounds.map(SearchBounds::from).unwrap_or(DEFAULT_BOUNDS);
    let bounds = SearchBounds {
        deg_x: deg_x.unwrap_or(base.deg_x),
        deg_y: deg_y.unwrap_or(base.deg_y),
    };
    let outcome = isom_search(&f, &g, bounds, budget)?;
    let mut report = SearchReport {
        schema: 1,
        verdict: String::new(),
        bounds: bounds.into(),
        budget,
        evaluations: outcome.evaluations(),
        q: None,
        det: None,
        note: String::new(),
    };
    match outcome {
        SearchOutcome::Found { q, .. } => {
            let det = q.det();
            assert_eq!(&RingMatrix::congruence(&q, f.matrix())?, g.matrix());
            assert!(det.as_constant().is_some_and(|d| !d.is_zero()));
            report.verdict = "Found".into();
            report.q = Some(matrix_to_json(&q));
            report.det = Some(det.to_string());
            report.note = "integral isometry with constant determinant, rechecked".into();
        }
        SearchOutcome::NoneWithinBounds { .. } => {
            report.verdict = "NoneWithinBounds".into();
            report.note = "no integral isometry with unit determinant within the bounds; \
                           evidence of non-isomorphism, not a proof"
                .into();
        }
    }
    Ok(report)
}
