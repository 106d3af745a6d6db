//! Fixtures of the worked examples and the `verify-paper` table.

use serde::{Deserialize, Serialize};

use super::reports::{genus_report, search_report};
use crate::curvepoints::{point_count_report, AffinePoint};
use crate::curvering::{CurveSpec, RingMatrix};
use crate::error::Result;
use crate::forms::{is_unimodular, local_isomorphic, GenusVerdict, GramMatrix, Place};
use crate::funcfield::{factor, Poly};
use crate::hasse::hasse_principle;
use crate::schema::{from_json, SearchFile, WitnessFile};

pub const ELLIPTIC_GENUS: &str = include_str!("../../fixtures/elliptic_f5_genus.json");
pub const ELLIPTIC_SEARCH: &str = include_str!("../../fixtures/elliptic_f5_search.json");
pub const LINE_GENUS: &str = include_str!("../../fixtures/line_f5_genus.json");
pub const LINE_SEARCH: &str = include_str!("../../fixtures/line_f5_search.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperRow {
    pub check: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperReport {
    pub schema: u32,
    pub rows: Vec<PaperRow>,
    pub all_pass: bool,
}

fn row(check: &str, expected: impl Into<String>, observed: impl Into<String>) -> PaperRow {
    let (expected, observed) = (expected.into(), observed.into());
    PaperRow {
        check: check.into(),
        pass: expected == observed,
        expected,
        observed,
    }
}

/// `Q^t F Q = G` for every witness matrix in a fixture.
fn identities(file: &WitnessFile) -> Result<Vec<bool>> {
    let (f, g, w) = file.load()?;
    w.pairs
        .iter()
        .map(|p| Ok(RingMatrix::congruence(&p.q, f.matrix())? == *g.matrix()))
        .collect()
}

fn show_bools(v: &[bool]) -> String {
    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
}

/// Runs every fixture check, in a fixed order.
pub fn verify_paper(budget: u64) -> Result<PaperReport> {
    let elliptic: WitnessFile = from_json(ELLIPTIC_GENUS)?;
    let line: WitnessFile = from_json(LINE_GENUS)?;
    let curve = elliptic.curve.to_curve()?;
    let mut rows = Vec::new();

    let pc = point_count_report(&curve)?;
    rows.push(row(
        "projective point count of y^2 = x^3+2x+3 over F_5",
        "7",
        pc.total.to_string(),
    ));
    let sing = if pc.smooth {
        "smooth".to_string()
    } else {
        format!("singular at {}", pc.singular_points.join(" "))
    };
    rows.push(row(
        "singular locus of y^2 = x^3+2x+3 over F_5",
        "singular at (4,0)",
        sing,
    ));
    let cubic = Poly::parse(curve.field(), "x^3+2*x+3")?;
    rows.push(row(
        "factorization of x^3+2x+3 over F_5",
        "(x+1)^2*(x+3)",
        factor(&cubic)?.to_string(),
    ));

    rows.push(row(
        "Q^t Q = G and P^t P = G over y^2 = x^3+2x+3",
        "true,true",
        show_bools(&identities(&elliptic)?),
    ));
    let (id, g, _) = elliptic.load()?;
    rows.push(row(
        "G = [[0,2],[2,3y^2]] is unimodular",
        "true",
        is_unimodular(&g).to_string(),
    ));
    let at = Place::Point(AffinePoint {
        x: curve.field().from_int(1),
        y: curve.field().from_int(1),
        degree: 1,
    });
    rows.push(row(
        "1_2 and G agree locally at (1,1)",
        "true",
        local_isomorphic(&id, &g, &at)?.to_string(),
    ));
    rows.push(row(
        "Q^t F Q = P^t F P = G over F_5[x]",
        "true,true",
        show_bools(&identities(&line)?),
    ));

    let lr = genus_report(&line, None)?;
    rows.push(row(
        "genus witnesses over F_5[x], closed points of degree <= 3",
        "Certified",
        format!("{:?}", lr.verdict),
    ));
    let er = genus_report(&elliptic, None)?;
    let observed = match er.verdict {
        GenusVerdict::Certified => "Certified".to_string(),
        GenusVerdict::GapFound => format!("GapFound at {}", er.uncovered_labels().join(" ")),
    };
    rows.push(row(
        "genus witnesses over y^2 = x^3+2x+3",
        "GapFound at (4,0)",
        observed,
    ));

    for (name, text) in [
        ("isometry search 1_2 vs G, deg_x <= 2, deg_y <= 1", ELLIPTIC_SEARCH),
        (
            "isometry search diag((1-x^2)^2,1) vs diag((1-x)^2,(1+x)^2), deg <= 2",
            LINE_SEARCH,
        ),
    ] {
        let file: SearchFile = from_json(text)?;
        let r = search_report(&file, None, None, budget)?;
        rows.push(row(name, "NoneWithinBounds", r.verdict));
    }

    let genus_zero = CurveSpec::polyline(curve.field());
    let h = hasse_principle(&genus_zero, 4)?;
    rows.push(row(
        "Hasse principle over F_5[x], rank 4",
        "Holds",
        h.verdict.to_string(),
    ));

    let all_pass = rows.iter().all(|r| r.pass);
    Ok(PaperReport {
        schema: 1,
        rows,
        all_pass,
    })
}

/// The line fixture re-read over `F_p`, for checking the identities in other
/// characteristics.
pub fn line_example_over(p: u32) -> Result<(GramMatrix, GramMatrix, Vec<RingMatrix>)> {
    let mut file: WitnessFile = from_json(LINE_GENUS)?;
    file.curve.field.p = p;
    let (f, g, w) = file.load()?;
    Ok((f, g, w.pairs.into_iter().map(|p| p.q).collect()))
}
