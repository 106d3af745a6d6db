//! JSON-in, JSON-out entry points shared by the Python wrappers.

use hasse_forms::cli::{self, reports};
use hasse_forms::finfield::prime_power;
use hasse_forms::schema::{from_json, CurveJson, FormFile, SearchFile, WitnessFile};
use hasse_forms::{factor, make_extension, CurveSpec, Error, Poly, Result};

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize")
}

pub fn field_of_size(q: u64) -> Result<hasse_forms::FqField> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    make_extension(p, k)
}

pub fn curve_from_json(doc: &str) -> Result<CurveSpec> {
    from_json::<CurveJson>(doc)?.to_curve()
}

pub fn curve_to_json(c: &CurveSpec) -> String {
    to_json(&CurveJson::from_curve(c))
}

pub fn point_count(c: &CurveSpec) -> Result<String> {
    Ok(to_json(&hasse_forms::point_count_report(c)?))
}

pub fn hasse(c: &CurveSpec, rank: usize) -> Result<String> {
    Ok(to_json(&hasse_forms::hasse_principle(c, rank)?))
}

pub fn form_report(doc: &str, degree: usize) -> Result<String> {
    Ok(to_json(&cli::form_report(&from_json::<FormFile>(doc)?, degree)?))
}

pub fn genus_verify(doc: &str, degree: Option<usize>) -> Result<String> {
    Ok(to_json(&cli::genus_report(&from_json::<WitnessFile>(doc)?, degree)?))
}

pub fn isom_search(doc: &str, deg_x: Option<usize>, deg_y: Option<usize>, budget: Option<u64>) -> Result<String> {
    let budget = match budget {
        Some(b) => b,
        None => reports::budget_from_env()?,
    };
    Ok(to_json(&cli::search_report(
        &from_json::<SearchFile>(doc)?,
        deg_x,
        deg_y,
        budget,
    )?))
}

pub fn verify_paper() -> Result<String> {
    Ok(to_json(&cli::verify_paper(reports::budget_from_env()?)?))
}

/// Factorization of a polynomial in `x` over `F_q`, e.g. `"(x+1)^2*(x+3)"`.
pub fn factor_poly(q: u64, text: &str) -> Result<String> {
    let f = field_of_size(q)?;
    Ok(factor(&Poly::parse(&f, text)?)?.to_string())
}
