use serde_json::Value;

use hasse_forms_py::api;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn curve_documents_round_trip() {
    let c = api::curve_from_json(r#"{"field":{"p":5},"kind":"weierstrass","a":2,"b":3}"#).unwrap();
    assert_eq!(api::curve_from_json(&api::curve_to_json(&c)).unwrap(), c);
    assert_eq!(parse(api::point_count(&c).unwrap())["total"], 7);
    assert!(api::hasse(&c, 3).is_err());
}

#[test]
fn reports_match_the_cli() {
    let line = api::curve_from_json(r#"{"field":{"p":5},"kind":"polyline"}"#).unwrap();
    assert_eq!(parse(api::hasse(&line, 2).unwrap())["verdict"], "Holds");
    let v = parse(api::verify_paper().unwrap());
    assert_eq!(v["all_pass"], true);
    assert_eq!(api::factor_poly(5, "x^3+2*x+3").unwrap(), "(x+1)^2*(x+3)");
    assert!(api::factor_poly(6, "x").is_err());
}

#[test]
fn search_and_genus_documents() {
    let doc = r#"{"curve":{"field":{"p":5},"kind":"polyline"},"F":[["1"]],"G":[["4"]]}"#;
    let v = parse(api::isom_search(doc, Some(0), None, Some(1000)).unwrap());
    assert_eq!(v["verdict"], "Found");
    assert_eq!(v["Q"], serde_json::json!([["2"]]));
    let w = r#"{"curve":{"field":{"p":5},"kind":"polyline"},"F":[["1"]],"G":[["1"]],
        "witnesses":[{"Q":[["1"]],"s":"1"}]}"#;
    assert_eq!(parse(api::genus_verify(w, Some(1)).unwrap())["verdict"], "Certified");
    let f = r#"{"curve":{"field":{"p":5},"kind":"polyline"},"F":[["x"]]}"#;
    let r = parse(api::form_report(f, 1).unwrap());
    assert_eq!(r["unimodular"], false);
    assert_eq!(r["places"][0]["status"], "degenerate");
}
