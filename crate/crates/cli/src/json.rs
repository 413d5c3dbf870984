use serde_json::{json, Value};
use surfcover::hypotheses::HypothesisReport;
use surfcover::{AffineCover, Field, MPoly, Param, Scalar, ThreePatch, UPoly};

pub fn scalar(c: &Scalar) -> Value {
    Value::String(c.to_string())
}

pub fn mpoly(p: &MPoly) -> Value {
    Value::Array(p.terms().rev().map(|(m, c)| json!({ "coeff": scalar(c), "exp": m })).collect())
}

pub fn upoly(p: &UPoly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| json!({ "coeff": scalar(c), "exp": [e] }))
            .collect(),
    )
}

pub fn param(p: &Param) -> Value {
    Value::Array(p.entries().iter().map(mpoly).collect())
}

pub fn field(f: &Field) -> Value {
    match f.extension() {
        None => json!({ "kind": "rationals" }),
        Some(e) => json!({
            "kind": "extension",
            "generator": "gamma",
            "modulus": upoly(&UPoly::from_rationals(e.modulus().to_vec())),
        }),
    }
}

pub fn hypotheses(r: &HypothesisReport) -> Value {
    json!({
        "star": r.star.pass,
        "a": r.ab.a,
        "b": r.ab.b,
        "pass": r.pass(),
        "base_point_free": r.star.base_point_free,
        "k": r.ab.base_points().or(r.star.base_point_free.then_some(0)),
        "failures": r.ab.failures,
    })
}

pub fn three_patch(t: &ThreePatch) -> Value {
    json!({
        "k": t.k,
        "base_point_free": t.base_point_free,
        "F": param(&t.f),
        "G": param(&t.g),
        "H": param(&t.h),
        "p1": upoly(&t.p1),
        "q1": upoly(&t.q1),
        "p2": upoly(&t.p2),
        "q2": upoly(&t.q2),
        "ghat": mpoly(&t.ghat),
        "hhat": mpoly(&t.hhat),
    })
}

pub fn affine(c: &AffineCover) -> Value {
    json!({
        "field": field(&c.field),
        "rule": format!("{:?}", c.rule),
        "G": param(&c.g),
        "r": upoly(&c.r),
        "s": upoly(&c.s),
        "u": upoly(&c.u),
        "v": upoly(&c.v),
        "display": c.to_string(),
    })
}

pub fn matrix(m: &[[Scalar; 3]; 3]) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(scalar).collect())).collect())
}
