//! Deciding whether a parametrization meets the hypotheses of the cover
//! algorithms, and repairing the position conditions by a change of
//! coordinates.
//!
//! * (*): every base point is simple, i.e. the Jacobian has rank 2 there.
//! * (a): no base point lies on a coordinate line.
//! * (b): no two base points are aligned with a coordinate vertex.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Scalar;
use crate::error::CoverError;
use crate::groebner::{groebner, is_irrelevant, is_zero_dimensional, shape_of, GBasis, Order, ShapeBasis};
use crate::mpoly::{jacobian, MPoly, Mono, Param};

pub const DEFAULT_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarReport {
    pub pass: bool,
    pub base_point_free: bool,
    /// Chart `x_i = 1` in which a singular base point was found.
    pub failing_chart: Option<usize>,
    /// Leading monomials of the basis of `I + J` in the failing chart.
    pub witness: Vec<Mono>,
}

/// The 2x2 minors of the Jacobian, deduplicated up to sign.
pub fn jacobian_minors(f: &Param) -> Vec<MPoly> {
    let j = jacobian(f);
    let mut out: Vec<MPoly> = Vec::new();
    for r in 0..j.len() {
        for s in r + 1..j.len() {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let m = &(&j[r][a] * &j[s][b]) - &(&j[r][b] * &j[s][a]);
                if m.is_zero() {
                    continue;
                }
                let n = m.normalized();
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        }
    }
    out
}

fn chart_ideal(polys: &[MPoly], chart: usize) -> Vec<MPoly> {
    polys.iter().map(|p| p.specialize(chart, &Scalar::one())).filter(|p| !p.is_zero()).collect()
}

/// Condition (*). The rank of the Jacobian at a base point is at most 2 by
/// Euler's formula, so a base point is singular exactly when all 2x2 minors
/// vanish there; (*) holds iff `I + J` has no projective zero, which is
/// tested chart by chart.
pub fn check_star(f: &Param) -> StarReport {
    if is_irrelevant(f.entries()) {
        return StarReport { pass: true, base_point_free: true, failing_chart: None, witness: Vec::new() };
    }
    let minors = jacobian_minors(f);
    for chart in 0..3 {
        let base = groebner(&chart_ideal(f.entries(), chart), Order::GrLex);
        if base.is_unit() {
            continue;
        }
        let mut gens: Vec<MPoly> = base.generators().to_vec();
        for m in chart_ideal(&minors, chart) {
            let r = base.reduce(&m);
            if !r.is_zero() {
                gens.push(r);
            }
        }
        let b = groebner(&gens, Order::GrLex);
        if !b.is_unit() {
            return StarReport {
                pass: false,
                base_point_free: false,
                failing_chart: Some(chart),
                witness: b.leading_monomials(),
            };
        }
    }
    StarReport { pass: true, base_point_free: false, failing_chart: None, witness: Vec::new() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbReport {
    pub a: bool,
    pub b: bool,
    /// One line per failing sub-check.
    pub failures: Vec<String>,
    /// Shape data of the charts `x1 = 1` and `x2 = 1` when they exist.
    pub shapes: Option<(ShapeBasis, ShapeBasis)>,
}

impl AbReport {
    pub fn pass(&self) -> bool {
        self.a && self.b
    }

    /// Number of base points, when (a) holds.
    pub fn base_points(&self) -> Option<usize> {
        match (&self.shapes, self.a) {
            (Some((s1, _)), true) => Some(s1.k),
            _ => None,
        }
    }
}

const VERTEX_NAMES: [&str; 3] = ["(1:0:0)", "(0:1:0)", "(0:0:1)"];

/// Conditions (a) and (b) by the ideal-theoretic shape route.
///
/// (a): `(F0, ..., Fn, x_i)` has no projective zero for each `i`, and the
/// charts `x1 = 1` and `x2 = 1` see the same number of base points.
///
/// (b): the lex bases of the charts `x1 = 1` and `x2 = 1` have the shape
/// `{x_t - q, p}` with `p` squarefree, so distinct base points project to
/// distinct points from the centres `(0:0:1)` and `(0:1:0)`. A vertex that
/// is itself a base point is aligned with every other base point.
pub fn check_ab(f: &Param) -> AbReport {
    let mut failures = Vec::new();
    let mut a = true;
    for i in 0..3 {
        let mut gens = f.entries().to_vec();
        gens.push(MPoly::var(i));
        if !is_irrelevant(&gens) {
            a = false;
            failures.push(format!("(a): a base point lies on the line x{i} = 0"));
        }
    }
    let mut b = true;
    let mut shape = |chart: usize, top: usize| match shape_of(&chart_ideal(f.entries(), chart), chart, top, 0) {
        Ok(s) => Some(s),
        Err(e) => {
            b = false;
            failures.push(format!("(b): base points aligned with {} ({e})", VERTEX_NAMES[top]));
            None
        }
    };
    let s1 = shape(1, 2);
    let s2 = shape(2, 1);
    if let (Some(s1), Some(s2)) = (&s1, &s2) {
        if a && s1.k != s2.k {
            a = false;
            failures.push(format!("(a): charts see {} and {} base points", s1.k, s2.k));
        }
    }
    for t in 0..3 {
        let mut v = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        v[t] = Scalar::one();
        if f.eval(&v).iter().all(Scalar::is_zero) && has_non_vertex_point(f, t) {
            b = false;
            failures.push(format!("(b): the vertex {} is a base point and there are others", VERTEX_NAMES[t]));
        }
    }
    AbReport { a, b, failures, shapes: s1.zip(s2) }
}

/// True if some base point other than the vertex `v_t` exists.
fn has_non_vertex_point(f: &Param, t: usize) -> bool {
    (0..3).filter(|&c| c != t).any(|c| !chart_basis(f, c).is_unit())
}

/// Base points in the chart `x_i = 1`, as a reduced basis.
pub fn chart_basis(f: &Param, chart: usize) -> GBasis {
    groebner(&chart_ideal(f.entries(), chart), Order::GrLex)
}

/// True if the base locus is finite, i.e. the entries have no common curve.
pub fn base_locus_is_finite(f: &Param) -> bool {
    (0..3).all(|c| {
        let b = chart_basis(f, c);
        let vars: Vec<usize> = (0..3).filter(|&v| v != c).collect();
        is_zero_dimensional(&b, &vars)
    })
}

pub type Matrix3 = [[Scalar; 3]; 3];

pub fn identity3() -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() }))
}

pub fn det3(m: &Matrix3) -> Scalar {
    let minor = |a: usize, b: usize, c: usize, d: usize| &(&m[1][a] * &m[2][b]) - &(&m[1][c] * &m[2][d]);
    let t0 = &m[0][0] * &minor(1, 2, 2, 1);
    let t1 = &m[0][1] * &minor(0, 2, 2, 0);
    let t2 = &m[0][2] * &minor(0, 1, 1, 0);
    &(&t0 - &t1) + &t2
}

/// Result of [`random_change`]: `param = F(M x)`.
#[derive(Debug, Clone)]
pub struct CoordinateChange {
    pub param: Param,
    pub matrix: Matrix3,
    pub attempts: usize,
}

/// Tries the identity, then seeded random integer matrices with entries in
/// `[-5, 5]`, until (a) and (b) hold.
pub fn random_change(f: &Param, seed: u64, max_attempts: usize) -> Result<CoordinateChange, CoverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let m = if attempt == 1 {
            identity3()
        } else {
            loop {
                let m: Matrix3 =
                    std::array::from_fn(|_| std::array::from_fn(|_| Scalar::from(rng.gen_range(-5i64..=5))));
                if !det3(&m).is_zero() {
                    break m;
                }
            }
        };
        let g = f.linear_change(&m);
        if check_ab(&g).pass() {
            return Ok(CoordinateChange { param: g, matrix: m, attempts: attempt });
        }
    }
    Err(CoverError::ExhaustedAttempts { attempts: max_attempts })
}

/// Verdict on all three conditions.
#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub star: StarReport,
    pub ab: AbReport,
}

impl HypothesisReport {
    pub fn pass(&self) -> bool {
        self.star.pass && self.ab.pass()
    }
}

pub fn check_all(f: &Param) -> HypothesisReport {
    HypothesisReport { star: check_star(f), ab: check_ab(f) }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(*): {}, (a): {}, (b): {}", verdict(self.star.pass), verdict(self.ab.a), verdict(self.ab.b))?;
        if self.star.base_point_free {
            write!(f, ", k=0, base points: 0")?;
        } else if let Some(k) = self.ab.base_points() {
            write!(f, ", k={k}, base points: {k} (counted via k)")?;
        }
        Ok(())
    }
}

/// "does not satisfy conditions (a) and (b)" and similar.
pub fn ab_message(ab: &AbReport) -> String {
    match (ab.a, ab.b) {
        (false, false) => "does not satisfy conditions (a) and (b)".into(),
        (false, true) => "does not satisfy condition (a)".into(),
        (true, false) => "does not satisfy condition (b)".into(),
        (true, true) => "satisfies conditions (a) and (b)".into(),
    }
}

pub const STAR_MESSAGE: &str = "does not satisfy condition (*): a base point is not simple";

/// Makes sure `f` satisfies all hypotheses, optionally changing coordinates.
pub fn ensure_hypotheses(
    f: &Param,
    change_coords: bool,
    seed: u64,
    max_attempts: usize,
) -> Result<(Param, Option<CoordinateChange>), CoverError> {
    let star = check_star(f);
    if !star.pass {
        return Err(CoverError::HypothesesNotSatisfied(STAR_MESSAGE.into()));
    }
    let ab = check_ab(f);
    if ab.pass() {
        return Ok((f.clone(), None));
    }
    if !change_coords {
        return Err(CoverError::HypothesesNotSatisfied(ab_message(&ab)));
    }
    let ch = random_change(f, seed, max_attempts)?;
    Ok((ch.param.clone(), Some(ch)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::srf::parse_input;

    fn load(name: &str) -> Param {
        let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_input(&std::fs::read_to_string(path).unwrap()).unwrap().param.unwrap()
    }

    #[test]
    fn whitney_passes() {
        let f = load("whitney.srf");
        let r = check_all(&f);
        assert!(r.pass(), "{r:?}");
        assert_eq!(r.ab.base_points(), Some(1));
        assert_eq!(r.to_string(), "(*): pass, (a): pass, (b): pass, k=1, base points: 1 (counted via k)");
    }

    #[test]
    fn raw_whitney_fails_a() {
        let f = load("whitney_raw.srf");
        let r = check_all(&f);
        assert!(r.star.pass);
        assert!(!r.ab.a);
        assert!(!r.pass());
    }

    #[test]
    fn raw_clebsch_fails_a_and_b() {
        let r = check_ab(&load("clebsch_raw.srf"));
        assert!(!r.a && !r.b, "{r:?}");
    }

    #[test]
    fn singular_fixture_fails_star() {
        let r = check_star(&load("singular_basepoints.srf"));
        assert!(!r.pass);
    }

    #[test]
    fn veronese_vacuous() {
        let f = load("veronese.srf");
        let s = check_star(&f);
        assert!(s.pass && s.base_point_free);
        assert!(check_ab(&f).pass());
    }

    #[test]
    fn clebsch_change_matches_fixture() {
        let raw = load("clebsch_raw.srf");
        let m: Matrix3 = [[1, 3, 2], [1, 1, 3], [-1, -1, 1]].map(|r| r.map(Scalar::from));
        assert_eq!(raw.linear_change(&m), load("clebsch_unswapped.srf"));
        let r = check_all(&load("clebsch.srf"));
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn scaling_does_not_change_verdicts() {
        for name in ["whitney.srf", "whitney_raw.srf", "clebsch_raw.srf"] {
            let f = load(name);
            let scaled = Param::new(
                f.entries().iter().enumerate().map(|(i, e)| e.scale(&Scalar::ratio(2 * i as i64 + 1, 3))).collect(),
                f.field().clone(),
            )
            .unwrap();
            let (x, y) = (check_all(&f), check_all(&scaled));
            assert_eq!((x.star.pass, x.ab.a, x.ab.b), (y.star.pass, y.ab.a, y.ab.b));
        }
    }

    #[test]
    fn random_change_repairs_whitney() {
        let f = load("whitney_raw.srf");
        let ch = random_change(&f, 0, DEFAULT_ATTEMPTS).unwrap();
        assert!(ch.attempts > 1);
        assert!(!det3(&ch.matrix).is_zero());
        let r = check_ab(&ch.param);
        assert!(r.pass());
        let (s1, s2) = r.shapes.unwrap();
        assert_eq!(s1.k, s2.k);
        let again = random_change(&f, 0, DEFAULT_ATTEMPTS).unwrap();
        assert_eq!(again.param, ch.param);
    }

    #[test]
    fn identity_tried_first() {
        let ch = random_change(&load("whitney.srf"), 7, DEFAULT_ATTEMPTS).unwrap();
        assert_eq!(ch.attempts, 1);
        assert_eq!(ch.matrix, identity3());
    }
}
