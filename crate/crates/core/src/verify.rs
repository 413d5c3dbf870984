//! Executable certificates for the covers: exact identities, base-point
//! freeness of the new charts, the resultant criterion, and sampled
//! membership in the surface.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::Scalar;
use crate::cover2::AffineCover;
use crate::cover3::ThreePatch;
use crate::error::{AlgebraError, VerifyError};
use crate::groebner::{groebner, Order};
use crate::mpoly::{MPoly, Param, SparsePoly};
use crate::srf::{Fixture, Patch};
use crate::upoly::{interpolate, is_squarefree, ugcd, UPoly};

/// Scalars `lambda` with `hat * G = lambda * F(Bl)` on each chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    pub g_scale: Scalar,
    pub h_scale: Scalar,
}

fn blowup_chart_sub(p: &UPoly, q: &UPoly, chart: usize, free: usize) -> [MPoly; 3] {
    let mut sub: [MPoly; 3] = [MPoly::var(0), MPoly::zero(), MPoly::zero()];
    sub[chart] = MPoly::one();
    sub[free] = &MPoly::from_upoly(q, 0) + &(&MPoly::var(free) * &MPoly::from_upoly(p, 0));
    sub
}

fn check_identity(
    patch: char,
    hat: &MPoly,
    entries: &[MPoly],
    f: &Param,
    chart: usize,
    sub: &[MPoly; 3],
) -> Result<Scalar, VerifyError> {
    let one = Scalar::one();
    let hat = hat.specialize(chart, &one);
    let mut lambda: Option<Scalar> = None;
    for (index, (e, fi)) in entries.iter().zip(f.entries()).enumerate() {
        let lhs = &hat * &e.specialize(chart, &one);
        let rhs = fi.substitute(sub);
        let ok = match (lhs.is_zero(), rhs.is_zero()) {
            (true, true) => true,
            (false, false) => {
                let l = lambda.get_or_insert_with(|| {
                    rhs.leading_grlex().unwrap().1.div(lhs.leading_grlex().unwrap().1).unwrap()
                });
                lhs.scale(l) == rhs
            }
            _ => false,
        };
        if !ok {
            return Err(VerifyError::IdentityFailure { patch, index });
        }
    }
    Ok(lambda.unwrap_or(one))
}

/// `Ghat(x0,1,x2) G_i(x0,1,x2) = F_i(x0, 1, q1 + x2 p1)` and the analogue
/// for `H`, exactly and up to one common nonzero scalar per patch (the
/// normalization of `G` and `H`).
pub fn verify_composition(tp: &ThreePatch) -> Result<CompositionReport, VerifyError> {
    let gs = blowup_chart_sub(&tp.p1, &tp.q1, 1, 2);
    let hs = blowup_chart_sub(&tp.p2, &tp.q2, 2, 1);
    Ok(CompositionReport {
        g_scale: check_identity('G', &tp.ghat, tp.g.entries(), &tp.f, 1, &gs)?,
        h_scale: check_identity('H', &tp.hhat, tp.h.entries(), &tp.f, 2, &hs)?,
    })
}

/// Reduced basis of the entries of `p` dehomogenized at `x_chart = 1`.
pub fn chart_ideal_basis(p: &Param, chart: usize) -> crate::groebner::GBasis {
    let one = Scalar::one();
    let gens: Vec<MPoly> =
        p.entries().iter().map(|e| e.specialize(chart, &one)).filter(|e| !e.is_zero()).collect();
    groebner(&gens, Order::GrLex)
}

/// Neither `G(_:1:_)` nor `H(_:_:1)` has a base point.
pub fn verify_no_affine_basepoints(tp: &ThreePatch) -> Result<(), VerifyError> {
    for (patch, p, chart) in [('G', &tp.g, 1), ('H', &tp.h, 2)] {
        let b = chart_ideal_basis(p, chart);
        if !b.is_unit() {
            return Err(VerifyError::BasePointFound { patch, basis: b.to_string() });
        }
    }
    Ok(())
}

fn field_resultant(a: &UPoly, b: &UPoly) -> Result<Scalar, AlgebraError> {
    let (Some(m), Some(n)) = (a.degree(), b.degree()) else {
        return Ok(Scalar::zero());
    };
    if n == 0 {
        return Ok(b.lc().pow(m as u32));
    }
    if m == 0 {
        return Ok(a.lc().pow(n as u32));
    }
    let r = a.rem(b)?;
    let Some(k) = r.degree() else {
        return Ok(Scalar::zero());
    };
    let rest = &b.lc().pow((m - k) as u32) * &field_resultant(b, &r)?;
    Ok(if m * n % 2 == 1 { -rest } else { rest })
}

/// `Res_{x_elim}(l1, l2)` with `x_one = 1`, as a polynomial in `x_keep`,
/// by evaluation at `0..=bound` and interpolation. Both inputs must have a
/// nonzero constant coefficient of `x_elim^d`.
fn chart_resultant(
    l1: &MPoly,
    l2: &MPoly,
    elim: usize,
    keep: usize,
    one: usize,
    bound: usize,
) -> Result<UPoly, AlgebraError> {
    let to_u = |l: &MPoly, t: &Scalar| {
        let u = l.specialize(keep, t).specialize(one, &Scalar::one());
        u.to_upoly(elim).unwrap_or_else(UPoly::zero)
    };
    let mut pts = Vec::with_capacity(bound + 1);
    for t in 0..=bound {
        let t = Scalar::from(t as i64);
        pts.push((t.clone(), field_resultant(&to_u(l1, &t), &to_u(l2, &t))?));
    }
    interpolate(&pts)
}

/// Outcome of the resultant criterion for the projection from one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultantLine {
    /// The eliminated variable; the projection centre is the vertex `e_i`.
    pub index: usize,
    pub vertex_is_base_point: bool,
    /// Gcd of the resultants in the two charts of the line `x_i = 0`.
    pub gcds: Vec<UPoly>,
    pub squarefree: bool,
    /// A base point projects to a coordinate point of the line.
    pub on_coordinate_line: bool,
}

impl ResultantLine {
    pub fn pass(&self) -> bool {
        !self.vertex_is_base_point && self.squarefree && !self.on_coordinate_line
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultantReport {
    pub lines: Vec<ResultantLine>,
}

impl ResultantReport {
    pub fn pass(&self) -> bool {
        self.lines.iter().all(ResultantLine::pass)
    }
}

const RESULTANT_PAIRS: usize = 3;

/// The resultant route to (*), (a) and (b) for the projections from
/// `(0:1:0)` and `(0:0:1)`.
///
/// Pairs of seeded generic combinations of the entries are used instead of
/// the entries themselves: two entries may be tangent at a simple base
/// point, generic members of the linear system are not. The gcd over a few
/// pairs removes the intersections that are not base points.
pub fn resultant_cross_check(f: &Param, seed: u64) -> Result<ResultantReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = f.degree() as usize;
    let mut lines = Vec::new();
    for elim in [1usize, 2] {
        let mut e = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        e[elim] = Scalar::one();
        let at_vertex = f.eval(&e);
        if at_vertex.iter().all(Scalar::is_zero) {
            lines.push(ResultantLine {
                index: elim,
                vertex_is_base_point: true,
                gcds: Vec::new(),
                squarefree: false,
                on_coordinate_line: false,
            });
            continue;
        }
        let combo = |rng: &mut ChaCha8Rng| loop {
            let c: Vec<Scalar> = (0..f.entries().len()).map(|_| Scalar::from(rng.gen_range(-10i64..=10))).collect();
            let lead = c.iter().zip(&at_vertex).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b));
            if !lead.is_zero() {
                break f.entries().iter().zip(&c).fold(MPoly::zero(), |acc, (e, c)| &acc + &e.scale(c));
            }
        };
        let pairs: Vec<(MPoly, MPoly)> = (0..RESULTANT_PAIRS).map(|_| (combo(&mut rng), combo(&mut rng))).collect();
        let others: Vec<usize> = (0..3).filter(|&v| v != elim).collect();
        let mut gcds = Vec::new();
        let mut squarefree = true;
        let mut on_line = false;
        for (keep, one) in [(others[0], others[1]), (others[1], others[0])] {
            let mut g = UPoly::zero();
            for (l1, l2) in &pairs {
                g = ugcd(&g, &chart_resultant(l1, l2, elim, keep, one, d * d)?)?;
            }
            if g.is_zero() {
                squarefree = false;
            } else if g.degree() > Some(0) {
                squarefree &= is_squarefree(&g)?;
                on_line |= g.coeff(0).is_zero();
            }
            gcds.push(g);
        }
        lines.push(ResultantLine {
            index: elim,
            vertex_is_base_point: false,
            gcds,
            squarefree,
            on_coordinate_line: on_line,
        });
    }
    Ok(ResultantReport { lines })
}

/// Seeded rational with numerator and denominator bounded by `10^4`.
fn random_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-10_000..=10_000), rng.gen_range(1..=10_000))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageReport {
    pub trials: usize,
    /// Points evaluated and checked against the implicit equations.
    pub checked: usize,
    /// Samples that hit a base point of a patch.
    pub skipped: usize,
    pub fixtures_hit: usize,
}

fn proportional(a: &[Scalar], b: &[Scalar]) -> bool {
    if a.len() != b.len() || a.iter().all(Scalar::is_zero) || b.iter().all(Scalar::is_zero) {
        return false;
    }
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

fn fmt_point(p: &[Scalar]) -> String {
    p.iter().map(Scalar::to_string).collect::<Vec<_>>().join(":")
}

/// Evaluates every patch at `trials` random parameters and checks each
/// image against the implicit equations; then replays the fixtures.
pub fn sample_coverage(
    tp: &ThreePatch,
    affine: Option<&AffineCover>,
    implicit: &[SparsePoly],
    fixtures: &[Fixture],
    trials: usize,
    seed: u64,
) -> Result<CoverageReport, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoverageReport { trials, ..Default::default() };
    let one = Scalar::one();
    for _ in 0..trials {
        let (s, t) = (random_rational(&mut rng), random_rational(&mut rng));
        let mut images = vec![
            (format!("F(1:{s}:{t})"), tp.f.eval(&[one.clone(), s.clone(), t.clone()])),
            (format!("G({s}:1:{t})"), tp.g.eval(&[s.clone(), one.clone(), t.clone()])),
            (format!("H({s}:{t}:1)"), tp.h.eval(&[s.clone(), t.clone(), one.clone()])),
        ];
        if let Some(c) = affine {
            images.push((format!("g'({s}, {t})"), c.eval(&s, &t)));
        }
        for (what, p) in images {
            if p.iter().all(Scalar::is_zero) {
                report.skipped += 1;
                continue;
            }
            if implicit.iter().any(|eq| !eq.eval(&p).is_zero()) {
                return Err(VerifyError::MembershipFailure { what: format!("{what} = ({})", fmt_point(&p)) });
            }
            report.checked += 1;
        }
    }
    for fx in fixtures {
        let image = match fx.patch {
            Patch::F => tp.f.eval(&fx.param),
            Patch::G => tp.g.eval(&fx.param),
            Patch::H => tp.h.eval(&fx.param),
        };
        let what = format!("{}({}) = ({})", fx.patch, fmt_point(&fx.param), fmt_point(&fx.point));
        if !proportional(&image, &fx.point) {
            return Err(VerifyError::FixtureMiss { what });
        }
        if implicit.iter().any(|eq| !eq.eval(&fx.point).is_zero()) {
            return Err(VerifyError::MembershipFailure { what });
        }
        report.fixtures_hit += 1;
    }
    Ok(report)
}

/// Bezout identity, Moebius determinant and the line conditions of the
/// two-patch cover.
pub fn verify_affine_cover(c: &AffineCover) -> Result<usize, VerifyError> {
    let b = c.bezout();
    if !b.is_one() {
        return Err(VerifyError::BezoutFailure { value: b.display("x0").to_string() });
    }
    let lines = c.infinity_avoidance()?;
    if let Some(l) = lines.iter().find(|l| !l.holds) {
        return Err(VerifyError::InfinityAvoidance { modulus: l.modulus.display("x0").to_string() });
    }
    Ok(lines.len())
}

/// All certificates for one input.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub composition: CompositionReport,
    pub resultant: ResultantReport,
    pub affine_lines: Option<usize>,
    pub coverage: CoverageReport,
}

pub struct VerifyOptions<'a> {
    pub implicit: &'a [SparsePoly],
    pub fixtures: &'a [Fixture],
    pub trials: usize,
    pub seed: u64,
}

pub fn verify_all(
    tp: &ThreePatch,
    affine: Option<&AffineCover>,
    opts: &VerifyOptions<'_>,
) -> Result<VerifyReport, VerifyError> {
    let composition = verify_composition(tp)?;
    verify_no_affine_basepoints(tp)?;
    let resultant = resultant_cross_check(&tp.f, opts.seed)?;
    let affine_lines = affine.map(verify_affine_cover).transpose()?;
    let coverage = sample_coverage(tp, affine, opts.implicit, opts.fixtures, opts.trials, opts.seed)?;
    Ok(VerifyReport { composition, resultant, affine_lines, coverage })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "composition: pass (G scale {}, H scale {})",
            self.composition.g_scale, self.composition.h_scale
        )?;
        writeln!(f, "affine base points of G, H: none")?;
        writeln!(f, "resultant criterion: {}", if self.resultant.pass() { "pass" } else { "fail" })?;
        if let Some(n) = self.affine_lines {
            writeln!(f, "two-patch: Bezout identity exact, {n} critical line groups checked")?;
        }
        write!(
            f,
            "sampling: {} trials, {} points on the surface, {} skipped, {} fixtures hit",
            self.coverage.trials, self.coverage.checked, self.coverage.skipped, self.coverage.fixtures_hit
        )
    }
}
