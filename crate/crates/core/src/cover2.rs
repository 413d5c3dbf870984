//! The two-patch cover of the affine part: `F(1:_:_)` together with
//! `g'(x0, x2) = G(x0 : 1 : (r x2 + v) / (s x2 - u))`.
//!
//! The critical vertical lines are `x0 = alpha` with `alpha` a root of
//! `x0 p1(x0)`. Roots are never isolated numerically: they are handled in
//! groups, as squarefree factors `f` of `x0 p1`, and every test is done in
//! `K[x0]/(f)`. A factor is split whenever a coefficient is a zero divisor
//! modulo it.

use std::fmt;

use crate::arith::{Extension, Field, Scalar};
use crate::cover3::{three_patch, ThreePatch};
use crate::error::{AlgebraError, CoverError};
use crate::mpoly::Param;
use crate::upoly::{crt_value, extended_gcd, inv_mod, rational_roots, squarefree_part, ugcd, UPoly};

/// How `beta_alpha` is chosen on the critical lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaRule {
    /// Each group of critical lines is classified by the degree test on
    /// `G0(alpha:1:x2)`; `beta` is a root of `G0(alpha:1:x2)`, the largest
    /// rational one when there is a choice.
    #[default]
    Pointwise,
    /// `beta = b(x0)/a(x0)` for a single factor `a x2 - b` of `G0(x0,1,x2)`,
    /// the one through the largest rational root of `G0(0:1:x2)`. The set A
    /// is where `a` vanishes. Works over the rationals only.
    GlobalFactor,
}

/// A group of critical lines `f(x0) = 0` with `beta` as a residue mod `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct BPart {
    pub modulus: UPoly,
    pub beta: UPoly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaClass {
    /// Monic squarefree polynomial whose roots form A.
    pub s_a: UPoly,
    pub b_parts: Vec<BPart>,
    /// Field of `beta`; an extension appears when some `beta` is not in
    /// the field of `G`.
    pub field: Field,
}

impl AlphaClass {
    /// Product of the B moduli.
    pub fn b_modulus(&self) -> UPoly {
        self.b_parts.iter().fold(UPoly::one(), |acc, p| &acc * &p.modulus)
    }
}

#[derive(Debug, Clone)]
pub struct AffineCover {
    pub g: Param,
    pub p1: UPoly,
    pub class: AlphaClass,
    pub r: UPoly,
    pub s: UPoly,
    pub u: UPoly,
    pub v: UPoly,
    pub field: Field,
    pub rule: BetaRule,
}

/// `rows[i][j]` is the coefficient of `x2^j` in `G_i(x0, 1, x2)`.
fn chart_rows(g: &Param) -> Vec<Vec<UPoly>> {
    g.entries()
        .iter()
        .map(|e| {
            let d = e.specialize(1, &Scalar::one());
            if d.is_zero() {
                Vec::new()
            } else {
                d.to_nested(2, 0).expect("only x0 and x2 remain")
            }
        })
        .collect()
}

/// Splits `f` until every coefficient is zero or a unit modulo each part.
fn refine(parts: Vec<UPoly>, coeffs: &[&UPoly]) -> Result<Vec<UPoly>, AlgebraError> {
    let mut work = parts;
    work.reverse();
    let mut done = Vec::new();
    'next: while let Some(f) = work.pop() {
        if f.degree().is_none_or(|d| d == 0) {
            continue;
        }
        for c in coeffs {
            let h = ugcd(&f, &c.rem(&f)?)?;
            if h.degree().is_some_and(|d| d > 0 && d < f.degree().unwrap()) {
                let other = f.div_exact(&h)?.monic()?;
                work.push(other);
                work.push(h);
                continue 'next;
            }
        }
        done.push(f);
    }
    Ok(done)
}

/// `x2`-degrees of the `G_i` modulo a refined factor `f`.
fn degrees_mod(rows: &[Vec<UPoly>], f: &UPoly) -> Result<Vec<Option<usize>>, AlgebraError> {
    rows.iter()
        .map(|row| {
            for j in (0..row.len()).rev() {
                if !row[j].rem(f)?.is_zero() {
                    return Ok(Some(j));
                }
            }
            Ok(None)
        })
        .collect()
}

/// The degree condition defining A: `G0(alpha:1:x2)` constant, or of lower
/// degree than some other entry.
fn in_a(degs: &[Option<usize>]) -> bool {
    let d0 = degs[0];
    let dm = degs[1..].iter().copied().max().flatten();
    d0.is_none_or(|d| d == 0) || d0 < dm
}

fn all_coeffs(rows: &[Vec<UPoly>]) -> Vec<&UPoly> {
    rows.iter().flatten().collect()
}

/// Squarefree part of `x0 p1`, split off into its rational linear factors.
fn critical_parts(p1: &UPoly) -> Result<(UPoly, Vec<UPoly>), AlgebraError> {
    let f0 = squarefree_part(&(&UPoly::x() * p1))?;
    let mut parts = Vec::new();
    let mut rest = f0.clone();
    for a in rational_roots(&f0) {
        let lin = UPoly::new(vec![Scalar::from(-a), Scalar::one()]);
        rest = rest.div_exact(&lin)?;
        parts.push(lin);
    }
    if rest.degree().is_some_and(|d| d > 0) {
        parts.push(rest.monic()?);
    }
    Ok((f0, parts))
}

fn residue_of_g0(row0: &[UPoly], f: &UPoly) -> Result<Vec<UPoly>, AlgebraError> {
    row0.iter().map(|c| c.rem(f)).collect()
}

fn classify_pointwise(rows: &[Vec<UPoly>], p1: &UPoly, base: &Field, ext_modulus: Option<&UPoly>) -> Result<AlphaClass, CoverError> {
    let (_, parts) = critical_parts(p1)?;
    let parts = refine(parts, &all_coeffs(rows))?;
    let mut s_a = UPoly::one();
    let mut b_parts = Vec::new();
    let mut field = base.clone();
    for f in parts {
        let degs = degrees_mod(rows, &f)?;
        if in_a(&degs) {
            s_a = &s_a * &f;
            continue;
        }
        let d0 = degs[0].unwrap();
        let g = residue_of_g0(&rows[0], &f)?;
        let beta = if d0 == 1 {
            crt_value(&-&g[0], &g[1], &f)?
        } else if f.degree() == Some(1) {
            let alpha = -f.coeff(0);
            let at = UPoly::new(g.iter().take(d0 + 1).map(|c| c.eval(&alpha)).collect());
            if let Some(root) = rational_roots(&at).pop() {
                UPoly::constant(Scalar::from(root))
            } else if field == Field::Rationals && at.is_rational() {
                let m = match ext_modulus {
                    Some(m) => m.clone(),
                    None => squarefree_part(&at)?,
                };
                let ext = Extension::new(m.to_rationals().unwrap())?;
                field = Field::Extension(ext.clone());
                UPoly::constant(Scalar::generator(&ext))
            } else {
                return Err(CoverError::NonLinearBeta { factor: at.display("x2").to_string() });
            }
        } else {
            return Err(CoverError::NonLinearBeta {
                factor: format!("G0 has x2-degree {d0} modulo {}", f.display("x0")),
            });
        };
        b_parts.push(BPart { modulus: f, beta });
    }
    Ok(AlphaClass { s_a: s_a.monic()?, b_parts, field })
}

fn series_inv(a: &UPoly, n: usize) -> Result<UPoly, AlgebraError> {
    let a0 = a.coeff(0).inv()?;
    let mut out: Vec<Scalar> = vec![a0.clone()];
    for k in 1..n {
        let mut acc = Scalar::zero();
        for i in 1..=k.min(a.coeffs().len().saturating_sub(1)) {
            acc = &acc + &(&a.coeff(i) * &out[k - i]);
        }
        out.push(-(&acc * &a0));
    }
    Ok(UPoly::new(out))
}

/// `(G0(y), G0'(y))` truncated at `x0^n`.
fn eval_series(row0: &[UPoly], y: &UPoly, n: usize) -> (UPoly, UPoly) {
    let mut val = UPoly::zero();
    let mut der = UPoly::zero();
    for c in row0.iter().rev() {
        der = (&(&der * y) + &val).truncate(n);
        val = (&(&val * y) + c).truncate(n);
    }
    (val, der)
}

/// Lifts the root `y0` of `G0(0, 1, x2)` to a root `b/a` of `G0(x0, 1, x2)`
/// in `Q(x0)`, if one exists.
fn lift_root(row0: &[UPoly], y0: Scalar) -> Result<Option<(UPoly, UPoly)>, AlgebraError> {
    let d = row0.iter().filter_map(UPoly::degree).max().unwrap_or(0);
    let n = 2 * d + 2;
    let mut y = UPoly::constant(y0);
    let mut prec = 1;
    while prec < n {
        prec = (2 * prec).min(n);
        let (val, der) = eval_series(row0, &y, prec);
        if der.coeff(0).is_zero() {
            return Ok(None);
        }
        y = (&y - &(&val * &series_inv(&der, prec)?)).truncate(prec);
    }
    let (mut r0, mut r1) = (UPoly::monomial(Scalar::one(), n), y);
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
    while r1.degree().is_some_and(|k| k > d) {
        let (q, r) = r0.divrem(&r1)?;
        r0 = std::mem::replace(&mut r1, r);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    let (b, a) = (r1, t1);
    if a.degree().is_none_or(|k| k > d) || a.coeff(0).is_zero() {
        return Ok(None);
    }
    let m = row0.len() - 1;
    let mut check = UPoly::zero();
    let mut bpow = UPoly::one();
    let mut apows = vec![UPoly::one()];
    for _ in 0..m {
        let next = apows.last().unwrap() * &a;
        apows.push(next);
    }
    for (j, c) in row0.iter().enumerate() {
        check = &check + &(&(c * &bpow) * &apows[m - j]);
        bpow = &bpow * &b;
    }
    if !check.is_zero() {
        return Ok(None);
    }
    let g = ugcd(&a, &b)?;
    Ok(Some((a.div_exact(&g)?, b.div_exact(&g)?)))
}

fn classify_global(rows: &[Vec<UPoly>], p1: &UPoly) -> Result<AlphaClass, CoverError> {
    let row0 = &rows[0];
    let no_factor = || CoverError::NonLinearBeta { factor: "G0(x0,1,x2) has no factor linear in x2 over Q(x0)".into() };
    if row0.len() < 2 || !row0.iter().all(UPoly::is_rational) {
        return Err(no_factor());
    }
    let at0 = UPoly::new(row0.iter().map(|c| c.coeff(0)).collect());
    let mut found = None;
    for root in rational_roots(&at0).into_iter().rev() {
        if let Some(ab) = lift_root(row0, Scalar::from(root))? {
            found = Some(ab);
            break;
        }
    }
    let (a, b) = found.ok_or_else(no_factor)?;
    let (f0, _) = critical_parts(p1)?;
    let s_a = ugcd(&a, &f0)?;
    let m = f0.div_exact(&s_a)?.monic()?;
    let b_parts = if m.degree().is_some_and(|d| d > 0) {
        vec![BPart { beta: crt_value(&b, &a, &m)?, modulus: m }]
    } else {
        Vec::new()
    };
    Ok(AlphaClass { s_a, b_parts, field: Field::Rationals })
}

/// Sorts the critical lines into A and B and chooses `beta` on B.
pub fn classify(g: &Param, p1: &UPoly, rule: BetaRule) -> Result<AlphaClass, CoverError> {
    classify_with(g, p1, rule, None)
}

fn classify_with(g: &Param, p1: &UPoly, rule: BetaRule, ext: Option<&UPoly>) -> Result<AlphaClass, CoverError> {
    let rows = chart_rows(g);
    match rule {
        BetaRule::Pointwise => classify_pointwise(&rows, p1, g.field(), ext),
        BetaRule::GlobalFactor => classify_global(&rows, p1),
    }
}

/// Integer-primitive with positive leading coefficient when rational,
/// monic otherwise.
fn normalize_s(s: &UPoly) -> Result<UPoly, AlgebraError> {
    match s.integer_primitive() {
        Some((_, p)) => Ok(p),
        None => s.monic(),
    }
}

/// `s` vanishes exactly on A; `r = beta s` on B and `r != 0` on A.
pub fn build_rs(cls: &AlphaClass) -> Result<(UPoly, UPoly), CoverError> {
    let s = normalize_s(&cls.s_a)?;
    let mut r = UPoly::zero();
    let mut modp = UPoly::one();
    for part in &cls.b_parts {
        let target = (&part.beta * &s).rem(&part.modulus)?;
        let diff = (&target - &r).rem(&part.modulus)?;
        let k = (&diff * &inv_mod(&modp, &part.modulus)?).rem(&part.modulus)?;
        r = &r + &(&modp * &k);
        modp = &modp * &part.modulus;
    }
    let base = r.clone();
    let mut t = 0i64;
    while !ugcd(&r, &cls.s_a)?.is_constant() {
        t += 1;
        r = &base + &modp.scale(&Scalar::from(t));
    }
    Ok((r, s))
}

/// Builds `g'` from an existing three-patch result.
pub fn affine_cover(tp: &ThreePatch, rule: BetaRule) -> Result<AffineCover, CoverError> {
    let mut ext: Option<UPoly> = None;
    loop {
        match affine_cover_once(tp, rule, ext.as_ref()) {
            Err(CoverError::Algebra(AlgebraError::ZeroDivisor { factor, .. })) => {
                // The adjoined root was a zero divisor: keep one factor.
                ext = Some(UPoly::from_rationals(factor));
            }
            other => return other,
        }
    }
}

fn affine_cover_once(tp: &ThreePatch, rule: BetaRule, ext: Option<&UPoly>) -> Result<AffineCover, CoverError> {
    let class = classify_with(&tp.g, &tp.p1, rule, ext)?;
    let (r, s) = build_rs(&class)?;
    let (one, u, v) = extended_gcd(&r, &s)?;
    debug_assert!(one.is_one());
    let field = tp.g.field().join(&class.field)?;
    Ok(AffineCover { g: tp.g.clone(), p1: tp.p1.clone(), class, r, s, u, v, field, rule })
}

pub fn two_patch(f: &Param) -> Result<AffineCover, CoverError> {
    two_patch_with(f, BetaRule::default())
}

pub fn two_patch_with(f: &Param, rule: BetaRule) -> Result<AffineCover, CoverError> {
    affine_cover(&three_patch(f)?, rule)
}

/// Outcome of the infinity-avoidance check on one group of critical lines.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCheck {
    pub modulus: UPoly,
    pub in_a: bool,
    pub holds: bool,
}

impl AffineCover {
    /// `G(x0 D : D : N)` with `N = r x2 + v`, `D = s x2 - u`: the point
    /// `g'(x0, x2)` in homogeneous coordinates.
    pub fn eval(&self, x0: &Scalar, x2: &Scalar) -> Vec<Scalar> {
        let n = &(&self.r.eval(x0) * x2) + &self.v.eval(x0);
        let d = &(&self.s.eval(x0) * x2) - &self.u.eval(x0);
        self.g.eval(&[x0 * &d, d, n])
    }

    /// `u r + v s`.
    pub fn bezout(&self) -> UPoly {
        &(&self.u * &self.r) + &(&self.v * &self.s)
    }

    /// Determinant `-(r u + v s)` of the Moebius map on each vertical line.
    pub fn mobius_determinant(&self) -> UPoly {
        -&self.bezout()
    }

    /// For every group of lines in A, `G0(alpha:1:x2)` is constant or drops
    /// degree; for every group in B, `G0(alpha:1:beta) = 0`.
    pub fn infinity_avoidance(&self) -> Result<Vec<LineCheck>, AlgebraError> {
        let rows = chart_rows(&self.g);
        let mut out = Vec::new();
        for f in refine(vec![self.class.s_a.clone()], &all_coeffs(&rows))? {
            let holds = in_a(&degrees_mod(&rows, &f)?);
            out.push(LineCheck { modulus: f, in_a: true, holds });
        }
        for part in &self.class.b_parts {
            let mut acc = UPoly::zero();
            for c in rows[0].iter().rev() {
                acc = (&(&acc * &part.beta) + c).rem(&part.modulus)?;
            }
            out.push(LineCheck { modulus: part.modulus.clone(), in_a: false, holds: acc.is_zero() });
        }
        Ok(out)
    }

    /// The substitution `x2 -> (r x2 + v)/(s x2 - u)` in text form.
    pub fn mobius_display(&self) -> String {
        let wrap = |p: &UPoly| {
            let t = if p.degree() == Some(0) { p.coeff(0).to_string() } else { p.display("x0").to_string() };
            if t.contains(' ') {
                format!("({t})")
            } else {
                t
            }
        };
        let num = linear_in_x2(&wrap(&self.r), &self.r, &self.v, false);
        let den = linear_in_x2(&wrap(&self.s), &self.s, &self.u, true);
        format!("({num})/({den})")
    }
}

fn linear_in_x2(coef_text: &str, coef: &UPoly, tail: &UPoly, negate: bool) -> String {
    let head = if coef.is_zero() {
        String::new()
    } else if coef.is_one() {
        "x2".to_string()
    } else {
        format!("{coef_text}*x2")
    };
    let tail = if negate { -tail } else { tail.clone() };
    if tail.is_zero() {
        return if head.is_empty() { "0".into() } else { head };
    }
    let t = tail.display("x0").to_string();
    if head.is_empty() {
        return t;
    }
    match t.strip_prefix('-') {
        Some(rest) if tail.coeffs().len() == 1 || !rest.contains(['+', '-']) => format!("{head} - {rest}"),
        _ if t.contains(' ') => format!("{head} + ({t})"),
        _ => format!("{head} + {t}"),
    }
}

impl fmt::Display for AffineCover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g'(x0, x2) = G(x0:1:{})", self.mobius_display())
    }
}
