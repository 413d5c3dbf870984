//! Sparse polynomials in `x0, x1, x2` and projective parametrizations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;

use crate::arith::{Field, Rational, Scalar};
use crate::error::{AlgebraError, ParamError};
use crate::upoly::{integer_primitive_rationals, ugcd, write_term, UPoly};

pub type Mono = [u32; 3];

pub const VAR_NAMES: [&str; 3] = ["x0", "x1", "x2"];

pub fn total_degree(m: &Mono) -> u32 {
    m[0] + m[1] + m[2]
}

/// Graded lexicographic comparison with `x0 > x1 > x2`.
pub fn grlex_cmp(a: &Mono, b: &Mono) -> Ordering {
    total_degree(a).cmp(&total_degree(b)).then_with(|| a.cmp(b))
}

/// Lexicographic comparison with `x2 > x1 > x0`.
pub fn lex_cmp(a: &Mono, b: &Mono) -> Ordering {
    (a[2], a[1], a[0]).cmp(&(b[2], b[1], b[0]))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, [0, 0, 0])
    }

    pub fn term(c: Scalar, m: Mono) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(i: usize) -> Self {
        let mut m = [0; 3];
        m[i] = 1;
        Self::term(Scalar::one(), m)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, Scalar)>) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(e) => {
                let s = &*e + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *e = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| total_degree(m) == 0)
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Total degree; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(total_degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Degree and coefficient of the grlex-leading term.
    pub fn leading_grlex(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn leading_lex(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().max_by(|a, b| lex_cmp(a.0, b.0))
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_term(&self, c: &Scalar, m: &Mono) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, a)| ([k[0] + m[0], k[1] + m[1], k[2] + m[2]], a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, pt: &[Scalar; 3]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                if m[i] > 0 {
                    t = &t * &pt[i].pow(m[i]);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Replaces variable `var` by the constant `value`.
    pub fn specialize(&self, var: usize, value: &Scalar) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let mut k = *m;
            k[var] = 0;
            out.add_term(k, c * &value.pow(m[var]));
        }
        out
    }

    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m[var] > 0 {
                let mut k = *m;
                k[var] -= 1;
                out.add_term(k, c * &Scalar::from(m[var] as i64));
            }
        }
        out
    }

    /// Substitutes `sub[i]` for `x_i`.
    pub fn substitute(&self, sub: &[MPoly; 3]) -> MPoly {
        let mut cache: [Vec<MPoly>; 3] = Default::default();
        for i in 0..3 {
            let top = self.degree_in(i).unwrap_or(0) as usize;
            let mut pows = vec![MPoly::one()];
            for e in 1..=top {
                let next = &pows[e - 1] * &sub[i];
                pows.push(next);
            }
            cache[i] = pows;
        }
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let t = &(&cache[0][m[0] as usize] * &cache[1][m[1] as usize]) * &cache[2][m[2] as usize];
            for (k, a) in t.terms {
                out.add_term(k, &a * c);
            }
        }
        out
    }

    /// The univariate polynomial in `var`, if no other variable occurs.
    pub fn to_upoly(&self, var: usize) -> Option<UPoly> {
        let top = self.degree_in(var)? as usize;
        let mut v = vec![Scalar::zero(); top + 1];
        for (m, c) in &self.terms {
            if (0..3).any(|j| j != var && m[j] > 0) {
                return None;
            }
            v[m[var] as usize] = c.clone();
        }
        Some(UPoly::new(v))
    }

    pub fn from_upoly(p: &UPoly, var: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in p.coeffs().iter().enumerate() {
            let mut m = [0; 3];
            m[var] = e as u32;
            out.add_term(m, c.clone());
        }
        out
    }

    /// Coefficients with respect to `main`, each a polynomial in `coef`;
    /// the third variable must not occur.
    pub fn to_nested(&self, main: usize, coef: usize) -> Option<Vec<UPoly>> {
        let top = self.degree_in(main).unwrap_or(0) as usize;
        let mut rows: Vec<BTreeMap<u32, Scalar>> = vec![BTreeMap::new(); top + 1];
        for (m, c) in &self.terms {
            if (0..3).any(|j| j != main && j != coef && m[j] > 0) {
                return None;
            }
            rows[m[main] as usize].insert(m[coef], c.clone());
        }
        Some(
            rows.into_iter()
                .map(|r| {
                    let d = r.keys().max().copied().unwrap_or(0) as usize;
                    let mut v = vec![Scalar::zero(); d + 1];
                    for (e, c) in r {
                        v[e as usize] = c;
                    }
                    UPoly::new(v)
                })
                .collect(),
        )
    }

    pub fn from_nested(rows: &[UPoly], main: usize, coef: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, c) in row.coeffs().iter().enumerate() {
                let mut m = [0; 3];
                m[main] = i as u32;
                m[coef] = j as u32;
                out.add_term(m, c.clone());
            }
        }
        out
    }

    /// Homogenizes with respect to `var` to total degree `d`.
    pub fn homogenize(&self, var: usize, d: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut k = *m;
                    k[var] += d - total_degree(m);
                    (k, c.clone())
                })
                .collect(),
        }
    }

    /// Largest power of each variable dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut out = [u32::MAX; 3];
        for m in self.terms.keys() {
            for i in 0..3 {
                out[i] = out[i].min(m[i]);
            }
        }
        if self.is_zero() {
            [0; 3]
        } else {
            out
        }
    }

    pub fn div_mono(&self, m: &Mono) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| ([k[0] - m[0], k[1] - m[1], k[2] - m[2]], c.clone()))
                .collect(),
        }
    }

    /// Exact division; errors when `b` does not divide `self`.
    pub fn div_exact(&self, b: &MPoly) -> Result<MPoly, AlgebraError> {
        let (lm, lc) = b.leading_grlex().ok_or(AlgebraError::DivisionByZero)?;
        let (lm, lc_inv) = (*lm, lc.inv()?);
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((m, c)) = r.leading_grlex() {
            if (0..3).any(|i| m[i] < lm[i]) {
                return Err(AlgebraError::InexactDivision);
            }
            let k = [m[0] - lm[0], m[1] - lm[1], m[2] - lm[2]];
            let t = c * &lc_inv;
            r = &r - &b.mul_term(&t, &k);
            q.add_term(k, t);
        }
        Ok(q)
    }

    pub fn divides(&self, a: &MPoly) -> bool {
        a.div_exact(self).is_ok()
    }

    /// Normal form up to a constant factor: integral primitive with positive
    /// grlex-leading coefficient over Q, monic otherwise.
    pub fn normalized(&self) -> MPoly {
        self.scale(&self.normalizing_factor())
    }

    pub fn normalizing_factor(&self) -> Scalar {
        let Some((_, lc)) = self.leading_grlex() else {
            return Scalar::one();
        };
        if self.is_rational() {
            let mut terms: Vec<(&Mono, &Scalar)> = self.terms.iter().collect();
            terms.sort_by(|a, b| grlex_cmp(a.0, b.0));
            let rs: Vec<Rational> =
                terms.iter().map(|(_, c)| c.as_rational().unwrap().clone()).collect();
            let (c, _) = integer_primitive_rationals(&rs);
            Scalar::Rational(c.recip())
        } else {
            lc.inv().unwrap_or_else(|_| Scalar::one())
        }
    }

    pub fn display(&self) -> impl fmt::Display + '_ {
        MPolyDisplay { p: self, names: &VAR_NAMES }
    }
}

struct MPolyDisplay<'a> {
    p: &'a MPoly,
    names: &'a [&'a str; 3],
}

pub(crate) fn monomial_string(m: &Mono, names: &[&str; 3]) -> String {
    let mut parts = Vec::new();
    for i in 0..3 {
        match m[i] {
            0 => {}
            1 => parts.push(names[i].to_string()),
            e => parts.push(format!("{}^{e}", names[i])),
        }
    }
    parts.join("*")
}

impl fmt::Display for MPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Mono, &Scalar)> = self.p.terms.iter().collect();
        terms.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            write_term(f, c, &monomial_string(m, self.names), i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display().fmt(f)
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], x * y);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// A projective parametrization `(F0 : ... : Fn)` of a surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    entries: Vec<MPoly>,
    degree: u32,
    field: Field,
}

impl Param {
    /// Validates homogeneity, equal degree, a nonzero entry and coprimality.
    pub fn new(entries: Vec<MPoly>, field: Field) -> Result<Self, ParamError> {
        let p = Self::with_degree_checks(entries, field)?;
        let g = list_gcd(&p.entries)?;
        if !g.is_constant() {
            return Err(ParamError::NotCoprime { factor: g.to_string() });
        }
        Ok(p)
    }

    /// Like [`Param::new`] without the coprimality check.
    pub fn with_degree_checks(entries: Vec<MPoly>, field: Field) -> Result<Self, ParamError> {
        let mut degree = None;
        for (i, e) in entries.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            if !e.is_homogeneous() {
                return Err(ParamError::InhomogeneousEntry { index: i });
            }
            let d = e.degree().unwrap();
            match degree {
                None => degree = Some(d),
                Some(expected) if expected != d => {
                    return Err(ParamError::DegreeMismatch { index: i, expected, found: d })
                }
                _ => {}
            }
        }
        let degree = degree.ok_or(ParamError::AllZero)?;
        Ok(Param { entries, degree, field })
    }

    pub fn entries(&self) -> &[MPoly] {
        &self.entries
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The `n` of the ambient `P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn eval(&self, pt: &[Scalar; 3]) -> Vec<Scalar> {
        self.entries.iter().map(|e| e.eval(pt)).collect()
    }

    /// Common scaling so the first nonzero entry has the normal form of
    /// [`MPoly::normalized`].
    pub fn normalized(&self) -> Param {
        let c = self
            .entries
            .iter()
            .find(|e| !e.is_zero())
            .map(MPoly::normalizing_factor)
            .unwrap_or_else(Scalar::one);
        let c = if self.entries.iter().all(MPoly::is_rational) {
            entries_primitive_factor(&self.entries).unwrap_or(c)
        } else {
            c
        };
        Param {
            entries: self.entries.iter().map(|e| e.scale(&c)).collect(),
            degree: self.degree,
            field: self.field.clone(),
        }
    }

    /// `F(M x)` for a 3x3 matrix `M` (rows act on `x`).
    pub fn linear_change(&self, m: &[[Scalar; 3]; 3]) -> Param {
        let sub: [MPoly; 3] = std::array::from_fn(|i| {
            MPoly::from_terms((0..3).map(|j| {
                let mut e = [0; 3];
                e[j] = 1;
                (e, m[i][j].clone())
            }))
        });
        Param {
            entries: self.entries.iter().map(|e| e.substitute(&sub)).collect(),
            degree: self.degree,
            field: self.field.clone(),
        }
    }
}

/// Factor making all entries jointly integral and primitive, with the
/// grlex-leading coefficient of the first nonzero entry positive.
fn entries_primitive_factor(entries: &[MPoly]) -> Option<Scalar> {
    let first = entries.iter().find(|e| !e.is_zero())?;
    let mut all: Vec<Rational> = Vec::new();
    for e in entries {
        all.extend(e.terms().map(|(_, c)| c.as_rational().unwrap().abs()));
    }
    let (c, _) = integer_primitive_rationals(&all);
    let lead = first.leading_grlex().unwrap().1.as_rational().unwrap().clone();
    let c = if lead.is_negative() { -c } else { c };
    Some(Scalar::Rational(c.recip()))
}

/// Entry-wise substitution `F_i(sub0, sub1, sub2)`.
pub fn compose(f: &Param, sub: &[MPoly; 3]) -> Result<Vec<MPoly>, AlgebraError> {
    let mut degree = None;
    for s in sub.iter().filter(|s| !s.is_zero()) {
        if !s.is_homogeneous() {
            return Err(AlgebraError::InhomogeneousSubstitution);
        }
        match degree {
            None => degree = s.degree(),
            Some(d) if Some(d) != s.degree() => return Err(AlgebraError::InhomogeneousSubstitution),
            _ => {}
        }
    }
    Ok(f.entries.iter().map(|e| e.substitute(sub)).collect())
}

/// `J[i][j] = dF_i / dx_j`.
pub fn jacobian(f: &Param) -> Vec<[MPoly; 3]> {
    f.entries
        .iter()
        .map(|e| std::array::from_fn(|j| e.derivative(j)))
        .collect()
}

/// The form `sum c_i x0^i y^(k-i)` with `y = x_second_var`.
pub fn homogenize_univariate(p: &UPoly, k: usize, second_var: usize) -> Result<MPoly, AlgebraError> {
    if let Some(d) = p.degree() {
        if d > k {
            return Err(AlgebraError::DegreeExceedsK { degree: d, k });
        }
    }
    let mut out = MPoly::zero();
    for (i, c) in p.coeffs().iter().enumerate() {
        let mut m = [0; 3];
        m[0] = i as u32;
        m[second_var] += (k - i) as u32;
        out.add_term(m, c.clone());
    }
    Ok(out)
}

/// Gcd of the nonzero entries, normalized by [`MPoly::normalized`]. Entries
/// must be homogeneous.
pub fn list_gcd(polys: &[MPoly]) -> Result<MPoly, AlgebraError> {
    let mut nonzero: Vec<&MPoly> = polys.iter().filter(|p| !p.is_zero()).collect();
    if !nonzero.iter().all(|p| p.is_homogeneous()) {
        return Err(AlgebraError::InhomogeneousGcdInput);
    }
    nonzero.sort_by_key(|p| (p.degree(), p.len()));
    let Some(first) = nonzero.first() else {
        return Ok(MPoly::zero());
    };
    let mut g = (*first).clone();
    for p in &nonzero[1..] {
        if g.is_constant() {
            break;
        }
        if g.divides(p) {
            continue;
        }
        g = homogeneous_gcd(&g, p)?;
    }
    Ok(if g.is_constant() { MPoly::one() } else { g.normalized() })
}

/// Gcd of two nonzero homogeneous polynomials.
fn homogeneous_gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, AlgebraError> {
    let ca = a.monomial_content();
    let cb = b.monomial_content();
    let v2 = ca[2].min(cb[2]);
    let a2 = a.div_mono(&[0, 0, ca[2]]).specialize(2, &Scalar::one());
    let b2 = b.div_mono(&[0, 0, cb[2]]).specialize(2, &Scalar::one());
    let g = bivariate_gcd(&a2, &b2)?;
    let d = g.degree().unwrap_or(0);
    Ok(g.homogenize(2, d).mul_term(&Scalar::one(), &[0, 0, v2]))
}

/// Gcd of polynomials in `x0, x1` by a primitive remainder sequence.
fn bivariate_gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, AlgebraError> {
    let (main, coef) = if a.degree_in(0).max(b.degree_in(0)) < a.degree_in(1).max(b.degree_in(1)) {
        (0, 1)
    } else {
        (1, 0)
    };
    let na = a.to_nested(main, coef).expect("bivariate");
    let nb = b.to_nested(main, coef).expect("bivariate");
    let (ca, pa) = primitive(&na)?;
    let (cb, pb) = primitive(&nb)?;
    let c = ugcd(&ca, &cb)?;
    let (mut r0, mut r1) = if pa.len() >= pb.len() { (pa, pb) } else { (pb, pa) };
    while r1.len() > 1 {
        let r = pseudo_rem(&r0, &r1);
        r0 = r1;
        if r.is_empty() {
            r1 = Vec::new();
            break;
        }
        r1 = primitive(&r)?.1;
    }
    let g = if r1.is_empty() { r0 } else { vec![UPoly::one()] };
    let g: Vec<UPoly> = g.iter().map(|row| row * &c).collect();
    Ok(MPoly::from_nested(&g, main, coef))
}

fn trim_nested(v: &mut Vec<UPoly>) {
    while v.last().is_some_and(UPoly::is_zero) {
        v.pop();
    }
}

fn primitive(v: &[UPoly]) -> Result<(UPoly, Vec<UPoly>), AlgebraError> {
    let mut c = UPoly::zero();
    for row in v {
        c = ugcd(&c, row)?;
        if c.is_constant() && !c.is_zero() {
            break;
        }
    }
    let mut out: Vec<UPoly> = v.iter().map(|row| row.div_exact(&c)).collect::<Result<_, _>>()?;
    trim_nested(&mut out);
    let flat: Option<Vec<Rational>> = out.iter().map(UPoly::to_rationals).collect::<Option<Vec<_>>>().map(|rows| rows.concat());
    if let Some(flat) = flat {
        let (k, _) = integer_primitive_rationals(&flat);
        let k = Scalar::Rational(k.recip());
        out = out.iter().map(|row| row.scale(&k)).collect();
    }
    Ok((c, out))
}

/// Pseudo-remainder of nested polynomials (main variable outside).
fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let lr = r.last().unwrap().clone();
        for row in r.iter_mut() {
            *row = &*row * lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(bj * &lr);
        }
        r.pop();
        trim_nested(&mut r);
    }
    r
}

/// Polynomial in an arbitrary number of named variables; used for implicit
/// equations in the ambient coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SparsePoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&m) {
            Some(e) => &e + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(m, s);
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn eval(&self, pt: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = &t * &pt[i].pow(e);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Display with the given variable names, graded order descending.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        SparseDisplay { p: self, names }
    }
}

struct SparseDisplay<'a> {
    p: &'a SparsePoly,
    names: &'a [String],
}

impl fmt::Display for SparseDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.p.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { self.names[j].clone() } else { format!("{}^{e}", self.names[j]) })
                .collect();
            write_term(f, c, &mono.join("*"), i == 0)?;
        }
        Ok(())
    }
}

impl From<&MPoly> for SparsePoly {
    fn from(p: &MPoly) -> Self {
        let mut out = SparsePoly::zero(3);
        for (m, c) in p.terms() {
            out.add_term(m.to_vec(), c.clone());
        }
        out
    }
}

/// Rational convenience constructor used throughout the tests.
pub fn mpoly_from_ints(terms: &[(i64, Mono)]) -> MPoly {
    MPoly::from_terms(terms.iter().map(|&(c, m)| (m, Scalar::from(c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn x(i: usize) -> MPoly {
        MPoly::var(i)
    }

    fn c(n: i64) -> MPoly {
        MPoly::constant(Scalar::from(n))
    }

    pub(crate) fn whitney() -> Param {
        let m = |c: i64, e: Mono| (c, e);
        let e0 = mpoly_from_ints(&[m(1, [0, 0, 2]), m(-2, [1, 0, 1]), m(1, [2, 0, 0])]);
        let e1 = mpoly_from_ints(&[m(1, [0, 2, 0]), m(1, [0, 1, 1]), m(-1, [1, 1, 0]), m(-1, [1, 0, 1])]);
        let e2 = mpoly_from_ints(&[m(-1, [0, 1, 1]), m(1, [1, 1, 0]), m(1, [1, 0, 1]), m(-1, [2, 0, 0])]);
        let e3 = mpoly_from_ints(&[m(1, [0, 2, 0]), m(2, [0, 1, 1]), m(1, [0, 0, 2])]);
        Param::new(vec![e0, e1, e2, e3], Field::Rationals).unwrap()
    }

    #[test]
    fn param_validation() {
        let bad = vec![x(0).pow(2), &x(0) + &x(1).pow(2)];
        assert_eq!(
            Param::new(bad, Field::Rationals),
            Err(ParamError::InhomogeneousEntry { index: 1 })
        );
        let mismatch = vec![x(0).pow(2), x(1)];
        assert!(matches!(
            Param::new(mismatch, Field::Rationals),
            Err(ParamError::DegreeMismatch { index: 1, .. })
        ));
        let common = vec![&x(0) * &x(1), &x(0) * &x(2)];
        assert!(matches!(Param::new(common, Field::Rationals), Err(ParamError::NotCoprime { .. })));
        assert_eq!(Param::new(vec![MPoly::zero()], Field::Rationals), Err(ParamError::AllZero));
    }

    #[test]
    fn whitney_first_chart_composition() {
        let f = whitney();
        let p1 = homogenize_univariate(&UPoly::from_ints(&[1, 1]), 1, 1).unwrap();
        assert_eq!(p1, &x(0) + &x(1));
        let q1 = homogenize_univariate(&UPoly::from_ints(&[-1]), 0, 1).unwrap();
        let sub = [&x(0) * &x(1), x(1).pow(2), &(&x(1).pow(2) * &q1) + &(&x(2) * &p1)];
        let gt = compose(&f, &sub).unwrap();
        let g = list_gcd(&gt).unwrap();
        assert_eq!(g, &x(0) + &x(1));
        for e in &gt {
            assert_eq!(e.degree(), Some(4));
        }
    }

    #[test]
    fn identity_substitution() {
        let f = whitney();
        assert_eq!(compose(&f, &[x(0), x(1), x(2)]).unwrap(), f.entries().to_vec());
        assert_eq!(
            compose(&f, &[x(0), x(1).pow(2), x(2)]),
            Err(AlgebraError::InhomogeneousSubstitution)
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(list_gcd(&[x(0), x(1)]).unwrap(), MPoly::one());
        let a = &(&x(2) - &x(0)) * &(&x(0).pow(2) + &x(1).pow(2));
        let b = &(&x(0) - &x(2)) * &(&x(1) * &x(2));
        assert_eq!(list_gcd(&[a, b]).unwrap(), &x(0) - &x(2));
        let m = &x(2).pow(3) * &x(0);
        let n = &x(2).pow(2) * &x(1);
        assert_eq!(list_gcd(&[m, n]).unwrap(), x(2).pow(2));
    }

    #[test]
    fn jacobian_examples() {
        let f = Param::new(vec![x(0).pow(2), x(1).pow(2), x(2).pow(2)], Field::Rationals).unwrap();
        let j = jacobian(&f);
        for (i, row) in j.iter().enumerate() {
            for (k, entry) in row.iter().enumerate() {
                let expect = if i == k { x(i).scale(&Scalar::from(2)) } else { MPoly::zero() };
                assert_eq!(*entry, expect);
            }
        }
        let w = whitney();
        for (row, e) in jacobian(&w).iter().zip(w.entries()) {
            let euler = (0..3).fold(MPoly::zero(), |acc, k| &acc + &(&x(k) * &row[k]));
            assert_eq!(euler, e.scale(&Scalar::from(2)));
        }
    }

    #[test]
    fn jacobian_rank_at_whitney_base_point() {
        let pt = [Scalar::from(1), Scalar::from(-1), Scalar::from(1)];
        let rows: Vec<Vec<Rational>> = jacobian(&whitney())
            .iter()
            .map(|r| r.iter().map(|e| e.eval(&pt).as_rational().unwrap().clone()).collect())
            .collect();
        assert_eq!(rank(rows), 2);
    }

    /// Row reduction over Q.
    fn rank(mut m: Vec<Vec<Rational>>) -> usize {
        let mut rank = 0;
        for col in 0..m[0].len() {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][col].is_zero() {
                    let f = &m[r][col] / &m[rank][col];
                    for k in 0..m[0].len() {
                        let v = &m[rank][k] * &f;
                        m[r][k] -= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn homogenize_round_trip() {
        let q = UPoly::from_ints(&[3, -1, 0, 4, 2, -7]);
        let h = homogenize_univariate(&q, 5, 1).unwrap();
        assert!(h.is_homogeneous());
        assert_eq!(h.degree(), Some(5));
        assert_eq!(h.specialize(1, &Scalar::one()).to_upoly(0).unwrap(), q);
        assert_eq!(homogenize_univariate(&UPoly::one(), 0, 1).unwrap(), MPoly::one());
        assert!(homogenize_univariate(&q, 3, 1).is_err());
    }

    #[test]
    fn display_grlex() {
        let p = &(&x(2).pow(2) - &x(0).pow(2).scale(&Scalar::ratio(1, 2))) + &c(3);
        assert_eq!(p.to_string(), "-1/2*x0^2 + x2^2 + 3");
    }

    fn arb_form(deg: u32) -> impl Strategy<Value = MPoly> {
        let monos: Vec<Mono> = (0..=deg)
            .flat_map(|a| (0..=deg - a).map(move |b| [a, b, deg - a - b]))
            .collect();
        prop::collection::vec(-4i64..=4, monos.len()).prop_map(move |cs| {
            MPoly::from_terms(monos.iter().zip(cs).map(|(m, c)| (*m, Scalar::from(c))))
        })
    }

    /// Substitution by expanding each monomial as a product of factors.
    fn naive_substitute(p: &MPoly, sub: &[MPoly; 3]) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in p.terms() {
            let mut t = MPoly::constant(c.clone());
            for i in 0..3 {
                for _ in 0..m[i] {
                    t = &t * &sub[i];
                }
            }
            out = &out + &t;
        }
        out
    }

    proptest! {
        #[test]
        fn compose_matches_naive(f in arb_form(2), s0 in arb_form(1), s1 in arb_form(1), s2 in arb_form(1)) {
            let sub = [s0, s1, s2];
            prop_assert_eq!(f.substitute(&sub), naive_substitute(&f, &sub));
        }

        #[test]
        fn compose_is_homomorphism(a in arb_form(2), b in arb_form(2), s0 in arb_form(2), s1 in arb_form(2), s2 in arb_form(2)) {
            let sub = [s0, s1, s2];
            prop_assert_eq!((&a + &b).substitute(&sub), &a.substitute(&sub) + &b.substitute(&sub));
            prop_assert_eq!((&a * &b).substitute(&sub), &a.substitute(&sub) * &b.substitute(&sub));
        }

        #[test]
        fn gcd_divides_and_leaves_coprime(c0 in arb_form(1), a in arb_form(2), b in arb_form(2)) {
            prop_assume!(!c0.is_zero() && !a.is_zero() && !b.is_zero());
            let list = [&c0 * &a, &c0 * &b];
            let g = list_gcd(&list).unwrap();
            prop_assert!(c0.divides(&g));
            let rest: Vec<MPoly> = list.iter().map(|e| e.div_exact(&g).unwrap()).collect();
            prop_assert!(list_gcd(&rest).unwrap().is_constant());
        }
    }
}
