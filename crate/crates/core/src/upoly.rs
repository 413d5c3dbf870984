//! Dense univariate polynomials over [`Scalar`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rational, Rational, Scalar};
use crate::error::AlgebraError;

/// Coefficients from low to high degree; never has a trailing zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<Scalar>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_rationals(coeffs: Vec<Rational>) -> Self {
        Self::new(coeffs.into_iter().map(Scalar::Rational).collect())
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `c * x^e`.
    pub fn monomial(c: Scalar, e: usize) -> Self {
        let mut v = vec![Scalar::zero(); e + 1];
        v[e] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Coefficients as rationals, if none is algebraic.
    pub fn to_rationals(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational().cloned()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.as_rational().is_some())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Scalar::from(i as i64))
                .collect(),
        )
    }

    /// `self(other(x))`.
    pub fn compose(&self, other: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &UPoly::constant(c.clone());
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: &Scalar) -> UPoly {
        self.compose(&UPoly::new(vec![c.clone(), Scalar::one()]))
    }

    /// Truncation to the terms of degree below `n`.
    pub fn truncate(&self, n: usize) -> UPoly {
        UPoly::new(self.coeffs.iter().take(n).cloned().collect())
    }

    pub fn monic(&self) -> Result<UPoly, AlgebraError> {
        if self.is_zero() {
            return Ok(UPoly::zero());
        }
        Ok(self.scale(&self.lc().inv()?))
    }

    /// Division with remainder by a polynomial with invertible leading
    /// coefficient.
    pub fn divrem(&self, b: &UPoly) -> Result<(UPoly, UPoly), AlgebraError> {
        let db = b.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lc_inv = b.lc().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= db {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![Scalar::zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let c = &r[i] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            let shift = i - db;
            for (j, bj) in b.coeffs.iter().enumerate() {
                r[shift + j] = &r[shift + j] - &(&c * bj);
            }
            q[shift] = c;
        }
        r.truncate(db);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn rem(&self, b: &UPoly) -> Result<UPoly, AlgebraError> {
        Ok(self.divrem(b)?.1)
    }

    pub fn div_exact(&self, b: &UPoly) -> Result<UPoly, AlgebraError> {
        let (q, r) = self.divrem(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::InexactDivision)
        }
    }

    /// For a rational polynomial, returns `(c, P)` with `self = c * P`, `P`
    /// integral with coprime coefficients and positive leading coefficient.
    pub fn integer_primitive(&self) -> Option<(Rational, UPoly)> {
        let rs = self.to_rationals()?;
        let (c, p) = integer_primitive_rationals(&rs);
        Some((c, UPoly::from_rationals(p)))
    }

    /// Display with the given variable name, highest degree first.
    pub fn display<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        UPolyDisplay { p: self, var }
    }
}

/// `v = c * w` with `w` integral, primitive, positive leading coefficient.
pub(crate) fn integer_primitive_rationals(v: &[Rational]) -> (Rational, Vec<Rational>) {
    let nonzero: Vec<&Rational> = v.iter().filter(|c| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return (Rational::one(), v.to_vec());
    }
    let den = nonzero.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = nonzero
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(&(c.numer() * (&den / c.denom()))));
    let mut c = Rational::new(num, den);
    if v.iter().rev().find(|x| !x.is_zero()).unwrap().is_negative() {
        c = -c;
    }
    let inv = c.recip();
    (c, v.iter().map(|x| x * &inv).collect())
}

struct UPolyDisplay<'a> {
    p: &'a UPoly,
    var: &'a str,
}

impl fmt::Display for UPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.p.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, &monomial_name(self.var, i), first)?;
            first = false;
        }
        Ok(())
    }
}

fn monomial_name(var: &str, e: usize) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

/// Writes `c * mono` as a term of a sum; `mono` empty means a constant.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &Scalar,
    mono: &str,
    first: bool,
) -> fmt::Result {
    match c {
        Scalar::Rational(r) => {
            let neg = r.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mag = r.abs();
            if mono.is_empty() {
                fmt_rational(&mag, f)
            } else if mag.is_one() {
                write!(f, "{mono}")
            } else {
                fmt_rational(&mag, f)?;
                write!(f, "*{mono}")
            }
        }
        Scalar::Algebraic(_) => {
            if !first {
                write!(f, " + ")?;
            }
            if mono.is_empty() {
                write!(f, "({c})")
            } else {
                write!(f, "({c})*{mono}")
            }
        }
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }
}

impl Neg for &UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for UPoly {
            type Output = UPoly;
            fn $m(self, rhs: UPoly) -> UPoly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Monic gcd; `ugcd(0, 0)` is zero.
pub fn ugcd(a: &UPoly, b: &UPoly) -> Result<UPoly, AlgebraError> {
    let (mut r0, mut r1) = (primitive_if_rational(a), primitive_if_rational(b));
    while !r1.is_zero() {
        let r = r0.rem(&r1)?;
        r0 = std::mem::replace(&mut r1, primitive_if_rational(&r));
    }
    r0.monic()
}

fn primitive_if_rational(p: &UPoly) -> UPoly {
    match p.integer_primitive() {
        Some((_, q)) => q,
        None => p.clone(),
    }
}

/// Returns `(g, u, v)` with `u*a + v*b = g`, `g` the monic gcd, and
/// `deg u < deg b - deg g`, `deg v < deg a - deg g` whenever neither input
/// divides the other.
pub fn extended_gcd(a: &UPoly, b: &UPoly) -> Result<(UPoly, UPoly, UPoly), AlgebraError> {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (UPoly::one(), UPoly::zero());
    let (mut t0, mut t1) = (UPoly::zero(), UPoly::one());
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0.is_zero() {
        return Ok((UPoly::zero(), UPoly::zero(), UPoly::zero()));
    }
    let inv = r0.lc().inv()?;
    Ok((r0.scale(&inv), s0.scale(&inv), t0.scale(&inv)))
}

/// Monic product of the distinct irreducible factors.
pub fn squarefree_part(p: &UPoly) -> Result<UPoly, AlgebraError> {
    let g = ugcd(p, &p.derivative())?;
    p.div_exact(&g)?.monic()
}

pub fn is_squarefree(p: &UPoly) -> Result<bool, AlgebraError> {
    Ok(ugcd(p, &p.derivative())?.is_constant())
}

/// Newton interpolation through pairwise distinct abscissae.
pub fn interpolate(points: &[(Scalar, Scalar)]) -> Result<UPoly, AlgebraError> {
    let mut result = UPoly::zero();
    let mut basis = UPoly::one();
    for (i, (x, y)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == x) {
            return Err(AlgebraError::DuplicateAbscissa);
        }
        let denom = basis.eval(x);
        let c = (y - &result.eval(x)).div(&denom)?;
        result = &result + &basis.scale(&c);
        basis = &basis * &UPoly::new(vec![-x, Scalar::one()]);
    }
    Ok(result)
}

/// Inverse of `a` modulo `m`.
pub fn inv_mod(a: &UPoly, m: &UPoly) -> Result<UPoly, AlgebraError> {
    let (g, u, _) = extended_gcd(&a.rem(m)?, m)?;
    match g.degree() {
        Some(0) => u.rem(m),
        Some(d) => Err(AlgebraError::NotInvertible { degree: d }),
        None => Err(AlgebraError::NotInvertible { degree: m.degree().unwrap_or(0) }),
    }
}

/// The representative of `num / den` modulo `modulus` of degree below
/// `deg modulus`.
pub fn crt_value(num: &UPoly, den: &UPoly, modulus: &UPoly) -> Result<UPoly, AlgebraError> {
    let inv = inv_mod(den, modulus)?;
    (&num.rem(modulus)? * &inv).rem(modulus)
}

fn eval_rational(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

struct Sturm {
    seq: Vec<Vec<Rational>>,
}

impl Sturm {
    fn new(p: &[Rational]) -> Self {
        let to = |v: &[Rational]| UPoly::from_rationals(v.to_vec());
        let mut seq = vec![p.to_vec(), to(p).derivative().to_rationals().unwrap()];
        while seq.last().is_some_and(|v| !v.is_empty()) {
            let n = seq.len();
            let r = to(&seq[n - 2]).rem(&to(&seq[n - 1])).unwrap();
            let r = (-&r).to_rationals().unwrap();
            if r.is_empty() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|v| !v.is_empty());
        Sturm { seq }
    }

    fn variations(&self, x: &Rational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for q in &self.seq {
            let s = sign(&eval_rational(q, x));
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }
}

/// The distinct rational roots of a rational polynomial, ascending.
///
/// Real roots are isolated with a Sturm sequence and each isolating interval
/// is narrowed below `1/A`, `A` the leading coefficient of the primitive
/// integral form. A rational root has the shape `m/A`, so at most one
/// candidate per interval needs an exact test.
pub fn rational_roots(p: &UPoly) -> Vec<Rational> {
    let Some(rs) = p.to_rationals() else {
        return Vec::new();
    };
    if rs.len() <= 1 {
        return Vec::new();
    }
    let sq = squarefree_part(&UPoly::from_rationals(rs)).expect("rational gcd");
    let (_, prim) = integer_primitive_rationals(&sq.to_rationals().unwrap());
    let lead = prim.last().unwrap().clone();
    let width = lead.recip();
    let bound = prim
        .iter()
        .map(|c| (c / &lead).abs())
        .fold(Rational::zero(), |a, b| if b > a { b } else { a })
        + Rational::from_integer(2.into());
    let sturm = Sturm::new(&prim);
    let mut found = BTreeSet::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let count = sturm.variations(&a) - sturm.variations(&b);
        if count == 0 {
            continue;
        }
        if count == 1 && &b - &a < width {
            let lo = (&a * &lead).ceil().to_integer();
            let hi = (&b * &lead).floor().to_integer();
            let mut m = lo;
            while m <= hi {
                let cand = Rational::new(m.clone(), lead.to_integer());
                if eval_rational(&prim, &cand).is_zero() {
                    found.insert(cand);
                }
                m += 1;
            }
            continue;
        }
        let mid = split_point(&prim, &a, &b);
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    found.into_iter().collect()
}

/// A point strictly inside `(a, b)` that is not a root of `p`.
fn split_point(p: &[Rational], a: &Rational, b: &Rational) -> Rational {
    let len = b - a;
    for den in 2i64.. {
        for num in 1..den {
            let t = a + &len * Rational::new(num.into(), den.into());
            if !eval_rational(p, &t).is_zero() {
                return t;
            }
        }
    }
    unreachable!()
}
