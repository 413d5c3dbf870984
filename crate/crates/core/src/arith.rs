//! Exact scalars: rationals and elements of a single simple extension
//! `Q[gamma]/(m(gamma))`.
//!
//! The modulus only has to be squarefree. When an inversion runs into a
//! proper factor of `m`, the error carries that factor and its cofactor so
//! the caller can continue with the smaller modulus (dynamic evaluation).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::AlgebraError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense polynomial helpers over Q, coefficients low to high, always trimmed.
pub(crate) mod qpoly {
    use super::Rational;
    use num_traits::{One, Zero};

    pub fn trim(v: &mut Vec<Rational>) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let n = a.len().max(b.len());
        let mut out: Vec<Rational> = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
                let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
                x - y
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Division with remainder; `b` must be nonzero.
    pub fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        assert!(!b.is_empty(), "division by the zero polynomial");
        let mut r = a.to_vec();
        trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let lc_inv = b[db].recip();
        let mut q = vec![Rational::zero(); r.len() - db];
        while r.len() > db && !r.is_empty() {
            let shift = r.len() - 1 - db;
            let c = &r[r.len() - 1] * &lc_inv;
            for (j, bj) in b.iter().enumerate() {
                r[shift + j] -= &c * bj;
            }
            q[shift] = c;
            r.pop();
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }

    pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        divrem(a, b).1
    }

    pub fn monic(mut a: Vec<Rational>) -> Vec<Rational> {
        if let Some(lc) = a.last().cloned() {
            let inv = lc.recip();
            for c in &mut a {
                *c *= &inv;
            }
        }
        a
    }

    pub fn derivative(a: &[Rational]) -> Vec<Rational> {
        let mut out: Vec<Rational> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
            .collect();
        trim(&mut out);
        out
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g` and `g` monic.
    pub fn ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let s = sub(&s0, &mul(&q, &s1));
            let t = sub(&t0, &mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if let Some(lc) = r0.last().cloned() {
            let inv = lc.recip();
            for v in [&mut r0, &mut s0, &mut t0] {
                for c in v.iter_mut() {
                    *c *= &inv;
                }
            }
        }
        (r0, s0, t0)
    }
}

/// A simple algebraic extension `Q[gamma]/(m)`, `m` monic and squarefree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Extension {
    modulus: Vec<Rational>,
}

impl Extension {
    pub fn new(modulus: Vec<Rational>) -> Result<Arc<Self>, AlgebraError> {
        let mut m = modulus;
        qpoly::trim(&mut m);
        if m.len() < 2 {
            return Err(AlgebraError::BadModulus("modulus must have positive degree".into()));
        }
        let m = qpoly::monic(m);
        let (g, _, _) = qpoly::ext_gcd(&m, &qpoly::derivative(&m));
        if g.len() > 1 {
            return Err(AlgebraError::BadModulus("modulus is not squarefree".into()));
        }
        Ok(Arc::new(Extension { modulus: m }))
    }

    /// Monic modulus coefficients, low to high.
    pub fn modulus(&self) -> &[Rational] {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }
}

/// The coefficient field of a computation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Rationals,
    Extension(Arc<Extension>),
}

impl Field {
    pub fn extension(&self) -> Option<&Arc<Extension>> {
        match self {
            Field::Rationals => None,
            Field::Extension(e) => Some(e),
        }
    }

    /// The smallest field containing both; errors when two distinct
    /// extensions would have to be combined.
    pub fn join(&self, other: &Field) -> Result<Field, AlgebraError> {
        match (self, other) {
            (Field::Rationals, f) | (f, Field::Rationals) => Ok(f.clone()),
            (Field::Extension(a), Field::Extension(b)) if a == b => Ok(self.clone()),
            _ => Err(AlgebraError::NestedExtension),
        }
    }
}

/// Element of an extension, stored as its reduced residue of degree
/// `1..deg(m)`. Residues of degree 0 are always demoted to `Scalar::Rational`.
#[derive(Debug, Clone)]
pub struct Algebraic {
    coeffs: Vec<Rational>,
    ext: Arc<Extension>,
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && (Arc::ptr_eq(&self.ext, &other.ext) || self.ext == other.ext)
    }
}

impl Eq for Algebraic {}

impl Algebraic {
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn extension(&self) -> &Arc<Extension> {
        &self.ext
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rational(Rational),
    Algebraic(Algebraic),
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rational(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::Rational(int(n))
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Rational(Rational::from_integer(n))
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Rational::one())
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::Rational(rat(n, d))
    }

    /// The class of `gamma` in `ext`.
    pub fn generator(ext: &Arc<Extension>) -> Self {
        Self::from_residue(vec![Rational::zero(), Rational::one()], ext)
    }

    /// Canonical scalar from an arbitrary residue polynomial in `gamma`.
    pub fn from_residue(coeffs: Vec<Rational>, ext: &Arc<Extension>) -> Self {
        let mut r = qpoly::rem(&coeffs, ext.modulus());
        qpoly::trim(&mut r);
        match r.len() {
            0 => Scalar::zero(),
            1 => Scalar::Rational(r.pop().unwrap()),
            _ => Scalar::Algebraic(Algebraic { coeffs: r, ext: ext.clone() }),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Algebraic(_) => None,
        }
    }

    pub fn extension(&self) -> Option<&Arc<Extension>> {
        match self {
            Scalar::Rational(_) => None,
            Scalar::Algebraic(a) => Some(&a.ext),
        }
    }

    /// Residue coefficients in `gamma`, low to high (empty for zero).
    pub fn residue(&self) -> Vec<Rational> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Vec::new(),
            Scalar::Rational(r) => vec![r.clone()],
            Scalar::Algebraic(a) => a.coeffs.clone(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        match self {
            Scalar::Rational(r) => {
                if r.is_zero() {
                    Err(AlgebraError::DivisionByZero)
                } else {
                    Ok(Scalar::Rational(r.recip()))
                }
            }
            Scalar::Algebraic(a) => {
                let m = a.ext.modulus();
                let (g, s, _) = qpoly::ext_gcd(&a.coeffs, m);
                if g.len() == 1 {
                    Ok(Scalar::from_residue(s, &a.ext))
                } else {
                    let (cofactor, _) = qpoly::divrem(m, &g);
                    Err(AlgebraError::ZeroDivisor { factor: g, cofactor: qpoly::monic(cofactor) })
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Sign for rationals; `None` for genuine algebraic elements.
    pub fn signum(&self) -> Option<i8> {
        match self {
            Scalar::Rational(r) if r.is_zero() => Some(0),
            Scalar::Rational(r) if r.is_positive() => Some(1),
            Scalar::Rational(_) => Some(-1),
            Scalar::Algebraic(_) => None,
        }
    }

    fn combine(
        &self,
        other: &Scalar,
        rr: impl Fn(&Rational, &Rational) -> Rational,
        poly: impl Fn(&[Rational], &[Rational]) -> Vec<Rational>,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rr(a, b)),
            _ => {
                let ext = match (self.extension(), other.extension()) {
                    (Some(a), Some(b)) => {
                        assert!(
                            Arc::ptr_eq(a, b) || a == b,
                            "arithmetic between scalars of different extensions"
                        );
                        a
                    }
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!(),
                };
                Scalar::from_residue(poly(&self.residue(), &other.residue()), ext)
            }
        }
    }
}

fn qadd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => Rational::zero(),
        })
        .collect();
    qpoly::trim(&mut out);
    out
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a + b, qadd)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a - b, qpoly::sub)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.combine(rhs, |a, b| a * b, qpoly::mul)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Algebraic(a) => Scalar::Algebraic(Algebraic {
                coeffs: a.coeffs.iter().map(|c| -c).collect(),
                ext: a.ext.clone(),
            }),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Inversion against an explicit field descriptor.
pub fn scalar_inverse(a: &Scalar, field: &Field) -> Result<Scalar, AlgebraError> {
    if let (Some(e), Field::Extension(f)) = (a.extension(), field) {
        if e != f {
            return Err(AlgebraError::NestedExtension);
        }
    }
    if a.extension().is_some() && *field == Field::Rationals {
        return Err(AlgebraError::NestedExtension);
    }
    a.inv()
}

pub(crate) fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Name used for the extension generator when printing.
pub const GENERATOR_NAME: &str = "gamma";

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => fmt_rational(r, f),
            Scalar::Algebraic(a) => {
                let mut first = true;
                for (i, c) in a.coeffs.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { "-" } else { "+" })?;
                    }
                    first = false;
                    match i {
                        0 => fmt_rational(&mag, f)?,
                        _ => {
                            if !mag.is_one() {
                                fmt_rational(&mag, f)?;
                                write!(f, "*")?;
                            }
                            write!(f, "{GENERATOR_NAME}")?;
                            if i > 1 {
                                write!(f, "^{i}")?;
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }
}
