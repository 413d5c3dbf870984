//! Buchberger's algorithm in three variables with reduced output.
//!
//! Two orders are supported: lex with `x2 > x1 > x0`, used for the shape
//! bases, and graded lex with `x0 > x1 > x2`, used where only the leading
//! monomials matter. Rational input is handled fraction-free over the
//! integers; input over an extension field uses monic field arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Scalar;
use crate::error::CoverError;
use crate::mpoly::{total_degree, MPoly, Mono, Param};
use crate::upoly::{is_squarefree, UPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    /// Lexicographic, `x2 > x1 > x0`.
    Lex,
    /// Graded lexicographic, `x0 > x1 > x2`.
    GrLex,
}

impl Order {
    fn key(self, m: &Mono) -> u64 {
        let [a, b, c] = m.map(u64::from);
        match self {
            Order::Lex => c << 42 | b << 21 | a,
            Order::GrLex => (a + b + c) << 48 | a << 32 | b << 16 | c,
        }
    }
}

#[derive(Debug, Clone)]
struct Term<C> {
    key: u64,
    mono: Mono,
    coeff: C,
}

/// Coefficient domain of the engine.
trait Coeff: Clone {
    fn unit() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `(s, t)` with `s * a = t * b`; `None` stands for `s = 1`.
    fn cancel(a: &Self, b: &Self) -> (Option<Self>, Self);
    /// Divides out the common content of both term lists, if any.
    fn shrink(_a: &mut [Term<Self>], _b: &mut [Term<Self>]) {}
    /// Canonical associate: monic over a field, primitive with positive
    /// leading coefficient over the integers.
    fn normalize(terms: &mut [Term<Self>]);
}

impl Coeff for Scalar {
    fn unit() -> Self {
        Scalar::one()
    }

    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn cancel(a: &Self, b: &Self) -> (Option<Self>, Self) {
        (None, a.div(b).expect("invertible leading coefficient"))
    }

    fn normalize(terms: &mut [Term<Self>]) {
        if let Some(lc) = terms.last().map(|t| t.coeff.clone()) {
            if !lc.is_one() {
                let inv = lc.inv().expect("leading coefficient is invertible");
                for t in terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
    }
}

fn content(terms: &[Term<BigInt>], mut g: BigInt) -> BigInt {
    for t in terms {
        if g.is_one() {
            break;
        }
        g = g.gcd(&t.coeff);
    }
    g
}

impl Coeff for BigInt {
    fn unit() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn cancel(a: &Self, b: &Self) -> (Option<Self>, Self) {
        let d = a.gcd(b);
        let s = b / &d;
        let t = a / &d;
        if s.is_one() {
            (None, t)
        } else if s == -BigInt::one() {
            (None, -t)
        } else {
            (Some(s), t)
        }
    }

    fn shrink(a: &mut [Term<Self>], b: &mut [Term<Self>]) {
        let g = content(b, content(a, BigInt::zero()));
        if g > BigInt::one() {
            for t in a.iter_mut().chain(b.iter_mut()) {
                t.coeff = &t.coeff / &g;
            }
        }
    }

    fn normalize(terms: &mut [Term<Self>]) {
        let Some(lead) = terms.last() else { return };
        let mut g = content(terms, BigInt::zero());
        if lead.coeff.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in terms {
                t.coeff = &t.coeff / &g;
            }
        }
    }
}

/// Terms in ascending order, so the leading term is last.
#[derive(Debug, Clone)]
struct Poly<C> {
    terms: Vec<Term<C>>,
}

impl<C> Default for Poly<C> {
    fn default() -> Self {
        Poly { terms: Vec::new() }
    }
}

fn divides(a: &Mono, b: &Mono) -> bool {
    a[0] <= b[0] && a[1] <= b[1] && a[2] <= b[2]
}

fn lcm(a: &Mono, b: &Mono) -> Mono {
    [a[0].max(b[0]), a[1].max(b[1]), a[2].max(b[2])]
}

fn quotient(a: &Mono, b: &Mono) -> Mono {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn coprime(a: &Mono, b: &Mono) -> bool {
    (0..3).all(|i| a[i] == 0 || b[i] == 0)
}

impl Poly<Scalar> {
    fn from_mpoly(p: &MPoly, order: Order) -> Self {
        let mut terms: Vec<Term<Scalar>> = p
            .terms()
            .map(|(m, c)| Term { key: order.key(m), mono: *m, coeff: c.clone() })
            .collect();
        terms.sort_by_key(|t| t.key);
        Poly { terms }
    }

    fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(self.terms.iter().map(|t| (t.mono, t.coeff.clone())))
    }
}

impl Poly<BigInt> {
    /// The integer multiple of a rational polynomial with coprime
    /// coefficients.
    fn from_rational(p: &MPoly, order: Order) -> Self {
        let rats: Vec<_> = p.terms().map(|(_, c)| c.as_rational().expect("rational coefficients")).collect();
        let den = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let mut terms: Vec<Term<BigInt>> = p
            .terms()
            .zip(&rats)
            .map(|((m, _), r)| Term { key: order.key(m), mono: *m, coeff: r.numer() * (&den / r.denom()) })
            .collect();
        terms.sort_by_key(|t| t.key);
        BigInt::normalize(&mut terms);
        Poly { terms }
    }

    fn to_field(&self) -> Poly<Scalar> {
        let mut terms: Vec<Term<Scalar>> = self
            .terms
            .iter()
            .map(|t| Term { key: t.key, mono: t.mono, coeff: Scalar::from(t.coeff.clone()) })
            .collect();
        Scalar::normalize(&mut terms);
        Poly { terms }
    }
}

impl<C: Coeff> Poly<C> {
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &Term<C> {
        self.terms.last().expect("nonzero polynomial")
    }

    /// `s * self - t * x^m * g`, with `s = 1` when absent.
    fn sub_mul(self, s: Option<&C>, t: &C, m: &Mono, mkey: u64, g: &[Term<C>]) -> Poly<C> {
        let mut out = Vec::with_capacity(self.terms.len() + g.len());
        let mut a = self.terms.into_iter().map(|mut x| {
            if let Some(s) = s {
                x.coeff = x.coeff.mul(s);
            }
            x
        });
        let neg = t.neg();
        let mut b = g.iter().map(|y| Term {
            key: y.key + mkey,
            mono: [y.mono[0] + m[0], y.mono[1] + m[1], y.mono[2] + m[2]],
            coeff: y.coeff.mul(&neg),
        });
        let (mut na, mut nb) = (a.next(), b.next());
        loop {
            match (na.take(), nb.take()) {
                (None, None) => break,
                (Some(x), None) => {
                    out.push(x);
                    out.extend(a);
                    break;
                }
                (None, Some(y)) => {
                    out.push(y);
                    out.extend(b);
                    break;
                }
                (Some(mut x), Some(y)) => {
                    if x.key < y.key {
                        out.push(x);
                        na = a.next();
                        nb = Some(y);
                    } else if x.key > y.key {
                        out.push(y);
                        na = Some(x);
                        nb = b.next();
                    } else {
                        x.coeff = x.coeff.add(&y.coeff);
                        if !x.coeff.is_zero() {
                            out.push(x);
                        }
                        na = a.next();
                        nb = b.next();
                    }
                }
            }
        }
        Poly { terms: out }
    }
}

/// Steps between content removals during one fraction-free reduction.
const SHRINK_EVERY: usize = 8;

/// Full reduction of `p` modulo `basis`. Over the integers the result is a
/// nonzero multiple of the normal form.
fn reduce<C: Coeff>(p: &Poly<C>, basis: &[&Poly<C>], order: Order) -> Poly<C> {
    let mut p = p.clone();
    let mut rem: Vec<Term<C>> = Vec::new();
    let mut scaled = 0;
    while let Some(lt) = p.terms.last() {
        match basis.iter().find(|g| divides(&g.lead().mono, &lt.mono)) {
            Some(g) => {
                let gl = g.lead();
                let (s, t) = C::cancel(&lt.coeff, &gl.coeff);
                let m = quotient(&lt.mono, &gl.mono);
                p.terms.pop();
                if let Some(s) = &s {
                    for r in &mut rem {
                        r.coeff = r.coeff.mul(s);
                    }
                    scaled += 1;
                }
                p = std::mem::take(&mut p).sub_mul(s.as_ref(), &t, &m, order.key(&m), &g.terms[..g.terms.len() - 1]);
                if scaled == SHRINK_EVERY {
                    C::shrink(&mut p.terms, &mut rem);
                    scaled = 0;
                }
            }
            None => rem.push(p.terms.pop().unwrap()),
        }
    }
    rem.reverse();
    Poly { terms: rem }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    key: u64,
}

struct Engine<C> {
    order: Order,
    polys: Vec<Poly<C>>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl<C: Coeff> Engine<C> {
    fn make_pair(&self, i: usize, j: usize) -> Pair {
        let (a, b) = (&self.polys[i].lead().mono, &self.polys[j].lead().mono);
        let l = lcm(a, b);
        Pair { i, j, lcm: l, key: self.order.key(&l) }
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.polys[h].lead().mono;
        let cands: Vec<Pair> = self.active.iter().map(|&g| self.make_pair(h, g)).collect();
        let mut kept: Vec<bool> = vec![true; cands.len()];
        for (a, pa) in cands.iter().enumerate() {
            if coprime(&lh, &self.polys[pa.j].lead().mono) {
                continue;
            }
            for (b, pb) in cands.iter().enumerate() {
                if a == b || !kept[b] {
                    continue;
                }
                if divides(&pb.lcm, &pa.lcm) && (pb.lcm != pa.lcm || b < a) {
                    kept[a] = false;
                    break;
                }
            }
        }
        let new_pairs: Vec<Pair> = cands
            .into_iter()
            .zip(kept)
            .filter(|(p, k)| *k && !coprime(&lh, &self.polys[p.j].lead().mono))
            .map(|(p, _)| p)
            .collect();
        let polys = &self.polys;
        let order = self.order;
        self.pairs.retain(|p| {
            let li = &polys[p.i].lead().mono;
            let lj = &polys[p.j].lead().mono;
            !(divides(&lh, &p.lcm)
                && order.key(&lcm(li, &lh)) != p.key
                && order.key(&lcm(lj, &lh)) != p.key)
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !divides(&lh, &polys[g].lead().mono));
        self.active.push(h);
    }

    fn add(&mut self, mut p: Poly<C>) {
        C::normalize(&mut p.terms);
        self.polys.push(p);
        self.update(self.polys.len() - 1);
    }

    /// Processes pairs with the smallest lcm first.
    fn run(&mut self) {
        while !self.pairs.is_empty() {
            let idx = (0..self.pairs.len()).min_by_key(|&k| self.pairs[k].key).unwrap();
            let pair = self.pairs.swap_remove(idx);
            let s = self.spoly(&pair);
            let basis: Vec<&Poly<C>> = self.active.iter().map(|&g| &self.polys[g]).collect();
            let h = reduce(&s, &basis, self.order);
            if h.is_zero() {
                continue;
            }
            let unit = total_degree(&h.lead().mono) == 0;
            self.add(h);
            if unit {
                return;
            }
        }
    }

    fn spoly(&self, p: &Pair) -> Poly<C> {
        let (f, g) = (&self.polys[p.i], &self.polys[p.j]);
        let mf = quotient(&p.lcm, &f.lead().mono);
        let mg = quotient(&p.lcm, &g.lead().mono);
        let (s, t) = C::cancel(&g.lead().coeff, &f.lead().coeff);
        let s = s.unwrap_or_else(C::unit);
        let ft = &f.terms[..f.terms.len() - 1];
        let gt = &g.terms[..g.terms.len() - 1];
        // t * mf * f - s * mg * g, whose leading terms cancel.
        let fs = Poly::default().sub_mul(None, &t.neg(), &mf, self.order.key(&mf), ft);
        fs.sub_mul(None, &s, &mg, self.order.key(&mg), gt)
    }

    fn interreduce(&self) -> Vec<Poly<C>> {
        let mut cand: Vec<&Poly<C>> = self.active.iter().map(|&g| &self.polys[g]).collect();
        if let Some(unit) = cand.iter().find(|p| total_degree(&p.lead().mono) == 0) {
            cand = vec![*unit];
        }
        cand.sort_by_key(|p| p.lead().key);
        let mut minimal: Vec<&Poly<C>> = Vec::new();
        for p in cand {
            if !minimal.iter().any(|q| divides(&q.lead().mono, &p.lead().mono)) {
                minimal.push(p);
            }
        }
        (0..minimal.len())
            .map(|k| {
                let others: Vec<&Poly<C>> =
                    minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, q)| *q).collect();
                let mut r = reduce(minimal[k], &others, self.order);
                C::normalize(&mut r.terms);
                r
            })
            .collect()
    }
}

fn buchberger<C: Coeff>(mut inputs: Vec<Poly<C>>, order: Order) -> Vec<Poly<C>> {
    let mut engine = Engine { order, polys: Vec::new(), active: Vec::new(), pairs: Vec::new() };
    inputs.sort_by_key(|p| p.lead().key);
    for p in inputs {
        let basis: Vec<&Poly<C>> = engine.active.iter().map(|&g| &engine.polys[g]).collect();
        let h = reduce(&p, &basis, order);
        if !h.is_zero() {
            engine.add(h);
        }
    }
    engine.run();
    engine.interreduce()
}

/// A reduced Gröbner basis, generators sorted by descending leading monomial.
#[derive(Debug, Clone)]
pub struct GBasis {
    order: Order,
    polys: Vec<Poly<Scalar>>,
    gens: Vec<MPoly>,
}

impl PartialEq for GBasis {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.gens == other.gens
    }
}

impl GBasis {
    pub fn order(&self) -> Order {
        self.order
    }

    pub fn generators(&self) -> &[MPoly] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_constant()
    }

    pub fn leading_monomials(&self) -> Vec<Mono> {
        self.polys.iter().map(|p| p.lead().mono).collect()
    }

    /// Normal form of `p`.
    pub fn reduce(&self, p: &MPoly) -> MPoly {
        let basis: Vec<&Poly<Scalar>> = self.polys.iter().collect();
        reduce(&Poly::from_mpoly(p, self.order), &basis, self.order).to_mpoly()
    }

    pub fn contains(&self, p: &MPoly) -> bool {
        self.reduce(p).is_zero()
    }
}

impl std::fmt::Display for GBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// The reduced lex basis of the ideal generated by `gens`.
pub fn reduced_groebner(gens: &[MPoly]) -> GBasis {
    groebner(gens, Order::Lex)
}

/// The reduced basis for the given order. The zero ideal gives an empty
/// basis.
pub fn groebner(gens: &[MPoly], order: Order) -> GBasis {
    let nonzero: Vec<&MPoly> = gens.iter().filter(|g| !g.is_zero()).collect();
    let mut polys: Vec<Poly<Scalar>> = if nonzero.iter().all(|g| g.is_rational()) {
        let inputs = nonzero.iter().map(|g| Poly::from_rational(g, order)).collect();
        buchberger::<BigInt>(inputs, order).iter().map(Poly::to_field).collect()
    } else {
        buchberger(nonzero.iter().map(|g| Poly::from_mpoly(g, order)).collect(), order)
    };
    polys.sort_by_key(|p| std::cmp::Reverse(p.lead().key));
    let gens = polys.iter().map(Poly::to_mpoly).collect();
    GBasis { order, polys, gens }
}

/// True iff for each listed variable some leading monomial is a pure power
/// of it.
pub fn is_zero_dimensional(b: &GBasis, vars: &[usize]) -> bool {
    if b.is_unit() {
        return true;
    }
    let lms = b.leading_monomials();
    vars.iter().all(|&v| {
        lms.iter().any(|m| m[v] > 0 && (0..3).all(|j| j == v || m[j] == 0))
    })
}

/// True iff the homogeneous ideal contains a power of every variable, i.e.
/// has no projective zero.
pub fn is_irrelevant(gens: &[MPoly]) -> bool {
    is_zero_dimensional(&groebner(gens, Order::GrLex), &[0, 1, 2])
}

/// `{x_t - q(x0), p(x0)}` shape data of one affine chart.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeBasis {
    /// Chart index `i`: the chart is `x_i = 1`.
    pub chart: usize,
    pub p: UPoly,
    pub q: UPoly,
    pub k: usize,
    /// The full reduced basis, including `x_i - 1`.
    pub basis: Vec<MPoly>,
}

/// Reduced lex basis of `(F0, ..., Fn, x_i - 1)` in the shape
/// `{x_t - q(x0), x_i - 1, p(x0)}` where `t` is the remaining variable.
pub fn shape_basis(f: &Param, chart: usize) -> Result<ShapeBasis, CoverError> {
    assert!(chart == 1 || chart == 2, "shape charts are x1 = 1 and x2 = 1");
    let other = 3 - chart;
    let deh: Vec<MPoly> = f.entries().iter().map(|e| e.specialize(chart, &Scalar::one())).collect();
    shape_of(&deh, chart, other, 0)
}

/// Shape of the zero-dimensional ideal generated by `deh`, polynomials in
/// `x_top` and `x_low` only, for the lex order with `x_top > x_low`.
///
/// With `top = 2, low = 0` or `top = 1, low = 0` this is the ordinary lex
/// order; any other pair is handled by renaming variables.
pub(crate) fn shape_of(deh: &[MPoly], chart: usize, top: usize, low: usize) -> Result<ShapeBasis, CoverError> {
    let violation = |reason: &str| CoverError::ShapeViolation { chart, reason: reason.to_string() };
    // Rename so that `top` becomes x2 and `low` becomes x0.
    let perm = |m: &Mono| -> Mono {
        let mut out = [0; 3];
        out[2] = m[top];
        out[0] = m[low];
        out
    };
    let renamed: Vec<MPoly> = deh
        .iter()
        .map(|p| MPoly::from_terms(p.terms().map(|(m, c)| (perm(m), c.clone()))))
        .collect();
    let b = reduced_groebner(&renamed);
    let mut chart_gen = [0; 3];
    chart_gen[chart] = 1;
    let chart_lin = &MPoly::term(Scalar::one(), chart_gen) - &MPoly::one();
    let unrename = |p: &MPoly| -> MPoly {
        MPoly::from_terms(p.terms().map(|(m, c)| {
            let mut out = [0; 3];
            out[top] = m[2];
            out[low] = m[0];
            (out, c.clone())
        }))
    };
    if b.is_unit() {
        return Ok(ShapeBasis {
            chart,
            p: UPoly::one(),
            q: UPoly::zero(),
            k: 0,
            basis: vec![MPoly::one()],
        });
    }
    let gens = b.generators();
    if gens.len() != 2 {
        return Err(violation(&format!("expected two generators besides x{chart} - 1, found {}", gens.len())));
    }
    let lin = &gens[0];
    let lm = lin.leading_lex().unwrap().0;
    if *lm != [0, 0, 1] {
        return Err(violation("first generator is not linear in the eliminated variable"));
    }
    let tail = &MPoly::var(2) - lin;
    let q = if tail.is_zero() { UPoly::zero() } else { tail.to_upoly(0).expect("reduced tail is univariate") };
    let p = gens[1].to_upoly(0).ok_or_else(|| violation("last generator is not univariate"))?;
    let k = p.degree().unwrap();
    if q.degree().is_some_and(|d| d >= k) {
        return Err(violation("deg q >= deg p"));
    }
    if !is_squarefree(&p).map_err(CoverError::from)? {
        return Err(violation("p is not squarefree"));
    }
    let mut basis = vec![unrename(lin), chart_lin, unrename(&gens[1])];
    basis.sort_by(|a, b| crate::mpoly::lex_cmp(b.leading_lex().unwrap().0, a.leading_lex().unwrap().0));
    Ok(ShapeBasis { chart, p, q, k, basis })
}
