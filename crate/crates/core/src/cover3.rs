//! The three-patch cover: from `F` with base points to `G`, `H` such that
//! `F(1:_:_)`, `G(_:1:_)` and `H(_:_:1)` cover the image surface.

use crate::error::CoverError;
use crate::groebner::{is_irrelevant, shape_basis, ShapeBasis};
use crate::hypotheses::{ab_message, check_ab, check_star, STAR_MESSAGE};
use crate::mpoly::{compose, homogenize_univariate, list_gcd, MPoly, Param};
use crate::upoly::UPoly;

#[derive(Debug, Clone)]
pub struct ThreePatch {
    pub f: Param,
    pub g: Param,
    pub h: Param,
    /// Number of base points.
    pub k: usize,
    pub p1: UPoly,
    pub q1: UPoly,
    pub p2: UPoly,
    pub q2: UPoly,
    pub ghat: MPoly,
    pub hhat: MPoly,
    pub base_point_free: bool,
}

impl ThreePatch {
    /// The substitution defining `G~ = F(sub)`.
    pub fn g_substitution(&self) -> [MPoly; 3] {
        blowup_sub(&self.p1, &self.q1, self.k, 1, 2).expect("degrees checked on construction")
    }

    /// The substitution defining `H~ = F(sub)`.
    pub fn h_substitution(&self) -> [MPoly; 3] {
        blowup_sub(&self.p2, &self.q2, self.k, 2, 1).expect("degrees checked on construction")
    }
}

/// `(x0 y^k, y^(k+1), y^2 Q(x0:y) + z P(x0:y))` placed so that `y = x_chart`
/// and `z = x_free`.
fn blowup_sub(p: &UPoly, q: &UPoly, k: usize, chart: usize, free: usize) -> Result<[MPoly; 3], CoverError> {
    let y = MPoly::var(chart);
    let big_p = homogenize_univariate(p, k, chart)?;
    let big_q = if q.is_zero() { MPoly::zero() } else { homogenize_univariate(q, k - 1, chart)? };
    let mut sub: [MPoly; 3] = Default::default();
    sub[0] = &MPoly::var(0) * &y.pow(k as u32);
    sub[chart] = y.pow(k as u32 + 1);
    sub[free] = &(&y.pow(2) * &big_q) + &(&MPoly::var(free) * &big_p);
    Ok(sub)
}

fn reduce_by_gcd(entries: Vec<MPoly>, f: &Param) -> Result<(Param, MPoly), CoverError> {
    let hat = list_gcd(&entries)?;
    let divided = entries
        .iter()
        .map(|e| if e.is_zero() { Ok(MPoly::zero()) } else { e.div_exact(&hat) })
        .collect::<Result<Vec<_>, _>>()?;
    let p = Param::with_degree_checks(divided, f.field().clone())?.normalized();
    Ok((p, hat))
}

/// Runs the three-patch construction. Fails with `HypothesesNotSatisfied`
/// if (*), (a) or (b) does not hold.
pub fn three_patch(f: &Param) -> Result<ThreePatch, CoverError> {
    if is_irrelevant(f.entries()) {
        return Ok(ThreePatch {
            f: f.clone(),
            g: f.clone(),
            h: f.clone(),
            k: 0,
            p1: UPoly::one(),
            q1: UPoly::zero(),
            p2: UPoly::one(),
            q2: UPoly::zero(),
            ghat: MPoly::one(),
            hhat: MPoly::one(),
            base_point_free: true,
        });
    }
    let star = check_star(f);
    if !star.pass {
        return Err(CoverError::HypothesesNotSatisfied(STAR_MESSAGE.into()));
    }
    let ab = check_ab(f);
    if !ab.pass() {
        return Err(CoverError::HypothesesNotSatisfied(ab_message(&ab)));
    }
    let (s1, s2): (ShapeBasis, ShapeBasis) = (shape_basis(f, 1)?, shape_basis(f, 2)?);
    let k = s1.k;
    let gsub = blowup_sub(&s1.p, &s1.q, k, 1, 2)?;
    let hsub = blowup_sub(&s2.p, &s2.q, k, 2, 1)?;
    let (g, ghat) = reduce_by_gcd(compose(f, &gsub)?, f)?;
    let (h, hhat) = reduce_by_gcd(compose(f, &hsub)?, f)?;
    Ok(ThreePatch {
        f: f.clone(),
        g,
        h,
        k,
        p1: s1.p,
        q1: s1.q,
        p2: s2.p,
        q2: s2.q,
        ghat,
        hhat,
        base_point_free: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, Scalar};
    use crate::mpoly::mpoly_from_ints;
    use crate::srf::parse_input;

    fn load(name: &str) -> Param {
        let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
        parse_input(&std::fs::read_to_string(path).unwrap()).unwrap().param.unwrap()
    }

    #[test]
    fn whitney_reference_patches() {
        let t = three_patch(&load("whitney.srf")).unwrap();
        assert_eq!(t.k, 1);
        assert_eq!(t.ghat, mpoly_from_ints(&[(1, [1, 0, 0]), (1, [0, 1, 0])]));
        assert_eq!(t.hhat, mpoly_from_ints(&[(1, [1, 0, 0]), (-1, [0, 0, 1])]));
        let g = [
            mpoly_from_ints(&[
                (1, [0, 3, 0]),
                (-2, [0, 2, 1]),
                (1, [1, 2, 0]),
                (1, [0, 1, 2]),
                (-2, [1, 1, 1]),
                (1, [1, 0, 2]),
            ]),
            mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 1, 1])]),
            mpoly_from_ints(&[(1, [0, 3, 0]), (-1, [0, 2, 1]), (-1, [1, 2, 0]), (1, [1, 1, 1])]),
            mpoly_from_ints(&[(1, [0, 1, 2]), (1, [1, 0, 2])]),
        ];
        assert_eq!(t.g.entries(), &g);
        // The reference H up to the global sign fixed by normalization.
        let h = [
            mpoly_from_ints(&[(1, [0, 0, 3]), (-1, [1, 0, 2])]),
            mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 2, 0]), (1, [0, 1, 2]), (1, [1, 1, 1])]),
            mpoly_from_ints(&[(1, [0, 1, 2]), (-1, [1, 1, 1]), (1, [0, 0, 3]), (1, [1, 0, 2])]),
            mpoly_from_ints(&[(1, [0, 2, 1]), (-1, [1, 2, 0])]),
        ];
        let neg: Vec<MPoly> = h.iter().map(|e| -e).collect();
        assert_eq!(t.h.entries(), &neg[..]);
    }

    #[test]
    fn veronese_is_returned_twice() {
        let f = load("veronese.srf");
        let t = three_patch(&f).unwrap();
        assert!(t.base_point_free);
        assert_eq!(t.g, f);
        assert_eq!(t.h, f);
    }

    #[test]
    fn clebsch_degree_and_shape() {
        let t = three_patch(&load("clebsch.srf")).unwrap();
        assert_eq!(t.k, 6);
        assert_eq!(t.p1.coeff(0), Scalar::from(rat(-385, 64)));
        assert_eq!(t.q2.coeff(0), Scalar::from(rat(2987, 3072)));
        assert_eq!(t.g.degree(), 15);
        assert_eq!(t.h.degree(), 15);
        assert_eq!(t.ghat.degree(), Some(6));
        assert!(list_gcd(t.g.entries()).unwrap().is_constant());
        assert!(list_gcd(t.h.entries()).unwrap().is_constant());
    }

    #[test]
    fn raw_maps_rejected() {
        for name in ["whitney_raw.srf", "clebsch_raw.srf", "singular_basepoints.srf"] {
            let e = three_patch(&load(name)).unwrap_err();
            assert!(e.is_hypothesis_failure(), "{name}: {e}");
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let f = load("whitney.srf");
        let t = three_patch(&f).unwrap();
        let d = f.degree() * (t.k as u32 + 1);
        assert_eq!(t.g.degree() + t.ghat.degree().unwrap(), d);
        assert_eq!(t.h.degree() + t.hhat.degree().unwrap(), d);
    }
}
