//! Intersection theory on the Hirzebruch surface P(O(i)+O(j)) in the
//! (D_hor, D_vert) basis, Cox-degree bookkeeping, the factorization of a
//! reducible p into two (1, e) factors, and the resulting bidegrees.

use crate::binform::BinForm;
use crate::error::{Error, Result};
use crate::lbqf::{Lbqf, StratumIndex};
use crate::scalars::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceCtx {
    pub i: i64,
    pub j: i64,
}

/// Divisor class h*D_hor + v*D_vert.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivClass {
    pub h: i64,
    pub v: i64,
}

/// A Cox-ring factor alpha*x + beta*y of bidegree (1, e); alpha has slot
/// e - j and beta slot e - i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxFactor {
    pub alpha: BinForm,
    pub beta: BinForm,
    pub e: i64,
}

impl SurfaceCtx {
    pub fn new(i: i64, j: i64) -> Result<SurfaceCtx> {
        if i > j {
            return Err(Error::Precondition(
                "surface context needs i <= j".into(),
            ));
        }
        Ok(SurfaceCtx { i, j })
    }
}

/// Intersection pairing: D_vert^2 = 0, D_vert . D_hor = 1,
/// D_hor^2 = -i-j.
pub fn pair(ctx: SurfaceCtx, a: DivClass, b: DivClass) -> i64 {
    a.h * b.h * (-ctx.i - ctx.j) + a.h * b.v + a.v * b.h
}

/// Class of the curve cut out by a nonzero p: 2 D_hor + (2i+2j+k) D_vert.
pub fn curve_class(idx: StratumIndex) -> DivClass {
    DivClass {
        h: 2,
        v: 2 * idx.i + 2 * idx.j + idx.k,
    }
}

/// Class of O_pi(1): D_hor + (i+j) D_vert.
pub fn o_pi1_class(ctx: SurfaceCtx) -> DivClass {
    DivClass {
        h: 1,
        v: ctx.i + ctx.j,
    }
}

pub fn canonical_class(ctx: SurfaceCtx) -> DivClass {
    DivClass {
        h: -2,
        v: -(ctx.i + ctx.j) - 2,
    }
}

/// Arithmetic genus by adjunction: 1 + C.(C+K)/2.
pub fn adjunction_genus(ctx: SurfaceCtx, c: DivClass) -> i64 {
    let k = canonical_class(ctx);
    let deg = pair(
        ctx,
        c,
        DivClass {
            h: c.h + k.h,
            v: c.v + k.v,
        },
    );
    assert!(deg % 2 == 0, "C.(C+K) must be even for integral classes");
    1 + deg / 2
}

/// Raw factorization witness: p1, p2 as (x-coefficient, y-coefficient)
/// pairs with p1*p2 = 4a*p (or p = y*(bx+cy) when a vanishes).  `None`
/// exactly when p is irreducible over K(s,t).
pub(crate) fn try_factor(
    l: &Lbqf,
) -> Result<Option<((BinForm, BinForm), (BinForm, BinForm))>> {
    let field = l.field();
    let disc = l.disc_form();
    if disc.is_zero() {
        return Err(Error::Precondition(
            "factorization is only defined for reduced forms".into(),
        ));
    }
    if l.a().is_zero() {
        // p = y * (b x + c y); reduced forces b nonzero
        let one = BinForm::from_i64s(field, 0, &[1])?;
        let zero_alpha = BinForm::zero(field, l.idx().i - l.idx().j);
        return Ok(Some((
            (zero_alpha, one),
            (l.b().clone(), l.c().clone()),
        )));
    }
    let q = match disc.is_square()? {
        None => return Ok(None),
        Some(q) => q,
    };
    let two = Scalar::from_i64(field, 2);
    let two_a = l.a().scale(&two);
    let p1 = (two_a.clone(), l.b().sub(&q)?);
    let p2 = (two_a, l.b().add(&q)?);
    // identity check: p1*p2 = 4a*p componentwise
    let four_a = l.a().scale(&Scalar::from_i64(field, 4));
    debug_assert_eq!(p1.0.mul(&p2.0), four_a.mul(l.a()));
    debug_assert_eq!(
        p1.0.mul(&p2.1).add(&p1.1.mul(&p2.0)).unwrap(),
        four_a.mul(l.b())
    );
    debug_assert_eq!(p1.1.mul(&p2.1), four_a.mul(l.c()));
    Ok(Some((p1, p2)))
}

/// Factor p = p1 * p2 into two bidegree-(1, e) Cox factors, with the form
/// content of each factor divided out and the residual scalar folded into
/// the first factor so the product reconstructs p exactly.  Requires a
/// reduced form whose module is a line bundle; returns `None` when p is
/// irreducible.
pub fn factor_if_reducible(l: &Lbqf) -> Result<Option<(CoxFactor, CoxFactor)>> {
    let cls = l.classify()?;
    if !cls.reduced {
        return Err(Error::Precondition(
            "factorization is only defined for reduced forms".into(),
        ));
    }
    if !cls.line_bundle {
        return Err(Error::Precondition(
            "factorization into (1, e) factors needs p without vertical \
             components (line bundle)"
                .into(),
        ));
    }
    let idx = l.idx();
    let raw = match try_factor(l)? {
        None => return Ok(None),
        Some(r) => r,
    };
    if l.a().is_zero() {
        let (p1, p2) = raw;
        let f1 = CoxFactor {
            e: idx.i,
            alpha: p1.0,
            beta: p1.1,
        };
        let f2 = CoxFactor {
            e: idx.i + 2 * idx.j + idx.k,
            alpha: p2.0,
            beta: p2.1,
        };
        return Ok(Some((f1, f2)));
    }
    let ((a1, b1), (a2, b2)) = raw;
    let strip = |alpha: &BinForm, beta: &BinForm| -> Result<(BinForm, BinForm)> {
        let content = if beta.is_zero() {
            alpha.monic()?
        } else {
            alpha.gcd(beta)?
        };
        Ok((alpha.div_exact(&content)?, beta.div_exact(&content)?))
    };
    let (a1, b1) = strip(&a1, &b1)?;
    let (mut a2, mut b2) = strip(&a2, &b2)?;
    // normalize the second factor monic in its leading form
    let lead = if a2.is_zero() {
        b2.leading_coeff()?
    } else {
        a2.leading_coeff()?
    };
    let lead_inv = lead.inv()?;
    a2 = a2.scale(&lead_inv);
    b2 = b2.scale(&lead_inv);
    // solve the scalar making the product reconstruct p, then verify fully
    let prod_a = a1.mul(&a2);
    let prod_b = a1.mul(&b2).add(&b1.mul(&a2))?;
    let prod_c = b1.mul(&b2);
    let mut mu = None;
    for (prod, target) in [(&prod_a, l.a()), (&prod_b, l.b()), (&prod_c, l.c())] {
        for lidx in 0..=prod.slot().max(-1) {
            let pc = prod.coeff(lidx);
            if !pc.is_zero() {
                mu = Some(target.coeff(lidx).div(&pc)?);
                break;
            }
        }
        if mu.is_some() {
            break;
        }
    }
    let mu = mu.ok_or_else(|| Error::Precondition("degenerate factorization".into()))?;
    let a1 = a1.scale(&mu);
    let b1 = b1.scale(&mu);
    let exact = a1.mul(&a2) == *l.a()
        && a1.mul(&b2).add(&b1.mul(&a2))? == *l.b()
        && b1.mul(&b2) == *l.c();
    if !exact {
        return Err(Error::Precondition(
            "factor reconstruction failed; p has vertical content".into(),
        ));
    }
    let e_of = |alpha: &BinForm, beta: &BinForm| -> i64 {
        if alpha.is_zero() {
            beta.slot() + idx.i
        } else {
            alpha.slot() + idx.j
        }
    };
    let f1 = CoxFactor {
        e: e_of(&a1, &b1),
        alpha: a1,
        beta: b1,
    };
    let f2 = CoxFactor {
        e: e_of(&a2, &b2),
        alpha: a2,
        beta: b2,
    };
    Ok(Some((f1, f2)))
}

/// Sorted pair of degrees of the module restricted to the two components.
pub fn bidegree(l: &Lbqf) -> Result<(i64, i64)> {
    let (f1, f2) = factor_if_reducible(l)?.ok_or_else(|| {
        Error::Precondition("bidegree is only defined for reducible forms".into())
    })?;
    let (d1, d2) = if f1.e <= f2.e {
        (f1.e, f2.e)
    } else {
        (f2.e, f1.e)
    };
    debug_assert_eq!(d1 + d2, l.n());
    Ok((d1, d2))
}

/// The basic inequality: both restriction degrees within (g+1)/2 of n/2.
pub fn caporaso_check(d1: i64, d2: i64, g: i64, n: i64) -> bool {
    // n/2 - (g+1)/2 <= d <= n/2 + (g+1)/2, compared exactly over halves
    let lo = n - (g + 1);
    let hi = n + (g + 1);
    lo <= 2 * d1 && 2 * d1 <= hi && lo <= 2 * d2 && 2 * d2 <= hi
}

/// Lower bound on the smaller restriction degree inside the bounded
/// substack: d1 >= n/2 - (g+1), compared exactly over halves.
pub fn bidegree_bound_holds(d1: i64, g: i64, n: i64) -> bool {
    2 * d1 >= n - 2 * (g + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    fn qform(slot: i64, coeffs: &[i64]) -> BinForm {
        BinForm::from_i64s(Field::Q, slot, coeffs).unwrap()
    }

    #[test]
    fn pairing_table() {
        let ctx = SurfaceCtx::new(0, 3).unwrap();
        let dh = DivClass { h: 1, v: 0 };
        let dv = DivClass { h: 0, v: 1 };
        assert_eq!(pair(ctx, dh, dh), -3);
        assert_eq!(pair(ctx, dv, dv), 0);
        assert_eq!(pair(ctx, dh, dv), 1);
    }

    #[test]
    fn curve_degree_is_n() {
        for (i, j, k) in [(0, 3, 1), (-1, 6, 0), (1, 1, -1), (2, 5, -3)] {
            let idx = StratumIndex::new(i, j, k);
            let ctx = SurfaceCtx::new(i, j).unwrap();
            assert_eq!(pair(ctx, curve_class(idx), o_pi1_class(ctx)), idx.n());
        }
    }

    #[test]
    fn adjunction_matches_genus_formula() {
        for (i, j, k) in [(0, 3, 1), (-1, 6, 0), (1, 1, -1), (0, 0, 2)] {
            let idx = StratumIndex::new(i, j, k);
            let ctx = SurfaceCtx::new(i, j).unwrap();
            assert_eq!(adjunction_genus(ctx, curve_class(idx)), idx.g());
        }
        // sections are rational
        let ctx = SurfaceCtx::new(0, 3).unwrap();
        assert_eq!(adjunction_genus(ctx, DivClass { h: 1, v: 5 }), 0);
    }

    #[test]
    fn two_component_bidegree() {
        // (0, s^5, t^12) at (-1, 6, 0): p = y (s^5 x + t^12 y)
        let l = Lbqf::new(
            StratumIndex::new(-1, 6, 0),
            BinForm::zero(Field::Q, -2),
            BinForm::monomial(Field::Q, 5, 0),
            BinForm::monomial(Field::Q, 0, 12),
        )
        .unwrap();
        let (f1, f2) = factor_if_reducible(&l).unwrap().unwrap();
        assert_eq!(f1.e, -1);
        assert_eq!(f2.e, 11);
        assert_eq!(bidegree(&l).unwrap(), (-1, 11));
        assert!(!bidegree_bound_holds(-1, l.g(), l.n()));
        assert!(!caporaso_check(-1, 11, l.g(), l.n()));
    }

    #[test]
    fn degenerate_c_bidegree() {
        // (s, s^2+t^2, 0) at (0, 1, 1) -> factors x (e=1), s x + (s^2+t^2) y (e=2)
        let l = Lbqf::new(
            StratumIndex::new(0, 1, 1),
            qform(1, &[1, 0]),
            qform(2, &[1, 0, 1]),
            qform(3, &[0, 0, 0, 0]),
        )
        .unwrap();
        let (d1, d2) = bidegree(&l).unwrap();
        assert_eq!((d1, d2), (1, 2));
        assert!(bidegree_bound_holds(d1, l.g(), l.n()));
        assert!(caporaso_check(d1, d2, l.g(), l.n()));
    }

    #[test]
    fn constant_split() {
        // x^2 - y^2 at (0,0,0) -> (x-y)(x+y), bidegree (0,0)
        let l = Lbqf::new(
            StratumIndex::new(0, 0, 0),
            qform(0, &[1]),
            qform(0, &[0]),
            qform(0, &[-1]),
        )
        .unwrap();
        let (f1, f2) = factor_if_reducible(&l).unwrap().unwrap();
        assert_eq!((f1.e, f2.e), (0, 0));
        assert_eq!(bidegree(&l).unwrap(), (0, 0));
        // exact reconstruction
        assert_eq!(f1.alpha.mul(&f2.alpha), *l.a());
        assert_eq!(f1.beta.mul(&f2.beta), *l.c());
    }

    #[test]
    fn irreducible_gives_none() {
        // s x^2 - t y^2 at (1,1,-1): disc = 4st not a square
        let l = Lbqf::new(
            StratumIndex::new(1, 1, -1),
            qform(1, &[1, 0]),
            qform(1, &[0, 0]),
            qform(1, &[0, -1]),
        )
        .unwrap();
        assert!(factor_if_reducible(&l).unwrap().is_none());
        assert!(l.irreducibility_crosscheck().unwrap());
        assert!(l.twist(1).classify().unwrap().integral);
    }
}
