//! One-parameter degenerations: forms with Laurent coefficients in a
//! uniformizer e, denominator clearing by the scalar action, specialization
//! at e = 0, and the weighted clearings that exhibit distinct limits of a
//! single family.

use crate::binform::BinForm;
use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::hirzebruch;
use crate::lbqf::{Classification, Lbqf};
use crate::scalars::Scalar;

/// Minimum valuation over all scalar coefficients of a form; None for the
/// zero form.
fn form_valuation(f: &BinForm) -> Result<Option<i64>> {
    let mut min = None;
    for c in f.coeffs() {
        if let Some(v) = c.valuation()? {
            min = Some(match min {
                None => v,
                Some(m) => v.min(m),
            });
        }
    }
    Ok(min)
}

fn shift_form(f: &BinForm, m: i64) -> Result<BinForm> {
    let coeffs: Result<Vec<Scalar>> =
        f.coeffs().iter().map(|c| c.laurent_shift(m)).collect();
    BinForm::new(f.field(), f.slot(), coeffs?)
}

/// Evaluate a Laurent-coefficient form at e = 0, landing in the base field.
fn specialize_form(f: &BinForm) -> Result<BinForm> {
    let base = f.field().base_field();
    let coeffs: Result<Vec<Scalar>> =
        f.coeffs().iter().map(|c| c.laurent_at_zero()).collect();
    BinForm::new(base, f.slot(), coeffs?)
}

fn require_laurent(family: &Lbqf) -> Result<()> {
    if !family.field().is_laurent() {
        return Err(Error::NotLaurent);
    }
    Ok(())
}

/// Clear denominators by the overall scalar action and specialize: with
/// v the minimum valuation across a, b, c, multiply the family by e^(-v)
/// and evaluate at e = 0.  Returns (limit, v); the limit is a nonzero form
/// at the same stratum.
pub fn clear_and_specialize(family: &Lbqf) -> Result<(Lbqf, i64)> {
    require_laurent(family)?;
    let mut v = None;
    for f in [family.a(), family.b(), family.c()] {
        if let Some(fv) = form_valuation(f)? {
            v = Some(match v {
                None => fv,
                Some(m) => fv.min(m),
            });
        }
    }
    let v = v.ok_or_else(|| Error::Precondition("identically zero family".into()))?;
    let a = specialize_form(&shift_form(family.a(), -v)?)?;
    let b = specialize_form(&shift_form(family.b(), -v)?)?;
    let c = specialize_form(&shift_form(family.c(), -v)?)?;
    let limit = Lbqf::new(family.idx(), a, b, c)?;
    debug_assert!(!limit.is_zero());
    Ok((limit, v))
}

/// Clear with the larger group action x -> e^m1 x, y -> e^m2 y and the
/// scalar e^mL on the twisting line: the family becomes
/// (a e^(2m1+mL), b e^(m1+m2+mL), c e^(2m2+mL)).  All valuations must end
/// up nonnegative and the specialization nonzero; different weights may
/// produce non-isomorphic limits of the same family.
pub fn weighted_specialize(family: &Lbqf, m1: i64, m2: i64, ml: i64) -> Result<Lbqf> {
    require_laurent(family)?;
    let shifts = [2 * m1 + ml, m1 + m2 + ml, 2 * m2 + ml];
    let mut out = Vec::new();
    for (f, m) in [family.a(), family.b(), family.c()].into_iter().zip(shifts) {
        let shifted = shift_form(f, m)?;
        if let Some(v) = form_valuation(&shifted)? {
            if v < 0 {
                return Err(Error::Precondition(format!(
                    "weights ({m1}, {m2}, {ml}) give valuation {v} < 0"
                )));
            }
        }
        out.push(specialize_form(&shifted)?);
    }
    let limit = Lbqf::new(family.idx(), out.remove(0), out.remove(0), out.remove(0))?;
    if limit.is_zero() {
        return Err(Error::Precondition(format!(
            "weights ({m1}, {m2}, {ml}) specialize the family to zero"
        )));
    }
    Ok(limit)
}

/// The full pipeline answering "what is the limit": clearing, verdict on
/// the limit, ramification of its discriminant, and the bidegree when the
/// limit splits into two components carrying a line bundle.
#[derive(Debug, Clone)]
pub struct LimitReport {
    pub v: i64,
    pub limit: Lbqf,
    pub classification: Classification,
    pub family_disc: BinForm,
    pub ramification: Option<Vec<(BinForm, i64)>>,
    pub bidegree: Option<(i64, i64)>,
}

pub fn classify_limit(family: &Lbqf) -> Result<LimitReport> {
    let (limit, v) = clear_and_specialize(family)?;
    let classification = limit.classify()?;
    let family_disc = family.disc_form();
    let cover = limit.forget_to_cover();
    let ramification = if limit.disc_form().is_zero() {
        None
    } else {
        Some(cover.ramification()?)
    };
    let bidegree = if classification.reduced
        && !classification.integral
        && classification.line_bundle
    {
        hirzebruch::factor_if_reducible(&limit)?
            .map(|(f1, f2)| (f1.e.min(f2.e), f1.e.max(f2.e)))
    } else {
        None
    };
    Ok(LimitReport {
        v,
        limit,
        classification,
        family_disc,
        ramification,
        bidegree,
    })
}

/// The cover-side view of a cleared limit.
pub fn limit_cover(family: &Lbqf) -> Result<Cover> {
    let (limit, _) = clear_and_specialize(family)?;
    Ok(limit.forget_to_cover())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lbqf::StratumIndex;
    use crate::scalars::{BaseTag, Field};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn lf() -> Field {
        Field::laurent(BaseTag::Q).unwrap()
    }

    fn mono(k: i64, num: i64, den: i64) -> Scalar {
        Scalar::laurent_monomial(
            BaseTag::Q,
            k,
            Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
        )
    }

    /// (s^3, e t^3, (1/4) s^2 t) at (0, 0, 3)
    fn cusp_family() -> Lbqf {
        let z = Scalar::zero(lf());
        let a = BinForm::new(
            lf(),
            3,
            vec![mono(0, 1, 1), z.clone(), z.clone(), z.clone()],
        )
        .unwrap();
        let b = BinForm::new(lf(), 3, vec![z.clone(), z.clone(), z.clone(), mono(1, 1, 1)])
            .unwrap();
        let c = BinForm::new(lf(), 3, vec![z.clone(), mono(0, 1, 4), z.clone(), z])
            .unwrap();
        Lbqf::new(StratumIndex::new(0, 0, 3), a, b, c).unwrap()
    }

    #[test]
    fn cusp_family_pipeline() {
        let fam = cusp_family();
        // family disc: e^2 t^6 - s^5 t
        let fd = fam.disc_form();
        assert_eq!(fd.coeff(6), mono(2, 1, 1));
        assert_eq!(fd.coeff(1), mono(0, -1, 1));
        for l in [0, 2, 3, 4, 5] {
            assert!(fd.coeff(l).is_zero());
        }

        let report = classify_limit(&fam).unwrap();
        assert_eq!(report.v, 0);
        let limit = &report.limit;
        assert_eq!(limit.a(), &BinForm::monomial(Field::Q, 3, 0));
        assert!(limit.b().is_zero());
        let quarter = Scalar::Rat(BigRational::new(BigInt::from(1), BigInt::from(4)));
        assert_eq!(
            limit.c(),
            &BinForm::monomial(Field::Q, 2, 1).scale(&quarter)
        );
        // limit disc = -s^5 t (the sign is part of b^2 - 4ac; same zero
        // locus as s^5 t)
        assert_eq!(
            limit.disc_form(),
            BinForm::monomial(Field::Q, 5, 1).neg()
        );
        let cls = &report.classification;
        assert!(cls.reduced && cls.integral && !cls.smooth);
        // gcd(s^3, s^2 t / 4) = s^2: the module degenerates along s = 0
        assert!(!cls.line_bundle);
        assert_eq!(
            cls.bad_fiber_factor.as_ref().unwrap(),
            &BinForm::monomial(Field::Q, 2, 0)
        );
        let ram = report.ramification.unwrap();
        let printed: Vec<(String, i64)> =
            ram.iter().map(|(f, m)| (f.to_string(), *m)).collect();
        assert_eq!(printed, vec![("s".to_string(), 5), ("t".to_string(), 1)]);
    }

    #[test]
    fn uniform_scaling_clears() {
        // (e s, e t, e (s+t)) at (0, 0, 1): v = 1
        let a = BinForm::new(lf(), 1, vec![mono(1, 1, 1), Scalar::zero(lf())]).unwrap();
        let b = BinForm::new(lf(), 1, vec![Scalar::zero(lf()), mono(1, 1, 1)]).unwrap();
        let c = BinForm::new(lf(), 1, vec![mono(1, 1, 1), mono(1, 1, 1)]).unwrap();
        let fam = Lbqf::new(StratumIndex::new(0, 0, 1), a, b, c).unwrap();
        let (limit, v) = clear_and_specialize(&fam).unwrap();
        assert_eq!(v, 1);
        assert_eq!(limit.a(), &BinForm::from_i64s(Field::Q, 1, &[1, 0]).unwrap());
        assert_eq!(limit.b(), &BinForm::from_i64s(Field::Q, 1, &[0, 1]).unwrap());
        assert_eq!(limit.c(), &BinForm::from_i64s(Field::Q, 1, &[1, 1]).unwrap());
    }

    #[test]
    fn negative_valuation_clears() {
        // (s, e^-1 t, s) at (0, 0, 1): v = -1, limit (0, t, 0)
        let a = BinForm::new(lf(), 1, vec![mono(0, 1, 1), Scalar::zero(lf())]).unwrap();
        let b = BinForm::new(lf(), 1, vec![Scalar::zero(lf()), mono(-1, 1, 1)]).unwrap();
        let c = BinForm::new(lf(), 1, vec![mono(0, 1, 1), Scalar::zero(lf())]).unwrap();
        let fam = Lbqf::new(StratumIndex::new(0, 0, 1), a, b, c).unwrap();
        let (limit, v) = clear_and_specialize(&fam).unwrap();
        assert_eq!(v, -1);
        assert!(limit.a().is_zero());
        assert_eq!(limit.b(), &BinForm::from_i64s(Field::Q, 1, &[0, 1]).unwrap());
        assert!(limit.c().is_zero());
    }

    #[test]
    fn two_limits_of_one_family() {
        // (1, e, e^2) at (0, 0, 0)
        let a = BinForm::new(lf(), 0, vec![mono(0, 1, 1)]).unwrap();
        let b = BinForm::new(lf(), 0, vec![mono(1, 1, 1)]).unwrap();
        let c = BinForm::new(lf(), 0, vec![mono(2, 1, 1)]).unwrap();
        let fam = Lbqf::new(StratumIndex::new(0, 0, 0), a, b, c).unwrap();

        let flat = weighted_specialize(&fam, 0, 0, 0).unwrap();
        assert_eq!(flat.a(), &BinForm::from_i64s(Field::Q, 0, &[1]).unwrap());
        assert!(flat.b().is_zero() && flat.c().is_zero());
        assert!(flat.disc_form().is_zero()); // non-reduced limit

        let tilted = weighted_specialize(&fam, 1, 0, -2).unwrap();
        assert_eq!(tilted.a(), &BinForm::from_i64s(Field::Q, 0, &[1]).unwrap());
        assert_eq!(tilted.b(), &BinForm::from_i64s(Field::Q, 0, &[1]).unwrap());
        assert_eq!(tilted.c(), &BinForm::from_i64s(Field::Q, 0, &[1]).unwrap());
        assert_eq!(
            tilted.disc_form(),
            BinForm::from_i64s(Field::Q, 0, &[-3]).unwrap()
        );

        assert!(weighted_specialize(&fam, -1, 0, 0).is_err());
    }

    #[test]
    fn scaling_invariance_and_disc_compatibility() {
        let fam = cusp_family();
        let scaled = Lbqf::new(
            fam.idx(),
            fam.a().scale(&mono(3, 1, 1)),
            fam.b().scale(&mono(3, 1, 1)),
            fam.c().scale(&mono(3, 1, 1)),
        )
        .unwrap();
        let (l1, v1) = clear_and_specialize(&fam).unwrap();
        let (l2, v2) = clear_and_specialize(&scaled).unwrap();
        assert_eq!(l1, l2);
        assert_eq!(v2, v1 + 3);

        // disc of the cleared family at e = 0 equals disc of the limit
        let fd = fam.disc_form();
        let cleared = shift_form(&fd, -2 * v1).unwrap();
        assert_eq!(specialize_form(&cleared).unwrap(), l1.disc_form());
    }
}
