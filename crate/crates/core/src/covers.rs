//! Double covers of P^1 presented by a section sigma of O(2g+2):
//! classification of the total space and ramification data per fiber.

use crate::binform::BinForm;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    g: i64,
    sigma: BinForm,
}

/// Verdict on the curve y^2 = sigma.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverClassification {
    pub reduced: bool,
    pub integral: bool,
    pub smooth: bool,
}

impl Cover {
    pub fn new(g: i64, sigma: BinForm) -> Result<Cover> {
        if sigma.slot() != 2 * g + 2 {
            return Err(Error::SlotMismatch {
                name: "sigma".into(),
                expected: 2 * g + 2,
                got: sigma.slot(),
            });
        }
        Ok(Cover { g, sigma })
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    pub fn sigma(&self) -> &BinForm {
        &self.sigma
    }

    /// reduced iff sigma is nonzero; integral iff sigma is not a square
    /// over the base field; smooth iff sigma has no repeated root (for a
    /// degree-0 sigma: smooth iff the constant is nonzero).
    pub fn classify(&self) -> Result<CoverClassification> {
        let reduced = !self.sigma.is_zero();
        if !reduced {
            return Ok(CoverClassification {
                reduced: false,
                integral: false,
                smooth: false,
            });
        }
        let integral = self.sigma.is_square()?.is_none();
        let smooth = if self.sigma.slot() == 0 {
            true // nonzero constant
        } else {
            !self.sigma.disc_binform()?.is_zero()
        };
        Ok(CoverClassification {
            reduced,
            integral,
            smooth,
        })
    }

    /// Squarefree factors of sigma with multiplicities.  The fiber over a
    /// root is a regular point of the total space exactly when its factor
    /// has multiplicity 1; factors of degree > 1 bundle the conjugate roots
    /// in an extension.
    pub fn ramification(&self) -> Result<Vec<(BinForm, i64)>> {
        if self.sigma.is_zero() {
            return Err(Error::ZeroForm);
        }
        let parts = self.sigma.squarefree_parts()?;
        Ok(parts.all_factors(self.sigma.field()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    #[test]
    fn split_cover_with_tenfold_root() {
        let sigma = BinForm::monomial(Field::Q, 10, 0);
        let cover = Cover::new(4, sigma).unwrap();
        let c = cover.classify().unwrap();
        assert!(c.reduced && !c.integral && !c.smooth);
    }

    #[test]
    fn genus_zero_two_branch_points() {
        let sigma = BinForm::from_i64s(Field::Q, 2, &[0, 4, 0]).unwrap(); // 4st
        let cover = Cover::new(0, sigma).unwrap();
        let c = cover.classify().unwrap();
        assert!(c.reduced && c.integral && c.smooth);
        let ram = cover.ramification().unwrap();
        let printed: Vec<(String, i64)> =
            ram.iter().map(|(f, m)| (f.to_string(), *m)).collect();
        assert_eq!(printed, vec![("s".to_string(), 1), ("t".to_string(), 1)]);
    }

    #[test]
    fn ribbon_is_nothing() {
        let cover = Cover::new(1, BinForm::zero(Field::Q, 4)).unwrap();
        let c = cover.classify().unwrap();
        assert!(!c.reduced && !c.integral && !c.smooth);
        assert!(cover.ramification().is_err());
    }

    #[test]
    fn cusp_multiplicities() {
        let sigma = BinForm::monomial(Field::Q, 5, 1); // s^5 t
        let cover = Cover::new(2, sigma).unwrap();
        let ram = cover.ramification().unwrap();
        let printed: Vec<(String, i64)> =
            ram.iter().map(|(f, m)| (f.to_string(), *m)).collect();
        assert_eq!(printed, vec![("s".to_string(), 5), ("t".to_string(), 1)]);
    }
}
