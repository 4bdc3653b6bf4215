//! Small multivariate polynomials over the integers, used for the symbolic
//! locus equations and for expanding discriminants in generic coefficients.
//!
//! A `PolyRing` fixes the variable list; monomials are exponent vectors of
//! that length, ordered lexicographically (a genuine monomial order, so
//! leading terms are multiplicative and exact division by leading-term
//! reduction works).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing {
    vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    /// exponent vector -> nonzero coefficient
    terms: BTreeMap<Vec<u32>, BigInt>,
    nvars: usize,
}

impl PolyRing {
    pub fn new(vars: Vec<String>) -> PolyRing {
        PolyRing { vars }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var(&self, idx: usize) -> MPoly {
        let mut exp = vec![0u32; self.vars.len()];
        exp[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exp, BigInt::one());
        MPoly {
            terms,
            nvars: self.vars.len(),
        }
    }

    pub fn constant(&self, c: i64) -> MPoly {
        MPoly::constant(self.vars.len(), BigInt::from(c))
    }

    pub fn display<'a>(&'a self, p: &'a MPoly) -> MPolyDisplay<'a> {
        MPolyDisplay { ring: self, poly: p }
    }
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            terms: BTreeMap::new(),
            nvars,
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; nvars], c);
        }
        MPoly { terms, nvars }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let sum = match terms.remove(m) {
                Some(x) => x + c,
                None => c.clone(),
            };
            if !sum.is_zero() {
                terms.insert(m.clone(), sum);
            }
        }
        MPoly {
            terms,
            nvars: self.nvars,
        }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
            nvars: self.nvars,
        }
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &MPoly) -> MPoly {
        debug_assert_eq!(self.nvars, o.nvars);
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m: Vec<u32> = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let prod = ca * cb;
                let sum = match terms.remove(&m) {
                    Some(cur) => cur + prod,
                    None => prod,
                };
                if !sum.is_zero() {
                    terms.insert(m, sum);
                }
            }
        }
        MPoly {
            terms,
            nvars: self.nvars,
        }
    }

    pub fn scale_int(&self, c: i64) -> MPoly {
        if c == 0 {
            return MPoly::zero(self.nvars);
        }
        let c = BigInt::from(c);
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * &c)).collect(),
            nvars: self.nvars,
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// Exact division; errors when the quotient is not polynomial with
    /// integer coefficients.
    pub fn div_exact(&self, o: &MPoly) -> Result<MPoly> {
        debug_assert_eq!(self.nvars, o.nvars);
        let (lm, lc) = o
            .leading()
            .ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        while let Some((rm, rc)) = rem.leading() {
            let qm: Option<Vec<u32>> = rm
                .iter()
                .zip(lm)
                .map(|(a, b)| a.checked_sub(*b))
                .collect();
            let qm = qm.ok_or_else(|| {
                Error::Precondition("non-exact symbolic division".into())
            })?;
            let (qc, r) = num_integer::div_rem(rc.clone(), lc.clone());
            if !r.is_zero() {
                return Err(Error::Precondition("non-exact symbolic division".into()));
            }
            let mut qterm = BTreeMap::new();
            qterm.insert(qm, qc);
            let qterm = MPoly {
                terms: qterm,
                nvars: self.nvars,
            };
            rem = rem.sub(&qterm.mul(o));
            quot = quot.add(&qterm);
        }
        Ok(quot)
    }

    /// Substitute integer values for all variables.
    pub fn eval_ints(&self, vals: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term *= BigInt::from(vals[idx]);
                }
            }
            acc += term;
        }
        acc
    }
}

pub struct MPolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a MPoly,
}

impl fmt::Display for MPolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // largest monomial first for readability
        for (m, c) in self.poly.terms.iter().rev() {
            let (sign, mag) = if c.is_negative() {
                ("-", c.magnitude().to_string())
            } else {
                ("+", c.to_string())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, "{sign}")?;
            }
            let mut parts = Vec::new();
            if mag != "1" || m.iter().all(|&e| e == 0) {
                parts.push(mag);
            }
            for (idx, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.ring.vars[idx].clone()),
                    _ => parts.push(format!("{}^{}", self.ring.vars[idx], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Homogeneous binary form in s, t with `MPoly` coefficients; the symbolic
/// counterpart of `BinForm` for generic-coefficient computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymForm {
    pub slot: i64,
    /// coefficient of s^(slot-l) t^l at index l; empty for negative slot
    pub coeffs: Vec<MPoly>,
}

impl SymForm {
    pub fn zero(nvars: usize, slot: i64) -> SymForm {
        let coeffs = if slot < 0 {
            Vec::new()
        } else {
            vec![MPoly::zero(nvars); (slot + 1) as usize]
        };
        SymForm { slot, coeffs }
    }

    /// Form with fresh generic coefficients taken from `ring` starting at
    /// variable index `base`.
    pub fn generic(ring: &PolyRing, slot: i64, base: usize) -> SymForm {
        let mut out = SymForm::zero(ring.nvars(), slot);
        for l in 0..out.coeffs.len() {
            out.coeffs[l] = ring.var(base + l);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn nvars(&self) -> usize {
        self.coeffs.first().map(|c| c.nvars()).unwrap_or(0)
    }

    pub fn mul(&self, o: &SymForm) -> SymForm {
        let nvars = self.nvars().max(o.nvars());
        let mut out = SymForm::zero(nvars, self.slot + o.slot);
        if self.is_zero() || o.is_zero() {
            return out;
        }
        for (la, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (lb, cb) in o.coeffs.iter().enumerate() {
                let l = la + lb;
                out.coeffs[l] = out.coeffs[l].add(&ca.mul(cb));
            }
        }
        out
    }

    pub fn sub(&self, o: &SymForm) -> SymForm {
        debug_assert_eq!(self.slot, o.slot);
        SymForm {
            slot: self.slot,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> SymForm {
        SymForm {
            slot: self.slot,
            coeffs: self.coeffs.iter().map(|x| x.scale_int(c)).collect(),
        }
    }

    pub fn deriv_s(&self) -> SymForm {
        let d = self.slot;
        if d <= 0 {
            return SymForm::zero(self.nvars(), d - 1);
        }
        SymForm {
            slot: d - 1,
            coeffs: (0..d)
                .map(|l| self.coeffs[l as usize].scale_int(d - l))
                .collect(),
        }
    }

    pub fn deriv_t(&self) -> SymForm {
        let d = self.slot;
        if d <= 0 {
            return SymForm::zero(self.nvars(), d - 1);
        }
        SymForm {
            slot: d - 1,
            coeffs: (0..d)
                .map(|l| self.coeffs[(l + 1) as usize].scale_int(l + 1))
                .collect(),
        }
    }

    /// Sylvester resultant with fraction-free Bareiss elimination over the
    /// polynomial ring.
    pub fn resultant(&self, o: &SymForm) -> Result<MPoly> {
        if self.is_zero() || o.is_zero() || self.slot < 0 || o.slot < 0 {
            return Err(Error::ZeroForm);
        }
        let nvars = self.nvars().max(o.nvars());
        let m = self.slot as usize;
        let n = o.slot as usize;
        let size = m + n;
        if size == 0 {
            return Ok(MPoly::constant(nvars, BigInt::one()));
        }
        let mut mat = vec![vec![MPoly::zero(nvars); size]; size];
        for row in 0..n {
            for (l, c) in self.coeffs.iter().enumerate() {
                mat[row][row + l] = c.clone();
            }
        }
        for row in 0..m {
            for (l, c) in o.coeffs.iter().enumerate() {
                mat[n + row][row + l] = c.clone();
            }
        }
        bareiss_det_sym(nvars, mat)
    }

    /// Symbolic discriminant Res(F_s, F_t) for slot >= 2.
    pub fn disc_binform(&self) -> Result<MPoly> {
        if self.slot < 2 {
            return Err(Error::Precondition(
                "symbolic disc_binform needs slot >= 2".into(),
            ));
        }
        self.deriv_s().resultant(&self.deriv_t())
    }
}

fn bareiss_det_sym(nvars: usize, mut m: Vec<Vec<MPoly>>) -> Result<MPoly> {
    let n = m.len();
    if n == 0 {
        return Ok(MPoly::constant(nvars, BigInt::one()));
    }
    let mut sign = false;
    let mut prev = MPoly::constant(nvars, BigInt::one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                None => return Ok(MPoly::zero(nvars)),
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for jj in k + 1..n {
                let num = pivot.mul(&m[i][jj]).sub(&m[i][k].mul(&m[k][jj]));
                m[i][jj] = num.div_exact(&prev)?;
            }
            m[i][k] = MPoly::zero(nvars);
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_division() {
        let ring = PolyRing::new(vec!["x".into(), "y".into()]);
        let x = ring.var(0);
        let y = ring.var(1);
        let f = x.add(&y).mul(&x.sub(&y)); // x^2 - y^2
        assert_eq!(f, x.mul(&x).sub(&y.mul(&y)));
        let q = f.div_exact(&x.sub(&y)).unwrap();
        assert_eq!(q, x.add(&y));
        assert!(f.div_exact(&x).is_err());
    }

    #[test]
    fn display_order() {
        let ring = PolyRing::new(vec!["x".into(), "y".into()]);
        let x = ring.var(0);
        let y = ring.var(1);
        let f = x.mul(&x).sub(&y.scale_int(4));
        assert_eq!(ring.display(&f).to_string(), "x^2-4*y");
    }

    #[test]
    fn symbolic_quadratic_discriminant() {
        // generic quadratic d2 s^2 + d1 s t + d0 t^2: disc should vanish
        // exactly on d1^2 - 4 d0 d2 = 0 (up to a scalar)
        let ring = PolyRing::new(vec!["d0".into(), "d1".into(), "d2".into()]);
        let mut f = SymForm::zero(3, 2);
        f.coeffs[0] = ring.var(2);
        f.coeffs[1] = ring.var(1);
        f.coeffs[2] = ring.var(0);
        let disc = f.disc_binform().unwrap();
        let classic = ring.var(1).mul(&ring.var(1)).sub(
            &ring.var(0).mul(&ring.var(2)).scale_int(4),
        );
        // proportional with an integer ratio in one direction or the other
        let ratio_fwd = disc.div_exact(&classic);
        let ratio_bwd = classic.div_exact(&disc);
        assert!(ratio_fwd.is_ok() || ratio_bwd.is_ok());
    }

    #[test]
    fn eval_matches_expansion() {
        let ring = PolyRing::new(vec!["a".into(), "b".into()]);
        let f = ring.var(0).mul(&ring.var(0)).add(&ring.var(1).scale_int(3));
        assert_eq!(f.eval_ints(&[2, 5]), BigInt::from(19));
    }
}
