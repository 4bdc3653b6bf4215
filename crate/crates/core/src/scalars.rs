//! Exact field arithmetic: arbitrary-precision rationals, odd prime fields,
//! and Laurent polynomials in a uniformizer `e` over either base.
//!
//! Characteristic 2 is rejected at construction.  Rationals are kept in
//! lowest terms with positive denominator, prime-field values as canonical
//! residues in `[0, p)`, and Laurent values as finitely supported maps
//! exponent -> nonzero base scalar.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Base field of a Laurent value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseTag {
    Q,
    Fp(u64),
}

/// The field a scalar lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Q,
    Fp(u64),
    Laurent(BaseTag),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Construct the prime field F_p.  Rejects even characteristic and
    /// non-primes.
    pub fn fp(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::EvenCharacteristic(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Fp(p))
    }

    pub fn laurent(base: BaseTag) -> Result<Field> {
        if let BaseTag::Fp(p) = base {
            Field::fp(p)?;
        }
        Ok(Field::Laurent(base))
    }

    pub fn base_tag(&self) -> BaseTag {
        match self {
            Field::Q => BaseTag::Q,
            Field::Fp(p) => BaseTag::Fp(*p),
            Field::Laurent(b) => *b,
        }
    }

    pub fn base_field(&self) -> Field {
        match self.base_tag() {
            BaseTag::Q => Field::Q,
            BaseTag::Fp(p) => Field::Fp(p),
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, Field::Laurent(_))
    }

    pub fn characteristic(&self) -> u64 {
        match self.base_tag() {
            BaseTag::Q => 0,
            BaseTag::Fp(p) => p,
        }
    }

    /// Session guard: derivative-based gcd and square-root algorithms need
    /// p > 2 * max form degree.
    pub fn check_degree_bound(&self, max_degree: i64) -> Result<()> {
        if let BaseTag::Fp(p) = self.base_tag() {
            let bound = 2 * max_degree.max(0);
            if (p as i128) <= bound as i128 {
                return Err(Error::PrimeTooSmall {
                    p,
                    degree: max_degree,
                    bound,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F{p}"),
            Field::Laurent(BaseTag::Q) => write!(f, "Q((e))"),
            Field::Laurent(BaseTag::Fp(p)) => write!(f, "F{p}((e))"),
        }
    }
}

/// A value in F_p, stored as the canonical residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    pub p: u64,
    pub v: u64,
}

impl FpElem {
    pub fn new(p: u64, v: i64) -> FpElem {
        let v = v.rem_euclid(p as i64) as u64;
        FpElem { p, v }
    }

    fn mul(self, o: FpElem) -> FpElem {
        debug_assert_eq!(self.p, o.p);
        FpElem {
            p: self.p,
            v: ((self.v as u128 * o.v as u128) % self.p as u128) as u64,
        }
    }

    fn add(self, o: FpElem) -> FpElem {
        debug_assert_eq!(self.p, o.p);
        FpElem {
            p: self.p,
            v: (self.v + o.v) % self.p,
        }
    }

    fn neg(self) -> FpElem {
        FpElem {
            p: self.p,
            v: if self.v == 0 { 0 } else { self.p - self.v },
        }
    }

    fn pow(self, mut e: u64) -> FpElem {
        let mut base = self;
        let mut acc = FpElem { p: self.p, v: 1 };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    fn inv(self) -> Result<FpElem> {
        if self.v == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.p - 2))
    }

    /// Euler's criterion; 0 counts as a square.
    fn is_square(self) -> bool {
        if self.v == 0 {
            return true;
        }
        self.pow((self.p - 1) / 2).v == 1
    }

    /// Tonelli-Shanks.
    fn sqrt(self) -> Option<FpElem> {
        let p = self.p;
        if self.v == 0 {
            return Some(self);
        }
        if !self.is_square() {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow((p + 1) / 4));
        }
        // write p - 1 = q * 2^s with q odd
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // find a non-residue z
        let mut z = FpElem { p, v: 2 };
        while z.is_square() {
            z.v += 1;
        }
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = self.pow(q);
        let mut r = self.pow((q + 1) / 2);
        while t.v != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt.v != 1 {
                tt = tt.mul(tt);
                i += 1;
            }
            let b = c.pow(1u64 << (m - i - 1));
            m = i;
            c = b.mul(b);
            t = t.mul(c);
            r = r.mul(b);
        }
        Some(r)
    }
}

/// A finitely supported Laurent polynomial in the uniformizer `e`.
/// Coefficients are base-field scalars; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    pub base: BaseTag,
    pub terms: BTreeMap<i64, Scalar>,
}

impl LaurentPoly {
    fn normalize(mut self) -> LaurentPoly {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Coefficient of e^k as a base-field scalar.
    pub fn coeff(&self, k: i64) -> Scalar {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(|| match self.base {
                BaseTag::Q => Scalar::Rat(BigRational::zero()),
                BaseTag::Fp(p) => Scalar::Fp(FpElem { p, v: 0 }),
            })
    }
}

/// An exact scalar in Q, F_p, or a Laurent polynomial ring over either.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Fp(FpElem),
    Laurent(LaurentPoly),
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Q,
            Scalar::Fp(x) => Field::Fp(x.p),
            Scalar::Laurent(l) => Field::Laurent(l.base),
        }
    }

    pub fn zero(field: Field) -> Scalar {
        match field {
            Field::Q => Scalar::Rat(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp(FpElem { p, v: 0 }),
            Field::Laurent(base) => Scalar::Laurent(LaurentPoly {
                base,
                terms: BTreeMap::new(),
            }),
        }
    }

    pub fn one(field: Field) -> Scalar {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, n: i64) -> Scalar {
        match field {
            Field::Q => Scalar::Rat(BigRational::from(BigInt::from(n))),
            Field::Fp(p) => Scalar::Fp(FpElem::new(p, n)),
            Field::Laurent(base) => {
                let c = Scalar::from_i64(
                    match base {
                        BaseTag::Q => Field::Q,
                        BaseTag::Fp(p) => Field::Fp(p),
                    },
                    n,
                );
                Scalar::laurent_monomial(base, 0, c)
            }
        }
    }

    pub fn from_rational(field: Field, num: BigInt, den: BigInt) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match field {
            Field::Q => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Fp(p) => {
                let pn = BigInt::from(p);
                let n = ((num % &pn) + &pn) % &pn;
                let d = ((den % &pn) + &pn) % &pn;
                let n: u64 = n.try_into().unwrap();
                let d: u64 = d.try_into().unwrap();
                let d = FpElem { p, v: d }.inv()?;
                Ok(Scalar::Fp(FpElem { p, v: n }.mul(d)))
            }
            Field::Laurent(base) => {
                let c = Scalar::from_rational(
                    match base {
                        BaseTag::Q => Field::Q,
                        BaseTag::Fp(p) => Field::Fp(p),
                    },
                    num,
                    den,
                )?;
                Ok(Scalar::laurent_monomial(base, 0, c))
            }
        }
    }

    /// c * e^k with c a base-field scalar.
    pub fn laurent_monomial(base: BaseTag, k: i64, c: Scalar) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Scalar::Laurent(LaurentPoly { base, terms })
    }

    /// Lift a base-field scalar into the Laurent field over the same base.
    pub fn into_laurent(self) -> Scalar {
        match self {
            Scalar::Rat(_) => Scalar::laurent_monomial(BaseTag::Q, 0, self),
            Scalar::Fp(x) => Scalar::laurent_monomial(BaseTag::Fp(x.p), 0, self),
            s @ Scalar::Laurent(_) => s,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(x) => x.v == 0,
            Scalar::Laurent(l) => l.terms.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp(x) => x.v == 1,
            Scalar::Laurent(l) => {
                l.terms.len() == 1 && l.terms.get(&0).map(|c| c.is_one()).unwrap_or(false)
            }
        }
    }

    fn check_same(&self, o: &Scalar) {
        if self.field() != o.field() {
            panic!(
                "mixed fields in scalar arithmetic: {} vs {}",
                self.field(),
                o.field()
            );
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        self.check_same(o);
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp(a), Scalar::Fp(b)) => Scalar::Fp(a.add(*b)),
            (Scalar::Laurent(a), Scalar::Laurent(b)) => {
                let mut terms = a.terms.clone();
                for (k, c) in &b.terms {
                    let cur = terms.remove(k);
                    let sum = match cur {
                        Some(x) => x.add(c),
                        None => c.clone(),
                    };
                    if !sum.is_zero() {
                        terms.insert(*k, sum);
                    }
                }
                Scalar::Laurent(LaurentPoly {
                    base: a.base,
                    terms,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp(a) => Scalar::Fp(a.neg()),
            Scalar::Laurent(l) => Scalar::Laurent(LaurentPoly {
                base: l.base,
                terms: l.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
            }),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        self.check_same(o);
        match (self, o) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp(a), Scalar::Fp(b)) => Scalar::Fp(a.mul(*b)),
            (Scalar::Laurent(a), Scalar::Laurent(b)) => {
                let mut terms: BTreeMap<i64, Scalar> = BTreeMap::new();
                for (ka, ca) in &a.terms {
                    for (kb, cb) in &b.terms {
                        let k = ka + kb;
                        let prod = ca.mul(cb);
                        match terms.remove(&k) {
                            Some(cur) => {
                                let sum = cur.add(&prod);
                                if !sum.is_zero() {
                                    terms.insert(k, sum);
                                }
                            }
                            None => {
                                if !prod.is_zero() {
                                    terms.insert(k, prod);
                                }
                            }
                        }
                    }
                }
                Scalar::Laurent(LaurentPoly {
                    base: a.base,
                    terms,
                })
            }
            _ => unreachable!(),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(a) => {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(a.recip()))
                }
            }
            Scalar::Fp(a) => Ok(Scalar::Fp(a.inv()?)),
            Scalar::Laurent(l) => {
                if l.terms.is_empty() {
                    Err(Error::DivisionByZero)
                } else if l.terms.len() == 1 {
                    let (k, c) = l.terms.iter().next().unwrap();
                    Ok(Scalar::laurent_monomial(l.base, -k, c.inv()?))
                } else {
                    Err(Error::NotInvertible(self.to_string()))
                }
            }
        }
    }

    pub fn div(&self, o: &Scalar) -> Result<Scalar> {
        self.check_same(o);
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match (self, o) {
            (Scalar::Laurent(a), Scalar::Laurent(b)) => {
                if b.terms.len() == 1 {
                    return Ok(self.mul(&o.inv()?));
                }
                // exact division of Laurent polynomials: shift to ordinary
                // polynomials in e and divide, requiring zero remainder
                let va = match a.valuation() {
                    None => return Ok(Scalar::zero(self.field())),
                    Some(v) => v,
                };
                let vb = b.valuation().unwrap();
                let base_field = self.field().base_field();
                let da = (*a.terms.keys().last().unwrap() - va) as usize;
                let db = (*b.terms.keys().last().unwrap() - vb) as usize;
                if da < db {
                    return Err(Error::NotInvertible(o.to_string()));
                }
                let mut num: Vec<Scalar> = (0..=da)
                    .map(|k| a.coeff(va + k as i64))
                    .collect();
                let den: Vec<Scalar> = (0..=db)
                    .map(|k| b.coeff(vb + k as i64))
                    .collect();
                let lc_inv = den[db].inv()?;
                let mut quot = vec![Scalar::zero(base_field); da - db + 1];
                for qd in (0..=da - db).rev() {
                    let c = num[qd + db].mul(&lc_inv);
                    if c.is_zero() {
                        continue;
                    }
                    quot[qd] = c.clone();
                    for (idx, dcoef) in den.iter().enumerate() {
                        num[qd + idx] = num[qd + idx].sub(&c.mul(dcoef));
                    }
                }
                if num.iter().any(|c| !c.is_zero()) {
                    return Err(Error::NotInvertible(o.to_string()));
                }
                let mut terms = BTreeMap::new();
                for (qd, c) in quot.into_iter().enumerate() {
                    if !c.is_zero() {
                        terms.insert(va - vb + qd as i64, c);
                    }
                }
                Ok(Scalar::Laurent(LaurentPoly {
                    base: a.base,
                    terms,
                }))
            }
            _ => Ok(self.mul(&o.inv()?)),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one(self.field());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Squareness in the base field.  Defined for Q and F_p only.
    pub fn is_square(&self) -> Result<bool> {
        match self {
            Scalar::Rat(a) => {
                if a.is_negative() {
                    return Ok(false);
                }
                Ok(int_sqrt_exact(a.numer()).is_some() && int_sqrt_exact(a.denom()).is_some())
            }
            Scalar::Fp(a) => Ok(a.is_square()),
            Scalar::Laurent(_) => Err(Error::LaurentUnsupported),
        }
    }

    /// Exact square root in the base field when one exists.
    pub fn sqrt(&self) -> Result<Option<Scalar>> {
        match self {
            Scalar::Rat(a) => {
                if a.is_negative() {
                    return Ok(None);
                }
                match (int_sqrt_exact(a.numer()), int_sqrt_exact(a.denom())) {
                    (Some(n), Some(d)) => Ok(Some(Scalar::Rat(BigRational::new(n, d)))),
                    _ => Ok(None),
                }
            }
            Scalar::Fp(a) => Ok(a.sqrt().map(Scalar::Fp)),
            Scalar::Laurent(_) => Err(Error::LaurentUnsupported),
        }
    }

    /// Minimum exponent with nonzero coefficient; `None` encodes +infinity
    /// (the zero element).
    pub fn valuation(&self) -> Result<Option<i64>> {
        match self {
            Scalar::Laurent(l) => Ok(l.valuation()),
            _ => Err(Error::NotLaurent),
        }
    }

    /// Multiply a Laurent value by e^m.
    pub fn laurent_shift(&self, m: i64) -> Result<Scalar> {
        match self {
            Scalar::Laurent(l) => Ok(Scalar::Laurent(
                LaurentPoly {
                    base: l.base,
                    terms: l.terms.iter().map(|(k, c)| (k + m, c.clone())).collect(),
                }
                .normalize(),
            )),
            _ => Err(Error::NotLaurent),
        }
    }

    /// Evaluate a Laurent value at e = 0; requires valuation >= 0.
    pub fn laurent_at_zero(&self) -> Result<Scalar> {
        match self {
            Scalar::Laurent(l) => {
                if let Some(v) = l.valuation() {
                    if v < 0 {
                        return Err(Error::Precondition(format!(
                            "negative valuation {v} at e = 0"
                        )));
                    }
                }
                Ok(l.coeff(0))
            }
            _ => Err(Error::NotLaurent),
        }
    }
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{}", x.v),
            Scalar::Laurent(l) => {
                if l.terms.is_empty() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (k, c) in &l.terms {
                    let cs = c.to_string();
                    let (sign, mag) = match cs.strip_prefix('-') {
                        Some(m) => ("-", m.to_string()),
                        None => ("+", cs),
                    };
                    if first {
                        if sign == "-" {
                            write!(f, "-")?;
                        }
                        first = false;
                    } else {
                        write!(f, "{sign}")?;
                    }
                    match (*k, mag.as_str()) {
                        (0, _) => write!(f, "{mag}")?,
                        (1, "1") => write!(f, "e")?,
                        (1, _) => write!(f, "e*{mag}")?,
                        (_, "1") => write!(f, "e^{k}")?,
                        _ => write!(f, "e^{k}*{mag}")?,
                    }
                }
                Ok(())
            }
        }
    }
}
