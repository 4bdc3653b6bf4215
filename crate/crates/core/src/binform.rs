//! Homogeneous binary forms in `s`, `t` over an exact scalar field:
//! evaluation, gcd, resultant, binary-form discriminant, exact square
//! detection, multiplicity at a point.
//!
//! A form carries a formal slot degree which may exceed the visible support
//! (leading coefficients may vanish) and may be negative, in which case the
//! form is the zero form of that slot.  Coefficients are stored from the
//! `s^d` coefficient down to the `t^d` coefficient.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinForm {
    slot: i64,
    coeffs: Vec<Scalar>,
    field: Field,
}

/// A point of P^1 in canonical form: either [z : 1] or [1 : 0].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjPoint {
    s: Scalar,
    t: Scalar,
}

impl ProjPoint {
    pub fn new(s: Scalar, t: Scalar) -> Result<ProjPoint> {
        if s.field() != t.field() {
            return Err(Error::MixedFields(
                s.field().to_string(),
                t.field().to_string(),
            ));
        }
        if s.is_zero() && t.is_zero() {
            return Err(Error::Precondition("(0, 0) is not a projective point".into()));
        }
        if t.is_zero() {
            let f = s.field();
            Ok(ProjPoint {
                s: Scalar::one(f),
                t: Scalar::zero(f),
            })
        } else {
            let f = s.field();
            Ok(ProjPoint {
                s: s.div(&t)?,
                t: Scalar::one(f),
            })
        }
    }

    pub fn infinity(field: Field) -> ProjPoint {
        ProjPoint {
            s: Scalar::one(field),
            t: Scalar::zero(field),
        }
    }

    pub fn affine(z: Scalar) -> ProjPoint {
        let f = z.field();
        ProjPoint {
            s: z,
            t: Scalar::one(f),
        }
    }

    pub fn is_infinity(&self) -> bool {
        self.t.is_zero()
    }

    pub fn s(&self) -> &Scalar {
        &self.s
    }

    pub fn t(&self) -> &Scalar {
        &self.t
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "[1:0]")
        } else {
            write!(f, "[{}:1]", self.s)
        }
    }
}

impl BinForm {
    pub fn new(field: Field, slot: i64, coeffs: Vec<Scalar>) -> Result<BinForm> {
        if slot < 0 {
            if !coeffs.is_empty() {
                return Err(Error::SlotMismatch {
                    name: "form".into(),
                    expected: slot,
                    got: coeffs.len() as i64 - 1,
                });
            }
            return Ok(BinForm {
                slot,
                coeffs,
                field,
            });
        }
        if coeffs.len() as i64 != slot + 1 {
            return Err(Error::SlotMismatch {
                name: "form".into(),
                expected: slot,
                got: coeffs.len() as i64 - 1,
            });
        }
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::MixedFields(
                    field.to_string(),
                    c.field().to_string(),
                ));
            }
        }
        Ok(BinForm {
            slot,
            coeffs,
            field,
        })
    }

    pub fn zero(field: Field, slot: i64) -> BinForm {
        let coeffs = if slot < 0 {
            Vec::new()
        } else {
            vec![Scalar::zero(field); (slot + 1) as usize]
        };
        BinForm {
            slot,
            coeffs,
            field,
        }
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_i64s(field: Field, slot: i64, coeffs: &[i64]) -> Result<BinForm> {
        BinForm::new(
            field,
            slot,
            coeffs.iter().map(|&c| Scalar::from_i64(field, c)).collect(),
        )
    }

    pub fn slot(&self) -> i64 {
        self.slot
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of s^(d-l) t^l.
    pub fn coeff(&self, l: i64) -> Scalar {
        if l < 0 || l > self.slot {
            Scalar::zero(self.field)
        } else {
            self.coeffs[l as usize].clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Smallest l with nonzero coefficient: the multiplicity at [1:0].
    fn support_min(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .map(|l| l as i64)
    }

    /// Largest l with nonzero coefficient; d - support_max is the
    /// multiplicity at [0:1].
    fn support_max(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map(|l| l as i64)
    }

    pub fn add(&self, o: &BinForm) -> Result<BinForm> {
        if self.slot != o.slot {
            return Err(Error::SlotMismatch {
                name: "add".into(),
                expected: self.slot,
                got: o.slot,
            });
        }
        Ok(BinForm {
            slot: self.slot,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
            field: self.field,
        })
    }

    pub fn sub(&self, o: &BinForm) -> Result<BinForm> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BinForm {
        BinForm {
            slot: self.slot,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            field: self.field,
        }
    }

    pub fn scale(&self, c: &Scalar) -> BinForm {
        BinForm {
            slot: self.slot,
            coeffs: self.coeffs.iter().map(|x| x.mul(c)).collect(),
            field: self.field,
        }
    }

    /// Product; slot degrees add.
    pub fn mul(&self, o: &BinForm) -> BinForm {
        let slot = self.slot + o.slot;
        if self.is_zero() || o.is_zero() {
            return BinForm::zero(self.field, slot);
        }
        let mut out = BinForm::zero(self.field, slot);
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

    pub fn pow(&self, e: u32) -> BinForm {
        let mut acc = BinForm::from_i64s(self.field, 0, &[1]).unwrap();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn deriv_s(&self) -> Result<BinForm> {
        if self.slot < 0 {
            return Err(Error::Precondition(
                "derivative of a negative-slot form".into(),
            ));
        }
        let d = self.slot;
        if d == 0 {
            return Ok(BinForm::zero(self.field, -1));
        }
        let coeffs = (0..d)
            .map(|l| {
                self.coeffs[l as usize].mul(&Scalar::from_i64(self.field, d - l))
            })
            .collect();
        BinForm::new(self.field, d - 1, coeffs)
    }

    pub fn deriv_t(&self) -> Result<BinForm> {
        if self.slot < 0 {
            return Err(Error::Precondition(
                "derivative of a negative-slot form".into(),
            ));
        }
        let d = self.slot;
        if d == 0 {
            return Ok(BinForm::zero(self.field, -1));
        }
        let coeffs = (0..d)
            .map(|l| {
                self.coeffs[(l + 1) as usize].mul(&Scalar::from_i64(self.field, l + 1))
            })
            .collect();
        BinForm::new(self.field, d - 1, coeffs)
    }

    /// Value at the canonical representative of q.
    pub fn eval(&self, q: &ProjPoint) -> Scalar {
        if self.slot < 0 || self.is_zero() {
            return Scalar::zero(self.field);
        }
        let d = self.slot;
        if q.is_infinity() {
            return self.coeffs[0].clone();
        }
        // Horner in z = s-coordinate: sum c_l z^(d-l)
        let z = q.s();
        let mut acc = Scalar::zero(self.field);
        for l in 0..=d {
            acc = acc.mul(z).add(&self.coeffs[l as usize]);
        }
        acc
    }

    /// Order of vanishing at q; 0 if the form does not vanish there.
    pub fn multiplicity_at(&self, q: &ProjPoint) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        if q.is_infinity() {
            return Ok(self.support_min().unwrap());
        }
        // count factors of (z - z0) in the dehomogenization
        let mut f = self.dehomogenize();
        let z0 = q.s().clone();
        let mut m = 0i64;
        loop {
            let (quot, rem) = upoly_div_linear(&f, &z0);
            if !rem.is_zero() {
                return Ok(m);
            }
            m += 1;
            f = quot;
            if upoly_deg(&f).is_none() {
                return Ok(m);
            }
        }
    }

    /// Dehomogenization at t = 1, as a coefficient vector indexed by the
    /// power of s.
    fn dehomogenize(&self) -> Vec<Scalar> {
        let d = self.slot.max(-1);
        let mut v = vec![Scalar::zero(self.field); (d + 1).max(0) as usize];
        for (l, c) in self.coeffs.iter().enumerate() {
            v[(d as usize) - l] = c.clone();
        }
        upoly_trim(v)
    }

    /// Homogenize a univariate polynomial in s to slot `deg + tpow`,
    /// multiplying by t^tpow.
    fn homogenize(field: Field, poly: &[Scalar], tpow: i64) -> BinForm {
        let deg = match upoly_deg(poly) {
            None => return BinForm::zero(field, tpow - 1),
            Some(d) => d as i64,
        };
        let slot = deg + tpow;
        let mut out = BinForm::zero(field, slot);
        for (m, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                // s^m t^(slot - m - ... ): index l = slot - m
                out.coeffs[(slot - m as i64) as usize] = c.clone();
            }
        }
        out
    }

    /// Monic greatest common divisor, with separate bookkeeping for the
    /// common power of t.  Nonconstant exactly when the forms share a root
    /// over the algebraic closure.
    pub fn gcd(&self, o: &BinForm) -> Result<BinForm> {
        if self.is_zero() && o.is_zero() {
            return Err(Error::BothZero);
        }
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let tpow = self.support_min().unwrap().min(o.support_min().unwrap());
        let f = self.dehomogenize();
        let g = o.dehomogenize();
        let h = upoly_gcd(self.field, &f, &g);
        Ok(BinForm::homogenize(self.field, &h, tpow))
    }

    /// Leading coefficient: the coefficient of the largest s-power present.
    pub fn leading_coeff(&self) -> Result<Scalar> {
        let lmin = self.support_min().ok_or(Error::ZeroForm)?;
        Ok(self.coeffs[lmin as usize].clone())
    }

    /// Normalize so the leading (largest s-power) nonzero coefficient is 1.
    pub fn monic(&self) -> Result<BinForm> {
        Ok(self.scale(&self.leading_coeff()?.inv()?))
    }

    /// Determinant of the Sylvester matrix of the two coefficient
    /// sequences (taken at their slot degrees).
    pub fn resultant(&self, o: &BinForm) -> Result<Scalar> {
        if self.is_zero() || o.is_zero() || self.slot < 0 || o.slot < 0 {
            return Err(Error::ZeroForm);
        }
        let m = self.slot as usize;
        let n = o.slot as usize;
        let size = m + n;
        if size == 0 {
            return Ok(Scalar::one(self.field));
        }
        let zero = Scalar::zero(self.field);
        let mut mat = vec![vec![zero.clone(); size]; size];
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
        bareiss_det(self.field, mat)
    }

    /// Discriminant of a binary form, normalized as Res(F_s, F_t).
    /// Zero exactly when the form has a repeated projective root.
    pub fn disc_binform(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Ok(Scalar::zero(self.field));
        }
        if self.slot < 1 {
            return Err(Error::Precondition(
                "disc_binform needs slot degree >= 1".into(),
            ));
        }
        if self.slot == 1 {
            return Ok(Scalar::one(self.field));
        }
        let fs = self.deriv_s()?;
        let ft = self.deriv_t()?;
        if fs.is_zero() || ft.is_zero() {
            // pure power of s or t with exponent >= 2
            return Ok(Scalar::zero(self.field));
        }
        fs.resultant(&ft)
    }

    /// Exact square root over the base field, when one exists.
    pub fn is_square(&self) -> Result<Option<BinForm>> {
        if self.field.is_laurent() {
            return Err(Error::LaurentUnsupported);
        }
        if self.is_zero() {
            return Ok(Some(BinForm::zero(self.field, self.slot.div_euclid(2))));
        }
        if self.slot % 2 != 0 {
            return Ok(None);
        }
        let d = self.slot;
        let lmin = self.support_min().unwrap();
        let lmax = self.support_max().unwrap();
        let tpow = lmin;
        let spow = d - lmax;
        if tpow % 2 != 0 || spow % 2 != 0 {
            return Ok(None);
        }
        // middle part, fully supported at both ends
        let mid_deg = (lmax - lmin) as usize;
        let mut mid = vec![Scalar::zero(self.field); mid_deg + 1];
        for l in lmin..=lmax {
            mid[(lmax - l) as usize] = self.coeffs[l as usize].clone();
        }
        let lc = mid[mid_deg].clone();
        let unit_sqrt = match lc.sqrt()? {
            None => return Ok(None),
            Some(w) => w,
        };
        let monic_mid = upoly_scale(&mid, &lc.inv()?);
        let decomp = squarefree_decomposition(self.field, &monic_mid);
        let mut root = vec![unit_sqrt];
        for (factor, mult) in &decomp {
            if mult % 2 != 0 {
                return Ok(None);
            }
            for _ in 0..mult / 2 {
                root = upoly_mul(self.field, &root, factor);
            }
        }
        let g = BinForm::homogenize(self.field, &root, tpow / 2);
        // pad to slot d/2 with the s-power
        let g = g.mul(&BinForm::monomial(self.field, spow / 2, 0));
        debug_assert_eq!(g.slot, d / 2);
        if g.mul(&g) == *self {
            Ok(Some(g))
        } else {
            Ok(None)
        }
    }

    /// Exact division of forms; errors when the divisor does not divide.
    pub fn div_exact(&self, o: &BinForm) -> Result<BinForm> {
        if o.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let slot = self.slot - o.slot;
        if self.is_zero() {
            return Ok(BinForm::zero(self.field, slot));
        }
        let t_self = self.support_min().unwrap();
        let t_div = o.support_min().unwrap();
        if t_self < t_div {
            return Err(Error::Precondition("non-exact form division".into()));
        }
        let f = self.dehomogenize();
        let g = o.dehomogenize();
        let q = upoly_div_checked(self.field, &f, &g)
            .ok_or_else(|| Error::Precondition("non-exact form division".into()))?;
        let quot = BinForm::homogenize(self.field, &q, t_self - t_div);
        if quot.slot != slot {
            return Err(Error::Precondition("non-exact form division".into()));
        }
        Ok(quot)
    }

    /// s^a t^b.
    pub fn monomial(field: Field, spow: i64, tpow: i64) -> BinForm {
        let slot = spow + tpow;
        let mut out = BinForm::zero(field, slot);
        out.coeffs[tpow as usize] = Scalar::one(field);
        out
    }

    /// Squarefree decomposition over K, as (monic factor, multiplicity)
    /// pairs together with the scalar unit in front: the form equals
    /// unit * s^a t^b * product factor_i^(m_i) with a, b the powers at the
    /// torus-fixed points.
    pub fn squarefree_parts(&self) -> Result<SquarefreeParts> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        if self.field.is_laurent() {
            return Err(Error::LaurentUnsupported);
        }
        let d = self.slot;
        let lmin = self.support_min().unwrap();
        let lmax = self.support_max().unwrap();
        let tpow = lmin;
        let spow = d - lmax;
        let mid_deg = (lmax - lmin) as usize;
        let mut mid = vec![Scalar::zero(self.field); mid_deg + 1];
        for l in lmin..=lmax {
            mid[(lmax - l) as usize] = self.coeffs[l as usize].clone();
        }
        let unit = mid[mid_deg].clone();
        let monic_mid = upoly_scale(&mid, &unit.inv()?);
        let decomp = squarefree_decomposition(self.field, &monic_mid);
        let factors = decomp
            .into_iter()
            .map(|(f, m)| (BinForm::homogenize(self.field, &f, 0), m))
            .collect();
        Ok(SquarefreeParts {
            unit,
            s_power: spow,
            t_power: tpow,
            factors,
        })
    }

    /// K-rational projective roots of the form, with multiplicities,
    /// plus the leftover factor with no K-rational roots (constant when
    /// the form splits into linear factors over K).
    pub fn rational_roots(&self) -> Result<(Vec<(ProjPoint, i64)>, BinForm)> {
        let parts = self.squarefree_parts()?;
        let mut roots = Vec::new();
        if parts.s_power > 0 {
            roots.push((
                ProjPoint::affine(Scalar::zero(self.field)),
                parts.s_power,
            ));
        }
        if parts.t_power > 0 {
            roots.push((ProjPoint::infinity(self.field), parts.t_power));
        }
        let mut leftover = BinForm::from_i64s(self.field, 0, &[1]).unwrap();
        for (factor, mult) in &parts.factors {
            let f = factor.dehomogenize();
            let (linear_roots, rest) = upoly_rational_roots(self.field, &f);
            for z in linear_roots {
                roots.push((ProjPoint::affine(z), *mult));
            }
            let rest_form = BinForm::homogenize(self.field, &rest, 0);
            for _ in 0..*mult {
                leftover = leftover.mul(&rest_form);
            }
        }
        Ok((roots, leftover))
    }
}

/// Output of `BinForm::squarefree_parts`.
#[derive(Debug, Clone)]
pub struct SquarefreeParts {
    pub unit: Scalar,
    pub s_power: i64,
    pub t_power: i64,
    /// Monic squarefree forms (coprime to s and t) with multiplicities.
    pub factors: Vec<(BinForm, i64)>,
}

impl SquarefreeParts {
    /// All squarefree factors including the torus-fixed points, sorted by
    /// (multiplicity paths preserved) slot then display string.
    pub fn all_factors(&self, field: Field) -> Vec<(BinForm, i64)> {
        let mut out = Vec::new();
        if self.s_power > 0 {
            out.push((BinForm::monomial(field, 1, 0), self.s_power));
        }
        if self.t_power > 0 {
            out.push((BinForm::monomial(field, 0, 1), self.t_power));
        }
        out.extend(self.factors.iter().cloned());
        out.sort_by_key(|(f, _)| (f.slot(), f.to_string()));
        out
    }
}

// ---------------------------------------------------------------------------
// univariate helpers (coefficient index = power of s)
// ---------------------------------------------------------------------------

pub(crate) fn upoly_trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    v
}

pub(crate) fn upoly_deg(v: &[Scalar]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn upoly_scale(v: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    upoly_trim(v.iter().map(|x| x.mul(c)).collect())
}

pub(crate) fn upoly_mul(field: Field, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(field); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ca.mul(cb));
        }
    }
    upoly_trim(out)
}

/// Divide by the linear factor (z - z0); returns (quotient, remainder).
fn upoly_div_linear(f: &[Scalar], z0: &Scalar) -> (Vec<Scalar>, Scalar) {
    let field = z0.field();
    let d = match upoly_deg(f) {
        None => return (Vec::new(), Scalar::zero(field)),
        Some(d) => d,
    };
    let mut quot = vec![Scalar::zero(field); d];
    let mut carry = Scalar::zero(field);
    for m in (0..=d).rev() {
        let c = f.get(m).cloned().unwrap_or_else(|| Scalar::zero(field)).add(&carry);
        if m == 0 {
            return (upoly_trim(quot), c);
        }
        quot[m - 1] = c.clone();
        carry = c.mul(z0);
    }
    unreachable!()
}

/// Exact polynomial division over a field; panics if not exact (used where
/// exactness is guaranteed by construction, e.g. squarefree decomposition).
pub(crate) fn upoly_div_exact(field: Field, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    upoly_div_checked(field, f, g).expect("non-exact polynomial division")
}

/// Exact polynomial division over a field; `None` when not exact.
pub(crate) fn upoly_div_checked(
    field: Field,
    f: &[Scalar],
    g: &[Scalar],
) -> Option<Vec<Scalar>> {
    let dg = upoly_deg(g)?;
    let mut rem: Vec<Scalar> = f.to_vec();
    let lc_inv = g[dg].inv().ok()?;
    let df = match upoly_deg(&rem) {
        None => return Some(Vec::new()),
        Some(d) => d,
    };
    if df < dg {
        return None;
    }
    let mut quot = vec![Scalar::zero(field); df - dg + 1];
    for qd in (0..=df - dg).rev() {
        let c = rem[qd + dg].mul(&lc_inv);
        if c.is_zero() {
            continue;
        }
        quot[qd] = c.clone();
        for (idx, gc) in g.iter().enumerate() {
            rem[qd + idx] = rem[qd + idx].sub(&c.mul(gc));
        }
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(upoly_trim(quot))
}

/// Monic gcd.  Over Q this clears denominators and runs a primitive PRS on
/// integer polynomials; over F_p a plain Euclidean loop.
pub(crate) fn upoly_gcd(field: Field, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    match field {
        Field::Q => upoly_gcd_q(f, g),
        _ => upoly_gcd_euclid(field, f, g),
    }
}

fn upoly_gcd_euclid(_field: Field, f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    let mut a = upoly_trim(f.to_vec());
    let mut b = upoly_trim(g.to_vec());
    while let Some(db) = upoly_deg(&b) {
        let lc_inv = b[db].inv().unwrap();
        // remainder of a by b
        while let Some(da) = upoly_deg(&a) {
            if da < db {
                break;
            }
            let c = a[da].mul(&lc_inv);
            for (idx, bc) in b.iter().enumerate() {
                a[da - db + idx] = a[da - db + idx].sub(&c.mul(bc));
            }
            a = upoly_trim(a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    match upoly_deg(&a) {
        None => Vec::new(),
        Some(da) => upoly_scale(&a, &a[da].inv().unwrap()),
    }
}

fn to_int_primitive(f: &[Scalar]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in f {
        if let Scalar::Rat(r) = c {
            lcm = num_integer::lcm(lcm, r.denom().clone());
        }
    }
    let mut out: Vec<BigInt> = f
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => r.numer() * (&lcm / r.denom()),
            _ => unreachable!(),
        })
        .collect();
    let mut content = BigInt::zero();
    for c in &out {
        content = num_integer::gcd(content, c.clone());
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut out {
            *c = &*c / &content;
        }
    }
    out
}

fn int_deg(v: &[BigInt]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
    let mut content = BigInt::zero();
    for c in &v {
        content = num_integer::gcd(content, c.clone());
    }
    if !content.is_zero() && !content.is_one() {
        for c in &mut v {
            *c = &*c / &content;
        }
    }
    v
}

fn upoly_gcd_q(f: &[Scalar], g: &[Scalar]) -> Vec<Scalar> {
    let mut a = int_primitive(to_int_primitive(f));
    let mut b = int_primitive(to_int_primitive(g));
    if int_deg(&a).is_none() {
        std::mem::swap(&mut a, &mut b);
    }
    while let Some(db) = int_deg(&b) {
        let da = match int_deg(&a) {
            None => break,
            Some(d) => d,
        };
        if da < db {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        // pseudo-remainder: lc(b)^(da-db+1) * a mod b
        let lcb = b[db].clone();
        let mut rem = a.clone();
        for d in (db..=da).rev() {
            if int_deg(&rem).map(|x| x < d).unwrap_or(true) {
                // still multiply through to keep the loop uniform? not needed
                continue;
            }
            let lead = rem[d].clone();
            for c in rem.iter_mut() {
                *c = &*c * &lcb;
            }
            for (idx, bc) in b.iter().enumerate() {
                rem[d - db + idx] = &rem[d - db + idx] - &(&lead * bc);
            }
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        a = b;
        b = int_primitive(rem);
    }
    match int_deg(&a) {
        None => Vec::new(),
        Some(da) => {
            let lead = a[da].clone();
            a.iter()
                .map(|c| Scalar::Rat(BigRational::new(c.clone(), lead.clone())))
                .collect()
        }
    }
}

fn upoly_deriv(field: Field, f: &[Scalar]) -> Vec<Scalar> {
    if f.len() <= 1 {
        return Vec::new();
    }
    upoly_trim(
        (1..f.len())
            .map(|m| f[m].mul(&Scalar::from_i64(field, m as i64)))
            .collect(),
    )
}

/// Musser squarefree decomposition of a monic polynomial; valid in
/// characteristic 0 or p > deg f.  Returns monic (factor, multiplicity)
/// pairs with distinct multiplicities merged per multiplicity level.
pub(crate) fn squarefree_decomposition(field: Field, f: &[Scalar]) -> Vec<(Vec<Scalar>, i64)> {
    let mut out = Vec::new();
    if upoly_deg(f).map(|d| d == 0).unwrap_or(true) {
        return out;
    }
    let fp = upoly_deriv(field, f);
    let mut c = upoly_gcd(field, f, &fp);
    let mut w = upoly_div_exact(field, f, &c);
    let mut i = 1i64;
    while upoly_deg(&w).map(|d| d > 0).unwrap_or(false) {
        let y = upoly_gcd(field, &w, &c);
        let a = upoly_div_exact(field, &w, &y);
        if upoly_deg(&a).map(|d| d > 0).unwrap_or(false) {
            out.push((a, i));
        }
        c = upoly_div_exact(field, &c, &y);
        w = y;
        i += 1;
    }
    out
}

/// K-rational roots of a monic squarefree polynomial, plus the rootless
/// remainder.  Over F_p roots are found by exhaustion (p capped), over Q by
/// the rational root theorem on the primitive integer model.
fn upoly_rational_roots(field: Field, f: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut roots = Vec::new();
    let mut rest = upoly_trim(f.to_vec());
    match field {
        Field::Fp(p) if p <= 1 << 20 => {
            for v in 0..p {
                let z = Scalar::from_i64(field, v as i64);
                let (q, r) = upoly_div_linear(&rest, &z);
                if r.is_zero() {
                    roots.push(z);
                    rest = q;
                }
            }
        }
        Field::Q => {
            let int = to_int_primitive(&rest);
            if let Some(d) = int_deg(&int) {
                if d >= 1 {
                    let a0 = int[0].magnitude().clone();
                    let lead = int[d].magnitude().clone();
                    let mut candidates = Vec::new();
                    if a0.is_zero() {
                        candidates.push(BigRational::zero());
                    } else {
                        for p in small_divisors(&BigInt::from_biguint(num_bigint::Sign::Plus, a0)) {
                            for q in small_divisors(&BigInt::from_biguint(
                                num_bigint::Sign::Plus,
                                lead.clone(),
                            )) {
                                let r = BigRational::new(p.clone(), q.clone());
                                candidates.push(r.clone());
                                candidates.push(-r);
                            }
                        }
                    }
                    for cand in candidates {
                        let z = Scalar::Rat(cand);
                        let (q, r) = upoly_div_linear(&rest, &z);
                        if r.is_zero() {
                            roots.push(z);
                            rest = q;
                        }
                    }
                }
            }
        }
        _ => {}
    }
    if rest.is_empty() {
        rest = vec![Scalar::one(field)];
    }
    roots.sort_by_key(|z| z.to_string());
    (roots, rest)
}

/// Positive divisors of |n|, via trial division; gives up (returning only
/// 1 and |n|) past a size cap so bad inputs stay fast.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.magnitude();
    let cap = num_bigint::BigUint::from(1_000_000_000_000u64);
    let mut out = vec![BigInt::one()];
    if n.is_zero() {
        return out;
    }
    if n > &cap {
        if !n.is_one() {
            out.push(BigInt::from_biguint(num_bigint::Sign::Plus, n.clone()));
        }
        return out;
    }
    let n: u64 = n.try_into().unwrap();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Fraction-free Bareiss elimination for the determinant of a square
/// matrix of field scalars.
pub(crate) fn bareiss_det(field: Field, mut m: Vec<Vec<Scalar>>) -> Result<Scalar> {
    let n = m.len();
    if n == 0 {
        return Ok(Scalar::one(field));
    }
    let mut sign = false;
    let mut prev = Scalar::one(field);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                None => return Ok(Scalar::zero(field)),
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
            }
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let num = pivot.mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div(&prev)?;
            }
            m[i][k] = Scalar::zero(field);
        }
        prev = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.slot;
        let mut first = true;
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let spow = d - l as i64;
            let tpow = l as i64;
            let cs = c.to_string();
            let laurent_compound = cs.len() > 1
                && cs[1..].contains(['+', '-'])
                && matches!(c, Scalar::Laurent(_));
            let (sign, mag) = if laurent_compound {
                ("+", format!("({cs})"))
            } else {
                match cs.strip_prefix('-') {
                    Some(m) => ("-", m.to_string()),
                    None => ("+", cs),
                }
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
            if mag != "1" || (spow == 0 && tpow == 0) {
                parts.push(mag);
            }
            match spow {
                0 => {}
                1 => parts.push("s".into()),
                _ => parts.push(format!("s^{spow}")),
            }
            match tpow {
                0 => {}
                1 => parts.push("t".into()),
                _ => parts.push(format!("t^{tpow}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(slot: i64, coeffs: &[i64]) -> BinForm {
        BinForm::from_i64s(Field::Q, slot, coeffs).unwrap()
    }

    #[test]
    fn product_of_conjugates() {
        let a = form(2, &[1, 0, 1]); // s^2 + t^2
        let b = form(2, &[1, 0, -1]); // s^2 - t^2
        assert_eq!(a.mul(&b), form(4, &[1, 0, 0, 0, -1]));
    }

    #[test]
    fn derivative_and_euler() {
        let f = form(4, &[1, 0, 0, 0, 1]); // s^4 + t^4
        assert_eq!(f.deriv_s().unwrap(), form(3, &[4, 0, 0, 0]));
        // Euler: s F_s + t F_t = d F
        let s = BinForm::monomial(Field::Q, 1, 0);
        let t = BinForm::monomial(Field::Q, 0, 1);
        let lhs = s
            .mul(&f.deriv_s().unwrap())
            .add(&t.mul(&f.deriv_t().unwrap()))
            .unwrap();
        let rhs = f.scale(&Scalar::from_i64(Field::Q, 4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn disc_of_example_form() {
        // (s^4+t^4)^2 - 4 s (s t^6 + t^7) = s^8 + 2 s^4 t^4 - 4 s^2 t^6 - 4 s t^7 + t^8
        let b = form(4, &[1, 0, 0, 0, 1]);
        let a = form(1, &[1, 0]);
        let c = form(7, &[0, 0, 0, 0, 0, 0, 1, 1]);
        let disc = b
            .mul(&b)
            .sub(&a.mul(&c).scale(&Scalar::from_i64(Field::Q, 4)))
            .unwrap();
        assert_eq!(disc, form(8, &[1, 0, 0, 0, 2, 0, -4, -4, 1]));
    }

    #[test]
    fn eval_points() {
        let s5 = BinForm::monomial(Field::Q, 5, 0);
        let origin = ProjPoint::affine(Scalar::zero(Field::Q));
        let inf = ProjPoint::infinity(Field::Q);
        assert!(s5.eval(&origin).is_zero());
        assert!(s5.eval(&inf).is_one());
        let f = form(4, &[1, 0, 0, 0, 1]);
        assert!(f.eval(&origin).is_one());
    }

    #[test]
    fn gcd_examples() {
        let s5 = BinForm::monomial(Field::Q, 5, 0);
        let st3 = BinForm::monomial(Field::Q, 1, 3);
        assert_eq!(s5.gcd(&st3).unwrap(), BinForm::monomial(Field::Q, 1, 0));

        let s = BinForm::monomial(Field::Q, 1, 0);
        let f = form(4, &[1, 0, 0, 0, 1]);
        assert_eq!(s.gcd(&f).unwrap(), form(0, &[1]));

        let a = form(2, &[1, 0, -1]); // s^2 - t^2
        let b = form(1, &[1, -1]); // s - t
        assert_eq!(a.gcd(&b).unwrap(), form(1, &[1, -1]));
    }

    #[test]
    fn resultant_examples() {
        let s = BinForm::monomial(Field::Q, 1, 0);
        let t = BinForm::monomial(Field::Q, 0, 1);
        let r = s.resultant(&t).unwrap();
        assert!(!r.is_zero());
        assert!(r.is_one() || r.neg().is_one());

        let f = form(1, &[1, -1]);
        let g = form(1, &[1, 1]);
        assert_eq!(f.resultant(&g).unwrap(), Scalar::from_i64(Field::Q, 2));

        let st = BinForm::monomial(Field::Q, 1, 1);
        assert!(st.resultant(&s).unwrap().is_zero());
    }

    #[test]
    fn disc_binform_examples() {
        let st4 = form(2, &[0, 4, 0]); // 4st
        assert!(!st4.disc_binform().unwrap().is_zero());

        let s10 = BinForm::monomial(Field::Q, 10, 0);
        assert!(s10.disc_binform().unwrap().is_zero());

        // s^4 - 4 s t^3
        let f = form(4, &[1, 0, 0, -4, 0]);
        assert!(!f.disc_binform().unwrap().is_zero());
    }

    #[test]
    fn square_detection() {
        let s10 = BinForm::monomial(Field::Q, 10, 0);
        assert_eq!(
            s10.is_square().unwrap().unwrap(),
            BinForm::monomial(Field::Q, 5, 0)
        );

        let st4 = form(2, &[0, 4, 0]);
        assert!(st4.is_square().unwrap().is_none());

        let two_s2 = form(2, &[2, 0, 0]);
        assert!(two_s2.is_square().unwrap().is_none());
        // 2 = 3^2 in F_7, so 2 s^2 is a square there
        let f7 = Field::fp(7).unwrap();
        let r7 = BinForm::from_i64s(f7, 2, &[2, 0, 0])
            .unwrap()
            .is_square()
            .unwrap()
            .unwrap();
        assert_eq!(r7.mul(&r7), BinForm::from_i64s(f7, 2, &[2, 0, 0]).unwrap());
        // but 3 s^2 is not
        assert!(BinForm::from_i64s(f7, 2, &[3, 0, 0])
            .unwrap()
            .is_square()
            .unwrap()
            .is_none());
        let f17 = Field::fp(17).unwrap();
        let r = BinForm::from_i64s(f17, 2, &[2, 0, 0])
            .unwrap()
            .is_square()
            .unwrap()
            .unwrap();
        assert_eq!(r.mul(&r), BinForm::from_i64s(f17, 2, &[2, 0, 0]).unwrap());
        // 6s is one of the two roots
        assert!(r == BinForm::from_i64s(f17, 1, &[6, 0]).unwrap()
            || r == BinForm::from_i64s(f17, 1, &[11, 0]).unwrap());
    }

    #[test]
    fn multiplicities() {
        let f = BinForm::monomial(Field::Q, 5, 1); // s^5 t
        let origin = ProjPoint::affine(Scalar::zero(Field::Q));
        let inf = ProjPoint::infinity(Field::Q);
        assert_eq!(f.multiplicity_at(&origin).unwrap(), 5);
        assert_eq!(f.multiplicity_at(&inf).unwrap(), 1);
        let g = form(4, &[1, 0, 0, 0, 1]);
        let one = ProjPoint::affine(Scalar::one(Field::Q));
        assert_eq!(g.multiplicity_at(&one).unwrap(), 0);
    }

    #[test]
    fn rational_roots_of_products() {
        // s^2 (s - t) (s^2 + t^2)
        let f = BinForm::monomial(Field::Q, 2, 0)
            .mul(&form(1, &[1, -1]))
            .mul(&form(2, &[1, 0, 1]));
        let (roots, leftover) = f.rational_roots().unwrap();
        let mut seen: Vec<(String, i64)> =
            roots.iter().map(|(p, m)| (p.to_string(), *m)).collect();
        seen.sort();
        assert_eq!(
            seen,
            vec![("[0:1]".to_string(), 2), ("[1:1]".to_string(), 1)]
        );
        assert_eq!(leftover, form(2, &[1, 0, 1]));
    }

    #[test]
    fn display_readable() {
        let f = form(4, &[1, 0, 0, 0, 1]);
        assert_eq!(f.to_string(), "s^4+t^4");
        let g = form(2, &[-4, 1, 0]);
        assert_eq!(g.to_string(), "-4*s^2+s*t");
    }
}
