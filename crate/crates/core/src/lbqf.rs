//! Linear binary quadratic forms over P^1: the triple (O(i)+O(j), O(k), p)
//! with p = a x^2 + b xy + c y^2, its discriminant section, the four-way
//! classification of the curve/module pair it encodes, the automorphism
//! action, twisting, the generic-strata table, specialization order, and
//! the symbolic locus equations.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binform::{BinForm, ProjPoint};
use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::mpoly::{MPoly, PolyRing, SymForm};
use crate::scalars::{Field, Scalar};

/// Splitting type (i, j, k) of the bundle data; the moduli stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StratumIndex {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl StratumIndex {
    pub fn new(i: i64, j: i64, k: i64) -> StratumIndex {
        StratumIndex { i, j, k }
    }

    pub fn is_canonical(&self) -> bool {
        self.i <= self.j
    }

    /// Arithmetic genus of the curve cut out by a nonzero form here.
    pub fn g(&self) -> i64 {
        self.i + self.j + self.k - 1
    }

    /// Degree of the module.
    pub fn n(&self) -> i64 {
        2 * self.i + 2 * self.j + self.k
    }

    pub fn slot_a(&self) -> i64 {
        2 * self.i + self.k
    }

    pub fn slot_b(&self) -> i64 {
        self.i + self.j + self.k
    }

    pub fn slot_c(&self) -> i64 {
        2 * self.j + self.k
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lbqf {
    idx: StratumIndex,
    a: BinForm,
    b: BinForm,
    c: BinForm,
}

/// The four-way verdict of the classification theorem, with witnesses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub p_identically_zero: bool,
    pub reduced: bool,
    pub integral: bool,
    pub smooth: bool,
    pub line_bundle: bool,
    /// Monic gcd of the nonzero coefficient forms; its roots are the fibers
    /// where the module is not locally free.  None when p is identically 0.
    pub bad_fiber_factor: Option<BinForm>,
    /// Square root of the discriminant when it is a nonzero square.
    pub disc_sqrt: Option<BinForm>,
}

impl Classification {
    fn checked(self, degree0_disc: bool) -> Classification {
        // implication chain; degree-0 split discriminants are the one case
        // where smooth does not force integral
        assert!(!self.integral || self.reduced);
        assert!(!self.smooth || self.integral || degree0_disc);
        assert!(self.reduced || (!self.smooth && !self.integral));
        assert_eq!(
            self.line_bundle,
            self.bad_fiber_factor
                .as_ref()
                .map(|f| f.slot() == 0)
                .unwrap_or(false)
                && !self.p_identically_zero
        );
        self
    }
}

/// Element of the automorphism group of the bundle data: an upper-triangular
/// change of basis of O(i)+O(j) (a full 2x2 scalar matrix when i = j)
/// together with the scalar action on O(k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub r: Scalar,
    /// Off-diagonal map O(i) -> O(j), a form of slot j - i.
    pub u: BinForm,
    /// Lower-left scalar entry; only permitted when i = j.
    pub lower: Option<Scalar>,
    pub w: Scalar,
    /// The scalar acting on O(k).
    pub lambda: Scalar,
}

impl Automorphism {
    pub fn identity(idx: StratumIndex, field: Field) -> Automorphism {
        Automorphism {
            r: Scalar::one(field),
            u: BinForm::zero(field, idx.j - idx.i),
            lower: None,
            w: Scalar::one(field),
            lambda: Scalar::one(field),
        }
    }

    pub fn scaling(idx: StratumIndex, field: Field, lambda: Scalar) -> Automorphism {
        Automorphism {
            lambda,
            ..Automorphism::identity(idx, field)
        }
    }

    pub fn det(&self) -> Scalar {
        let rw = self.r.mul(&self.w);
        match &self.lower {
            None => rw,
            Some(lo) => rw.sub(&lo.mul(&self.u.coeff(0))),
        }
    }
}

/// Both multiplication tables of the rank-2 algebra and module, symbolically
/// and (optionally) evaluated at a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTable {
    pub p_identically_zero: bool,
    /// tau^2 = tau_sq_tau * tau + tau_sq_const
    pub tau_sq_tau: BinForm,
    pub tau_sq_const: BinForm,
    /// tau acting on the module basis: tau*x = (.0)*x + (.1)*y, same for y
    pub tau_x: (BinForm, BinForm),
    pub tau_y: (BinForm, BinForm),
    /// (tau')^2 is a scalar section, with no tau' term
    pub taup_sq: BinForm,
    pub taup_x: (BinForm, BinForm),
    pub taup_y: (BinForm, BinForm),
    pub at_point: Option<MultTableAt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultTableAt {
    pub point: ProjPoint,
    pub taup_x: (Scalar, Scalar),
    pub taup_y: (Scalar, Scalar),
    /// Set when a, b, c all vanish at the point: tau' kills the module
    /// fiber there, so the module is not locally free at that fiber.
    pub annihilates: bool,
}

impl Lbqf {
    /// Requires the canonical orientation i <= j; see `canonicalize` for
    /// raw input.
    pub fn new(idx: StratumIndex, a: BinForm, b: BinForm, c: BinForm) -> Result<Lbqf> {
        if !idx.is_canonical() {
            return Err(Error::Precondition(format!(
                "stratum ({}, {}, {}) is not in canonical orientation i <= j",
                idx.i, idx.j, idx.k
            )));
        }
        for (name, form, slot) in [
            ("a", &a, idx.slot_a()),
            ("b", &b, idx.slot_b()),
            ("c", &c, idx.slot_c()),
        ] {
            if form.slot() != slot {
                return Err(Error::SlotMismatch {
                    name: name.into(),
                    expected: slot,
                    got: form.slot(),
                });
            }
        }
        if a.field() != b.field() || b.field() != c.field() {
            return Err(Error::MixedFields(
                a.field().to_string(),
                c.field().to_string(),
            ));
        }
        Ok(Lbqf { idx, a, b, c })
    }

    /// Accepts either orientation, swapping (i, j) and (a, c) when needed.
    /// The boolean reports whether a swap happened.
    pub fn canonicalize(
        idx: StratumIndex,
        a: BinForm,
        b: BinForm,
        c: BinForm,
    ) -> Result<(Lbqf, bool)> {
        if idx.is_canonical() {
            Ok((Lbqf::new(idx, a, b, c)?, false))
        } else {
            let swapped = StratumIndex::new(idx.j, idx.i, idx.k);
            Ok((Lbqf::new(swapped, c, b, a)?, true))
        }
    }

    pub fn idx(&self) -> StratumIndex {
        self.idx
    }

    pub fn a(&self) -> &BinForm {
        &self.a
    }

    pub fn b(&self) -> &BinForm {
        &self.b
    }

    pub fn c(&self) -> &BinForm {
        &self.c
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn g(&self) -> i64 {
        self.idx.g()
    }

    pub fn n(&self) -> i64 {
        self.idx.n()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// The discriminant section b^2 - 4ac, of slot 2g+2.
    pub fn disc_form(&self) -> BinForm {
        let four = Scalar::from_i64(self.field(), 4);
        self.b
            .mul(&self.b)
            .sub(&self.a.mul(&self.c).scale(&four))
            .expect("disc slots agree")
    }

    /// Value of p at the fiber over q, evaluated on module coordinates
    /// (x0, y0).
    pub fn eval_p(&self, q: &ProjPoint, x0: &Scalar, y0: &Scalar) -> Scalar {
        let av = self.a.eval(q);
        let bv = self.b.eval(q);
        let cv = self.c.eval(q);
        av.mul(&x0.mul(x0))
            .add(&bv.mul(&x0.mul(y0)))
            .add(&cv.mul(&y0.mul(y0)))
    }

    /// The classification theorem: reduced iff disc is nonzero; integral
    /// iff disc is not a square over K; smooth iff disc has no repeated
    /// root; line bundle iff the nonzero coefficient forms have constant
    /// gcd.  Not defined over Laurent coefficients (classify the cleared
    /// limit instead).
    pub fn classify(&self) -> Result<Classification> {
        if self.field().is_laurent() {
            return Err(Error::LaurentUnsupported);
        }
        let p_zero = self.is_zero();
        let disc = self.disc_form();
        let reduced = !disc.is_zero();
        let degree0_disc = disc.slot() == 0;
        let sqrt = if reduced { disc.is_square()? } else { None };
        let integral = reduced && sqrt.is_none();
        let smooth = if !reduced {
            false
        } else if degree0_disc {
            true
        } else {
            !disc.disc_binform()?.is_zero()
        };
        let bad = if p_zero {
            None
        } else {
            let mut acc: Option<BinForm> = None;
            for form in [&self.a, &self.b, &self.c] {
                if form.is_zero() {
                    continue;
                }
                acc = Some(match acc {
                    None => form.monic()?,
                    Some(g) => g.gcd(form)?,
                });
            }
            acc
        };
        let line_bundle =
            bad.as_ref().map(|f| f.slot() == 0).unwrap_or(false) && !p_zero;
        Ok(Classification {
            p_identically_zero: p_zero,
            reduced,
            integral,
            smooth,
            line_bundle,
            bad_fiber_factor: bad,
            disc_sqrt: sqrt,
        }
        .checked(degree0_disc))
    }

    /// Independent route to the integrality verdict: attempt the explicit
    /// quadratic factorization of p and report whether it fails.
    pub fn irreducibility_crosscheck(&self) -> Result<bool> {
        if self.disc_form().is_zero() {
            return Err(Error::Precondition(
                "irreducibility is only defined for reduced forms".into(),
            ));
        }
        Ok(crate::hirzebruch::try_factor(self)?.is_none())
    }

    /// Substitute x -> r x + u y (plus the lower-left entry when i = j),
    /// y -> w y, and rescale by lambda; re-extract (a, b, c).
    pub fn apply_automorphism(&self, phi: &Automorphism) -> Result<Lbqf> {
        let field = self.field();
        let idx = self.idx;
        if phi.u.slot() != idx.j - idx.i {
            return Err(Error::SlotMismatch {
                name: "u".into(),
                expected: idx.j - idx.i,
                got: phi.u.slot(),
            });
        }
        if phi.lower.is_some() && idx.i != idx.j {
            return Err(Error::Precondition(
                "full 2x2 matrices act only on strata with i = j".into(),
            ));
        }
        if phi.det().is_zero() || phi.lambda.is_zero() {
            return Err(Error::NotInvertible("automorphism".into()));
        }
        // x -> A x + B y, y -> C x + D y as forms
        let const_form = |s: &Scalar| {
            BinForm::new(field, 0, vec![s.clone()]).expect("constant form")
        };
        let aa = const_form(&phi.r);
        let bb = phi.u.clone();
        let cc = match &phi.lower {
            None => BinForm::zero(field, idx.i - idx.j),
            Some(lo) => const_form(lo),
        };
        let dd = const_form(&phi.w);
        let two = Scalar::from_i64(field, 2);
        let a2 = self
            .a
            .mul(&aa.mul(&aa))
            .add(&self.b.mul(&aa.mul(&cc)))?
            .add(&self.c.mul(&cc.mul(&cc)))?
            .scale(&phi.lambda);
        let b2 = self
            .a
            .mul(&aa.mul(&bb))
            .scale(&two)
            .add(&self.b.mul(&aa.mul(&dd).add(&bb.mul(&cc))?))?
            .add(&self.c.mul(&cc.mul(&dd)).scale(&two))?
            .scale(&phi.lambda);
        let c2 = self
            .a
            .mul(&bb.mul(&bb))
            .add(&self.b.mul(&bb.mul(&dd)))?
            .add(&self.c.mul(&dd.mul(&dd)))?
            .scale(&phi.lambda);
        Lbqf::new(idx, a2, b2, c2)
    }

    /// (i, j, k; a, b, c) -> (j, i, k; c, b, a), re-canonicalized.
    pub fn swap_orientation(&self) -> Lbqf {
        let (swapped, _) = Lbqf::canonicalize(
            StratumIndex::new(self.idx.j, self.idx.i, self.idx.k),
            self.c.clone(),
            self.b.clone(),
            self.a.clone(),
        )
        .expect("swap preserves validity");
        swapped
    }

    /// Move to the stratum (i+m, j+m, k-2m); the coefficient slots are
    /// unchanged, so the same forms present the same double cover with the
    /// module degree shifted by 2m.
    pub fn twist(&self, m: i64) -> Lbqf {
        Lbqf {
            idx: StratumIndex::new(self.idx.i + m, self.idx.j + m, self.idx.k - 2 * m),
            a: self.a.clone(),
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }

    /// Membership in the bounded substack: 2i + k >= 0.
    pub fn in_jbd(&self) -> bool {
        2 * self.idx.i + self.idx.k >= 0
    }

    /// Structure constants of tau and tau' = 2tau + b, symbolically and at
    /// an optional point.
    pub fn multiplication_table(&self, q: Option<&ProjPoint>) -> MultTable {
        let field = self.field();
        let two = Scalar::from_i64(field, 2);
        let taup_x = (self.b.neg(), self.c.scale(&two).neg());
        let taup_y = (self.a.scale(&two), self.b.clone());
        let at_point = q.map(|q| {
            let av = self.a.eval(q);
            let bv = self.b.eval(q);
            let cv = self.c.eval(q);
            MultTableAt {
                point: q.clone(),
                taup_x: (taup_x.0.eval(q), taup_x.1.eval(q)),
                taup_y: (taup_y.0.eval(q), taup_y.1.eval(q)),
                annihilates: av.is_zero() && bv.is_zero() && cv.is_zero(),
            }
        });
        MultTable {
            p_identically_zero: self.is_zero(),
            tau_sq_tau: self.b.neg(),
            tau_sq_const: self.a.mul(&self.c).neg(),
            tau_x: (self.b.neg(), self.c.neg()),
            tau_y: (self.a.clone(), BinForm::zero(field, self.idx.slot_c())),
            taup_sq: self.disc_form(),
            taup_x,
            taup_y,
            at_point,
        }
    }

    /// The cover side of the correspondence: genus g with sigma = disc.
    pub fn forget_to_cover(&self) -> Cover {
        Cover::new(self.g(), self.disc_form()).expect("disc slot is 2g+2")
    }
}

/// Predicted verdict for a generic form in the stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericPrediction {
    pub reduced: bool,
    pub integral: bool,
    pub smooth: bool,
    pub line_bundle: bool,
}

/// What a generic form in the stratum looks like, by the strata table.
pub fn generic_stratum_table(idx: StratumIndex) -> Result<GenericPrediction> {
    if !idx.is_canonical() {
        return Err(Error::Precondition(
            "generic_stratum_table needs i <= j".into(),
        ));
    }
    let s = idx.i + idx.j + idx.k;
    let a_live = 2 * idx.i + idx.k >= 0;
    Ok(GenericPrediction {
        reduced: s >= 0,
        integral: s >= 1 && a_live,
        smooth: (s >= 1 && a_live) || s == 0,
        line_bundle: (s < 0 && 2 * idx.j + idx.k == 0) || s >= 0,
    })
}

/// Specialization order on strata with the same k and the same i+j: the
/// splitting type can only become more unbalanced in a limit.
pub fn stratum_specializes(from: StratumIndex, to: StratumIndex) -> bool {
    if from.k != to.k || from.i + from.j != to.i + to.j {
        return false;
    }
    to.i <= from.i
}

/// Symbolic equations cutting out the non-reduced locus (all coefficients
/// of the discriminant) and, for small strata, the non-smooth locus.
#[derive(Debug, Clone)]
pub struct LocusEquations {
    pub ring: PolyRing,
    /// d[l] is the coefficient of s^(D-l) t^l in b^2 - 4ac, D = 2(i+j+k);
    /// the non-reduced locus is d[0] = ... = d[D] = 0.
    pub d: Vec<MPoly>,
    /// disc(disc_p) in the generic coefficients; populated when
    /// 2(i+j+k) <= 6, None above that cap.
    pub nonsmooth: Option<MPoly>,
}

const NONSMOOTH_DEGREE_CAP: i64 = 6;

pub fn locus_equations(idx: StratumIndex) -> Result<LocusEquations> {
    if !idx.is_canonical() {
        return Err(Error::Precondition("locus_equations needs i <= j".into()));
    }
    let mut vars = Vec::new();
    let mut bases = [0usize; 3];
    for (which, (name, slot)) in [
        ("a", idx.slot_a()),
        ("b", idx.slot_b()),
        ("c", idx.slot_c()),
    ]
    .into_iter()
    .enumerate()
    {
        bases[which] = vars.len();
        for l in 0..=slot.max(-1) {
            vars.push(format!("{name}{l}"));
        }
    }
    let ring = PolyRing::new(vars);
    let form = |slot: i64, base: usize| {
        if slot < 0 {
            SymForm::zero(ring.nvars(), slot)
        } else {
            SymForm::generic(&ring, slot, base)
        }
    };
    let a = form(idx.slot_a(), bases[0]);
    let b = form(idx.slot_b(), bases[1]);
    let c = form(idx.slot_c(), bases[2]);
    let disc = b.mul(&b).sub(&a.mul(&c).scale_int(4));
    let d = disc.coeffs.clone();
    let cap = 2 * (idx.i + idx.j + idx.k);
    let nonsmooth = if cap == 0 {
        Some(d[0].clone())
    } else if (2..=NONSMOOTH_DEGREE_CAP).contains(&cap) {
        Some(disc.disc_binform()?)
    } else {
        None
    };
    Ok(LocusEquations { ring, d, nonsmooth })
}

/// The expanded non-smooth equation, failing loudly above the degree cap
/// instead of omitting it.
pub fn nonsmooth_equation(idx: StratumIndex) -> Result<MPoly> {
    let eqs = locus_equations(idx)?;
    eqs.nonsmooth.ok_or_else(|| {
        Error::DegreeCap(format!(
            "disc(disc_p) expansion is capped at discriminant degree {NONSMOOTH_DEGREE_CAP}, \
             stratum has degree {}",
            2 * (idx.i + idx.j + idx.k)
        ))
    })
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Result<Scalar> {
    match field {
        Field::Q => Ok(Scalar::from_i64(field, rng.gen_range(-9..=9))),
        Field::Fp(p) => Ok(Scalar::from_i64(field, rng.gen_range(0..p) as i64)),
        Field::Laurent(_) => Err(Error::LaurentUnsupported),
    }
}

pub fn random_binform(field: Field, slot: i64, rng: &mut ChaCha8Rng) -> Result<BinForm> {
    if slot < 0 {
        return Ok(BinForm::zero(field, slot));
    }
    let coeffs: Result<Vec<Scalar>> =
        (0..=slot).map(|_| random_scalar(field, rng)).collect();
    BinForm::new(field, slot, coeffs?)
}

/// Uniform coefficients: integers in [-9, 9] over Q, all residues over F_p.
/// Deterministic for a fixed generator state.
pub fn random_form(idx: StratumIndex, field: Field, rng: &mut ChaCha8Rng) -> Result<Lbqf> {
    let a = random_binform(field, idx.slot_a(), rng)?;
    let b = random_binform(field, idx.slot_b(), rng)?;
    let c = random_binform(field, idx.slot_c(), rng)?;
    Lbqf::new(idx, a, b, c)
}

/// A random invertible automorphism for the stratum.
pub fn random_automorphism(
    idx: StratumIndex,
    field: Field,
    rng: &mut ChaCha8Rng,
) -> Result<Automorphism> {
    let nonzero = |rng: &mut ChaCha8Rng| -> Result<Scalar> {
        loop {
            let s = random_scalar(field, rng)?;
            if !s.is_zero() {
                return Ok(s);
            }
        }
    };
    let r = nonzero(rng)?;
    let w = nonzero(rng)?;
    let lambda = nonzero(rng)?;
    let u = random_binform(field, idx.j - idx.i, rng)?;
    let mut phi = Automorphism {
        r,
        u,
        lower: None,
        w,
        lambda,
    };
    if idx.i == idx.j && rng.gen_bool(0.5) {
        loop {
            let lo = random_scalar(field, rng)?;
            phi.lower = Some(lo);
            if !phi.det().is_zero() {
                break;
            }
        }
    }
    Ok(phi)
}
