//! Deterministic property suites: each suite draws seeded random instances,
//! checks exact identities, and reports a pass/fail count.  The extension
//! field oracle here is the independent cross-check for the gcd-based
//! classification criteria.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::binform::BinForm;
use crate::error::Result;
use crate::hirzebruch::{
    adjunction_genus, bidegree, bidegree_bound_holds, curve_class,
    factor_if_reducible, pair, DivClass, SurfaceCtx,
};
use crate::lbqf::{
    generic_stratum_table, random_automorphism, random_binform, random_form,
    random_scalar, seeded_rng, stratum_specializes, Lbqf, StratumIndex,
};
use crate::limits::clear_and_specialize;
use crate::picard::{
    disc_weight_verify, discdisc_weight_verify, pic, AbGroupDesc, StackId,
};
use crate::scalars::{BaseTag, Field, Scalar};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            name: name.to_string(),
            checks: 0,
            failures: 0,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.notes.len() < 10 {
                self.notes.push(note());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The strata whose three coefficient slots all lie in 0..=4; small enough
/// that every closure root of a coefficient form lives in a degree <= 4
/// extension, which is what the exhaustive oracle scans.
pub const ORACLE_STRATA: [(i64, i64, i64); 12] = [
    (0, 0, 0),
    (0, 0, 1),
    (0, 0, 2),
    (0, 0, 3),
    (0, 0, 4),
    (0, 1, 0),
    (0, 1, 1),
    (0, 1, 2),
    (0, 2, 0),
    (1, 1, 0),
    (1, 1, 1),
    (1, 1, 2),
];

fn base_fields() -> Vec<Field> {
    vec![Field::Q, Field::fp(5).unwrap(), Field::fp(101).unwrap()]
}

fn rand_nonzero_binform(
    field: Field,
    slot: i64,
    rng: &mut ChaCha8Rng,
) -> Result<BinForm> {
    loop {
        let f = random_binform(field, slot, rng)?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

fn random_laurent_scalar(base: BaseTag, rng: &mut ChaCha8Rng) -> Scalar {
    let field = Field::laurent(base).unwrap();
    let base_field = match base {
        BaseTag::Q => Field::Q,
        BaseTag::Fp(p) => Field::Fp(p),
    };
    let mut acc = Scalar::zero(field);
    for _ in 0..rng.gen_range(0..=3) {
        let c = random_scalar(base_field, rng).unwrap();
        let k = rng.gen_range(-3..=3);
        acc = acc.add(&Scalar::laurent_monomial(base, k, c));
    }
    acc
}

// ---------------------------------------------------------------------------
// scalar arithmetic

pub fn scalar_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("scalars");
    let mut rng = seeded_rng(seed);
    for field in base_fields() {
        for _ in 0..trials {
            let x = random_scalar(field, &mut rng)?;
            let y = random_scalar(field, &mut rng)?;
            let z = random_scalar(field, &mut rng)?;
            let assoc = x.add(&y).add(&z) == x.add(&y.add(&z))
                && x.mul(&y).mul(&z) == x.mul(&y.mul(&z));
            rep.check(assoc, || format!("associativity over {field}"));
            let dist = x.mul(&y.add(&z)) == x.mul(&y).add(&x.mul(&z));
            rep.check(dist, || format!("distributivity over {field}"));
            if !x.is_zero() {
                rep.check(x.mul(&x.inv()?).is_one(), || {
                    format!("x * inv(x) over {field}")
                });
            }
        }
    }
    // Laurent scalars: ring laws and valuation additivity.
    for _ in 0..trials {
        let x = random_laurent_scalar(BaseTag::Q, &mut rng);
        let y = random_laurent_scalar(BaseTag::Q, &mut rng);
        let z = random_laurent_scalar(BaseTag::Q, &mut rng);
        rep.check(
            x.mul(&y.add(&z)) == x.mul(&y).add(&x.mul(&z)),
            || "Laurent distributivity".into(),
        );
        if !x.is_zero() && !y.is_zero() {
            let vx = x.valuation()?.unwrap();
            let vy = y.valuation()?.unwrap();
            rep.check(
                x.mul(&y).valuation()? == Some(vx + vy),
                || "Laurent valuation additivity".into(),
            );
        }
    }
    // is_square against exhaustive enumeration of squares, all odd p <= 50.
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let field = Field::fp(p)?;
        let mut squares = vec![false; p as usize];
        for v in 0..p {
            squares[(v * v % p) as usize] = true;
        }
        for v in 0..p {
            let s = Scalar::from_i64(field, v as i64);
            rep.check(s.is_square()? == squares[v as usize], || {
                format!("is_square({v}) over F{p}")
            });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// binary form algebra

pub fn form_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("forms");
    let mut rng = seeded_rng(seed);
    // resultant vanishes exactly on pairs with a common factor
    for field in base_fields() {
        for _ in 0..trials {
            let mut f = rand_nonzero_binform(field, rng.gen_range(1..=4), &mut rng)?;
            let mut g = rand_nonzero_binform(field, rng.gen_range(1..=4), &mut rng)?;
            if rng.gen_bool(0.5) {
                let common = rand_nonzero_binform(field, 1, &mut rng)?;
                f = f.mul(&common);
                g = g.mul(&common);
            }
            let res = f.resultant(&g)?;
            let gcd = f.gcd(&g)?;
            rep.check(res.is_zero() == (gcd.slot() >= 1), || {
                format!("resultant vs gcd over {field}: f={f}, g={g}")
            });
        }
    }
    // disc vanishes exactly when gcd(F, F_s) is nonconstant
    for field in [Field::Q, Field::fp(101).unwrap()] {
        for _ in 0..trials {
            let mut f = rand_nonzero_binform(field, rng.gen_range(2..=6), &mut rng)?;
            if rng.gen_bool(0.5) {
                let lin = rand_nonzero_binform(field, 1, &mut rng)?;
                f = f.mul(&lin).mul(&lin);
            }
            let disc = f.disc_binform()?;
            // repeated closure root iff the partials share a root
            let fs = f.deriv_s()?;
            let ft = f.deriv_t()?;
            let repeated = if fs.is_zero() || ft.is_zero() {
                true
            } else {
                fs.gcd(&ft)?.slot() >= 1
            };
            rep.check(disc.is_zero() == repeated, || {
                format!("disc vs gcd(F_s, F_t) over {field}: f={f}")
            });
            // and iff the squarefree decomposition shows multiplicity >= 2
            let parts = f.squarefree_parts()?;
            let multiple = parts.s_power >= 2
                || parts.t_power >= 2
                || parts.factors.iter().any(|(_, m)| *m >= 2);
            rep.check(disc.is_zero() == multiple, || {
                format!("disc vs squarefree parts over {field}: f={f}")
            });
        }
    }
    // square recognition: exact on constructed squares and non-squares
    for (field, hmax) in [
        (Field::Q, 4i64),
        (Field::fp(7).unwrap(), 2),
        (Field::fp(101).unwrap(), 4),
    ] {
        let nonsquare = match field {
            Field::Q => Scalar::from_i64(field, 2),
            Field::Fp(p) => (1..p)
                .map(|v| Scalar::from_i64(field, v as i64))
                .find(|s| !s.is_square().unwrap())
                .unwrap(),
            Field::Laurent(_) => unreachable!(),
        };
        for _ in 0..trials {
            let h = rand_nonzero_binform(field, rng.gen_range(1..=hmax), &mut rng)?;
            let sq = h.mul(&h);
            match sq.is_square()? {
                Some(g) => rep.check(g.mul(&g) == sq, || {
                    format!("square root fails to reconstruct {sq} over {field}")
                }),
                None => rep.check(false, || {
                    format!("missed square {sq} over {field}")
                }),
            }
            // odd-multiplicity factor: multiply by a verified squarefree form
            let e = loop {
                let e = rand_nonzero_binform(field, rng.gen_range(1..=2), &mut rng)?;
                let es = e.deriv_s()?;
                let sf = if es.is_zero() {
                    e.slot() == 1 && !e.coeff(0).is_zero()
                } else {
                    e.gcd(&es)?.slot() == 0
                };
                if sf {
                    break e;
                }
            };
            rep.check(sq.mul(&e).is_square()?.is_none(), || {
                format!("false square {} over {field}", sq.mul(&e))
            });
            // non-square scalar unit
            rep.check(sq.scale(&nonsquare).is_square()?.is_none(), || {
                format!("false square unit*{sq} over {field}")
            });
        }
    }
    // homogeneity: disc(lambda F) = lambda^(2d-2) disc(F)
    for field in base_fields() {
        for _ in 0..trials {
            let d = rng.gen_range(2..=6);
            let f = rand_nonzero_binform(field, d, &mut rng)?;
            let lam = loop {
                let l = random_scalar(field, &mut rng)?;
                if !l.is_zero() {
                    break l;
                }
            };
            let lhs = f.scale(&lam).disc_binform()?;
            let rhs = lam.pow((2 * d - 2) as u32).mul(&f.disc_binform()?);
            rep.check(lhs == rhs, || {
                format!("disc homogeneity over {field}: f={f}")
            });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// extension field F_{p^m} (test oracle only: brute-force modulus search,
// elements as coefficient vectors)

struct ExtField {
    p: u64,
    m: usize,
    red: Vec<u64>, // x^m = -red (lower coefficients of the monic modulus)
    elements: Vec<Vec<u64>>,
}

fn upoly_rem_mod(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    // g monic
    let dg = g.len() - 1;
    let mut r: Vec<u64> = f.to_vec();
    while r.len() > dg {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dg;
        if lead != 0 {
            for t in 0..dg {
                r[shift + t] = (r[shift + t] + (p - g[t]) * lead) % p;
            }
        }
        r.pop();
    }
    r
}

fn is_irreducible_mod(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = decode_poly(code, p, d);
            g.push(1);
            let r = upoly_rem_mod(f, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn decode_poly(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

impl ExtField {
    fn new(p: u64, m: usize) -> ExtField {
        let count = p.pow(m as u32);
        let red = (0..count)
            .map(|code| decode_poly(code, p, m))
            .find(|lower| {
                let mut f = lower.clone();
                f.push(1);
                is_irreducible_mod(&f, p)
            })
            .expect("no irreducible polynomial found");
        let elements = (0..count).map(|code| decode_poly(code, p, m)).collect();
        ExtField { p, m, red, elements }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut buf = vec![0u64; 2 * self.m - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                buf[i + j] = (buf[i + j] + ai * bj) % p;
            }
        }
        for idx in (self.m..buf.len()).rev() {
            let c = buf[idx];
            if c != 0 {
                buf[idx] = 0;
                for t in 0..self.m {
                    buf[idx - self.m + t] =
                        (buf[idx - self.m + t] + (p - self.red[t]) * c) % p;
                }
            }
        }
        buf.truncate(self.m);
        buf
    }

    /// Evaluate a form (coefficient l multiplies s^(d-l) t^l) at [z : 1].
    fn eval_form(&self, coeffs: &[u64], z: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.m];
        for &c in coeffs {
            acc = self.mul(&acc, z);
            acc[0] = (acc[0] + c) % self.p;
        }
        acc
    }
}

fn form_to_u64s(f: &BinForm) -> Vec<u64> {
    f.coeffs()
        .iter()
        .map(|s| match s {
            Scalar::Fp(e) => e.v,
            _ => panic!("oracle needs prime-field coefficients"),
        })
        .collect()
}

/// Do the given nonzero forms share a projective root over the algebraic
/// closure, assuming every closure root lives in degree <= 4?  Scans
/// P^1(F_{p^3}) and P^1(F_{p^4}), which contain F_{p^m} for all m <= 4.
fn common_root_over_closure(exts: &[ExtField], forms: &[Vec<u64>]) -> bool {
    if forms.iter().all(|f| f[0] == 0) {
        return true; // [1 : 0]
    }
    for ext in exts {
        'points: for z in &ext.elements {
            for f in forms {
                if ext.eval_form(f, z).iter().any(|&c| c != 0) {
                    continue 'points;
                }
            }
            return true;
        }
    }
    false
}

/// Pair-level oracle: gcd(F, G) nonconstant iff F and G share a closure
/// root, checked exhaustively over extensions of degree <= 4.
pub fn pair_oracle_suite(p: u64, pairs: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(&format!("oracle-pairs-F{p}"));
    let field = Field::fp(p)?;
    let mut rng = seeded_rng(seed);
    let exts = [ExtField::new(p, 4), ExtField::new(p, 3)];
    for _ in 0..pairs {
        let mut f = rand_nonzero_binform(field, rng.gen_range(1..=4), &mut rng)?;
        let mut g = rand_nonzero_binform(field, rng.gen_range(1..=4), &mut rng)?;
        if rng.gen_bool(0.4) {
            let common = rand_nonzero_binform(field, rng.gen_range(1..=2), &mut rng)?;
            f = f.mul(&common);
            g = g.mul(&common);
        }
        if f.slot() > 4 || g.slot() > 4 {
            // keep every closure root within degree 4
            continue;
        }
        let by_gcd = f.gcd(&g)?.slot() >= 1;
        let by_scan = common_root_over_closure(
            &exts,
            &[form_to_u64s(&f), form_to_u64s(&g)],
        );
        rep.check(by_gcd == by_scan, || format!("f={f}, g={g} over F{p}"));
    }
    Ok(rep)
}

/// Classification oracle: the gcd-based line-bundle test against exhaustive
/// common-root search, and squareness-based integrality against the
/// factorization route, per stratum.
pub fn classification_oracle_suite(
    p: u64,
    per_stratum: u64,
    seed: u64,
) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new(&format!("oracle-classify-F{p}"));
    let field = Field::fp(p)?;
    let mut rng = seeded_rng(seed);
    let exts = [ExtField::new(p, 4), ExtField::new(p, 3)];
    for (i, j, k) in ORACLE_STRATA {
        let idx = StratumIndex::new(i, j, k);
        for _ in 0..per_stratum {
            let l = random_form(idx, field, &mut rng)?;
            let cls = l.classify()?;
            let nonzero: Vec<Vec<u64>> = [l.a(), l.b(), l.c()]
                .into_iter()
                .filter(|f| !f.is_zero())
                .map(form_to_u64s)
                .collect();
            let lb_oracle = if nonzero.is_empty() {
                false // p identically zero
            } else {
                !common_root_over_closure(&exts, &nonzero)
            };
            rep.check(cls.line_bundle == lb_oracle, || {
                format!(
                    "line_bundle mismatch at ({i},{j},{k}): a={}, b={}, c={}",
                    l.a(),
                    l.b(),
                    l.c()
                )
            });
            if cls.reduced {
                let irr = l.irreducibility_crosscheck()?;
                rep.check(cls.integral == irr, || {
                    format!(
                        "integral vs irreducible at ({i},{j},{k}): a={}, b={}, c={}",
                        l.a(),
                        l.b(),
                        l.c()
                    )
                });
            }
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// covers

pub fn cover_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("covers");
    let mut rng = seeded_rng(seed);
    for field in [Field::Q, Field::fp(101).unwrap()] {
        for _ in 0..trials {
            let (i, j, k) = ORACLE_STRATA[rng.gen_range(0..ORACLE_STRATA.len())];
            let l = random_form(StratumIndex::new(i, j, k), field, &mut rng)?;
            let cls = l.classify()?;
            let cover = l.forget_to_cover();
            let ccls = cover.classify()?;
            rep.check(
                (cls.reduced, cls.integral, cls.smooth)
                    == (ccls.reduced, ccls.integral, ccls.smooth),
                || format!("cover vs form classification over {field}"),
            );
            if !cover.sigma().is_zero() {
                let ram = cover.ramification()?;
                let total: i64 = ram.iter().map(|(f, m)| f.slot() * m).sum();
                rep.check(total == cover.sigma().slot(), || {
                    format!("ramification degree sum for {}", cover.sigma())
                });
                let squarefree = ram.iter().all(|(_, m)| *m == 1);
                let smooth_by_mult =
                    cover.sigma().slot() == 0 || squarefree;
                rep.check(ccls.smooth == smooth_by_mult, || {
                    format!("smooth vs multiplicities for {}", cover.sigma())
                });
            }
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// group action

pub fn group_action_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("group-action");
    let mut rng = seeded_rng(seed);
    for field in base_fields() {
        for _ in 0..trials {
            let (i, j, k) = ORACLE_STRATA[rng.gen_range(0..ORACLE_STRATA.len())];
            let idx = StratumIndex::new(i, j, k);
            let l = random_form(idx, field, &mut rng)?;
            let phi = random_automorphism(idx, field, &mut rng)?;
            let l2 = l.apply_automorphism(&phi)?;
            let c1 = l.classify()?;
            let c2 = l2.classify()?;
            rep.check(
                (c1.reduced, c1.integral, c1.smooth, c1.line_bundle)
                    == (c2.reduced, c2.integral, c2.smooth, c2.line_bundle),
                || format!("classification changed under automorphism over {field}"),
            );
            rep.check(c1.bad_fiber_factor == c2.bad_fiber_factor, || {
                format!("bad fiber locus moved under automorphism over {field}")
            });
            let factor = phi.lambda.pow(2).mul(&phi.det().pow(2));
            rep.check(
                l2.disc_form() == l.disc_form().scale(&factor),
                || format!("discriminant equivariance over {field}"),
            );
            // twisting: same genus and discriminant, n shifted by 2m
            let m = rng.gen_range(-2..=2);
            let t = l.twist(m);
            let ct = t.classify()?;
            rep.check(
                t.g() == l.g()
                    && t.n() == l.n() + 2 * m
                    && t.disc_form() == l.disc_form()
                    && (ct.reduced, ct.integral, ct.smooth, ct.line_bundle)
                        == (c1.reduced, c1.integral, c1.smooth, c1.line_bundle),
                || format!("twist invariance over {field}"),
            );
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// intersection theory

pub fn adjunction_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("adjunction");
    for i in -8..=8 {
        for j in i..=8 {
            let ctx = SurfaceCtx::new(i, j)?;
            for k in -10..=10 {
                let idx = StratumIndex::new(i, j, k);
                let c = curve_class(idx);
                rep.check(adjunction_genus(ctx, c) == i + j + k - 1, || {
                    format!("adjunction at ({i},{j},{k})")
                });
            }
        }
    }
    // pairing is symmetric and bilinear
    let mut rng = seeded_rng(17);
    for _ in 0..1000 {
        let i = rng.gen_range(-4..=4);
        let j = rng.gen_range(i..=4);
        let ctx = SurfaceCtx::new(i, j)?;
        let rand_class = |rng: &mut ChaCha8Rng| DivClass {
            h: rng.gen_range(-5..=5),
            v: rng.gen_range(-5..=5),
        };
        let a = rand_class(&mut rng);
        let b = rand_class(&mut rng);
        let c = rand_class(&mut rng);
        rep.check(pair(ctx, a, b) == pair(ctx, b, a), || "pair symmetry".into());
        let sum = DivClass {
            h: b.h + c.h,
            v: b.v + c.v,
        };
        rep.check(
            pair(ctx, a, sum) == pair(ctx, a, b) + pair(ctx, a, c),
            || "pair bilinearity".into(),
        );
    }
    Ok(rep)
}

fn random_reducible(
    field: Field,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Lbqf>> {
    // a stratum inside the bounded locus, with n >= 2
    let i = rng.gen_range(-2..=2);
    let j = rng.gen_range(i..=3);
    let kmin = (-2 * i).max(2 - 2 * i - 2 * j);
    if kmin > 6 {
        return Ok(None);
    }
    let k = rng.gen_range(kmin..=6);
    let idx = StratumIndex::new(i, j, k);
    let n = idx.n();
    if n - i < i {
        return Ok(None);
    }
    let e1 = rng.gen_range(i..=n - i);
    let e2 = n - e1;
    let factor = |e: i64, rng: &mut ChaCha8Rng| -> Result<(BinForm, BinForm)> {
        loop {
            let alpha = random_binform(field, e - j, rng)?;
            let beta = random_binform(field, e - i, rng)?;
            if !alpha.is_zero() || !beta.is_zero() {
                return Ok((alpha, beta));
            }
        }
    };
    let (a1, b1) = factor(e1, rng)?;
    let (a2, b2) = factor(e2, rng)?;
    let a = a1.mul(&a2);
    let b = a1.mul(&b2).add(&a2.mul(&b1))?;
    let c = b1.mul(&b2);
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(None);
    }
    Ok(Some(Lbqf::new(idx, a, b, c)?))
}

/// Bidegrees of constructed reducible forms inside the bounded locus all
/// satisfy the lower bound, and factorization round-trips exactly.
pub fn reducible_bound_suite(count: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("bidegree-bound");
    let mut rng = seeded_rng(seed);
    for field in [Field::Q, Field::fp(101).unwrap()] {
        let mut accepted = 0u64;
        let mut attempts = 0u64;
        while accepted < count && attempts < count * 200 {
            attempts += 1;
            let l = match random_reducible(field, &mut rng)? {
                Some(l) => l,
                None => continue,
            };
            let cls = l.classify()?;
            if !cls.reduced || !cls.line_bundle {
                continue;
            }
            accepted += 1;
            let factors = factor_if_reducible(&l)?;
            rep.check(factors.is_some(), || {
                format!("constructed reducible form not recognized over {field}")
            });
            if let Some((f1, f2)) = factors {
                rep.check(f1.e >= l.idx().i && f2.e >= l.idx().i, || {
                    format!("component degree below i over {field}")
                });
            }
            let (d1, d2) = bidegree(&l)?;
            rep.check(d1 + d2 == l.n(), || format!("bidegree sum over {field}"));
            rep.check(bidegree_bound_holds(d1, l.g(), l.n()), || {
                format!(
                    "bound violated in bounded locus over {field}: d=({d1},{d2}), g={}, n={}",
                    l.g(),
                    l.n()
                )
            });
        }
        rep.check(accepted == count, || {
            format!("only {accepted}/{count} reducible samples over {field}")
        });
        // on random reduced line-bundle forms, factorization failure is
        // exactly integrality
        for _ in 0..count / 2 {
            let (i, j, k) = ORACLE_STRATA[rng.gen_range(0..ORACLE_STRATA.len())];
            let l = random_form(StratumIndex::new(i, j, k), field, &mut rng)?;
            let cls = l.classify()?;
            if !cls.reduced || !cls.line_bundle {
                continue;
            }
            let irreducible = factor_if_reducible(&l)?.is_none();
            rep.check(cls.integral == irreducible, || {
                format!("integral vs factorization over {field}")
            });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// strata

struct StratumCase {
    idx: (i64, i64, i64),
    forced_not_integral: bool,
    forced_not_reduced: bool,
}

const fn case(
    idx: (i64, i64, i64),
    forced_not_integral: bool,
    forced_not_reduced: bool,
) -> StratumCase {
    StratumCase {
        idx,
        forced_not_integral,
        forced_not_reduced,
    }
}

/// Strata sampled for the generic-classification table; the forced flags
/// mark predictions that hold for every form, not just generically
/// (disc = b^2 is always a square; a = b = 0 forces disc = 0).
const TABLE_STRATA: [StratumCase; 12] = [
    case((1, 1, -1), false, false),
    case((0, 0, 2), false, false),
    case((0, 1, 1), false, false),
    case((1, 2, 1), false, false),
    case((2, 2, -2), false, false),
    case((0, 0, 4), false, false),
    case((-1, 6, 0), true, false),
    case((-2, 3, 1), true, false),
    case((0, 2, -1), true, false),
    case((0, 3, -2), true, false),
    case((-3, 1, -2), true, true),
    case((-2, 1, -1), true, true),
];

pub fn strata_table_suite(per_stratum: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("strata-table");
    let field = Field::fp(101)?;
    let mut rng = seeded_rng(seed);
    for sc in &TABLE_STRATA {
        let (i, j, k) = sc.idx;
        let idx = StratumIndex::new(i, j, k);
        let pred = generic_stratum_table(idx)?;
        let mut matched = 0u64;
        for _ in 0..per_stratum {
            let l = random_form(idx, field, &mut rng)?;
            let cls = l.classify()?;
            if (cls.reduced, cls.integral, cls.smooth, cls.line_bundle)
                == (pred.reduced, pred.integral, pred.smooth, pred.line_bundle)
            {
                matched += 1;
            }
            if sc.forced_not_integral {
                rep.check(!cls.integral, || {
                    format!("integral form in stratum ({i},{j},{k})")
                });
            }
            if sc.forced_not_reduced {
                rep.check(!cls.reduced, || {
                    format!("reduced form in stratum ({i},{j},{k})")
                });
            }
        }
        rep.check(matched >= per_stratum * 19 / 20, || {
            format!(
                "generic table matched only {matched}/{per_stratum} at ({i},{j},{k})"
            )
        });
    }
    Ok(rep)
}

pub fn strata_order_suite() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("strata-order");
    // the d = 4 chain: P_2 > P_1 > P_0 > P_{-1} > ...
    let chain: Vec<StratumIndex> = (-10..=2)
        .rev()
        .map(|i| StratumIndex::new(i, 4 - i, 0))
        .collect();
    for (pos_from, from) in chain.iter().enumerate() {
        for (pos_to, to) in chain.iter().enumerate() {
            let expect = pos_to >= pos_from; // lower i is deeper
            rep.check(stratum_specializes(*from, *to) == expect, || {
                format!("chain relation {from:?} -> {to:?}")
            });
        }
    }
    // reflexive, antisymmetric, transitive over a mixed family
    let mut all: Vec<StratumIndex> = chain.clone();
    all.extend((-10..=2).map(|i| StratumIndex::new(i, 4 - i, 1)));
    all.extend((-10..=2).map(|i| StratumIndex::new(i, 5 - i, 0)));
    for a in &all {
        rep.check(stratum_specializes(*a, *a), || format!("reflexivity {a:?}"));
        for b in &all {
            if stratum_specializes(*a, *b) && stratum_specializes(*b, *a) {
                rep.check(a == b, || format!("antisymmetry {a:?} {b:?}"));
            }
            for c in &all {
                if stratum_specializes(*a, *b) && stratum_specializes(*b, *c) {
                    rep.check(stratum_specializes(*a, *c), || {
                        format!("transitivity {a:?} {b:?} {c:?}")
                    });
                }
            }
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// limits

pub fn limit_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("limits");
    let mut rng = seeded_rng(seed);
    for base in [BaseTag::Q, BaseTag::Fp(101)] {
        let field = Field::laurent(base).unwrap();
        for _ in 0..trials {
            let (i, j, k) = ORACLE_STRATA[rng.gen_range(0..ORACLE_STRATA.len())];
            let idx = StratumIndex::new(i, j, k);
            let family = loop {
                let mk = |slot: i64, rng: &mut ChaCha8Rng| -> Result<BinForm> {
                    if slot < 0 {
                        return Ok(BinForm::zero(field, slot));
                    }
                    let coeffs = (0..=slot)
                        .map(|_| Ok(random_laurent_scalar(base, rng)))
                        .collect::<Result<Vec<_>>>()?;
                    BinForm::new(field, slot, coeffs)
                };
                let l = Lbqf::new(
                    idx,
                    mk(idx.slot_a(), &mut rng)?,
                    mk(idx.slot_b(), &mut rng)?,
                    mk(idx.slot_c(), &mut rng)?,
                )?;
                if !l.is_zero() {
                    break l;
                }
            };
            let (limit, v) = clear_and_specialize(&family)?;
            rep.check(!limit.is_zero(), || "zero limit".into());
            rep.check(
                limit.idx() == family.idx(),
                || "limit left the stratum".into(),
            );
            // invariance under an overall power of the uniformizer
            let m = rng.gen_range(-2..=3);
            let shift = Scalar::laurent_monomial(
                base,
                m,
                Scalar::one(field.base_field()),
            );
            let scaled = Lbqf::new(
                idx,
                family.a().scale(&shift),
                family.b().scale(&shift),
                family.c().scale(&shift),
            )?;
            let (limit2, v2) = clear_and_specialize(&scaled)?;
            rep.check(limit2 == limit && v2 == v + m, || {
                "limit not invariant under e^m".into()
            });
            // discriminant commutes with specialization after clearing
            let fam_disc = family.disc_form();
            let cleared_disc = BinForm::new(
                field,
                fam_disc.slot(),
                fam_disc
                    .coeffs()
                    .iter()
                    .map(|c| c.laurent_shift(-2 * v))
                    .collect::<Result<Vec<_>>>()?,
            )?;
            let specialized = BinForm::new(
                field.base_field(),
                cleared_disc.slot(),
                cleared_disc
                    .coeffs()
                    .iter()
                    .map(|c| c.laurent_at_zero())
                    .collect::<Result<Vec<_>>>()?,
            )?;
            rep.check(specialized == limit.disc_form(), || {
                "disc does not commute with specialization".into()
            });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Picard groups

pub fn picard_suite(trials: u64, seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("picard");
    for g in 0..=3 {
        rep.check(
            pic(StackId::CoversBar { g })? == AbGroupDesc::free(1),
            || format!("covers stack at g={g}"),
        );
        rep.check(
            pic(StackId::Hurwitz { g })?
                == AbGroupDesc::with_torsion(0, vec![(8 * g + 4) as u64]),
            || format!("Hurwitz stack at g={g}"),
        );
    }
    rep.check(
        pic(StackId::Stratum { i: 0, j: 1, k: 1 })? == AbGroupDesc::free(3),
        || "split stratum i != j".into(),
    );
    rep.check(
        pic(StackId::Stratum { i: 1, j: 1, k: 0 })? == AbGroupDesc::free(2),
        || "balanced stratum i = j".into(),
    );
    for (g, n) in [(1i64, 3i64), (2, 4), (3, 5)] {
        rep.check(
            pic(StackId::JbdBar { g, n })? == AbGroupDesc::free(3),
            || format!("bounded compactification at (g,n)=({g},{n})"),
        );
        rep.check(
            pic(StackId::JUniversal { g, n })?
                == AbGroupDesc::with_torsion(2, vec![(8 * g + 4) as u64]),
            || format!("universal Jacobian at (g,n)=({g},{n})"),
        );
    }
    let mut rng = seeded_rng(seed);
    for g in 0..=3 {
        for field in [Field::Q, Field::fp(101).unwrap()] {
            let w = disc_weight_verify(g, field, trials as u32, &mut rng)?;
            rep.check(
                w.passed()
                    && w.exponent == 4 * g + 2
                    && w.character_weight == 8 * g + 4,
                || format!("disc weight at g={g} over {field}"),
            );
        }
    }
    for (i, j, k) in [(0i64, 0i64, 2i64), (0, 1, 1), (1, 1, 2)] {
        let idx = StratumIndex::new(i, j, k);
        for field in [Field::Q, Field::fp(101).unwrap()] {
            let w = discdisc_weight_verify(idx, field, trials as u32, &mut rng)?;
            let g = idx.g();
            rep.check(w.passed() && w.exponent == 2 * (4 * g + 2), || {
                format!("disc-of-disc weight at ({i},{j},{k}) over {field}")
            });
        }
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------

/// Every suite with its default sizes; `trials` rescales the per-suite
/// sample counts when given.
pub fn run_all(seed: u64, trials: Option<u64>) -> Result<Vec<SuiteReport>> {
    let t = |default: u64| trials.unwrap_or(default);
    let mut out = Vec::new();
    out.push(scalar_suite(t(1000), seed)?);
    out.push(form_suite(t(500), seed.wrapping_add(1))?);
    for p in [5, 7, 11] {
        out.push(pair_oracle_suite(p, t(200), seed.wrapping_add(2))?);
    }
    for p in [5, 7] {
        out.push(classification_oracle_suite(p, t(200), seed.wrapping_add(3))?);
    }
    out.push(cover_suite(t(300), seed.wrapping_add(4))?);
    out.push(group_action_suite(t(300), seed.wrapping_add(5))?);
    out.push(adjunction_suite()?);
    out.push(reducible_bound_suite(t(500), seed.wrapping_add(6))?);
    out.push(strata_table_suite(t(500), seed.wrapping_add(7))?);
    out.push(strata_order_suite()?);
    out.push(limit_suite(t(200), seed.wrapping_add(8))?);
    out.push(picard_suite(t(50), seed.wrapping_add(9))?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extension_field_is_a_field() {
        let ext = ExtField::new(5, 3);
        assert_eq!(ext.elements.len(), 125);
        // Frobenius orbit check: x^(p^m) = x for every element
        for z in &ext.elements {
            let mut w = z.clone();
            for _ in 0..3 {
                // w = w^5
                let sq = ext.mul(&w, &w);
                let fourth = ext.mul(&sq, &sq);
                w = ext.mul(&fourth, &w);
            }
            assert_eq!(&w, z);
        }
    }

    #[test]
    fn small_suites_pass() {
        for rep in [
            scalar_suite(40, 11).unwrap(),
            form_suite(40, 11).unwrap(),
            pair_oracle_suite(5, 40, 11).unwrap(),
            cover_suite(40, 11).unwrap(),
            group_action_suite(40, 11).unwrap(),
            reducible_bound_suite(40, 11).unwrap(),
            strata_table_suite(100, 11).unwrap(),
            strata_order_suite().unwrap(),
            limit_suite(20, 11).unwrap(),
            picard_suite(10, 11).unwrap(),
        ] {
            assert!(rep.passed(), "{}: {:?}", rep.name, rep.notes);
        }
    }
}
