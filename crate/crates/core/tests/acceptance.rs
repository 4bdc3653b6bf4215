//! End-to-end acceptance gate: every concrete worked example plus the
//! property suites, one printed pass/fail line each.

use binquad::binform::BinForm;
use binquad::hirzebruch::{bidegree, bidegree_bound_holds, caporaso_check};
use binquad::lbqf::{Lbqf, StratumIndex};
use binquad::limits::classify_limit;
use binquad::parse::{parse_field, parse_form};
use binquad::scalars::Field;
use binquad::verify;

type Check = std::result::Result<(), String>;

fn form(text: &str, field: Field, slot: i64) -> BinForm {
    parse_form(text, field, slot, "form").unwrap()
}

fn expect(ok: bool, msg: &str) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn suite(rep: verify::SuiteReport) -> Check {
    expect(
        rep.passed(),
        &format!("{}: {}/{} failed {:?}", rep.name, rep.failures, rep.checks, rep.notes),
    )
}

/// Genus-3 curve with a degree-7 line bundle.
fn genus3_line_bundle() -> Check {
    let q = Field::Q;
    let l = Lbqf::new(
        StratumIndex::new(0, 3, 1),
        form("s", q, 1),
        form("s^4+t^4", q, 4),
        form("s*t^6+t^7", q, 7),
    )
    .map_err(|e| e.to_string())?;
    expect(l.g() == 3, "genus is not 3")?;
    expect(l.n() == 7, "degree is not 7")?;
    let cls = l.classify().map_err(|e| e.to_string())?;
    expect(cls.line_bundle, "not a line bundle")?;
    expect(cls.reduced && cls.integral && cls.smooth, "curve not smooth")
}

/// Two-component curve with unbalanced bidegree (-1, 11), outside the
/// bounded locus.
fn unbalanced_bidegree() -> Check {
    let q = Field::Q;
    let idx = StratumIndex::new(-1, 6, 0);
    let l = Lbqf::new(
        idx,
        BinForm::zero(q, idx.slot_a()),
        form("s^5", q, 5),
        form("t^12", q, 12),
    )
    .map_err(|e| e.to_string())?;
    expect(l.disc_form() == form("s^10", q, 10), "disc is not s^10")?;
    let cls = l.classify().map_err(|e| e.to_string())?;
    expect(
        cls.reduced && !cls.integral && !cls.smooth && cls.line_bundle,
        "classification mismatch",
    )?;
    let (d1, d2) = bidegree(&l).map_err(|e| e.to_string())?;
    expect((d1, d2) == (-1, 11), &format!("bidegree ({d1},{d2})"))?;
    expect(!l.in_jbd(), "claims bounded-locus membership")?;
    expect(!caporaso_check(d1, d2, l.g(), l.n()), "Caporaso check passed")
}

/// The low-genus worked examples: P^1 with O(3) and its twists, a bad
/// fiber at [0:1], and a smooth genus 1 curve.
fn small_strata_examples() -> Check {
    let q = Field::Q;
    let idx = StratumIndex::new(1, 1, -1);
    let l = Lbqf::new(
        idx,
        form("s", q, 1),
        BinForm::zero(q, 1),
        form("-t", q, 1),
    )
    .map_err(|e| e.to_string())?;
    expect(l.g() == 0 && l.n() == 3, "not (g, n) = (0, 3)")?;
    let cls = l.classify().map_err(|e| e.to_string())?;
    expect(cls.smooth, "rational example not smooth")?;
    // twisting sweeps out all odd degrees 2m+1
    for m in -1..=4 {
        let t = l.twist(m);
        let ct = t.classify().map_err(|e| e.to_string())?;
        expect(
            t.g() == 0 && t.n() == 2 * m + 3 && t.n() % 2 == 1 && ct.smooth,
            "twist does not give O(odd)",
        )?;
    }
    let nodal = Lbqf::new(
        idx,
        form("s", q, 1),
        BinForm::zero(q, 1),
        form("-s", q, 1),
    )
    .map_err(|e| e.to_string())?;
    let ncls = nodal.classify().map_err(|e| e.to_string())?;
    expect(!ncls.line_bundle, "nodal example claims line bundle")?;
    let bad = ncls.bad_fiber_factor.ok_or("no bad fiber factor")?;
    expect(bad == form("s", q, 1), "bad fiber is not exactly [0:1]")?;
    let idx2 = StratumIndex::new(0, 0, 2);
    let g1 = Lbqf::new(
        idx2,
        form("s*t", q, 2),
        form("s^2", q, 2),
        form("t^2", q, 2),
    )
    .map_err(|e| e.to_string())?;
    let gcls = g1.classify().map_err(|e| e.to_string())?;
    expect(gcls.smooth && g1.g() == 1, "genus 1 example not smooth")?;
    expect(
        g1.disc_form() == form("s^4-4*s*t^3", q, 4),
        "genus 1 discriminant mismatch",
    )
}

/// The cuspidal-limit pipeline: family (s^3, e t^3, 1/4 s^2 t) over Q((e)).
fn cusp_limit_pipeline() -> Check {
    let lf = parse_field("Q((e))").map_err(|e| e.to_string())?;
    let idx = StratumIndex::new(0, 0, 3);
    let family = Lbqf::new(
        idx,
        form("s^3", lf, 3),
        form("e*t^3", lf, 3),
        form("1/4*s^2*t", lf, 3),
    )
    .map_err(|e| e.to_string())?;
    let report = classify_limit(&family).map_err(|e| e.to_string())?;
    expect(
        report.family_disc == form("e^2*t^6-s^5*t", lf, 6),
        "family discriminant mismatch",
    )?;
    expect(report.v == 0, "unexpected clearing valuation")?;
    let q = Field::Q;
    expect(
        report.limit.a() == &form("s^3", q, 3)
            && report.limit.b().is_zero()
            && report.limit.c() == &form("1/4*s^2*t", q, 3),
        "limit form mismatch",
    )?;
    expect(
        report.limit.disc_form() == form("-s^5*t", q, 6),
        "limit discriminant mismatch",
    )?;
    let ram = report.ramification.ok_or("no ramification data")?;
    let at_origin = ram
        .iter()
        .find(|(f, _)| *f == form("s", q, 1))
        .ok_or("no ramification over [0:1]")?;
    expect(at_origin.1 == 5, "ramification multiplicity is not 5")
}

/// Classification criteria against exhaustive extension-field search.
fn finite_field_oracle() -> Check {
    for p in [5, 7] {
        suite(
            verify::classification_oracle_suite(p, 200, 2024)
                .map_err(|e| e.to_string())?,
        )?;
    }
    Ok(())
}

/// Genus from the intersection pairing over the full index sweep.
fn adjunction_identity() -> Check {
    suite(verify::adjunction_suite().map_err(|e| e.to_string())?)
}

/// Bidegree lower bound on constructed reducible forms, and its failure
/// outside the bounded locus.
fn bidegree_bound() -> Check {
    suite(verify::reducible_bound_suite(250, 7).map_err(|e| e.to_string())?)?;
    // the (-1, 11) example above sits outside the bounded locus and
    // violates the bound
    expect(
        !bidegree_bound_holds(-1, 4, 10),
        "out-of-locus example satisfies the bound",
    )
}

fn group_action_invariance() -> Check {
    suite(verify::group_action_suite(300, 99).map_err(|e| e.to_string())?)
}

fn picard_formulas() -> Check {
    suite(verify::picard_suite(20, 5).map_err(|e| e.to_string())?)
}

fn strata_combinatorics() -> Check {
    suite(verify::strata_order_suite().map_err(|e| e.to_string())?)?;
    suite(verify::strata_table_suite(500, 31).map_err(|e| e.to_string())?)
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Check)> = vec![
        ("1 genus-3 line bundle", genus3_line_bundle),
        ("2 unbalanced bidegree", unbalanced_bidegree),
        ("3 small strata examples", small_strata_examples),
        ("4 cusp limit pipeline", cusp_limit_pipeline),
        ("5 finite field oracle", finite_field_oracle),
        ("6 adjunction identity", adjunction_identity),
        ("7 bidegree bound", bidegree_bound),
        ("8 group action invariance", group_action_invariance),
        ("9 Picard formulas", picard_formulas),
        ("10 strata combinatorics", strata_combinatorics),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(()) => println!("criterion {name}: pass"),
            Err(msg) => {
                println!("criterion {name}: FAIL ({msg})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
