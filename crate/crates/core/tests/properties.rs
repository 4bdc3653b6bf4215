use binquad::binform::BinForm;
use binquad::parse::parse_form;
use binquad::scalars::Field;
use proptest::prelude::*;

fn qform(maxdeg: i64) -> impl Strategy<Value = BinForm> {
    (1..=maxdeg).prop_flat_map(|d| {
        proptest::collection::vec(-20i64..=20, (d + 1) as usize)
            .prop_map(move |cs| BinForm::from_i64s(Field::Q, d, &cs).unwrap())
    })
}

proptest! {
    #[test]
    fn display_parse_round_trip(f in qform(6)) {
        prop_assume!(!f.is_zero());
        let back = parse_form(&f.to_string(), Field::Q, f.slot(), "f").unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn multiplication_commutes(f in qform(4), g in qform(4)) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
    }

    #[test]
    fn resultant_is_multiplicative(f in qform(3), g in qform(3), h in qform(3)) {
        prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
        let lhs = f.mul(&g).resultant(&h).unwrap();
        let rhs = f.resultant(&h).unwrap().mul(&g.resultant(&h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gcd_divides_both(f in qform(4), g in qform(4)) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        let d = f.gcd(&g).unwrap();
        prop_assert!(f.div_exact(&d).is_ok());
        prop_assert!(g.div_exact(&d).is_ok());
    }

    #[test]
    fn squares_are_recognized(h in qform(4)) {
        prop_assume!(!h.is_zero());
        let sq = h.mul(&h);
        let root = sq.is_square().unwrap().expect("square not recognized");
        prop_assert_eq!(root.mul(&root), sq);
    }
}
