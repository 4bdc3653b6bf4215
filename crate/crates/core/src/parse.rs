//! Text grammar for scalars and forms: variables s, t (and e for families),
//! integer and p/q literals, + - * ^ ( ), validated against a declared slot
//! degree.  Errors carry line/column and the offending token.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::binform::BinForm;
use crate::error::{Error, Result};
use crate::scalars::{BaseTag, Field, LaurentPoly, Scalar};

/// Parse a field name: `Q`, `F5`, `Q((e))`, `F7((e))`.
pub fn parse_field(text: &str) -> Result<Field> {
    let bad = || Error::Parse {
        line: 1,
        col: 1,
        token: text.to_string(),
        msg: "expected a field like Q, F5, Q((e)), F7((e))".into(),
    };
    let (base, laurent) = match text.strip_suffix("((e))") {
        Some(base) => (base, true),
        None => (text, false),
    };
    let tag = if base == "Q" {
        BaseTag::Q
    } else if let Some(ptext) = base.strip_prefix('F') {
        let p: u64 = ptext.parse().map_err(|_| bad())?;
        match Field::fp(p)? {
            Field::Fp(p) => BaseTag::Fp(p),
            _ => unreachable!(),
        }
    } else {
        return Err(bad());
    };
    if laurent {
        Field::laurent(tag)
    } else {
        Ok(match tag {
            BaseTag::Q => Field::Q,
            BaseTag::Fp(p) => Field::Fp(p),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(char), // 's', 't', 'e'
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
    text: String,
}

fn tokenize(input: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = input.chars().peekable();
    while let Some(&ch) = chars.peek() {
        let (tline, tcol) = (line, col);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                advance(&mut chars);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        digits.push(advance(&mut chars));
                    } else {
                        break;
                    }
                }
                out.push(Spanned {
                    tok: Tok::Int(digits.parse().unwrap()),
                    line: tline,
                    col: tcol,
                    text: digits,
                });
            }
            's' | 't' | 'e' => {
                advance(&mut chars);
                out.push(Spanned {
                    tok: Tok::Var(ch),
                    line: tline,
                    col: tcol,
                    text: ch.to_string(),
                });
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                advance(&mut chars);
                let tok = match ch {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                };
                out.push(Spanned {
                    tok,
                    line: tline,
                    col: tcol,
                    text: ch.to_string(),
                });
            }
            other => {
                return Err(Error::Parse {
                    line: tline,
                    col: tcol,
                    token: other.to_string(),
                    msg: "unexpected character".into(),
                });
            }
        }
    }
    Ok(out)
}

/// A parsed expression: map (s-power, t-power, e-power) -> rational.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Expr {
    terms: BTreeMap<(i64, i64, i64), BigRational>,
}

impl Expr {
    fn constant(c: BigRational) -> Expr {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0, 0), c);
        }
        Expr { terms }
    }

    fn var(v: char) -> Expr {
        let key = match v {
            's' => (1, 0, 0),
            't' => (0, 1, 0),
            _ => (0, 0, 1),
        };
        let mut terms = BTreeMap::new();
        terms.insert(key, BigRational::one());
        Expr { terms }
    }

    fn add(&self, o: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        for (m, c) in &o.terms {
            let sum = match terms.remove(m) {
                Some(x) => x + c,
                None => c.clone(),
            };
            if !sum.is_zero() {
                terms.insert(*m, sum);
            }
        }
        Expr { terms }
    }

    fn neg(&self) -> Expr {
        Expr {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    fn mul(&self, o: &Expr) -> Expr {
        let mut terms: BTreeMap<(i64, i64, i64), BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = (ma.0 + mb.0, ma.1 + mb.1, ma.2 + mb.2);
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
        Expr { terms }
    }

    fn pow(&self, e: i64) -> Expr {
        let mut acc = Expr::constant(BigRational::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// A single monomial (needed for e^negative).
    fn as_monomial(&self) -> Option<((i64, i64, i64), BigRational)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((*m, c.clone()))
        } else {
            None
        }
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn err_here(&self, msg: &str) -> Error {
        match self.peek() {
            Some(sp) => Error::Parse {
                line: sp.line,
                col: sp.col,
                token: sp.text.clone(),
                msg: msg.into(),
            },
            None => {
                let (line, col) = self
                    .toks
                    .last()
                    .map(|sp| (sp.line, sp.col + sp.text.len()))
                    .unwrap_or((1, 1));
                Error::Parse {
                    line,
                    col,
                    token: "<end of input>".into(),
                    msg: msg.into(),
                }
            }
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek().map(|sp| &sp.tok == tok).unwrap_or(false) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = if self.eat(&Tok::Minus) {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc.add(&self.term()?);
            } else if self.eat(&Tok::Minus) {
                acc = acc.add(&self.term()?.neg());
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        while self.eat(&Tok::Star) {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let negative = self.eat(&Tok::Minus);
            let exp = match self.peek().map(|sp| sp.tok.clone()) {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: i64 = (&n).try_into().map_err(|_| {
                        self.err_here("exponent out of range")
                    })?;
                    e
                }
                _ => return Err(self.err_here("expected an integer exponent")),
            };
            if negative {
                // only a monomial in e may carry a negative exponent
                let ((sp, tp, ep), c) = base.as_monomial().ok_or_else(|| {
                    self.err_here("negative exponents are only allowed on e")
                })?;
                if sp != 0 || tp != 0 || ep != 1 || !c.is_one() {
                    return Err(
                        self.err_here("negative exponents are only allowed on e")
                    );
                }
                let mut terms = BTreeMap::new();
                terms.insert((0, 0, -exp), BigRational::one());
                return Ok(Expr { terms });
            }
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().map(|sp| sp.tok.clone()) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                // optional /q for a rational literal
                if self.eat(&Tok::Slash) {
                    match self.peek().map(|sp| sp.tok.clone()) {
                        Some(Tok::Int(d)) => {
                            self.pos += 1;
                            if d.is_zero() {
                                return Err(self.err_here("zero denominator"));
                            }
                            Ok(Expr::constant(BigRational::new(n, d)))
                        }
                        _ => Err(self.err_here("expected a denominator")),
                    }
                } else {
                    Ok(Expr::constant(BigRational::from(n)))
                }
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Expr::var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.err_here("expected `)`"));
                }
                Ok(inner)
            }
            _ => Err(self.err_here("expected a number, variable, or `(`")),
        }
    }
}

fn parse_expr(text: &str) -> Result<Expr> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here("trailing input"));
    }
    Ok(e)
}

fn rational_to_scalar(field: Field, c: &BigRational) -> Result<Scalar> {
    Scalar::from_rational(
        field.base_field(),
        c.numer().clone(),
        c.denom().clone(),
    )
}

/// Parse a form in s, t (and e over a Laurent field) and validate it
/// against the declared slot degree; named slots give precise mismatch
/// errors.
pub fn parse_form(text: &str, field: Field, slot: i64, name: &str) -> Result<BinForm> {
    let expr = parse_expr(text)?;
    let mut coeffs: BTreeMap<i64, BTreeMap<i64, Scalar>> = BTreeMap::new();
    for ((sp, tp, ep), c) in &expr.terms {
        if *ep != 0 && !field.is_laurent() {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                token: "e".into(),
                msg: format!("the uniformizer e needs a Laurent field, not {field}"),
            });
        }
        if sp + tp != slot {
            return Err(Error::SlotMismatch {
                name: name.into(),
                expected: slot,
                got: sp + tp,
            });
        }
        coeffs
            .entry(*tp)
            .or_default()
            .insert(*ep, rational_to_scalar(field, c)?);
    }
    if slot < 0 {
        // only the zero form lives here
        return Ok(BinForm::zero(field, slot));
    }
    let mut out = Vec::with_capacity((slot + 1) as usize);
    for l in 0..=slot {
        let entry = coeffs.remove(&l);
        let scalar = match (field, entry) {
            (_, None) => Scalar::zero(field),
            (Field::Laurent(base), Some(by_e)) => {
                let mut lp = LaurentPoly {
                    base,
                    terms: BTreeMap::new(),
                };
                for (ep, c) in by_e {
                    if !c.is_zero() {
                        lp.terms.insert(ep, c);
                    }
                }
                Scalar::Laurent(lp)
            }
            (_, Some(mut by_e)) => by_e.remove(&0).unwrap_or_else(|| Scalar::zero(field)),
        };
        out.push(scalar);
    }
    BinForm::new(field, slot, out)
}

/// Parse a lone scalar (degree-0 expression, possibly with e powers).
pub fn parse_scalar(text: &str, field: Field) -> Result<Scalar> {
    let form = parse_form(text, field, 0, "scalar")?;
    Ok(form.coeff(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), Field::Q);
        assert_eq!(parse_field("F5").unwrap(), Field::fp(5).unwrap());
        assert_eq!(
            parse_field("Q((e))").unwrap(),
            Field::laurent(BaseTag::Q).unwrap()
        );
        assert_eq!(
            parse_field("F7((e))").unwrap(),
            Field::laurent(BaseTag::Fp(7)).unwrap()
        );
        assert!(matches!(parse_field("F2"), Err(Error::EvenCharacteristic(2))));
        assert!(matches!(parse_field("R"), Err(Error::Parse { .. })));
    }

    #[test]
    fn forms_round_trip() {
        let f = parse_form("s^4+t^4", Field::Q, 4, "b").unwrap();
        assert_eq!(f, BinForm::from_i64s(Field::Q, 4, &[1, 0, 0, 0, 1]).unwrap());
        let f = parse_form("s*t^6+t^7", Field::Q, 7, "c").unwrap();
        assert_eq!(f.to_string(), "s*t^6+t^7");
        let f = parse_form("-4*s^2+s*t", Field::Q, 2, "a").unwrap();
        assert_eq!(f.to_string(), "-4*s^2+s*t");
        let f = parse_form("1/4*s^2*t", Field::Q, 3, "c").unwrap();
        assert_eq!(f.to_string(), "1/4*s^2*t");
        let f = parse_form("(s+t)*(s-t)", Field::Q, 2, "a").unwrap();
        assert_eq!(f, BinForm::from_i64s(Field::Q, 2, &[1, 0, -1]).unwrap());
    }

    #[test]
    fn zero_and_negative_slots() {
        let f = parse_form("0", Field::Q, 3, "a").unwrap();
        assert!(f.is_zero());
        assert_eq!(f.slot(), 3);
        let f = parse_form("0", Field::Q, -2, "a").unwrap();
        assert_eq!(f.slot(), -2);
        assert!(parse_form("s", Field::Q, -2, "a").is_err());
    }

    #[test]
    fn slot_mismatch_names_the_slot() {
        let err = parse_form("s^3", Field::Q, 2, "b").unwrap_err();
        match err {
            Error::SlotMismatch { name, expected, got } => {
                assert_eq!(name, "b");
                assert_eq!(expected, 2);
                assert_eq!(got, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn laurent_families() {
        let lf = Field::laurent(BaseTag::Q).unwrap();
        let f = parse_form("e*t^3", lf, 3, "b").unwrap();
        assert_eq!(f.coeff(3).valuation().unwrap(), Some(1));
        let f = parse_form("e^-1*t + s", lf, 1, "b").unwrap();
        assert_eq!(f.coeff(1).valuation().unwrap(), Some(-1));
        assert!(parse_form("e*t", Field::Q, 1, "b").is_err());
        assert!(parse_form("s^-1", lf, -1, "b").is_err());
    }

    #[test]
    fn error_positions() {
        let err = parse_form("s^4 + ?", Field::Q, 4, "b").unwrap_err();
        match err {
            Error::Parse { line, col, token, .. } => {
                assert_eq!(line, 1);
                assert_eq!(col, 7);
                assert_eq!(token, "?");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn fp_coefficients_reduce() {
        let f5 = Field::fp(5).unwrap();
        let f = parse_form("7*s^2", f5, 2, "a").unwrap();
        assert_eq!(f, BinForm::from_i64s(f5, 2, &[2, 0, 0]).unwrap());
        let f = parse_form("1/2*s", f5, 1, "a").unwrap();
        assert_eq!(f, BinForm::from_i64s(f5, 1, &[3, 0]).unwrap());
    }
}
