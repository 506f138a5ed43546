//! Symbolic operator expressions and their text syntax.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor (('o' | '∘') factor)*          // a o b = a after b
//! factor := 'scale' '(' number ',' expr ')'
//!         | NAME [ '(' args ')' ]
//!         | '(' expr ')'
//! ```
//!
//! Atom names: `identity` (`id`), `scalar(c)` or `scalar(re, im)`,
//! `isometry(k)`, `compact`, `finite_rank(r)`, `locally_compact`,
//! `known(alpha=A, omega=W[, d=D, q=Q])` where each value is a number or
//! `[lo, hi]`. Numbers accept `inf`. Any other name is an unknown atom.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtendedReal;

use super::mnc::RateInterval;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Atom {
    Identity,
    /// `c I` with `c` complex, given as `(re, im)`.
    ScalarMultiple(f64, f64),
    /// Linear isometry whose range has codimension `k`.
    IsometryOntoCodim(u32),
    CompactLinear,
    FiniteRank(u32),
    LocallyCompactNonlinear,
    KnownRates {
        alpha: RateInterval,
        omega: RateInterval,
        d: Option<RateInterval>,
        q: Option<RateInterval>,
    },
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OperatorExpr {
    Atom(Atom),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    /// `outer ∘ inner`.
    Compose {
        outer: Box<OperatorExpr>,
        inner: Box<OperatorExpr>,
    },
    Scale(f64, Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn atom(a: Atom) -> Self {
        OperatorExpr::Atom(a)
    }

    pub fn sum(a: OperatorExpr, b: OperatorExpr) -> Self {
        OperatorExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn compose(outer: OperatorExpr, inner: OperatorExpr) -> Self {
        OperatorExpr::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn scale(c: f64, e: OperatorExpr) -> Self {
        OperatorExpr::Scale(c, Box::new(e))
    }

    /// Atom with exact rates `alpha` and `omega`.
    pub fn known(alpha: f64, omega: f64) -> Self {
        OperatorExpr::Atom(Atom::KnownRates {
            alpha: RateInterval::exact(alpha),
            omega: RateInterval::exact(omega),
            d: None,
            q: None,
        })
    }
}

fn fmt_num(f: &mut fmt::Formatter<'_>, v: ExtendedReal) -> fmt::Result {
    match v {
        ExtendedReal::PosInf => f.write_str("inf"),
        ExtendedReal::NegInf => f.write_str("-inf"),
        ExtendedReal::Finite(x) => write!(f, "{x}"),
    }
}

fn fmt_rate(f: &mut fmt::Formatter<'_>, r: &RateInterval) -> fmt::Result {
    if r.lo == r.hi {
        return fmt_num(f, r.lo);
    }
    f.write_str("[")?;
    fmt_num(f, r.lo)?;
    f.write_str(",")?;
    fmt_num(f, r.hi)?;
    f.write_str("]")
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Identity => f.write_str("identity"),
            Atom::ScalarMultiple(re, 0.0) => write!(f, "scalar({re})"),
            Atom::ScalarMultiple(re, im) => write!(f, "scalar({re},{im})"),
            Atom::IsometryOntoCodim(k) => write!(f, "isometry({k})"),
            Atom::CompactLinear => f.write_str("compact"),
            Atom::FiniteRank(r) => write!(f, "finite_rank({r})"),
            Atom::LocallyCompactNonlinear => f.write_str("locally_compact"),
            Atom::KnownRates { alpha, omega, d, q } => {
                f.write_str("known(alpha=")?;
                fmt_rate(f, alpha)?;
                f.write_str(",omega=")?;
                fmt_rate(f, omega)?;
                if let Some(d) = d {
                    f.write_str(",d=")?;
                    fmt_rate(f, d)?;
                }
                if let Some(q) = q {
                    f.write_str(",q=")?;
                    fmt_rate(f, q)?;
                }
                f.write_str(")")
            }
            Atom::Unknown(name) => f.write_str(name),
        }
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorExpr::Atom(a) => write!(f, "{a}"),
            OperatorExpr::Sum(a, b) => write!(f, "({a} + {b})"),
            OperatorExpr::Compose { outer, inner } => write!(f, "({outer} o {inner})"),
            OperatorExpr::Scale(c, e) => write!(f, "scale({c}, {e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    Plus,
    Compose,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eq,
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' | ')' | '[' | ']' | ',' | '=' | '∘' => {
                out.push((
                    pos,
                    match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ',' => Tok::Comma,
                        '=' => Tok::Eq,
                        _ => Tok::Compose,
                    },
                ));
                i += 1;
            }
            '+' | '-' | '.' | '0'..='9' => {
                // A '+' between operands is the sum operator; a sign only
                // where a number may start.
                let signed_number = matches!(c, '+' | '-')
                    && bytes
                        .get(i + 1)
                        .is_some_and(|(_, d)| d.is_ascii_digit() || *d == '.' || *d == 'i')
                    && matches!(
                        out.last(),
                        None | Some((_, Tok::LParen | Tok::LBracket | Tok::Comma | Tok::Eq))
                    );
                if c == '+' && !signed_number {
                    out.push((pos, Tok::Plus));
                    i += 1;
                    continue;
                }
                if c == '-' && !signed_number {
                    return Err(Error::Parse {
                        position: pos,
                        message: "subtraction is written as a sum with scale(-1, ...)".into(),
                    });
                }
                let start = i;
                i += 1;
                while i < bytes.len() {
                    let d = bytes[i].1;
                    let prev = bytes[i - 1].1;
                    if d.is_ascii_alphanumeric() || d == '.' || ((d == '-' || d == '+') && (prev == 'e' || prev == 'E')) {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let end = bytes.get(i).map_or(s.len(), |(p, _)| *p);
                let text = &s[pos..end];
                let v = parse_number(text).ok_or_else(|| Error::Parse {
                    position: bytes[start].0,
                    message: format!("invalid number `{text}`"),
                })?;
                out.push((pos, Tok::Num(v)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].1.is_alphanumeric() || bytes[i].1 == '_') {
                    i += 1;
                }
                let end = bytes.get(i).map_or(s.len(), |(p, _)| *p);
                let word = &s[bytes[start].0..end];
                let tok = match word {
                    "o" => Tok::Compose,
                    "inf" => Tok::Num(f64::INFINITY),
                    w => Tok::Ident(w.to_string()),
                };
                out.push((pos, tok));
            }
            other => {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

fn parse_number(text: &str) -> Option<f64> {
    match text {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse::<f64>().ok().filter(|v| !v.is_nan()),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.here(),
            message: message.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.peek() {
            Some(Tok::Num(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected a number"),
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut e = self.term()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            e = OperatorExpr::sum(e, self.term()?);
        }
        Ok(e)
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut e = self.factor()?;
        while self.peek() == Some(&Tok::Compose) {
            self.pos += 1;
            e = OperatorExpr::compose(e, self.factor()?);
        }
        Ok(e)
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "scale" {
                    self.expect(Tok::LParen, "`(` after scale")?;
                    let at = self.here();
                    let c = self.number()?;
                    if !c.is_finite() {
                        return Err(Error::Parse {
                            position: at,
                            message: "scale factor must be finite".into(),
                        });
                    }
                    self.expect(Tok::Comma, "`,`")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(OperatorExpr::scale(c, e));
                }
                self.atom(&name).map(OperatorExpr::Atom)
            }
            _ => self.err("expected an operator"),
        }
    }

    fn numeric_args(&mut self) -> Result<Vec<f64>> {
        if self.peek() != Some(&Tok::LParen) {
            return Ok(Vec::new());
        }
        self.pos += 1;
        let mut args = vec![self.number()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.number()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(args)
    }

    fn rate(&mut self) -> Result<RateInterval> {
        let at = self.here();
        let (lo, hi) = if self.peek() == Some(&Tok::LBracket) {
            self.pos += 1;
            let lo = self.number()?;
            self.expect(Tok::Comma, "`,`")?;
            let hi = self.number()?;
            self.expect(Tok::RBracket, "`]`")?;
            (lo, hi)
        } else {
            let v = self.number()?;
            (v, v)
        };
        RateInterval::new(lo.into(), hi.into()).map_err(|message| Error::Parse {
            position: at,
            message,
        })
    }

    fn count(&self, name: &str, args: &[f64]) -> Result<u32> {
        match args {
            [v] if *v >= 0.0 && v.fract() == 0.0 && *v <= u32::MAX as f64 => Ok(*v as u32),
            _ => self.err(format!("`{name}` takes one non-negative integer")),
        }
    }

    fn atom(&mut self, name: &str) -> Result<Atom> {
        if name == "known" {
            return self.known();
        }
        let args = self.numeric_args()?;
        let no_args = |p: &Self, a: Atom| {
            if args.is_empty() {
                Ok(a)
            } else {
                p.err(format!("`{name}` takes no arguments"))
            }
        };
        match name {
            "identity" | "id" => no_args(self, Atom::Identity),
            "compact" => no_args(self, Atom::CompactLinear),
            "locally_compact" => no_args(self, Atom::LocallyCompactNonlinear),
            "isometry" => Ok(Atom::IsometryOntoCodim(self.count(name, &args)?)),
            "finite_rank" => Ok(Atom::FiniteRank(self.count(name, &args)?)),
            "scalar" => match args[..] {
                [re] if re.is_finite() => Ok(Atom::ScalarMultiple(re, 0.0)),
                [re, im] if re.is_finite() && im.is_finite() => Ok(Atom::ScalarMultiple(re, im)),
                _ => self.err("`scalar` takes a finite real or complex value"),
            },
            other => Ok(Atom::Unknown(other.to_string())),
        }
    }

    fn known(&mut self) -> Result<Atom> {
        self.expect(Tok::LParen, "`(` after known")?;
        let (mut alpha, mut omega, mut d, mut q) = (None, None, None, None);
        loop {
            let key = match self.peek().cloned() {
                Some(Tok::Ident(k)) => k,
                _ => return self.err("expected alpha=, omega=, d= or q="),
            };
            self.pos += 1;
            self.expect(Tok::Eq, "`=`")?;
            let r = self.rate()?;
            let slot = match key.as_str() {
                "alpha" => &mut alpha,
                "omega" => &mut omega,
                "d" => &mut d,
                "q" => &mut q,
                _ => return self.err(format!("unknown rate `{key}`")),
            };
            *slot = Some(r);
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        match (alpha, omega) {
            (Some(alpha), Some(omega)) => Ok(Atom::KnownRates { alpha, omega, d, q }),
            _ => self.err("known(...) needs both alpha and omega"),
        }
    }
}

impl FromStr for OperatorExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let toks = tokenize(s)?;
        let mut p = Parser {
            toks,
            pos: 0,
            len: s.len(),
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_and_associativity() {
        let e: OperatorExpr = "isometry(1) + compact o scale(2, id)".parse().unwrap();
        let expected = OperatorExpr::sum(
            OperatorExpr::atom(Atom::IsometryOntoCodim(1)),
            OperatorExpr::compose(
                OperatorExpr::atom(Atom::CompactLinear),
                OperatorExpr::scale(2.0, OperatorExpr::atom(Atom::Identity)),
            ),
        );
        assert_eq!(e, expected);
    }

    #[test]
    fn known_rates_with_intervals_and_infinity() {
        let e: OperatorExpr = "known(alpha=[0.5, inf], omega=0.25) ∘ scalar(-3)".parse().unwrap();
        match e {
            OperatorExpr::Compose { outer, inner } => {
                assert!(matches!(*inner, OperatorExpr::Atom(Atom::ScalarMultiple(c, _)) if c == -3.0));
                match *outer {
                    OperatorExpr::Atom(Atom::KnownRates { alpha, .. }) => {
                        assert_eq!(alpha.hi, ExtendedReal::PosInf)
                    }
                    _ => panic!(),
                }
            }
            _ => panic!(),
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "isometry(1) + compact",
            "scale(-2.5, identity o finite_rank(3))",
            "known(alpha=[1,inf],omega=0.5,q=2) + locally_compact",
            "scalar(0,1) + mystery",
        ] {
            let e: OperatorExpr = s.parse().unwrap();
            let again: OperatorExpr = e.to_string().parse().unwrap();
            assert_eq!(e, again, "{s}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        for (s, at) in [("compact +", 9), ("scale(inf, id)", 6), ("known(alpha=2)", 14), ("id - id", 3)] {
            match s.parse::<OperatorExpr>() {
                Err(Error::Parse { position, .. }) => assert_eq!(position, at, "{s}"),
                other => panic!("{s}: {other:?}"),
            }
        }
        assert!("known(alpha=[2,1], omega=0)".parse::<OperatorExpr>().is_err());
    }
}
