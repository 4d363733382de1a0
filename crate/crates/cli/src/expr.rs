//! Expressions in the principal curvatures.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? int)?
//! atom  := number | 'l1' | 'l2' | 'H' | 'Q' | 'K' | 'B' '(' int ')' | '(' expr ')'
//! ```

use std::fmt;

use curvsieve_core::ratpoly::{parse_rational, Poly2, RatFn2, Rational};
use num_traits::Signed;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown symbol '{name}' at position {position}")]
    UnknownSymbol { position: usize, name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ElabError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symbol {
    L1,
    L2,
    H,
    Q,
    K,
    B(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    Sym(Symbol),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Symbol {
    pub fn to_poly(self) -> Poly2 {
        match self {
            Symbol::L1 => Poly2::l1(),
            Symbol::L2 => Poly2::l2(),
            Symbol::H => Poly2::h(),
            Symbol::Q => Poly2::q(),
            Symbol::K => Poly2::k(),
            Symbol::B(k) => Poly2::power_sum(k),
        }
    }
}

impl Expr {
    /// Expands symbols and evaluates to a reduced rational function.
    pub fn elaborate(&self) -> Result<RatFn2, ElabError> {
        Ok(match self {
            Expr::Num(c) => RatFn2::constant(c.clone()),
            Expr::Sym(s) => RatFn2::from_poly(s.to_poly()),
            Expr::Neg(e) => -&e.elaborate()?,
            Expr::Add(a, b) => &a.elaborate()? + &b.elaborate()?,
            Expr::Sub(a, b) => &a.elaborate()? - &b.elaborate()?,
            Expr::Mul(a, b) => &a.elaborate()? * &b.elaborate()?,
            Expr::Div(a, b) => {
                let d = b.elaborate()?;
                if d.is_zero() {
                    return Err(ElabError::DivisionByZero);
                }
                &a.elaborate()? / &d
            }
            Expr::Pow(a, e) => a.elaborate()?.powi(*e).map_err(|_| ElabError::DivisionByZero)?,
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) if c.is_integer() && !c.is_negative() => write!(f, "{}", c.numer()),
            Expr::Num(c) if c.is_integer() => write!(f, "({})", c.numer()),
            Expr::Num(c) => write!(f, "({}/{})", c.numer(), c.denom()),
            Expr::Sym(Symbol::L1) => write!(f, "l1"),
            Expr::Sym(Symbol::L2) => write!(f, "l2"),
            Expr::Sym(Symbol::H) => write!(f, "H"),
            Expr::Sym(Symbol::Q) => write!(f, "Q"),
            Expr::Sym(Symbol::K) => write!(f, "K"),
            Expr::Sym(Symbol::B(k)) => write!(f, "B({k})"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a}*{b})"),
            Expr::Div(a, b) => write!(f, "({a}/{b})"),
            Expr::Pow(a, e) => match **a {
                Expr::Sym(_) => write!(f, "{a}^{e}"),
                Expr::Num(ref c) if c.is_integer() && !c.is_negative() => write!(f, "{a}^{e}"),
                _ => write!(f, "({a})^{e}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
    End,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (p, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().map(|x| x.1).collect()), p));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().map(|x| x.1).collect()), p));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), p));
            i += 1;
        } else {
            return Err(ParseError::SyntaxError {
                position: p,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn position(&self) -> usize {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::SyntaxError {
            position: self.position(),
            message: message.to_string(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Op(c) {
            self.next();
            Ok(())
        } else {
            self.error(&format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op('/') => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Op('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.next();
        let negative = *self.peek() == Tok::Op('-');
        if negative {
            self.next();
        }
        let e = self.integer()? as i64;
        let e = if negative { -e } else { e };
        let e = i32::try_from(e).or_else(|_| self.error("exponent out of range"))?;
        Ok(Expr::Pow(Box::new(base), e))
    }

    fn integer(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) => match s.parse::<u32>() {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.error("expected an integer"),
            },
            _ => self.error("expected an integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let position = self.position();
        match self.peek().clone() {
            Tok::Num(s) => {
                let Some(v) = parse_rational(&s) else {
                    return self.error("malformed number");
                };
                self.next();
                Ok(Expr::Num(v))
            }
            Tok::Ident(name) => {
                self.next();
                let sym = match name.as_str() {
                    "l1" => Symbol::L1,
                    "l2" => Symbol::L2,
                    "H" => Symbol::H,
                    "Q" => Symbol::Q,
                    "K" => Symbol::K,
                    "B" => {
                        self.expect('(')?;
                        let k = self.integer()?;
                        self.expect(')')?;
                        Symbol::B(k)
                    }
                    _ => return Err(ParseError::UnknownSymbol { position, name }),
                };
                Ok(Expr::Sym(sym))
            }
            Tok::Op('(') => {
                self.next();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Op(c) => self.error(&format!("unexpected '{c}'")),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Elab(#[from] ElabError),
}

/// Parses and elaborates in one step.
pub fn parse_ratfn(text: &str) -> Result<RatFn2, ExprError> {
    Ok(parse_expr(text)?.elaborate()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_sum_symbol() {
        assert_eq!(parse_ratfn("B(2)").unwrap(), RatFn2::from_poly(Poly2::q()));
    }

    #[test]
    fn trailing_operator_position() {
        assert_eq!(
            parse_expr("l1 + "),
            Err(ParseError::SyntaxError {
                position: 5,
                message: "unexpected end of input".into()
            })
        );
    }

    #[test]
    fn unknown_symbol() {
        assert!(matches!(
            parse_expr("l1 + x"),
            Err(ParseError::UnknownSymbol { position: 5, .. })
        ));
    }

    #[test]
    fn precedence() {
        let a = parse_ratfn("-l1^2").unwrap();
        assert_eq!(a, RatFn2::from_poly(-&Poly2::l1().pow(2)));
        let b = parse_ratfn("1 - 2*l1/l2").unwrap();
        let c = parse_ratfn("1 - ((2*l1)/l2)").unwrap();
        assert_eq!(b, c);
        assert_eq!(parse_ratfn("l1^-1").unwrap(), RatFn2::from_poly(Poly2::l1()).recip().unwrap());
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(parse_ratfn("l1/(l2 - l2)"), Err(ExprError::Elab(ElabError::DivisionByZero)));
    }
}
