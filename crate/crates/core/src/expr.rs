//! Text expressions for elements: `rho`, `tau`, `tauN`, `xiN`, `bN`, `QN`,
//! `P[r1,r2,...]`, `D[e0,e1,...;r1,r2,...]`, integers, `+ - * ^` and
//! parentheses.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::mgl::{MglComodule, MglElement};
use crate::ops::{OperationAlgebra, OperationElement};
use crate::steenrod::{GammaElement, MilnorMonomial, SteenrodContext};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Int(BigInt),
    Rho,
    Tau,
    TauI(u32),
    Xi(u32),
    B(u32),
    Q(u32),
    P(Vec<u32>),
    /// `ρ(E, R)` with `E` given as the indices `i` with `ε_i = 1`.
    D(Vec<u32>, Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom, usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").parse().expect("digits"))
    }

    fn small(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.number()?;
        u32::try_from(n).map_err(|_| Error::Parse { pos: at, msg: "integer too large".into() })
    }

    fn list(&mut self, close: u8) -> Result<Vec<u32>> {
        let mut out = Vec::new();
        if self.peek() == Some(close) {
            return Ok(out);
        }
        loop {
            out.push(self.small()?);
            if !self.eat(b',') {
                return Ok(out);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            return Ok(Expr::Pow(Box::new(base), self.small()?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Atom(Atom::Int(self.number()?), at)),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
                let indexed = self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit());
                let atom = match (name.as_str(), indexed) {
                    ("rho", false) => Atom::Rho,
                    ("tau", false) => Atom::Tau,
                    ("tau", true) => Atom::TauI(self.small()?),
                    ("xi", true) => Atom::Xi(self.small()?),
                    ("b", true) => Atom::B(self.small()?),
                    ("Q", true) => Atom::Q(self.small()?),
                    ("P", false) => {
                        self.expect(b'[')?;
                        let r = self.list(b']')?;
                        self.expect(b']')?;
                        Atom::P(r)
                    }
                    ("D", false) => {
                        self.expect(b'[')?;
                        let bits = self.list(b';')?;
                        self.expect(b';')?;
                        let r = self.list(b']')?;
                        self.expect(b']')?;
                        if bits.iter().any(|&b| b > 1) {
                            return Err(Error::Parse { pos: at, msg: "E entries must be 0 or 1".into() });
                        }
                        let taus = bits.iter().enumerate().filter(|(_, &b)| b == 1).map(|(i, _)| i as u32).collect();
                        Atom::D(taus, r)
                    }
                    _ => return Err(Error::UnknownGenerator(name)),
                };
                if matches!(atom, Atom::Xi(0)) {
                    return Err(Error::Parse { pos: at, msg: "xi indices start at 1".into() });
                }
                if matches!(atom, Atom::B(0)) {
                    return Err(Error::Parse { pos: at, msg: "b indices start at 1".into() });
                }
                Ok(Expr::Atom(atom, at))
            }
            Some(c) => self.err(format!("unexpected `{}`; expected a generator, integer or `(`", c as char)),
        }
    }
}

/// Parses `src` into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input; expected an operator");
    }
    Ok(e)
}

fn wrong_domain<T>(what: &str, pos: usize, domain: &str) -> Result<T> {
    Err(Error::Parse { pos, msg: format!("{what} is not an element of {domain}") })
}

fn fold<T: Clone>(
    e: &Expr,
    atom: &dyn Fn(&Atom, usize) -> Result<T>,
    add: &dyn Fn(&T, &T) -> T,
    neg: &dyn Fn(&T) -> T,
    mul: &dyn Fn(&T, &T) -> Result<T>,
    one: &T,
) -> Result<T> {
    let rec = |x: &Expr| fold(x, atom, add, neg, mul, one);
    Ok(match e {
        Expr::Atom(a, pos) => atom(a, *pos)?,
        Expr::Neg(x) => neg(&rec(x)?),
        Expr::Add(x, y) => add(&rec(x)?, &rec(y)?),
        Expr::Sub(x, y) => add(&rec(x)?, &neg(&rec(y)?)),
        Expr::Mul(x, y) => mul(&rec(x)?, &rec(y)?)?,
        Expr::Pow(x, n) => {
            let base = rec(x)?;
            let mut acc = one.clone();
            for _ in 0..*n {
                acc = mul(&acc, &base)?;
            }
            acc
        }
    })
}

/// Evaluates an expression in `Γ`.
pub fn eval_gamma(e: &Expr, ctx: &SteenrodContext) -> Result<GammaElement> {
    let atom = |a: &Atom, pos: usize| -> Result<GammaElement> {
        Ok(match a {
            Atom::Int(n) => ctx.gamma_from_a(&ctx.a_const(n.clone())),
            Atom::Rho => ctx.gamma_from_a(&ctx.rho()),
            Atom::Tau => ctx.gamma_from_a(&ctx.tau()),
            Atom::TauI(i) => {
                let m = MilnorMonomial::tau(*i);
                if ctx.bidegree(&m).p > ctx.max_p() {
                    return Err(Error::WindowExceeded { needed: ctx.bidegree(&m).p, max: ctx.max_p() });
                }
                ctx.gamma_monomial(m)
            }
            Atom::Xi(i) => {
                let m = MilnorMonomial::xi_pow(*i, 1);
                if ctx.bidegree(&m).p > ctx.max_p() {
                    return Err(Error::WindowExceeded { needed: ctx.bidegree(&m).p, max: ctx.max_p() });
                }
                ctx.gamma_monomial(m)
            }
            other => return wrong_domain(&format!("{other:?}"), pos, "the dual Steenrod algebra"),
        })
    };
    fold(e, &atom, &|x, y| {
        let mut s = x.clone();
        s.add(y);
        s
    }, &|x| x.neg(), &|x, y| Ok(ctx.mul(x, y)), &ctx.gamma_one())
}

/// Evaluates an expression in the operation algebra; products of `A`-elements
/// with operations use the left and right `A`-actions.
pub fn eval_op(e: &Expr, alg: &OperationAlgebra) -> Result<OperationElement> {
    let ctx = alg.context();
    let atom = |a: &Atom, pos: usize| -> Result<OperationElement> {
        let basis = |m: MilnorMonomial| -> Result<OperationElement> {
            if ctx.bidegree(&m).p > ctx.max_p() {
                return Err(Error::WindowExceeded { needed: ctx.bidegree(&m).p, max: ctx.max_p() });
            }
            Ok(alg.basis(m))
        };
        match a {
            Atom::Int(n) => Ok(alg.scalar(&ctx.a_const(n.clone()))),
            Atom::Rho => Ok(alg.scalar(&ctx.rho())),
            Atom::Tau => Ok(alg.scalar(&ctx.tau())),
            Atom::Q(i) => basis(MilnorMonomial::tau(*i)),
            Atom::P(r) => basis(MilnorMonomial::new(0, r.clone())),
            Atom::D(e, r) => basis(MilnorMonomial::from_parts(e, r)),
            other => wrong_domain(&format!("{other:?}"), pos, "the operation algebra"),
        }
    };
    fold(e, &atom, &|x, y| {
        let mut s = x.clone();
        s.add(y);
        s
    }, &|x| x.neg(), &|x, y| alg.op_product(x, y), &alg.identity())
}

/// Evaluates an expression in `ℤ/ℓ[b_1, b_2, …]`.
pub fn eval_mgl(e: &Expr, comodule: &MglComodule) -> Result<MglElement> {
    let atom = |a: &Atom, pos: usize| -> Result<MglElement> {
        match a {
            Atom::Int(n) => Ok(comodule.b(0).scale(n.clone())),
            Atom::B(n) => Ok(comodule.b(*n)),
            other => wrong_domain(&format!("{other:?}"), pos, "the homology of MGL"),
        }
    };
    fold(e, &atom, &|x, y| x + y, &|x| x.neg(), &|x, y| Ok(x * y), &comodule.b(0))
}
