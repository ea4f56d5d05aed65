//! Recursive-descent parser for operator expressions, classes and wedge elements.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('.' factor)*
//! factor  := ['-'] [rational '*'] primary
//! primary := '(' expr ')' | '[' expr ',' expr ']' | '0'
//!          | 'e(' C ')' | 'ft(' C ')' | 'f(' C ')' | 'h' | 'L0'
//!          | 'q(' int ',' R ')' | 'T(' G ')' | 'W[' int,* '](' G ')'
//! ```
//! `C` is a combination of divisor labels and `delta`, `R` of `u`, divisor
//! labels, `c` and `p1..ps`; `G` is a class on several slots written with
//! `D(i,j)`, `T(i,j)`, `c2`, `v1_2`, `p1_2`, products and sums.

use nakajima::bv_ring::{MultiPointClass, SurfaceModel};
use nakajima::lie_wedge::{WedgeAmbient, WedgeElement};
use nakajima::operator::{
    bracket, compose, nakajima, scale, sum, t_gamma, DivisorClass, OperatorExpr,
};
use nakajima::scalar::{q, Q};
use nakajima::{Error, Result};
use num_traits::{One, Zero};
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().map_err(|_| Error::Parse {
                pos: start,
                msg: "integer too large".into(),
            })?;
            out.push((start, Tok::Num(n)));
        } else if "+-*/.()[],^".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    model: &'a SurfaceModel,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn new(model: &'a SurfaceModel, text: &str) -> Result<Self> {
        Ok(Self {
            model,
            toks: lex(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.err("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn number(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected a number"),
        }
    }

    fn int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        let n = self.number()? as i64;
        Ok(if neg { -n } else { n })
    }

    /// `p` or `p/q`, unsigned.
    fn rational(&mut self) -> Result<Q> {
        let n = self.number()?;
        if self.is_sym('/') && matches!(self.peek_at(1), Some(Tok::Num(_))) {
            self.pos += 1;
            let d = self.number()?;
            if d == 0 {
                return self.err("zero denominator");
            }
            return Ok(Q::new((n as i64).into(), (d as i64).into()));
        }
        Ok(q(n as i64))
    }

    fn ident(&mut self) -> Option<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Some(s)
            }
            _ => None,
        }
    }

    // ---- operator expressions ----

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut items = vec![self.term()?];
        loop {
            if self.eat('+') {
                items.push(self.term()?);
            } else if self.is_sym('-') {
                self.pos += 1;
                let t = self.term_after_minus()?;
                items.push(t);
            } else {
                break;
            }
        }
        Ok(sum(items))
    }

    /// `a - 2*b` subtracts the whole composition term.
    fn term_after_minus(&mut self) -> Result<OperatorExpr> {
        let t = self.term()?;
        Ok(match t {
            OperatorExpr::Scale(s, x) => scale(-s, *x),
            other => scale(q(-1), other),
        })
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut acc = self.factor()?;
        while self.eat('.') {
            let rhs = self.factor()?;
            acc = compose(acc, rhs);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<OperatorExpr> {
        let neg = self.eat('-');
        let coeff = if matches!(self.peek(), Some(Tok::Num(_))) && !self.is_bare_zero() {
            let c = self.rational()?;
            self.expect('*')?;
            Some(c)
        } else {
            None
        };
        let body = self.primary()?;
        Ok(match (neg, coeff) {
            (false, None) => body,
            (true, None) => scale(q(-1), body),
            (neg, Some(c)) => scale(if neg { -c } else { c }, body),
        })
    }

    /// A literal `0` not followed by `*` or `/` is the zero operator.
    fn is_bare_zero(&self) -> bool {
        self.peek() == Some(&Tok::Num(0))
            && !matches!(self.peek_at(1), Some(Tok::Sym('*')) | Some(Tok::Sym('/')))
    }

    fn primary(&mut self) -> Result<OperatorExpr> {
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if self.eat('[') {
            let a = self.expr()?;
            self.expect(',')?;
            let b = self.expr()?;
            self.expect(']')?;
            return Ok(bracket(a, b));
        }
        if self.is_bare_zero() {
            self.pos += 1;
            return Ok(OperatorExpr::Zero);
        }
        let start = self.pos;
        let Some(name) = self.ident() else {
            return self.err("expected an operator");
        };
        match name.as_str() {
            "h" => Ok(OperatorExpr::H),
            "L0" => Ok(OperatorExpr::L0),
            "e" | "ft" | "f" => {
                self.expect('(')?;
                let a = self.divisor()?;
                self.expect(')')?;
                Ok(match name.as_str() {
                    "e" => OperatorExpr::E(a),
                    "ft" => OperatorExpr::Ft(a),
                    _ => OperatorExpr::F(a),
                })
            }
            "q" => {
                self.expect('(')?;
                let n = self.int()?;
                self.expect(',')?;
                let r = self.surface_class()?;
                self.expect(')')?;
                Ok(nakajima(n as i32, r))
            }
            "T" => {
                self.expect('(')?;
                let g = self.class(2)?;
                self.expect(')')?;
                t_gamma(self.model, g).map_err(|e| self.located(start, e))
            }
            "W" => {
                self.expect('[')?;
                let mut idx = vec![self.int()? as i32];
                while self.eat(',') {
                    idx.push(self.int()? as i32);
                }
                self.expect(']')?;
                self.expect('(')?;
                let g = self.class(idx.len())?;
                self.expect(')')?;
                Ok(OperatorExpr::Word(idx, g))
            }
            other => {
                self.pos = start;
                self.err(format!("unknown operator {other:?}"))
            }
        }
    }

    fn located(&self, tok: usize, e: Error) -> Error {
        Error::Parse {
            pos: self.toks.get(tok).map_or(self.end, |t| t.0),
            msg: e.to_string(),
        }
    }

    // ---- linear combinations of labels ----

    /// `[-] [rational ['*']] label` terms joined by `+`/`-`; a bare rational has label `None`.
    fn linear(&mut self) -> Result<Vec<(Q, Option<String>, usize)>> {
        let mut out = Vec::new();
        let mut sign = if self.eat('-') { -Q::one() } else { Q::one() };
        loop {
            let at = self.offset();
            let mut coeff = sign.clone();
            let mut label = None;
            if matches!(self.peek(), Some(Tok::Num(_))) {
                coeff *= self.rational()?;
                if self.eat('*') {
                    label = Some(self.ident().ok_or(Error::Parse {
                        pos: self.offset(),
                        msg: "expected a label".into(),
                    })?);
                }
            } else if let Some(l) = self.ident() {
                label = Some(l);
            } else {
                return self.err("expected a label or number");
            }
            out.push((coeff, label, at));
            if self.eat('+') {
                sign = Q::one();
            } else if self.eat('-') {
                sign = -Q::one();
            } else {
                return Ok(out);
            }
        }
    }

    fn divisor(&mut self) -> Result<DivisorClass> {
        let r = self.model.rank();
        let mut a = DivisorClass::zero(r);
        for (c, label, at) in self.linear()? {
            let Some(label) = label else {
                if c.is_zero() {
                    continue;
                }
                return Err(Error::Parse {
                    pos: at,
                    msg: "divisor classes have no constant term".into(),
                });
            };
            if label == "delta" {
                a.delta += c;
            } else if let Some(i) = self
                .model
                .divisors()
                .labels()
                .iter()
                .position(|l| *l == label)
            {
                a.divisor[i] += c;
            } else {
                return Err(Error::Parse {
                    pos: at,
                    msg: format!("unknown basis label {label:?}"),
                });
            }
        }
        Ok(a)
    }

    fn surface_class(&mut self) -> Result<MultiPointClass> {
        let mut out = MultiPointClass::zero(1);
        for (c, label, at) in self.linear()? {
            let b = match label {
                None if c.is_zero() => continue,
                None => {
                    return Err(Error::Parse {
                        pos: at,
                        msg: "write the unit class as u".into(),
                    })
                }
                Some(l) => self.model.basis_by_label(&l).ok_or(Error::Parse {
                    pos: at,
                    msg: format!("unknown basis label {l:?}"),
                })?,
            };
            out.add_assign_scaled(&MultiPointClass::decorated(1, &[(0, b)]), &c);
        }
        Ok(out)
    }

    // ---- classes on several slots ----

    fn class(&mut self, slots: usize) -> Result<MultiPointClass> {
        let mut acc = self.class_term(slots)?;
        loop {
            if self.eat('+') {
                acc = acc.plus(&self.class_term(slots)?);
            } else if self.eat('-') {
                acc = acc.minus(&self.class_term(slots)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn class_term(&mut self, slots: usize) -> Result<MultiPointClass> {
        let neg = self.eat('-');
        let mut acc = self.class_factor(slots)?;
        while self.eat('*') {
            let f = self.class_factor(slots)?;
            acc = self.model.multiply(&acc, &f)?;
        }
        Ok(if neg { acc.scaled(&q(-1)) } else { acc })
    }

    fn class_factor(&mut self, slots: usize) -> Result<MultiPointClass> {
        if self.eat('(') {
            let c = self.class(slots)?;
            self.expect(')')?;
            return Ok(c);
        }
        if matches!(self.peek(), Some(Tok::Num(_))) {
            let c = self.rational()?;
            return Ok(MultiPointClass::one(slots).scaled(&c));
        }
        let at = self.offset();
        let Some(name) = self.ident() else {
            return self.err("expected a class");
        };
        let bad = |msg: String| Error::Parse { pos: at, msg };
        let slot = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(i) if (1..=slots).contains(&i) => Ok(i - 1),
                _ => Err(bad(format!("slot {s:?} out of range 1..={slots}"))),
            }
        };
        if name == "D" || name == "T" {
            let (i, j) = if self.eat('(') {
                let i = self.number()?.to_string();
                self.expect(',')?;
                let j = self.number()?.to_string();
                self.expect(')')?;
                (slot(&i)?, slot(&j)?)
            } else if slots == 2 && name == "D" {
                (0, 1)
            } else {
                return Err(bad(format!("{name} needs slots, e.g. {name}(1,2)")));
            };
            if i == j {
                return Err(bad("a pair needs two distinct slots".into()));
            }
            if name == "D" {
                return Ok(MultiPointClass::diagonal(slots, i, j));
            }
            let mut cls = MultiPointClass::zero(slots);
            cls.add_term(
                nakajima::bv_ring::Term {
                    pairs: vec![nakajima::bv_ring::Pair::new(
                        i,
                        j,
                        nakajima::bv_ring::PairKind::Transcendental,
                    )],
                    deco: vec![SurfaceModel::UNIT; slots],
                },
                q(1),
            );
            return Ok(cls);
        }
        let (label, s) = if let Some((l, s)) = name.rsplit_once('_') {
            (l.to_string(), s.to_string())
        } else if let Some(s) = name
            .strip_prefix('c')
            .filter(|s| s.chars().all(|c| c.is_ascii_digit()) && !s.is_empty())
        {
            ("c".to_string(), s.to_string())
        } else if let Some(s) = name
            .strip_prefix('u')
            .filter(|s| s.chars().all(|c| c.is_ascii_digit()) && !s.is_empty())
        {
            ("u".to_string(), s.to_string())
        } else {
            return Err(bad(format!(
                "expected a slot-decorated class like c1 or v1_2, got {name:?}"
            )));
        };
        let b = self
            .model
            .basis_by_label(&label)
            .ok_or_else(|| bad(format!("unknown basis label {label:?}")))?;
        Ok(MultiPointClass::decorated(slots, &[(slot(&s)?, b)]))
    }

    // ---- wedge elements ----

    fn wedge(&mut self, amb: &Arc<WedgeAmbient>) -> Result<WedgeElement> {
        let mut acc = WedgeElement::zero(amb);
        let mut sign = if self.eat('-') { -Q::one() } else { Q::one() };
        loop {
            let mut coeff = sign.clone();
            if matches!(self.peek(), Some(Tok::Num(_))) {
                coeff *= self.rational()?;
                self.expect('*')?;
            }
            let a = self.wedge_vector(amb)?;
            self.expect('^')?;
            let b = self.wedge_vector(amb)?;
            acc = acc.plus(&WedgeElement::wedge(amb, &a, &b).scaled(&coeff))?;
            if self.eat('+') {
                sign = Q::one();
            } else if self.eat('-') {
                sign = -Q::one();
            } else {
                return Ok(acc);
            }
        }
    }

    fn wedge_vector(&mut self, amb: &Arc<WedgeAmbient>) -> Result<Vec<Q>> {
        let mut v = vec![Q::zero(); amb.dim()];
        let single = |s: &Self| match s.peek() {
            Some(Tok::Ident(l)) => amb.index_of(l),
            _ => None,
        };
        if let Some(i) = single(self) {
            self.pos += 1;
            v[i] = q(1);
            return Ok(v);
        }
        self.expect('(')?;
        for (c, label, at) in self.linear()? {
            let i = label
                .as_deref()
                .and_then(|l| amb.index_of(l))
                .ok_or(Error::Parse {
                    pos: at,
                    msg: "expected a basis label of W".into(),
                })?;
            v[i] += c;
        }
        self.expect(')')?;
        Ok(v)
    }
}

pub fn parse_expr(model: &SurfaceModel, text: &str) -> Result<OperatorExpr> {
    let mut p = Parser::new(model, text)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// A class on `slots` slots in correspondence syntax.
pub fn parse_class(model: &SurfaceModel, text: &str, slots: usize) -> Result<MultiPointClass> {
    let mut p = Parser::new(model, text)?;
    let c = p.class(slots)?;
    p.finish()?;
    Ok(c)
}

/// `e^a`, `f^a`, `a^b`, `e^f` with `a`, `b` labels or parenthesized combinations.
pub fn parse_wedge(
    amb: &Arc<WedgeAmbient>,
    model: &SurfaceModel,
    text: &str,
) -> Result<WedgeElement> {
    let mut p = Parser::new(model, text)?;
    let w = p.wedge(amb)?;
    p.finish()?;
    Ok(w)
}
