//! Recursive-descent parser for functor expressions.
//!
//! ```text
//! expr     := postfix (('∘' | '.') postfix)*
//! postfix  := primary ('^-1' | '⁻¹' | '[' int ']')*
//! primary  := '(' expr ')' | 'P' '(' expr ')' | atom
//! atom     := 'F' | "F'" | 'F' '(' param ')' | 'AJcomp' ['(' param ')']
//!           | 'FM' ['(' param ',' param ')'] | 'KNflop' '(' param [',' param] ')'
//!           | 'KNhilb' '(' param ')' | 'T' '(' param ')'
//!           | 'Phi' '(' param ':' category '->' category ')' | 'Id' ['(' category ')']
//! category := 'DbS' | 'DbHilb' ['(' param ')'] | 'DbPicbar' '(' param [',' param] ')'
//!           | 'DbB' | 'DbXflop' '(' param ')'
//! param    := affine integer expression in g, e.g. `2`, `-g`, `g-1`, `2g+1`
//! ```
//!
//! Positions in diagnostics are 0-based character offsets.

use super::expr::{compose_info, inverse_info, ptwist_info, TypeError, TypeInfo, MAX_PARAM};
use super::{Atom, AutoeqError, Category, Expr};
use crate::lattice::K3Context;

/// Largest genus for which the `Hilb^g ⇢ Picbar^{−g}` flop atoms exist.
pub const MAX_FLOP_GENUS: i64 = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Prime,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Arrow,
    Compose,
    Caret,
    InverseMark,
    Plus,
    Minus,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Prime => "`'`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Compose => "`∘`".into(),
            Tok::Caret => "`^`".into(),
            Tok::InverseMark => "`⁻¹`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, AutoeqError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let n = lit.parse::<i64>().map_err(|_| AutoeqError::Syntax {
                    position: start,
                    expected: vec![format!("an integer of magnitude at most {MAX_PARAM}")],
                    found: format!("`{lit}`"),
                })?;
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_alphabetic() => {
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), start));
                continue;
            }
            '\'' | '′' => Tok::Prime,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            '∘' | '.' => Tok::Compose,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' | '−' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '→' => Tok::Arrow,
            '-' | '−' => Tok::Minus,
            '⁻' if chars.get(i + 1) == Some(&'¹') => {
                i += 1;
                Tok::InverseMark
            }
            other => {
                return Err(AutoeqError::Syntax {
                    position: start,
                    expected: vec!["a functor expression".into()],
                    found: format!("`{other}`"),
                })
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, chars.len()));
    Ok(out)
}

/// Untyped syntax tree with source positions.
#[derive(Debug, Clone)]
enum Node {
    Atom(Atom, usize),
    Id(Option<Category>, usize),
    Compose(Vec<Node>, Vec<usize>),
    Inverse(Box<Node>, usize),
    Shift(Box<Node>, i64),
    PTwist(Box<Node>, usize),
}

impl Node {
    fn position(&self) -> usize {
        match self {
            Node::Atom(_, p) | Node::Id(_, p) | Node::PTwist(_, p) => *p,
            Node::Compose(fs, _) => fs[0].position(),
            Node::Inverse(n, _) | Node::Shift(n, _) => n.position(),
        }
    }

    /// Built only from bare `Id`s, so its category must come from context.
    fn is_polymorphic(&self) -> bool {
        match self {
            Node::Id(None, _) => true,
            Node::Inverse(n, _) | Node::Shift(n, _) => n.is_polymorphic(),
            Node::Compose(fs, _) => fs.iter().all(Node::is_polymorphic),
            _ => false,
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    ctx: &'a K3Context,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.idx].0
    }

    fn pos(&self) -> usize {
        self.toks[self.idx].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.idx].clone();
        if self.idx + 1 < self.toks.len() {
            self.idx += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, AutoeqError> {
        Err(AutoeqError::Syntax {
            position: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<usize, AutoeqError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.fail(&[&tok.describe()])
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Node, AutoeqError> {
        let mut factors = vec![self.postfix()?];
        let mut ops = Vec::new();
        while *self.peek() == Tok::Compose {
            ops.push(self.bump().1);
            factors.push(self.postfix()?);
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Node::Compose(factors, ops) })
    }

    fn postfix(&mut self) -> Result<Node, AutoeqError> {
        let mut node = self.primary()?;
        loop {
            match self.peek() {
                Tok::Caret => {
                    let p = self.bump().1;
                    self.expect(Tok::Minus)?;
                    if *self.peek() != Tok::Int(1) {
                        return self.fail(&["`1` (in `^-1`)"]);
                    }
                    self.bump();
                    node = Node::Inverse(Box::new(node), p);
                }
                Tok::InverseMark => {
                    let p = self.bump().1;
                    node = Node::Inverse(Box::new(node), p);
                }
                Tok::LBracket => {
                    self.bump();
                    let n = self.signed_int()?;
                    self.expect(Tok::RBracket)?;
                    node = Node::Shift(Box::new(node), n);
                }
                _ => return Ok(node),
            }
        }
    }

    fn signed_int(&mut self) -> Result<i64, AutoeqError> {
        let neg = if self.eat(&Tok::Minus) {
            true
        } else {
            self.eat(&Tok::Plus);
            false
        };
        match *self.peek() {
            Tok::Int(n) if n <= MAX_PARAM => {
                self.bump();
                Ok(if neg { -n } else { n })
            }
            _ => self.fail(&["an integer"]),
        }
    }

    fn primary(&mut self) -> Result<Node, AutoeqError> {
        let (tok, p) = (self.peek().clone(), self.pos());
        match tok {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                self.named(&name, p)
            }
            _ => self.fail(&["an atom", "`P(`", "`(`"]),
        }
    }

    fn named(&mut self, name: &str, p: usize) -> Result<Node, AutoeqError> {
        let g = self.ctx.g();
        let atom = match name {
            "P" => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(Node::PTwist(Box::new(inner), p));
            }
            "Id" => {
                let cat = if self.eat(&Tok::LParen) {
                    let c = self.category()?;
                    self.expect(Tok::RParen)?;
                    Some(c)
                } else {
                    None
                };
                return Ok(Node::Id(cat, p));
            }
            "F" if self.eat(&Tok::Prime) => Atom::FPrime,
            "F" => Atom::F { d: self.optional_params(1)?.map_or(-g, |v| v[0]) },
            "AJcomp" => Atom::AJcomp { d: self.optional_params(1)?.map_or(-g, |v| v[0]) },
            "FM" => match self.optional_params(2)? {
                Some(v) => Atom::FM { m: v[0], n: v[1] },
                None => Atom::FM { m: -1, n: -g },
            },
            "KNflop" => {
                self.expect(Tok::LParen)?;
                let k = self.param()?;
                let d = if self.eat(&Tok::Comma) { self.param()? } else { -g };
                self.expect(Tok::RParen)?;
                Atom::KNflop { k, d }
            }
            "KNhilb" => {
                if g > MAX_FLOP_GENUS {
                    return Err(AutoeqError::Unavailable {
                        name: name.into(),
                        position: p,
                        reason: format!("the Hilb^g flop equivalence is only modeled for g <= {MAX_FLOP_GENUS}"),
                    });
                }
                self.expect(Tok::LParen)?;
                let k = self.param()?;
                self.expect(Tok::RParen)?;
                Atom::KNhilb { k }
            }
            "T" => {
                self.expect(Tok::LParen)?;
                let k = self.param()?;
                self.expect(Tok::RParen)?;
                Atom::T { k }
            }
            "Phi" => {
                self.expect(Tok::LParen)?;
                let n = self.param()?;
                self.expect(Tok::Colon)?;
                let source = self.category()?;
                self.expect(Tok::Arrow)?;
                let target = self.category()?;
                self.expect(Tok::RParen)?;
                Atom::Phi { n, source, target }
            }
            _ => return Err(AutoeqError::UnknownAtom { name: name.into(), position: p }),
        };
        Ok(Node::Atom(atom, p))
    }

    /// `'(' param (',' param){n-1} ')'` if an opening parenthesis follows.
    fn optional_params(&mut self, n: usize) -> Result<Option<Vec<i64>>, AutoeqError> {
        if !self.eat(&Tok::LParen) {
            return Ok(None);
        }
        let mut v = vec![self.param()?];
        while v.len() < n {
            self.expect(Tok::Comma)?;
            v.push(self.param()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Some(v))
    }

    fn category(&mut self) -> Result<Category, AutoeqError> {
        let p = self.pos();
        let Tok::Ident(name) = self.peek().clone() else {
            return self.fail(&["a category"]);
        };
        self.bump();
        let ctx = self.ctx;
        match name.as_str() {
            "DbS" => Ok(Category::DbS),
            "DbB" => Ok(Category::DbB),
            "DbHilb" => {
                if self.eat(&Tok::LParen) {
                    let n = self.param()?;
                    self.expect(Tok::RParen)?;
                    if n != ctx.g() {
                        return Err(AutoeqError::Type {
                            position: p,
                            message: format!("only DbHilb(g) = DbHilb({}) is modeled, got DbHilb({n})", ctx.g()),
                        });
                    }
                }
                Ok(Category::DbHilb)
            }
            "DbPicbar" => {
                self.expect(Tok::LParen)?;
                let d = self.param()?;
                let t = if self.eat(&Tok::Comma) { self.param()? } else { 0 };
                self.expect(Tok::RParen)?;
                Ok(Category::picbar(ctx, d, t))
            }
            "DbXflop" => {
                self.expect(Tok::LParen)?;
                let d = self.param()?;
                self.expect(Tok::RParen)?;
                Ok(Category::DbXflop { d })
            }
            _ => Err(AutoeqError::Syntax {
                position: p,
                expected: ["DbS", "DbHilb", "DbPicbar", "DbB", "DbXflop"].iter().map(|s| s.to_string()).collect(),
                found: format!("`{name}`"),
            }),
        }
    }

    /// Affine integer expression in `g`, evaluated at the context genus.
    fn param(&mut self) -> Result<i64, AutoeqError> {
        let start = self.pos();
        let mut total: i128 = 0;
        let mut first = true;
        loop {
            let sign: i128 = match self.peek() {
                Tok::Minus => {
                    self.bump();
                    -1
                }
                Tok::Plus => {
                    self.bump();
                    1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let term: i128 = match self.peek().clone() {
                Tok::Int(n) => {
                    self.bump();
                    if matches!(self.peek(), Tok::Ident(s) if s == "g") {
                        self.bump();
                        n as i128 * self.ctx.g() as i128
                    } else {
                        n as i128
                    }
                }
                Tok::Ident(s) if s == "g" => {
                    self.bump();
                    self.ctx.g() as i128
                }
                _ => return self.fail(&["an integer", "`g`"]),
            };
            total += sign * term;
            if total.abs() > (MAX_PARAM as i128) * 4 {
                break;
            }
        }
        if total.abs() > MAX_PARAM as i128 {
            return Err(AutoeqError::Syntax {
                position: start,
                expected: vec![format!("a parameter of magnitude at most {MAX_PARAM}")],
                found: total.to_string(),
            });
        }
        Ok(total as i64)
    }
}

fn type_error(position: usize, e: TypeError) -> AutoeqError {
    AutoeqError::Type { position, message: e.to_string() }
}

/// Builds the typed expression; `hint` instantiates bare identities.
fn elaborate(node: &Node, ctx: &K3Context, hint: Option<Category>) -> Result<(Expr, TypeInfo), AutoeqError> {
    match node {
        Node::Atom(a, _) => Ok((Expr::Atom(a.clone()), a.info(ctx))),
        Node::Id(cat, p) => {
            let c = cat.or(hint).ok_or_else(|| AutoeqError::Type {
                position: *p,
                message: "cannot infer the category of `Id`; write Id(<category>)".into(),
            })?;
            let e = Expr::Id(c);
            let t = e.info(ctx).expect("identity is well typed");
            Ok((e, t))
        }
        Node::Inverse(inner, p) => {
            let (e, t) = elaborate(inner, ctx, hint)?;
            let t = inverse_info(t).map_err(|err| type_error(*p, err))?;
            Ok((Expr::inverse(e), t))
        }
        Node::Shift(inner, n) => {
            let (e, t) = elaborate(inner, ctx, hint)?;
            Ok((Expr::shift(e, *n), t))
        }
        Node::PTwist(inner, p) => {
            let (e, t) = elaborate(inner, ctx, None)?;
            let t = ptwist_info(t).map_err(|err| type_error(*p, err))?;
            Ok((Expr::ptwist(e), t))
        }
        Node::Compose(factors, ops) => {
            let n = factors.len();
            let mut done: Vec<Option<(Expr, TypeInfo)>> = vec![None; n];
            for (i, f) in factors.iter().enumerate() {
                if !f.is_polymorphic() {
                    done[i] = Some(elaborate(f, ctx, None)?);
                } else if hint.is_some() && factors.iter().all(Node::is_polymorphic) {
                    done[i] = Some(elaborate(f, ctx, hint)?);
                }
            }
            for i in (0..n).rev() {
                if done[i].is_none() && i + 1 < n {
                    if let Some((_, t)) = &done[i + 1] {
                        let c = t.target;
                        done[i] = Some(elaborate(&factors[i], ctx, Some(c))?);
                    }
                }
            }
            for i in 0..n {
                if done[i].is_none() && i > 0 {
                    if let Some((_, t)) = &done[i - 1] {
                        let c = t.source;
                        done[i] = Some(elaborate(&factors[i], ctx, Some(c))?);
                    }
                }
            }
            let mut exprs = Vec::with_capacity(n);
            let mut infos = Vec::with_capacity(n);
            for (i, d) in done.into_iter().enumerate() {
                let (e, t) = match d {
                    Some(x) => x,
                    None => elaborate(&factors[i], ctx, None)?,
                };
                exprs.push(e);
                infos.push(t);
            }
            let t = compose_info(&infos).map_err(|err| {
                let pos = match err {
                    TypeError::Mismatch { index, .. } => ops[index],
                    _ => factors[0].position(),
                };
                type_error(pos, err)
            })?;
            Ok((Expr::compose(exprs), t))
        }
    }
}

/// Parses and type-checks `text` at the genus of `ctx`.
pub fn parse(ctx: &K3Context, text: &str) -> Result<Expr, AutoeqError> {
    parse_typed(ctx, text).map(|(e, _)| e)
}

pub fn parse_typed(ctx: &K3Context, text: &str) -> Result<(Expr, TypeInfo), AutoeqError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, idx: 0, ctx };
    let node = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["`∘`", "`.`", "`^-1`", "`[`", "end of input"]);
    }
    elaborate(&node, ctx, None)
}
