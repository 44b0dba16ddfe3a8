use num_bigint::BigUint;

use crate::error::{Result, Span, TextError};
use crate::lexer::{lex, Tok, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RKind {
    Star,
    Arrow(Box<RKind>, Box<RKind>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TyBinder {
    pub name: String,
    pub kind: Option<RKind>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmBinder {
    pub name: String,
    pub ty: Option<RType>,
    pub span: Span,
}

/// Right-hand side of `name := ...`, read both ways until elaboration
/// decides which namespace `name` lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstArg {
    pub name: String,
    pub span: Span,
    pub as_term: Option<RTerm>,
    pub as_type: Option<RType>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RType {
    Var(String, Span),
    App(Box<RType>, Box<RType>),
    Arrow(Box<RType>, Box<RType>),
    Lam(TyBinder, Box<RType>),
    Forall(TyBinder, Box<RType>),
    Subst(Box<RType>, Vec<SubstArg>),
    Macro(String, Span, Vec<RType>, Vec<TyBinder>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RTerm {
    Var(String, Span),
    Num(BigUint, Span),
    Lam(TmBinder, Box<RTerm>),
    TyLam(TyBinder, Box<RTerm>),
    App(Box<RTerm>, Box<RTerm>),
    TyApp(Box<RTerm>, RType, Span),
    Call(Box<RTerm>, Vec<RTerm>, Span),
    Subst(Box<RTerm>, Vec<SubstArg>),
    Plus(Box<RTerm>, Box<RTerm>, Span),
    Times(Box<RTerm>, Box<RTerm>, Span),
    Macro(String, Span, Vec<RType>, Vec<RTerm>),
}

impl RTerm {
    pub fn span(&self) -> Span {
        match self {
            RTerm::Var(_, s) | RTerm::Num(_, s) => *s,
            RTerm::Lam(b, _) => b.span,
            RTerm::TyLam(b, _) => b.span,
            RTerm::App(f, _) | RTerm::Subst(f, _) => f.span(),
            RTerm::TyApp(_, _, s) | RTerm::Call(_, _, s) | RTerm::Plus(_, _, s) | RTerm::Times(_, _, s) => *s,
            RTerm::Macro(_, s, _, _) => *s,
        }
    }
}

impl RType {
    pub fn span(&self) -> Span {
        match self {
            RType::Var(_, s) | RType::Macro(_, s, _, _) => *s,
            RType::App(f, _) | RType::Arrow(f, _) | RType::Subst(f, _) => f.span(),
            RType::Lam(b, _) | RType::Forall(b, _) => b.span,
        }
    }
}

#[derive(Clone)]
pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub fn new(src: &str, line: usize) -> Result<Parser> {
        Ok(Parser { toks: lex(src, line)?, pos: 0 })
    }

    pub fn from_tokens(toks: Vec<Token>) -> Parser {
        Parser { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn space_before(&self) -> bool {
        self.toks[self.pos].space_before
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {t}, found {}", self.peek())))
        }
    }

    pub fn error(&self, msg: &str) -> TextError {
        TextError::Parse(self.span(), msg.to_string())
    }

    pub fn at_eof(&self) -> bool {
        matches!(self.peek(), Tok::Eof)
    }

    pub fn expect_eof(&self) -> Result<()> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(&format!("unexpected {}", self.peek())))
        }
    }

    pub fn is(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub fn skip(&mut self, t: &Tok) -> Result<()> {
        self.expect(t)
    }

    fn ident(&mut self) -> Result<(String, Span)> {
        let span = self.span();
        match self.bump() {
            Tok::Ident(s) => Ok((s, span)),
            t => {
                self.pos -= 1;
                Err(self.error(&format!("expected an identifier, found {t}")))
            }
        }
    }

    pub fn kind(&mut self) -> Result<RKind> {
        let left = match self.peek() {
            Tok::Star => {
                self.bump();
                RKind::Star
            }
            Tok::TimesOp => {
                self.bump();
                RKind::Star
            }
            Tok::LParen => {
                self.bump();
                let k = self.kind()?;
                self.expect(&Tok::RParen)?;
                k
            }
            t => return Err(self.error(&format!("expected a kind, found {t}"))),
        };
        if self.eat(&Tok::FatArrow) {
            Ok(RKind::Arrow(Box::new(left), Box::new(self.kind()?)))
        } else {
            Ok(left)
        }
    }

    fn ty_binders(&mut self) -> Result<Vec<TyBinder>> {
        let mut out = Vec::new();
        loop {
            let (name, span) = self.ident()?;
            let kind = if self.eat(&Tok::Colon) { Some(self.kind()?) } else { None };
            out.push(TyBinder { name, kind, span });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        Ok(out)
    }

    fn tm_binders(&mut self) -> Result<Vec<TmBinder>> {
        let mut out = Vec::new();
        loop {
            let (name, span) = self.ident()?;
            let ty = if self.eat(&Tok::Colon) { Some(self.ty()?) } else { None };
            out.push(TmBinder { name, ty, span });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        Ok(out)
    }

    pub fn ty(&mut self) -> Result<RType> {
        match self.peek() {
            Tok::Bang | Tok::Lambda => {
                let forall = self.bump() == Tok::Bang;
                let bs = self.ty_binders()?;
                let body = self.ty()?;
                Ok(bs.into_iter().rev().fold(body, |acc, b| {
                    if forall {
                        RType::Forall(b, Box::new(acc))
                    } else {
                        RType::Lam(b, Box::new(acc))
                    }
                }))
            }
            _ => {
                let l = self.ty_app()?;
                if self.eat(&Tok::Arrow) {
                    Ok(RType::Arrow(Box::new(l), Box::new(self.ty()?)))
                } else {
                    Ok(l)
                }
            }
        }
    }

    fn ty_starts(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::LParen | Tok::Macro(_))
    }

    fn ty_app(&mut self) -> Result<RType> {
        let mut t = self.ty_atom()?;
        while self.ty_starts() {
            let a = self.ty_atom()?;
            t = RType::App(Box::new(t), Box::new(a));
        }
        if matches!(self.peek(), Tok::Bang | Tok::Lambda) {
            let a = self.ty()?;
            t = RType::App(Box::new(t), Box::new(a));
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> Result<RType> {
        let span = self.span();
        let mut t = match self.peek().clone() {
            Tok::Ident(_) => {
                let (n, s) = self.ident()?;
                RType::Var(n, s)
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(&Tok::RParen)?;
                t
            }
            Tok::Macro(m) => {
                self.bump();
                self.expect(&Tok::LParen)?;
                if m == "ex" {
                    let bs = self.ty_binders()?;
                    let body = self.ty()?;
                    self.expect(&Tok::RParen)?;
                    RType::Macro(m, span, vec![body], bs)
                } else {
                    let mut args = vec![self.ty()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.ty()?);
                    }
                    self.expect(&Tok::RParen)?;
                    RType::Macro(m, span, args, Vec::new())
                }
            }
            t => return Err(self.error(&format!("expected a type, found {t}"))),
        };
        while self.is(&Tok::LBrack) && self.subst_ahead() {
            let subs = self.subst_list()?;
            t = RType::Subst(Box::new(t), subs);
        }
        Ok(t)
    }

    fn subst_ahead(&self) -> bool {
        matches!(self.peek_at(1), Tok::Ident(_)) && matches!(self.peek_at(2), Tok::Assign)
    }

    fn subst_list(&mut self) -> Result<Vec<SubstArg>> {
        self.expect(&Tok::LBrack)?;
        let mut out = Vec::new();
        loop {
            let (name, span) = self.ident()?;
            self.expect(&Tok::Assign)?;
            let start = self.pos;
            let as_term = match self.term() {
                Ok(t) if matches!(self.peek(), Tok::Comma | Tok::RBrack) => Some(t),
                _ => None,
            };
            let after_term = self.pos;
            self.pos = start;
            let as_type = match self.ty() {
                Ok(t) if matches!(self.peek(), Tok::Comma | Tok::RBrack) => Some(t),
                _ => None,
            };
            let after_type = self.pos;
            match (&as_term, &as_type) {
                (Some(_), _) => self.pos = after_term,
                (None, Some(_)) => self.pos = after_type,
                (None, None) => {
                    self.pos = start;
                    self.term()?;
                    return Err(self.error("expected `,` or `]` in substitution"));
                }
            }
            out.push(SubstArg { name, span, as_term, as_type });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBrack)?;
        Ok(out)
    }

    /// A full term: binders, explicit `.` application, sums and products.
    pub fn term(&mut self) -> Result<RTerm> {
        match self.peek() {
            Tok::Lambda => {
                self.bump();
                let bs = self.tm_binders()?;
                let body = self.term()?;
                Ok(bs.into_iter().rev().fold(body, |acc, b| RTerm::Lam(b, Box::new(acc))))
            }
            Tok::BigLambda => {
                self.bump();
                let bs = self.ty_binders()?;
                let body = self.term()?;
                Ok(bs.into_iter().rev().fold(body, |acc, b| RTerm::TyLam(b, Box::new(acc))))
            }
            _ => {
                let mut t = self.sum()?;
                while self.is(&Tok::Dot) {
                    self.bump();
                    let r = match self.peek() {
                        Tok::Lambda | Tok::BigLambda => self.term()?,
                        _ => self.sum()?,
                    };
                    t = RTerm::App(Box::new(t), Box::new(r));
                }
                Ok(t)
            }
        }
    }

    fn sum(&mut self) -> Result<RTerm> {
        let mut t = self.prod()?;
        while self.is(&Tok::PlusOp) {
            let span = self.span();
            self.bump();
            let r = self.prod()?;
            t = RTerm::Plus(Box::new(t), Box::new(r), span);
        }
        Ok(t)
    }

    fn prod(&mut self) -> Result<RTerm> {
        let mut t = self.app()?;
        while self.is(&Tok::TimesOp) {
            let span = self.span();
            self.bump();
            let r = self.app()?;
            t = RTerm::Times(Box::new(t), Box::new(r), span);
        }
        Ok(t)
    }

    fn tm_starts(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Num(_) | Tok::LParen | Tok::Macro(_) | Tok::LBrack)
    }

    fn app(&mut self) -> Result<RTerm> {
        let mut t = self.postfix()?;
        loop {
            if self.is(&Tok::LBrack) {
                t = self.brackets(t)?;
            } else if self.tm_starts() {
                let a = self.postfix()?;
                t = RTerm::App(Box::new(t), Box::new(a));
            } else if matches!(self.peek(), Tok::Lambda | Tok::BigLambda) {
                let a = self.term()?;
                return Ok(RTerm::App(Box::new(t), Box::new(a)));
            } else {
                return Ok(t);
            }
        }
    }

    fn brackets(&mut self, t: RTerm) -> Result<RTerm> {
        if self.subst_ahead() {
            let subs = self.subst_list()?;
            return Ok(RTerm::Subst(Box::new(t), subs));
        }
        let span = self.span();
        self.expect(&Tok::LBrack)?;
        let mut t = RTerm::TyApp(Box::new(t), self.ty()?, span);
        while self.eat(&Tok::Comma) {
            let s = self.span();
            t = RTerm::TyApp(Box::new(t), self.ty()?, s);
        }
        self.expect(&Tok::RBrack)?;
        Ok(t)
    }

    fn postfix(&mut self) -> Result<RTerm> {
        let mut t = self.atom()?;
        loop {
            if self.is(&Tok::LBrack) && !self.space_before() {
                t = self.brackets(t)?;
            } else if self.is(&Tok::LParen) && !self.space_before() {
                let span = self.span();
                self.bump();
                let mut args = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.expect(&Tok::RParen)?;
                t = RTerm::Call(Box::new(t), args, span);
            } else {
                return Ok(t);
            }
        }
    }

    fn atom(&mut self) -> Result<RTerm> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(_) => {
                let (n, s) = self.ident()?;
                Ok(RTerm::Var(n, s))
            }
            Tok::Num(n) => {
                self.bump();
                Ok(RTerm::Num(n, span))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::Macro(m) => {
                self.bump();
                let mut tys = Vec::new();
                if self.is(&Tok::LBrack) {
                    self.bump();
                    tys.push(self.ty()?);
                    while self.eat(&Tok::Comma) {
                        tys.push(self.ty()?);
                    }
                    self.expect(&Tok::RBrack)?;
                }
                self.expect(&Tok::LParen)?;
                let mut args = vec![self.term()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.expect(&Tok::RParen)?;
                Ok(RTerm::Macro(m, span, tys, args))
            }
            t => Err(self.error(&format!("expected a term, found {t}"))),
        }
    }
}

pub fn parse_kind(src: &str) -> Result<RKind> {
    let mut p = Parser::new(src, 1)?;
    let k = p.kind()?;
    p.expect_eof()?;
    Ok(k)
}

pub fn parse_type(src: &str) -> Result<RType> {
    let mut p = Parser::new(src, 1)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

pub fn parse_term(src: &str) -> Result<RTerm> {
    let mut p = Parser::new(src, 1)?;
    let t = p.term()?;
    p.expect_eof()?;
    Ok(t)
}
