use alloc::string::ToString;
use alloc::vec::Vec;

use super::ast::{ConceptDef, ModelDef, Program, Term, Ty};
use super::lexer::{tokenize, Keyword, Tok, Token};
use super::ParseError;
use crate::ident::{DeclList, Ident};

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.span.line,
            col: t.span.col,
            found: t.tok.to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.advance();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expect_kw(&mut self, kw: Keyword) -> PResult<()> {
        if *self.peek() == Tok::Kw(kw) {
            self.advance();
            Ok(())
        } else {
            let name = alloc::format!("`{}`", kw.as_str());
            Err(self.error(&[&name]))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Tok::Ident(id) => {
                let id = id.clone();
                self.advance();
                Ok(id)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut concepts = Vec::new();
        while *self.peek() == Tok::Kw(Keyword::Concept) {
            concepts.push(self.concept_def()?);
        }
        let mut models = Vec::new();
        while *self.peek() == Tok::Kw(Keyword::Model) {
            models.push(self.model_def()?);
        }
        if self.starts_term() {
            let main = self.term()?;
            if *self.peek() != Tok::Eof {
                return Err(self.error(&["end of input"]));
            }
            Ok(Program { concepts, models, main })
        } else if models.is_empty() {
            Err(self.error(&["`concept`", "`model`", "term"]))
        } else {
            Err(self.error(&["`model`", "term"]))
        }
    }

    fn concept_def(&mut self) -> PResult<ConceptDef> {
        self.expect_kw(Keyword::Concept)?;
        let name = self.ident()?;
        let mut members = DeclList::new();
        while let Tok::Ident(_) = self.peek() {
            let m = self.ident()?;
            self.expect(Tok::Colon, "`:`")?;
            members.push(m, self.ty()?);
        }
        if *self.peek() != Tok::Kw(Keyword::Endc) {
            return Err(self.error(&["identifier", "`endc`"]));
        }
        self.advance();
        Ok(ConceptDef { name, members })
    }

    fn model_def(&mut self) -> PResult<ModelDef> {
        self.expect_kw(Keyword::Model)?;
        let name = self.ident()?;
        self.expect_kw(Keyword::Of)?;
        let concept = self.ident()?;
        let mut members = DeclList::new();
        while let Tok::Ident(_) = self.peek() {
            let m = self.ident()?;
            self.expect(Tok::Eq, "`=`")?;
            members.push(m, self.term()?);
        }
        if *self.peek() != Tok::Kw(Keyword::Endm) {
            return Err(self.error(&["identifier", "`endm`"]));
        }
        self.advance();
        Ok(ModelDef { name, concept, members })
    }

    fn ty(&mut self) -> PResult<Ty> {
        if let (Tok::Ident(c), Tok::Hash) = (self.peek(), self.peek_at(1)) {
            let c = c.clone();
            self.advance();
            self.advance();
            return Ok(Ty::concept_prm(c, self.ty()?));
        }
        self.arr_ty()
    }

    fn arr_ty(&mut self) -> PResult<Ty> {
        let dom = self.atom_ty()?;
        if *self.peek() == Tok::Arrow {
            self.advance();
            Ok(Ty::arrow(dom, self.arr_ty()?))
        } else {
            Ok(dom)
        }
    }

    fn atom_ty(&mut self) -> PResult<Ty> {
        match self.peek() {
            Tok::Kw(Keyword::Bool) => {
                self.advance();
                Ok(Ty::Bool)
            }
            Tok::Kw(Keyword::Nat) => {
                self.advance();
                Ok(Ty::Nat)
            }
            Tok::LParen => {
                self.advance();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(_) => Err(self.error(&["`#`"]).at_next(self)),
            _ => Err(self.error(&["`Bool`", "`Nat`", "`(`", "identifier"])),
        }
    }

    fn starts_term(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Backslash
                | Tok::Kw(Keyword::Let | Keyword::If | Keyword::Succ | Keyword::Pred | Keyword::IsZero | Keyword::Plus)
        ) || self.starts_aterm()
    }

    fn starts_aterm(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Kw(Keyword::True | Keyword::False) | Tok::Nat(_) | Tok::Ident(_) | Tok::LParen
        )
    }

    fn term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Backslash => {
                self.advance();
                let x = self.ident()?;
                match self.peek() {
                    Tok::Colon => {
                        self.advance();
                        let ann = self.ty()?;
                        self.expect(Tok::Dot, "`.`")?;
                        Ok(Term::abs(x, ann, self.term()?))
                    }
                    Tok::Hash => {
                        self.advance();
                        let concept = self.ident()?;
                        self.expect(Tok::Dot, "`.`")?;
                        Ok(Term::cabs(x, concept, self.term()?))
                    }
                    _ => Err(self.error(&["`:`", "`#`"])),
                }
            }
            Tok::Kw(Keyword::Let) => {
                self.advance();
                let x = self.ident()?;
                self.expect(Tok::Eq, "`=`")?;
                let bound = self.term()?;
                self.expect_kw(Keyword::In)?;
                Ok(Term::let_(x, bound, self.term()?))
            }
            Tok::Kw(Keyword::If) => {
                self.advance();
                let c = self.term()?;
                self.expect_kw(Keyword::Then)?;
                let t = self.term()?;
                self.expect_kw(Keyword::Else)?;
                Ok(Term::if_(c, t, self.term()?))
            }
            _ => self.app_term(),
        }
    }

    fn app_term(&mut self) -> PResult<Term> {
        let mut head = match self.peek() {
            Tok::Kw(Keyword::Succ) => {
                self.advance();
                Term::succ(self.aterm()?)
            }
            Tok::Kw(Keyword::Pred) => {
                self.advance();
                Term::pred(self.aterm()?)
            }
            Tok::Kw(Keyword::IsZero) => {
                self.advance();
                Term::iszero(self.aterm()?)
            }
            Tok::Kw(Keyword::Plus) => {
                self.advance();
                let a = self.aterm()?;
                Term::plus(a, self.aterm()?)
            }
            _ => self.aterm()?,
        };
        loop {
            if *self.peek() == Tok::Hash {
                self.advance();
                head = Term::mapp(head, self.ident()?);
            } else if self.starts_aterm() && !self.at_member_def() {
                head = Term::app(head, self.aterm()?);
            } else {
                return Ok(head);
            }
        }
    }

    /// `IDENT =` starts the next member definition of a model, never an
    /// argument.
    fn at_member_def(&self) -> bool {
        matches!((self.peek(), self.peek_at(1)), (Tok::Ident(_), Tok::Eq))
    }

    fn aterm(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Kw(Keyword::True) => {
                self.advance();
                Ok(Term::True)
            }
            Tok::Kw(Keyword::False) => {
                self.advance();
                Ok(Term::False)
            }
            Tok::Nat(n) => {
                self.advance();
                Ok(Term::Nat(n))
            }
            Tok::Ident(x) => {
                self.advance();
                if *self.peek() == Tok::ColonColon {
                    self.advance();
                    Ok(Term::CInvk(x, self.ident()?))
                } else {
                    Ok(Term::Var(x))
                }
            }
            Tok::LParen => {
                self.advance();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => Err(self.error(&["`true`", "`false`", "numeral", "identifier", "`(`"])),
        }
    }
}

impl ParseError {
    fn at_next(mut self, p: &Parser) -> ParseError {
        let next = &p.toks[(p.pos + 1).min(p.toks.len() - 1)];
        self.line = next.span.line;
        self.col = next.span.col;
        self.found = next.tok.to_string();
        self
    }
}

/// Parses a whole program: concept definitions, then model definitions,
/// then the main term.
pub fn parse(source: &str) -> Result<Program, ParseError> {
    let toks = tokenize(source)?;
    Parser { toks, pos: 0 }.program()
}

/// Parses a single term, mostly for tests and tooling.
pub fn parse_term(source: &str) -> Result<Term, ParseError> {
    let toks = tokenize(source)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(t)
}

/// Parses a single type.
pub fn parse_ty(source: &str) -> Result<Ty, ParseError> {
    let toks = tokenize(source)?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input"]));
    }
    Ok(t)
}
