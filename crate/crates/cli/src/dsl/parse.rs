//! Recursive-descent parser for [`Document`]s.

use catlift::pattern::{Predicate, Term, TriplePattern};
use catlift::{Error, Result};

use super::ast::*;
use super::lex::{tokenize, Tok, Token};

/// Words that open a statement inside a block.
pub(crate) const STMT_KEYWORDS: [&str; 7] = ["objects", "arrow", "eq", "object", "embed", "bind", "map"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn punct(&mut self, p: &str) -> Result<()> {
        if self.at_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn keyword(&mut self, w: &str) -> Result<()> {
        if self.at_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{w}`, found {}", self.describe()))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Word(w)) => format!("`{w}`"),
            Some(Tok::Str(s)) => format!("\"{s}\""),
            Some(Tok::Punct(p)) => format!("`{p}`"),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek() {
            Some(Tok::Word(w)) | Some(Tok::Str(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected a name, found {}", self.describe())),
        }
    }

    fn skip_semis(&mut self) {
        while self.at_punct(";") {
            self.pos += 1;
        }
    }

    fn path(&mut self) -> Result<Vec<String>> {
        self.punct("[")?;
        let mut steps = Vec::new();
        while !self.at_punct("]") {
            steps.push(self.name()?);
        }
        self.punct("]")?;
        Ok(steps)
    }

    fn document(&mut self) -> Result<Document> {
        let mut items = Vec::new();
        while self.peek().is_some() {
            self.skip_semis();
            if self.peek().is_none() {
                break;
            }
            items.push(self.item()?);
        }
        Ok(Document { items })
    }

    fn item(&mut self) -> Result<Item> {
        if self.at_punct("(") {
            return Ok(Item::Triple(self.triple()?));
        }
        let kw = match self.peek() {
            Some(Tok::Word(w)) => w.clone(),
            _ => return self.err(format!("expected a declaration, found {}", self.describe())),
        };
        self.pos += 1;
        match kw.as_str() {
            "schema" => {
                let name = self.name()?;
                self.punct("{")?;
                let body = self.schema_body()?;
                self.punct("}")?;
                Ok(Item::Schema(SchemaDecl { name, body }))
            }
            "functor" => Ok(Item::Functor(self.functor()?)),
            "strict" => Ok(Item::Strict(self.functor()?)),
            "query" | "probe" => Ok(Item::Query(self.query(kw == "probe")?)),
            "constraint" => Ok(Item::Constraint(self.constraint()?)),
            "types" => {
                self.punct("{")?;
                let mut out = Vec::new();
                while !self.at_punct("}") {
                    let t = self.term()?;
                    self.punct("->")?;
                    out.push((t, self.name()?));
                    self.skip_semis();
                }
                self.punct("}")?;
                Ok(Item::Types(out))
            }
            "labels" => {
                self.punct("{")?;
                let mut out = Vec::new();
                while !self.at_punct("}") {
                    let o = self.name()?;
                    self.punct("->")?;
                    out.push((o, self.name()?));
                    self.skip_semis();
                }
                self.punct("}")?;
                Ok(Item::Labels(out))
            }
            other => {
                self.pos -= 1;
                self.err(format!("unknown declaration `{other}`"))
            }
        }
    }

    fn schema_stmt(&mut self) -> Result<Option<SchemaStmt>> {
        if self.at_word("objects") {
            self.pos += 1;
            let mut names = Vec::new();
            loop {
                match self.peek() {
                    Some(Tok::Word(w)) if !STMT_KEYWORDS.contains(&w.as_str()) => {}
                    Some(Tok::Str(_)) => {}
                    _ => break,
                }
                names.push(self.name()?);
            }
            return Ok(Some(SchemaStmt::Objects(names)));
        }
        if self.at_word("arrow") {
            self.pos += 1;
            let name = self.name()?;
            self.punct(":")?;
            let source = self.name()?;
            self.punct("->")?;
            let target = self.name()?;
            return Ok(Some(SchemaStmt::Arrow { name, source, target }));
        }
        if self.at_word("eq") {
            self.pos += 1;
            let source = self.name()?;
            let lhs = self.path()?;
            self.punct("=")?;
            let rhs = self.path()?;
            return Ok(Some(SchemaStmt::Eq { source, lhs, rhs }));
        }
        Ok(None)
    }

    fn schema_body(&mut self) -> Result<SchemaBody> {
        let mut stmts = Vec::new();
        loop {
            self.skip_semis();
            if self.at_punct("}") {
                return Ok(SchemaBody { stmts });
            }
            match self.schema_stmt()? {
                Some(s) => stmts.push(s),
                None => return self.err(format!("expected a schema statement, found {}", self.describe())),
            }
        }
    }

    /// After the keyword: `A -> B` or `f -> [g h]`.
    fn map_tail(&mut self) -> Result<MapStmt> {
        let from = self.name()?;
        self.punct("->")?;
        if self.at_punct("[") {
            Ok(MapStmt::Arrow(from, self.path()?))
        } else {
            Ok(MapStmt::Object(from, self.name()?))
        }
    }

    fn map_stmt(&mut self, keywords: &[&str]) -> Result<Option<MapStmt>> {
        for k in keywords {
            if self.at_word(k) {
                self.pos += 1;
                let m = self.map_tail()?;
                let ok = !matches!(
                    (&m, *k),
                    (MapStmt::Object(..), "arrow") | (MapStmt::Arrow(..), "object")
                );
                if !ok {
                    return self.err(format!("`{k}` does not match its right-hand side"));
                }
                return Ok(Some(m));
            }
        }
        Ok(None)
    }

    fn map_body(&mut self) -> Result<Vec<MapStmt>> {
        let mut out = Vec::new();
        loop {
            self.skip_semis();
            if self.at_punct("}") {
                return Ok(out);
            }
            match self.map_stmt(&["object", "arrow"])? {
                Some(m) => out.push(m),
                None => return self.err(format!("expected `object` or `arrow`, found {}", self.describe())),
            }
        }
    }

    fn functor(&mut self) -> Result<FunctorDecl> {
        let name = self.name()?;
        self.punct(":")?;
        let source = self.name()?;
        self.punct("->")?;
        let target = self.name()?;
        self.punct("{")?;
        let maps = self.map_body()?;
        self.punct("}")?;
        Ok(FunctorDecl {
            name,
            source,
            target,
            maps,
        })
    }

    fn block<T>(&mut self, kw: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.keyword(kw)?;
        self.punct("{")?;
        let v = f(self)?;
        self.punct("}")?;
        self.skip_semis();
        Ok(v)
    }

    fn query(&mut self, probe: bool) -> Result<QueryDecl> {
        let name = self.name()?;
        self.keyword("on")?;
        let on = self.name()?;
        self.punct("{")?;
        self.skip_semis();
        let result = self.block("result", Self::schema_body)?;
        let onto = self.block("onto", Self::map_body)?;
        let mut where_ = None;
        let mut select = None;
        if !probe && self.at_word("where") {
            where_ = Some(self.block("where", Self::where_body)?);
        }
        if !probe && self.at_word("select") {
            select = Some(self.block("select", Self::select_body)?);
        }
        self.punct("}")?;
        Ok(QueryDecl {
            probe,
            name,
            on,
            result,
            onto,
            where_,
            select,
        })
    }

    fn where_body(&mut self) -> Result<WhereBlock> {
        let mut w = WhereBlock::default();
        loop {
            self.skip_semis();
            if self.at_punct("}") {
                return Ok(w);
            }
            if let Some(s) = self.schema_stmt()? {
                w.shape.stmts.push(s);
            } else if let Some(m) = self.map_stmt(&["embed"])? {
                w.embeds.push(m);
            } else if self.at_word("bind") {
                self.pos += 1;
                let var = self.name()?;
                self.punct("->")?;
                self.punct("(")?;
                let table = self.name()?;
                self.punct(",")?;
                let row = self.name()?;
                self.punct(")")?;
                w.binds.push(Bind { var, table, row });
            } else {
                return self.err(format!("unexpected {} in where", self.describe()));
            }
        }
    }

    fn select_body(&mut self) -> Result<SelectBlock> {
        let mut s = SelectBlock::default();
        loop {
            self.skip_semis();
            if self.at_punct("}") {
                return Ok(s);
            }
            if let Some(st) = self.schema_stmt()? {
                s.shape.stmts.push(st);
            } else if let Some(m) = self.map_stmt(&["map"])? {
                s.maps.push(m);
            } else {
                return self.err(format!("unexpected {} in select", self.describe()));
            }
        }
    }

    fn constraint(&mut self) -> Result<ConstraintDecl> {
        let unique = self.at_word("unique");
        if unique {
            self.pos += 1;
        }
        if self.at_word("lifting") {
            self.pos += 1;
            let name = if self.at_punct("{") { None } else { Some(self.name()?) };
            self.punct("{")?;
            self.skip_semis();
            let w = self.block("W", Self::schema_body)?;
            let r = self.block("R", Self::schema_body)?;
            let m = self.block("m", Self::map_body)?;
            let n = self.block("n", Self::map_body)?;
            self.punct("}")?;
            return Ok(ConstraintDecl::Lifting {
                unique,
                name,
                w,
                r,
                m,
                n,
            });
        }
        let kind = self.name()?;
        self.punct("(")?;
        let mut args = Vec::new();
        while !self.at_punct(")") {
            args.push(self.name()?);
            if !self.at_punct(")") {
                self.punct(",")?;
            }
        }
        self.punct(")")?;
        Ok(ConstraintDecl::Builtin { unique, kind, args })
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Word(w)) if w.starts_with('?') && w.len() > 1 => {
                let v = w[1..].to_string();
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Word(_)) | Some(Tok::Str(_)) => Ok(Term::Const(self.name()?)),
            _ => self.err(format!("expected a term, found {}", self.describe())),
        }
    }

    fn triple(&mut self) -> Result<TriplePattern> {
        self.punct("(")?;
        let subject = self.term()?;
        let predicate = if self.at_punct("[") {
            Predicate::Path(self.path()?)
        } else {
            match self.term()? {
                Term::Var(v) => Predicate::Var(v),
                Term::Const(c) => Predicate::Name(c),
            }
        };
        let object = self.term()?;
        self.punct(")")?;
        Ok(TriplePattern {
            subject,
            predicate,
            object,
        })
    }
}

pub fn parse_document(src: &str) -> Result<Document> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    p.document()
}
