//! Syntax trees. Every file is a [`Document`] of top-level items; each
//! command picks out the items it needs.

use catlift::pattern::TriplePattern;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaStmt {
    Objects(Vec<String>),
    Arrow {
        name: String,
        source: String,
        target: String,
    },
    Eq {
        source: String,
        lhs: Vec<String>,
        rhs: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemaBody {
    pub stmts: Vec<SchemaStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaDecl {
    pub name: String,
    pub body: SchemaBody,
}

/// `object A -> B`, `arrow f -> [g h]`; also written `embed`/`map`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapStmt {
    Object(String, String),
    Arrow(String, Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub maps: Vec<MapStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bind {
    pub var: String,
    pub table: String,
    pub row: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WhereBlock {
    pub shape: SchemaBody,
    pub embeds: Vec<MapStmt>,
    pub binds: Vec<Bind>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SelectBlock {
    pub shape: SchemaBody,
    pub maps: Vec<MapStmt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryDecl {
    /// `probe` blocks carry no where or select.
    pub probe: bool,
    pub name: String,
    pub on: String,
    pub result: SchemaBody,
    pub onto: Vec<MapStmt>,
    pub where_: Option<WhereBlock>,
    pub select: Option<SelectBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintDecl {
    Builtin {
        unique: bool,
        kind: String,
        args: Vec<String>,
    },
    Lifting {
        unique: bool,
        name: Option<String>,
        w: SchemaBody,
        r: SchemaBody,
        m: Vec<MapStmt>,
        n: Vec<MapStmt>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Schema(SchemaDecl),
    Functor(FunctorDecl),
    Query(QueryDecl),
    /// A strict morphism between the result shapes of two queries.
    Strict(FunctorDecl),
    Constraint(ConstraintDecl),
    Triple(TriplePattern),
    /// `?v -> Obj` or `"Const" -> Obj`; keys as in `Term::key`.
    Types(Vec<(catlift::pattern::Term, String)>),
    Labels(Vec<(String, String)>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
}

impl Document {
    pub fn schemas(&self) -> impl Iterator<Item = &SchemaDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Schema(s) => Some(s),
            _ => None,
        })
    }

    pub fn functors(&self) -> impl Iterator<Item = &FunctorDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Functor(f) => Some(f),
            _ => None,
        })
    }

    pub fn queries(&self) -> impl Iterator<Item = &QueryDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Query(q) => Some(q),
            _ => None,
        })
    }

    pub fn stricts(&self) -> impl Iterator<Item = &FunctorDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Strict(f) => Some(f),
            _ => None,
        })
    }

    pub fn constraints(&self) -> impl Iterator<Item = &ConstraintDecl> {
        self.items.iter().filter_map(|i| match i {
            Item::Constraint(c) => Some(c),
            _ => None,
        })
    }

    pub fn extend(&mut self, other: Document) {
        self.items.extend(other.items);
    }
}
