//! Text formats: schemas, functors, queries, constraints and patterns.

pub mod ast;
pub mod elab;
pub mod lex;
pub mod parse;
pub mod print;

pub use ast::Document;
pub use parse::parse_document;
pub use print::print_document;
