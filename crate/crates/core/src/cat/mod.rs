//! Presentations of categories and the finite constructions built on them.

mod classes;
mod comma;
mod concrete;
mod morphism;
mod pushout;
mod schema;
mod words;

pub use classes::{all_hom_classes, HomClasses};
pub use comma::{comma_category, Comma};
pub use concrete::{
    enumerate_functors, materialize, ConcreteBuilder, ConcreteCategory, ConcreteFunctor,
    MaterializedSchema, Morphism, PresentedFunctor,
};
pub use morphism::{check_functor, EquationCheck, FunctorReport, SchemaMorphism};
pub use pushout::{pushout_presentation, Pushout};
pub use schema::{Equation, GenId, Generator, ObjId, Path, Schema, SchemaBuilder};
pub use words::PathEq;
