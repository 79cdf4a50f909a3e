//! Lifting problems against the category of elements of an instance.
//!
//! A constraint is a pair `m: W -> R`, `n: R -> S`. A binding `p` places the
//! objects of `W` on rows of an instance `δ`; a lift `ℓ` places every object
//! of `R` on a row so that `n` is respected and `ℓ ∘ m = p`. Because the
//! projection `∫δ -> S` is a discrete opfibration, a lift is fully determined
//! by its object assignment.

mod builders;
mod check;
mod oracle;
mod search;

use std::sync::Arc;

use crate::cat::{ObjId, Schema, SchemaMorphism};
use crate::error::{Error, Result};
use crate::instance::{Instance, Row};

pub use builders::{
    at_most_one, exactly_one, forest, injective_fk, nonempty, product, reflexive, surjective_fk,
    symmetric, transitive,
};
pub use check::{
    check_constraint, check_constraint_set, check_universal, relational_fibration_probes,
    uniqueness_of, ConstraintVerdict, SetReport, UniversalReport,
};
pub use oracle::enumerate_lifts_oracle;
pub use search::{enumerate_lifts, enumerate_lifts_with, first_lift, LiftProblem};

/// `m: W -> R` and `n: R -> S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftingConstraint {
    pub name: String,
    pub m: SchemaMorphism,
    pub n: SchemaMorphism,
}

impl LiftingConstraint {
    pub fn new(name: impl Into<String>, m: SchemaMorphism, n: SchemaMorphism) -> Result<Self> {
        if **m.codomain() != **n.domain() {
            return Err(Error::typing("constraint: codomain of m must be the domain of n"));
        }
        Ok(LiftingConstraint {
            name: name.into(),
            m,
            n,
        })
    }

    pub fn w(&self) -> &Arc<Schema> {
        self.m.domain()
    }

    pub fn r(&self) -> &Arc<Schema> {
        self.n.domain()
    }

    pub fn s(&self) -> &Arc<Schema> {
        self.n.codomain()
    }
}

/// A named family of constraints checked together.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstraintSet {
    pub constraints: Vec<LiftingConstraint>,
}

impl ConstraintSet {
    pub fn new(constraints: Vec<LiftingConstraint>) -> Self {
        ConstraintSet { constraints }
    }
}

/// A lifting problem: a constraint together with a binding of `W`.
#[derive(Clone, Debug)]
pub struct SquareInput {
    pub m: SchemaMorphism,
    pub n: SchemaMorphism,
    /// Row of `n(m(w))` for every object `w` of `W`.
    pub binding: Vec<Row>,
}

impl SquareInput {
    pub fn new(constraint: &LiftingConstraint, binding: Vec<Row>) -> Self {
        SquareInput {
            m: constraint.m.clone(),
            n: constraint.n.clone(),
            binding,
        }
    }

    /// The problem with empty `W`: all lifts of `n`.
    pub fn unconstrained(n: SchemaMorphism) -> Self {
        SquareInput {
            m: SchemaMorphism::initial(n.domain().clone()),
            n,
            binding: Vec::new(),
        }
    }
}

/// Row of `δ(n(r))` for every object `r` of `R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lift {
    rows: Vec<Row>,
}

impl Lift {
    pub fn new(rows: Vec<Row>) -> Lift {
        Lift { rows }
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, r: ObjId) -> Row {
        self.rows[r.0]
    }

    /// `ℓ ∘ f` for `f: R' -> R`.
    pub fn precompose(&self, f: &SchemaMorphism) -> Lift {
        Lift {
            rows: f.object_map().iter().map(|&o| self.rows[o.0]).collect(),
        }
    }

    /// Checks that this is a lift of `n` over `δ`.
    pub fn is_lift_of(&self, n: &SchemaMorphism, inst: &Instance) -> bool {
        let r = n.domain();
        if self.rows.len() != r.object_count() {
            return false;
        }
        for o in r.object_ids() {
            let row = self.rows[o.0];
            if row.object != n.object(o) || row.index >= inst.row_count(row.object) {
                return false;
            }
        }
        r.generator_ids().all(|g| {
            let gen = r.generator(g);
            inst.transport(self.rows[gen.source.0], n.generator(g)).ok()
                == Some(self.rows[gen.target.0])
        })
    }

    /// Object name to `[table, rowid]`, keys sorted.
    pub fn to_json(&self, r: &Schema, inst: &Instance) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = r
            .object_ids()
            .map(|o| {
                let (t, id) = inst.describe(self.rows[o.0]);
                (r.object_name(o).to_string(), serde_json::json!([t, id]))
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Search settings. Output never depends on `workers`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub workers: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { workers: 1 }
    }
}

/// Checks that `binding` is well typed for `m`, `n` over `δ`.
pub(crate) fn check_binding(
    m: &SchemaMorphism,
    n: &SchemaMorphism,
    binding: &[Row],
    inst: &Instance,
) -> Result<()> {
    if **m.codomain() != **n.domain() {
        return Err(Error::typing("codomain of m must be the domain of n"));
    }
    if **n.codomain() != **inst.schema() {
        return Err(Error::typing("probe lands in a different schema than the instance"));
    }
    let w = m.domain();
    if binding.len() != w.object_count() {
        return Err(Error::typing(format!(
            "binding has {} rows for {} objects",
            binding.len(),
            w.object_count()
        )));
    }
    for o in w.object_ids() {
        let want = n.object(m.object(o));
        let got = binding[o.0];
        if got.object != want || got.index >= inst.row_count(want) {
            return Err(Error::typing(format!(
                "binding of `{}` must be a row of `{}`",
                w.object_name(o),
                inst.schema().object_name(want)
            )));
        }
    }
    Ok(())
}
