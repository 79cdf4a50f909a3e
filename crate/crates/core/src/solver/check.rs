//! Constraint checking over all bindings.

use std::sync::Arc;

use super::search::LiftProblem;
use super::{ConstraintSet, LiftingConstraint, SolveOptions, SquareInput};
use crate::cat::{
    enumerate_functors, materialize, pushout_presentation, GenId, ObjId, Schema, SchemaMorphism,
};
use crate::error::{Error, Result};
use crate::fibration::action_quotient;
use crate::instance::{Instance, Row};

/// Outcome of checking one constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstraintVerdict {
    Satisfied,
    /// The least binding of `W` that admits no lift.
    Violated { binding: Vec<Row> },
}

impl ConstraintVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, ConstraintVerdict::Satisfied)
    }
}

/// All valid bindings of `W`: the lifts of `n ∘ m`, in lexicographic order.
pub(crate) fn bindings(c: &LiftingConstraint, inst: &Instance) -> Result<Vec<Vec<Row>>> {
    let nm = c.m.then(&c.n)?;
    let sq = SquareInput::unconstrained(nm);
    Ok(super::enumerate_lifts(&sq, inst)?
        .into_iter()
        .map(|l| l.rows().to_vec())
        .collect())
}

/// Every binding must admit at least one lift. Reports the least one that does not.
pub fn check_constraint(inst: &Instance, c: &LiftingConstraint) -> Result<ConstraintVerdict> {
    let prob = LiftProblem::new(&c.n, inst)?;
    for b in bindings(c, inst)? {
        let found = match prob.seed(&c.m, &b)? {
            Some(part) => !prob.solve(part, 1, &SolveOptions::default()).is_empty(),
            None => false,
        };
        if !found {
            return Ok(ConstraintVerdict::Violated { binding: b });
        }
    }
    Ok(ConstraintVerdict::Satisfied)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetReport {
    pub verdicts: Vec<(String, ConstraintVerdict)>,
}

impl SetReport {
    pub fn is_satisfied(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| v.is_satisfied())
    }
}

pub fn check_constraint_set(inst: &Instance, set: &ConstraintSet) -> Result<SetReport> {
    let verdicts = set
        .constraints
        .iter()
        .map(|c| Ok((c.name.clone(), check_constraint(inst, c)?)))
        .collect::<Result<_>>()?;
    Ok(SetReport { verdicts })
}

/// Outcome of checking a family of morphisms against every probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UniversalReport {
    Satisfied,
    Violated {
        morphism: usize,
        probe: SchemaMorphism,
        binding: Vec<Row>,
    },
}

/// Checks `(m, n)` for every `m` in the family and every functor `n: R -> S`.
///
/// Probes range over the materialised schema when it is finite within
/// `bound`. Otherwise, if every `R` is free, they range over the quotient of
/// the schema by the action of `δ`: a free `R` maps into it exactly as it maps
/// into `S` up to the action, which is all a lift can observe.
pub fn check_universal(
    inst: &Instance,
    family: &[SchemaMorphism],
    bound: usize,
) -> Result<UniversalReport> {
    let base = match materialize(inst.schema(), bound) {
        Ok(b) => b,
        Err(Error::Unbounded(why)) => {
            if family.iter().any(|m| !m.codomain().equations().is_empty()) {
                return Err(Error::Unbounded(format!(
                    "{why}; probes from a presentation with equations need a finite schema"
                )));
            }
            action_quotient(inst)
        }
        Err(e) => return Err(e),
    };
    for (j, m) in family.iter().enumerate() {
        let r = m.codomain();
        for pf in enumerate_functors(r, &base.category) {
            let n = base.to_schema_morphism(r.clone(), &pf)?;
            let c = LiftingConstraint::new(format!("family[{j}]"), m.clone(), n.clone())?;
            if let ConstraintVerdict::Violated { binding } = check_constraint(inst, &c)? {
                return Ok(UniversalReport::Violated {
                    morphism: j,
                    probe: n,
                    binding,
                });
            }
        }
    }
    Ok(UniversalReport::Satisfied)
}

/// The two morphisms whose right lifting property defines a discrete
/// opfibration: `{a} -> (a -f-> b)` and the fork collapsing onto one arrow.
pub fn relational_fibration_probes() -> Vec<SchemaMorphism> {
    let arrow = Arc::new(
        Schema::builder("R1")
            .objects(["a", "b"])
            .arrow("f", "a", "b")
            .build()
            .expect("static schema"),
    );
    let point = Arc::new(Schema::builder("W1").object("a").build().expect("static schema"));
    let rho1 = SchemaMorphism::from_names(point, arrow.clone(), &[("a", "a")], &[])
        .expect("static morphism");
    let fork = Arc::new(
        Schema::builder("W2")
            .objects(["a", "b1", "b2"])
            .arrow("f1", "a", "b1")
            .arrow("f2", "a", "b2")
            .build()
            .expect("static schema"),
    );
    let rho2 = SchemaMorphism::from_names(
        fork,
        arrow,
        &[("a", "a"), ("b1", "b"), ("b2", "b")],
        &[("f1", &["f"]), ("f2", &["f"])],
    )
    .expect("static morphism");
    vec![rho1, rho2]
}

/// The constraint expressing "at most one lift": the fold `R ⊔_W R -> R`
/// paired with the same `n`.
pub fn uniqueness_of(c: &LiftingConstraint) -> Result<LiftingConstraint> {
    let po = pushout_presentation(&c.m, &c.m)?;
    let r = c.r();
    let mut objects = vec![ObjId(usize::MAX); po.apex.object_count()];
    for o in r.object_ids() {
        objects[po.left.object(o).0] = o;
        objects[po.right.object(o).0] = o;
    }
    let k = r.generator_count();
    let generators = (0..2 * k).map(|i| r.generator_path(GenId(i % k))).collect();
    let fold = SchemaMorphism::new(po.apex.clone(), r.clone(), objects, generators)?;
    LiftingConstraint::new(format!("unique {}", c.name), fold, c.n.clone())
}
