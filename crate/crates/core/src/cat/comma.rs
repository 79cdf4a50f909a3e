//! Comma categories `(d ↓ F)` as presentations.

use std::collections::HashMap;
use std::sync::Arc;

use super::classes::HomClasses;
use super::morphism::SchemaMorphism;
use super::schema::{Equation, GenId, Generator, ObjId, Path, Schema};
use crate::error::Result;

/// `(d ↓ F)` with its projection to the domain of `F`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub schema: Arc<Schema>,
    /// `(c, f) ↦ c`, each generator to itself.
    pub projection: SchemaMorphism,
    /// The arrow `f : d -> F(c)` of each comma object, as a representative path.
    pub arrows: Vec<Path>,
    /// For each comma object, its class index among the paths out of `d`.
    pub classes: Vec<usize>,
}

/// `(d ↓ F)` for `F: S -> T` and `d` an object of `T`.
///
/// Objects are pairs `(c, f)` with `f` a class of paths `d -> F(c)`. Each
/// generator `g: c -> c'` of `S` yields an edge `(c, f) -> (c', f·F(g))`, and
/// every equation of `S` is copied at every comma object over its source.
/// Fails with `Unbounded` when the morphisms out of `d` cannot be enumerated.
pub fn comma_category(f: &SchemaMorphism, d: ObjId, bound: usize) -> Result<Comma> {
    let s = f.domain();
    let t = f.codomain();
    let mut hom = HomClasses::enumerate(t, d, bound)?;
    let mut objects = Vec::new();
    let mut owner = Vec::new();
    let mut arrows = Vec::new();
    let mut classes = Vec::new();
    let mut at: HashMap<(ObjId, usize), ObjId> = HashMap::new();
    for c in s.object_ids() {
        for k in hom.to(f.object(c)) {
            let rep = hom.reps()[k].clone();
            at.insert((c, k), ObjId(objects.len()));
            objects.push(format!("{}@{}", s.object_name(c), t.render_path(&rep)));
            owner.push(c);
            arrows.push(rep);
            classes.push(k);
        }
    }
    let mut generators = Vec::new();
    let mut edge: HashMap<(ObjId, GenId), GenId> = HashMap::new();
    for (i, &c) in owner.iter().enumerate() {
        for &g in s.outgoing(c) {
            let gen = s.generator(g);
            let next = arrows[i].then(f.generator(g))?;
            let k = hom.classify(t, &next)?;
            edge.insert((ObjId(i), g), GenId(generators.len()));
            generators.push(Generator {
                name: gen.name.clone(),
                source: ObjId(i),
                target: at[&(gen.target, k)],
            });
        }
    }
    let lift = |start: ObjId, p: &Path| -> Path {
        let mut cur = start;
        let mut steps = Vec::with_capacity(p.len());
        for &g in p.steps() {
            let e = edge[&(cur, g)];
            steps.push(e);
            cur = generators[e.0].target;
        }
        Path::from_raw(start, cur, steps)
    };
    let mut equations = Vec::new();
    for eq in s.equations() {
        for (i, &c) in owner.iter().enumerate() {
            if c == eq.lhs.source() {
                equations.push(Equation {
                    lhs: lift(ObjId(i), &eq.lhs),
                    rhs: lift(ObjId(i), &eq.rhs),
                });
            }
        }
    }
    let gen_owner: Vec<GenId> = {
        let mut v = vec![GenId(0); generators.len()];
        for (&(_, g), &e) in &edge {
            v[e.0] = g;
        }
        v
    };
    let schema = Arc::new(Schema::from_parts(
        format!("{}_under_{}", t.object_name(d), s.name()),
        objects,
        generators,
        equations,
    )?);
    let projection = SchemaMorphism::new(
        schema.clone(),
        s.clone(),
        owner,
        gen_owner.iter().map(|&g| s.generator_path(g)).collect(),
    )?;
    Ok(Comma {
        schema,
        projection,
        arrows,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::testkit::emp_schema;

    #[test]
    fn value_table_has_a_one_object_comma() {
        let s = emp_schema();
        let id = SchemaMorphism::identity(s.clone());
        let c = comma_category(&id, s.object("FNString").unwrap(), 8).unwrap();
        assert_eq!(c.schema.object_count(), 1);
        assert_eq!(c.schema.generator_count(), 0);
        assert!(c.arrows[0].is_identity());
    }

    #[test]
    fn department_comma_is_unbounded() {
        let s = emp_schema();
        let id = SchemaMorphism::identity(s.clone());
        let r = comma_category(&id, s.object("Department").unwrap(), 8);
        assert!(matches!(r, Err(Error::Unbounded(_))));
    }

    #[test]
    fn point_domain_gives_the_hom_set() {
        // T: a -f-> b, a -g-> b; F picks b; (a ↓ F) is hom(a, b) as a discrete schema
        let t = Arc::new(
            Schema::builder("T")
                .objects(["a", "b"])
                .arrow("f", "a", "b")
                .arrow("g", "a", "b")
                .build()
                .unwrap(),
        );
        let pt = Arc::new(Schema::builder("Pt").object("x").build().unwrap());
        let f = SchemaMorphism::from_names(pt, t.clone(), &[("x", "b")], &[]).unwrap();
        let c = comma_category(&f, t.object("a").unwrap(), 8).unwrap();
        assert_eq!(c.schema.object_count(), 2);
        assert_eq!(c.schema.generator_count(), 0);
        let c = comma_category(&f, t.object("b").unwrap(), 8).unwrap();
        assert_eq!(c.schema.object_count(), 1);
    }

    #[test]
    fn projection_is_a_functor() {
        let t = Arc::new(
            Schema::builder("T")
                .objects(["a", "b", "c"])
                .arrow("f", "a", "b")
                .arrow("g", "b", "c")
                .build()
                .unwrap(),
        );
        let id = SchemaMorphism::identity(t.clone());
        let c = comma_category(&id, ObjId(0), 8).unwrap();
        assert_eq!(c.schema.object_count(), 3);
        assert_eq!(c.schema.generator_count(), 2);
        assert!(super::super::check_functor(&c.projection, 8).is_functor());
    }
}
