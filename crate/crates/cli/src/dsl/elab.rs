//! From syntax trees to engine values.

use std::collections::BTreeMap;
use std::sync::Arc;

use catlift::cat::{check_functor, PathEq, Schema, SchemaMorphism};
use catlift::instance::Instance;
use catlift::pattern::{GraphPattern, Typing};
use catlift::query::Query;
use catlift::solver::{self, ConstraintSet, LiftingConstraint};
use catlift::{Error, Result};

use super::ast::*;

pub fn schema_from_body(name: &str, body: &SchemaBody) -> Result<Schema> {
    let mut b = Schema::builder(name);
    for s in &body.stmts {
        b = match s {
            SchemaStmt::Objects(names) => b.objects(names.iter().cloned()),
            SchemaStmt::Arrow {
                name,
                source,
                target,
            } => b.arrow(name.as_str(), source.as_str(), target.as_str()),
            SchemaStmt::Eq { source, lhs, rhs } => {
                let l: Vec<&str> = lhs.iter().map(String::as_str).collect();
                let r: Vec<&str> = rhs.iter().map(String::as_str).collect();
                b.equation(source.as_str(), &l, &r)
            }
        };
    }
    b.build()
}

/// Builds a morphism and checks that it respects the domain's equations.
pub fn morphism(
    dom: Arc<Schema>,
    cod: Arc<Schema>,
    maps: &[MapStmt],
    bound: usize,
) -> Result<SchemaMorphism> {
    let objects: Vec<(&str, &str)> = maps
        .iter()
        .filter_map(|m| match m {
            MapStmt::Object(a, b) => Some((a.as_str(), b.as_str())),
            _ => None,
        })
        .collect();
    let paths: Vec<(&str, Vec<&str>)> = maps
        .iter()
        .filter_map(|m| match m {
            MapStmt::Arrow(g, p) => Some((g.as_str(), p.iter().map(String::as_str).collect())),
            _ => None,
        })
        .collect();
    let arrows: Vec<(&str, &[&str])> = paths.iter().map(|(g, p)| (*g, p.as_slice())).collect();
    let f = SchemaMorphism::from_names(dom, cod, &objects, &arrows)?;
    let report = check_functor(&f, bound);
    if let Some(bad) = report.failures().next() {
        let msg = format!("equation {} = {} is not preserved", bad.lhs, bad.rhs);
        return Err(if bad.verdict == PathEq::Inconclusive {
            Error::Unbounded(msg)
        } else {
            Error::Typing(msg)
        });
    }
    Ok(f)
}

/// Named schemas from every loaded document.
#[derive(Clone, Debug, Default)]
pub struct Env {
    pub schemas: BTreeMap<String, Arc<Schema>>,
    /// Declaration order of schema names.
    pub order: Vec<String>,
}

impl Env {
    pub fn from_document(d: &Document) -> Result<Env> {
        let mut env = Env::default();
        for s in d.schemas() {
            if env.schemas.contains_key(&s.name) {
                return Err(Error::Invalid(format!("schema `{}` declared twice", s.name)));
            }
            env.schemas
                .insert(s.name.clone(), Arc::new(schema_from_body(&s.name, &s.body)?));
            env.order.push(s.name.clone());
        }
        Ok(env)
    }

    pub fn schema(&self, name: &str) -> Result<Arc<Schema>> {
        self.schemas.get(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "schema",
            name: name.into(),
        })
    }

    /// The first declared schema.
    pub fn primary(&self) -> Result<Arc<Schema>> {
        match self.order.first() {
            Some(n) => self.schema(n),
            None => Err(Error::Invalid("no schema declared".into())),
        }
    }

    pub fn functor(&self, f: &FunctorDecl, bound: usize) -> Result<SchemaMorphism> {
        morphism(self.schema(&f.source)?, self.schema(&f.target)?, &f.maps, bound)
    }
}

/// Elaborates a query against an instance, resolving `bind` rows.
pub fn query(q: &QueryDecl, env: &Env, inst: &Instance, bound: usize) -> Result<Query> {
    let s = env.schema(&q.on)?;
    if **inst.schema() != *s {
        return Err(Error::typing(format!(
            "query `{}` is on `{}`, not on the instance's schema",
            q.name, q.on
        )));
    }
    let s = inst.schema().clone();
    let r = Arc::new(schema_from_body(&format!("{}.result", q.name), &q.result)?);
    let n = morphism(r.clone(), s, &q.onto, bound)?;
    let (m, binding) = match &q.where_ {
        None => (SchemaMorphism::initial(r.clone()), Vec::new()),
        Some(w) => {
            let ws = Arc::new(schema_from_body(&format!("{}.where", q.name), &w.shape)?);
            let m = morphism(ws.clone(), r.clone(), &w.embeds, bound)?;
            let mut binding = Vec::new();
            for o in ws.object_ids() {
                let var = ws.object_name(o);
                let mut hits = w.binds.iter().filter(|b| b.var == var);
                let b = hits
                    .next()
                    .ok_or_else(|| Error::typing(format!("`{var}` is not bound")))?;
                if hits.next().is_some() {
                    return Err(Error::typing(format!("`{var}` is bound twice")));
                }
                let want = inst.schema().object_name(n.object(m.object(o)));
                if b.table != want {
                    return Err(Error::typing(format!(
                        "`{var}` lies over `{want}` but is bound in `{}`",
                        b.table
                    )));
                }
                binding.push(inst.row(&b.table, &b.row)?);
            }
            if let Some(b) = w.binds.iter().find(|b| ws.object(&b.var).is_err()) {
                return Err(Error::Unknown {
                    kind: "where-object",
                    name: b.var.clone(),
                });
            }
            (m, binding)
        }
    };
    let select = match &q.select {
        None => None,
        Some(sel) => {
            let x = Arc::new(schema_from_body(&format!("{}.select", q.name), &sel.shape)?);
            Some(morphism(x, r, &sel.maps, bound)?)
        }
    };
    Query::new(q.name.clone(), m, n, binding, select)
}

/// Elaborates a strict morphism `f: R1 -> R2` between two queries' shapes.
pub fn strict(f: &FunctorDecl, queries: &BTreeMap<String, Query>, bound: usize) -> Result<SchemaMorphism> {
    let get = |n: &str| {
        queries.get(n).ok_or_else(|| Error::Unknown {
            kind: "query",
            name: n.into(),
        })
    };
    let (q1, q2) = (get(&f.source)?, get(&f.target)?);
    morphism(q1.r().clone(), q2.r().clone(), &f.maps, bound)
}

/// A human-readable label for a constraint declaration.
pub fn constraint_label(c: &ConstraintDecl) -> String {
    match c {
        ConstraintDecl::Builtin { unique, kind, args } => {
            format!("{}{kind}({})", if *unique { "unique " } else { "" }, args.join(", "))
        }
        ConstraintDecl::Lifting { unique, name, .. } => format!(
            "{}lifting {}",
            if *unique { "unique " } else { "" },
            name.as_deref().unwrap_or("_")
        ),
    }
}

fn arity(kind: &str, args: &[String], n: usize) -> Result<()> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Error::typing(format!(
            "`{kind}` takes {n} argument(s), got {}",
            args.len()
        )))
    }
}

pub fn constraint(c: &ConstraintDecl, s: &Arc<Schema>, bound: usize) -> Result<ConstraintSet> {
    let (unique, set) = match c {
        ConstraintDecl::Builtin { unique, kind, args } => {
            let one = |c: LiftingConstraint| ConstraintSet::new(vec![c]);
            let a = |i: usize| args[i].as_str();
            let set = match kind.as_str() {
                "nonempty" | "at_most_one" | "exactly_one" | "surjective" | "injective" | "forest" => {
                    arity(kind, args, 1)?;
                    match kind.as_str() {
                        "nonempty" => one(solver::nonempty(s, a(0))?),
                        "at_most_one" => one(solver::at_most_one(s, a(0))?),
                        "exactly_one" => solver::exactly_one(s, a(0))?,
                        "surjective" => one(solver::surjective_fk(s, a(0))?),
                        "injective" => one(solver::injective_fk(s, a(0))?),
                        _ => one(solver::forest(s, a(0))?),
                    }
                }
                "transitive" | "reflexive" | "symmetric" => {
                    arity(kind, args, 2)?;
                    one(match kind.as_str() {
                        "transitive" => solver::transitive(s, a(0), a(1))?,
                        "reflexive" => solver::reflexive(s, a(0), a(1))?,
                        _ => solver::symmetric(s, a(0), a(1))?,
                    })
                }
                "product" => {
                    arity(kind, args, 3)?;
                    solver::product(s, a(0), a(1), a(2))?
                }
                other => {
                    return Err(Error::Unknown {
                        kind: "constraint",
                        name: other.into(),
                    })
                }
            };
            (*unique, set)
        }
        ConstraintDecl::Lifting {
            unique,
            name,
            w,
            r,
            m,
            n,
        } => {
            let label = name.clone().unwrap_or_else(|| "lifting".into());
            let ws = Arc::new(schema_from_body(&format!("{label}.W"), w)?);
            let rs = Arc::new(schema_from_body(&format!("{label}.R"), r)?);
            let mm = morphism(ws, rs.clone(), m, bound)?;
            let nn = morphism(rs, s.clone(), n, bound)?;
            (*unique, ConstraintSet::new(vec![LiftingConstraint::new(label, mm, nn)?]))
        }
    };
    if unique {
        let cs = set
            .constraints
            .iter()
            .map(solver::uniqueness_of)
            .collect::<Result<Vec<_>>>()?;
        Ok(ConstraintSet::new(cs))
    } else {
        Ok(set)
    }
}

/// The triples, `types` and `labels` of a pattern document.
pub fn pattern(d: &Document) -> (GraphPattern, Typing) {
    let mut gp = GraphPattern::default();
    let mut typing = Typing::default();
    for item in &d.items {
        match item {
            Item::Triple(t) => gp.triples.push(t.clone()),
            Item::Types(ts) => {
                for (t, o) in ts {
                    typing.terms.insert(t.key(), o.clone());
                }
            }
            Item::Labels(ls) => {
                for (o, g) in ls {
                    typing.labels.insert(o.clone(), g.clone());
                }
            }
            _ => {}
        }
    }
    (gp, typing)
}
