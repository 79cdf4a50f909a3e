//! Graph-pattern (triple pattern) queries compiled to lifting problems.
//!
//! Variables become objects of the result shape `R`; every occurrence of a
//! constant becomes an object of both `W` and `R`, pinned to its referent;
//! every triple becomes a generator of `R`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cat::{Equation, Generator, ObjId, Path, Schema, SchemaMorphism};
use crate::error::{Error, Result};
use crate::instance::{Instance, Row};
use crate::query::{run_query_with, Query};
use crate::solver::{Lift, SolveOptions};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    /// `?x` for variables, the literal for constants.
    pub fn key(&self) -> String {
        match self {
            Term::Var(v) => format!("?{v}"),
            Term::Const(c) => c.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Predicate {
    /// A generator out of the subject's type, completed along the unique
    /// shortest path to the object's type when the two differ.
    Name(String),
    /// An explicit path of generator names.
    Path(Vec<String>),
    /// Any generator; resolved after reifying edges.
    Var(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: Term,
    pub predicate: Predicate,
    pub object: Term,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphPattern {
    pub triples: Vec<TriplePattern>,
}

/// Types of terms, keyed by [`Term::key`], and optional label columns per
/// table used to resolve constants. Without a label column a constant is
/// matched against row IDs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Typing {
    pub terms: BTreeMap<String, String>,
    pub labels: BTreeMap<String, String>,
}

/// Queries whose answers together answer a pattern, over one instance.
#[derive(Clone, Debug)]
pub struct PatternPlan {
    pub instance: Instance,
    pub queries: Vec<Query>,
}

impl PatternPlan {
    /// Answers of every query, concatenated in query order.
    pub fn run(&self, opts: &SolveOptions) -> Result<Vec<(usize, Lift)>> {
        let mut out = Vec::new();
        for (i, q) in self.queries.iter().enumerate() {
            for l in run_query_with(q, &self.instance, opts)?.lifts {
                out.push((i, l));
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, answers: &[(usize, Lift)]) -> serde_json::Value {
        serde_json::Value::Array(
            answers
                .iter()
                .map(|(i, l)| l.to_json(self.queries[*i].r(), &self.instance))
                .collect(),
        )
    }
}

fn type_of(s: &Schema, typing: &Typing, t: &Term) -> Result<ObjId> {
    let key = t.key();
    let name = typing
        .terms
        .get(&key)
        .ok_or_else(|| Error::UntypedTerm(key.clone()))?;
    s.object(name)
}

/// The row a constant refers to in table `o`.
pub fn resolve_constant(inst: &Instance, typing: &Typing, o: ObjId, constant: &str) -> Result<Row> {
    let s = inst.schema();
    let object = s.object_name(o).to_string();
    let hits: Vec<usize> = match typing.labels.get(&object) {
        Some(label) => {
            let g = s.generator_from(o, label)?;
            let t = s.generator(g).target;
            let col = inst.column(g);
            (0..inst.row_count(o))
                .filter(|&x| inst.rows(t)[col[x]] == constant)
                .collect()
        }
        None => inst.find_row(o, constant).into_iter().collect(),
    };
    match hits.len() {
        1 => Ok(Row::new(o, hits[0])),
        0 => Err(Error::NoReferent {
            constant: constant.into(),
            object,
        }),
        count => Err(Error::AmbiguousReferent {
            constant: constant.into(),
            object,
            count,
        }),
    }
}

fn predicate_path(
    s: &Schema,
    pred: &Predicate,
    from: ObjId,
    to: ObjId,
) -> Result<Path> {
    let unknown = |p: &str| Error::UnknownPredicate {
        predicate: p.to_string(),
        object: s.object_name(from).to_string(),
    };
    let path = match pred {
        Predicate::Name(p) => {
            let g = s.generator_from(from, p).map_err(|_| unknown(p))?;
            let head = s.generator_path(g);
            let tail = s
                .unique_shortest_path(head.target(), to)
                .ok_or_else(|| unknown(p))?;
            head.then(&tail)?
        }
        Predicate::Path(ps) => s.path_from(from, ps).map_err(|_| unknown(&ps.join(" ")))?,
        Predicate::Var(v) => {
            return Err(Error::typing(format!(
                "predicate variable ?{v} needs edge reification"
            )))
        }
    };
    if path.target() != to {
        return Err(Error::typing(format!(
            "predicate {} does not reach `{}`",
            s.render_path(&path),
            s.object_name(to)
        )));
    }
    Ok(path)
}

/// Compiles a pattern without predicate variables against `inst`.
pub fn compile_pattern(gp: &GraphPattern, inst: &Instance, typing: &Typing) -> Result<Query> {
    let s = inst.schema();
    let mut r_objects: Vec<String> = Vec::new();
    let mut r_types: Vec<ObjId> = Vec::new();
    let mut var_obj: BTreeMap<String, ObjId> = BTreeMap::new();
    let mut occurrences: BTreeMap<String, usize> = BTreeMap::new();
    let mut w_objects: Vec<String> = Vec::new();
    let mut w_image: Vec<ObjId> = Vec::new();
    let mut binding: Vec<Row> = Vec::new();
    let mut node = |t: &Term| -> Result<ObjId> {
        let ty = type_of(s, typing, t)?;
        match t {
            Term::Var(v) => {
                if let Some(&o) = var_obj.get(v) {
                    return Ok(o);
                }
                let o = ObjId(r_objects.len());
                r_objects.push(format!("?{v}"));
                r_types.push(ty);
                var_obj.insert(v.clone(), o);
                Ok(o)
            }
            Term::Const(c) => {
                let k = occurrences.entry(c.clone()).or_default();
                *k += 1;
                let name = format!("{c}@{k}");
                let o = ObjId(r_objects.len());
                r_objects.push(name.clone());
                r_types.push(ty);
                w_objects.push(name);
                w_image.push(o);
                binding.push(resolve_constant(inst, typing, ty, c)?);
                Ok(o)
            }
        }
    };
    let mut generators = Vec::new();
    let mut images = Vec::new();
    let mut ends = Vec::new();
    for (i, t) in gp.triples.iter().enumerate() {
        let a = node(&t.subject)?;
        let b = node(&t.object)?;
        ends.push((i, a, b));
    }
    for (i, a, b) in ends {
        let t = &gp.triples[i];
        let label = match &t.predicate {
            Predicate::Name(p) => p.clone(),
            Predicate::Path(ps) => ps.join("_"),
            Predicate::Var(v) => v.clone(),
        };
        generators.push(Generator {
            name: format!("t{}_{label}", i + 1),
            source: a,
            target: b,
        });
        images.push(predicate_path(s, &t.predicate, r_types[a.0], r_types[b.0])?);
    }
    let r = Arc::new(Schema::from_parts("Pattern", r_objects, generators, Vec::new())?);
    let w = Arc::new(Schema::from_parts("Constants", w_objects, Vec::new(), Vec::new())?);
    let n = SchemaMorphism::new(r.clone(), s.clone(), r_types, images)?;
    let m = SchemaMorphism::new(w, r, w_image, Vec::new())?;
    Query::new("pattern", m, n, binding, None)
}

/// An instance whose foreign-key cells have become rows of their own.
#[derive(Clone, Debug)]
pub struct Reified {
    pub instance: Instance,
    /// The edge table standing for each original generator.
    pub edge_objects: Vec<ObjId>,
}

/// Adds, for every generator `g: A -> B`, a table `A.g` with one row per
/// cell of `g` and columns `subject: A.g -> A`, `object: A.g -> B`, subject
/// to `object = subject·g`. Original tables and columns are kept.
pub fn reify_edges(inst: &Instance) -> Result<Reified> {
    let s = inst.schema();
    let base = s.object_count();
    let mut objects = s.objects().to_vec();
    let mut generators = s.generators().to_vec();
    let mut equations: Vec<Equation> = s.equations().to_vec();
    let mut edge_objects = Vec::new();
    for g in s.generator_ids() {
        objects.push(s.qualified_generator(g));
        edge_objects.push(ObjId(base + g.0));
    }
    for g in s.generator_ids() {
        let gen = s.generator(g);
        let e = ObjId(base + g.0);
        let subj = crate::cat::GenId(generators.len());
        generators.push(Generator {
            name: "subject".into(),
            source: e,
            target: gen.source,
        });
        let obj = crate::cat::GenId(generators.len());
        generators.push(Generator {
            name: "object".into(),
            source: e,
            target: gen.target,
        });
        equations.push(Equation {
            lhs: Path::from_raw(e, gen.target, vec![obj]),
            rhs: Path::from_raw(e, gen.target, vec![subj, g]),
        });
    }
    let schema = Arc::new(Schema::from_parts(
        format!("{}_reified", s.name()),
        objects,
        generators,
        equations,
    )?);
    let mut ids: Vec<Vec<String>> = s.object_ids().map(|o| inst.rows(o).to_vec()).collect();
    let mut columns: Vec<Vec<usize>> = inst.columns().to_vec();
    let mut subj_cols = Vec::new();
    let mut obj_cols = Vec::new();
    for g in s.generator_ids() {
        let gen = s.generator(g);
        let col = inst.column(g);
        ids.push(
            (0..inst.row_count(gen.source))
                .map(|x| {
                    format!(
                        "{}:{}:{}",
                        inst.rows(gen.source)[x],
                        gen.name,
                        inst.rows(gen.target)[col[x]]
                    )
                })
                .collect(),
        );
        subj_cols.push((0..inst.row_count(gen.source)).collect::<Vec<_>>());
        obj_cols.push(col.to_vec());
    }
    for (a, b) in subj_cols.into_iter().zip(obj_cols) {
        columns.push(a);
        columns.push(b);
    }
    Ok(Reified {
        instance: Instance::new(schema, ids, columns)?,
        edge_objects,
    })
}

/// Compiles any pattern. Without predicate variables this is one query on
/// `inst`. Otherwise edges are reified, `(s ?x o)` becomes
/// `(?x subject s) (?x object o)`, and one query is produced per choice of
/// edge table for each untyped predicate variable.
pub fn plan_pattern(gp: &GraphPattern, inst: &Instance, typing: &Typing) -> Result<PatternPlan> {
    let pvars: Vec<&String> = gp
        .triples
        .iter()
        .filter_map(|t| match &t.predicate {
            Predicate::Var(v) => Some(v),
            _ => None,
        })
        .collect();
    if pvars.is_empty() {
        return Ok(PatternPlan {
            instance: inst.clone(),
            queries: vec![compile_pattern(gp, inst, typing)?],
        });
    }
    let reified = reify_edges(inst)?;
    let rs = reified.instance.schema().clone();
    let s = inst.schema();
    let mut vars: Vec<String> = Vec::new();
    for v in pvars {
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    let mut candidates: Vec<Vec<String>> = Vec::new();
    for v in &vars {
        let key = format!("?{v}");
        if let Some(t) = typing.terms.get(&key) {
            candidates.push(vec![t.clone()]);
            continue;
        }
        let mut fits = Vec::new();
        for g in s.generator_ids() {
            let gen = s.generator(g);
            let ok = gp.triples.iter().all(|t| match &t.predicate {
                Predicate::Var(u) if u == v => {
                    type_of(s, typing, &t.subject).ok() == Some(gen.source)
                        && type_of(s, typing, &t.object).ok() == Some(gen.target)
                }
                _ => true,
            });
            if ok {
                fits.push(rs.object_name(reified.edge_objects[g.0]).to_string());
            }
        }
        candidates.push(fits);
    }
    let mut rewritten = GraphPattern::default();
    for t in &gp.triples {
        match &t.predicate {
            Predicate::Var(v) => {
                rewritten.triples.push(TriplePattern {
                    subject: Term::Var(v.clone()),
                    predicate: Predicate::Name("subject".into()),
                    object: t.subject.clone(),
                });
                rewritten.triples.push(TriplePattern {
                    subject: Term::Var(v.clone()),
                    predicate: Predicate::Name("object".into()),
                    object: t.object.clone(),
                });
            }
            _ => rewritten.triples.push(t.clone()),
        }
    }
    let mut queries = Vec::new();
    let mut choice = vec![0usize; vars.len()];
    if candidates.iter().all(|c| !c.is_empty()) {
        loop {
            let mut ty = typing.clone();
            for (i, v) in vars.iter().enumerate() {
                ty.terms.insert(format!("?{v}"), candidates[i][choice[i]].clone());
            }
            queries.push(compile_pattern(&rewritten, &reified.instance, &ty)?);
            let mut i = vars.len();
            loop {
                if i == 0 {
                    return Ok(PatternPlan {
                        instance: reified.instance,
                        queries,
                    });
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < candidates[i].len() {
                    break;
                }
                choice[i] = 0;
            }
        }
    }
    Ok(PatternPlan {
        instance: reified.instance,
        queries,
    })
}
