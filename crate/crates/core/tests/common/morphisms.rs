//! Random queries and query morphisms built from restrictions and
//! transports.

use std::sync::Arc;

use catlift::cat::{Generator, ObjId, Path, Schema, SchemaMorphism};
use catlift::instance::Instance;
use catlift::query::{complete_query_morphism, NaturalTransformation, Query, QueryMorphism};
use catlift::DEFAULT_BOUND;
use rand::seq::SliceRandom;
use rand::Rng;

use super::{free_schema, instance, paths_from, probe, where_clause, Gen};

pub fn random_query(r: &mut Gen) -> Option<(Instance, Query)> {
    let acyclic = r.gen_bool(0.5);
    let s = free_schema(r, 3, 4, acyclic);
    let inst = instance(r, &s, 4);
    let n = probe(r, &s, 4);
    let (m, binding) = where_clause(r, &n, &inst, 2)?;
    Some((inst, Query::new("q", m, n, binding, None).unwrap()))
}

/// The restriction of `m: W -> R` to the `W`-objects landing in `keep`,
/// with the inclusion into `W`.
pub fn restrict_where(m: &SchemaMorphism, keep: &[Option<usize>], r2: &Arc<Schema>) -> (SchemaMorphism, SchemaMorphism) {
    let w = m.domain();
    let kept: Vec<ObjId> = w.object_ids().filter(|&o| keep[m.object(o).0].is_some()).collect();
    let names = kept.iter().map(|&o| w.object_name(o).to_string()).collect();
    let w2 = Arc::new(Schema::from_parts("W2", names, Vec::new(), Vec::new()).unwrap());
    let g = SchemaMorphism::new(w2.clone(), w.clone(), kept.clone(), Vec::new()).unwrap();
    let images = kept.iter().map(|&o| ObjId(keep[m.object(o).0].unwrap())).collect();
    (g, SchemaMorphism::new(w2, r2.clone(), images, Vec::new()).unwrap())
}

/// `Q -> Q'` restricting to a random full sub-shape of `R`, identity `α`.
pub fn restriction(r: &mut Gen, q: &Query, inst: &Instance) -> (Query, QueryMorphism) {
    let rs = q.r();
    let mut keep = vec![None; rs.object_count()];
    let mut names = Vec::new();
    let mut objs = Vec::new();
    for o in rs.object_ids() {
        if r.gen_bool(0.7) {
            keep[o.0] = Some(names.len());
            names.push(rs.object_name(o).to_string());
            objs.push(o);
        }
    }
    let mut gens = Vec::new();
    let mut paths = Vec::new();
    for g in rs.generator_ids() {
        let gen = rs.generator(g);
        if let (Some(a), Some(b)) = (keep[gen.source.0], keep[gen.target.0]) {
            gens.push(Generator {
                name: gen.name.clone(),
                source: ObjId(a),
                target: ObjId(b),
            });
            paths.push(rs.generator_path(g));
        }
    }
    let r2 = Arc::new(Schema::from_parts("R2", names, gens, Vec::new()).unwrap());
    let f = SchemaMorphism::new(r2.clone(), rs.clone(), objs, paths).unwrap();
    let (g, m2) = restrict_where(&q.m, &keep, &r2);
    let alpha = NaturalTransformation::identity(&f.then(&q.n).unwrap());
    complete_query_morphism(f, g, alpha, q, m2, inst, DEFAULT_BOUND).unwrap()
}

/// `Q -> Q'` forgetting all generators of `R` and moving each object along
/// a random path.
pub fn transport(r: &mut Gen, q: &Query, inst: &Instance) -> (Query, QueryMorphism) {
    let rs = q.r();
    let s = q.n.codomain();
    let names = rs.objects().to_vec();
    let r2 = Arc::new(Schema::from_parts("R2", names, Vec::new(), Vec::new()).unwrap());
    let f = SchemaMorphism::new(r2.clone(), rs.clone(), rs.object_ids().collect(), Vec::new()).unwrap();
    let source = f.then(&q.n).unwrap();
    let comps: Vec<Path> = rs
        .object_ids()
        .map(|o| paths_from(s, q.n.object(o), 2).choose(r).unwrap().clone())
        .collect();
    let target = SchemaMorphism::new(r2.clone(), s.clone(), comps.iter().map(Path::target).collect(), Vec::new()).unwrap();
    let alpha = NaturalTransformation::new(source, target, comps, DEFAULT_BOUND).unwrap();
    let keep: Vec<Option<usize>> = rs.object_ids().map(|o| Some(o.0)).collect();
    let (g, m2) = restrict_where(&q.m, &keep, &r2);
    complete_query_morphism(f, g, alpha, q, m2, inst, DEFAULT_BOUND).unwrap()
}

pub fn step(r: &mut Gen, q: &Query, inst: &Instance) -> (Query, QueryMorphism) {
    if r.gen_bool(0.5) {
        restriction(r, q, inst)
    } else {
        transport(r, q, inst)
    }
}

