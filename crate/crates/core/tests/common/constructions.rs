//! Random squares and constraints, and the retract and pushout builders
//! used to test constraint implications.

use std::sync::Arc;

use catlift::cat::{pushout_presentation, Generator, ObjId, Path, Schema, SchemaMorphism};
use catlift::instance::Instance;
use catlift::solver::{check_constraint, LiftingConstraint, SquareInput};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{free_schema, instance, paths_from, probe, rng, where_clause, with_equations, Gen};

/// A random instance (possibly with equations) and square over it.
pub fn square(seed: u64) -> Option<(Instance, SquareInput)> {
    let mut r = rng(seed);
    let acyclic = r.gen_bool(0.5);
    let s = free_schema(&mut r, 3, 4, acyclic);
    let mut inst = instance(&mut r, &s, 5);
    if r.gen_bool(0.5) {
        inst = with_equations(&mut r, &inst, 2);
    }
    let n = probe(&mut r, inst.schema(), 4);
    let (m, binding) = where_clause(&mut r, &n, &inst, 2)?;
    Some((inst, SquareInput { m, n, binding }))
}

pub fn constraint(r: &mut Gen, inst: &Instance) -> Option<LiftingConstraint> {
    let n = probe(r, inst.schema(), 3);
    let (m, _) = where_clause(r, &n, inst, 2)?;
    Some(LiftingConstraint::new("c", m, n).unwrap())
}

pub fn satisfied(inst: &Instance, c: &LiftingConstraint) -> bool {
    check_constraint(inst, c).unwrap().is_satisfied()
}

/// `m` as a retract of a larger `m'`; returns `(m', p2)`.
pub fn retract_of(r: &mut Gen, m: &SchemaMorphism) -> (SchemaMorphism, SchemaMorphism) {
    let (w, rs) = (m.domain(), m.codomain());
    let (kw, kr) = (w.object_count(), rs.object_count());
    // R' = R plus extra objects over random R-objects, with extra arrows
    let extra: Vec<ObjId> = (0..r.gen_range(0..=2)).map(|_| ObjId(r.gen_range(0..kr))).collect();
    let mut p2_objects: Vec<ObjId> = rs.object_ids().collect();
    p2_objects.extend(extra.iter().copied());
    let mut objects: Vec<String> = rs.objects().to_vec();
    objects.extend((0..extra.len()).map(|i| format!("extra{i}")));
    let mut gens: Vec<Generator> = rs.generators().to_vec();
    let mut p2_gens: Vec<Path> = rs.generator_ids().map(|g| rs.generator_path(g)).collect();
    for i in 0..r.gen_range(0..=2) {
        if extra.is_empty() {
            break;
        }
        let e = kr + r.gen_range(0..extra.len());
        let other = r.gen_range(0..kr);
        let outward = r.gen_bool(0.5);
        let (a, b) = if outward { (e, other) } else { (other, e) };
        let ps: Vec<Path> = paths_from(rs, p2_objects[a], 2)
            .into_iter()
            .filter(|p| p.target() == p2_objects[b])
            .collect();
        let Some(p) = ps.choose(r) else { continue };
        gens.push(Generator {
            name: format!("h{i}"),
            source: ObjId(a),
            target: ObjId(b),
        });
        p2_gens.push(p.clone());
    }
    let r2 = Arc::new(Schema::from_parts("R2", objects, gens, Vec::new()).unwrap());
    let p2 = SchemaMorphism::new(r2.clone(), rs.clone(), p2_objects.clone(), p2_gens).unwrap();
    // W' = W plus extra objects over random W-objects, placed over the same R-object
    let mut w_objects: Vec<String> = w.objects().to_vec();
    let mut m2: Vec<ObjId> = w.object_ids().map(|o| m.object(o)).collect();
    if kw > 0 {
        for i in 0..r.gen_range(0..=2) {
            let w0 = ObjId(r.gen_range(0..kw));
            let over: Vec<usize> = (0..p2_objects.len())
                .filter(|&x| p2_objects[x] == m.object(w0))
                .collect();
            w_objects.push(format!("wextra{i}"));
            m2.push(ObjId(*over.choose(r).unwrap()));
        }
    }
    let w2 = Arc::new(Schema::from_parts("W2", w_objects, Vec::new(), Vec::new()).unwrap());
    (SchemaMorphism::new(w2, r2, m2, Vec::new()).unwrap(), p2)
}

/// Pushes `m': W' -> R'` along a map of discrete schemas `W' -> W`, gluing
/// only `W'`-objects that `n'` already sends to the same table. Returns
/// `(m, q, n)` with `n ∘ q = n'`.
pub fn pushout_case(
    r: &mut Gen,
    m2: &SchemaMorphism,
    n2: &SchemaMorphism,
) -> (SchemaMorphism, SchemaMorphism, SchemaMorphism) {
    let s = n2.codomain();
    let w2 = m2.domain();
    let table = |x: ObjId| n2.object(m2.object(x));
    // W-objects, each with the table it sits over
    let mut w_tables: Vec<ObjId> = Vec::new();
    let mut k = Vec::new();
    for x in w2.object_ids() {
        let fits: Vec<usize> = (0..w_tables.len()).filter(|&i| w_tables[i] == table(x)).collect();
        match fits.choose(r) {
            Some(&i) if r.gen_bool(0.5) => k.push(ObjId(i)),
            _ => {
                k.push(ObjId(w_tables.len()));
                w_tables.push(table(x));
            }
        }
    }
    for _ in 0..r.gen_range(0..=1) {
        w_tables.push(ObjId(r.gen_range(0..s.object_count())));
    }
    let objects = (0..w_tables.len()).map(|i| format!("v{i}")).collect();
    let w = Arc::new(Schema::from_parts("W", objects, Vec::new(), Vec::new()).unwrap());
    let k = SchemaMorphism::new(w2.clone(), w.clone(), k, Vec::new()).unwrap();
    let po = pushout_presentation(m2, &k).unwrap();
    let apex = &po.apex;
    let mut objects = vec![ObjId(0); apex.object_count()];
    for o in n2.domain().object_ids() {
        objects[po.left.object(o).0] = n2.object(o);
    }
    for o in w.object_ids() {
        objects[po.right.object(o).0] = w_tables[o.0];
    }
    let mut gens = vec![None; apex.generator_count()];
    for g in n2.domain().generator_ids() {
        let step = po.left.generator(g).steps()[0];
        gens[step.0] = Some(n2.generator(g).clone());
    }
    let gens = gens.into_iter().map(Option::unwrap).collect();
    let n = SchemaMorphism::new(apex.clone(), s.clone(), objects, gens).unwrap();
    (po.right, po.left, n)
}

