//! Random schemas, instances and queries for property tests.
#![allow(dead_code)]

use std::sync::Arc;

use catlift::cat::{GenId, Generator, ObjId, Path, Schema, SchemaMorphism};
use catlift::instance::{Instance, Row};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub mod constructions;
pub mod kan;
pub mod morphisms;

pub type Gen = ChaCha8Rng;

pub fn rng(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A free schema on `s0..` with generators `g0..`. Acyclic ones only have
/// generators from lower to higher objects, so their categories are finite.
pub fn free_schema(r: &mut Gen, max_objects: usize, max_gens: usize, acyclic: bool) -> Arc<Schema> {
    let k = r.gen_range(1..=max_objects);
    let mut b = Schema::builder("S");
    for i in 0..k {
        b = b.object(format!("s{i}"));
    }
    let mut g = 0;
    for _ in 0..r.gen_range(0..=max_gens) {
        let (s, t) = if acyclic {
            if k < 2 {
                break;
            }
            let s = r.gen_range(0..k - 1);
            (s, r.gen_range(s + 1..k))
        } else {
            (r.gen_range(0..k), r.gen_range(0..k))
        };
        b = b.arrow(format!("g{g}"), format!("s{s}"), format!("s{t}"));
        g += 1;
    }
    Arc::new(b.build().unwrap())
}

/// Every path out of `from` with at most `len` steps, shortest first.
pub fn paths_from(s: &Schema, from: ObjId, len: usize) -> Vec<Path> {
    let mut out = vec![Path::identity(from)];
    let mut frontier = out.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for p in &frontier {
            for &g in s.outgoing(p.target()) {
                next.push(p.then(&s.generator_path(g)).unwrap());
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn paths_between(s: &Schema, a: ObjId, b: ObjId, len: usize) -> Vec<Path> {
    paths_from(s, a, len).into_iter().filter(|p| p.target() == b).collect()
}

/// Random tables of at most `max_rows` rows, emptied where a column would
/// have nowhere to point.
pub fn instance(r: &mut Gen, s: &Arc<Schema>, max_rows: usize) -> Instance {
    let mut counts: Vec<usize> = s.object_ids().map(|_| r.gen_range(0..=max_rows)).collect();
    loop {
        let mut changed = false;
        for g in s.generator_ids() {
            let gen = s.generator(g);
            if counts[gen.target.0] == 0 && counts[gen.source.0] > 0 {
                counts[gen.source.0] = 0;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    instance_with_counts(r, s, &counts)
}

pub fn instance_with_counts(r: &mut Gen, s: &Arc<Schema>, counts: &[usize]) -> Instance {
    let ids = s
        .object_ids()
        .map(|o| (0..counts[o.0]).map(|i| format!("{}_{i}", s.object_name(o))).collect())
        .collect();
    let columns = s
        .generator_ids()
        .map(|g| {
            let gen = s.generator(g);
            (0..counts[gen.source.0])
                .map(|_| r.gen_range(0..counts[gen.target.0]))
                .collect()
        })
        .collect();
    Instance::new(s.clone(), ids, columns).unwrap()
}

/// Adds up to `max` equations between parallel paths (length <= 2) that the
/// instance already satisfies, and moves the instance onto the new schema.
pub fn with_equations(r: &mut Gen, inst: &Instance, max: usize) -> Instance {
    let s = inst.schema();
    let mut found = Vec::new();
    for a in s.object_ids() {
        let ps = paths_from(s, a, 2);
        for (i, p) in ps.iter().enumerate() {
            for q in &ps[i + 1..] {
                if p.target() == q.target() && inst.eval_path(p) == inst.eval_path(q) {
                    found.push((p.clone(), q.clone()));
                }
            }
        }
    }
    found.shuffle(r);
    let mut b = Schema::builder(s.name());
    for o in s.objects() {
        b = b.object(o.clone());
    }
    for g in s.generators() {
        b = b.arrow(g.name.clone(), s.object_name(g.source).to_string(), s.object_name(g.target).to_string());
    }
    for (p, q) in found.into_iter().take(max) {
        let lhs = s.step_names(&p);
        let rhs = s.step_names(&q);
        let lhs: Vec<&str> = lhs.iter().map(String::as_str).collect();
        let rhs: Vec<&str> = rhs.iter().map(String::as_str).collect();
        b = b.equation(s.object_name(p.source()).to_string(), &lhs, &rhs);
    }
    let ids = s.object_ids().map(|o| inst.rows(o).to_vec()).collect();
    Instance::new(Arc::new(b.build().unwrap()), ids, inst.columns().to_vec()).unwrap()
}

/// A random shape `R` (at most `max_objects` objects) and `n: R -> S`,
/// whose generators go to paths of length at most 2.
pub fn probe(r: &mut Gen, s: &Arc<Schema>, max_objects: usize) -> SchemaMorphism {
    let k = r.gen_range(1..=max_objects);
    let images: Vec<ObjId> = (0..k).map(|_| ObjId(r.gen_range(0..s.object_count()))).collect();
    let mut gens = Vec::new();
    let mut paths = Vec::new();
    for _ in 0..r.gen_range(0..=k + 1) {
        let a = r.gen_range(0..k);
        let ps = paths_from(s, images[a], 2);
        let p = ps.choose(r).unwrap().clone();
        let targets: Vec<usize> = (0..k).filter(|&b| images[b] == p.target()).collect();
        let Some(&b) = targets.choose(r) else { continue };
        gens.push(Generator {
            name: format!("r{}", gens.len()),
            source: ObjId(a),
            target: ObjId(b),
        });
        paths.push(p);
    }
    let objects = (0..k).map(|i| format!("x{i}")).collect();
    let shape = Arc::new(Schema::from_parts("R", objects, gens, Vec::new()).unwrap());
    SchemaMorphism::new(shape, s.clone(), images, paths).unwrap()
}

/// A discrete `W` of at most `max` objects mapped into `R`, and a binding of
/// each `W`-object to a row of the table it lands over (`None` when some
/// table is empty).
pub fn where_clause(r: &mut Gen, n: &SchemaMorphism, inst: &Instance, max: usize) -> Option<(SchemaMorphism, Vec<Row>)> {
    let rs = n.domain();
    let k = r.gen_range(0..=max);
    let images: Vec<ObjId> = (0..k).map(|_| ObjId(r.gen_range(0..rs.object_count()))).collect();
    let mut binding = Vec::new();
    for &x in &images {
        let t = n.object(x);
        if inst.row_count(t) == 0 {
            return None;
        }
        binding.push(Row::new(t, r.gen_range(0..inst.row_count(t))));
    }
    let objects = (0..k).map(|i| format!("w{i}")).collect();
    let w = Arc::new(Schema::from_parts("W", objects, Vec::new(), Vec::new()).unwrap());
    Some((SchemaMorphism::new(w, rs.clone(), images, Vec::new()).unwrap(), binding))
}

/// A random functor between free schemas.
pub fn functor(r: &mut Gen, s: &Arc<Schema>, t: &Arc<Schema>) -> Option<SchemaMorphism> {
    for _ in 0..20 {
        let objects: Vec<ObjId> = s.object_ids().map(|_| ObjId(r.gen_range(0..t.object_count()))).collect();
        let mut gens = Vec::new();
        for g in s.generator_ids() {
            let gen = s.generator(g);
            let ps = paths_between(t, objects[gen.source.0], objects[gen.target.0], 2);
            match ps.choose(r) {
                Some(p) => gens.push(p.clone()),
                None => break,
            }
        }
        if gens.len() == s.generator_count() {
            return Some(SchemaMorphism::new(s.clone(), t.clone(), objects, gens).unwrap());
        }
    }
    None
}

/// `inst` with every row ID replaced by a fresh name, rows permuted.
pub fn rename(r: &mut Gen, inst: &Instance) -> (Instance, Vec<Vec<usize>>) {
    let s = inst.schema();
    let perms: Vec<Vec<usize>> = s
        .object_ids()
        .map(|o| {
            let mut p: Vec<usize> = (0..inst.row_count(o)).collect();
            p.shuffle(r);
            p
        })
        .collect();
    // perm[o][old] = new
    let ids = s
        .object_ids()
        .map(|o| {
            let mut v = vec![String::new(); inst.row_count(o)];
            for (old, &new) in perms[o.0].iter().enumerate() {
                v[new] = format!("renamed_{}", inst.rows(o)[old]);
            }
            v
        })
        .collect();
    let columns = s
        .generator_ids()
        .map(|g: GenId| {
            let gen = s.generator(g);
            let mut c = vec![0; inst.row_count(gen.source)];
            for (old, &y) in inst.column(g).iter().enumerate() {
                c[perms[gen.source.0][old]] = perms[gen.target.0][y];
            }
            c
        })
        .collect();
    (Instance::new(s.clone(), ids, columns).unwrap(), perms)
}
