//! Pushouts of presentations.

use std::collections::HashMap;
use std::sync::Arc;

use super::morphism::SchemaMorphism;
use super::schema::{Equation, GenId, Generator, ObjId, Path, Schema};
use crate::error::{Error, Result};
use crate::util::UnionFind;

/// The apex of a pushout square together with its two cocone legs.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub apex: Arc<Schema>,
    pub left: SchemaMorphism,
    pub right: SchemaMorphism,
}

/// Pushout of `m1: W -> R1` and `m2: W -> R2`.
///
/// Objects are glued by union-find; each class is named after its least
/// member, tagged `inl_` or `inr_` by side. Generators are the disjoint union
/// of both sides, and every generator of `W` contributes an equation between
/// its two images.
pub fn pushout_presentation(m1: &SchemaMorphism, m2: &SchemaMorphism) -> Result<Pushout> {
    if **m1.domain() != **m2.domain() {
        return Err(Error::typing("pushout legs must share a domain"));
    }
    let w = m1.domain();
    let (r1, r2) = (m1.codomain(), m2.codomain());
    let n1 = r1.object_count();
    let mut uf = UnionFind::new(n1 + r2.object_count());
    for o in w.object_ids() {
        uf.union(m1.object(o).0, n1 + m2.object(o).0);
    }
    let (roots, class_of) = uf.classes();
    let tagged = |i: usize| {
        if i < n1 {
            format!("inl_{}", r1.objects()[i])
        } else {
            format!("inr_{}", r2.objects()[i - n1])
        }
    };
    let objects: Vec<String> = roots.iter().map(|&r| tagged(r)).collect();
    let obj1 = |o: ObjId| ObjId(class_of[o.0]);
    let obj2 = |o: ObjId| ObjId(class_of[n1 + o.0]);

    // (side, source class, name) of every generator, for collision checks
    let mut raw: Vec<(&str, ObjId, ObjId, &Schema, GenId)> = Vec::new();
    for g in r1.generator_ids() {
        let gen = r1.generator(g);
        raw.push(("inl", obj1(gen.source), obj1(gen.target), r1, g));
    }
    for g in r2.generator_ids() {
        let gen = r2.generator(g);
        raw.push(("inr", obj2(gen.source), obj2(gen.target), r2, g));
    }
    let mut counts: HashMap<(ObjId, String), usize> = HashMap::new();
    for (tag, s, _, sch, g) in &raw {
        *counts
            .entry((*s, format!("{tag}_{}", sch.generator(*g).name)))
            .or_default() += 1;
    }
    let generators: Vec<Generator> = raw
        .iter()
        .map(|(tag, s, t, sch, g)| {
            let short = format!("{tag}_{}", sch.generator(*g).name);
            let name = if counts[&(*s, short.clone())] > 1 {
                format!("{tag}_{}", sch.qualified_generator(*g))
            } else {
                short
            };
            Generator {
                name,
                source: *s,
                target: *t,
            }
        })
        .collect();
    let g_off = r1.generator_count();
    let tr1 = |p: &Path| {
        Path::from_raw(
            obj1(p.source()),
            obj1(p.target()),
            p.steps().to_vec(),
        )
    };
    let tr2 = |p: &Path| {
        Path::from_raw(
            obj2(p.source()),
            obj2(p.target()),
            p.steps().iter().map(|g| GenId(g.0 + g_off)).collect(),
        )
    };
    let mut equations = Vec::new();
    for e in r1.equations() {
        equations.push(Equation {
            lhs: tr1(&e.lhs),
            rhs: tr1(&e.rhs),
        });
    }
    for e in r2.equations() {
        equations.push(Equation {
            lhs: tr2(&e.lhs),
            rhs: tr2(&e.rhs),
        });
    }
    for g in w.generator_ids() {
        let lhs = tr1(m1.generator(g));
        let rhs = tr2(m2.generator(g));
        if lhs != rhs {
            equations.push(Equation { lhs, rhs });
        }
    }
    let apex = Arc::new(Schema::from_parts(
        format!("{}+{}", r1.name(), r2.name()),
        objects,
        generators,
        equations,
    )?);
    let left = SchemaMorphism::new(
        r1.clone(),
        apex.clone(),
        r1.object_ids().map(obj1).collect(),
        r1.generator_ids().map(|g| apex.generator_path(g)).collect(),
    )?;
    let right = SchemaMorphism::new(
        r2.clone(),
        apex.clone(),
        r2.object_ids().map(obj2).collect(),
        r2.generator_ids()
            .map(|g| apex.generator_path(GenId(g.0 + g_off)))
            .collect(),
    )?;
    Ok(Pushout { apex, left, right })
}
