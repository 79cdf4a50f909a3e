//! Data migration along a schema morphism `F: S -> T`: restriction `Δ_F`
//! and its left and right adjoints `Σ_F`, `Π_F`.

use std::collections::HashMap;

use crate::cat::{comma_category, HomClasses, ObjId, SchemaMorphism};
use crate::error::{Error, Result};
use crate::instance::{Instance, Row};
use crate::query::{lift_id, Query};
use crate::solver::{enumerate_lifts, Lift, SquareInput};
use crate::util::UnionFind;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum MigrationMode {
    Delta,
    Sigma,
    Pi,
}

/// `Δ_F ε = ε ∘ F`. Rows and row IDs are copied from `ε(F(s))`.
pub fn delta(f: &SchemaMorphism, eps: &Instance) -> Result<Instance> {
    if **f.codomain() != **eps.schema() {
        return Err(Error::typing("restriction needs an instance on the codomain"));
    }
    let s = f.domain();
    let ids = s
        .object_ids()
        .map(|o| eps.rows(f.object(o)).to_vec())
        .collect();
    let columns = s
        .generator_ids()
        .map(|g| eps.eval_path(f.generator(g)))
        .collect();
    Instance::new(s.clone(), ids, columns)
}

/// `Σ_F δ` together with the unit `δ => Δ_F Σ_F δ`.
#[derive(Clone, Debug)]
pub struct SigmaResult {
    pub instance: Instance,
    /// For each `S`-object `c`, row of `δ(c)` to row of `(Σ_F δ)(F(c))`.
    pub unit: Vec<Vec<usize>>,
}

/// `Σ_F δ`: at `d`, the colimit of `δ` over `(F ↓ d)`.
///
/// Elements `(c, f: F(c) -> d, x ∈ δ(c))` are glued along every generator of
/// `S` by union-find. A class is named `c:x:f` after its least element in
/// (object, row, path) order.
pub fn sigma(f: &SchemaMorphism, inst: &Instance, bound: usize) -> Result<Instance> {
    Ok(sigma_with_unit(f, inst, bound)?.instance)
}

pub fn sigma_with_unit(f: &SchemaMorphism, inst: &Instance, bound: usize) -> Result<SigmaResult> {
    if **f.domain() != **inst.schema() {
        return Err(Error::typing("left pushforward needs an instance on the domain"));
    }
    let s = f.domain();
    let t = f.codomain();
    let mut homs: HashMap<ObjId, HomClasses> = HashMap::new();
    for c in s.object_ids() {
        let fc = f.object(c);
        if let std::collections::hash_map::Entry::Vacant(e) = homs.entry(fc) {
            e.insert(HomClasses::enumerate(t, fc, bound)?);
        }
    }
    // element order per d: c, then x, then path class
    let mut elems: Vec<Vec<(ObjId, usize, usize)>> = vec![Vec::new(); t.object_count()];
    let mut index: Vec<HashMap<(ObjId, usize, usize), usize>> =
        vec![HashMap::new(); t.object_count()];
    for c in s.object_ids() {
        let hc = &homs[&f.object(c)];
        for x in 0..inst.row_count(c) {
            for d in t.object_ids() {
                for k in hc.to(d) {
                    index[d.0].insert((c, x, k), elems[d.0].len());
                    elems[d.0].push((c, x, k));
                }
            }
        }
    }
    let mut ufs: Vec<UnionFind> = elems.iter().map(|e| UnionFind::new(e.len())).collect();
    for g in s.generator_ids() {
        let gen = s.generator(g);
        let (c, c2) = (gen.source, gen.target);
        let img = f.generator(g);
        let col = inst.column(g);
        let hc2 = homs[&f.object(c2)].clone();
        for d in t.object_ids() {
            for k2 in hc2.to(d) {
                let p = img.then(&hc2.reps()[k2])?;
                let k = homs
                    .get_mut(&f.object(c))
                    .expect("enumerated")
                    .classify(t, &p)?;
                for x in 0..inst.row_count(c) {
                    let a = index[d.0][&(c, x, k)];
                    let b = index[d.0][&(c2, col[x], k2)];
                    ufs[d.0].union(a, b);
                }
            }
        }
    }
    let mut ids = Vec::with_capacity(t.object_count());
    let mut class_of = Vec::with_capacity(t.object_count());
    let mut roots_of = Vec::with_capacity(t.object_count());
    for d in t.object_ids() {
        let (roots, of) = ufs[d.0].classes();
        ids.push(
            roots
                .iter()
                .map(|&r| {
                    let (c, x, k) = elems[d.0][r];
                    format!(
                        "{}:{}:{}",
                        s.object_name(c),
                        inst.rows(c)[x],
                        t.render_path(&homs[&f.object(c)].reps()[k])
                    )
                })
                .collect::<Vec<_>>(),
        );
        roots_of.push(roots);
        class_of.push(of);
    }
    let mut columns = Vec::with_capacity(t.generator_count());
    for h in t.generator_ids() {
        let gen = t.generator(h);
        let (d, d2) = (gen.source, gen.target);
        let mut col = Vec::with_capacity(roots_of[d.0].len());
        for &r in &roots_of[d.0] {
            let (c, x, k) = elems[d.0][r];
            let hc = homs.get_mut(&f.object(c)).expect("enumerated");
            let p = hc.reps()[k].then(&t.generator_path(h))?;
            let k2 = hc.classify(t, &p)?;
            col.push(class_of[d2.0][index[d2.0][&(c, x, k2)]]);
        }
        columns.push(col);
    }
    let unit = s
        .object_ids()
        .map(|c| {
            let d = f.object(c);
            (0..inst.row_count(c))
                .map(|x| class_of[d.0][index[d.0][&(c, x, 0)]])
                .collect()
        })
        .collect();
    Ok(SigmaResult {
        instance: Instance::new(t.clone(), ids, columns)?,
        unit,
    })
}

/// `Π_F δ`: at `d`, the lifts of the projection `(d ↓ F) -> S` over `δ`.
/// A row is named by its lift, `[c@f=x;...]`.
pub fn pi(f: &SchemaMorphism, inst: &Instance, bound: usize) -> Result<Instance> {
    if **f.domain() != **inst.schema() {
        return Err(Error::typing("right pushforward needs an instance on the domain"));
    }
    let t = f.codomain();
    let mut commas = Vec::with_capacity(t.object_count());
    let mut lifts: Vec<Vec<Lift>> = Vec::with_capacity(t.object_count());
    for d in t.object_ids() {
        let comma = comma_category(f, d, bound)?;
        let ls = enumerate_lifts(&SquareInput::unconstrained(comma.projection.clone()), inst)?;
        lifts.push(ls);
        commas.push(comma);
    }
    let ids = t
        .object_ids()
        .map(|d| {
            lifts[d.0]
                .iter()
                .map(|l| lift_id(l, &commas[d.0].schema, inst))
                .collect()
        })
        .collect();
    let mut columns = Vec::with_capacity(t.generator_count());
    for h in t.generator_ids() {
        let gen = t.generator(h);
        let (d, d2) = (gen.source, gen.target);
        let (from, to) = (&commas[d.0], &commas[d2.0]);
        let mut hc = HomClasses::enumerate(t, d, bound)?;
        let at: HashMap<(ObjId, usize), usize> = (0..from.schema.object_count())
            .map(|o| ((from.projection.object(ObjId(o)), from.classes[o]), o))
            .collect();
        // comma object (c, f') of d2 goes to (c, h·f') of d
        let mut pull = Vec::with_capacity(to.schema.object_count());
        for o in 0..to.schema.object_count() {
            let c = to.projection.object(ObjId(o));
            let p = t.generator_path(h).then(&to.arrows[o])?;
            pull.push(at[&(c, hc.classify(t, &p)?)]);
        }
        let pos: HashMap<&Lift, usize> = lifts[d2.0].iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut col = Vec::with_capacity(lifts[d.0].len());
        for l in &lifts[d.0] {
            let image = Lift::new(pull.iter().map(|&o| l.row(ObjId(o))).collect());
            col.push(*pos.get(&image).ok_or_else(|| {
                Error::typing("restricted lift missing; the instance violates its schema")
            })?);
        }
        columns.push(col);
    }
    Instance::new(t.clone(), ids, columns)
}

/// A map `∫δ -> ∫ε` over `F`: for each `S`-object `c`, rows of `δ(c)` to
/// rows of `ε(F(c))`.
#[derive(Clone, Debug)]
pub struct FibrationMap {
    pub functor: SchemaMorphism,
    pub components: Vec<Vec<usize>>,
}

impl FibrationMap {
    pub fn is_natural(&self, src: &Instance, dst: &Instance) -> bool {
        let f = &self.functor;
        let s = f.domain();
        if self.components.len() != s.object_count() {
            return false;
        }
        s.object_ids().all(|c| {
            self.components[c.0].len() == src.row_count(c)
                && self.components[c.0]
                    .iter()
                    .all(|&y| y < dst.row_count(f.object(c)))
        }) && s.generator_ids().all(|g| {
            let gen = s.generator(g);
            let far = dst.eval_path(f.generator(g));
            (0..src.row_count(gen.source)).all(|x| {
                far[self.components[gen.source.0][x]]
                    == self.components[gen.target.0][src.column(g)[x]]
            })
        })
    }

    pub fn apply(&self, r: Row) -> Row {
        Row::new(self.functor.object(r.object), self.components[r.object.0][r.index])
    }
}

/// Pushes a query on `δ` forward along `h: ∫δ -> ∫ε` over `F`.
/// Returns `(m, F ∘ n, h ∘ p)` and the image `h ∘ ℓ` of each given lift.
pub fn map_query_along_sigma(
    h: &FibrationMap,
    src: &Instance,
    dst: &Instance,
    q: &Query,
    lifts: &[Lift],
) -> Result<(Query, Vec<Lift>)> {
    if !h.is_natural(src, dst) {
        return Err(Error::typing("fibration map is not natural"));
    }
    let n2 = q.n.then(&h.functor)?;
    let binding = q.binding.iter().map(|&r| h.apply(r)).collect();
    let q2 = Query::new(format!("{}_pushed", q.name), q.m.clone(), n2, binding, q.select.clone())?;
    let images = lifts
        .iter()
        .map(|l| Lift::new(l.rows().iter().map(|&r| h.apply(r)).collect()))
        .collect();
    Ok((q2, images))
}

/// Answers to a query on `Δ_F ε` against the induced query on `ε`.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub restricted_lifts: Vec<Lift>,
    pub induced: Query,
    pub induced_lifts: Vec<Lift>,
    /// `h ∘ ℓ` for each restricted lift.
    pub images: Vec<Lift>,
}

impl InvarianceReport {
    /// Whether `ℓ ↦ h ∘ ℓ` is a bijection onto the induced answers.
    pub fn is_bijection(&self) -> bool {
        let mut a = self.images.clone();
        a.sort();
        a.dedup();
        a.len() == self.images.len() && a == self.induced_lifts
    }
}

pub fn query_invariance_under_delta(
    f: &SchemaMorphism,
    eps: &Instance,
    q: &Query,
) -> Result<InvarianceReport> {
    let restricted = delta(f, eps)?;
    let restricted_lifts = enumerate_lifts(&q.square(), &restricted)?;
    let h = FibrationMap {
        functor: f.clone(),
        components: f
            .domain()
            .object_ids()
            .map(|c| (0..restricted.row_count(c)).collect())
            .collect(),
    };
    let (induced, images) = map_query_along_sigma(&h, &restricted, eps, q, &restricted_lifts)?;
    let induced_lifts = enumerate_lifts(&induced.square(), eps)?;
    Ok(InvarianceReport {
        restricted_lifts,
        induced,
        induced_lifts,
        images,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::cat::Schema;
    use crate::fibration::grothendieck_triples;
    use crate::testkit::{dds_schema, emp, emp_schema, ln, ln_schema, sample_dds, same_last};
    use crate::DEFAULT_BOUND;

    fn point(obj: &str) -> Arc<Schema> {
        Arc::new(Schema::builder("Point").object(obj).build().unwrap())
    }

    fn to_point(s: &Arc<Schema>) -> SchemaMorphism {
        let objs: Vec<(&str, &str)> = s.objects().iter().map(|o| (o.as_str(), "X")).collect();
        let gens: Vec<(String, Vec<&str>)> = s
            .generator_ids()
            .map(|g| (s.qualified_generator(g), Vec::new()))
            .collect();
        let gens: Vec<(&str, &[&str])> = gens.iter().map(|(g, p)| (g.as_str(), p.as_slice())).collect();
        SchemaMorphism::from_names(s.clone(), point("X"), &objs, &gens).unwrap()
    }

    fn discrete() -> Arc<Schema> {
        Arc::new(Schema::builder("Two").objects(["A", "B"]).build().unwrap())
    }

    fn arrow() -> Arc<Schema> {
        Arc::new(
            Schema::builder("Arrow")
                .objects(["a", "b"])
                .arrow("e", "a", "b")
                .build()
                .unwrap(),
        )
    }

    fn two_three() -> Instance {
        Instance::builder(discrete())
            .ids("A", &["a1", "a2"])
            .ids("B", &["b1", "b2", "b3"])
            .build()
            .unwrap()
    }

    fn on_arrow() -> Instance {
        Instance::builder(arrow())
            .table("a", &[&["x", "u"], &["y", "u"]])
            .ids("b", &["u", "v", "w"])
            .build()
            .unwrap()
    }

    #[test]
    fn restricting_to_employees() {
        let f = SchemaMorphism::from_names(point("X"), emp_schema(), &[("X", "Employee")], &[]).unwrap();
        let d = delta(&f, &emp()).unwrap();
        assert_eq!(d.rows(ObjId(0)), ["101", "102", "103"]);
    }

    #[test]
    fn restricting_along_identity() {
        let inst = emp();
        let d = delta(&SchemaMorphism::identity(emp_schema()), &inst).unwrap();
        assert_eq!(d, inst);
    }

    #[test]
    fn collapsing_duplicates_tables() {
        let f = SchemaMorphism::from_names(discrete(), ln_schema(), &[("A", "Person"), ("B", "Person")], &[]).unwrap();
        let d = delta(&f, &ln()).unwrap();
        assert_eq!(d.rows(ObjId(0)), d.rows(ObjId(1)));
        assert_eq!(d.row_count(ObjId(0)), 3);
    }

    #[test]
    fn sigma_to_a_point() {
        assert_eq!(sigma(&to_point(&discrete()), &two_three(), DEFAULT_BOUND).unwrap().row_count(ObjId(0)), 5);
        let s = sigma(&to_point(&arrow()), &on_arrow(), DEFAULT_BOUND).unwrap();
        assert_eq!(s.rows(ObjId(0)), ["a:x:X", "b:v:X", "b:w:X"]);
    }

    #[test]
    fn sigma_to_a_point_counts_components() {
        let inst = ln();
        let got = sigma(&to_point(&ln_schema()), &inst, DEFAULT_BOUND).unwrap();
        // components of the element graph, by union-find over its triples
        let rows: Vec<Row> = inst.all_rows().collect();
        let pos: HashMap<Row, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut uf = UnionFind::new(rows.len());
        for t in grothendieck_triples(&inst) {
            uf.union(pos[&t.subject], pos[&t.object]);
        }
        assert_eq!(got.row_count(ObjId(0)), uf.classes().0.len());
    }

    #[test]
    fn sigma_unit_is_natural() {
        let inst = on_arrow();
        let f = to_point(&arrow());
        let res = sigma_with_unit(&f, &inst, DEFAULT_BOUND).unwrap();
        let h = FibrationMap {
            functor: f,
            components: res.unit.clone(),
        };
        assert!(h.is_natural(&inst, &res.instance));
    }

    #[test]
    fn pi_to_a_point() {
        assert_eq!(pi(&to_point(&discrete()), &two_three(), DEFAULT_BOUND).unwrap().row_count(ObjId(0)), 6);
        let p = pi(&to_point(&arrow()), &on_arrow(), DEFAULT_BOUND).unwrap();
        assert_eq!(p.row_count(ObjId(0)), 2);
    }

    #[test]
    fn pushforwards_along_identity() {
        let inst = ln();
        let id = SchemaMorphism::identity(ln_schema());
        assert!(pi(&id, &inst, DEFAULT_BOUND).unwrap().is_isomorphic(&inst));
        assert!(sigma(&id, &inst, DEFAULT_BOUND).unwrap().is_isomorphic(&inst));
    }

    #[test]
    fn loops_make_pushforwards_unbounded() {
        let id = SchemaMorphism::identity(dds_schema());
        assert!(matches!(sigma(&id, &sample_dds(), 8), Err(Error::Unbounded(_))));
        assert!(matches!(pi(&id, &sample_dds(), 8), Err(Error::Unbounded(_))));
    }

    #[test]
    fn migrations_check_their_input() {
        let id = SchemaMorphism::identity(ln_schema());
        assert!(delta(&id, &emp()).is_err());
        assert!(sigma(&id, &emp(), DEFAULT_BOUND).is_err());
        assert!(pi(&id, &emp(), DEFAULT_BOUND).is_err());
    }

    #[test]
    fn whereless_answers_land_in_sigma() {
        let inst = ln();
        let f = to_point(&ln_schema());
        let res = sigma_with_unit(&f, &inst, DEFAULT_BOUND).unwrap();
        let h = FibrationMap {
            functor: f,
            components: res.unit,
        };
        let q = Query::whereless("same", same_last());
        let ls = enumerate_lifts(&q.square(), &inst).unwrap();
        let (q2, images) = map_query_along_sigma(&h, &inst, &res.instance, &q, &ls).unwrap();
        assert_eq!(images.len(), 5);
        assert!(images.iter().all(|l| l.is_lift_of(&q2.n, &res.instance)));
        let (_, none) = map_query_along_sigma(&h, &inst, &res.instance, &q, &[]).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn identity_map_fixes_answers() {
        let inst = ln();
        let f = SchemaMorphism::identity(ln_schema());
        let h = FibrationMap {
            functor: f,
            components: ln_schema().object_ids().map(|o| (0..inst.row_count(o)).collect()).collect(),
        };
        let q = Query::whereless("same", same_last());
        let ls = enumerate_lifts(&q.square(), &inst).unwrap();
        assert_eq!(map_query_along_sigma(&h, &inst, &inst, &q, &ls).unwrap().1, ls);
    }

    #[test]
    fn non_natural_maps_are_rejected() {
        let inst = ln();
        let h = FibrationMap {
            functor: SchemaMorphism::identity(ln_schema()),
            components: vec![vec![0, 1, 2], vec![0, 0]],
        };
        assert!(!h.is_natural(&inst, &inst));
        let q = Query::whereless("same", same_last());
        assert!(map_query_along_sigma(&h, &inst, &inst, &q, &[]).is_err());
    }

    #[test]
    fn employee_queries_are_invariant() {
        let f = SchemaMorphism::from_names(point("X"), emp_schema(), &[("X", "Employee")], &[]).unwrap();
        let q = Query::whereless("one", SchemaMorphism::identity(point("X")));
        let rep = query_invariance_under_delta(&f, &emp(), &q).unwrap();
        assert_eq!((rep.restricted_lifts.len(), rep.induced_lifts.len()), (3, 3));
        assert!(rep.is_bijection());
        let id = SchemaMorphism::identity(ln_schema());
        let q = Query::whereless("same", same_last());
        assert!(query_invariance_under_delta(&id, &ln(), &q).unwrap().is_bijection());
    }
}
