//! The category of elements of an instance and discrete opfibrations.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::cat::{
    materialize, ConcreteCategory, ConcreteFunctor, GenId, MaterializedSchema, Morphism, Path,
};
use crate::error::{Error, Result};
use crate::instance::{validate_instance, Instance, Row};

/// An edge of the category of elements over a generator.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Row,
    pub generator: GenId,
    pub object: Row,
}

/// One triple per non-ID cell: rows in table order, generators in declaration order.
pub fn grothendieck_triples(inst: &Instance) -> Vec<Triple> {
    let s = inst.schema();
    let mut out = Vec::new();
    for o in s.object_ids() {
        for x in 0..inst.row_count(o) {
            for &g in s.outgoing(o) {
                out.push(Triple {
                    subject: Row::new(o, x),
                    generator: g,
                    object: Row::new(s.generator(g).target, inst.column(g)[x]),
                });
            }
        }
    }
    out
}

/// `(Object,rowid)`, the node syntax used in triple output.
pub fn node_label(inst: &Instance, r: Row) -> String {
    format!("({},{})", inst.schema().object_name(r.object), inst.row_id(r))
}

/// `<(Employee,101)> <first> <(FNString,David)> .`
pub fn format_triple(inst: &Instance, t: &Triple) -> String {
    format!(
        "<{}> <{}> <{}> .",
        node_label(inst, t.subject),
        inst.schema().generator(t.generator).name,
        node_label(inst, t.object)
    )
}

/// The category of elements of an instance over a realisation of its schema.
#[derive(Clone, Debug)]
pub struct Grothendieck {
    pub base: MaterializedSchema,
    pub total: Arc<ConcreteCategory>,
    /// The projection `∫δ -> base`; a discrete opfibration.
    pub projection: ConcreteFunctor,
    /// The row behind each object of `total`.
    pub rows: Vec<Row>,
}

impl Grothendieck {
    /// Index of a row's element object.
    pub fn element(&self, r: Row) -> usize {
        self.rows
            .iter()
            .position(|&x| x == r)
            .expect("every row is an element")
    }
}

/// `∫δ -> S` over the fully materialised schema.
///
/// Fails with `Unbounded` when some hom-set of the schema is infinite or
/// undecided within `bound`; [`grothendieck_reduced`] covers those schemas.
pub fn grothendieck_concrete(inst: &Instance, bound: usize) -> Result<Grothendieck> {
    let base = materialize(inst.schema(), bound)?;
    grothendieck_over(inst, base)
}

/// `∫δ` over the quotient of the free category by the action of `δ`.
///
/// Always finite. The projection is a discrete opfibration whose fibres are the
/// tables of `δ`, and every lifting question about `δ` has the same answer here.
pub fn grothendieck_reduced(inst: &Instance) -> Result<Grothendieck> {
    grothendieck_over(inst, action_quotient(inst))
}

/// `∫δ` over a given realisation of the schema. The instance must satisfy
/// the schema's equations so that the base acts on rows.
pub fn grothendieck_over(inst: &Instance, base: MaterializedSchema) -> Result<Grothendieck> {
    if *base.schema != **inst.schema() {
        return Err(Error::typing("base realises a different schema"));
    }
    let report = validate_instance(inst);
    if let Some(v) = report.violations.first() {
        return Err(Error::typing(format!("instance violates its schema: {v}")));
    }
    let cat = &base.category;
    let actions: Vec<Vec<usize>> = base.paths.iter().map(|p| inst.eval_path(p)).collect();
    let rows: Vec<Row> = inst.all_rows().collect();
    let first_of: HashMap<Row, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let mut morphisms = Vec::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut base_of = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        for &m in cat.out_of(r.object.0) {
            let t = Row::new(
                crate::cat::ObjId(cat.morphism(m).target),
                actions[m][r.index],
            );
            index.insert((i, m), morphisms.len());
            morphisms.push(Morphism {
                name: format!("{}:{}", inst.row_id(*r), cat.morphism(m).name),
                source: i,
                target: first_of[&t],
            });
            base_of.push(m);
        }
    }
    let identities = rows
        .iter()
        .enumerate()
        .map(|(i, r)| index[&(i, cat.identity(r.object.0))])
        .collect();
    let mut composition = HashMap::new();
    for (u, mu) in morphisms.iter().enumerate() {
        let y = mu.target;
        for &m2 in cat.out_of(rows[y].object.0) {
            let v = index[&(y, m2)];
            let h = cat
                .compose(base_of[u], m2)
                .expect("base morphisms compose");
            composition.insert((u, v), index[&(mu.source, h)]);
        }
    }
    let names = rows.iter().map(|&r| inst.row_id(r).to_string()).collect();
    let total = Arc::new(ConcreteCategory::from_parts_trusted(
        names,
        morphisms,
        identities,
        composition,
    ));
    let projection = ConcreteFunctor::new_trusted(
        total.clone(),
        base.category.clone(),
        rows.iter().map(|r| r.object.0).collect(),
        base_of,
    );
    Ok(Grothendieck {
        base,
        total,
        projection,
        rows,
    })
}

/// The free category on the schema's graph modulo "acts identically on `δ`".
///
/// Each object's morphisms are the distinct functions (with target) reached
/// by paths from it, found breadth first; the first path found represents its
/// class. When `δ` satisfies the equations this is a quotient of the presented
/// category.
pub fn action_quotient(inst: &Instance) -> MaterializedSchema {
    let s = inst.schema();
    let mut morphisms = Vec::new();
    let mut paths: Vec<Path> = Vec::new();
    let mut tables: Vec<HashMap<(usize, Vec<usize>), usize>> = Vec::new();
    let mut identities = Vec::new();
    let mut actions: Vec<Vec<usize>> = Vec::new();
    for src in s.object_ids() {
        let mut table = HashMap::new();
        let id: Vec<usize> = (0..inst.row_count(src)).collect();
        let first = morphisms.len();
        identities.push(first);
        table.insert((src.0, id.clone()), first);
        morphisms.push(Morphism {
            name: format!("id_{}", s.object_name(src)),
            source: src.0,
            target: src.0,
        });
        paths.push(Path::identity(src));
        actions.push(id);
        let mut queue = VecDeque::from([first]);
        while let Some(m) = queue.pop_front() {
            let t = morphisms[m].target;
            for &g in s.outgoing(crate::cat::ObjId(t)) {
                let col = inst.column(g);
                let f: Vec<usize> = actions[m].iter().map(|&x| col[x]).collect();
                let key = (s.generator(g).target.0, f);
                if table.contains_key(&key) {
                    continue;
                }
                let p = paths[m]
                    .then(&s.generator_path(g))
                    .expect("generator extends path");
                let k = morphisms.len();
                morphisms.push(Morphism {
                    name: s.render_path(&p),
                    source: src.0,
                    target: key.0,
                });
                paths.push(p);
                actions.push(key.1.clone());
                table.insert(key, k);
                queue.push_back(k);
            }
        }
        tables.push(table);
    }
    let mut composition = HashMap::new();
    for f in 0..morphisms.len() {
        let (src, mid) = (morphisms[f].source, morphisms[f].target);
        for g in 0..morphisms.len() {
            if morphisms[g].source != mid {
                continue;
            }
            let act: Vec<usize> = actions[f].iter().map(|&x| actions[g][x]).collect();
            let h = tables[src][&(morphisms[g].target, act)];
            composition.insert((f, g), h);
        }
    }
    let generators = s
        .generator_ids()
        .map(|g| {
            let gen = s.generator(g);
            let col = inst.column(g).to_vec();
            tables[gen.source.0][&(gen.target.0, col)]
        })
        .collect();
    MaterializedSchema {
        schema: s.clone(),
        category: Arc::new(ConcreteCategory::from_parts_trusted(
            s.objects().to_vec(),
            morphisms,
            identities,
            composition,
        )),
        generators,
        paths,
    }
}

/// Why a functor fails to be a discrete opfibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibrationWitness {
    /// No morphism out of `object` lies over `morphism` (existence fails).
    MissingLift { object: usize, morphism: usize },
    /// Several morphisms out of `object` lie over `morphism` (uniqueness fails).
    DuplicateLift {
        object: usize,
        morphism: usize,
        lifts: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FibrationCheck {
    Yes,
    No(FibrationWitness),
}

/// Every codomain morphism out of `F(x)` must have exactly one lift out of `x`.
/// The first failure in (object, morphism) order is returned.
pub fn is_relational_fibration(f: &ConcreteFunctor) -> FibrationCheck {
    let (dom, cod) = (f.domain(), f.codomain());
    for x in 0..dom.objects().len() {
        for &m in cod.out_of(f.object(x)) {
            let lifts: Vec<usize> = dom
                .out_of(x)
                .iter()
                .copied()
                .filter(|&u| f.morphism(u) == m)
                .collect();
            match lifts.len() {
                1 => {}
                0 => {
                    return FibrationCheck::No(FibrationWitness::MissingLift {
                        object: x,
                        morphism: m,
                    })
                }
                _ => {
                    return FibrationCheck::No(FibrationWitness::DuplicateLift {
                        object: x,
                        morphism: m,
                        lifts,
                    })
                }
            }
        }
    }
    FibrationCheck::Yes
}

/// Morphisms lying over identities are identities.
pub fn fibers_are_discrete(f: &ConcreteFunctor) -> bool {
    let (dom, cod) = (f.domain(), f.codomain());
    (0..dom.morphisms().len())
        .all(|u| !cod.is_identity(f.morphism(u)) || dom.is_identity(u))
}

/// For every commuting triangle `a·c = b` below and lifts `u` of `a`, `v` of
/// `b` out of one object, some `w` over `c` satisfies `u·w = v`.
pub fn fills_triangles(f: &ConcreteFunctor) -> bool {
    let (dom, cod) = (f.domain(), f.codomain());
    for x in 0..dom.objects().len() {
        for &u in dom.out_of(x) {
            let a = f.morphism(u);
            let y1 = dom.morphism(u).target;
            for &c in cod.out_of(cod.morphism(a).target) {
                let b = cod.compose(a, c).expect("composable");
                for &v in dom.out_of(x) {
                    if f.morphism(v) != b {
                        continue;
                    }
                    let filled = dom
                        .out_of(y1)
                        .iter()
                        .any(|&w| f.morphism(w) == c && dom.compose(u, w) == Some(v));
                    if !filled {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Reads a discrete opfibration over a realised schema back as an instance:
/// rows of `s` are the objects over `s`, columns follow the unique lifts of
/// generators.
pub fn fibers_to_instance(f: &ConcreteFunctor, base: &MaterializedSchema) -> Result<Instance> {
    if **f.codomain() != *base.category {
        return Err(Error::typing("functor does not land in the given base"));
    }
    if let FibrationCheck::No(w) = is_relational_fibration(f) {
        return Err(Error::NotAFibration(format!("{w:?}")));
    }
    let s = &base.schema;
    let dom = f.domain();
    let mut fibre_pos = vec![0usize; dom.objects().len()];
    let mut ids: Vec<Vec<String>> = vec![Vec::new(); s.object_count()];
    for x in 0..dom.objects().len() {
        let o = f.object(x);
        fibre_pos[x] = ids[o].len();
        let mut name = dom.objects()[x].clone();
        if ids[o].contains(&name) {
            name = format!("{name}~{x}");
        }
        ids[o].push(name);
    }
    let mut columns = vec![Vec::new(); s.generator_count()];
    for x in 0..dom.objects().len() {
        for &g in s.outgoing(crate::cat::ObjId(f.object(x))) {
            let m = base.generators[g.0];
            let u = dom
                .out_of(x)
                .iter()
                .copied()
                .find(|&u| f.morphism(u) == m)
                .expect("fibration has lifts");
            columns[g.0].push(fibre_pos[dom.morphism(u).target]);
        }
    }
    Instance::new(s.clone(), ids, columns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{ConcreteCategory, Schema};
    use crate::testkit::{emp, ln};

    fn arrow_cat() -> Arc<ConcreteCategory> {
        Arc::new(
            ConcreteCategory::builder()
                .object("a")
                .object("b")
                .morphism("f", "a", "b")
                .build()
                .unwrap(),
        )
    }

    #[test]
    fn emp_has_sixteen_triples() {
        let e = emp();
        let ts = grothendieck_triples(&e);
        assert_eq!(ts.len(), 16);
        let lines: Vec<String> = ts.iter().map(|t| format_triple(&e, t)).collect();
        assert_eq!(lines[0], "<(Employee,101)> <first> <(FNString,David)> .");
        assert!(grothendieck_triples(&Instance::empty(e.schema().clone())).is_empty());
    }

    #[test]
    fn emp_needs_the_reduced_base() {
        let e = emp();
        assert!(matches!(grothendieck_concrete(&e, 16), Err(Error::Unbounded(_))));
        let g = grothendieck_reduced(&e).unwrap();
        assert_eq!(g.total.objects().len(), 18);
        assert_eq!(is_relational_fibration(&g.projection), FibrationCheck::Yes);
        assert!(fibers_are_discrete(&g.projection));
        assert!(g.projection.is_faithful());
        assert!(fills_triangles(&g.projection));
        let back = fibers_to_instance(&g.projection, &g.base).unwrap();
        assert!(back.is_isomorphic(&e));
    }

    #[test]
    fn ln_round_trips_over_the_full_schema() {
        let l = ln();
        let g = grothendieck_concrete(&l, 16).unwrap();
        assert_eq!(g.total.objects().len(), 5);
        assert_eq!(is_relational_fibration(&g.projection), FibrationCheck::Yes);
        let back = fibers_to_instance(&g.projection, &g.base).unwrap();
        assert!(back.is_isomorphic(&l));
        assert_eq!(back.rows(crate::cat::ObjId(0)).len(), 3);
    }

    #[test]
    fn one_row_is_terminal_over_terminal() {
        let s = Arc::new(Schema::builder("Pt").object("x").build().unwrap());
        let i = Instance::builder(s).ids("x", &["only"]).build().unwrap();
        let g = grothendieck_concrete(&i, 4).unwrap();
        assert_eq!(g.total.objects().len(), 1);
        assert_eq!(g.total.morphisms().len(), 1);
        assert_eq!(g.base.category.morphisms().len(), 1);
        let back = fibers_to_instance(&g.projection, &g.base).unwrap();
        assert_eq!(back.rows(crate::cat::ObjId(0)), ["only"]);
    }

    #[test]
    fn missing_lift_is_a_rho1_witness() {
        let cod = arrow_cat();
        let dom = Arc::new(
            ConcreteCategory::builder()
                .object("a")
                .object("b")
                .build()
                .unwrap(),
        );
        let f = ConcreteFunctor::new(dom, cod.clone(), vec![0, 1], vec![0, 1]).unwrap();
        let fm = cod.morphism_index("f").unwrap();
        assert_eq!(
            is_relational_fibration(&f),
            FibrationCheck::No(FibrationWitness::MissingLift {
                object: 0,
                morphism: fm
            })
        );
    }

    #[test]
    fn parallel_pair_is_a_rho2_witness() {
        let cod = arrow_cat();
        let dom = Arc::new(
            ConcreteCategory::builder()
                .object("a")
                .object("b")
                .morphism("u", "a", "b")
                .morphism("v", "a", "b")
                .build()
                .unwrap(),
        );
        let fm = cod.morphism_index("f").unwrap();
        let (u, v) = (dom.morphism_index("u").unwrap(), dom.morphism_index("v").unwrap());
        let mut morphisms = vec![0; dom.morphisms().len()];
        morphisms[dom.identity(1)] = cod.identity(1);
        morphisms[u] = fm;
        morphisms[v] = fm;
        let f = ConcreteFunctor::new(dom, cod, vec![0, 1], morphisms).unwrap();
        assert_eq!(
            is_relational_fibration(&f),
            FibrationCheck::No(FibrationWitness::DuplicateLift {
                object: 0,
                morphism: fm,
                lifts: vec![u, v]
            })
        );
        assert!(!f.is_faithful());
    }

    #[test]
    fn non_fibrations_have_no_fibers_instance() {
        let s = Arc::new(
            Schema::builder("A")
                .objects(["a", "b"])
                .arrow("f", "a", "b")
                .build()
                .unwrap(),
        );
        let base = crate::cat::materialize(&s, 4).unwrap();
        let dom = Arc::new(
            ConcreteCategory::builder()
                .object("a")
                .object("b")
                .build()
                .unwrap(),
        );
        let ids = vec![base.category.identity(0), base.category.identity(1)];
        let f = ConcreteFunctor::new(dom, base.category.clone(), vec![0, 1], ids).unwrap();
        assert!(matches!(fibers_to_instance(&f, &base), Err(Error::NotAFibration(_))));
    }
}
