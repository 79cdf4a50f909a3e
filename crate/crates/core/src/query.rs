//! Queries, their result sets, and the maps induced between result sets by
//! morphisms of queries.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cat::{GenId, ObjId, Path, PathEq, Schema, SchemaMorphism};
use crate::error::{Error, Result};
use crate::instance::{Instance, Row};
use crate::migration::delta;
use crate::solver::{enumerate_lifts_with, Lift, SolveOptions, SquareInput};
use crate::util::UnionFind;

/// A lifting problem `(m, n, p)` with an optional projection `q: X -> R`.
#[derive(Clone, Debug)]
pub struct Query {
    pub name: String,
    pub m: SchemaMorphism,
    pub n: SchemaMorphism,
    pub binding: Vec<Row>,
    pub select: Option<SchemaMorphism>,
}

impl Query {
    pub fn new(
        name: impl Into<String>,
        m: SchemaMorphism,
        n: SchemaMorphism,
        binding: Vec<Row>,
        select: Option<SchemaMorphism>,
    ) -> Result<Query> {
        if **m.codomain() != **n.domain() {
            return Err(Error::typing("where-clause must embed into the result shape"));
        }
        if binding.len() != m.domain().object_count() {
            return Err(Error::typing("binding must place every where-object"));
        }
        if let Some(q) = &select {
            if **q.codomain() != **n.domain() {
                return Err(Error::typing("select must map into the result shape"));
            }
        }
        Ok(Query {
            name: name.into(),
            m,
            n,
            binding,
            select,
        })
    }

    /// The query with an empty where-clause.
    pub fn whereless(name: impl Into<String>, n: SchemaMorphism) -> Query {
        Query {
            name: name.into(),
            m: SchemaMorphism::initial(n.domain().clone()),
            n,
            binding: Vec::new(),
            select: None,
        }
    }

    pub fn r(&self) -> &Arc<Schema> {
        self.n.domain()
    }

    pub fn square(&self) -> SquareInput {
        SquareInput {
            m: self.m.clone(),
            n: self.n.clone(),
            binding: self.binding.clone(),
        }
    }
}

/// Lifts of a query and their projections along `select`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultSet {
    pub lifts: Vec<Lift>,
    /// One row per lift and per object of `X` (or of `R` when there is no select).
    pub projected: Vec<Vec<Row>>,
}

pub fn run_query(q: &Query, inst: &Instance) -> Result<ResultSet> {
    run_query_with(q, inst, &SolveOptions::default())
}

pub fn run_query_with(q: &Query, inst: &Instance, opts: &SolveOptions) -> Result<ResultSet> {
    let lifts = enumerate_lifts_with(&q.square(), inst, opts)?;
    let projected = lifts
        .iter()
        .map(|l| match &q.select {
            Some(sel) => l.precompose(sel).rows().to_vec(),
            None => l.rows().to_vec(),
        })
        .collect();
    Ok(ResultSet { lifts, projected })
}

impl ResultSet {
    /// Names of the projected columns, in declaration order.
    pub fn columns(q: &Query) -> Vec<String> {
        match &q.select {
            Some(sel) => sel.domain().objects().to_vec(),
            None => q.r().objects().to_vec(),
        }
    }

    /// Array of objects mapping column name to `[table, rowid]`.
    pub fn to_json(&self, q: &Query, inst: &Instance) -> serde_json::Value {
        let cols = Self::columns(q);
        serde_json::Value::Array(
            self.projected
                .iter()
                .map(|rows| {
                    let map: serde_json::Map<_, _> = cols
                        .iter()
                        .zip(rows)
                        .map(|(c, &r)| {
                            let (t, id) = inst.describe(r);
                            (c.clone(), serde_json::json!([t, id]))
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect(),
        )
    }

    /// Header of column names, then one line of row IDs per result.
    pub fn to_csv(&self, q: &Query, inst: &Instance) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(Self::columns(q))?;
        for rows in &self.projected {
            w.write_record(rows.iter().map(|&r| inst.row_id(r)))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Io(e.to_string()))?)
            .map_err(|e| Error::Io(e.to_string()))
    }
}

/// `[A=x;B=y]`: a lift serialised with objects in declaration order.
pub fn lift_id(l: &Lift, r: &Schema, inst: &Instance) -> String {
    let parts: Vec<String> = r
        .object_ids()
        .map(|o| format!("{}={}", r.object_name(o), inst.row_id(l.row(o))))
        .collect();
    format!("[{}]", parts.join(";"))
}

/// The result set as a cone: the constant `R`-instance on the lifts, the
/// restriction `Δ_n δ`, and the component `ℓ ↦ ℓ(r)` at every object.
#[derive(Clone, Debug)]
pub struct ResultState {
    pub gamma: Instance,
    pub restricted: Instance,
    pub components: Vec<Vec<usize>>,
}

impl ResultState {
    /// Naturality of the components against both instances' columns.
    pub fn commutes(&self) -> bool {
        let r = self.gamma.schema();
        r.generator_ids().all(|g| {
            let gen = r.generator(g);
            let (s, t) = (gen.source.0, gen.target.0);
            self.gamma.column(g).iter().enumerate().all(|(l, &l2)| {
                self.restricted.column(g)[self.components[s][l]] == self.components[t][l2]
            })
        })
    }
}

pub fn result_instance(n: &SchemaMorphism, inst: &Instance) -> Result<ResultState> {
    let r = n.domain().clone();
    let lifts = enumerate_lifts_with(
        &SquareInput::unconstrained(n.clone()),
        inst,
        &SolveOptions::default(),
    )?;
    let ids: Vec<String> = lifts.iter().map(|l| lift_id(l, &r, inst)).collect();
    let gamma = Instance::new(
        r.clone(),
        vec![ids; r.object_count()],
        vec![(0..lifts.len()).collect(); r.generator_count()],
    )?;
    let restricted = delta(n, inst)?;
    let components = r
        .object_ids()
        .map(|o| lifts.iter().map(|l| l.row(o).index).collect())
        .collect();
    Ok(ResultState {
        gamma,
        restricted,
        components,
    })
}

fn require_equal(a: &SchemaMorphism, b: &SchemaMorphism, bound: usize, what: &str) -> Result<()> {
    if a.agrees_with(b, bound)? {
        Ok(())
    } else {
        Err(Error::typing(format!("{what} does not commute")))
    }
}

/// For `f: R1 -> R2` with `n2 ∘ f = n1`, the map `ℓ ↦ ℓ ∘ f` from lifts of
/// `n2` to lifts of `n1`.
pub fn gamma_strict(
    f: &SchemaMorphism,
    n1: &SchemaMorphism,
    n2: &SchemaMorphism,
    lifts2: &[Lift],
    bound: usize,
) -> Result<Vec<Lift>> {
    let composite = f.then(n2)?;
    require_equal(&composite, n1, bound, "strict morphism triangle")?;
    Ok(lifts2.iter().map(|l| l.precompose(f)).collect())
}

/// Orbits of the action of a strict automorphism `s` (with `n ∘ s = n`) on
/// a set of lifts closed under it. Each orbit lists indices into `lifts`
/// in increasing order; orbits are ordered by their least member.
pub fn orbit_quotient(
    s: &SchemaMorphism,
    n: &SchemaMorphism,
    lifts: &[Lift],
    bound: usize,
) -> Result<Vec<Vec<usize>>> {
    let image = gamma_strict(s, n, n, lifts, bound)?;
    let pos: HashMap<&Lift, usize> = lifts.iter().enumerate().map(|(i, l)| (l, i)).collect();
    let mut uf = UnionFind::new(lifts.len());
    let mut hit = vec![false; lifts.len()];
    for (i, l) in image.iter().enumerate() {
        let j = *pos
            .get(l)
            .ok_or_else(|| Error::Invalid("lift set is not closed under the automorphism".into()))?;
        if std::mem::replace(&mut hit[j], true) {
            return Err(Error::Invalid("automorphism does not act bijectively".into()));
        }
        uf.union(i, j);
    }
    let (roots, class_of) = uf.classes();
    let mut orbits = vec![Vec::new(); roots.len()];
    for (i, c) in class_of.into_iter().enumerate() {
        orbits[c].push(i);
    }
    Ok(orbits)
}

/// A natural transformation between parallel schema morphisms, given by
/// one component path per object of the common domain.
#[derive(Clone, Debug)]
pub struct NaturalTransformation {
    pub source: SchemaMorphism,
    pub target: SchemaMorphism,
    pub components: Vec<Path>,
}

impl NaturalTransformation {
    /// Checks component endpoints and every naturality square.
    pub fn new(
        source: SchemaMorphism,
        target: SchemaMorphism,
        components: Vec<Path>,
        bound: usize,
    ) -> Result<Self> {
        if **source.domain() != **target.domain() || **source.codomain() != **target.codomain() {
            return Err(Error::typing("transformation between non-parallel morphisms"));
        }
        let a = source.domain();
        let s = source.codomain();
        if components.len() != a.object_count() {
            return Err(Error::typing("one component per object required"));
        }
        for o in a.object_ids() {
            let c = &components[o.0];
            if c.source() != source.object(o) || c.target() != target.object(o) {
                return Err(Error::typing(format!(
                    "component at `{}` has the wrong endpoints",
                    a.object_name(o)
                )));
            }
        }
        for g in a.generator_ids() {
            let gen = a.generator(g);
            let l = source.generator(g).then(&components[gen.target.0])?;
            let r = components[gen.source.0].then(target.generator(g))?;
            match s.paths_equal(&l, &r, bound)? {
                PathEq::Equal => {}
                PathEq::Distinct => {
                    return Err(Error::typing(format!(
                        "naturality fails at `{}`",
                        a.qualified_generator(g)
                    )))
                }
                PathEq::Inconclusive => {
                    return Err(Error::unbounded(format!(
                        "naturality at `{}` undecided within length {bound}",
                        a.qualified_generator(g)
                    )))
                }
            }
        }
        Ok(NaturalTransformation {
            source,
            target,
            components,
        })
    }

    pub fn identity(f: &SchemaMorphism) -> Self {
        NaturalTransformation {
            source: f.clone(),
            target: f.clone(),
            components: f
                .domain()
                .object_ids()
                .map(|o| Path::identity(f.object(o)))
                .collect(),
        }
    }

    /// `self` then `next`, componentwise.
    pub fn vertical(&self, next: &NaturalTransformation, bound: usize) -> Result<Self> {
        require_equal(&self.target, &next.source, bound, "vertical composite")?;
        let components = self
            .components
            .iter()
            .zip(&next.components)
            .map(|(a, b)| a.then(b))
            .collect::<Result<_>>()?;
        Ok(NaturalTransformation {
            source: self.source.clone(),
            target: next.target.clone(),
            components,
        })
    }

    /// `α K : F ∘ K => G ∘ K` for `K: A' -> A`.
    pub fn whisker(&self, k: &SchemaMorphism) -> Result<Self> {
        Ok(NaturalTransformation {
            source: k.then(&self.source)?,
            target: k.then(&self.target)?,
            components: k
                .object_map()
                .iter()
                .map(|o| self.components[o.0].clone())
                .collect(),
        })
    }
}

/// An arrow of `∫δ`: a row, a path out of its table, and where it lands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementArrow {
    pub source: Row,
    pub path: Path,
    pub target: Row,
}

/// The unique lift of `α.target` reached from a lift of `α.source` by
/// arrows over the components of `α`, together with those arrows.
pub fn transport_lift(
    inst: &Instance,
    l: &Lift,
    alpha: &NaturalTransformation,
) -> Result<(Lift, Vec<ElementArrow>)> {
    if !l.is_lift_of(&alpha.source, inst) {
        return Err(Error::typing("not a lift of the transformation's source"));
    }
    let mut rows = Vec::with_capacity(alpha.components.len());
    let mut arrows = Vec::with_capacity(alpha.components.len());
    for (b, c) in alpha.components.iter().enumerate() {
        let from = l.row(ObjId(b));
        let to = inst.transport(from, c)?;
        rows.push(to);
        arrows.push(ElementArrow {
            source: from,
            path: c.clone(),
            target: to,
        });
    }
    let out = Lift::new(rows);
    if !out.is_lift_of(&alpha.target, inst) {
        return Err(Error::typing(
            "transported assignment is not a lift; the instance violates its schema",
        ));
    }
    Ok((out, arrows))
}

/// `(G, α): (A, F) -> (A', F')` with `G: A' -> A` and `α: F ∘ G => F'`.
#[derive(Clone, Debug)]
pub struct ProbeMorphism {
    pub g: SchemaMorphism,
    pub alpha: NaturalTransformation,
}

impl ProbeMorphism {
    pub fn new(g: SchemaMorphism, f: &SchemaMorphism, alpha: NaturalTransformation, bound: usize) -> Result<Self> {
        require_equal(&g.then(f)?, &alpha.source, bound, "probe morphism source")?;
        Ok(ProbeMorphism { g, alpha })
    }
}

/// Lifts of `F` to lifts of `F'`: restrict along `G`, then transport along `α`.
pub fn apply_probe_morphism(pm: &ProbeMorphism, l: &Lift, inst: &Instance) -> Result<Lift> {
    Ok(transport_lift(inst, &l.precompose(&pm.g), &pm.alpha)?.0)
}

/// The record schema `C_k`: a key object `K` with columns `c1..ck`.
pub fn column_table_schema(k: usize) -> Schema {
    let mut b = Schema::builder(format!("C{k}")).object("K");
    for i in 1..=k {
        b = b.object(format!("c{i}"));
    }
    for i in 1..=k {
        b = b.arrow(format!("p{i}"), "K", format!("c{i}"));
    }
    b.build().expect("record schema is valid")
}

/// `C(h): C_j -> C_k` for `h: {1..j} -> {1..k}`, given 1-based.
pub fn column_map(cj: &Arc<Schema>, ck: &Arc<Schema>, h: &[usize]) -> Result<SchemaMorphism> {
    let j = cj.object_count() - 1;
    let k = ck.object_count() - 1;
    if h.len() != j || h.iter().any(|&x| x == 0 || x > k) {
        return Err(Error::Invalid(format!("not a map from {{1..{j}}} to {{1..{k}}}")));
    }
    let mut objects = vec![ObjId(0)];
    objects.extend(h.iter().map(|&x| ObjId(x)));
    let generators = h.iter().map(|&x| ck.generator_path(GenId(x - 1))).collect();
    SchemaMorphism::new(cj.clone(), ck.clone(), objects, generators)
}

/// `(F, G, α, γ): Q -> Q'` with `F: R' -> R`, `G: W' -> W`,
/// `α: n ∘ F => n'` and `γ: p ∘ G => p'` given by `S`-paths.
#[derive(Clone, Debug)]
pub struct QueryMorphism {
    pub f: SchemaMorphism,
    pub g: SchemaMorphism,
    pub alpha: NaturalTransformation,
    pub gamma: Vec<Path>,
}

impl QueryMorphism {
    pub fn identity(q: &Query) -> QueryMorphism {
        QueryMorphism {
            f: SchemaMorphism::identity(q.r().clone()),
            g: SchemaMorphism::identity(q.m.domain().clone()),
            alpha: NaturalTransformation::identity(&q.n),
            gamma: q
                .m
                .domain()
                .object_ids()
                .map(|w| Path::identity(q.n.object(q.m.object(w))))
                .collect(),
        }
    }

    /// `self: Q -> Q'` followed by `next: Q' -> Q''`.
    pub fn then(&self, next: &QueryMorphism, bound: usize) -> Result<QueryMorphism> {
        let f = next.f.then(&self.f)?;
        let g = next.g.then(&self.g)?;
        let whiskered = self.alpha.whisker(&next.f)?;
        let alpha = whiskered.vertical(&next.alpha, bound)?;
        let gamma = next
            .g
            .object_map()
            .iter()
            .zip(&next.gamma)
            .map(|(w, c)| self.gamma[w.0].then(c))
            .collect::<Result<_>>()?;
        Ok(QueryMorphism { f, g, alpha, gamma })
    }
}

/// Given `F`, `G`, `α` and the target's `m'`, derives `p'` and `γ` so that
/// `(F, G, α, γ): Q -> Q'` is a query morphism.
pub fn complete_query_morphism(
    f: SchemaMorphism,
    g: SchemaMorphism,
    alpha: NaturalTransformation,
    q: &Query,
    m_prime: SchemaMorphism,
    inst: &Instance,
    bound: usize,
) -> Result<(Query, QueryMorphism)> {
    require_equal(&g.then(&q.m)?, &m_prime.then(&f)?, bound, "where-clause square")?;
    require_equal(&f.then(&q.n)?, &alpha.source, bound, "result transformation source")?;
    let w2 = m_prime.domain();
    let mut binding = Vec::with_capacity(w2.object_count());
    let mut gamma = Vec::with_capacity(w2.object_count());
    for w in w2.object_ids() {
        let c = &alpha.components[m_prime.object(w).0];
        binding.push(inst.transport(q.binding[g.object(w).0], c)?);
        gamma.push(c.clone());
    }
    let q2 = Query::new(
        format!("{}'", q.name),
        m_prime,
        alpha.target.clone(),
        binding,
        None,
    )?;
    Ok((q2, QueryMorphism { f, g, alpha, gamma }))
}

/// The map `Γ(Q) -> Γ(Q')`: restrict along `F`, transport along `α`.
pub fn induced_result_map(
    qm: &QueryMorphism,
    lifts: &[Lift],
    target: &Query,
    inst: &Instance,
) -> Result<Vec<Lift>> {
    lifts
        .iter()
        .map(|l| {
            let (l2, _) = transport_lift(inst, &l.precompose(&qm.f), &qm.alpha)?;
            if l2.precompose(&target.m).rows() != target.binding.as_slice() {
                return Err(Error::typing("image lift does not honour the target binding"));
            }
            Ok(l2)
        })
        .collect()
}
