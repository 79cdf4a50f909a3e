//! Categories given by explicit composition tables.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::classes::all_hom_classes;
use super::morphism::SchemaMorphism;
use super::schema::{GenId, ObjId, Path, Schema};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category. Composition is written in diagrammatic order:
/// `compose(f, g)` is `f` followed by `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    composition: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
}

impl ConcreteCategory {
    pub fn builder() -> ConcreteBuilder {
        ConcreteBuilder::default()
    }

    /// Validating constructor: endpoints, totality, unit and associativity laws.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let c = Self::from_parts_trusted(objects, morphisms, identities, composition);
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_parts_trusted(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composition: HashMap<(usize, usize), usize>,
    ) -> Self {
        let mut out = vec![Vec::new(); objects.len()];
        for (i, m) in morphisms.iter().enumerate() {
            out[m.source].push(i);
        }
        ConcreteCategory {
            objects,
            morphisms,
            identities,
            composition,
            out,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::typing(m));
        if self.identities.len() != self.objects.len() {
            return bad("every object needs an identity".into());
        }
        for m in &self.morphisms {
            if m.source >= self.objects.len() || m.target >= self.objects.len() {
                return bad(format!("morphism `{}` has an endpoint out of range", m.name));
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.source != o || m.target != o {
                return bad(format!("identity of `{}` is not an endomorphism", self.objects[o]));
            }
        }
        for (f, mf) in self.morphisms.iter().enumerate() {
            for &g in &self.out[mf.target] {
                let Some(&h) = self.composition.get(&(f, g)) else {
                    return bad(format!(
                        "composite of `{}` and `{}` is missing",
                        mf.name, self.morphisms[g].name
                    ));
                };
                let mh = &self.morphisms[h];
                if mh.source != mf.source || mh.target != self.morphisms[g].target {
                    return bad(format!("composite of `{}` and `{}` is ill typed", mf.name, self.morphisms[g].name));
                }
            }
            if self.composition[&(self.identities[mf.source], f)] != f
                || self.composition[&(f, self.identities[mf.target])] != f
            {
                return bad(format!("unit law fails at `{}`", mf.name));
            }
        }
        for f in 0..self.morphisms.len() {
            for &g in &self.out[self.morphisms[f].target] {
                for &h in &self.out[self.morphisms[g].target] {
                    let a = self.composition[&(self.composition[&(f, g)], h)];
                    let b = self.composition[&(f, self.composition[&(g, h)])];
                    if a != b {
                        return bad(format!(
                            "associativity fails at `{}`, `{}`, `{}`",
                            self.morphisms[f].name, self.morphisms[g].name, self.morphisms[h].name
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, m: usize) -> &Morphism {
        &self.morphisms[m]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identities[self.morphisms[m].source] == m
    }

    /// `f` followed by `g`, if composable.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.composition.get(&(f, g)).copied()
    }

    /// Morphisms with source `o`, in index order.
    pub fn out_of(&self, o: usize) -> &[usize] {
        &self.out[o]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        self.out[a]
            .iter()
            .copied()
            .filter(|&m| self.morphisms[m].target == b)
            .collect()
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::unknown("object", name))
    }

    pub fn morphism_index(&self, name: &str) -> Result<usize> {
        self.morphisms
            .iter()
            .position(|m| m.name == name)
            .ok_or_else(|| Error::unknown("morphism", name))
    }
}

/// Name-based construction. Identities `id_<object>` and unit composites are
/// added automatically; every other composite must be declared.
#[derive(Clone, Debug, Default)]
pub struct ConcreteBuilder {
    objects: Vec<String>,
    morphisms: Vec<(String, String, String)>,
    composites: Vec<(String, String, String)>,
}

impl ConcreteBuilder {
    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn morphism(mut self, name: &str, source: &str, target: &str) -> Self {
        self.morphisms.push((name.into(), source.into(), target.into()));
        self
    }

    /// Declares `f` followed by `g` to be `h`.
    pub fn composite(mut self, f: &str, g: &str, h: &str) -> Self {
        self.composites.push((f.into(), g.into(), h.into()));
        self
    }

    pub fn build(self) -> Result<ConcreteCategory> {
        let obj = |n: &str| {
            self.objects
                .iter()
                .position(|o| o == n)
                .ok_or_else(|| Error::unknown("object", n))
        };
        let mut morphisms: Vec<Morphism> = self
            .objects
            .iter()
            .enumerate()
            .map(|(i, o)| Morphism {
                name: format!("id_{o}"),
                source: i,
                target: i,
            })
            .collect();
        let identities: Vec<usize> = (0..self.objects.len()).collect();
        for (n, s, t) in &self.morphisms {
            morphisms.push(Morphism {
                name: n.clone(),
                source: obj(s)?,
                target: obj(t)?,
            });
        }
        let mor = |n: &str| {
            morphisms
                .iter()
                .position(|m| m.name == n)
                .ok_or_else(|| Error::unknown("morphism", n))
        };
        let mut composition = HashMap::new();
        for (i, m) in morphisms.iter().enumerate() {
            composition.insert((identities[m.source], i), i);
            composition.insert((i, identities[m.target]), i);
        }
        for (f, g, h) in &self.composites {
            composition.insert((mor(f)?, mor(g)?), mor(h)?);
        }
        ConcreteCategory::from_parts(self.objects, morphisms, identities, composition)
    }
}

/// A functor between concrete categories.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteFunctor {
    domain: Arc<ConcreteCategory>,
    codomain: Arc<ConcreteCategory>,
    objects: Vec<usize>,
    morphisms: Vec<usize>,
}

impl ConcreteFunctor {
    /// Checks endpoints, identities and composites.
    pub fn new(
        domain: Arc<ConcreteCategory>,
        codomain: Arc<ConcreteCategory>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Result<Self> {
        let f = ConcreteFunctor {
            domain,
            codomain,
            objects,
            morphisms,
        };
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn new_trusted(
        domain: Arc<ConcreteCategory>,
        codomain: Arc<ConcreteCategory>,
        objects: Vec<usize>,
        morphisms: Vec<usize>,
    ) -> Self {
        ConcreteFunctor {
            domain,
            codomain,
            objects,
            morphisms,
        }
    }

    fn validate(&self) -> Result<()> {
        let (d, c) = (&self.domain, &self.codomain);
        if self.objects.len() != d.objects.len() || self.morphisms.len() != d.morphisms.len() {
            return Err(Error::typing("functor must map every object and morphism"));
        }
        for (i, m) in d.morphisms.iter().enumerate() {
            let img = c
                .morphisms
                .get(self.morphisms[i])
                .ok_or_else(|| Error::typing("morphism image out of range"))?;
            if img.source != self.objects[m.source] || img.target != self.objects[m.target] {
                return Err(Error::typing(format!("`{}` is sent to an ill-typed morphism", m.name)));
            }
        }
        for o in 0..d.objects.len() {
            if self.morphisms[d.identities[o]] != c.identities[self.objects[o]] {
                return Err(Error::typing(format!("identity of `{}` not preserved", d.objects[o])));
            }
        }
        for (&(f, g), &h) in &d.composition {
            if c.composition.get(&(self.morphisms[f], self.morphisms[g])) != Some(&self.morphisms[h]) {
                return Err(Error::typing(format!(
                    "composite of `{}` and `{}` not preserved",
                    d.morphisms[f].name, d.morphisms[g].name
                )));
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> &Arc<ConcreteCategory> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<ConcreteCategory> {
        &self.codomain
    }

    pub fn object(&self, o: usize) -> usize {
        self.objects[o]
    }

    pub fn morphism(&self, m: usize) -> usize {
        self.morphisms[m]
    }

    /// Whether the functor is injective on every hom-set.
    pub fn is_faithful(&self) -> bool {
        let mut seen = HashSet::new();
        (0..self.morphisms.len()).all(|m| {
            let mm = &self.domain.morphisms[m];
            seen.insert((mm.source, mm.target, self.morphisms[m]))
        })
    }
}

/// A presentation realised as a finite category through which its free
/// category factors. Either the presented category itself, or a quotient of
/// its free category, e.g. by the action of an instance.
#[derive(Clone, Debug)]
pub struct MaterializedSchema {
    pub schema: Arc<Schema>,
    pub category: Arc<ConcreteCategory>,
    /// The morphism each generator is sent to.
    pub generators: Vec<usize>,
    /// A representative path for each morphism.
    pub paths: Vec<Path>,
}

impl MaterializedSchema {
    /// Schema morphism `R -> S` whose generators go to the representative
    /// paths of the chosen morphisms.
    pub fn to_schema_morphism(&self, domain: Arc<Schema>, f: &PresentedFunctor) -> Result<SchemaMorphism> {
        SchemaMorphism::new(
            domain,
            self.schema.clone(),
            f.objects.iter().map(|&o| ObjId(o)).collect(),
            f.generators.iter().map(|&m| self.paths[m].clone()).collect(),
        )
    }

    /// The morphism a path of the schema evaluates to.
    pub fn eval(&self, p: &Path) -> usize {
        let mut m = self.category.identity(p.source().0);
        for g in p.steps() {
            m = self
                .category
                .compose(m, self.generators[g.0])
                .expect("generator images compose along a path");
        }
        m
    }
}

/// The category presented by `schema`, with every hom-set enumerated.
///
/// Fails with `Unbounded` if some hom-set does not saturate within `bound`.
pub fn materialize(schema: &Arc<Schema>, bound: usize) -> Result<MaterializedSchema> {
    let mut classes = all_hom_classes(schema, bound)?;
    let mut offset = Vec::with_capacity(classes.len());
    let mut morphisms = Vec::new();
    let mut paths = Vec::new();
    for hc in &classes {
        offset.push(morphisms.len());
        for p in hc.reps() {
            let name = if p.is_identity() {
                format!("id_{}", schema.object_name(p.source()))
            } else {
                schema.render_path(p)
            };
            morphisms.push(Morphism {
                name,
                source: p.source().0,
                target: p.target().0,
            });
            paths.push(p.clone());
        }
    }
    let identities = offset.clone();
    let mut composition = HashMap::new();
    for f in 0..morphisms.len() {
        let (s, t) = (morphisms[f].source, morphisms[f].target);
        for j in 0..classes[t].len() {
            let g = offset[t] + j;
            let p = paths[f].then(&paths[g])?;
            let k = classes[s].classify(schema, &p)?;
            composition.insert((f, g), offset[s] + k);
        }
    }
    let generators = schema
        .generator_ids()
        .map(|g| {
            let s = schema.generator(g).source.0;
            classes[s]
                .classify(schema, &schema.generator_path(g))
                .map(|k| offset[s] + k)
        })
        .collect::<Result<Vec<_>>>()?;
    let objects = schema.objects().to_vec();
    Ok(MaterializedSchema {
        schema: schema.clone(),
        category: Arc::new(ConcreteCategory::from_parts_trusted(
            objects,
            morphisms,
            identities,
            composition,
        )),
        generators,
        paths,
    })
}

/// A functor from a presentation into a concrete category.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PresentedFunctor {
    pub objects: Vec<usize>,
    pub generators: Vec<usize>,
}

impl PresentedFunctor {
    pub fn eval(&self, cat: &ConcreteCategory, p: &Path) -> usize {
        let mut m = cat.identity(self.objects[p.source().0]);
        for g in p.steps() {
            m = cat
                .compose(m, self.generators[g.0])
                .expect("functor images compose");
        }
        m
    }
}

/// Every functor from `schema` to `cat`, in lexicographic order of
/// (object images, generator images).
pub fn enumerate_functors(schema: &Schema, cat: &ConcreteCategory) -> Vec<PresentedFunctor> {
    let mut out = Vec::new();
    let mut objs = vec![0; schema.object_count()];
    enum_objects(schema, cat, 0, &mut objs, &mut out);
    out
}

fn enum_objects(
    schema: &Schema,
    cat: &ConcreteCategory,
    i: usize,
    objs: &mut Vec<usize>,
    out: &mut Vec<PresentedFunctor>,
) {
    if i == objs.len() {
        let mut gens = vec![0; schema.generator_count()];
        enum_generators(schema, cat, 0, objs, &mut gens, out);
        return;
    }
    for o in 0..cat.objects().len() {
        objs[i] = o;
        enum_objects(schema, cat, i + 1, objs, out);
    }
}

fn enum_generators(
    schema: &Schema,
    cat: &ConcreteCategory,
    i: usize,
    objs: &[usize],
    gens: &mut Vec<usize>,
    out: &mut Vec<PresentedFunctor>,
) {
    if i == gens.len() {
        let f = PresentedFunctor {
            objects: objs.to_vec(),
            generators: gens.clone(),
        };
        if schema
            .equations()
            .iter()
            .all(|e| f.eval(cat, &e.lhs) == f.eval(cat, &e.rhs))
        {
            out.push(f);
        }
        return;
    }
    let g = schema.generator(GenId(i));
    for m in cat.hom(objs[g.source.0], objs[g.target.0]) {
        gens[i] = m;
        enum_generators(schema, cat, i + 1, objs, gens, out);
    }
}
