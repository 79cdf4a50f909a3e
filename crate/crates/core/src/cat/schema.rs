//! Finitely presented categories: objects, generating arrows and path equations.

use std::collections::HashMap;
use std::fmt;

use super::words::{PathEq, WordProblem};
use crate::error::{Error, Result};

/// Index of an object in its schema's declaration order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

/// Index of a generator in its schema's declaration order.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId(pub usize);

/// A generating arrow. Names are unique among generators with the same source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub source: ObjId,
    pub target: ObjId,
}

/// A composable sequence of generators, read left to right.
///
/// The empty path at an object is its identity. Paths are only built through
/// [`Schema`] methods, so every `Path` is well typed in the schema that made it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    source: ObjId,
    target: ObjId,
    steps: Vec<GenId>,
}

impl Path {
    pub fn identity(object: ObjId) -> Path {
        Path {
            source: object,
            target: object,
            steps: Vec::new(),
        }
    }

    pub(crate) fn from_raw(source: ObjId, target: ObjId, steps: Vec<GenId>) -> Path {
        Path {
            source,
            target,
            steps,
        }
    }

    pub fn source(&self) -> ObjId {
        self.source
    }

    pub fn target(&self) -> ObjId {
        self.target
    }

    pub fn steps(&self) -> &[GenId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Path) -> Result<Path> {
        if self.target != next.source {
            return Err(Error::typing(format!(
                "cannot compose path ending at object #{} with path starting at object #{}",
                self.target.0, next.source.0
            )));
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&next.steps);
        Ok(Path {
            source: self.source,
            target: next.target,
            steps,
        })
    }
}

/// A path equation; both sides share source and target.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Path,
    pub rhs: Path,
}

/// A finitely presented category.
#[derive(Clone)]
pub struct Schema {
    name: String,
    objects: Vec<String>,
    generators: Vec<Generator>,
    equations: Vec<Equation>,
    object_index: HashMap<String, ObjId>,
    outgoing: Vec<Vec<GenId>>,
    words: WordProblem,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.generators == other.generators
            && self.equations == other.equations
    }
}

impl Eq for Schema {}

impl fmt::Debug for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Schema")
            .field("name", &self.name)
            .field("objects", &self.objects)
            .field("generators", &self.generators)
            .field("equations", &self.equations.len())
            .finish()
    }
}

impl Schema {
    pub fn builder(name: impl Into<String>) -> SchemaBuilder {
        SchemaBuilder {
            name: name.into(),
            objects: Vec::new(),
            arrows: Vec::new(),
            equations: Vec::new(),
        }
    }

    /// The schema with no objects.
    pub fn empty() -> Schema {
        Schema::from_parts("Empty", Vec::new(), Vec::new(), Vec::new())
            .expect("empty schema is valid")
    }

    /// Index-level constructor. Validates names, endpoints and equation typing.
    pub fn from_parts(
        name: impl Into<String>,
        objects: Vec<String>,
        generators: Vec<Generator>,
        equations: Vec<Equation>,
    ) -> Result<Schema> {
        let name = name.into();
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), ObjId(i)).is_some() {
                return Err(Error::typing(format!("duplicate object `{o}` in `{name}`")));
            }
        }
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (i, g) in generators.iter().enumerate() {
            if g.source.0 >= objects.len() || g.target.0 >= objects.len() {
                return Err(Error::typing(format!(
                    "generator `{}` has an endpoint outside `{name}`",
                    g.name
                )));
            }
            let out: &mut Vec<GenId> = &mut outgoing[g.source.0];
            if out.iter().any(|h| generators[h.0].name == g.name) {
                return Err(Error::typing(format!(
                    "duplicate generator `{}` out of `{}`",
                    g.name, objects[g.source.0]
                )));
            }
            out.push(GenId(i));
        }
        for eq in &equations {
            for p in [&eq.lhs, &eq.rhs] {
                if check_raw_path(&objects, &generators, p)? != p.target {
                    return Err(Error::typing("equation path target mismatch"));
                }
            }
            if eq.lhs.source != eq.rhs.source || eq.lhs.target != eq.rhs.target {
                return Err(Error::typing(format!(
                    "equation sides disagree on endpoints in `{name}`"
                )));
            }
        }
        let gen_target = generators.iter().map(|g| g.target).collect();
        let relations = equations
            .iter()
            .map(|e| (e.lhs.source, e.lhs.steps.clone(), e.rhs.steps.clone()))
            .collect::<Vec<_>>();
        let words = WordProblem::new(gen_target, relations);
        Ok(Schema {
            name,
            objects,
            generators,
            equations,
            object_index,
            outgoing,
            words,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(&self, name: impl Into<String>) -> Schema {
        let mut s = self.clone();
        s.name = name.into();
        s
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_ids(&self) -> impl Iterator<Item = ObjId> {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o.0]
    }

    pub fn object(&self, name: &str) -> Result<ObjId> {
        self.object_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::unknown("object", name))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_ids(&self) -> impl Iterator<Item = GenId> {
        (0..self.generators.len()).map(GenId)
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g.0]
    }

    /// Generators leaving `o`, in declaration order.
    pub fn outgoing(&self, o: ObjId) -> &[GenId] {
        &self.outgoing[o.0]
    }

    pub fn equations(&self) -> &[Equation] {
        &self.equations
    }

    /// The generator named `name` leaving `source`.
    pub fn generator_from(&self, source: ObjId, name: &str) -> Result<GenId> {
        self.outgoing[source.0]
            .iter()
            .copied()
            .find(|g| self.generators[g.0].name == name)
            .ok_or_else(|| {
                Error::unknown("generator", format!("{}.{name}", self.objects[source.0]))
            })
    }

    /// Resolves a generator by bare name (must be unique) or as `Object.name`.
    pub fn find_generator(&self, name: &str) -> Result<GenId> {
        let hits: Vec<GenId> = self
            .generator_ids()
            .filter(|g| self.generators[g.0].name == name)
            .collect();
        match hits.len() {
            1 => return Ok(hits[0]),
            0 => {}
            _ => {
                return Err(Error::typing(format!(
                    "generator name `{name}` is ambiguous; qualify it as Object.{name}"
                )))
            }
        }
        if let Some((obj, gen)) = name.split_once('.') {
            if let Ok(o) = self.object(obj) {
                return self.generator_from(o, gen);
            }
        }
        Err(Error::unknown("generator", name))
    }

    /// Qualified display name `Source.generator`.
    pub fn qualified_generator(&self, g: GenId) -> String {
        let gen = &self.generators[g.0];
        format!("{}.{}", self.objects[gen.source.0], gen.name)
    }

    pub fn generator_path(&self, g: GenId) -> Path {
        let gen = &self.generators[g.0];
        Path {
            source: gen.source,
            target: gen.target,
            steps: vec![g],
        }
    }

    /// Builds a path from `source` following generator names.
    pub fn path(&self, source: &str, steps: &[&str]) -> Result<Path> {
        let src = self.object(source)?;
        self.path_from(src, steps)
    }

    pub fn path_from<S: AsRef<str>>(&self, source: ObjId, steps: &[S]) -> Result<Path> {
        let mut at = source;
        let mut ids = Vec::with_capacity(steps.len());
        for s in steps {
            let g = self.generator_from(at, s.as_ref())?;
            ids.push(g);
            at = self.generators[g.0].target;
        }
        Ok(Path {
            source,
            target: at,
            steps: ids,
        })
    }

    /// Typechecks a sequence of generator IDs starting at `source`.
    pub fn path_of(&self, source: ObjId, steps: &[GenId]) -> Result<Path> {
        let p = Path {
            source,
            target: source,
            steps: steps.to_vec(),
        };
        let target = check_raw_path(&self.objects, &self.generators, &p)?;
        Ok(Path { target, ..p })
    }

    /// `Source.g1.g2`, or just `Source` for an identity.
    pub fn render_path(&self, p: &Path) -> String {
        let mut s = self.objects[p.source.0].clone();
        for g in &p.steps {
            s.push('.');
            s.push_str(&self.generators[g.0].name);
        }
        s
    }

    /// Generator names only, as in `[g1 g2]`.
    pub fn step_names(&self, p: &Path) -> Vec<String> {
        p.steps
            .iter()
            .map(|g| self.generators[g.0].name.clone())
            .collect()
    }

    /// Decides equality of two parallel paths, exploring rewrites up to length `bound`.
    ///
    /// When the equations, oriented by shortlex order, form a confluent rewriting
    /// system the answer is exact and the bound is not consulted.
    pub fn paths_equal(&self, p: &Path, q: &Path, bound: usize) -> Result<PathEq> {
        if p.source != q.source || p.target != q.target {
            return Err(Error::typing(format!(
                "paths {} and {} are not parallel",
                self.render_path(p),
                self.render_path(q)
            )));
        }
        Ok(self.words.equal(p.source, &p.steps, &q.steps, bound))
    }

    /// True when path equality in this schema is decided exactly by normal forms.
    pub fn has_normal_forms(&self) -> bool {
        self.words.is_confluent()
    }

    pub(crate) fn words(&self) -> &WordProblem {
        &self.words
    }

    /// The shortest path from `from` to `to`, when exactly one exists.
    pub(crate) fn unique_shortest_path(&self, from: ObjId, to: ObjId) -> Option<Path> {
        use std::collections::VecDeque;
        if from == to {
            return Some(Path::identity(from));
        }
        let n = self.objects.len();
        let mut dist = vec![usize::MAX; n];
        let mut count = vec![0usize; n];
        let mut parent: Vec<Option<GenId>> = vec![None; n];
        dist[from.0] = 0;
        count[from.0] = 1;
        let mut queue = VecDeque::from([from]);
        while let Some(o) = queue.pop_front() {
            for &g in &self.outgoing[o.0] {
                let t = self.generators[g.0].target;
                if dist[t.0] == usize::MAX {
                    dist[t.0] = dist[o.0] + 1;
                    count[t.0] = count[o.0];
                    parent[t.0] = Some(g);
                    queue.push_back(t);
                } else if dist[t.0] == dist[o.0] + 1 {
                    count[t.0] = count[t.0].saturating_add(count[o.0]);
                }
            }
        }
        if dist[to.0] == usize::MAX || count[to.0] != 1 {
            return None;
        }
        let mut steps = Vec::new();
        let mut at = to;
        while at != from {
            let g = parent[at.0]?;
            steps.push(g);
            at = self.generators[g.0].source;
        }
        steps.reverse();
        Some(Path {
            source: from,
            target: to,
            steps,
        })
    }
}

fn check_raw_path(objects: &[String], generators: &[Generator], p: &Path) -> Result<ObjId> {
    if p.source.0 >= objects.len() {
        return Err(Error::typing("path source out of range"));
    }
    let mut at = p.source;
    for g in &p.steps {
        let gen = generators
            .get(g.0)
            .ok_or_else(|| Error::typing("path step out of range"))?;
        if gen.source != at {
            return Err(Error::typing(format!(
                "generator `{}` does not start at `{}`",
                gen.name, objects[at.0]
            )));
        }
        at = gen.target;
    }
    Ok(at)
}

/// Name-based schema construction.
#[derive(Clone, Debug)]
pub struct SchemaBuilder {
    name: String,
    objects: Vec<String>,
    arrows: Vec<(String, String, String)>,
    equations: Vec<(String, Vec<String>, Vec<String>)>,
}

impl SchemaBuilder {
    pub fn object(mut self, name: impl Into<String>) -> Self {
        self.objects.push(name.into());
        self
    }

    pub fn objects<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.objects.extend(names.into_iter().map(Into::into));
        self
    }

    pub fn arrow(
        mut self,
        name: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.arrows.push((name.into(), source.into(), target.into()));
        self
    }

    /// Adds `lhs = rhs`, both read as generator names from `source`.
    pub fn equation(mut self, source: impl Into<String>, lhs: &[&str], rhs: &[&str]) -> Self {
        self.equations.push((
            source.into(),
            lhs.iter().map(|s| s.to_string()).collect(),
            rhs.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<Schema> {
        let mut index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if index.insert(o.clone(), ObjId(i)).is_some() {
                return Err(Error::typing(format!(
                    "duplicate object `{o}` in `{}`",
                    self.name
                )));
            }
        }
        let lookup = |n: &str| {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::unknown("object", n))
        };
        let mut generators = Vec::new();
        for (name, s, t) in &self.arrows {
            generators.push(Generator {
                name: name.clone(),
                source: lookup(s)?,
                target: lookup(t)?,
            });
        }
        // Typecheck arrows before resolving equations so errors point at arrows first.
        let skeleton = Schema::from_parts(
            self.name.clone(),
            self.objects.clone(),
            generators.clone(),
            Vec::new(),
        )?;
        let mut equations = Vec::new();
        for (src, l, r) in &self.equations {
            let o = skeleton.object(src)?;
            let lhs = skeleton.path_from(o, l)?;
            let rhs = skeleton.path_from(o, r)?;
            if lhs.target != rhs.target {
                return Err(Error::typing(format!(
                    "equation at `{src}`: [{}] and [{}] end at different objects",
                    l.join(" "),
                    r.join(" ")
                )));
            }
            equations.push(Equation { lhs, rhs });
        }
        Schema::from_parts(self.name, self.objects, generators, equations)
    }
}
