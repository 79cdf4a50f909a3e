//! Morphisms of presentations and functor checking.

use std::sync::Arc;

use serde::Serialize;

use super::schema::{GenId, ObjId, Path, Schema};
use super::words::PathEq;
use crate::error::{Error, Result};

/// A map of presentations: objects to objects, generators to paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaMorphism {
    domain: Arc<Schema>,
    codomain: Arc<Schema>,
    objects: Vec<ObjId>,
    generators: Vec<Path>,
}

impl SchemaMorphism {
    /// Builds a morphism, rejecting generator images with the wrong endpoints.
    /// Equations are not checked here; see [`check_functor`].
    pub fn new(
        domain: Arc<Schema>,
        codomain: Arc<Schema>,
        objects: Vec<ObjId>,
        generators: Vec<Path>,
    ) -> Result<Self> {
        let m = Self::new_unchecked(domain, codomain, objects, generators)?;
        if let Some(v) = m.typing_violations().into_iter().next() {
            return Err(Error::typing(v));
        }
        Ok(m)
    }

    /// Builds a morphism without endpoint checks; only arities are verified.
    pub fn new_unchecked(
        domain: Arc<Schema>,
        codomain: Arc<Schema>,
        objects: Vec<ObjId>,
        generators: Vec<Path>,
    ) -> Result<Self> {
        if objects.len() != domain.object_count() || generators.len() != domain.generator_count() {
            return Err(Error::typing(format!(
                "morphism from `{}` must assign every object and generator",
                domain.name()
            )));
        }
        if objects.iter().any(|o| o.0 >= codomain.object_count()) {
            return Err(Error::typing("object image outside codomain"));
        }
        Ok(SchemaMorphism {
            domain,
            codomain,
            objects,
            generators,
        })
    }

    /// Name-based construction. Generator keys may be bare or `Object.name`;
    /// image paths are read in the codomain from the image of the source.
    pub fn from_names(
        domain: Arc<Schema>,
        codomain: Arc<Schema>,
        objects: &[(&str, &str)],
        arrows: &[(&str, &[&str])],
    ) -> Result<Self> {
        let mut obj = vec![None; domain.object_count()];
        for (a, b) in objects {
            obj[domain.object(a)?.0] = Some(codomain.object(b)?);
        }
        let obj: Vec<ObjId> = obj
            .into_iter()
            .enumerate()
            .map(|(i, o)| {
                o.ok_or_else(|| {
                    Error::typing(format!("object `{}` has no image", domain.objects()[i]))
                })
            })
            .collect::<Result<_>>()?;
        let mut gens = vec![None; domain.generator_count()];
        for (g, path) in arrows {
            let gid = domain.find_generator(g)?;
            let src = obj[domain.generator(gid).source.0];
            gens[gid.0] = Some(codomain.path_from(src, path)?);
        }
        let gens: Vec<Path> = gens
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                p.ok_or_else(|| {
                    Error::typing(format!(
                        "generator `{}` has no image",
                        domain.qualified_generator(GenId(i))
                    ))
                })
            })
            .collect::<Result<_>>()?;
        Self::new(domain, codomain, obj, gens)
    }

    pub fn identity(schema: Arc<Schema>) -> Self {
        let objects = schema.object_ids().collect();
        let generators = schema
            .generator_ids()
            .map(|g| schema.generator_path(g))
            .collect();
        SchemaMorphism {
            domain: schema.clone(),
            codomain: schema,
            objects,
            generators,
        }
    }

    /// The unique morphism out of the empty schema.
    pub fn initial(codomain: Arc<Schema>) -> Self {
        SchemaMorphism {
            domain: Arc::new(Schema::empty()),
            codomain,
            objects: Vec::new(),
            generators: Vec::new(),
        }
    }

    pub fn domain(&self) -> &Arc<Schema> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<Schema> {
        &self.codomain
    }

    pub fn object(&self, o: ObjId) -> ObjId {
        self.objects[o.0]
    }

    pub fn generator(&self, g: GenId) -> &Path {
        &self.generators[g.0]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.objects
    }

    pub fn generator_map(&self) -> &[Path] {
        &self.generators
    }

    /// Image of a domain path: the concatenation of its generators' images.
    pub fn apply_path(&self, p: &Path) -> Path {
        let mut out = Path::identity(self.objects[p.source().0]);
        for &g in p.steps() {
            out = out
                .then(&self.generators[g.0])
                .expect("morphism is well typed");
        }
        out
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &SchemaMorphism) -> Result<SchemaMorphism> {
        if *self.codomain != *next.domain {
            return Err(Error::typing(format!(
                "cannot compose: codomain `{}` differs from domain `{}`",
                self.codomain.name(),
                next.domain.name()
            )));
        }
        Ok(SchemaMorphism {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            objects: self.objects.iter().map(|&o| next.object(o)).collect(),
            generators: self.generators.iter().map(|p| next.apply_path(p)).collect(),
        })
    }

    /// Generators whose image path has the wrong endpoints.
    pub fn typing_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for g in self.domain.generator_ids() {
            let gen = self.domain.generator(g);
            let img = &self.generators[g.0];
            let (s, t) = (self.objects[gen.source.0], self.objects[gen.target.0]);
            if img.source() != s || img.target() != t {
                out.push(format!(
                    "{} : {} -> {} is sent to {} : {} -> {}, expected {} -> {}",
                    self.domain.qualified_generator(g),
                    self.domain.object_name(gen.source),
                    self.domain.object_name(gen.target),
                    self.codomain.render_path(img),
                    self.codomain.object_name(img.source()),
                    self.codomain.object_name(img.target()),
                    self.codomain.object_name(s),
                    self.codomain.object_name(t),
                ));
            }
        }
        out
    }

    /// True when both morphisms agree on objects and send each generator to
    /// equal paths. Undecidable comparisons are reported as `Unbounded`.
    pub fn agrees_with(&self, other: &SchemaMorphism, bound: usize) -> Result<bool> {
        if *self.domain != *other.domain || *self.codomain != *other.codomain {
            return Ok(false);
        }
        if self.objects != other.objects {
            return Ok(false);
        }
        for (p, q) in self.generators.iter().zip(&other.generators) {
            match self.codomain.paths_equal(p, q, bound)? {
                PathEq::Equal => {}
                PathEq::Distinct => return Ok(false),
                PathEq::Inconclusive => {
                    return Err(Error::unbounded(format!(
                        "cannot compare {} and {} within length {bound}",
                        self.codomain.render_path(p),
                        self.codomain.render_path(q)
                    )))
                }
            }
        }
        Ok(true)
    }
}

/// Verdict on one domain equation under a morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationCheck {
    pub equation: usize,
    pub lhs: String,
    pub rhs: String,
    pub verdict: PathEq,
}

/// Result of [`check_functor`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub typing_violations: Vec<String>,
    pub equations: Vec<EquationCheck>,
}

impl FunctorReport {
    pub fn is_functor(&self) -> bool {
        self.typing_violations.is_empty()
            && self.equations.iter().all(|e| e.verdict == PathEq::Equal)
    }

    pub fn failures(&self) -> impl Iterator<Item = &EquationCheck> {
        self.equations.iter().filter(|e| e.verdict != PathEq::Equal)
    }
}

/// Checks endpoints of generator images and that every domain equation holds
/// in the codomain.
pub fn check_functor(f: &SchemaMorphism, bound: usize) -> FunctorReport {
    let typing_violations = f.typing_violations();
    let mut equations = Vec::new();
    if typing_violations.is_empty() {
        for (i, eq) in f.domain().equations().iter().enumerate() {
            let l = f.apply_path(&eq.lhs);
            let r = f.apply_path(&eq.rhs);
            let verdict = f
                .codomain()
                .paths_equal(&l, &r, bound)
                .unwrap_or(PathEq::Distinct);
            equations.push(EquationCheck {
                equation: i,
                lhs: f.codomain().render_path(&l),
                rhs: f.codomain().render_path(&r),
                verdict,
            });
        }
    }
    FunctorReport {
        typing_violations,
        equations,
    }
}
