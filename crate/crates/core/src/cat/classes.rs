//! Enumeration of path classes out of a fixed object.

use std::collections::HashMap;

use super::schema::{GenId, ObjId, Path, Schema};
use super::words::PathEq;
use crate::error::{Error, Result};

/// Every morphism out of `source`, one representative path per class.
///
/// Representatives are listed breadth first: by length, then by the order in
/// which generators extend shorter representatives.
#[derive(Clone, Debug)]
pub struct HomClasses {
    source: ObjId,
    reps: Vec<Path>,
    // word -> class; normal forms when exact, otherwise every word seen so far
    index: HashMap<Vec<GenId>, usize>,
    bound: usize,
}

impl HomClasses {
    /// Fails with `Unbounded` when classes keep appearing past length `bound`
    /// or when two candidates cannot be told apart within it.
    pub fn enumerate(schema: &Schema, source: ObjId, bound: usize) -> Result<HomClasses> {
        let mut hc = HomClasses {
            source,
            reps: vec![Path::identity(source)],
            index: HashMap::from([(Vec::new(), 0)]),
            bound,
        };
        let exact = schema.has_normal_forms();
        let mut level: Vec<usize> = vec![0];
        let mut length = 0;
        while !level.is_empty() {
            length += 1;
            let mut next = Vec::new();
            for &r in &level {
                let base = hc.reps[r].clone();
                for &g in schema.outgoing(base.target()) {
                    let cand = base
                        .then(&schema.generator_path(g))
                        .expect("generator extends its source");
                    let fresh = if exact {
                        !schema.words().is_reducible(cand.steps())
                    } else {
                        hc.find_equal(schema, &cand)?.is_none()
                    };
                    if !fresh {
                        continue;
                    }
                    if length > bound {
                        return Err(Error::unbounded(format!(
                            "paths out of `{}` keep producing new morphisms past length {bound} (e.g. {})",
                            schema.object_name(source),
                            schema.render_path(&cand)
                        )));
                    }
                    hc.index.insert(cand.steps().to_vec(), hc.reps.len());
                    next.push(hc.reps.len());
                    hc.reps.push(cand);
                }
            }
            level = next;
        }
        Ok(hc)
    }

    fn find_equal(&mut self, schema: &Schema, p: &Path) -> Result<Option<usize>> {
        if let Some(&i) = self.index.get(p.steps()) {
            return Ok(Some(i));
        }
        let mut undecided = None;
        for (i, r) in self.reps.iter().enumerate() {
            if r.target() != p.target() {
                continue;
            }
            match schema.paths_equal(r, p, self.bound)? {
                PathEq::Equal => {
                    self.index.insert(p.steps().to_vec(), i);
                    return Ok(Some(i));
                }
                PathEq::Distinct => {}
                PathEq::Inconclusive => undecided = Some(i),
            }
        }
        if let Some(i) = undecided {
            return Err(Error::unbounded(format!(
                "cannot decide whether {} equals {} within length {}",
                schema.render_path(p),
                schema.render_path(&self.reps[i]),
                self.bound
            )));
        }
        Ok(None)
    }

    pub fn source(&self) -> ObjId {
        self.source
    }

    pub fn reps(&self) -> &[Path] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class indices of morphisms `source -> target`, in enumeration order.
    pub fn to(&self, target: ObjId) -> Vec<usize> {
        (0..self.reps.len())
            .filter(|&i| self.reps[i].target() == target)
            .collect()
    }

    /// The class of a path out of `source`.
    pub fn classify(&mut self, schema: &Schema, p: &Path) -> Result<usize> {
        if p.source() != self.source {
            return Err(Error::typing("path does not start at the enumerated object"));
        }
        if schema.has_normal_forms() {
            let nf = schema.words().normalize(p.steps());
            return self
                .index
                .get(&nf)
                .copied()
                .ok_or_else(|| Error::unbounded("normal form missing from enumeration"));
        }
        self.find_equal(schema, p)?
            .ok_or_else(|| Error::unbounded(format!("no class found for {}", schema.render_path(p))))
    }
}

/// Classes out of every object of `schema`.
pub fn all_hom_classes(schema: &Schema, bound: usize) -> Result<Vec<HomClasses>> {
    schema
        .object_ids()
        .map(|o| HomClasses::enumerate(schema, o, bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{dds_schema, emp_schema};

    #[test]
    fn department_homs_collapse_by_the_rules() {
        let s = emp_schema();
        let d = s.object("Department").unwrap();
        // the manager loop is free
        assert!(matches!(
            HomClasses::enumerate(&s, d, 8),
            Err(Error::Unbounded(_))
        ));
        let n = s.object("DNString").unwrap();
        let hc = HomClasses::enumerate(&s, n, 8).unwrap();
        assert_eq!(hc.reps().len(), 1);
    }

    #[test]
    fn idempotent_loop_is_finite() {
        let s = Schema::builder("I")
            .object("A")
            .arrow("e", "A", "A")
            .equation("A", &["e", "e"], &["e"])
            .build()
            .unwrap();
        let mut hc = HomClasses::enumerate(&s, ObjId(0), 4).unwrap();
        assert_eq!(hc.reps().len(), 2);
        let eee = s.path("A", &["e", "e", "e"]).unwrap();
        assert_eq!(hc.classify(&s, &eee).unwrap(), 1);
    }

    #[test]
    fn free_loop_is_unbounded() {
        let s = dds_schema();
        assert!(matches!(
            HomClasses::enumerate(&s, ObjId(0), 16),
            Err(Error::Unbounded(_))
        ));
    }
}
