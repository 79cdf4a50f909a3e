//! Common constraints expressed as lifting problems.

use std::sync::Arc;

use super::{ConstraintSet, LiftingConstraint};
use crate::cat::{Schema, SchemaMorphism};
use crate::error::{Error, Result};

fn schema(name: &str, objects: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Arc<Schema>> {
    let mut b = Schema::builder(name).objects(objects.iter().copied());
    for (n, s, t) in arrows {
        b = b.arrow(*n, *s, *t);
    }
    Ok(Arc::new(b.build()?))
}

/// Source and target names of a generator of `s`.
fn ends(s: &Schema, f: &str) -> Result<(String, String)> {
    let g = s.generator(s.find_generator(f)?);
    Ok((
        s.object_name(g.source).to_string(),
        s.object_name(g.target).to_string(),
    ))
}

fn morphism(
    dom: &Arc<Schema>,
    cod: &Arc<Schema>,
    objects: &[(&str, &str)],
    arrows: &[(&str, &[&str])],
) -> Result<SchemaMorphism> {
    SchemaMorphism::from_names(dom.clone(), cod.clone(), objects, arrows)
}

/// Table `t` has at least one row.
pub fn nonempty(s: &Arc<Schema>, t: &str) -> Result<LiftingConstraint> {
    s.object(t)?;
    let w = Arc::new(Schema::empty());
    let r = schema("One", &["A"], &[])?;
    let m = morphism(&w, &r, &[], &[])?;
    let n = morphism(&r, s, &[("A", t)], &[])?;
    LiftingConstraint::new(format!("nonempty({t})"), m, n)
}

/// Table `t` has at most one row.
pub fn at_most_one(s: &Arc<Schema>, t: &str) -> Result<LiftingConstraint> {
    s.object(t)?;
    let w = schema("Two", &["a1", "a2"], &[])?;
    let r = schema("One", &["A"], &[])?;
    let m = morphism(&w, &r, &[("a1", "A"), ("a2", "A")], &[])?;
    let n = morphism(&r, s, &[("A", t)], &[])?;
    LiftingConstraint::new(format!("at_most_one({t})"), m, n)
}

pub fn exactly_one(s: &Arc<Schema>, t: &str) -> Result<ConstraintSet> {
    Ok(ConstraintSet::new(vec![nonempty(s, t)?, at_most_one(s, t)?]))
}

fn arrow_probe(s: &Arc<Schema>, f: &str) -> Result<(Arc<Schema>, SchemaMorphism)> {
    let (src, tgt) = ends(s, f)?;
    let r = schema("Arrow", &["A", "B"], &[("F", "A", "B")])?;
    let n = morphism(&r, s, &[("A", &src), ("B", &tgt)], &[("F", &[f])])?;
    Ok((r, n))
}

/// Every row of the target of `f` is hit by `f`.
pub fn surjective_fk(s: &Arc<Schema>, f: &str) -> Result<LiftingConstraint> {
    let (r, n) = arrow_probe(s, f)?;
    let w = schema("Point", &["b"], &[])?;
    let m = morphism(&w, &r, &[("b", "B")], &[])?;
    LiftingConstraint::new(format!("surjective({f})"), m, n)
}

/// No two rows share an `f` value.
pub fn injective_fk(s: &Arc<Schema>, f: &str) -> Result<LiftingConstraint> {
    let (r, n) = arrow_probe(s, f)?;
    let w = schema(
        "Cospan",
        &["a1", "a2", "b"],
        &[("f1", "a1", "b"), ("f2", "a2", "b")],
    )?;
    let m = morphism(
        &w,
        &r,
        &[("a1", "A"), ("a2", "A"), ("b", "B")],
        &[("f1", &["F"]), ("f2", &["F"])],
    )?;
    LiftingConstraint::new(format!("injective({f})"), m, n)
}

/// `f, g: T -> A` viewed as a binary relation on `A`.
fn relation(s: &Arc<Schema>, f: &str, g: &str) -> Result<(String, String)> {
    let (ts, tt) = ends(s, f)?;
    let (gs, gt) = ends(s, g)?;
    if ts != gs || tt != gt {
        return Err(Error::typing(format!(
            "`{f}` and `{g}` must be parallel to form a relation"
        )));
    }
    Ok((ts, tt))
}

/// The relation `(f, g)` is transitive.
pub fn transitive(s: &Arc<Schema>, f: &str, g: &str) -> Result<LiftingConstraint> {
    let (t, a) = relation(s, f, g)?;
    let w = schema(
        "Chain",
        &["r1", "r2", "a1", "a2", "a3"],
        &[
            ("f1", "r1", "a1"),
            ("g1", "r1", "a2"),
            ("f2", "r2", "a2"),
            ("g2", "r2", "a3"),
        ],
    )?;
    let r = schema(
        "Triangle",
        &["R1", "R2", "R3", "A1", "A2", "A3"],
        &[
            ("F1", "R1", "A1"),
            ("G1", "R1", "A2"),
            ("F2", "R2", "A2"),
            ("G2", "R2", "A3"),
            ("F3", "R3", "A1"),
            ("G3", "R3", "A3"),
        ],
    )?;
    let m = morphism(
        &w,
        &r,
        &[
            ("r1", "R1"),
            ("r2", "R2"),
            ("a1", "A1"),
            ("a2", "A2"),
            ("a3", "A3"),
        ],
        &[
            ("f1", &["F1"]),
            ("g1", &["G1"]),
            ("f2", &["F2"]),
            ("g2", &["G2"]),
        ],
    )?;
    let n = morphism(
        &r,
        s,
        &[
            ("R1", &t),
            ("R2", &t),
            ("R3", &t),
            ("A1", &a),
            ("A2", &a),
            ("A3", &a),
        ],
        &[
            ("F1", &[f]),
            ("G1", &[g]),
            ("F2", &[f]),
            ("G2", &[g]),
            ("F3", &[f]),
            ("G3", &[g]),
        ],
    )?;
    LiftingConstraint::new(format!("transitive({f},{g})"), m, n)
}

/// The relation `(f, g)` is reflexive.
pub fn reflexive(s: &Arc<Schema>, f: &str, g: &str) -> Result<LiftingConstraint> {
    let (t, a) = relation(s, f, g)?;
    let w = schema("Point", &["a"], &[])?;
    let r = schema("Loop", &["R1", "A"], &[("F", "R1", "A"), ("G", "R1", "A")])?;
    let m = morphism(&w, &r, &[("a", "A")], &[])?;
    let n = morphism(
        &r,
        s,
        &[("R1", &t), ("A", &a)],
        &[("F", &[f]), ("G", &[g])],
    )?;
    LiftingConstraint::new(format!("reflexive({f},{g})"), m, n)
}

/// The relation `(f, g)` is symmetric.
pub fn symmetric(s: &Arc<Schema>, f: &str, g: &str) -> Result<LiftingConstraint> {
    let (t, a) = relation(s, f, g)?;
    let w = schema(
        "Edge",
        &["r1", "a1", "a2"],
        &[("f1", "r1", "a1"), ("g1", "r1", "a2")],
    )?;
    let r = schema(
        "Swap",
        &["R1", "R2", "A1", "A2"],
        &[
            ("F1", "R1", "A1"),
            ("G1", "R1", "A2"),
            ("F2", "R2", "A2"),
            ("G2", "R2", "A1"),
        ],
    )?;
    let m = morphism(
        &w,
        &r,
        &[("r1", "R1"), ("a1", "A1"), ("a2", "A2")],
        &[("f1", &["F1"]), ("g1", &["G1"])],
    )?;
    let n = morphism(
        &r,
        s,
        &[("R1", &t), ("R2", &t), ("A1", &a), ("A2", &a)],
        &[
            ("F1", &[f]),
            ("G1", &[g]),
            ("F2", &[f]),
            ("G2", &[g]),
        ],
    )?;
    LiftingConstraint::new(format!("symmetric({f},{g})"), m, n)
}

/// `t` with projections `f`, `g` is the product of their targets:
/// every pair is hit (existence) and by at most one row (uniqueness).
pub fn product(s: &Arc<Schema>, t: &str, f: &str, g: &str) -> Result<ConstraintSet> {
    let (fs, fb) = ends(s, f)?;
    let (gs, gc) = ends(s, g)?;
    if fs != t || gs != t {
        return Err(Error::typing(format!("`{f}` and `{g}` must leave `{t}`")));
    }
    let r = schema("Span", &["A", "B", "C"], &[("F", "A", "B"), ("G", "A", "C")])?;
    let n = morphism(
        &r,
        s,
        &[("A", t), ("B", &fb), ("C", &gc)],
        &[("F", &[f]), ("G", &[g])],
    )?;
    let w1 = schema("Pair", &["b", "c"], &[])?;
    let m1 = morphism(&w1, &r, &[("b", "B"), ("c", "C")], &[])?;
    let w2 = schema(
        "TwoSpans",
        &["a1", "a2", "b", "c"],
        &[
            ("F1", "a1", "b"),
            ("G1", "a1", "c"),
            ("F2", "a2", "b"),
            ("G2", "a2", "c"),
        ],
    )?;
    let m2 = morphism(
        &w2,
        &r,
        &[("a1", "A"), ("a2", "A"), ("b", "B"), ("c", "C")],
        &[
            ("F1", &["F"]),
            ("G1", &["G"]),
            ("F2", &["F"]),
            ("G2", &["G"]),
        ],
    )?;
    Ok(ConstraintSet::new(vec![
        LiftingConstraint::new(format!("product_exists({t},{f},{g})"), m1, n.clone())?,
        LiftingConstraint::new(format!("product_unique({t},{f},{g})"), m2, n)?,
    ]))
}

/// For a loop `p`: whenever `p` swaps two rows they are the same row, so the
/// dynamics of `p` has no 2-cycles. Longer cycles are not excluded.
pub fn forest(s: &Arc<Schema>, p: &str) -> Result<LiftingConstraint> {
    let (src, tgt) = ends(s, p)?;
    if src != tgt {
        return Err(Error::typing(format!("`{p}` must be a loop")));
    }
    let w = schema("TwoCycle", &["v1", "v2"], &[("p1", "v1", "v2"), ("p2", "v2", "v1")])?;
    let m = SchemaMorphism::from_names(
        w,
        s.clone(),
        &[("v1", &src), ("v2", &src)],
        &[("p1", &[p]), ("p2", &[p])],
    )?;
    let n = SchemaMorphism::identity(s.clone());
    LiftingConstraint::new(format!("forest({p})"), m, n)
}
