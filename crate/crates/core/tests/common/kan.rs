//! Brute-force colimit and limit sizes over materialised comma categories.

use catlift::cat::{MaterializedSchema, ObjId, SchemaMorphism};
use catlift::instance::Instance;

use super::{free_schema, functor, instance, Gen};

/// Finite `S`, `T`, a functor between them, and an instance on `S`.
pub fn setup(r: &mut Gen, rows: usize) -> Option<(SchemaMorphism, Instance)> {
    let s = free_schema(r, 3, 3, true);
    let t = free_schema(r, 3, 3, true);
    let f = functor(r, &s, &t)?;
    let inst = instance(r, &s, rows);
    Some((f, inst))
}

/// Union-find over plain indices, kept local so the oracle shares no code
/// with the library.
fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

/// `|colim_{(F↓d)} δ|` from the materialised categories.
pub fn colimit_size(f: &SchemaMorphism, ms: &MaterializedSchema, mt: &MaterializedSchema, inst: &Instance, d: usize) -> usize {
    let (sc, tc) = (&ms.category, &mt.category);
    let mut elems: Vec<(usize, usize, usize)> = Vec::new();
    for c in 0..sc.objects().len() {
        for phi in tc.hom(f.object(ObjId(c)).0, d) {
            for x in 0..inst.row_count(ObjId(c)) {
                elems.push((c, phi, x));
            }
        }
    }
    let pos = |e: (usize, usize, usize)| elems.iter().position(|&x| x == e).unwrap();
    let mut parent: Vec<usize> = (0..elems.len()).collect();
    for (u, m) in sc.morphisms().iter().enumerate() {
        let fu = mt.eval(&f.apply_path(&ms.paths[u]));
        let act = inst.eval_path(&ms.paths[u]);
        for phi2 in tc.hom(f.object(ObjId(m.target)).0, d) {
            let phi = tc.compose(fu, phi2).unwrap();
            for x in 0..inst.row_count(ObjId(m.source)) {
                let a = find(&mut parent, pos((m.source, phi, x)));
                let b = find(&mut parent, pos((m.target, phi2, act[x])));
                parent[a] = b;
            }
        }
    }
    (0..elems.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// `|lim_{(d↓F)} δ|` by filtering every assignment of rows to comma objects.
pub fn limit_size(f: &SchemaMorphism, ms: &MaterializedSchema, mt: &MaterializedSchema, inst: &Instance, d: usize) -> Option<usize> {
    let (sc, tc) = (&ms.category, &mt.category);
    let mut objs: Vec<(usize, usize)> = Vec::new();
    for c in 0..sc.objects().len() {
        for phi in tc.hom(d, f.object(ObjId(c)).0) {
            objs.push((c, phi));
        }
    }
    let sizes: Vec<usize> = objs.iter().map(|&(c, _)| inst.row_count(ObjId(c))).collect();
    let total: usize = sizes.iter().product();
    if total > 200_000 {
        return None;
    }
    let mut arrows = Vec::new();
    for (i, &(c, phi)) in objs.iter().enumerate() {
        for &u in sc.out_of(c) {
            let fu = mt.eval(&f.apply_path(&ms.paths[u]));
            let phi2 = tc.compose(phi, fu).unwrap();
            let j = objs.iter().position(|&o| o == (sc.morphism(u).target, phi2)).unwrap();
            arrows.push((i, j, inst.eval_path(&ms.paths[u])));
        }
    }
    let mut count = 0;
    let mut pick = vec![0; objs.len()];
    for mut k in 0..total {
        for (i, &n) in sizes.iter().enumerate() {
            pick[i] = k % n;
            k /= n;
        }
        if arrows.iter().all(|(i, j, act)| act[pick[*i]] == pick[*j]) {
            count += 1;
        }
    }
    Some(count)
}

