mod common;

use std::sync::Arc;

use catlift::cat::{ObjId, Schema, SchemaMorphism};
use catlift::instance::Instance;
use catlift::query::{induced_result_map, result_instance, run_query, transport_lift, Query, QueryMorphism};
use catlift::solver::{enumerate_lifts, enumerate_lifts_oracle, Lift, SquareInput};
use catlift::DEFAULT_BOUND;
use common::morphisms::{random_query, step, transport};
use common::{free_schema, instance, probe, rng};
use proptest::prelude::*;
use rand::Rng;

fn answers(q: &Query, inst: &Instance) -> Vec<Lift> {
    enumerate_lifts(&q.square(), inst).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn identities_induce_identities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((inst, q)) = random_query(&mut r) else { return Ok(()) };
        let ls = answers(&q, &inst);
        let id = QueryMorphism::identity(&q);
        prop_assert_eq!(induced_result_map(&id, &ls, &q, &inst).unwrap(), ls);
    }

    #[test]
    fn composites_induce_composites(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((inst, q0)) = random_query(&mut r) else { return Ok(()) };
        let (q1, a) = step(&mut r, &q0, &inst);
        let (q2, b) = step(&mut r, &q1, &inst);
        let ls = answers(&q0, &inst);
        let via = induced_result_map(&a, &ls, &q1, &inst).unwrap();
        prop_assert!(via.iter().all(|l| l.is_lift_of(&q1.n, &inst)));
        let twice = induced_result_map(&b, &via, &q2, &inst).unwrap();
        let ab = a.then(&b, DEFAULT_BOUND).unwrap();
        prop_assert_eq!(induced_result_map(&ab, &ls, &q2, &inst).unwrap(), twice);
        let answers2 = answers(&q2, &inst);
        prop_assert!(induced_result_map(&ab, &ls, &q2, &inst).unwrap().iter().all(|l| answers2.contains(l)));
    }

    #[test]
    fn transport_is_the_unique_connected_lift(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((inst, q)) = random_query(&mut r) else { return Ok(()) };
        let (_, qm) = transport(&mut r, &q, &inst);
        let alpha = &qm.alpha;
        let candidates = enumerate_lifts_oracle(&SquareInput::unconstrained(alpha.target.clone()), &inst).unwrap();
        for l in enumerate_lifts(&SquareInput::unconstrained(alpha.source.clone()), &inst).unwrap() {
            let reached: Vec<&Lift> = candidates
                .iter()
                .filter(|c| {
                    alpha.components.iter().enumerate().all(|(b, p)| {
                        let from = l.row(ObjId(b));
                        inst.eval_path(p)[from.index] == c.row(ObjId(b)).index
                    })
                })
                .collect();
            prop_assert_eq!(reached.len(), 1);
            prop_assert_eq!(&transport_lift(&inst, &l, alpha).unwrap().0, reached[0]);
        }
    }

    #[test]
    fn transport_respects_vertical_composition(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((inst, q)) = random_query(&mut r) else { return Ok(()) };
        let (q1, a) = transport(&mut r, &q, &inst);
        let (_, b) = transport(&mut r, &q1, &inst);
        let ab = a.alpha.vertical(&b.alpha, DEFAULT_BOUND).unwrap();
        for l in enumerate_lifts(&SquareInput::unconstrained(a.alpha.source.clone()), &inst).unwrap() {
            let once = transport_lift(&inst, &l, &ab).unwrap().0;
            let mid = transport_lift(&inst, &l, &a.alpha).unwrap().0;
            prop_assert_eq!(once, transport_lift(&inst, &mid, &b.alpha).unwrap().0);
        }
    }

    #[test]
    fn result_cones_commute(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = free_schema(&mut r, 3, 3, false);
        let inst = instance(&mut r, &s, 3);
        let n = probe(&mut r, &s, 3);
        let st = result_instance(&n, &inst).unwrap();
        prop_assert!(st.commutes());
    }

    #[test]
    fn projection_survives_renaming_columns(seed in any::<u64>()) {
        let mut r = rng(seed);
        let Some((inst, q)) = random_query(&mut r) else { return Ok(()) };
        let rs = q.r();
        // X: a random list of R-objects; X' the same list reversed
        let picks: Vec<ObjId> = (0..r.gen_range(1..=3)).map(|_| ObjId(r.gen_range(0..rs.object_count()))).collect();
        let x = |name: &str, objs: &[ObjId]| {
            let names = (0..objs.len()).map(|i| format!("c{i}")).collect();
            let xs = Arc::new(Schema::from_parts(name, names, Vec::new(), Vec::new()).unwrap());
            SchemaMorphism::new(xs, rs.clone(), objs.to_vec(), Vec::new()).unwrap()
        };
        let mut rev = picks.clone();
        rev.reverse();
        let mut a = q.clone();
        a.select = Some(x("X", &picks));
        let mut b = q.clone();
        b.select = Some(x("Xr", &rev));
        let pa = run_query(&a, &inst).unwrap().projected;
        let pb = run_query(&b, &inst).unwrap().projected;
        prop_assert_eq!(pa.len(), pb.len());
        for (u, mut v) in pa.into_iter().zip(pb) {
            v.reverse();
            prop_assert_eq!(u, v);
        }
    }
}
