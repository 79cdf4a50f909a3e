//! Backtracking lift search with forced-move propagation.

use rayon::prelude::*;

use super::{check_binding, Lift, SolveOptions, SquareInput};
use crate::cat::{GenId, ObjId, SchemaMorphism};
use crate::error::{Error, Result};
use crate::instance::{Instance, Row};

type Partial = Vec<Option<usize>>;

/// A probe `n: R -> S` compiled against an instance: each generator of `R`
/// becomes a lookup table between the tables of its endpoints.
pub struct LiftProblem<'a> {
    n: &'a SchemaMorphism,
    inst: &'a Instance,
    tables: Vec<Vec<usize>>,
    out: Vec<Vec<(GenId, ObjId)>>,
    inc: Vec<Vec<(GenId, ObjId)>>,
}

impl<'a> LiftProblem<'a> {
    pub fn new(n: &'a SchemaMorphism, inst: &'a Instance) -> Result<Self> {
        if **n.codomain() != **inst.schema() {
            return Err(Error::typing("probe lands in a different schema than the instance"));
        }
        let r = n.domain();
        let tables = r
            .generator_ids()
            .map(|g| inst.eval_path(n.generator(g)))
            .collect();
        let mut out = vec![Vec::new(); r.object_count()];
        let mut inc = vec![Vec::new(); r.object_count()];
        for g in r.generator_ids() {
            let gen = r.generator(g);
            out[gen.source.0].push((g, gen.target));
            inc[gen.target.0].push((g, gen.source));
        }
        Ok(LiftProblem {
            n,
            inst,
            tables,
            out,
            inc,
        })
    }

    /// Assigns `v` to `r` and every assignment it forces. False on conflict.
    fn assign(&self, part: &mut Partial, r: ObjId, v: usize) -> bool {
        let mut stack = vec![(r, v)];
        while let Some((r, v)) = stack.pop() {
            match part[r.0] {
                Some(prev) if prev == v => continue,
                Some(_) => return false,
                None => part[r.0] = Some(v),
            }
            for &(g, t) in &self.out[r.0] {
                stack.push((t, self.tables[g.0][v]));
            }
            for &(g, s) in &self.inc[r.0] {
                if let Some(sv) = part[s.0] {
                    if self.tables[g.0][sv] != v {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Partial assignment pinned by a binding; `None` if the pins conflict.
    pub(crate) fn seed(&self, m: &SchemaMorphism, binding: &[Row]) -> Result<Option<Partial>> {
        check_binding(m, self.n, binding, self.inst)?;
        let mut part = vec![None; self.n.domain().object_count()];
        for (w, row) in binding.iter().enumerate() {
            if !self.assign(&mut part, m.object(ObjId(w)), row.index) {
                return Ok(None);
            }
        }
        Ok(Some(part))
    }

    fn candidates(&self, r: usize) -> usize {
        self.inst.row_count(self.n.object(ObjId(r)))
    }

    fn finish(&self, part: &Partial) -> Lift {
        Lift::new(
            part.iter()
                .enumerate()
                .map(|(r, v)| Row::new(self.n.object(ObjId(r)), v.expect("complete")))
                .collect(),
        )
    }

    /// Depth-first search from `part`, branching on the first unassigned
    /// object in declaration order. Results come out in lexicographic order.
    fn extend(&self, part: Partial, limit: usize, out: &mut Vec<Lift>) {
        if out.len() >= limit {
            return;
        }
        let Some(r) = part.iter().position(Option::is_none) else {
            out.push(self.finish(&part));
            return;
        };
        for v in 0..self.candidates(r) {
            let mut next = part.clone();
            if self.assign(&mut next, ObjId(r), v) {
                self.extend(next, limit, out);
                if out.len() >= limit {
                    return;
                }
            }
        }
    }

    /// Lifts extending `part`, up to `limit`.
    pub(crate) fn solve(&self, part: Partial, limit: usize, opts: &SolveOptions) -> Vec<Lift> {
        let branch = part.iter().position(Option::is_none);
        let (Some(r), true) = (branch, opts.workers > 1 && limit == usize::MAX) else {
            let mut out = Vec::new();
            self.extend(part, limit, &mut out);
            return out;
        };
        let starts: Vec<Partial> = (0..self.candidates(r))
            .filter_map(|v| {
                let mut next = part.clone();
                self.assign(&mut next, ObjId(r), v).then_some(next)
            })
            .collect();
        let run = || {
            starts
                .into_par_iter()
                .map(|p| {
                    let mut out = Vec::new();
                    self.extend(p, usize::MAX, &mut out);
                    out
                })
                .collect::<Vec<_>>()
        };
        let chunks = match rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
        {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        };
        let mut out: Vec<Lift> = chunks.into_iter().flatten().collect();
        out.sort();
        out
    }
}

/// All lifts of a square, in lexicographic order over `R`'s declaration order.
pub fn enumerate_lifts(sq: &SquareInput, inst: &Instance) -> Result<Vec<Lift>> {
    enumerate_lifts_with(sq, inst, &SolveOptions::default())
}

pub fn enumerate_lifts_with(
    sq: &SquareInput,
    inst: &Instance,
    opts: &SolveOptions,
) -> Result<Vec<Lift>> {
    let prob = LiftProblem::new(&sq.n, inst)?;
    Ok(match prob.seed(&sq.m, &sq.binding)? {
        Some(part) => prob.solve(part, usize::MAX, opts),
        None => Vec::new(),
    })
}

/// The least lift of a square, if any.
pub fn first_lift(sq: &SquareInput, inst: &Instance) -> Result<Option<Lift>> {
    let prob = LiftProblem::new(&sq.n, inst)?;
    Ok(match prob.seed(&sq.m, &sq.binding)? {
        Some(part) => prob
            .solve(part, 1, &SolveOptions::default())
            .into_iter()
            .next(),
        None => None,
    })
}
