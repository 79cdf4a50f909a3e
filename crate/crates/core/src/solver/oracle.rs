//! Reference lift enumeration by exhaustive product.

use super::{check_binding, Lift, SquareInput};
use crate::cat::ObjId;
use crate::error::Result;
use crate::instance::{Instance, Row};

/// Every assignment of rows to the objects of `R`, filtered by the pins and
/// by every generator of `R`. Exponential; intended as a test oracle.
pub fn enumerate_lifts_oracle(sq: &SquareInput, inst: &Instance) -> Result<Vec<Lift>> {
    check_binding(&sq.m, &sq.n, &sq.binding, inst)?;
    let r = sq.n.domain();
    let sizes: Vec<usize> = r
        .object_ids()
        .map(|o| inst.row_count(sq.n.object(o)))
        .collect();
    let mut out = Vec::new();
    if sizes.contains(&0) {
        return Ok(out);
    }
    let mut odo = vec![0usize; sizes.len()];
    loop {
        let rows: Vec<Row> = odo
            .iter()
            .enumerate()
            .map(|(i, &v)| Row::new(sq.n.object(ObjId(i)), v))
            .collect();
        let pinned = sq
            .binding
            .iter()
            .enumerate()
            .all(|(w, &p)| rows[sq.m.object(ObjId(w)).0] == p);
        let respects = r.generator_ids().all(|g| {
            let gen = r.generator(g);
            inst.transport(rows[gen.source.0], sq.n.generator(g)).ok() == Some(rows[gen.target.0])
        });
        if pinned && respects {
            out.push(Lift::new(rows));
        }
        // advance, last position fastest
        let mut i = odo.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            odo[i] += 1;
            if odo[i] < sizes[i] {
                break;
            }
            odo[i] = 0;
        }
    }
}
