//! Instances: set-valued functors on a schema, stored as one table per object.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cat::{GenId, ObjId, Path, Schema};
use crate::error::{Error, Result};

/// A row of some table, addressed by position. Ordered by object, then row.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Row {
    pub object: ObjId,
    pub index: usize,
}

impl Row {
    pub fn new(object: ObjId, index: usize) -> Row {
        Row { object, index }
    }
}

/// A set-valued functor: row IDs per object, one total column per generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    schema: Arc<Schema>,
    ids: Vec<Vec<String>>,
    lookup: Vec<HashMap<String, usize>>,
    columns: Vec<Vec<usize>>,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Instance");
        d.field("schema", &self.schema.name());
        for o in self.schema.object_ids() {
            d.field(self.schema.object_name(o), &self.ids[o.0]);
        }
        d.finish()
    }
}

impl Instance {
    /// Index-level constructor: row IDs per object and, per generator, the
    /// target row of each source row.
    pub fn new(schema: Arc<Schema>, ids: Vec<Vec<String>>, columns: Vec<Vec<usize>>) -> Result<Self> {
        if ids.len() != schema.object_count() || columns.len() != schema.generator_count() {
            return Err(Error::Load(format!(
                "instance of `{}` needs one table per object and one column per generator",
                schema.name()
            )));
        }
        let mut lookup = Vec::with_capacity(ids.len());
        for (o, table) in ids.iter().enumerate() {
            let mut m = HashMap::with_capacity(table.len());
            for (i, id) in table.iter().enumerate() {
                if m.insert(id.clone(), i).is_some() {
                    return Err(Error::Load(format!(
                        "duplicate row ID `{id}` in `{}`",
                        schema.objects()[o]
                    )));
                }
            }
            lookup.push(m);
        }
        for g in schema.generator_ids() {
            let gen = schema.generator(g);
            let col = &columns[g.0];
            if col.len() != ids[gen.source.0].len() {
                return Err(Error::Load(format!(
                    "column `{}` has {} cells for {} rows",
                    schema.qualified_generator(g),
                    col.len(),
                    ids[gen.source.0].len()
                )));
            }
            if col.iter().any(|&v| v >= ids[gen.target.0].len()) {
                return Err(Error::Load(format!(
                    "column `{}` points outside `{}`",
                    schema.qualified_generator(g),
                    schema.object_name(gen.target)
                )));
            }
        }
        Ok(Instance {
            schema,
            ids,
            lookup,
            columns,
        })
    }

    pub fn builder(schema: Arc<Schema>) -> InstanceBuilder {
        let n = schema.object_count();
        InstanceBuilder {
            schema,
            tables: vec![Vec::new(); n],
            error: None,
        }
    }

    /// The instance with every table empty.
    pub fn empty(schema: Arc<Schema>) -> Instance {
        let ids = vec![Vec::new(); schema.object_count()];
        let columns = vec![Vec::new(); schema.generator_count()];
        Instance::new(schema, ids, columns).expect("empty instance is valid")
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    /// Row IDs of `o` in table order.
    pub fn rows(&self, o: ObjId) -> &[String] {
        &self.ids[o.0]
    }

    pub fn row_count(&self, o: ObjId) -> usize {
        self.ids[o.0].len()
    }

    pub fn total_rows(&self) -> usize {
        self.ids.iter().map(Vec::len).sum()
    }

    pub fn row_id(&self, r: Row) -> &str {
        &self.ids[r.object.0][r.index]
    }

    pub fn find_row(&self, o: ObjId, id: &str) -> Option<usize> {
        self.lookup[o.0].get(id).copied()
    }

    /// Looks a row up by table name and row ID.
    pub fn row(&self, object: &str, id: &str) -> Result<Row> {
        let o = self.schema.object(object)?;
        self.find_row(o, id)
            .map(|i| Row::new(o, i))
            .ok_or_else(|| Error::unknown("row", format!("({object},{id})")))
    }

    /// Every row, by object then table order.
    pub fn all_rows(&self) -> impl Iterator<Item = Row> + '_ {
        self.schema
            .object_ids()
            .flat_map(move |o| (0..self.ids[o.0].len()).map(move |i| Row::new(o, i)))
    }

    pub fn column(&self, g: GenId) -> &[usize] {
        &self.columns[g.0]
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.columns
    }

    /// The function a path denotes, as a table from source rows to target rows.
    pub fn eval_path(&self, p: &Path) -> Vec<usize> {
        let mut f: Vec<usize> = (0..self.ids[p.source().0].len()).collect();
        for g in p.steps() {
            let col = &self.columns[g.0];
            for v in f.iter_mut() {
                *v = col[*v];
            }
        }
        f
    }

    /// Follows `p` from `row`.
    pub fn transport(&self, row: Row, p: &Path) -> Result<Row> {
        if row.object != p.source() {
            return Err(Error::typing(format!(
                "row of `{}` cannot follow a path from `{}`",
                self.schema.object_name(row.object),
                self.schema.object_name(p.source())
            )));
        }
        Ok(Row::new(p.target(), self.follow(row.index, p.steps())))
    }

    pub(crate) fn follow(&self, mut x: usize, steps: &[GenId]) -> usize {
        for g in steps {
            x = self.columns[g.0][x];
        }
        x
    }

    /// `(object, rowid)` for display.
    pub fn describe(&self, r: Row) -> (String, String) {
        (
            self.schema.object_name(r.object).to_string(),
            self.row_id(r).to_string(),
        )
    }

    /// Same data over an equal schema under a different handle.
    pub fn with_schema(&self, schema: Arc<Schema>) -> Result<Instance> {
        if *schema != *self.schema {
            return Err(Error::typing("schemas differ"));
        }
        Ok(Instance {
            schema,
            ..self.clone()
        })
    }

    /// Whether some bijection of rows, table by table, carries one instance to the other.
    pub fn is_isomorphic(&self, other: &Instance) -> bool {
        *self.schema == *other.schema
            && self
                .schema
                .object_ids()
                .all(|o| self.row_count(o) == other.row_count(o))
            && search_homs(self, other, true, 1) == 1
    }
}

/// Number of natural transformations `a => b`.
pub fn count_homs(a: &Instance, b: &Instance) -> usize {
    search_homs(a, b, false, usize::MAX)
}

/// Counts natural transformations, stopping at `limit`.
fn search_homs(a: &Instance, b: &Instance, injective: bool, limit: usize) -> usize {
    let schema = a.schema.clone();
    let vars: Vec<Row> = a.all_rows().collect();
    let mut assign: Vec<Vec<Option<usize>>> = schema
        .object_ids()
        .map(|o| vec![None; a.row_count(o)])
        .collect();
    let mut used: Vec<Vec<bool>> = schema
        .object_ids()
        .map(|o| vec![false; b.row_count(o)])
        .collect();
    let mut count = 0;
    hom_step(a, b, &vars, 0, &mut assign, &mut used, injective, limit, &mut count);
    count
}

#[allow(clippy::too_many_arguments)]
fn hom_step(
    a: &Instance,
    b: &Instance,
    vars: &[Row],
    i: usize,
    assign: &mut [Vec<Option<usize>>],
    used: &mut [Vec<bool>],
    injective: bool,
    limit: usize,
    count: &mut usize,
) {
    if *count >= limit {
        return;
    }
    let Some(pos) = (i..vars.len()).find(|&k| assign[vars[k].object.0][vars[k].index].is_none()) else {
        *count += 1;
        return;
    };
    let v = vars[pos];
    for y in 0..b.row_count(v.object) {
        let mut trial_assign = assign.to_vec();
        let mut trial_used = used.to_vec();
        if propagate(a, b, v, y, &mut trial_assign, &mut trial_used, injective) {
            hom_step(a, b, vars, pos + 1, &mut trial_assign, &mut trial_used, injective, limit, count);
            if *count >= limit {
                return;
            }
        }
    }
}

fn propagate(
    a: &Instance,
    b: &Instance,
    start: Row,
    y: usize,
    assign: &mut [Vec<Option<usize>>],
    used: &mut [Vec<bool>],
    injective: bool,
) -> bool {
    let schema = a.schema();
    let mut stack = vec![(start, y)];
    while let Some((r, y)) = stack.pop() {
        match assign[r.object.0][r.index] {
            Some(prev) => {
                if prev != y {
                    return false;
                }
                continue;
            }
            None => {
                if injective {
                    if used[r.object.0][y] {
                        return false;
                    }
                    used[r.object.0][y] = true;
                }
                assign[r.object.0][r.index] = Some(y);
            }
        }
        for &g in schema.outgoing(r.object) {
            let t = schema.generator(g).target;
            stack.push((Row::new(t, a.columns[g.0][r.index]), b.columns[g.0][y]));
        }
    }
    true
}

/// Rows given by name; resolved into an [`Instance`] or validated as is.
#[derive(Clone, Debug)]
pub struct InstanceBuilder {
    schema: Arc<Schema>,
    tables: Vec<Vec<(String, Vec<String>)>>,
    error: Option<Error>,
}

impl InstanceBuilder {
    /// Adds a row: its ID and one value per outgoing generator, in declaration order.
    pub fn row(mut self, object: &str, id: &str, values: &[&str]) -> Self {
        match self.schema.object(object) {
            Ok(o) => self.tables[o.0].push((
                id.to_string(),
                values.iter().map(|s| s.to_string()).collect(),
            )),
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
        self
    }

    /// Adds several rows; each slice is `[id, value, ...]`.
    pub fn table(mut self, object: &str, rows: &[&[&str]]) -> Self {
        for r in rows {
            match r.split_first() {
                Some((id, vals)) => self = self.row(object, id, vals),
                None => {
                    self.error
                        .get_or_insert(Error::Load(format!("empty row in `{object}`")));
                }
            }
        }
        self
    }

    /// Adds rows with no outgoing columns.
    pub fn ids(mut self, object: &str, ids: &[&str]) -> Self {
        for id in ids {
            self = self.row(object, id, &[]);
        }
        self
    }

    pub fn raw(self) -> Result<RawInstance> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let raw = RawInstance {
            schema: self.schema,
            tables: self.tables,
        };
        raw.check_shape()?;
        Ok(raw)
    }

    pub fn build(self) -> Result<Instance> {
        self.raw()?.resolve()
    }
}

/// Unresolved tables: values are row IDs of target tables, possibly dangling.
#[derive(Clone, Debug)]
pub struct RawInstance {
    schema: Arc<Schema>,
    tables: Vec<Vec<(String, Vec<String>)>>,
}

impl RawInstance {
    /// `tables[o]` lists `(id, values)` with values in outgoing-generator order.
    pub fn new(schema: Arc<Schema>, tables: Vec<Vec<(String, Vec<String>)>>) -> Result<Self> {
        let raw = RawInstance { schema, tables };
        raw.check_shape()?;
        Ok(raw)
    }

    pub fn schema(&self) -> &Arc<Schema> {
        &self.schema
    }

    fn check_shape(&self) -> Result<()> {
        if self.tables.len() != self.schema.object_count() {
            return Err(Error::Load("one table per object required".into()));
        }
        for o in self.schema.object_ids() {
            let width = self.schema.outgoing(o).len();
            let mut seen = HashMap::new();
            for (id, vals) in &self.tables[o.0] {
                if vals.len() != width {
                    return Err(Error::Load(format!(
                        "row `{id}` of `{}` has {} values, expected {width}",
                        self.schema.object_name(o),
                        vals.len()
                    )));
                }
                if vals.iter().any(|v| v.is_empty()) {
                    return Err(Error::Load(format!(
                        "row `{id}` of `{}` has an empty cell",
                        self.schema.object_name(o)
                    )));
                }
                if seen.insert(id.as_str(), ()).is_some() {
                    return Err(Error::Load(format!(
                        "duplicate row ID `{id}` in `{}`",
                        self.schema.object_name(o)
                    )));
                }
            }
        }
        Ok(())
    }

    fn dangling(&self) -> (Vec<DanglingReference>, Vec<Vec<Option<usize>>>) {
        let s = &self.schema;
        let lookup: Vec<HashMap<&str, usize>> = self
            .tables
            .iter()
            .map(|t| t.iter().enumerate().map(|(i, (id, _))| (id.as_str(), i)).collect())
            .collect();
        let mut dangling = Vec::new();
        let mut columns = vec![Vec::new(); s.generator_count()];
        for o in s.object_ids() {
            for (k, &g) in s.outgoing(o).iter().enumerate() {
                let t = s.generator(g).target;
                for (id, vals) in &self.tables[o.0] {
                    let hit = lookup[t.0].get(vals[k].as_str()).copied();
                    if hit.is_none() {
                        dangling.push(DanglingReference {
                            object: s.object_name(o).to_string(),
                            row: id.clone(),
                            generator: s.generator(g).name.clone(),
                            value: vals[k].clone(),
                        });
                    }
                    columns[g.0].push(hit);
                }
            }
        }
        (dangling, columns)
    }

    /// Resolves references, failing on the first dangling one.
    pub fn resolve(&self) -> Result<Instance> {
        let (dangling, columns) = self.dangling();
        if let Some(d) = dangling.first() {
            return Err(Error::Load(d.to_string()));
        }
        let ids = self
            .tables
            .iter()
            .map(|t| t.iter().map(|(id, _)| id.clone()).collect())
            .collect();
        let columns = columns
            .into_iter()
            .map(|c| c.into_iter().map(|v| v.expect("resolved")).collect())
            .collect();
        Instance::new(self.schema.clone(), ids, columns)
    }

    /// Reports dangling references and, when there are none, equation violations.
    pub fn validate(&self) -> ValidationReport {
        let (dangling, _) = self.dangling();
        if !dangling.is_empty() {
            return ValidationReport {
                dangling,
                violations: Vec::new(),
            };
        }
        match self.resolve() {
            Ok(inst) => validate_instance(&inst),
            Err(_) => ValidationReport {
                dangling,
                violations: Vec::new(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DanglingReference {
    pub object: String,
    pub row: String,
    pub generator: String,
    pub value: String,
}

impl fmt::Display for DanglingReference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}).{} = `{}` names no row",
            self.object, self.row, self.generator, self.value
        )
    }
}

/// A row at which the two sides of an equation disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationViolation {
    pub equation: usize,
    pub lhs: String,
    pub rhs: String,
    pub object: String,
    pub row: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

impl fmt::Display for EquationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = {} fails at ({},{}): {} vs {}",
            self.lhs, self.rhs, self.object, self.row, self.lhs_value, self.rhs_value
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dangling: Vec<DanglingReference>,
    pub violations: Vec<EquationViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.dangling.is_empty() && self.violations.is_empty()
    }
}

/// Checks every schema equation on every row of its source table.
pub fn validate_instance(inst: &Instance) -> ValidationReport {
    let s = inst.schema();
    let mut violations = Vec::new();
    for (i, eq) in s.equations().iter().enumerate() {
        let o = eq.lhs.source();
        for x in 0..inst.row_count(o) {
            let l = inst.follow(x, eq.lhs.steps());
            let r = inst.follow(x, eq.rhs.steps());
            if l != r {
                let t = eq.lhs.target();
                violations.push(EquationViolation {
                    equation: i,
                    lhs: s.render_path(&eq.lhs),
                    rhs: s.render_path(&eq.rhs),
                    object: s.object_name(o).to_string(),
                    row: inst.rows(o)[x].clone(),
                    lhs_value: inst.rows(t)[l].clone(),
                    rhs_value: inst.rows(t)[r].clone(),
                });
            }
        }
    }
    ValidationReport {
        dangling: Vec::new(),
        violations,
    }
}
