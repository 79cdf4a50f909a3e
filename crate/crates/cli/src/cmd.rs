//! Command implementations. Each returns an [`Outcome`] instead of printing,
//! so the same code drives the binary and the tests.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use catlift::cat::{Schema, SchemaMorphism};
use catlift::fibration::{format_triple, grothendieck_triples};
use catlift::instance::Instance;
use catlift::io::{read_instance_dir, read_raw_dir, table_csv, write_instance_dir};
use catlift::migration::{delta, pi, sigma, MigrationMode};
use catlift::pattern::plan_pattern;
use catlift::query::{gamma_strict, orbit_quotient, run_query_with, Query, ResultSet};
use catlift::solver::{check_constraint_set, ConstraintVerdict, SolveOptions};
use catlift::{Error, Result};
use serde_json::{json, Value};

use crate::dsl::ast::{Document, Item};
use crate::dsl::elab::{self, Env};
use crate::dsl::parse_document;

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
    /// N-Triples; only meaningful for `triples`.
    Text,
}

/// Inputs shared by every command.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub schemas: Vec<PathBuf>,
    pub instance: Option<PathBuf>,
    /// Selects the instance's schema; defaults to the first one declared.
    pub schema_name: Option<String>,
    pub bound: usize,
    pub format: Format,
    pub workers: usize,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            schemas: Vec::new(),
            instance: None,
            schema_name: None,
            bound: catlift::DEFAULT_BOUND,
            format: Format::Json,
            workers: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNBOUNDED: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Unbounded(_) => EXIT_UNBOUNDED,
        _ => EXIT_INPUT,
    }
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn from_result(r: Result<Outcome>) -> Outcome {
        r.unwrap_or_else(|e| Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        })
    }
}

fn read_doc(path: &Path) -> Result<Document> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        e => e,
    })
}

fn read_docs(paths: &[PathBuf]) -> Result<Document> {
    let mut d = Document::default();
    for p in paths {
        d.extend(read_doc(p)?);
    }
    Ok(d)
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

impl Workspace {
    fn env(&self, extra: &Document) -> Result<Env> {
        let mut d = read_docs(&self.schemas)?;
        d.items.extend(extra.items.iter().filter(|i| matches!(i, Item::Schema(_))).cloned());
        Env::from_document(&d)
    }

    fn instance_schema(&self, env: &Env) -> Result<Arc<Schema>> {
        match &self.schema_name {
            Some(n) => env.schema(n),
            None => env.primary(),
        }
    }

    fn instance_dir(&self) -> Result<&Path> {
        self.instance
            .as_deref()
            .ok_or_else(|| Error::Invalid("an instance directory (-i) is required".into()))
    }

    fn load(&self, env: &Env) -> Result<Instance> {
        read_instance_dir(self.instance_schema(env)?, self.instance_dir()?)
    }

    fn opts(&self) -> SolveOptions {
        SolveOptions {
            workers: self.workers.max(1),
        }
    }
}

pub fn validate(ws: &Workspace) -> Outcome {
    Outcome::from_result((|| {
        let env = ws.env(&Document::default())?;
        let raw = read_raw_dir(ws.instance_schema(&env)?, ws.instance_dir()?)?;
        let report = raw.validate();
        let code = if report.is_valid() { EXIT_OK } else { EXIT_VIOLATED };
        let mut v = serde_json::to_value(&report).expect("report serialises");
        v["valid"] = json!(report.is_valid());
        Ok(Outcome::ok(code, json_text(&v)))
    })())
}

pub fn triples(ws: &Workspace) -> Outcome {
    Outcome::from_result((|| {
        let env = ws.env(&Document::default())?;
        let inst = ws.load(&env)?;
        let s = inst.schema();
        let mut out = String::new();
        if ws.format == Format::Csv {
            out.push_str("subject_table,subject,predicate,object_table,object\n");
        }
        for t in grothendieck_triples(&inst) {
            let line = match ws.format {
                Format::Json => {
                    let (st, sid) = inst.describe(t.subject);
                    let (ot, oid) = inst.describe(t.object);
                    serde_json::to_string(&json!({
                        "subject": [st, sid],
                        "predicate": s.generator(t.generator).name,
                        "object": [ot, oid],
                    }))
                    .expect("json values serialise")
                }
                Format::Csv => {
                    let (st, sid) = inst.describe(t.subject);
                    let (ot, oid) = inst.describe(t.object);
                    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b' ')).from_writer(Vec::new());
                    w.write_record([st.as_str(), sid.as_str(), s.generator(t.generator).name.as_str(), ot.as_str(), oid.as_str()])?;
                    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                    String::from_utf8_lossy(&bytes).trim_end().to_string()
                }
                Format::Text => format_triple(&inst, &t),
            };
            out.push_str(&line);
            out.push('\n');
        }
        Ok(Outcome::ok(EXIT_OK, out))
    })())
}

/// Options specific to `query`.
#[derive(Clone, Debug, Default)]
pub struct QueryArgs {
    pub files: Vec<PathBuf>,
    /// Which query to run; the first `query` block by default.
    pub name: Option<String>,
    /// Strict morphism into another query: its image is removed.
    pub dedup_by: Option<String>,
    /// Strict automorphism: one representative per orbit is kept.
    pub orbits: Option<String>,
    pub expect_some: bool,
}

fn render(rs: &ResultSet, q: &Query, inst: &Instance, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(json_text(&rs.to_json(q, inst))),
        Format::Csv | Format::Text => rs.to_csv(q, inst),
    }
}

pub fn query(ws: &Workspace, qa: &QueryArgs) -> Outcome {
    Outcome::from_result((|| {
        let doc = read_docs(&qa.files)?;
        let env = ws.env(&doc)?;
        let inst = ws.load(&env)?;
        let mut queries = BTreeMap::new();
        for qd in doc.queries() {
            queries.insert(qd.name.clone(), elab::query(qd, &env, &inst, ws.bound)?);
        }
        let main = match &qa.name {
            Some(n) => n.clone(),
            None => doc
                .queries()
                .find(|q| !q.probe)
                .or_else(|| doc.queries().next())
                .map(|q| q.name.clone())
                .ok_or_else(|| Error::Invalid("no query declared".into()))?,
        };
        let q = queries.get(&main).ok_or_else(|| Error::Unknown {
            kind: "query",
            name: main.clone(),
        })?;
        let strict = |name: &str| -> Result<(SchemaMorphism, String)> {
            let d = doc.stricts().find(|s| s.name == name).ok_or_else(|| Error::Unknown {
                kind: "strict morphism",
                name: name.into(),
            })?;
            if d.source != main {
                return Err(Error::typing(format!("`{name}` does not start at `{main}`")));
            }
            Ok((elab::strict(d, &queries, ws.bound)?, d.target.clone()))
        };
        let opts = ws.opts();
        let mut lifts = run_query_with(q, &inst, &opts)?.lifts;
        if let Some(f) = &qa.dedup_by {
            let (f, target) = strict(f)?;
            let q2 = &queries[&target];
            let image: HashSet<_> =
                gamma_strict(&f, &q.n, &q2.n, &run_query_with(q2, &inst, &opts)?.lifts, ws.bound)?
                    .into_iter()
                    .collect();
            lifts.retain(|l| !image.contains(l));
        }
        if let Some(s) = &qa.orbits {
            let (s, target) = strict(s)?;
            if target != main {
                return Err(Error::typing("an orbit map must be an endomorphism"));
            }
            let orbits = orbit_quotient(&s, &q.n, &lifts, ws.bound)?;
            lifts = orbits.iter().map(|o| lifts[o[0]].clone()).collect();
        }
        let projected = lifts
            .iter()
            .map(|l| match &q.select {
                Some(sel) => l.precompose(sel).rows().to_vec(),
                None => l.rows().to_vec(),
            })
            .collect();
        let rs = ResultSet { lifts, projected };
        let code = if qa.expect_some && rs.lifts.is_empty() {
            EXIT_VIOLATED
        } else {
            EXIT_OK
        };
        Ok(Outcome::ok(code, render(&rs, q, &inst, ws.format)?))
    })())
}

pub fn check(ws: &Workspace, files: &[PathBuf]) -> Outcome {
    Outcome::from_result((|| {
        let doc = read_docs(files)?;
        let env = ws.env(&doc)?;
        let inst = ws.load(&env)?;
        let s = inst.schema().clone();
        let mut reports = Vec::new();
        let mut violated = false;
        for cd in doc.constraints() {
            let set = elab::constraint(cd, &s, ws.bound)?;
            let report = check_constraint_set(&inst, &set)?;
            let mut entry = json!({
                "constraint": elab::constraint_label(cd),
                "status": if report.is_satisfied() { "satisfied" } else { "violated" },
            });
            let failing = set.constraints.iter().zip(&report.verdicts).find_map(|(c, (_, v))| match v {
                ConstraintVerdict::Violated { binding } => Some((c, binding)),
                ConstraintVerdict::Satisfied => None,
            });
            if let Some((c, binding)) = failing {
                violated = true;
                let w = c.w();
                let witness: serde_json::Map<String, Value> = w
                    .object_ids()
                    .map(|o| {
                        let (t, id) = inst.describe(binding[o.0]);
                        (w.object_name(o).to_string(), json!([t, id]))
                    })
                    .collect();
                entry["member"] = json!(c.name);
                entry["witness"] = Value::Object(witness);
            }
            reports.push(entry);
        }
        let code = if violated { EXIT_VIOLATED } else { EXIT_OK };
        Ok(Outcome::ok(code, json_text(&Value::Array(reports))))
    })())
}

/// Options specific to `migrate`.
#[derive(Clone, Debug)]
pub struct MigrateArgs {
    pub functor: PathBuf,
    pub name: Option<String>,
    pub mode: MigrationMode,
    pub out: Option<PathBuf>,
}

fn instance_text(inst: &Instance, format: Format) -> Result<String> {
    let s = inst.schema();
    match format {
        Format::Json => {
            let tables: serde_json::Map<String, Value> = s
                .object_ids()
                .map(|o| {
                    let rows: Vec<Value> = (0..inst.row_count(o))
                        .map(|x| {
                            let mut row = serde_json::Map::new();
                            row.insert("id".into(), json!(inst.rows(o)[x]));
                            for &g in s.outgoing(o) {
                                let t = s.generator(g).target;
                                row.insert(
                                    s.generator(g).name.clone(),
                                    json!(inst.rows(t)[inst.column(g)[x]]),
                                );
                            }
                            Value::Object(row)
                        })
                        .collect();
                    (s.object_name(o).to_string(), Value::Array(rows))
                })
                .collect();
            Ok(json_text(&Value::Object(tables)))
        }
        Format::Csv | Format::Text => {
            let mut out = String::new();
            for o in s.object_ids() {
                out.push_str(&format!("# {}.csv\n", s.object_name(o)));
                out.push_str(&table_csv(inst, o)?);
            }
            Ok(out)
        }
    }
}

pub fn migrate(ws: &Workspace, ma: &MigrateArgs) -> Outcome {
    Outcome::from_result((|| {
        let doc = read_doc(&ma.functor)?;
        let env = ws.env(&doc)?;
        let fd = match &ma.name {
            Some(n) => doc.functors().find(|f| &f.name == n),
            None => doc.functors().next(),
        }
        .ok_or_else(|| Error::Invalid("no matching functor declared".into()))?;
        let f = env.functor(fd, ws.bound)?;
        let input_schema = match ma.mode {
            MigrationMode::Delta => f.codomain().clone(),
            MigrationMode::Sigma | MigrationMode::Pi => f.domain().clone(),
        };
        let inst = read_instance_dir(input_schema, ws.instance_dir()?)?;
        let out = match ma.mode {
            MigrationMode::Delta => delta(&f, &inst)?,
            MigrationMode::Sigma => sigma(&f, &inst, ws.bound)?,
            MigrationMode::Pi => pi(&f, &inst, ws.bound)?,
        };
        match &ma.out {
            Some(dir) => {
                write_instance_dir(&out, dir)?;
                Ok(Outcome::ok(EXIT_OK, String::new()))
            }
            None => Ok(Outcome::ok(EXIT_OK, instance_text(&out, ws.format)?)),
        }
    })())
}

pub fn pattern(ws: &Workspace, files: &[PathBuf], expect_some: bool) -> Outcome {
    Outcome::from_result((|| {
        let doc = read_docs(files)?;
        let env = ws.env(&doc)?;
        let inst = ws.load(&env)?;
        let (gp, typing) = elab::pattern(&doc);
        let plan = plan_pattern(&gp, &inst, &typing)?;
        let answers = plan.run(&ws.opts())?;
        let text = match ws.format {
            Format::Json => json_text(&plan.to_json(&answers)),
            Format::Csv | Format::Text => {
                let mut out = String::new();
                if let Some(q) = plan.queries.first() {
                    out.push_str(&q.r().objects().join(","));
                    out.push('\n');
                }
                for (_, l) in &answers {
                    let ids: Vec<&str> = l.rows().iter().map(|&r| plan.instance.row_id(r)).collect();
                    out.push_str(&ids.join(","));
                    out.push('\n');
                }
                out
            }
        };
        let code = if expect_some && answers.is_empty() {
            EXIT_VIOLATED
        } else {
            EXIT_OK
        };
        Ok(Outcome::ok(code, text))
    })())
}
