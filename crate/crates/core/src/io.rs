//! Instances on disk: one `<Object>.csv` per table, header `id,<gen>...`
//! with generators in declaration order.

use std::fs;
use std::path::Path as FsPath;
use std::sync::Arc;

use crate::cat::Schema;
use crate::error::{Error, Result};
use crate::instance::{Instance, RawInstance};

fn header(s: &Schema, o: crate::cat::ObjId) -> Vec<String> {
    std::iter::once("id".to_string())
        .chain(s.outgoing(o).iter().map(|&g| s.generator(g).name.clone()))
        .collect()
}

/// Reads every table of `schema` from `dir` without resolving references.
pub fn read_raw_dir(schema: Arc<Schema>, dir: &FsPath) -> Result<RawInstance> {
    let mut tables = Vec::new();
    for o in schema.object_ids() {
        let name = schema.object_name(o);
        let file = dir.join(format!("{name}.csv"));
        if !file.is_file() {
            return Err(Error::Load(format!("missing table file `{}`", file.display())));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(&file)?;
        let got: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let want = header(&schema, o);
        if got != want {
            return Err(Error::Load(format!(
                "`{}`: header is `{}`, expected `{}`",
                file.display(),
                got.join(","),
                want.join(",")
            )));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let mut cells = rec.iter().map(str::to_string);
            let id = cells.next().unwrap_or_default();
            if id.is_empty() {
                return Err(Error::Load(format!("`{}`: empty row ID", file.display())));
            }
            rows.push((id, cells.collect()));
        }
        tables.push(rows);
    }
    RawInstance::new(schema, tables)
}

/// Reads and resolves an instance.
pub fn read_instance_dir(schema: Arc<Schema>, dir: &FsPath) -> Result<Instance> {
    read_raw_dir(schema, dir)?.resolve()
}

/// The CSV text of one table.
pub fn table_csv(inst: &Instance, o: crate::cat::ObjId) -> Result<String> {
    let s = inst.schema();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(s, o))?;
    for x in 0..inst.row_count(o) {
        let mut rec = vec![inst.rows(o)[x].clone()];
        for &g in s.outgoing(o) {
            let t = s.generator(g).target;
            rec.push(inst.rows(t)[inst.column(g)[x]].clone());
        }
        w.write_record(rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// Writes one file per table, creating `dir` if needed.
pub fn write_instance_dir(inst: &Instance, dir: &FsPath) -> Result<()> {
    fs::create_dir_all(dir)?;
    for o in inst.schema().object_ids() {
        let name = inst.schema().object_name(o);
        fs::write(dir.join(format!("{name}.csv")), table_csv(inst, o)?)?;
    }
    Ok(())
}
