use std::fs;
use std::path::{Path, PathBuf};

use catlift::migration::MigrationMode;
use catlift_cli::cmd::{
    check, migrate, pattern, query, triples, validate, Format, MigrateArgs, QueryArgs, Workspace,
    EXIT_INPUT, EXIT_OK, EXIT_UNBOUNDED, EXIT_VIOLATED,
};
use catlift_cli::dsl::{parse_document, print_document};
use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn ws(schema: &str, data: &str) -> Workspace {
    Workspace {
        schemas: vec![fixture(schema)],
        instance: Some(fixture(data)),
        ..Workspace::default()
    }
}

fn json(out: &str) -> Value {
    serde_json::from_str(out).unwrap()
}

fn dsl_files() -> Vec<PathBuf> {
    let mut out = Vec::new();
    for dir in fs::read_dir(fixture("")).unwrap() {
        for f in fs::read_dir(dir.unwrap().path()).unwrap() {
            let p = f.unwrap().path();
            if p.is_file() && p.extension().is_some_and(|e| e != "csv") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn every_fixture_survives_print_and_reparse() {
    let files = dsl_files();
    assert!(files.len() >= 15);
    for p in files {
        let doc = parse_document(&fs::read_to_string(&p).unwrap()).unwrap();
        let printed = print_document(&doc);
        let again = parse_document(&printed).unwrap_or_else(|e| panic!("{}: {e}\n{printed}", p.display()));
        assert_eq!(again, doc, "{}", p.display());
        assert_eq!(print_document(&again), printed);
    }
}

#[test]
fn validate_reports_the_tampered_row() {
    let ok = validate(&ws("emp/emp.schema", "emp/data"));
    assert_eq!(ok.code, EXIT_OK);
    assert_eq!(json(&ok.stdout)["valid"], true);
    let bad = validate(&ws("emp/emp.schema", "emp/tampered"));
    assert_eq!(bad.code, EXIT_VIOLATED);
    let v = json(&bad.stdout);
    assert_eq!(v["violations"][0]["row"], "101");
    assert_eq!(validate(&ws("emp/emp.schema", "emp/empty")).code, EXIT_OK);
}

#[test]
fn validate_rejects_missing_input() {
    let out = validate(&ws("emp/emp.schema", "emp/nowhere"));
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.starts_with("error:"));
    let mut w = ws("emp/emp.schema", "emp/data");
    w.instance = None;
    assert_eq!(validate(&w).code, EXIT_INPUT);
}

#[test]
fn triples_in_three_formats() {
    let mut w = ws("emp/emp.schema", "emp/data");
    w.format = Format::Text;
    let text = triples(&w);
    assert_eq!(text.code, EXIT_OK);
    assert_eq!(text.stdout.lines().count(), 16);
    assert!(text.stdout.lines().any(|l| l == "<(Employee,101)> <first> <(FNString,David)> ."));
    w.format = Format::Csv;
    let csv = triples(&w).stdout;
    assert_eq!(csv.lines().count(), 17);
    w.format = Format::Json;
    let lines = triples(&w).stdout;
    assert_eq!(lines.lines().map(json).filter(|v| v["predicate"].is_string()).count(), 16);
}

fn ln_query(name: Option<&str>) -> QueryArgs {
    QueryArgs {
        files: vec![fixture("ln/ln.query")],
        name: name.map(str::to_string),
        ..QueryArgs::default()
    }
}

#[test]
fn same_last_name_query() {
    let w = ws("ln/ln.schema", "ln/data");
    let all = query(&w, &ln_query(Some("same")));
    assert_eq!(all.code, EXIT_OK);
    assert_eq!(json(&all.stdout).as_array().unwrap().len(), 5);
    let mut qa = ln_query(Some("same"));
    qa.dedup_by = Some("diag".into());
    assert_eq!(json(&query(&w, &qa).stdout).as_array().unwrap().len(), 2);
    qa.orbits = Some("swap".into());
    assert_eq!(json(&query(&w, &qa).stdout).as_array().unwrap().len(), 1);
    let pinned = query(&w, &ln_query(Some("with_x137")));
    assert_eq!(json(&pinned.stdout).as_array().unwrap().len(), 2);
}

#[test]
fn query_edge_cases() {
    let mut w = ws("ln/ln.schema", "ln/data");
    let nothing = query(&w, &ln_query(Some("nothing")));
    assert_eq!(nothing.code, EXIT_OK);
    assert_eq!(json(&nothing.stdout), serde_json::json!([{}]));
    let unknown = query(&w, &ln_query(Some("missing")));
    assert_eq!(unknown.code, EXIT_INPUT);
    assert!(unknown.stderr.contains("missing"));
    w.format = Format::Csv;
    let first = query(&w, &ln_query(Some("first")));
    assert_eq!(first.code, EXIT_OK);
    assert!(first.stdout.lines().count() >= 2);
    let mut qa = ln_query(Some("same"));
    qa.orbits = Some("diag".into());
    assert_eq!(query(&w, &qa).code, EXIT_INPUT);
}

#[test]
fn expect_some_on_an_empty_instance() {
    let dir = tempfile::tempdir().unwrap();
    let staff = dir.path().join("staff.query");
    let text = fs::read_to_string(fixture("emp/queries.query")).unwrap();
    fs::write(&staff, text.split("# Employees of").next().unwrap()).unwrap();
    let w = ws("emp/emp.schema", "emp/empty");
    let qa = QueryArgs {
        files: vec![staff],
        expect_some: true,
        ..QueryArgs::default()
    };
    let out = query(&w, &qa);
    assert_eq!(out.code, EXIT_VIOLATED);
    assert_eq!(json(&out.stdout), serde_json::json!([]));
}

fn checked(schema: &str, data: &str, constraints: &str) -> (i32, Value) {
    let out = check(&ws(schema, data), &[fixture(constraints)]);
    (out.code, json(&out.stdout))
}

#[test]
fn emp_constraints_report_witnesses() {
    let (code, v) = checked("emp/emp.schema", "emp/data", "emp/emp.constraints");
    assert_eq!(code, EXIT_VIOLATED);
    assert_eq!(v[0]["constraint"], "surjective(secretary)");
    assert_eq!(v[0]["witness"]["b"], serde_json::json!(["Employee", "103"]));
    assert_eq!(v[1]["status"], "violated");
    assert_eq!(v[1]["witness"]["a1"][1], "101");
    assert_eq!(v[1]["witness"]["a2"][1], "103");
    assert_eq!(v[2]["status"], "satisfied");
}

#[test]
fn constraint_fixtures_give_their_verdicts() {
    let cases = [
        ("dds/dds.schema", "dds/data", "dds/forest.constraints", EXIT_OK),
        ("product/product.schema", "product/data", "product/product.constraints", EXIT_OK),
        ("product/product.schema", "product/impostor", "product/product.constraints", EXIT_VIOLATED),
        ("relation/relation.schema", "relation/open", "relation/transitive.constraints", EXIT_VIOLATED),
        ("relation/relation.schema", "relation/closed", "relation/transitive.constraints", EXIT_OK),
        ("cardinality/one.schema", "cardinality/one_row", "cardinality/exactly_one.constraints", EXIT_OK),
        ("cardinality/one.schema", "cardinality/two_rows", "cardinality/exactly_one.constraints", EXIT_VIOLATED),
    ];
    for (s, d, c, want) in cases {
        assert_eq!(checked(s, d, c).0, want, "{d}");
    }
}

fn migrate_args(functor: &str, mode: MigrationMode, out: Option<PathBuf>) -> MigrateArgs {
    MigrateArgs {
        functor: fixture(functor),
        name: None,
        mode,
        out,
    }
}

#[test]
fn delta_along_identity_rewrites_the_same_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = ws("emp/emp.schema", "emp/data");
    let out = migrate(&w, &migrate_args("emp/identity.functor", MigrationMode::Delta, Some(dir.path().into())));
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    for f in fs::read_dir(fixture("emp/data")).unwrap() {
        let p = f.unwrap().path();
        let name = p.file_name().unwrap();
        assert_eq!(fs::read(&p).unwrap(), fs::read(dir.path().join(name)).unwrap());
    }
}

#[test]
fn delta_along_pick_keeps_employees() {
    let w = ws("emp/emp.schema", "emp/data");
    let out = migrate(&w, &migrate_args("emp/pick.functor", MigrationMode::Delta, None));
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out.stdout);
    let ids: Vec<&str> = v["X"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["101", "102", "103"]);
}

#[test]
fn pushforward_along_emp_identity_is_unbounded() {
    let w = ws("emp/emp.schema", "emp/data");
    for mode in [MigrationMode::Sigma, MigrationMode::Pi] {
        let out = migrate(&w, &migrate_args("emp/identity.functor", mode, None));
        assert_eq!(out.code, EXIT_UNBOUNDED);
    }
}

#[test]
fn bob_and_sue_have_one_answer() {
    let w = ws("bobsue/bobsue.schema", "bobsue/data");
    let out = pattern(&w, &[fixture("bobsue/bobsue.pattern")], true);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out.stdout);
    let answers = v.as_array().unwrap();
    assert_eq!(answers.len(), 1);
    assert_eq!(answers[0]["?bobLast"], answers[0]["?sueLast"]);
}

#[test]
fn predicate_variables_range_over_edges() {
    let w = ws("social/social.schema", "social/data");
    let out = pattern(&w, &[fixture("social/john_mary.pattern")], true);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("John:friend:Mary"));
}

#[test]
fn pattern_failures_have_distinct_codes() {
    let dir = tempfile::tempdir().unwrap();
    let none = dir.path().join("none.pattern");
    fs::write(&none, "(John ?x John)\ntypes { John -> Person }\n").unwrap();
    let w = ws("social/social.schema", "social/data");
    assert_eq!(pattern(&w, std::slice::from_ref(&none), true).code, EXIT_VIOLATED);
    assert_eq!(pattern(&w, &[none], false).code, EXIT_OK);
    let broken = dir.path().join("broken.pattern");
    fs::write(&broken, "(John ?x\n").unwrap();
    let out = pattern(&w, &[broken], false);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("line"));
}
