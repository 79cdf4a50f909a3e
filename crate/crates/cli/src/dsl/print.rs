//! Canonical text for [`Document`]s; parsing the output gives back the tree.

use std::fmt::Write;

use catlift::pattern::{Predicate, Term, TriplePattern};

use super::ast::*;
use super::lex::quote;
use super::parse::STMT_KEYWORDS;

fn name(s: &str) -> String {
    if STMT_KEYWORDS.contains(&s) || s.starts_with('?') {
        format!("\"{s}\"")
    } else {
        quote(s)
    }
}

fn path(steps: &[String]) -> String {
    let inner: Vec<String> = steps.iter().map(|s| name(s)).collect();
    format!("[{}]", inner.join(" "))
}

fn term(t: &Term) -> String {
    match t {
        Term::Var(v) => format!("?{v}"),
        Term::Const(c) => name(c),
    }
}

fn schema_stmt(out: &mut String, indent: &str, s: &SchemaStmt) {
    match s {
        SchemaStmt::Objects(names) => {
            let names: Vec<String> = names.iter().map(|n| name(n)).collect();
            let _ = writeln!(out, "{indent}objects {} ;", names.join(" "));
        }
        SchemaStmt::Arrow {
            name: n,
            source,
            target,
        } => {
            let _ = writeln!(out, "{indent}arrow {} : {} -> {} ;", name(n), name(source), name(target));
        }
        SchemaStmt::Eq { source, lhs, rhs } => {
            let _ = writeln!(out, "{indent}eq {} {} = {} ;", name(source), path(lhs), path(rhs));
        }
    }
}

fn schema_body(out: &mut String, indent: &str, b: &SchemaBody) {
    for s in &b.stmts {
        schema_stmt(out, indent, s);
    }
}

fn map_stmt(out: &mut String, indent: &str, kw: (&str, &str), m: &MapStmt) {
    match m {
        MapStmt::Object(a, b) => {
            let _ = writeln!(out, "{indent}{} {} -> {} ;", kw.0, name(a), name(b));
        }
        MapStmt::Arrow(g, p) => {
            let _ = writeln!(out, "{indent}{} {} -> {} ;", kw.1, name(g), path(p));
        }
    }
}

fn maps(out: &mut String, indent: &str, kw: (&str, &str), ms: &[MapStmt]) {
    for m in ms {
        map_stmt(out, indent, kw, m);
    }
}

fn functor(out: &mut String, kw: &str, f: &FunctorDecl) {
    let _ = writeln!(
        out,
        "{kw} {} : {} -> {} {{",
        name(&f.name),
        name(&f.source),
        name(&f.target)
    );
    maps(out, "  ", ("object", "arrow"), &f.maps);
    out.push_str("}\n");
}

pub fn print_triple(t: &TriplePattern) -> String {
    let p = match &t.predicate {
        Predicate::Name(n) => name(n),
        Predicate::Path(ps) => path(ps),
        Predicate::Var(v) => format!("?{v}"),
    };
    format!("({} {} {})", term(&t.subject), p, term(&t.object))
}

pub fn print_document(d: &Document) -> String {
    let mut out = String::new();
    for (i, item) in d.items.iter().enumerate() {
        let block = !matches!(item, Item::Triple(_) | Item::Constraint(ConstraintDecl::Builtin { .. }));
        if i > 0 && block {
            out.push('\n');
        }
        match item {
            Item::Schema(s) => {
                let _ = writeln!(out, "schema {} {{", name(&s.name));
                schema_body(&mut out, "  ", &s.body);
                out.push_str("}\n");
            }
            Item::Functor(f) => functor(&mut out, "functor", f),
            Item::Strict(f) => functor(&mut out, "strict", f),
            Item::Query(q) => {
                let kw = if q.probe { "probe" } else { "query" };
                let _ = writeln!(out, "{kw} {} on {} {{", name(&q.name), name(&q.on));
                out.push_str("  result {\n");
                schema_body(&mut out, "    ", &q.result);
                out.push_str("  }\n  onto {\n");
                maps(&mut out, "    ", ("object", "arrow"), &q.onto);
                out.push_str("  }\n");
                if let Some(w) = &q.where_ {
                    out.push_str("  where {\n");
                    schema_body(&mut out, "    ", &w.shape);
                    maps(&mut out, "    ", ("embed", "embed"), &w.embeds);
                    for b in &w.binds {
                        let _ = writeln!(
                            out,
                            "    bind {} -> ({}, {}) ;",
                            name(&b.var),
                            name(&b.table),
                            name(&b.row)
                        );
                    }
                    out.push_str("  }\n");
                }
                if let Some(s) = &q.select {
                    out.push_str("  select {\n");
                    schema_body(&mut out, "    ", &s.shape);
                    maps(&mut out, "    ", ("map", "map"), &s.maps);
                    out.push_str("  }\n");
                }
                out.push_str("}\n");
            }
            Item::Constraint(ConstraintDecl::Builtin { unique, kind, args }) => {
                let args: Vec<String> = args.iter().map(|a| name(a)).collect();
                let u = if *unique { "unique " } else { "" };
                let _ = writeln!(out, "constraint {u}{}({})", name(kind), args.join(", "));
            }
            Item::Constraint(ConstraintDecl::Lifting {
                unique,
                name: n,
                w,
                r,
                m,
                n: nm,
            }) => {
                let u = if *unique { "unique " } else { "" };
                let label = n.as_deref().map(|s| format!("{} ", name(s))).unwrap_or_default();
                let _ = writeln!(out, "constraint {u}lifting {label}{{");
                out.push_str("  W {\n");
                schema_body(&mut out, "    ", w);
                out.push_str("  }\n  R {\n");
                schema_body(&mut out, "    ", r);
                out.push_str("  }\n  m {\n");
                maps(&mut out, "    ", ("object", "arrow"), m);
                out.push_str("  }\n  n {\n");
                maps(&mut out, "    ", ("object", "arrow"), nm);
                out.push_str("  }\n}\n");
            }
            Item::Triple(t) => {
                out.push_str(&print_triple(t));
                out.push('\n');
            }
            Item::Types(ts) => {
                out.push_str("types {\n");
                for (t, o) in ts {
                    let _ = writeln!(out, "  {} -> {} ;", term(t), name(o));
                }
                out.push_str("}\n");
            }
            Item::Labels(ls) => {
                out.push_str("labels {\n");
                for (o, g) in ls {
                    let _ = writeln!(out, "  {} -> {} ;", name(o), name(g));
                }
                out.push_str("}\n");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse_document;
    use super::*;

    #[test]
    fn round_trip_mixed_document() {
        let src = r#"
            schema S { objects A B "map" ; arrow f : A -> B ; eq A [f] = [f] }
            functor F : S -> S { object A -> A ; object B -> B ; object map -> map ; arrow f -> [f] }
            query Q on S {
              result { objects X }
              onto { object X -> A }
              where { objects x ; embed x -> X ; bind x -> (A, "row 1") }
              select { objects c ; map c -> X }
            }
            probe P on S { result { objects X } onto { object X -> B } }
            strict s : Q -> Q { object X -> X }
            constraint unique nonempty(A)
            constraint lifting L { W { } R { objects A } m { } n { object A -> A } }
            (?x [f] "?lit")
            types { ?x -> A ; "?lit" -> B }
            labels { B -> name }
        "#;
        let d = parse_document(src).unwrap();
        let printed = print_document(&d);
        assert_eq!(parse_document(&printed).unwrap(), d);
        assert_eq!(print_document(&parse_document(&printed).unwrap()), printed);
    }
}
