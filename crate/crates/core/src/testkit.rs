//! Small fixtures shared by unit tests.

use std::sync::Arc;

use crate::cat::{Schema, SchemaMorphism};
use crate::instance::Instance;

pub fn emp_schema() -> Arc<Schema> {
    Arc::new(
        Schema::builder("EMP")
            .objects(["Employee", "Department", "FNString", "LNString", "DNString"])
            .arrow("first", "Employee", "FNString")
            .arrow("last", "Employee", "LNString")
            .arrow("manager", "Employee", "Employee")
            .arrow("worksIn", "Employee", "Department")
            .arrow("name", "Department", "DNString")
            .arrow("secretary", "Department", "Employee")
            .equation("Employee", &["manager", "worksIn"], &["worksIn"])
            .equation("Department", &["secretary", "worksIn"], &[])
            .build()
            .unwrap(),
    )
}

pub fn emp() -> Instance {
    Instance::builder(emp_schema())
        .table(
            "Employee",
            &[
                &["101", "David", "Hilbert", "103", "q10"],
                &["102", "Bertrand", "Russell", "102", "x02"],
                &["103", "Alan", "Turing", "103", "q10"],
            ],
        )
        .table("Department", &[&["q10", "Sales", "101"], &["x02", "Production", "102"]])
        .ids("FNString", &["Alan", "Alice", "Bertrand", "Carl", "David"])
        .ids("LNString", &["Arden", "Hilbert", "Jones", "Russell", "Turing"])
        .ids("DNString", &["Marketing", "Production", "Sales"])
        .build()
        .unwrap()
}

pub fn ln_schema() -> Arc<Schema> {
    Arc::new(
        Schema::builder("LN")
            .objects(["Person", "Last"])
            .arrow("last", "Person", "Last")
            .build()
            .unwrap(),
    )
}

pub fn ln() -> Instance {
    Instance::builder(ln_schema())
        .table(
            "Person",
            &[&["x137", "Smith"], &["x139", "Smith"], &["x144", "Jones"]],
        )
        .ids("Last", &["Jones", "Smith"])
        .build()
        .unwrap()
}

pub fn dds_schema() -> Arc<Schema> {
    Arc::new(
        Schema::builder("DDS")
            .object("nu")
            .arrow("p", "nu", "nu")
            .build()
            .unwrap(),
    )
}

/// `parents[i]` is the parent of node `i`; nodes are named `a`, `b`, ...
pub fn dds(parents: &[usize]) -> Instance {
    let names: Vec<String> = (0..parents.len())
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect();
    let ids = vec![names.clone()];
    Instance::new(dds_schema(), ids, vec![parents.to_vec()]).unwrap()
}

/// The ten-node system `a..j` with a fixed point at `i` and a 3-cycle `c d g`.
pub fn sample_dds() -> Instance {
    // a b c d e f g h i j -> f c d g f i c f i i
    dds(&[5, 2, 3, 6, 5, 8, 2, 5, 8, 8])
}

/// `P1 -l1-> L <-l2- P2`.
pub fn pair_shape() -> Arc<Schema> {
    Arc::new(
        Schema::builder("Pair")
            .objects(["P1", "L", "P2"])
            .arrow("l1", "P1", "L")
            .arrow("l2", "P2", "L")
            .build()
            .unwrap(),
    )
}

/// Two people with the same last name.
pub fn same_last() -> SchemaMorphism {
    SchemaMorphism::from_names(
        pair_shape(),
        ln_schema(),
        &[("P1", "Person"), ("L", "Last"), ("P2", "Person")],
        &[("l1", &["last"]), ("l2", &["last"])],
    )
    .unwrap()
}

/// `Person -livesAt-> Address -isIn-> City` with one row per table.
pub fn indirection() -> Instance {
    let s = Schema::builder("Where")
        .objects(["Person", "Address", "City"])
        .arrow("livesAt", "Person", "Address")
        .arrow("isIn", "Address", "City")
        .build()
        .unwrap();
    Instance::builder(Arc::new(s))
        .table("Person", &[&["p1", "addr1"]])
        .table("Address", &[&["addr1", "cambridge"]])
        .ids("City", &["cambridge"])
        .build()
        .unwrap()
}
