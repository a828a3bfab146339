//! Stored reports for `K = k(l-th root of (-1)^{deg P} P)`. Set
//! `KGENUS_UPDATE_GOLDEN=1` to rewrite them.

use std::path::PathBuf;

use kummer_genus::input::{parse_input, ParseOptions};
use kummer_genus::report::run;

fn check(name: &str, job: &str) {
    let mut config = parse_input(job, &ParseOptions::default()).unwrap();
    config.include_comparison = true;
    config.include_infinite = true;
    let json = run(&config).unwrap().to_json();
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    if std::env::var_os("KGENUS_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &json).unwrap();
        return;
    }
    let stored =
        std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(json, stored, "report for {name} changed");
}

#[test]
fn q5_square_root_of_minus_t() {
    check("q5_l2_T", "field p=5 f=1\ncomponent gamma=4 D=T m=2\n");
}

#[test]
fn q7_square_root_of_minus_t() {
    check("q7_l2_T", "field p=7 f=1\ncomponent gamma=6 D=T m=2\n");
}

#[test]
fn q13_square_root_of_minus_t() {
    check("q13_l2_T", "field p=13 f=1\ncomponent gamma=12 D=T m=2\n");
}

#[test]
fn q13_cube_root_of_minus_t() {
    check("q13_l3_T", "field p=13 f=1\ncomponent gamma=12 D=T m=3\n");
}
