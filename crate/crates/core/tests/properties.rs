mod common;

const CASES: u32 = 256;

fn check(name: &str) {
    if let Err(e) = common::run_property(name, CASES) {
        panic!("{name}: {e}");
    }
}

#[test]
fn ring_laws() {
    check("ring laws");
}

#[test]
fn truncation_closure() {
    check("truncation closure");
}

#[test]
fn pochhammer_inverse() {
    check("pochhammer inverse");
}

#[test]
fn enumeration_order_independence() {
    check("enumeration order independence");
}

#[test]
fn modular_vs_exact_rank() {
    check("modular vs exact rank");
}
