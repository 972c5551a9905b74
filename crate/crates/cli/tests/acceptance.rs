//! One test per acceptance criterion; each prints its PASS/FAIL line.

use ordlam_cli::suite::{criterion, DEFAULT_SEED};

fn check(id: usize) {
    let o = criterion(id).run(DEFAULT_SEED);
    println!("{o}");
    assert!(o.pass, "{o} (took {:?}, limit {:?})", o.elapsed, o.limit);
}

#[test]
fn c01_theta_cycle() {
    check(1);
}

#[test]
fn c02_theta_family() {
    check(2);
}

#[test]
fn c03_pi_axioms() {
    check(3);
}

#[test]
fn c04_church_rosser() {
    check(4);
}

#[test]
fn c05_factorization() {
    check(5);
}

#[test]
fn c06_normal_forms() {
    check(6);
}

#[test]
fn c07_zero_sweep() {
    check(7);
}

#[test]
fn c08_malcev_sweep() {
    check(8);
}

#[test]
fn c09_separation() {
    check(9);
}

#[test]
fn c10_gamma_t2() {
    check(10);
}

#[test]
fn c11_jk_audit() {
    check(11);
}

#[test]
fn c12_plotkin_simpson() {
    check(12);
}
