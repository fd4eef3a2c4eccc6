//! One test per acceptance criterion. Each prints a `PASS`/`FAIL` line for the criterion and
//! one line per invariant row, then asserts that every row passed.
//!
//! Lines go straight to the stderr handle so they show up without `--nocapture`.

use std::io::Write;

use nageo::report::Report;
use nageo::suite;
use nageo_criteria::{Criterion, SEED};

fn check(id: usize, title: &'static str, reports: Vec<Report>) {
    let c = Criterion::new(id, title, reports);
    let text = c.lines().join("\n") + "\n";
    let _ = std::io::stderr().lock().write_all(text.as_bytes());
    assert!(c.passed(), "criterion {id} failed rows:\n{}", c.failures());
}

#[test]
fn criterion_1_norm_space() {
    check(1, "norm space", vec![suite::norms(SEED)]);
}

#[test]
fn criterion_2_geodesics() {
    check(2, "norm geodesics", vec![suite::geodesics(SEED)]);
}

#[test]
fn criterion_3_graded() {
    check(3, "graded norms", vec![suite::graded(SEED)]);
}

#[test]
fn criterion_4_quantization() {
    check(4, "quantization", vec![suite::quantization(SEED)]);
}

#[test]
fn criterion_5_kiselman() {
    check(5, "Kiselman duality", vec![suite::kiselman(SEED)]);
}

#[test]
fn criterion_6_maximal_segments() {
    check(6, "maximal segments", vec![suite::theorem_b(SEED)]);
}

#[test]
fn criterion_7_negative_controls() {
    check(7, "negative controls", vec![suite::negative(SEED)]);
}
