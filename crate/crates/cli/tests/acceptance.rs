//! Acceptance gate: one test per criterion, each printing its pass/fail
//! line. Run with `--nocapture` to see the lines for passing tests too.

use gmrd_cli::verify;

const SEED: u64 = 20_240_817;

fn gate(c: verify::Criterion) {
    println!("{}", c.line());
    assert!(c.pass, "{}", c.line());
}

#[test]
fn a1_closed_form_matches_numeric_oracle() {
    gate(verify::check_closed_vs_numeric());
}

#[test]
fn a2_dominance_and_high_resolution_improvement() {
    gate(verify::check_dominance_and_improvement());
}

#[test]
fn a3_activeness_plateau_and_strict_decrease() {
    gate(verify::check_activeness());
}

#[test]
fn a4_inner_outer_sandwich_and_slack_case() {
    gate(verify::check_sandwich());
}

#[test]
fn a5_inner_optimizer_vs_brute_force() {
    gate(verify::check_optimizer_soundness());
}

#[test]
fn a6_codec_statistics() {
    gate(verify::check_codec_statistics(SEED));
}

#[test]
fn a7_end_to_end_sandwich() {
    // The 0.5-bit proximity half of this criterion is not attainable with
    // the default scalar-quantizer codec (the measured rate carries the
    // scalar-vs-vector quantization overhead, the Slepian-Wolf margin, and
    // the full-entropy label stream); the check is implemented faithfully
    // and this test stays red until the codec closes that gap.
    gate(verify::check_e2e_sandwich(SEED));
}

#[test]
fn a8_snr_trends() {
    gate(verify::check_snr_trends(SEED));
}

#[test]
fn a9_csv_determinism() {
    gate(verify::check_determinism());
}
