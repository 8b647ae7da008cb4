//! Acceptance suite: one test per shipped guarantee, in order.
//!
//! Each numbered test is self-contained and asserts exact (rational)
//! equality — never approximate — plus the stated runtime budget where one
//! applies.  The heavyweight oracle families are built once and shared.

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use superwig::algebra::HighestWeight;
use superwig::exact::rat;
use superwig::rwc::BranchContext;
use superwig::verify::{
    build_families, check_classical_chain_values, check_first_kind_oracle_equivalence,
    check_full_coupling_orthonormality, check_nonunitary_branch, check_positivity,
    check_second_kind_oracle_equivalence, check_sum_rules, check_symmetry_constant, CheckReport,
    Families,
};

fn families() -> &'static Families {
    static FAMILIES: OnceLock<Families> = OnceLock::new();
    FAMILIES.get_or_init(|| build_families().expect("oracle family construction"))
}

fn assert_passed(report: &CheckReport) {
    assert!(
        report.passed,
        "{} failed: {}",
        report.name, report.detail
    );
}

/// ≥200 random dominant weights over shapes (1,1), (2,1), (1,2), (2,2),
/// (3,2), labels in [−5,5]: every first- and second-kind coefficient
/// family sums to exactly 1 on every branch, in under 10 seconds.
#[test]
fn criterion_1_sum_rules() {
    let start = Instant::now();
    let report = check_sum_rules(7, 5);
    let elapsed = start.elapsed();
    assert_passed(&report);
    assert!(
        report.detail.contains("weights=200"),
        "expected 200 sampled weights, got: {}",
        report.detail
    );
    assert!(
        elapsed < Duration::from_secs(10),
        "sum rules took {elapsed:?}, budget is 10s"
    );
}

/// First-kind closed forms equal the oracle's projector eigenvalues on
/// every non-degenerate λ-sector of every constituent of V^⊗k / V*^⊗k,
/// k ≤ 3, shapes (1,1), (2,1), (1,2), in under 60 seconds.
#[test]
fn criterion_2_first_kind_oracle_equivalence() {
    let fams = families();
    let start = Instant::now();
    let report = check_first_kind_oracle_equivalence(fams);
    let elapsed = start.elapsed();
    assert_passed(&report);
    assert!(
        elapsed < Duration::from_secs(60),
        "first-kind equivalence took {elapsed:?}, budget is 60s"
    );
}

/// Second-kind closed forms equal the oracle's sandwich eigenvalues on the
/// same family; the gl(1|1) anchor Λ=(1|0), λ=(0) has both u-present
/// squares exactly 1/2.
#[test]
fn criterion_3_second_kind_oracle_equivalence() {
    let report = check_second_kind_oracle_equivalence(families());
    assert_passed(&report);

    let parent = HighestWeight::from_parts(1, 1, &[1, 0]).unwrap();
    let child = HighestWeight::from_parts(1, 0, &[0]).unwrap();
    let ctx = BranchContext::new(parent, child).unwrap();
    assert_eq!(ctx.rho_bar(1, 1).unwrap(), rat(1, 2));
    assert_eq!(ctx.rho_bar(2, 1).unwrap(), rat(1, 2));
}

/// For each covariant family member the chain-evaluated coupling matrix of
/// V ⊗ V(Λ) has exact identity Gram matrix, and its squared entries equal
/// the oracle's direct couplings entry-for-entry.
#[test]
fn criterion_4_full_coupling_orthonormality() {
    let report = check_full_coupling_orthonormality(families());
    assert_passed(&report);
    assert!(
        report.detail.contains("sign_mismatches=0"),
        "expected exact sign agreement, got: {}",
        report.detail
    );
}

/// All first- and second-kind values are ≥ 0 on their matching family
/// (covariant forms on covariant members, contravariant on contravariant):
/// zero violations.
#[test]
fn criterion_5_positivity() {
    let report = check_positivity(families());
    assert_passed(&report);
    assert!(
        report.detail.contains("violations=0"),
        "expected zero violations, got: {}",
        report.detail
    );
}

/// The non-unitary branch gl(1|1), Λ=(2|0), λ=(1) evaluates without error
/// to c_1 = −1 and c_2 = 2, which still sum to exactly 1.
#[test]
fn criterion_6_nonunitary_branch() {
    assert_passed(&check_nonunitary_branch());

    let parent = HighestWeight::from_parts(1, 1, &[2, 0]).unwrap();
    let child = HighestWeight::from_parts(1, 0, &[1]).unwrap();
    let ctx = BranchContext::new(parent, child).unwrap();
    let c1 = ctx.c_unbar(1).unwrap();
    let c2 = ctx.c_unbar(2).unwrap();
    assert_eq!(c1, rat(-1, 1));
    assert_eq!(c2, rat(2, 1));
    assert_eq!(c1 + c2, rat(1, 1));
}

/// The measured raising/lowering coupling ratio is exactly constant over
/// all state labels for every family member and measurable raising index;
/// comparison reports are emitted deterministically; every classical
/// (gl(2|0), gl(3|0)) record matches at least one closed-form candidate.
#[test]
fn criterion_7_symmetry_constant() {
    let report = check_symmetry_constant(families());
    assert_passed(&report);
}

/// On the classical members the chain-evaluated couplings reproduce the
/// oracle's direct values exactly — signs included — with identical zero
/// sets.
#[test]
fn criterion_8_classical_chain_values() {
    let report = check_classical_chain_values(families());
    assert_passed(&report);
}

/// CLI contract: the three documented invocations are byte-exact, and
/// `verify all` exits 0 in under 3 minutes.
#[test]
fn criterion_9_cli_contract() {
    let bin = env!("CARGO_BIN_EXE_superwig");

    let rwc = Command::new(bin)
        .args([
            "rwc",
            "--direction",
            "covariant",
            "--m",
            "1",
            "--n",
            "1",
            "--Lambda",
            "1,0",
            "--lambda",
            "1",
            "--r",
            "1",
        ])
        .output()
        .expect("run rwc example");
    assert!(rwc.status.success(), "rwc example exited nonzero");
    assert_eq!(
        rwc.stdout, b"{\"sign\":1,\"radicand\":\"1/2\"}\n",
        "rwc example stdout differs: {:?}",
        String::from_utf8_lossy(&rwc.stdout)
    );

    let sumrules = Command::new(bin)
        .args(["verify", "sumrules", "--seed", "7", "--max-label", "5"])
        .output()
        .expect("run verify sumrules example");
    assert_eq!(
        sumrules.status.code(),
        Some(0),
        "verify sumrules exit code: {:?}, stdout: {}",
        sumrules.status.code(),
        String::from_utf8_lossy(&sumrules.stdout)
    );

    let branch = Command::new(bin)
        .args(["branch", "--m", "1", "--n", "1", "--Lambda", "1,0"])
        .output()
        .expect("run branch example");
    assert!(branch.status.success(), "branch example exited nonzero");
    assert_eq!(
        branch.stdout, b"[[0],[1]]\n",
        "branch example stdout differs: {:?}",
        String::from_utf8_lossy(&branch.stdout)
    );

    let start = Instant::now();
    let all = Command::new(bin)
        .args(["verify", "all", "--seed", "7", "--max-label", "5"])
        .output()
        .expect("run verify all");
    let elapsed = start.elapsed();
    assert_eq!(
        all.status.code(),
        Some(0),
        "verify all exit code: {:?}, stdout: {}",
        all.status.code(),
        String::from_utf8_lossy(&all.stdout)
    );
    assert!(
        elapsed < Duration::from_secs(180),
        "verify all took {elapsed:?}, budget is 3 minutes"
    );
}
