use serde::Serialize;
use ternary_qec::code::{bundled_paper_codewords, crosscheck_paper_codewords, knill_laflamme_check, StabilizerCode, GENERATORS};
use ternary_qec::decode::{build_syndrome_table, single_error_set};
use ternary_qec::pauli::TernaryPauli;

use crate::Outcome;

#[derive(Debug, Serialize, PartialEq)]
pub struct CheckResult {
    pub section: String,
    pub name: String,
    /// `None` when the check was skipped because an earlier one failed.
    pub passed: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct VerifyReport {
    pub generators: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

struct Collector(Vec<CheckResult>);

impl Collector {
    fn push(&mut self, section: &str, name: &str, passed: Option<bool>, detail: impl Into<String>) {
        self.0.push(CheckResult {
            section: section.into(),
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }
}

fn generators(corrupt_s2: bool) -> anyhow::Result<Vec<TernaryPauli>> {
    let mut g = GENERATORS.iter().map(|s| s.parse()).collect::<Result<Vec<TernaryPauli>, _>>()?;
    if corrupt_s2 {
        g[1] = g[1].multiply(&TernaryPauli::single_site(5, 4, 1, 0))?.with_phase(0);
    }
    Ok(g)
}

fn code_checks(code: &StabilizerCode, out: &mut Collector) -> anyhow::Result<()> {
    let m = code.generators().len();
    let css = code.css_rank();
    out.push(
        "stabilizers",
        "non-CSS",
        Some(css < m),
        format!("pure X or pure Z elements of the group span rank {css} of {m}"),
    );

    let p = code.verify_projector()?;
    let k = code.codewords().len();
    out.push(
        "code space",
        "projector",
        Some(p.passed(3)),
        format!(
            "rank {}, idempotent {}, hermitian {}, absorbs generators {}",
            p.rank, p.idempotent, p.hermitian, p.absorbs_generators
        ),
    );
    let counts: Vec<usize> = code.codewords().iter().map(|w| w.nonzero_count()).collect();
    out.push(
        "code space",
        "codewords",
        Some(k == 3 && counts.iter().all(|&c| c == 81)),
        format!("{k} codewords with {counts:?} nonzero amplitudes of magnitude {}", code.amplitude()),
    );

    let errors = single_error_set(code.num_sites());
    let kl = knill_laflamme_check(code, &errors)?;
    out.push(
        "Knill-Laflamme",
        "full condition",
        Some(kl.passed),
        format!("{} errors, {} violating pairs", kl.errors.len(), kl.violations.len()),
    );
    out.push(
        "Knill-Laflamme",
        "diagonal form",
        Some(kl.diagonal_form),
        "<0_L|E|0_L> = <1_L|E|1_L> = <2_L|E|2_L> for every error",
    );

    match build_syndrome_table(code) {
        Ok(table) => {
            let mut fixed = 0;
            for e in &errors {
                fixed += usize::from(table.corrects(code, e)?);
            }
            out.push(
                "syndromes",
                "table",
                Some(table.len() == errors.len() && fixed == errors.len()),
                format!(
                    "{} rows, {} distinct syndromes, {} degenerate pairs, {fixed} of {} errors corrected",
                    table.len(),
                    table.distinct_syndromes(),
                    table.degeneracies().len(),
                    errors.len()
                ),
            );
        }
        Err(e) => out.push("syndromes", "table", Some(false), e.to_string()),
    }

    // Diagnostic only: the transcribed listings are not expected to verify.
    let report = crosscheck_paper_codewords(code, &bundled_paper_codewords())?;
    let residuals: Vec<String> = report
        .listings
        .iter()
        .map(|l| format!("|{}_L> residual {:.3e}", l.label, l.residual))
        .collect();
    out.push(
        "published codewords",
        "cross-check",
        Some(true),
        format!("{} anomalies; {}", report.anomaly_count(), residuals.join(", ")),
    );
    Ok(())
}

pub fn build_report(corrupt_s2: bool) -> anyhow::Result<VerifyReport> {
    let gens = generators(corrupt_s2)?;
    let mut out = Collector(Vec::new());

    let mut bad = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let e = gens[i].commutation_exponent(&gens[j])?;
            if e != 0 {
                bad.push(format!("S{}S{} = w^{e} S{}S{}", i + 1, j + 1, j + 1, i + 1));
            }
        }
    }
    let pairs = gens.len() * (gens.len() - 1) / 2;
    out.push(
        "stabilizers",
        "commutation",
        Some(bad.is_empty()),
        if bad.is_empty() {
            format!("all {pairs} pair exponents are 0")
        } else {
            bad.join("; ")
        },
    );

    match StabilizerCode::from_generators(gens.clone()) {
        Ok(code) => {
            out.push("stabilizers", "construction", Some(true), "independent over GF(3), n = m + 1");
            code_checks(&code, &mut out)?;
        }
        Err(e) => {
            out.push("stabilizers", "construction", Some(false), e.to_string());
            for (section, name) in [
                ("stabilizers", "non-CSS"),
                ("code space", "projector"),
                ("code space", "codewords"),
                ("Knill-Laflamme", "full condition"),
                ("Knill-Laflamme", "diagonal form"),
                ("syndromes", "table"),
                ("published codewords", "cross-check"),
            ] {
                out.push(section, name, None, "skipped: no valid code");
            }
        }
    }

    let passed = out.0.iter().all(|c| c.passed == Some(true));
    Ok(VerifyReport {
        generators: gens.iter().map(ToString::to_string).collect(),
        checks: out.0,
        passed,
    })
}

pub fn run(json: bool, corrupt_s2: bool) -> Outcome {
    let report = build_report(corrupt_s2)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(report.passed);
    }
    println!("generators: {}", report.generators.join(" | "));
    let mut section = "";
    for c in &report.checks {
        if c.section != section {
            section = &c.section;
            println!("\n== {section}");
        }
        let tag = match c.passed {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        println!("  [{tag}] {}: {}", c.name, c.detail);
    }
    let count = |v: Option<bool>| report.checks.iter().filter(|c| c.passed == v).count();
    println!(
        "\nverify-code: {} passed, {} failed, {} skipped",
        count(Some(true)),
        count(Some(false)),
        count(None)
    );
    Ok(report.passed)
}
