use std::path::Path;

use serde::Serialize;
use ternary_qec::code::{bundled_paper_codewords, build_code, crosscheck_paper_codewords, CodewordsFile, CrosscheckReport};

use crate::{Outcome, Source};

#[derive(Debug, Serialize)]
pub struct CodewordsOutput {
    pub source: String,
    pub codewords: CodewordsFile,
    /// `overlaps[i][k] = |<k_L|v_i>| / |v_i|` against the canonical basis.
    pub overlaps: Vec<Vec<f64>>,
    pub crosscheck: Option<CrosscheckReport>,
}

pub fn collect(source: Source) -> anyhow::Result<CodewordsOutput> {
    let code = build_code();
    let (name, file) = match source {
        Source::Derived => ("derived", code.codewords_file()),
        Source::Paper => ("paper", bundled_paper_codewords()),
    };
    let norm = file.normalization_value()?;
    let canon: Vec<_> = code.codewords().iter().map(|w| w.to_complex()).collect();
    let mut overlaps = Vec::new();
    for listing in &file.codewords {
        let v = listing.to_state(&norm)?.to_complex();
        let len = v.norm();
        overlaps.push(
            canon
                .iter()
                .map(|k| Ok(k.inner(&v)?.norm() / len))
                .collect::<anyhow::Result<Vec<f64>>>()?,
        );
    }
    let crosscheck = match source {
        Source::Derived => None,
        Source::Paper => Some(crosscheck_paper_codewords(&code, &file)?),
    };
    Ok(CodewordsOutput {
        source: name.into(),
        codewords: file,
        overlaps,
        crosscheck,
    })
}

fn print_report(r: &CrosscheckReport) {
    println!("\ndiscrepancy report");
    if let Some(p) = &r.provenance {
        println!("  source: {p}");
    }
    for l in &r.listings {
        println!(
            "  |{}_L>: {} terms, {} distinct kets, norm {:.6}, residual {:.3e}, in code space {}",
            l.label, l.term_count, l.distinct_kets, l.norm, l.residual, l.in_codespace
        );
        for d in &l.duplicates {
            println!("    duplicate ket |{}> listed {} times", d.ket, d.count);
        }
        let ev: Vec<String> = l
            .stabilizer_expectations
            .iter()
            .map(|[re, im]| format!("{re:+.4}{im:+.4}i"))
            .collect();
        println!("    <S1..S4> = {}", ev.join(", "));
    }
    println!("  anomalies: {}", r.anomaly_count());
}

pub fn run(source: Source, output: Option<&Path>, json: bool) -> Outcome {
    let out = collect(source)?;
    if let Some(path) = output {
        std::fs::write(path, out.codewords.to_json())?;
    }
    if json {
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(true);
    }
    println!("{} codewords, normalization {}", out.source, out.codewords.normalization);
    for listing in &out.codewords.codewords {
        println!("\n|{}_L> ({} terms)", listing.label, listing.terms.len());
        for t in &listing.terms {
            println!("  {:>8} |{}>", t.coeff.to_string(), t.ket);
        }
    }
    println!("\noverlap |<k_L|v>| / |v|  (rows: listed codewords, columns: canonical 0_L 1_L 2_L)");
    for (listing, row) in out.codewords.codewords.iter().zip(&out.overlaps) {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.6}")).collect();
        println!("  {}_L  {}", listing.label, cells.join("  "));
    }
    if let Some(r) = &out.crosscheck {
        print_report(r);
    }
    Ok(true)
}
