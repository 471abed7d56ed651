use ternary_qec::analytics::{monte_carlo_with_workers, NoiseModel, TrialReport};
use ternary_qec::code::build_code;
use ternary_qec::decode::build_syndrome_table;
use ternary_qec::Error;

use crate::{usage, Outcome};

pub const CSV_HEADER: &str = "p,seed,trials,failures,rate,wilson_low,wilson_high,analytic,two_error_correction_fraction";

fn to_usage(e: Error) -> anyhow::Error {
    match e {
        Error::InvalidArgument(msg) => usage(msg),
        other => other.into(),
    }
}

pub fn run(p: f64, trials: u64, seed: u64, workers: usize, json: bool, csv: bool) -> Outcome {
    let model = NoiseModel::new(p, seed).map_err(to_usage)?;
    if trials == 0 {
        return Err(usage("trials must be at least 1"));
    }
    let code = build_code();
    let table = build_syndrome_table(&code)?;
    let r: TrialReport = monte_carlo_with_workers(&code, &table, &model, trials, workers).map_err(to_usage)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&r)?);
    } else if csv {
        println!("{CSV_HEADER}");
        println!(
            "{},{},{},{},{:e},{:e},{:e},{:e},{}",
            r.p, r.seed, r.trials, r.failures, r.rate, r.interval.0, r.interval.1, r.analytic, r.two_error_correction_fraction
        );
    } else {
        println!("p = {}, seed = {}, trials = {}", r.p, r.seed, r.trials);
        println!("failures: {}", r.failures);
        println!("rate: {:.6e}", r.rate);
        println!("wilson 95%: [{:.6e}, {:.6e}]", r.interval.0, r.interval.1);
        println!(
            "analytic 1 - (1 + 4p)(1 - p)^4: {:.6e} ({} the interval)",
            r.analytic,
            if r.analytic_in_interval { "inside" } else { "outside" }
        );
        println!("two-error correction fraction: {}", r.two_error_correction_fraction);
        println!("hit qutrits  trials  failures");
        for t in &r.tally {
            println!("  {:>10}  {:>6}  {:>8}", t.errors, t.trials, t.failures);
        }
    }
    Ok(true)
}
