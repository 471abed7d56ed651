use ternary_qec::code::build_code;
use ternary_qec::decode::build_syndrome_table;

use crate::{Outcome, TableFormat};

pub fn run(format: TableFormat) -> Outcome {
    let code = build_code();
    let table = build_syndrome_table(&code)?;
    match format {
        TableFormat::Csv => print!("{}", table.to_csv()),
        TableFormat::Json => println!("{}", table.to_json()),
    }
    Ok(true)
}
