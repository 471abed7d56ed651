use std::path::Path;

use serde::Serialize;
use ternary_qec::cyclo::{AnyMatrix, CycloNumber, DenseMatrix, Scalar};
use ternary_qec::errormodel::{decompose_in_pauli, decompose_in_sigma, reconstruct_from_sigma, PauliSlot};

use crate::{usage, Basis, Outcome};

#[derive(Debug, Serialize, PartialEq)]
pub struct Coefficient {
    pub label: String,
    pub operator: String,
    /// Float value as `[re, im]`.
    pub value: [f64; 2],
    /// Exact value, present when the input was exact.
    pub exact: Option<CycloNumber>,
}

#[derive(Debug, Serialize, PartialEq)]
pub struct Decomposition {
    pub basis: String,
    pub exact: bool,
    pub coefficients: Vec<Coefficient>,
    /// Largest entrywise `|reconstruction - input|`.
    pub residual: f64,
}

fn labels(basis: Basis) -> Vec<(String, String)> {
    match basis {
        Basis::Sigma => (1..=9).map(|i| (format!("lambda{i}"), format!("sigma{i}"))).collect(),
        Basis::Pauli => PauliSlot::ALL.iter().map(|s| (s.name(), s.operator_label())).collect(),
    }
}

fn expand<T: Scalar>(m: &DenseMatrix<T>, basis: Basis) -> anyhow::Result<(Vec<T>, f64)> {
    let (coeffs, back) = match basis {
        Basis::Sigma => {
            let l = decompose_in_sigma(m)?;
            let back = reconstruct_from_sigma(&l);
            (l.to_vec(), back)
        }
        Basis::Pauli => {
            let c = decompose_in_pauli(m)?;
            let back = c.reconstruct();
            (PauliSlot::ALL.iter().map(|&s| c.get(s).clone()).collect(), back)
        }
    };
    Ok((coeffs, back.to_complex().max_abs_diff(&m.to_complex())))
}

pub fn decompose_text(text: &str, basis: Basis) -> anyhow::Result<Decomposition> {
    let matrix = AnyMatrix::from_json(text).map_err(|e| usage(format!("cannot parse matrix: {e}")))?;
    if matrix.shape() != (3, 3) {
        let (r, c) = matrix.shape();
        return Err(usage(format!("expected a 3x3 matrix, got {r}x{c}")));
    }
    let names = labels(basis);
    let (exact, coefficients, residual) = match &matrix {
        AnyMatrix::Exact(m) => {
            let (c, r) = expand(m, basis)?;
            let list = names
                .into_iter()
                .zip(c)
                .map(|((label, operator), x)| {
                    let z = x.embed();
                    Coefficient {
                        label,
                        operator,
                        value: [z.re, z.im],
                        exact: Some(x),
                    }
                })
                .collect();
            (true, list, r)
        }
        AnyMatrix::Float(m) => {
            let (c, r) = expand(m, basis)?;
            let list = names
                .into_iter()
                .zip(c)
                .map(|((label, operator), z)| Coefficient {
                    label,
                    operator,
                    value: [z.re, z.im],
                    exact: None,
                })
                .collect();
            (false, list, r)
        }
    };
    Ok(Decomposition {
        basis: match basis {
            Basis::Sigma => "sigma",
            Basis::Pauli => "pauli",
        }
        .into(),
        exact,
        coefficients,
        residual,
    })
}

pub fn run(input: &Path, basis: Basis, json: bool) -> Outcome {
    let text = std::fs::read_to_string(input).map_err(|e| usage(format!("cannot read {}: {e}", input.display())))?;
    let d = decompose_text(&text, basis)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&d)?);
        return Ok(true);
    }
    println!("basis: {} ({})", d.basis, if d.exact { "exact" } else { "float" });
    for c in &d.coefficients {
        let exact = c.exact.as_ref().map(ToString::to_string).unwrap_or_default();
        println!(
            "  {:<8} {:<7} {:>22.15e} {:>+22.15e}i  {exact}",
            c.label, c.operator, c.value[0], c.value[1]
        );
    }
    println!("residual: {:.3e}", d.residual);
    Ok(true)
}
