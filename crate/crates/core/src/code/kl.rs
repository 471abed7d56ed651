use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use super::{StabilizerCode, Q};
use crate::cyclo::{Scalar, StateVector};
use crate::error::{Error, Result};
use crate::pauli::TernaryPauli;

/// Outcome of the Knill–Laflamme check over an error set (identity
/// included as entry 0).
#[derive(Clone, Debug, Serialize)]
pub struct KlReport {
    pub errors: Vec<String>,
    /// `c[a][b]` with `⟨i_L|E_a† E_b|j_L⟩ = c[a][b] δᵢⱼ`, read off at `i = j = 0`.
    pub c: Vec<Vec<Q>>,
    /// Pairs `(a, b)` for which the condition fails.
    pub violations: Vec<(usize, usize)>,
    pub passed: bool,
    /// `⟨0_L|E|0_L⟩ = ⟨1_L|E|1_L⟩ = ⟨2_L|E|2_L⟩` for every `E` in the set.
    pub diagonal_form: bool,
    pub hermitian: bool,
}

pub fn knill_laflamme_check(code: &StabilizerCode, errors: &[TernaryPauli]) -> Result<KlReport> {
    knill_laflamme_check_with_basis(code.codewords(), errors)
}

/// As [`knill_laflamme_check`] for an arbitrary exact basis, e.g. a
/// deliberately perturbed one.
pub fn knill_laflamme_check_with_basis(basis: &[StateVector<Q>], errors: &[TernaryPauli]) -> Result<KlReport> {
    let n = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?
        .num_sites();
    let mut set = vec![TernaryPauli::identity(n)];
    set.extend(errors.iter().filter(|e| !e.is_identity()).cloned());
    for e in &set {
        if e.num_sites() != n {
            return Err(Error::SizeMismatch { left: n, right: e.num_sites() });
        }
    }

    // E_a† E_b differs between pairs mostly by phase, so matrix elements are
    // computed once per exponent vector.
    let products: Vec<Vec<TernaryPauli>> = set
        .iter()
        .map(|a| set.iter().map(|b| a.inverse().multiply(b).expect("same size")).collect())
        .collect();
    let mut distinct: Vec<Vec<u8>> = products.iter().flatten().map(TernaryPauli::symplectic).collect();
    distinct.sort();
    distinct.dedup();
    let sparse: Vec<Vec<(usize, Q)>> = basis
        .iter()
        .map(|v| {
            v.amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(k, a)| (k, a.clone()))
                .collect()
        })
        .collect();
    let bras: Vec<Vec<Q>> = basis.iter().map(|v| v.amplitudes().iter().map(Q::conj).collect()).collect();
    let table: HashMap<Vec<u8>, Vec<Vec<Q>>> = distinct
        .into_par_iter()
        .map(|v| {
            let p = TernaryPauli::from_symplectic(&v);
            let m = matrix_elements(&p, &bras, &sparse);
            (v, m)
        })
        .collect();

    let k = basis.len();
    let mut c = vec![vec![Q::zero(); set.len()]; set.len()];
    let mut violations = Vec::new();
    let mut diagonal_form = true;
    for (a, row) in products.iter().enumerate() {
        for (b, p) in row.iter().enumerate() {
            let w = Q::omega_pow(p.phase() as i64);
            let m: Vec<Vec<Q>> = table[&p.symplectic()]
                .iter()
                .map(|r| r.iter().map(|x| x.mul_ref(&w)).collect())
                .collect();
            let diag_equal = (1..k).all(|i| m[i][i] == m[0][0]);
            let off_zero = (0..k).all(|i| (0..k).all(|j| i == j || m[i][j].is_zero()));
            if !(diag_equal && off_zero) {
                violations.push((a, b));
            }
            if a == 0 && !diag_equal {
                diagonal_form = false;
            }
            c[a][b] = m[0][0].clone();
        }
    }
    let hermitian = (0..set.len()).all(|a| (0..set.len()).all(|b| c[a][b] == c[b][a].conj()));
    Ok(KlReport {
        errors: set.iter().map(|e| e.to_string()).collect(),
        c,
        passed: violations.is_empty(),
        violations,
        diagonal_form,
        hermitian,
    })
}

/// `⟨i|P|j⟩` for all basis pairs, using the sparse kets and conjugated bras.
fn matrix_elements(p: &TernaryPauli, bras: &[Vec<Q>], kets: &[Vec<(usize, Q)>]) -> Vec<Vec<Q>> {
    let phases = [Q::omega_pow(0), Q::omega_pow(1), Q::omega_pow(2)];
    let images: Vec<Vec<(usize, Q)>> = kets
        .iter()
        .map(|ket| {
            ket.iter()
                .map(|(col, a)| {
                    let (row, e) = p.image(*col);
                    (row, a.mul_ref(&phases[e as usize]))
                })
                .collect()
        })
        .collect();
    bras.iter()
        .map(|bra| {
            images
                .iter()
                .map(|img| {
                    let mut s = Q::zero();
                    for (row, a) in img {
                        if !bra[*row].is_zero() {
                            s += &bra[*row].mul_ref(a);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;
    use num_traits::One;

    fn single_site_errors(n: usize) -> Vec<TernaryPauli> {
        let mut out = Vec::new();
        for site in 0..n {
            for x in 0..3 {
                for z in 0..3 {
                    if x + z > 0 {
                        out.push(TernaryPauli::single_site(n, site, x, z));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn identity_only() {
        let code = build_code();
        let r = knill_laflamme_check(&code, &[]).unwrap();
        assert!(r.passed);
        assert_eq!(r.c, vec![vec![Q::one()]]);
    }

    #[test]
    fn single_errors_pass_and_c_is_hermitian() {
        let code = build_code();
        let r = knill_laflamme_check(&code, &single_site_errors(5)).unwrap();
        assert_eq!(r.errors.len(), 41);
        assert!(r.passed, "{:?}", r.violations);
        assert!(r.diagonal_form && r.hermitian);
        // distinct single errors are distinguishable, so c is the identity
        for a in 0..41 {
            for b in 0..41 {
                assert_eq!(r.c[a][b], if a == b { Q::one() } else { Q::zero() });
            }
        }
    }

    #[test]
    fn perturbed_basis_fails() {
        let code = build_code();
        let mut basis = code.codewords().to_vec();
        let mut amps = basis[0].clone().into_amplitudes();
        amps[0] = Q::from_ratio(2, 9);
        basis[0] = StateVector::from_amplitudes(amps).unwrap();
        let r = knill_laflamme_check_with_basis(&basis, &single_site_errors(5)).unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn weight_three_quotients_violate() {
        let code = build_code();
        // weight-2 quotients are still detected; the quotient here is logical Z
        let errs = vec!["X2 X I I I".parse().unwrap(), "I I X2 X X2".parse().unwrap()];
        let r = knill_laflamme_check(&code, &errs).unwrap();
        assert!(!r.passed);
    }
}
