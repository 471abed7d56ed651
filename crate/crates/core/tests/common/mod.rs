#![allow(dead_code)]

use std::path::PathBuf;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use ternary_qec::cyclo::{CycloNumber, DenseMatrix, Scalar};
use ternary_qec::errormodel::PauliSlot;

pub type Q = CycloNumber;

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exact random logical coefficients `(ωᵏ⁰ r₀, ωᵏ¹ r₁, ωᵏ² r₂)`, where `r` is
/// a rational point on the unit sphere from inverse stereographic projection.
pub fn exact_logical(rng: &mut impl Rng) -> [Q; 3] {
    let mut q = || BigRational::new(rng.random_range(-6i64..=6).into(), rng.random_range(1i64..=5).into());
    let (s, t) = (q(), q());
    let d = BigRational::one() + &s * &s + &t * &t;
    let two = BigRational::from_integer(2.into());
    let r = [
        &two * &s / &d,
        &two * &t / &d,
        (BigRational::one() - &s * &s - &t * &t) / &d,
    ];
    r.map(|x| Q::new(x, BigRational::zero()).mul_ref(&Q::omega_pow(rng.random_range(0..3))))
}

/// Random normalized complex triple.
pub fn complex_logical(rng: &mut impl Rng) -> [Complex64; 3] {
    let v: [Complex64; 3] = std::array::from_fn(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.map(|c| c / n)
}

fn m3(rows: [[Q; 3]; 3]) -> DenseMatrix<Q> {
    DenseMatrix::from_rows(rows.into_iter().map(Vec::from).collect()).unwrap()
}

/// The shift and clock matrices written out entry by entry.
pub fn shift() -> DenseMatrix<Q> {
    let (o, z) = (Q::one, Q::zero);
    m3([[z(), z(), o()], [o(), z(), z()], [z(), o(), z()]])
}

pub fn clock() -> DenseMatrix<Q> {
    let z = Q::zero;
    m3([[Q::one(), z(), z()], [z(), Q::omega(), z()], [z(), z(), Q::omega_pow(2)]])
}

fn power(m: &DenseMatrix<Q>, k: u32) -> DenseMatrix<Q> {
    (0..k).fold(DenseMatrix::identity(3), |acc, _| acc.multiply(m).unwrap())
}

/// Parses `I`, `Zj`, `Xi` or `ZjXi` into its matrix (`Zʲ` applied after
/// `Xⁱ`) and the matching expansion slot.
pub fn named_operator(name: &str) -> (DenseMatrix<Q>, PauliSlot) {
    let mut i = 0u8;
    let mut j = 0u8;
    let mut chars = name.chars();
    while let Some(c) = chars.next() {
        match c {
            'I' => {}
            'Z' => j = chars.next().unwrap().to_digit(10).unwrap() as u8,
            'X' => i = chars.next().unwrap().to_digit(10).unwrap() as u8,
            _ => panic!("bad operator name {name}"),
        }
    }
    let m = power(&clock(), j as u32).multiply(&power(&shift(), i as u32)).unwrap();
    let slot = match (i, j) {
        (0, 0) => PauliSlot::Delta,
        (0, j) => PauliSlot::Eta(j),
        (i, 0) => PauliSlot::Mu(i),
        (i, j) => PauliSlot::Xi(i, j),
    };
    (m, slot)
}

#[derive(Deserialize)]
pub struct ExpansionTerm {
    pub operator: String,
    pub coeff: String,
}

#[derive(Deserialize)]
pub struct SigmaExpansion {
    pub matrix: Vec<Vec<String>>,
    pub expansion: Vec<ExpansionTerm>,
    #[serde(default)]
    pub displayed_terms: Vec<Vec<Vec<String>>>,
}

#[derive(Deserialize)]
pub struct SigmaGolden {
    pub sigma1: SigmaExpansion,
    pub sigma2: SigmaExpansion,
}

pub fn sigma_golden() -> SigmaGolden {
    serde_json::from_str(&std::fs::read_to_string(golden("sigma_expansions.json")).unwrap()).unwrap()
}

pub fn parse_matrix(rows: &[Vec<String>]) -> DenseMatrix<Q> {
    DenseMatrix::from_rows(rows.iter().map(|r| r.iter().map(|s| s.parse().unwrap()).collect()).collect()).unwrap()
}
