//! The single-qutrit error model: the nine permutation-with-phase matrices
//! `σ₁ … σ₉`, the generalized Pauli basis `{X^a Z^b}`, and decompositions of
//! an arbitrary `3 × 3` matrix in both.
//!
//! Both families are bases of the full `3 × 3` operator space, so a code
//! that corrects either set corrects every single-qutrit error.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{CycloNumber, DenseMatrix, Scalar};
use crate::error::{Error, Result};
use crate::pauli::TernaryPauli;
use crate::rng::stream_rng;

/// `σᵢ` for `i ∈ 1..=9`. Entries are `0`, `1`, `ω` or `ω²`.
///
/// Each block of three fixes one basis ket: `σ₁..σ₃` fix `|0⟩`, `σ₄..σ₆`
/// fix `|1⟩`, `σ₇..σ₉` fix `|2⟩`, and swap the other two with phases
/// `(1, 1)`, `(ω², ω)`, `(ω, ω²)`.
pub fn build_sigma<T: Scalar>(i: usize) -> Result<DenseMatrix<T>> {
    if !(1..=9).contains(&i) {
        return Err(Error::InvalidArgument(format!("sigma index {i} outside 1..=9")));
    }
    let block = (i - 1) / 3;
    let variant = (i - 1) % 3;
    // (upper, lower) phase exponents of the swapped pair
    let (up, lo) = [(0, 0), (2, 1), (1, 2)][variant];
    let (fixed, r, c) = [(0, 1, 2), (1, 0, 2), (2, 0, 1)][block];
    let mut m = DenseMatrix::zeros(3, 3);
    m.set(fixed, fixed, T::one());
    m.set(r, c, T::omega_pow(up));
    m.set(c, r, T::omega_pow(lo));
    Ok(m)
}

pub fn sigma_basis<T: Scalar>() -> Vec<DenseMatrix<T>> {
    (1..=9).map(|i| build_sigma(i).expect("in range")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub count: usize,
    pub rank: usize,
    pub independent: bool,
}

/// Exact rank of the given matrices, each flattened to a vector.
pub fn vectorized_rank(matrices: &[DenseMatrix<CycloNumber>]) -> Result<RankReport> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::InvalidArgument("no matrices".into()))?;
    let width = first.entries().len();
    let mut data = Vec::with_capacity(matrices.len() * width);
    for m in matrices {
        if m.entries().len() != width {
            return Err(Error::DimensionMismatch {
                op: "vectorize",
                left: first.shape(),
                right: m.shape(),
            });
        }
        data.extend_from_slice(m.entries());
    }
    let rank = DenseMatrix::new(matrices.len(), width, data)?.rank();
    Ok(RankReport {
        count: matrices.len(),
        rank,
        independent: rank == matrices.len(),
    })
}

/// Linear independence of `σ₁ … σ₉`: passes iff the exact rank is 9.
pub fn check_sigma_independence() -> RankReport {
    vectorized_rank(&sigma_basis()).expect("nine 3x3 matrices")
}

/// Coefficient matrix shared by the three 3×3 systems below:
/// rows `(1, 1, 1)`, `(1, ω², ω)`, `(1, ω, ω²)`.
pub fn sigma_system_matrix<T: Scalar>() -> DenseMatrix<T> {
    let w = |k| T::omega_pow(k);
    DenseMatrix::from_rows(vec![
        vec![w(0), w(0), w(0)],
        vec![w(0), w(2), w(1)],
        vec![w(0), w(1), w(2)],
    ])
    .expect("square")
}

/// Matrix entries on the right-hand side of each system, as `(row, col)`.
/// With `M = [[a, b, c], [d, e, f], [g, h, j]]` they are `(a, f, h)`,
/// `(e, c, g)` and `(j, b, d)`.
const SIGMA_SYSTEMS: [[(usize, usize); 3]; 3] = [
    [(0, 0), (1, 2), (2, 1)],
    [(1, 1), (0, 2), (2, 0)],
    [(2, 2), (0, 1), (1, 0)],
];

/// `λ₁ … λ₉` with `Σ λᵢ σᵢ = M`, by solving the three independent 3×3 systems.
pub fn decompose_in_sigma<T: Scalar>(m: &DenseMatrix<T>) -> Result<[T; 9]> {
    check_3x3(m)?;
    let lhs = sigma_system_matrix::<T>();
    let mut out: [T; 9] = std::array::from_fn(|_| T::zero());
    for (block, cells) in SIGMA_SYSTEMS.iter().enumerate() {
        let rhs: Vec<T> = cells.iter().map(|&(r, c)| m.get(r, c).clone()).collect();
        let lambda = lhs.solve(&rhs)?;
        for (k, l) in lambda.into_iter().enumerate() {
            out[3 * block + k] = l;
        }
    }
    Ok(out)
}

pub fn reconstruct_from_sigma<T: Scalar>(lambda: &[T; 9]) -> DenseMatrix<T> {
    let mut acc = DenseMatrix::zeros(3, 3);
    for (i, l) in lambda.iter().enumerate() {
        let term = build_sigma::<T>(i + 1).expect("in range").scale(l);
        acc = acc.add(&term).expect("3x3");
    }
    acc
}

fn check_3x3<T: Scalar>(m: &DenseMatrix<T>) -> Result<()> {
    if m.shape() != (3, 3) {
        return Err(Error::DimensionMismatch {
            op: "decompose",
            left: m.shape(),
            right: (3, 3),
        });
    }
    Ok(())
}

/// Slots of the Pauli-basis expansion
/// `E = δI + Σ ηᵢZᵢ + Σ μⱼXⱼ + Σ ξᵢⱼ Yᵢⱼ`.
///
/// The `ξᵢⱼ` weight the product `Zʲ Xⁱ` (Z applied after X), which is the
/// ordering used when the σ matrices are expanded term by term. In normal
/// form that operator is `ω^{ij} Xⁱ Zʲ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PauliSlot {
    Delta,
    Eta(u8),
    Mu(u8),
    Xi(u8, u8),
}

impl PauliSlot {
    pub const ALL: [PauliSlot; 9] = [
        PauliSlot::Delta,
        PauliSlot::Eta(1),
        PauliSlot::Eta(2),
        PauliSlot::Mu(1),
        PauliSlot::Mu(2),
        PauliSlot::Xi(1, 1),
        PauliSlot::Xi(1, 2),
        PauliSlot::Xi(2, 1),
        PauliSlot::Xi(2, 2),
    ];

    pub fn name(&self) -> String {
        match self {
            PauliSlot::Delta => "delta".into(),
            PauliSlot::Eta(i) => format!("eta{i}"),
            PauliSlot::Mu(j) => format!("mu{j}"),
            PauliSlot::Xi(i, j) => format!("xi{i}{j}"),
        }
    }

    /// Display form of the operator, e.g. `Z2X1` for `ξ₁₂`.
    pub fn operator_label(&self) -> String {
        match self {
            PauliSlot::Delta => "I".into(),
            PauliSlot::Eta(i) => format!("Z{i}"),
            PauliSlot::Mu(j) => format!("X{j}"),
            PauliSlot::Xi(i, j) => format!("Z{j}X{i}"),
        }
    }

    /// The basis operator as a one-site Pauli.
    pub fn operator(&self) -> TernaryPauli {
        let (x, z) = match *self {
            PauliSlot::Delta => (0, 0),
            PauliSlot::Eta(i) => (0, i),
            PauliSlot::Mu(j) => (j, 0),
            PauliSlot::Xi(i, j) => (i, j),
        };
        let phase = if matches!(self, PauliSlot::Xi(..)) { (x * z) % 3 } else { 0 };
        TernaryPauli::new(vec![x], vec![z], phase).expect("valid exponents")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PauliCoefficients<T> {
    pub delta: T,
    pub eta: [T; 2],
    pub mu: [T; 2],
    /// `xi[i-1][j-1]` weights `Zʲ Xⁱ`.
    pub xi: [[T; 2]; 2],
}

impl<T: Scalar> PauliCoefficients<T> {
    pub fn get(&self, slot: PauliSlot) -> &T {
        match slot {
            PauliSlot::Delta => &self.delta,
            PauliSlot::Eta(i) => &self.eta[i as usize - 1],
            PauliSlot::Mu(j) => &self.mu[j as usize - 1],
            PauliSlot::Xi(i, j) => &self.xi[i as usize - 1][j as usize - 1],
        }
    }

    fn from_fn(mut f: impl FnMut(PauliSlot) -> T) -> Self {
        Self {
            delta: f(PauliSlot::Delta),
            eta: [f(PauliSlot::Eta(1)), f(PauliSlot::Eta(2))],
            mu: [f(PauliSlot::Mu(1)), f(PauliSlot::Mu(2))],
            xi: [
                [f(PauliSlot::Xi(1, 1)), f(PauliSlot::Xi(1, 2))],
                [f(PauliSlot::Xi(2, 1)), f(PauliSlot::Xi(2, 2))],
            ],
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (PauliSlot, &T)> {
        PauliSlot::ALL.into_iter().map(move |s| (s, self.get(s)))
    }

    pub fn reconstruct(&self) -> DenseMatrix<T> {
        let mut acc = DenseMatrix::zeros(3, 3);
        for (slot, c) in self.terms() {
            let op: DenseMatrix<T> = slot.operator().to_dense().expect("one site");
            acc = acc.add(&op.scale(c)).expect("3x3");
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PauliCoefficients<U> {
        PauliCoefficients::from_fn(|s| f(self.get(s)))
    }
}

/// Coefficients from trace inner products, `c_P = Tr(P† M) / 3`; the nine
/// operators are trace-orthogonal with `Tr(P†P) = 3`.
pub fn decompose_in_pauli<T: Scalar>(m: &DenseMatrix<T>) -> Result<PauliCoefficients<T>> {
    check_3x3(m)?;
    let third = T::from_ratio(1, 3);
    Ok(PauliCoefficients::from_fn(|slot| {
        let op: DenseMatrix<T> = slot.operator().to_dense().expect("one site");
        let tr = op.adjoint().multiply(m).expect("3x3").trace();
        tr.mul_ref(&third)
    }))
}

/// A 3×3 matrix with independent standard complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R) -> DenseMatrix<Complex64> {
    let data = (0..9)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    DenseMatrix::new(3, 3, data).expect("9 entries")
}

/// Unitary from Gram–Schmidt on the columns of a Gaussian matrix (QR with a
/// positive diagonal in `R`).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R) -> DenseMatrix<Complex64> {
    let g = random_matrix(rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(3);
    for c in 0..3 {
        let mut v: Vec<Complex64> = (0..3).map(|r| *g.get(r, c)).collect();
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    let data = (0..3).flat_map(|r| cols.iter().map(move |c| c[r])).collect::<Vec<_>>();
    DenseMatrix::new(3, 3, data).expect("9 entries")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanReport {
    pub general: usize,
    pub unitary: usize,
    pub max_sigma_residual: f64,
    pub max_pauli_residual: f64,
}

impl SpanReport {
    pub fn max_residual(&self) -> f64 {
        self.max_sigma_residual.max(self.max_pauli_residual)
    }
}

fn residuals(m: &DenseMatrix<Complex64>) -> Result<(f64, f64)> {
    let lambda = decompose_in_sigma(m)?;
    let sigma_res = reconstruct_from_sigma(&lambda).max_abs_diff(m);
    let pauli_res = decompose_in_pauli(m)?.reconstruct().max_abs_diff(m);
    Ok((sigma_res, pauli_res))
}

/// Decomposes `trials` seeded random unitaries in both bases and records the
/// worst reconstruction residual.
pub fn verify_span_theorem(trials: usize, seed: u64) -> Result<SpanReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    verify_decompositions(0, trials, seed)
}

/// As [`verify_span_theorem`], with `general` unconstrained Gaussian matrices
/// followed by `unitary` random unitaries. Trial `k` draws from stream `k`.
pub fn verify_decompositions(general: usize, unitary: usize, seed: u64) -> Result<SpanReport> {
    let worst = (0..general + unitary)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let m = if k < general {
                random_matrix(&mut rng)
            } else {
                random_unitary(&mut rng)
            };
            residuals(&m)
        })
        .try_reduce(|| (0.0, 0.0), |a, b| Ok((a.0.max(b.0), a.1.max(b.1))))?;
    Ok(SpanReport {
        general,
        unitary,
        max_sigma_residual: worst.0,
        max_pauli_residual: worst.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rational;
    use num_traits::{One, Zero};

    type Q = CycloNumber;

    fn w(k: i64) -> Q {
        Q::omega_pow(k)
    }

    fn third() -> Q {
        Q::from_ratio(1, 3)
    }

    fn m3(rows: [[Q; 3]; 3]) -> DenseMatrix<Q> {
        DenseMatrix::from_rows(rows.into_iter().map(Vec::from).collect()).unwrap()
    }

    #[test]
    fn sigma_displays() {
        let (o, z) = (Q::one, Q::zero);
        assert_eq!(build_sigma::<Q>(1).unwrap(), m3([[o(), z(), z()], [z(), z(), o()], [z(), o(), z()]]));
        assert_eq!(build_sigma::<Q>(2).unwrap(), m3([[o(), z(), z()], [z(), z(), w(2)], [z(), w(1), z()]]));
        assert_eq!(build_sigma::<Q>(3).unwrap(), m3([[o(), z(), z()], [z(), z(), w(1)], [z(), w(2), z()]]));
        assert_eq!(build_sigma::<Q>(4).unwrap(), m3([[z(), z(), o()], [z(), o(), z()], [o(), z(), z()]]));
        assert_eq!(build_sigma::<Q>(5).unwrap(), m3([[z(), z(), w(2)], [z(), o(), z()], [w(1), z(), z()]]));
        assert_eq!(build_sigma::<Q>(6).unwrap(), m3([[z(), z(), w(1)], [z(), o(), z()], [w(2), z(), z()]]));
        assert_eq!(build_sigma::<Q>(7).unwrap(), m3([[z(), o(), z()], [o(), z(), z()], [z(), z(), o()]]));
        assert_eq!(build_sigma::<Q>(8).unwrap(), m3([[z(), w(2), z()], [w(1), z(), z()], [z(), z(), o()]]));
        assert_eq!(build_sigma::<Q>(9).unwrap(), m3([[z(), w(1), z()], [w(2), z(), z()], [z(), z(), o()]]));
        assert!(build_sigma::<Q>(0).is_err());
        assert!(build_sigma::<Q>(10).is_err());
    }

    #[test]
    fn each_sigma_is_unitary_and_fixes_one_ket() {
        for i in 1..=9 {
            let s = build_sigma::<Q>(i).unwrap();
            assert!(s.is_unitary(), "sigma {i}");
            let fixed = (0..3).filter(|&k| s.get(k, k).is_one()).count();
            assert_eq!(fixed, 1, "sigma {i}");
        }
    }

    #[test]
    fn independence_ranks() {
        assert_eq!(check_sigma_independence().rank, 9);
        let b = sigma_basis::<Q>();
        assert_eq!(vectorized_rank(&b[..3]).unwrap().rank, 3);
        assert_eq!(vectorized_rank(&[b[0].clone(), b[0].clone()]).unwrap().rank, 1);
    }

    #[test]
    fn sigma_system_determinant_is_nonzero() {
        // Vandermonde in (1, ω², ω): 3(ω − ω²) = 3 + 6ω, computed by cofactor expansion.
        let det = sigma_system_matrix::<Q>().determinant().unwrap();
        assert_eq!(det, Q::from_integers(3, 6));
    }

    #[test]
    fn decompose_basis_element_and_identity() {
        let l = decompose_in_sigma(&build_sigma::<Q>(1).unwrap()).unwrap();
        let mut e = vec![Q::zero(); 9];
        e[0] = Q::one();
        assert_eq!(l.to_vec(), e);

        // (a,f,h) = (1,0,0): λ₁+λ₂+λ₃ = 1 with the two phase-weighted sums 0
        // gives λ₁ = λ₂ = λ₃ = 1/3; the other two blocks are identical.
        let l = decompose_in_sigma(&DenseMatrix::<Q>::identity(3)).unwrap();
        assert!(l.iter().all(|x| *x == third()));
    }

    #[test]
    fn pauli_basis_is_trace_orthogonal() {
        for a in PauliSlot::ALL {
            for b in PauliSlot::ALL {
                let da: DenseMatrix<Q> = a.operator().to_dense().unwrap();
                let db: DenseMatrix<Q> = b.operator().to_dense().unwrap();
                let tr = da.adjoint().multiply(&db).unwrap().trace();
                let expect = if a == b { Q::from_integers(3, 0) } else { Q::zero() };
                assert_eq!(tr, expect, "{a:?} {b:?}");
            }
        }
    }

    #[test]
    fn decompose_pauli_indicator_on_basis() {
        for slot in PauliSlot::ALL {
            let m: DenseMatrix<Q> = slot.operator().to_dense().unwrap();
            let c = decompose_in_pauli(&m).unwrap();
            for (s, v) in c.terms() {
                assert_eq!(v.is_one(), s == slot);
                assert!(s == slot || v.is_zero());
            }
        }
        let x1: DenseMatrix<Q> = "X".parse::<TernaryPauli>().unwrap().to_dense().unwrap();
        assert!(decompose_in_pauli(&x1).unwrap().mu[0].is_one());
    }

    #[test]
    fn sigma1_and_sigma2_expansions() {
        let c1 = decompose_in_pauli(&build_sigma::<Q>(1).unwrap()).unwrap();
        let s = |x: Q| &x * &third();
        assert_eq!(c1.delta, s(w(0)));
        assert_eq!(c1.eta, [s(w(0)), s(w(0))]);
        assert_eq!(c1.mu, [s(w(0)), s(w(0))]);
        assert_eq!(c1.xi, [[s(w(1)), s(w(2))], [s(w(2)), s(w(1))]]);

        let c2 = decompose_in_pauli(&build_sigma::<Q>(2).unwrap()).unwrap();
        assert_eq!(c2.delta, s(w(0)));
        assert_eq!(c2.eta, [s(w(0)), s(w(0))]);
        assert_eq!(c2.mu, [s(w(1)), s(w(2))]);
        assert_eq!(c2.xi, [[s(w(2)), s(w(0))], [s(w(1)), s(w(0))]]);
    }

    #[test]
    fn sigma_coefficients_have_uniform_magnitude() {
        for i in 1..=9 {
            let c = decompose_in_pauli(&build_sigma::<Q>(i).unwrap()).unwrap();
            for (_, v) in c.terms() {
                assert_eq!(v.norm_sqr(), rational(1, 9));
            }
        }
    }

    #[test]
    fn decompositions_are_linear() {
        let a = build_sigma::<Q>(5).unwrap().add(&DenseMatrix::identity(3)).unwrap();
        let b = build_sigma::<Q>(8).unwrap().scale(&w(1));
        let k = Q::new(rational(2, 7), rational(-1, 3));
        let sum = a.add(&b.scale(&k)).unwrap();
        let (la, lb, ls) = (
            decompose_in_sigma(&a).unwrap(),
            decompose_in_sigma(&b).unwrap(),
            decompose_in_sigma(&sum).unwrap(),
        );
        for i in 0..9 {
            assert_eq!(ls[i], &la[i] + &(&lb[i] * &k));
        }
        let (pa, pb, ps) = (
            decompose_in_pauli(&a).unwrap(),
            decompose_in_pauli(&b).unwrap(),
            decompose_in_pauli(&sum).unwrap(),
        );
        for s in PauliSlot::ALL {
            assert_eq!(ps.get(s), &(pa.get(s) + &(pb.get(s) * &k)));
        }
    }

    #[test]
    fn sigmas_reconstruct_exactly() {
        for i in 1..=9 {
            let m = build_sigma::<Q>(i).unwrap();
            assert_eq!(reconstruct_from_sigma(&decompose_in_sigma(&m).unwrap()), m);
            assert_eq!(decompose_in_pauli(&m).unwrap().reconstruct(), m);
        }
    }

    #[test]
    fn random_unitaries_reconstruct() {
        let mut rng = stream_rng(7, 0);
        let u = random_unitary(&mut rng);
        assert!(u.is_unitary());
        let report = verify_span_theorem(1000, 11).unwrap();
        assert!(report.max_residual() <= 1e-11, "{report:?}");
        assert!(verify_span_theorem(0, 1).is_err());
    }

    #[test]
    fn rejects_non_square() {
        let m = DenseMatrix::<Q>::zeros(2, 3);
        assert!(decompose_in_sigma(&m).is_err());
        assert!(decompose_in_pauli(&m).is_err());
    }
}
