//! The five-qutrit stabilizer code: generators, stabilizer group, code-space
//! projector, logical operators and canonical codewords.
//!
//! ```
//! use ternary_qec::code::build_code;
//!
//! let code = build_code();
//! assert_eq!(code.generators()[0].to_string(), "I X Z Z X");
//! assert_eq!(code.group().len(), 81);
//! assert_eq!(code.codewords()[0].nonzero_count(), 81);
//! ```

mod listings;
mod kl;

use std::collections::HashSet;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cyclo::{CycloNumber, DenseMatrix, Scalar, StateVector};
use crate::error::{Error, Result};
use crate::gf3;
use crate::pauli::TernaryPauli;

pub use listings::{
    bundled_paper_codewords, crosscheck_paper_codewords, CodewordListing, CodewordTerm,
    CodewordsFile, CrosscheckReport, DuplicateKet, ListingReport, PaperCodewords,
};
pub use kl::{knill_laflamme_check, knill_laflamme_check_with_basis, KlReport};

/// The four generators, cyclic shifts of `X Z Z X I`.
pub const GENERATORS: [&str; 4] = ["I X Z Z X", "X I X Z Z", "Z X I X Z", "Z Z X I X"];

type Q = CycloNumber;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    generators: Vec<TernaryPauli>,
    group: Vec<TernaryPauli>,
    group_vectors: HashSet<Vec<u8>>,
    logical_x: TernaryPauli,
    logical_z: TernaryPauli,
    codewords: Vec<StateVector<Q>>,
    amplitude: BigRational,
    projector: OnceLock<DenseMatrix<Q>>,
}

/// The five-qutrit code from [`GENERATORS`].
///
/// # Panics
/// If the built-in generators fail a construction check, which would mean a
/// convention bug rather than bad input.
pub fn build_code() -> StabilizerCode {
    let gens = GENERATORS.iter().map(|s| s.parse().expect("valid generator")).collect();
    StabilizerCode::from_generators(gens).expect("built-in generators define a valid code")
}

impl StabilizerCode {
    /// Builds a code with one logical qutrit, checking that the generators
    /// commute, have order 3 and are independent over `Z₃`.
    pub fn from_generators(generators: Vec<TernaryPauli>) -> Result<Self> {
        let n = generators
            .first()
            .ok_or_else(|| Error::InvalidCode("no generators".into()))?
            .num_sites();
        for (i, g) in generators.iter().enumerate() {
            if g.num_sites() != n {
                return Err(Error::SizeMismatch { left: n, right: g.num_sites() });
            }
            if !g.pow(3).is_identity() {
                return Err(Error::InvalidCode(format!("S{} does not cube to the identity", i + 1)));
            }
            for (j, h) in generators.iter().enumerate().skip(i + 1) {
                let s = g.commutation_exponent(h)?;
                if s != 0 {
                    return Err(Error::InvalidCode(format!(
                        "S{} and S{} do not commute (exponent {s})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let vectors: Vec<Vec<u8>> = generators.iter().map(TernaryPauli::symplectic).collect();
        if gf3::rank(&vectors) != generators.len() {
            return Err(Error::InvalidCode("generators are dependent over Z3".into()));
        }
        if n != generators.len() + 1 {
            return Err(Error::InvalidCode(format!(
                "{} generators on {n} sites do not encode exactly one qutrit",
                generators.len()
            )));
        }

        let group = enumerate_group(&generators);
        let group_vectors = group.iter().map(TernaryPauli::symplectic).collect();
        let (logical_x, logical_z) = find_logical_operators(&generators)?;
        let (codewords, amplitude) = derive_codewords(&group, &logical_z)?;
        Ok(Self {
            generators,
            group,
            group_vectors,
            logical_x,
            logical_z,
            codewords,
            amplitude,
            projector: OnceLock::new(),
        })
    }

    pub fn num_sites(&self) -> usize {
        self.generators[0].num_sites()
    }

    pub fn generators(&self) -> &[TernaryPauli] {
        &self.generators
    }

    /// All `3^m` products `S₁^a S₂^b …`, with exact phases. Every element
    /// fixes the code space pointwise.
    pub fn group(&self) -> &[TernaryPauli] {
        &self.group
    }

    /// Whether `p` acts as a scalar on the code space, i.e. its exponent
    /// vector belongs to the stabilizer group (phase ignored).
    pub fn acts_as_scalar(&self, p: &TernaryPauli) -> bool {
        self.group_vectors.contains(&p.symplectic())
    }

    pub fn logical_x(&self) -> &TernaryPauli {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &TernaryPauli {
        &self.logical_z
    }

    /// `|0_L⟩, |1_L⟩, |2_L⟩`.
    pub fn codewords(&self) -> &[StateVector<Q>] {
        &self.codewords
    }

    /// Magnitude shared by every nonzero codeword amplitude (`1/9`).
    pub fn amplitude(&self) -> &BigRational {
        &self.amplitude
    }

    /// `(1/|G|) Σ_g g`, the orthogonal projector onto the code space. Built
    /// on first use.
    pub fn projector(&self) -> &DenseMatrix<Q> {
        self.projector.get_or_init(|| {
            let dim = 3usize.pow(self.num_sites() as u32);
            let mut acc = vec![Q::zero(); dim * dim];
            let phases = [Q::omega_pow(0), Q::omega_pow(1), Q::omega_pow(2)];
            for g in &self.group {
                for col in 0..dim {
                    let (row, k) = g.image(col);
                    acc[row * dim + col] += &phases[k as usize];
                }
            }
            let scale = Q::from_ratio(1, self.group.len() as i64);
            let data = acc
                .into_iter()
                .map(|v| if v.is_zero() { v } else { v.mul_ref(&scale) })
                .collect();
            DenseMatrix::new(dim, dim, data).expect("square")
        })
    }

    /// Applies the code-space projector without forming the matrix.
    pub fn project<T: Scalar>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        group_average(&self.group, state)
    }

    /// Exact checks on the projector: `P² = P`, `P† = P`, rank, and
    /// `P Sᵢ = P` for every generator.
    pub fn verify_projector(&self) -> Result<ProjectorReport> {
        let p = self.projector();
        let idempotent = match integral_form(p, self.group.len() as i64) {
            Some(m) => square_is_scaled(&m, p.rows(), self.group.len() as i64),
            None => p.multiply(p)? == *p,
        };
        let hermitian = p.adjoint() == *p;
        let rank = p.rank();
        let mut absorbs = true;
        for g in &self.generators {
            absorbs &= p.multiply(&g.to_dense::<Q>()?)? == *p;
        }
        Ok(ProjectorReport {
            idempotent,
            hermitian,
            rank,
            absorbs_generators: absorbs,
        })
    }

    /// `α|0_L⟩ + β|1_L⟩ + γ|2_L⟩`; the coefficients must be normalized to
    /// within `1e-10`.
    pub fn encode(&self, alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<StateVector<Complex64>> {
        let norm = alpha.norm_sqr() + beta.norm_sqr() + gamma.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(format!("|a|^2 + |b|^2 + |c|^2 = {norm}")));
        }
        let mut out = StateVector::zeros(self.num_sites());
        for (c, w) in [alpha, beta, gamma].iter().zip(&self.codewords) {
            out = out.add(&w.to_complex().scale(c))?;
        }
        Ok(out)
    }

    /// Exact counterpart of [`encode`](Self::encode); the norm must be exactly 1.
    pub fn encode_exact(&self, coeffs: &[Q; 3]) -> Result<StateVector<Q>> {
        let norm = coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c.norm_sqr());
        if !norm.is_one() {
            return Err(Error::Normalization(format!("squared norm is {norm}, not 1")));
        }
        let mut out = StateVector::zeros(self.num_sites());
        for (c, w) in coeffs.iter().zip(&self.codewords) {
            out = out.add(&w.scale(c))?;
        }
        Ok(out)
    }

    /// Whether each generator is purely `X`-type or purely `Z`-type.
    pub fn generators_are_css(&self) -> bool {
        self.generators.iter().all(is_pure)
    }

    /// Rank of the subgroup spanned by the pure-`X` and pure-`Z` elements of
    /// the stabilizer group. The code is CSS exactly when this equals the
    /// number of generators.
    pub fn css_rank(&self) -> usize {
        let pure: Vec<Vec<u8>> = self
            .group
            .iter()
            .filter(|g| is_pure(g))
            .map(TernaryPauli::symplectic)
            .collect();
        if pure.is_empty() {
            0
        } else {
            gf3::rank(&pure)
        }
    }

    /// The codewords in the export format, with unit-root coefficients and the
    /// common amplitude as the normalization.
    pub fn codewords_file(&self) -> CodewordsFile {
        let scale = Q::new(self.amplitude.recip(), BigRational::zero());
        let n = self.num_sites();
        let codewords = self
            .codewords
            .iter()
            .enumerate()
            .map(|(i, w)| CodewordListing {
                label: i.to_string(),
                terms: w
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(k, a)| CodewordTerm {
                        ket: crate::cyclo::ket_label(k, n),
                        coeff: a.mul_ref(&scale),
                    })
                    .collect(),
            })
            .collect();
        CodewordsFile {
            provenance: None,
            normalization: self.amplitude.to_string(),
            codewords,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectorReport {
    pub idempotent: bool,
    pub hermitian: bool,
    pub rank: usize,
    pub absorbs_generators: bool,
}

impl ProjectorReport {
    pub fn passed(&self, expected_rank: usize) -> bool {
        self.idempotent && self.hermitian && self.absorbs_generators && self.rank == expected_rank
    }
}

/// The entries of `d·P` as Eisenstein integers `(a, b)` for `a + bω`, if
/// they are all integral and small.
fn integral_form(p: &DenseMatrix<Q>, d: i64) -> Option<Vec<(i64, i64)>> {
    let d = BigRational::from_integer(d.into());
    p.entries()
        .iter()
        .map(|x| {
            let (a, b) = (x.a() * &d, x.b() * &d);
            if !a.is_integer() || !b.is_integer() {
                return None;
            }
            Some((a.to_integer().try_into().ok()?, b.to_integer().try_into().ok()?))
        })
        .collect()
}

/// `M·M == d·M` over `Z[ω]`, which is `P² = P` for `P = M/d`.
fn square_is_scaled(m: &[(i64, i64)], n: usize, d: i64) -> bool {
    let mut row = vec![(0i64, 0i64); n];
    for i in 0..n {
        row.fill((0, 0));
        for k in 0..n {
            let (a, b) = m[i * n + k];
            if (a, b) == (0, 0) {
                continue;
            }
            for (j, acc) in row.iter_mut().enumerate() {
                let (c, e) = m[k * n + j];
                // (a + bω)(c + eω) with ω² = -1 - ω
                acc.0 += a * c - b * e;
                acc.1 += a * e + b * c - b * e;
            }
        }
        if (0..n).any(|j| row[j] != (d * m[i * n + j].0, d * m[i * n + j].1)) {
            return false;
        }
    }
    true
}

fn is_pure(p: &TernaryPauli) -> bool {
    p.x().iter().all(|&v| v == 0) || p.z().iter().all(|&v| v == 0)
}

fn enumerate_group(generators: &[TernaryPauli]) -> Vec<TernaryPauli> {
    let n = generators[0].num_sites();
    let mut out = vec![TernaryPauli::identity(n)];
    for g in generators {
        let powers = [TernaryPauli::identity(n), g.clone(), g.pow(2)];
        out = out
            .iter()
            .flat_map(|h| powers.iter().map(move |p| h.multiply(p).expect("same size")))
            .collect();
    }
    out
}

/// `(1/|G|) Σ_g g|ψ⟩`.
fn group_average<T: Scalar>(group: &[TernaryPauli], state: &StateVector<T>) -> Result<StateVector<T>> {
    let mut acc = vec![T::zero(); state.dim()];
    for g in group {
        for (k, a) in g.apply(state)?.amplitudes().iter().enumerate() {
            acc[k].add_assign_ref(a);
        }
    }
    let scale = T::from_ratio(1, group.len() as i64);
    StateVector::from_amplitudes(acc.into_iter().map(|a| a.mul_ref(&scale)).collect())
}

/// Projector onto the `ωⁱ` eigenspace of `op`: `(1/3) Σ_k ω^{−ik} op^k`.
pub(crate) fn eigenspace_projection<T: Scalar>(op: &TernaryPauli, i: u8, state: &StateVector<T>) -> Result<StateVector<T>> {
    let mut acc = vec![T::zero(); state.dim()];
    let mut term = state.clone();
    for k in 0..3i64 {
        let w = T::omega_pow(-(i as i64) * k);
        for (slot, a) in acc.iter_mut().zip(term.amplitudes()) {
            slot.add_assign_ref(&a.mul_ref(&w));
        }
        term = op.apply(&term)?;
    }
    let third = T::from_ratio(1, 3);
    StateVector::from_amplitudes(acc.into_iter().map(|a| a.mul_ref(&third)).collect())
}

/// Logical `X` and `Z` for a code with one logical qutrit.
///
/// The normalizer is the kernel of the symplectic form against the
/// generators. Logical `Z` is its lexicographically smallest `(z|x)` vector
/// outside the generator span; logical `X` is the smallest with
/// `commutation_exponent(Z_L, X_L) = 1`. Both carry phase 0.
pub fn find_logical_operators(generators: &[TernaryPauli]) -> Result<(TernaryPauli, TernaryPauli)> {
    let n = generators
        .first()
        .ok_or_else(|| Error::InvalidCode("no generators".into()))?
        .num_sites();
    // s(S, E) = Σ z_S x_E − x_S z_E, as a functional on E = (z|x)
    let rows: Vec<Vec<u8>> = generators
        .iter()
        .map(|g| g.x().iter().map(|&x| (3 - x) % 3).chain(g.z().iter().copied()).collect())
        .collect();
    let kernel = gf3::kernel(&rows, 2 * n);
    let stab: Vec<Vec<u8>> = generators.iter().map(TernaryPauli::symplectic).collect();
    let logical_dim = kernel.len() - gf3::rank(&stab);
    if logical_dim != 2 {
        return Err(Error::InvalidCode(format!(
            "normalizer modulo stabilizers has dimension {logical_dim}, expected 2"
        )));
    }
    let mut normalizer = gf3::span(&kernel, 2 * n);
    normalizer.sort();
    let zl = normalizer
        .iter()
        .find(|v| !gf3::in_span(&stab, v))
        .map(|v| TernaryPauli::from_symplectic(v))
        .ok_or_else(|| Error::InvalidCode("no logical operator found".into()))?;
    for v in &normalizer {
        let cand = TernaryPauli::from_symplectic(v);
        if zl.commutation_exponent(&cand)? == 1 {
            return Ok((cand, zl));
        }
    }
    Err(Error::InvalidCode("no logical X conjugate to logical Z".into()))
}

/// `|i_L⟩ ∝ Πᵢ P |b⟩` for the first basis ket `b` with a nonzero image, where
/// `Πᵢ` projects onto the `ωⁱ` eigenspace of logical `Z`. The phase is fixed
/// so that the first nonzero amplitude is positive real.
fn derive_codewords(group: &[TernaryPauli], zl: &TernaryPauli) -> Result<(Vec<StateVector<Q>>, BigRational)> {
    let n = zl.num_sites();
    let dim = 3usize.pow(n as u32);
    let mut out = Vec::with_capacity(3);
    let mut amplitude = None;
    for i in 0..3u8 {
        let mut found: Option<StateVector<Q>> = None;
        for b in 0..dim {
            let ket = StateVector::<Q>::basis(n, b);
            let v = eigenspace_projection(zl, i, &group_average(group, &ket)?)?;
            if v.nonzero_count() > 0 {
                found = Some(v);
                break;
            }
        }
        let v = found.ok_or_else(|| Error::InvalidCode(format!("logical Z eigenspace {i} is empty")))?;
        let lead = v.amplitude(v.leading_index().expect("nonzero")).clone();
        let u = v.scale(&lead.inv().expect("nonzero"));
        if u.amplitudes().iter().any(|a| !a.is_zero() && a.as_unit_root().is_none()) {
            return Err(Error::InvalidCode(format!("codeword {i} does not have uniform magnitude")));
        }
        let count = u.nonzero_count();
        let root = count.sqrt();
        if root * root != count {
            return Err(Error::InvalidCode(format!("codeword {i} has {count} terms, not a square, so the normalization is irrational")));
        }
        let amp = BigRational::new(1.into(), (root as i64).into());
        out.push(u.scale(&Q::new(amp.clone(), BigRational::zero())));
        amplitude.get_or_insert(amp);
    }
    Ok((out, amplitude.expect("three codewords")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rational;

    fn code() -> &'static StabilizerCode {
        static CODE: OnceLock<StabilizerCode> = OnceLock::new();
        CODE.get_or_init(build_code)
    }

    #[test]
    fn generators_as_printed() {
        let c = code();
        let shown: Vec<String> = c.generators().iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, GENERATORS);
        assert_eq!(c.generators()[2].commutation_exponent(&c.generators()[3]).unwrap(), 0);
        assert!(c.generators()[0].pow(3).is_identity());
    }

    #[test]
    fn group_is_closed_and_fixes_codewords() {
        let c = code();
        assert_eq!(c.group().len(), 81);
        let distinct: HashSet<_> = c.group().iter().map(TernaryPauli::symplectic).collect();
        assert_eq!(distinct.len(), 81);
        for g in c.group() {
            for w in c.codewords() {
                assert_eq!(&g.apply(w).unwrap(), w);
            }
        }
        let min_weight = c.group().iter().filter(|g| !g.is_scalar()).map(|g| g.weight()).min();
        assert_eq!(min_weight, Some(4));
    }

    #[test]
    fn codewords_are_orthonormal_with_uniform_amplitudes() {
        let c = code();
        assert_eq!(c.amplitude(), &rational(1, 9));
        for (i, a) in c.codewords().iter().enumerate() {
            assert_eq!(a.nonzero_count(), 81);
            for (j, b) in c.codewords().iter().enumerate() {
                let expect = if i == j { Q::one() } else { Q::zero() };
                assert_eq!(a.inner(b).unwrap(), expect);
            }
            let lead = a.amplitude(a.leading_index().unwrap());
            assert_eq!(lead, &Q::from_ratio(1, 9));
        }
        assert_eq!(c.codewords()[0].leading_index(), Some(0));
    }

    #[test]
    fn logical_operators() {
        let c = code();
        let (xl, zl) = (c.logical_x(), c.logical_z());
        for g in c.generators() {
            assert_eq!(zl.commutation_exponent(g).unwrap(), 0);
            assert_eq!(xl.commutation_exponent(g).unwrap(), 0);
        }
        assert!(!c.acts_as_scalar(xl) && !c.acts_as_scalar(zl));
        assert_eq!(zl.commutation_exponent(xl).unwrap(), 1);
        let all_x: TernaryPauli = "X X X X X".parse().unwrap();
        assert_eq!(c.generators()[0].commutation_exponent(&all_x).unwrap(), 2);
        for i in 0..3 {
            let w = &c.codewords()[i];
            assert_eq!(zl.apply(w).unwrap(), w.scale(&Q::omega_pow(i as i64)));
            let moved = xl.apply(w).unwrap();
            let target = &c.codewords()[(i + 1) % 3];
            assert_eq!(moved.fidelity(target).unwrap(), Q::one());
        }
    }

    #[test]
    fn logical_z_follows_selection_rule() {
        assert_eq!(code().logical_z().to_string(), "X X2 X2 X X2");
        assert_eq!(code().logical_x().to_string(), "I X X I Z");
    }

    #[test]
    fn not_css() {
        let c = code();
        assert!(!c.generators_are_css());
        assert!(c.css_rank() < 4);
    }

    #[test]
    fn rejects_bad_generator_sets() {
        let mut gens: Vec<TernaryPauli> = GENERATORS.iter().map(|s| s.parse().unwrap()).collect();
        gens[1] = "X X X Z Z".parse().unwrap();
        let err = StabilizerCode::from_generators(gens.clone()).unwrap_err();
        assert!(err.to_string().contains("commute"), "{err}");
        gens[1] = gens[0].pow(2);
        assert!(StabilizerCode::from_generators(gens).is_err());
    }

    #[test]
    fn project_matches_projector_on_basis_ket() {
        let c = code();
        let v = StateVector::<Q>::basis(5, 0);
        let direct = c.project(&v).unwrap();
        let via = c.projector().apply(&v).unwrap();
        assert_eq!(direct, via);
        assert_eq!(direct.inner(&c.codewords()[0]).unwrap(), Q::from_ratio(1, 9));
    }

    #[test]
    fn encode_examples() {
        let c = code();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let s0 = c.encode(one, zero, zero).unwrap();
        assert!(s0.sub(&c.codewords()[0].to_complex()).unwrap().norm() < 1e-15);
        let r = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        let s = c.encode(r, r, r).unwrap();
        assert!(c.project(&s).unwrap().sub(&s).unwrap().norm() < 1e-12);
        assert!(c.encode(one, one, zero).is_err());
        let exact = c.encode_exact(&[Q::zero(), Q::zero(), Q::omega()]).unwrap();
        assert_eq!(exact, c.codewords()[2].scale(&Q::omega()));
        assert!(c.encode_exact(&[Q::one(), Q::one(), Q::zero()]).is_err());
    }

    #[test]
    fn integer_square_matches_exact_product() {
        // rank-one projector onto (1, ω)/√2
        let w = Q::omega();
        let half = Q::from_ratio(1, 2);
        let p = DenseMatrix::from_rows(vec![
            vec![half.clone(), half.mul_ref(&w.conj())],
            vec![half.mul_ref(&w), half.clone()],
        ])
        .unwrap();
        let m = integral_form(&p, 2).unwrap();
        let exact = p.multiply(&p).unwrap() == p;
        assert!(exact);
        assert!(square_is_scaled(&m, 2, 2));
        let doubled = p.scale(&Q::from_integers(2, 0));
        let m2 = integral_form(&doubled, 2).unwrap();
        assert!(!square_is_scaled(&m2, 2, 2));
        assert!(integral_form(&p, 1).is_none());
    }
}
