//! Syndromes, the lookup table over all single-qutrit errors, and the
//! correction cycle on states.
//!
//! Syndrome component `i` is the exponent `s` in `Sᵢ (E|ψ⟩) = ω^s E|ψ⟩`,
//! which equals `commutation_exponent(Sᵢ, E)` for a code state `|ψ⟩`.
//!
//! ```
//! use ternary_qec::code::build_code;
//! use ternary_qec::decode::syndrome_of;
//!
//! let code = build_code();
//! let s = syndrome_of(&code, &"X I I I I".parse().unwrap()).unwrap();
//! assert_eq!(s.to_string(), "(1, 1, w, w)");
//! ```

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::code::{eigenspace_projection, StabilizerCode};
use crate::cyclo::{DenseMatrix, Scalar, StateVector};
use crate::error::{Error, Result};
use crate::pauli::{site_symbol, TernaryPauli};

/// One `Z₃` exponent per generator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Syndrome(Vec<u8>);

const EIGEN_LABELS: [&str; 3] = ["1", "w", "w2"];

impl Syndrome {
    pub fn new(exponents: Vec<u8>) -> Self {
        Self(exponents.into_iter().map(|e| e % 3).collect())
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Eigenvalues as `1`, `w`, `w2`.
    pub fn labels(&self) -> Vec<&'static str> {
        self.0.iter().map(|&e| EIGEN_LABELS[e as usize]).collect()
    }

    /// Every syndrome for `m` generators, in counting order.
    pub fn all(m: usize) -> Vec<Syndrome> {
        (0..3usize.pow(m as u32))
            .map(|mut k| {
                let mut e = vec![0u8; m];
                for d in e.iter_mut().rev() {
                    *d = (k % 3) as u8;
                    k /= 3;
                }
                Syndrome(e)
            })
            .collect()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels().join(", "))
    }
}

/// Single-site error kinds in table order, as `(x, z)` exponents.
pub const ERROR_KINDS: [(u8, u8); 8] = [(1, 0), (2, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)];

/// Identity followed by `X, X2, Z, Z2, Y11, Y12, Y21, Y22` on each site:
/// `8n + 1` operators.
pub fn single_error_set(n: usize) -> Vec<TernaryPauli> {
    let mut out = vec![TernaryPauli::identity(n)];
    for site in 0..n {
        for (x, z) in ERROR_KINDS {
            out.push(TernaryPauli::single_site(n, site, x, z));
        }
    }
    out
}

pub fn syndrome_of(code: &StabilizerCode, e: &TernaryPauli) -> Result<Syndrome> {
    code.generators()
        .iter()
        .map(|g| g.commutation_exponent(e))
        .collect::<Result<_>>()
        .map(Syndrome)
}

#[derive(Clone, Debug, Serialize)]
pub struct SyndromeEntry {
    pub error: TernaryPauli,
    pub syndrome: Syndrome,
}

impl SyndromeEntry {
    /// 1-based site of a single-site error; 0 for the identity.
    pub fn site(&self) -> usize {
        self.error
            .x()
            .iter()
            .zip(self.error.z())
            .position(|(&x, &z)| x != 0 || z != 0)
            .map_or(0, |i| i + 1)
    }

    pub fn kind(&self) -> &'static str {
        match self.site() {
            0 => "I",
            s => site_symbol(self.error.x()[s - 1], self.error.z()[s - 1]),
        }
    }
}

/// A pair of errors sharing a syndrome whose quotient stabilizes the code.
#[derive(Clone, Debug, Serialize)]
pub struct Degeneracy {
    pub first: String,
    pub second: String,
    pub syndrome: Syndrome,
}

/// Syndrome → correction lookup over [`single_error_set`].
#[derive(Clone, Debug, Serialize)]
pub struct SyndromeTable {
    entries: Vec<SyndromeEntry>,
    #[serde(skip)]
    lookup: HashMap<Syndrome, usize>,
    degeneracies: Vec<Degeneracy>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SyndromeRow {
    pub error_site: usize,
    pub error_type: String,
    pub s1: String,
    pub s2: String,
    pub s3: String,
    pub s4: String,
}

/// Computes all `8n + 1` syndromes. A shared syndrome is accepted only when
/// the two errors differ by a stabilizer; otherwise the build fails.
pub fn build_syndrome_table(code: &StabilizerCode) -> Result<SyndromeTable> {
    let mut entries: Vec<SyndromeEntry> = Vec::new();
    let mut lookup: HashMap<Syndrome, usize> = HashMap::new();
    let mut degeneracies = Vec::new();
    for e in single_error_set(code.num_sites()) {
        let s = syndrome_of(code, &e)?;
        if let Some(&idx) = lookup.get(&s) {
            let other: &TernaryPauli = &entries[idx].error;
            let quotient = other.inverse().multiply(&e)?;
            if !code.acts_as_scalar(&quotient) {
                return Err(Error::SyndromeCollision {
                    first: other.to_string(),
                    second: e.to_string(),
                    syndrome: s.to_string(),
                });
            }
            degeneracies.push(Degeneracy {
                first: other.to_string(),
                second: e.to_string(),
                syndrome: s.clone(),
            });
        } else {
            lookup.insert(s.clone(), entries.len());
        }
        entries.push(SyndromeEntry { error: e, syndrome: s });
    }
    Ok(SyndromeTable {
        entries,
        lookup,
        degeneracies,
    })
}

impl SyndromeTable {
    pub fn entries(&self) -> &[SyndromeEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn degeneracies(&self) -> &[Degeneracy] {
        &self.degeneracies
    }

    pub fn distinct_syndromes(&self) -> usize {
        self.lookup.len()
    }

    /// The error that the syndrome is attributed to.
    pub fn correction(&self, s: &Syndrome) -> Option<&TernaryPauli> {
        self.lookup.get(s).map(|&i| &self.entries[i].error)
    }

    pub fn rows(&self) -> Vec<SyndromeRow> {
        self.entries
            .iter()
            .map(|e| {
                let l = e.syndrome.labels();
                let label = |i: usize| l.get(i).copied().unwrap_or("").to_string();
                SyndromeRow {
                    error_site: e.site(),
                    error_type: e.kind().to_string(),
                    s1: label(0),
                    s2: label(1),
                    s3: label(2),
                    s4: label(3),
                }
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("error_site,error_type,s1,s2,s3,s4\n");
        for r in self.rows() {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.error_site, r.error_type, r.s1, r.s2, r.s3, r.s4
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows()).expect("serializable")
    }

    /// Decodes an error symbolically: `true` when the looked-up correction
    /// undoes `e` up to a stabilizer and phase.
    pub fn corrects(&self, code: &StabilizerCode, e: &TernaryPauli) -> Result<bool> {
        let s = syndrome_of(code, e)?;
        Ok(match self.correction(&s) {
            Some(c) => code.acts_as_scalar(&c.inverse().multiply(e)?),
            None => false,
        })
    }
}

/// Measures every generator on `state` by its expectation value, snapped
/// to the nearest cube root of unity. Fails with
/// [`Error::NotEigenstate`] if any expectation has magnitude below 0.99.
pub fn extract_syndrome<T: Scalar>(code: &StabilizerCode, state: &StateVector<T>) -> Result<Syndrome> {
    let norm = state.norm_sqr().to_complex().re;
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero state".into()));
    }
    let mut out = Vec::with_capacity(code.generators().len());
    for (i, g) in code.generators().iter().enumerate() {
        let e = state.inner(&g.apply(state)?)?.to_complex() / norm;
        let magnitude = e.norm();
        if magnitude < 0.99 {
            return Err(Error::NotEigenstate {
                generator: i + 1,
                magnitude,
            });
        }
        let k = (e.arg() / (2.0 * PI / 3.0)).round().rem_euclid(3.0) as u8;
        out.push(k);
    }
    Ok(Syndrome(out))
}

/// Measures the syndrome and applies the inverse of the table's correction.
pub fn correct<T: Scalar>(code: &StabilizerCode, table: &SyndromeTable, state: &StateVector<T>) -> Result<StateVector<T>> {
    let s = extract_syndrome(code, state)?;
    let c = table
        .correction(&s)
        .ok_or_else(|| Error::Uncorrectable(format!("syndrome {s} is not in the table")))?;
    c.inverse().apply(state)
}

/// Applies a `3 × 3` matrix to one site (0-based) of a state.
pub fn apply_local<T: Scalar>(u: &DenseMatrix<T>, site: usize, state: &StateVector<T>) -> Result<StateVector<T>> {
    let n = state.num_sites();
    if u.shape() != (3, 3) {
        return Err(Error::DimensionMismatch {
            op: "apply_local",
            left: u.shape(),
            right: (3, 3),
        });
    }
    if site >= n {
        return Err(Error::InvalidArgument(format!("site {site} outside 0..{n}")));
    }
    let stride = 3usize.pow((n - 1 - site) as u32);
    let mut out = vec![T::zero(); state.dim()];
    for (idx, a) in state.amplitudes().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let digit = (idx / stride) % 3;
        let base = idx - digit * stride;
        for r in 0..3 {
            let m = u.get(r, digit);
            if !m.is_zero() {
                out[base + r * stride].add_assign_ref(&m.mul_ref(a));
            }
        }
    }
    StateVector::from_amplitudes(out)
}

/// One outcome of a projective syndrome measurement.
#[derive(Clone, Debug, Serialize)]
pub struct Branch {
    pub syndrome: Syndrome,
    /// Born probability of this outcome.
    pub weight: f64,
    /// Fidelity of the corrected branch with the reference state.
    pub fidelity: f64,
}

/// Projects `state` onto each joint eigenspace of the generators, corrects
/// every branch with nonzero Born weight, and compares it with `reference`.
pub fn syndrome_branches(
    code: &StabilizerCode,
    table: &SyndromeTable,
    state: &StateVector<Complex64>,
    reference: &StateVector<Complex64>,
) -> Result<Vec<Branch>> {
    let total = state.norm_sqr().re;
    Syndrome::all(code.generators().len())
        .into_par_iter()
        .map(|s| {
            let mut v = state.clone();
            for (g, &e) in code.generators().iter().zip(s.exponents()) {
                v = eigenspace_projection(g, e, &v)?;
            }
            let weight = v.norm_sqr().re / total;
            if weight <= 1e-14 {
                return Ok(None);
            }
            let fixed = correct(code, table, &v.normalized())?;
            let fidelity = fixed.fidelity(reference)?.re;
            Ok(Some(Branch { syndrome: s, weight, fidelity }))
        })
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;
    use crate::cyclo::CycloNumber;
    use crate::errormodel::random_unitary;
    use crate::rng::stream_rng;
    use num_traits::One;
    use std::sync::OnceLock;

    fn fixture() -> &'static (StabilizerCode, SyndromeTable) {
        static F: OnceLock<(StabilizerCode, SyndromeTable)> = OnceLock::new();
        F.get_or_init(|| {
            let c = build_code();
            let t = build_syndrome_table(&c).unwrap();
            (c, t)
        })
    }

    fn p(s: &str) -> TernaryPauli {
        s.parse().unwrap()
    }

    #[test]
    fn error_set() {
        let set = single_error_set(5);
        assert_eq!(set.len(), 41);
        let mut v: Vec<_> = set.iter().map(TernaryPauli::symplectic).collect();
        v.sort();
        v.dedup();
        assert_eq!(v.len(), 41);
        for e in &set {
            assert!(e.to_dense::<CycloNumber>().unwrap().is_unitary());
        }
    }

    #[test]
    fn first_qutrit_rows() {
        let (code, _) = fixture();
        let show = |s: &str| syndrome_of(code, &p(s)).unwrap().to_string();
        assert_eq!(show("I I I I I"), "(1, 1, 1, 1)");
        assert_eq!(show("X I I I I"), "(1, 1, w, w)");
        assert_eq!(show("X2 I I I I"), "(1, 1, w2, w2)");
        assert_eq!(show("Z I I I I"), "(1, w2, 1, 1)");
        assert_eq!(show("Z2 I I I I"), "(1, w, 1, 1)");
    }

    #[test]
    fn table_is_nondegenerate() {
        let (_, table) = fixture();
        assert_eq!(table.len(), 41);
        assert_eq!(table.distinct_syndromes(), 41);
        assert!(table.degeneracies().is_empty());
        assert_eq!(table.correction(&Syndrome::new(vec![0; 4])), Some(&TernaryPauli::identity(5)));
    }

    #[test]
    fn csv_layout() {
        let (_, table) = fixture();
        let csv = table.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 42);
        assert_eq!(lines[1], "0,I,1,1,1,1");
        assert_eq!(lines[2], "1,X,1,1,w,w");
        assert_eq!(lines[41].split(',').take(2).collect::<Vec<_>>(), ["5", "Y22"]);
        let rows: Vec<SyndromeRow> = serde_json::from_str(&table.to_json()).unwrap();
        assert_eq!(rows, table.rows());
    }

    #[test]
    fn collisions_that_are_not_degenerate_fail() {
        // the third qutrit is unprotected, so Z on it looks like no error
        let code = StabilizerCode::from_generators(vec![p("X I I"), p("I Z I")]).unwrap();
        assert!(matches!(build_syndrome_table(&code), Err(Error::SyndromeCollision { .. })));
    }

    #[test]
    fn symbolic_correction_of_every_single_error() {
        let (code, table) = fixture();
        for e in single_error_set(5) {
            assert!(table.corrects(code, &e).unwrap());
            assert!(table.corrects(code, &e.with_phase(2)).unwrap());
        }
        assert!(!table.corrects(code, &p("X I Z I I")).unwrap());
    }

    #[test]
    fn dense_round_trip_exact() {
        let (code, table) = fixture();
        let psi = &code.codewords()[1];
        let e = p("I Y21 I I I");
        let hit = e.apply(psi).unwrap();
        assert_eq!(extract_syndrome(code, &hit).unwrap(), syndrome_of(code, &e).unwrap());
        let fixed = correct(code, table, &hit).unwrap();
        assert_eq!(fixed.fidelity(psi).unwrap(), CycloNumber::one());
        assert_eq!(&correct(code, table, psi).unwrap(), psi);
    }

    #[test]
    fn superposed_corruptions_are_not_eigenstates() {
        let (code, _) = fixture();
        let w = &code.codewords()[0];
        let mixed = p("X I I I I").apply(w).unwrap().add(&p("I I Z I I").apply(w).unwrap()).unwrap();
        assert!(matches!(extract_syndrome(code, &mixed), Err(Error::NotEigenstate { .. })));
    }

    #[test]
    fn two_errors_miscorrect() {
        let (code, table) = fixture();
        let w = &code.codewords()[0];
        let hit = p("X I Z I I").apply(w).unwrap();
        match correct(code, table, &hit) {
            Ok(out) => assert_ne!(out.fidelity(w).unwrap(), CycloNumber::one()),
            Err(e) => assert!(matches!(e, Error::Uncorrectable(_))),
        }
    }

    #[test]
    fn apply_local_matches_pauli() {
        let w = fixture().0.codewords()[0].to_complex();
        let y: DenseMatrix<Complex64> = TernaryPauli::single_site(1, 0, 1, 2).to_dense().unwrap();
        let a = apply_local(&y, 3, &w).unwrap();
        let b = TernaryPauli::single_site(5, 3, 1, 2).apply(&w).unwrap();
        assert!(a.sub(&b).unwrap().norm() < 1e-14);
    }

    #[test]
    fn random_unitary_branches_all_recover() {
        let (code, table) = fixture();
        let psi = code.codewords()[2].to_complex();
        let u = random_unitary(&mut stream_rng(3, 0));
        let hit = apply_local(&u, 2, &psi).unwrap();
        let branches = syndrome_branches(code, table, &hit, &psi).unwrap();
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(branches.len() > 1 && branches.len() <= 9);
        for b in branches {
            assert!(b.fidelity >= 1.0 - 1e-10, "{b:?}");
        }
    }
}
