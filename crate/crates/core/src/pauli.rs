//! Generalized Pauli operators on `n` qutrits in symplectic form.
//!
//! A [`TernaryPauli`] is `ω^phase · ⊗ᵢ X^{xᵢ} Z^{zᵢ}` with every exponent in
//! `Z₃`, where `X|j⟩ = |j+1 mod 3⟩` and `Z|j⟩ = ωʲ|j⟩`. Moving a `Z` past an
//! `X` costs one power of ω (`ZX = ωXZ`), which is the only rule needed to
//! keep products in normal form.
//!
//! The single-qutrit error names map onto powers as `X₁ = X`, `X₂ = X²`,
//! `Z₁ = Z`, `Z₂ = Z²` and `Y_ij = X^i Z^j`. The text form writes them as
//! `I X X2 Z Z2 Y11 Y12 Y21 Y22`, with an optional `w^k *` phase prefix:
//!
//! ```
//! use ternary_qec::pauli::TernaryPauli;
//!
//! let s1: TernaryPauli = "I X Z Z X".parse().unwrap();
//! let e: TernaryPauli = "w^2 * Y12 I I I I".parse().unwrap();
//! assert_eq!(s1.commutation_exponent(&e).unwrap(), 0);
//! assert_eq!(e.to_string(), "w^2 * Y12 I I I I");
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclo::{DenseMatrix, Scalar, StateVector};
use crate::error::{Error, Result};

/// Dense conversion is refused above this many sites (3⁶ = 729).
pub const MAX_DENSE_SITES: usize = 6;

const SYMBOLS: [[&str; 3]; 3] = [["I", "Z", "Z2"], ["X", "Y11", "Y12"], ["X2", "Y21", "Y22"]];

/// Text symbol of `X^x Z^z` on one site.
pub fn site_symbol(x: u8, z: u8) -> &'static str {
    SYMBOLS[(x % 3) as usize][(z % 3) as usize]
}

/// Parses one site symbol into `(x, z)` exponents.
pub fn parse_site_symbol(s: &str) -> Result<(u8, u8)> {
    for (x, row) in SYMBOLS.iter().enumerate() {
        for (z, sym) in row.iter().enumerate() {
            if *sym == s {
                return Ok((x as u8, z as u8));
            }
        }
    }
    Err(Error::Parse(format!("unknown Pauli symbol {s:?}")))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TernaryPauli {
    x: Vec<u8>,
    z: Vec<u8>,
    phase: u8,
}

impl TernaryPauli {
    pub fn new(x: Vec<u8>, z: Vec<u8>, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::SizeMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        if x.iter().chain(&z).any(|&e| e > 2) || phase > 2 {
            return Err(Error::InvalidArgument("exponents must lie in 0..3".into()));
        }
        Ok(Self { x, z, phase })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![0; n],
            z: vec![0; n],
            phase: 0,
        }
    }

    /// `X^x Z^z` on `site` (0-based), identity elsewhere.
    pub fn single_site(n: usize, site: usize, x: u8, z: u8) -> Self {
        let mut p = Self::identity(n);
        p.x[site] = x % 3;
        p.z[site] = z % 3;
        p
    }

    /// From a `(z | x)` vector of length `2n`, phase zero.
    pub fn from_symplectic(v: &[u8]) -> Self {
        let n = v.len() / 2;
        Self {
            z: v[..n].iter().map(|e| e % 3).collect(),
            x: v[n..].iter().map(|e| e % 3).collect(),
            phase: 0,
        }
    }

    /// The `(z | x)` exponent vector.
    pub fn symplectic(&self) -> Vec<u8> {
        self.z.iter().chain(&self.x).copied().collect()
    }

    pub fn num_sites(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[u8] {
        &self.x
    }

    pub fn z(&self) -> &[u8] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 3;
        self
    }

    /// Number of sites acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(&a, &b)| a != 0 || b != 0).count()
    }

    /// Identity up to an overall phase.
    pub fn is_scalar(&self) -> bool {
        self.weight() == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar() && self.phase == 0
    }

    fn check_size(&self, other: &Self) -> Result<()> {
        if self.num_sites() != other.num_sites() {
            return Err(Error::SizeMismatch {
                left: self.num_sites(),
                right: other.num_sites(),
            });
        }
        Ok(())
    }

    /// `self · other` in normal form. Each site contributes `z_self · x_other`
    /// to the phase from commuting `Z^{z}` past `X^{x'}`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_size(other)?;
        let mut phase = self.phase as u32 + other.phase as u32;
        for (zs, xo) in self.z.iter().zip(&other.x) {
            phase += *zs as u32 * *xo as u32;
        }
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| (a + b) % 3).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| (a + b) % 3).collect(),
            phase: (phase % 3) as u8,
        })
    }

    /// Inverse (equal to the adjoint): `(X^a Z^b)⁻¹ = ω^{ab} X^{−a} Z^{−b}`.
    pub fn inverse(&self) -> Self {
        let ab: u32 = self.x.iter().zip(&self.z).map(|(&a, &b)| a as u32 * b as u32).sum();
        Self {
            x: self.x.iter().map(|a| (3 - a) % 3).collect(),
            z: self.z.iter().map(|b| (3 - b) % 3).collect(),
            phase: ((3 * 3 - self.phase as u32 + ab) % 3) as u8,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.num_sites());
        for _ in 0..k {
            out = out.multiply(self).expect("same size");
        }
        out
    }

    /// `s` such that `self · other = ω^s · other · self`.
    pub fn commutation_exponent(&self, other: &Self) -> Result<u8> {
        self.check_size(other)?;
        let mut s = 0u32;
        for i in 0..self.num_sites() {
            s += self.z[i] as u32 * other.x[i] as u32;
            s += 2 * (other.z[i] as u32 * self.x[i] as u32);
        }
        Ok((s % 3) as u8)
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.commutation_exponent(other)? == 0)
    }

    /// The `3ⁿ × 3ⁿ` matrix of this operator.
    pub fn to_dense<T: Scalar>(&self) -> Result<DenseMatrix<T>> {
        let n = self.num_sites();
        if n > MAX_DENSE_SITES {
            return Err(Error::ResourceLimit {
                sites: n,
                max: MAX_DENSE_SITES,
            });
        }
        let dim = 3usize.pow(n as u32);
        let mut m = DenseMatrix::zeros(dim, dim);
        for col in 0..dim {
            let (row, k) = self.image(col);
            m.set(row, col, T::omega_pow(k as i64));
        }
        Ok(m)
    }

    /// Where basis ket `index` is sent, with the ω-exponent it picks up.
    pub(crate) fn image(&self, index: usize) -> (usize, u32) {
        let n = self.num_sites();
        let mut rem = index;
        let mut digits = vec![0u8; n];
        for d in digits.iter_mut().rev() {
            *d = (rem % 3) as u8;
            rem /= 3;
        }
        let mut k = self.phase as u32;
        let mut out = 0usize;
        for ((&j, &a), &b) in digits.iter().zip(&self.x).zip(&self.z) {
            // X^a Z^b |j⟩ = ω^{bj} |j + a⟩
            k += b as u32 * j as u32;
            out = out * 3 + ((j + a) % 3) as usize;
        }
        (out, k % 3)
    }

    /// Applies the operator to a state without densifying it.
    pub fn apply<T: Scalar>(&self, state: &StateVector<T>) -> Result<StateVector<T>> {
        if state.num_sites() != self.num_sites() {
            return Err(Error::SizeMismatch {
                left: self.num_sites(),
                right: state.num_sites(),
            });
        }
        let phases = [T::omega_pow(0), T::omega_pow(1), T::omega_pow(2)];
        let mut out = vec![T::zero(); state.dim()];
        for (col, amp) in state.amplitudes().iter().enumerate() {
            if amp.is_zero() {
                continue;
            }
            let (row, k) = self.image(col);
            out[row] = amp.mul_ref(&phases[k as usize]);
        }
        StateVector::from_amplitudes(out)
    }
}

impl Serialize for TernaryPauli {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TernaryPauli {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for TernaryPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "w^{} * ", self.phase)?;
        }
        let syms: Vec<&str> = self.x.iter().zip(&self.z).map(|(&x, &z)| site_symbol(x, z)).collect();
        write!(f, "{}", syms.join(" "))
    }
}

impl FromStr for TernaryPauli {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = match s.split_once('*') {
            Some((prefix, body)) => {
                let prefix = prefix.trim();
                let k = match prefix {
                    "w" => 1,
                    _ => prefix
                        .strip_prefix("w^")
                        .and_then(|k| k.trim().parse::<u8>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad phase prefix {prefix:?}")))?,
                };
                (k % 3, body)
            }
            None => (0, s),
        };
        let mut x = Vec::new();
        let mut z = Vec::new();
        for tok in body.split_whitespace() {
            let (a, b) = parse_site_symbol(tok)?;
            x.push(a);
            z.push(b);
        }
        if x.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        Self::new(x, z, phase)
    }
}
