//! Exact arithmetic in the Eisenstein rationals `Q(ω)`, `ω = e^{2πi/3}`.
//!
//! Every amplitude and phase that shows up in the five-qutrit code is of the
//! form `a + bω` with rational `a, b`, so the exact path never needs square
//! roots or floating point. [`Scalar`] abstracts over this exact field and
//! `Complex64`, so the same dense algorithms run on either.

mod json;
mod matrix;

pub use json::{AnyMatrix, Entry, MatrixJson, ToEntry};
pub use matrix::{ket_index, ket_label, DenseMatrix, StateVector};

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const SQRT3_OVER_2: f64 = 0.866_025_403_784_438_6;

/// An element `a + bω` of `Q(ω)`.
///
/// `ω² = −1 − ω`, so products stay in this two-coordinate form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloNumber {
    a: BigRational,
    b: BigRational,
}

impl CycloNumber {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn from_integers(a: i64, b: i64) -> Self {
        Self::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn omega() -> Self {
        Self::from_integers(0, 1)
    }

    /// `ω^k` for any integer `k`.
    pub fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::from_integers(0, 1),
            _ => Self::from_integers(-1, -1),
        }
    }

    /// Rational part `a`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of `ω`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    /// Complex conjugate: `ω̄ = ω²`, so `a + bω ↦ (a − b) − bω`.
    pub fn conj(&self) -> Self {
        Self::new(&self.a - &self.b, -&self.b)
    }

    /// `|x|² = a² − ab + b²`, always a nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        let c = self.conj();
        Some(Self::new(c.a / &n, c.b / n))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.a * r, &self.b * r)
    }

    /// Embedding into `C` with `ω ↦ −1/2 + i√3/2`.
    pub fn embed(&self) -> Complex64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        Complex64::new(a - 0.5 * b, SQRT3_OVER_2 * b)
    }

    pub fn is_real(&self) -> bool {
        self.b.is_zero()
    }

    /// Returns `k` if this number is exactly `ω^k`.
    pub fn as_unit_root(&self) -> Option<u8> {
        (0..3u8).find(|&k| *self == Self::omega_pow(k as i64))
    }

    /// Rational value, if the number is real.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.is_real().then_some(&self.a)
    }

    fn mul_impl(&self, rhs: &Self) -> Self {
        // (a + bω)(c + dω) = (ac − bd) + (ad + bc − bd)ω
        let bd = &self.b * &rhs.b;
        Self::new(
            &self.a * &rhs.a - &bd,
            &self.a * &rhs.b + &self.b * &rhs.a - bd,
        )
    }
}

/// Coefficient of `w`, with a unit coefficient left implicit.
fn fmt_w_coeff(r: &BigRational) -> String {
    if r.is_one() {
        String::new()
    } else if (-r).is_one() {
        "-".into()
    } else {
        fmt_rational(r)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.a)),
            (true, false) => write!(f, "{}w", fmt_w_coeff(&self.b)),
            (false, false) => {
                let sign = if self.b.is_negative() { '-' } else { '+' };
                write!(f, "{} {} {}w", fmt_rational(&self.a), sign, fmt_w_coeff(&self.b.abs()))
            }
        }
    }
}

impl Zero for CycloNumber {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for CycloNumber {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl Add for CycloNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl AddAssign<&CycloNumber> for CycloNumber {
    fn add_assign(&mut self, rhs: &CycloNumber) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl Sub for CycloNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        CycloNumber::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for CycloNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_impl(&rhs)
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.mul_impl(rhs)
    }
}

impl Neg for CycloNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl FromStr for CycloNumber {
    type Err = Error;

    /// Accepts the `Display` form: `"a"`, `"bw"` or `"a ± bw"`, where a unit
    /// `b` may be left out (`"w"`, `"-1 - w"`).
    fn from_str(s: &str) -> Result<Self> {
        let parse_q = |t: &str| -> Result<BigRational> {
            t.trim()
                .parse::<BigRational>()
                .map_err(|_| Error::Parse(format!("bad rational {t:?}")))
        };
        let parse_w = |t: &str| -> Result<BigRational> {
            match t.trim() {
                "" => Ok(BigRational::one()),
                "-" => Ok(-BigRational::one()),
                t => parse_q(t),
            }
        };
        let s = s.trim();
        let (re, im) = match s.find(" + ").or_else(|| s.find(" - ")) {
            Some(i) => {
                let neg = &s[i..i + 3] == " - ";
                let b = s[i + 3..]
                    .strip_suffix('w')
                    .ok_or_else(|| Error::Parse(format!("missing w in {s:?}")))?;
                let b = parse_w(b)?;
                (parse_q(&s[..i])?, if neg { -b } else { b })
            }
            None => match s.strip_suffix('w') {
                Some(b) => (BigRational::zero(), parse_w(b)?),
                None => (parse_q(s)?, BigRational::zero()),
            },
        };
        Ok(Self::new(re, im))
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    a: String,
    b: String,
}

impl Serialize for CycloNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            a: fmt_rational(&self.a),
            b: fmt_rational(&self.b),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycloNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = CycloRepr::deserialize(deserializer)?;
        let a = repr.a.trim().parse::<BigRational>().map_err(|_| D::Error::custom("bad rational in a"))?;
        let b = repr.b.trim().parse::<BigRational>().map_err(|_| D::Error::custom("bad rational in b"))?;
        Ok(Self::new(a, b))
    }
}

/// Field operations shared by the exact and the floating-point paths.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// `ω^k`.
    fn omega_pow(k: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn conj(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn add_assign_ref(&mut self, rhs: &Self);
    /// Exact zero test on the exact path; `|x| ≤ tol` on the float path.
    fn is_negligible(&self, tol: f64) -> bool;
    /// Whether arithmetic is exact. Exact paths ignore tolerances.
    fn is_exact() -> bool;
}

impl Scalar for CycloNumber {
    fn omega_pow(k: i64) -> Self {
        CycloNumber::omega_pow(k)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        CycloNumber::from_ratio(num, den)
    }
    fn conj(&self) -> Self {
        CycloNumber::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        CycloNumber::inv(self)
    }
    fn to_complex(&self) -> Complex64 {
        self.embed()
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self.mul_impl(rhs)
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Complex64 {
    fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(-0.5, SQRT3_OVER_2),
            _ => Complex64::new(-0.5, -SQRT3_OVER_2),
        }
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn inv(&self) -> Option<Self> {
        (*self != Complex64::zero()).then(|| Complex64::inv(self))
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn is_exact() -> bool {
        false
    }
}

/// Rational from an integer pair; panics on a zero denominator.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
