use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{StabilizerCode, Q};
use crate::cyclo::{ket_index, Scalar, StateVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodewordTerm {
    pub ket: String,
    pub coeff: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodewordListing {
    pub label: String,
    pub terms: Vec<CodewordTerm>,
}

/// Codeword export format: unnormalized term lists plus one normalization
/// constant (a rational such as `"1/9"`) applied to every listing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodewordsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    pub normalization: String,
    pub codewords: Vec<CodewordListing>,
}

/// Transcribed listings, stored verbatim including anomalies.
pub type PaperCodewords = CodewordsFile;

const BUNDLED: &str = include_str!("../../data/published_codewords.json");

pub fn bundled_paper_codewords() -> PaperCodewords {
    CodewordsFile::from_json(BUNDLED).expect("bundled data parses")
}

impl CodewordsFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn normalization_value(&self) -> Result<BigRational> {
        self.normalization
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad normalization {:?}", self.normalization)))
    }
}

impl CodewordListing {
    /// Sums the terms into a state (repeated kets add up) and scales by `norm`.
    pub fn to_state(&self, norm: &BigRational) -> Result<StateVector<Q>> {
        let sites = self
            .terms
            .first()
            .map(|t| t.ket.len())
            .ok_or_else(|| Error::Parse(format!("listing {} is empty", self.label)))?;
        let mut amps = vec![Q::zero(); 3usize.pow(sites as u32)];
        for t in &self.terms {
            amps[parse_ket(&t.ket, sites)?] += &t.coeff;
        }
        let scale = Q::new(norm.clone(), BigRational::zero());
        StateVector::from_amplitudes(amps.into_iter().map(|a| a.mul_ref(&scale)).collect())
    }

    /// Kets listed more than once, with their multiplicity.
    pub fn duplicates(&self) -> Vec<DuplicateKet> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for t in &self.terms {
            *counts.entry(&t.ket).or_default() += 1;
        }
        counts
            .into_iter()
            .filter(|(_, c)| *c > 1)
            .map(|(k, c)| DuplicateKet { ket: k.to_string(), count: c })
            .collect()
    }
}

fn parse_ket(ket: &str, sites: usize) -> Result<usize> {
    let digits: Vec<u8> = ket
        .chars()
        .map(|c| c.to_digit(3).map(|d| d as u8))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Parse(format!("bad ket {ket:?}")))?;
    if digits.len() != sites {
        return Err(Error::Parse(format!("ket {ket:?} has {} digits, expected {sites}", digits.len())));
    }
    Ok(ket_index(&digits))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DuplicateKet {
    pub ket: String,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ListingReport {
    pub label: String,
    pub term_count: usize,
    pub distinct_kets: usize,
    pub duplicates: Vec<DuplicateKet>,
    /// `‖v‖` after applying the normalization constant.
    pub norm: f64,
    /// `‖(I − P) v‖`.
    pub residual: f64,
    pub in_codespace: bool,
    /// `⟨v|Sᵢ|v⟩ / ⟨v|v⟩` per generator, as `[re, im]`.
    pub stabilizer_expectations: Vec<[f64; 2]>,
    /// `|⟨k_L|v⟩| / ‖v‖` against each canonical codeword.
    pub overlaps: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub provenance: Option<String>,
    pub listings: Vec<ListingReport>,
}

impl CrosscheckReport {
    pub fn anomaly_count(&self) -> usize {
        self.listings
            .iter()
            .map(|l| l.duplicates.len() + usize::from(!l.in_codespace))
            .sum()
    }
}

/// Compares each listing with the code space and the canonical codewords.
/// Nothing here fails on a mismatch; only unparsable data is an error.
pub fn crosscheck_paper_codewords(code: &StabilizerCode, published: &PaperCodewords) -> Result<CrosscheckReport> {
    let norm = published.normalization_value()?;
    let mut listings = Vec::with_capacity(published.codewords.len());
    for listing in &published.codewords {
        let v = listing.to_state(&norm)?;
        if v.num_sites() != code.num_sites() {
            return Err(Error::SizeMismatch { left: code.num_sites(), right: v.num_sites() });
        }
        let residual = v.sub(&code.project(&v)?)?.to_complex().norm();
        let vc = v.to_complex();
        let vv = vc.norm_sqr().re;
        let stabilizer_expectations = code
            .generators()
            .iter()
            .map(|g| {
                let e = vc.inner(&g.apply(&vc)?)? / vv;
                Ok([e.re, e.im])
            })
            .collect::<Result<_>>()?;
        let overlaps = code
            .codewords()
            .iter()
            .map(|w| Ok(w.to_complex().inner(&vc)?.norm() / vv.sqrt()))
            .collect::<Result<_>>()?;
        let distinct = listing.terms.iter().map(|t| &t.ket).collect::<std::collections::HashSet<_>>().len();
        listings.push(ListingReport {
            label: listing.label.clone(),
            term_count: listing.terms.len(),
            distinct_kets: distinct,
            duplicates: listing.duplicates(),
            norm: vv.sqrt(),
            residual,
            in_codespace: residual <= 1e-9,
            stabilizer_expectations,
            overlaps,
        });
    }
    Ok(CrosscheckReport {
        provenance: published.provenance.clone(),
        listings,
    })
}
