//! JSON helpers shared by reports.

use crate::cyclo::CycloInt;
use crate::polyser::Poly;
use num_rational::BigRational;
use serde::ser::{SerializeSeq, Serializer};

pub fn ser_poly<S: Serializer>(p: &Poly<CycloInt>, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(p.coeffs().len()))?;
    for c in p.coeffs() {
        seq.serialize_element(c)?;
    }
    seq.end()
}

pub fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn ser_vertices<S: Serializer>(v: &[(usize, BigRational)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for (i, r) in v {
        seq.serialize_element(&(i, r.to_string()))?;
    }
    seq.end()
}

pub fn rationals_to_strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|r| r.to_string()).collect()
}
