//! Finite fields `F_{p^n}` with deterministic moduli, compatible embeddings
//! between them, traces and roots of unity.
//!
//! Elements are dense residue vectors in the power basis of a fixed
//! generator. The element order used everywhere ("smallest root", element
//! enumeration) is the index `c_0 + c_1 p + ... + c_{n-1} p^{n-1}`; the
//! modulus of `F_{p^n}` is the first irreducible polynomial in the same order
//! on its lower coefficients.

mod fp_poly;
mod tower;

pub use tower::{
    build_field, embed, field_hom, find_roots, minimal_extension_for_infinity, relative_trace,
    root_of_unity, FieldHom,
};

use crate::error::{Error, Result};
use crate::ring::{IntegralDomain, Ring};
use std::fmt;
use std::sync::Arc;

/// Default cap on the number of elements of any fully enumerated field.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut f = 2u64;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

/// Fails with `TooLarge` when a field of `size` elements may not be enumerated.
pub fn ensure_enumerable(size: u128, budget: u64) -> Result<()> {
    if size > budget as u128 {
        Err(Error::TooLarge { needed: size, budget })
    } else {
        Ok(())
    }
}

/// `F_{p^n}` presented as `F_p[x]/(modulus)`.
#[derive(Debug)]
pub struct ExtField {
    p: u32,
    degree: usize,
    /// `c_0..c_{n-1}` of the monic modulus; the leading 1 is implicit.
    modulus: Vec<u32>,
    size: u128,
    /// `Tr(g^i)` for `i < 2n - 1`, `g` the class of `x`.
    trace_powers: Vec<u32>,
}

impl ExtField {
    pub(crate) fn construct(p: u32, degree: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if degree == 0 {
            return Err(Error::InvalidInput("field degree must be positive".into()));
        }
        let pp = p as u64;
        let size = (p as u128)
            .checked_pow(degree as u32)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{degree} overflows")))?;
        let modulus = if degree == 1 {
            vec![0]
        } else {
            let count = pp.pow(degree as u32);
            (0..count)
                .map(|idx| {
                    let mut f = Vec::with_capacity(degree + 1);
                    let mut v = idx;
                    for _ in 0..degree {
                        f.push(v % pp);
                        v /= pp;
                    }
                    f.push(1);
                    f
                })
                .find(|f| fp_poly::is_irreducible(f, pp))
                .map(|f| f[..degree].iter().map(|&c| c as u32).collect())
                .expect("irreducible polynomials exist in every degree")
        };
        let mut field = ExtField { p, degree, modulus, size, trace_powers: Vec::new() };
        let mut g_pow = field.one_raw();
        let gen = field.generator_raw();
        let mut tp = Vec::with_capacity(2 * degree - 1);
        for _ in 0..(2 * degree - 1) {
            tp.push(field.trace_by_frobenius_raw(&g_pow));
            g_pow = field.mul_raw(&g_pow, &gen);
        }
        field.trace_powers = tp;
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u128 {
        self.size
    }

    /// Modulus coefficients `c_0..c_{n-1}` (leading 1 implicit).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub(crate) fn zero_raw(&self) -> Vec<u32> {
        vec![0; self.degree]
    }

    pub(crate) fn one_raw(&self) -> Vec<u32> {
        let mut v = self.zero_raw();
        v[0] = 1;
        v
    }

    fn generator_raw(&self) -> Vec<u32> {
        if self.degree == 1 {
            // root of the modulus x
            return vec![0];
        }
        let mut v = self.zero_raw();
        v[1] = 1;
        v
    }

    pub(crate) fn add_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        a.iter().zip(b).map(|(x, y)| (x + y) % p).collect()
    }

    pub(crate) fn sub_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p;
        a.iter().zip(b).map(|(x, y)| (x + p - y) % p).collect()
    }

    pub(crate) fn neg_raw(&self, a: &[u32]) -> Vec<u32> {
        let p = self.p;
        a.iter().map(|x| (p - x) % p).collect()
    }

    pub(crate) fn scale_raw(&self, a: &[u32], c: u32) -> Vec<u32> {
        let p = self.p as u64;
        a.iter().map(|&x| (x as u64 * c as u64 % p) as u32).collect()
    }

    pub(crate) fn mul_raw(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.degree;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus.iter().enumerate() {
                prod[k - n + i] = (prod[k - n + i] + c * (p - m as u64)) % p;
            }
        }
        prod[..n].iter().map(|&c| c as u32).collect()
    }

    pub(crate) fn pow_raw(&self, a: &[u32], mut e: u128) -> Vec<u32> {
        let mut acc = self.one_raw();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        acc
    }

    /// `Tr(x) = sum_{i<n} x^{p^i}` computed literally.
    pub(crate) fn trace_by_frobenius_raw(&self, a: &[u32]) -> u32 {
        let mut acc = self.zero_raw();
        let mut cur = a.to_vec();
        for _ in 0..self.degree {
            acc = self.add_raw(&acc, &cur);
            cur = self.pow_raw(&cur, self.p as u128);
        }
        debug_assert!(acc[1..].iter().all(|&c| c == 0), "trace must lie in F_p");
        acc[0]
    }

    /// Absolute trace via the precomputed traces of the power basis.
    pub(crate) fn trace_raw(&self, a: &[u32]) -> u32 {
        let p = self.p as u64;
        (a.iter().zip(&self.trace_powers).fold(0u64, |acc, (&x, &t)| (acc + x as u64 * t as u64) % p))
            as u32
    }

    /// Coefficients `w` with `Tr(z * y) = sum_j w_j y_j` for every `y`.
    pub(crate) fn trace_functional(&self, z: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.degree)
            .map(|j| {
                (z.iter().enumerate().fold(0u64, |acc, (i, &zi)| {
                    (acc + zi as u64 * self.trace_powers[i + j] as u64) % p
                })) as u32
            })
            .collect()
    }

    pub(crate) fn index_of_raw(&self, a: &[u32]) -> u128 {
        a.iter().rev().fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    pub(crate) fn raw_from_index(&self, mut idx: u128) -> Vec<u32> {
        let p = self.p as u128;
        (0..self.degree)
            .map(|_| {
                let c = (idx % p) as u32;
                idx /= p;
                c
            })
            .collect()
    }
}

/// An element of an [`ExtField`].
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<ExtField>,
    coeffs: Vec<u32>,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p
            && self.field.degree == other.field.degree
            && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    /// The deterministic element order (by index).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.index().cmp(&other.index())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}^{}{:?}", self.field.p, self.field.degree, self.coeffs)
    }
}

impl FieldElement {
    pub fn from_coeffs(field: &Arc<ExtField>, coeffs: Vec<u32>) -> Result<Self> {
        if coeffs.len() != field.degree || coeffs.iter().any(|&c| c >= field.p) {
            return Err(Error::InvalidInput(format!(
                "{coeffs:?} is not an element of F_{}^{}",
                field.p, field.degree
            )));
        }
        Ok(FieldElement { field: field.clone(), coeffs })
    }

    pub(crate) fn from_raw(field: &Arc<ExtField>, coeffs: Vec<u32>) -> Self {
        debug_assert_eq!(coeffs.len(), field.degree);
        FieldElement { field: field.clone(), coeffs }
    }

    pub fn zero(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.zero_raw())
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.one_raw())
    }

    pub fn from_int(field: &Arc<ExtField>, n: i64) -> Self {
        let mut v = field.zero_raw();
        v[0] = n.rem_euclid(field.p as i64) as u32;
        Self::from_raw(field, v)
    }

    /// The class of `x` in `F_p[x]/(modulus)`.
    pub fn generator(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.generator_raw())
    }

    /// Element with index `idx` in the deterministic element order.
    pub fn from_index(field: &Arc<ExtField>, idx: u128) -> Result<Self> {
        if idx >= field.size {
            return Err(Error::InvalidInput(format!(
                "index {idx} is outside F_{}^{} ({} elements)",
                field.p, field.degree, field.size
            )));
        }
        Ok(Self::from_raw(field, field.raw_from_index(idx)))
    }

    pub fn index(&self) -> u128 {
        self.field.index_of_raw(&self.coeffs)
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The residue when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u32> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    pub fn pow_big(&self, e: u128) -> Self {
        Self::from_raw(&self.field, self.field.pow_raw(&self.coeffs, e))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.pow_big(self.field.size - 2))
    }

    /// `x -> x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow_big(self.field.p as u128)
    }

    /// Absolute trace to `F_p`.
    pub fn absolute_trace(&self) -> u32 {
        self.field.trace_raw(&self.coeffs)
    }

    /// Absolute trace as the literal Frobenius sum (reference path).
    pub fn absolute_trace_by_frobenius(&self) -> u32 {
        self.field.trace_by_frobenius_raw(&self.coeffs)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self) -> Option<u128> {
        if self.is_zero() {
            return None;
        }
        let group = self.field.size - 1;
        let mut order = group;
        for r in prime_factors_u128(group) {
            while order % r == 0 && self.pow_big(order / r).is_one_elem() {
                order /= r;
            }
        }
        Some(order)
    }

    fn is_one_elem(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Enumerate every element in index order.
    pub fn all(field: &Arc<ExtField>) -> impl Iterator<Item = FieldElement> + '_ {
        (0..field.size).map(move |i| Self::from_raw(field, field.raw_from_index(i)))
    }
}

pub(crate) fn prime_factors_u128(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut f = 2u128;
    while f * f <= n {
        if n % f == 0 {
            out.push(f);
            while n % f == 0 {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Ring for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        FieldElement::one(&self.field)
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        Self::from_raw(&self.field, self.field.add_raw(&self.coeffs, &rhs.coeffs))
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        Self::from_raw(&self.field, self.field.sub_raw(&self.coeffs, &rhs.coeffs))
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Self::from_raw(&self.field, self.field.mul_raw(&self.coeffs, &rhs.coeffs))
    }
    fn neg_ref(&self) -> Self {
        Self::from_raw(&self.field, self.field.neg_raw(&self.coeffs))
    }
    fn from_int_like(&self, n: i64) -> Self {
        FieldElement::from_int(&self.field, n)
    }
    fn div_int(&self, n: i64) -> Option<Self> {
        let inv = FieldElement::from_int(&self.field, n).inv()?;
        Some(self.mul_ref(&inv))
    }
}

impl IntegralDomain for FieldElement {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul_ref(&rhs.inv()?))
    }
}
