//! Exact arithmetic in `Z[zeta_p]` and `Q(zeta_p)`.
//!
//! A [`CycloInt`] stores `p - 1` integer coordinates in the basis
//! `1, zeta, .., zeta^{p-2}`; products are formed modulo `x^p - 1` and reduced
//! eagerly with `zeta^{p-1} = -(1 + zeta + .. + zeta^{p-2})`.

use crate::error::{Error, Result};
use crate::ff::{ExtField, FieldElement};
use crate::ring::{IntegralDomain, Ring};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloInt {
    p: u32,
    coords: Vec<BigInt>,
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (i, One::is_one(&a)) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "z^{i}")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl CycloInt {
    pub fn zero(p: u32) -> Self {
        CycloInt { p, coords: vec![BigInt::zero(); p as usize - 1] }
    }

    pub fn one(p: u32) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    pub fn from_integer(p: u32, n: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.coords[0] = n;
        z
    }

    /// From `p - 1` coordinates in the reduced basis.
    pub fn from_coords(p: u32, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != p as usize - 1 {
            return Err(Error::InvalidInput(format!("expected {} coordinates, got {}", p - 1, coords.len())));
        }
        Ok(CycloInt { p, coords })
    }

    /// From `p` coefficients of `1, zeta, .., zeta^{p-1}`.
    pub fn from_full(p: u32, mut v: Vec<BigInt>) -> Self {
        debug_assert_eq!(v.len(), p as usize);
        let top = v.pop().unwrap();
        if !Zero::is_zero(&top) {
            v.iter_mut().for_each(|c| *c -= &top);
        }
        CycloInt { p, coords: v }
    }

    /// Reduce a length-`p` table of small counts.
    pub fn from_counts(p: u32, counts: &[i64]) -> Self {
        Self::from_full(p, counts.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational integer this element equals, if any.
    pub fn as_integer(&self) -> Option<&BigInt> {
        self.coords[1..].iter().all(Zero::is_zero).then_some(&self.coords[0])
    }

    /// The automorphism `zeta -> zeta^u`, `p` not dividing `u`.
    pub fn galois(&self, u: u32) -> Self {
        let p = self.p as usize;
        let mut v = vec![BigInt::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            v[i * u as usize % p] += c;
        }
        Self::from_full(self.p, v)
    }

    pub fn conjugate(&self) -> Self {
        self.galois(self.p - 1)
    }

    /// Values at `zeta -> e^{2 pi i m/p}` for `m = 1..p-1`.
    pub fn embeddings(&self) -> Vec<Complex64> {
        let p = self.p as f64;
        let cs: Vec<f64> = self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
        (1..self.p)
            .map(|m| {
                cs.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (i, &c)| {
                    let k = (m as usize * i) % self.p as usize;
                    acc + Complex64::from_polar(c, 2.0 * std::f64::consts::PI * k as f64 / p)
                })
            })
            .collect()
    }

    /// `N(self)`, the product of all conjugates, as a rational integer.
    pub fn norm(&self) -> BigInt {
        self.adjugate_norm().1
    }

    /// `(prod_{u=2}^{p-1} sigma_u(self), N(self))`.
    fn adjugate_norm(&self) -> (Self, BigInt) {
        let mut adj = Self::one(self.p);
        for u in 2..self.p {
            adj = adj.mul_ref(&self.galois(u));
        }
        let n = self.mul_ref(&adj);
        let n = n.as_integer().expect("the norm is a rational integer").clone();
        (adj, n)
    }

    fn content(&self) -> BigInt {
        self.coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Valuation at the prime above `p`, normalized so `v(p) = 1`; `None`
    /// for zero.
    pub fn pi_adic_valuation(&self) -> Option<BigRational> {
        if self.is_zero() {
            return None;
        }
        let p = BigInt::from(self.p);
        let mut z = self.clone();
        let mut count: i64 = 0;
        let mut g2 = z.content();
        let mut e = 0i64;
        while Zero::is_zero(&(&g2 % &p)) {
            g2 /= &p;
            e += 1;
        }
        if e > 0 {
            let pe = num_traits::pow(p.clone(), e as usize);
            z.coords.iter_mut().for_each(|c| *c /= &pe);
            count += e * (self.p as i64 - 1);
        }
        while let Some(w) = z.div_by_one_minus_zeta() {
            z = w;
            count += 1;
        }
        Some(BigRational::new(BigInt::from(count), BigInt::from(self.p - 1)))
    }

    /// Exact quotient by `1 - zeta`, solved as a bidiagonal system.
    fn div_by_one_minus_zeta(&self) -> Option<Self> {
        // with s = w_{p-2}: c_i = w_i - w_{i-1} + s, so w_i = sum_{j<=i} c_j - (i+1) s
        // and the last coordinate forces p s = sum c
        let n = self.coords.len();
        let total: BigInt = self.coords.iter().sum();
        let (s, r) = total.div_rem(&BigInt::from(n + 1));
        if !Zero::is_zero(&r) {
            return None;
        }
        let mut w = Vec::with_capacity(n);
        let mut acc = BigInt::zero();
        for (i, c) in self.coords.iter().enumerate() {
            acc += c;
            w.push(&acc - &s * BigInt::from(i + 1));
        }
        Some(CycloInt { p: self.p, coords: w })
    }
}

impl Ring for CycloInt {
    fn zero_like(&self) -> Self {
        Self::zero(self.p)
    }
    fn one_like(&self) -> Self {
        Self::one(self.p)
    }
    fn is_zero(&self) -> bool {
        CycloInt::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        CycloInt { p: self.p, coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        CycloInt { p: self.p, coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        let p = self.p as usize;
        let mut v = vec![BigInt::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if Zero::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !Zero::is_zero(b) {
                    v[(i + j) % p] += a * b;
                }
            }
        }
        Self::from_full(self.p, v)
    }
    fn neg_ref(&self) -> Self {
        CycloInt { p: self.p, coords: self.coords.iter().map(|c| -c).collect() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_integer(self.p, BigInt::from(n))
    }
    fn div_int(&self, n: i64) -> Option<Self> {
        let n = BigInt::from(n);
        if Zero::is_zero(&n) {
            return None;
        }
        let mut out = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(&n);
            if !Zero::is_zero(&r) {
                return None;
            }
            out.push(q);
        }
        Some(CycloInt { p: self.p, coords: out })
    }
}

impl IntegralDomain for CycloInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if let Some(n) = rhs.as_integer() {
            return self.div_big(n);
        }
        let (adj, n) = rhs.adjugate_norm();
        self.mul_ref(&adj).div_big(&n)
    }
}

impl CycloInt {
    fn div_big(&self, n: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.coords.len());
        for c in &self.coords {
            let (q, r) = c.div_rem(n);
            if !Zero::is_zero(&r) {
                return None;
            }
            out.push(q);
        }
        Some(CycloInt { p: self.p, coords: out })
    }
}

#[derive(Serialize, Deserialize)]
struct CycloJson {
    p: u32,
    coords: Vec<String>,
}

impl Serialize for CycloInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloJson { p: self.p, coords: self.coords.iter().map(|c| c.to_string()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = CycloJson::deserialize(d)?;
        let coords = j
            .coords
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycloInt::from_coords(j.p, coords).map_err(serde::de::Error::custom)
    }
}

/// `zeta_p^a`.
pub fn psi(p: u32, a: u64) -> CycloInt {
    let a = (a % p as u64) as usize;
    let mut v = vec![BigInt::zero(); p as usize];
    v[a] = BigInt::one();
    CycloInt::from_full(p, v)
}

/// Legendre-type character of the field of `t`: `0`, `1` or `-1`.
pub fn quadratic_character(t: &FieldElement) -> Result<i8> {
    if t.field().p() == 2 {
        return Err(Error::EvenCharacteristic);
    }
    if t.is_zero() {
        return Ok(0);
    }
    let e = (t.field().size() - 1) / 2;
    Ok(if t.pow_big(e) == FieldElement::one(t.field()) { 1 } else { -1 })
}

/// `g(psi, rho) = -sum_{t != 0} psi(Tr t) rho(t)` over the given field.
pub fn gauss_sum_quadratic(field: &Arc<ExtField>) -> Result<CycloInt> {
    let p = field.p();
    if p == 2 {
        return Err(Error::EvenCharacteristic);
    }
    let mut counts = vec![0i64; p as usize];
    for t in FieldElement::all(field).skip(1) {
        let tr = t.absolute_trace() as usize;
        counts[tr] -= quadratic_character(&t)? as i64;
    }
    Ok(CycloInt::from_counts(p, &counts))
}

/// An element of `Q(zeta_p)`: numerator over a positive rational integer.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycloRat {
    num: CycloInt,
    den: BigInt,
}

impl fmt::Debug for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if One::is_one(&self.den) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl CycloRat {
    pub fn new(num: CycloInt, den: BigInt) -> Result<Self> {
        if Zero::is_zero(&den) {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(mut num: CycloInt, mut den: BigInt) -> Self {
        if den.is_negative() {
            num = num.neg_ref();
            den = -den;
        }
        let g = num.content().gcd(&den);
        if !One::is_one(&g) && !Zero::is_zero(&g) {
            num = num.div_big(&g).unwrap();
            den /= &g;
        }
        if num.is_zero() {
            den = BigInt::one();
        }
        CycloRat { num, den }
    }

    pub fn from_int(z: CycloInt) -> Self {
        CycloRat { num: z, den: BigInt::one() }
    }

    pub fn numerator(&self) -> &CycloInt {
        &self.num
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn to_int(&self) -> Option<CycloInt> {
        One::is_one(&self.den).then(|| self.num.clone())
    }

    pub fn conjugate(&self) -> Self {
        CycloRat { num: self.num.conjugate(), den: self.den.clone() }
    }

    pub fn embeddings(&self) -> Vec<Complex64> {
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        self.num.embeddings().into_iter().map(|z| z / d).collect()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        let (adj, n) = self.num.adjugate_norm();
        Some(Self::normalized(adj.mul_ref(&CycloInt::from_integer(self.num.p, self.den.clone())), n))
    }
}

impl Ring for CycloRat {
    fn zero_like(&self) -> Self {
        Self::from_int(self.num.zero_like())
    }
    fn one_like(&self) -> Self {
        Self::from_int(self.num.one_like())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::normalized(self.num.add_ref(&rhs.num), self.den.clone());
        }
        let a = self.num.mul_ref(&CycloInt::from_integer(self.num.p, rhs.den.clone()));
        let b = rhs.num.mul_ref(&CycloInt::from_integer(self.num.p, self.den.clone()));
        Self::normalized(a.add_ref(&b), &self.den * &rhs.den)
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        Self::normalized(self.num.mul_ref(&rhs.num), &self.den * &rhs.den)
    }
    fn neg_ref(&self) -> Self {
        CycloRat { num: self.num.neg_ref(), den: self.den.clone() }
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::from_int(self.num.from_int_like(n))
    }
    fn div_int(&self, n: i64) -> Option<Self> {
        (n != 0).then(|| Self::normalized(self.num.clone(), &self.den * BigInt::from(n)))
    }
}

impl IntegralDomain for CycloRat {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul_ref(&rhs.inv()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;
    use proptest::prelude::*;

    fn ci(p: u32, c: &[i64]) -> CycloInt {
        CycloInt::from_coords(p, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(7, 0), CycloInt::one(7));
        let total = (0..7).fold(CycloInt::zero(7), |acc, a| acc.add_ref(&psi(7, a)));
        assert!(total.is_zero());
        assert_eq!(psi(7, 6), ci(7, &[-1; 6]));
        assert_eq!(psi(7, 3).mul_ref(&psi(7, 5)), psi(7, 1));
        assert_eq!(psi(7, 2).conjugate(), psi(7, 5));
    }

    #[test]
    fn gauss_sums() {
        let g5 = gauss_sum_quadratic(&build_field(5, 1).unwrap()).unwrap();
        assert_eq!(g5.mul_ref(&g5), CycloInt::from_integer(5, 5.into()));
        let g7 = gauss_sum_quadratic(&build_field(7, 1).unwrap()).unwrap();
        assert_eq!(g7.mul_ref(&g7), CycloInt::from_integer(7, (-7).into()));
        assert_eq!(g7.mul_ref(&g7.conjugate()), CycloInt::from_integer(7, 7.into()));
        for (p, n) in [(3u64, 2usize), (5, 2), (3, 3)] {
            let f = build_field(p, n).unwrap();
            let g = gauss_sum_quadratic(&f).unwrap();
            let q = BigInt::from(f.size() as u64);
            assert_eq!(g.mul_ref(&g.conjugate()), CycloInt::from_integer(p as u32, q));
        }
    }

    #[test]
    fn quadratic_character_examples() {
        let f = build_field(7, 1).unwrap();
        let ch = |n| quadratic_character(&FieldElement::from_int(&f, n)).unwrap();
        assert_eq!(ch(1), 1);
        assert_eq!(ch(0), 0);
        assert_eq!(ch(3), -1);
        assert_eq!([1, 2, 4].map(ch), [1, 1, 1]);
        assert_eq!(quadratic_character(&FieldElement::one(&build_field(2, 2).unwrap())), Err(Error::EvenCharacteristic));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(CycloInt::from_integer(7, 7.into()).pi_adic_valuation(), Some(BigRational::from_integer(1.into())));
        let pi = CycloInt::one(7).sub_ref(&psi(7, 1));
        assert_eq!(pi.pi_adic_valuation(), Some(BigRational::new(1.into(), 6.into())));
        assert_eq!(CycloInt::zero(7).pi_adic_valuation(), None);
        assert_eq!(CycloInt::one(5).pi_adic_valuation(), Some(BigRational::zero()));
        // direct: (1 - zeta)^k divides exactly k times
        let mut z = CycloInt::one(5);
        for k in 0..10 {
            assert_eq!(z.pi_adic_valuation(), Some(BigRational::new(k.into(), 4.into())));
            z = z.mul_ref(&CycloInt::one(5).sub_ref(&psi(5, 1)));
        }
    }

    #[test]
    fn embeddings_of_sum() {
        // 1 + 3 zeta + 3 zeta^6 is a sum of two cubic Gauss sums
        let s = CycloInt::one(7).add_ref(&psi(7, 1).scale_int(3)).add_ref(&psi(7, 6).scale_int(3));
        for (m, z) in s.embeddings().into_iter().enumerate() {
            let c = (2.0 * std::f64::consts::PI * (m + 1) as f64 / 7.0).cos();
            assert!((z.re - (1.0 + 6.0 * c)).abs() < 1e-12 && z.im.abs() < 1e-12);
            assert!(z.norm() <= 2.0 * 7f64.sqrt());
        }
        for z in psi(7, 1).embeddings() {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        assert!(CycloInt::one(11).embeddings().iter().all(|z| (z - 1.0).norm() < 1e-15));
    }

    #[test]
    fn json_round_trip() {
        let z = ci(5, &[1, -2, 0, 12345678901234]).mul_ref(&ci(5, &[99999999999, 0, 3, 1]));
        let s = serde_json::to_string(&z).unwrap();
        assert!(s.starts_with("{\"p\":5,\"coords\":[\""));
        assert_eq!(serde_json::from_str::<CycloInt>(&s).unwrap(), z);
    }

    #[test]
    fn rationals() {
        let a = CycloRat::new(psi(5, 1), 3.into()).unwrap();
        let b = CycloRat::new(ci(5, &[2, 0, 1, 0]), (-4).into()).unwrap();
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q.mul_ref(&b), a);
        assert_eq!(a.sub_ref(&a), a.zero_like());
        assert!(a.div_int(2).unwrap().denominator() == &BigInt::from(6));
    }

    fn arb(p: u32) -> impl Strategy<Value = CycloInt> {
        proptest::collection::vec(-1_000_000i64..1_000_000, p as usize - 1)
            .prop_map(move |c| CycloInt::from_coords(p, c.into_iter().map(BigInt::from).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb(7), b in arb(7), c in arb(7)) {
            prop_assert_eq!(a.add_ref(&b).sub_ref(&b), a.clone());
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
            if !b.is_zero() {
                prop_assert_eq!(a.mul_ref(&b).div_exact(&b), Some(a.clone()));
            }
        }

        #[test]
        fn embeddings_are_homomorphic(a in arb(5), b in arb(5)) {
            let ea = a.embeddings();
            let eb = b.embeddings();
            let eab = a.mul_ref(&b).embeddings();
            for i in 0..4 {
                let expect = ea[i] * eb[i];
                prop_assert!((eab[i] - expect).norm() <= 1e-9 * expect.norm().max(1.0));
            }
        }

        #[test]
        fn valuation_is_additive(a in arb(5), b in arb(5), k in 0u32..4) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let a = a.mul_ref(&CycloInt::one(5).sub_ref(&psi(5, 2)).pow(k as u64));
            let va = a.pi_adic_valuation().unwrap();
            let vb = b.pi_adic_valuation().unwrap();
            prop_assert_eq!(a.mul_ref(&b).pi_adic_valuation().unwrap(), va + vb);
        }

        #[test]
        fn units_preserve_absolute_values(a in arb(7), s in 0u64..7) {
            let before = a.embeddings();
            let after = a.mul_ref(&psi(7, s)).embeddings();
            for (x, y) in before.iter().zip(&after) {
                prop_assert!((x.norm() - y.norm()).abs() <= 1e-12 * x.norm().max(1.0));
            }
        }
    }
}
