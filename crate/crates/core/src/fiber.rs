//! The Airy family `f(x) + t x`, its exponential sums and fiber L-polynomials.

use crate::cyclo::{psi, CycloInt};
use crate::error::{Error, Result};
use crate::ff::{build_field, ensure_enumerable, field_hom, relative_trace, ExtField, FieldElement};
use crate::numeric::max_modulus_deviation;
use crate::polyser::{poly_from_power_sums, sym_power_poly, Poly};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// `f = c_0 + c_1 x + .. + c_d x^d` over `F_q`, `q = p^a`.
#[derive(Clone, Debug)]
pub struct AiryFamily {
    base: Arc<ExtField>,
    coeffs: Vec<FieldElement>,
}

impl AiryFamily {
    pub fn new(p: u64, a: usize, coeffs: Vec<FieldElement>) -> Result<Self> {
        let base = build_field(p, a)?;
        if p == 2 {
            return Err(Error::Unsupported("characteristic 2".into()));
        }
        if coeffs.iter().any(|c| c.field().degree() != a || c.field().p() as u64 != p) {
            return Err(Error::IncompatibleFields("coefficients must lie in F_q".into()));
        }
        let d = coeffs.len().saturating_sub(1);
        if d < 2 {
            return Err(Error::InvalidInput("f must have degree at least 2".into()));
        }
        if coeffs[d].is_zero() {
            return Err(Error::InvalidInput("leading coefficient c_d must be nonzero".into()));
        }
        if d as u64 % p == 0 {
            return Err(Error::InvalidInput(format!("p = {p} divides the degree {d}")));
        }
        Ok(AiryFamily { base, coeffs })
    }

    /// Coefficients given as integers: values in `0..q` are element indices
    /// (residues when `a = 1`), negative values are integers mod `p`.
    pub fn from_ints(p: u64, a: usize, values: &[i64]) -> Result<Self> {
        let base = build_field(p, a)?;
        let coeffs = values
            .iter()
            .map(|&v| {
                if v < 0 {
                    Ok(FieldElement::from_int(&base, v))
                } else if a == 1 {
                    Ok(FieldElement::from_int(&base, v))
                } else {
                    FieldElement::from_index(&base, v as u128)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, a, coeffs)
    }

    /// `x^d` over `F_p`.
    pub fn monomial(p: u64, d: usize) -> Result<Self> {
        let mut v = vec![0i64; d + 1];
        v[d] = 1;
        Self::from_ints(p, 1, &v)
    }

    pub fn p(&self) -> u32 {
        self.base.p()
    }

    pub fn a(&self) -> usize {
        self.base.degree()
    }

    pub fn q(&self) -> u128 {
        self.base.size()
    }

    pub fn base(&self) -> &Arc<ExtField> {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &FieldElement {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Element indices of `c_0..c_d`.
    pub fn coeff_indices(&self) -> Vec<u128> {
        self.coeffs.iter().map(FieldElement::index).collect()
    }

    /// Size of `F_{q^n}`, failing on overflow.
    pub fn ext_size(&self, n: usize) -> Result<u128> {
        self.q()
            .checked_pow(n as u32)
            .ok_or_else(|| Error::InvalidInput(format!("q^{n} overflows")))
    }
}

/// Counts `C[y][a]` of `x` in `F_{q^{ej}}` with relative trace `y` to `F_{q^e}`
/// and `Tr(f(x)) = a`.
pub struct TraceCounts {
    sub: Arc<ExtField>,
    counts: Vec<u64>,
}

impl TraceCounts {
    pub fn sub(&self) -> &Arc<ExtField> {
        &self.sub
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    pub fn count(&self, y: u128, a: u32) -> u64 {
        self.counts[y as usize * self.sub.p() as usize + a as usize]
    }

    /// `S(t) = sum_{y,a} C[y][a] psi(a + Tr(t y))`.
    pub fn sum_at(&self, t: &FieldElement) -> CycloInt {
        let p = self.sub.p() as usize;
        let n = self.sub.degree();
        let w = self.sub.trace_functional(t.coeffs());
        let mut r = vec![0i64; p];
        let mut digits = vec![0usize; n];
        for y in 0..self.sub.size() as usize {
            let shift = digits.iter().zip(&w).map(|(&d, &wc)| d * wc as usize).sum::<usize>() % p;
            let row = &self.counts[y * p..(y + 1) * p];
            for (a, &c) in row.iter().enumerate() {
                if c != 0 {
                    let b = if a + shift >= p { a + shift - p } else { a + shift };
                    r[b] += c as i64;
                }
            }
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        CycloInt::from_counts(p as u32, &r)
    }
}

fn binomials_mod(d: usize, p: u64) -> Vec<Vec<u64>> {
    let mut c = vec![vec![0u64; d + 1]; d + 1];
    for i in 0..=d {
        c[i][0] = 1;
        for m in 1..=i {
            c[i][m] = (c[i - 1][m - 1] + if m < i { c[i - 1][m] } else { 0 }) % p;
        }
    }
    c
}

/// One pass over `F_{q^{ej}}` accumulating [`TraceCounts`].
///
/// Each `x` is split as `h + l` by high and low coordinates, so
/// `Tr(f(h + l)) = sum_m Tr(z_m(h) l^m)` with `z_m(h) = sum_i c_i C(i,m) h^{i-m}`;
/// the trace pairing turns each term into a dot product against the
/// precomputed coordinates of `l^m`.
pub fn trace_counts(fam: &AiryFamily, e: usize, j: usize, budget: u64) -> Result<TraceCounts> {
    let p = fam.p() as u64;
    let ke = fam.a() * e;
    let n = ke * j;
    ensure_enumerable(fam.ext_size(e * j)?, budget)?;
    let big = build_field(p, n)?;
    let sub = build_field(p, ke)?;
    let d = fam.degree();
    let hom = field_hom(p, fam.a(), n)?;
    let cs: Vec<Vec<u32>> = fam.coeffs.iter().map(|c| hom.apply_raw(c.coeffs())).collect();
    let binom = binomials_mod(d, p);
    let y_basis: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut v = vec![0u32; n];
            v[i] = 1;
            relative_trace(&FieldElement::from_raw(&big, v), &sub).map(|y| y.coeffs().to_vec())
        })
        .collect::<Result<_>>()?;
    let lo = n / 2;
    let n_lo = (p as usize).pow(lo as u32);
    let n_hi = (p as usize).pow((n - lo) as u32);
    let digits = |mut idx: usize, len: usize| -> Vec<u32> {
        (0..len)
            .map(|_| {
                let c = (idx % p as usize) as u32;
                idx /= p as usize;
                c
            })
            .collect()
    };
    let y_of = |x: &[u32]| -> Vec<u32> {
        let mut y = vec![0u64; ke];
        for (xi, yb) in x.iter().zip(&y_basis) {
            if *xi != 0 {
                for (a, b) in y.iter_mut().zip(yb) {
                    *a += *xi as u64 * *b as u64;
                }
            }
        }
        y.into_iter().map(|v| (v % p) as u32).collect()
    };
    // powers l^1..l^d and relative traces for every low part
    let mut low_powers = Vec::with_capacity(n_lo * d * n);
    let mut low_traces = Vec::with_capacity(n_lo * ke);
    for li in 0..n_lo {
        let mut l = digits(li, lo);
        l.resize(n, 0);
        let mut cur = big.one_raw();
        for _ in 1..=d {
            cur = big.mul_raw(&cur, &l);
            low_powers.extend_from_slice(&cur);
        }
        low_traces.extend(y_of(&l));
    }
    let size = sub.size() as usize * p as usize;
    let counts = (0..n_hi)
        .into_par_iter()
        .fold(
            || vec![0u64; size],
            |mut acc, hi| {
                let mut h = vec![0u32; lo];
                h.extend(digits(hi, n - lo));
                let mut hp = vec![big.one_raw()];
                for i in 1..=d {
                    hp.push(big.mul_raw(&hp[i - 1], &h));
                }
                let mut tau = Vec::with_capacity(d * n);
                let mut a0 = 0u64;
                for m in 0..=d {
                    let mut z = big.zero_raw();
                    for i in m..=d {
                        let c = binom[i][m] as u32;
                        if c != 0 {
                            let term = big.scale_raw(&big.mul_raw(&cs[i], &hp[i - m]), c);
                            z = big.add_raw(&z, &term);
                        }
                    }
                    if m == 0 {
                        a0 = big.trace_raw(&z) as u64;
                    } else {
                        tau.extend(big.trace_functional(&z));
                    }
                }
                let yh = y_of(&h);
                for li in 0..n_lo {
                    let pw = &low_powers[li * d * n..(li + 1) * d * n];
                    let a = (tau.iter().zip(pw).fold(a0, |s, (&t, &w)| s + t as u64 * w as u64) % p) as usize;
                    let yl = &low_traces[li * ke..(li + 1) * ke];
                    let mut idx = 0usize;
                    for c in (0..ke).rev() {
                        let v = yh[c] + yl[c];
                        let v = if v as u64 >= p { v - p as u32 } else { v };
                        idx = idx * p as usize + v as usize;
                    }
                    acc[idx * p as usize + a] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(TraceCounts { sub, counts })
}

/// `S_j(t) = sum_{x in F_{q^{ej}}} psi(Tr(f(x) + t x))` for every `t` in
/// `F_{q^e}`, indexed by element index.
pub fn exp_sum_batch(fam: &AiryFamily, e: usize, j: usize, budget: u64) -> Result<Vec<CycloInt>> {
    let tc = trace_counts(fam, e, j, budget)?;
    let sub = tc.sub.clone();
    Ok((0..sub.size()).into_par_iter().map(|i| tc.sum_at(&FieldElement::from_raw(&sub, sub.raw_from_index(i)))).collect())
}

/// The same sums by the literal double loop.
pub fn exp_sum_naive(fam: &AiryFamily, e: usize, j: usize, t: &FieldElement, budget: u64) -> Result<CycloInt> {
    let p = fam.p() as u64;
    let ke = fam.a() * e;
    let n = ke * j;
    ensure_enumerable(fam.ext_size(e * j)?, budget)?;
    let big = build_field(p, n)?;
    let hom = field_hom(p, fam.a(), n)?;
    let cs: Vec<FieldElement> = fam.coeffs.iter().map(|c| hom.apply(c)).collect::<Result<_>>()?;
    let tt = field_hom(p, ke, n)?.apply(t)?;
    let mut r = vec![0i64; p as usize];
    for x in FieldElement::all(&big) {
        let mut v = FieldElement::zero(&big);
        for c in cs.iter().rev() {
            v = v.mul_ref(&x).add_ref(c);
        }
        v = v.add_ref(&tt.mul_ref(&x));
        r[v.absolute_trace_by_frobenius() as usize] += 1;
    }
    Ok(CycloInt::from_counts(p as u32, &r))
}

/// `L(f, t; T) = exp(sum S_m(t) T^m/m)` over the base `F_{q^e}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberLPoly {
    pub base_ext: usize,
    /// Element index of `t` in `F_{q^e}`.
    pub t: u128,
    /// Absolute degree of `F_{q^e}` over `F_p`.
    #[serde(skip)]
    pub field_degree: usize,
    #[serde(serialize_with = "crate::report::ser_poly")]
    pub l: Poly<CycloInt>,
    /// Whether the vanishing of the degree-`d` coefficient was verified.
    pub termination_checked: bool,
}

impl FiberLPoly {
    pub fn p(&self) -> u32 {
        self.l.coeffs()[0].p()
    }

    /// Largest relative deviation of a reciprocal root from `(q^e)^{1/2}`
    /// over all embeddings.
    pub fn weight_deviation(&self) -> f64 {
        let target = (self.p() as f64).powf(self.field_degree as f64 / 2.0);
        weight_deviation(&self.l, target)
    }
}

/// Largest relative deviation of any reciprocal root of `poly`, in any complex
/// embedding, from absolute value `target`.
pub fn weight_deviation(poly: &Poly<CycloInt>, target: f64) -> f64 {
    let Some(first) = poly.coeffs().first() else {
        return 0.0;
    };
    let embedded: Vec<Vec<_>> = poly.coeffs().iter().map(CycloInt::embeddings).collect();
    (0..first.p() as usize - 1)
        .map(|m| {
            let cs: Vec<_> = embedded.iter().map(|e| e[m]).collect();
            max_modulus_deviation(&cs, target)
        })
        .fold(0.0, f64::max)
}

/// Fiber polynomials at the given points of `F_{q^e}`, sharing one
/// enumeration per extension degree `j`.
pub fn fiber_l_polys(
    fam: &AiryFamily,
    e: usize,
    ts: &[FieldElement],
    budget: u64,
    check_termination: bool,
) -> Result<Vec<FiberLPoly>> {
    let d = fam.degree();
    let check = check_termination && fam.ext_size(e * d).map_or(false, |s| s <= budget as u128);
    let top = if check { d } else { d - 1 };
    let mut sums: Vec<Vec<CycloInt>> = vec![Vec::with_capacity(top); ts.len()];
    for j in 1..=top {
        let tc = trace_counts(fam, e, j, budget)?;
        let row: Vec<CycloInt> = ts.par_iter().map(|t| tc.sum_at(t)).collect();
        for (s, v) in sums.iter_mut().zip(row) {
            s.push(v);
        }
    }
    let p = fam.p();
    ts.iter()
        .zip(sums)
        .map(|(t, s)| {
            let ps: Vec<CycloInt> = s.iter().map(Ring::neg_ref).collect();
            let l = poly_from_power_sums(&ps, &CycloInt::one(p))?;
            if l.degree() != Some(d - 1) {
                return Err(Error::InternalMismatch(format!(
                    "fiber polynomial at t = {} has degree {:?}, expected {}",
                    t.index(),
                    l.degree(),
                    d - 1
                )));
            }
            Ok(FiberLPoly {
                base_ext: e,
                t: t.index(),
                field_degree: fam.a() * e,
                l,
                termination_checked: check,
            })
        })
        .collect()
}

pub fn fiber_l_poly(fam: &AiryFamily, e: usize, t: &FieldElement, budget: u64) -> Result<FiberLPoly> {
    if t.field().degree() != fam.a() * e || t.field().p() != fam.p() {
        return Err(Error::InvalidInput(format!("t is not an element of F_q^{e}")));
    }
    Ok(fiber_l_polys(fam, e, std::slice::from_ref(t), budget, true)?.remove(0))
}

pub fn sym_local_factor(fiber: &FiberLPoly, k: usize) -> Result<Poly<CycloInt>> {
    sym_power_poly(&fiber.l, k)
}

/// Lower convex hull of `(i, v(a_i))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonPolygon {
    #[serde(serialize_with = "crate::report::ser_vertices")]
    pub vertices: Vec<(usize, BigRational)>,
}

impl NewtonPolygon {
    pub fn from_points(points: &[(usize, BigRational)]) -> Self {
        let mut hull: Vec<(usize, BigRational)> = Vec::new();
        for (i, v) in points {
            while hull.len() >= 2 {
                let (i1, v1) = &hull[hull.len() - 2];
                let (i2, v2) = &hull[hull.len() - 1];
                // drop the middle point if it lies on or above the chord
                let lhs = (v2 - v1) * BigRational::from_integer(BigInt::from(i - i1));
                let rhs = (v - v1) * BigRational::from_integer(BigInt::from(i2 - i1));
                if lhs >= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((*i, v.clone()));
        }
        NewtonPolygon { vertices: hull }
    }

    /// Slopes with multiplicity, ascending.
    pub fn slopes(&self) -> Vec<BigRational> {
        self.vertices
            .windows(2)
            .flat_map(|w| {
                let len = w[1].0 - w[0].0;
                let s = (&w[1].1 - &w[0].1) / BigRational::from_integer(BigInt::from(len));
                std::iter::repeat(s).take(len)
            })
            .collect()
    }

    pub fn first_slope(&self) -> Option<BigRational> {
        self.slopes().into_iter().next()
    }

    pub fn is_single_slope(&self) -> bool {
        self.vertices.len() <= 2
    }
}

/// Newton polygon of `poly` with valuations normalized by `v(p^scale) = 1`.
pub fn newton_polygon_of(poly: &Poly<CycloInt>, scale: usize) -> NewtonPolygon {
    let s = BigRational::from_integer(BigInt::from(scale));
    let points: Vec<(usize, BigRational)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.pi_adic_valuation().map(|v| (i, v / &s)))
        .collect();
    NewtonPolygon::from_points(&points)
}

/// `q^e`-adic Newton polygon of a fiber.
pub fn newton_polygon(fiber: &FiberLPoly) -> NewtonPolygon {
    newton_polygon_of(&fiber.l, fiber.field_degree)
}

/// `sum_t psi(Tr(t x))` collapses to `q [x = 0]`; used as an orthogonality
/// witness by callers.
pub fn psi_of_trace(x: &FieldElement) -> CycloInt {
    psi(x.field().p(), x.absolute_trace() as u64)
}
