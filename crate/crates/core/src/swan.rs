//! Local data at infinity: the polynomial `g`, the constrained composition
//! counts `#S_{d-1}(k, I)`, Swan conductors of symmetric powers, the degree
//! prediction, inertia-invariant orbit counts and the trivial factor.

use crate::cyclo::{gauss_sum_quadratic, psi, quadratic_character, CycloInt};
use crate::error::{Error, Result};
use crate::ff::{
    build_field, ensure_enumerable, field_hom, find_roots, minimal_extension_for_infinity, root_of_unity,
    ExtField, FieldElement,
};
use crate::fiber::AiryFamily;
use crate::polyser::{Poly, TruncSeries};
use crate::ring::Ring;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Arc;

/// `C(n, k)` as `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Rank `C(k+d-2, d-2)` of `Sym^k` of a rank `d-1` representation.
pub fn sym_rank(d: usize, k: usize) -> u64 {
    binomial((k + d - 2) as u64, (d - 2) as u64)
}

/// The model of the family at infinity over `F_{q^s}`.
#[derive(Clone, Debug)]
pub struct InfinityModel {
    pub s: usize,
    pub ext: Arc<ExtField>,
    pub r0: FieldElement,
    pub s0: FieldElement,
    /// `b_0..b_d` in `F_{q^s}`.
    pub g: Vec<FieldElement>,
    /// `{1 <= j <= d : b_j != 0}`, ascending.
    pub support: Vec<usize>,
    /// `(j, h(j))` for `j` in the support.
    pub gaps: Vec<(usize, usize)>,
    /// Constant term of `g`, as an element of `F_q`.
    pub b0: FieldElement,
    /// Smallest element of exact order `d - 1` in `F_{q^s}`.
    pub zeta: FieldElement,
    /// `c_{d-1}/(d c_d)` when the model was built through the shift.
    pub shift: Option<FieldElement>,
}

#[derive(Serialize)]
pub struct InfinitySummary {
    pub s: usize,
    pub r0: String,
    pub s0: String,
    pub g: Vec<String>,
    #[serde(rename = "J")]
    pub support: Vec<usize>,
    pub gaps: Vec<(usize, usize)>,
    pub b0: String,
    pub zeta: String,
}

fn elem_str(x: &FieldElement) -> String {
    let c: Vec<String> = x.coeffs().iter().map(u32::to_string).collect();
    format!("[{}]", c.join(","))
}

impl InfinityModel {
    pub fn d(&self) -> usize {
        self.g.len() - 1
    }

    /// `J_{>= j}`.
    pub fn support_from(&self, j: usize) -> Vec<usize> {
        self.support.iter().copied().filter(|&i| i >= j).collect()
    }

    pub fn summary(&self) -> InfinitySummary {
        InfinitySummary {
            s: self.s,
            r0: elem_str(&self.r0),
            s0: elem_str(&self.s0),
            g: self.g.iter().map(elem_str).collect(),
            support: self.support.clone(),
            gaps: self.gaps.clone(),
            b0: elem_str(&self.b0),
            zeta: elem_str(&self.zeta),
        }
    }
}

fn check_odd(fam: &AiryFamily) -> Result<()> {
    if fam.p() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    if (fam.degree() - 1) % fam.p() as usize == 0 {
        return Err(Error::PrecondViolation(format!("p = {} divides d - 1", fam.p())));
    }
    Ok(())
}

/// Truncation used for the series `S` with `v(t) = t S(1/t)`.
fn series_order(d: usize) -> usize {
    2 * d + 2
}

/// `g` for coefficients with `c_{d-1} = 0` (or unshifted), in `F_{q^s}`.
///
/// Solves `sum_i i c_i w^{d-i} S^{i-1} + 1 = 0` for `S = s_0 + O(w)`, which is
/// `f'(v(t)) + t^{d-1} = 0` with `w = 1/t`, and then reads off the
/// nonnegative powers of `f(v(t)) + v(t) t^{d-1}`.
fn g_coefficients(c: &[FieldElement], s0: &FieldElement) -> Result<Vec<FieldElement>> {
    let d = c.len() - 1;
    let n = series_order(d);
    let zero = s0.zero_like();
    let eval = |s: &TruncSeries<FieldElement>| -> TruncSeries<FieldElement> {
        let mut acc = vec![zero.clone(); n + 1];
        acc[0] = s0.one_like();
        let mut pw = TruncSeries::new({
            let mut v = vec![zero.clone(); n + 1];
            v[0] = s0.one_like();
            v
        });
        for i in 1..=d {
            let coeff = c[i].scale_int(i as i64);
            if !coeff.is_zero() {
                for (m, a) in pw.coeffs().iter().enumerate() {
                    if m + d - i <= n {
                        acc[m + d - i] = acc[m + d - i].add_ref(&coeff.mul_ref(a));
                    }
                }
            }
            pw = pw.mul(s);
        }
        TruncSeries::new(acc)
    };
    let dprime = c[d].scale_int((d * (d - 1)) as i64).mul_ref(&s0.pow((d - 2) as u64));
    let dprime_inv = dprime
        .inv()
        .ok_or_else(|| Error::PrecondViolation("the series at infinity is singular".into()))?;
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[0] = s0.clone();
    for m in 1..=n {
        let fv = eval(&TruncSeries::new(coeffs.clone()));
        coeffs[m] = fv.coeffs()[m].neg_ref().mul_ref(&dprime_inv);
    }
    let s = TruncSeries::new(coeffs);
    if eval(&s).coeffs().iter().any(|x| !x.is_zero()) {
        return Err(Error::InternalMismatch("series reversion at infinity failed validation".into()));
    }
    // powers S^0..S^d
    let mut pows = vec![TruncSeries::new({
        let mut v = vec![zero.clone(); n + 1];
        v[0] = s0.one_like();
        v
    })];
    for i in 1..=d {
        let next = pows[i - 1].mul(&s);
        pows.push(next);
    }
    Ok((0..=d)
        .map(|j| {
            let mut b = s.coeffs()[d - j].clone();
            for i in j..=d {
                b = b.add_ref(&c[i].mul_ref(&pows[i].coeffs()[i - j]));
            }
            b
        })
        .collect())
}

/// The model at infinity: `r0`, `s0`, `g`, its support and gaps, `b0`, `zeta`.
pub fn infinity_model(fam: &AiryFamily) -> Result<InfinityModel> {
    check_odd(fam)?;
    let d = fam.degree();
    let s = minimal_extension_for_infinity(fam)?;
    let p = fam.p() as u64;
    let a = fam.a();
    let ext = build_field(p, a * s)?;
    let up = field_hom(p, a, a * s)?;
    let c: Vec<FieldElement> = fam.coeffs().iter().map(|x| up.apply(x)).collect::<Result<_>>()?;
    let dcd = c[d].scale_int(d as i64);
    // r0: smallest root of X^{d-1} + d c_d
    let mut poly = vec![FieldElement::zero(&ext); d];
    poly[0] = dcd.clone();
    poly[d - 1] = FieldElement::one(&ext);
    let r0 = find_roots(&Poly::new(poly))?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InternalMismatch("no (d-1)-th root of -d c_d in the working field".into()))?;
    let s0 = r0.inv().expect("r0 is nonzero");
    let (g, shift) = if c[d - 1].is_zero() {
        (g_coefficients(&c, &s0)?, None)
    } else {
        // f(t - delta) has no t^{d-1} term; g = g_hat - delta t^{d-1}
        let delta = c[d - 1].mul_ref(&dcd.inv().unwrap());
        let shifted = shift_poly(&c, &delta.neg_ref());
        let mut g = g_coefficients(&shifted, &s0)?;
        g[d - 1] = g[d - 1].sub_ref(&delta);
        (g, Some(delta))
    };
    let support: Vec<usize> = (1..=d).filter(|&j| !g[j].is_zero()).collect();
    let mut gaps = Vec::with_capacity(support.len());
    let mut prev = 0;
    for &j in &support {
        gaps.push((j, j - prev));
        prev = j;
    }
    let b0 = up
        .preimage(&g[0])
        .ok_or_else(|| Error::InternalMismatch("constant term of g is not in F_q".into()))?;
    let zeta = root_of_unity(&ext, (d - 1) as u64)?;
    Ok(InfinityModel { s, ext, r0, s0, g, support, gaps, b0, zeta, shift })
}

/// Coefficients of `f(t + u)`.
fn shift_poly(c: &[FieldElement], u: &FieldElement) -> Vec<FieldElement> {
    let d = c.len() - 1;
    let mut out = vec![u.zero_like(); d + 1];
    for (i, ci) in c.iter().enumerate() {
        for m in 0..=i {
            let term = ci.mul_ref(&u.pow((i - m) as u64)).scale_int((binomial(i as u64, m as u64) % u.field().p() as u64) as i64);
            out[m] = out[m].add_ref(&term);
        }
    }
    out
}

/// `(d - 1, k, I mod d-1)` identifying `S_{d-1}(k, I)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SCountKey {
    pub dm1: usize,
    pub k: usize,
    pub set: Vec<usize>,
}

impl SCountKey {
    pub fn new(dm1: usize, k: usize, set: &[usize]) -> Self {
        let mut r: Vec<usize> = set.iter().map(|j| j % dm1).collect();
        r.sort_unstable();
        r.dedup();
        SCountKey { dm1, k, set: r }
    }
}

/// `#S_{dm1}(k, I)` by enumerating compositions of `k` into `dm1` parts;
/// `zeta` must have exact order `dm1`.
pub fn count_s(key: &SCountKey, zeta: &FieldElement) -> u64 {
    let field = zeta.field().clone();
    let m = key.dm1;
    // columns[i][j] = zeta^{i * I_j}
    let columns: Vec<Vec<FieldElement>> =
        (0..m).map(|i| key.set.iter().map(|&j| zeta.pow((i * j) as u64)).collect()).collect();
    let mut count = 0u64;
    let mut partial = vec![FieldElement::zero(&field); key.set.len()];
    enumerate_compositions(key.k, 0, &columns, &mut partial, &mut count);
    count
}

fn enumerate_compositions(
    remaining: usize,
    i: usize,
    columns: &[Vec<FieldElement>],
    partial: &mut Vec<FieldElement>,
    count: &mut u64,
) {
    if i + 1 == columns.len() {
        let ok = partial
            .iter()
            .zip(&columns[i])
            .all(|(s, z)| s.add_ref(&z.scale_int(remaining as i64)).is_zero());
        if ok {
            *count += 1;
        }
        return;
    }
    let saved = partial.clone();
    for a in 0..=remaining {
        enumerate_compositions(remaining - a, i + 1, columns, partial, count);
        for (s, z) in partial.iter_mut().zip(&columns[i]) {
            *s = s.add_ref(z);
        }
    }
    *partial = saved;
}

/// All tuples of `S_{dm1}(k, I)` in lexicographic order.
pub fn list_s(key: &SCountKey, zeta: &FieldElement) -> Vec<Vec<usize>> {
    let m = key.dm1;
    let powers: Vec<Vec<FieldElement>> =
        (0..m).map(|i| key.set.iter().map(|&j| zeta.pow((i * j) as u64)).collect()).collect();
    let mut out = Vec::new();
    let mut cur = vec![0usize; m];
    fn rec(rem: usize, i: usize, cur: &mut Vec<usize>, powers: &[Vec<FieldElement>], zeta: &FieldElement, out: &mut Vec<Vec<usize>>) {
        if i + 1 == cur.len() {
            cur[i] = rem;
            let ok = (0..powers[0].len()).all(|j| {
                cur.iter()
                    .enumerate()
                    .fold(FieldElement::zero(zeta.field()), |acc, (ii, &a)| acc.add_ref(&powers[ii][j].scale_int(a as i64)))
                    .is_zero()
            });
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        for a in 0..=rem {
            cur[i] = a;
            rec(rem - a, i + 1, cur, powers, zeta, out);
        }
    }
    rec(key.k, 0, &mut cur, &powers, zeta, &mut out);
    out
}

/// `F_{dm1}(I; T) = sum_k #S_{dm1}(k, I) T^k` to order `order`, from the
/// character-sum formula `Q^{-#I} sum_gamma prod_j (1 - psi(sum_i gamma_i zeta^{ji}) T)^{-1}`
/// over the field of `zeta`.
pub fn gen_f(set: &[usize], dm1: usize, order: usize, zeta: &FieldElement, budget: u64) -> Result<TruncSeries<BigInt>> {
    let field = zeta.field().clone();
    let p = field.p() as usize;
    let key = SCountKey::new(dm1, 0, set);
    let r = key.set.len();
    let qsize = field.size();
    let tuples = qsize
        .checked_pow(r as u32)
        .ok_or_else(|| Error::TooLarge { needed: u128::MAX, budget })?;
    ensure_enumerable(tuples, budget)?;
    // trace functionals of zeta^{ji}
    let functionals: Vec<Vec<Vec<u32>>> = (0..dm1)
        .map(|j| key.set.iter().map(|&i| field.trace_functional(zeta.pow((j * i) as u64).coeffs())).collect())
        .collect();
    let mut classes: HashMap<Vec<u8>, u64> = HashMap::new();
    let n = field.degree();
    let mut gamma_digits = vec![0usize; r * n];
    for _ in 0..tuples {
        let exps: Vec<u8> = functionals
            .iter()
            .map(|fs| {
                let mut e = 0usize;
                for (ii, f) in fs.iter().enumerate() {
                    for (c, &w) in f.iter().enumerate() {
                        e += gamma_digits[ii * n + c] * w as usize;
                    }
                }
                let mut sorted = e % p;
                if sorted >= p {
                    sorted -= p;
                }
                sorted as u8
            })
            .collect();
        let mut key = exps;
        key.sort_unstable();
        *classes.entry(key).or_insert(0) += 1;
        for dgt in gamma_digits.iter_mut() {
            *dgt += 1;
            if *dgt < p {
                break;
            }
            *dgt = 0;
        }
    }
    // group-ring series: coefficient k is a vector indexed by Z/p
    let mut total = vec![vec![BigInt::zero(); p]; order + 1];
    let mut keys: Vec<_> = classes.into_iter().collect();
    keys.sort();
    for (exps, mult) in keys {
        let mut ser = vec![vec![0i64; p]; order + 1];
        ser[0][0] = 1;
        for &e in &exps {
            // multiply by sum_n zeta_p^{e n} T^n
            for k in 1..=order {
                let (lo, hi) = ser.split_at_mut(k);
                let prev = &lo[k - 1];
                for (b, v) in prev.iter().enumerate() {
                    hi[0][(b + e as usize) % p] += v;
                }
            }
        }
        for (t, s) in total.iter_mut().zip(&ser) {
            for (x, v) in t.iter_mut().zip(s) {
                *x += BigInt::from(*v) * BigInt::from(mult);
            }
        }
    }
    let denom = BigInt::from(qsize).pow(r as u32);
    let coeffs = total
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let z = CycloInt::from_full(p as u32, v);
            let n = z
                .as_integer()
                .ok_or_else(|| Error::NonIntegralResult(format!("coefficient {k} of F is not rational")))?;
            let (quo, rem) = n.div_rem(&denom);
            if !Zero::is_zero(&rem) {
                return Err(Error::NonIntegralResult(format!("coefficient {k} of F is not integral")));
            }
            Ok(quo)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruncSeries::new(coeffs))
}

/// `Swan_infinity(Sym^k Ai_f)`.
pub fn swan_sym(fam: &AiryFamily, k: usize) -> Result<u64> {
    require_large_p(fam)?;
    let model = infinity_model(fam)?;
    swan_sym_with(fam, &model, k)
}

fn require_large_p(fam: &AiryFamily) -> Result<()> {
    if fam.p() as usize <= fam.degree() {
        return Err(Error::PrecondViolation(format!("need p > d, got p = {} and d = {}", fam.p(), fam.degree())));
    }
    Ok(())
}

pub fn swan_sym_with(fam: &AiryFamily, model: &InfinityModel, k: usize) -> Result<u64> {
    require_large_p(fam)?;
    let d = fam.degree();
    let mut total = d as i128 * sym_rank(d, k) as i128;
    for &(j, h) in &model.gaps {
        let key = SCountKey::new(d - 1, k, &model.support_from(j));
        total -= h as i128 * count_s(&key, &model.zeta) as i128;
    }
    if total < 0 || total % (d as i128 - 1) != 0 {
        return Err(Error::DivisibilityViolation(format!(
            "(d-1) Swan = {total} is not a nonnegative multiple of {}",
            d - 1
        )));
    }
    Ok((total / (d as i128 - 1)) as u64)
}

/// `Swan_infinity(Sym^k) - rank(Sym^k)`.
pub fn predicted_degree(fam: &AiryFamily, k: usize) -> Result<i64> {
    let model = infinity_model(fam)?;
    predicted_degree_with(fam, &model, k)
}

pub fn predicted_degree_with(fam: &AiryFamily, model: &InfinityModel, k: usize) -> Result<i64> {
    Ok(swan_sym_with(fam, model, k)? as i64 - sym_rank(fam.degree(), k) as i64)
}

/// The degree series of the family as `k`-th coefficients, from
/// `(1/(d-1)) [ 1/(1-T)^{d-1} - sum_j h(j) F(J_{>=j}; T) ]` with each `F`
/// taken from the character-sum formula.
pub fn degree_series(fam: &AiryFamily, model: &InfinityModel, order: usize, budget: u64) -> Result<Vec<i64>> {
    require_large_p(fam)?;
    let d = fam.degree();
    let mut acc: Vec<BigInt> = (0..=order).map(|k| BigInt::from(sym_rank(d, k))).collect();
    for &(j, h) in &model.gaps {
        let f = gen_f(&model.support_from(j), d - 1, order, &model.zeta, budget)?;
        for (a, c) in acc.iter_mut().zip(f.coeffs()) {
            *a -= BigInt::from(h) * c;
        }
    }
    acc.into_iter()
        .map(|v| {
            let (q, r) = v.div_rem(&BigInt::from(d - 1));
            if !Zero::is_zero(&r) {
                return Err(Error::DivisibilityViolation("degree series coefficient".into()));
            }
            Ok(q.to_i64().unwrap())
        })
        .collect()
}

/// Orbits of cyclic rotation on a list of tuples: `(orbit count, orbit sizes)`.
fn orbits(tuples: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    let mut sizes = Vec::new();
    for t in tuples {
        if seen.contains(t) {
            continue;
        }
        let m = t.len();
        let mut r = m;
        for shift in 1..m {
            if m % shift == 0 && (0..m).all(|i| t[i] == t[(i + shift) % m]) {
                r = shift;
                break;
            }
        }
        for shift in 0..r {
            let mut rot = t.clone();
            rot.rotate_left(shift);
            seen.insert(rot);
        }
        sizes.push(r);
    }
    sizes
}

fn totient(n: usize) -> usize {
    (1..=n).filter(|&i| i.gcd(&n) == 1).count()
}

/// `J_r = { j / ((d-1)/r) : j in J, (d-1)/r | j }`, the conditions on one
/// period of a tuple fixed by rotation through `r` places.
fn periodic_set(set: &[usize], dm1: usize, r: usize) -> Vec<usize> {
    let m = dm1 / r;
    set.iter().filter(|&&j| j % m == 0).map(|&j| j / m).collect()
}

/// Number of tuples of `S_{dm1}(k, J)` with period dividing `r`.
fn fixed_points(set: &[usize], dm1: usize, r: usize, k: usize, zeta: &FieldElement) -> u64 {
    let m = dm1 / r;
    if k % m != 0 {
        return 0;
    }
    let zr = zeta.pow(m as u64);
    count_s(&SCountKey::new(r, k / m, &periodic_set(set, dm1, r)), &zr)
}

/// Burnside: `#T_{dm1}(k, J) = (1/dm1) sum_{r | dm1} phi(dm1/r) #Fix(r)`.
pub fn orbit_count_burnside(set: &[usize], dm1: usize, k: usize, zeta: &FieldElement) -> Result<u64> {
    let total: u64 = (1..=dm1)
        .filter(|r| dm1 % r == 0)
        .map(|r| totient(dm1 / r) as u64 * fixed_points(set, dm1, r, k, zeta))
        .sum();
    if total % dm1 as u64 != 0 {
        return Err(Error::DivisibilityViolation("Burnside sum".into()));
    }
    Ok(total / dm1 as u64)
}

/// `#U` by the 2-adic rule: `#T` minus the orbits whose period divides
/// `dm1 / 2^{alpha(k)}`.
pub fn u_count_formula(set: &[usize], dm1: usize, k: usize, zeta: &FieldElement) -> Result<u64> {
    let t = orbit_count_burnside(set, dm1, k, zeta)?;
    if k == 0 {
        return Ok(t);
    }
    let alpha = k.trailing_zeros();
    let two = 1usize << alpha;
    if dm1 % two != 0 {
        return Ok(t);
    }
    let m = dm1 / two;
    let sub = orbit_count_burnside(&periodic_set(set, dm1, m), m, k / two, &zeta.pow(two as u64))?;
    Ok(t - sub)
}

/// Orbit counts `(#T, #U)` on `S_{d-1}(k, J)`, computed by direct orbit
/// enumeration and by the Burnside / 2-adic formulas, which must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCounts {
    pub t_count: u64,
    pub u_count: u64,
}

pub fn orbit_counts_for(set: &[usize], dm1: usize, k: usize, zeta: &FieldElement) -> Result<OrbitCounts> {
    let tuples = list_s(&SCountKey::new(dm1, k, set), zeta);
    let sizes = orbits(&tuples);
    if sizes.iter().sum::<usize>() != tuples.len() {
        return Err(Error::InternalMismatch("orbit sizes do not sum to #S".into()));
    }
    let t_direct = sizes.len() as u64;
    let u_direct = sizes.iter().filter(|&&r| (r * k / dm1) % 2 == 0).count() as u64;
    let t_formula = orbit_count_burnside(set, dm1, k, zeta)?;
    let u_formula = u_count_formula(set, dm1, k, zeta)?;
    if t_direct != t_formula || u_direct != u_formula {
        return Err(Error::InternalMismatch(format!(
            "orbit counts disagree: direct ({t_direct}, {u_direct}), formula ({t_formula}, {u_formula})"
        )));
    }
    Ok(OrbitCounts { t_count: t_direct, u_count: u_direct })
}

pub fn orbit_counts(fam: &AiryFamily, k: usize) -> Result<OrbitCounts> {
    require_large_p(fam)?;
    let model = infinity_model(fam)?;
    orbit_counts_for(&model.support, fam.degree() - 1, k, &model.zeta)
}

/// `G_{dm1}(J; T) = (1/dm1) sum_{r | dm1} phi(dm1/r) F_r(J_r; T^{dm1/r})` with each
/// `F_r` coefficient taken from [`count_s`].
pub fn g_series(set: &[usize], dm1: usize, order: usize, zeta: &FieldElement) -> Result<Vec<u64>> {
    let mut acc = vec![0u64; order + 1];
    for r in (1..=dm1).filter(|r| dm1 % r == 0) {
        let m = dm1 / r;
        let phi = totient(m) as u64;
        let zr = zeta.pow(m as u64);
        let jr = periodic_set(set, dm1, r);
        for s in 0..=order / m {
            acc[s * m] += phi * count_s(&SCountKey::new(r, s, &jr), &zr);
        }
    }
    acc.into_iter()
        .map(|v| {
            if v % dm1 as u64 != 0 {
                Err(Error::DivisibilityViolation("G series".into()))
            } else {
                Ok(v / dm1 as u64)
            }
        })
        .collect()
}

/// `sum_k #U_{dm1}(k, J) T^k = G_{dm1}(J;T) - sum_{2^j | dm1} H_{dm1/2^j}(J; T^{2^j})`
/// with `H_r(T) = (G_r(T) - G_r(-T))/2`. Only the even coefficients are `#U`;
/// for odd `k` every orbit has odd `rk/(d-1)` and `#U = 0`.
pub fn u_series(set: &[usize], dm1: usize, order: usize, zeta: &FieldElement) -> Result<Vec<u64>> {
    let mut acc: Vec<i64> = g_series(set, dm1, order, zeta)?.into_iter().map(|v| v as i64).collect();
    let mut two = 2usize;
    while dm1 % two == 0 {
        let m = dm1 / two;
        let g = g_series(&periodic_set(set, dm1, m), m, order / two, &zeta.pow(two as u64))?;
        for (l, v) in g.iter().enumerate() {
            if l % 2 == 1 {
                acc[l * two] -= *v as i64;
            }
        }
        two *= 2;
    }
    Ok(acc.into_iter().map(|v| v as u64).collect())
}

/// The trivial factor `Q_k = (1 - lambda T)^n` with
/// `lambda = psi(Tr(k b0)) rho(d(d-1)c_d/2)^k g(psi,rho)^k` over `F_q` and `n`
/// given by the orbit counts.
#[derive(Clone, Debug)]
pub struct TrivialFactor {
    pub lambda: CycloInt,
    pub exponent: u64,
    pub poly: Poly<CycloInt>,
    pub counts: OrbitCounts,
}

pub fn trivial_factor(fam: &AiryFamily, k: usize) -> Result<TrivialFactor> {
    let model = infinity_model(fam)?;
    trivial_factor_with(fam, &model, k)
}

pub fn trivial_factor_with(fam: &AiryFamily, model: &InfinityModel, k: usize) -> Result<TrivialFactor> {
    require_large_p(fam)?;
    let d = fam.degree();
    let p = fam.p();
    let counts = orbit_counts_for(&model.support, d - 1, k, &model.zeta)?;
    let exponent = if d % 2 == 0 {
        counts.t_count
    } else if k % 2 == 0 {
        counts.u_count
    } else {
        0
    };
    let base = fam.base();
    let kb0 = model.b0.scale_int((k % p as usize) as i64);
    let arg = fam.coeff(d).scale_int(((d * (d - 1) / 2) % p as usize) as i64);
    let rho = quadratic_character(&arg)? as i64;
    let g = gauss_sum_quadratic(base)?;
    let lambda = psi(p, kb0.absolute_trace() as u64)
        .scale_int(if k % 2 == 1 { rho } else { 1 })
        .mul_ref(&g.pow(k as u64));
    let poly = Poly::one_minus(&lambda).pow(exponent as u32);
    Ok(TrivialFactor { lambda, exponent, poly, counts })
}
