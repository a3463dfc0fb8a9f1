//! Dense polynomials, truncated power series and rational functions over any
//! [`Ring`], together with the Newton-identity conversions between
//! L-polynomials, power sums and symmetric powers.

use crate::error::{Error, Result};
use crate::ring::{IntegralDomain, Ring};
use num_integer::binomial;

/// Dense polynomial `c_0 + c_1 x + ... + c_n x^n`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `1 - c T`.
    pub fn one_minus(c: &R) -> Self {
        Poly::new(vec![c.one_like(), c.neg_ref()])
    }

    pub fn monomial(c: R, deg: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); deg + 1];
        coeffs[deg] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Option<&R> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (o, s) in out.iter_mut().zip(&short.coeffs) {
            *o = o.add_ref(s);
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(Ring::neg_ref).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let one = match self.coeffs.first() {
            Some(c) => Poly::constant(c.one_like()),
            None => return if e == 0 { panic!("0^0 on an untyped zero polynomial") } else { Poly::zero() },
        };
        (0..e).fold(one, |acc, _| acc.mul(self))
    }

    /// Horner evaluation; `x` supplies the ring context for the zero polynomial.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(x.zero_like(), |acc, c| acc.mul_ref(x).add_ref(c))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_int(i as i64))
                .collect(),
        )
    }

    /// Polynomial whose coefficients are `self` read backwards in degree `n`,
    /// i.e. `T^n P(1/T)`.
    pub fn reversed(&self, n: usize) -> Self {
        let Some(first) = self.coeffs.first() else {
            return Poly::zero();
        };
        let mut out = vec![first.zero_like(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "degree exceeds reversal length");
            out[n - i] = c.clone();
        }
        Poly::new(out)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Power series of this polynomial truncated at order `m`.
    pub fn to_series(&self, m: usize, zero: &R) -> TruncSeries<R> {
        let mut coeffs = vec![zero.zero_like(); m + 1];
        for (i, c) in self.coeffs.iter().enumerate().take(m + 1) {
            coeffs[i] = c.clone();
        }
        TruncSeries { coeffs }
    }
}

impl<R: IntegralDomain> Poly<R> {
    /// Euclidean division; `None` when a leading-coefficient division is not
    /// exact in `R` (always succeeds over fields).
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.leading()?;
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return Some((Poly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![dl.zero_like(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd];
            if c.is_zero() {
                continue;
            }
            let qk = c.div_exact(dl)?;
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] = rem[k + i].sub_ref(&qk.mul_ref(di));
            }
            quot[k] = qk;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Exact quotient `self / d`, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn monic(&self) -> Option<Self> {
        let lc = self.leading()?.clone();
        Some(Poly::new(self.coeffs.iter().map(|c| c.div_exact(&lc)).collect::<Option<_>>()?))
    }

    /// Monic gcd over a field.
    pub fn gcd(&self, rhs: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), rhs.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("gcd requires a field");
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    pub fn rem(&self, m: &Self) -> Self {
        self.div_rem(m).expect("division by a polynomial over a field").1
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u128, m: &Self) -> Self {
        let one = Poly::constant(m.leading().expect("nonzero modulus").one_like());
        let mut base = self.rem(m);
        let mut acc = one.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).rem(m);
            }
        }
        acc
    }
}

/// Power series `a_0 + a_1 T + ... + a_M T^M` known modulo `T^{M+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> TruncSeries<R> {
    /// Panics on an empty coefficient list: a series always knows its
    /// constant term.
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        TruncSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn truncate(&self, m: usize) -> Self {
        TruncSeries { coeffs: self.coeffs[..=m.min(self.order())].to_vec() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let m = self.order().min(rhs.order());
        TruncSeries { coeffs: (0..=m).map(|i| self.coeffs[i].add_ref(&rhs.coeffs[i])).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let m = self.order().min(rhs.order());
        TruncSeries { coeffs: (0..=m).map(|i| self.coeffs[i].sub_ref(&rhs.coeffs[i])).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let m = self.order().min(rhs.order());
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; m + 1];
        for i in 0..=m {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(m - i) {
                out[i + j] = out[i + j].add_ref(&self.coeffs[i].mul_ref(&rhs.coeffs[j]));
            }
        }
        TruncSeries { coeffs: out }
    }

    pub fn scale(&self, c: &R) -> Self {
        TruncSeries { coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    /// Substitute `T -> c T`.
    pub fn scale_variable(&self, c: &R) -> Self {
        let mut pw = c.one_like();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.mul_ref(&pw));
            pw = pw.mul_ref(c);
        }
        TruncSeries { coeffs: out }
    }

    /// Substitute `T -> T^k`, keeping the same truncation order.
    pub fn substitute_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i * k < out.len() {
                out[i * k] = a.clone();
            }
        }
        TruncSeries { coeffs: out }
    }

    /// Inverse of a series whose constant term is a unit (exact division by
    /// the constant term must succeed in `R`).
    pub fn inverse(&self) -> Option<Self>
    where
        R: IntegralDomain,
    {
        let a0 = &self.coeffs[0];
        let mut out: Vec<R> = Vec::with_capacity(self.coeffs.len());
        out.push(a0.one_like().div_exact(a0)?);
        for n in 1..self.coeffs.len() {
            let mut acc = a0.zero_like();
            for i in 1..=n {
                acc = acc.add_ref(&self.coeffs[i].mul_ref(&out[n - i]));
            }
            out.push(acc.neg_ref().div_exact(a0)?);
        }
        Some(TruncSeries { coeffs: out })
    }

    /// Truncated polynomial with the same coefficients.
    pub fn to_poly(&self) -> Poly<R> {
        Poly::new(self.coeffs.clone())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        TruncSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }
}

/// `numerator / denominator` with `denominator(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFn<R> {
    pub numerator: Poly<R>,
    pub denominator: Poly<R>,
}

impl<R: IntegralDomain> RationalFn<R> {
    pub fn to_series(&self, m: usize, zero: &R) -> Option<TruncSeries<R>> {
        let num = self.numerator.to_series(m, zero);
        let den = self.denominator.to_series(m, zero).inverse()?;
        Some(num.mul(&den))
    }

    pub fn is_polynomial(&self) -> bool {
        self.denominator.degree() == Some(0)
    }
}

/// Result of [`rational_reconstruct`].
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction<R> {
    pub function: RationalFn<R>,
    /// Number of coefficients beyond `num_deg + den_deg` that were compared.
    pub surplus_checked: usize,
    /// How many of those agreed with the reconstructed function.
    pub surplus_matches: usize,
}

impl<R> Reconstruction<R> {
    pub fn all_surplus_match(&self) -> bool {
        self.surplus_checked == self.surplus_matches
    }
}

/// `exp(s)` for a series with zero constant term, via `n E_n = sum k s_k E_{n-k}`.
pub fn series_exp<R: Ring>(s: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    let c = s.coeffs();
    if !c[0].is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut out = Vec::with_capacity(c.len());
    out.push(c[0].one_like());
    for n in 1..c.len() {
        let mut acc = c[0].zero_like();
        for k in 1..=n {
            if !c[k].is_zero() {
                acc = acc.add_ref(&c[k].scale_int(k as i64).mul_ref(&out[n - k]));
            }
        }
        out.push(
            acc.div_int(n as i64)
                .ok_or_else(|| Error::NonIntegralResult(format!("exp coefficient {n}")))?,
        );
    }
    Ok(TruncSeries::new(out))
}

/// `log(s)` for a series with constant term 1, via `L' = s'/s`.
pub fn series_log<R: Ring>(s: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    let c = s.coeffs();
    if !c[0].is_one() {
        return Err(Error::BadConstantTerm);
    }
    let mut out: Vec<R> = Vec::with_capacity(c.len());
    out.push(c[0].zero_like());
    for n in 1..c.len() {
        let mut acc = c[n].scale_int(n as i64);
        for k in 1..n {
            acc = acc.sub_ref(&out[k].scale_int(k as i64).mul_ref(&c[n - k]));
        }
        out.push(
            acc.div_int(n as i64)
                .ok_or_else(|| Error::NonIntegralResult(format!("log coefficient {n}")))?,
        );
    }
    Ok(TruncSeries::new(out))
}

/// Power sums `p_1..p_count` of the reciprocal roots of `L = prod (1 - pi_i T)`.
///
/// Uses `p_m = -m l_m - sum_{i=1}^{m-1} l_i p_{m-i}`, which needs no division.
pub fn power_sums_from_poly<R: Ring>(l: &Poly<R>, count: usize) -> Result<Vec<R>> {
    let c = l.coeffs();
    if c.is_empty() || !c[0].is_one() {
        return Err(Error::BadConstantTerm);
    }
    let zero = c[0].zero_like();
    let li = |i: usize| c.get(i).unwrap_or(&zero);
    let mut p: Vec<R> = Vec::with_capacity(count);
    for m in 1..=count {
        let mut acc = li(m).scale_int(-(m as i64));
        for i in 1..m.min(c.len()) {
            acc = acc.sub_ref(&li(i).mul_ref(&p[m - i - 1]));
        }
        p.push(acc);
    }
    Ok(p)
}

/// Complete homogeneous symmetric functions `h_0..h_k` from power sums
/// `p_1..p_k`, by `m h_m = sum_{i=1}^m h_{m-i} p_i`.
///
/// `one` fixes the ring context (needed when `power_sums` is empty).
pub fn complete_homogeneous_from_power_sums<R: Ring>(power_sums: &[R], one: &R) -> Result<Vec<R>> {
    let mut h = Vec::with_capacity(power_sums.len() + 1);
    h.push(one.one_like());
    for m in 1..=power_sums.len() {
        let mut acc = one.zero_like();
        for i in 1..=m {
            acc = acc.add_ref(&h[m - i].mul_ref(&power_sums[i - 1]));
        }
        h.push(
            acc.div_int(m as i64)
                .ok_or_else(|| Error::NonIntegralResult(format!("h_{m} from power sums")))?,
        );
    }
    Ok(h)
}

/// Polynomial `prod (1 - mu_i T)` with the given power sums of the `mu_i`,
/// truncated at degree `power_sums.len()`; `n c_n = -sum p_m c_{n-m}`.
pub fn poly_from_power_sums<R: Ring>(power_sums: &[R], one: &R) -> Result<Poly<R>> {
    let mut c = Vec::with_capacity(power_sums.len() + 1);
    c.push(one.one_like());
    for n in 1..=power_sums.len() {
        let mut acc = one.zero_like();
        for m in 1..=n {
            acc = acc.sub_ref(&power_sums[m - 1].mul_ref(&c[n - m]));
        }
        c.push(
            acc.div_int(n as i64)
                .ok_or_else(|| Error::NonIntegralResult(format!("coefficient {n} from power sums")))?,
        );
    }
    Ok(Poly::new(c))
}

/// Trace of the `m`-th power of Frobenius on `Sym^k`, i.e. `h_k` evaluated at
/// the `m`-th powers of the reciprocal roots; `power_sums[j-1] = p_j` must
/// reach index `k*m`.
pub fn sym_power_trace<R: Ring>(power_sums: &[R], k: usize, m: usize, one: &R) -> Result<R> {
    let ps: Vec<R> = (1..=k).map(|j| power_sums[j * m - 1].clone()).collect();
    Ok(complete_homogeneous_from_power_sums(&ps, one)?.pop().expect("h_0 always present"))
}

pub fn sym_power_degree(r: usize, k: usize) -> usize {
    if r == 0 {
        return usize::from(k == 0);
    }
    binomial(k + r - 1, r - 1)
}

/// `prod_{a_1+..+a_r=k} (1 - pi_1^{a_1} ... pi_r^{a_r} T)` for
/// `L = prod (1 - pi_i T)` of degree `r`.
pub fn sym_power_poly<R: Ring>(l: &Poly<R>, k: usize) -> Result<Poly<R>> {
    let r = l.degree().ok_or(Error::BadConstantTerm)?;
    let one = l.coeffs()[0].one_like();
    let n = sym_power_degree(r, k);
    let ps = power_sums_from_poly(l, (k * n).max(1))?;
    let traces = (1..=n)
        .map(|m| sym_power_trace(&ps, k, m, &one))
        .collect::<Result<Vec<_>>>()?;
    poly_from_power_sums(&traces, &one)
}

/// Fit `N/D` with `deg N <= num_deg`, `deg D <= den_deg`, `D(0) = 1` to the
/// series, returning the fit with the smallest denominator degree that agrees
/// with every coefficient up to `num_deg + den_deg`. Coefficients beyond that
/// are compared and counted as surplus witnesses.
pub fn rational_reconstruct<R: IntegralDomain>(
    s: &TruncSeries<R>,
    num_deg: usize,
    den_deg: usize,
) -> Result<Reconstruction<R>> {
    let c = s.coeffs();
    let m = s.order();
    if m < num_deg + den_deg {
        return Err(Error::InvalidInput(format!(
            "series order {m} is shorter than num_deg + den_deg = {}",
            num_deg + den_deg
        )));
    }
    let zero = c[0].zero_like();
    let at = |i: isize| if i < 0 { zero.clone() } else { c[i as usize].clone() };
    for b in 0..=den_deg {
        // Unknowns D_1..D_b from sum_{i=0}^b D_i s_{n-i} = 0, n = a+1..a+b.
        let a = num_deg;
        let mut rows: Vec<Vec<R>> = Vec::with_capacity(b);
        for n in (a + 1)..=(a + b) {
            let mut row: Vec<R> = (1..=b).map(|i| at(n as isize - i as isize)).collect();
            row.push(at(n as isize).neg_ref());
            rows.push(row);
        }
        let Some(den_tail) = bareiss_solve(rows, b) else { continue };
        let mut den = vec![c[0].one_like()];
        den.extend(den_tail);
        let den = Poly::new(den);
        let prod = s.mul(&den.to_series(m, &zero));
        let num = Poly::new(prod.coeffs()[..=a].to_vec());
        // Every coefficient through num_deg + den_deg must agree; beyond that
        // we count witnesses.
        let fits = (a + 1..=num_deg + den_deg).all(|i| prod.coeffs()[i].is_zero());
        if !fits {
            continue;
        }
        let surplus: Vec<bool> =
            ((num_deg + den_deg + 1)..=m).map(|i| prod.coeffs()[i].is_zero()).collect();
        return Ok(Reconstruction {
            function: RationalFn { numerator: num, denominator: den },
            surplus_checked: surplus.len(),
            surplus_matches: surplus.iter().filter(|&&b| b).count(),
        });
    }
    Err(Error::NoSolution { num_deg, den_deg })
}

/// Fraction-free (Bareiss) solve of an `n x n` system given as augmented
/// rows; `None` if singular or if the final quotients are not exact in `R`.
pub fn bareiss_solve<R: IntegralDomain>(mut rows: Vec<Vec<R>>, n: usize) -> Option<Vec<R>> {
    if n == 0 {
        return Some(Vec::new());
    }
    let one = rows[0][0].one_like();
    let mut prev = one.clone();
    for k in 0..n {
        let piv = (k..n).find(|&r| !rows[r][k].is_zero())?;
        rows.swap(k, piv);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let v = rows[k][k].mul_ref(&rows[i][j]).sub_ref(&rows[i][k].mul_ref(&rows[k][j]));
                rows[i][j] = v.div_exact(&prev).expect("Bareiss step is exact");
            }
            rows[i][k] = one.zero_like();
        }
        prev = rows[k][k].clone();
    }
    // Back substitution over the fraction field: x_i = num_i / det with det = prev.
    let mut x: Vec<Option<R>> = vec![None; n];
    for i in (0..n).rev() {
        let mut acc = rows[i][n].clone();
        for j in (i + 1)..n {
            acc = acc.sub_ref(&rows[i][j].mul_ref(x[j].as_ref()?));
        }
        x[i] = Some(acc.div_exact(&rows[i][i])?);
    }
    x.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn zi(v: &[i64]) -> Poly<BigInt> {
        Poly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn qs(v: &[i64]) -> TruncSeries<BigRational> {
        TruncSeries::new(v.iter().map(|&x| BigRational::from_integer(x.into())).collect())
    }

    #[test]
    fn power_sums_of_simple_polys() {
        let ones = power_sums_from_poly(&zi(&[1, -1]), 4).unwrap();
        assert!(ones.iter().all(|x| *x == BigInt::from(1)));
        let p = power_sums_from_poly(&zi(&[1, -5, 6]), 3).unwrap();
        assert_eq!(p, vec![5.into(), 13.into(), 35.into()]);
    }

    #[test]
    fn complete_homogeneous_examples() {
        let one = BigInt::from(1);
        let h = complete_homogeneous_from_power_sums(&[0.into(), 0.into(), 0.into()], &one).unwrap();
        assert_eq!(h, vec![1.into(), 0.into(), 0.into(), 0.into()]);
        let h = complete_homogeneous_from_power_sums(&[2.into(), 2.into()], &one).unwrap();
        assert_eq!(h[2], BigInt::from(3));
        let h = complete_homogeneous_from_power_sums(&[5.into(), 13.into()], &one).unwrap();
        assert_eq!(h[2], BigInt::from(19));
    }

    #[test]
    fn sym_power_examples() {
        let l = zi(&[1, -5, 6]);
        assert_eq!(sym_power_poly(&l, 0).unwrap(), zi(&[1, -1]));
        assert_eq!(sym_power_poly(&l, 1).unwrap(), l);
        assert_eq!(sym_power_poly(&l, 2).unwrap(), zi(&[1, -19, 114, -216]));
    }

    #[test]
    fn exp_of_geometric_log() {
        // log 1/(1-qT) = sum q^m T^m / m
        let q = 7i64;
        let m = 6;
        let s = TruncSeries::new(
            (0..=m)
                .map(|i| {
                    if i == 0 {
                        BigRational::from_integer(0.into())
                    } else {
                        BigRational::new(BigInt::from(q).pow(i as u32), BigInt::from(i))
                    }
                })
                .collect(),
        );
        let e = series_exp(&s).unwrap();
        for (i, c) in e.coeffs().iter().enumerate() {
            assert_eq!(*c, BigRational::from_integer(BigInt::from(q).pow(i as u32)));
        }
        assert_eq!(series_log(&e).unwrap(), s);
    }

    #[test]
    fn exp_log_constant_term_errors() {
        assert_eq!(series_exp(&qs(&[1, 2])), Err(Error::NonzeroConstantTerm));
        assert_eq!(series_log(&qs(&[2, 2])), Err(Error::BadConstantTerm));
        assert_eq!(series_exp(&qs(&[0, 0, 0])).unwrap(), qs(&[1, 0, 0]));
    }

    #[test]
    fn reconstruct_examples() {
        let r = rational_reconstruct(&qs(&[1, 7, 49, 343, 2401]), 0, 1).unwrap();
        assert_eq!(r.function.denominator, Poly::new(vec![BigRational::from_integer(1.into()), BigRational::from_integer((-7).into())]));
        assert_eq!(r.function.numerator.coeffs().len(), 1);
        assert!(r.all_surplus_match());

        let r = rational_reconstruct(&qs(&[1, 0, 0]), 0, 0).unwrap();
        assert_eq!(r.function.numerator.coeffs().len(), 1);

        let r = rational_reconstruct(&qs(&[1, -49, 0, 0]), 1, 0).unwrap();
        assert_eq!(r.function.numerator, qs(&[1, -49]).to_poly());
        assert_eq!((r.surplus_checked, r.surplus_matches), (2, 2));
    }

    #[test]
    fn reconstruct_reports_mismatched_surplus() {
        let r = rational_reconstruct(&qs(&[1, -49, 0, 3]), 1, 0).unwrap();
        assert_eq!((r.surplus_checked, r.surplus_matches), (2, 1));
        assert!(rational_reconstruct(&qs(&[1, 2]), 1, 1).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = qs(&[-1, 0, 1]).to_poly();
        let b = qs(&[-1, 1]).to_poly();
        let (q, r) = a.div_rem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, qs(&[1, 1]).to_poly());
        assert_eq!(a.gcd(&b), b);
    }
}
