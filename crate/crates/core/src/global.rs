//! `M_k(f, T)` from closed-point fibers: moments, the series, exact
//! reconstruction, the split `M_k = Q_k P_k`, and the functional-equation and
//! weight checks.

use crate::cache::Cache;
use crate::config::RunConfig;
use crate::cyclo::CycloInt;
use crate::error::{Error, Result};
use crate::ff::{build_field, ensure_enumerable, FieldElement};
use crate::fiber::{fiber_l_polys, AiryFamily};
use crate::monodromy::{verdict_from_fibers, MonodromyVerdict, Status};
use crate::numeric::reciprocal_roots;
use crate::polyser::{power_sums_from_poly, rational_reconstruct, sym_power_trace, Poly, TruncSeries};
use crate::ring::Ring;
use crate::swan::{predicted_degree_with, infinity_model, trivial_factor_with};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// One representative per Frobenius orbit of size `e` in `F_{q^e}`, the
/// smallest element of its orbit, in ascending order.
pub fn closed_points(fam: &AiryFamily, e: usize, budget: u64) -> Result<Vec<FieldElement>> {
    ensure_enumerable(fam.ext_size(e)?, budget)?;
    let field = build_field(fam.p() as u64, fam.a() * e)?;
    let a = fam.a();
    let frob_q = |x: &FieldElement| (0..a).fold(x.clone(), |y, _| y.frobenius());
    Ok(FieldElement::all(&field)
        .filter(|x| {
            let mut y = frob_q(x);
            for _ in 1..e {
                if y <= *x {
                    return false;
                }
                y = frob_q(&y);
            }
            y == *x
        })
        .collect())
}

/// Fiber polynomials at every closed point of degree `e`, over `F_{q^e}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedPointFibers {
    pub e: usize,
    /// Absolute degree of `F_{q^e}`.
    pub field_degree: usize,
    pub points: Vec<u128>,
    pub polys: Vec<Vec<CycloInt>>,
}

impl ClosedPointFibers {
    pub fn poly(&self, i: usize) -> Poly<CycloInt> {
        Poly::new(self.polys[i].clone())
    }
}

pub fn closed_point_fibers(fam: &AiryFamily, e: usize, budget: u64, cache: Option<&Cache>) -> Result<ClosedPointFibers> {
    let key = Cache::key(
        fam.p(),
        fam.a(),
        fam.base().modulus(),
        "closed_point_fibers",
        &format!("{:?}|{e}", fam.coeff_indices()),
    );
    if let Some(hit) = cache.and_then(|c| c.get::<ClosedPointFibers>(&key)) {
        return Ok(hit);
    }
    let pts = closed_points(fam, e, budget)?;
    let fibers = fiber_l_polys(fam, e, &pts, budget, false)?;
    let out = ClosedPointFibers {
        e,
        field_degree: fam.a() * e,
        points: pts.iter().map(FieldElement::index).collect(),
        polys: fibers.into_iter().map(|f| f.l.into_coeffs()).collect(),
    };
    if let Some(c) = cache {
        c.put(&key, &out)?;
    }
    Ok(out)
}

/// Largest `M` with every closed-point fiber up to degree `M` enumerable.
pub fn max_moment_order(fam: &AiryFamily, budget: u64) -> usize {
    let d = fam.degree();
    (1..)
        .take_while(|&m| fam.ext_size(m * (d - 1)).map_or(false, |s| s <= budget as u128))
        .last()
        .unwrap_or(0)
}

/// `c_1..c_M` of `log M_k = sum c_m T^m / m`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentTable {
    pub k: usize,
    pub entries: Vec<CycloInt>,
}

/// `c_m = sum_{e | m} sum_{deg t = e} e * tr(Frob_t^{m/e} | Sym^k)`.
pub fn moments_from_fibers(batches: &[ClosedPointFibers], p: u32, k: usize, m_max: usize) -> Result<MomentTable> {
    let one = CycloInt::one(p);
    let mut entries = vec![CycloInt::zero(p); m_max];
    for batch in batches.iter().filter(|b| b.e <= m_max) {
        let e = batch.e;
        let reps = m_max / e;
        let partial: Vec<Vec<CycloInt>> = (0..batch.points.len())
            .into_par_iter()
            .map(|i| {
                let ps = power_sums_from_poly(&batch.poly(i), k * reps)?;
                (1..=reps).map(|n| sym_power_trace(&ps, k, n, &one)).collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        for traces in partial {
            for (n, tr) in traces.iter().enumerate() {
                let m = e * (n + 1);
                entries[m - 1] = entries[m - 1].add_ref(&tr.scale_int(e as i64));
            }
        }
    }
    Ok(MomentTable { k, entries })
}

fn fibers_up_to(fam: &AiryFamily, m_max: usize, budget: u64, cache: Option<&Cache>) -> Result<Vec<ClosedPointFibers>> {
    let reachable = max_moment_order(fam, budget);
    if m_max > reachable {
        log::warn!("moments beyond order {reachable} exceed the enumeration budget");
        return Err(Error::TooLarge {
            needed: fam.ext_size(m_max * (fam.degree() - 1)).unwrap_or(u128::MAX),
            budget,
        });
    }
    (1..=m_max).map(|e| closed_point_fibers(fam, e, budget, cache)).collect()
}

pub fn moments(fam: &AiryFamily, k: usize, m_max: usize, budget: u64, cache: Option<&Cache>) -> Result<MomentTable> {
    let batches = fibers_up_to(fam, m_max, budget, cache)?;
    moments_from_fibers(&batches, fam.p(), k, m_max)
}

/// `exp(sum c_m T^m / m)` through `n E_n = sum_{m<=n} c_m E_{n-m}`.
pub fn l_series(table: &MomentTable, p: u32) -> Result<TruncSeries<CycloInt>> {
    let c = &table.entries;
    let mut out = vec![CycloInt::one(p)];
    for n in 1..=c.len() {
        let mut acc = CycloInt::zero(p);
        for m in 1..=n {
            acc = acc.add_ref(&c[m - 1].mul_ref(&out[n - m]));
        }
        out.push(
            acc.div_int(n as i64)
                .ok_or_else(|| Error::NonIntegralResult(format!("coefficient {n} of the L-series")))?,
        );
    }
    Ok(TruncSeries::new(out))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalReport {
    pub numerator: Vec<CycloInt>,
    pub denominator: Vec<CycloInt>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FunctionalEquation {
    pub holds: bool,
    /// The coefficient identity alone, before the modulus check.
    pub exact_identity: bool,
    pub c: CycloInt,
    pub r: usize,
    pub modulus_check: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingWeights {
    /// `zeta_p -> exp(2 pi i m / p)`.
    pub embedding: u32,
    pub moduli: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LReport {
    pub k: usize,
    pub series: Vec<CycloInt>,
    #[serde(rename = "M_poly", skip_serializing_if = "Option::is_none")]
    pub m_poly: Option<Vec<CycloInt>>,
    #[serde(rename = "M_rational", skip_serializing_if = "Option::is_none")]
    pub m_rational: Option<RationalReport>,
    #[serde(rename = "Q")]
    pub q_factor: Option<Vec<CycloInt>>,
    #[serde(rename = "P")]
    pub p_factor: Option<Vec<CycloInt>>,
    pub predicted_degree: i64,
    pub observed_degree: Option<i64>,
    pub surplus_matches: usize,
    pub surplus_checked: usize,
    pub functional_equation: Option<FunctionalEquation>,
    pub weights: Vec<EmbeddingWeights>,
    pub weight_deviation: Option<f64>,
    pub flags: Vec<String>,
    pub verified: bool,
}

/// Settings for [`reconstruct_and_verify`].
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub embedding_tolerance: f64,
    pub weight_tolerance: f64,
    pub den_bound: usize,
    pub finite_suspected: bool,
}

impl VerifyOptions {
    pub fn from_config(cfg: &RunConfig, finite_suspected: bool) -> Self {
        VerifyOptions {
            embedding_tolerance: cfg.embedding_tolerance,
            weight_tolerance: cfg.weight_tolerance,
            den_bound: cfg.den_bound,
            finite_suspected,
        }
    }
}

/// `a_{r-i} q^{(k+1) i} = c conj(a_i)` for all `i` with `c = a_r`, and
/// `|c| = q^{r(k+1)/2}` in every embedding.
pub fn check_functional_equation(poly: &Poly<CycloInt>, q: u128, k: usize, tol: f64) -> FunctionalEquation {
    let a = poly.coeffs();
    let r = a.len() - 1;
    let c = a[r].clone();
    let p = c.p();
    let qk = BigInt::from(q).pow(k as u32 + 1);
    let mut scale = BigInt::from(1);
    let mut exact = true;
    for i in 0..=r {
        let lhs = a[r - i].mul_ref(&CycloInt::from_integer(p, scale.clone()));
        if lhs != c.mul_ref(&a[i].conjugate()) {
            exact = false;
            break;
        }
        scale *= &qk;
    }
    let target = (q as f64).powf(r as f64 * (k as f64 + 1.0) / 2.0);
    let modulus_check = c.embeddings().iter().map(|z| (z.norm() - target).abs() / target).fold(0.0, f64::max);
    FunctionalEquation { holds: exact && modulus_check <= tol, exact_identity: exact, c, r, modulus_check }
}

/// Per-embedding moduli of the reciprocal roots of `poly`, and the largest
/// relative deviation from `target`.
pub fn root_weights(poly: &Poly<CycloInt>, target: f64) -> (Vec<EmbeddingWeights>, f64) {
    let p = poly.coeffs()[0].p();
    let embedded: Vec<Vec<_>> = poly.coeffs().iter().map(CycloInt::embeddings).collect();
    let mut worst: f64 = 0.0;
    let weights = (0..p as usize - 1)
        .map(|m| {
            let cs: Vec<_> = embedded.iter().map(|e| e[m]).collect();
            let mut moduli: Vec<f64> = reciprocal_roots(&cs).iter().map(|z| z.norm()).collect();
            moduli.sort_by(f64::total_cmp);
            for v in &moduli {
                worst = worst.max((v - target).abs() / target);
            }
            EmbeddingWeights { embedding: m as u32 + 1, moduli }
        })
        .collect();
    (weights, worst)
}

fn last_nonzero(s: &TruncSeries<CycloInt>) -> i64 {
    s.coeffs().iter().rposition(|c| !c.is_zero()).map_or(-1, |i| i as i64)
}

/// Fit `M_k` to the series, split off the trivial factor and verify the
/// functional equation and weights of the quotient.
pub fn reconstruct_and_verify(
    fam: &AiryFamily,
    k: usize,
    series: &TruncSeries<CycloInt>,
    predicted: i64,
    opts: &VerifyOptions,
) -> Result<LReport> {
    let d = fam.degree();
    let q = fam.q();
    let order = series.order();
    let mut flags = Vec::new();
    if opts.finite_suspected {
        flags.push("finite_monodromy_suspected".to_string());
    }
    let strict = !opts.finite_suspected && fam.p() as usize > 2 * d - 1;
    let mut report = LReport {
        k,
        series: series.coeffs().to_vec(),
        m_poly: None,
        m_rational: None,
        q_factor: None,
        p_factor: None,
        predicted_degree: predicted,
        observed_degree: None,
        surplus_matches: 0,
        surplus_checked: 0,
        functional_equation: None,
        weights: Vec::new(),
        weight_deviation: None,
        flags,
        verified: true,
    };
    if predicted < 0 {
        // H^2 contributes a pole: fit 1/D with deg D = -predicted
        let rec = rational_reconstruct(series, 0, (-predicted) as usize)?;
        report.surplus_matches = rec.surplus_matches;
        report.surplus_checked = rec.surplus_checked;
        report.verified = rec.all_surplus_match() && rec.surplus_checked > 0;
        report.m_rational = Some(RationalReport {
            numerator: rec.function.numerator.into_coeffs(),
            denominator: rec.function.denominator.into_coeffs(),
        });
        return Ok(report);
    }
    let predicted_u = predicted as usize;
    if order < predicted_u {
        return Err(Error::InvalidInput(format!("series order {order} is below the predicted degree {predicted}")));
    }
    if order == predicted_u {
        report.flags.push("no_surplus_coefficients".into());
    }
    let observed = last_nonzero(series);
    report.observed_degree = Some(observed);
    report.surplus_checked = order - predicted_u;
    report.surplus_matches = series.coeffs()[predicted_u + 1..].iter().filter(|c| c.is_zero()).count();
    if observed != predicted {
        if !opts.finite_suspected {
            return Err(Error::DegreeMismatch { predicted, observed });
        }
        report.flags.push("degree_differs_from_prediction".into());
        report.verified = false;
        for b in 1..=opts.den_bound {
            if order < b + 1 {
                break;
            }
            let num = order - b - 1;
            if let Ok(rec) = rational_reconstruct(series, num, b) {
                if rec.all_surplus_match() && !rec.function.is_polynomial() {
                    report.m_rational = Some(RationalReport {
                        numerator: rec.function.numerator.into_coeffs(),
                        denominator: rec.function.denominator.into_coeffs(),
                    });
                    break;
                }
            }
        }
        return Ok(report);
    }
    let m_poly = Poly::new(series.coeffs()[..=predicted_u].to_vec());
    report.m_poly = Some(m_poly.coeffs().to_vec());
    if fam.p() as usize <= d {
        report.flags.push("trivial_factor_unavailable".into());
        report.verified = false;
        return Ok(report);
    }
    let model = infinity_model(fam)?;
    let tf = trivial_factor_with(fam, &model, k)?;
    report.q_factor = Some(tf.poly.coeffs().to_vec());
    let Some(pk) = m_poly.div_exact(&tf.poly) else {
        if strict {
            return Err(Error::NonDivisible);
        }
        report.flags.push("trivial_factor_does_not_divide".into());
        report.verified = false;
        return Ok(report);
    };
    report.p_factor = Some(pk.coeffs().to_vec());
    let fe = check_functional_equation(&pk, q, k, opts.embedding_tolerance);
    if !fe.holds {
        if strict {
            return Err(Error::FunctionalEquationFailure(format!(
                "exact identity {}, modulus deviation {:e}",
                fe.exact_identity, fe.modulus_check
            )));
        }
        report.flags.push("functional_equation_fails".into());
        report.verified = false;
    }
    report.functional_equation = Some(fe);
    let (weights, worst) = root_weights(&pk, (q as f64).powf((k as f64 + 1.0) / 2.0));
    if worst > opts.weight_tolerance {
        report.flags.push("weight_check_fails".into());
        report.verified = false;
    }
    report.weights = weights;
    report.weight_deviation = Some(worst);
    Ok(report)
}

/// Full pipeline for one `k`: predicted degree, closed-point fibers up to the
/// truncation order, series, reconstruction and verification.
pub fn lfunction(fam: &AiryFamily, k: usize, cfg: &RunConfig, cache: Option<&Cache>) -> Result<LReport> {
    let model = infinity_model(fam)?;
    let predicted = predicted_degree_with(fam, &model, k)?;
    let needed = predicted.unsigned_abs() as usize;
    let wanted = needed + cfg.guard;
    let reachable = max_moment_order(fam, cfg.max_enumeration);
    if reachable < needed.max(1) {
        fibers_up_to(fam, needed.max(1), cfg.max_enumeration, cache)?;
    }
    let m = wanted.min(reachable).max(1);
    let batches = fibers_up_to(fam, m, cfg.max_enumeration, cache)?;
    let verdict = verdict_from_fibers(fam, &batches[..1]);
    let table = moments_from_fibers(&batches, fam.p(), k, m)?;
    let series = l_series(&table, fam.p())?;
    let opts = VerifyOptions::from_config(cfg, verdict.status == Status::FiniteSuspected);
    let mut report = reconstruct_and_verify(fam, k, &series, predicted, &opts)?;
    if m < wanted {
        report.flags.push(format!("truncated_at_order_{m}_by_budget"));
    }
    Ok(report)
}

/// Verdict from the degree-one fibers alone; cheap enough to attach to
/// every report.
pub fn quick_verdict(fam: &AiryFamily, budget: u64, cache: Option<&Cache>) -> Result<MonodromyVerdict> {
    Ok(verdict_from_fibers(fam, &[closed_point_fibers(fam, 1, budget, cache)?]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::psi;
    use crate::ff::DEFAULT_BUDGET;
    use crate::fiber::{exp_sum_batch, sym_local_factor, FiberLPoly};

    fn x3_7() -> AiryFamily {
        AiryFamily::monomial(7, 3).unwrap()
    }

    fn int(p: u32, n: i64) -> CycloInt {
        CycloInt::from_integer(p, n.into())
    }

    fn necklaces(q: u128, e: usize) -> usize {
        let mu = |n: usize| -> i64 {
            let mut n = n;
            let mut r = 1;
            let mut f = 2;
            while f * f <= n {
                if n % f == 0 {
                    n /= f;
                    if n % f == 0 {
                        return 0;
                    }
                    r = -r;
                }
                f += 1;
            }
            if n > 1 {
                r = -r;
            }
            r
        };
        let s: i64 = (1..=e).filter(|r| e % r == 0).map(|r| mu(e / r) * q.pow(r as u32) as i64).sum();
        s as usize / e
    }

    #[test]
    fn closed_point_counts() {
        let f = x3_7();
        assert_eq!(closed_points(&f, 1, DEFAULT_BUDGET).unwrap().len(), 7);
        assert_eq!(closed_points(&f, 2, DEFAULT_BUDGET).unwrap().len(), 21);
        assert_eq!(closed_points(&f, 3, DEFAULT_BUDGET).unwrap().len(), 112);
        let g = AiryFamily::from_ints(5, 2, &[0, 0, 0, 1]).unwrap();
        for e in 1..=3 {
            assert_eq!(closed_points(&g, e, DEFAULT_BUDGET).unwrap().len(), necklaces(25, e));
        }
        // representatives are orbit minima
        for t in closed_points(&f, 2, DEFAULT_BUDGET).unwrap() {
            assert!(t.frobenius() > t);
        }
    }

    #[test]
    fn k0_moments_and_series() {
        let f = x3_7();
        let t = moments(&f, 0, 4, DEFAULT_BUDGET, None).unwrap();
        for (m, c) in t.entries.iter().enumerate() {
            assert_eq!(*c, int(7, 7i64.pow(m as u32 + 1)));
        }
        let s = l_series(&t, 7).unwrap();
        for (i, c) in s.coeffs().iter().enumerate() {
            assert_eq!(*c, int(7, 7i64.pow(i as u32)));
        }
    }

    #[test]
    fn first_moment_by_orthogonality() {
        for f in [x3_7(), AiryFamily::from_ints(7, 1, &[3, 1, 0, 2]).unwrap(), AiryFamily::from_ints(5, 1, &[2, 0, 1, 0, 3]).unwrap()] {
            let t = moments(&f, 1, 1, DEFAULT_BUDGET, None).unwrap();
            let p = f.p();
            let expect = psi(p, f.coeff(0).absolute_trace() as u64).scale_int(-(f.q() as i64));
            assert_eq!(t.entries[0], expect);
            let direct = exp_sum_batch(&f, 1, 1, DEFAULT_BUDGET)
                .unwrap()
                .iter()
                .fold(CycloInt::zero(p), |a, s| a.sub_ref(s));
            assert_eq!(t.entries[0], direct);
        }
    }

    #[test]
    fn series_equals_product_of_local_factors() {
        let f = AiryFamily::from_ints(7, 1, &[1, 0, 2, 3]).unwrap();
        let m = 3;
        for k in 1..=3 {
            let series = l_series(&moments(&f, k, m, DEFAULT_BUDGET, None).unwrap(), 7).unwrap();
            let zero = CycloInt::zero(7);
            let mut prod = Poly::constant(CycloInt::one(7)).to_series(m, &zero);
            for e in 1..=m {
                let batch = closed_point_fibers(&f, e, DEFAULT_BUDGET, None).unwrap();
                for i in 0..batch.points.len() {
                    let fiber = FiberLPoly {
                        base_ext: e,
                        t: batch.points[i],
                        field_degree: e,
                        l: batch.poly(i),
                        termination_checked: false,
                    };
                    let local = sym_local_factor(&fiber, k).unwrap();
                    let mut spread = vec![zero.clone(); local.coeffs().len() * e];
                    for (j, c) in local.coeffs().iter().enumerate() {
                        spread[j * e] = c.clone();
                    }
                    let inv = Poly::new(spread).to_series(m, &zero).inverse().unwrap();
                    prod = prod.mul(&inv);
                }
            }
            assert_eq!(series, prod, "k = {k}");
        }
    }

    #[test]
    fn cube_over_seven_examples() {
        let f = x3_7();
        let s2 = l_series(&moments(&f, 2, 3, DEFAULT_BUDGET, None).unwrap(), 7).unwrap();
        assert!(s2.coeffs()[1..].iter().all(CycloInt::is_zero));
        let s4 = l_series(&moments(&f, 4, 3, DEFAULT_BUDGET, None).unwrap(), 7).unwrap();
        assert_eq!(s4.coeffs().to_vec(), vec![int(7, 1), int(7, -49), int(7, 0), int(7, 0)]);
    }

    #[test]
    fn pipeline_small_k() {
        let cfg = RunConfig::default();
        let f = x3_7();
        let r0 = lfunction(&f, 0, &cfg, None).unwrap();
        let rat = r0.m_rational.unwrap();
        assert_eq!(rat.numerator, vec![int(7, 1)]);
        assert_eq!(rat.denominator, vec![int(7, 1), int(7, -7)]);
        let r1 = lfunction(&f, 1, &cfg, None).unwrap();
        assert_eq!(r1.observed_degree, Some(1));
        assert!(r1.verified, "{:?}", r1.flags);
        let r4 = lfunction(&f, 4, &cfg, None).unwrap();
        assert_eq!(r4.m_poly.unwrap(), vec![int(7, 1), int(7, -49)]);
        assert_eq!(r4.p_factor.unwrap(), vec![int(7, 1)]);
        assert_eq!(r4.functional_equation.unwrap().r, 0);
    }

    #[test]
    fn functional_equation_on_known_polys() {
        // 1 + 7T over q = 49, k = 0: c = 7 and |c| = 49^{1/2}
        let p = Poly::new(vec![int(7, 1), int(7, 7)]);
        let fe = check_functional_equation(&p, 49, 0, 1e-9);
        assert!(fe.exact_identity && fe.holds);
        let bad = Poly::new(vec![int(7, 1), int(7, 3)]);
        assert!(!check_functional_equation(&bad, 7, 0, 1e-9).holds);
    }

    #[test]
    fn cache_gives_identical_results() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let f = x3_7();
        let a = closed_point_fibers(&f, 2, DEFAULT_BUDGET, Some(&cache)).unwrap();
        let b = closed_point_fibers(&f, 2, DEFAULT_BUDGET, Some(&cache)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, closed_point_fibers(&f, 2, DEFAULT_BUDGET, None).unwrap());
    }
}
