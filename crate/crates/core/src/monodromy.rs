//! One-sided evidence about finite monodromy from fiber Newton polygons, the
//! Sperber slope prediction and the Scholten-Zhu `U`-operator test.

use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::ff::FieldElement;
use crate::fiber::{newton_polygon_of, AiryFamily};
use crate::global::{closed_point_fibers, ClosedPointFibers};
use crate::report::rationals_to_strings;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    InfiniteCertain,
    FiniteSuspected,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Evidence {
    pub criterion: String,
    /// Degree of the closed point.
    pub e: usize,
    /// Element index of the representative in `F_{q^e}`.
    pub t: u128,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyVerdict {
    pub status: Status,
    pub scan_depth: usize,
    pub fibers_scanned: usize,
    pub evidence: Vec<Evidence>,
}

/// Verdict from already computed closed-point fibers.
pub fn verdict_from_fibers(fam: &AiryFamily, batches: &[ClosedPointFibers]) -> MonodromyVerdict {
    let mut evidence = Vec::new();
    let mut any_multi = false;
    let mut scanned = 0;
    for batch in batches {
        for (i, &t) in batch.points.iter().enumerate() {
            let np = newton_polygon_of(&batch.poly(i), batch.field_degree);
            scanned += 1;
            let single = np.is_single_slope();
            any_multi |= !single;
            evidence.push(Evidence {
                criterion: "single_slope".into(),
                e: batch.e,
                t,
                detail: format!("slopes [{}]", rationals_to_strings(&np.slopes()).join(", ")),
            });
        }
    }
    let status = if any_multi {
        Status::InfiniteCertain
    } else if fam.degree() == 2 {
        Status::Inconclusive
    } else {
        Status::FiniteSuspected
    };
    MonodromyVerdict {
        status,
        scan_depth: batches.iter().map(|b| b.e).max().unwrap_or(0),
        fibers_scanned: scanned,
        evidence,
    }
}

/// Newton polygons of one fiber per closed point of degree `<= max_e`.
pub fn scan_single_slope(fam: &AiryFamily, max_e: usize, budget: u64, cache: Option<&Cache>) -> Result<MonodromyVerdict> {
    let batches = (1..=max_e)
        .map(|e| closed_point_fibers(fam, e, budget, cache))
        .collect::<Result<Vec<_>>>()?;
    Ok(verdict_from_fibers(fam, &batches))
}

/// Slopes `1/d, .., (d-1)/d` when `p = 1 mod d`.
pub fn sperber_predicted_np(p: u64, d: usize) -> Option<Vec<BigRational>> {
    (d >= 2 && p % d as u64 == 1)
        .then(|| (1..d).map(|i| BigRational::new(BigInt::from(i), BigInt::from(d))).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScholtenZhu {
    /// `c_1..c_{s_max}` as residues mod `p`.
    pub cs: Vec<u64>,
    /// Least `k` with `c_k != 0`.
    pub first_nonzero: Option<usize>,
    /// `k/(p-1)`, an upper bound for the first slope.
    #[serde(serialize_with = "ser_opt_rational")]
    pub np1_bound: Option<BigRational>,
    /// `k < (p-1)/2`, which forces a first slope below 1/2 and hence infinite monodromy.
    pub infinite_per_remark: bool,
    /// Set when `p` lies outside `d/2 + 1 < p <= 2d - 1`, or when `f(0) != 0`:
    /// `U(x^0) = 1` then feeds the constant term of `(h)_s` into `c_s` and the
    /// bound can fail.
    pub advisory: bool,
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

fn mul_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// `U(h) = sum of the coefficients of x^n with (p-1) | n`.
fn u_operator(h: &[u64], p: u64) -> u64 {
    h.iter().enumerate().filter(|(n, _)| *n as u64 % (p - 1) == 0).fold(0, |s, (_, &c)| (s + c) % p)
}

/// `c_s = U((f(x) + tx)_s)` with `(h)_s = h (h - 1) .. (h - s + 1)`.
pub fn scholten_zhu_cs(fam: &AiryFamily, t: &FieldElement, s_max: usize) -> Result<ScholtenZhu> {
    if fam.a() != 1 {
        return Err(Error::Unsupported("the U-operator test needs q = p".into()));
    }
    let tp = t
        .as_prime()
        .filter(|_| t.field().degree() == 1)
        .ok_or_else(|| Error::InvalidInput("t must lie in F_p".into()))?;
    let p = fam.p() as u64;
    let d = fam.degree();
    let mut h: Vec<u64> = fam.coeffs().iter().map(|c| c.as_prime().unwrap() as u64).collect();
    h[1] = (h[1] + tp as u64) % p;
    let mut falling = vec![1u64];
    let mut cs = Vec::with_capacity(s_max);
    for s in 0..s_max {
        let mut factor = h.clone();
        factor[0] = (factor[0] + p - s as u64 % p) % p;
        falling = mul_mod(&falling, &factor, p);
        cs.push(u_operator(&falling, p));
    }
    let first_nonzero = cs.iter().position(|&c| c != 0).map(|i| i + 1);
    let np1_bound = first_nonzero.map(|k| BigRational::new(BigInt::from(k), BigInt::from(p - 1)));
    Ok(ScholtenZhu {
        cs,
        first_nonzero,
        np1_bound,
        infinite_per_remark: first_nonzero.map_or(false, |k| 2 * k < (p - 1) as usize),
        advisory: !(d + 2 < 2 * p as usize && p as usize <= 2 * d - 1) || h[0] != 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{build_field, DEFAULT_BUDGET};
    use rand::{Rng, SeedableRng};

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn sperber_examples() {
        assert_eq!(sperber_predicted_np(7, 3), Some(vec![r(1, 3), r(2, 3)]));
        assert_eq!(sperber_predicted_np(5, 3), None);
        assert_eq!(sperber_predicted_np(13, 4), Some(vec![r(1, 4), r(1, 2), r(3, 4)]));
    }

    #[test]
    fn scan_examples() {
        let v = scan_single_slope(&AiryFamily::monomial(5, 3).unwrap(), 2, DEFAULT_BUDGET, None).unwrap();
        assert_eq!(v.status, Status::FiniteSuspected);
        assert_eq!(v.fibers_scanned, 5 + 10);
        let v = scan_single_slope(&AiryFamily::monomial(7, 3).unwrap(), 1, DEFAULT_BUDGET, None).unwrap();
        assert_eq!(v.status, Status::InfiniteCertain);
        let f = AiryFamily::from_ints(7, 1, &[1, 2, 5]).unwrap();
        assert_eq!(scan_single_slope(&f, 2, DEFAULT_BUDGET, None).unwrap().status, Status::Inconclusive);
    }

    #[test]
    fn sperber_matches_scanned_polygons() {
        for (p, d) in [(7u64, 3usize), (13, 4), (11, 5)] {
            let f = AiryFamily::monomial(p, d).unwrap();
            let pred = sperber_predicted_np(p, d).unwrap();
            let batch = closed_point_fibers(&f, 1, DEFAULT_BUDGET, None).unwrap();
            for i in 0..batch.points.len() {
                assert_eq!(newton_polygon_of(&batch.poly(i), 1).slopes(), pred);
            }
        }
    }

    #[test]
    fn u_operator_examples() {
        // x^d + x^{p-1} with d > p - 1: c_1 = 1 for every t
        for (p, d) in [(5u64, 6usize), (7, 8), (5, 7)] {
            let mut c = vec![0i64; d + 1];
            c[d] = 1;
            c[p as usize - 1] = 1;
            let f = AiryFamily::from_ints(p, 1, &c).unwrap();
            let fp = build_field(p, 1).unwrap();
            for t in 0..p as i64 {
                let sz = scholten_zhu_cs(&f, &FieldElement::from_int(&fp, t), 3).unwrap();
                assert_eq!(sz.cs[0], 1);
                assert_eq!(sz.first_nonzero, Some(1));
            }
        }
        assert_eq!(u_operator(&[3], 7), 3);
    }

    #[test]
    fn c1_by_direct_coefficient_sum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let p = [5u64, 7, 11, 13][rng.gen_range(0..4)];
            let d = rng.gen_range(2..8usize);
            if d as u64 % p == 0 {
                continue;
            }
            let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(0..p as i64)).collect();
            c[d] = rng.gen_range(1..p as i64);
            let f = AiryFamily::from_ints(p, 1, &c).unwrap();
            let t = rng.gen_range(0..p as i64);
            let fp = build_field(p, 1).unwrap();
            let sz = scholten_zhu_cs(&f, &FieldElement::from_int(&fp, t), 1).unwrap();
            let mut h = c.clone();
            h[1] += t;
            let direct = h
                .iter()
                .enumerate()
                .filter(|(n, _)| *n == 0 || *n as u64 % (p - 1) == 0)
                .map(|(_, &v)| v)
                .sum::<i64>()
                .rem_euclid(p as i64);
            assert_eq!(sz.cs[0], direct as u64);
        }
    }

    #[test]
    fn u_test_agrees_with_polygons() {
        // p in the recommended window: d = 4, p = 5 and 7
        for (p, c) in [(5u64, vec![0i64, 0, 1, 0, 1]), (7, vec![0, 0, 0, 1, 1]), (7, vec![0, 1, 3, 0, 2])] {
            let f = AiryFamily::from_ints(p, 1, &c).unwrap();
            let batch = closed_point_fibers(&f, 1, DEFAULT_BUDGET, None).unwrap();
            for (i, &t) in batch.points.iter().enumerate() {
                let tt = FieldElement::from_index(f.base(), t).unwrap();
                let sz = scholten_zhu_cs(&f, &tt, 5).unwrap();
                let np = newton_polygon_of(&batch.poly(i), 1);
                if let Some(b) = &sz.np1_bound {
                    assert!(np.first_slope().unwrap() <= *b, "p={p} c={c:?} t={t}");
                    if *b < r(1, 2) {
                        assert!(!np.is_single_slope());
                    }
                }
            }
        }
    }

    #[test]
    fn constant_term_convention_breaks_bound() {
        // f(0) = 1 makes c_1 = 1, but the first slope at t = 0 is 1/3 > 1/6
        let f = AiryFamily::from_ints(7, 1, &[1, 0, 3, 0, 2]).unwrap();
        let t = FieldElement::zero(f.base());
        let sz = scholten_zhu_cs(&f, &t, 5).unwrap();
        assert_eq!(sz.cs[0], 1);
        assert!(sz.advisory);
        let np = newton_polygon_of(&crate::fiber::fiber_l_poly(&f, 1, &t, DEFAULT_BUDGET).unwrap().l, 1);
        assert_eq!(np.first_slope().unwrap(), r(1, 3));
    }
}
