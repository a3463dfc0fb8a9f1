//! Field registry, compatible embeddings, relative traces and root finding.

use super::{ensure_enumerable, ExtField, FieldElement, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::fiber::AiryFamily;
use crate::polyser::Poly;
use crate::ring::Ring;
use num_integer::Integer;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

type FieldKey = (u32, usize);
type HomKey = (u32, usize, usize);

fn fields() -> &'static RwLock<HashMap<FieldKey, Arc<ExtField>>> {
    static FIELDS: OnceLock<RwLock<HashMap<FieldKey, Arc<ExtField>>>> = OnceLock::new();
    FIELDS.get_or_init(Default::default)
}

fn homs() -> &'static RwLock<HashMap<HomKey, Arc<FieldHom>>> {
    static HOMS: OnceLock<RwLock<HashMap<HomKey, Arc<FieldHom>>>> = OnceLock::new();
    HOMS.get_or_init(Default::default)
}

/// The deterministic `F_{p^n}`; memoized.
pub fn build_field(p: u64, n: usize) -> Result<Arc<ExtField>> {
    if !super::is_prime(p) || p > u32::MAX as u64 {
        return Err(Error::NotPrime(p));
    }
    let key = (p as u32, n);
    if let Some(f) = fields().read().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let built = Arc::new(ExtField::construct(p as u32, n)?);
    let mut w = fields().write().unwrap();
    Ok(w.entry(key).or_insert(built).clone())
}

/// An embedding `F_{p^n} -> F_{p^m}`.
#[derive(Debug)]
pub struct FieldHom {
    source: Arc<ExtField>,
    target: Arc<ExtField>,
    image_of_generator: FieldElement,
    /// Images of the power basis `1, g, .., g^{n-1}` (raw target coordinates).
    basis_images: Vec<Vec<u32>>,
    /// Rows of the target coordinates that determine a preimage.
    pivot_rows: Vec<usize>,
    /// Inverse of the basis-image matrix restricted to `pivot_rows`.
    left_inverse: Vec<Vec<u32>>,
}

impl FieldHom {
    fn new(source: Arc<ExtField>, target: Arc<ExtField>, image: FieldElement) -> Self {
        let n = source.degree();
        let mut basis_images = Vec::with_capacity(n);
        let mut cur = target.one_raw();
        for _ in 0..n {
            basis_images.push(cur.clone());
            cur = target.mul_raw(&cur, image.coeffs());
        }
        let (pivot_rows, left_inverse) = left_inverse(&basis_images, target.degree(), source.p());
        FieldHom { source, target, image_of_generator: image, basis_images, pivot_rows, left_inverse }
    }

    pub fn source(&self) -> &Arc<ExtField> {
        &self.source
    }

    pub fn target(&self) -> &Arc<ExtField> {
        &self.target
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image_of_generator
    }

    pub(crate) fn apply_raw(&self, x: &[u32]) -> Vec<u32> {
        let p = self.target.p() as u64;
        let mut out = vec![0u64; self.target.degree()];
        for (xi, img) in x.iter().zip(&self.basis_images) {
            if *xi == 0 {
                continue;
            }
            for (o, c) in out.iter_mut().zip(img) {
                *o = (*o + *xi as u64 * *c as u64) % p;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Image of `x`; fails if `x` does not live in the source field.
    pub fn apply(&self, x: &FieldElement) -> Result<FieldElement> {
        if !Arc::ptr_eq(x.field(), &self.source) && x.field().degree() != self.source.degree() {
            return Err(Error::IncompatibleFields(format!(
                "element of degree {} fed to an embedding from degree {}",
                x.field().degree(),
                self.source.degree()
            )));
        }
        Ok(FieldElement::from_raw(&self.target, self.apply_raw(x.coeffs())))
    }

    pub(crate) fn preimage_raw(&self, y: &[u32]) -> Option<Vec<u32>> {
        let p = self.target.p() as u64;
        let x: Vec<u32> = self
            .left_inverse
            .iter()
            .map(|row| {
                (row.iter().zip(&self.pivot_rows).fold(0u64, |acc, (&b, &r)| {
                    (acc + b as u64 * y[r] as u64) % p
                })) as u32
            })
            .collect();
        (self.apply_raw(&x) == y).then_some(x)
    }

    /// The unique source element mapping to `y`, if `y` lies in the image.
    pub fn preimage(&self, y: &FieldElement) -> Option<FieldElement> {
        self.preimage_raw(y.coeffs()).map(|x| FieldElement::from_raw(&self.source, x))
    }
}

/// Pivot rows and the inverse of the square submatrix they select, for a
/// full-column-rank matrix given by its columns.
fn left_inverse(columns: &[Vec<u32>], rows: usize, p: u32) -> (Vec<usize>, Vec<Vec<u32>>) {
    let n = columns.len();
    let p64 = p as u64;
    let inv = |a: u64| super::fp_poly::pow_mod(a, p64 - 2, p64);
    // choose pivot rows greedily by elimination on the transpose
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut pivots = Vec::new();
    for r in 0..rows {
        let mut v: Vec<u64> = columns.iter().map(|c| c[r] as u64).collect();
        for (pc, b) in &basis {
            let f = v[*pc];
            if f != 0 {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = (*vi + (p64 - f) * bi) % p64;
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let s = inv(v[pc]);
            v.iter_mut().for_each(|x| *x = *x * s % p64);
            basis.push((pc, v));
            pivots.push(r);
            if pivots.len() == n {
                break;
            }
        }
    }
    assert_eq!(pivots.len(), n, "embedding matrix must have full rank");
    // invert the n x n matrix A[i][j] = columns[j][pivots[i]]
    let mut aug: Vec<Vec<u64>> = pivots
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut row: Vec<u64> = columns.iter().map(|c| c[r] as u64).collect();
            row.extend((0..n).map(|j| (i == j) as u64));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| aug[i][col] != 0).expect("nonsingular");
        aug.swap(col, piv);
        let s = inv(aug[col][col]);
        aug[col].iter_mut().for_each(|x| *x = *x * s % p64);
        for i in 0..n {
            if i != col && aug[i][col] != 0 {
                let f = aug[i][col];
                let pivot_row = aug[col].clone();
                for (x, y) in aug[i].iter_mut().zip(&pivot_row) {
                    *x = (*x + (p64 - f) * y) % p64;
                }
            }
        }
    }
    let inverse = aug.into_iter().map(|row| row[n..].iter().map(|&x| x as u32).collect()).collect();
    (pivots, inverse)
}

/// The registered embedding `F_{p^n} -> F_{p^m}`.
///
/// The generator goes to the smallest root of the source modulus that agrees
/// with the registered embeddings of every intermediate subfield, so that
/// composites along any tower coincide.
pub fn field_hom(p: u64, n: usize, m: usize) -> Result<Arc<FieldHom>> {
    if n == 0 || m % n != 0 {
        return Err(Error::IncompatibleFields(format!("degree {n} does not divide {m}")));
    }
    let key = (p as u32, n, m);
    if let Some(h) = homs().read().unwrap().get(&key) {
        return Ok(h.clone());
    }
    let source = build_field(p, n)?;
    let target = build_field(p, m)?;
    let image = if n == 1 {
        FieldElement::zero(&target)
    } else if n == m {
        FieldElement::generator(&target)
    } else {
        let modulus = modulus_poly(&source, &target);
        let roots = find_roots(&modulus)?;
        let subfields: Vec<usize> = (2..n).filter(|l| n % l == 0).collect();
        let mut checks = Vec::new();
        for &l in &subfields {
            let lower = field_hom(p, l, n)?;
            let direct = field_hom(p, l, m)?;
            checks.push((lower, direct.apply_raw(FieldElement::generator(&build_field(p, l)?).coeffs())));
        }
        roots
            .into_iter()
            .find(|r| {
                let candidate = FieldHom::new(source.clone(), target.clone(), r.clone());
                checks.iter().all(|(lower, expected)| {
                    let gl = FieldElement::generator(lower.source());
                    candidate.apply_raw(&lower.apply_raw(gl.coeffs())) == *expected
                })
            })
            .ok_or_else(|| Error::InternalMismatch(format!("no compatible embedding {n} -> {m}")))?
    };
    let hom = Arc::new(FieldHom::new(source, target, image));
    let mut w = homs().write().unwrap();
    Ok(w.entry(key).or_insert(hom).clone())
}

/// `x` mapped along the registered embedding.
pub fn embed(x: &FieldElement, hom: &FieldHom) -> Result<FieldElement> {
    hom.apply(x)
}

/// The modulus of `source` as a polynomial over `target`.
fn modulus_poly(source: &ExtField, target: &Arc<ExtField>) -> Poly<FieldElement> {
    let mut c: Vec<FieldElement> =
        source.modulus().iter().map(|&m| FieldElement::from_int(target, m as i64)).collect();
    c.push(FieldElement::one(target));
    Poly::new(c)
}

/// All distinct roots of `f` in its coefficient field, ascending in element
/// order.
pub fn find_roots(f: &Poly<FieldElement>) -> Result<Vec<FieldElement>> {
    let Some(deg) = f.degree() else {
        return Err(Error::InvalidInput("the zero polynomial has every element as a root".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let field = f.coeffs()[0].field().clone();
    let mut roots = if field.size() <= 4096 || field.p() == 2 {
        ensure_enumerable(field.size(), DEFAULT_BUDGET)?;
        FieldElement::all(&field).filter(|x| f.eval(x).is_zero()).collect()
    } else {
        let f = f.monic().expect("nonzero polynomial over a field");
        let x = Poly::new(vec![FieldElement::zero(&field), FieldElement::one(&field)]);
        let split = x.pow_mod(field.size(), &f).sub(&x).rem(&f);
        let g = f.gcd(&split);
        let mut out = Vec::new();
        split_roots(&g, &field, &mut out);
        out
    };
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Equal-degree splitting of a squarefree product of linear factors.
fn split_roots(g: &Poly<FieldElement>, field: &Arc<ExtField>, out: &mut Vec<FieldElement>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let g = g.monic().unwrap();
            out.push(g.coeffs()[0].neg_ref());
        }
        Some(deg) => {
            let half = (field.size() - 1) / 2;
            let one = Poly::constant(FieldElement::one(field));
            for idx in 0..field.size() {
                let delta = FieldElement::from_raw(field, field.raw_from_index(idx));
                let lin = Poly::new(vec![delta, FieldElement::one(field)]);
                let h = g.gcd(&lin.pow_mod(half, g).sub(&one));
                let dh = h.degree().unwrap_or(0);
                if dh > 0 && dh < deg {
                    let rest = g.div_exact(&h).expect("gcd divides");
                    split_roots(&h, field, out);
                    split_roots(&rest, field, out);
                    return;
                }
            }
            unreachable!("splitting always succeeds in odd characteristic");
        }
    }
}

/// `Tr_{F_{p^m}/F_{p^n}}(x)` as an element of `sub = F_{p^n}`.
pub fn relative_trace(x: &FieldElement, sub: &Arc<ExtField>) -> Result<FieldElement> {
    let big = x.field().clone();
    let (n, m) = (sub.degree(), big.degree());
    if sub.p() != big.p() || m % n != 0 {
        return Err(Error::IncompatibleFields(format!("F_{}^{n} is not a subfield of F_{}^{m}", sub.p(), big.p())));
    }
    let hom = field_hom(big.p() as u64, n, m)?;
    let step = (sub.p() as u128).pow(n as u32);
    let mut acc = FieldElement::zero(&big);
    let mut cur = x.clone();
    for _ in 0..m / n {
        acc = acc.add_ref(&cur);
        cur = cur.pow_big(step);
    }
    hom.preimage(&acc)
        .ok_or_else(|| Error::InternalMismatch("relative trace left the subfield".into()))
}

/// Smallest element of exact multiplicative order `n`.
pub fn root_of_unity(field: &Arc<ExtField>, n: u64) -> Result<FieldElement> {
    let group = field.size() - 1;
    if n == 0 || group % n as u128 != 0 {
        return Err(Error::NoSuchRoot { order: n, size: field.size() });
    }
    let generator = (1..field.size())
        .map(|i| FieldElement::from_raw(field, field.raw_from_index(i)))
        .find(|x| x.multiplicative_order() == Some(group))
        .expect("the multiplicative group is cyclic");
    let w = generator.pow_big(group / n as u128);
    Ok((1..=n)
        .filter(|j| j.gcd(&n) == 1)
        .map(|j| w.pow_big(j as u128))
        .min()
        .expect("phi(n) >= 1"))
}

/// Smallest `s` such that `F_{q^s}` contains every `2(d-1)`-th root of `-d c_d`.
pub fn minimal_extension_for_infinity(fam: &AiryFamily) -> Result<usize> {
    if fam.p() == 2 {
        return Err(Error::Unsupported("characteristic 2".into()));
    }
    let d = fam.degree();
    let order = 2 * (d as u128 - 1);
    let beta = fam.coeff(d).scale_int(-(d as i64));
    let q = fam.q();
    let mut qs = 1u128;
    for s in 1..=64usize {
        qs = qs
            .checked_mul(q)
            .ok_or_else(|| Error::InvalidInput("q^s overflows while searching the extension".into()))?;
        if (qs - 1) % order != 0 {
            continue;
        }
        // beta lies in F_q, so its exponent may be reduced mod q - 1
        let e = ((qs - 1) / order) % (q - 1);
        if beta.pow_big(e) == FieldElement::one(beta.field()) {
            return Ok(s);
        }
    }
    Err(Error::InternalMismatch("no extension found for the roots at infinity".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_examples() {
        let h = field_hom(7, 1, 2).unwrap();
        let three = FieldElement::from_int(h.source(), 3);
        assert_eq!(embed(&three, &h).unwrap(), FieldElement::from_int(h.target(), 3));
        assert!(embed(&FieldElement::zero(h.source()), &h).unwrap().is_zero());
        // smallest root of x^2 + 1 in F_{7^4}, by scan
        let h24 = field_hom(7, 2, 4).unwrap();
        let big = h24.target().clone();
        let smallest = FieldElement::all(&big)
            .find(|r| r.mul_ref(r).add_ref(&FieldElement::one(&big)).is_zero())
            .unwrap();
        assert_eq!(h24.image_of_generator(), &smallest);
        assert!(field_hom(7, 2, 3).is_err());
    }

    #[test]
    fn embeddings_compose() {
        for (p, a, b, c) in [(3u64, 1usize, 2usize, 4usize), (3, 2, 4, 8), (5, 2, 4, 4), (3, 3, 6, 6), (2, 2, 4, 8)] {
            let ab = field_hom(p, a, b).unwrap();
            let bc = field_hom(p, b, c).unwrap();
            let ac = field_hom(p, a, c).unwrap();
            for x in FieldElement::all(ab.source()) {
                let two_step = bc.apply(&ab.apply(&x).unwrap()).unwrap();
                assert_eq!(two_step, ac.apply(&x).unwrap());
            }
        }
    }

    #[test]
    fn embedding_is_ring_hom_with_preimage() {
        let h = field_hom(5, 2, 6).unwrap();
        let xs: Vec<_> = FieldElement::all(h.source()).collect();
        for x in &xs {
            for y in xs.iter().step_by(3) {
                let lhs = h.apply(&x.mul_ref(y)).unwrap();
                let rhs = h.apply(x).unwrap().mul_ref(&h.apply(y).unwrap());
                assert_eq!(lhs, rhs);
            }
            assert_eq!(h.preimage(&h.apply(x).unwrap()).as_ref(), Some(x));
        }
        assert!(h.preimage(&FieldElement::generator(h.target())).is_none());
    }

    #[test]
    fn roots_match_scan() {
        let f = build_field(13, 3).unwrap();
        let one = FieldElement::one(&f);
        // x^3 - 2 and x^4 - 1 over F_{13^3}
        for coeffs in [vec![-2i64, 0, 0, 1], vec![-1, 0, 0, 0, 1], vec![5, 1, 0, 0, 0, 0, 1]] {
            let poly = Poly::new(coeffs.iter().map(|&c| one.scale_int(c)).collect());
            let fast = find_roots(&poly).unwrap();
            let slow: Vec<_> = FieldElement::all(&f).filter(|x| poly.eval(x).is_zero()).collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn relative_trace_properties() {
        let sub = build_field(3, 2).unwrap();
        let big = build_field(3, 6).unwrap();
        let hom = field_hom(3, 2, 6).unwrap();
        assert_eq!(relative_trace(&FieldElement::one(&big), &sub).unwrap(), FieldElement::from_int(&sub, 3));
        for x in FieldElement::all(&sub) {
            let y = relative_trace(&hom.apply(&x).unwrap(), &sub).unwrap();
            assert_eq!(y, x.scale_int(3));
        }
        for x in FieldElement::all(&big) {
            let y = relative_trace(&x, &sub).unwrap();
            assert_eq!(y.absolute_trace(), x.absolute_trace());
        }
    }

    #[test]
    fn roots_of_unity() {
        let f7 = build_field(7, 1).unwrap();
        assert_eq!(root_of_unity(&f7, 2).unwrap(), FieldElement::from_int(&f7, 6));
        assert_eq!(root_of_unity(&f7, 5).unwrap_err(), Error::NoSuchRoot { order: 5, size: 7 });
        let f13 = build_field(13, 1).unwrap();
        assert_eq!(root_of_unity(&f13, 3).unwrap(), FieldElement::from_int(&f13, 3));
        let f = build_field(5, 4).unwrap();
        for n in [2u64, 3, 4, 6, 8, 12, 13, 16, 24, 48] {
            let z = root_of_unity(&f, n).unwrap();
            assert_eq!(z.multiplicative_order(), Some(n as u128));
            let smallest = FieldElement::all(&f).find(|x| x.multiplicative_order() == Some(n as u128));
            assert_eq!(Some(z), smallest);
        }
    }
}
