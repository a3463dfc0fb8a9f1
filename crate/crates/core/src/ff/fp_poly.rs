//! Polynomials over a prime field on plain `u64` residues, used only for
//! modulus selection.

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// Remainder of `a` modulo the monic-or-not polynomial `m`.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lc_inv = inv_mod(*m.last().unwrap(), p);
    let mut r = trim(a.to_vec());
    while r.len() > dm {
        let c = r.last().unwrap() * lc_inv % p;
        let shift = r.len() - 1 - dm;
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + (p - c) * mi) % p;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn pow_poly_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1];
    let mut base = rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &base, m, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul_mod(&base, &base, m, p);
        }
    }
    rem(&acc, m, p)
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut f = 2;
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

/// Rabin's test: `f` (monic, degree `n`) is irreducible iff
/// `x^{p^n} = x mod f` and `gcd(x^{p^{n/r}} - x, f) = 1` for primes `r | n`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = rem(&[0, 1], f, p);
    // frob[i] = x^{p^i} mod f
    let mut frob = vec![x.clone()];
    for i in 0..n {
        let next = pow_poly_mod(&frob[i], p, f, p);
        frob.push(next);
    }
    if frob[n] != x {
        return false;
    }
    prime_divisors(n).into_iter().all(|r| {
        let g = gcd(f, &sub(&frob[n / r], &x, p), p);
        g.len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_irreducible(f: &[u64], p: u64) -> bool {
        // no monic factor of degree 1..=n/2
        let n = f.len() - 1;
        for deg in 1..=n / 2 {
            let count = p.pow(deg as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(deg + 1);
                let mut v = idx;
                for _ in 0..deg {
                    g.push(v % p);
                    v /= p;
                }
                g.push(1);
                if rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_agrees_with_trial_division() {
        for p in [2u64, 3, 5] {
            for n in 2..=4usize {
                for idx in 0..p.pow(n as u32) {
                    let mut f = Vec::new();
                    let mut v = idx;
                    for _ in 0..n {
                        f.push(v % p);
                        v /= p;
                    }
                    f.push(1);
                    assert_eq!(is_irreducible(&f, p), brute_force_irreducible(&f, p), "{f:?} mod {p}");
                }
            }
        }
    }
}
