//! Dense polynomials over GF(p) with `u64` residues, coefficients in
//! ascending order. These helpers back the finite-field backend.

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    add_mod(a, p - b % p, p)
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, (a % p) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    trim(&mut out);
    out
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = sub_mod(x, y, p);
    }
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by a nonzero `m`.
pub(crate) fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut m = m.to_vec();
    trim(&mut m);
    assert!(!m.is_empty(), "division by the zero polynomial");
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p).expect("leading coefficient must be invertible");
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = mul_mod(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (j, &mj) in m.iter().enumerate() {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(c, mj, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    divrem(a, m, p).1
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)` and `g = gcd(a, m)` (not normalized).
pub(crate) fn ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = m.to_vec();
    trim(&mut r0);
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

/// Monic polynomials of exact degree `d`, in canonical order: the index runs
/// over the lower coefficients read as a base-`p` number with `c_0` least
/// significant.
pub(crate) fn monic_of_degree(d: usize, p: u64) -> impl Iterator<Item = Vec<u64>> {
    let count = (p as u128).checked_pow(d as u32).expect("degree too large");
    (0..count).map(move |mut idx| {
        let mut v = vec![0u64; d + 1];
        for c in v.iter_mut().take(d) {
            *c = (idx % p as u128) as u64;
            idx /= p as u128;
        }
        v[d] = 1;
        v
    })
}

/// Irreducibility by exhaustive search for monic divisors of degree at most
/// `deg f / 2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.len() < 2 {
        return false;
    }
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        if monic_of_degree(d, p).any(|g| rem(&f, &g, p).is_empty()) {
            return false;
        }
    }
    true
}

/// The least irreducible monic polynomial of degree `n` over GF(p) in the
/// canonical order of [`monic_of_degree`].
pub fn least_irreducible(p: u64, n: usize) -> Vec<u64> {
    assert!(n >= 1);
    monic_of_degree(n, p)
        .find(|f| is_irreducible(f, p))
        .expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_p() {
        assert_eq!(inv_mod(2, 5), Some(3));
        assert_eq!(inv_mod(0, 5), None);
        assert_eq!(inv_mod(4, 8), None);
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(is_irreducible(&[1, 2, 0, 1], 3)); // x^3 - x + 1
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over GF(2): no roots, still reducible
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn least_irreducibles() {
        assert_eq!(least_irreducible(2, 2), vec![1, 1, 1]);
        assert_eq!(least_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(least_irreducible(3, 3), vec![1, 2, 0, 1]);
        assert_eq!(least_irreducible(3, 2), vec![1, 0, 1]);
    }

    #[test]
    fn ext_gcd_inverts() {
        let f = [1, 1, 0, 1];
        for a in [[1u64, 0, 0], [0, 1, 0], [1, 1, 1], [0, 1, 1]] {
            let (g, s) = ext_gcd(&a, &f, 2);
            assert_eq!(g, vec![1]);
            assert_eq!(rem(&mul(&a, &s, 2), &f, 2), vec![1]);
        }
    }
}
