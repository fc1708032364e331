//! Finite field tables F_q for prime powers q.
//!
//! Elements are indexed by their polynomial coordinates over F_p: the element
//! with coefficients (c_0, ..., c_{e-1}) gets index sum c_i * p^i, so 0 is the
//! zero element and 1 is the multiplicative unit. The reduction polynomial is
//! the lexicographically least monic irreducible of degree e, which makes the
//! tables reproducible.

use crate::error::{Error, Result};

pub struct Gf {
    pub p: u64,
    pub e: u32,
    pub q: usize,
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
}

/// Factor q as p^e with p prime, or fail.
pub fn prime_power(q: usize) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::InvalidSpec(format!("{q} is not a prime power")));
    }
    let mut p = 2usize;
    while p * p <= q {
        if q % p == 0 {
            let mut n = q;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if n != 1 {
                return Err(Error::InvalidSpec(format!("{q} is not a prime power")));
            }
            return Ok((p as u64, e));
        }
        p += 1;
    }
    Ok((q as u64, 1))
}

fn idx_to_poly(mut i: usize, p: u64, e: u32) -> Vec<u64> {
    let mut c = vec![0u64; e as usize];
    for ck in c.iter_mut() {
        *ck = (i % p as usize) as u64;
        i /= p as usize;
    }
    c
}

fn poly_to_idx(c: &[u64], p: u64) -> usize {
    let mut i = 0usize;
    for &ck in c.iter().rev() {
        i = i * p as usize + ck as usize;
    }
    i
}

/// Multiply two coefficient vectors and reduce by the monic polynomial `f`
/// (given by its non-leading coefficients, degree = f.len()).
fn poly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let e = f.len();
    let mut prod = vec![0u64; 2 * e];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // x^e = -f (on non-leading coefficients).
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &fi) in f.iter().enumerate() {
            let t = &mut prod[k - e + i];
            *t = (*t + c * (p - fi % p) % p) % p;
        }
    }
    prod.truncate(e);
    prod
}

/// Remainder of a modulo the monic polynomial b over F_p.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    debug_assert_eq!(b[db], 1);
    let mut r: Vec<u64> = a.to_vec();
    if r.len() <= db {
        return r;
    }
    for k in (db..r.len()).rev() {
        let c = r[k];
        if c != 0 {
            for i in 0..db {
                r[k - db + i] = (r[k - db + i] + (p - b[i] * c % p)) % p;
            }
            r[k] = 0;
        }
    }
    r.truncate(db.max(1));
    r
}

/// True iff the monic polynomial with non-leading coefficients `f` (degree e)
/// is irreducible over F_p, by trial division by all monic divisors of
/// degree up to e/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let e = f.len();
    let mut full = f.to_vec();
    full.push(1);
    for d in 1..=e / 2 {
        let count = (p as usize).pow(d as u32);
        for i in 0..count {
            let mut g = idx_to_poly(i, p, d as u32);
            g.push(1); // monic of degree d
            let r = poly_rem(&full, &g, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree e over F_p,
/// returned as its non-leading coefficients.
pub fn find_irreducible(p: u64, e: u32) -> Vec<u64> {
    let count = (p as usize).pow(e);
    for i in 0..count {
        let f = idx_to_poly(i, p, e);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible of degree {e} over F_{p} exists");
}

pub fn build_gf(q: usize) -> Result<Gf> {
    let (p, e) = prime_power(q)?;
    let f = if e == 1 { vec![] } else { find_irreducible(p, e) };
    let mut add = vec![0u32; q * q];
    let mut mul = vec![0u32; q * q];
    if e == 1 {
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as u32;
                mul[a * q + b] = (a * b % q) as u32;
            }
        }
    } else {
        let polys: Vec<Vec<u64>> = (0..q).map(|i| idx_to_poly(i, p, e)).collect();
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u64> = polys[a]
                    .iter()
                    .zip(&polys[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * q + b] = poly_to_idx(&s, p) as u32;
                let m = poly_mulmod(&polys[a], &polys[b], &f, p);
                mul[a * q + b] = poly_to_idx(&m, p) as u32;
            }
        }
    }
    Ok(Gf { p, e, q, add, mul })
}
