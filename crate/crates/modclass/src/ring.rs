//! Finite associative unital rings as exact Cayley tables.
//!
//! Elements are indices 0..n-1 with 0 the additive zero. Every constructor
//! runs the full axiom validation; there is no unchecked path. Element order
//! is canonical per variant (integers ascending, field elements by polynomial
//! coordinates, matrices by row-major coordinate tuples), so tables are
//! reproducible bit for bit.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::gf::{build_gf, prime_power};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum RingSpec {
    Zmod {
        n: usize,
    },
    Gf {
        q: usize,
    },
    /// F_q[x]/(f) for a monic f given by its coefficient list (low degree
    /// first, entries are F_q element indices, last entry 1).
    PolyQuotient {
        q: usize,
        f: Vec<usize>,
    },
    /// Upper-triangular 2x2 matrices over F_q.
    Ut2 {
        q: usize,
    },
    /// Matrices (f1, f2; 0, k) with f1, f2 in F_{q^d} and k in F_q.
    Ut2Rel {
        q: usize,
        d: usize,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    Tables {
        add: Vec<Vec<u32>>,
        mul: Vec<Vec<u32>>,
        one: u32,
    },
}

pub struct FiniteRing {
    pub size: usize,
    pub add: Vec<u32>,
    pub mul: Vec<u32>,
    pub one: u32,
    pub characteristic: u64,
    pub spec: RingSpec,
    neg: Vec<u32>,
    opposite: OnceLock<Arc<FiniteRing>>,
    pub(crate) regular_cache: OnceLock<Arc<crate::module::FiniteModule>>,
    pub(crate) radical_cache: OnceLock<Vec<u32>>,
    pub(crate) cogenerator_cache: OnceLock<Arc<crate::module::FiniteModule>>,
    add_gens: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteRing")
            .field("size", &self.size)
            .field("spec", &self.spec)
            .finish()
    }
}

impl FiniteRing {
    #[inline]
    pub fn a(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.size + y as usize]
    }

    #[inline]
    pub fn m(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.size + y as usize]
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.size;
        (0..n).all(|i| (i..n).all(|j| self.mul[i * n + j] == self.mul[j * n + i]))
    }

    /// Additive order of an element.
    pub fn add_order(&self, x: u32) -> u64 {
        let mut k = 1u64;
        let mut acc = x;
        while acc != 0 {
            acc = self.a(acc, x);
            k += 1;
        }
        k
    }

    /// A small additive generating set, greedy by decreasing order.
    pub fn additive_generators(&self) -> &[u32] {
        self.add_gens.get_or_init(|| {
            additive_generators_of(self.size, |x, y| self.a(x, y))
        })
    }

    /// The opposite ring: same addition, multiplication reversed.
    pub fn opposite(self: &Arc<Self>) -> Arc<FiniteRing> {
        self.opposite
            .get_or_init(|| {
                let n = self.size;
                let mut mul = vec![0u32; n * n];
                for i in 0..n {
                    for j in 0..n {
                        mul[i * n + j] = self.mul[j * n + i];
                    }
                }
                let op = Arc::new(FiniteRing {
                    size: n,
                    add: self.add.clone(),
                    mul,
                    one: self.one,
                    characteristic: self.characteristic,
                    spec: self.spec.clone(),
                    neg: self.neg.clone(),
                    opposite: OnceLock::new(),
                    regular_cache: OnceLock::new(),
                    radical_cache: OnceLock::new(),
                    cogenerator_cache: OnceLock::new(),
                    add_gens: OnceLock::new(),
                });
                // The opposite of the opposite is this ring, table for table.
                let _ = op.opposite.set(self.clone());
                op
            })
            .clone()
    }

    /// Structural equality of the underlying tables.
    pub fn same_tables(&self, other: &FiniteRing) -> bool {
        self.size == other.size
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }

    /// All units of the ring.
    pub fn units(&self) -> Vec<u32> {
        let n = self.size as u32;
        (0..n)
            .filter(|&u| {
                (0..n).any(|v| self.m(u, v) == self.one && self.m(v, u) == self.one)
            })
            .collect()
    }

    /// All idempotents e with e*e = e.
    pub fn idempotents(&self) -> Vec<u32> {
        (0..self.size as u32).filter(|&e| self.m(e, e) == e).collect()
    }

    /// The Jacobson radical as a sorted element list:
    /// r is in J iff 1 - r*s is a unit for every s (finiteness makes
    /// one-sided inverses two-sided).
    pub fn jacobson_radical(&self) -> &[u32] {
        self.radical_cache.get_or_init(|| {
            let n = self.size as u32;
            let mut is_unit = vec![false; self.size];
            for u in self.units() {
                is_unit[u as usize] = true;
            }
            (0..n)
                .filter(|&r| {
                    (0..n).all(|s| is_unit[self.a(self.one, self.neg(self.m(r, s))) as usize])
                })
                .collect()
        })
    }
}

/// Greedy additive generating set of a finite abelian group given by a table,
/// scanning elements by decreasing additive order.
pub(crate) fn additive_generators_of(size: usize, add: impl Fn(u32, u32) -> u32) -> Vec<u32> {
    if size == 1 {
        return vec![];
    }
    let order = |x: u32| {
        let mut k = 1u64;
        let mut acc = x;
        while acc != 0 {
            acc = add(acc, x);
            k += 1;
        }
        k
    };
    let mut by_order: Vec<(u64, u32)> = (0..size as u32).map(|x| (order(x), x)).collect();
    by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut span = vec![false; size];
    span[0] = true;
    let mut span_list = vec![0u32];
    let mut gens = Vec::new();
    for &(_, x) in &by_order {
        if span[x as usize] {
            continue;
        }
        gens.push(x);
        // Extend span by the cyclic group of x: add all multiples to all
        // current members.
        let mut mult = x;
        let mut new_elems = Vec::new();
        while mult != 0 {
            for &s in &span_list {
                let e = add(s, mult);
                if !span[e as usize] {
                    span[e as usize] = true;
                    new_elems.push(e);
                }
            }
            mult = add(mult, x);
        }
        span_list.extend(new_elems);
        if span_list.len() == size {
            break;
        }
    }
    gens
}

/// Exhaustively validate the ring axioms on raw tables.
fn validate_ring(size: usize, add: &[u32], mul: &[u32], one: u32) -> Result<()> {
    let n = size;
    let idx = |i: u32, j: u32| i as usize * n + j as usize;
    for i in 0..n as u32 {
        if add[idx(0, i)] != i || add[idx(i, 0)] != i {
            return Err(Error::AxiomViolation {
                law: "additive identity",
                a: i as usize,
                b: 0,
                c: 0,
            });
        }
        if mul[idx(one, i)] != i || mul[idx(i, one)] != i {
            return Err(Error::AxiomViolation {
                law: "multiplicative unit",
                a: i as usize,
                b: one as usize,
                c: 0,
            });
        }
        if !(0..n as u32).any(|j| add[idx(i, j)] == 0) {
            return Err(Error::AxiomViolation {
                law: "additive inverse",
                a: i as usize,
                b: 0,
                c: 0,
            });
        }
    }
    for i in 0..n as u32 {
        for j in 0..n as u32 {
            if add[idx(i, j)] != add[idx(j, i)] {
                return Err(Error::AxiomViolation {
                    law: "additive commutativity",
                    a: i as usize,
                    b: j as usize,
                    c: 0,
                });
            }
        }
    }
    // The n^3 laws, parallelized over the first index.
    let bad = (0..n as u32).into_par_iter().find_map_any(|i| {
        for j in 0..n as u32 {
            for k in 0..n as u32 {
                if add[idx(add[idx(i, j)], k)] != add[idx(i, add[idx(j, k)])] {
                    return Some(Error::AxiomViolation {
                        law: "additive associativity",
                        a: i as usize,
                        b: j as usize,
                        c: k as usize,
                    });
                }
                if mul[idx(mul[idx(i, j)], k)] != mul[idx(i, mul[idx(j, k)])] {
                    return Some(Error::AxiomViolation {
                        law: "multiplicative associativity",
                        a: i as usize,
                        b: j as usize,
                        c: k as usize,
                    });
                }
                if mul[idx(i, add[idx(j, k)])] != add[idx(mul[idx(i, j)], mul[idx(i, k)])] {
                    return Some(Error::AxiomViolation {
                        law: "left distributivity",
                        a: i as usize,
                        b: j as usize,
                        c: k as usize,
                    });
                }
                if mul[idx(add[idx(i, j)], k)] != add[idx(mul[idx(i, k)], mul[idx(j, k)])] {
                    return Some(Error::AxiomViolation {
                        law: "right distributivity",
                        a: i as usize,
                        b: j as usize,
                        c: k as usize,
                    });
                }
            }
        }
        None
    });
    match bad {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn assemble(size: usize, add: Vec<u32>, mul: Vec<u32>, one: u32, spec: RingSpec) -> Result<Arc<FiniteRing>> {
    validate_ring(size, &add, &mul, one)?;
    let mut neg = vec![0u32; size];
    for i in 0..size as u32 {
        neg[i as usize] = (0..size as u32)
            .find(|&j| add[i as usize * size + j as usize] == 0)
            .unwrap();
    }
    // characteristic = additive order of 1
    let mut characteristic = 1u64;
    let mut acc = one;
    while acc != 0 {
        acc = add[acc as usize * size + one as usize];
        characteristic += 1;
    }
    if size == 1 {
        characteristic = 1;
    }
    Ok(Arc::new(FiniteRing {
        size,
        add,
        mul,
        one,
        characteristic,
        spec,
        neg,
        opposite: OnceLock::new(),
        regular_cache: OnceLock::new(),
        radical_cache: OnceLock::new(),
        cogenerator_cache: OnceLock::new(),
        add_gens: OnceLock::new(),
    }))
}

/// Build and validate a finite ring from its spec.
pub fn build_ring(spec: &RingSpec, caps: &Caps) -> Result<Arc<FiniteRing>> {
    let check_cap = |n: usize| {
        if n > caps.max_ring_size {
            Err(Error::SizeLimit {
                requested: n,
                cap: caps.max_ring_size,
            })
        } else {
            Ok(())
        }
    };
    match spec {
        RingSpec::Zmod { n } => {
            let n = *n;
            if n < 1 {
                return Err(Error::InvalidSpec("zmod requires n >= 1".into()));
            }
            check_cap(n)?;
            let mut add = vec![0u32; n * n];
            let mut mul = vec![0u32; n * n];
            for i in 0..n {
                for j in 0..n {
                    add[i * n + j] = ((i + j) % n) as u32;
                    mul[i * n + j] = (i * j % n) as u32;
                }
            }
            let one = if n == 1 { 0 } else { 1 };
            assemble(n, add, mul, one, spec.clone())
        }
        RingSpec::Gf { q } => {
            check_cap(*q)?;
            let f = build_gf(*q)?;
            assemble(*q, f.add, f.mul, 1, spec.clone())
        }
        RingSpec::PolyQuotient { q, f } => {
            let field = build_gf(*q)?;
            if f.len() < 2 {
                return Err(Error::InvalidSpec("poly_quotient needs degree >= 1".into()));
            }
            if *f.last().unwrap() != 1 {
                return Err(Error::InvalidSpec("poly_quotient f must be monic".into()));
            }
            if f.iter().any(|&c| c >= *q) {
                return Err(Error::InvalidSpec(
                    "poly_quotient coefficients must be F_q element indices".into(),
                ));
            }
            let deg = f.len() - 1;
            let size = q.checked_pow(deg as u32).ok_or_else(|| Error::SizeLimit {
                requested: usize::MAX,
                cap: caps.max_ring_size,
            })?;
            check_cap(size)?;
            let q = *q;
            let fa = |x: usize, y: usize| field.add[x * q + y] as usize;
            let fm = |x: usize, y: usize| field.mul[x * q + y] as usize;
            let to_poly = |mut i: usize| {
                let mut c = vec![0usize; deg];
                for ck in c.iter_mut() {
                    *ck = i % q;
                    i /= q;
                }
                c
            };
            let to_idx = |c: &[usize]| c.iter().rev().fold(0usize, |acc, &x| acc * q + x);
            let fneg = |x: usize| (0..q).find(|&y| fa(x, y) == 0).unwrap();
            let mut add = vec![0u32; size * size];
            let mut mul = vec![0u32; size * size];
            let polys: Vec<Vec<usize>> = (0..size).map(to_poly).collect();
            for a in 0..size {
                for b in 0..size {
                    let s: Vec<usize> = polys[a]
                        .iter()
                        .zip(&polys[b])
                        .map(|(&x, &y)| fa(x, y))
                        .collect();
                    add[a * size + b] = to_idx(&s) as u32;
                    // polynomial product reduced by monic f
                    let mut prod = vec![0usize; 2 * deg];
                    for (i, &ai) in polys[a].iter().enumerate() {
                        if ai == 0 {
                            continue;
                        }
                        for (j, &bj) in polys[b].iter().enumerate() {
                            prod[i + j] = fa(prod[i + j], fm(ai, bj));
                        }
                    }
                    for k in (deg..2 * deg).rev() {
                        let c = prod[k];
                        if c == 0 {
                            continue;
                        }
                        prod[k] = 0;
                        for i in 0..deg {
                            prod[k - deg + i] = fa(prod[k - deg + i], fneg(fm(f[i], c)));
                        }
                    }
                    prod.truncate(deg);
                    mul[a * size + b] = to_idx(&prod) as u32;
                }
            }
            assemble(size, add, mul, 1, spec.clone())
        }
        RingSpec::Ut2 { q } => build_ut2_rel(*q, 1, spec.clone(), caps),
        RingSpec::Ut2Rel { q, d } => {
            if *d < 1 {
                return Err(Error::InvalidSpec("ut2_rel requires d >= 1".into()));
            }
            build_ut2_rel(*q, *d, spec.clone(), caps)
        }
        RingSpec::Product { factors } => {
            if factors.is_empty() {
                return Err(Error::InvalidSpec("product needs at least one factor".into()));
            }
            let rings: Vec<Arc<FiniteRing>> = factors
                .iter()
                .map(|s| build_ring(s, caps))
                .collect::<Result<_>>()?;
            let size: usize = rings.iter().map(|r| r.size).product();
            check_cap(size)?;
            // index = mixed radix, first factor most significant
            let decode = |mut i: usize| {
                let mut coords = vec![0usize; rings.len()];
                for k in (0..rings.len()).rev() {
                    coords[k] = i % rings[k].size;
                    i /= rings[k].size;
                }
                coords
            };
            let encode = |coords: &[usize]| {
                coords
                    .iter()
                    .zip(rings.iter())
                    .fold(0usize, |acc, (&c, r)| acc * r.size + c)
            };
            let mut add = vec![0u32; size * size];
            let mut mul = vec![0u32; size * size];
            for a in 0..size {
                let ca = decode(a);
                for b in 0..size {
                    let cb = decode(b);
                    let s: Vec<usize> = ca
                        .iter()
                        .zip(&cb)
                        .zip(rings.iter())
                        .map(|((&x, &y), r)| r.a(x as u32, y as u32) as usize)
                        .collect();
                    let p: Vec<usize> = ca
                        .iter()
                        .zip(&cb)
                        .zip(rings.iter())
                        .map(|((&x, &y), r)| r.m(x as u32, y as u32) as usize)
                        .collect();
                    add[a * size + b] = encode(&s) as u32;
                    mul[a * size + b] = encode(&p) as u32;
                }
            }
            let one = encode(&rings.iter().map(|r| r.one as usize).collect::<Vec<_>>());
            assemble(size, add, mul, one as u32, spec.clone())
        }
        RingSpec::Tables { add, mul, one } => {
            let n = add.len();
            check_cap(n)?;
            if n == 0 || mul.len() != n || add.iter().any(|r| r.len() != n) || mul.iter().any(|r| r.len() != n)
            {
                return Err(Error::InvalidSpec("tables must be square of equal size".into()));
            }
            if *one as usize >= n {
                return Err(Error::InvalidSpec("one index out of range".into()));
            }
            let flat = |t: &[Vec<u32>]| -> Result<Vec<u32>> {
                let mut out = Vec::with_capacity(n * n);
                for row in t {
                    for &v in row {
                        if v as usize >= n {
                            return Err(Error::InvalidSpec("table entry out of range".into()));
                        }
                        out.push(v);
                    }
                }
                Ok(out)
            };
            assemble(n, flat(add)?, flat(mul)?, *one, spec.clone())
        }
    }
}

/// UT2(F_{q^d}, F_q): matrices (f1, f2; 0, k), elements ordered
/// lexicographically by (f1, f2, k). d = 1 gives UT2(F_q).
fn build_ut2_rel(q: usize, d: usize, spec: RingSpec, caps: &Caps) -> Result<Arc<FiniteRing>> {
    let (_p, _e) = prime_power(q)?;
    let fq_size = q
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidSpec("q^d overflows".into()))?;
    let field = build_gf(fq_size)?;
    let nf = field.q;
    let fa = |x: usize, y: usize| field.add[x * nf + y] as usize;
    let fm = |x: usize, y: usize| field.mul[x * nf + y] as usize;
    // K = fixed field of the q-power Frobenius: {x : x^q = x}.
    let pow_q = |x: usize| {
        let mut acc = 1usize;
        let mut base = x;
        let mut k = q;
        while k > 0 {
            if k & 1 == 1 {
                acc = fm(acc, base);
            }
            base = fm(base, base);
            k >>= 1;
        }
        acc
    };
    let k_elems: Vec<usize> = (0..nf).filter(|&x| pow_q(x) == x).collect();
    if k_elems.len() != q {
        return Err(Error::InvalidSpec(format!(
            "subfield of size {q} not found in F_{fq_size}"
        )));
    }
    let k_pos: std::collections::HashMap<usize, usize> =
        k_elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let size = nf * nf * q;
    if size > caps.max_ring_size {
        return Err(Error::SizeLimit {
            requested: size,
            cap: caps.max_ring_size,
        });
    }
    let decode = |i: usize| {
        let k = i % q;
        let f2 = (i / q) % nf;
        let f1 = i / (q * nf);
        (f1, f2, k_elems[k])
    };
    let encode = |f1: usize, f2: usize, k: usize| (f1 * nf + f2) * q + k_pos[&k];
    let mut add = vec![0u32; size * size];
    let mut mul = vec![0u32; size * size];
    for a in 0..size {
        let (a1, a2, ak) = decode(a);
        for b in 0..size {
            let (b1, b2, bk) = decode(b);
            add[a * size + b] = encode(fa(a1, b1), fa(a2, b2), fa(ak, bk)) as u32;
            // (a1, a2; 0, ak) * (b1, b2; 0, bk) = (a1 b1, a1 b2 + a2 bk; 0, ak bk)
            mul[a * size + b] =
                encode(fm(a1, b1), fa(fm(a1, b2), fm(a2, bk)), fm(ak, bk)) as u32;
        }
    }
    let one = encode(1, 0, 1) as u32;
    assemble(size, add, mul, one, spec)
}
