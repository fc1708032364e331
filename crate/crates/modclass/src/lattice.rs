//! The full submodule lattice of a finite module, as bitsets.
//!
//! Computed by closing the set of cyclic submodules under pairwise join.
//! The join of two submodules is their elementwise sum (already a
//! submodule, no extra closure needed). Lattices larger than the cap abort
//! with an error, and the failure is cached.

use std::collections::HashSet;
use std::sync::Arc;

use crate::bits::Bits;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::module::FiniteModule;

/// Elementwise sum of two submodules (their join).
pub fn join(m: &FiniteModule, a: &Bits, b: &Bits) -> Bits {
    if a.is_subset_of(b) {
        return b.clone();
    }
    if b.is_subset_of(a) {
        return a.clone();
    }
    let mut out = Bits::new(m.size);
    let bv = b.to_vec();
    for x in a.iter() {
        for &y in &bv {
            out.set(m.a(x as u32, y) as usize);
        }
    }
    out
}

/// All submodules of M (including 0 and M), sorted by size then content.
pub fn all_submodules(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Arc<Vec<Bits>>> {
    let cached = m.lattice_cache.get_or_init(|| {
        compute_all_submodules(m, caps).ok().map(Arc::new)
    });
    match cached {
        Some(v) => Ok(v.clone()),
        None => Err(Error::LatticeTooLarge {
            cap: caps.max_lattice,
        }),
    }
}

fn compute_all_submodules(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Vec<Bits>> {
    let mut cyclics: Vec<Bits> = Vec::new();
    let mut seen_cyc: HashSet<Bits> = HashSet::new();
    for x in 0..m.size {
        let c = m.cyclic(x as u32).clone();
        if seen_cyc.insert(c.clone()) {
            cyclics.push(c);
        }
    }
    let mut all: HashSet<Bits> = HashSet::new();
    let zero = Bits::singleton(m.size, 0);
    all.insert(zero.clone());
    let mut frontier: Vec<Bits> = vec![zero];
    while let Some(u) = frontier.pop() {
        for c in &cyclics {
            if c.is_subset_of(&u) {
                continue;
            }
            let j = join(m, &u, c);
            if all.insert(j.clone()) {
                if all.len() > caps.max_lattice {
                    return Err(Error::LatticeTooLarge {
                        cap: caps.max_lattice,
                    });
                }
                frontier.push(j);
            }
        }
    }
    let mut out: Vec<Bits> = all.into_iter().collect();
    out.sort_by_key(|b| (b.count(), b.to_vec()));
    Ok(out)
}

/// Minimal (simple) submodules, computable without the full lattice:
/// they are exactly the nonzero cyclics with no smaller nonzero cyclic
/// inside.
pub fn minimal_submodules(m: &Arc<FiniteModule>) -> Vec<Bits> {
    let mut candidates: Vec<Bits> = Vec::new();
    let mut seen: HashSet<Bits> = HashSet::new();
    for x in 1..m.size {
        let c = m.cyclic(x as u32);
        if c.count() > 1 && seen.insert(c.clone()) {
            candidates.push(c.clone());
        }
    }
    candidates
        .iter()
        .filter(|c| {
            c.iter()
                .filter(|&y| y != 0)
                .all(|y| m.cyclic(y as u32).count() == c.count())
        })
        .cloned()
        .collect()
}

/// Maximal proper submodules. They all contain rad(M), so they are pulled
/// back from the maximal submodules of the semisimple quotient M/rad(M),
/// which are kernels of nonzero maps onto simple modules — here found as
/// the maximal elements of the quotient's lattice pulled back, with a
/// direct fallback: a proper submodule is maximal iff joining any outside
/// cyclic gives M.
pub fn maximal_submodules(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Vec<Bits>> {
    let rad = m.radical_bits().clone();
    let q = m.quotient(&rad);
    // maximal submodules of the semisimple quotient
    let qmax = maximal_of_semisimple(&q.module, caps)?;
    // pull back
    Ok(qmax
        .into_iter()
        .map(|qb| {
            let mut b = Bits::new(m.size);
            for x in 0..m.size {
                if qb.get(q.proj[x] as usize) {
                    b.set(x);
                }
            }
            b
        })
        .collect())
}

/// Maximal submodules of a semisimple module: complements of minimal ones.
/// For each minimal submodule class we need every maximal; we use the
/// lattice when it fits and otherwise the characterization "N maximal iff
/// N proper and N + xR = M for every x outside N" on candidates built as
/// joins of all-but-one minimal submodules (which can miss diagonally
/// embedded maximals), so the lattice is required here; semisimple modules
/// with oversized lattices are reported as errors.
fn maximal_of_semisimple(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Vec<Bits>> {
    if m.size == 1 {
        return Ok(vec![]);
    }
    let lat = all_submodules(m, caps)?;
    Ok(lat
        .iter()
        .filter(|b| {
            b.count() < m.size
                && (0..m.size as u32).all(|x| {
                    b.get(x as usize) || join(m, b, m.cyclic(x)).count() == m.size
                })
        })
        .cloned()
        .collect())
}

/// Find a direct-sum complement of `sub` inside M among lattice members:
/// N' with sub ∩ N' = 0 and |sub||N'| = |M| (sizes multiply exactly when
/// the intersection is trivial, so the join is then automatically M).
pub fn summand_complement(
    m: &Arc<FiniteModule>,
    sub: &Bits,
    lattice: &[Bits],
) -> Option<Bits> {
    let need = m.size / sub.count();
    if need * sub.count() != m.size {
        return None;
    }
    lattice
        .iter()
        .find(|b| b.count() == need && b.intersects_only_zero(sub))
        .cloned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{direct_sum, regular_module};
    use crate::ring::{build_ring, RingSpec};

    fn caps() -> Caps {
        Caps::default()
    }

    /// Oracle: every subset of a small module that is a submodule.
    fn brute_submodules(m: &Arc<FiniteModule>) -> Vec<Bits> {
        let n = m.size;
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let mut b = Bits::new(n);
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    b.set(i);
                }
            }
            if m.is_submodule(&b) {
                out.push(b);
            }
        }
        out.sort_by_key(|b| (b.count(), b.to_vec()));
        out
    }

    #[test]
    fn lattice_matches_brute_force() {
        for spec in [
            RingSpec::Zmod { n: 8 },
            RingSpec::Zmod { n: 12 },
            RingSpec::Ut2 { q: 2 },
        ] {
            let r = build_ring(&spec, &caps()).unwrap();
            let m = regular_module(&r);
            let lat = all_submodules(&m, &caps()).unwrap();
            let brute = brute_submodules(&m);
            assert_eq!(lat.as_ref(), &brute, "{spec:?}");
        }
    }

    #[test]
    fn z8_chain_lattice() {
        let r = build_ring(&RingSpec::Zmod { n: 8 }, &caps()).unwrap();
        let m = regular_module(&r);
        let lat = all_submodules(&m, &caps()).unwrap();
        assert_eq!(lat.len(), 4); // 0 < 4R < 2R < R
    }

    #[test]
    fn minimal_and_maximal() {
        let r = build_ring(&RingSpec::Zmod { n: 12 }, &caps()).unwrap();
        let m = regular_module(&r);
        let mins = minimal_submodules(&m);
        // Z/12: minimal submodules 6Z/12 (size 2) and 4Z/12 (size 3)
        assert_eq!(mins.len(), 2);
        let maxs = maximal_submodules(&m, &caps()).unwrap();
        // maximal: 2Z/12 (size 6) and 3Z/12 (size 4)
        assert_eq!(maxs.len(), 2);
        let lat = all_submodules(&m, &caps()).unwrap();
        // brute-force check of maximality against the lattice
        for mx in &maxs {
            assert!(lat.iter().all(|b| {
                !(mx.is_subset_of(b) && b.count() > mx.count() && b.count() < m.size)
            }));
        }
    }

    #[test]
    fn diagonal_maximal_found() {
        // M = S + S for simple S: maximal submodules include the diagonal
        let r = build_ring(&RingSpec::Zmod { n: 2 }, &caps()).unwrap();
        let s = regular_module(&r);
        let m = direct_sum(&[s.clone(), s.clone()]).unwrap().module;
        let maxs = maximal_submodules(&m, &caps()).unwrap();
        assert_eq!(maxs.len(), 3, "three lines in F_2^2");
    }

    #[test]
    fn complements() {
        let r = build_ring(&RingSpec::Zmod { n: 6 }, &caps()).unwrap();
        let m = regular_module(&r);
        let lat = all_submodules(&m, &caps()).unwrap();
        let two = m.generated_submodule(&[2]); // {0,2,4}, size 3
        let c = summand_complement(&m, &two, &lat).unwrap();
        assert_eq!(c.count(), 2);
        // Z/4: soc has no complement
        let r4 = build_ring(&RingSpec::Zmod { n: 4 }, &caps()).unwrap();
        let m4 = regular_module(&r4);
        let lat4 = all_submodules(&m4, &caps()).unwrap();
        let soc = m4.socle_bits().clone();
        assert!(summand_complement(&m4, &soc, &lat4).is_none());
    }
}
