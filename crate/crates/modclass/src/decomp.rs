//! Direct-sum decompositions into indecomposables (Krull-Schmidt).
//!
//! Splits are found inside the submodule lattice of the original module: a
//! summand pair for a part P is two nonzero submodules A, B <= P with
//! A ∩ B = 0 and |A| |B| = |P| (sizes multiply exactly iff the sum is
//! direct, and then A + B = P by counting). Parts are refined until no
//! split exists. Idempotent witnesses (the projections onto each part) are
//! produced from the final decomposition and validated as endomorphisms.

use std::sync::Arc;

use crate::bits::Bits;
use crate::config::Caps;
use crate::error::{Error, Result};
use crate::hom::find_isomorphism;
use crate::lattice::all_submodules;
use crate::module::{FiniteModule, ModuleHom};

pub struct Decomposition {
    pub module: Arc<FiniteModule>,
    /// indecomposable summands as bitsets in the original module
    pub parts_bits: Vec<Bits>,
    /// the summands as standalone modules
    pub parts: Vec<Arc<FiniteModule>>,
    /// embedding of part i: element index in parts[i] -> element of module
    pub part_elems: Vec<Vec<u32>>,
    /// coords[x][i] = the parts[i]-index of the i-th component of x
    pub coords: Vec<Vec<u32>>,
}

impl Decomposition {
    /// Projection of the whole module onto part i (an idempotent
    /// endomorphism of the module, validated).
    pub fn idempotent(&self, i: usize) -> Result<ModuleHom> {
        let map: Vec<u32> = (0..self.module.size)
            .map(|x| self.part_elems[i][self.coords[x][i] as usize])
            .collect();
        let e = ModuleHom::new(self.module.clone(), self.module.clone(), map)?;
        for x in 0..self.module.size as u32 {
            if e.apply(e.apply(x)) != e.apply(x) {
                return Err(Error::PreconditionViolated(
                    "projection is not idempotent".into(),
                ));
            }
        }
        Ok(e)
    }

    /// Projection onto part i as a hom module -> parts[i].
    pub fn projection_hom(&self, i: usize) -> Result<ModuleHom> {
        let map: Vec<u32> = (0..self.module.size).map(|x| self.coords[x][i]).collect();
        ModuleHom::new(self.module.clone(), self.parts[i].clone(), map)
    }

    /// Inclusion of part i into the module.
    pub fn inclusion_hom(&self, i: usize) -> Result<ModuleHom> {
        ModuleHom::new(
            self.parts[i].clone(),
            self.module.clone(),
            self.part_elems[i].clone(),
        )
    }
}

/// Find a direct split of the submodule `p` of `m` among lattice members,
/// scanning in the given order.
fn split_once(lattice: &[Bits], p: &Bits, reverse: bool) -> Option<(Bits, Bits)> {
    let psize = p.count();
    let candidates: Vec<&Bits> = lattice
        .iter()
        .filter(|b| b.count() > 1 && b.count() < psize && b.is_subset_of(p))
        .collect();
    let order: Vec<&Bits> = if reverse {
        candidates.iter().rev().cloned().collect()
    } else {
        candidates
    };
    for a in &order {
        let need = psize / a.count();
        if need * a.count() != psize {
            continue;
        }
        for b in &order {
            if b.count() == need && b.intersects_only_zero(a) {
                return Some(((*a).clone(), (*b).clone()));
            }
        }
    }
    None
}

fn decompose_in_order(
    m: &Arc<FiniteModule>,
    caps: &Caps,
    reverse: bool,
) -> Result<Arc<Decomposition>> {
    if m.size == 1 {
        return Ok(Arc::new(Decomposition {
            module: m.clone(),
            parts_bits: vec![],
            parts: vec![],
            part_elems: vec![],
            coords: vec![vec![]; 1],
        }));
    }
    let lattice = all_submodules(m, caps)?;
    let mut full = Bits::new(m.size);
    for x in 0..m.size {
        full.set(x);
    }
    let mut parts_bits: Vec<Bits> = vec![full];
    loop {
        let mut changed = false;
        let mut next: Vec<Bits> = Vec::new();
        for p in parts_bits {
            if let Some((a, b)) = split_once(&lattice, &p, reverse) {
                next.push(a);
                next.push(b);
                changed = true;
            } else {
                next.push(p);
            }
        }
        parts_bits = next;
        if !changed {
            break;
        }
    }
    parts_bits.sort_by_key(|b| (b.count(), b.to_vec()));
    // verify the internal direct sum: every element decomposes uniquely
    let part_elems: Vec<Vec<u32>> = parts_bits.iter().map(|b| b.to_vec()).collect();
    let total: usize = part_elems.iter().map(|e| e.len()).product();
    if total != m.size {
        return Err(Error::PreconditionViolated(
            "decomposition sizes do not multiply to the module size".into(),
        ));
    }
    let k = parts_bits.len();
    let mut coords: Vec<Vec<u32>> = vec![vec![]; m.size];
    let mut counter = vec![0usize; k];
    loop {
        let mut x = 0u32;
        for (i, &c) in counter.iter().enumerate() {
            x = m.a(x, part_elems[i][c]);
        }
        if !coords[x as usize].is_empty() {
            return Err(Error::PreconditionViolated(
                "summand sum is not direct".into(),
            ));
        }
        coords[x as usize] = counter.iter().map(|&c| c as u32).collect();
        // odometer
        let mut i = k;
        loop {
            if i == 0 {
                i = usize::MAX;
                break;
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < part_elems[i].len() {
                break;
            }
            counter[i] = 0;
        }
        if i == usize::MAX {
            break;
        }
    }
    if coords.iter().any(|c| c.is_empty() && k > 0) {
        return Err(Error::PreconditionViolated(
            "summands do not span the module".into(),
        ));
    }
    let parts: Vec<Arc<FiniteModule>> = parts_bits
        .iter()
        .map(|b| m.sub_as_module(b).module)
        .collect();
    Ok(Arc::new(Decomposition {
        module: m.clone(),
        parts_bits,
        parts,
        part_elems,
        coords,
    }))
}

/// Decompose into indecomposable summands (cached on the module).
pub fn decompose(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Arc<Decomposition>> {
    let cached = m
        .decomp_cache
        .get_or_init(|| decompose_in_order(m, caps, false).ok());
    match cached {
        Some(d) => Ok(d.clone()),
        None => Err(Error::LatticeTooLarge {
            cap: caps.max_lattice,
        }),
    }
}

/// Same algorithm with the lattice scanned in the opposite order; by
/// Krull-Schmidt the multiset of iso classes must agree with `decompose`.
pub fn decompose_reversed(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Arc<Decomposition>> {
    decompose_in_order(m, caps, true)
}

pub fn is_indecomposable(m: &Arc<FiniteModule>, caps: &Caps) -> Result<bool> {
    Ok(m.size > 1 && decompose(m, caps)?.parts.len() == 1)
}

/// Isomorphism test: fingerprint filter, then decompose both sides and
/// match indecomposable parts pairwise by hom search.
pub fn are_isomorphic(
    a: &Arc<FiniteModule>,
    b: &Arc<FiniteModule>,
    caps: &Caps,
) -> Result<bool> {
    if a.size != b.size {
        return Ok(false);
    }
    if a.size == 1 {
        return Ok(true);
    }
    if a.fingerprint() != b.fingerprint() {
        return Ok(false);
    }
    let da = decompose(a, caps)?;
    let db = decompose(b, caps)?;
    if da.parts.len() != db.parts.len() {
        return Ok(false);
    }
    let mut used = vec![false; db.parts.len()];
    for pa in &da.parts {
        let fpa = pa.fingerprint();
        let mut matched = false;
        for (j, pb) in db.parts.iter().enumerate() {
            if used[j] || pb.fingerprint() != fpa {
                continue;
            }
            if indecomposable_iso(pa, pb, caps)? {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Isomorphism between two indecomposables via hom enumeration.
fn indecomposable_iso(
    a: &Arc<FiniteModule>,
    b: &Arc<FiniteModule>,
    caps: &Caps,
) -> Result<bool> {
    Ok(find_isomorphism(a, b, caps)?.is_some())
}

/// Multiset of fingerprints of the indecomposable parts (a coarse
/// decomposition signature used by reports and corpus bookkeeping).
pub fn part_fingerprints(d: &Decomposition) -> Vec<crate::module::Fingerprint> {
    let mut v: Vec<_> = d.parts.iter().map(|p| p.fingerprint()).collect();
    v.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::module::{direct_sum, regular_module};
    use crate::ring::{build_ring, RingSpec};

    fn caps() -> Caps {
        Caps::default()
    }

    /// Oracle: M is indecomposable iff End(M) has no idempotent other than
    /// 0 and 1 (checked by enumerating End(M) for small modules).
    fn indecomposable_oracle(m: &Arc<FiniteModule>) -> bool {
        let homs = crate::hom::enumerate_homs(m, m, &caps()).unwrap();
        let nontrivial_idem = homs.iter().any(|h| {
            let idem = (0..m.size as u32).all(|x| h[h[x as usize] as usize] == h[x as usize]);
            let zero = h.iter().all(|&v| v == 0);
            let id = (0..m.size as u32).all(|x| h[x as usize] == x);
            idem && !zero && !id
        });
        m.size > 1 && !nontrivial_idem
    }

    #[test]
    fn z6_decomposes_z4_does_not() {
        let r6 = build_ring(&RingSpec::Zmod { n: 6 }, &caps()).unwrap();
        let m6 = regular_module(&r6);
        let d = decompose(&m6, &caps()).unwrap();
        assert_eq!(d.parts.len(), 2);
        let mut sizes: Vec<usize> = d.parts.iter().map(|p| p.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        assert!(!indecomposable_oracle(&m6));

        let r4 = build_ring(&RingSpec::Zmod { n: 4 }, &caps()).unwrap();
        let m4 = regular_module(&r4);
        assert!(is_indecomposable(&m4, &caps()).unwrap());
        assert!(indecomposable_oracle(&m4));
    }

    #[test]
    fn ut2_regular_splits_in_two() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &caps()).unwrap();
        let m = regular_module(&r);
        let d = decompose(&m, &caps()).unwrap();
        let mut sizes: Vec<usize> = d.parts.iter().map(|p| p.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4], "R = e11 R + e22 R with |e11 R| = 4");
        for p in &d.parts {
            assert!(is_indecomposable(p, &caps()).unwrap());
            assert!(indecomposable_oracle(p));
        }
    }

    #[test]
    fn idempotent_witnesses() {
        let r = build_ring(&RingSpec::Zmod { n: 6 }, &caps()).unwrap();
        let m = regular_module(&r);
        let d = decompose(&m, &caps()).unwrap();
        let e0 = d.idempotent(0).unwrap();
        let e1 = d.idempotent(1).unwrap();
        for x in 0..m.size as u32 {
            // e0 + e1 = id and e0 e1 = 0
            assert_eq!(m.a(e0.apply(x), e1.apply(x)), x);
            assert_eq!(e0.apply(e1.apply(x)), 0);
        }
    }

    #[test]
    fn krull_schmidt_stable_under_order() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &caps()).unwrap();
        let m = regular_module(&r);
        let s = direct_sum(&[m.clone(), m.clone()]).unwrap().module;
        let d1 = decompose(&s, &caps()).unwrap();
        let d2 = decompose_reversed(&s, &caps()).unwrap();
        assert_eq!(part_fingerprints(&d1), part_fingerprints(&d2));
        assert_eq!(d1.parts.len(), 4);
    }

    #[test]
    fn iso_detects_rearranged_sums() {
        let r = build_ring(&RingSpec::Zmod { n: 4 }, &caps()).unwrap();
        let m = regular_module(&r);
        let s = m.sub_as_module(&m.generated_submodule(&[2])).module;
        let a = direct_sum(&[m.clone(), s.clone()]).unwrap().module;
        let b = direct_sum(&[s.clone(), m.clone()]).unwrap().module;
        assert!(are_isomorphic(&a, &b, &caps()).unwrap());
        let c = direct_sum(&[s.clone(), s.clone(), s.clone()]).unwrap().module;
        assert!(!are_isomorphic(&a, &c, &caps()).unwrap());
    }
}
