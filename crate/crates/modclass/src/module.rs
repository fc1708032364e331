//! Finite right modules over finite rings, as exact Cayley tables.
//!
//! A module of size n has elements 0..n-1 with 0 the zero element, an n x n
//! addition table, and an action table act(x, r) = x * r. Constructors from
//! raw tables run the complete axiom check; internally derived modules
//! (submodules, quotients, direct sums) run a structural check that is
//! complete given the validated parents.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::ring::{additive_generators_of, FiniteRing};

pub struct FiniteModule {
    pub ring: Arc<FiniteRing>,
    pub size: usize,
    pub add: Vec<u32>,
    /// act[x * ring.size + r] = x * r
    pub act: Vec<u32>,
    pub label: String,
    neg: Vec<u32>,
    ab: OnceLock<AbBasis>,
    cyclics: OnceLock<Vec<Bits>>,
    socle: OnceLock<Bits>,
    radical: OnceLock<Bits>,
    length: OnceLock<usize>,
    add_gens: OnceLock<Vec<u32>>,
    pub(crate) lattice_cache: OnceLock<Option<Arc<Vec<Bits>>>>,
    pub(crate) hull_cache: OnceLock<Arc<FiniteModule>>,
    pub(crate) decomp_cache: OnceLock<Option<Arc<crate::decomp::Decomposition>>>,
}

impl std::fmt::Debug for FiniteModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteModule")
            .field("size", &self.size)
            .field("label", &self.label)
            .finish()
    }
}

/// Decomposition of the additive group as a direct sum of cyclic groups,
/// with coordinate tables in both directions.
#[derive(Debug, Clone)]
pub struct AbBasis {
    /// basis elements h_j
    pub gens: Vec<u32>,
    /// order of h_j (each > 1), so the product of orders is the module size
    pub orders: Vec<u64>,
    /// exponent of the additive group (lcm of the orders, 1 for the zero module)
    pub exponent: u64,
    /// mixed-radix index (radix = orders, first gen most significant) -> element
    pub radix_to_elem: Vec<u32>,
    /// element -> mixed-radix index
    pub elem_to_radix: Vec<u32>,
}

impl AbBasis {
    pub fn coords(&self, x: u32) -> Vec<u64> {
        let mut i = self.elem_to_radix[x as usize] as u64;
        let mut c = vec![0u64; self.orders.len()];
        for j in (0..self.orders.len()).rev() {
            c[j] = i % self.orders[j];
            i /= self.orders[j];
        }
        c
    }

    pub fn elem_from_coords(&self, c: &[u64]) -> u32 {
        let mut i = 0u64;
        for (j, &o) in self.orders.iter().enumerate() {
            i = i * o + (c[j] % o);
        }
        self.radix_to_elem[i as usize]
    }
}

/// Cheap structural invariants; equality is necessary (not sufficient)
/// for isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fingerprint {
    pub size: usize,
    pub ab_invariants: Vec<u64>,
    pub socle_size: usize,
    pub radical_size: usize,
    pub length: usize,
}

impl FiniteModule {
    #[inline]
    pub fn a(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.size + y as usize]
    }

    #[inline]
    pub fn act(&self, x: u32, r: u32) -> u32 {
        self.act[x as usize * self.ring.size + r as usize]
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.a(x, self.neg(y))
    }

    pub fn is_zero_module(&self) -> bool {
        self.size == 1
    }

    pub fn elem_add_order(&self, x: u32) -> u64 {
        let mut k = 1u64;
        let mut acc = x;
        while acc != 0 {
            acc = self.a(acc, x);
            k += 1;
        }
        k
    }

    pub fn additive_generators(&self) -> &[u32] {
        self.add_gens
            .get_or_init(|| additive_generators_of(self.size, |x, y| self.a(x, y)))
    }

    /// Abelian group basis (computed once, validated by checking the
    /// coordinate map is a bijection).
    pub fn ab_basis(&self) -> &AbBasis {
        self.ab.get_or_init(|| compute_ab_basis(self))
    }

    /// Cyclic submodule x*R as a bitset (always contains 0 and is closed
    /// under addition because x*(r+s) = x*r + x*s).
    pub fn cyclic(&self, x: u32) -> &Bits {
        &self.cyclics()[x as usize]
    }

    pub fn cyclics(&self) -> &Vec<Bits> {
        self.cyclics.get_or_init(|| {
            (0..self.size as u32)
                .map(|x| {
                    let mut b = Bits::new(self.size);
                    for r in 0..self.ring.size as u32 {
                        b.set(self.act(x, r) as usize);
                    }
                    b
                })
                .collect()
        })
    }

    /// Smallest submodule containing the given elements.
    pub fn generated_submodule(&self, gens: &[u32]) -> Bits {
        let mut b = Bits::new(self.size);
        b.set(0);
        let mut list = vec![0u32];
        let mut frontier: Vec<u32> = Vec::new();
        for &g in gens {
            for x in self.cyclic(g).iter() {
                if !b.get(x) {
                    b.set(x);
                    list.push(x as u32);
                    frontier.push(x as u32);
                }
            }
        }
        // close under addition: new elements only need sums against the
        // current span (x*R is already inside because gR additivity covers
        // products of sums by distributivity once sums close)
        while let Some(x) = frontier.pop() {
            let mut new_elems = Vec::new();
            for &y in &list {
                let s = self.a(x, y);
                if !b.get(s as usize) {
                    b.set(s as usize);
                    new_elems.push(s);
                }
                // products of the new sums must also land inside
            }
            for &n in &new_elems {
                for r in 0..self.ring.size as u32 {
                    let p = self.act(n, r);
                    if !b.get(p as usize) {
                        b.set(p as usize);
                        frontier.push(p);
                        list.push(p);
                    }
                }
                list.push(n);
                frontier.push(n);
            }
        }
        b
    }

    /// Check that a bitset is a submodule: contains 0, closed under
    /// addition and action.
    pub fn is_submodule(&self, b: &Bits) -> bool {
        if !b.get(0) {
            return false;
        }
        let elems: Vec<u32> = b.to_vec();
        for &x in &elems {
            for &y in &elems {
                if !b.get(self.a(x, y) as usize) {
                    return false;
                }
            }
            for r in 0..self.ring.size as u32 {
                if !b.get(self.act(x, r) as usize) {
                    return false;
                }
            }
        }
        true
    }

    /// A submodule E is essential iff every nonzero cyclic meets it
    /// nontrivially.
    pub fn is_essential(&self, sub: &Bits) -> bool {
        (1..self.size).all(|x| self.cyclic(x as u32).meets_nontrivially(sub))
    }

    /// M is uniform iff it is nonzero and every two nonzero submodules
    /// intersect nontrivially; cyclics suffice.
    pub fn is_uniform(&self) -> bool {
        if self.size == 1 {
            return false;
        }
        let cy = self.cyclics();
        (1..self.size).all(|x| (x..self.size).all(|y| cy[x].meets_nontrivially(&cy[y])))
    }

    /// soc(M) = ann_M(J) for the Jacobson radical J of the ring.
    /// (Over a finite ring every module is artinian, so this is the sum of
    /// the simple submodules.)
    pub fn socle_bits(&self) -> &Bits {
        self.socle.get_or_init(|| {
            let j = self.ring.jacobson_radical();
            let mut b = Bits::new(self.size);
            for x in 0..self.size as u32 {
                if j.iter().all(|&r| self.act(x, r) == 0) {
                    b.set(x as usize);
                }
            }
            debug_assert!(self.is_submodule(&b));
            b
        })
    }

    /// rad(M) = M*J.
    pub fn radical_bits(&self) -> &Bits {
        self.radical.get_or_init(|| {
            let j = self.ring.jacobson_radical();
            let mut gens = Vec::new();
            for x in 0..self.size as u32 {
                for &r in j {
                    let p = self.act(x, r);
                    if p != 0 {
                        gens.push(p);
                    }
                }
            }
            gens.sort_unstable();
            gens.dedup();
            self.generated_submodule(&gens)
        })
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical_bits().count() == 1
    }

    pub fn is_simple(&self) -> bool {
        // exactly two submodules: cyclic from every nonzero element is everything
        self.size > 1 && (1..self.size).all(|x| self.cyclic(x as u32).count() == self.size)
    }

    /// Composition length, by repeatedly factoring out a minimal submodule
    /// (a nonzero cyclic of minimal size is minimal).
    pub fn composition_length(self: &Arc<Self>) -> usize {
        *self.length.get_or_init(|| {
            if self.size == 1 {
                return 0;
            }
            let min_cyclic = (1..self.size as u32)
                .map(|x| self.cyclic(x))
                .min_by_key(|b| b.count())
                .unwrap()
                .clone();
            let q = self.quotient(&min_cyclic);
            1 + q.module.composition_length()
        })
    }

    pub fn fingerprint(self: &Arc<Self>) -> Fingerprint {
        let ab = self.ab_basis();
        let mut inv = ab.orders.clone();
        inv.sort_unstable();
        Fingerprint {
            size: self.size,
            ab_invariants: inv,
            socle_size: self.socle_bits().count(),
            radical_size: self.radical_bits().count(),
            length: self.composition_length(),
        }
    }

    /// The submodule as a standalone module together with the embedding
    /// (new index -> parent element).
    pub fn sub_as_module(self: &Arc<Self>, b: &Bits) -> SubmoduleView {
        debug_assert!(self.is_submodule(b));
        let elems: Vec<u32> = b.to_vec();
        let mut index_of = vec![u32::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            index_of[e as usize] = i as u32;
        }
        let n = elems.len();
        let m = self.ring.size;
        let mut add = vec![0u32; n * n];
        let mut act = vec![0u32; n * m];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = index_of[self.a(elems[i], elems[j]) as usize];
            }
            for r in 0..m {
                act[i * m + r] = index_of[self.act(elems[i], r as u32) as usize];
            }
        }
        let module = assemble_derived(
            self.ring.clone(),
            add,
            act,
            format!("sub({}, |{}|)", self.label, n),
        );
        SubmoduleView {
            module,
            elems,
            index_of,
        }
    }

    /// The quotient M/N together with the projection map. Class 0 is the
    /// zero class; classes are ordered by their minimal parent element.
    pub fn quotient(self: &Arc<Self>, sub: &Bits) -> QuotientView {
        debug_assert!(self.is_submodule(sub));
        let n = self.size;
        let mut proj = vec![u32::MAX; n];
        let mut reps: Vec<u32> = Vec::new();
        for x in 0..n as u32 {
            if proj[x as usize] != u32::MAX {
                continue;
            }
            let class = reps.len() as u32;
            reps.push(x);
            // coset x + sub
            for s in sub.iter() {
                proj[self.a(x, s as u32) as usize] = class;
            }
        }
        let k = reps.len();
        let m = self.ring.size;
        let mut add = vec![0u32; k * k];
        let mut act = vec![0u32; k * m];
        for i in 0..k {
            for j in 0..k {
                add[i * k + j] = proj[self.a(reps[i], reps[j]) as usize];
            }
            for r in 0..m {
                act[i * m + r] = proj[self.act(reps[i], r as u32) as usize];
            }
        }
        let module = assemble_derived(
            self.ring.clone(),
            add,
            act,
            format!("quot({}, |{}|)", self.label, k),
        );
        QuotientView { module, proj, reps }
    }
}

pub struct SubmoduleView {
    pub module: Arc<FiniteModule>,
    /// new index -> parent element
    pub elems: Vec<u32>,
    /// parent element -> new index (u32::MAX if outside)
    pub index_of: Vec<u32>,
}

pub struct QuotientView {
    pub module: Arc<FiniteModule>,
    /// parent element -> class
    pub proj: Vec<u32>,
    /// class -> representative parent element
    pub reps: Vec<u32>,
}

/// A homomorphism of right R-modules, stored as the full value table.
#[derive(Clone)]
pub struct ModuleHom {
    pub src: Arc<FiniteModule>,
    pub dst: Arc<FiniteModule>,
    pub map: Vec<u32>,
}

impl std::fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModuleHom")
            .field("src", &self.src.label)
            .field("dst", &self.dst.label)
            .field("map", &self.map)
            .finish()
    }
}

impl ModuleHom {
    pub fn new(src: Arc<FiniteModule>, dst: Arc<FiniteModule>, map: Vec<u32>) -> Result<Self> {
        if map.len() != src.size {
            return Err(Error::InvalidSpec("hom table has wrong length".into()));
        }
        if map.iter().any(|&v| v as usize >= dst.size) {
            return Err(Error::InvalidSpec("hom value out of range".into()));
        }
        let h = ModuleHom { src, dst, map };
        h.validate()?;
        Ok(h)
    }

    fn validate(&self) -> Result<()> {
        let n = self.src.size as u32;
        if self.map[0] != 0 {
            return Err(Error::AxiomViolation {
                law: "hom preserves zero",
                a: 0,
                b: 0,
                c: 0,
            });
        }
        for x in 0..n {
            for y in x..n {
                if self.map[self.src.a(x, y) as usize]
                    != self.dst.a(self.map[x as usize], self.map[y as usize])
                {
                    return Err(Error::AxiomViolation {
                        law: "hom additivity",
                        a: x as usize,
                        b: y as usize,
                        c: 0,
                    });
                }
            }
            for r in 0..self.src.ring.size as u32 {
                if self.map[self.src.act(x, r) as usize] != self.dst.act(self.map[x as usize], r)
                {
                    return Err(Error::AxiomViolation {
                        law: "hom equivariance",
                        a: x as usize,
                        b: r as usize,
                        c: 0,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    pub fn is_injective(&self) -> bool {
        // additive map is injective iff kernel is zero
        self.map.iter().enumerate().all(|(x, &v)| x == 0 || v != 0)
    }

    pub fn image_bits(&self) -> Bits {
        let mut b = Bits::new(self.dst.size);
        for &v in &self.map {
            b.set(v as usize);
        }
        b
    }

    pub fn kernel_bits(&self) -> Bits {
        let mut b = Bits::new(self.src.size);
        for (x, &v) in self.map.iter().enumerate() {
            if v == 0 {
                b.set(x);
            }
        }
        b
    }

    pub fn compose(&self, then: &ModuleHom) -> Result<ModuleHom> {
        if !Arc::ptr_eq(&self.dst, &then.src) && self.dst.size != then.src.size {
            return Err(Error::PreconditionViolated(
                "hom composition endpoint mismatch".into(),
            ));
        }
        ModuleHom::new(
            self.src.clone(),
            then.dst.clone(),
            self.map.iter().map(|&v| then.map[v as usize]).collect(),
        )
    }
}

fn fresh_module(
    ring: Arc<FiniteRing>,
    add: Vec<u32>,
    act: Vec<u32>,
    label: String,
) -> FiniteModule {
    let size = (add.len() as f64).sqrt().round() as usize;
    let mut neg = vec![0u32; size];
    for x in 0..size {
        neg[x] = (0..size as u32)
            .find(|&y| add[x * size + y as usize] == 0)
            .expect("validated group has inverses");
    }
    FiniteModule {
        ring,
        size,
        add,
        act,
        label,
        neg,
        ab: OnceLock::new(),
        cyclics: OnceLock::new(),
        socle: OnceLock::new(),
        radical: OnceLock::new(),
        length: OnceLock::new(),
        add_gens: OnceLock::new(),
        lattice_cache: OnceLock::new(),
        hull_cache: OnceLock::new(),
        decomp_cache: OnceLock::new(),
    }
}

/// Full axiom validation for raw tables.
///
/// Additive associativity uses Light's test against an additive generating
/// set, which is complete. The law (x+y)r = xr + yr is checked for r in an
/// additive generating set of the ring; combined with the exhaustively
/// checked law x(r+s) = xr + xs this covers all r.
fn validate_module(
    ring: &FiniteRing,
    size: usize,
    add: &[u32],
    act: &[u32],
) -> Result<()> {
    let n = size;
    let m = ring.size;
    let ai = |x: u32, y: u32| add[x as usize * n + y as usize];
    let ac = |x: u32, r: u32| act[x as usize * m + r as usize];
    if add.iter().any(|&v| v as usize >= n) || act.iter().any(|&v| v as usize >= n) {
        return Err(Error::InvalidSpec("module table entry out of range".into()));
    }
    for x in 0..n as u32 {
        if ai(0, x) != x || ai(x, 0) != x {
            return Err(Error::AxiomViolation {
                law: "module additive identity",
                a: x as usize,
                b: 0,
                c: 0,
            });
        }
        if !(0..n as u32).any(|y| ai(x, y) == 0) {
            return Err(Error::AxiomViolation {
                law: "module additive inverse",
                a: x as usize,
                b: 0,
                c: 0,
            });
        }
        if ac(x, ring.one) != x {
            return Err(Error::AxiomViolation {
                law: "unit acts as identity",
                a: x as usize,
                b: ring.one as usize,
                c: 0,
            });
        }
    }
    for x in 0..n as u32 {
        for y in x..n as u32 {
            if ai(x, y) != ai(y, x) {
                return Err(Error::AxiomViolation {
                    law: "module additive commutativity",
                    a: x as usize,
                    b: y as usize,
                    c: 0,
                });
            }
        }
    }
    let add_gens = additive_generators_of(n, ai);
    // Light's associativity test: (x+g)+y = x+(g+y) for g in a generating
    // set implies full associativity.
    let bad = (0..n as u32).into_par_iter().find_map_any(|x| {
        for &g in &add_gens {
            for y in 0..n as u32 {
                if ai(ai(x, g), y) != ai(x, ai(g, y)) {
                    return Some(Error::AxiomViolation {
                        law: "module additive associativity",
                        a: x as usize,
                        b: g as usize,
                        c: y as usize,
                    });
                }
            }
        }
        None
    });
    if let Some(e) = bad {
        return Err(e);
    }
    // x(r+s) = xr + xs and x(rs) = (xr)s, exhaustive over R x R.
    let bad = (0..n as u32).into_par_iter().find_map_any(|x| {
        for r in 0..m as u32 {
            for s in 0..m as u32 {
                if ac(x, ring.a(r, s)) != ai(ac(x, r), ac(x, s)) {
                    return Some(Error::AxiomViolation {
                        law: "action additive in scalar",
                        a: x as usize,
                        b: r as usize,
                        c: s as usize,
                    });
                }
                if ac(x, ring.m(r, s)) != ac(ac(x, r), s) {
                    return Some(Error::AxiomViolation {
                        law: "action multiplicative",
                        a: x as usize,
                        b: r as usize,
                        c: s as usize,
                    });
                }
            }
        }
        None
    });
    if let Some(e) = bad {
        return Err(e);
    }
    // (x+y)r = xr + yr for r in an additive generating set of R.
    let rgens: Vec<u32> = {
        let g = additive_generators_of(m, |a, b| ring.a(a, b));
        if g.is_empty() { vec![] } else { g }
    };
    let bad = (0..n as u32).into_par_iter().find_map_any(|x| {
        for y in x..n as u32 {
            for &r in &rgens {
                if ac(ai(x, y), r) != ai(ac(x, r), ac(y, r)) {
                    return Some(Error::AxiomViolation {
                        law: "action additive in module element",
                        a: x as usize,
                        b: y as usize,
                        c: r as usize,
                    });
                }
            }
        }
        None
    });
    if let Some(e) = bad {
        return Err(e);
    }
    Ok(())
}

/// Build and fully validate a module from raw tables.
pub fn build_module(
    ring: Arc<FiniteRing>,
    add: Vec<u32>,
    act: Vec<u32>,
    label: impl Into<String>,
) -> Result<Arc<FiniteModule>> {
    let n2 = add.len();
    let size = (n2 as f64).sqrt().round() as usize;
    if size * size != n2 || size == 0 {
        return Err(Error::InvalidSpec("add table must be square".into()));
    }
    if act.len() != size * ring.size {
        return Err(Error::InvalidSpec("act table has wrong shape".into()));
    }
    validate_module(&ring, size, &add, &act)?;
    Ok(Arc::new(fresh_module(ring, add, act, label.into())))
}

/// Internal constructor for modules derived from validated parents.
/// Always re-validates in debug builds.
pub(crate) fn assemble_derived(
    ring: Arc<FiniteRing>,
    add: Vec<u32>,
    act: Vec<u32>,
    label: String,
) -> Arc<FiniteModule> {
    let size = (add.len() as f64).sqrt().round() as usize;
    debug_assert!(validate_module(&ring, size, &add, &act).is_ok());
    Arc::new(fresh_module(ring, add, act, label))
}

/// The regular right module R_R.
pub fn regular_module(ring: &Arc<FiniteRing>) -> Arc<FiniteModule> {
    ring.regular_cache
        .get_or_init(|| {
            assemble_derived(
                ring.clone(),
                ring.add.clone(),
                ring.mul.clone(),
                format!("R(|{}|)", ring.size),
            )
        })
        .clone()
}

pub fn zero_module(ring: &Arc<FiniteRing>) -> Arc<FiniteModule> {
    assemble_derived(ring.clone(), vec![0], vec![0; ring.size], "0".into())
}

pub struct DirectSum {
    pub module: Arc<FiniteModule>,
    pub parts: Vec<Arc<FiniteModule>>,
    /// strides for mixed-radix encoding, first part most significant
    strides: Vec<usize>,
}

impl DirectSum {
    pub fn encode(&self, coords: &[u32]) -> u32 {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum::<usize>() as u32
    }

    pub fn decode(&self, x: u32) -> Vec<u32> {
        let mut i = x as usize;
        self.parts
            .iter()
            .zip(&self.strides)
            .map(|(_, &s)| {
                let c = i / s;
                i %= s;
                c as u32
            })
            .collect()
    }

    /// Inclusion of part k.
    pub fn inclusion(&self, k: usize) -> ModuleHom {
        let map: Vec<u32> = (0..self.parts[k].size as u32)
            .map(|x| (x as usize * self.strides[k]) as u32)
            .collect();
        ModuleHom {
            src: self.parts[k].clone(),
            dst: self.module.clone(),
            map,
        }
    }

    /// Projection onto part k.
    pub fn projection(&self, k: usize) -> ModuleHom {
        let map: Vec<u32> = (0..self.module.size as u32)
            .map(|x| self.decode(x)[k])
            .collect();
        ModuleHom {
            src: self.module.clone(),
            dst: self.parts[k].clone(),
            map,
        }
    }
}

/// External direct sum of finitely many modules over the same ring.
pub fn direct_sum(parts: &[Arc<FiniteModule>]) -> Result<DirectSum> {
    if parts.is_empty() {
        return Err(Error::PreconditionViolated("direct sum of nothing".into()));
    }
    let ring = parts[0].ring.clone();
    if parts.iter().any(|p| !Arc::ptr_eq(&p.ring, &ring) && !p.ring.same_tables(&ring)) {
        return Err(Error::PreconditionViolated(
            "direct sum over mixed rings".into(),
        ));
    }
    let size: usize = parts.iter().map(|p| p.size).product();
    let mut strides = vec![1usize; parts.len()];
    for k in (0..parts.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * parts[k + 1].size;
    }
    let decode = |x: usize| -> Vec<u32> {
        let mut i = x;
        strides
            .iter()
            .map(|&s| {
                let c = i / s;
                i %= s;
                c as u32
            })
            .collect()
    };
    let m = ring.size;
    let mut add = vec![0u32; size * size];
    let mut act = vec![0u32; size * m];
    let coords: Vec<Vec<u32>> = (0..size).map(decode).collect();
    for x in 0..size {
        for y in 0..size {
            let mut acc = 0usize;
            for (k, p) in parts.iter().enumerate() {
                acc += p.a(coords[x][k], coords[y][k]) as usize * strides[k];
            }
            add[x * size + y] = acc as u32;
        }
        for r in 0..m as u32 {
            let mut acc = 0usize;
            for (k, p) in parts.iter().enumerate() {
                acc += p.act(coords[x][k], r) as usize * strides[k];
            }
            act[x * m + r as usize] = acc as u32;
        }
    }
    let label = format!(
        "({})",
        parts
            .iter()
            .map(|p| p.label.clone())
            .collect::<Vec<_>>()
            .join(" + ")
    );
    let module = assemble_derived(ring, add, act, label);
    Ok(DirectSum {
        module,
        parts: parts.to_vec(),
        strides,
    })
}

fn compute_ab_basis(m: &FiniteModule) -> AbBasis {
    let n = m.size;
    if n == 1 {
        return AbBasis {
            gens: vec![],
            orders: vec![],
            exponent: 1,
            radix_to_elem: vec![0],
            elem_to_radix: vec![0],
        };
    }
    let gens = m.additive_generators().to_vec();
    let k = gens.len();
    let gorders: Vec<u64> = gens.iter().map(|&g| m.elem_add_order(g)).collect();
    let exponent = gorders.iter().fold(1u64, |a, &b| crate::linalg::lcm(a, b));
    // Multiple tables: mult[i][c] = c * g_i.
    let mult: Vec<Vec<u32>> = gens
        .iter()
        .zip(&gorders)
        .map(|(&g, &o)| {
            let mut row = vec![0u32; o as usize];
            for c in 1..o as usize {
                row[c] = m.a(row[c - 1], g);
            }
            row
        })
        .collect();
    // Enumerate the relation subgroup of prod Z_{ord(g_i)}.
    let total: u64 = gorders.iter().product();
    let mut relations: Vec<Vec<u64>> = Vec::new();
    for t in 1..total {
        let mut rem = t;
        let mut counter = vec![0u64; k];
        for i in (0..k).rev() {
            counter[i] = rem % gorders[i];
            rem /= gorders[i];
        }
        let mut sum = 0u32;
        for i in 0..k {
            sum = m.a(sum, mult[i][counter[i] as usize]);
        }
        if sum == 0 {
            relations.push(counter);
        }
    }
    // Relation lattice mod exponent: enumerated relations plus ord(g_i)*e_i.
    let mut rel_rows: Vec<Vec<u64>> = relations;
    for (i, &o) in gorders.iter().enumerate() {
        if o < exponent {
            let mut row = vec![0u64; k];
            row[i] = o;
            rel_rows.push(row);
        }
    }
    // Present the group as Z_e^k / colspace(Mrel) with Mrel k x r, and
    // Smith-normalize tracking U^{-1}: new gens h_j = sum_i Uinv[i][j] g_i
    // have order gcd(d_j, e).
    let r = rel_rows.len();
    let mut mat = crate::linalg::MatMod::zero(k, r.max(1), exponent);
    for (c, row) in rel_rows.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            mat.set(i, c, v % exponent);
        }
    }
    let diag = crate::linalg::diagonalize(mat, None, true);
    let uinv = diag.uinv.as_ref().expect("uinv tracked");
    let mut new_gens = Vec::new();
    let mut new_orders = Vec::new();
    for j in 0..k {
        let d = if j < diag.diag.len() { diag.diag[j] } else { 0 };
        let o = crate::linalg::gcd(d, exponent);
        let o = if o == 0 { exponent } else { o };
        if o <= 1 {
            continue;
        }
        // h_j = sum_i uinv[i][j] * g_i
        let mut h = 0u32;
        for i in 0..k {
            let c = uinv.at(i, j) % gorders[i];
            h = m.a(h, mult[i][c as usize]);
        }
        new_gens.push(h);
        new_orders.push(o);
    }
    let prod: u64 = new_orders.iter().product();
    assert_eq!(
        prod, n as u64,
        "abelian basis orders must multiply to the group size"
    );
    // Fill coordinate tables (radix index = most-significant-first over the
    // new basis orders); assert the map is a bijection.
    let mut radix_to_elem = vec![0u32; n];
    let mut elem_to_radix = vec![u32::MAX; n];
    let kk = new_gens.len();
    let new_mult: Vec<Vec<u32>> = new_gens
        .iter()
        .zip(&new_orders)
        .map(|(&g, &o)| {
            let mut row = vec![0u32; o as usize];
            for c in 1..o as usize {
                row[c] = m.a(row[c - 1], g);
            }
            row
        })
        .collect();
    for idx in 0..n as u64 {
        let mut rem = idx;
        let mut e = 0u32;
        for i in (0..kk).rev() {
            let c = rem % new_orders[i];
            rem /= new_orders[i];
            e = m.a(e, new_mult[i][c as usize]);
        }
        radix_to_elem[idx as usize] = e;
        assert_eq!(
            elem_to_radix[e as usize],
            u32::MAX,
            "coordinate map must be injective"
        );
        elem_to_radix[e as usize] = idx as u32;
    }
    AbBasis {
        gens: new_gens,
        orders: new_orders,
        exponent,
        radix_to_elem,
        elem_to_radix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::ring::{build_ring, RingSpec};

    fn ring(n: usize) -> Arc<FiniteRing> {
        build_ring(&RingSpec::Zmod { n }, &Caps::default()).unwrap()
    }

    #[test]
    fn regular_z4() {
        let r = ring(4);
        let m = regular_module(&r);
        assert_eq!(m.size, 4);
        let ab = m.ab_basis();
        assert_eq!(ab.orders, vec![4]);
        assert_eq!(m.socle_bits().to_vec(), vec![0, 2]);
        assert_eq!(m.radical_bits().to_vec(), vec![0, 2]);
        assert_eq!(m.composition_length(), 2);
        assert!(m.is_uniform());
        assert!(!m.is_semisimple());
    }

    #[test]
    fn z6_splits() {
        let r = ring(6);
        let m = regular_module(&r);
        assert_eq!(m.composition_length(), 2);
        assert!(m.is_semisimple());
        assert!(!m.is_uniform());
        // socle is everything
        assert_eq!(m.socle_bits().count(), 6);
    }

    #[test]
    fn ab_basis_of_direct_sum() {
        let r = ring(2);
        let m = regular_module(&r);
        let s = direct_sum(&[m.clone(), m.clone(), m.clone()]).unwrap();
        let ab = s.module.ab_basis();
        assert_eq!(ab.orders, vec![2, 2, 2]);
        assert_eq!(s.module.size, 8);
        // coords round-trip
        for x in 0..8u32 {
            let c = ab.coords(x);
            assert_eq!(ab.elem_from_coords(&c), x);
        }
    }

    #[test]
    fn mixed_ab_basis() {
        // Z/4 (+) Z/2 over Z/4
        let r = ring(4);
        let reg = regular_module(&r);
        let two = reg.generated_submodule(&[2]);
        let sub = reg.sub_as_module(&two);
        let s = direct_sum(&[reg.clone(), sub.module.clone()]).unwrap();
        let ab = s.module.ab_basis();
        let mut orders = ab.orders.clone();
        orders.sort_unstable();
        assert_eq!(orders, vec![2, 4]);
        for x in 0..s.module.size as u32 {
            let c = ab.coords(x);
            assert_eq!(ab.elem_from_coords(&c), x);
        }
    }

    #[test]
    fn generated_submodule_matches_brute_force_z8() {
        let r = ring(8);
        let m = regular_module(&r);
        // brute force: all subsets that are submodules
        for x in 0..8u32 {
            let b = m.generated_submodule(&[x]);
            assert!(m.is_submodule(&b));
            assert!(b.get(x as usize));
            // minimality: any submodule containing x contains b
            for mask in 0u32..256 {
                if mask & 1 == 0 || mask & (1 << x) == 0 {
                    continue;
                }
                let mut cand = Bits::new(8);
                for i in 0..8 {
                    if mask & (1 << i) != 0 {
                        cand.set(i);
                    }
                }
                if m.is_submodule(&cand) {
                    assert!(b.is_subset_of(&cand));
                }
            }
        }
    }

    #[test]
    fn quotient_and_sub_of_z8() {
        let r = ring(8);
        let m = regular_module(&r);
        let four = m.generated_submodule(&[4]);
        assert_eq!(four.count(), 2);
        let q = m.quotient(&four);
        assert_eq!(q.module.size, 4);
        assert_eq!(q.module.composition_length(), 2);
        let s = m.sub_as_module(&four);
        assert_eq!(s.module.size, 2);
        assert!(s.module.is_simple());
    }

    #[test]
    fn essential_submodules_of_z4() {
        let r = ring(4);
        let m = regular_module(&r);
        let soc = m.socle_bits().clone();
        assert!(m.is_essential(&soc));
        let zero = Bits::singleton(4, 0);
        assert!(!m.is_essential(&zero));
    }

    #[test]
    fn hom_validation() {
        let r = ring(4);
        let m = regular_module(&r);
        // multiplication by 2 is an endomorphism of Z/4
        let h = ModuleHom::new(m.clone(), m.clone(), vec![0, 2, 0, 2]).unwrap();
        assert!(!h.is_injective());
        assert_eq!(h.kernel_bits().to_vec(), vec![0, 2]);
        // x -> x+1 is not additive
        assert!(ModuleHom::new(m.clone(), m.clone(), vec![1, 2, 3, 0]).is_err());
    }

    #[test]
    fn bad_action_rejected() {
        let r = ring(2);
        // act table where 1*1 = 0 breaks unitality
        let res = build_module(r, vec![0, 1, 1, 0], vec![0, 0, 0, 0], "bad");
        assert!(matches!(res, Err(Error::AxiomViolation { .. })));
    }

    #[test]
    fn ut2_regular_module() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &Caps::default()).unwrap();
        let m = regular_module(&r);
        assert_eq!(m.size, 8);
        // soc(R_R) for UT2(F_2): annihilator of J = {(0,b;0,c)} row space
        let soc = m.socle_bits();
        assert!(soc.count() > 1);
        assert_eq!(m.composition_length(), 3);
    }
}
