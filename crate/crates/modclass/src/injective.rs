//! Injectivity: Baer's criterion, character modules, injective hulls,
//! simple modules, indecomposable injectives and uniform modules.

use std::sync::Arc;

use crate::bits::Bits;
use crate::config::Caps;
use crate::decomp::{are_isomorphic, decompose, is_indecomposable};
use crate::error::{Error, Result};
use crate::hom::hom_space;
use crate::lattice::{all_submodules, join, maximal_submodules};
use crate::module::{
    assemble_derived, direct_sum, regular_module, FiniteModule, ModuleHom,
};
use crate::ring::FiniteRing;

/// Baer's criterion. By default only essential right ideals are tested
/// (sufficient: any hom from a right ideal I extends by zero across a
/// complement K with I + K essential). Set `all_ideals` to scan every
/// right ideal instead; the two must agree.
pub fn is_injective(m: &Arc<FiniteModule>, caps: &Caps, all_ideals: bool) -> Result<bool> {
    let reg = regular_module(&m.ring);
    let ideals = all_submodules(&reg, caps)?;
    for ideal in ideals.iter() {
        if ideal.count() == reg.size {
            continue; // homs from R itself always "extend"
        }
        if !all_ideals && !reg.is_essential(ideal) {
            continue;
        }
        let view = reg.sub_as_module(ideal);
        // Extendable homs form a subgroup of Hom(I, M), so it is enough to
        // extend the generators. A hom h: R -> M is x -> m*x for m = h(1),
        // so f: I -> M extends iff some m in M has f(i) = m*i for all i.
        let homs = hom_space(&view.module, m)?;
        for f in &homs.gens {
            let extends = (0..m.size as u32).any(|cand| {
                view.elems
                    .iter()
                    .enumerate()
                    .all(|(i, &pe)| f.apply(i as u32) == m.act(cand, pe))
            });
            if !extends {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The character module M^* = Hom_Z(M, Q/Z) as a right module over the
/// opposite ring, with ((chi) . r)(x) = chi(x * r).
///
/// A character is determined by its values chi(h_j) = v_j / d_j in Q/Z on
/// an abelian basis h_j of orders d_j, so characters are indexed by the
/// same mixed radix as module coordinates and |M^*| = |M|.
pub struct CharModule {
    pub module: Arc<FiniteModule>,
    /// the module being dualized
    pub base: Arc<FiniteModule>,
    orders: Vec<u64>,
    exponent: u64,
}

impl CharModule {
    /// Value chi(x) represented in Z_L, L the exponent of the base module
    /// (chi(x) = eval/L as an element of Q/Z).
    pub fn eval(&self, chi: u32, x: u32) -> u64 {
        let ab = self.base.ab_basis();
        let c = ab.coords(x);
        let v = self.coords_of_char(chi);
        let l = self.exponent;
        let mut acc = 0u64;
        for j in 0..self.orders.len() {
            acc = (acc + c[j] % l * (v[j] % l) % l * (l / self.orders[j])) % l;
        }
        acc
    }

    /// The coordinate vector (v_j in Z_{d_j}) of a character index.
    pub fn coords_of_char(&self, chi: u32) -> Vec<u64> {
        let mut i = chi as u64;
        let mut v = vec![0u64; self.orders.len()];
        for j in (0..self.orders.len()).rev() {
            v[j] = i % self.orders[j];
            i /= self.orders[j];
        }
        v
    }

    /// Character index from values on the basis gens, given in Z_L
    /// (each value must be a multiple of L/d_j).
    pub fn char_from_values(&self, values: &[u64]) -> Result<u32> {
        let l = self.exponent;
        let mut idx = 0u64;
        for (j, &val) in values.iter().enumerate() {
            let step = l / self.orders[j];
            if val % step != 0 {
                return Err(Error::PreconditionViolated(
                    "character value has wrong order".into(),
                ));
            }
            idx = idx * self.orders[j] + (val / step) % self.orders[j];
        }
        Ok(idx as u32)
    }
}

pub fn character_module(m: &Arc<FiniteModule>) -> Result<CharModule> {
    let ab = m.ab_basis();
    let orders = ab.orders.clone();
    let l = ab.exponent;
    let n = m.size;
    let k = orders.len();
    let op = m.ring.opposite();
    // addition: coordinatewise mod d_j
    let decode = |chi: u64| {
        let mut i = chi;
        let mut v = vec![0u64; k];
        for j in (0..k).rev() {
            v[j] = i % orders[j];
            i /= orders[j];
        }
        v
    };
    let encode = |v: &[u64]| {
        let mut idx = 0u64;
        for (j, &x) in v.iter().enumerate() {
            idx = idx * orders[j] + x % orders[j];
        }
        idx
    };
    let mut add = vec![0u32; n * n];
    let all_coords: Vec<Vec<u64>> = (0..n as u64).map(decode).collect();
    for a in 0..n {
        for b in 0..n {
            let v: Vec<u64> = all_coords[a]
                .iter()
                .zip(&all_coords[b])
                .zip(&orders)
                .map(|((&x, &y), &o)| (x + y) % o)
                .collect();
            add[a * n + b] = encode(&v) as u32;
        }
    }
    // action over the opposite ring: (chi . r)(x) = chi(x * r), so the new
    // character's value on h_j is chi(h_j * r).
    let helper = CharModule {
        module: assemble_derived(op.clone(), vec![0], vec![0; op.size], "tmp".into()),
        base: m.clone(),
        orders: orders.clone(),
        exponent: l,
    };
    let mut act = vec![0u32; n * op.size];
    for chi in 0..n as u32 {
        for r in 0..op.size as u32 {
            let values: Vec<u64> = ab
                .gens
                .iter()
                .map(|&h| helper.eval(chi, m.act(h, r)))
                .collect();
            act[chi as usize * op.size + r as usize] = helper.char_from_values(&values)?;
        }
    }
    let module = assemble_derived(op, add, act, format!("({})^*", m.label));
    Ok(CharModule {
        module,
        base: m.clone(),
        orders,
        exponent: l,
    })
}

/// The standard injective cogenerator E_0 = (R^op as a right R^op-module)^*,
/// a right R-module (cached on the ring).
pub fn cogenerator(ring: &Arc<FiniteRing>) -> Result<Arc<FiniteModule>> {
    if let Some(e) = ring.cogenerator_cache.get() {
        return Ok(e.clone());
    }
    let op = ring.opposite();
    let reg_op = regular_module(&op);
    let c = character_module(&reg_op)?;
    // (R^op)^op is the original ring instance, so c.module is an R-module
    debug_assert!(c.module.ring.same_tables(ring));
    let _ = ring.cogenerator_cache.set(c.module.clone());
    Ok(c.module)
}

/// Minimal generating tuple of a module, greedy: repeatedly adjoin the
/// element whose addition grows the generated submodule the most.
pub fn module_generators(m: &Arc<FiniteModule>) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut span = Bits::singleton(m.size, 0);
    while span.count() < m.size {
        // adjoining x grows the span to span + xR, a join of submodules
        let mut best: Option<(usize, u32, Bits)> = None;
        for x in 1..m.size as u32 {
            if span.get(x as usize) {
                continue;
            }
            let b = join(m, &span, m.cyclic(x));
            let c = b.count();
            if best.as_ref().map_or(true, |(bc, _, _)| c > *bc) {
                best = Some((c, x, b));
            }
            if c == m.size {
                break;
            }
        }
        let (_, x, b) = best.expect("module not spanned but no element grows the span");
        gens.push(x);
        span = b;
    }
    gens
}

/// Injective hull of an indecomposable (or any) module, computed directly:
/// embed M into E_0^t via x -> (chi_i(x * -))_i for generators chi_i of
/// M^*, then grow the image to a maximal essential extension inside the
/// injective module E_0^t. Postconditions (essentiality, injectivity of
/// the result) are asserted.
fn injective_hull_direct(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Arc<FiniteModule>> {
    if m.size == 1 {
        return Ok(m.clone());
    }
    let e0 = cogenerator(&m.ring)?;
    let dual = character_module(m)?;
    let gens = module_generators(&dual.module);
    let t = gens.len().max(1);
    let total = e0.size.checked_pow(t as u32).ok_or(Error::SizeLimit {
        requested: usize::MAX,
        cap: caps.max_module_size,
    })?;
    if total > caps.max_module_size {
        return Err(Error::SizeLimit {
            requested: total,
            cap: caps.max_module_size,
        });
    }
    let parts: Vec<Arc<FiniteModule>> = (0..t).map(|_| e0.clone()).collect();
    let big = direct_sum(&parts)?;
    // E_0 is the character module of the regular R^op-module; component i of
    // the embedding sends x to the character r -> chi_i(x * r).
    let op = m.ring.opposite();
    let reg_op = regular_module(&op);
    let e0_chars = CharModule {
        module: e0.clone(),
        base: reg_op.clone(),
        orders: reg_op.ab_basis().orders.clone(),
        exponent: reg_op.ab_basis().exponent,
    };
    let rbasis = reg_op.ab_basis().gens.clone();
    let embed = |x: u32| -> Result<u32> {
        let mut comp = vec![0u32; t];
        for (i, &chi) in gens.iter().enumerate() {
            let values: Vec<u64> = rbasis
                .iter()
                .map(|&r| dual.eval(chi, m.act(x, r)))
                .collect();
            // values live in Z_{L_M}; rescale to Z_{L_R} of the regular
            // module of R^op (L_M divides L_R because M is an R-module)
            let lr = e0_chars.exponent;
            let lm = dual.exponent;
            debug_assert_eq!(lr % lm, 0);
            let scaled: Vec<u64> = values.iter().map(|&v| v * (lr / lm)).collect();
            comp[i] = e0_chars.char_from_values(&scaled)?;
        }
        Ok(big.encode(&comp))
    };
    let mut image = Bits::new(big.module.size);
    let mut image_map = vec![0u32; m.size];
    for x in 0..m.size as u32 {
        let e = embed(x)?;
        image_map[x as usize] = e;
        image.set(e as usize);
    }
    if image.count() != m.size {
        return Err(Error::HullPostconditionFailure(
            "embedding into the cogenerator power is not injective".into(),
        ));
    }
    // the embedding must be R-linear
    ModuleHom::new(m.clone(), big.module.clone(), image_map)?;
    // grow to a maximal essential extension of the image inside big
    // (the image of a hom is itself a submodule)
    let e = &big.module;
    let mut hull = image.clone();
    debug_assert!(e.is_submodule(&hull));
    let is_ess_in = |outer: &Bits, inner: &Bits| -> bool {
        outer
            .iter()
            .all(|y| y == 0 || e.cyclic(y as u32).meets_nontrivially(inner))
    };
    loop {
        let mut grew = false;
        for y in 1..e.size as u32 {
            if hull.get(y as usize) {
                continue;
            }
            let cand = join(e, &hull, e.cyclic(y));
            if is_ess_in(&cand, &image) {
                hull = cand;
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    let hv = e.sub_as_module(&hull);
    // postconditions
    if !hv.module.is_zero_module() {
        let mut im_in_hull = Bits::new(hv.module.size);
        for x in image.iter() {
            im_in_hull.set(hv.index_of[x] as usize);
        }
        if !hv.module.is_essential(&im_in_hull) {
            return Err(Error::HullPostconditionFailure(
                "module is not essential in the computed hull".into(),
            ));
        }
    }
    if !is_injective(&hv.module, caps, false)? {
        return Err(Error::HullPostconditionFailure(
            "computed hull is not injective".into(),
        ));
    }
    Ok(hv.module)
}

/// Injective hull E(M): decompose first and take the direct sum of the
/// hulls of the indecomposable parts (E(A + B) = E(A) + E(B)); cached.
pub fn injective_hull(m: &Arc<FiniteModule>, caps: &Caps) -> Result<Arc<FiniteModule>> {
    if let Some(h) = m.hull_cache.get() {
        return Ok(h.clone());
    }
    let d = decompose(m, caps)?;
    let hull = if d.parts.len() <= 1 {
        injective_hull_direct(m, caps)?
    } else {
        let hulls: Vec<Arc<FiniteModule>> = d
            .parts
            .iter()
            .map(|p| injective_hull(p, caps))
            .collect::<Result<_>>()?;
        let total: usize = hulls.iter().map(|h| h.size).product();
        if total > caps.max_module_size {
            return Err(Error::SizeLimit {
                requested: total,
                cap: caps.max_module_size,
            });
        }
        direct_sum(&hulls)?.module
    };
    let _ = m.hull_cache.set(hull.clone());
    Ok(hull)
}

/// The simple right R-modules up to isomorphism: quotients of R_R by its
/// maximal right ideals, deduplicated.
pub fn simple_modules(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<Vec<Arc<FiniteModule>>> {
    let reg = regular_module(ring);
    let maxs = maximal_submodules(&reg, caps)?;
    let mut out: Vec<Arc<FiniteModule>> = Vec::new();
    for mx in maxs {
        let q = reg.quotient(&mx).module;
        let mut fresh = true;
        for s in &out {
            if are_isomorphic(s, &q, caps)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(q);
        }
    }
    out.sort_by_key(|s| s.size);
    Ok(out)
}

/// Indecomposable injectives up to isomorphism: the hulls of the simples
/// (every indecomposable injective over an artinian ring is E(S)).
pub fn indecomposable_injectives(
    ring: &Arc<FiniteRing>,
    caps: &Caps,
) -> Result<Vec<Arc<FiniteModule>>> {
    let simples = simple_modules(ring, caps)?;
    let mut out = Vec::new();
    for s in &simples {
        let h = injective_hull(s, caps)?;
        if !is_indecomposable(&h, caps)? {
            return Err(Error::HullPostconditionFailure(
                "hull of a simple module must be indecomposable".into(),
            ));
        }
        let mut fresh = true;
        for e in &out {
            if are_isomorphic(e, &h, caps)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(h);
        }
    }
    out.sort_by_key(|e| e.size);
    Ok(out)
}

/// All uniform modules of size <= bound, up to isomorphism. Every uniform
/// module embeds essentially in an indecomposable injective, and every
/// nonzero submodule of one is uniform, so scanning the lattices of the
/// indecomposable injectives is exhaustive.
pub fn uniform_modules(
    ring: &Arc<FiniteRing>,
    bound: usize,
    caps: &Caps,
) -> Result<Vec<Arc<FiniteModule>>> {
    let injs = indecomposable_injectives(ring, caps)?;
    let mut out: Vec<Arc<FiniteModule>> = Vec::new();
    for e in &injs {
        let lat = all_submodules(e, caps)?;
        for b in lat.iter() {
            if b.count() == 1 || b.count() > bound {
                continue;
            }
            let u = e.sub_as_module(b).module;
            debug_assert!(u.is_uniform());
            let mut fresh = true;
            for v in &out {
                if are_isomorphic(v, &u, caps)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                out.push(u);
            }
        }
    }
    out.sort_by_key(|u| u.size);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::ring::{build_ring, RingSpec};

    fn caps() -> Caps {
        Caps::default()
    }

    fn zring(n: usize) -> Arc<FiniteRing> {
        build_ring(&RingSpec::Zmod { n }, &caps()).unwrap()
    }

    #[test]
    fn zmod_n_is_self_injective() {
        for n in [2usize, 4, 6, 8, 9, 12] {
            let r = zring(n);
            let m = regular_module(&r);
            assert!(is_injective(&m, &caps(), false).unwrap(), "Z/{n}");
            assert!(is_injective(&m, &caps(), true).unwrap(), "Z/{n} all ideals");
        }
    }

    #[test]
    fn proper_submodule_of_z4_not_injective() {
        let r = zring(4);
        let m = regular_module(&r);
        let s = m.sub_as_module(&m.generated_submodule(&[2])).module;
        assert!(!is_injective(&s, &caps(), false).unwrap());
        assert!(!is_injective(&s, &caps(), true).unwrap());
    }

    #[test]
    fn character_module_double_dual() {
        for spec in [RingSpec::Zmod { n: 4 }, RingSpec::Ut2 { q: 2 }] {
            let r = build_ring(&spec, &caps()).unwrap();
            let m = regular_module(&r);
            let d = character_module(&m).unwrap();
            assert_eq!(d.module.size, m.size);
            let dd = character_module(&d.module).unwrap();
            assert_eq!(dd.module.size, m.size);
            assert!(dd.module.ring.same_tables(&r));
            assert!(are_isomorphic(&dd.module, &m, &caps()).unwrap(), "{spec:?}");
        }
    }

    #[test]
    fn cogenerator_is_injective() {
        for spec in [RingSpec::Zmod { n: 4 }, RingSpec::Ut2 { q: 2 }] {
            let r = build_ring(&spec, &caps()).unwrap();
            let e0 = cogenerator(&r).unwrap();
            assert_eq!(e0.size, r.size);
            assert!(is_injective(&e0, &caps(), true).unwrap(), "{spec:?}");
        }
    }

    #[test]
    fn hull_of_z2_over_z4() {
        let r = zring(4);
        let m = regular_module(&r);
        let s = m.sub_as_module(&m.generated_submodule(&[2])).module;
        let h = injective_hull(&s, &caps()).unwrap();
        assert_eq!(h.size, 4, "E(Z/2) = Z/4 over Z/4");
        assert!(are_isomorphic(&h, &m, &caps()).unwrap());
        // hull of an injective is itself
        let hm = injective_hull(&m, &caps()).unwrap();
        assert_eq!(hm.size, 4);
    }

    #[test]
    fn simples_and_injectives_of_z12() {
        let r = zring(12);
        let simples = simple_modules(&r, &caps()).unwrap();
        let mut sizes: Vec<usize> = simples.iter().map(|s| s.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 3]);
        let injs = indecomposable_injectives(&r, &caps()).unwrap();
        let mut sizes: Vec<usize> = injs.iter().map(|s| s.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![3, 4], "E(Z/2) = Z/4, E(Z/3) = Z/3");
    }

    #[test]
    fn ut2_simples_and_injectives() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &caps()).unwrap();
        let simples = simple_modules(&r, &caps()).unwrap();
        assert_eq!(simples.len(), 2);
        assert!(simples.iter().all(|s| s.size == 2));
        let injs = indecomposable_injectives(&r, &caps()).unwrap();
        let mut sizes: Vec<usize> = injs.iter().map(|s| s.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);
    }

    #[test]
    fn uniforms_of_ut2() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &caps()).unwrap();
        let us = uniform_modules(&r, 64, &caps()).unwrap();
        // three uniform modules: two simples (sizes 2) and E(A) of size 4
        let mut sizes: Vec<usize> = us.iter().map(|u| u.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 4]);
    }

    #[test]
    fn uniforms_of_z8() {
        let r = zring(8);
        let us = uniform_modules(&r, 64, &caps()).unwrap();
        let mut sizes: Vec<usize> = us.iter().map(|u| u.size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4, 8]);
    }
}
