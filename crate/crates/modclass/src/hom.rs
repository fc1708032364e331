//! Hom groups between finite modules, computed as linear systems over the
//! abelian bases — never by enumerating functions.
//!
//! An additive map f: M -> N is determined by the images f(h_j) of an
//! abelian basis h_1..h_k of M, subject to d_j * f(h_j) = 0 (orders d_j).
//! R-linearity is equivalent to f(h_j * g) = f(h_j) * g for g ranging over
//! an additive generating set of R. Writing f(h_j) in coordinates Y[j][l]
//! over N's basis (orders e_l) gives a linear system with mixed moduli,
//! lifted to the exponent L of N by scaling each coordinate-t row with
//! L/e_t. Every unknown Y[j][l] then carries a redundancy factor L/e_l,
//! so |Hom| = (solutions mod L) / prod(L/e_l)^k.

use std::collections::HashSet;
use std::sync::Arc;

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::linalg::{diagonalize, MatMod};
use crate::module::{FiniteModule, ModuleHom, SubmoduleView};

pub struct HomSpace {
    pub src: Arc<FiniteModule>,
    pub dst: Arc<FiniteModule>,
    /// additive generators of the Hom group
    pub gens: Vec<ModuleHom>,
    pub count: u128,
}

struct System {
    /// rows, each of length n_unknowns, mod l
    rows: Vec<Vec<u64>>,
    rhs: Vec<u64>,
    l: u64,
    n_unknowns: usize,
}

/// Build the homogeneous R-linearity system for Hom(src, dst).
/// Unknown (j, l) has index j * kl + l.
fn hom_system(src: &Arc<FiniteModule>, dst: &Arc<FiniteModule>) -> System {
    let sab = src.ab_basis();
    let dab = dst.ab_basis();
    let k = sab.gens.len();
    let kl = dab.gens.len();
    let l = dab.exponent;
    let n_unknowns = k * kl;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    if n_unknowns == 0 || l == 1 {
        return System {
            rows,
            rhs: vec![],
            l: l.max(2),
            n_unknowns,
        };
    }
    let scale: Vec<u64> = dab.orders.iter().map(|&e| l / e).collect();
    // order rows: (L/e_t) * d_j * Y[j][t] = 0
    for j in 0..k {
        for t in 0..kl {
            let coef = (sab.orders[j] % l) * scale[t] % l;
            if coef == 0 {
                continue;
            }
            let mut row = vec![0u64; n_unknowns];
            row[j * kl + t] = coef;
            rows.push(row);
        }
    }
    // equivariance rows, one per (src basis gen j, ring additive gen g,
    // dst coordinate t):
    //   sum_j' c_j'(h_j * g) Y[j'][t] - sum_l kappa_{l,g}[t] Y[j][l] = 0,
    // scaled by L/e_t, where kappa_{l,g} = coords of (dst basis gen l) * g.
    let rgens: Vec<u32> = src.ring.additive_generators().to_vec();
    for &g in &rgens {
        // coords of k_l * g in dst
        let kappa: Vec<Vec<u64>> = dab
            .gens
            .iter()
            .map(|&kl_gen| dab.coords(dst.act(kl_gen, g)))
            .collect();
        for j in 0..k {
            let c = sab.coords(src.act(sab.gens[j], g));
            for t in 0..kl {
                let mut row = vec![0u64; n_unknowns];
                for (jp, &cjp) in c.iter().enumerate() {
                    row[jp * kl + t] = (row[jp * kl + t] + cjp % l * scale[t]) % l;
                }
                for (lidx, kap) in kappa.iter().enumerate() {
                    let sub = kap[t] % l * scale[t] % l;
                    let cur = &mut row[j * kl + lidx];
                    *cur = (*cur + l - sub) % l;
                }
                if row.iter().any(|&v| v != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let nrows = rows.len();
    System {
        rows,
        rhs: vec![0; nrows],
        l,
        n_unknowns,
    }
}

/// Turn a solution vector Y into the full value table of the hom.
fn solution_to_map(src: &Arc<FiniteModule>, dst: &Arc<FiniteModule>, y: &[u64]) -> Vec<u32> {
    let sab = src.ab_basis();
    let dab = dst.ab_basis();
    let k = sab.gens.len();
    let kl = dab.gens.len();
    let mut map = vec![0u32; src.size];
    // images of the src basis gens
    let images: Vec<u32> = (0..k)
        .map(|j| {
            let coords: Vec<u64> = (0..kl).map(|t| y[j * kl + t] % dab.orders[t]).collect();
            dab.elem_from_coords(&coords)
        })
        .collect();
    for x in 0..src.size as u32 {
        let c = sab.coords(x);
        let mut v = 0u32;
        for j in 0..k {
            // add c[j] * images[j]
            let mut mult = 0u32;
            let mut base = images[j];
            let mut e = c[j];
            // double-and-add in the additive group
            while e > 0 {
                if e & 1 == 1 {
                    mult = dst.a(mult, base);
                }
                base = dst.a(base, base);
                e >>= 1;
            }
            v = dst.a(v, mult);
        }
        map[x as usize] = v;
    }
    map
}

/// The group Hom_R(src, dst): additive generators and the exact count.
pub fn hom_space(src: &Arc<FiniteModule>, dst: &Arc<FiniteModule>) -> Result<HomSpace> {
    let sys = hom_system(src, dst);
    if sys.n_unknowns == 0 || dst.ab_basis().exponent == 1 {
        return Ok(HomSpace {
            src: src.clone(),
            dst: dst.clone(),
            gens: vec![],
            count: 1,
        });
    }
    let mut mat = MatMod::zero(sys.rows.len().max(1), sys.n_unknowns, sys.l);
    for (i, row) in sys.rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            mat.set(i, j, v);
        }
    }
    let diag = diagonalize(mat, None, false);
    let dab = dst.ab_basis();
    let kl = dab.gens.len();
    let k = src.ab_basis().gens.len();
    // redundancy: each unknown (j, l) counts L/e_l lifts per true value
    let mut redundancy: u128 = 1;
    for _ in 0..k {
        for t in 0..kl {
            redundancy *= (sys.l / dab.orders[t]) as u128;
        }
    }
    let count = diag.solution_count() / redundancy;
    let mut gens = Vec::new();
    for kg in diag.kernel_gens() {
        let map = solution_to_map(src, dst, &kg);
        if map.iter().all(|&v| v == 0) {
            continue;
        }
        gens.push(ModuleHom::new(src.clone(), dst.clone(), map)?);
    }
    Ok(HomSpace {
        src: src.clone(),
        dst: dst.clone(),
        gens,
        count,
    })
}

pub fn hom_count(src: &Arc<FiniteModule>, dst: &Arc<FiniteModule>) -> Result<u128> {
    Ok(hom_space(src, dst)?.count)
}

/// Endomorphism ring generators of M as an additive group.
pub fn end_space(m: &Arc<FiniteModule>) -> Result<HomSpace> {
    hom_space(m, m)
}

/// Given u: N -> C and f: N -> T, find alpha: C -> T with alpha o u = f,
/// if one exists. The inhomogeneous rows pin alpha(u(h_j)) = f(h_j) on N's
/// basis; agreement on additive generators implies agreement everywhere.
pub fn factor_through(u: &ModuleHom, f: &ModuleHom) -> Result<Option<ModuleHom>> {
    if u.src.size != f.src.size {
        return Err(Error::PreconditionViolated(
            "factor_through: u and f must share their source".into(),
        ));
    }
    let c = &u.dst;
    let t = &f.dst;
    let tab = t.ab_basis();
    let cab = c.ab_basis();
    let kt = tab.gens.len();
    if kt == 0 || tab.exponent == 1 {
        // T is the zero module; alpha = 0 works iff f = 0, which it is.
        return Ok(Some(ModuleHom::new(
            c.clone(),
            t.clone(),
            vec![0; c.size],
        )?));
    }
    let mut sys = hom_system(c, t);
    let l = sys.l;
    let kc = cab.gens.len();
    if kc == 0 {
        // C is the zero module; alpha = 0, need f = 0
        if f.map.iter().all(|&v| v == 0) {
            return Ok(Some(ModuleHom::new(c.clone(), t.clone(), vec![0; 1])?));
        }
        return Ok(None);
    }
    let scale: Vec<u64> = tab.orders.iter().map(|&e| l / e).collect();
    let nab = f.src.ab_basis();
    for (j, &hj) in nab.gens.iter().enumerate() {
        let _ = j;
        let cu = cab.coords(u.apply(hj));
        let ft = tab.coords(f.apply(hj));
        for tcoord in 0..kt {
            let mut row = vec![0u64; sys.n_unknowns];
            for (lidx, &cl) in cu.iter().enumerate() {
                row[lidx * kt + tcoord] = cl % l * scale[tcoord] % l;
            }
            let rhs = ft[tcoord] % l * scale[tcoord] % l;
            if row.iter().all(|&v| v == 0) && rhs != 0 {
                return Ok(None);
            }
            sys.rows.push(row);
            sys.rhs.push(rhs);
        }
    }
    let mut mat = MatMod::zero(sys.rows.len().max(1), sys.n_unknowns, l);
    for (i, row) in sys.rows.iter().enumerate() {
        for (jj, &v) in row.iter().enumerate() {
            mat.set(i, jj, v);
        }
    }
    let mut rhs = sys.rhs.clone();
    rhs.resize(sys.rows.len().max(1), 0);
    let diag = diagonalize(mat, Some(rhs), false);
    let Some(y) = diag.particular() else {
        return Ok(None);
    };
    let map = solution_to_map(c, t, &y);
    let alpha = ModuleHom::new(c.clone(), t.clone(), map)?;
    // exact post-check
    for x in 0..u.src.size as u32 {
        if alpha.apply(u.apply(x)) != f.apply(x) {
            return Err(Error::PreconditionViolated(
                "factor_through produced a non-factorization".into(),
            ));
        }
    }
    Ok(Some(alpha))
}

/// Does f: A -> T extend to h: M -> T along the inclusion A <= M?
pub fn extend_along_inclusion(
    m: &Arc<FiniteModule>,
    sub: &SubmoduleView,
    f: &ModuleHom,
) -> Result<Option<ModuleHom>> {
    let incl = ModuleHom::new(
        sub.module.clone(),
        m.clone(),
        sub.elems.clone(),
    )?;
    factor_through(&incl, f)
}

/// Enumerate every hom src -> dst as a value table. Errors if the count
/// exceeds the cap. Used by small-scale oracles and isomorphism search.
pub fn enumerate_homs(
    src: &Arc<FiniteModule>,
    dst: &Arc<FiniteModule>,
    caps: &Caps,
) -> Result<Vec<Vec<u32>>> {
    let space = hom_space(src, dst)?;
    if space.count > caps.max_hom_enum as u128 {
        return Err(Error::HomSpaceTooLarge {
            size: space.count,
            cap: caps.max_hom_enum,
        });
    }
    let zero = vec![0u32; src.size];
    let mut set: HashSet<Vec<u32>> = HashSet::new();
    set.insert(zero.clone());
    // close the set under adding each generator (pointwise in dst)
    for g in &space.gens {
        loop {
            let mut added = false;
            let snapshot: Vec<Vec<u32>> = set.iter().cloned().collect();
            for t in snapshot {
                let sum: Vec<u32> = t
                    .iter()
                    .zip(&g.map)
                    .map(|(&a, &b)| dst.a(a, b))
                    .collect();
                if set.insert(sum) {
                    added = true;
                }
            }
            if !added {
                break;
            }
        }
    }
    if set.len() as u128 != space.count {
        return Err(Error::PreconditionViolated(format!(
            "hom enumeration found {} maps but the linear system counted {}",
            set.len(),
            space.count
        )));
    }
    Ok(set.into_iter().collect())
}

/// Search for an R-isomorphism src -> dst by enumerating the hom group.
/// Only sensible for modules already filtered by fingerprint.
pub fn find_isomorphism(
    src: &Arc<FiniteModule>,
    dst: &Arc<FiniteModule>,
    caps: &Caps,
) -> Result<Option<ModuleHom>> {
    if src.size != dst.size {
        return Ok(None);
    }
    if src.size == 1 {
        return Ok(Some(ModuleHom::new(src.clone(), dst.clone(), vec![0])?));
    }
    let homs = enumerate_homs(src, dst, caps)?;
    for map in homs {
        let mut seen = vec![false; dst.size];
        let mut bij = true;
        for &v in &map {
            if seen[v as usize] {
                bij = false;
                break;
            }
            seen[v as usize] = true;
        }
        if bij {
            return Ok(Some(ModuleHom::new(src.clone(), dst.clone(), map)?));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Caps;
    use crate::module::{direct_sum, regular_module};
    use crate::ring::{build_ring, RingSpec};
    use crate::ring::FiniteRing;

    fn zring(n: usize) -> Arc<FiniteRing> {
        build_ring(&RingSpec::Zmod { n }, &Caps::default()).unwrap()
    }

    /// Brute-force hom count by testing every function table (tiny only).
    fn brute_hom_count(src: &Arc<FiniteModule>, dst: &Arc<FiniteModule>) -> u128 {
        let n = src.size;
        let d = dst.size as u64;
        let total = (d as u128).pow((n - 1) as u32);
        assert!(total <= 1 << 22, "brute force only for tiny modules");
        let mut count = 0u128;
        let mut map = vec![0u32; n];
        for t in 0..total {
            let mut rem = t;
            for x in 1..n {
                map[x] = (rem % d as u128) as u32;
                rem /= d as u128;
            }
            let additive = (0..n as u32).all(|x| {
                (0..n as u32).all(|y| {
                    map[src.a(x, y) as usize] == dst.a(map[x as usize], map[y as usize])
                })
            });
            if !additive {
                continue;
            }
            let linear = (0..n as u32).all(|x| {
                (0..src.ring.size as u32)
                    .all(|r| map[src.act(x, r) as usize] == dst.act(map[x as usize], r))
            });
            if linear {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn hom_counts_match_brute_force() {
        for n in [2usize, 4, 6, 8] {
            let r = zring(n);
            let m = regular_module(&r);
            let c = hom_count(&m, &m).unwrap();
            assert_eq!(c, n as u128, "End(Z/{n}) = Z/{n}");
            assert_eq!(c, brute_hom_count(&m, &m));
        }
        // Hom(Z/2, Z/4) over Z/4: images must be 2-torsion => 2 maps
        let r = zring(4);
        let m = regular_module(&r);
        let two = m.generated_submodule(&[2]);
        let s = m.sub_as_module(&two).module;
        assert_eq!(hom_count(&s, &m).unwrap(), 2);
        assert_eq!(hom_count(&s, &m).unwrap(), brute_hom_count(&s, &m));
        assert_eq!(hom_count(&m, &s).unwrap(), 2);
    }

    #[test]
    fn hom_count_direct_sum_multiplies() {
        let r = zring(4);
        let m = regular_module(&r);
        let mm = direct_sum(&[m.clone(), m.clone()]).unwrap().module;
        // Hom(M, A+B) = Hom(M,A) x Hom(M,B)
        assert_eq!(hom_count(&m, &mm).unwrap(), 16);
        assert_eq!(hom_count(&mm, &m).unwrap(), 16);
        assert_eq!(hom_count(&mm, &mm).unwrap(), 256);
    }

    #[test]
    fn noncommutative_homs() {
        let r = build_ring(&RingSpec::Ut2 { q: 2 }, &Caps::default()).unwrap();
        let m = regular_module(&r);
        let c = hom_count(&m, &m).unwrap();
        // End(R_R) = R acting by left multiplication
        assert_eq!(c, 8);
        assert_eq!(c, brute_hom_count(&m, &m));
    }

    #[test]
    fn enumerate_and_isomorphism() {
        let r = zring(4);
        let m = regular_module(&r);
        let homs = enumerate_homs(&m, &m, &Caps::default()).unwrap();
        assert_eq!(homs.len(), 4);
        let iso = find_isomorphism(&m, &m, &Caps::default()).unwrap();
        assert!(iso.is_some());
        // Z/2 and Z/4-regular are not isomorphic
        let s = m.sub_as_module(&m.generated_submodule(&[2])).module;
        assert!(find_isomorphism(&s, &m, &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn factorization_and_extension() {
        // M = Z/4, A = 2Z/4, f: A -> Z/2 iso; f extends to M -> Z/2?
        // h(x) = x mod 2 restricted to A gives h(2) = 0 != f(2) = 1, but
        // extension h(1) must satisfy 2h(1) = f(2) = 1 in Z/2 => impossible.
        let r = zring(4);
        let m = regular_module(&r);
        let aview = m.sub_as_module(&m.generated_submodule(&[2]));
        let a = &aview.module;
        // simple module T = Z/2 as quotient M / 2M
        let t = m.quotient(&m.generated_submodule(&[2])).module;
        // f: A -> T sending 2 -> 1 (the nonzero class)
        let f = ModuleHom::new(a.clone(), t.clone(), vec![0, 1]).unwrap();
        let ext = extend_along_inclusion(&m, &aview, &f).unwrap();
        assert!(ext.is_none(), "Z/4 -> Z/2 cannot restrict to an iso on soc");
        // but the zero map on A extends (by zero)
        let z = ModuleHom::new(a.clone(), t.clone(), vec![0, 0]).unwrap();
        assert!(extend_along_inclusion(&m, &aview, &z).unwrap().is_some());
        // and f: A -> M (inclusion) extends to identity
        let incl = ModuleHom::new(a.clone(), m.clone(), aview.elems.clone()).unwrap();
        let ext = extend_along_inclusion(&m, &aview, &incl).unwrap();
        assert!(ext.is_some());
    }

    #[test]
    fn factor_through_surjection() {
        // N = Z/4, u: N -> N/soc = C, f: N -> Z/2. f factors through u iff
        // f kills soc.
        let r = zring(4);
        let n = regular_module(&r);
        let soc = n.generated_submodule(&[2]);
        let q = n.quotient(&soc);
        let u = ModuleHom::new(n.clone(), q.module.clone(), q.proj.clone()).unwrap();
        let f = ModuleHom::new(n.clone(), q.module.clone(), q.proj.clone()).unwrap();
        assert!(factor_through(&u, &f).unwrap().is_some());
        // f = identity N -> N does not factor through the quotient
        let idf = ModuleHom::new(n.clone(), n.clone(), (0..4).collect()).unwrap();
        assert!(factor_through(&u, &idf).unwrap().is_none());
    }
}
