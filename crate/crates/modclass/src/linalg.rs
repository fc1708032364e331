//! Linear algebra over Z/m for small m.
//!
//! The single workhorse is a diagonalization `D = U * A * V` computed with
//! invertible row and column operations mod m (Smith-style, but the diagonal
//! is not normalized to divisibility order — solving and kernel extraction
//! only need a diagonal). All hom-space solving, abelian-group basis
//! computation, subgroup orders and membership tests reduce to it.

/// Dense row-major matrix over Z/m.
#[derive(Debug, Clone)]
pub struct MatMod {
    pub rows: usize,
    pub cols: usize,
    pub m: u64,
    pub data: Vec<u64>,
}

impl MatMod {
    pub fn zero(rows: usize, cols: usize, m: u64) -> Self {
        MatMod {
            rows,
            cols,
            m,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.m;
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn red(x: i128, m: u64) -> u64 {
    (x.rem_euclid(m as i128)) as u64
}

/// Result of diagonalizing `A` over Z/m: `diag` holds the pivot values,
/// `v` maps new coordinates to old (`x = V y`), `uinv` maps new row basis to
/// old, `b` is the transformed right-hand side `U b`.
pub struct Diag {
    pub m: u64,
    pub rows: usize,
    pub cols: usize,
    pub npiv: usize,
    pub diag: Vec<u64>,
    pub v: MatMod,
    pub uinv: Option<MatMod>,
    pub b: Option<Vec<u64>>,
}

/// Diagonalize `a` in place with invertible row/column ops mod m.
///
/// Row ops are mirrored onto `b` (so it becomes `U b`) and, inversely, onto
/// `uinv` columns (so `uinv` stays `U^{-1}`). Column ops are mirrored onto
/// `v` (so `v` stays the accumulated column transform).
pub fn diagonalize(mut a: MatMod, b: Option<Vec<u64>>, track_uinv: bool) -> Diag {
    let m = a.m;
    let rows = a.rows;
    let cols = a.cols;
    let mut v = MatMod::zero(cols, cols, m.max(1));
    for i in 0..cols {
        v.data[i * cols + i] = 1 % m.max(1);
    }
    let mut uinv = if track_uinv {
        let mut u = MatMod::zero(rows, rows, m.max(1));
        for i in 0..rows {
            u.data[i * rows + i] = 1 % m.max(1);
        }
        Some(u)
    } else {
        None
    };
    let mut bb = b;

    if m <= 1 {
        // Trivial modulus: everything is zero.
        return Diag {
            m,
            rows,
            cols,
            npiv: 0,
            diag: vec![],
            v,
            uinv,
            b: bb,
        };
    }
    for x in a.data.iter_mut() {
        *x %= m;
    }

    // Apply 2x2 row transform [[p,q],[r,s]] (det 1) to rows r1, r2 of `a`,
    // to `b`, and the inverse [[s,-q],[-r,p]] to columns r1, r2 of `uinv`.
    let row_op = |a: &mut MatMod,
                  bb: &mut Option<Vec<u64>>,
                  uinv: &mut Option<MatMod>,
                  r1: usize,
                  r2: usize,
                  p: i128,
                  q: i128,
                  r: i128,
                  s: i128| {
        for c in 0..cols {
            let x = a.at(r1, c) as i128;
            let y = a.at(r2, c) as i128;
            a.set(r1, c, red(p * x + q * y, m));
            a.set(r2, c, red(r * x + s * y, m));
        }
        if let Some(b) = bb.as_mut() {
            let x = b[r1] as i128;
            let y = b[r2] as i128;
            b[r1] = red(p * x + q * y, m);
            b[r2] = red(r * x + s * y, m);
        }
        if let Some(u) = uinv.as_mut() {
            // uinv <- uinv * [[p,q],[r,s]]^{-1}, acting on columns r1, r2.
            for k in 0..rows {
                let x = u.at(k, r1) as i128;
                let y = u.at(k, r2) as i128;
                u.set(k, r1, red(s * x - r * y, m));
                u.set(k, r2, red(-q * x + p * y, m));
            }
        }
    };
    let col_op = |a: &mut MatMod, v: &mut MatMod, c1: usize, c2: usize, p: i128, q: i128, r: i128, s: i128| {
        for k in 0..rows {
            let x = a.at(k, c1) as i128;
            let y = a.at(k, c2) as i128;
            a.set(k, c1, red(p * x + r * y, m));
            a.set(k, c2, red(q * x + s * y, m));
        }
        for k in 0..cols {
            let x = v.at(k, c1) as i128;
            let y = v.at(k, c2) as i128;
            v.set(k, c1, red(p * x + r * y, m));
            v.set(k, c2, red(q * x + s * y, m));
        }
    };

    let mut diag = Vec::new();
    let mut t = 0usize;
    while t < rows && t < cols {
        // Pivot: entry minimizing gcd with m over the submatrix.
        let mut best: Option<(usize, usize, u64)> = None;
        'scan: for i in t..rows {
            for j in t..cols {
                let val = a.at(i, j);
                if val == 0 {
                    continue;
                }
                let g = gcd(val, m);
                if best.map_or(true, |(_, _, bg)| g < bg) {
                    best = Some((i, j, g));
                    if g == 1 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        // Swaps as det-1 transforms so the uinv bookkeeping stays valid.
        if pi != t {
            row_op(&mut a, &mut bb, &mut uinv, t, pi, 0, 1, -1, 0);
        }
        if pj != t {
            col_op(&mut a, &mut v, t, pj, 0, 1, -1, 0);
        }
        loop {
            // Clear column t below the pivot. When the pivot divides the
            // entry, plain elimination leaves the pivot row untouched; the
            // ext_gcd transform is only used otherwise, where it strictly
            // decreases the pivot — this is what guarantees termination of
            // the clear-column/clear-row alternation.
            for i in t + 1..rows {
                let bval = a.at(i, t) as i128;
                if bval == 0 {
                    continue;
                }
                let aval = a.at(t, t) as i128;
                if bval % aval == 0 {
                    row_op(&mut a, &mut bb, &mut uinv, t, i, 1, 0, -(bval / aval), 1);
                } else {
                    let (g, p, q) = ext_gcd(aval, bval);
                    row_op(&mut a, &mut bb, &mut uinv, t, i, p, q, -bval / g, aval / g);
                }
            }
            // Clear row t right of the pivot (may dirty the column again).
            for j in t + 1..cols {
                let bval = a.at(t, j) as i128;
                if bval == 0 {
                    continue;
                }
                let aval = a.at(t, t) as i128;
                if bval % aval == 0 {
                    col_op(&mut a, &mut v, t, j, 1, -(bval / aval), 0, 1);
                } else {
                    let (g, p, r) = ext_gcd(aval, bval);
                    col_op(&mut a, &mut v, t, j, p, -bval / g, r, aval / g);
                }
            }
            let col_clear = (t + 1..rows).all(|i| a.at(i, t) == 0);
            let row_clear = (t + 1..cols).all(|j| a.at(t, j) == 0);
            if col_clear && row_clear {
                break;
            }
        }
        diag.push(a.at(t, t));
        t += 1;
    }

    Diag {
        m,
        rows,
        cols,
        npiv: diag.len(),
        diag,
        v,
        uinv,
        b: bb,
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl Diag {
    /// Generators of `{x in (Z/m)^cols : A x = 0}`.
    pub fn kernel_gens(&self) -> Vec<Vec<u64>> {
        let mut gens = Vec::new();
        if self.m <= 1 {
            return gens;
        }
        for t in 0..self.cols {
            let scale = if t < self.npiv {
                let g = gcd(self.diag[t], self.m);
                if g == 1 {
                    continue;
                }
                self.m / g
            } else {
                1
            };
            let mut x = vec![0u64; self.cols];
            for k in 0..self.cols {
                x[k] = mul_mod(self.v.at(k, t), scale, self.m);
            }
            if x.iter().any(|&e| e != 0) {
                gens.push(x);
            }
        }
        gens
    }

    /// Number of solutions of `A x = 0` in `(Z/m)^cols`.
    pub fn solution_count(&self) -> u128 {
        if self.m <= 1 {
            return 1;
        }
        let mut n: u128 = 1;
        for t in 0..self.cols {
            if t < self.npiv {
                n *= gcd(self.diag[t], self.m) as u128;
            } else {
                n *= self.m as u128;
            }
        }
        n
    }

    /// One solution of `A x = b` in `(Z/m)^cols`, if any.
    pub fn particular(&self) -> Option<Vec<u64>> {
        if self.m <= 1 {
            return Some(vec![0; self.cols]);
        }
        let b = self.b.as_ref().expect("diagonalize was called without b");
        let mut y = vec![0u64; self.cols];
        for t in 0..self.rows {
            let rhs = b[t];
            if t < self.npiv && t < self.cols {
                let d = self.diag[t];
                let g = gcd(d, self.m);
                if rhs % g != 0 {
                    return None;
                }
                // Solve d*y = rhs mod m.
                let m2 = self.m / g;
                let (_, inv, _) = ext_gcd((d / g) as i128, m2 as i128);
                y[t] = if m2 == 1 {
                    0
                } else {
                    mul_mod(rhs / g % m2, red(inv, m2), m2)
                };
            } else if rhs != 0 {
                return None;
            }
        }
        let mut x = vec![0u64; self.cols];
        for k in 0..self.cols {
            let mut acc: u128 = 0;
            for t in 0..self.cols {
                if y[t] != 0 {
                    acc += self.v.at(k, t) as u128 * y[t] as u128;
                }
            }
            x[k] = (acc % self.m as u128) as u64;
        }
        Some(x)
    }
}
