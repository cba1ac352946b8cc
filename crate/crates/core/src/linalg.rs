//! Exact dense linear algebra over ℚ and the double-description cone solver.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// Reduces `m` (rows × `ncols`) to reduced row echelon form in place and
/// returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Rat>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot = m[row].clone();
        for (r, target) in m.iter_mut().enumerate() {
            if r != row && !target[col].is_zero() {
                let f = target[col].clone();
                for (x, p) in target.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

pub fn rank(rows: &[Vec<Rat>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : rows · x = 0}`.
pub fn null_space(rows: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= &a[col][col];
        let inv = a[col][col].recip();
        let pivot = a[col].clone();
        for target in a.iter_mut().skip(col + 1) {
            if target[col].is_zero() {
                continue;
            }
            let f = &target[col] * &inv;
            for (x, p) in target.iter_mut().zip(&pivot).skip(col) {
                *x -= &f * p;
            }
        }
    }
    det
}

pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
        .collect()
}

/// Row-major product `a · b`.
pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(b).fold(Rat::zero(), |acc, (x, brow)| acc + x * &brow[j]))
                .collect()
        })
        .collect()
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains_all(&self, sub: &Bits) -> bool {
        self.0.iter().zip(&sub.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    zeros: Bits,
}

/// Extreme rays (as primitive integer vectors) of the pointed cone
/// `{y ∈ ℚᵈ : ⟨row, y⟩ ≥ 0 for every row}`.
///
/// Returns `None` when the rows do not have rank `d` (the cone is not pointed).
pub fn extreme_rays(rows: &[Vec<BigInt>], d: usize) -> Option<Vec<Vec<BigInt>>> {
    let m = rows.len();
    // Pick d independent rows greedily.
    let mut basis = Vec::with_capacity(d);
    let mut echelon: Vec<Vec<Rat>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut cand = echelon.clone();
        cand.push(row.iter().map(|x| Rat::from_integer(x.clone())).collect());
        let r = rank(&cand, d);
        if r > echelon.len() {
            rref(&mut cand, d);
            echelon = cand;
            basis.push(i);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return None;
    }
    let a_b: Vec<Vec<Rat>> = basis
        .iter()
        .map(|&i| rows[i].iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    let inv = inverse(&a_b).expect("basis rows are independent");
    let mut rays: Vec<Ray> = (0..d)
        .map(|j| {
            let col: Vec<Rat> = (0..d).map(|r| inv[r][j].clone()).collect();
            let v = crate::rational::primitive_integer(&col);
            let mut zeros = Bits::new(m);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    zeros.set(bi);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    let in_basis: Vec<bool> = (0..m).map(|i| basis.contains(&i)).collect();
    let mut processed = basis.len();
    for i in 0..m {
        if in_basis[i] {
            continue;
        }
        let row = &rows[i];
        let vals: Vec<BigInt> = rays.iter().map(|r| int_dot(row, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        processed += 1;
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if vals[k].is_zero() {
                    r.zeros.set(i);
                }
            }
            continue;
        }
        let mut new_rays = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !r.zeros.contains_all(&common));
                if !adjacent {
                    continue;
                }
                // vals[p] > 0 > vals[q]: the combination is zero on row i.
                let mut v: Vec<BigInt> = rays[p]
                    .v
                    .iter()
                    .zip(&rays[q].v)
                    .map(|(a, b)| &vals[p] * b - &vals[q] * a)
                    .collect();
                make_primitive(&mut v);
                let mut zeros = common;
                zeros.set(i);
                new_rays.push(Ray { v, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if vals[k].is_negative() {
                continue;
            }
            if vals[k].is_zero() {
                r.zeros.set(i);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }
    debug_assert_eq!(processed, m);
    Some(rays.into_iter().map(|r| r.v).collect())
}
