//! Dense linear algebra over a small prime field `F_q`.

use crate::arith::{inv_mod, mul_mod};

#[derive(Debug, Clone, Copy)]
pub struct Field {
    pub q: u64,
}

impl Field {
    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.q - b) % self.q
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.q)
    }

    pub fn inv(self, a: u64) -> u64 {
        inv_mod(a, self.q).expect("nonzero element of a prime field")
    }

    pub fn from_i64(self, a: i64) -> u64 {
        a.rem_euclid(self.q as i64) as u64
    }
}

/// Row-reduces `rows` in place into reduced echelon form; returns the pivot columns.
/// Zero rows are dropped.
pub fn rref(f: Field, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{v : A v = 0}` for a square matrix `A`, as vectors.
pub fn nullspace(f: Field, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = a.first().map_or(0, Vec::len);
    let mut rows = a.to_vec();
    let pivots = rref(f, &mut rows);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; n];
            v[fc] = 1;
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = f.sub(0, row[fc]);
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(xI - A)`, ascending coefficients, via Hessenberg reduction.
pub fn charpoly(f: Field, a: &[Vec<u64>]) -> Vec<u64> {
    let n = a.len();
    let mut h = a.to_vec();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else {
            continue;
        };
        if i != j + 1 {
            h.swap(i, j + 1);
            for row in h.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let inv = f.inv(h[j + 1][j]);
        for r in j + 2..n {
            let u = f.mul(h[r][j], inv);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let t = f.mul(u, h[j + 1][c]);
                h[r][c] = f.sub(h[r][c], t);
            }
            for row in h.iter_mut() {
                let t = f.mul(u, row[r]);
                row[j + 1] = f.add(row[j + 1], t);
            }
        }
    }
    // p[m] = charpoly of the leading m×m block
    let mut p: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let mm = m - 1;
        // (x - h[mm][mm]) * p[m-1]
        let prev = &p[m - 1];
        let mut next = vec![0; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = f.add(next[d + 1], c);
            next[d] = f.sub(next[d], f.mul(h[mm][mm], c));
        }
        let mut prod = 1;
        for i in (0..mm).rev() {
            prod = f.mul(prod, h[i + 1][i]);
            let coef = f.mul(h[i][mm], prod);
            if coef != 0 {
                for (d, &c) in p[i].iter().enumerate() {
                    next[d] = f.sub(next[d], f.mul(coef, c));
                }
            }
        }
        p.push(next);
    }
    p.pop().unwrap()
}

/// All roots of `poly` in `F_q`, ascending, by exhaustive evaluation.
pub fn roots(f: Field, poly: &[u64]) -> Vec<u64> {
    (0..f.q)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)) == 0)
        .collect()
}
