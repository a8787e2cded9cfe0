//! Exact integer matrices: column Hermite reduction, kernels, Smith normal
//! form with transforms, and solvability of `A x = b` over Z.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, v: &[i64]) -> Self {
        assert_eq!(v.len(), rows * cols);
        IntMatrix { rows, cols, data: v.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols);
            for (j, x) in r.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] += a * b;
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (a, b) in self.data[i * self.cols..(i + 1) * self.cols].iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Columns `from..` as a new matrix.
    pub fn columns_from(&self, from: usize) -> Self {
        let mut m = Self::zero(self.rows, self.cols - from);
        for i in 0..self.rows {
            for j in from..self.cols {
                m.set(i, j - from, self.get(i, j).clone());
            }
        }
        m
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `col[a] ← p·col[a] + q·col[b]`, `col[b] ← r·col[a] + s·col[b]`.
    fn combine_cols(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for i in 0..self.rows {
            let x = self.get(i, a).clone();
            let y = self.get(i, b).clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.set(i, a, p * &x + q * &y);
            self.set(i, b, r * &x + s * &y);
        }
    }

    fn combine_rows(&mut self, a: usize, b: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
        for j in 0..self.cols {
            let x = self.get(a, j).clone();
            let y = self.get(b, j).clone();
            if x.is_zero() && y.is_zero() {
                continue;
            }
            self.set(a, j, p * &x + q * &y);
            self.set(b, j, r * &x + s * &y);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

/// `g = gcd(x, y) = p x + q y` together with the cofactors `x/g`, `y/g`.
fn bezout(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt, BigInt, BigInt) {
    // When x | y use plain subtraction, so the pivot column is left alone.
    if !x.is_zero() && (y % x).is_zero() {
        let g = x.abs();
        let p = x.signum();
        return (g.clone(), p, BigInt::zero(), x / &g, y / &g);
    }
    let e = x.extended_gcd(y);
    let mut g = e.gcd;
    let (mut p, mut q) = (e.x, e.y);
    if g.is_negative() {
        g = -g;
        p = -p;
        q = -q;
    }
    let xs = x / &g;
    let ys = y / &g;
    (g, p, q, xs, ys)
}

/// Column echelon form `A V = [H | 0]` with `V` unimodular; also returns
/// `V⁻¹` and the rank.
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let mut h = a.clone();
    let n = a.cols;
    let mut v = IntMatrix::identity(n);
    let mut vi = IntMatrix::identity(n);
    let mut r = 0;
    for i in 0..a.rows {
        if r == n {
            break;
        }
        // Gather the gcd of row i over columns r.. into column r.
        for j in r + 1..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            if h.get(i, r).is_zero() {
                h.swap_cols(r, j);
                v.swap_cols(r, j);
                vi.swap_rows(r, j);
                continue;
            }
            let (_, p, q, xs, ys) = bezout(h.get(i, r), h.get(i, j));
            // [p, -ys; q, xs] has determinant p xs + q ys = 1.
            let mys = -&ys;
            h.combine_cols(r, j, &p, &q, &mys, &xs);
            v.combine_cols(r, j, &p, &q, &mys, &xs);
            // Inverse transform on rows: [xs, ys; -q, p].
            let mq = -&q;
            vi.combine_rows(r, j, &xs, &ys, &mq, &p);
        }
        if h.get(i, r).is_zero() {
            continue;
        }
        if h.get(i, r).is_negative() {
            let m1 = -BigInt::one();
            let z = BigInt::zero();
            h.combine_cols(r, r, &m1, &z, &m1, &z);
            v.combine_cols(r, r, &m1, &z, &m1, &z);
            vi.combine_rows(r, r, &m1, &z, &m1, &z);
        }
        r += 1;
    }
    ColumnEchelon { h, v, v_inv: vi, rank: r }
}

/// Basis of the integer kernel `{x : A x = 0}`, as columns.
pub fn kernel(a: &IntMatrix) -> IntMatrix {
    let e = column_echelon(a);
    e.v.columns_from(e.rank)
}

/// Smith form `P A Q = D` with `P`, `Q` unimodular; `P⁻¹` is returned too.
pub struct Smith {
    pub diag: Vec<BigInt>,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
}

pub fn smith(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IntMatrix::identity(m);
    let mut pi = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut diag = Vec::new();
    let one = BigInt::one();
    let zero = BigInt::zero();
    for t in 0..m.min(n) {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        d.swap_rows(t, bi);
        p.swap_rows(t, bi);
        pi.swap_cols(t, bi);
        d.swap_cols(t, bj);
        q.swap_cols(t, bj);
        loop {
            let mut changed = false;
            for i in t + 1..m {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let (_, x, y, ts, is) = bezout(d.get(t, t), d.get(i, t));
                // rows: [x, y; -is, ts], inverse columns [ts, -y; is, x].
                let mis = -&is;
                d.combine_rows(t, i, &x, &y, &mis, &ts);
                p.combine_rows(t, i, &x, &y, &mis, &ts);
                let my = -&y;
                pi.combine_cols(t, i, &ts, &is, &my, &x);
                changed = true;
            }
            for j in t + 1..n {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let (_, x, y, ts, js) = bezout(d.get(t, t), d.get(t, j));
                let mjs = -&js;
                d.combine_cols(t, j, &x, &y, &mjs, &ts);
                q.combine_cols(t, j, &x, &y, &mjs, &ts);
                changed = true;
            }
            if !changed {
                // Divisibility: fold any entry not divisible by the pivot
                // into row t and repeat.
                let piv = d.get(t, t).clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(d.get(i, j) % &piv).is_zero()));
                match bad {
                    Some(i) => {
                        d.combine_rows(t, i, &one, &one, &zero, &one);
                        p.combine_rows(t, i, &one, &one, &zero, &one);
                        let m1 = -BigInt::one();
                        pi.combine_cols(t, i, &one, &zero, &m1, &one);
                    }
                    None => break,
                }
            }
        }
        if d.get(t, t).is_negative() {
            let m1 = -BigInt::one();
            d.combine_rows(t, t, &m1, &zero, &m1, &zero);
            p.combine_rows(t, t, &m1, &zero, &m1, &zero);
            pi.combine_cols(t, t, &m1, &zero, &m1, &zero);
        }
        diag.push(d.get(t, t).clone());
    }
    Smith { diag, p, p_inv: pi, q }
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    // P A Q = D, so D y = P b with x = Q y.
    let s = smith(a);
    let pb = s.p.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for (i, c) in pb.iter().enumerate() {
        match s.diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (qt, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = qt;
            }
            _ if !c.is_zero() => return None,
            _ => {}
        }
    }
    Some(s.q.mul_vec(&y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = IntMatrix::from_i64(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let s = smith(&a);
        assert_eq!(s.diag, bi(&[2, 6, 12]));
        let d = s.p.mul(&a).mul(&s.q);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i].clone() } else { BigInt::zero() };
                assert_eq!(*d.get(i, j), want);
            }
        }
        assert_eq!(s.p.mul(&s.p_inv), IntMatrix::identity(3));
    }

    #[test]
    fn kernel_and_inverse() {
        let a = IntMatrix::from_i64(2, 4, &[1, 2, 3, 4, 2, 4, 6, 9]);
        let e = column_echelon(&a);
        assert_eq!(e.rank, 2);
        assert_eq!(e.v.mul(&e.v_inv), IntMatrix::identity(4));
        let k = kernel(&a);
        assert_eq!(k.cols(), 2);
        assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn integer_solvability() {
        let a = IntMatrix::from_i64(2, 2, &[2, 0, 0, 2]);
        assert!(solve(&a, &bi(&[1, 0])).is_none());
        assert_eq!(solve(&a, &bi(&[2, 4])), Some(bi(&[1, 2])));
    }
}
