//! Dense linear algebra over F_2 on small matrices. Vectors are `Vec<u8>`
//! with entries 0 or 1.

use alloc::vec;
use alloc::vec::Vec;

pub type Vector = Vec<u8>;

pub fn add(a: &[u8], b: &[u8]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |acc, (x, y)| acc ^ (x & y))
}

pub fn is_zero(a: &[u8]) -> bool {
    a.iter().all(|&x| x == 0)
}

pub fn weight(a: &[u8]) -> usize {
    a.iter().filter(|&&x| x == 1).count()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector], ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && m[i][c] == 1 {
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pr) {
                    *x ^= y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}`, one vector per free column, each with a 1
/// in its free column and zeros in the other free columns.
pub fn kernel(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (m, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u8; ncols];
        v[f] = 1;
        for (row, &p) in m.iter().zip(&pivots) {
            if row[f] == 1 {
                v[p] = 1;
            }
        }
        out.push(v);
    }
    out
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(basis: &[Vector], v: &[u8]) -> bool {
    let n = v.len();
    let r = rank(basis, n);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank(&ext, n) == r
}

/// Coefficients `c` with `Σ c_i basis_i = v`, if any.
pub fn solve(basis: &[Vector], v: &[u8]) -> Option<Vector> {
    // Solve B^T c = v by elimination on the augmented transpose.
    let n = v.len();
    let k = basis.len();
    let rows: Vec<Vector> = (0..n)
        .map(|j| {
            let mut r: Vector = basis.iter().map(|b| b[j]).collect();
            r.push(v[j]);
            r
        })
        .collect();
    let (m, pivots) = rref(&rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = vec![0u8; k];
    for (row, &p) in m.iter().zip(&pivots) {
        c[p] = row[k];
    }
    Some(c)
}

/// Whether two lists of vectors span the same subspace.
pub fn same_span(a: &[Vector], b: &[Vector], n: usize) -> bool {
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    let r = rank(&all, n);
    rank(a, n) == r && rank(b, n) == r
}

/// All vectors in the span of `basis` (at most `2^basis.len()`).
pub fn span_elements(basis: &[Vector], n: usize) -> Vec<Vector> {
    let (m, _) = rref(basis, n);
    let mut out = vec![vec![0u8; n]];
    for b in &m {
        let extra: Vec<Vector> = out.iter().map(|v| add(v, b)).collect();
        out.extend(extra);
    }
    out
}

/// Minimum-weight representative of `v + span(basis)`; ties go to the vector
/// whose support starts earliest.
pub fn min_coset_rep(v: &[u8], basis: &[Vector]) -> Vector {
    let n = v.len();
    span_elements(basis, n)
        .iter()
        .map(|s| add(v, s))
        .min_by(|x, y| weight(x).cmp(&weight(y)).then_with(|| y.cmp(x)))
        .expect("span is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_five_classes() {
        // columns: five classes over atoms a, b, c, b-1, a-bc, a-b^2c
        let cols: [[u8; 6]; 5] = [
            [1, 1, 1, 0, 0, 0],
            [1, 1, 1, 0, 0, 0],
            [1, 0, 1, 1, 1, 0],
            [1, 1, 1, 1, 0, 1],
            [0, 1, 0, 0, 1, 1],
        ];
        let rows: Vec<Vector> = (0..6).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let k = kernel(&rows, 5);
        assert_eq!(k, vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1]]);
    }

    #[test]
    fn solve_and_span() {
        let b = vec![vec![1, 1, 0], vec![0, 1, 1]];
        assert_eq!(solve(&b, &[1, 0, 1]), Some(vec![1, 1]));
        assert!(solve(&b, &[1, 0, 0]).is_none());
        assert_eq!(span_elements(&b, 3).len(), 4);
        assert_eq!(min_coset_rep(&[1, 1, 1], &b), vec![1, 0, 0]);
    }
}
