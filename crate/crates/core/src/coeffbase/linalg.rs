use alloc::vec::Vec;

use super::{FqElem, FqField};

/// Row-reduces in place and returns the pivot columns.
fn echelon(m: &mut [Vec<FqElem>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].inv().expect("nonzero pivot");
        for c in col..m[row].len() {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..m[r].len() {
                let v = m[row][c].mul(&factor);
                m[r][c] = m[r][c].sub(&v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a matrix over `F_q` given as rows of equal length.
pub fn rank(rows: &[Vec<FqElem>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut m = rows.to_vec();
    echelon(&mut m, cols).len()
}

/// Solves `A x = b`, returning the solution whose free variables are zero.
pub fn solve_affine(field: &FqField, a: &[Vec<FqElem>], b: &[FqElem]) -> Option<Vec<FqElem>> {
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<FqElem>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m, cols);
    for row in m.iter().skip(pivots.len()) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    let mut x = alloc::vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : A x = 0}` for an `rows × cols` matrix.
pub fn nullspace(field: &FqField, a: &[Vec<FqElem>], cols: usize) -> Vec<Vec<FqElem>> {
    let mut m = a.to_vec();
    let pivots = echelon(&mut m, cols);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut x = alloc::vec![field.zero(); cols];
        x[free] = field.one();
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = m[r][free].neg();
        }
        basis.push(x);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_solve() {
        let f = FqField::prime(3).unwrap();
        let e = |v: &[i64]| v.iter().map(|&x| f.from_int(x)).collect::<Vec<_>>();
        let a = alloc::vec![e(&[1, 2, 0]), e(&[2, 1, 0]), e(&[0, 0, 1])];
        assert_eq!(rank(&a), 2);
        let b = e(&[1, 2, 2]);
        let x = solve_affine(&f, &a, &b).unwrap();
        let kernel = nullspace(&f, &a, 3);
        assert_eq!(kernel.len(), 1);
        for row in &a {
            let dot = row.iter().zip(&kernel[0]).fold(f.zero(), |acc, (x, y)| acc.add(&x.mul(y)));
            assert!(dot.is_zero());
        }
        for (row, bi) in a.iter().zip(&b) {
            let s = row.iter().zip(&x).fold(f.zero(), |acc, (r, xi)| acc.add(&r.mul(xi)));
            assert_eq!(&s, bi);
        }
        assert!(solve_affine(&f, &a, &e(&[1, 1, 0])).is_none());
    }
}
