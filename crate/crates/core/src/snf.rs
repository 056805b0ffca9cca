//! Smith normal form over the integers with exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<BigInt>>;

/// `left · A · right = D` with `D` diagonal and `d₁ | d₂ | …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// `min(rows, cols)` nonnegative diagonal entries.
    pub diagonal: Vec<BigInt>,
    pub left: Matrix,
    pub right: Matrix,
    /// Inverse of `right`.
    pub right_inverse: Matrix,
}

impl SmithForm {
    /// The diagonal as `u64`, failing if an entry does not fit.
    pub fn invariant_factors(&self) -> Result<Vec<u64>> {
        self.diagonal
            .iter()
            .map(|d| {
                u64::try_from(d).map_err(|_| Error::resource("invariant factor bits", d.bits() as u128, 64))
            })
            .collect()
    }
}

pub fn to_big(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn multiply(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

struct Work {
    a: Matrix,
    left: Matrix,
    right: Matrix,
    right_inv: Matrix,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.left.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.right.iter_mut()) {
            row.swap(i, j);
        }
        self.right_inv.swap(i, j);
    }

    /// row `dst` -= k · row `src`
    fn sub_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.left] {
            let (s, d) = pick(m, src, dst);
            for (x, y) in d.iter_mut().zip(s.iter()) {
                *x -= k * y;
            }
        }
    }

    /// col `dst` -= k · col `src`
    fn sub_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for m in [&mut self.a, &mut self.right] {
            for row in m.iter_mut() {
                let v = k * &row[src];
                row[dst] -= v;
            }
        }
        // inverse transform: row src of right_inv += k · row dst
        let (d, s) = pick(&mut self.right_inv, dst, src);
        for (x, y) in s.iter_mut().zip(d.iter()) {
            *x += k * y;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.left] {
            for x in m[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

/// Borrows row `src` immutably and row `dst` mutably.
fn pick(m: &mut Matrix, src: usize, dst: usize) -> (&Vec<BigInt>, &mut Vec<BigInt>) {
    assert_ne!(src, dst);
    if src < dst {
        let (lo, hi) = m.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    }
}

/// Computes the Smith normal form of a `rows × cols` matrix and verifies
/// `left · A · right = D` exactly.
pub fn smith_normal_form(matrix: &Matrix, cols: usize) -> Result<SmithForm> {
    let rows = matrix.len();
    if matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::input("relation matrix rows have inconsistent length"));
    }
    let mut w = Work {
        a: matrix.clone(),
        left: identity(rows),
        right: identity(cols),
        right_inv: identity(cols),
    };
    let rank_bound = rows.min(cols);
    for t in 0..rank_bound {
        // smallest nonzero entry of the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.sub_row(i, t, &q);
                if !w.a[i][t].is_zero() {
                    w.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.sub_col(j, t, &q);
                if !w.a[t][j].is_zero() {
                    w.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[i][j].is_multiple_of(&w.a[t][t]));
            match offender {
                Some((i, _)) => {
                    let minus_one = -BigInt::one();
                    w.sub_row(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    let diagonal: Vec<BigInt> = (0..rank_bound).map(|i| w.a[i][i].clone()).collect();

    let product = multiply(&multiply(&w.left, matrix), &w.right);
    let diagonal_ok = product.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { *v == diagonal[i] } else { v.is_zero() })
    });
    let inverse_ok = multiply(&w.right, &w.right_inv) == identity(cols);
    let divides = diagonal.windows(2).all(|p| {
        if p[0].is_zero() {
            p[1].is_zero()
        } else {
            p[1].is_multiple_of(&p[0])
        }
    });
    if !(diagonal_ok && inverse_ok && divides) {
        return Err(Error::structural("Smith normal form verification failed"));
    }
    Ok(SmithForm {
        diagonal,
        left: w.left,
        right: w.right,
        right_inverse: w.right_inv,
    })
}

/// Invariant factors of an `i64` matrix, padded with zeros to `cols`.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Result<Vec<u64>> {
    let form = smith_normal_form(&to_big(rows), cols)?;
    let mut d = form.invariant_factors()?;
    d.resize(cols, 0);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]], 2).unwrap(), vec![1, 6]);
    }

    #[test]
    fn identity_and_zero() {
        assert_eq!(invariant_factors(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 3).unwrap(), vec![1, 1, 1]);
        assert_eq!(invariant_factors(&[vec![0, 0, 0], vec![0, 0, 0]], 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(invariant_factors(&[], 2).unwrap(), vec![0, 0]);
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = to_big(&[vec![4, 6, 2], vec![6, 9, 12], vec![2, -3, 5]]);
        let f = smith_normal_form(&a, 3).unwrap();
        let d = multiply(&multiply(&f.left, &a), &f.right);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j {
                    assert!(v.is_zero());
                }
            }
        }
        assert_eq!(multiply(&f.right_inverse, &f.right), identity(3));
    }
}
