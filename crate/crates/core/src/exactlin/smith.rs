//! Smith normal form with column transform tracking.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ext_gcd;

/// `U * A * V = diag(diagonal)` for some unimodular `U`.
///
/// Only the column transform is kept: for `u` in `Z^n`, coordinate `k` of
/// `u * right` (taken mod `diagonal[k]`) identifies the class of `u` in the
/// cokernel, and row `k` of `right_inverse` is a representative of the `k`-th
/// cyclic generator.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub right: Vec<Vec<BigInt>>,
    pub right_inverse: Vec<Vec<BigInt>>,
}

pub fn smith_form(ncols: usize, rows: &[Vec<BigInt>]) -> SmithForm {
    let mut w = Work::new(ncols, rows, true);
    w.run();
    SmithForm {
        diagonal: w.diagonal(),
        right: w.v.expect("tracking enabled"),
        right_inverse: w.vinv.expect("tracking enabled"),
    }
}

/// Nonzero diagonal entries only, positive and forming a divisibility chain.
pub(crate) fn smith_diagonal(ncols: usize, rows: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut w = Work::new(ncols, rows, false);
    w.run();
    w.diagonal()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    ncols: usize,
    rank: usize,
    v: Option<Vec<Vec<BigInt>>>,
    vinv: Option<Vec<Vec<BigInt>>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Bezout data for eliminating `y` against the pivot `x`. When `x | y` this
/// is plain subtraction, so an entry the pivot already divides never
/// disturbs the pivot's row or column.
fn pivot_gcd(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, BigInt) {
    if (y % x).is_zero() {
        (x.clone(), BigInt::one(), BigInt::zero())
    } else {
        ext_gcd(x, y)
    }
}

impl Work {
    fn new(ncols: usize, rows: &[Vec<BigInt>], track: bool) -> Self {
        let a: Vec<Vec<BigInt>> = rows
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        Work {
            a,
            ncols,
            rank: 0,
            v: track.then(|| identity(ncols)),
            vinv: track.then(|| identity(ncols)),
        }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|k| self.a[k][k].clone()).collect()
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        if let Some(v) = self.v.as_mut() {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
        if let Some(vi) = self.vinv.as_mut() {
            vi.swap(i, j);
        }
    }

    /// Row operation zeroing `a[i][t]` against `a[t][t]`.
    fn row_gcd(&mut self, t: usize, i: usize) {
        let x = self.a[t][t].clone();
        let y = self.a[i][t].clone();
        let (g, s, u) = pivot_gcd(&x, &y);
        let (xg, yg) = (&x / &g, &y / &g);
        for k in t..self.ncols {
            let (rt, ri) = (self.a[t][k].clone(), self.a[i][k].clone());
            self.a[t][k] = &s * &rt + &u * &ri;
            self.a[i][k] = &xg * &ri - &yg * &rt;
        }
    }

    /// Column operation zeroing `a[t][j]` against `a[t][t]`.
    fn col_gcd(&mut self, t: usize, j: usize) {
        let x = self.a[t][t].clone();
        let y = self.a[t][j].clone();
        let (g, s, u) = pivot_gcd(&x, &y);
        let (xg, yg) = (&x / &g, &y / &g);
        for r in self.a.iter_mut().skip(t) {
            let (ct, cj) = (r[t].clone(), r[j].clone());
            r[t] = &s * &ct + &u * &cj;
            r[j] = &xg * &cj - &yg * &ct;
        }
        if let Some(v) = self.v.as_mut() {
            for r in v.iter_mut() {
                let (ct, cj) = (r[t].clone(), r[j].clone());
                r[t] = &s * &ct + &u * &cj;
                r[j] = &xg * &cj - &yg * &ct;
            }
        }
        if let Some(vi) = self.vinv.as_mut() {
            for k in 0..self.ncols {
                let (rt, rj) = (vi[t][k].clone(), vi[j][k].clone());
                vi[t][k] = &xg * &rt + &yg * &rj;
                vi[j][k] = &s * &rj - &u * &rt;
            }
        }
    }

    fn run(&mut self) {
        let nrows = self.a.len();
        let mut t = 0;
        while t < nrows.min(self.ncols) {
            // smallest nonzero entry of the remaining block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..self.ncols {
                    let e = &self.a[i][j];
                    if !e.is_zero() && best.is_none_or(|(bi, bj)| e.abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            self.a.swap(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..nrows {
                    if !self.a[i][t].is_zero() {
                        self.row_gcd(t, i);
                    }
                }
                for j in t + 1..self.ncols {
                    if !self.a[t][j].is_zero() {
                        self.col_gcd(t, j);
                    }
                }
                if (t + 1..nrows).any(|i| !self.a[i][t].is_zero()) {
                    continue;
                }
                let h = self.a[t][t].clone();
                let bad = (t + 1..nrows).find(|&i| (t + 1..self.ncols).any(|j| !(&self.a[i][j] % &h).is_zero()));
                match bad {
                    Some(i) => {
                        for k in t..self.ncols {
                            let add = self.a[i][k].clone();
                            self.a[t][k] += add;
                        }
                    }
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                for x in self.a[t].iter_mut() {
                    *x = -&*x;
                }
            }
            t += 1;
        }
        self.rank = t;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matmul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b[0].len();
        a.iter()
            .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, row)| x * &row[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn terminates_when_the_pivot_divides() {
        let rows: Vec<Vec<BigInt>> = [[4i64, 3, -4], [5, 4, 0], [-8, 7, 0]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(smith_diagonal(3, &rows), vec![BigInt::one(), BigInt::one(), BigInt::from(268)]);
    }

    #[test]
    fn transforms_are_inverse() {
        let rows: Vec<Vec<BigInt>> = [[4i64, 6, 2], [8, 2, 10], [0, 12, 6]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let sf = smith_form(3, &rows);
        assert_eq!(matmul(&sf.right, &sf.right_inverse), identity(3));
        // divisibility chain
        for w in sf.diagonal.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        // every row of A*V is supported on the diagonal positions
        let av = matmul(&rows, &sf.right);
        for r in &av {
            for (k, x) in r.iter().enumerate() {
                if k < sf.diagonal.len() {
                    assert!((x % &sf.diagonal[k]).is_zero());
                } else {
                    assert!(x.is_zero());
                }
            }
        }
    }
}
