//! Integer normal forms: Smith normal form with unimodular transforms,
//! row Hermite form, and integer kernels.
//!
//! Kernels computed through the Hermite form are automatically saturated:
//! the kernel rows are rows of a unimodular matrix, so they generate a
//! direct summand of the ambient module.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::mat::{div_round, IntMat};

/// Decomposition u·m·v = d with det(u), det(v) = ±1 and d diagonal,
/// entries non-negative, each dividing the next.
pub struct Snf {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// Diagonal entries of d, in order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Pivot choice: smallest absolute value among the nonzero entries of the
/// trailing submatrix, ties broken by lowest (row, column).
fn pick_pivot(m: &IntMat, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            if m[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if m[(b.0, b.1)].magnitude() <= m[(i, j)].magnitude() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMat) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMat::identity(rows);
    let mut v = IntMat::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = pick_pivot(&d, t) else {
            break; // trailing submatrix is zero
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // Clear column t below the pivot and row t right of it. Reduction can
        // leave remainders smaller than the pivot; when it does, a smaller
        // entry is moved into the pivot slot and the pass repeats. The pivot
        // magnitude strictly decreases, so this terminates.
        loop {
            let mut col_clear = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -div_round(&d[(i, t)], &d[(t, t)]);
                d.row_axpy(i, t, &q);
                u.row_axpy(i, t, &q);
                if !d[(i, t)].is_zero() {
                    col_clear = false;
                }
            }
            if !col_clear {
                // A remainder survived; it is strictly smaller than the pivot.
                let i = (t + 1..rows)
                    .filter(|&i| !d[(i, t)].is_zero())
                    .min_by_key(|&i| d[(i, t)].magnitude().clone())
                    .expect("nonzero remainder exists");
                d.swap_rows(t, i);
                u.swap_rows(t, i);
                continue;
            }
            let mut row_clear = true;
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -div_round(&d[(t, j)], &d[(t, t)]);
                d.col_axpy(j, t, &q);
                v.col_axpy(j, t, &q);
                if !d[(t, j)].is_zero() {
                    row_clear = false;
                }
            }
            if !row_clear {
                let j = (t + 1..cols)
                    .filter(|&j| !d[(t, j)].is_zero())
                    .min_by_key(|&j| d[(t, j)].magnitude().clone())
                    .expect("nonzero remainder exists");
                d.swap_cols(t, j);
                v.swap_cols(t, j);
                continue; // the column may be dirty again
            }
            break;
        }
        t += 1;
    }
    let rank = t;

    // Sign normalization: diagonal entries non-negative.
    for i in 0..rank {
        if d[(i, i)].is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }

    // Divisibility chain. Replacing (a, b) by (gcd, lcm) through 2×2
    // unimodular pairs; one double pass suffices since later steps only
    // shrink earlier entries' divisors.
    for i in 0..rank {
        for j in i + 1..rank {
            let a = d[(i, i)].clone();
            let b = d[(j, j)].clone();
            if b.is_multiple_of(&a) {
                continue;
            }
            let e = a.extended_gcd(&b);
            let g = e.gcd; // > 0 here since a > 0
            let ap = &a / &g;
            let bp = &b / &g;
            // P = [[s, t], [−b/g, a/g]], Q = [[1, −t·b/g], [1, s·a/g]]
            // P·diag(a,b)·Q = diag(g, ab/g); det P = det Q = 1.
            d.combine_rows(i, j, &e.x, &e.y, &(-&bp), &ap);
            u.combine_rows(i, j, &e.x, &e.y, &(-&bp), &ap);
            let q01 = -(&e.y * &bp);
            let q11 = &e.x * &ap;
            d.combine_cols(i, j, &BigInt::from(1), &q01, &BigInt::from(1), &q11);
            v.combine_cols(i, j, &BigInt::from(1), &q01, &BigInt::from(1), &q11);
        }
    }

    Snf { u, d, v }
}

/// Row Hermite form h = u·m: u unimodular, pivots positive, entries above
/// each pivot reduced into [0, pivot), zero rows at the bottom.
pub struct RowHnf {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
}

pub fn row_hnf(m: &IntMat) -> RowHnf {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMat::identity(rows);
    let mut r = 0;

    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-reduce column c on rows r..
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by_key(|&i| h[(i, c)].magnitude().clone())
            else {
                break;
            };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -div_round(&h[(i, c)], &h[(r, c)]);
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue; // no pivot in this column
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
            }
        }
        r += 1;
    }

    RowHnf { h, u, rank: r }
}

/// Basis of {x : x·m = 0} as rows; saturated by construction.
pub fn left_kernel(m: &IntMat) -> Vec<Vec<BigInt>> {
    let hnf = row_hnf(m);
    (hnf.rank..m.rows()).map(|i| hnf.u.row(i).to_vec()).collect()
}

/// Whether x lies in the integer row-span of the given rows.
pub fn integer_span_contains(rows: &[Vec<BigInt>], x: &[BigInt]) -> bool {
    if rows.is_empty() {
        return x.iter().all(BigInt::is_zero);
    }
    let m = IntMat::from_rows(rows.to_vec());
    assert_eq!(m.cols(), x.len(), "vector length differs from row length");
    let hnf = row_hnf(&m);
    let mut rem: Vec<BigInt> = x.to_vec();
    let mut row = 0;
    for c in 0..m.cols() {
        if row < hnf.rank && !hnf.h[(row, c)].is_zero() {
            let (q, r) = rem[c].div_mod_floor(&hnf.h[(row, c)]);
            if !r.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for j in 0..m.cols() {
                    let t = &q * &hnf.h[(row, j)];
                    rem[j] -= t;
                }
            }
            row += 1;
        } else if !rem[c].is_zero() {
            return false;
        }
    }
    rem.iter().all(BigInt::is_zero)
}
