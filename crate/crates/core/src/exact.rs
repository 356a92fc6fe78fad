//! Exact rational linear algebra: elimination, kernels and a phase-one
//! simplex for small feasibility problems. Nothing here uses floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::LatticeVector;

pub type Rat = BigRational;

pub fn rat(x: i64) -> Rat {
    Rat::from_integer(BigInt::from(x))
}

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// column of each nonzero row.
pub fn rref(m: &mut [Vec<Rat>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut().skip(c) {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for j in c..cols {
                    if !pivot_row[j].is_zero() {
                        let d = &f * &pivot_row[j];
                        other[j] -= d;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn column_matrix(cols: &[&LatticeVector]) -> Vec<Vec<Rat>> {
    let n = cols.first().map_or(0, |c| c.dim());
    (0..n).map(|i| cols.iter().map(|c| rat(c[i])).collect()).collect()
}

/// A nonzero λ with Σ λ_j cols_j = 0, or `None` if the columns are
/// linearly independent.
pub fn kernel_vector(cols: &[&LatticeVector]) -> Option<Vec<Rat>> {
    let k = cols.len();
    let mut m = column_matrix(cols);
    let pivots = rref(&mut m);
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rat::zero(); k];
    x[free] = Rat::one();
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[row][free].clone();
    }
    Some(x)
}

pub fn rank(cols: &[&LatticeVector]) -> usize {
    let mut m = column_matrix(cols);
    rref(&mut m).len()
}

/// The unique λ with Σ λ_j cols_j = rhs, when the columns are independent
/// and the system is consistent.
pub fn solve_columns(cols: &[&LatticeVector], rhs: &[Rat]) -> Option<Vec<Rat>> {
    let k = cols.len();
    let mut m = column_matrix(cols);
    for (row, b) in m.iter_mut().zip(rhs) {
        row.push(b.clone());
    }
    let pivots = rref(&mut m);
    if pivots.len() != k || pivots.contains(&k) {
        return None;
    }
    Some((0..k).map(|row| m[row][k].clone()).collect())
}

/// Phase-one simplex with Bland's rule: a point `x >= 0` with `A x = b`,
/// or `None` when the system is infeasible.
pub fn feasible_point(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let m = a.len();
    let k = a.first().map_or(0, |r| r.len());
    let width = k + m + 1;
    // Tableau rows: [A | I | b] with b >= 0.
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for x in &a[i] {
            row.push(if neg { -x.clone() } else { x.clone() });
        }
        for j in 0..m {
            row.push(if i == j { Rat::one() } else { Rat::zero() });
        }
        row.push(if neg { -b[i].clone() } else { b[i].clone() });
        t.push(row);
    }
    // Objective row: reduced costs of minimizing the sum of artificials.
    let mut obj = vec![Rat::zero(); width];
    for row in &t {
        for j in 0..k {
            obj[j] -= &row[j];
        }
        obj[width - 1] -= &row[width - 1];
    }
    let mut basis: Vec<usize> = (k..k + m).collect();

    loop {
        let Some(enter) = (0..k + m).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // Phase one is bounded below by zero, so an entering column always has a
        // positive entry.
        let (r, _) = leave.expect("phase-one simplex cannot be unbounded");
        let inv = t[r][enter].recip();
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &f * p;
                    }
                }
            }
        }
        if !obj[enter].is_zero() {
            let f = obj[enter].clone();
            for (x, p) in obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        basis[r] = enter;
    }

    if !obj[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rat::zero(); k];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < k {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

/// An integer kernel vector of small integer columns, by fraction-free
/// Gauss-Jordan elimination; `None` if the columns are independent.
///
/// Intermediate entries are minors of the input, so i128 is ample for ±1
/// columns up to a few dozen rows.
pub fn integer_kernel(cols: &[&LatticeVector]) -> Option<Vec<i128>> {
    let k = cols.len();
    let n = cols.first().map_or(0, |c| c.dim());
    let mut m: Vec<Vec<i128>> = (0..n).map(|i| cols.iter().map(|c| c[i] as i128).collect()).collect();
    let mut prev: i128 = 1;
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    let mut free = None;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| m[i][c] != 0) else {
            free.get_or_insert(c);
            continue;
        };
        m.swap(r, p);
        let piv = m[r][c];
        for i in 0..n {
            if i == r {
                continue;
            }
            let f = m[i][c];
            for j in 0..k {
                let v = piv * m[i][j] - f * m[r][j];
                debug_assert_eq!(v % prev, 0);
                m[i][j] = v / prev;
            }
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    let f = free?;
    // Every pivot entry now equals `prev`, and rows pivoted after f are zero
    // in column f.
    let mut x = vec![0i128; k];
    x[f] = prev;
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[row][f];
    }
    let g = x.iter().fold(0i128, |g, &v| num_integer::gcd(g, v));
    if g > 1 {
        for v in &mut x {
            *v /= g;
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(c: &[i64]) -> LatticeVector {
        LatticeVector::new(c.to_vec())
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let a = lv(&[1, 1, -1]);
        let b = lv(&[1, -1, 1]);
        let c = lv(&[2, 0, 0]);
        let k = kernel_vector(&[&a, &b, &c]).unwrap();
        let mut s = vec![Rat::zero(); 3];
        for (lam, col) in k.iter().zip([&a, &b, &c]) {
            for i in 0..3 {
                s[i] += lam * rat(col[i]);
            }
        }
        assert!(s.iter().all(|x| x.is_zero()));
        assert!(k.iter().any(|x| !x.is_zero()));
        assert!(kernel_vector(&[&a, &b]).is_none());
        let ik = integer_kernel(&[&a, &b, &c]).unwrap();
        let s: Vec<i128> = (0..3).map(|i| ik.iter().zip([&a, &b, &c]).map(|(l, col)| l * col[i] as i128).sum()).collect();
        assert_eq!(s, vec![0, 0, 0]);
        assert!(integer_kernel(&[&a, &b]).is_none());
        assert_eq!(rank(&[&a, &b, &c]), 2);
    }

    #[test]
    fn solve_unique() {
        let a = lv(&[1, 1]);
        let b = lv(&[1, -1]);
        let x = solve_columns(&[&a, &b], &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(2), rat(1)]);
        // Inconsistent.
        let c = lv(&[1, 1]);
        let d = lv(&[2, 2]);
        assert!(solve_columns(&[&c, &d], &[rat(1), rat(0)]).is_none());
    }

    #[test]
    fn simplex_feasibility() {
        // x + y = 1, x - y = 0  -> x = y = 1/2
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let x = feasible_point(&a, &[rat(1), rat(0)]).unwrap();
        assert_eq!(x, vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 2.into())]);
        // x + y = -1 with x, y >= 0 is infeasible.
        let a = vec![vec![rat(1), rat(1)]];
        assert!(feasible_point(&a, &[rat(-1)]).is_none());
    }
}
