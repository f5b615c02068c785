//! Sparse integer Smith normal form and exact rank computations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ring::Coeff;

/// Sparse integer matrix in row-major form.
#[derive(Clone, Debug, Default)]
pub struct SparseInt {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseInt {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseInt { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    /// Elementary divisors > 1, in divisibility order.
    pub divisors: Vec<BigInt>,
    /// Largest absolute value seen during elimination, in bits.
    pub max_bits: u64,
}

/// Diagonalize over ℤ by fraction-free row/column operations and return the
/// rank together with the elementary divisors. Pivots minimize fill-in
/// (product of row/column occupancy), ties by lowest index; ±1 pivots are
/// always preferred.
pub fn smith_normal_form(m: &SparseInt) -> SnfResult {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = m.data.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for (&c, _) in row.iter() {
            col_rows[c].insert(r);
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    let mut diagonal: Vec<BigInt> = Vec::new();
    let mut max_bits = 0u64;

    loop {
        // pivot selection: units first, then least fill-in, then lowest index
        let mut best: Option<(bool, usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !row_alive[r] || row.is_empty() {
                continue;
            }
            for (&c, v) in row.iter() {
                let unit = v.abs().is_one();
                let score = (row.len() - 1) * (col_rows[c].len() - 1);
                let key = (!unit, score, r, c);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
                max_bits = max_bits.max(v.bits());
            }
        }
        let Some((_, _, mut pr, mut pc)) = best else {
            break;
        };

        // Euclidean reduction until the pivot divides its row and column.
        'reduce: loop {
            let a = rows[pr][&pc].clone();
            // column first
            let col_members: Vec<usize> = col_rows[pc].iter().copied().collect();
            for j in col_members {
                if j == pr || !row_alive[j] {
                    continue;
                }
                let b = rows[j][&pc].clone();
                if (&b % &a).is_zero() {
                    continue;
                }
                let q = &b / &a;
                row_op(&mut rows, &mut col_rows, j, pr, &-q);
                // remainder is smaller: re-pivot there
                pr = j;
                continue 'reduce;
            }
            let row_members: Vec<usize> = rows[pr].keys().copied().collect();
            for c2 in row_members {
                if c2 == pc || !col_alive[c2] {
                    continue;
                }
                let b = rows[pr][&c2].clone();
                if (&b % &a).is_zero() {
                    continue;
                }
                let q = &b / &a;
                col_op(&mut rows, &mut col_rows, c2, pc, &-q);
                pc = c2;
                continue 'reduce;
            }
            break;
        }

        // clear the pivot column
        let a = rows[pr][&pc].clone();
        let col_members: Vec<usize> = col_rows[pc].iter().copied().collect();
        for j in col_members {
            if j == pr || !row_alive[j] {
                continue;
            }
            let q = &rows[j][&pc] / &a;
            row_op(&mut rows, &mut col_rows, j, pr, &-q);
            debug_assert!(!rows[j].contains_key(&pc));
        }
        // the pivot column is now a singleton, so clearing the pivot row by
        // column operations only zeroes the row itself
        let row_members: Vec<usize> = rows[pr].keys().copied().collect();
        for c2 in row_members {
            if c2 != pc {
                rows[pr].remove(&c2);
                col_rows[c2].remove(&pr);
            }
        }
        diagonal.push(a.abs());
        row_alive[pr] = false;
        col_alive[pc] = false;
        rows[pr].clear();
        col_rows[pc].clear();
    }

    // Fix the divisibility chain pairwise: Z/a ⊕ Z/b = Z/gcd ⊕ Z/lcm.
    let rank = diagonal.len();
    loop {
        let mut changed = false;
        for i in 0..diagonal.len() {
            for j in i + 1..diagonal.len() {
                let (a, b) = (diagonal[i].clone(), diagonal[j].clone());
                if (&b % &a).is_zero() {
                    continue;
                }
                let g = gcd_big(&a, &b);
                let l = &a / &g * &b;
                diagonal[i] = g;
                diagonal[j] = l;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    diagonal.sort();
    let divisors = diagonal.into_iter().filter(|d| !d.is_one()).collect();
    SnfResult { rank, divisors, max_bits }
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut a, mut b) = (a.abs(), b.abs());
    while !b.is_zero() {
        let t = &a % &b;
        a = b;
        b = t;
    }
    a
}

/// rows[dst] += q * rows[src]
fn row_op(
    rows: &mut [BTreeMap<usize, BigInt>],
    col_rows: &mut [BTreeSet<usize>],
    dst: usize,
    src: usize,
    q: &BigInt,
) {
    let src_row: Vec<(usize, BigInt)> = rows[src].iter().map(|(&c, v)| (c, v.clone())).collect();
    for (c, v) in src_row {
        let add = &v * q;
        let entry = rows[dst].entry(c).or_insert_with(BigInt::zero);
        *entry += add;
        if entry.is_zero() {
            rows[dst].remove(&c);
            col_rows[c].remove(&dst);
        } else {
            col_rows[c].insert(dst);
        }
    }
}

/// col[dst] += q * col[src]
fn col_op(
    rows: &mut [BTreeMap<usize, BigInt>],
    col_rows: &mut [BTreeSet<usize>],
    dst: usize,
    src: usize,
    q: &BigInt,
) {
    let members: Vec<usize> = col_rows[src].iter().copied().collect();
    for r in members {
        let v = rows[r][&src].clone();
        let add = &v * q;
        let entry = rows[r].entry(dst).or_insert_with(BigInt::zero);
        *entry += add;
        if entry.is_zero() {
            rows[r].remove(&dst);
            col_rows[dst].remove(&r);
        } else {
            col_rows[dst].insert(r);
        }
    }
}

/// Integer matrix rank by fraction-free sparse elimination (the rank over ℚ).
pub fn rank_sparse_int(m: &SparseInt) -> usize {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = m.data.clone();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, row) in rows.iter().enumerate() {
        for (&c, _) in row.iter() {
            col_rows[c].insert(r);
        }
    }
    let mut row_alive = vec![true; m.rows];
    let mut rank = 0usize;
    loop {
        // cheapest pivot: unit entries first, then least fill-in
        let mut best: Option<(bool, usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            if !row_alive[r] || row.is_empty() {
                continue;
            }
            for (&c, v) in row.iter() {
                let unit = v.abs().is_one();
                let score = (row.len() - 1) * (col_rows[c].len() - 1);
                let key = (!unit, score, r, c);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        let Some((_, _, pr, pc)) = best else {
            break;
        };
        let a = rows[pr][&pc].clone();
        let members: Vec<usize> = col_rows[pc].iter().copied().collect();
        for j in members {
            if j == pr || !row_alive[j] {
                continue;
            }
            // fraction-free: row_j := a·row_j − b·row_pr, then strip the gcd
            let b = rows[j][&pc].clone();
            let src: Vec<(usize, BigInt)> = rows[pr].iter().map(|(&c, v)| (c, v.clone())).collect();
            let mut updated: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (c, v) in rows[j].iter() {
                updated.insert(*c, v * &a);
            }
            for (c, v) in src {
                let e = updated.entry(c).or_insert_with(BigInt::zero);
                *e -= &v * &b;
            }
            let mut g = BigInt::zero();
            updated.retain(|_, v| !v.is_zero());
            for v in updated.values() {
                g = gcd_big(&g, v);
            }
            if !g.is_zero() && !g.is_one() {
                for v in updated.values_mut() {
                    *v /= &g;
                }
            }
            for (&c, _) in rows[j].iter() {
                col_rows[c].remove(&j);
            }
            for (&c, _) in updated.iter() {
                col_rows[c].insert(j);
            }
            rows[j] = updated;
            debug_assert!(!rows[j].contains_key(&pc));
        }
        for (&c, _) in rows[pr].iter() {
            col_rows[c].remove(&pr);
        }
        rows[pr].clear();
        row_alive[pr] = false;
        rank += 1;
    }
    rank
}

/// Rank of a dense matrix over a field by Gaussian elimination.
/// `mat` is row-major and consumed.
pub fn rank_dense<R: Coeff>(mut mat: Vec<Vec<R>>) -> usize {
    assert!(R::is_field());
    let rows = mat.len();
    if rows == 0 {
        return 0;
    }
    let cols = mat[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].inv().expect("field pivot");
        for r in row + 1..rows {
            if mat[r][col].is_zero() {
                continue;
            }
            let f = mat[r][col].mul(&inv);
            for c in col..cols {
                let sub = f.mul(&mat[row][c]);
                mat[r][c] = mat[r][c].sub(&sub);
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

/// Column-space membership test: does appending `extra` columns to `base`
/// increase the rank? Returns (rank of base, rank of [base | extra]).
pub fn rank_with_extension<R: Coeff>(base: &[Vec<R>], extra: &[Vec<R>], height: usize) -> (usize, usize) {
    // columns given as vectors of length `height`
    let to_rows = |cols: &[&[Vec<R>]]| -> Vec<Vec<R>> {
        let total: usize = cols.iter().map(|c| c.len()).sum();
        let mut m = vec![vec![R::zero(); total]; height];
        let mut j = 0;
        for group in cols {
            for col in group.iter() {
                for (i, v) in col.iter().enumerate() {
                    m[i][j] = v.clone();
                }
                j += 1;
            }
        }
        m
    };
    let r1 = rank_dense(to_rows(&[base]));
    let r2 = rank_dense(to_rows(&[base, extra]));
    (r1, r2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(d: &[&[i64]]) -> SparseInt {
        let rows = d.len();
        let cols = if rows == 0 { 0 } else { d[0].len() };
        let mut m = SparseInt::new(rows, cols);
        for (r, row) in d.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.set(r, c, BigInt::from(v));
            }
        }
        m
    }

    #[test]
    fn identity() {
        let m = from_dense(&[&[1, 0], &[0, 1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 2);
        assert!(s.divisors.is_empty());
    }

    #[test]
    fn diag_2_4() {
        let m = from_dense(&[&[2, 0], &[0, 4]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 2);
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn antichain_fixed() {
        // diag(4, 6) has elementary divisors (2, 12)
        let m = from_dense(&[&[4, 0], &[0, 6]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn euclid_needed() {
        let m = from_dense(&[&[2, 3], &[0, 0]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 1);
        assert!(s.divisors.is_empty(), "{:?}", s.divisors);
    }

    #[test]
    fn classic_example() {
        // SNF of [[2,4,4],[-6,6,12],[10,4,16]] is diag(2, 2, 156)
        let m = from_dense(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 3);
        assert_eq!(s.divisors, vec![BigInt::from(2), BigInt::from(2), BigInt::from(156)]);
    }

    #[test]
    fn rank_over_f2() {
        use crate::ring::Fp;
        let mat: Vec<Vec<Fp<2>>> = vec![
            vec![Fp(1), Fp(1), Fp(0)],
            vec![Fp(0), Fp(1), Fp(1)],
            vec![Fp(1), Fp(0), Fp(1)],
        ];
        assert_eq!(rank_dense(mat), 2);
    }

    #[test]
    fn random_rank_agreement() {
        // rank over Z (via SNF) equals rank over Q on random small matrices
        use crate::ring::QQ;
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..20 {
            let rows = 4 + (next() % 4) as usize;
            let cols = 4 + (next() % 4) as usize;
            let mut m = SparseInt::new(rows, cols);
            let mut dense = vec![vec![QQ::zero(); cols]; rows];
            for r in 0..rows {
                for c in 0..cols {
                    let v = (next() % 7) as i64 - 3;
                    m.set(r, c, BigInt::from(v));
                    dense[r][c] = QQ::from_i64(v);
                }
            }
            let s = smith_normal_form(&m);
            assert_eq!(s.rank, rank_dense(dense));
        }
    }
}
