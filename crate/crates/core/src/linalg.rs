//! Exact linear algebra over the rationals.
//!
//! Two independent elimination routes are provided. [`rank`] runs
//! fraction-free (Bareiss) elimination over the integers after clearing
//! denominators row by row; [`RowSpace`] maintains a reduced row echelon basis
//! over the rationals and is used for kernels and membership tests. Pivots are
//! always chosen leftmost column first, lowest row index first.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

fn clear_denominators(row: &[Scalar]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// Rank of a rational matrix given as rows, by fraction-free elimination.
pub fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .map(|r| clear_denominators(r))
        .collect();
    bareiss_rank(&mut a)
}

/// Bareiss elimination in place; returns the rank.
pub fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in (c + 1)..ncols {
                let v = &pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// Incrementally built row space in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct RowSpace {
    ncols: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl RowSpace {
    pub fn new(ncols: usize) -> Self {
        RowSpace {
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_rows<'a, I>(ncols: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = &'a Vec<Scalar>>,
    {
        let mut space = RowSpace::new(ncols);
        for r in rows {
            space.insert(r);
        }
        space
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    /// Remainder of `row` after elimination against the current basis.
    pub fn reduce(&self, row: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(row.len(), self.ncols, "row length mismatch");
        let mut out = row.to_vec();
        for (basis_row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (o, b) in out.iter_mut().zip(basis_row) {
                if !b.is_zero() {
                    *o -= &(&f * b);
                }
            }
        }
        out
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        self.reduce(row).iter().all(Scalar::is_zero)
    }

    /// Adds `row` to the space; returns whether the rank grew.
    pub fn insert(&mut self, row: &[Scalar]) -> bool {
        let mut rem = self.reduce(row);
        let Some(p) = rem.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = rem[p].recip();
        for x in rem.iter_mut() {
            if !x.is_zero() {
                *x = &*x * &inv;
            }
        }
        for basis_row in self.rows.iter_mut() {
            if basis_row[p].is_zero() {
                continue;
            }
            let f = basis_row[p].clone();
            for (b, r) in basis_row.iter_mut().zip(&rem) {
                if !r.is_zero() {
                    *b -= &(&f * r);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, rem);
        true
    }

    /// Basis of `{x : r·x = 0 for every row r}`, one vector per free column,
    /// free columns taken left to right.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| self.pivots.binary_search(c).is_err())
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.ncols];
                v[f] = Scalar::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        v[p] = -&row[f];
                    }
                }
                v
            })
            .collect()
    }
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse(a: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = a.len();
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &(&f * p);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(a: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect()
}

/// Fraction-free echelon basis over the integers with sparse rows.
///
/// Suited to large constraint systems with few nonzeros per row. Rows are kept
/// primitive (content divided out).
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    pivots: BTreeMap<usize, BTreeMap<usize, BigInt>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Inserts an integer row given as `(column, value)` pairs; returns whether
    /// the rank grew.
    pub fn insert<I>(&mut self, entries: I) -> bool
    where
        I: IntoIterator<Item = (usize, BigInt)>,
    {
        let mut row: BTreeMap<usize, BigInt> = BTreeMap::new();
        for (c, v) in entries {
            let e = row.entry(c).or_insert_with(BigInt::zero);
            *e += v;
        }
        row.retain(|_, v| !v.is_zero());
        while let Some((&lead, lead_val)) = row.iter().next() {
            let Some(pivot_row) = self.pivots.get(&lead) else {
                make_primitive(&mut row);
                self.pivots.insert(lead, row);
                return true;
            };
            let pv = &pivot_row[&lead];
            let g = lead_val.gcd(pv);
            let a = pv / &g;
            let b = lead_val / &g;
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (c, v) in &row {
                next.insert(*c, v * &a);
            }
            for (c, v) in pivot_row {
                let e = next.entry(*c).or_insert_with(BigInt::zero);
                *e -= v * &b;
            }
            next.retain(|_, v| !v.is_zero());
            row = next;
        }
        false
    }
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let g = row
        .values()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.values_mut() {
        *v = &*v / &g;
    }
    if row.values().next().is_some_and(|v| v.is_negative()) {
        for v in row.values_mut() {
            *v = -&*v;
        }
    }
}
