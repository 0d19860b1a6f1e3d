//! Curvature tensors with Riemann symmetries, second fundamental forms, the
//! Gauss map `γ` and its Jacobian rank, and a numerical preimage solver.
//!
//! Indices are 0-based in the API; file formats and messages are 1-based.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, SparseEchelon};
use crate::rng::Rng;
use crate::scalar::Scalar;

/// Components `R_ijkl` of a tensor on `R^m`, stored densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannTensor {
    m: usize,
    r: Vec<Scalar>,
}

fn idx4(m: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * m + j) * m + k) * m + l
}

/// Pairs `(i, j)` with `i < j` in lexicographic order.
fn strict_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| ((i + 1)..m).map(move |j| (i, j))).collect()
}

/// Pairs `(i, j)` with `i ≤ j` in lexicographic order.
pub fn upper_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect()
}

impl RiemannTensor {
    pub fn zero(m: usize) -> Self {
        RiemannTensor {
            m,
            r: vec![Scalar::zero(); m.pow(4)],
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Scalar {
        &self.r[idx4(self.m, i, j, k, l)]
    }

    /// Sets one raw component, without symmetry propagation.
    pub fn set_raw(&mut self, i: usize, j: usize, k: usize, l: usize, v: Scalar) {
        let m = self.m;
        self.r[idx4(m, i, j, k, l)] = v;
    }

    /// Sets `R_ijkl = v` together with every component forced by pair
    /// symmetry and antisymmetry in each pair.
    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, v: Scalar) {
        for (a, b, c, d, neg) in [
            (i, j, k, l, false),
            (j, i, k, l, true),
            (i, j, l, k, true),
            (j, i, l, k, false),
            (k, l, i, j, false),
            (l, k, i, j, true),
            (k, l, j, i, true),
            (l, k, j, i, false),
        ] {
            self.set_raw(a, b, c, d, if neg { -&v } else { v.clone() });
        }
    }

    /// Builds from 1-based `(i, j, k, l, value)` entries, completes by
    /// symmetry and validates the result (including the cyclic identity).
    pub fn from_entries(m: usize, entries: &[(usize, usize, usize, usize, Scalar)]) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidCurvature(format!("dimension m = {m} must be at least 2")));
        }
        let mut r = Self::zero(m);
        let mut assigned = std::collections::BTreeMap::new();
        for (i, j, k, l, v) in entries {
            let ok = [i, j, k, l].iter().all(|&&x| (1..=m).contains(&x));
            if !ok {
                return Err(Error::InvalidCurvature(format!(
                    "index ({i},{j},{k},{l}) out of range 1..={m}"
                )));
            }
            let (i, j, k, l) = (i - 1, j - 1, k - 1, l - 1);
            if i == j || k == l {
                if !v.is_zero() {
                    return Err(Error::InvalidCurvature(format!(
                        "R_{}{}{}{} must vanish by antisymmetry",
                        i + 1,
                        j + 1,
                        k + 1,
                        l + 1
                    )));
                }
                continue;
            }
            // canonical representative for conflict detection
            let (mut p, mut q) = ((i.min(j), i.max(j)), (k.min(l), k.max(l)));
            if q < p {
                std::mem::swap(&mut p, &mut q);
            }
            let canon = if (i > j) != (k > l) { -v.clone() } else { v.clone() };
            if let Some(prev) = assigned.insert((p, q), canon.clone()) {
                if prev != canon {
                    return Err(Error::InvalidCurvature(format!(
                        "conflicting values for R_{}{}{}{}",
                        p.0 + 1,
                        p.1 + 1,
                        q.0 + 1,
                        q.1 + 1
                    )));
                }
            }
            r.set(p.0, p.1, q.0, q.1, canon);
        }
        if let Some(msg) = r.violation() {
            return Err(Error::InvalidCurvature(msg));
        }
        Ok(r)
    }

    /// Nonzero components with `i < j`, `k < l`, `(i, j) ≤ (k, l)`, 1-based.
    pub fn independent_entries(&self) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let pairs = strict_pairs(self.m);
        let mut out = Vec::new();
        for (x, &(i, j)) in pairs.iter().enumerate() {
            for &(k, l) in &pairs[x..] {
                let v = self.get(i, j, k, l);
                if !v.is_zero() {
                    out.push((i + 1, j + 1, k + 1, l + 1, v.clone()));
                }
            }
        }
        out
    }

    /// Description of the first violated symmetry, if any.
    pub fn violation(&self) -> Option<String> {
        let m = self.m;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        let r = self.get(i, j, k, l);
                        let name = format!("{}{}{}{}", i + 1, j + 1, k + 1, l + 1);
                        if r != self.get(k, l, i, j) {
                            return Some(format!("pair symmetry fails at {name}"));
                        }
                        if *r != -self.get(j, i, k, l) {
                            return Some(format!("antisymmetry fails at {name}"));
                        }
                        let cyc = r + self.get(k, i, j, l) + self.get(j, k, i, l);
                        if !cyc.is_zero() {
                            return Some(format!("cyclic identity fails at {name}"));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn add(&self, other: &RiemannTensor) -> RiemannTensor {
        RiemannTensor {
            m: self.m,
            r: self.r.iter().zip(&other.r).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.iter().all(Scalar::is_zero)
    }

    /// Largest `|R_ijkl − S_ijkl|`, in floating point.
    pub fn max_abs_diff(&self, other: &RiemannTensor) -> f64 {
        self.r
            .iter()
            .zip(&other.r)
            .map(|(a, b)| (a - b).abs().to_f64())
            .fold(0.0, f64::max)
    }
}

pub fn validate(r: &RiemannTensor) -> bool {
    r.violation().is_none()
}

/// `m²(m² − 1)/12`.
pub fn dim_km(m: usize) -> usize {
    m * m * (m * m - 1) / 12
}

/// `m⁴` minus the rank of the linear constraints `R_ijkl − R_klij`,
/// `R_ijkl + R_jikl` and `R_ijkl + R_kijl + R_jkil`.
pub fn dim_km_by_rank(m: usize) -> usize {
    use num_bigint::BigInt;
    let mut ech = SparseEchelon::new();
    let one = || BigInt::from(1);
    let minus = || BigInt::from(-1);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let c = idx4(m, i, j, k, l);
                    ech.insert([(c, one()), (idx4(m, k, l, i, j), minus())]);
                    ech.insert([(c, one()), (idx4(m, j, i, k, l), one())]);
                    ech.insert([(c, one()), (idx4(m, k, i, j, l), one()), (idx4(m, j, k, i, l), one())]);
                }
            }
        }
    }
    m.pow(4) - ech.rank()
}

/// Symmetric `h_aij` for `a` in the `N − m` normal directions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecondFundamentalForm {
    m: usize,
    n: usize,
    h: Vec<Scalar>,
}

impl SecondFundamentalForm {
    /// `n` is the total dimension `N`; requires `N > m ≥ 1`.
    pub fn zero(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n <= m {
            return Err(Error::Threshold(format!("need N > m ≥ 1, got m = {m}, N = {n}")));
        }
        Ok(SecondFundamentalForm {
            m,
            n,
            h: vec![Scalar::zero(); (n - m) * m * m],
        })
    }

    /// From one row per normal direction listing `h_aij` for `i ≤ j` in
    /// lexicographic order (`11, 12, …, 1m, 22, …`).
    pub fn from_upper(m: usize, n: usize, rows: &[Vec<Scalar>]) -> Result<Self> {
        let mut h = Self::zero(m, n)?;
        let pairs = upper_pairs(m);
        if rows.len() != n - m || rows.iter().any(|r| r.len() != pairs.len()) {
            return Err(Error::Shape(format!(
                "expected {} rows of {} entries for m = {m}, N = {n}",
                n - m,
                pairs.len()
            )));
        }
        for (a, row) in rows.iter().enumerate() {
            for (&(i, j), v) in pairs.iter().zip(row) {
                h.set(a, i, j, v.clone());
            }
        }
        Ok(h)
    }

    pub fn to_upper(&self) -> Vec<Vec<Scalar>> {
        let pairs = upper_pairs(self.m);
        (0..self.codim())
            .map(|a| pairs.iter().map(|&(i, j)| self.get(a, i, j).clone()).collect())
            .collect()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Total dimension `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn codim(&self) -> usize {
        self.n - self.m
    }

    pub fn get(&self, a: usize, i: usize, j: usize) -> &Scalar {
        &self.h[(a * self.m + i) * self.m + j]
    }

    /// Sets `h_aij = h_aji = v`.
    pub fn set(&mut self, a: usize, i: usize, j: usize, v: Scalar) {
        let m = self.m;
        self.h[(a * m + i) * m + j] = v.clone();
        self.h[(a * m + j) * m + i] = v;
    }

    /// Exact rational from floating-point coordinates in [`Self::to_upper`]
    /// order.
    pub fn from_f64_upper(m: usize, n: usize, x: &[f64]) -> Result<Self> {
        let per = m * (m + 1) / 2;
        let rows = x
            .chunks(per)
            .map(|c| {
                c.iter()
                    .map(|&v| Scalar::from_f64(v).ok_or_else(|| Error::Invalid(format!("non-finite entry {v}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_upper(m, n, &rows)
    }

    fn to_f64_upper(&self) -> Vec<f64> {
        self.to_upper().into_iter().flatten().map(|v| v.to_f64()).collect()
    }
}

/// `R_ijkl = Σ_a (h_aik h_ajl − h_ail h_ajk)`.
pub fn gauss_map(h: &SecondFundamentalForm) -> RiemannTensor {
    let m = h.m;
    let mut r = RiemannTensor::zero(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let v: Scalar = (0..h.codim())
                        .map(|a| h.get(a, i, k) * h.get(a, j, l) - h.get(a, i, l) * h.get(a, j, k))
                        .sum();
                    r.set_raw(i, j, k, l, v);
                }
            }
        }
    }
    r
}

/// The vectors `(h_aij)_a` for `i ≤ j ≤ m − 1` (1-based) are independent.
pub fn in_h(h: &SecondFundamentalForm) -> bool {
    let m = h.m;
    let count = m * (m - 1) / 2;
    if h.codim() < count {
        return false;
    }
    let rows: Vec<Vec<Scalar>> = upper_pairs(m - 1)
        .into_iter()
        .map(|(i, j)| (0..h.codim()).map(|a| h.get(a, i, j).clone()).collect())
        .collect();
    rank(&rows) == count
}

/// Rank of `dγ_h` on symmetric variations `(a, i ≤ j)`, as a map into the
/// `m⁴` components.
pub fn gauss_jacobian_rank(h: &SecondFundamentalForm) -> usize {
    let m = h.m;
    let mut ech = SparseEchelon::new();
    for a in 0..h.codim() {
        for (p, q) in upper_pairs(m) {
            // δh_a = E_pq + E_qp (or E_pp)
            let dh = |x: usize, y: usize| -> bool { (x, y) == (p, q) || (x, y) == (q, p) };
            let mut col: Vec<(usize, Scalar)> = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let mut v = Scalar::zero();
                            if dh(i, k) {
                                v += h.get(a, j, l).clone();
                            }
                            if dh(j, l) {
                                v += h.get(a, i, k).clone();
                            }
                            if dh(i, l) {
                                v -= h.get(a, j, k);
                            }
                            if dh(j, k) {
                                v -= h.get(a, i, l);
                            }
                            if !v.is_zero() {
                                col.push((idx4(m, i, j, k, l), v));
                            }
                        }
                    }
                }
            }
            let lcm = col
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, (_, v)| num_integer::Integer::lcm(&acc, v.denom()));
            ech.insert(col.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))));
        }
    }
    ech.rank()
}

/// Deterministic `h` with entries in `[-4, 4]`, redrawn until it lies in `H`.
pub fn random_h_in_h(m: usize, n: usize, seed: u64) -> Result<SecondFundamentalForm> {
    if m < 2 || n <= m || n - m < m * (m - 1) / 2 {
        return Err(Error::Threshold(format!(
            "N − m = {} is below m(m−1)/2 = {}",
            n.saturating_sub(m),
            m * m.saturating_sub(1) / 2
        )));
    }
    let mut rng = Rng::new(seed);
    loop {
        let mut h = SecondFundamentalForm::zero(m, n)?;
        for a in 0..n - m {
            for (i, j) in upper_pairs(m) {
                h.set(a, i, j, Scalar::from_int(rng.int(4)));
            }
        }
        if in_h(&h) {
            return Ok(h);
        }
    }
}

/// Outcome of [`preimage_newton`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Preimage {
    /// Rows as in [`SecondFundamentalForm::to_upper`].
    pub h: Vec<Vec<String>>,
    /// `max |γ(h) − R|` over all components, measured exactly.
    pub residual: f64,
    pub iterations: usize,
    pub exact: bool,
}

/// Newton iteration with least-squares steps for `γ(h) = R`, started at `h0`.
///
/// For `m = 2, N = 3` the closed form `h_311 = R_1212, h_322 = 1, h_312 = 0`
/// is returned instead (with `h_311 = 1, h_322 = 0` when `R_1212 = 0`).
/// Returns `h` with exact rational entries converted from the final iterate.
pub fn preimage_newton(
    r: &RiemannTensor,
    h0: &SecondFundamentalForm,
    max_iters: usize,
    tol: f64,
) -> Result<(SecondFundamentalForm, Preimage)> {
    let (m, n) = (h0.m, h0.n);
    if r.m != m {
        return Err(Error::Shape(format!("curvature has m = {}, h has m = {m}", r.m)));
    }
    if let Some(msg) = r.violation() {
        return Err(Error::InvalidCurvature(msg));
    }
    if m == 2 && n == 3 {
        let r1212 = r.get(0, 1, 0, 1).clone();
        let mut h = SecondFundamentalForm::zero(2, 3)?;
        if r1212.is_zero() {
            h.set(0, 0, 0, Scalar::one());
        } else {
            h.set(0, 0, 0, r1212);
            h.set(0, 1, 1, Scalar::one());
        }
        let report = preimage_report(&h, r, 0, true);
        return Ok((h, report));
    }

    let pairs = strict_pairs(m);
    let comps: Vec<(usize, usize, usize, usize)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(x, &(i, j))| pairs[x..].iter().map(move |&(k, l)| (i, j, k, l)))
        .collect();
    let upper = upper_pairs(m);
    let per = upper.len();
    let target: Vec<f64> = comps.iter().map(|&(i, j, k, l)| r.get(i, j, k, l).to_f64()).collect();

    let at = |x: &[f64], a: usize, i: usize, j: usize| -> f64 {
        let (p, q) = (i.min(j), i.max(j));
        let pos = upper.iter().position(|&e| e == (p, q)).unwrap();
        x[a * per + pos]
    };
    let residual = |x: &[f64]| -> DVector<f64> {
        DVector::from_iterator(
            comps.len(),
            comps.iter().zip(&target).map(|(&(i, j, k, l), t)| {
                (0..n - m)
                    .map(|a| at(x, a, i, k) * at(x, a, j, l) - at(x, a, i, l) * at(x, a, j, k))
                    .sum::<f64>()
                    - t
            }),
        )
    };
    let jacobian = |x: &[f64]| -> DMatrix<f64> {
        let mut jm = DMatrix::zeros(comps.len(), x.len());
        for (row, &(i, j, k, l)) in comps.iter().enumerate() {
            for a in 0..n - m {
                for (pos, &(p, q)) in upper.iter().enumerate() {
                    let hit = |x1: usize, y1: usize| (x1, y1) == (p, q) || (x1, y1) == (q, p);
                    let mut v = 0.0;
                    if hit(i, k) {
                        v += at(x, a, j, l);
                    }
                    if hit(j, l) {
                        v += at(x, a, i, k);
                    }
                    if hit(i, l) {
                        v -= at(x, a, j, k);
                    }
                    if hit(j, k) {
                        v -= at(x, a, i, l);
                    }
                    jm[(row, a * per + pos)] = v;
                }
            }
        }
        jm
    };

    let mut x = h0.to_f64_upper();
    let mut f = residual(&x);
    let mut iters = 0;
    while f.amax() > tol {
        if iters == max_iters {
            return Err(Error::NoConvergence {
                iters,
                residual: f.amax(),
            });
        }
        iters += 1;
        let svd = jacobian(&x).svd(true, true);
        let step = svd
            .solve(&f, 1e-12)
            .map_err(|e| Error::Invalid(format!("least-squares step failed: {e}")))?;
        let mut t = 1.0;
        loop {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - t * s).collect();
            let ft = residual(&trial);
            if ft.amax() < f.amax() || t < 1e-6 {
                x = trial;
                f = ft;
                break;
            }
            t /= 2.0;
        }
    }
    let h = SecondFundamentalForm::from_f64_upper(m, n, &x)?;
    let report = preimage_report(&h, r, iters, false);
    Ok((h, report))
}

fn preimage_report(h: &SecondFundamentalForm, r: &RiemannTensor, iterations: usize, exact: bool) -> Preimage {
    let residual = gauss_map(h).max_abs_diff(r);
    Preimage {
        h: h.to_upper().iter().map(|row| row.iter().map(Scalar::to_string).collect()).collect(),
        residual,
        iterations,
        exact: exact && residual == 0.0,
    }
}
