//! Seeded random forms, matrices and structure data for property suites.

use std::sync::Arc;

use crate::error::Result;
use crate::exterior::{subsets, Coframe, Form, FormMatrix, StructureDifferential, Vector};
use crate::rng::Rng;
use crate::scalar::Scalar;

/// Random pure form of the given degree with coefficients in `[-bound, bound]`;
/// each basis monomial is present with probability about `1/2`.
pub fn random_form(rng: &mut Rng, cf: &Arc<Coframe>, degree: usize, bound: u64) -> Form {
    let mut terms = Vec::new();
    for idx in subsets(cf.dim(), degree) {
        if rng.next_u64() & 1 == 0 {
            terms.push((idx, rng.scalar(bound)));
        }
    }
    Form::from_terms(cf, degree, terms).expect("indices are in range")
}

pub fn random_vector(rng: &mut Rng, n: usize, bound: u64) -> Vector {
    Vector((0..n).map(|_| rng.scalar(bound)).collect())
}

/// Random structure differential with every `D_μ` a random 2-form
/// (generally not integrable).
pub fn random_sd(rng: &mut Rng, cf: &Arc<Coframe>, bound: u64) -> StructureDifferential {
    let forms = (0..cf.dim()).map(|_| random_form(rng, cf, 2, bound)).collect();
    StructureDifferential::new(cf, forms).expect("degrees are 2")
}

/// Skew-symmetric `m×m` matrix of random 1-forms.
pub fn random_skew_matrix(rng: &mut Rng, cf: &Arc<Coframe>, m: usize, bound: u64) -> FormMatrix {
    let mut out = FormMatrix::zero(cf, m, m, 1);
    for i in 0..m {
        for j in (i + 1)..m {
            let f = random_form(rng, cf, 1, bound);
            out.set(j, i, f.neg()).unwrap();
            out.set(i, j, f).unwrap();
        }
    }
    out
}

/// Random invertible integer matrix: unit lower triangular times unit upper
/// triangular, both with small random off-diagonal entries.
pub fn random_unimodular(rng: &mut Rng, n: usize, bound: u64) -> Vec<Vec<Scalar>> {
    let mut lower = vec![vec![Scalar::zero(); n]; n];
    let mut upper = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        lower[i][i] = Scalar::one();
        upper[i][i] = Scalar::one();
        for j in 0..i {
            lower[i][j] = rng.scalar(bound);
        }
        for j in (i + 1)..n {
            upper[i][j] = rng.scalar(bound);
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| &lower[i][k] * &upper[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Integrable model structures on `n` coframe elements (`n ≥ 3`), indexed by
/// `kind % 4`: flat; Heisenberg `dω3 = ω1∧ω2`; `so(3)` on the first three with
/// the rest flat; a 2-step nilpotent chain `dω_k = ω1∧ω_{k−1}` for `k ≥ 3`.
pub fn model_sd(cf: &Arc<Coframe>, kind: usize) -> StructureDifferential {
    let n = cf.dim();
    assert!(n >= 3, "model structures need three coframe elements");
    let w = |a: usize, b: usize| Form::monomial(cf, Scalar::one(), &[a, b]);
    let mut sd = StructureDifferential::flat(cf);
    match kind % 4 {
        0 => {}
        1 => sd.set(2, w(0, 1)).unwrap(),
        2 => {
            sd.set(0, w(1, 2)).unwrap();
            sd.set(1, w(2, 0)).unwrap();
            sd.set(2, w(0, 1)).unwrap();
        }
        _ => {
            for k in 2..n {
                sd.set(k, w(0, k - 1)).unwrap();
            }
        }
    }
    sd
}

/// A model structure seen through a random unimodular change of coframe;
/// integrable by construction.
pub fn random_integrable_sd(rng: &mut Rng, cf: &Arc<Coframe>) -> Result<StructureDifferential> {
    let kind = rng.below(4);
    let a = random_unimodular(rng, cf.dim(), 1);
    model_sd(cf, kind).change_of_coframe(&a)
}
