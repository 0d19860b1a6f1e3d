//! Constructive Cartan lemma: from `Σ θ_i ∧ ω_i = 0` with independent `ω`'s,
//! recover the unique symmetric `h` with `θ_i = Σ_j h_ij ω_j`.

use crate::error::{Error, Result};
use crate::exterior::Form;
use crate::linalg::{inverse, rank, RowSpace};
use crate::scalar::Scalar;

fn pure_coefficients(f: &Form) -> Result<Vec<Scalar>> {
    if f.degree() != 1 {
        return Err(Error::DegreeMismatch(1, f.degree()));
    }
    if let Some(s) = f.auxiliary_symbol() {
        return Err(Error::UnresolvedAuxiliary(f.coframe().symbol_name(s).to_string()));
    }
    Ok(f.one_form_coefficients())
}

/// `Σ_i θ_i ∧ ω_i`.
pub fn residual(theta: &[Form], omega: &[Form]) -> Result<Form> {
    let first = omega.first().or(theta.first()).ok_or_else(|| Error::Shape("no forms".into()))?;
    let mut acc = Form::zero(first.coframe(), 2);
    for (t, w) in theta.iter().zip(omega) {
        acc = acc.add(&t.wedge(w)?)?;
    }
    Ok(acc)
}

/// Returns `h` with `θ_i = Σ_j h_ij ω_j` and `h = hᵀ`.
///
/// The `ω`'s are completed to a basis by coordinate forms and each `θ_i` is
/// expanded in it; the completion components must vanish and the `ω` block
/// must be symmetric, both of which are checked.
pub fn solve(theta: &[Form], omega: &[Form]) -> Result<Vec<Vec<Scalar>>> {
    let r = omega.len();
    if theta.len() != r {
        return Err(Error::Shape(format!("{} θ's for {} ω's", theta.len(), r)));
    }
    if r == 0 {
        return Ok(Vec::new());
    }
    let cf = omega[0].coframe().clone();
    let n = cf.dim();
    let w_rows = omega.iter().map(pure_coefficients).collect::<Result<Vec<_>>>()?;
    let t_rows = theta.iter().map(pure_coefficients).collect::<Result<Vec<_>>>()?;
    if theta.iter().chain(omega).any(|f| f.coframe() != &cf) {
        return Err(Error::CoframeMismatch);
    }
    if r > n || rank(&w_rows) != r {
        return Err(Error::DependentForms);
    }
    let res = residual(theta, omega)?;
    if !res.is_zero() {
        return Err(Error::NonzeroResidual(res.to_string()));
    }

    let mut basis = w_rows.clone();
    let mut span = RowSpace::from_rows(n, w_rows.iter());
    for mu in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[mu] = Scalar::one();
        if span.insert(&e) {
            basis.push(e);
        }
    }
    let inv = inverse(&basis).expect("completed basis is invertible");
    // θ = Σ_k x_k basis_k  ⇔  x = θ · inv
    let mut h = vec![vec![Scalar::zero(); r]; r];
    for (i, t) in t_rows.iter().enumerate() {
        for k in 0..n {
            let x: Scalar = (0..n).map(|mu| &t[mu] * &inv[mu][k]).sum();
            if k < r {
                h[i][k] = x;
            } else if !x.is_zero() {
                return Err(Error::Certification {
                    what: format!("θ_{} has a component off span(ω)", i + 1),
                    expected: "0".into(),
                    actual: x.to_string(),
                });
            }
        }
    }
    for i in 0..r {
        for j in (i + 1)..r {
            if h[i][j] != h[j][i] {
                return Err(Error::Certification {
                    what: format!("h symmetry at ({}, {})", i + 1, j + 1),
                    expected: h[i][j].to_string(),
                    actual: h[j][i].to_string(),
                });
            }
        }
    }
    Ok(h)
}
