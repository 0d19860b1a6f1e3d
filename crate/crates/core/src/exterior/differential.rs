use std::collections::BTreeMap;
use std::sync::Arc;

use super::form::{same_coframe, Coframe, Form, MultiIndex};
use crate::error::{Error, Result};

/// Point value and differential of an auxiliary 1-form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Auxiliary {
    pub value: Form,
    pub differential: Form,
}

/// The value of `d` on every coframe element and declared auxiliary.
///
/// `d` on arbitrary forms follows by linearity and the graded Leibniz rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDifferential {
    coframe: Arc<Coframe>,
    basis_d: Vec<Form>,
    aux: BTreeMap<usize, Auxiliary>,
}

impl StructureDifferential {
    /// `d ω_μ = 0` for every coframe element; no auxiliaries declared.
    pub fn flat(coframe: &Arc<Coframe>) -> Self {
        StructureDifferential {
            coframe: coframe.clone(),
            basis_d: (0..coframe.dim()).map(|_| Form::zero(coframe, 2)).collect(),
            aux: BTreeMap::new(),
        }
    }

    pub fn new(coframe: &Arc<Coframe>, basis_d: Vec<Form>) -> Result<Self> {
        let mut sd = Self::flat(coframe);
        if basis_d.len() != coframe.dim() {
            return Err(Error::Shape(format!(
                "{} structure forms for a coframe of dimension {}",
                basis_d.len(),
                coframe.dim()
            )));
        }
        for (i, f) in basis_d.into_iter().enumerate() {
            sd.set(i, f)?;
        }
        Ok(sd)
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    /// Sets `d ω_index` (0-based).
    pub fn set(&mut self, index: usize, d: Form) -> Result<()> {
        same_coframe(&self.coframe, d.coframe())?;
        if d.degree() != 2 {
            return Err(Error::DegreeMismatch(2, d.degree()));
        }
        if index >= self.coframe.dim() {
            return Err(Error::IndexOutOfRange {
                index: index + 1,
                dim: self.coframe.dim(),
            });
        }
        self.basis_d[index] = d;
        Ok(())
    }

    pub fn with(mut self, index: usize, d: Form) -> Result<Self> {
        self.set(index, d)?;
        Ok(self)
    }

    pub fn basis_d(&self, index: usize) -> &Form {
        &self.basis_d[index]
    }

    /// Declares the `k`-th auxiliary (0-based).
    pub fn declare_auxiliary(&mut self, k: usize, value: Form, differential: Form) -> Result<()> {
        same_coframe(&self.coframe, value.coframe())?;
        same_coframe(&self.coframe, differential.coframe())?;
        if k >= self.coframe.aux_count() {
            return Err(Error::IndexOutOfRange {
                index: k + 1,
                dim: self.coframe.aux_count(),
            });
        }
        if value.degree() != 1 {
            return Err(Error::DegreeMismatch(1, value.degree()));
        }
        if differential.degree() != 2 {
            return Err(Error::DegreeMismatch(2, differential.degree()));
        }
        self.aux.insert(k, Auxiliary { value, differential });
        Ok(())
    }

    pub fn auxiliary(&self, k: usize) -> Option<&Auxiliary> {
        self.aux.get(&k)
    }

    pub fn auxiliaries(&self) -> impl Iterator<Item = (usize, &Auxiliary)> {
        self.aux.iter().map(|(k, a)| (*k, a))
    }

    fn d_symbol(&self, symbol: usize) -> Result<&Form> {
        let n = self.coframe.dim();
        if symbol < n {
            Ok(&self.basis_d[symbol])
        } else {
            self.aux
                .get(&(symbol - n))
                .map(|a| &a.differential)
                .ok_or_else(|| {
                    Error::UndeclaredAuxiliary(self.coframe.symbol_name(symbol).to_string())
                })
        }
    }

    /// Exterior derivative:
    /// `d(c·ω_{j1}∧…∧ω_{jp}) = c·Σ_k (−1)^{k−1} ω_{j1}∧…∧dω_{jk}∧…∧ω_{jp}`.
    pub fn d(&self, phi: &Form) -> Result<Form> {
        same_coframe(&self.coframe, phi.coframe())?;
        let cf = &self.coframe;
        let mut out = Form::zero(cf, phi.degree() + 1);
        for (key, c) in phi.terms() {
            let syms = key.to_vec();
            for (pos, &s) in syms.iter().enumerate() {
                let ds = self.d_symbol(s)?;
                if ds.is_zero() {
                    continue;
                }
                let before = Form::monomial(cf, c.clone(), &syms[..pos]);
                let after = Form::monomial(cf, crate::Scalar::one(), &syms[pos + 1..]);
                let mut t = before.wedge(ds)?.wedge(&after)?;
                if pos % 2 == 1 {
                    t = t.neg();
                }
                out = out.add(&t)?;
            }
        }
        Ok(out)
    }

    /// `d(dω_μ)` for each coframe element, then `d` of each declared
    /// auxiliary differential. All zero certifies `d∘d = 0`.
    pub fn d_squared_defects(&self) -> Result<Vec<(String, Form)>> {
        let mut out = Vec::new();
        for (i, f) in self.basis_d.iter().enumerate() {
            out.push((self.coframe.names()[i].clone(), self.d(f)?));
        }
        for (k, a) in &self.aux {
            out.push((self.coframe.aux_names()[*k].clone(), self.d(&a.differential)?));
        }
        Ok(out)
    }

    pub fn is_integrable(&self) -> Result<bool> {
        Ok(self.d_squared_defects()?.iter().all(|(_, f)| f.is_zero()))
    }

    /// Point value of a form: every auxiliary is replaced by its declared
    /// value.
    pub fn resolve(&self, phi: &Form) -> Result<Form> {
        if !phi.uses_auxiliary() {
            return Ok(phi.clone());
        }
        let n = self.coframe.dim();
        for (key, _) in phi.terms() {
            for s in key.iter().filter(|&s| s >= n) {
                if !self.aux.contains_key(&(s - n)) {
                    return Err(Error::UndeclaredAuxiliary(
                        self.coframe.symbol_name(s).to_string(),
                    ));
                }
            }
        }
        phi.substitute(&self.coframe, |s| {
            if s >= n {
                Some(self.aux[&(s - n)].value.clone())
            } else {
                None
            }
        })
    }

    /// Structure data for the coframe `θ' = A θ` (rows of `a` are the new
    /// 1-forms in the old basis). Auxiliaries are not carried over.
    pub fn change_of_coframe(&self, a: &[Vec<crate::Scalar>]) -> Result<Self> {
        let n = self.coframe.dim();
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("change of coframe must be n×n".into()));
        }
        if self.coframe.aux_count() > 0 {
            return Err(Error::Invalid(
                "change of coframe with auxiliaries is not supported".into(),
            ));
        }
        let inv = crate::linalg::inverse(a).ok_or(Error::DependentForms)?;
        let cf = &self.coframe;
        // old θ_ν = Σ_μ inv[ν][μ] θ'_μ
        let old_in_new: Vec<Form> = inv.iter().map(|row| Form::one_form(cf, row)).collect();
        let mut out = Self::flat(cf);
        for (mu, row) in a.iter().enumerate() {
            let mut d = Form::zero(cf, 2);
            for (nu, coeff) in row.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let img = self.basis_d[nu].substitute(cf, |s| Some(old_in_new[s].clone()))?;
                d = d.add(&img.scale(coeff))?;
            }
            out.set(mu, d)?;
        }
        Ok(out)
    }
}

/// `d φ` with respect to `sd`.
pub fn exterior_derivative(phi: &Form, sd: &StructureDifferential) -> Result<Form> {
    sd.d(phi)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn is<T: Send + Sync>() {}
    is::<Form>();
    is::<StructureDifferential>();
    is::<MultiIndex>();
}
