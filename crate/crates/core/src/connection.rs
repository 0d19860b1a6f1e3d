//! Structure-equation identities for a coframe and connection matrix:
//! torsion, curvature, and the two Bianchi identities, verified exactly from
//! structure data.

use crate::error::{Error, Result};
use crate::exterior::{Form, FormMatrix, StructureDifferential};

/// Coframe 1-forms `η`, connection matrix `ω` and the structure differential
/// they are differentiated with.
#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub eta: Vec<Form>,
    pub omega: FormMatrix,
    pub sd: StructureDifferential,
    /// Set when the frame is orthonormal, in which case `ω` must be skew.
    pub orthonormal: bool,
}

impl ConnectionData {
    pub fn new(eta: Vec<Form>, omega: FormMatrix, sd: StructureDifferential, orthonormal: bool) -> Result<Self> {
        if omega.rows() != omega.cols() {
            return Err(Error::Shape(format!(
                "connection matrix is {}×{}",
                omega.rows(),
                omega.cols()
            )));
        }
        if omega.degree() != 1 || eta.iter().any(|f| f.degree() != 1) {
            return Err(Error::Invalid("connection data must consist of 1-forms".into()));
        }
        if !eta.is_empty() && eta.len() != omega.rows() {
            return Err(Error::Shape(format!(
                "{} coframe forms for a {}×{} connection",
                eta.len(),
                omega.rows(),
                omega.cols()
            )));
        }
        if orthonormal && !omega.is_skew() {
            return Err(Error::Invalid(
                "orthonormal frame requires a skew-symmetric connection matrix".into(),
            ));
        }
        Ok(ConnectionData {
            eta,
            omega,
            sd,
            orthonormal,
        })
    }

    /// `η` as a column matrix.
    fn eta_column(&self) -> Result<FormMatrix> {
        FormMatrix::column(&self.eta)
    }

    fn require_integrable(&self) -> Result<()> {
        for (name, defect) in self.sd.d_squared_defects()? {
            if !defect.is_zero() {
                return Err(Error::NotIntegrable(name));
            }
        }
        Ok(())
    }
}

/// `Ω = dω + ω∧ω`.
pub fn curvature_form(cd: &ConnectionData) -> Result<FormMatrix> {
    cd.omega.d(&cd.sd)?.add(&cd.omega.wedge(&cd.omega)?)
}

/// `Θ_i = dη_i + Σ_j ω_ij∧η_j`.
pub fn torsion_form(cd: &ConnectionData) -> Result<Vec<Form>> {
    let eta = cd.eta_column()?;
    let theta = eta.d(&cd.sd)?.add(&cd.omega.wedge(&eta)?)?;
    Ok((0..theta.rows()).map(|i| theta.get(i, 0).clone()).collect())
}

/// `dΘ + ω∧Θ − Ω∧η`; identically zero when `d∘d = 0`.
pub fn first_bianchi_defect(cd: &ConnectionData) -> Result<Vec<Form>> {
    cd.require_integrable()?;
    let theta = FormMatrix::column(&torsion_form(cd)?)?;
    let omega_cap = curvature_form(cd)?;
    let defect = theta
        .d(&cd.sd)?
        .add(&cd.omega.wedge(&theta)?)?
        .sub(&omega_cap.wedge(&cd.eta_column()?)?)?;
    Ok((0..defect.rows()).map(|i| defect.get(i, 0).clone()).collect())
}

/// `dΩ − Ω∧ω + ω∧Ω`; identically zero when `d∘d = 0`.
pub fn second_bianchi_defect(cd: &ConnectionData) -> Result<FormMatrix> {
    cd.require_integrable()?;
    let omega_cap = curvature_form(cd)?;
    omega_cap
        .d(&cd.sd)?
        .sub(&omega_cap.wedge(&cd.omega)?)?
        .add(&cd.omega.wedge(&omega_cap)?)
}

pub fn check_skew(m: &FormMatrix) -> bool {
    m.is_skew()
}
