use std::sync::Arc;

use super::differential::StructureDifferential;
use super::form::{same_coframe, Coframe, Form};
use crate::error::{Error, Result};

/// Rectangular matrix of forms sharing one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    coframe: Arc<Coframe>,
    rows: usize,
    cols: usize,
    degree: usize,
    entries: Vec<Form>,
}

impl FormMatrix {
    pub fn zero(coframe: &Arc<Coframe>, rows: usize, cols: usize, degree: usize) -> Self {
        FormMatrix {
            coframe: coframe.clone(),
            rows,
            cols,
            degree,
            entries: vec![Form::zero(coframe, degree); rows * cols],
        }
    }

    pub fn from_fn<F>(coframe: &Arc<Coframe>, rows: usize, cols: usize, degree: usize, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> Form,
    {
        let mut m = Self::zero(coframe, rows, cols, degree);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j))?;
            }
        }
        Ok(m)
    }

    /// Column vector of forms.
    pub fn column(forms: &[Form]) -> Result<Self> {
        let first = forms
            .first()
            .ok_or_else(|| Error::Shape("empty column".into()))?;
        let mut m = Self::zero(first.coframe(), forms.len(), 1, first.degree());
        for (i, f) in forms.iter().enumerate() {
            m.set(i, 0, f.clone())?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) -> Result<()> {
        if f.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, f.degree()));
        }
        same_coframe(&self.coframe, f.coframe())?;
        self.entries[i * self.cols + j] = f;
        Ok(())
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Form::is_zero)
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.coframe(), self.cols, self.rows, self.degree);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        FormMatrix {
            entries: self.entries.iter().map(Form::neg).collect(),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &FormMatrix) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}×{} + {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormMatrix {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Matrix product with `∧` as entry multiplication.
    pub fn wedge(&self, other: &FormMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "{}×{} ∧ {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let cf = self.coframe();
        let mut out = Self::zero(cf, self.rows, other.cols, self.degree + other.degree);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Form::zero(cf, self.degree + other.degree);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).wedge(other.get(k, j))?)?;
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// Entrywise exterior derivative.
    pub fn d(&self, sd: &StructureDifferential) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|f| sd.d(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormMatrix {
            entries,
            degree: self.degree + 1,
            ..self.clone()
        })
    }

    /// `M_ij = −M_ji` entrywise (diagonal zero).
    pub fn is_skew(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (i..self.cols).all(|j| self.get(i, j).add(self.get(j, i)).map_or(false, |s| s.is_zero()))
            })
    }
}

pub fn matrix_wedge(a: &FormMatrix, b: &FormMatrix) -> Result<FormMatrix> {
    a.wedge(b)
}

pub fn matrix_d(a: &FormMatrix, sd: &StructureDifferential) -> Result<FormMatrix> {
    a.d(sd)
}
