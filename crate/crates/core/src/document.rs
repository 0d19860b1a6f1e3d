//! JSON documents: exterior systems, curvature tensors, second fundamental
//! forms and Cartan-lemma inputs.
//!
//! Indices in documents are 1-based. Coefficients are exact rational strings
//! `"p/q"` (plain integers are accepted on input). The canonical form of a
//! document is its pretty-printed JSON with a trailing newline;
//! [`EdsDocument::parse`] followed by [`EdsDocument::to_canonical`] reproduces
//! a canonical input byte for byte.

use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cartan::CoframeSplit;
use crate::curvature::{RiemannTensor, SecondFundamentalForm};
use crate::error::{Error, Result};
use crate::exterior::{Coframe, Form, StructureDifferential, Vector};
use crate::ideal::{Flag, GeneratorSet};
use crate::scalar::Scalar;

/// One monomial: `coeff · ω_indices ∧ aux`, coframe indices strictly
/// increasing, auxiliaries named in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: Scalar,
    pub indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxiliaryDoc {
    pub name: String,
    pub value: Vec<TermDoc>,
    pub differential: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureDoc {
    pub index: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitDoc {
    pub independence: Vec<usize>,
    pub complement: Vec<usize>,
}

/// An exterior system at a point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdsDocument {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coframe: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub auxiliaries: Vec<AuxiliaryDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure: Vec<StructureDoc>,
    pub generators: Vec<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<Vec<Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitDoc>,
}

/// Everything an [`EdsDocument`] describes, validated and built.
#[derive(Clone, Debug)]
pub struct System {
    pub coframe: Arc<Coframe>,
    pub sd: StructureDifferential,
    pub gs: GeneratorSet,
    pub flag: Option<Flag>,
    pub split: Option<CoframeSplit>,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses JSON text, reporting syntax and shape errors with line and column.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(syntax)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document {
        path: path.into(),
        message: message.into(),
    }
}

impl EdsDocument {
    /// Parses and validates.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: EdsDocument = from_json(text)?;
        doc.build()?;
        Ok(doc)
    }

    pub fn to_canonical(&self) -> String {
        to_json(self)
    }

    fn coframe(&self) -> Result<Arc<Coframe>> {
        if self.dimension == 0 {
            return Err(invalid("dimension", "must be positive"));
        }
        let names = if self.coframe.is_empty() {
            (1..=self.dimension).map(|i| format!("w{i}")).collect()
        } else if self.coframe.len() == self.dimension {
            self.coframe.clone()
        } else {
            return Err(invalid(
                "coframe",
                format!("{} names for dimension {}", self.coframe.len(), self.dimension),
            ));
        };
        let aux = self.auxiliaries.iter().map(|a| a.name.clone()).collect();
        Coframe::with_auxiliaries(names, aux).map_err(|e| invalid("coframe", e.to_string()))
    }

    fn form(&self, cf: &Arc<Coframe>, terms: &[TermDoc], degree: Option<usize>, path: &str) -> Result<Form> {
        let n = cf.dim();
        let degree = match (degree, terms.first()) {
            (Some(d), _) => d,
            (None, Some(t)) => t.indices.len() + t.aux.len(),
            (None, None) => return Err(invalid(path, "empty form has no degree")),
        };
        let mut out = Vec::new();
        for (k, t) in terms.iter().enumerate() {
            let here = format!("{path}[{k}]");
            if let Some(&bad) = t.indices.iter().find(|&&i| i == 0 || i > n) {
                return Err(invalid(format!("{here}.indices"), format!("index {bad} out of range 1..={n}")));
            }
            if t.indices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("{here}.indices"), "multi-index must be strictly increasing"));
            }
            let mut symbols: Vec<usize> = t.indices.iter().map(|i| i - 1).collect();
            let mut last = None;
            for name in &t.aux {
                let k = cf
                    .aux_by_name(name)
                    .ok_or_else(|| invalid(format!("{here}.aux"), format!("unknown auxiliary `{name}`")))?;
                if last.is_some_and(|l| l >= k) {
                    return Err(invalid(format!("{here}.aux"), "auxiliaries must follow declaration order"));
                }
                last = Some(k);
                symbols.push(cf.aux_symbol(k));
            }
            if symbols.len() != degree {
                return Err(invalid(here, format!("term of degree {} in a form of degree {degree}", symbols.len())));
            }
            out.push((symbols, t.coeff.clone()));
        }
        Form::from_terms(cf, degree, out).map_err(|e| invalid(path, e.to_string()))
    }

    pub fn build(&self) -> Result<System> {
        let cf = self.coframe()?;
        let n = cf.dim();
        let mut sd = StructureDifferential::flat(&cf);
        let mut seen = vec![false; n];
        for (k, s) in self.structure.iter().enumerate() {
            let path = format!("structure[{k}]");
            if s.index == 0 || s.index > n {
                return Err(invalid(format!("{path}.index"), format!("index {} out of range 1..={n}", s.index)));
            }
            if std::mem::replace(&mut seen[s.index - 1], true) {
                return Err(invalid(format!("{path}.index"), format!("duplicate entry for index {}", s.index)));
            }
            let d = self.form(&cf, &s.terms, Some(2), &format!("{path}.terms"))?;
            sd.set(s.index - 1, d).map_err(|e| invalid(&path, e.to_string()))?;
        }
        for (k, a) in self.auxiliaries.iter().enumerate() {
            let path = format!("auxiliaries[{k}]");
            let value = self.form(&cf, &a.value, Some(1), &format!("{path}.value"))?;
            let diff = self.form(&cf, &a.differential, Some(2), &format!("{path}.differential"))?;
            if value.uses_auxiliary() {
                return Err(invalid(format!("{path}.value"), "point value must not use auxiliaries"));
            }
            sd.declare_auxiliary(k, value, diff).map_err(|e| invalid(&path, e.to_string()))?;
        }
        let gens = self
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| {
                let f = self.form(&cf, g, None, &format!("generators[{k}]"))?;
                if f.degree() == 0 {
                    return Err(invalid(format!("generators[{k}]"), "0-forms are not allowed as generators"));
                }
                Ok(f)
            })
            .collect::<Result<Vec<_>>>()?;
        let gs = GeneratorSet::new(gens, sd.clone()).map_err(|e| invalid("generators", e.to_string()))?;

        let flag = match &self.flag {
            None => None,
            Some(vs) => {
                if let Some(k) = vs.iter().position(|v| v.len() != n) {
                    return Err(invalid(format!("flag[{k}]"), format!("vector must have {n} components")));
                }
                let basis = vs.iter().map(|v| Vector(v.clone())).collect();
                Some(Flag::new(n, basis).map_err(|e| invalid("flag", e.to_string()))?)
            }
        };
        let split = match &self.split {
            None => None,
            Some(s) => {
                let zero_based = |xs: &[usize], what: &str| -> Result<Vec<usize>> {
                    xs.iter()
                        .map(|&i| {
                            if i == 0 || i > n {
                                Err(invalid(format!("split.{what}"), format!("index {i} out of range 1..={n}")))
                            } else {
                                Ok(i - 1)
                            }
                        })
                        .collect()
                };
                let ind = zero_based(&s.independence, "independence")?;
                let comp = zero_based(&s.complement, "complement")?;
                Some(
                    CoframeSplit::from_indices(&cf, &ind, &comp)
                        .map_err(|e| invalid("split", e.to_string()))?,
                )
            }
        };
        Ok(System {
            coframe: cf,
            sd,
            gs,
            flag,
            split,
        })
    }
}

/// Curvature file: independent components, symmetry-completed on load.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureDoc {
    pub m: usize,
    pub entries: Vec<(usize, usize, usize, usize, Scalar)>,
}

impl CurvatureDoc {
    pub fn from_tensor(r: &RiemannTensor) -> Self {
        CurvatureDoc {
            m: r.m(),
            entries: r.independent_entries(),
        }
    }

    pub fn to_tensor(&self) -> Result<RiemannTensor> {
        RiemannTensor::from_entries(self.m, &self.entries)
    }
}

/// Second fundamental form file: one row per normal direction with entries
/// `h_a11, h_a12, …, h_amm` (`i ≤ j`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SecondFundamentalDoc {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub h: Vec<Vec<Scalar>>,
}

impl SecondFundamentalDoc {
    pub fn from_form(h: &SecondFundamentalForm) -> Self {
        SecondFundamentalDoc {
            m: h.m(),
            n: h.n(),
            h: h.to_upper(),
        }
    }

    pub fn to_form(&self) -> Result<SecondFundamentalForm> {
        SecondFundamentalForm::from_upper(self.m, self.n, &self.h)
    }
}

/// Cartan-lemma input: 1-forms as coefficient rows over a coframe of the
/// given dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaDoc {
    pub dimension: usize,
    pub theta: Vec<Vec<Scalar>>,
    pub omega: Vec<Vec<Scalar>>,
}

impl LemmaDoc {
    pub fn forms(&self) -> Result<(Vec<Form>, Vec<Form>)> {
        if self.dimension == 0 {
            return Err(invalid("dimension", "must be positive"));
        }
        let cf = Coframe::standard(self.dimension);
        let conv = |rows: &[Vec<Scalar>], what: &str| -> Result<Vec<Form>> {
            rows.iter()
                .enumerate()
                .map(|(k, r)| {
                    if r.len() != self.dimension {
                        Err(invalid(format!("{what}[{k}]"), format!("expected {} coefficients", self.dimension)))
                    } else {
                        Ok(Form::one_form(&cf, r))
                    }
                })
                .collect()
        };
        Ok((conv(&self.theta, "theta")?, conv(&self.omega, "omega")?))
    }
}
