//! Cartan characters of an integral flag, tableau extraction relative to a
//! coframe split, the linearized codimension of the variety of integral
//! elements, and the resulting involutivity verdict.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{subsets, Coframe, Form, Vector};
use crate::ideal::{integrality_violation, polar_dim, Flag, GeneratorSet, IntegralElement};
use crate::linalg::{inverse, rank, RowSpace, SparseEchelon};
use crate::par::{self, Execution};
use crate::scalar::Scalar;

/// Coframe `ω_1..ω_n, π_1..π_s` at the point: the candidate element is the
/// annihilator of the `π`'s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoframeSplit {
    independence: Vec<Form>,
    complement: Vec<Form>,
    /// Dual vectors `e_1..e_n` of the independence forms.
    e: Vec<Vector>,
    /// Dual vectors `f_1..f_s` of the complement forms.
    f: Vec<Vector>,
}

impl CoframeSplit {
    /// The 1-forms must be pure and together form a basis of the cotangent
    /// space.
    pub fn new(independence: Vec<Form>, complement: Vec<Form>) -> Result<Self> {
        let all: Vec<&Form> = independence.iter().chain(&complement).collect();
        let Some(first) = all.first() else {
            return Err(Error::InvalidSplit);
        };
        let dim = first.coframe().dim();
        if all.len() != dim || all.iter().any(|f| f.degree() != 1 || f.uses_auxiliary()) {
            return Err(Error::InvalidSplit);
        }
        let rows: Vec<Vec<Scalar>> = all.iter().map(|f| f.one_form_coefficients()).collect();
        let inv = inverse(&rows).ok_or(Error::InvalidSplit)?;
        // column k of the inverse is the vector dual to the k-th form
        let dual: Vec<Vector> = (0..dim)
            .map(|k| Vector((0..dim).map(|mu| inv[mu][k].clone()).collect()))
            .collect();
        let n = independence.len();
        Ok(CoframeSplit {
            e: dual[..n].to_vec(),
            f: dual[n..].to_vec(),
            independence,
            complement,
        })
    }

    /// Split by coordinate indices (0-based); their union must be every index.
    pub fn from_indices(cf: &std::sync::Arc<Coframe>, independence: &[usize], complement: &[usize]) -> Result<Self> {
        let dim = cf.dim();
        let mut seen = vec![false; dim];
        for &i in independence.iter().chain(complement) {
            if i >= dim || seen[i] {
                return Err(Error::InvalidSplit);
            }
            seen[i] = true;
        }
        Self::new(
            independence.iter().map(|&i| Form::basis(cf, i)).collect(),
            complement.iter().map(|&i| Form::basis(cf, i)).collect(),
        )
    }

    /// A split whose complement annihilates the span of the flag: the
    /// complement is a kernel basis, the independence forms are coordinate
    /// forms completing it.
    pub fn adapted(cf: &std::sync::Arc<Coframe>, flag: &Flag) -> Result<Self> {
        let dim = cf.dim();
        let rows: Vec<Vec<Scalar>> = flag.basis().iter().map(|v| v.0.clone()).collect();
        let annihilator = RowSpace::from_rows(dim, rows.iter()).kernel();
        let mut span = RowSpace::from_rows(dim, annihilator.iter());
        let mut independence = Vec::new();
        for mu in 0..dim {
            let row = Vector::basis(dim, mu).0;
            if span.insert(&row) {
                independence.push(Form::basis(cf, mu));
            }
        }
        let complement = annihilator.iter().map(|c| Form::one_form(cf, c)).collect();
        Self::new(independence, complement)
    }

    pub fn independence(&self) -> &[Form] {
        &self.independence
    }

    pub fn complement(&self) -> &[Form] {
        &self.complement
    }

    pub fn dual_independence(&self) -> &[Vector] {
        &self.e
    }

    pub fn dual_complement(&self) -> &[Vector] {
        &self.f
    }

    /// Checks that the flag spans exactly the annihilator of the complement.
    pub fn check_flag(&self, flag: &Flag) -> Result<()> {
        if flag.len() != self.independence.len() {
            return Err(Error::FlagSplitMismatch(format!(
                "flag has length {}, split has {} independence forms",
                flag.len(),
                self.independence.len()
            )));
        }
        for (i, v) in flag.basis().iter().enumerate() {
            for (a, pi) in self.complement.iter().enumerate() {
                if !pi.evaluate(std::slice::from_ref(v))?.is_zero() {
                    return Err(Error::FlagSplitMismatch(format!(
                        "complement form {} is nonzero on flag vector {}",
                        a + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ordinary,
    NotOrdinary,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Ordinary => "ordinary",
            Verdict::NotOrdinary => "not_ordinary",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterReport {
    pub ambient_dim: usize,
    pub c: Vec<usize>,
    pub polar_dims: Vec<usize>,
    pub sum_c: usize,
    pub tangent_codim: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tableau_c: Option<Vec<usize>>,
    pub verdict: Verdict,
}

/// `c_k = dim − dim H(E_k)` for `k = 0..n−1`.
pub fn polar_codims(flag: &Flag, gs: &GeneratorSet, exec: Execution) -> Result<Vec<usize>> {
    flag.check_integral(gs)?;
    let ks: Vec<usize> = (0..flag.len()).collect();
    par::map(exec, &ks, |&k| polar_dim(&flag.element(k), gs, Execution::Sequential).map(|h| gs.dim() - h))
        .into_iter()
        .collect()
}

/// The `π`-linear coefficients of one generator written in the coframe
/// `ω'_1..ω'_n, π_1..π_s`, where `ω'` is dual to the flag on `E` and vanishes
/// on the complement. Entry `(J, coeffs)` stands for `Σ_a coeffs[a] π_a ∧ ω'_J`.
fn tableau_entries(g: &Form, generator: usize, flag: &Flag, split: &CoframeSplit) -> Result<Vec<TableauEntry>> {
    let n = flag.len();
    let s = split.f.len();
    let target = Coframe::standard(n + s);
    // ω_μ = Σ_i ω_μ(e_i) ω'_i + Σ_a ω_μ(f_a) π_a
    let images: Vec<Form> = (0..g.coframe().dim())
        .map(|mu| {
            let coeffs: Vec<Scalar> = flag
                .basis()
                .iter()
                .chain(&split.f)
                .map(|v| v.0[mu].clone())
                .collect();
            Form::one_form(&target, &coeffs)
        })
        .collect();
    let expanded = g.substitute(&target, |mu| Some(images[mu].clone()))?;
    let mut out: Vec<TableauEntry> = Vec::new();
    for (key, c) in expanded.terms() {
        let syms = key.to_vec();
        let pis: Vec<usize> = syms.iter().copied().filter(|&x| x >= n).collect();
        match pis.len() {
            0 => {
                return Err(Error::MalformedExpansion {
                    generator,
                    indices: syms.iter().map(|i| i + 1).collect(),
                })
            }
            1 => {
                // c·π_a∧ω'_J after moving π_a to the front
                let a = pis[0];
                let j: Vec<usize> = syms.iter().copied().filter(|&x| x < n).collect();
                let pos = syms.iter().position(|&x| x == a).unwrap();
                let c = if pos % 2 == 1 { -c } else { c.clone() };
                let slot = match out.iter().position(|(k, _)| *k == j) {
                    Some(i) => i,
                    None => {
                        out.push((j, vec![Scalar::zero(); s]));
                        out.len() - 1
                    }
                };
                out[slot].1[a - n] += c;
            }
            _ => {}
        }
    }
    Ok(out)
}

/// `(J, coeffs)` standing for `Σ_a coeffs[a] π_a ∧ ω'_J` (0-based `J`).
pub type TableauEntry = (Vec<usize>, Vec<Scalar>);

/// Tableau entries of every generator, in generator order.
pub fn tableau(gs: &GeneratorSet, split: &CoframeSplit, flag: &Flag, exec: Execution) -> Result<Vec<Vec<TableauEntry>>> {
    split.check_flag(flag)?;
    let jobs: Vec<usize> = (0..gs.len()).collect();
    par::map(exec, &jobs, |&gi| tableau_entries(&gs.values()[gi], gi + 1, flag, split))
        .into_iter()
        .collect()
}

/// Characters from the tableau: `c_p` is the rank of the `π`-coefficient
/// forms `π_ρ^J` with every index of `J` among the first `p` flag vectors
/// (degree-1 generators contribute their own `π` part for every `p`).
pub fn tableau_characters(gs: &GeneratorSet, split: &CoframeSplit, flag: &Flag, exec: Execution) -> Result<Vec<usize>> {
    let entries: Vec<TableauEntry> = tableau(gs, split, flag, exec)?.into_iter().flatten().collect();
    let s = split.f.len();
    Ok((0..flag.len())
        .map(|p| {
            let rows: Vec<Vec<Scalar>> = entries
                .iter()
                .filter(|(j, _)| j.iter().all(|&i| i < p))
                .map(|(_, c)| c.clone())
                .collect();
            rank(&rows).min(s)
        })
        .collect())
}

/// Rows of the first-order system for `g(e_J(t)) = 0` with
/// `e_i(t) = e_i + Σ_a t_{ai} f_a`; variable `(a, i)` has column `a·n + i`.
fn tangent_rows(g: &Form, basis: &[Vector], complement: &[Vector]) -> Result<Vec<Vec<(usize, Scalar)>>> {
    let n = basis.len();
    let d = g.degree();
    let mut rows = Vec::new();
    if d > n {
        return Ok(rows);
    }
    // ψ_{A}(v) = g(v, e_A) for every (d−1)-subset A, evaluated on each f_a
    let mut cache: std::collections::HashMap<Vec<usize>, Vec<Scalar>> = std::collections::HashMap::new();
    for j in subsets(n, d) {
        let mut row = Vec::new();
        for (slot, &i) in j.iter().enumerate() {
            let rest: Vec<usize> = j.iter().copied().filter(|&x| x != i).collect();
            if !cache.contains_key(&rest) {
                let mut vals = Vec::with_capacity(complement.len());
                for f in complement {
                    let mut args = vec![f.clone()];
                    args.extend(rest.iter().map(|&r| basis[r].clone()));
                    vals.push(g.evaluate(&args)?);
                }
                cache.insert(rest.clone(), vals);
            }
            for (a, val) in cache[&rest].iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                let v = if slot % 2 == 1 { -val } else { val.clone() };
                row.push((a * n + i, v));
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rank of the linearization at `E` of the equations of integral `n`-planes,
/// in graph coordinates over the complement `f_1..f_s`.
pub fn tangent_codim(e: &IntegralElement, gs: &GeneratorSet, complement: &[Vector], exec: Execution) -> Result<usize> {
    if let Some((generator, indices)) = integrality_violation(e, gs) {
        return Err(Error::NotIntegral { generator, indices });
    }
    let mut all: Vec<Vec<Scalar>> = e.basis().iter().map(|v| v.0.clone()).collect();
    all.extend(complement.iter().map(|v| v.0.clone()));
    if all.len() != gs.dim() || rank(&all) != gs.dim() {
        return Err(Error::InvalidSplit);
    }
    let jobs: Vec<usize> = (0..gs.len()).collect();
    let per_gen = par::map(exec, &jobs, |&gi| tangent_rows(&gs.values()[gi], e.basis(), complement));
    let mut echelon = SparseEchelon::new();
    for rows in per_gen {
        for row in rows? {
            if row.is_empty() {
                continue;
            }
            let lcm = row
                .iter()
                .fold(num_bigint::BigInt::from(1), |acc, (_, v)| num_integer::Integer::lcm(&acc, v.denom()));
            echelon.insert(row.iter().map(|(c, v)| (*c, v.numer() * (&lcm / v.denom()))));
        }
    }
    Ok(echelon.rank())
}

/// Coordinate vectors completing `E` to a basis, lowest index first.
pub fn standard_complement(e: &IntegralElement, n: usize) -> Vec<Vector> {
    let mut span = RowSpace::from_rows(n, e.basis().iter().map(|v| &v.0));
    (0..n)
        .map(|mu| Vector::basis(n, mu))
        .filter(|v| span.insert(&v.0))
        .collect()
}

/// Characters, linearized codimension and verdict for an integral flag of
/// a closed system. With a split, the tableau characters are computed as a
/// cross-check and any disagreement makes the verdict inconclusive.
pub fn cartan_verdict(flag: &Flag, gs: &GeneratorSet, split: Option<&CoframeSplit>, exec: Execution) -> Result<CharacterReport> {
    let c = polar_codims(flag, gs, exec)?;
    let dim = gs.dim();
    let polar_dims = c.iter().map(|ck| dim - ck).collect();
    let sum_c = c.iter().sum();
    let top = flag.element(flag.len());
    let (tableau_c, complement) = match split {
        Some(sp) => (
            Some(tableau_characters(gs, sp, flag, exec)?),
            sp.dual_complement().to_vec(),
        ),
        None => (None, standard_complement(&top, dim)),
    };
    let tangent = tangent_codim(&top, gs, &complement, exec)?;
    let verdict = if tableau_c.as_ref().is_some_and(|t| *t != c) {
        Verdict::Inconclusive
    } else if tangent == sum_c {
        Verdict::Ordinary
    } else {
        Verdict::NotOrdinary
    };
    Ok(CharacterReport {
        ambient_dim: dim,
        c,
        polar_dims,
        sum_c,
        tangent_codim: tangent,
        tableau_c,
        verdict,
    })
}
