//! The local isometric embedding system at a point.
//!
//! For an `m`-manifold with curvature `R` and a candidate second fundamental
//! form `h` into `E^N`, [`BcjsSystem::build`] assembles the exterior system on
//! `M × F_m(E^N)` at one point: coframe blocks `η_i, ω_i, ω_a, ω_ij, ω_ai`,
//! auxiliaries `η_ij` (value 0, differential `Σ_{k<l} R_ijkl η_k∧η_l`), the
//! 1-form generators `ω_i − η_i, ω_a, ω_ij − η_ij` closed under `d`, and the
//! flag `e_p` with `η_p = ω_p = 1` and `ω_ai` component `h_aip`.
//! [`certify`] then runs Cartan's test on that flag and checks every count
//! against its closed form.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cartan::{cartan_verdict, tableau, CharacterReport, CoframeSplit, Verdict};
use crate::curvature::{dim_km, gauss_map, in_h, random_h_in_h, RiemannTensor, SecondFundamentalForm};
use crate::error::{Error, Result};
use crate::exterior::{Coframe, Form, StructureDifferential, Vector};
use crate::ideal::{is_integral, Flag, GeneratorSet};
use crate::lemma;
use crate::linalg::RowSpace;
use crate::par::{self, Execution};
use crate::rng::Rng;
use crate::sampling::random_form;
use crate::scalar::Scalar;

/// Symbol layout of the ambient coframe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub m: usize,
    pub n: usize,
}

impl Layout {
    pub fn codim(&self) -> usize {
        self.n - self.m
    }

    fn pairs(&self) -> usize {
        self.m * (self.m - 1) / 2
    }

    /// `s = N(m+1) − m(m+1)/2`, the fibre dimension.
    pub fn s(&self) -> usize {
        self.n * (self.m + 1) - self.m * (self.m + 1) / 2
    }

    pub fn ambient_dim(&self) -> usize {
        self.m + self.s()
    }

    pub fn eta(&self, i: usize) -> usize {
        i
    }

    pub fn omega(&self, i: usize) -> usize {
        self.m + i
    }

    /// `ω_a` for the normal index `a` in `0..N−m`.
    pub fn normal(&self, a: usize) -> usize {
        2 * self.m + a
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        // pairs (0,1), (0,2), …, (1,2), …
        i * (2 * self.m - i - 1) / 2 + (j - i - 1)
    }

    /// `ω_ij` for `i < j`.
    pub fn rotation(&self, i: usize, j: usize) -> usize {
        2 * self.m + self.codim() + self.pair_index(i, j)
    }

    /// `ω_ai`.
    pub fn mixed(&self, a: usize, i: usize) -> usize {
        2 * self.m + self.codim() + self.pairs() + a * self.m + i
    }

    /// Auxiliary index of `η_ij` for `i < j`.
    pub fn aux(&self, i: usize, j: usize) -> usize {
        self.pair_index(i, j)
    }

    fn names(&self) -> (Vec<String>, Vec<String>) {
        let m = self.m;
        let mut names: Vec<String> = (1..=m).map(|i| format!("eta{i}")).collect();
        names.extend((1..=self.n).map(|i| format!("w{i}")));
        let mut pairs = Vec::new();
        for i in 1..=m {
            for j in (i + 1)..=m {
                pairs.push((i, j));
            }
        }
        names.extend(pairs.iter().map(|(i, j)| format!("w{i}_{j}")));
        for a in (m + 1)..=self.n {
            names.extend((1..=m).map(|i| format!("w{a}_{i}")));
        }
        let aux = pairs.iter().map(|(i, j)| format!("eta{i}_{j}")).collect();
        (names, aux)
    }
}

/// Which block of generators of the closed system a form comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Tangent,
    Normal,
    Rotation,
    DTangent,
    DNormal,
    DRotation,
}

#[derive(Clone, Debug)]
pub struct BcjsSystem {
    pub layout: Layout,
    pub curvature: RiemannTensor,
    pub h: SecondFundamentalForm,
    pub coframe: Arc<Coframe>,
    pub sd: StructureDifferential,
    /// The `s` 1-forms `ω_i − η_i, ω_a, ω_ij − η_ij, π_ai` whose common
    /// annihilator is the candidate element.
    pub annihilators: Vec<Form>,
    /// The closed ideal handed to Cartan's test.
    pub gs: GeneratorSet,
    pub families: Vec<Family>,
    pub flag: Flag,
    pub split: CoframeSplit,
}

fn check_thresholds(m: usize, n: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::Threshold(format!("m = {m} must be at least 2")));
    }
    let need = m * (m + 1) / 2;
    if n < need {
        return Err(Error::Threshold(format!("N = {n} is below m(m+1)/2 = {need}")));
    }
    Ok(())
}

/// Structure differential of the ambient coframe; `gauge` supplies the
/// `ω_ab` 1-forms (skew in `a, b`) that are otherwise set to zero.
fn structure(
    lay: &Layout,
    cf: &Arc<Coframe>,
    r: &RiemannTensor,
    gauge: Option<&dyn Fn(usize, usize) -> Form>,
) -> Result<StructureDifferential> {
    let (m, codim) = (lay.m, lay.codim());
    let b = |s: usize| Form::basis(cf, s);
    let w = |x: &Form, y: &Form| x.wedge(y).expect("same coframe");
    // ω_ij as a signed form, including i ≥ j
    let rot = |i: usize, j: usize| -> Form {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => b(lay.rotation(i, j)),
            std::cmp::Ordering::Greater => b(lay.rotation(j, i)).neg(),
            std::cmp::Ordering::Equal => Form::zero(cf, 1),
        }
    };
    let mut sd = StructureDifferential::flat(cf);
    for i in 0..m {
        // dω_i = −Σ_j ω_ij∧ω_j + Σ_a ω_ai∧ω_a
        let mut d = Form::zero(cf, 2);
        for j in 0..m {
            d = d.sub(&w(&rot(i, j), &b(lay.omega(j))))?;
        }
        for a in 0..codim {
            d = d.add(&w(&b(lay.mixed(a, i)), &b(lay.normal(a))))?;
        }
        sd.set(lay.omega(i), d)?;
    }
    for a in 0..codim {
        // dω_a = −Σ_i ω_ai∧ω_i − Σ_b ω_ab∧ω_b
        let mut d = Form::zero(cf, 2);
        for i in 0..m {
            d = d.sub(&w(&b(lay.mixed(a, i)), &b(lay.omega(i))))?;
        }
        if let Some(g) = gauge {
            for bb in 0..codim {
                d = d.sub(&w(&g(a, bb), &b(lay.normal(bb))))?;
            }
        }
        sd.set(lay.normal(a), d)?;
    }
    for i in 0..m {
        for j in (i + 1)..m {
            // dω_ij = −Σ_k ω_ik∧ω_kj + Σ_a ω_ai∧ω_aj
            let mut d = Form::zero(cf, 2);
            for k in 0..m {
                d = d.sub(&w(&rot(i, k), &rot(k, j)))?;
            }
            for a in 0..codim {
                d = d.add(&w(&b(lay.mixed(a, i)), &b(lay.mixed(a, j))))?;
            }
            sd.set(lay.rotation(i, j), d)?;
        }
    }
    for a in 0..codim {
        for i in 0..m {
            // dω_ai = −Σ_k ω_ak∧ω_ki − Σ_b ω_ab∧ω_bi
            let mut d = Form::zero(cf, 2);
            for k in 0..m {
                d = d.sub(&w(&b(lay.mixed(a, k)), &rot(k, i)))?;
            }
            if let Some(g) = gauge {
                for bb in 0..codim {
                    d = d.sub(&w(&g(a, bb), &b(lay.mixed(bb, i))))?;
                }
            }
            sd.set(lay.mixed(a, i), d)?;
        }
    }
    for i in 0..m {
        for j in (i + 1)..m {
            // dη_ij = Σ_{k<l} R_ijkl η_k∧η_l
            let mut d = Form::zero(cf, 2);
            for k in 0..m {
                for l in (k + 1)..m {
                    let c = r.get(i, j, k, l);
                    if !c.is_zero() {
                        d = d.add(&w(&b(lay.eta(k)), &b(lay.eta(l))).scale(c))?;
                    }
                }
            }
            sd.declare_auxiliary(lay.aux(i, j), Form::zero(cf, 1), d)?;
        }
    }
    Ok(sd)
}

impl BcjsSystem {
    pub fn build(r: &RiemannTensor, h: &SecondFundamentalForm) -> Result<Self> {
        Self::build_with_gauge(r, h, None)
    }

    fn build_with_gauge(
        r: &RiemannTensor,
        h: &SecondFundamentalForm,
        gauge: Option<&dyn Fn(&Arc<Coframe>, usize, usize) -> Form>,
    ) -> Result<Self> {
        let (m, n) = (h.m(), h.n());
        check_thresholds(m, n)?;
        if r.m() != m {
            return Err(Error::Shape(format!("curvature has m = {}, h has m = {m}", r.m())));
        }
        if let Some(msg) = r.violation() {
            return Err(Error::InvalidCurvature(msg));
        }
        let lay = Layout { m, n };
        let (names, aux) = lay.names();
        let cf = Coframe::with_auxiliaries(names, aux)?;
        let sd = match gauge {
            Some(g) => structure(&lay, &cf, r, Some(&|a, b| g(&cf, a, b)))?,
            None => structure(&lay, &cf, r, None)?,
        };
        let b = |s: usize| Form::basis(&cf, s);
        let aux_form = |i: usize, j: usize| Form::basis(&cf, cf.aux_symbol(lay.aux(i, j)));

        let mut gens = Vec::new();
        let mut families = Vec::new();
        for i in 0..m {
            gens.push(b(lay.omega(i)).sub(&b(lay.eta(i)))?);
            families.push(Family::Tangent);
        }
        for a in 0..lay.codim() {
            gens.push(b(lay.normal(a)));
            families.push(Family::Normal);
        }
        for i in 0..m {
            for j in (i + 1)..m {
                gens.push(b(lay.rotation(i, j)).sub(&aux_form(i, j))?);
                families.push(Family::Rotation);
            }
        }
        let mut annihilators = gens.clone();
        let mut pis = Vec::new();
        for a in 0..lay.codim() {
            for i in 0..m {
                let mut pi = b(lay.mixed(a, i));
                for j in 0..m {
                    pi = pi.sub(&b(lay.omega(j)).scale(h.get(a, i, j)))?;
                }
                pis.push(pi);
            }
        }
        annihilators.extend(pis.iter().cloned());

        let base = GeneratorSet::new(gens.clone(), sd.clone())?;
        let gs = base.close()?;
        for g in &gs.generators()[gens.len()..] {
            let origin = gens
                .iter()
                .position(|x| sd.d(x).map(|d| d == *g).unwrap_or(false))
                .expect("closure appends derivatives of generators");
            families.push(match families[origin] {
                Family::Tangent => Family::DTangent,
                Family::Normal => Family::DNormal,
                _ => Family::DRotation,
            });
        }

        let dim = lay.ambient_dim();
        let flag_vectors: Vec<Vector> = (0..m)
            .map(|p| {
                let mut v = Vector::zero(dim);
                v.0[lay.eta(p)] = Scalar::one();
                v.0[lay.omega(p)] = Scalar::one();
                for a in 0..lay.codim() {
                    for i in 0..m {
                        v.0[lay.mixed(a, i)] = h.get(a, i, p).clone();
                    }
                }
                v
            })
            .collect();
        let flag = Flag::new(dim, flag_vectors)?;
        let independence = (0..m).map(|i| b(lay.omega(i))).collect();
        let complement = annihilators
            .iter()
            .map(|f| sd.resolve(f))
            .collect::<Result<Vec<_>>>()?;
        let split = CoframeSplit::new(independence, complement)?;

        Ok(BcjsSystem {
            layout: lay,
            curvature: r.clone(),
            h: h.clone(),
            coframe: cf,
            sd,
            annihilators,
            gs,
            families,
            flag,
            split,
        })
    }

    /// `γ(h) − R`.
    pub fn gauss_residual(&self) -> RiemannTensor {
        let mut neg = RiemannTensor::zero(self.layout.m);
        let m = self.layout.m;
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for l in 0..m {
                        neg.set_raw(i, j, k, l, -self.curvature.get(i, j, k, l));
                    }
                }
            }
        }
        gauss_map(&self.h).add(&neg)
    }

    /// Whether the flag's top element is an integral element of the closed
    /// system.
    pub fn top_is_integral(&self) -> bool {
        is_integral(&self.flag.element(self.layout.m), &self.gs)
    }
}

/// `c_p = N + m(m−1)/2 + (N−m)p + mp(m−p)/2` for `p = 0..m−1`.
pub fn characters_closed_form(m: usize, n: usize) -> Vec<usize> {
    (0..m)
        .map(|p| n + m * (m - 1) / 2 + (n - m) * p + m * p * (m - p) / 2)
        .collect()
}

/// `Nm(m+1)/2 + m²(m²−1)/12`.
pub fn sum_c_closed_form(m: usize, n: usize) -> usize {
    n * m * (m + 1) / 2 + dim_km(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimsReport {
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "dim_Fm")]
    pub dim_fm: usize,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    #[serde(rename = "dim_Km")]
    pub dim_km: usize,
    #[serde(rename = "dim_Z")]
    pub dim_z: usize,
    pub dim_grassmannian: usize,
    pub sum_c_closed_form: usize,
    pub grassmannian_codim: usize,
}

/// Dimension bookkeeping of the embedding problem from closed forms.
pub fn dims(m: usize, n: usize) -> Result<DimsReport> {
    if m < 2 || n < m {
        return Err(Error::Threshold(format!("need m ≥ 2 and N ≥ m, got m = {m}, N = {n}")));
    }
    let dim_fm = n * (m + 1) - m * (m + 1) / 2;
    let dim_h = (n - m) * m * (m + 1) / 2;
    let dim_km = dim_km(m);
    let dim_z = m + dim_fm + dim_h - dim_km;
    let dim_grassmannian = m * dim_fm + dim_fm + m;
    Ok(DimsReport {
        m,
        n,
        dim_fm,
        dim_h,
        dim_km,
        dim_z,
        dim_grassmannian,
        sum_c_closed_form: sum_c_closed_form(m, n),
        grassmannian_codim: dim_grassmannian - dim_z,
    })
}

/// Rank counts at one `p`: 1-form blocks `ω_i − η_i`, `ω_a`, `ω_ij − η_ij`,
/// then the new tableau rank contributed by `dω_i, dω_a` and by `dβ_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRankRow {
    pub p: usize,
    pub counts: [usize; 5],
    pub formula: [usize; 5],
    pub total: usize,
}

pub fn family_rank_formula(m: usize, n: usize, p: usize) -> [usize; 5] {
    [
        m,
        n - m,
        m * (m - 1) / 2,
        (n - m) * p,
        p * (m - p) * (m - p).saturating_sub(1) / 2 + p * (p + 1) * (m - p) / 2,
    ]
}

/// Incremental tableau ranks per family for `p = 0..m−1`, checked against
/// the closed-form rows.
pub fn family_ranks(sys: &BcjsSystem, exec: Execution) -> Result<Vec<FamilyRankRow>> {
    let Layout { m, n } = sys.layout;
    let tab = tableau(&sys.gs, &sys.split, &sys.flag, exec)?;
    let s = sys.split.complement().len();
    let groups: [&[Family]; 5] = [
        &[Family::Tangent],
        &[Family::Normal],
        &[Family::Rotation],
        &[Family::DTangent, Family::DNormal],
        &[Family::DRotation],
    ];
    let mut out = Vec::new();
    for p in 0..m {
        let mut span = RowSpace::new(s);
        let mut counts = [0usize; 5];
        for (row, fams) in groups.iter().enumerate() {
            let before = span.rank();
            for (entries, fam) in tab.iter().zip(&sys.families) {
                if !fams.contains(fam) {
                    continue;
                }
                for (j, coeffs) in entries {
                    if j.iter().all(|&x| x < p) {
                        span.insert(coeffs);
                    }
                }
            }
            counts[row] = span.rank() - before;
        }
        let formula = family_rank_formula(m, n, p);
        if let Some(row) = (0..5).find(|&k| counts[k] != formula[k]) {
            return Err(Error::Certification {
                what: format!("family rank row {} at p = {p}", row + 1),
                expected: formula[row].to_string(),
                actual: counts[row].to_string(),
            });
        }
        out.push(FamilyRankRow {
            p,
            counts,
            formula,
            total: counts.iter().sum(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub report: CharacterReport,
    pub dims: DimsReport,
    pub family_ranks: Vec<FamilyRankRow>,
}

fn require(what: &str, expected: impl ToString, actual: impl ToString) -> Result<()> {
    let (e, a) = (expected.to_string(), actual.to_string());
    if e == a {
        Ok(())
    } else {
        Err(Error::Certification {
            what: what.into(),
            expected: e,
            actual: a,
        })
    }
}

/// Runs Cartan's test on the flag and checks characters, their sum, the
/// linearized codimension and the dimension bookkeeping against closed forms.
pub fn certify(sys: &BcjsSystem, exec: Execution) -> Result<Certificate> {
    let Layout { m, n } = sys.layout;
    let residual = sys.gauss_residual();
    if !residual.is_zero() {
        let (i, j, k, l, v) = residual.independent_entries().remove(0);
        return Err(Error::Certification {
            what: format!("Gauss equation at R_{i}{j}{k}{l}"),
            expected: "0".into(),
            actual: v.to_string(),
        });
    }
    if !in_h(&sys.h) {
        return Err(Error::Threshold("h is not in the generic set H".into()));
    }
    let report = cartan_verdict(&sys.flag, &sys.gs, Some(&sys.split), exec)?;
    let closed = characters_closed_form(m, n);
    require("characters", format!("{closed:?}"), format!("{:?}", report.c))?;
    require(
        "tableau characters",
        format!("{closed:?}"),
        format!("{:?}", report.tableau_c.clone().unwrap_or_default()),
    )?;
    require("character sum", sum_c_closed_form(m, n), report.sum_c)?;
    require("linearized codimension", report.sum_c, report.tangent_codim)?;
    require("verdict", Verdict::Ordinary, report.verdict)?;
    let d = dims(m, n)?;
    require("grassmannian codimension", report.sum_c, d.grassmannian_codim)?;
    let family_ranks = family_ranks(sys, exec)?;
    Ok(Certificate {
        report,
        dims: d,
        family_ranks,
    })
}

/// Random `h ∈ H` and `R = γ(h)`; with `mismatch`, `R` is shifted by the
/// image of an independent second sample so that `γ(h) ≠ R`.
pub fn sample_pair(m: usize, n: usize, seed: u64, mismatch: bool) -> Result<(RiemannTensor, SecondFundamentalForm)> {
    check_thresholds(m, n)?;
    let h = random_h_in_h(m, n, seed)?;
    let mut r = gauss_map(&h);
    if mismatch {
        let mut k = 1u64;
        loop {
            let shift = gauss_map(&random_h_in_h(m, n, seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(k)))?);
            if !shift.is_zero() {
                r = r.add(&shift);
                break;
            }
            k += 1;
        }
    }
    Ok((r, h))
}

/// Certification for each seed, with `R = γ(h)` sampled per seed.
pub fn certify_seeds(m: usize, n: usize, seeds: &[u64], exec: Execution) -> Vec<Result<Certificate>> {
    par::map(exec, seeds, |&seed| {
        let (r, h) = sample_pair(m, n, seed, false)?;
        certify(&BcjsSystem::build(&r, &h)?, Execution::Sequential)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaugeCheck {
    pub unchanged: bool,
    pub diff: Option<String>,
}

/// Rebuilds the system with random skew `ω_ab` 1-forms in `dω_a` and `dω_ai`
/// and compares character reports.
pub fn gauge_invariance_check(sys: &BcjsSystem, seed: u64, exec: Execution) -> Result<GaugeCheck> {
    let codim = sys.layout.codim();
    let mut rng = Rng::new(seed);
    let cf = sys.coframe.clone();
    let mut table: Vec<Vec<Form>> = vec![vec![Form::zero(&cf, 1); codim]; codim];
    for a in 0..codim {
        for b in (a + 1)..codim {
            let mut f = random_form(&mut rng, &cf, 1, 3);
            while f.is_zero() {
                f = random_form(&mut rng, &cf, 1, 3);
            }
            table[b][a] = f.neg();
            table[a][b] = f;
        }
    }
    let gauge = move |target: &Arc<Coframe>, a: usize, b: usize| -> Form {
        table[a][b]
            .substitute(target, |_| None)
            .expect("same symbol count")
    };
    let perturbed = BcjsSystem::build_with_gauge(&sys.curvature, &sys.h, Some(&gauge))?;
    let before = cartan_verdict(&sys.flag, &sys.gs, Some(&sys.split), exec)?;
    let after = cartan_verdict(&perturbed.flag, &perturbed.gs, Some(&perturbed.split), exec)?;
    Ok(if before == after {
        GaugeCheck {
            unchanged: true,
            diff: None,
        }
    } else {
        GaugeCheck {
            unchanged: false,
            diff: Some(format!("{before:?} vs {after:?}")),
        }
    })
}

/// Solves the Cartan lemma for `Σ_i ω_ai ∧ ω_i = 0` restricted to the top
/// element, returning the recovered `h_a` matrices.
pub fn lemma_recovery(sys: &BcjsSystem) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let Layout { m, .. } = sys.layout;
    let basis = sys.flag.basis();
    let b = |s: usize| Form::basis(&sys.coframe, s);
    (0..sys.layout.codim())
        .map(|a| {
            let theta = (0..m)
                .map(|i| b(sys.layout.mixed(a, i)).restrict(basis))
                .collect::<Result<Vec<_>>>()?;
            let omega = (0..m)
                .map(|i| b(sys.layout.omega(i)).restrict(basis))
                .collect::<Result<Vec<_>>>()?;
            lemma::solve(&theta, &omega)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformalReport {
    pub m: usize,
    pub n: usize,
    pub required: usize,
    pub satisfied: bool,
    pub deficit: usize,
    pub generator_count: usize,
}

/// Checks `n ≥ m(m+1)/2 − 1` and counts the 1-forms `ω_i − Sη_i, ω_a` of the
/// conformal system.
pub fn conformal_threshold(m: usize, n: usize) -> Result<ConformalReport> {
    if m < 2 {
        return Err(Error::Threshold(format!("m = {m} must be at least 2")));
    }
    let required = m * (m + 1) / 2 - 1;
    Ok(ConformalReport {
        m,
        n,
        required,
        satisfied: n >= required,
        deficit: required.saturating_sub(n),
        generator_count: m + n.saturating_sub(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts() {
        let lay = Layout { m: 2, n: 3 };
        assert_eq!((lay.s(), lay.ambient_dim()), (6, 8));
        let lay = Layout { m: 3, n: 6 };
        assert_eq!((lay.s(), lay.ambient_dim()), (18, 21));
        assert_eq!(lay.mixed(2, 2), 20);
        assert_eq!(lay.rotation(1, 2), 11);
    }

    #[test]
    fn build_examples() {
        let (r, h) = sample_pair(2, 3, 1, false).unwrap();
        let sys = BcjsSystem::build(&r, &h).unwrap();
        assert_eq!(sys.coframe.dim(), 8);
        assert_eq!(sys.annihilators.len(), 6);
        let (r, h) = sample_pair(3, 6, 1, false).unwrap();
        let sys = BcjsSystem::build(&r, &h).unwrap();
        assert_eq!(sys.coframe.dim(), 21);
        assert_eq!(sys.annihilators.len(), 18);
        assert!(matches!(sample_pair(2, 2, 0, false), Err(Error::Threshold(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(characters_closed_form(2, 3), vec![4, 6]);
        assert_eq!(characters_closed_form(3, 6), vec![9, 15, 18]);
        assert_eq!(characters_closed_form(4, 10), vec![16, 28, 36, 40]);
        for m in 2..=6 {
            let n = m * (m + 1) / 2;
            assert_eq!(characters_closed_form(m, n).iter().sum::<usize>(), sum_c_closed_form(m, n));
            for p in 0..m {
                assert_eq!(family_rank_formula(m, n, p).iter().sum::<usize>(), characters_closed_form(m, n)[p]);
            }
        }
    }

    #[test]
    fn dims_examples() {
        let d = dims(2, 3).unwrap();
        assert_eq!((d.dim_fm, d.dim_h, d.dim_km, d.dim_z, d.grassmannian_codim), (6, 3, 1, 10, 10));
        let d = dims(3, 6).unwrap();
        assert_eq!((d.dim_fm, d.dim_h, d.dim_km, d.dim_z, d.grassmannian_codim), (18, 18, 6, 33, 42));
        let d = dims(4, 10).unwrap();
        assert_eq!((d.dim_fm, d.dim_z, d.grassmannian_codim), (40, 84, 120));
    }

    #[test]
    fn certify_small_cases() {
        for (m, n, sum) in [(2, 3, 10), (3, 6, 42)] {
            let (r, h) = sample_pair(m, n, 7, false).unwrap();
            let sys = BcjsSystem::build(&r, &h).unwrap();
            assert!(sys.top_is_integral());
            let cert = certify(&sys, Execution::Sequential).unwrap();
            assert_eq!(cert.report.sum_c, sum);
            assert_eq!(cert.report.verdict, Verdict::Ordinary);
        }
    }

    #[test]
    fn family_ranks_for_surfaces() {
        let (r, h) = sample_pair(2, 3, 3, false).unwrap();
        let sys = BcjsSystem::build(&r, &h).unwrap();
        let t = family_ranks(&sys, Execution::Sequential).unwrap();
        assert_eq!(t[0].counts, [2, 1, 1, 0, 0]);
        assert_eq!(t[1].counts, [2, 1, 1, 1, 1]);
        assert_eq!(t[1].total, 6);
        assert_eq!(family_rank_formula(3, 6, 2)[4], 3);
    }

    #[test]
    fn gauss_residual_examples() {
        let h = SecondFundamentalForm::from_upper(2, 3, &[vec![Scalar::one(), Scalar::zero(), Scalar::one()]]).unwrap();
        let r = RiemannTensor::from_entries(2, &[(1, 2, 1, 2, Scalar::one())]).unwrap();
        let sys = BcjsSystem::build(&r, &h).unwrap();
        assert!(sys.gauss_residual().is_zero());
        assert!(sys.top_is_integral());

        let zero = SecondFundamentalForm::zero(2, 3).unwrap();
        let sys = BcjsSystem::build(&r, &zero).unwrap();
        assert_eq!(*sys.gauss_residual().get(0, 1, 0, 1), Scalar::from_int(-1));
        assert!(!sys.top_is_integral());
    }

    #[test]
    fn mismatched_pairs_are_not_integral() {
        for seed in 0..5 {
            let (r, h) = sample_pair(2, 3, seed, true).unwrap();
            let sys = BcjsSystem::build(&r, &h).unwrap();
            assert!(!sys.gauss_residual().is_zero());
            assert!(!sys.top_is_integral());
            assert!(certify(&sys, Execution::Sequential).is_err());
        }
    }

    #[test]
    fn gauge_and_lemma_checks() {
        let (r, h) = sample_pair(3, 6, 2, false).unwrap();
        let sys = BcjsSystem::build(&r, &h).unwrap();
        for seed in 1..=3 {
            assert!(gauge_invariance_check(&sys, seed, Execution::Sequential).unwrap().unchanged);
        }
        let recovered = lemma_recovery(&sys).unwrap();
        for (a, ha) in recovered.iter().enumerate() {
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(&ha[i][j], sys.h.get(a, i, j));
                }
            }
        }
    }

    #[test]
    fn conformal_examples() {
        assert!(conformal_threshold(2, 2).unwrap().satisfied);
        let r = conformal_threshold(3, 4).unwrap();
        assert_eq!((r.satisfied, r.deficit, r.required), (false, 1, 5));
        assert!(!conformal_threshold(2, 1).unwrap().satisfied);
    }
}
