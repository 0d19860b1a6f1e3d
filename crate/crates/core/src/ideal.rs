//! Exterior ideals given by homogeneous generators: integral elements, polar
//! spaces, the extension rank `r(E)` and closure under `d`.
//!
//! Generators may mention auxiliary symbols; every pointwise computation uses
//! their resolved values (auxiliaries replaced by declared point values),
//! while [`GeneratorSet::close`] differentiates the symbolic generators.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{subsets, Coframe, Form, MultiIndex, StructureDifferential, Vector};
use crate::linalg::{rank, RowSpace};
use crate::par::{self, Execution};
use crate::scalar::Scalar;

/// Finite list of homogeneous generators of positive degree together with the
/// structure differential used to close the ideal.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    generators: Vec<Form>,
    values: Vec<Form>,
    sd: StructureDifferential,
}

impl GeneratorSet {
    pub fn new(generators: Vec<Form>, sd: StructureDifferential) -> Result<Self> {
        let mut values = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if g.degree() == 0 {
                return Err(Error::ZeroFormGenerator(i + 1));
            }
            if g.coframe() != sd.coframe() {
                return Err(Error::CoframeMismatch);
            }
            values.push(sd.resolve(g)?);
        }
        Ok(GeneratorSet {
            generators,
            values,
            sd,
        })
    }

    pub fn empty(sd: StructureDifferential) -> Self {
        GeneratorSet {
            generators: Vec::new(),
            values: Vec::new(),
            sd,
        }
    }

    pub fn generators(&self) -> &[Form] {
        &self.generators
    }

    /// Generators with auxiliaries replaced by their point values.
    pub fn values(&self) -> &[Form] {
        &self.values
    }

    pub fn sd(&self) -> &StructureDifferential {
        &self.sd
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        self.sd.coframe()
    }

    pub fn dim(&self) -> usize {
        self.coframe().dim()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Same ideal with each generator multiplied by a scalar (zero factors are
    /// rejected).
    pub fn rescaled(&self, factors: &[Scalar]) -> Result<Self> {
        if factors.len() != self.len() || factors.iter().any(Scalar::is_zero) {
            return Err(Error::Invalid("rescaling needs one nonzero factor per generator".into()));
        }
        let gens = self
            .generators
            .iter()
            .zip(factors)
            .map(|(g, c)| g.scale(c))
            .collect();
        GeneratorSet::new(gens, self.sd.clone())
    }

    /// Appends `d g` for every generator, dropping zeros and exact repeats.
    pub fn close(&self) -> Result<Self> {
        let mut gens = self.generators.clone();
        for g in &self.generators {
            let dg = self.sd.d(g)?;
            if !dg.is_zero() && !gens.contains(&dg) {
                gens.push(dg);
            }
        }
        GeneratorSet::new(gens, self.sd.clone())
    }
}

/// Subspace of the tangent space at the point, given by an independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralElement {
    basis: Vec<Vector>,
}

impl IntegralElement {
    /// Checks that the basis vectors are independent and of the right length.
    /// Integrality is checked separately by [`is_integral`].
    pub fn new(n: usize, basis: Vec<Vector>) -> Result<Self> {
        if let Some(v) = basis.iter().find(|v| v.dim() != n) {
            return Err(Error::VectorLength {
                expected: n,
                got: v.dim(),
            });
        }
        let rows: Vec<Vec<Scalar>> = basis.iter().map(|v| v.0.clone()).collect();
        if rank(&rows) != basis.len() {
            return Err(Error::DependentVectors);
        }
        Ok(IntegralElement { basis })
    }

    pub fn zero() -> Self {
        IntegralElement { basis: Vec::new() }
    }

    /// Independent basis that is also checked to be integral for `gs`.
    pub fn checked(gs: &GeneratorSet, basis: Vec<Vector>) -> Result<Self> {
        let e = Self::new(gs.dim(), basis)?;
        if let Some((generator, indices)) = integrality_violation(&e, gs) {
            return Err(Error::NotIntegral { generator, indices });
        }
        Ok(e)
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &Vector) -> bool {
        let Some(first) = self.basis.first() else {
            return v.is_zero();
        };
        RowSpace::from_rows(first.dim(), self.basis.iter().map(|b| &b.0)).contains(&v.0)
    }
}

/// Ordered basis `e_1..e_n`; `E_p` is the span of the first `p` vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    basis: Vec<Vector>,
}

impl Flag {
    pub fn new(n: usize, basis: Vec<Vector>) -> Result<Self> {
        IntegralElement::new(n, basis.clone())?;
        Ok(Flag { basis })
    }

    /// Flag `e_{i_1}, e_{i_2}, …` of coordinate vectors (0-based indices).
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: i + 1, dim: n });
        }
        Self::new(n, indices.iter().map(|&i| Vector::basis(n, i)).collect())
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// `E_p`.
    pub fn element(&self, p: usize) -> IntegralElement {
        IntegralElement {
            basis: self.basis[..p].to_vec(),
        }
    }

    /// Errors with the first violation when the top element is not integral
    /// (every `E_p` then fails or passes with it, by heredity).
    pub fn check_integral(&self, gs: &GeneratorSet) -> Result<()> {
        match integrality_violation(&self.element(self.len()), gs) {
            Some((generator, indices)) => Err(Error::NotIntegral { generator, indices }),
            None => Ok(()),
        }
    }
}

fn coordinates(f: &Form, keys: &[Vec<usize>]) -> Vec<Scalar> {
    keys.iter()
        .map(|k| f.coefficient(&MultiIndex::new(k).expect("subsets are increasing")))
        .collect()
}

/// Spanning set of the degree-`p` part of the algebraic ideal: all
/// `g ∧ ω_J` with `deg g + |J| = p`, kept only when they enlarge the span.
pub fn degree_slice(gs: &GeneratorSet, p: usize) -> Result<Vec<Form>> {
    let n = gs.dim();
    let cf = gs.coframe();
    let keys = subsets(n, p);
    let mut span = RowSpace::new(keys.len());
    let mut out = Vec::new();
    for g in gs.values() {
        if g.degree() > p {
            continue;
        }
        for j in subsets(n, p - g.degree()) {
            let f = g.wedge(&Form::monomial(cf, Scalar::one(), &j))?;
            if !f.is_zero() && span.insert(&coordinates(&f, &keys)) {
                out.push(f);
            }
        }
    }
    Ok(out)
}

/// First generator (1-based) with a nonzero value on basis vectors of `e`,
/// together with the 1-based basis positions.
pub fn integrality_violation(e: &IntegralElement, gs: &GeneratorSet) -> Option<(usize, Vec<usize>)> {
    let p = e.dim();
    for (gi, g) in gs.values().iter().enumerate() {
        if g.degree() > p {
            continue;
        }
        for idx in subsets(p, g.degree()) {
            let vs: Vec<Vector> = idx.iter().map(|&i| e.basis[i].clone()).collect();
            match g.evaluate(&vs) {
                Ok(v) if v.is_zero() => {}
                _ => return Some((gi + 1, idx.iter().map(|i| i + 1).collect())),
            }
        }
    }
    None
}

/// Restriction of every generator of degree at most `dim E` vanishes.
pub fn is_integral(e: &IntegralElement, gs: &GeneratorSet) -> bool {
    integrality_violation(e, gs).is_none()
}

/// One polar constraint `v ↦ g(v, e_A)` as a covector, with its origin.
#[derive(Clone, Debug)]
struct PolarRow {
    generator: usize,
    indices: Vec<usize>,
    covector: Vec<Scalar>,
}

/// `v ↦ g(v, a_1, …, a_k)` as coefficients on the coframe.
fn contracted_covector(g: &Form, args: &[&Vector]) -> Result<Vec<Scalar>> {
    // g(v, a_1..a_k) = (−1)^k (ι_{a_k}…ι_{a_1} g)(v)
    let mut f = g.clone();
    for a in args {
        f = f.interior_product(a)?;
    }
    let mut cov = f.one_form_coefficients();
    if args.len() % 2 == 1 {
        for c in cov.iter_mut() {
            *c = -&*c;
        }
    }
    Ok(cov)
}

fn polar_rows(e: &IntegralElement, gs: &GeneratorSet, exec: Execution) -> Result<Vec<PolarRow>> {
    let p = e.dim();
    let jobs: Vec<(usize, Vec<usize>)> = gs
        .values()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree() <= p + 1)
        .flat_map(|(gi, g)| subsets(p, g.degree() - 1).into_iter().map(move |a| (gi, a)))
        .collect();
    par::map(exec, &jobs, |(gi, a)| {
        let args: Vec<&Vector> = a.iter().map(|&i| &e.basis[i]).collect();
        contracted_covector(&gs.values()[*gi], &args).map(|covector| PolarRow {
            generator: gi + 1,
            indices: a.iter().map(|i| i + 1).collect(),
            covector,
        })
    })
    .into_iter()
    .collect()
}

/// Row space of the polar constraints of `E` (the annihilator of `H(E)`).
pub fn polar_constraints(e: &IntegralElement, gs: &GeneratorSet, exec: Execution) -> Result<RowSpace> {
    if let Some((generator, indices)) = integrality_violation(e, gs) {
        return Err(Error::NotIntegral { generator, indices });
    }
    let rows = polar_rows(e, gs, exec)?;
    Ok(RowSpace::from_rows(gs.dim(), rows.iter().map(|r| &r.covector)))
}

/// Basis of the polar space `H(E)`: the common kernel of `v ↦ ψ(v, e_1, …, e_p)`
/// over the degree-`p+1` slice. On an integral element these functionals are
/// spanned by `v ↦ g(v, e_A)` for generators `g` and `|A| = deg g − 1`.
pub fn polar_space(e: &IntegralElement, gs: &GeneratorSet) -> Result<Vec<Vector>> {
    polar_space_with(e, gs, Execution::default())
}

pub fn polar_space_with(e: &IntegralElement, gs: &GeneratorSet, exec: Execution) -> Result<Vec<Vector>> {
    Ok(polar_constraints(e, gs, exec)?
        .kernel()
        .into_iter()
        .map(Vector)
        .collect())
}

/// `dim H(E)` without materializing a kernel basis.
pub fn polar_dim(e: &IntegralElement, gs: &GeneratorSet, exec: Execution) -> Result<usize> {
    Ok(gs.dim() - polar_constraints(e, gs, exec)?.rank())
}

/// `r(E) = dim H(E) − (p + 1)`; `−1` when `E` has no integral extension.
pub fn extension_rank(e: &IntegralElement, gs: &GeneratorSet) -> Result<i64> {
    let h = polar_dim(e, gs, Execution::default())?;
    Ok(h as i64 - (e.dim() as i64 + 1))
}

/// `span(E, v)`, provided `v ∈ H(E) \ E`.
pub fn extend_element(e: &IntegralElement, gs: &GeneratorSet, v: &Vector) -> Result<IntegralElement> {
    if v.dim() != gs.dim() {
        return Err(Error::VectorLength {
            expected: gs.dim(),
            got: v.dim(),
        });
    }
    if let Some((generator, indices)) = integrality_violation(e, gs) {
        return Err(Error::NotIntegral { generator, indices });
    }
    if e.contains(v) {
        return Err(Error::NotAnExtension);
    }
    for row in polar_rows(e, gs, Execution::Sequential)? {
        let value: Scalar = row.covector.iter().zip(&v.0).map(|(a, b)| a * b).sum();
        if !value.is_zero() {
            return Err(Error::NotInPolarSpace {
                generator: row.generator,
                indices: row.indices,
                value: value.to_string(),
            });
        }
    }
    let mut basis = e.basis.clone();
    basis.push(v.clone());
    Ok(IntegralElement { basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;
    use crate::sampling::{random_form, random_vector};

    fn w(cf: &Arc<Coframe>, idx: &[usize]) -> Form {
        Form::monomial(cf, Scalar::one(), idx)
    }

    fn gs_of(cf: &Arc<Coframe>, gens: Vec<Form>) -> GeneratorSet {
        GeneratorSet::new(gens, StructureDifferential::flat(cf)).unwrap()
    }

    fn span(n: usize, vs: &[Vec<i64>]) -> IntegralElement {
        IntegralElement::new(n, vs.iter().map(|v| Vector::from_ints(v)).collect()).unwrap()
    }

    /// Brute-force polar space: kernel of `v ↦ ψ(v, e_1..e_p)` for every
    /// element `ψ` of the degree-`(p+1)` slice, evaluated on basis vectors.
    fn oracle_polar_dim(e: &IntegralElement, gs: &GeneratorSet) -> usize {
        let n = gs.dim();
        let slice = degree_slice(gs, e.dim() + 1).unwrap();
        let rows: Vec<Vec<Scalar>> = slice
            .iter()
            .map(|psi| {
                (0..n)
                    .map(|mu| {
                        let mut args = vec![Vector::basis(n, mu)];
                        args.extend(e.basis().iter().cloned());
                        psi.evaluate(&args).unwrap()
                    })
                    .collect()
            })
            .collect();
        n - rank(&rows)
    }

    #[test]
    fn slice_examples() {
        let cf = Coframe::standard(3);
        let gs = gs_of(&cf, vec![w(&cf, &[0])]);
        let s = degree_slice(&gs, 2).unwrap();
        assert_eq!(s, vec![w(&cf, &[0, 1]), w(&cf, &[0, 2])]);
        assert_eq!(degree_slice(&gs, 1).unwrap(), vec![w(&cf, &[0])]);
        let gs = gs_of(&cf, vec![w(&cf, &[0, 1]), w(&cf, &[1, 0])]);
        assert_eq!(degree_slice(&gs, 2).unwrap().len(), 1);
    }

    #[test]
    fn integrality_examples() {
        let cf = Coframe::standard(4);
        let gs = gs_of(&cf, vec![w(&cf, &[0, 1])]);
        assert!(is_integral(&span(4, &[vec![0, 0, 1, 0], vec![0, 0, 0, 1]]), &gs));
        assert!(!is_integral(&span(4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]), &gs));
        assert!(is_integral(&span(4, &[vec![1, 0, 1, 0], vec![0, 0, 0, 1]]), &gs));
    }

    #[test]
    fn polar_examples() {
        let cf = Coframe::standard(4);
        let gs = gs_of(&cf, vec![w(&cf, &[0, 1])]);
        let e1 = span(4, &[vec![1, 0, 0, 0]]);
        let h = polar_space(&e1, &gs).unwrap();
        assert_eq!(h.len(), 3);
        assert!(h.iter().all(|v| v.0[1].is_zero()));
        assert_eq!(extension_rank(&e1, &gs).unwrap(), 1);
        let e3 = span(4, &[vec![0, 0, 1, 0]]);
        assert_eq!(polar_space(&e3, &gs).unwrap().len(), 4);
        assert_eq!(extension_rank(&e3, &gs).unwrap(), 2);
        let empty = GeneratorSet::empty(StructureDifferential::flat(&cf));
        assert_eq!(polar_space(&e1, &empty).unwrap().len(), 4);
        let all = gs_of(&cf, (0..4).map(|i| Form::basis(&cf, i)).collect());
        assert!(polar_space(&IntegralElement::zero(), &all).unwrap().is_empty());
        assert_eq!(extension_rank(&IntegralElement::zero(), &all).unwrap(), -1);
        let bad = span(4, &[vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert!(matches!(polar_space(&bad, &gs), Err(Error::NotIntegral { generator: 1, .. })));
    }

    #[test]
    fn close_examples() {
        let cf = Coframe::standard(3);
        let sd = StructureDifferential::flat(&cf).with(2, w(&cf, &[0, 1])).unwrap();
        let gs = GeneratorSet::new(vec![Form::basis(&cf, 2)], sd).unwrap();
        assert_eq!(gs.close().unwrap().generators(), &[Form::basis(&cf, 2), w(&cf, &[0, 1])]);
        let gs = gs_of(&cf, vec![Form::basis(&cf, 0)]);
        assert_eq!(gs.close().unwrap().len(), 1);
        let gs = gs_of(&cf, vec![w(&cf, &[0, 1])]);
        assert_eq!(gs.close().unwrap().len(), 1);
    }

    #[test]
    fn close_rejects_undeclared_auxiliary() {
        let cf = Coframe::with_auxiliaries(vec!["a".into(), "b".into()], vec!["x".into()]).unwrap();
        let sd = StructureDifferential::flat(&cf);
        assert!(matches!(
            GeneratorSet::new(vec![Form::basis(&cf, 2)], sd),
            Err(Error::UndeclaredAuxiliary(_))
        ));
    }

    #[test]
    fn zero_form_generators_are_rejected() {
        let cf = Coframe::standard(2);
        let r = GeneratorSet::new(vec![Form::constant(&cf, Scalar::one())], StructureDifferential::flat(&cf));
        assert!(matches!(r, Err(Error::ZeroFormGenerator(1))));
    }

    #[test]
    fn extend_examples() {
        let cf = Coframe::standard(4);
        let gs = gs_of(&cf, vec![w(&cf, &[0, 1])]);
        let e3 = span(4, &[vec![0, 0, 1, 0]]);
        let plane = extend_element(&e3, &gs, &Vector::basis(4, 3)).unwrap();
        assert_eq!(plane.dim(), 2);
        assert!(is_integral(&plane, &gs));
        assert_eq!(extend_element(&e3, &gs, &Vector::basis(4, 2)), Err(Error::NotAnExtension));
        let e1 = span(4, &[vec![1, 0, 0, 0]]);
        match extend_element(&e1, &gs, &Vector::basis(4, 1)) {
            Err(Error::NotInPolarSpace { generator, indices, value }) => {
                assert_eq!((generator, indices), (1, vec![1]));
                assert_eq!(value, "-1/1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn random_system(rng: &mut Rng, n: usize) -> GeneratorSet {
        let cf = Coframe::standard(n);
        let count = 1 + rng.below(3);
        let gens = (0..count)
            .map(|_| {
                let deg = 1 + rng.below(2);
                // sparse generators keep small integral elements common
                let mut f = random_form(rng, &cf, deg, 2);
                while f.term_count() > 2 {
                    f = random_form(rng, &cf, deg, 2);
                }
                f
            })
            .filter(|f| !f.is_zero())
            .collect();
        gs_of(&cf, gens)
    }

    /// Random integral element grown from zero through polar spaces.
    fn random_integral(rng: &mut Rng, gs: &GeneratorSet, target: usize) -> IntegralElement {
        let mut e = IntegralElement::zero();
        while e.dim() < target {
            let h = polar_space(&e, gs).unwrap();
            let fresh: Vec<&Vector> = h.iter().filter(|v| !e.contains(v)).collect();
            if fresh.is_empty() {
                break;
            }
            let mut v = Vector::zero(gs.dim());
            for b in &h {
                v = v.add(&b.scale(&rng.scalar(2)));
            }
            if e.contains(&v) {
                v = fresh[0].clone();
            }
            e = extend_element(&e, gs, &v).unwrap();
        }
        e
    }

    #[test]
    fn polar_space_matches_slice_oracle() {
        let mut rng = Rng::new(77);
        let mut checked = 0;
        for _ in 0..120 {
            let n = 3 + rng.below(3);
            let gs = random_system(&mut rng, n);
            let target = 1 + rng.below(3);
            let e = random_integral(&mut rng, &gs, target);
            let h = polar_space(&e, &gs).unwrap();
            assert_eq!(h.len(), oracle_polar_dim(&e, &gs));
            for v in e.basis() {
                let rows: Vec<Vec<Scalar>> = h.iter().map(|b| b.0.clone()).collect();
                assert!(RowSpace::from_rows(n, rows.iter().map(|r| r)).contains(&v.0));
            }
            checked += 1;
        }
        assert_eq!(checked, 120);
    }

    #[test]
    fn heredity_and_extension_property() {
        let mut rng = Rng::new(5);
        for _ in 0..80 {
            let n = 3 + rng.below(3);
            let gs = random_system(&mut rng, n);
            let e = random_integral(&mut rng, &gs, 3);
            assert!(is_integral(&e, &gs));
            let mask = rng.next_u64();
            let sub: Vec<Vector> = e
                .basis()
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect();
            assert!(is_integral(&IntegralElement::new(n, sub).unwrap(), &gs));

            let v = random_vector(&mut rng, n, 2);
            if e.contains(&v) {
                continue;
            }
            let h = polar_space(&e, &gs).unwrap();
            let rows: Vec<Vec<Scalar>> = h.iter().map(|b| b.0.clone()).collect();
            let in_h = RowSpace::from_rows(n, rows.iter().map(|r| r)).contains(&v.0);
            let mut grown = e.basis().to_vec();
            grown.push(v.clone());
            let grown = IntegralElement::new(n, grown).unwrap();
            assert_eq!(in_h, is_integral(&grown, &gs));
            assert_eq!(in_h, extend_element(&e, &gs, &v).is_ok());
        }
    }

    #[test]
    fn auxiliaries_are_resolved_for_pointwise_work() {
        let cf = Coframe::with_auxiliaries(vec!["a".into(), "b".into(), "c".into()], vec!["x".into()]).unwrap();
        let mut sd = StructureDifferential::flat(&cf);
        sd.declare_auxiliary(0, Form::basis(&cf, 1), w(&cf, &[0, 2])).unwrap();
        let g = Form::basis(&cf, 2).sub(&Form::basis(&cf, 3)).unwrap();
        let gs = GeneratorSet::new(vec![g], sd).unwrap();
        assert_eq!(gs.values()[0], Form::basis(&cf, 2).sub(&Form::basis(&cf, 1)).unwrap());
        let closed = gs.close().unwrap();
        assert_eq!(closed.generators()[1], w(&cf, &[0, 2]).neg());
        assert!(is_integral(&span(3, &[vec![0, 1, 1]]), &closed));
    }

    #[test]
    fn parallel_and_sequential_agree() {
        let mut rng = Rng::new(9);
        for _ in 0..20 {
            let gs = random_system(&mut rng, 5);
            let e = random_integral(&mut rng, &gs, 2);
            let a = polar_space_with(&e, &gs, Execution::Sequential).unwrap();
            let b = polar_space_with(&e, &gs, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }
}
