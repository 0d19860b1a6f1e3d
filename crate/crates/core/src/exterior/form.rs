use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Ordered basis of 1-forms, optionally extended by named auxiliary 1-forms.
///
/// Symbols `0..dim` are the coframe elements; symbols `dim..dim + aux` are the
/// auxiliaries. Auxiliaries are free generators of the exterior algebra whose
/// value at the point and differential are supplied by a
/// [`StructureDifferential`](super::StructureDifferential).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coframe {
    names: Vec<String>,
    aux: Vec<String>,
}

impl Coframe {
    /// Coframe `w1..wn` without auxiliaries.
    pub fn standard(n: usize) -> Arc<Coframe> {
        Arc::new(Coframe {
            names: (1..=n).map(|i| format!("w{i}")).collect(),
            aux: Vec::new(),
        })
    }

    pub fn new(names: Vec<String>) -> Result<Arc<Coframe>> {
        Self::with_auxiliaries(names, Vec::new())
    }

    pub fn with_auxiliaries(names: Vec<String>, aux: Vec<String>) -> Result<Arc<Coframe>> {
        if names.is_empty() {
            return Err(Error::Invalid("coframe dimension must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in names.iter().chain(&aux) {
            if n.is_empty() || !seen.insert(n.as_str()) {
                return Err(Error::Invalid(format!("duplicate or empty name {n:?}")));
            }
        }
        Ok(Arc::new(Coframe { names, aux }))
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn aux_count(&self) -> usize {
        self.aux.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.names.len() + self.aux.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn aux_names(&self) -> &[String] {
        &self.aux
    }

    /// Symbol of the `k`-th auxiliary (0-based).
    pub fn aux_symbol(&self, k: usize) -> usize {
        assert!(k < self.aux.len(), "auxiliary index out of range");
        self.names.len() + k
    }

    pub fn aux_by_name(&self, name: &str) -> Option<usize> {
        self.aux.iter().position(|a| a == name)
    }

    pub fn is_aux(&self, symbol: usize) -> bool {
        symbol >= self.names.len()
    }

    pub fn symbol_name(&self, symbol: usize) -> &str {
        if symbol < self.names.len() {
            &self.names[symbol]
        } else {
            &self.aux[symbol - self.names.len()]
        }
    }
}

pub(crate) fn same_coframe(a: &Arc<Coframe>, b: &Arc<Coframe>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::CoframeMismatch)
    }
}

/// Strictly increasing tuple of symbols (0-based).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MultiIndex(Vec<u16>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new(indices: &[usize]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing(indices.iter().map(|i| i + 1).collect()));
        }
        Ok(MultiIndex(indices.iter().map(|&i| i as u16).collect()))
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i as u16])
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&(i as u16)).is_ok()
    }

    fn without(&self, pos: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v.remove(pos);
        MultiIndex(v)
    }

    /// Merge with sign: `ω_self ∧ ω_other = ±ω_merged`, `None` if they share a symbol.
    fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, bool)> {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        let mut inversions = 0usize;
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    inversions += self.0.len() - i;
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((MultiIndex(out), inversions % 2 == 1))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter().map(|i| i + 1)).finish()
    }
}

/// A point in the ambient space, in coordinates dual to the coframe.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector(pub Vec<Scalar>);

impl Vector {
    pub fn zero(n: usize) -> Self {
        Vector(vec![Scalar::zero(); n])
    }

    /// `i`-th dual basis vector (0-based).
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = Scalar::one();
        v
    }

    pub fn from_ints(xs: &[i64]) -> Self {
        Vector(xs.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[Scalar] {
        &self.0
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector(self.0.iter().map(|a| a * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Scalar::is_zero)
    }
}

/// Constant-coefficient exterior form of fixed degree.
#[derive(Clone)]
pub struct Form {
    coframe: Arc<Coframe>,
    degree: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.coframe, &other.coframe) || self.coframe == other.coframe)
            && self.degree == other.degree
            && self.terms == other.terms
    }
}

impl Eq for Form {}

impl Form {
    pub fn zero(coframe: &Arc<Coframe>, degree: usize) -> Form {
        Form {
            coframe: coframe.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(coframe: &Arc<Coframe>, c: Scalar) -> Form {
        Form::monomial(coframe, c, &[])
    }

    /// The basis 1-form of `symbol` (0-based; auxiliaries included).
    pub fn basis(coframe: &Arc<Coframe>, symbol: usize) -> Form {
        Form::monomial(coframe, Scalar::one(), &[symbol])
    }

    /// `c · ω_{s_1} ∧ … ∧ ω_{s_p}` for symbols in any order; repeated symbols give zero.
    pub fn monomial(coframe: &Arc<Coframe>, c: Scalar, symbols: &[usize]) -> Form {
        assert!(
            symbols.iter().all(|&s| s < coframe.symbol_count()),
            "symbol out of range"
        );
        let mut f = Form::zero(coframe, symbols.len());
        let mut sorted = symbols.to_vec();
        let mut negative = false;
        // bubble sort keeps track of the permutation sign
        for i in 0..sorted.len() {
            for j in 0..sorted.len() - 1 - i {
                if sorted[j] > sorted[j + 1] {
                    sorted.swap(j, j + 1);
                    negative = !negative;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) || c.is_zero() {
            return f;
        }
        let c = if negative { -c } else { c };
        f.terms.insert(MultiIndex(sorted.iter().map(|&s| s as u16).collect()), c);
        f
    }

    /// 1-form `Σ c_i ω_i` over the coframe part.
    pub fn one_form(coframe: &Arc<Coframe>, coeffs: &[Scalar]) -> Form {
        assert!(coeffs.len() <= coframe.symbol_count());
        let mut f = Form::zero(coframe, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                f.terms.insert(MultiIndex::single(i), c.clone());
            }
        }
        f
    }

    /// Builds a form from `(multi-index, coefficient)` pairs; indices must be
    /// strictly increasing and in range. Repeated keys are summed.
    pub fn from_terms<I>(coframe: &Arc<Coframe>, degree: usize, terms: I) -> Result<Form>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut f = Form::zero(coframe, degree);
        for (idx, c) in terms {
            if let Some(&bad) = idx.iter().find(|&&i| i >= coframe.symbol_count()) {
                return Err(Error::IndexOutOfRange {
                    index: bad + 1,
                    dim: coframe.symbol_count(),
                });
            }
            let key = MultiIndex::new(&idx)?;
            if key.degree() != degree {
                return Err(Error::DegreeMismatch(degree, key.degree()));
            }
            f.add_term(key, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, key: MultiIndex, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coframe(&self) -> &Arc<Coframe> {
        &self.coframe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, key: &MultiIndex) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// First auxiliary symbol appearing in any term.
    pub fn auxiliary_symbol(&self) -> Option<usize> {
        let n = self.coframe.dim();
        self.terms
            .keys()
            .flat_map(|k| k.iter())
            .find(|&s| s >= n)
    }

    pub fn uses_auxiliary(&self) -> bool {
        self.auxiliary_symbol().is_some()
    }

    fn require_pure(&self) -> Result<()> {
        match self.auxiliary_symbol() {
            Some(s) => Err(Error::UnresolvedAuxiliary(
                self.coframe.symbol_name(s).to_string(),
            )),
            None => Ok(()),
        }
    }

    /// Coefficients of a pure 1-form on the coframe part.
    pub fn one_form_coefficients(&self) -> Vec<Scalar> {
        assert_eq!(self.degree, 1, "not a 1-form");
        let mut v = vec![Scalar::zero(); self.coframe.dim()];
        for (k, c) in &self.terms {
            let s = k.iter().next().unwrap();
            if s < v.len() {
                v[s] = c.clone();
            }
        }
        v
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        same_coframe(&self.coframe, &other.coframe)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        if c.is_zero() {
            return Form::zero(&self.coframe, self.degree);
        }
        Form {
            coframe: self.coframe.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Form {
        Form {
            coframe: self.coframe.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn wedge(&self, other: &Form) -> Result<Form> {
        same_coframe(&self.coframe, &other.coframe)?;
        let mut out = Form::zero(&self.coframe, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((k, negative)) = a.merge(b) {
                    let c = ca * cb;
                    out.add_term(k, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Full alternating evaluation `φ(v_1, …, v_p)`: each term `c·ω_J`
    /// contributes `c·det[ω_{J_c}(v_r)]`.
    pub fn evaluate(&self, vectors: &[Vector]) -> Result<Scalar> {
        if vectors.len() != self.degree {
            return Err(Error::WrongVectorCount {
                expected: self.degree,
                got: vectors.len(),
            });
        }
        self.require_pure()?;
        self.check_vectors(vectors)?;
        let mut total = Scalar::zero();
        for (key, c) in &self.terms {
            let m: Vec<Vec<Scalar>> = vectors
                .iter()
                .map(|v| key.iter().map(|j| v.0[j].clone()).collect())
                .collect();
            let d = determinant(m);
            if !d.is_zero() {
                total += c * &d;
            }
        }
        Ok(total)
    }

    fn check_vectors(&self, vectors: &[Vector]) -> Result<()> {
        let n = self.coframe.dim();
        match vectors.iter().find(|v| v.dim() != n) {
            Some(v) => Err(Error::VectorLength {
                expected: n,
                got: v.dim(),
            }),
            None => Ok(()),
        }
    }

    /// Contraction in the first slot: `(ι_v φ)(w_2, …) = φ(v, w_2, …)`.
    pub fn interior_product(&self, v: &Vector) -> Result<Form> {
        if self.degree == 0 {
            return Err(Error::ZeroDegreeContraction);
        }
        self.require_pure()?;
        self.check_vectors(std::slice::from_ref(v))?;
        let mut out = Form::zero(&self.coframe, self.degree - 1);
        for (key, c) in &self.terms {
            for (pos, j) in key.iter().enumerate() {
                let x = &v.0[j];
                if x.is_zero() {
                    continue;
                }
                let t = c * x;
                out.add_term(key.without(pos), if pos % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Value of a 0-form.
    pub fn constant_value(&self) -> Scalar {
        assert_eq!(self.degree, 0);
        self.coefficient(&MultiIndex::empty())
    }

    /// Replaces symbols by 1-forms and expands; `images(s)` returning `None`
    /// keeps the symbol. This is the algebra homomorphism extending the
    /// substitution.
    pub fn substitute<F>(&self, target: &Arc<Coframe>, images: F) -> Result<Form>
    where
        F: Fn(usize) -> Option<Form>,
    {
        let mut out = Form::zero(target, self.degree);
        for (key, c) in &self.terms {
            let mut acc = Form::constant(target, c.clone());
            for s in key.iter() {
                let img = match images(s) {
                    Some(f) => {
                        if f.degree != 1 {
                            return Err(Error::DegreeMismatch(1, f.degree));
                        }
                        f
                    }
                    None => Form::basis(target, s),
                };
                acc = acc.wedge(&img)?;
                if acc.is_zero() {
                    break;
                }
            }
            for (k, v) in acc.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    /// Restriction to the subspace spanned by `basis`, as a form on the
    /// standard coframe of that subspace: the coefficient on `θ_J` is `φ(e_J)`.
    pub fn restrict(&self, basis: &[Vector]) -> Result<Form> {
        self.require_pure()?;
        self.check_vectors(basis)?;
        let sub = Coframe::standard(basis.len().max(1));
        let mut out = Form::zero(&sub, self.degree);
        for idx in subsets(basis.len(), self.degree) {
            let vs: Vec<Vector> = idx.iter().map(|&i| basis[i].clone()).collect();
            let val = self.evaluate(&vs)?;
            out.add_term(MultiIndex::new(&idx)?, val);
        }
        Ok(out)
    }
}

/// All strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    match n {
        0 => return Scalar::one(),
        1 => return m[0][0].clone(),
        2 => return &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {}
    }
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Scalar::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det = &det * &pivot;
        for r in (c + 1)..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for j in c..n {
                let t = &f * &m[c][j];
                m[r][j] -= &t;
            }
        }
    }
    det
}

/// Canonical rendering: `coeff*w{i}^w{j}^…` terms in lexicographic order,
/// joined by ` + `; auxiliaries print as `a{k}`; the zero form prints as `0`.
impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let n = self.coframe.dim();
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (pos, s) in key.iter().enumerate() {
                let sep = if pos == 0 { "*" } else { "^" };
                if s < n {
                    write!(f, "{sep}w{}", s + 1)?;
                } else {
                    write!(f, "{sep}a{}", s - n + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form<{}>({self})", self.degree)
    }
}
