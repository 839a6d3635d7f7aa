//! Twisted Hochschild cochains of a BiHom-associative algebra and
//! tree-indexed cochains of a dialgebra: compatibility, coboundaries,
//! cocycles, coboundaries and cohomology dimensions.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::algebra::{AxiomReport, BiHomAssociativeAlgebra, BiHomDialgebra, Op, StructureTensor};
use crate::par;
use crate::scalars::{add_scaled, fmt_vec, int, matrix_of_linear_map, nullspace, unit_vec, zero_vec, Mat, Scalar, Subspace};
use crate::trees::{self, leaf_orientation, leaf_orientation_literal, Forest, Tree};

/// Multilinear map `A^{⊗n} → A`: `f(e_{i1},…,e_{in}) = Σ_k c[i1…in][k] e_k`,
/// stored with the first input most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Multilinear {
    arity: usize,
    dim: usize,
    coeffs: Vec<Scalar>,
}

/// Hochschild cochains are plain multilinear maps.
pub type HochCochain = Multilinear;

fn tuples(dim: usize, arity: usize) -> usize {
    dim.pow(arity as u32)
}

/// Decodes a tuple index into basis indices, first input most significant.
pub fn tuple_of(mut idx: usize, dim: usize, arity: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
    t
}

impl Multilinear {
    pub fn zero(arity: usize, dim: usize) -> Self {
        Multilinear { arity, dim, coeffs: zero_vec(tuples(dim, arity) * dim) }
    }

    pub fn from_coeffs(arity: usize, dim: usize, coeffs: Vec<Scalar>) -> Self {
        assert_eq!(coeffs.len(), tuples(dim, arity) * dim, "coefficient count does not match shape");
        Multilinear { arity, dim, coeffs }
    }

    /// Multilinear map with prescribed values on basis tuples.
    pub fn from_fn(arity: usize, dim: usize, f: impl Fn(&[usize]) -> Vec<Scalar>) -> Self {
        let mut coeffs = Vec::with_capacity(tuples(dim, arity) * dim);
        for t in 0..tuples(dim, arity) {
            let v = f(&tuple_of(t, dim, arity));
            assert_eq!(v.len(), dim, "value has the wrong length");
            coeffs.extend(v);
        }
        Multilinear { arity, dim, coeffs }
    }

    pub fn from_tensor(t: &StructureTensor) -> Self {
        Multilinear { arity: 2, dim: t.dim(), coeffs: t.coeffs().to_vec() }
    }

    pub fn to_tensor(&self) -> StructureTensor {
        assert_eq!(self.arity, 2, "only arity-two maps are products");
        StructureTensor::from_coeffs(self.dim, self.coeffs.clone())
    }

    pub fn identity(dim: usize) -> Self {
        Multilinear::from_fn(1, dim, |t| unit_vec(dim, t[0]))
    }

    pub fn from_matrix(m: &Mat) -> Self {
        Multilinear::from_fn(1, m.cols(), |t| m.column(t[0]))
    }

    pub fn to_matrix(&self) -> Mat {
        assert_eq!(self.arity, 1, "only arity-one maps are matrices");
        Mat::from_columns(self.dim, &(0..self.dim).map(|i| self.value_at(i).to_vec()).collect::<Vec<_>>())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn value_at(&self, tuple_index: usize) -> &[Scalar] {
        &self.coeffs[tuple_index * self.dim..(tuple_index + 1) * self.dim]
    }

    pub fn value(&self, tuple: &[usize]) -> &[Scalar] {
        let idx = tuple.iter().fold(0, |acc, &i| acc * self.dim + i);
        self.value_at(idx)
    }

    pub fn set_value(&mut self, tuple: &[usize], v: &[Scalar]) {
        let idx = tuple.iter().fold(0, |acc, &i| acc * self.dim + i);
        let n = self.dim;
        self.coeffs[idx * n..(idx + 1) * n].clone_from_slice(v);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Multilinear) -> Multilinear {
        assert_eq!((self.arity, self.dim), (other.arity, other.dim), "shape mismatch");
        Multilinear { arity: self.arity, dim: self.dim, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> Multilinear {
        Multilinear { arity: self.arity, dim: self.dim, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Value on arbitrary vectors, expanded over the supports of the inputs.
    pub fn eval(&self, args: &[&[Scalar]]) -> Vec<Scalar> {
        assert_eq!(args.len(), self.arity, "wrong number of arguments");
        let supports: Vec<Vec<(usize, &Scalar)>> =
            args.iter().map(|a| a.iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()).collect();
        let mut out = zero_vec(self.dim);
        if supports.iter().any(Vec::is_empty) {
            return out;
        }
        let mut pos = vec![0usize; self.arity];
        loop {
            let mut idx = 0;
            let mut c = Scalar::one();
            for (s, &p) in supports.iter().zip(&pos) {
                idx = idx * self.dim + s[p].0;
                c *= s[p].1;
            }
            add_scaled(&mut out, &c, self.value_at(idx));
            let mut k = self.arity;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                pos[k] += 1;
                if pos[k] < supports[k].len() {
                    break;
                }
                pos[k] = 0;
            }
        }
    }

    /// `f(m a1, …, m an)` as a new multilinear map.
    pub fn precompose_all(&self, m: &Mat) -> Multilinear {
        let cols: Vec<Vec<Scalar>> = (0..self.dim).map(|i| m.column(i)).collect();
        Multilinear::from_fn(self.arity, self.dim, |t| {
            let args: Vec<&[Scalar]> = t.iter().map(|&i| cols[i].as_slice()).collect();
            self.eval(&args)
        })
    }

    /// `m ∘ f`.
    pub fn postcompose(&self, m: &Mat) -> Multilinear {
        Multilinear::from_fn(self.arity, self.dim, |t| m.apply(self.value(t)))
    }

    /// Residual of `φ∘f = f∘φ^{⊗n}` followed by that of `ψ`.
    pub fn compatibility_residual(&self, phi: &Mat, psi: &Mat) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(2 * self.coeffs.len());
        for m in [phi, psi] {
            let a = self.postcompose(m);
            let b = self.precompose_all(m);
            out.extend(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y));
        }
        out
    }

    pub fn is_compatible(&self, phi: &Mat, psi: &Mat) -> bool {
        self.compatibility_residual(phi, psi).iter().all(Zero::is_zero)
    }
}

/// Tree-indexed cochain: one multilinear map per tree in `Y_n`, in the
/// order of [`trees::enumerate`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DialgCochain {
    arity: usize,
    dim: usize,
    parts: Vec<Multilinear>,
}

impl DialgCochain {
    pub fn zero(arity: usize, dim: usize) -> Self {
        DialgCochain { arity, dim, parts: vec![Multilinear::zero(arity, dim); trees::count(arity)] }
    }

    pub fn from_parts(arity: usize, dim: usize, parts: Vec<Multilinear>) -> Self {
        assert_eq!(parts.len(), trees::count(arity), "one part per tree");
        assert!(parts.iter().all(|p| p.arity == arity && p.dim == dim), "part shape mismatch");
        DialgCochain { arity, dim, parts }
    }

    /// Same multilinear map on every tree.
    pub fn constant(f: &Multilinear) -> Self {
        DialgCochain { arity: f.arity, dim: f.dim, parts: vec![f.clone(); trees::count(f.arity)] }
    }

    pub fn from_flat(arity: usize, dim: usize, v: &[Scalar]) -> Self {
        let w = tuples(dim, arity) * dim;
        assert_eq!(v.len(), w * trees::count(arity), "flat vector has the wrong length");
        DialgCochain { arity, dim, parts: v.chunks(w).map(|c| Multilinear::from_coeffs(arity, dim, c.to_vec())).collect() }
    }

    pub fn flat(&self) -> Vec<Scalar> {
        self.parts.iter().flat_map(|p| p.coeffs.iter().cloned()).collect()
    }

    pub fn flat_len(arity: usize, dim: usize) -> usize {
        trees::count(arity) * tuples(dim, arity) * dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[Multilinear] {
        &self.parts
    }

    pub fn part(&self, tree_index: usize) -> &Multilinear {
        &self.parts[tree_index]
    }

    pub fn part_mut(&mut self, tree_index: usize) -> &mut Multilinear {
        &mut self.parts[tree_index]
    }

    pub fn eval(&self, tree_index: usize, args: &[&[Scalar]]) -> Vec<Scalar> {
        self.parts[tree_index].eval(args)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Multilinear::is_zero)
    }

    pub fn add(&self, other: &DialgCochain) -> DialgCochain {
        assert_eq!((self.arity, self.dim), (other.arity, other.dim), "shape mismatch");
        DialgCochain { arity: self.arity, dim: self.dim, parts: self.parts.iter().zip(&other.parts).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &DialgCochain) -> DialgCochain {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> DialgCochain {
        DialgCochain { arity: self.arity, dim: self.dim, parts: self.parts.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn is_compatible(&self, phi: &Mat, psi: &Mat) -> bool {
        self.parts.iter().all(|p| p.is_compatible(phi, psi))
    }

    /// First nonzero value: `(tree, basis tuple, value)`.
    pub fn first_nonzero(&self) -> Option<(Tree, Vec<usize>, Vec<Scalar>)> {
        let forest = Forest::new(self.arity);
        for (ti, p) in self.parts.iter().enumerate() {
            for t in 0..tuples(self.dim, self.arity) {
                let v = p.value_at(t);
                if v.iter().any(|x| !x.is_zero()) {
                    return Some((forest.trees()[ti].clone(), tuple_of(t, self.dim, self.arity), v.to_vec()));
                }
            }
        }
        None
    }
}

#[derive(Debug, Error)]
pub enum CohomologyError {
    #[error("degree must be at least 1")]
    Degree,
    #[error("algebra is not BiHom-associative:\n{0}")]
    NotAssociative(AxiomReport),
    #[error("dialgebra axioms fail:\n{0}")]
    NotDialgebra(AxiomReport),
    #[error("twists are not multiplicative")]
    NotMultiplicative,
}

/// Canonical basis of the multilinear maps of arity `n` satisfying
/// `φ∘f = f∘φ^{⊗n}` and `ψ∘f = f∘ψ^{⊗n}`.
pub fn multilinear_compatible_space(dim: usize, n: usize, phi: &Mat, psi: &Mat) -> Subspace {
    let len = tuples(dim, n) * dim;
    let m = matrix_of_linear_map(len, 2 * len, |v| Multilinear::from_coeffs(n, dim, v.to_vec()).compatibility_residual(phi, psi));
    nullspace(&m)
}

pub fn hoch_compatible_space(a: &BiHomAssociativeAlgebra, n: usize) -> Subspace {
    multilinear_compatible_space(a.dim(), n, a.phi(), a.psi())
}

/// Direct sum over `Y_n` of the multilinear compatible space.
pub fn dialg_compatible_space(d: &BiHomDialgebra, n: usize) -> Subspace {
    let single = multilinear_compatible_space(d.dim(), n, d.phi(), d.psi());
    let w = tuples(d.dim(), n) * d.dim();
    let count = trees::count(n);
    Subspace::from_spanning(
        w * count,
        (0..count).flat_map(|t| {
            single.basis().iter().map(move |b| {
                let mut v = zero_vec(w * count);
                v[t * w..(t + 1) * w].clone_from_slice(b);
                v
            })
        }),
    )
}

struct Twists {
    phi_cols: Vec<Vec<Scalar>>,
    psi_cols: Vec<Vec<Scalar>>,
    phi_pow: Vec<Vec<Scalar>>,
    psi_pow: Vec<Vec<Scalar>>,
}

impl Twists {
    /// Columns of `φ`, `ψ`, `φ^{n-1}`, `ψ^{n-1}`.
    fn new(phi: &Mat, psi: &Mat, n: usize) -> Self {
        let d = phi.rows();
        let p = phi.pow(n as i64 - 1).unwrap();
        let q = psi.pow(n as i64 - 1).unwrap();
        Twists {
            phi_cols: (0..d).map(|i| phi.column(i)).collect(),
            psi_cols: (0..d).map(|i| psi.column(i)).collect(),
            phi_pow: (0..d).map(|i| p.column(i)).collect(),
            psi_pow: (0..d).map(|i| q.column(i)).collect(),
        }
    }
}

fn sign(i: usize) -> Scalar {
    if i.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `(δf)(a1,…,a_{n+1}) = μ(φ^{n-1}a1, f(a2,…)) + Σ_i (-1)^i f(φa1,…,φa_{i-1}, μ(a_i,a_{i+1}), ψa_{i+2},…)
/// + (-1)^{n+1} μ(f(a1,…,a_n), ψ^{n-1}a_{n+1})`.
pub fn hoch_coboundary(a: &BiHomAssociativeAlgebra, f: &HochCochain) -> HochCochain {
    coboundary_generic(a.mul_tensor(), a.phi(), a.psi(), f)
}

fn coboundary_generic(mu: &StructureTensor, phi: &Mat, psi: &Mat, f: &Multilinear) -> Multilinear {
    let n = f.arity();
    let dim = f.dim();
    assert!(n >= 1, "cochains start in degree 1");
    let tw = Twists::new(phi, psi, n);
    Multilinear::from_fn(n + 1, dim, |t| {
        let mut out = mu.apply(&tw.phi_pow[t[0]], f.value(&t[1..]));
        for i in 1..=n {
            let prod = mu.product(t[i - 1], t[i]).to_vec();
            let mut args: Vec<&[Scalar]> = Vec::with_capacity(n);
            for &x in &t[..i - 1] {
                args.push(&tw.phi_cols[x]);
            }
            args.push(&prod);
            for &x in &t[i + 1..] {
                args.push(&tw.psi_cols[x]);
            }
            add_scaled(&mut out, &sign(i), &f.eval(&args));
        }
        let last = mu.apply(f.value(&t[..n]), &tw.psi_pow[t[n]]);
        add_scaled(&mut out, &sign(n + 1), &last);
        out
    })
}

/// Which leaf rule selects the product in each coboundary term.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum OrientationRule {
    /// The rule under which `δ∘δ = 0`.
    #[default]
    Standard,
    /// The last-leaf rule read literally; kept as a negative control.
    Literal,
}

/// Tree-indexed coboundary: for `y ∈ Y_{n+1}`,
/// `(δf)(y; a1,…) = φ^{n-1}a1 •0 f(d0 y; a2,…) + Σ_i (-1)^i f(d_i y; φa1,…, a_i •i a_{i+1}, ψa_{i+2},…)
/// + (-1)^{n+1} f(d_{n+1} y; a1,…,a_n) •_{n+1} ψ^{n-1}a_{n+1}`.
pub fn dialg_coboundary(d: &BiHomDialgebra, f: &DialgCochain) -> DialgCochain {
    dialg_coboundary_with(d, f, OrientationRule::Standard)
}

pub fn dialg_coboundary_with(d: &BiHomDialgebra, f: &DialgCochain, rule: OrientationRule) -> DialgCochain {
    let n = f.arity();
    let dim = f.dim();
    assert!(n >= 1, "cochains start in degree 1");
    let tw = Twists::new(d.phi(), d.psi(), n);
    let inner = Forest::new(n);
    let outer = Forest::new(n + 1);
    let orient = |y: &Tree, i| match rule {
        OrientationRule::Standard => leaf_orientation(y, i).unwrap(),
        OrientationRule::Literal => leaf_orientation_literal(y, i).unwrap(),
    };
    let parts = par::map(outer.trees(), |y| {
        let faces: Vec<usize> = (0..=n + 1).map(|i| inner.position(&y.face(i).unwrap())).collect();
        let ops: Vec<Op> = (0..=n + 1).map(|i| orient(y, i)).collect();
        Multilinear::from_fn(n + 1, dim, |t| {
            let mut out = d.mul(ops[0], &tw.phi_pow[t[0]], f.part(faces[0]).value(&t[1..]));
            for i in 1..=n {
                let prod = d.product(ops[i]).product(t[i - 1], t[i]).to_vec();
                let mut args: Vec<&[Scalar]> = Vec::with_capacity(n);
                for &x in &t[..i - 1] {
                    args.push(&tw.phi_cols[x]);
                }
                args.push(&prod);
                for &x in &t[i + 1..] {
                    args.push(&tw.psi_cols[x]);
                }
                add_scaled(&mut out, &sign(i), &f.eval(faces[i], &args));
            }
            let last = d.mul(ops[n + 1], f.part(faces[n + 1]).value(&t[..n]), &tw.psi_pow[t[n]]);
            add_scaled(&mut out, &sign(n + 1), &last);
            out
        })
    });
    DialgCochain { arity: n + 1, dim, parts }
}

/// Random element of a subspace with small integer coordinates.
pub fn random_element<R: Rng + ?Sized>(space: &Subspace, rng: &mut R) -> Vec<Scalar> {
    let coeffs: Vec<Scalar> = (0..space.dim()).map(|_| int(rng.gen_range(-3..=3))).collect();
    space.combination(&coeffs)
}

/// `(trial, tree, basis tuple, value)` of a failing `δ∘δ` trial.
pub type DeltaSquaredFailure = (usize, Option<Tree>, Vec<usize>, Vec<Scalar>);

/// Outcome of repeated `δ∘δ` trials.
#[derive(Clone, Debug)]
pub struct DeltaSquared {
    pub degree: usize,
    pub trials: usize,
    pub failures: Vec<DeltaSquaredFailure>,
}

impl DeltaSquared {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for DeltaSquared {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "delta^2 on degree {}: {}/{} trials vanish", self.degree, self.trials - self.failures.len(), self.trials)?;
        if let Some((trial, tree, tuple, v)) = self.failures.first() {
            let args: Vec<String> = tuple.iter().map(|i| format!("e{}", i + 1)).collect();
            let at = tree.as_ref().map(|t| format!("{t}; ")).unwrap_or_default();
            write!(f, "; first witness trial {trial}: ({at}{}) -> {}", args.join(", "), fmt_vec(v))?;
        }
        Ok(())
    }
}

/// `δδf` on random compatible Hochschild cochains, without checking that the
/// algebra satisfies the hypotheses.
pub fn hoch_delta_squared_trials<R: Rng + ?Sized>(a: &BiHomAssociativeAlgebra, n: usize, trials: usize, rng: &mut R) -> DeltaSquared {
    let space = hoch_compatible_space(a, n);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let f = Multilinear::from_coeffs(n, a.dim(), random_element(&space, rng));
        let dd = hoch_coboundary(a, &hoch_coboundary(a, &f));
        if let Some(t) = (0..tuples(a.dim(), n + 2)).find(|&t| dd.value_at(t).iter().any(|x| !x.is_zero())) {
            failures.push((trial, None, tuple_of(t, a.dim(), n + 2), dd.value_at(t).to_vec()));
        }
    }
    DeltaSquared { degree: n, trials, failures }
}

/// As [`hoch_delta_squared_trials`], after checking BiHom-associativity and
/// multiplicativity.
pub fn hoch_delta_squared_is_zero<R: Rng + ?Sized>(
    a: &BiHomAssociativeAlgebra,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<DeltaSquared, CohomologyError> {
    if n == 0 {
        return Err(CohomologyError::Degree);
    }
    let report = a.check();
    if !report.is_ok() {
        return Err(CohomologyError::NotAssociative(report));
    }
    if !a.is_multiplicative() {
        return Err(CohomologyError::NotMultiplicative);
    }
    Ok(hoch_delta_squared_trials(a, n, trials, rng))
}

pub fn dialg_delta_squared_trials<R: Rng + ?Sized>(
    d: &BiHomDialgebra,
    n: usize,
    trials: usize,
    rule: OrientationRule,
    rng: &mut R,
) -> DeltaSquared {
    let space = dialg_compatible_space(d, n);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let f = DialgCochain::from_flat(n, d.dim(), &random_element(&space, rng));
        let dd = dialg_coboundary_with(d, &dialg_coboundary_with(d, &f, rule), rule);
        if let Some((y, t, v)) = dd.first_nonzero() {
            failures.push((trial, Some(y), t, v));
        }
    }
    DeltaSquared { degree: n, trials, failures }
}

pub fn dialg_delta_squared_is_zero<R: Rng + ?Sized>(
    d: &BiHomDialgebra,
    n: usize,
    trials: usize,
    rng: &mut R,
) -> Result<DeltaSquared, CohomologyError> {
    if n == 0 {
        return Err(CohomologyError::Degree);
    }
    let report = d.check();
    if !report.is_ok() {
        return Err(CohomologyError::NotDialgebra(report));
    }
    if !d.is_multiplicative() {
        return Err(CohomologyError::NotMultiplicative);
    }
    Ok(dialg_delta_squared_trials(d, n, trials, OrientationRule::Standard, rng))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CohomologyReport {
    pub degree: usize,
    pub compatible_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// `dim Z - dim (Z ∩ B)`; equals `dim Z - dim B` when `B ⊆ Z`.
    pub cohomology_dim: usize,
    pub coboundaries_in_cocycles: bool,
}

impl fmt::Display for CohomologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {}", self.degree)?;
        writeln!(f, "  compatible cochains: {}", self.compatible_dim)?;
        writeln!(f, "  cocycles Z: {}", self.cocycle_dim)?;
        writeln!(f, "  coboundaries B: {}", self.coboundary_dim)?;
        writeln!(f, "  B in Z: {}", if self.coboundaries_in_cocycles { "yes" } else { "NO" })?;
        write!(f, "  cohomology H: {}", self.cohomology_dim)
    }
}

/// Spaces behind a [`CohomologyReport`], as flat coefficient vectors.
#[derive(Clone, Debug)]
pub struct CohomologyData {
    pub report: CohomologyReport,
    pub compatible: Subspace,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
}

/// Kernel of `delta` on `space`, as a subspace of the ambient cochains.
fn kernel_on<F>(space: &Subspace, out_len: usize, delta: F) -> Subspace
where
    F: Fn(&[Scalar]) -> Vec<Scalar> + Sync + Send,
{
    let images = par::map(space.basis(), |b| delta(b));
    let m = Mat::from_columns(out_len, &images);
    let rel = nullspace(&m);
    Subspace::from_spanning(space.ambient_dim(), rel.basis().iter().map(|c| space.combination(c)))
}

fn image_of<F>(space: &Subspace, out_len: usize, delta: F) -> Subspace
where
    F: Fn(&[Scalar]) -> Vec<Scalar> + Sync + Send,
{
    Subspace::from_spanning(out_len, par::map(space.basis(), |b| delta(b)))
}

fn assemble(degree: usize, compatible: Subspace, cocycles: Subspace, coboundaries: Subspace) -> CohomologyData {
    let inside = cocycles.contains_subspace(&coboundaries);
    let report = CohomologyReport {
        degree,
        compatible_dim: compatible.dim(),
        cocycle_dim: cocycles.dim(),
        coboundary_dim: coboundaries.dim(),
        cohomology_dim: cocycles.dim() - cocycles.intersection_dim(&coboundaries),
        coboundaries_in_cocycles: inside,
    };
    CohomologyData { report, compatible, cocycles, coboundaries }
}

/// `Z^n`, `B^n` and `H^n` of the Hochschild complex. `B^1 = 0`.
pub fn hoch_cohomology(a: &BiHomAssociativeAlgebra, n: usize) -> Result<CohomologyData, CohomologyError> {
    if n == 0 {
        return Err(CohomologyError::Degree);
    }
    let dim = a.dim();
    let len = |k: usize| tuples(dim, k) * dim;
    let compatible = hoch_compatible_space(a, n);
    let delta = |k: usize| move |v: &[Scalar]| hoch_coboundary(a, &Multilinear::from_coeffs(k, dim, v.to_vec())).into_coeffs();
    let cocycles = kernel_on(&compatible, len(n + 1), delta(n));
    let coboundaries = if n == 1 {
        Subspace::zero(len(1))
    } else {
        image_of(&hoch_compatible_space(a, n - 1), len(n), delta(n - 1))
    };
    Ok(assemble(n, compatible, cocycles, coboundaries))
}

/// `Z^n`, `B^n` and `H^n` of the tree-indexed complex. `B^1 = 0`.
pub fn dialg_cohomology(d: &BiHomDialgebra, n: usize) -> Result<CohomologyData, CohomologyError> {
    if n == 0 {
        return Err(CohomologyError::Degree);
    }
    let dim = d.dim();
    let compatible = dialg_compatible_space(d, n);
    let delta = |k: usize| move |v: &[Scalar]| dialg_coboundary(d, &DialgCochain::from_flat(k, dim, v)).flat();
    let cocycles = kernel_on(&compatible, DialgCochain::flat_len(n + 1, dim), delta(n));
    let coboundaries = if n == 1 {
        Subspace::zero(DialgCochain::flat_len(1, dim))
    } else {
        image_of(&dialg_compatible_space(d, n - 1), DialgCochain::flat_len(n, dim), delta(n - 1))
    };
    Ok(assemble(n, compatible, cocycles, coboundaries))
}

/// A single-value cochain `f(e_{i1},…) = e_out` taken from a reference list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ListedCochain {
    pub inputs: Vec<usize>,
    pub output: usize,
    /// The list repeats these inputs with conflicting coefficient names.
    pub ambiguous: bool,
}

impl ListedCochain {
    pub fn label(&self) -> String {
        let args: Vec<String> = self.inputs.iter().map(|i| format!("e{}", i + 1)).collect();
        format!("f({}) = e{}", args.join(","), self.output + 1)
    }

    pub fn to_cochain(&self, dim: usize) -> Multilinear {
        let mut f = Multilinear::zero(self.inputs.len(), dim);
        f.set_value(&self.inputs, &unit_vec(dim, self.output));
        f
    }
}

/// Published cocycles of the three-dimensional twisted algebra
/// ([`crate::algebra::tw3_algebra`]) in degrees 2 and 3; every value is a
/// multiple of `e3`. Degree 3 lists `(e3,e3,e1)` three times under two
/// coefficient names, so it is marked ambiguous and appears once.
pub fn tw3_listed_cochains(degree: usize) -> Vec<ListedCochain> {
    let one = |ins: &[usize], ambiguous| ListedCochain { inputs: ins.iter().map(|i| i - 1).collect(), output: 2, ambiguous };
    match degree {
        2 => [[1, 3], [2, 3], [3, 3]].iter().map(|t| one(t, false)).collect(),
        3 => {
            let mut v: Vec<ListedCochain> = [[1, 1, 1], [1, 2, 3], [1, 3, 1], [1, 3, 2], [1, 3, 3], [2, 1, 3], [2, 3, 3], [3, 1, 3], [3, 2, 3]]
                .iter()
                .map(|t| one(t, false))
                .collect();
            v.push(one(&[3, 3, 1], true));
            v
        }
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, Bindings};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bind(pairs: &[(&str, i64)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
    }

    fn polynomial_algebra() -> BiHomAssociativeAlgebra {
        // k[x]/x^3 with φ = ψ = id
        let mut mul = StructureTensor::zero(3);
        for i in 0..3 {
            for j in 0..3 {
                if i + j < 3 {
                    mul.set_product(i, j, &unit_vec(3, i + j));
                }
            }
        }
        BiHomAssociativeAlgebra::new("P", mul, Mat::identity(3), Mat::identity(3)).unwrap()
    }

    #[test]
    fn eval_matches_basis_values() {
        let f = Multilinear::from_fn(2, 2, |t| vec![int(t[0] as i64), int(t[1] as i64 + 1)]);
        let x = vec![int(2), int(3)];
        let y = vec![int(1), int(-1)];
        // bilinear expansion by hand
        let mut expect = zero_vec(2);
        for i in 0..2 {
            for j in 0..2 {
                add_scaled(&mut expect, &(&x[i] * &y[j]), f.value(&[i, j]));
            }
        }
        assert_eq!(f.eval(&[&x, &y]), expect);
    }

    #[test]
    fn degree_one_identity_coboundary() {
        let a = polynomial_algebra();
        let df = hoch_coboundary(&a, &Multilinear::identity(3));
        // μ(x, y) - μ(x, y) + μ(x, y)
        assert_eq!(df, Multilinear::from_tensor(a.mul_tensor()));
    }

    #[test]
    fn identity_twists_give_full_compatible_space() {
        let a = polynomial_algebra();
        assert_eq!(hoch_compatible_space(&a, 2).dim(), 27);
        let d = BiHomDialgebra::new("z", StructureTensor::zero(2), StructureTensor::zero(2), Mat::identity(2), Mat::identity(2)).unwrap();
        assert_eq!(dialg_compatible_space(&d, 2).dim(), 2 * 8);
    }

    #[test]
    fn hochschild_delta_squared_on_associative_algebra() {
        let a = polynomial_algebra();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=2 {
            assert!(hoch_delta_squared_is_zero(&a, n, 5, &mut rng).unwrap().passed());
        }
    }

    #[test]
    fn dialgebra_delta_squared_on_catalog() {
        let d = catalog("Alg2_2", &bind(&[("a", 1)])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = dialg_delta_squared_trials(&d, 1, 10, OrientationRule::Standard, &mut rng);
        assert!(out.passed(), "{out}");
    }

    #[test]
    fn zero_product_first_cohomology_is_everything() {
        let d = BiHomDialgebra::new("z", StructureTensor::zero(2), StructureTensor::zero(2), Mat::identity(2), Mat::identity(2)).unwrap();
        let h = dialg_cohomology(&d, 1).unwrap();
        assert_eq!(h.report.cohomology_dim, 4);
        assert_eq!(h.report.coboundary_dim, 0);
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let a = polynomial_algebra();
        let h = hoch_cohomology(&a, 2).unwrap();
        assert!(h.report.coboundaries_in_cocycles);
        assert!(h.report.coboundary_dim > 0);
    }

    #[test]
    fn listed_cochains_shape() {
        assert_eq!(tw3_listed_cochains(2).len(), 3);
        let three = tw3_listed_cochains(3);
        assert_eq!(three.iter().filter(|c| !c.ambiguous).count(), 9);
        assert_eq!(three[0].label(), "f(e1,e1,e1) = e3");
    }
}
