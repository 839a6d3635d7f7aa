//! Twisted derivations of a dialgebra and their relatives, each computed as
//! the exact nullspace of a homogeneous linear system in the matrix entries.
//!
//! The unknown vector stacks the row-major entries of `D`, then `D'`, then
//! `D''` as the variant requires. Every constraint is linear, so the system
//! matrix is read off column by column by evaluating the residual on unit
//! vectors.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{is_morphism, BiHomDialgebra, Op};
use crate::scalars::{
    add_scaled, fmt_vec, int, is_zero_vec, matrix_of_linear_map, nullspace, unit_vec, zero_vec, Mat, Scalar, Subspace,
};

pub mod classify;

/// Bidegree `(k, l)` selecting the twist `θ = φ^k ψ^l`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BiDegree {
    pub k: i64,
    pub l: i64,
}

impl BiDegree {
    pub const fn new(k: i64, l: i64) -> Self {
        BiDegree { k, l }
    }

    pub fn is_negative(self) -> bool {
        self.k < 0 || self.l < 0
    }
}

impl std::ops::Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.k + o.k, self.l + o.l)
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.l)
    }
}

/// Weights in `α D(x∘y) = β θx∘Dy + γ Dx∘θy`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneralizedSpec {
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
}

impl GeneralizedSpec {
    pub fn new(alpha: Scalar, beta: Scalar, gamma: Scalar) -> Self {
        GeneralizedSpec { alpha, beta, gamma }
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        GeneralizedSpec::new(int(a), int(b), int(c))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Variant {
    /// `D(x∘y) = θx∘Dy + Dx∘θy`
    Plain,
    /// `α D(x∘y) = β θx∘Dy + γ Dx∘θy`
    Generalized(GeneralizedSpec),
    /// `D'(x∘y) = θx∘Dy + Dx∘θy`
    Quasi,
    /// `D''(x∘y) = θx∘D'y + Dx∘θy`
    Triple,
}

impl Variant {
    pub fn components(&self) -> usize {
        match self {
            Variant::Plain | Variant::Generalized(_) => 1,
            Variant::Quasi => 2,
            Variant::Triple => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Variant::Plain => "derivation",
            Variant::Generalized(_) => "generalized",
            Variant::Quasi => "quasi",
            Variant::Triple => "triple",
        }
    }

    pub fn component_names(&self) -> &'static [&'static str] {
        match self.components() {
            1 => &["D"],
            2 => &["D", "D'"],
            _ => &["D", "D'", "D''"],
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error("bidegree {0} needs invertible twists")]
    NegativeDegree(BiDegree),
    #[error("map is {rows}x{cols}, expected {n}x{n}")]
    Dimension { rows: usize, cols: usize, n: usize },
    #[error("expected {expected} component maps, got {actual}")]
    ComponentCount { expected: usize, actual: usize },
    #[error("conjugating map is singular")]
    Singular,
    #[error("conjugating map is not an isomorphism between the given dialgebras")]
    NotMorphism,
    #[error("precondition `phi(a) = psi(a)` fails: phi(a) = {phi_a}, psi(a) = {psi_a}")]
    AdPrecondition { phi_a: String, psi_a: String },
}

/// `φ^k ψ^l`, using inverses for negative exponents.
pub fn twist_power(alg: &BiHomDialgebra, deg: BiDegree) -> Result<Mat, DerivationError> {
    let err = || DerivationError::NegativeDegree(deg);
    if deg.is_negative() && !alg.has_invertible_twists() {
        return Err(err());
    }
    let p = alg.phi().pow(deg.k).ok_or_else(err)?;
    let q = alg.psi().pow(deg.l).ok_or_else(err)?;
    Ok(&p * &q)
}

fn check_maps(n: usize, variant: &Variant, maps: &[Mat]) -> Result<(), DerivationError> {
    if maps.len() != variant.components() {
        return Err(DerivationError::ComponentCount { expected: variant.components(), actual: maps.len() });
    }
    for m in maps {
        if m.rows() != n || m.cols() != n {
            return Err(DerivationError::Dimension { rows: m.rows(), cols: m.cols(), n });
        }
    }
    Ok(())
}

/// A named identity that one basis pair (or basis vector) fails.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdentityFailure {
    pub identity: String,
    pub basis: Vec<usize>,
    pub residual: Vec<Scalar>,
}

impl fmt::Display for IdentityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.basis.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{} at ({}): residual {}", self.identity, args.join(", "), fmt_vec(&self.residual))
    }
}

struct Leibniz<'a> {
    alg: &'a BiHomDialgebra,
    theta_cols: Vec<Vec<Scalar>>,
    variant: &'a Variant,
}

impl Leibniz<'_> {
    /// Residual of the Leibniz-type identity for `op` on `(e_i, e_j)`.
    fn residual(&self, maps: &[Mat], op: Op, i: usize, j: usize) -> Vec<Scalar> {
        let t = self.alg.product(op);
        let (out, inner_right, inner_left) = match self.variant.components() {
            1 => (&maps[0], &maps[0], &maps[0]),
            2 => (&maps[1], &maps[0], &maps[0]),
            _ => (&maps[2], &maps[1], &maps[0]),
        };
        let mut lhs = out.apply(t.product(i, j));
        let mut a = t.apply(&self.theta_cols[i], &inner_right.column(j));
        let mut b = t.apply(&inner_left.column(i), &self.theta_cols[j]);
        if let Variant::Generalized(s) = self.variant {
            lhs.iter_mut().for_each(|x| *x *= &s.alpha);
            a.iter_mut().for_each(|x| *x *= &s.beta);
            b.iter_mut().for_each(|x| *x *= &s.gamma);
        }
        add_scaled(&mut lhs, &-Scalar::one(), &a);
        add_scaled(&mut lhs, &-Scalar::one(), &b);
        lhs
    }
}

/// Full residual vector: commutation rows for each component, then the
/// Leibniz rows for `⊣` and `⊢` on every basis pair.
fn residual_vector(alg: &BiHomDialgebra, variant: &Variant, theta: &Mat, maps: &[Mat]) -> Vec<Scalar> {
    let n = alg.dim();
    let lb = Leibniz { alg, theta_cols: (0..n).map(|i| theta.column(i)).collect(), variant };
    let mut out = Vec::with_capacity(maps.len() * 2 * n * n + 2 * n * n * n);
    for m in maps {
        for tw in [alg.phi(), alg.psi()] {
            out.extend((&(m * tw) - &(tw * m)).into_entries());
        }
    }
    for op in Op::BOTH {
        for i in 0..n {
            for j in 0..n {
                out.extend(lb.residual(maps, op, i, j));
            }
        }
    }
    out
}

/// Lists every identity of the variant that the given maps fail.
pub fn identity_failures(
    alg: &BiHomDialgebra,
    variant: &Variant,
    deg: BiDegree,
    maps: &[Mat],
) -> Result<Vec<IdentityFailure>, DerivationError> {
    let n = alg.dim();
    check_maps(n, variant, maps)?;
    let theta = twist_power(alg, deg)?;
    let names = variant.component_names();
    let mut failures = Vec::new();
    for (c, m) in maps.iter().enumerate() {
        for (tw, tname) in [(alg.phi(), "phi"), (alg.psi(), "psi")] {
            let d = &(m * tw) - &(tw * m);
            for j in 0..n {
                let col = d.column(j);
                if !is_zero_vec(&col) {
                    failures.push(IdentityFailure {
                        identity: format!("{} {tname} = {tname} {}", names[c], names[c]),
                        basis: vec![j],
                        residual: col,
                    });
                }
            }
        }
    }
    let lb = Leibniz { alg, theta_cols: (0..n).map(|i| theta.column(i)).collect(), variant };
    for op in Op::BOTH {
        for i in 0..n {
            for j in 0..n {
                let r = lb.residual(maps, op, i, j);
                if !is_zero_vec(&r) {
                    failures.push(IdentityFailure {
                        identity: format!("{} Leibniz rule for {op}", variant.name()),
                        basis: vec![i, j],
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(failures)
}

pub fn maps_from_vector(n: usize, v: &[Scalar]) -> Vec<Mat> {
    v.chunks(n * n).map(|c| Mat::from_flat(n, n, c.to_vec())).collect()
}

pub fn vector_from_maps(maps: &[Mat]) -> Vec<Scalar> {
    maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
}

/// Solution space of one derivation variant at one bidegree.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub variant: Variant,
    pub bidegree: BiDegree,
    pub system: Mat,
    pub solutions: Subspace,
    n: usize,
}

impl DerivationSpace {
    pub fn algebra_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.solutions.dim()
    }

    pub fn components(&self) -> usize {
        self.variant.components()
    }

    /// Image of the solution space in the coordinates of component `c`.
    pub fn projection(&self, c: usize) -> Subspace {
        let w = self.n * self.n;
        self.solutions.project(c * w..(c + 1) * w)
    }

    /// Each basis solution split into its component maps.
    pub fn basis_maps(&self) -> Vec<Vec<Mat>> {
        self.solutions.basis().iter().map(|v| maps_from_vector(self.n, v)).collect()
    }

    pub fn contains(&self, maps: &[Mat]) -> bool {
        maps.len() == self.components() && self.solutions.contains(&vector_from_maps(maps))
    }

    /// Entries of component `c` that are nonzero for some solution.
    pub fn support(&self, c: usize) -> Vec<Vec<bool>> {
        let p = self.projection(c);
        let n = self.n;
        (0..n)
            .map(|r| (0..n).map(|col| p.basis().iter().any(|v| !v[r * n + col].is_zero())).collect())
            .collect()
    }
}

fn solve_variant(alg: &BiHomDialgebra, deg: BiDegree, variant: Variant) -> Result<DerivationSpace, DerivationError> {
    let n = alg.dim();
    let theta = twist_power(alg, deg)?;
    let comps = variant.components();
    let unknowns = comps * n * n;
    let rows = comps * 2 * n * n + 2 * n * n * n;
    let system = matrix_of_linear_map(unknowns, rows, |v| {
        residual_vector(alg, &variant, &theta, &maps_from_vector(n, v))
    });
    let solutions = nullspace(&system);
    Ok(DerivationSpace { variant, bidegree: deg, system, solutions, n })
}

pub fn derivation_space(alg: &BiHomDialgebra, deg: BiDegree) -> Result<DerivationSpace, DerivationError> {
    solve_variant(alg, deg, Variant::Plain)
}

pub fn generalized_derivation_space(
    alg: &BiHomDialgebra,
    deg: BiDegree,
    spec: GeneralizedSpec,
) -> Result<DerivationSpace, DerivationError> {
    solve_variant(alg, deg, Variant::Generalized(spec))
}

pub fn quasi_derivation_space(alg: &BiHomDialgebra, deg: BiDegree) -> Result<DerivationSpace, DerivationError> {
    solve_variant(alg, deg, Variant::Quasi)
}

pub fn generalized_triple_space(alg: &BiHomDialgebra, deg: BiDegree) -> Result<DerivationSpace, DerivationError> {
    solve_variant(alg, deg, Variant::Triple)
}

/// A linear map tagged with its bidegree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedMap {
    pub map: Mat,
    pub degree: BiDegree,
}

/// `[D1, D2] = D1 D2 - D2 D1`, of bidegree `(k+k', l+l')`.
pub fn commutator(d1: &GradedMap, d2: &GradedMap) -> Result<GradedMap, DerivationError> {
    let n = d1.map.rows();
    for m in [&d1.map, &d2.map] {
        if m.rows() != n || m.cols() != n {
            return Err(DerivationError::Dimension { rows: m.rows(), cols: m.cols(), n });
        }
    }
    Ok(GradedMap { map: &(&d1.map * &d2.map) - &(&d2.map * &d1.map), degree: d1.degree + d2.degree })
}

/// `Ad_a(x) = x ⊣ ψ(a) - φ(a) ⊢ x`, with each derivation condition at
/// bidegree `(0,0)` evaluated separately.
#[derive(Clone, Debug)]
pub struct AdMap {
    pub map: Mat,
    pub dashv_leibniz: bool,
    pub vdash_leibniz: bool,
    pub commutes_phi: bool,
    pub commutes_psi: bool,
}

impl AdMap {
    pub fn is_full_derivation(&self) -> bool {
        self.dashv_leibniz && self.vdash_leibniz && self.commutes_phi && self.commutes_psi
    }
}

pub fn ad(alg: &BiHomDialgebra, a: &[Scalar]) -> Result<AdMap, DerivationError> {
    let n = alg.dim();
    let phi_a = alg.phi().apply(a);
    let psi_a = alg.psi().apply(a);
    if phi_a != psi_a {
        return Err(DerivationError::AdPrecondition { phi_a: fmt_vec(&phi_a), psi_a: fmt_vec(&psi_a) });
    }
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let x = unit_vec(n, i);
            let mut v = alg.mul(Op::Dashv, &x, &psi_a);
            add_scaled(&mut v, &-Scalar::one(), &alg.mul(Op::Vdash, &phi_a, &x));
            v
        })
        .collect();
    let map = Mat::from_columns(n, &cols);
    let theta = Mat::identity(n);
    let lb = Leibniz { alg, theta_cols: (0..n).map(|i| theta.column(i)).collect(), variant: &Variant::Plain };
    let holds = |op| (0..n).all(|i| (0..n).all(|j| is_zero_vec(&lb.residual(std::slice::from_ref(&map), op, i, j))));
    Ok(AdMap {
        dashv_leibniz: holds(Op::Dashv),
        vdash_leibniz: holds(Op::Vdash),
        commutes_phi: &map * alg.phi() == alg.phi() * &map,
        commutes_psi: &map * alg.psi() == alg.psi() * &map,
        map,
    })
}

/// `σ D σ⁻¹`, after checking that `σ` is an isomorphism `source → target`.
pub fn conjugate(sigma: &Mat, d: &Mat, source: &BiHomDialgebra, target: &BiHomDialgebra) -> Result<Mat, DerivationError> {
    let inv = sigma.inverse().ok_or(DerivationError::Singular)?;
    if !is_morphism(sigma, source, target) {
        return Err(DerivationError::NotMorphism);
    }
    Ok(&(sigma * d) * &inv)
}

/// Automorphisms with small integer coordinates in a basis of the maps
/// commuting with `φ` and `ψ`. Coordinates range over `-bound..=bound`;
/// the search stops after `limit` hits.
pub fn small_automorphisms(alg: &BiHomDialgebra, bound: i64, limit: usize) -> Vec<Mat> {
    let n = alg.dim();
    let comm = matrix_of_linear_map(n * n, 2 * n * n, |v| {
        let m = Mat::from_flat(n, n, v.to_vec());
        let mut out = (&(&m * alg.phi()) - &(alg.phi() * &m)).into_entries();
        out.extend((&(&m * alg.psi()) - &(alg.psi() * &m)).into_entries());
        out
    });
    let basis = nullspace(&comm);
    let d = basis.dim();
    let width = (2 * bound + 1) as usize;
    let total = width.checked_pow(d as u32).unwrap_or(usize::MAX);
    let mut found = Vec::new();
    let mut coeffs = vec![Scalar::zero(); d];
    for idx in 0..total {
        let mut r = idx;
        for c in coeffs.iter_mut() {
            *c = int((r % width) as i64 - bound);
            r /= width;
        }
        let m = Mat::from_flat(n, n, basis.combination(&coeffs));
        if m.determinant().is_zero() {
            continue;
        }
        if is_morphism(&m, alg, alg) {
            found.push(m);
            if found.len() >= limit {
                break;
            }
        }
    }
    found
}

/// Zero vector of the stacked unknowns for a variant.
pub fn zero_solution(n: usize, variant: &Variant) -> Vec<Scalar> {
    zero_vec(variant.components() * n * n)
}
