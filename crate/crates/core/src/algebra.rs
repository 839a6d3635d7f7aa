//! Structure tensors, BiHom-associative dialgebras and algebras, their
//! axiom checks, and the built-in catalog of low-dimensional examples.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalars::{add_scaled, fmt_vec, int, is_zero_vec, sub_vec, zero_vec, Mat, Scalar};

/// The two dialgebra products.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Op {
    /// `⊣`
    Dashv,
    /// `⊢`
    Vdash,
}

impl Op {
    pub const BOTH: [Op; 2] = [Op::Dashv, Op::Vdash];

    pub fn keyword(self) -> &'static str {
        match self {
            Op::Dashv => "dashv",
            Op::Vdash => "vdash",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Dashv => "⊣",
            Op::Vdash => "⊢",
        })
    }
}

/// Bilinear product on an `n`-dimensional space: `e_i ∘ e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StructureTensor {
    dim: usize,
    data: Vec<Scalar>,
}

impl StructureTensor {
    pub fn zero(dim: usize) -> Self {
        StructureTensor { dim, data: zero_vec(dim * dim * dim) }
    }

    /// Builds a tensor from `(i, j, value of e_i ∘ e_j)` entries.
    pub fn from_entries<'a>(dim: usize, entries: impl IntoIterator<Item = (usize, usize, &'a [Scalar])>) -> Self {
        let mut t = StructureTensor::zero(dim);
        for (i, j, v) in entries {
            t.set_product(i, j, v);
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.data
    }

    pub fn from_coeffs(dim: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), dim * dim * dim, "coefficient count does not match dimension");
        StructureTensor { dim, data }
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.data[(i * self.dim + j) * self.dim + k]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: Scalar) {
        let n = self.dim;
        self.data[(i * n + j) * n + k] = v;
    }

    /// The vector `e_i ∘ e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim;
        &self.data[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn set_product(&mut self, i: usize, j: usize, v: &[Scalar]) {
        let n = self.dim;
        assert_eq!(v.len(), n, "product vector has the wrong length");
        self.data[(i * n + j) * n..(i * n + j + 1) * n].clone_from_slice(v);
    }

    pub fn apply(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim;
        let mut out = zero_vec(n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                add_scaled(&mut out, &c, self.product(i, j));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn add(&self, other: &StructureTensor) -> StructureTensor {
        StructureTensor {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> StructureTensor {
        StructureTensor { dim: self.dim, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// The product `x ∘' y = s⁻¹(s x ∘ s y)` transported along an invertible
    /// `s`, given `s` and its inverse.
    pub fn conjugate(&self, s: &Mat, s_inv: &Mat) -> StructureTensor {
        let n = self.dim;
        let cols: Vec<Vec<Scalar>> = (0..n).map(|i| s.column(i)).collect();
        let mut out = StructureTensor::zero(n);
        for i in 0..n {
            for j in 0..n {
                let v = s_inv.apply(&self.apply(&cols[i], &cols[j]));
                out.set_product(i, j, &v);
            }
        }
        out
    }

    /// `x ∘' y = f(x) ∘ g(y)`.
    pub fn precompose(&self, f: &Mat, g: &Mat) -> StructureTensor {
        let n = self.dim;
        let mut out = StructureTensor::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.set_product(i, j, &self.apply(&f.column(i), &g.column(j)));
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("{what} has dimension {actual}, expected {expected}")]
    Shape { what: &'static str, expected: usize, actual: usize },
    #[error("axioms fail:\n{0}")]
    Axioms(AxiomReport),
    #[error("precondition `{condition}` fails: {witness}")]
    Precondition { condition: &'static str, witness: String },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
}

/// The identities a BiHom-associative dialgebra must satisfy.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Axiom {
    /// `φψ = ψφ`
    TwistsCommute,
    /// `(x⊣y)⊣ψz = φx⊣(y⊣z)`
    DashvDashv,
    /// `(x⊣y)⊣ψz = φx⊣(y⊢z)`
    DashvVdash,
    /// `(x⊢y)⊣ψz = φx⊢(y⊣z)`
    Middle,
    /// `(x⊣y)⊢ψz = φx⊢(y⊢z)`
    VdashDashv,
    /// `(x⊢y)⊢ψz = φx⊢(y⊢z)`
    VdashVdash,
    /// `(xy)ψz = φx(yz)` for a BiHom-associative algebra
    Associativity,
}

impl Axiom {
    pub const DIALGEBRA: [Axiom; 6] = [
        Axiom::TwistsCommute,
        Axiom::DashvDashv,
        Axiom::DashvVdash,
        Axiom::Middle,
        Axiom::VdashDashv,
        Axiom::VdashVdash,
    ];

    pub const ASSOCIATIVE: [Axiom; 2] = [Axiom::TwistsCommute, Axiom::Associativity];

    /// `(inner left, outer left, outer right, inner right)` with
    /// `(x a y) b ψz = φx c (y d z)`.
    pub fn pattern(self) -> Option<(Op, Op, Op, Op)> {
        use Op::*;
        match self {
            Axiom::DashvDashv => Some((Dashv, Dashv, Dashv, Dashv)),
            Axiom::DashvVdash => Some((Dashv, Dashv, Dashv, Vdash)),
            Axiom::Middle => Some((Vdash, Dashv, Vdash, Dashv)),
            Axiom::VdashDashv => Some((Dashv, Vdash, Vdash, Vdash)),
            Axiom::VdashVdash => Some((Vdash, Vdash, Vdash, Vdash)),
            Axiom::TwistsCommute | Axiom::Associativity => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Axiom::TwistsCommute => "phi psi = psi phi",
            Axiom::DashvDashv => "(x -| y) -| psi z = phi x -| (y -| z)",
            Axiom::DashvVdash => "(x -| y) -| psi z = phi x -| (y |- z)",
            Axiom::Middle => "(x |- y) -| psi z = phi x |- (y -| z)",
            Axiom::VdashDashv => "(x -| y) |- psi z = phi x |- (y |- z)",
            Axiom::VdashVdash => "(x |- y) |- psi z = phi x |- (y |- z)",
            Axiom::Associativity => "(x y) psi z = phi x (y z)",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One failing instance of an axiom on basis elements. For the twist
/// commutation the witness is a single basis index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub axiom: Axiom,
    pub basis: Vec<usize>,
    pub residual: Vec<Scalar>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.basis.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "{} at ({}): residual {}", self.axiom, args.join(", "), fmt_vec(&self.residual))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomReport {
    pub checked: Vec<Axiom>,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failing_axioms(&self) -> Vec<Axiom> {
        let mut v: Vec<Axiom> = self.violations.iter().map(|x| x.axiom).collect();
        v.dedup();
        v
    }

    pub fn passed(&self) -> usize {
        let failing = self.failing_axioms();
        self.checked.iter().filter(|a| !failing.contains(a)).count()
    }

    pub fn total(&self) -> usize {
        self.checked.len()
    }

    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

fn check_square(what: &'static str, m: &Mat, n: usize) -> Result<(), AlgebraError> {
    if m.rows() != n || m.cols() != n {
        return Err(AlgebraError::Shape { what, expected: n, actual: m.rows().max(m.cols()) });
    }
    Ok(())
}

fn check_tensor(what: &'static str, t: &StructureTensor, n: usize) -> Result<(), AlgebraError> {
    if t.dim() != n {
        return Err(AlgebraError::Shape { what, expected: n, actual: t.dim() });
    }
    Ok(())
}

fn commute_violations(phi: &Mat, psi: &Mat) -> Vec<Violation> {
    let d = &(phi * psi) - &(psi * phi);
    (0..d.cols())
        .map(|j| (j, d.column(j)))
        .filter(|(_, c)| !is_zero_vec(c))
        .map(|(j, c)| Violation { axiom: Axiom::TwistsCommute, basis: vec![j], residual: c })
        .collect()
}

/// A dialgebra `(A, ⊣, ⊢, φ, ψ)` over the rationals with a fixed basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiHomDialgebra {
    name: String,
    dim: usize,
    left: StructureTensor,
    right: StructureTensor,
    phi: Mat,
    psi: Mat,
    params: Vec<(String, Scalar)>,
}

impl BiHomDialgebra {
    /// Validates shapes and all six axioms.
    pub fn new(
        name: impl Into<String>,
        left: StructureTensor,
        right: StructureTensor,
        phi: Mat,
        psi: Mat,
    ) -> Result<Self, AlgebraError> {
        let d = Self::new_unchecked(name, left, right, phi, psi)?;
        let report = d.check();
        if !report.is_ok() {
            return Err(AlgebraError::Axioms(report));
        }
        Ok(d)
    }

    /// Validates shapes only; use [`check_dialgebra`] to inspect the axioms.
    pub fn new_unchecked(
        name: impl Into<String>,
        left: StructureTensor,
        right: StructureTensor,
        phi: Mat,
        psi: Mat,
    ) -> Result<Self, AlgebraError> {
        let n = left.dim();
        check_tensor("right product", &right, n)?;
        check_square("phi", &phi, n)?;
        check_square("psi", &psi, n)?;
        Ok(BiHomDialgebra { name: name.into(), dim: n, left, right, phi, psi, params: Vec::new() })
    }

    pub fn with_params(mut self, params: Vec<(String, Scalar)>) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left(&self) -> &StructureTensor {
        &self.left
    }

    pub fn right(&self) -> &StructureTensor {
        &self.right
    }

    pub fn product(&self, op: Op) -> &StructureTensor {
        match op {
            Op::Dashv => &self.left,
            Op::Vdash => &self.right,
        }
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn psi(&self) -> &Mat {
        &self.psi
    }

    pub fn params(&self) -> &[(String, Scalar)] {
        &self.params
    }

    pub fn mul(&self, op: Op, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.product(op).apply(x, y)
    }

    pub fn check(&self) -> AxiomReport {
        check_dialgebra(self)
    }

    /// `φ` and `ψ` are morphisms for both products.
    pub fn is_multiplicative(&self) -> bool {
        Op::BOTH.iter().all(|&op| {
            let t = self.product(op);
            is_morphism_of(t, t, &self.phi) && is_morphism_of(t, t, &self.psi)
        })
    }

    /// Multiplicative with `φ` and `ψ` both invertible.
    pub fn is_regular(&self) -> bool {
        !self.phi.determinant().is_zero() && !self.psi.determinant().is_zero() && self.is_multiplicative()
    }

    /// `φ` and `ψ` are invertible; all that negative twist powers need.
    pub fn has_invertible_twists(&self) -> bool {
        !self.phi.determinant().is_zero() && !self.psi.determinant().is_zero()
    }

    /// Twisting of an ordinary dialgebra: `x ⊣' y = φx ⊣ ψy`,
    /// `x ⊢' y = φx ⊢ ψy`. When `φ, ψ` are commuting morphisms of an
    /// associative dialgebra the result satisfies the six axioms.
    pub fn twist_of(
        name: impl Into<String>,
        left: &StructureTensor,
        right: &StructureTensor,
        phi: Mat,
        psi: Mat,
    ) -> Result<Self, AlgebraError> {
        let l = left.precompose(&phi, &psi);
        let r = right.precompose(&phi, &psi);
        Self::new_unchecked(name, l, r, phi, psi)
    }

    /// Structure transported along an invertible `s`: products and twists
    /// are conjugated so that `s` becomes an isomorphism onto `self`.
    pub fn transport(&self, s: &Mat) -> Option<BiHomDialgebra> {
        let inv = s.inverse()?;
        Some(BiHomDialgebra {
            name: format!("{}'", self.name),
            dim: self.dim,
            left: self.left.conjugate(s, &inv),
            right: self.right.conjugate(s, &inv),
            phi: &(&inv * &self.phi) * s,
            psi: &(&inv * &self.psi) * s,
            params: self.params.clone(),
        })
    }
}

fn is_morphism_of(src: &StructureTensor, dst: &StructureTensor, f: &Mat) -> bool {
    let n = src.dim();
    (0..n).all(|i| {
        (0..n).all(|j| f.apply(src.product(i, j)) == dst.apply(&f.column(i), &f.column(j)))
    })
}

/// Evaluates all six identities on every basis triple (and `φψ = ψφ` on
/// every basis vector), returning the nonzero residuals.
pub fn check_dialgebra(d: &BiHomDialgebra) -> AxiomReport {
    let n = d.dim();
    let mut violations = commute_violations(d.phi(), d.psi());
    let phi_cols: Vec<Vec<Scalar>> = (0..n).map(|i| d.phi().column(i)).collect();
    let psi_cols: Vec<Vec<Scalar>> = (0..n).map(|i| d.psi().column(i)).collect();
    for axiom in &Axiom::DIALGEBRA[1..] {
        let (a, b, c, e) = axiom.pattern().unwrap();
        for x in 0..n {
            for y in 0..n {
                let xy = d.product(a).product(x, y);
                for z in 0..n {
                    let lhs = d.mul(b, xy, &psi_cols[z]);
                    let yz = d.product(e).product(y, z);
                    let rhs = d.mul(c, &phi_cols[x], yz);
                    let residual = sub_vec(&lhs, &rhs);
                    if !is_zero_vec(&residual) {
                        violations.push(Violation { axiom: *axiom, basis: vec![x, y, z], residual });
                    }
                }
            }
        }
    }
    AxiomReport { checked: Axiom::DIALGEBRA.to_vec(), violations }
}

/// `f` is a morphism of dialgebras: it preserves both products and
/// intertwines the twists.
pub fn is_morphism(f: &Mat, src: &BiHomDialgebra, dst: &BiHomDialgebra) -> bool {
    f.rows() == dst.dim()
        && f.cols() == src.dim()
        && Op::BOTH.iter().all(|&op| is_morphism_of(src.product(op), dst.product(op), f))
        && (f * src.phi()) == (dst.phi() * f)
        && (f * src.psi()) == (dst.psi() * f)
}

/// An algebra `(A, ·, φ, ψ)` with `(xy)ψz = φx(yz)` and `φψ = ψφ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiHomAssociativeAlgebra {
    name: String,
    dim: usize,
    mul: StructureTensor,
    phi: Mat,
    psi: Mat,
}

impl BiHomAssociativeAlgebra {
    pub fn new(name: impl Into<String>, mul: StructureTensor, phi: Mat, psi: Mat) -> Result<Self, AlgebraError> {
        let a = Self::new_unchecked(name, mul, phi, psi)?;
        let report = a.check();
        if !report.is_ok() {
            return Err(AlgebraError::Axioms(report));
        }
        Ok(a)
    }

    pub fn new_unchecked(name: impl Into<String>, mul: StructureTensor, phi: Mat, psi: Mat) -> Result<Self, AlgebraError> {
        let n = mul.dim();
        check_square("phi", &phi, n)?;
        check_square("psi", &psi, n)?;
        Ok(BiHomAssociativeAlgebra { name: name.into(), dim: n, mul, phi, psi })
    }

    /// `x ·' y = φx · ψy` for an associative product.
    pub fn twist_of(name: impl Into<String>, mul: &StructureTensor, phi: Mat, psi: Mat) -> Result<Self, AlgebraError> {
        Self::new_unchecked(name, mul.precompose(&phi, &psi), phi, psi)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mul_tensor(&self) -> &StructureTensor {
        &self.mul
    }

    pub fn phi(&self) -> &Mat {
        &self.phi
    }

    pub fn psi(&self) -> &Mat {
        &self.psi
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        self.mul.apply(x, y)
    }

    pub fn check(&self) -> AxiomReport {
        check_bihom_associative(self)
    }

    pub fn is_multiplicative(&self) -> bool {
        is_morphism_of(&self.mul, &self.mul, &self.phi) && is_morphism_of(&self.mul, &self.mul, &self.psi)
    }

    pub fn is_regular(&self) -> bool {
        !self.phi.determinant().is_zero() && !self.psi.determinant().is_zero() && self.is_multiplicative()
    }

    /// The dialgebra with both products equal to this one.
    pub fn as_dialgebra(&self) -> BiHomDialgebra {
        BiHomDialgebra::new_unchecked(
            self.name.clone(),
            self.mul.clone(),
            self.mul.clone(),
            self.phi.clone(),
            self.psi.clone(),
        )
        .expect("shapes already validated")
    }
}

pub fn check_bihom_associative(a: &BiHomAssociativeAlgebra) -> AxiomReport {
    let n = a.dim();
    let mut violations = commute_violations(a.phi(), a.psi());
    for x in 0..n {
        let phx = a.phi().column(x);
        for y in 0..n {
            for z in 0..n {
                let lhs = a.mul(a.mul.product(x, y), &a.psi().column(z));
                let rhs = a.mul(&phx, a.mul.product(y, z));
                let residual = sub_vec(&lhs, &rhs);
                if !is_zero_vec(&residual) {
                    violations.push(Violation { axiom: Axiom::Associativity, basis: vec![x, y, z], residual });
                }
            }
        }
    }
    AxiomReport { checked: Axiom::ASSOCIATIVE.to_vec(), violations }
}

/// Builds `x ⊣ y = φx · dy`, `x ⊢ y = dx · ψy` from a BiHom-associative
/// algebra and a square-zero derivation `d` commuting with the twists, where
/// the twists are idempotent algebra morphisms. Each hypothesis is checked
/// and the first failure is returned with a witness; the result is checked
/// against the dialgebra axioms as well.
pub fn from_differential_algebra(a: &BiHomAssociativeAlgebra, d: &Mat) -> Result<BiHomDialgebra, AlgebraError> {
    let n = a.dim();
    check_square("d", d, n)?;
    let report = a.check();
    if !report.is_ok() {
        return Err(AlgebraError::Precondition {
            condition: "BiHom-associative",
            witness: report.violations[0].to_string(),
        });
    }
    let fail = |condition: &'static str, witness: String| Err(AlgebraError::Precondition { condition, witness });
    let d2 = d * d;
    if !d2.is_zero() {
        return fail("d^2 = 0", format!("d^2 = {d2}"));
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = d.apply(a.mul.product(i, j));
            let rhs = {
                let mut v = a.mul(&d.column(i), &crate::scalars::unit_vec(n, j));
                add_scaled(&mut v, &Scalar::one(), &a.mul(&crate::scalars::unit_vec(n, i), &d.column(j)));
                v
            };
            if lhs != rhs {
                return fail(
                    "d(xy) = dx y + x dy",
                    format!("at (e{}, e{}): {} vs {}", i + 1, j + 1, fmt_vec(&lhs), fmt_vec(&rhs)),
                );
            }
        }
    }
    if (d * a.phi()) != (a.phi() * d) {
        return fail("d phi = phi d", format!("phi = {}", a.phi()));
    }
    if (d * a.psi()) != (a.psi() * d) {
        return fail("d psi = psi d", format!("psi = {}", a.psi()));
    }
    if &(a.phi() * a.phi()) != a.phi() {
        return fail("phi^2 = phi", format!("phi = {}", a.phi()));
    }
    if &(a.psi() * a.psi()) != a.psi() {
        return fail("psi^2 = psi", format!("psi = {}", a.psi()));
    }
    if !a.is_multiplicative() {
        return fail("phi, psi multiplicative", format!("phi = {}, psi = {}", a.phi(), a.psi()));
    }
    let mut left = StructureTensor::zero(n);
    let mut right = StructureTensor::zero(n);
    for i in 0..n {
        for j in 0..n {
            left.set_product(i, j, &a.mul(&a.phi().column(i), &d.column(j)));
            right.set_product(i, j, &a.mul(&d.column(i), &a.psi().column(j)));
        }
    }
    BiHomDialgebra::new(format!("{}_d", a.name()), left, right, a.phi().clone(), a.psi().clone())
}

/// Named rational parameter values.
pub type Bindings = BTreeMap<String, Scalar>;

/// Product entries `(op, i, j, coefficient of e1)` for the catalog; all
/// catalog products land in the span of `e1`.
type Row = &'static [(Op, usize, usize, Coef)];

#[derive(Clone, Copy)]
enum Coef {
    One,
    P(&'static str),
}

const ALG2: [(&str, Row); 4] = {
    use Coef::*;
    use Op::*;
    [
        ("Alg2_1", &[(Dashv, 0, 1, P("a")), (Dashv, 1, 0, P("b")), (Vdash, 0, 1, P("c")), (Vdash, 1, 0, P("d")), (Vdash, 1, 1, P("f"))]),
        ("Alg2_2", &[(Dashv, 0, 1, P("a")), (Dashv, 1, 0, P("a")), (Dashv, 1, 1, One), (Vdash, 0, 1, One), (Vdash, 1, 0, One)]),
        ("Alg2_3", &[(Dashv, 0, 1, P("a")), (Vdash, 0, 1, P("b")), (Vdash, 1, 0, P("c")), (Vdash, 1, 1, P("d"))]),
        ("Alg2_4", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, P("a")), (Vdash, 0, 1, P("b")), (Vdash, 1, 0, P("c")), (Vdash, 1, 1, P("d"))]),
    ]
};

const ALG3: [(&str, Row); 5] = {
    use Coef::*;
    use Op::*;
    [
        ("Alg3_1", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, P("a")), (Dashv, 1, 2, P("b")), (Dashv, 2, 1, P("c")), (Vdash, 1, 0, One), (Vdash, 1, 1, P("d")), (Vdash, 2, 1, P("f"))]),
        ("Alg3_2", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, One), (Dashv, 1, 2, One), (Dashv, 2, 1, One), (Vdash, 0, 1, One), (Vdash, 1, 0, One), (Vdash, 1, 1, One), (Vdash, 2, 1, One)]),
        ("Alg3_3", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, One), (Dashv, 1, 2, One), (Dashv, 2, 1, One), (Vdash, 0, 1, One), (Vdash, 1, 1, One), (Vdash, 1, 2, One), (Vdash, 2, 1, One)]),
        ("Alg3_4", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, One), (Dashv, 1, 2, One), (Vdash, 0, 1, One), (Vdash, 1, 0, One), (Vdash, 1, 1, One), (Vdash, 1, 2, One), (Vdash, 2, 1, One)]),
        ("Alg3_5", &[(Dashv, 0, 1, One), (Dashv, 1, 0, One), (Dashv, 1, 1, One), (Dashv, 1, 2, One), (Vdash, 0, 1, One), (Vdash, 1, 0, One), (Vdash, 1, 2, One), (Vdash, 2, 1, One)]),
    ]
};

/// Names of the built-in catalog entries.
pub fn catalog_names() -> Vec<&'static str> {
    ALG2.iter().chain(ALG3.iter()).map(|(n, _)| *n).collect()
}

/// Parameters an entry depends on, in alphabetical order. The
/// three-dimensional entries always use `b` in `ψ(e3) = b e3`.
pub fn catalog_params(name: &str) -> Option<Vec<&'static str>> {
    let (dim, row) = catalog_row(name)?;
    let mut ps: Vec<&'static str> = row
        .iter()
        .filter_map(|(_, _, _, c)| match c {
            Coef::P(p) => Some(*p),
            Coef::One => None,
        })
        .collect();
    if dim == 3 {
        ps.push("b");
    }
    ps.sort();
    ps.dedup();
    Some(ps)
}

fn catalog_row(name: &str) -> Option<(usize, Row)> {
    ALG2.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, r)| (2, *r))
        .or_else(|| ALG3.iter().find(|(n, _)| *n == name).map(|(_, r)| (3, *r)))
}

/// Instantiates a catalog entry. Products not listed are zero, as are the
/// images of basis vectors not listed for `φ` and `ψ`:
/// `φ(e2) = e1`, `ψ(e2) = e1`, and in dimension three also `ψ(e3) = b e3`.
pub fn catalog(name: &str, bindings: &Bindings) -> Result<BiHomDialgebra, AlgebraError> {
    let (n, row) = catalog_row(name).ok_or_else(|| AlgebraError::UnknownCatalogEntry(name.to_string()))?;
    let lookup = |p: &str| bindings.get(p).cloned().ok_or_else(|| AlgebraError::UnboundParameter(p.to_string()));
    let mut left = StructureTensor::zero(n);
    let mut right = StructureTensor::zero(n);
    for &(op, i, j, c) in row {
        let v = match c {
            Coef::One => Scalar::one(),
            Coef::P(p) => lookup(p)?,
        };
        let t = if op == Op::Dashv { &mut left } else { &mut right };
        t.set(i, j, 0, v);
    }
    let mut phi = Mat::zeros(n, n);
    let mut psi = Mat::zeros(n, n);
    phi[(0, 1)] = Scalar::one();
    psi[(0, 1)] = Scalar::one();
    if n == 3 {
        psi[(2, 2)] = lookup("b")?;
    }
    let params = catalog_params(name)
        .unwrap()
        .into_iter()
        .map(|p| (p.to_string(), bindings[p].clone()))
        .collect();
    BiHomDialgebra::new(name, left, right, phi, psi).map(|d| d.with_params(params))
}

/// Bindings with every parameter of the entry set to `1`.
pub fn default_bindings(name: &str) -> Option<Bindings> {
    Some(catalog_params(name)?.into_iter().map(|p| (p.to_string(), int(1))).collect())
}

/// Three candidate readings of a three-dimensional BiHom-associative
/// algebra whose defining table lists one product twice.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tw3Reading {
    /// `e1·e1 = e1`, `e1·e2 = e1`
    A,
    /// `e1·e2 = e1` only
    B,
    /// `e1·e1 = e1`, `e1·e2 = e2`
    C,
}

impl Tw3Reading {
    pub const ALL: [Tw3Reading; 3] = [Tw3Reading::A, Tw3Reading::B, Tw3Reading::C];

    pub fn name(self) -> &'static str {
        match self {
            Tw3Reading::A => "Tw3_A",
            Tw3Reading::B => "Tw3_B",
            Tw3Reading::C => "Tw3_C",
        }
    }
}

/// The three-dimensional twisted algebra under the chosen reading. Returned
/// unchecked: none of the readings satisfies the axioms, and callers report
/// that rather than fail early.
pub fn tw3_algebra(reading: Tw3Reading) -> BiHomAssociativeAlgebra {
    let n = 3;
    let e = |k: usize| crate::scalars::unit_vec(n, k);
    let mut mul = StructureTensor::zero(n);
    for (i, j, k) in [(1, 0, 1), (1, 1, 1), (2, 1, 2), (2, 2, 2)] {
        mul.set_product(i, j, &e(k));
    }
    match reading {
        Tw3Reading::A => {
            mul.set_product(0, 0, &e(0));
            mul.set_product(0, 1, &e(0));
        }
        Tw3Reading::B => mul.set_product(0, 1, &e(0)),
        Tw3Reading::C => {
            mul.set_product(0, 0, &e(0));
            mul.set_product(0, 1, &e(1));
        }
    }
    let mut phi = Mat::zeros(n, n);
    phi[(1, 1)] = Scalar::one();
    let mut psi = Mat::zeros(n, n);
    psi[(0, 0)] = Scalar::one();
    psi[(0, 1)] = Scalar::one();
    psi[(1, 1)] = int(-1);
    BiHomAssociativeAlgebra::new_unchecked(reading.name(), mul, phi, psi).expect("fixed shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{frac, unit_vec};

    fn bind(pairs: &[(&str, i64)]) -> Bindings {
        pairs.iter().map(|(k, v)| (k.to_string(), int(*v))).collect()
    }

    #[test]
    fn catalog_entries_satisfy_axioms() {
        for name in catalog_names() {
            let b = default_bindings(name).unwrap();
            let d = catalog(name, &b).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(d.check().is_ok());
        }
    }

    #[test]
    fn catalog_with_rational_params() {
        let b: Bindings = [("a", frac(1, 2)), ("b", int(-3)), ("c", int(0)), ("d", frac(7, 5)), ("f", int(9))]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let d = catalog("Alg2_1", &b).unwrap();
        assert_eq!(d.left().get(0, 1, 0), &frac(1, 2));
        assert_eq!(d.right().get(1, 1, 0), &int(9));
        assert!(matches!(catalog("Alg2_1", &bind(&[("a", 1)])), Err(AlgebraError::UnboundParameter(_))));
        assert!(matches!(catalog("Nope", &Bindings::new()), Err(AlgebraError::UnknownCatalogEntry(_))));
    }

    #[test]
    fn perturbation_is_detected() {
        let d = catalog("Alg2_2", &bind(&[("a", 1)])).unwrap();
        let mut left = d.left().clone();
        left.set(0, 0, 0, int(1));
        let bad = BiHomDialgebra::new_unchecked("bad", left, d.right().clone(), d.phi().clone(), d.psi().clone()).unwrap();
        let report = check_dialgebra(&bad);
        assert!(!report.is_ok());
        assert!(report.passed() < 6);
    }

    #[test]
    fn noncommuting_twists_reported() {
        let phi = Mat::from_i64(&[&[0, 1], &[0, 0]]);
        let psi = Mat::from_i64(&[&[1, 0], &[0, 0]]);
        let d = BiHomDialgebra::new_unchecked("t", StructureTensor::zero(2), StructureTensor::zero(2), phi, psi).unwrap();
        let r = d.check();
        assert_eq!(r.failing_axioms(), vec![Axiom::TwistsCommute]);
        assert_eq!(r.passed(), 5);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let r = BiHomDialgebra::new_unchecked("s", StructureTensor::zero(2), StructureTensor::zero(3), Mat::identity(2), Mat::identity(2));
        assert!(matches!(r, Err(AlgebraError::Shape { .. })));
    }

    #[test]
    fn differential_construction_rejects_non_derivation() {
        let mut mul = StructureTensor::zero(2);
        mul.set_product(0, 0, &unit_vec(2, 0));
        mul.set_product(0, 1, &unit_vec(2, 1));
        mul.set_product(1, 0, &unit_vec(2, 1));
        let a = BiHomAssociativeAlgebra::new("A", mul, Mat::identity(2), Mat::identity(2)).unwrap();
        let d = Mat::from_i64(&[&[0, 0], &[1, 0]]);
        match from_differential_algebra(&a, &d) {
            Err(AlgebraError::Precondition { condition, .. }) => assert_eq!(condition, "d(xy) = dx y + x dy"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn differential_construction_on_dual_numbers() {
        // k[t]/t^2 ⊗ k[s]/s^2 style: basis 1, t with d(1)=0, d(t)=0 is trivial,
        // so use the exterior algebra on one odd generator over a two-dim
        // square-zero ideal instead: e1 unit, e2 e3 with e2 e2 = 0 and d e2 = e3.
        let mut mul = StructureTensor::zero(3);
        for k in 0..3 {
            mul.set_product(0, k, &unit_vec(3, k));
            mul.set_product(k, 0, &unit_vec(3, k));
        }
        let a = BiHomAssociativeAlgebra::new("E", mul, Mat::identity(3), Mat::identity(3)).unwrap();
        let d = Mat::from_i64(&[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]]);
        let dd = from_differential_algebra(&a, &d).unwrap();
        assert!(dd.check().is_ok());
    }

    #[test]
    fn tw3_readings_fail_axioms() {
        for r in Tw3Reading::ALL {
            let a = tw3_algebra(r);
            let rep = a.check();
            assert!(rep.failing_axioms().contains(&Axiom::TwistsCommute), "{r:?}");
            assert!(rep.failing_axioms().contains(&Axiom::Associativity), "{r:?}");
        }
    }

    #[test]
    fn transport_gives_isomorphic_structure() {
        let d = catalog("Alg3_2", &bind(&[("b", 2)])).unwrap();
        let s = Mat::from_i64(&[&[1, 1, 0], &[0, 1, 0], &[0, 2, 1]]);
        let t = d.transport(&s).unwrap();
        assert!(t.check().is_ok());
        assert!(is_morphism(&s, &t, &d));
    }
}
