//! Truncated one-parameter formal deformations `⊣_t = Σ t^i ⊣_i`,
//! `⊢_t = Σ t^i ⊢_i` of a dialgebra: order-by-order residuals, base change,
//! equivalences `ψ_t = id + ψ_1 t + …` and triviality solving.
//!
//! The twist maps are carried as series too. Deformations built directly
//! from a base keep them constant; base change along a formal automorphism
//! makes them `t`-dependent.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Axiom, BiHomDialgebra, Op, StructureTensor};
use crate::cohomology::{tuple_of, DialgCochain, Multilinear};
use crate::operad::{brace, pi_from_products};
use crate::par;
use crate::scalars::{add_scaled, fmt_vec, matrix_of_linear_map, solve, unit_vec, zero_vec, Mat, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeformationError {
    #[error("order {requested} exceeds truncation order {order}")]
    OrderTooHigh { requested: usize, order: usize },
    #[error("deformation has order 0")]
    NoInfinitesimal,
    #[error("term of order {order} has dimension {actual}, expected {expected}")]
    Dimension { order: usize, expected: usize, actual: usize },
    #[error("{product} term of order {order} is not compatible with phi and psi")]
    Incompatible { order: usize, product: Op },
    #[error("base change matrix is singular")]
    Singular,
    #[error("an equivalence must start with the identity")]
    NotUnipotent,
}

/// Products and twists as polynomials in `t` truncated at degree `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedDeformation {
    base: BiHomDialgebra,
    dashv: Vec<StructureTensor>,
    vdash: Vec<StructureTensor>,
    phi: Vec<Mat>,
    psi: Vec<Mat>,
}

impl TruncatedDeformation {
    /// `π_t = π + Σ_{i≥1} π_i t^i` with `terms[i-1] = (⊣_i, ⊢_i)`. Each term
    /// must be compatible with `φ` and `ψ`.
    pub fn new(base: &BiHomDialgebra, terms: Vec<(StructureTensor, StructureTensor)>) -> Result<Self, DeformationError> {
        let d = Self::new_unchecked(base, terms)?;
        for i in 1..=d.order() {
            for op in Op::BOTH {
                if !Multilinear::from_tensor(d.product(op, i)).is_compatible(base.phi(), base.psi()) {
                    return Err(DeformationError::Incompatible { order: i, product: op });
                }
            }
        }
        Ok(d)
    }

    /// As [`TruncatedDeformation::new`] without the compatibility check.
    pub fn new_unchecked(base: &BiHomDialgebra, terms: Vec<(StructureTensor, StructureTensor)>) -> Result<Self, DeformationError> {
        let n = base.dim();
        let mut dashv = vec![base.left().clone()];
        let mut vdash = vec![base.right().clone()];
        for (i, (l, r)) in terms.into_iter().enumerate() {
            for t in [&l, &r] {
                if t.dim() != n {
                    return Err(DeformationError::Dimension { order: i + 1, expected: n, actual: t.dim() });
                }
            }
            dashv.push(l);
            vdash.push(r);
        }
        let order = dashv.len() - 1;
        let mut phi = vec![Mat::zeros(n, n); order + 1];
        let mut psi = phi.clone();
        phi[0] = base.phi().clone();
        psi[0] = base.psi().clone();
        Ok(TruncatedDeformation { base: base.clone(), dashv, vdash, phi, psi })
    }

    /// All higher terms zero.
    pub fn zero(base: &BiHomDialgebra, order: usize) -> Self {
        let z = StructureTensor::zero(base.dim());
        Self::new_unchecked(base, vec![(z.clone(), z); order]).unwrap()
    }

    /// Deformation whose first-order term is the 2-cochain `π1`.
    pub fn first_order(base: &BiHomDialgebra, pi1: &DialgCochain) -> Result<Self, DeformationError> {
        let (l, r) = crate::operad::products_of_pi(pi1);
        Self::new(base, vec![(l.to_tensor(), r.to_tensor())])
    }

    pub fn base(&self) -> &BiHomDialgebra {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn order(&self) -> usize {
        self.dashv.len() - 1
    }

    pub fn product(&self, op: Op, i: usize) -> &StructureTensor {
        match op {
            Op::Dashv => &self.dashv[i],
            Op::Vdash => &self.vdash[i],
        }
    }

    pub fn phi(&self, i: usize) -> &Mat {
        &self.phi[i]
    }

    pub fn psi(&self, i: usize) -> &Mat {
        &self.psi[i]
    }

    /// True when the twists carry no `t`-dependence.
    pub fn has_constant_twists(&self) -> bool {
        self.phi[1..].iter().chain(&self.psi[1..]).all(Mat::is_zero)
    }

    /// `π_i` as a tree-indexed 2-cochain.
    pub fn term(&self, i: usize) -> DialgCochain {
        pi_from_products(self.dim(), &Multilinear::from_tensor(&self.dashv[i]), &Multilinear::from_tensor(&self.vdash[i]))
    }

    /// Same data cut down to a lower truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        let k = order.min(self.order()) + 1;
        TruncatedDeformation {
            base: self.base.clone(),
            dashv: self.dashv[..k].to_vec(),
            vdash: self.vdash[..k].to_vec(),
            phi: self.phi[..k].to_vec(),
            psi: self.psi[..k].to_vec(),
        }
    }

    /// Same data with zero terms appended up to `order`.
    pub fn extend(&self, order: usize) -> Self {
        let mut out = self.clone();
        let n = self.dim();
        while out.order() < order {
            out.dashv.push(StructureTensor::zero(n));
            out.vdash.push(StructureTensor::zero(n));
            out.phi.push(Mat::zeros(n, n));
            out.psi.push(Mat::zeros(n, n));
        }
        out
    }

    /// Equal products and twists at every order (names are ignored).
    pub fn same_series(&self, other: &Self) -> bool {
        self.dashv == other.dashv && self.vdash == other.vdash && self.phi == other.phi && self.psi == other.psi
    }

    /// Collected order-`n` residuals of all axiom families.
    pub fn residual(&self, n: usize) -> Result<OrderResidual, DeformationError> {
        deformation_residual(self, n)
    }
}

/// Residuals at one order: the twist commutation as a linear map and each
/// of the five product identities as a trilinear map, in the order of
/// [`Axiom::DIALGEBRA`].
#[derive(Clone, Debug)]
pub struct OrderResidual {
    pub order: usize,
    pub families: Vec<(Axiom, Multilinear)>,
    /// `Σ_{i+j=n} {π_i}{π_j}`, available when the twists are constant.
    pub operadic: Option<DialgCochain>,
}

/// A nonzero residual value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResidualWitness {
    pub order: usize,
    pub axiom: Axiom,
    pub basis: Vec<usize>,
    pub value: Vec<Scalar>,
}

impl fmt::Display for ResidualWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis: Vec<String> = self.basis.iter().map(|i| format!("e{}", i + 1)).collect();
        write!(f, "order {}: {} at ({}) = {}", self.order, self.axiom, basis.join(", "), fmt_vec(&self.value))
    }
}

impl OrderResidual {
    pub fn is_zero(&self) -> bool {
        self.families.iter().all(|(_, m)| m.is_zero())
    }

    pub fn family(&self, axiom: Axiom) -> &Multilinear {
        &self.families.iter().find(|(a, _)| *a == axiom).expect("all families present").1
    }

    /// The two families written out in the definition of a deformation.
    pub fn displayed_families(&self) -> [(Axiom, bool); 2] {
        [Axiom::DashvDashv, Axiom::DashvVdash].map(|a| (a, self.family(a).is_zero()))
    }

    pub fn witness(&self) -> Option<ResidualWitness> {
        for (axiom, m) in &self.families {
            let count = m.dim().pow(m.arity() as u32);
            for t in 0..count {
                let v = m.value_at(t);
                if v.iter().any(|x| !x.is_zero()) {
                    return Some(ResidualWitness {
                        order: self.order,
                        axiom: *axiom,
                        basis: tuple_of(t, m.dim(), m.arity()),
                        value: v.to_vec(),
                    });
                }
            }
        }
        None
    }
}

/// `Σ_{i+j+k=n} (x ⋄_j y) ⋄_i ψ_k z - φ_k x ⋄_i (y ⋄_j z)` for each axiom
/// pattern, and `Σ_{i+j=n} φ_i ψ_j - ψ_j φ_i` for the twists.
pub fn deformation_residual(defm: &TruncatedDeformation, n: usize) -> Result<OrderResidual, DeformationError> {
    if n > defm.order() {
        return Err(DeformationError::OrderTooHigh { requested: n, order: defm.order() });
    }
    let dim = defm.dim();
    let mut commute = Mat::zeros(dim, dim);
    for i in 0..=n {
        commute = &commute + &(&(&defm.phi[i] * &defm.psi[n - i]) - &(&defm.psi[n - i] * &defm.phi[i]));
    }
    let mut families = vec![(Axiom::TwistsCommute, Multilinear::from_matrix(&commute))];
    let axioms: Vec<Axiom> = Axiom::DIALGEBRA[1..].to_vec();
    let trilinear = par::map(&axioms, |&axiom| {
        let (a, b, c, e) = axiom.pattern().unwrap();
        Multilinear::from_fn(3, dim, |t| {
            let mut acc = zero_vec(dim);
            for i in 0..=n {
                for j in 0..=n - i {
                    let k = n - i - j;
                    let (x, y, z) = (unit_vec(dim, t[0]), unit_vec(dim, t[1]), unit_vec(dim, t[2]));
                    let lhs = defm.product(b, i).apply(defm.product(a, j).product(t[0], t[1]), &defm.psi[k].apply(&z));
                    let rhs = defm.product(c, i).apply(&defm.phi[k].apply(&x), &defm.product(e, j).apply(&y, &z));
                    add_scaled(&mut acc, &Scalar::one(), &lhs);
                    add_scaled(&mut acc, &-Scalar::one(), &rhs);
                }
            }
            acc
        })
    });
    families.extend(axioms.into_iter().zip(trilinear));
    let operadic = defm.has_constant_twists().then(|| {
        let mut acc = DialgCochain::zero(3, dim);
        for i in 0..=n {
            let term = brace(&defm.base, &defm.term(i), &[defm.term(n - i)]).expect("arity 2 into arity 2");
            acc = acc.add(&term);
        }
        acc
    });
    Ok(OrderResidual { order: n, families, operadic })
}

/// Verdict of [`is_deformation_up_to`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationVerdict {
    pub order: usize,
    pub failure: Option<ResidualWitness>,
}

impl DeformationVerdict {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the residuals of orders `0..=n`; the first failure is reported.
pub fn is_deformation_up_to(defm: &TruncatedDeformation, n: usize) -> Result<DeformationVerdict, DeformationError> {
    if n > defm.order() {
        return Err(DeformationError::OrderTooHigh { requested: n, order: defm.order() });
    }
    let residuals = par::map_range(n + 1, |k| deformation_residual(defm, k).unwrap());
    let failure = residuals.iter().find_map(OrderResidual::witness);
    Ok(DeformationVerdict { order: n, failure })
}

/// The first-order term `π_1`, together with whether the order-1 residual
/// vanishes.
pub fn infinitesimal(defm: &TruncatedDeformation) -> Result<(DialgCochain, bool), DeformationError> {
    if defm.order() == 0 {
        return Err(DeformationError::NoInfinitesimal);
    }
    Ok((defm.term(1), deformation_residual(defm, 1)?.is_zero()))
}

/// A formal automorphism `ψ_t = id + ψ_1 t + … + ψ_N t^N`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EquivalenceTransformation {
    maps: Vec<Mat>,
}

impl EquivalenceTransformation {
    pub fn new(maps: Vec<Mat>) -> Result<Self, DeformationError> {
        match maps.first() {
            Some(m) if m.is_square() && *m == Mat::identity(m.rows()) => Ok(EquivalenceTransformation { maps }),
            _ => Err(DeformationError::NotUnipotent),
        }
    }

    pub fn identity(dim: usize, order: usize) -> Self {
        let mut maps = vec![Mat::zeros(dim, dim); order + 1];
        maps[0] = Mat::identity(dim);
        EquivalenceTransformation { maps }
    }

    /// `id + ψ_1 t` padded with zeros to `order`.
    pub fn linear(psi1: &Mat, order: usize) -> Self {
        let mut e = Self::identity(psi1.rows(), order.max(1));
        e.maps[1] = psi1.clone();
        e
    }

    pub fn order(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.maps[0].rows()
    }

    pub fn maps(&self) -> &[Mat] {
        &self.maps
    }

    /// Coefficient of `t^i`, zero beyond the stored order.
    pub fn coefficient(&self, i: usize) -> Mat {
        self.maps.get(i).cloned().unwrap_or_else(|| Mat::zeros(self.dim(), self.dim()))
    }

    /// Truncated inverse: `χ_0 = id`, `χ_n = -Σ_{i=1}^{n} ψ_i χ_{n-i}`.
    pub fn inverse(&self) -> Self {
        let mut chi = vec![Mat::identity(self.dim())];
        for n in 1..=self.order() {
            let mut acc = Mat::zeros(self.dim(), self.dim());
            for i in 1..=n {
                acc = &acc - &(&self.maps[i] * &chi[n - i]);
            }
            chi.push(acc);
        }
        EquivalenceTransformation { maps: chi }
    }

    /// Truncated product `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let maps = (0..=order).map(|n| series_coefficient(&self.maps, &other.maps, n)).collect();
        EquivalenceTransformation { maps }
    }
}

fn series_coefficient(a: &[Mat], b: &[Mat], n: usize) -> Mat {
    let dim = a[0].rows();
    let mut acc = Mat::zeros(dim, dim);
    for i in 0..=n {
        if i < a.len() && n - i < b.len() {
            acc = &acc + &(&a[i] * &b[n - i]);
        }
    }
    acc
}

/// Pullback along a constant invertible `s`: `⊣_t = s⁻¹ ∘ ⊣'_t ∘ (s ⊗ s)`,
/// `φ_t = s⁻¹ φ' s`, `ψ_t = s⁻¹ ψ' s`.
pub fn base_change_pullback(defm: &TruncatedDeformation, s: &Mat) -> Result<TruncatedDeformation, DeformationError> {
    let inv = s.inverse().ok_or(DeformationError::Singular)?;
    let conj = |m: &Mat| &(&inv * m) * s;
    let base = defm.base.transport(s).ok_or(DeformationError::Singular)?;
    Ok(TruncatedDeformation {
        base,
        dashv: defm.dashv.iter().map(|t| t.conjugate(s, &inv)).collect(),
        vdash: defm.vdash.iter().map(|t| t.conjugate(s, &inv)).collect(),
        phi: defm.phi.iter().map(conj).collect(),
        psi: defm.psi.iter().map(conj).collect(),
    })
}

/// Pushforward along a formal automorphism:
/// `⊣' = ψ_t ∘ ⊣_t ∘ (ψ_t⁻¹ ⊗ ψ_t⁻¹)`, `φ' = ψ_t φ_t ψ_t⁻¹`, and likewise
/// for `⊢` and `ψ`, truncated at the order of `defm`. The base (order-0
/// part) is unchanged because `ψ_0 = id`.
pub fn base_change_pushforward(defm: &TruncatedDeformation, e: &EquivalenceTransformation) -> TruncatedDeformation {
    let order = defm.order();
    let dim = defm.dim();
    let fwd: Vec<Mat> = (0..=order).map(|i| e.coefficient(i)).collect();
    let inv = EquivalenceTransformation::new(fwd.clone()).expect("starts with identity").inverse();
    let chi = inv.maps();
    let chi_cols: Vec<Vec<Vec<Scalar>>> = chi.iter().map(|m| (0..dim).map(|c| m.column(c)).collect()).collect();
    let push = |terms: &[StructureTensor]| -> Vec<StructureTensor> {
        par::map_range(order + 1, |n| {
            let mut out = StructureTensor::zero(dim);
            for x in 0..dim {
                for y in 0..dim {
                    let mut acc = zero_vec(dim);
                    for a in 0..=n {
                        for b in 0..=n - a {
                            for c in 0..=n - a - b {
                                let d = n - a - b - c;
                                let v = terms[c].apply(&chi_cols[b][x], &chi_cols[d][y]);
                                add_scaled(&mut acc, &Scalar::one(), &fwd[a].apply(&v));
                            }
                        }
                    }
                    out.set_product(x, y, &acc);
                }
            }
            out
        })
    };
    let conj = |maps: &[Mat]| -> Vec<Mat> {
        (0..=order)
            .map(|n| {
                let mut acc = Mat::zeros(dim, dim);
                for a in 0..=n {
                    for b in 0..=n - a {
                        acc = &acc + &(&(&fwd[a] * &maps[b]) * &chi[n - a - b]);
                    }
                }
                acc
            })
            .collect()
    };
    TruncatedDeformation {
        base: defm.base.clone(),
        dashv: push(&defm.dashv),
        vdash: push(&defm.vdash),
        phi: conj(&defm.phi),
        psi: conj(&defm.psi),
    }
}

/// Where an equivalence check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquivalenceFailure {
    /// `Σ ψ_i(x ⋄_j y) - Σ ψ_i x ⋄'_j ψ_k y` nonzero at basis pair `(x, y)`.
    Product { order: usize, op: Op, basis: (usize, usize), residual: Vec<Scalar> },
    /// `Σ ψ_i τ_j - Σ τ'_j ψ_i` nonzero for the twist named `twist`.
    Twist { order: usize, twist: &'static str, basis: usize, residual: Vec<Scalar> },
}

impl fmt::Display for EquivalenceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquivalenceFailure::Product { order, op, basis, residual } => write!(
                f,
                "order {order}: psi_t(x {op}_t y) != psi_t(x) {op}'_t psi_t(y) at (e{}, e{}), residual {}",
                basis.0 + 1,
                basis.1 + 1,
                fmt_vec(residual)
            ),
            EquivalenceFailure::Twist { order, twist, basis, residual } => {
                write!(f, "order {order}: psi_t {twist}_t != {twist}'_t psi_t at e{}, residual {}", basis + 1, fmt_vec(residual))
            }
        }
    }
}

/// Outcome of [`check_equivalence`]. `self_composition` records the
/// alternative, literal reading of the twist condition,
/// `ψ_t∘ψ_t = ψ'_t∘ψ_t` with `ψ'_t` the target's second twist, order by
/// order; it is reported only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCheck {
    pub order: usize,
    pub failure: Option<EquivalenceFailure>,
    pub self_composition: bool,
}

impl EquivalenceCheck {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Order-`n` coefficient of `ψ_t(x ⋄_t y) - ψ_t(x) ⋄'_t ψ_t(y)`.
pub fn equivalence_residual(
    src: &TruncatedDeformation,
    dst: &TruncatedDeformation,
    e: &EquivalenceTransformation,
    op: Op,
    n: usize,
) -> Multilinear {
    let dim = src.dim();
    let cols: Vec<Vec<Vec<Scalar>>> = (0..=n).map(|i| (0..dim).map(|c| e.coefficient(i).column(c)).collect()).collect();
    Multilinear::from_fn(2, dim, |t| {
        let mut acc = zero_vec(dim);
        for i in 0..=n {
            let j = n - i;
            if j <= src.order() {
                add_scaled(&mut acc, &Scalar::one(), &e.coefficient(i).apply(src.product(op, j).product(t[0], t[1])));
            }
            for k in 0..=n - i {
                let j = n - i - k;
                if j <= dst.order() {
                    add_scaled(&mut acc, &-Scalar::one(), &dst.product(op, j).apply(&cols[i][t[0]], &cols[k][t[1]]));
                }
            }
        }
        acc
    })
}

fn twist_residual(src: &[Mat], dst: &[Mat], e: &EquivalenceTransformation, n: usize) -> Mat {
    let dim = e.dim();
    let mut acc = Mat::zeros(dim, dim);
    for i in 0..=n {
        if n - i < src.len() {
            acc = &acc + &(&e.coefficient(i) * &src[n - i]);
        }
        if n - i < dst.len() {
            acc = &acc - &(&dst[n - i] * &e.coefficient(i));
        }
    }
    acc
}

/// Checks `ψ_t(x ⋄_t y) = ψ_t(x) ⋄'_t ψ_t(y)` for both products and the
/// intertwining `ψ_t φ_t = φ'_t ψ_t`, `ψ_t ψ_t = ψ'_t ψ_t` of the twists,
/// coefficient by coefficient up to `order`.
pub fn check_equivalence(
    src: &TruncatedDeformation,
    dst: &TruncatedDeformation,
    e: &EquivalenceTransformation,
    order: usize,
) -> EquivalenceCheck {
    let mut failure = None;
    'orders: for n in 0..=order {
        for op in Op::BOTH {
            let r = equivalence_residual(src, dst, e, op, n);
            if let Some((basis, residual)) = first_nonzero_value(&r) {
                failure = Some(EquivalenceFailure::Product { order: n, op, basis: (basis[0], basis[1]), residual });
                break 'orders;
            }
        }
        for (twist, s, d) in [("phi", &src.phi, &dst.phi), ("psi", &src.psi, &dst.psi)] {
            let r = twist_residual(s, d, e, n);
            if let Some(c) = (0..r.cols()).find(|&c| r.column(c).iter().any(|x| !x.is_zero())) {
                failure = Some(EquivalenceFailure::Twist { order: n, twist, basis: c, residual: r.column(c) });
                break 'orders;
            }
        }
    }
    let self_composition = (0..=order).all(|n| {
        let lhs = series_coefficient(e.maps(), e.maps(), n);
        let rhs = series_coefficient(&dst.psi, e.maps(), n);
        lhs == rhs
    });
    EquivalenceCheck { order, failure, self_composition }
}

fn first_nonzero_value(m: &Multilinear) -> Option<(Vec<usize>, Vec<Scalar>)> {
    let count = m.dim().pow(m.arity() as u32);
    (0..count).find_map(|t| {
        let v = m.value_at(t);
        v.iter().any(|x| !x.is_zero()).then(|| (tuple_of(t, m.dim(), m.arity()), v.to_vec()))
    })
}

/// The five bilinear terms of the order-1 coefficient of the equivalence
/// condition for one product:
/// `ψ_0(x ⋄_1 y) + ψ_1(x ⋄_0 y) = ψ_0(x) ⋄'_0 ψ_1(y) + ψ_1(x) ⋄'_0 ψ_0(y) + ψ_0(x) ⋄'_1 ψ_0(y)`.
#[derive(Clone, Debug)]
pub struct FirstOrderExpansion {
    pub op: Op,
    pub src_term: Multilinear,
    pub psi1_of_product: Multilinear,
    pub product_psi1_right: Multilinear,
    pub product_psi1_left: Multilinear,
    pub dst_term: Multilinear,
}

impl FirstOrderExpansion {
    pub fn new(src: &TruncatedDeformation, dst: &TruncatedDeformation, e: &EquivalenceTransformation, op: Op) -> Self {
        let dim = src.dim();
        let (p0, p1) = (e.coefficient(0), e.coefficient(1));
        let term = |d: &TruncatedDeformation, i: usize| {
            if i <= d.order() {
                Multilinear::from_tensor(d.product(op, i))
            } else {
                Multilinear::zero(2, dim)
            }
        };
        let src1 = term(src, 1);
        let src0 = Multilinear::from_tensor(src.product(op, 0));
        let dst0 = dst.product(op, 0);
        let dst1 = term(dst, 1).to_tensor();
        FirstOrderExpansion {
            op,
            src_term: src1.postcompose(&p0),
            psi1_of_product: src0.postcompose(&p1),
            product_psi1_right: Multilinear::from_tensor(&dst0.precompose(&p0, &p1)),
            product_psi1_left: Multilinear::from_tensor(&dst0.precompose(&p1, &p0)),
            dst_term: Multilinear::from_tensor(&dst1.precompose(&p0, &p0)),
        }
    }

    /// Left side minus right side; equals the order-1 equivalence residual.
    pub fn residual(&self) -> Multilinear {
        let neg = -Scalar::one();
        self.src_term
            .add(&self.psi1_of_product)
            .add(&self.product_psi1_right.scale(&neg))
            .add(&self.product_psi1_left.scale(&neg))
            .add(&self.dst_term.scale(&neg))
    }

    /// `x ⋄'_1 y` solved from the expansion with `ψ_0 = id`, with the
    /// `ψ_1(x ⋄_0 y)` term carrying `sign`:
    /// `x ⋄_1 y + sign·ψ_1(x ⋄_0 y) - x ⋄'_0 ψ_1(y) - ψ_1(x) ⋄'_0 y`.
    pub fn solved_dst_term(&self, sign: i64) -> Multilinear {
        let neg = -Scalar::one();
        self.src_term
            .add(&self.psi1_of_product.scale(&Scalar::from_integer(sign.into())))
            .add(&self.product_psi1_right.scale(&neg))
            .add(&self.product_psi1_left.scale(&neg))
    }

    /// Whether the solved form with the given sign reproduces `⋄'_1`.
    pub fn solved_form_holds(&self, sign: i64) -> bool {
        self.solved_dst_term(sign) == self.dst_term
    }
}

/// Result of [`solve_triviality`].
#[derive(Clone, Debug)]
pub enum Triviality {
    /// `ψ_t` with `ψ_t(x ⋄_t y) = ψ_t(x) ⋄ ψ_t(y)` up to the requested order.
    Trivial(EquivalenceTransformation),
    /// No `ψ_n` exists at `order` given the lower-order choices. `residual`
    /// holds the known terms of the order-`order` equation as a 2-cochain.
    Obstructed { order: usize, partial: EquivalenceTransformation, residual: DialgCochain },
}

impl Triviality {
    pub fn witness(&self) -> Option<&EquivalenceTransformation> {
        match self {
            Triviality::Trivial(e) => Some(e),
            Triviality::Obstructed { .. } => None,
        }
    }
}

/// Solves for `ψ_1, …, ψ_order` one order at a time so that `defm` becomes
/// equivalent to its undeformed base. Each order is the linear system
/// `ψ_n(x ⋄ y) - ψ_n(x) ⋄ y - x ⋄ ψ_n(y) = known terms`,
/// `ψ_n φ - φ ψ_n = known terms` (and likewise for `ψ`).
pub fn solve_triviality(defm: &TruncatedDeformation, order: usize) -> Result<Triviality, DeformationError> {
    if order > defm.order() {
        return Err(DeformationError::OrderTooHigh { requested: order, order: defm.order() });
    }
    let dim = defm.dim();
    let target = TruncatedDeformation::zero(&defm.base, order);
    let base = &defm.base;
    let pair_count = dim * dim;
    let rows = 2 * pair_count * dim + 2 * dim * dim;
    let system = matrix_of_linear_map(dim * dim, rows, |u| {
        let x = Mat::from_flat(dim, dim, u.to_vec());
        let mut out = Vec::with_capacity(rows);
        for op in Op::BOTH {
            let t = base.product(op);
            for i in 0..dim {
                for j in 0..dim {
                    let mut v = x.apply(t.product(i, j));
                    add_scaled(&mut v, &-Scalar::one(), &t.apply(&x.column(i), &unit_vec(dim, j)));
                    add_scaled(&mut v, &-Scalar::one(), &t.apply(&unit_vec(dim, i), &x.column(j)));
                    out.extend(v);
                }
            }
        }
        for tw in [base.phi(), base.psi()] {
            out.extend((&(&x * tw) - &(tw * &x)).into_entries());
        }
        out
    });
    let mut e = EquivalenceTransformation::identity(dim, order);
    for n in 1..=order {
        // known terms: the order-n coefficient with ψ_n = 0, negated
        let mut rhs = Vec::with_capacity(rows);
        let mut parts = Vec::new();
        for op in Op::BOTH {
            let r = equivalence_residual(defm, &target, &e, op, n);
            rhs.extend(r.coeffs().iter().map(|c| -c));
            parts.push(r.scale(&-Scalar::one()));
        }
        for (src, dst) in [(&defm.phi, &target.phi), (&defm.psi, &target.psi)] {
            rhs.extend(twist_residual(src, dst, &e, n).into_entries().into_iter().map(|c| -c));
        }
        match solve(&system, &rhs) {
            Some(sol) => e.maps[n] = Mat::from_flat(dim, dim, sol),
            None => {
                let residual = pi_from_products(dim, &parts[0], &parts[1]);
                return Ok(Triviality::Obstructed { order: n, partial: e, residual });
            }
        }
    }
    Ok(Triviality::Trivial(e))
}
