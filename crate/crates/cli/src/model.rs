//! Instantiates parsed blocks as library objects.

use std::collections::BTreeMap;

use dialgebra::algebra::{tw3_algebra, Tw3Reading};
use dialgebra::deformation::TruncatedDeformation;
use dialgebra::scalars::{add_scaled, unit_vec, zero_vec};
use dialgebra::{BiHomAssociativeAlgebra, BiHomDialgebra, Mat, Scalar, StructureTensor};

use crate::syntax::{Block, DeformationBlock, DefinitionFile, LinComb, StructureBlock, StructureKind, Target};

/// Parameter values by name; overrides take precedence over the block's
/// own `param` lines.
pub type Bindings = BTreeMap<String, Scalar>;

#[derive(Clone, Debug)]
pub enum Structure {
    Dialgebra(BiHomDialgebra),
    Algebra(BiHomAssociativeAlgebra),
}

impl Structure {
    pub fn dim(&self) -> usize {
        match self {
            Structure::Dialgebra(d) => d.dim(),
            Structure::Algebra(a) => a.dim(),
        }
    }
}

fn bindings_of(block: &StructureBlock, overrides: &Bindings) -> Bindings {
    let mut b: Bindings = block.params.iter().cloned().collect();
    for (k, v) in overrides {
        if b.contains_key(k) {
            b.insert(k.clone(), v.clone());
        }
    }
    b
}

fn eval(v: &LinComb, dim: usize, bindings: &Bindings) -> Vec<Scalar> {
    let mut out = zero_vec(dim);
    for t in &v.terms {
        let mut c = t.coef.scale.clone();
        if let Some(p) = &t.coef.param {
            c *= &bindings[p];
        }
        add_scaled(&mut out, &c, &unit_vec(dim, t.basis));
    }
    out
}

struct Tables {
    dashv: StructureTensor,
    vdash: StructureTensor,
    mul: StructureTensor,
    phi: Mat,
    psi: Mat,
}

fn tables<'a>(dim: usize, entries: impl IntoIterator<Item = &'a crate::syntax::Entry>, bindings: &Bindings) -> Tables {
    let mut t = Tables {
        dashv: StructureTensor::zero(dim),
        vdash: StructureTensor::zero(dim),
        mul: StructureTensor::zero(dim),
        phi: Mat::zeros(dim, dim),
        psi: Mat::zeros(dim, dim),
    };
    for e in entries {
        let v = eval(&e.value, dim, bindings);
        match e.target {
            Target::Dashv(i, j) => t.dashv.set_product(i, j, &v),
            Target::Vdash(i, j) => t.vdash.set_product(i, j, &v),
            Target::Mul(i, j) => t.mul.set_product(i, j, &v),
            Target::Phi(i) | Target::Psi(i) => {
                let m = if matches!(e.target, Target::Phi(_)) { &mut t.phi } else { &mut t.psi };
                for (r, x) in v.into_iter().enumerate() {
                    m[(r, i)] = x;
                }
            }
        }
    }
    t
}

/// Builds the structure without checking any axioms.
pub fn structure(block: &StructureBlock, overrides: &Bindings) -> Structure {
    let b = bindings_of(block, overrides);
    let t = tables(block.dim(), &block.entries, &b);
    match block.kind {
        StructureKind::Dialgebra => {
            let params = b.into_iter().collect();
            Structure::Dialgebra(
                BiHomDialgebra::new_unchecked(block.name.clone(), t.dashv, t.vdash, t.phi, t.psi)
                    .expect("shapes follow the basis")
                    .with_params(params),
            )
        }
        StructureKind::Algebra => Structure::Algebra(
            BiHomAssociativeAlgebra::new_unchecked(block.name.clone(), t.mul, t.phi, t.psi).expect("shapes follow the basis"),
        ),
    }
}

/// Builds the truncated deformation over its (unchecked) base.
pub fn deformation(file: &DefinitionFile, block: &DeformationBlock) -> TruncatedDeformation {
    let base_block = find_structure(file, &block.base).expect("parser resolves the base block");
    let b = bindings_of(base_block, &Bindings::new());
    let base = match structure(base_block, &Bindings::new()) {
        Structure::Dialgebra(d) => d,
        Structure::Algebra(_) => unreachable!("parser requires a dialgebra base"),
    };
    let dim = base.dim();
    let terms = (1..=block.order)
        .map(|p| {
            let t = tables(dim, block.terms.iter().filter(|(q, _)| *q == p).map(|(_, e)| e), &b);
            (t.dashv, t.vdash)
        })
        .collect();
    TruncatedDeformation::new_unchecked(&base, terms).expect("shapes follow the basis")
}

pub fn find_structure<'a>(file: &'a DefinitionFile, name: &str) -> Option<&'a StructureBlock> {
    file.blocks.iter().find_map(|b| match b {
        Block::Structure(s) if s.name == name => Some(s),
        _ => None,
    })
}

/// The built-in three-dimensional twisted algebra reading this algebra
/// coincides with, if any.
pub fn matching_tw3(a: &BiHomAssociativeAlgebra) -> Option<Tw3Reading> {
    Tw3Reading::ALL.into_iter().find(|&r| {
        let t = tw3_algebra(r);
        t.mul_tensor() == a.mul_tensor() && t.phi() == a.phi() && t.psi() == a.psi()
    })
}

