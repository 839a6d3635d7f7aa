//! Runs the derivation solvers over catalog algebras and lines the results
//! up against the published classification tables.

use std::fmt;

use crate::algebra::{catalog, AlgebraError, Bindings};
use crate::par;
use crate::scalars::{fmt_scalar, Scalar};

use super::{solve_variant, BiDegree, DerivationError, Variant};

/// Published dimension and entry pattern for one component; `true` marks a
/// free entry, `false` a forced zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableColumn {
    pub dim: usize,
    pub pattern: Vec<Vec<bool>>,
}

fn pat(rows: &[&[u8]]) -> Vec<Vec<bool>> {
    rows.iter().map(|r| r.iter().map(|&x| x == 1).collect()).collect()
}

/// Table values, available for the bidegree `(1,1)` only.
pub fn table_reference(name: &str, variant: &Variant) -> Option<Vec<TableColumn>> {
    let dim = if name.starts_with("Alg2_") {
        2
    } else if name.starts_with("Alg3_") {
        3
    } else {
        return None;
    };
    let row: usize = name[5..].parse().ok()?;
    let col = |dim, p: &[&[u8]]| TableColumn { dim, pattern: pat(p) };
    let cols = match (dim, variant) {
        (2, Variant::Plain) => vec![col([2, 1, 2, 1][row - 1], &[&[0, 0], &[0, 1]])],
        (3, Variant::Plain) => vec![col(2, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]])],
        (2, Variant::Quasi) => vec![col(2, &[&[1, 1], &[0, 1]]), col(1, &[&[0, 0], &[0, 1]])],
        (3, Variant::Quasi) => vec![
            col(3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            col(2, &[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]),
        ],
        (2, Variant::Triple) => vec![
            col(2, &[&[1, 1], &[0, 1]]),
            col(2, &[&[0, 1], &[0, 1]]),
            col(3, &[&[1, 1], &[0, 1]]),
        ],
        (3, Variant::Triple) => vec![
            col(3, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            col(6, &[&[0, 1, 1], &[0, 1, 1], &[0, 1, 1]]),
            col(4, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
        ],
        _ => return None,
    };
    Some(cols)
}

#[derive(Clone, Debug)]
pub struct ComponentResult {
    pub name: &'static str,
    pub dim: usize,
    pub support: Vec<Vec<bool>>,
    pub table: Option<TableColumn>,
}

impl ComponentResult {
    pub fn dim_agrees(&self) -> Option<bool> {
        self.table.as_ref().map(|p| p.dim == self.dim)
    }

    /// Every computed nonzero entry sits where the table allows one.
    pub fn pattern_contained(&self) -> Option<bool> {
        self.table.as_ref().map(|p| {
            self.support
                .iter()
                .zip(&p.pattern)
                .all(|(s, q)| s.iter().zip(q).all(|(&nz, &free)| !nz || free))
        })
    }
}

#[derive(Clone, Debug)]
pub struct ClassificationRow {
    pub algebra: String,
    pub bindings: Vec<(String, Scalar)>,
    pub degree: BiDegree,
    pub variant: Variant,
    pub dim: usize,
    pub basis: Vec<Vec<Scalar>>,
    pub components: Vec<ComponentResult>,
}

#[derive(Clone, Debug, Default)]
pub struct ClassificationReport {
    pub rows: Vec<ClassificationRow>,
}

impl ClassificationReport {
    pub fn discrepancies(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| &r.components)
            .filter(|c| c.dim_agrees() == Some(false) || c.pattern_contained() == Some(false))
            .count()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

fn fmt_support(s: &[Vec<bool>]) -> String {
    let rows: Vec<String> = s
        .iter()
        .map(|r| r.iter().map(|&b| if b { "*" } else { "0" }).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn verdict(x: Option<bool>) -> &'static str {
    match x {
        Some(true) => "agree",
        Some(false) => "DIFFER",
        None => "-",
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let b: Vec<String> = r.bindings.iter().map(|(k, v)| format!("{k}={}", fmt_scalar(v))).collect();
            writeln!(f, "{} [{}] {} deg {}: dim {}", r.algebra, b.join(","), r.variant.name(), r.degree, r.dim)?;
            for c in &r.components {
                write!(f, "  {:<3} dim {} support {}", c.name, c.dim, fmt_support(&c.support))?;
                if let Some(p) = &c.table {
                    write!(
                        f,
                        " | table dim {} ({}) pattern {} ({})",
                        p.dim,
                        verdict(c.dim_agrees()),
                        fmt_support(&p.pattern),
                        verdict(c.pattern_contained())
                    )?;
                }
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// Solves every `(algebra, binding) × degree × variant` cell. Cells run in
/// parallel; rows come back in input order.
pub fn classify(
    cells: &[(String, Bindings)],
    degrees: &[BiDegree],
    variants: &[Variant],
) -> Result<ClassificationReport, ClassifyError> {
    let jobs: Vec<(&(String, Bindings), BiDegree, &Variant)> = cells
        .iter()
        .flat_map(|c| degrees.iter().flat_map(move |&d| variants.iter().map(move |v| (c, d, v))))
        .collect();
    let rows = par::map(&jobs, |((name, b), deg, variant)| -> Result<ClassificationRow, ClassifyError> {
        let alg = catalog(name, b)?;
        let space = solve_variant(&alg, *deg, (*variant).clone())?;
        let table = if *deg == BiDegree::new(1, 1) { table_reference(name, variant) } else { None };
        let components = variant
            .component_names()
            .iter()
            .enumerate()
            .map(|(c, &cname)| ComponentResult {
                name: cname,
                dim: space.projection(c).dim(),
                support: space.support(c),
                table: table.as_ref().map(|p| p[c].clone()),
            })
            .collect();
        Ok(ClassificationRow {
            algebra: name.clone(),
            bindings: alg.params().to_vec(),
            degree: *deg,
            variant: (*variant).clone(),
            dim: space.dim(),
            basis: space.solutions.basis().to_vec(),
            components,
        })
    });
    Ok(ClassificationReport { rows: rows.into_iter().collect::<Result<_, _>>()? })
}
