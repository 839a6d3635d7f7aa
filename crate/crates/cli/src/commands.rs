//! One function per subcommand; each returns a [`Report`] or a usage error.

use dialgebra::algebra::{catalog_names, catalog_params, check_bihom_associative, check_dialgebra, default_bindings, AxiomReport};
use dialgebra::cohomology::{
    dialg_coboundary, dialg_cohomology, hoch_coboundary, hoch_cohomology, tw3_listed_cochains, CohomologyData, DialgCochain,
};
use dialgebra::deformation::{
    check_equivalence, deformation_residual, solve_triviality, TruncatedDeformation, Triviality,
};
use dialgebra::derivations::classify::{classify as classify_catalog, ComponentResult};
use dialgebra::derivations::{
    derivation_space, generalized_derivation_space, generalized_triple_space, quasi_derivation_space, BiDegree, DerivationSpace,
    GeneralizedSpec, Variant,
};
use dialgebra::operad::{brace_pi_single, pi_pi_cases};
use dialgebra::scalars::fmt_scalar;
use dialgebra::trees::Forest;
use dialgebra::{BiHomDialgebra, Op, Scalar};
use serde_json::Value;
use thiserror::Error;

use crate::model::{self, Bindings, Structure};
use crate::report::{self, basis_tuple, combination, matrix, matrix_text, Report, Section};
use crate::syntax::{Block, DefinitionFile, StructureBlock, StructureKind};

/// Failures that map to exit status 2.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

/// Violations beyond this count are summarised in one line.
const MAX_WITNESSES: usize = 8;

fn structure_block<'a>(file: &'a DefinitionFile, name: Option<&str>) -> Result<&'a StructureBlock, UsageError> {
    let candidates: Vec<&StructureBlock> = file
        .blocks
        .iter()
        .filter_map(|b| match b {
            Block::Structure(s) => Some(s),
            Block::Deformation(_) => None,
        })
        .collect();
    pick(candidates, name, "algebra or dialgebra", |s| &s.name)
}

fn deformation_block<'a>(
    file: &'a DefinitionFile,
    name: Option<&str>,
) -> Result<&'a crate::syntax::DeformationBlock, UsageError> {
    let candidates = file
        .blocks
        .iter()
        .filter_map(|b| match b {
            Block::Deformation(d) => Some(d),
            Block::Structure(_) => None,
        })
        .collect();
    pick(candidates, name, "deformation", |d| &d.name)
}

fn pick<'a, T>(candidates: Vec<&'a T>, name: Option<&str>, what: &str, name_of: impl Fn(&T) -> &String) -> Result<&'a T, UsageError> {
    match name {
        Some(n) => match candidates.into_iter().find(|c| name_of(c) == n) {
            Some(c) => Ok(c),
            None => usage(format!("no {what} block named {n}")),
        },
        None if candidates.len() == 1 => Ok(candidates[0]),
        None if candidates.is_empty() => usage(format!("file has no {what} block")),
        None => usage(format!("file has several {what} blocks; choose one with --name")),
    }
}

fn dialgebra_of(block: &StructureBlock) -> BiHomDialgebra {
    match model::structure(block, &Bindings::new()) {
        Structure::Dialgebra(d) => d,
        Structure::Algebra(a) => a.as_dialgebra(),
    }
}

fn axioms_item(section: &mut Section, report: &AxiomReport, basis: &[String]) {
    let ok = report.is_ok();
    let value = format!("{} ({}/{})", if ok { "OK" } else { "FAIL" }, report.passed(), report.total());
    let item = section.check("axioms", value, ok);
    for v in report.violations.iter().take(MAX_WITNESSES) {
        item.detail(format!("{} at ({}): residual {}", v.axiom, basis_tuple(basis, &v.basis), combination(basis, &v.residual)));
    }
    if report.violations.len() > MAX_WITNESSES {
        item.detail(format!("... {} more", report.violations.len() - MAX_WITNESSES));
    }
}

fn structure_title(block: &StructureBlock) -> String {
    format!("{} {} (dim {})", block.kind.keyword(), block.name, block.dim())
}

fn structure_axioms(block: &StructureBlock) -> AxiomReport {
    match model::structure(block, &Bindings::new()) {
        Structure::Dialgebra(d) => check_dialgebra(&d),
        Structure::Algebra(a) => check_bihom_associative(&a),
    }
}

pub fn verify(file: &DefinitionFile, name: Option<&str>) -> Result<Report, UsageError> {
    let blocks: Vec<&Block> = match name {
        Some(n) => match file.blocks.iter().find(|b| b.name() == n) {
            Some(b) => vec![b],
            None => return usage(format!("no block named {n}")),
        },
        None => file.blocks.iter().collect(),
    };
    let mut sections = Vec::new();
    for b in blocks {
        match b {
            Block::Structure(s) => {
                let mut sec = Section::new(structure_title(s));
                axioms_item(&mut sec, &structure_axioms(s), &s.basis);
                sections.push(sec);
            }
            Block::Deformation(d) => {
                let defm = model::deformation(file, d);
                let basis = &model::find_structure(file, &d.base).unwrap().basis;
                let mut sec = Section::new(format!("deformation {} of {} (order {})", d.name, d.base, d.order));
                deformation_items(&mut sec, &defm, d.order, basis);
                sections.push(sec);
            }
        }
    }
    Ok(Report::new("verify", sections))
}

fn deformation_items(sec: &mut Section, defm: &TruncatedDeformation, upto: usize, basis: &[String]) {
    let base_report = check_dialgebra(defm.base());
    axioms_item(sec, &base_report, basis);
    sec.items.last_mut().unwrap().key = "base axioms".into();
    let mut incompatible = Vec::new();
    for i in 1..=defm.order() {
        for op in Op::BOTH {
            let m = dialgebra::cohomology::Multilinear::from_tensor(defm.product(op, i));
            if !m.is_compatible(defm.base().phi(), defm.base().psi()) {
                incompatible.push(format!("{} term {i}", op.keyword()));
            }
        }
    }
    let item = sec.check("terms commute with phi, psi", incompatible.is_empty(), incompatible.is_empty());
    for x in incompatible {
        item.detail(x);
    }
    for n in 0..=upto {
        let r = deformation_residual(defm, n).expect("n within order");
        let witness = r.witness();
        let item = sec.check(format!("order {n} residual"), if witness.is_none() { "0" } else { "nonzero" }, witness.is_none());
        if let Some(w) = &witness {
            item.detail(format!("{} at ({}): {}", w.axiom, basis_tuple(basis, &w.basis), combination(basis, &w.value)));
        }
        let displayed: Vec<String> = r
            .displayed_families()
            .iter()
            .map(|(a, z)| format!("{a}: {}", if *z { "0" } else { "nonzero" }))
            .collect();
        item.detail(format!("displayed families: {}", displayed.join("; ")));
        if let Some(op) = &r.operadic {
            item.detail(format!("operadic sum of {{pi_i}}{{pi_j}}: {}", if op.is_zero() { "0" } else { "nonzero" }));
        }
    }
}

/// Which derivation family `derive` solves for.
#[derive(Clone, Debug)]
pub enum VariantChoice {
    Plain,
    Generalized(Scalar, Scalar, Scalar),
    Quasi,
    Triple,
}

fn solve(alg: &BiHomDialgebra, deg: BiDegree, v: &VariantChoice) -> Result<DerivationSpace, String> {
    let r = match v {
        VariantChoice::Plain => derivation_space(alg, deg),
        VariantChoice::Generalized(a, b, c) => {
            generalized_derivation_space(alg, deg, GeneralizedSpec::new(a.clone(), b.clone(), c.clone()))
        }
        VariantChoice::Quasi => quasi_derivation_space(alg, deg),
        VariantChoice::Triple => generalized_triple_space(alg, deg),
    };
    r.map_err(|e| e.to_string())
}

fn space_items(sec: &mut Section, space: &DerivationSpace, with_basis: bool) {
    let names = space.variant.component_names();
    sec.info("dim Der", space.dim()).as_equation();
    for (c, cname) in names.iter().enumerate() {
        let support = support_text(&space.support(c));
        sec.info(format!("{cname} projection"), format!("dim {}, support {support}", space.projection(c).dim()));
    }
    if with_basis {
        for (k, maps) in space.basis_maps().iter().enumerate() {
            let parts: Vec<String> = names.iter().zip(maps).map(|(n, m)| format!("{n} = {}", matrix_text(m))).collect();
            let value: Vec<Value> = maps.iter().map(matrix).collect();
            sec.info(format!("basis {}", k + 1), value).detail(parts.join(", "));
        }
    }
}

fn support_text(s: &[Vec<bool>]) -> String {
    let rows: Vec<String> = s.iter().map(|r| r.iter().map(|&b| if b { "*" } else { "0" }).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn variant_label(v: &VariantChoice) -> String {
    match v {
        VariantChoice::Plain => "derivations".into(),
        VariantChoice::Generalized(a, b, c) => {
            format!("generalized derivations (alpha={}, beta={}, gamma={})", fmt_scalar(a), fmt_scalar(b), fmt_scalar(c))
        }
        VariantChoice::Quasi => "quasi-derivations".into(),
        VariantChoice::Triple => "generalized derivation triples".into(),
    }
}

pub fn derive(file: &DefinitionFile, name: Option<&str>, k: i64, l: i64, variant: &VariantChoice) -> Result<Report, UsageError> {
    let block = structure_block(file, name)?;
    if block.kind != StructureKind::Dialgebra {
        return usage(format!("{} is not a dialgebra block", block.name));
    }
    let alg = dialgebra_of(block);
    let deg = BiDegree::new(k, l);
    let mut sec = Section::new(format!("{} {} of bidegree {deg}", block.name, variant_label(variant)));
    match solve(&alg, deg, variant) {
        Ok(space) => space_items(&mut sec, &space, true),
        Err(e) => {
            sec.check("solve", e, false);
        }
    }
    Ok(Report::new("derive", vec![sec]))
}

fn component_item(sec: &mut Section, c: &ComponentResult) {
    let item = sec.info(format!("{} projection", c.name), format!("dim {}, support {}", c.dim, support_text(&c.support)));
    if let Some(t) = &c.table {
        let verdict = |x: Option<bool>| if x == Some(true) { "agree" } else { "DIFFER" };
        item.detail(format!(
            "table: dim {} ({}), pattern {} ({})",
            t.dim,
            verdict(c.dim_agrees()),
            support_text(&t.pattern),
            verdict(c.pattern_contained())
        ));
    }
}

/// Parses `a=1,f=-2/3` into bindings.
pub fn parse_bindings(s: &str) -> Result<Bindings, UsageError> {
    let mut out = Bindings::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| UsageError(format!("binding `{part}` is not of the form name=value")))?;
        let v = dialgebra::scalars::parse_rational(v.trim())
            .ok_or_else(|| UsageError(format!("binding `{part}` does not have a rational value")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Catalog mode solves every built-in entry; file mode solves every
/// dialgebra block. Either way the plain, quasi and triple variants are
/// solved at one bidegree.
pub fn classify(file: Option<&DefinitionFile>, bind: &Bindings, k: i64, l: i64) -> Result<Report, UsageError> {
    let deg = BiDegree::new(k, l);
    let variants = [Variant::Plain, Variant::Quasi, Variant::Triple];
    let mut sections = Vec::new();
    match file {
        None => {
            for key in bind.keys() {
                if !catalog_names().iter().any(|n| catalog_params(n).unwrap().contains(&key.as_str())) {
                    return usage(format!("no catalog entry has a parameter named {key}"));
                }
            }
            let cells: Vec<(String, Bindings)> = catalog_names()
                .into_iter()
                .map(|n| {
                    let mut b = default_bindings(n).unwrap();
                    for (key, v) in bind {
                        if b.contains_key(key) {
                            b.insert(key.clone(), v.clone());
                        }
                    }
                    (n.to_string(), b)
                })
                .collect();
            let report = classify_catalog(&cells, &[deg], &variants);
            let report = match report {
                Ok(r) => r,
                Err(e) => {
                    let mut sec = Section::new("classification");
                    sec.check("solve", e.to_string(), false);
                    return Ok(Report::new("classify", vec![sec]));
                }
            };
            for row in &report.rows {
                let b: Vec<String> = row.bindings.iter().map(|(k, v)| format!("{k}={}", fmt_scalar(v))).collect();
                let mut sec = Section::new(format!("{} [{}] {} {}", row.algebra, b.join(","), variant_title(&row.variant), row.degree));
                sec.info("dim Der", row.dim).as_equation();
                for c in &row.components {
                    component_item(&mut sec, c);
                }
                sections.push(sec);
            }
            let mut summary = Section::new("summary");
            summary.info("table discrepancies", report.discrepancies());
            sections.push(summary);
        }
        Some(f) => {
            for b in &f.blocks {
                let Block::Structure(s) = b else { continue };
                if s.kind != StructureKind::Dialgebra {
                    continue;
                }
                let alg = match model::structure(s, bind) {
                    Structure::Dialgebra(d) => d,
                    Structure::Algebra(_) => unreachable!(),
                };
                let params: Vec<String> = alg.params().iter().map(|(k, v)| format!("{k}={}", fmt_scalar(v))).collect();
                for (v, choice) in variants.iter().zip([VariantChoice::Plain, VariantChoice::Quasi, VariantChoice::Triple]) {
                    let mut sec = Section::new(format!("{} [{}] {} {deg}", s.name, params.join(","), variant_title(v)));
                    match solve(&alg, deg, &choice) {
                        Ok(space) => space_items(&mut sec, &space, false),
                        Err(e) => {
                            sec.check("solve", e, false);
                        }
                    }
                    sections.push(sec);
                }
            }
        }
    }
    Ok(Report::new("classify", sections))
}

fn variant_title(v: &Variant) -> &'static str {
    v.name()
}

/// Which cochain complex `cohomology` computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complex {
    Hoch,
    Dialg,
}

fn cohomology_items(sec: &mut Section, data: &CohomologyData) {
    let r = &data.report;
    sec.info("compatible cochains", r.compatible_dim);
    sec.info("dim Z", r.cocycle_dim).as_equation();
    sec.info("dim B", r.coboundary_dim).as_equation();
    sec.check("B in Z", r.coboundaries_in_cocycles, r.coboundaries_in_cocycles);
    sec.info("dim H", r.cohomology_dim).as_equation();
}

pub fn cohomology(file: &DefinitionFile, name: Option<&str>, degree: usize, complex: Option<Complex>) -> Result<Report, UsageError> {
    if degree == 0 {
        return usage("degree must be at least 1");
    }
    let block = structure_block(file, name)?;
    let structure = model::structure(block, &Bindings::new());
    let complex = complex.unwrap_or(match block.kind {
        StructureKind::Dialgebra => Complex::Dialg,
        StructureKind::Algebra => Complex::Hoch,
    });
    let label = match complex {
        Complex::Hoch => "Hochschild",
        Complex::Dialg => "dialgebra",
    };
    let mut sec = Section::new(format!("{} {} complex, degree {degree}", block.name, label));
    let mut sections = Vec::new();
    match (complex, structure) {
        (Complex::Hoch, Structure::Dialgebra(_)) => {
            return usage(format!("the Hochschild complex needs an algebra block; {} is a dialgebra", block.name))
        }
        (Complex::Hoch, Structure::Algebra(a)) => {
            axioms_item(&mut sec, &check_bihom_associative(&a), &block.basis);
            sec.items.last_mut().unwrap().key = "precondition: axioms".into();
            sec.check("precondition: multiplicative twists", a.is_multiplicative(), a.is_multiplicative());
            let data = hoch_cohomology(&a, degree).expect("degree checked");
            cohomology_items(&mut sec, &data);
            sections.push(sec);
            if let Some(reading) = model::matching_tw3(&a) {
                let listed = tw3_listed_cochains(degree);
                if !listed.is_empty() {
                    let mut list = Section::new(format!("listed {degree}-cocycles for {}", reading.name()));
                    for c in listed {
                        if c.ambiguous {
                            list.info(c.label(), "excluded (listed repeatedly with conflicting coefficients)");
                            continue;
                        }
                        let f = c.to_cochain(a.dim());
                        let compatible = f.is_compatible(a.phi(), a.psi());
                        let closed = hoch_coboundary(&a, &f).is_zero();
                        let member = data.cocycles.contains(f.coeffs());
                        list.info(
                            c.label(),
                            format!(
                                "in Z: {} (compatible: {}, delta f = 0: {})",
                                yes_no(member),
                                yes_no(compatible),
                                yes_no(closed)
                            ),
                        );
                    }
                    sections.push(list);
                }
            }
        }
        (Complex::Dialg, s) => {
            let d = match s {
                Structure::Dialgebra(d) => d,
                Structure::Algebra(a) => a.as_dialgebra(),
            };
            axioms_item(&mut sec, &check_dialgebra(&d), &block.basis);
            sec.items.last_mut().unwrap().key = "precondition: axioms".into();
            sec.check("precondition: multiplicative twists", d.is_multiplicative(), d.is_multiplicative());
            let data = dialg_cohomology(&d, degree).expect("degree checked");
            cohomology_items(&mut sec, &data);
            sections.push(sec);
        }
    }
    Ok(Report::new("cohomology", sections))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn operad_check(file: &DefinitionFile, name: Option<&str>) -> Result<Report, UsageError> {
    let block = structure_block(file, name)?;
    let d = dialgebra_of(block);
    let mut sec = Section::new(format!("{} multiplication pi in the brace structure", block.name));
    axioms_item(&mut sec, &check_dialgebra(&d), &block.basis);
    sec.items.last_mut().unwrap().ok = None;
    let pp = brace_pi_single(&d);
    let zero = pp.is_zero();
    let item = sec.check("{pi}{pi} = 0", zero, zero);
    if let Some((tree, idx, v)) = pp.first_nonzero() {
        item.detail(format!("on {tree} at ({}): {}", basis_tuple(&block.basis, &idx), combination(&block.basis, &v)));
    }
    let forest = Forest::new(3);
    for case in pi_pi_cases() {
        let part = pp.part(forest.position(&case.tree));
        let expected = case.evaluate(&d);
        let matches = part == &expected;
        sec.check(format!("{} {}", case.label, case.tree), format!("{} {}", case.expression(), if matches { "matches" } else { "DIFFERS" }), matches);
    }
    Ok(Report::new("operad-check", vec![sec]))
}

pub fn deform(file: &DefinitionFile, name: Option<&str>, check_order: usize) -> Result<Report, UsageError> {
    let block = deformation_block(file, name)?;
    if check_order > block.order {
        return usage(format!("--check-order {check_order} exceeds the order {} of {}", block.order, block.name));
    }
    let defm = model::deformation(file, block);
    let basis = &model::find_structure(file, &block.base).unwrap().basis;
    let mut sec = Section::new(format!("deformation {} of {} (order {})", block.name, block.base, block.order));
    deformation_items(&mut sec, &defm, check_order, basis);
    if defm.order() >= 1 {
        let closed = dialg_coboundary(defm.base(), &defm.term(1)).is_zero();
        sec.info("pi_1 is a 2-cocycle", closed);
    }
    Ok(Report::new("deform", vec![sec]))
}

fn cochain_witness(c: &DialgCochain, basis: &[String]) -> Option<String> {
    c.first_nonzero()
        .map(|(tree, idx, v)| format!("on {tree} at ({}): {}", basis_tuple(basis, &idx), combination(basis, &v)))
}

pub fn trivialize(file: &DefinitionFile, name: Option<&str>, order: usize) -> Result<Report, UsageError> {
    let block = deformation_block(file, name)?;
    if order > block.order {
        return usage(format!("--order {order} exceeds the order {} of {}", block.order, block.name));
    }
    let defm = model::deformation(file, block);
    let basis = &model::find_structure(file, &block.base).unwrap().basis;
    let mut sec = Section::new(format!("triviality of {} up to order {order}", block.name));
    match solve_triviality(&defm, order).expect("order checked") {
        Triviality::Trivial(e) => {
            sec.check("trivial", true, true);
            for i in 1..=order {
                let m = e.coefficient(i);
                sec.info(format!("psi_{i}"), matrix(&m)).detail(matrix_text(&m));
            }
            let zero = TruncatedDeformation::zero(defm.base(), order);
            let check = check_equivalence(&defm.truncate(order), &zero, &e, order);
            let item = sec.check("witness verified", check.holds(), check.holds());
            if let Some(f) = &check.failure {
                item.detail(f.to_string());
            }
        }
        Triviality::Obstructed { order: at, partial, residual } => {
            sec.check("trivial", false, false).detail(format!("no psi_{at} solves the order-{at} equation"));
            for i in 1..at {
                let m = partial.coefficient(i);
                sec.info(format!("psi_{i}"), matrix(&m)).detail(matrix_text(&m));
            }
            let item = sec.info("obstruction", report::vector(&residual.flat()));
            if let Some(w) = cochain_witness(&residual, basis) {
                item.detail(w);
            }
            let closed = dialg_coboundary(defm.base(), &residual).is_zero();
            sec.info("obstruction is a cocycle", closed);
        }
    }
    Ok(Report::new("trivialize", vec![sec]))
}
