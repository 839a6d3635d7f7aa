//! Operad structure on tree-indexed cochains: partial and full composition,
//! the circle product and bracket, braces with the multiplication `π`, and
//! the dot product.

use num_traits::One;
use thiserror::Error;

use crate::algebra::{BiHomDialgebra, Op};
use crate::cohomology::{tuple_of, DialgCochain, Multilinear};
use crate::par;
use crate::scalars::{add_scaled, Mat, Scalar};
use crate::trees::{self, Forest, Tree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OperadError {
    #[error("slot {index} out of range 1..={arity}")]
    SlotOutOfRange { index: usize, arity: usize },
    #[error("{expected} inputs needed, {actual} supplied")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("cochains live on spaces of different dimension")]
    Dimension,
}

fn sign(e: usize) -> Scalar {
    if e.is_multiple_of(2) {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

/// `id([1]; a) = a`.
pub fn identity(dim: usize) -> DialgCochain {
    DialgCochain::constant(&Multilinear::identity(dim))
}

/// The multiplication element: `π(y; a, b)` is `a ⊢ b` on the left comb
/// `((.,.),.)` and `a ⊣ b` on the right comb `(.,(.,.))`.
pub fn multiplication(d: &BiHomDialgebra) -> DialgCochain {
    pi_from_products(d.dim(), &Multilinear::from_tensor(d.left()), &Multilinear::from_tensor(d.right()))
}

/// `π` built from explicit `⊣`, `⊢` maps.
pub fn pi_from_products(dim: usize, dashv: &Multilinear, vdash: &Multilinear) -> DialgCochain {
    let forest = Forest::new(2);
    let mut parts = vec![Multilinear::zero(2, dim); 2];
    parts[forest.position(&Tree::right_comb(2))] = dashv.clone();
    parts[forest.position(&Tree::left_comb(2))] = vdash.clone();
    DialgCochain::from_parts(2, dim, parts)
}

/// Inverse of [`pi_from_products`]: `(⊣, ⊢)`.
pub fn products_of_pi(pi: &DialgCochain) -> (Multilinear, Multilinear) {
    let forest = Forest::new(2);
    (
        pi.part(forest.position(&Tree::right_comb(2))).clone(),
        pi.part(forest.position(&Tree::left_comb(2))).clone(),
    )
}

/// `γ(f; g1,…,gk)`: on `y`, `f` sees `R_0 y` and the i-th input
/// `φ^{Σ_{j>i}(n_j-1)} ψ^{Σ_{j<i}(n_j-1)} g_i(R_i y; block_i)`.
pub fn gamma(d: &BiHomDialgebra, f: &DialgCochain, gs: &[DialgCochain]) -> Result<DialgCochain, OperadError> {
    let k = f.arity();
    if gs.len() != k {
        return Err(OperadError::ArityMismatch { expected: k, actual: gs.len() });
    }
    let dim = f.dim();
    if d.dim() != dim || gs.iter().any(|g| g.dim() != dim) {
        return Err(OperadError::Dimension);
    }
    let ns: Vec<usize> = gs.iter().map(DialgCochain::arity).collect();
    let total: usize = ns.iter().sum();
    let twists: Vec<Mat> = (0..k)
        .map(|i| {
            let after: usize = ns[i + 1..].iter().map(|n| n - 1).sum();
            let before: usize = ns[..i].iter().map(|n| n - 1).sum();
            &d.phi().pow(after as i64).unwrap() * &d.psi().pow(before as i64).unwrap()
        })
        .collect();
    let f_forest = Forest::new(k);
    let g_forests: Vec<Forest> = ns.iter().map(|&n| Forest::new(n)).collect();
    let out_forest = Forest::new(total);
    let mut starts = vec![0];
    for n in &ns {
        starts.push(starts.last().unwrap() + n);
    }
    let parts = par::map(out_forest.trees(), |y| {
        let y0 = f_forest.position(&trees::r0(&ns, y).unwrap());
        let yi: Vec<usize> = (0..k).map(|i| g_forests[i].position(&trees::ri(i + 1, &ns, y).unwrap())).collect();
        Multilinear::from_fn(total, dim, |t| {
            let inputs: Vec<Vec<Scalar>> = (0..k)
                .map(|i| twists[i].apply(gs[i].part(yi[i]).value(&t[starts[i]..starts[i + 1]])))
                .collect();
            let args: Vec<&[Scalar]> = inputs.iter().map(Vec::as_slice).collect();
            f.eval(y0, &args)
        })
    });
    Ok(DialgCochain::from_parts(total, dim, parts))
}

/// `f ∘_i g` evaluated directly from its defining formula (slots are
/// numbered from 1).
pub fn partial_composition(d: &BiHomDialgebra, f: &DialgCochain, g: &DialgCochain, i: usize) -> Result<DialgCochain, OperadError> {
    let m = f.arity();
    let n = g.arity();
    if i == 0 || i > m {
        return Err(OperadError::SlotOutOfRange { index: i, arity: m });
    }
    let dim = f.dim();
    if d.dim() != dim || g.dim() != dim {
        return Err(OperadError::Dimension);
    }
    let mut ns = vec![1; m];
    ns[i - 1] = n;
    let total = m + n - 1;
    let phi_p = d.phi().pow(n as i64 - 1).unwrap();
    let psi_p = d.psi().pow(n as i64 - 1).unwrap();
    let phi_cols: Vec<Vec<Scalar>> = (0..dim).map(|c| phi_p.column(c)).collect();
    let psi_cols: Vec<Vec<Scalar>> = (0..dim).map(|c| psi_p.column(c)).collect();
    let f_forest = Forest::new(m);
    let g_forest = Forest::new(n);
    let out_forest = Forest::new(total);
    let parts = par::map(out_forest.trees(), |y| {
        let y0 = f_forest.position(&trees::r0(&ns, y).unwrap());
        let yi = g_forest.position(&trees::ri(i, &ns, y).unwrap());
        Multilinear::from_fn(total, dim, |t| {
            let inner = g.part(yi).value(&t[i - 1..i - 1 + n]).to_vec();
            let mut args: Vec<&[Scalar]> = Vec::with_capacity(m);
            for &x in &t[..i - 1] {
                args.push(&phi_cols[x]);
            }
            args.push(&inner);
            for &x in &t[i - 1 + n..] {
                args.push(&psi_cols[x]);
            }
            f.eval(y0, &args)
        })
    });
    Ok(DialgCochain::from_parts(total, dim, parts))
}

/// `(…((f ∘_k g_k) ∘_{k-1} g_{k-1})…) ∘_1 g_1`.
pub fn gamma_iterated(d: &BiHomDialgebra, f: &DialgCochain, gs: &[DialgCochain]) -> Result<DialgCochain, OperadError> {
    if gs.len() != f.arity() {
        return Err(OperadError::ArityMismatch { expected: f.arity(), actual: gs.len() });
    }
    let mut acc = f.clone();
    for (i, g) in gs.iter().enumerate().rev() {
        acc = partial_composition(d, &acc, g, i + 1)?;
    }
    Ok(acc)
}

/// `f ∘ g = Σ_i (-1)^{(i-1)(n-1)} f ∘_i g`, taken literally; in particular
/// `f ∘ id = m·f`.
pub fn circle(d: &BiHomDialgebra, f: &DialgCochain, g: &DialgCochain) -> Result<DialgCochain, OperadError> {
    let n = g.arity();
    let mut acc = DialgCochain::zero(f.arity() + n - 1, f.dim());
    for i in 1..=f.arity() {
        let term = partial_composition(d, f, g, i)?;
        acc = acc.add(&term.scale(&sign((i - 1) * (n - 1))));
    }
    Ok(acc)
}

/// `[f, g] = f ∘ g - (-1)^{(m-1)(n-1)} g ∘ f`.
pub fn bracket(d: &BiHomDialgebra, f: &DialgCochain, g: &DialgCochain) -> Result<DialgCochain, OperadError> {
    let s = sign((f.arity() - 1) * (g.arity() - 1));
    Ok(circle(d, f, g)?.sub(&circle(d, g, f)?.scale(&s)))
}

/// `{f}{g1,…,gp} = Σ (-1)^ε γ(f; id,…,g1,…,gp,…,id)` over all order-preserving
/// placements, with `ε = Σ_j (|g_j| - 1)(s_j - 1)` where `s_j` is the first
/// input position fed to `g_j`.
pub fn brace(d: &BiHomDialgebra, f: &DialgCochain, gs: &[DialgCochain]) -> Result<DialgCochain, OperadError> {
    let m = f.arity();
    let p = gs.len();
    if p > m {
        return Err(OperadError::ArityMismatch { expected: m, actual: p });
    }
    let dim = f.dim();
    let total = m - p + gs.iter().map(DialgCochain::arity).sum::<usize>();
    let id = identity(dim);
    let mut acc = DialgCochain::zero(total, dim);
    for slots in placements(m, p) {
        let mut args = vec![id.clone(); m];
        let mut eps = 0;
        let mut position = 1;
        let mut next = 0;
        for (s, arg) in args.iter_mut().enumerate() {
            if next < p && slots[next] == s {
                *arg = gs[next].clone();
                eps += (gs[next].arity() - 1) * (position - 1);
                position += gs[next].arity();
                next += 1;
            } else {
                position += 1;
            }
        }
        acc = acc.add(&gamma(d, f, &args)?.scale(&sign(eps)));
    }
    Ok(acc)
}

fn placements(m: usize, p: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for s in start..m {
            cur.push(s);
            go(s + 1, m, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, p, &mut Vec::new(), &mut out);
    out
}

/// `{π}{π} = π ∘_1 π - π ∘_2 π`.
pub fn brace_pi_single(d: &BiHomDialgebra) -> DialgCochain {
    let pi = multiplication(d);
    brace(d, &pi, std::slice::from_ref(&pi)).expect("shapes fixed")
}

/// `{π}{f, g} = (-1)^{(|g|-1)|f|} γ(π; f, g)`.
pub fn brace_pi(d: &BiHomDialgebra, f: &DialgCochain, g: &DialgCochain) -> Result<DialgCochain, OperadError> {
    brace(d, &multiplication(d), &[f.clone(), g.clone()])
}

/// `(f·g)(y; …) = (-1)^{mn} π(R_0(2;m,n)y; φ^{n-1} f(R_1 y; …), ψ^{m-1} g(R_2 y; …))`.
pub fn dot(d: &BiHomDialgebra, f: &DialgCochain, g: &DialgCochain) -> Result<DialgCochain, OperadError> {
    let (m, n) = (f.arity(), g.arity());
    Ok(gamma(d, &multiplication(d), &[f.clone(), g.clone()])?.scale(&sign(m * n)))
}

/// Labels used for the trees of `Y_2` and `Y_3` in the reference case
/// list, with the tree each label denotes under the orientation convention
/// of [`trees::leaf_orientation`].
pub fn tree_labels() -> Vec<(&'static str, Tree)> {
    let p = |s| Tree::parse(s).unwrap();
    vec![
        ("[12]", p("((.,.),.)")),
        ("[21]", p("(.,(.,.))")),
        ("[123]", p("(((.,.),.),.)")),
        ("[213]", p("((.,(.,.)),.)")),
        ("[131]", p("((.,.),(.,.))")),
        ("[312]", p("(.,((.,.),.))")),
        ("[321]", p("(.,(.,(.,.)))")),
    ]
}

/// One line of the `{π}{π}` case list: on `tree` it equals
/// `(a ∘1 b) ∘2 ψ(c) - φ(a) ∘3 (b ∘4 c)`.
#[derive(Clone, Debug)]
pub struct PiPiCase {
    pub label: &'static str,
    pub tree: Tree,
    pub ops: (Op, Op, Op, Op),
}

impl PiPiCase {
    pub fn expression(&self) -> String {
        let (a, b, c, e) = self.ops;
        format!("(a{a}b){b}ψ(c) - φ(a){c}(b{e}c)")
    }

    /// The expression as a trilinear map.
    pub fn evaluate(&self, d: &BiHomDialgebra) -> Multilinear {
        let n = d.dim();
        let (a, b, c, e) = self.ops;
        Multilinear::from_fn(3, n, |t| {
            let mut v = d.mul(b, d.product(a).product(t[0], t[1]), &d.psi().column(t[2]));
            add_scaled(&mut v, &-Scalar::one(), &d.mul(c, &d.phi().column(t[0]), d.product(e).product(t[1], t[2])));
            v
        })
    }
}

/// The five reference cases.
pub fn pi_pi_cases() -> Vec<PiPiCase> {
    use Op::*;
    let labels = tree_labels();
    let tree = |l: &str| labels.iter().find(|(x, _)| *x == l).unwrap().1.clone();
    [
        ("[123]", (Vdash, Vdash, Vdash, Vdash)),
        ("[213]", (Dashv, Vdash, Vdash, Vdash)),
        ("[131]", (Vdash, Dashv, Vdash, Dashv)),
        ("[312]", (Dashv, Dashv, Dashv, Vdash)),
        ("[321]", (Dashv, Dashv, Dashv, Dashv)),
    ]
    .into_iter()
    .map(|(label, ops)| PiPiCase { label, tree: tree(label), ops })
    .collect()
}

/// First basis input where `{π}{π}` is nonzero.
pub fn pi_pi_witness(d: &BiHomDialgebra) -> Option<(Tree, Vec<usize>, Vec<Scalar>)> {
    brace_pi_single(d).first_nonzero()
}

/// `(tree, basis tuple, value of f, value of g)`.
pub type Difference = (Tree, Vec<usize>, Vec<Scalar>, Vec<Scalar>);

/// Checks `f` against `g` on every tree and basis tuple; returns the first
/// difference.
pub fn first_difference(f: &DialgCochain, g: &DialgCochain) -> Option<Difference> {
    let forest = Forest::new(f.arity());
    let count = f.dim().pow(f.arity() as u32);
    for (ti, y) in forest.trees().iter().enumerate() {
        for t in 0..count {
            let (a, b) = (f.part(ti).value_at(t), g.part(ti).value_at(t));
            if a != b {
                return Some((y.clone(), tuple_of(t, f.dim(), f.arity()), a.to_vec(), b.to_vec()));
            }
        }
    }
    None
}
