//! Planar binary trees: enumeration, face maps, the restriction maps used
//! by the operad, and the leaf orientation that picks `⊣` or `⊢`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::Op;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Tree {
    Leaf,
    Node(Box<Tree>, Box<Tree>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("leaf index {index} out of range for a tree with {leaves} leaves")]
    LeafOutOfRange { index: usize, leaves: usize },
    #[error("the tree with no vertices has no faces")]
    NoVertices,
    #[error("tree has {actual} vertices, expected {expected}")]
    WrongArity { expected: usize, actual: usize },
    #[error("arity vector must be nonempty with positive entries")]
    BadArities,
    #[error("component {index} out of range 1..={k}")]
    ComponentOutOfRange { index: usize, k: usize },
    #[error("malformed tree at byte {0}")]
    Parse(usize),
}

impl Tree {
    pub fn graft(left: Tree, right: Tree) -> Tree {
        Tree::Node(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn vertices(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(l, r) => 1 + l.vertices() + r.vertices(),
        }
    }

    pub fn leaves(&self) -> usize {
        self.vertices() + 1
    }

    pub fn split(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf => None,
            Tree::Node(l, r) => Some((l, r)),
        }
    }

    /// Left comb with `n` vertices: `((..(.,.),.)..,.)`.
    pub fn left_comb(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |t, _| Tree::graft(t, Tree::Leaf))
    }

    /// Right comb with `n` vertices: `(.,(.,(..)))`.
    pub fn right_comb(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |t, _| Tree::graft(Tree::Leaf, t))
    }

    pub fn parse(s: &str) -> Result<Tree, TreeError> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let t = parse_tree(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(TreeError::Parse(pos));
        }
        Ok(t)
    }

    /// Removes leaf `i` and contracts its parent vertex.
    pub fn face(&self, i: usize) -> Result<Tree, TreeError> {
        if self.is_leaf() {
            return Err(TreeError::NoVertices);
        }
        let leaves = self.leaves();
        if i >= leaves {
            return Err(TreeError::LeafOutOfRange { index: i, leaves });
        }
        Ok(remove_leaf(self, i))
    }

    /// Keeps only the listed leaves (sorted, distinct), contracting every
    /// vertex that loses a branch.
    pub fn restrict(&self, keep: &[usize]) -> Result<Tree, TreeError> {
        let leaves = self.leaves();
        if let Some(&bad) = keep.iter().find(|&&k| k >= leaves) {
            return Err(TreeError::LeafOutOfRange { index: bad, leaves });
        }
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]), "leaf set must be sorted");
        let mut t = self.clone();
        for i in (0..leaves).rev() {
            if keep.binary_search(&i).is_err() {
                t = remove_leaf(&t, i);
            }
        }
        Ok(t)
    }

    /// Whether leaf `i` hangs as the left branch of its parent.
    pub fn is_left_child(&self, i: usize) -> Option<bool> {
        match self {
            Tree::Leaf => None,
            Tree::Node(l, r) => {
                let nl = l.leaves();
                if i < nl {
                    if l.is_leaf() {
                        Some(true)
                    } else {
                        l.is_left_child(i)
                    }
                } else if r.is_leaf() {
                    (i == nl).then_some(false)
                } else {
                    r.is_left_child(i - nl)
                }
            }
        }
    }
}

fn remove_leaf(t: &Tree, i: usize) -> Tree {
    let Tree::Node(l, r) = t else { unreachable!("leaf removal from a bare leaf") };
    let nl = l.leaves();
    if i < nl {
        if l.is_leaf() {
            (**r).clone()
        } else {
            Tree::graft(remove_leaf(l, i), (**r).clone())
        }
    } else if r.is_leaf() {
        (**l).clone()
    } else {
        Tree::graft((**l).clone(), remove_leaf(r, i - nl))
    }
}

fn parse_tree(b: &[u8], pos: &mut usize) -> Result<Tree, TreeError> {
    match b.get(*pos) {
        Some(b'.') | Some(b'|') => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let l = parse_tree(b, pos)?;
            if b.get(*pos) != Some(&b',') {
                return Err(TreeError::Parse(*pos));
            }
            *pos += 1;
            let r = parse_tree(b, pos)?;
            if b.get(*pos) != Some(&b')') {
                return Err(TreeError::Parse(*pos));
            }
            *pos += 1;
            Ok(Tree::graft(l, r))
        }
        _ => Err(TreeError::Parse(*pos)),
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "."),
            Tree::Node(l, r) => write!(f, "({l},{r})"),
        }
    }
}

/// All trees with `n` vertices, ordered by the size of the left subtree and
/// then recursively. `enumerate(2)` is `[(.,(.,.)), ((.,.),.)]`.
pub fn enumerate(n: usize) -> Vec<Tree> {
    let mut memo: Vec<Vec<Tree>> = vec![vec![Tree::Leaf]];
    for m in 1..=n {
        let mut level = Vec::new();
        for left in 0..m {
            for l in &memo[left] {
                for r in &memo[m - 1 - left] {
                    level.push(Tree::graft(l.clone(), r.clone()));
                }
            }
        }
        memo.push(level);
    }
    memo.swap_remove(n)
}

/// Catalan number: `|Y_n|`.
pub fn count(n: usize) -> usize {
    let mut c = 1usize;
    for k in 0..n {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}

/// Trees of one arity with a position lookup.
#[derive(Clone, Debug)]
pub struct Forest {
    arity: usize,
    trees: Vec<Tree>,
    index: HashMap<Tree, usize>,
}

impl Forest {
    pub fn new(arity: usize) -> Self {
        let trees = enumerate(arity);
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Forest { arity, trees, index }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn position(&self, t: &Tree) -> usize {
        self.index[t]
    }
}

/// Product symbol attached to leaf `i` of `y`. With `y = y1 ∨ y2`:
/// leaf 0 gives `⊣` exactly when `y1` is the bare leaf; the last leaf gives
/// `⊢` exactly when `y2` is the bare leaf; an interior leaf gives `⊣` when it
/// is a left branch and `⊢` when it is a right branch. Equivalently, restrict
/// `y` to three leaves (`0,1,n` for the first, `0,n-1,n` for the last,
/// `i-1,i,i+1` otherwise) and read `⊣` off the right comb, `⊢` off the left.
pub fn leaf_orientation(y: &Tree, i: usize) -> Result<Op, TreeError> {
    let Some((l, r)) = y.split() else { return Err(TreeError::NoVertices) };
    let leaves = y.leaves();
    if i >= leaves {
        return Err(TreeError::LeafOutOfRange { index: i, leaves });
    }
    let op = if i == 0 {
        if l.is_leaf() {
            Op::Dashv
        } else {
            Op::Vdash
        }
    } else if i == leaves - 1 {
        if r.is_leaf() {
            Op::Vdash
        } else {
            Op::Dashv
        }
    } else if y.is_left_child(i) == Some(true) {
        Op::Dashv
    } else {
        Op::Vdash
    };
    Ok(op)
}

/// The alternative leaf rule in which the last leaf also gives `⊣` when
/// `y2` is the bare leaf. Kept only to show it breaks `δ∘δ = 0`.
pub fn leaf_orientation_literal(y: &Tree, i: usize) -> Result<Op, TreeError> {
    let op = leaf_orientation(y, i)?;
    let last = y.leaves() - 1;
    if i == last && i > 0 {
        return Ok(match op {
            Op::Dashv => Op::Vdash,
            Op::Vdash => Op::Dashv,
        });
    }
    Ok(op)
}

fn check_arities(ns: &[usize]) -> Result<(), TreeError> {
    if ns.is_empty() || ns.contains(&0) {
        return Err(TreeError::BadArities);
    }
    Ok(())
}

fn partial_sums(ns: &[usize]) -> Vec<usize> {
    let mut s = vec![0];
    for n in ns {
        s.push(s.last().unwrap() + n);
    }
    s
}

/// `R_0(k; n1..nk)`: collapse each block of `n_i` inputs to a single input.
pub fn r0(ns: &[usize], y: &Tree) -> Result<Tree, TreeError> {
    check_arities(ns)?;
    let s = partial_sums(ns);
    let total = *s.last().unwrap();
    if y.vertices() != total {
        return Err(TreeError::WrongArity { expected: total, actual: y.vertices() });
    }
    y.restrict(&s)
}

/// `R_i(k; n1..nk)` for `1 <= i <= k`: the part of `y` above the i-th block.
pub fn ri(i: usize, ns: &[usize], y: &Tree) -> Result<Tree, TreeError> {
    check_arities(ns)?;
    let k = ns.len();
    if i == 0 || i > k {
        return Err(TreeError::ComponentOutOfRange { index: i, k });
    }
    let s = partial_sums(ns);
    let total = *s.last().unwrap();
    if y.vertices() != total {
        return Err(TreeError::WrongArity { expected: total, actual: y.vertices() });
    }
    let keep: Vec<usize> = (s[i - 1]..=s[i]).collect();
    y.restrict(&keep)
}
