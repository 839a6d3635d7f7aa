//! Independent reference computations used to cross-check the library:
//! a textbook Gauss-Jordan rank over the rationals, rank modulo large
//! primes, and derivation systems assembled directly from index formulas.

#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use dialgebra::algebra::{BiHomDialgebra, Op};
use dialgebra::derivations::Variant;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Three primes above 10^6.
pub const PRIMES: [u64; 3] = [1_000_003, 1_000_033, 1_000_037];

/// Rank by unpivoted Gauss-Jordan elimination over the rationals.
pub fn naive_rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in 0..cols {
                    let v = &m[rank][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank modulo `p` after clearing denominators row by row. `None` when a
/// denominator is divisible by `p`.
pub fn mod_rank(rows: &[Vec<BigRational>], p: u64) -> Option<usize> {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        if (&l % &pb).is_zero() {
            return None;
        }
        m.push(
            row.iter()
                .map(|x| {
                    let v = (x.numer() * (&l / x.denom())).mod_floor(&pb);
                    v.to_u64().unwrap()
                })
                .collect(),
        );
    }
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p - f * m[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mat_entry(d: &BiHomDialgebra, which: &str, r: usize, c: usize) -> BigRational {
    match which {
        "phi" => d.phi()[(r, c)].clone(),
        _ => d.psi()[(r, c)].clone(),
    }
}

fn matmul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    (0..n)
        .map(|r| (0..n).map(|c| (0..n).fold(BigRational::zero(), |acc, s| acc + &a[r][s] * &b[s][c])).collect())
        .collect()
}

/// `φ^k ψ^l` for non-negative exponents, by repeated multiplication.
pub fn twist(d: &BiHomDialgebra, k: u32, l: u32) -> Vec<Vec<BigRational>> {
    let n = d.dim();
    let id: Vec<Vec<BigRational>> =
        (0..n).map(|r| (0..n).map(|c| if r == c { BigRational::one() } else { BigRational::zero() }).collect()).collect();
    let phi: Vec<Vec<BigRational>> = (0..n).map(|r| (0..n).map(|c| mat_entry(d, "phi", r, c)).collect()).collect();
    let psi: Vec<Vec<BigRational>> = (0..n).map(|r| (0..n).map(|c| mat_entry(d, "psi", r, c)).collect()).collect();
    let mut t = id;
    for _ in 0..k {
        t = matmul(&t, &phi);
    }
    for _ in 0..l {
        t = matmul(&t, &psi);
    }
    t
}

/// Rows of the derivation system written out entry by entry. Unknowns are
/// the row-major entries of each component map, components stacked.
pub fn derivation_rows(d: &BiHomDialgebra, variant: &Variant, k: u32, l: u32) -> Vec<Vec<BigRational>> {
    let n = d.dim();
    let comps = variant.components();
    let nu = comps * n * n;
    let idx = |c: usize, r: usize, s: usize| c * n * n + r * n + s;
    let theta = twist(d, k, l);
    let mut rows = Vec::new();
    for c in 0..comps {
        for which in ["phi", "psi"] {
            for r in 0..n {
                for col in 0..n {
                    let mut row = vec![BigRational::zero(); nu];
                    for s in 0..n {
                        row[idx(c, r, s)] += mat_entry(d, which, s, col);
                        row[idx(c, s, col)] -= mat_entry(d, which, r, s);
                    }
                    rows.push(row);
                }
            }
        }
    }
    let (out, ir, il) = match comps {
        1 => (0, 0, 0),
        2 => (1, 0, 0),
        _ => (2, 1, 0),
    };
    let (wa, wb, wc) = match variant {
        Variant::Generalized(s) => (s.alpha.clone(), s.beta.clone(), s.gamma.clone()),
        _ => (BigRational::one(), BigRational::one(), BigRational::one()),
    };
    for op in Op::BOTH {
        let t = d.product(op);
        for i in 0..n {
            for j in 0..n {
                for r in 0..n {
                    let mut row = vec![BigRational::zero(); nu];
                    for q in 0..n {
                        row[idx(out, r, q)] += &wa * t.get(i, j, q);
                    }
                    for a in 0..n {
                        for b in 0..n {
                            // θe_i ∘ D e_j and D e_i ∘ θe_j
                            row[idx(ir, b, j)] -= &wb * &theta[a][i] * t.get(a, b, r);
                            row[idx(il, a, i)] -= &wc * &theta[b][j] * t.get(a, b, r);
                        }
                    }
                    rows.push(row);
                }
            }
        }
    }
    rows
}

/// Solution-space dimension by the naive rank and by the modular ranks.
pub fn derivation_dims(d: &BiHomDialgebra, variant: &Variant, k: u32, l: u32) -> (usize, Vec<Option<usize>>) {
    let rows = derivation_rows(d, variant, k, l);
    let nu = variant.components() * d.dim() * d.dim();
    let exact = nu - naive_rank(&rows);
    let modular = PRIMES.iter().map(|&p| mod_rank(&rows, p).map(|r| nu - r)).collect();
    (exact, modular)
}

/// Dimension of the image of the solution space in component `c`: pinning
/// that component to zero raises the rank by exactly that much.
pub fn projection_dims(d: &BiHomDialgebra, variant: &Variant, k: u32, l: u32, c: usize) -> (usize, Vec<Option<usize>>) {
    let rows = derivation_rows(d, variant, k, l);
    let n = d.dim();
    let nu = variant.components() * n * n;
    let mut pinned = rows.clone();
    for u in c * n * n..(c + 1) * n * n {
        let mut row = vec![BigRational::zero(); nu];
        row[u] = BigRational::one();
        pinned.push(row);
    }
    let exact = naive_rank(&pinned) - naive_rank(&rows);
    let modular = PRIMES
        .iter()
        .map(|&p| Some(mod_rank(&pinned, p)? - mod_rank(&rows, p)?))
        .collect();
    (exact, modular)
}

pub fn abs_height(x: &BigRational) -> BigInt {
    x.numer().abs().max(x.denom().clone())
}
