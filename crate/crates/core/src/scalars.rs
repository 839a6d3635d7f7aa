//! Exact rational scalars, dense matrices over them, and the elimination
//! kernel (rank, nullspace, solve) shared by every solver in the crate.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::par;

/// Arbitrary-precision rational; always stored in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p` or `p/q`. Returns `None` on malformed input or a zero
/// denominator.
pub fn parse_rational(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_scalar(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn zero_vec(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn fmt_vec(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_scalar).collect();
    format!("({})", parts.join(", "))
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: zero_vec(rows * cols) }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from a flat row-major vector; panics on a length mismatch.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "flat data does not match shape");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    /// Matrix whose j-th column is `columns[j]`.
    pub fn from_columns(n: usize, columns: &[Vec<Scalar>]) -> Self {
        Mat::from_fn(n, columns.len(), |r, c| columns[c][r].clone())
    }

    pub fn column_vector(v: &[Scalar]) -> Self {
        Mat { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length does not match column count");
        let mut out = zero_vec(self.rows);
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let m = &self.data[i * self.cols + j];
                if !m.is_zero() {
                    *o += m * x;
                }
            }
        }
        out
    }

    /// Integer power; negative exponents use the exact inverse and yield
    /// `None` for singular matrices.
    pub fn pow(&self, e: i64) -> Option<Mat> {
        assert!(self.is_square(), "power of a non-square matrix");
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = Mat::identity(self.rows);
        for _ in 0..e.unsigned_abs() {
            result = &result * &base;
        }
        Some(result)
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[(r, c)].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let pivot = a[(c, c)].clone();
            det *= &pivot;
            for r in c + 1..n {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let f = &a[(r, c)] / &pivot;
                for k in c..n {
                    let v = &f * &a[(c, k)];
                    a[(r, k)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let ech = rref(&aug);
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| ech.rows[r][n + c].clone()))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(fmt_scalar).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form: nonzero rows only, each with a leading 1 in
/// `pivots[i]`, and zeros above and below every pivot.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn lcm_of_denominators(row: &[Scalar]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Fraction-free forward elimination on the integer-scaled rows, followed by
/// back-substitution over the rationals.
pub fn rref(m: &Mat) -> Echelon {
    rref_rows(m.cols, (0..m.rows).map(|r| m.row(r).to_vec()))
}

/// Same as [`rref`] but for rows supplied directly.
pub fn rref_rows(cols: usize, rows: impl IntoIterator<Item = Vec<Scalar>>) -> Echelon {
    let mut ints: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| !is_zero_vec(r))
        .map(|r| {
            debug_assert_eq!(r.len(), cols);
            let l = lcm_of_denominators(&r);
            r.iter().map(|x| (x * Scalar::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    ints.sort();
    ints.dedup();

    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == ints.len() {
            break;
        }
        let Some(p) = (r..ints.len()).find(|&i| !ints[i][c].is_zero()) else {
            continue;
        };
        ints.swap(r, p);
        let (head, tail) = ints.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        par::for_each_mut(tail, |row| {
            let factor = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { exact_div(v, &prev) };
            }
            row[c] = BigInt::zero();
        });
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    ints.truncate(r);

    let mut rows: Vec<Vec<Scalar>> = ints
        .into_iter()
        .zip(&pivots)
        .map(|(row, &p)| {
            let lead = row[p].clone();
            row.into_iter().map(|x| Scalar::new(x, lead.clone())).collect()
        })
        .collect();
    for k in (0..rows.len()).rev() {
        let p = pivots[k];
        let (above, rest) = rows.split_at_mut(k);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for j in p..cols {
                if !pivot_row[j].is_zero() {
                    let v = &f * &pivot_row[j];
                    row[j] -= v;
                }
            }
        }
    }
    Echelon { cols, rows, pivots }
}

fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    let (q, rem) = v.div_rem(d);
    debug_assert!(rem.is_zero(), "fraction-free elimination lost exactness");
    q
}

pub fn rank(m: &Mat) -> usize {
    rref(m).rank()
}

/// Canonical basis of `{v : m v = 0}`.
pub fn nullspace(m: &Mat) -> Subspace {
    nullspace_of_echelon(&rref(m))
}

pub fn nullspace_of_echelon(ech: &Echelon) -> Subspace {
    let cols = ech.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let vectors = (0..cols).filter(|&c| !is_pivot[c]).map(|free| {
        let mut v = zero_vec(cols);
        v[free] = Scalar::one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            v[p] = -row[free].clone();
        }
        v
    });
    Subspace::from_spanning(cols, vectors)
}

/// Some `x` with `m x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero, so the answer is deterministic.
pub fn solve(m: &Mat, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length does not match row count");
    let n = m.cols();
    let ech = rref_rows(
        n + 1,
        (0..m.rows()).map(|r| {
            let mut row = m.row(r).to_vec();
            row.push(b[r].clone());
            row
        }),
    );
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zero_vec(n);
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        x[p] = row[n].clone();
    }
    Some(x)
}

/// Matrix of a linear map given as a closure, built column by column from
/// its values on the standard basis.
pub fn matrix_of_linear_map<F>(input_dim: usize, output_dim: usize, f: F) -> Mat
where
    F: Fn(&[Scalar]) -> Vec<Scalar> + Sync + Send,
{
    let columns = par::map_range(input_dim, |u| {
        let col = f(&unit_vec(input_dim, u));
        assert_eq!(col.len(), output_dim, "linear map returned a vector of the wrong length");
        col
    });
    Mat::from_columns(output_dim, &columns)
}

/// A linear subspace stored by its canonical basis: the nonzero rows of the
/// reduced row echelon form of any spanning set. Equal subspaces therefore
/// compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace::from_spanning(ambient, (0..ambient).map(|i| unit_vec(ambient, i)))
    }

    pub fn from_spanning(ambient: usize, vectors: impl IntoIterator<Item = Vec<Scalar>>) -> Self {
        let ech = rref_rows(ambient, vectors);
        Subspace { ambient, basis: ech.rows, pivots: ech.pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as column matrices.
    pub fn basis_columns(&self) -> Vec<Mat> {
        self.basis.iter().map(|v| Mat::column_vector(v)).collect()
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector lies in a different ambient space");
        let mut w = v.to_vec();
        for (b, &p) in self.basis.iter().zip(&self.pivots) {
            if w[p].is_zero() {
                continue;
            }
            let c = -w[p].clone();
            add_scaled(&mut w, &c, b);
        }
        is_zero_vec(&w)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient dimensions differ");
        Subspace::from_spanning(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    /// Linear combination of the basis with the given coefficients.
    pub fn combination(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(coeffs.len(), self.dim(), "coefficient count does not match dimension");
        let mut v = zero_vec(self.ambient);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            add_scaled(&mut v, c, b);
        }
        v
    }

    /// Image under the coordinate projection onto `range`.
    pub fn project(&self, range: std::ops::Range<usize>) -> Subspace {
        let width = range.len();
        Subspace::from_spanning(width, self.basis.iter().map(|v| v[range.clone()].to_vec()))
    }

    /// Image under a linear map given by its matrix.
    pub fn image(&self, m: &Mat) -> Subspace {
        Subspace::from_spanning(m.rows(), self.basis.iter().map(|v| m.apply(v)))
    }
}

/// Columns of `m` restricted to nonzero rows; used when a matrix is built
/// only to take a rank or kernel.
pub fn support_rows(m: &Mat) -> usize {
    (0..m.rows()).filter(|&r| !is_zero_vec(m.row(r))).count()
}

/// Sum of absolute numerators, a cheap size measure for reports.
pub fn height(v: &[Scalar]) -> BigInt {
    v.iter().map(|x| x.numer().abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_zero_matrix_is_everything() {
        let ns = nullspace(&Mat::zeros(3, 3));
        assert_eq!(ns.dim(), 3);
        assert_eq!(ns, Subspace::full(3));
    }

    #[test]
    fn nullspace_of_identity_is_trivial() {
        assert_eq!(nullspace(&Mat::identity(4)).dim(), 0);
    }

    #[test]
    fn rank_one_example() {
        let m = Mat::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m), 1);
        let ns = nullspace(&m);
        assert_eq!(ns.dim(), 1);
        // canonical form normalizes the pivot, so (-2, 1) is stored as (1, -1/2)
        assert!(ns.contains(&[int(-2), int(1)]));
        assert_eq!(ns.basis()[0], vec![int(1), frac(-1, 2)]);
    }

    #[test]
    fn rank_of_zero_and_identity() {
        assert_eq!(rank(&Mat::zeros(2, 5)), 0);
        assert_eq!(rank(&Mat::identity(5)), 5);
    }

    #[test]
    fn solve_identity_returns_rhs() {
        let b = vec![int(3), frac(-1, 7), int(0)];
        assert_eq!(solve(&Mat::identity(3), &b), Some(b));
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = Mat::from_i64(&[&[1, 1], &[0, 0]]);
        assert_eq!(solve(&m, &[int(0), int(1)]), None);
    }

    #[test]
    fn solve_diagonal() {
        let m = Mat::from_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve(&m, &[int(1), int(1)]), Some(vec![frac(1, 2), frac(1, 3)]));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Mat::from_i64(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Mat::identity(2));
        assert!(Mat::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Mat::from_i64(&[&[0, 1], &[1, 0]]).determinant(), int(-1));
    }

    #[test]
    fn negative_power_uses_inverse() {
        let m = Mat::from_i64(&[&[1, 1], &[0, 1]]);
        let back = m.pow(-2).unwrap();
        assert_eq!(&back * &m.pow(2).unwrap(), Mat::identity(2));
        assert_eq!(Mat::zeros(2, 2).pow(-1), None);
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/6"), Some(frac(1, 2)));
        assert_eq!(parse_rational("-4"), Some(int(-4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(fmt_scalar(&frac(-2, 4)), "-1/2");
    }

    #[test]
    fn subspace_equality_is_canonical() {
        let a = Subspace::from_spanning(3, vec![vec![int(1), int(2), int(0)], vec![int(0), int(1), int(1)]]);
        let b = Subspace::from_spanning(
            3,
            vec![vec![int(1), int(3), int(1)], vec![int(2), int(4), int(0)], vec![int(3), int(7), int(1)]],
        );
        assert_eq!(a, b);
        assert!(a.contains(&[int(1), int(1), int(-1)]));
        assert!(!a.contains(&[int(0), int(0), int(1)]));
    }

    #[test]
    fn projection_and_image() {
        let s = Subspace::from_spanning(4, vec![vec![int(1), int(0), int(1), int(1)], vec![int(0), int(1), int(1), int(0)]]);
        assert_eq!(s.project(0..2).dim(), 2);
        assert_eq!(s.project(3..4).dim(), 1);
        assert_eq!(s.image(&Mat::zeros(2, 4)).dim(), 0);
    }
}
