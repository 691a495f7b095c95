//! Exact arithmetic on square integer matrices.
//!
//! Everything here is computed over arbitrary-precision integers: determinants
//! by fraction-free Bareiss elimination, characteristic polynomials by
//! Faddeev-LeVerrier, exterior powers as matrices of minors, and Smith normal
//! forms with unimodular transforms. No rounding ever occurs in this module.

use crate::error::{Error, Result};
use crate::poly::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Square integer matrix, row-major, entry (i,j) = `entries[i*n + j]`.
/// The derived ordering (dimension, then entries lexicographically) gives a
/// canonical orientation to unordered pairs of matrices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension {
                message: "matrix dimension must be at least 1".into(),
            });
        }
        if entries.len() != n * n {
            return Err(Error::InvalidDimension {
                message: format!("expected {} entries for dimension {}, got {}", n * n, n, entries.len()),
            });
        }
        Ok(IntMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidDimension {
                    message: "matrix must be square".into(),
                });
            }
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| BigInt::from(v)))
            .collect();
        Self::new(n, entries)
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(Error::InvalidDimension {
                    message: "matrix must be square".into(),
                });
            }
        }
        let entries = rows.into_iter().flatten().collect();
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { n, entries }
    }

    pub fn zero(n: usize) -> Self {
        IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(IntMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::identity(self.n);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).unwrap();
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).unwrap();
            }
        }
        result
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = self.rows();
        let mut sign = 1i8;
        let mut prev = BigInt::one();
        for k in 0..n {
            // Pivot search.
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    a[i][j] = q;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// True iff the determinant is +1 or -1.
    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Exact inverse of a unimodular matrix (stays integral).
    pub fn inverse_unimodular(&self) -> Result<Self> {
        let d = self.det();
        if !d.abs().is_one() {
            return Err(Error::NotUnimodular { det: d });
        }
        let n = self.n;
        if n == 1 {
            return Ok(IntMatrix {
                n: 1,
                entries: vec![d],
            });
        }
        // Adjugate via cofactors; entries stay small enough at desk scale.
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(i, j);
                let mut c = minor.det();
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                // adj(A)_{ji} = cofactor_{ij}; inverse = adj / det with det = ±1.
                out.set(j, i, if d.is_negative() { -c } else { c });
            }
        }
        Ok(out)
    }

    fn minor_matrix(&self, row: usize, col: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix {
            n: n - 1,
            entries,
        }
    }

    /// Characteristic polynomial det(tI - A), monic of degree n, exact.
    ///
    /// Faddeev-LeVerrier: the divisions by k are exact over Z because the
    /// intermediate matrices are integer polynomial expressions in A.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = Self::identity(n);
        for k in 1..=n {
            let am = self.mul(&m).unwrap();
            let (c, r) = (-am.trace()).div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero());
            coeffs[n - k] = c.clone();
            if k < n {
                m = am;
                for i in 0..n {
                    let v = m.get(i, i) + &c;
                    m.set(i, i, v);
                }
            }
        }
        IntPoly::from_coeffs(coeffs)
    }

    /// k-th exterior power: the C(n,k) x C(n,k) matrix of k x k minors.
    ///
    /// Row and column index subsets are sorted and enumerated in lexicographic
    /// order, so the sign pattern of minors is reproducible across runs.
    pub fn exterior_power(&self, k: usize) -> Result<Self> {
        let n = self.n;
        if k < 1 || k > n {
            return Err(Error::ExteriorPowerRange { k, n });
        }
        let subsets = index_subsets(n, k);
        let m = subsets.len();
        let mut out = Self::zero(m);
        for (a, rows) in subsets.iter().enumerate() {
            for (b, cols) in subsets.iter().enumerate() {
                let mut sub = Vec::with_capacity(k * k);
                for &i in rows {
                    for &j in cols {
                        sub.push(self.get(i, j).clone());
                    }
                }
                let subm = IntMatrix { n: k, entries: sub };
                out.set(a, b, subm.det());
            }
        }
        Ok(out)
    }

    /// Smith normal form with unimodular transforms: left * A * right = diag.
    ///
    /// Diagonal entries are nonnegative, satisfy the divisibility chain, and
    /// zeros come last.
    pub fn smith_normal_form(&self) -> SmithForm {
        let n = self.n;
        let mut a = self.rows();
        let mut left = Self::identity(n);
        let mut right = Self::identity(n);

        // Elementary operations, mirrored into the transforms.
        let row_swap = |a: &mut Vec<Vec<BigInt>>, l: &mut IntMatrix, i: usize, j: usize| {
            a.swap(i, j);
            for c in 0..n {
                let tmp = l.get(i, c).clone();
                l.set(i, c, l.get(j, c).clone());
                l.set(j, c, tmp);
            }
        };
        let col_swap = |a: &mut Vec<Vec<BigInt>>, r: &mut IntMatrix, i: usize, j: usize| {
            for row in a.iter_mut() {
                row.swap(i, j);
            }
            for c in 0..n {
                let tmp = r.get(c, i).clone();
                r.set(c, i, r.get(c, j).clone());
                r.set(c, j, tmp);
            }
        };
        let row_addmul = |a: &mut Vec<Vec<BigInt>>, l: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
            for c in 0..n {
                let v = &a[dst][c] + q * &a[src][c];
                a[dst][c] = v;
                let lv = l.get(dst, c) + q * l.get(src, c);
                l.set(dst, c, lv);
            }
        };
        let col_addmul = |a: &mut Vec<Vec<BigInt>>, r: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
            for row in a.iter_mut() {
                let v = &row[dst] + q * &row[src];
                row[dst] = v;
            }
            for c in 0..n {
                let rv = r.get(c, dst) + q * r.get(c, src);
                r.set(c, dst, rv);
            }
        };

        for t in 0..n {
            // Find a pivot of minimal absolute value in the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match pivot {
                        None => pivot = Some((i, j)),
                        Some((pi, pj)) => {
                            if a[i][j].abs() < a[pi][pj].abs() {
                                pivot = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != t {
                row_swap(&mut a, &mut left, pi, t);
            }
            if pj != t {
                col_swap(&mut a, &mut right, pj, t);
            }

            loop {
                // Clear the pivot column.
                let mut dirty = false;
                for i in t + 1..n {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&a[i][t] / &a[t][t]);
                    row_addmul(&mut a, &mut left, i, t, &q);
                    if !a[i][t].is_zero() {
                        // Remainder left; swap it into the pivot and repeat.
                        row_swap(&mut a, &mut left, i, t);
                        dirty = true;
                    }
                }
                // Clear the pivot row.
                for j in t + 1..n {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&a[t][j] / &a[t][t]);
                    col_addmul(&mut a, &mut right, j, t, &q);
                    if !a[t][j].is_zero() {
                        col_swap(&mut a, &mut right, j, t);
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }

            // Enforce divisibility of the trailing block by the pivot.
            'divfix: loop {
                for i in t + 1..n {
                    for j in t + 1..n {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            let one = BigInt::one();
                            row_addmul(&mut a, &mut left, t, i, &one);
                            // Re-clear the pivot row after mixing in row i.
                            loop {
                                let mut dirty = false;
                                for jj in t + 1..n {
                                    if a[t][jj].is_zero() {
                                        continue;
                                    }
                                    let q = -(&a[t][jj] / &a[t][t]);
                                    col_addmul(&mut a, &mut right, jj, t, &q);
                                    if !a[t][jj].is_zero() {
                                        col_swap(&mut a, &mut right, jj, t);
                                        dirty = true;
                                    }
                                }
                                for ii in t + 1..n {
                                    if a[ii][t].is_zero() {
                                        continue;
                                    }
                                    let q = -(&a[ii][t] / &a[t][t]);
                                    row_addmul(&mut a, &mut left, ii, t, &q);
                                    if !a[ii][t].is_zero() {
                                        row_swap(&mut a, &mut left, ii, t);
                                        dirty = true;
                                    }
                                }
                                if !dirty {
                                    break;
                                }
                            }
                            continue 'divfix;
                        }
                    }
                }
                break;
            }
        }

        // Sign-normalize the diagonal.
        for t in 0..n {
            if a[t][t].is_negative() {
                for c in 0..n {
                    let v = -&a[t][c];
                    a[t][c] = v;
                    let lv = -left.get(t, c);
                    left.set(t, c, lv);
                }
            }
        }

        let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
        SmithForm {
            diagonal,
            left,
            right,
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All sorted k-element subsets of 0..n in lexicographic order.
pub fn index_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for i in start..=n - remaining {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Smith normal form of a square matrix A: `left * A * right` is diagonal,
/// with nonnegative entries in a divisibility chain and zeros last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Exact check of the defining equation and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let n = a.dim();
        let prod = match self.left.mul(a).and_then(|m| m.mul(&self.right)) {
            Ok(p) => p,
            Err(_) => return false,
        };
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j {
                    self.diagonal[i].clone()
                } else {
                    BigInt::zero()
                };
                if *prod.get(i, j) != expect {
                    return false;
                }
            }
        }
        for w in self.diagonal.windows(2) {
            if w[0].is_zero() && !w[1].is_zero() {
                return false;
            }
            if !w[0].is_zero() && !(&w[1] % &w[0]).is_zero() {
                return false;
            }
        }
        self.left.is_unimodular() && self.right.is_unimodular()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    /// Cofactor-expansion determinant, the independent oracle for Bareiss.
    fn naive_det(a: &IntMatrix) -> BigInt {
        let n = a.dim();
        if n == 1 {
            return a.get(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            let mut rows = Vec::new();
            for i in 1..n {
                let mut row = Vec::new();
                for jj in 0..n {
                    if jj != j {
                        row.push(a.get(i, jj).clone());
                    }
                }
                rows.push(row);
            }
            let sub = IntMatrix::from_bigint_rows(rows).unwrap();
            let term = a.get(0, j) * naive_det(&sub);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn det_examples() {
        assert_eq!(IntMatrix::identity(3).det(), BigInt::from(1));
        // Oracle: 7*13 - 18*5 = 1.
        let a = m(&[vec![7, 18], vec![5, 13]]);
        assert_eq!(naive_det(&a), BigInt::from(1));
        assert_eq!(a.det(), BigInt::from(1));
        let b = m(&[vec![0, 1], vec![-1, 0]]);
        assert_eq!(naive_det(&b), BigInt::from(1));
        assert_eq!(b.det(), BigInt::from(1));
    }

    #[test]
    fn det_agrees_with_cofactor_oracle() {
        let samples = [
            m(&[vec![2, -3, 1], vec![0, 5, 7], vec![-1, 4, 2]]),
            m(&[vec![0, 0, 2], vec![3, 0, 0], vec![0, -4, 0]]),
            m(&[
                vec![1, 2, 3, 4],
                vec![0, -1, 2, 0],
                vec![5, 0, 0, 1],
                vec![-2, 3, 1, 1],
            ]),
        ];
        for a in &samples {
            assert_eq!(a.det(), naive_det(a), "matrix {a}");
        }
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(
            IntMatrix::identity(2).char_poly(),
            IntPoly::from_i64(&[1, -2, 1])
        );
        assert_eq!(
            m(&[vec![1, 1], vec![-1, 0]]).char_poly(),
            IntPoly::from_i64(&[1, -1, 1])
        );
        assert_eq!(
            m(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 3]]).char_poly(),
            IntPoly::from_i64(&[-1, -1, -3, 1])
        );
    }

    #[test]
    fn char_poly_matches_eval_of_det() {
        // det(kI - A) must equal char_poly evaluated at k.
        let a = m(&[vec![2, -1, 0], vec![1, 1, 3], vec![0, 4, -2]]);
        let p = a.char_poly();
        for k in -4i64..=4 {
            let ki = IntMatrix::identity(3).scale(&BigInt::from(k));
            let d = ki.sub(&a).unwrap().det();
            assert_eq!(d, p.eval(&BigInt::from(k)));
        }
    }

    #[test]
    fn exterior_power_examples() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(a.exterior_power(1).unwrap(), a);
        let top = a.exterior_power(2).unwrap();
        assert_eq!(top.dim(), 1);
        assert_eq!(*top.get(0, 0), BigInt::from(1));
        assert!(a.exterior_power(3).is_err());
        assert!(a.exterior_power(0).is_err());
    }

    #[test]
    fn exterior_power_functorial() {
        let a = m(&[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let b = m(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        let ab = a.mul(&b).unwrap();
        for k in 1..=3 {
            let lhs = ab.exterior_power(k).unwrap();
            let rhs = a
                .exterior_power(k)
                .unwrap()
                .mul(&b.exterior_power(k).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "k = {k}");
        }
    }

    #[test]
    fn smith_form_examples() {
        let id = IntMatrix::identity(3);
        let s = id.smith_normal_form();
        assert!(s.verify(&id));
        assert_eq!(s.diagonal, vec![BigInt::from(1); 3]);

        let a = m(&[vec![2, 0], vec![0, 3]]);
        let s = a.smith_normal_form();
        assert!(s.verify(&a));
        assert_eq!(s.diagonal, vec![BigInt::from(1), BigInt::from(6)]);

        let b = m(&[vec![0, 2], vec![0, 0]]);
        let s = b.smith_normal_form();
        assert!(s.verify(&b));
        assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(0)]);
    }

    #[test]
    fn unimodularity() {
        assert!(IntMatrix::identity(4).is_unimodular());
        assert!(m(&[vec![1519, 1164], vec![-1964, -1505]]).is_unimodular());
        assert!(!m(&[vec![2, 0], vec![0, 1]]).is_unimodular());
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(&[vec![2, 7], vec![5, 18]]);
        let inv = a.inverse_unimodular().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        let b = m(&[vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]]);
        let binv = b.inverse_unimodular().unwrap();
        assert!(b.mul(&binv).unwrap().is_identity());
        let c = m(&[vec![0, 1], vec![1, 0]]); // det -1
        let cinv = c.inverse_unimodular().unwrap();
        assert!(c.mul(&cinv).unwrap().is_identity());
        assert!(m(&[vec![2, 0], vec![0, 1]]).inverse_unimodular().is_err());
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            index_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }
}
