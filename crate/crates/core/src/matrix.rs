//! Dense integer matrices with exact arithmetic and Smith normal form.
//!
//! All homological computations in this crate reduce to integer linear
//! algebra on these matrices. Entries are arbitrary-precision, so
//! intermediate blowup during elimination is harmless.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Row-major dense matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix({}x{})[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        IntMatrix {
            rows,
            cols,
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        debug_assert!(r < self.rows && c < self.cols);
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        debug_assert!(r < self.rows && c < self.cols);
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * k).collect(),
        }
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.at(r, c) + a * other.at(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..self.cols {
                    let e = self.at(r, c);
                    if !e.is_zero() {
                        acc += e * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        IntMatrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation, `self` on top.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        IntMatrix::from_fn(self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    pub fn block_diag(blocks: &[&IntMatrix]) -> IntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMatrix::zero(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(self.rows, cols.len(), |r, c| self.at(r, cols[c]).clone())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_j += k * row_i
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        debug_assert_ne!(i, j);
        for c in 0..self.cols {
            let v = self.at(j, c) + k * self.at(i, c);
            self.set(j, c, v);
        }
    }

    /// col_j += k * col_i
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        debug_assert_ne!(i, j);
        for r in 0..self.rows {
            let v = self.at(r, j) + k * self.at(r, i);
            self.set(r, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.at(i, c);
            self.set(i, c, v);
        }
    }
}

/// Result of `smith_normal_form`: `u * m * v = d` with `u`, `v` unimodular,
/// `d` diagonal with nonnegative entries in a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithData {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithData {
    /// Diagonal entries, padded with zeros up to `len`.
    pub fn diag(&self, len: usize) -> Vec<BigInt> {
        (0..len)
            .map(|i| {
                if i < self.d.rows() && i < self.d.cols() {
                    self.d.at(i, i).clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect()
    }
}

/// Pivot choice is fixed: smallest nonzero absolute value, ties broken by
/// row-major position. This keeps `u` and `v` reproducible across runs.
fn find_pivot(m: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for r in k..m.rows() {
        for c in k..m.cols() {
            let e = m.at(r, c);
            if e.is_zero() {
                continue;
            }
            let a = e.abs();
            match &best {
                Some((b, _, _)) if *b <= a => {}
                _ => best = Some((a, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

/// Smith normal form with full transform bookkeeping.
pub fn smith_normal_form(m: &IntMatrix) -> SmithData {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut u_inv = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    let mut v_inv = IntMatrix::identity(m.cols());

    // row op helpers keep u and u_inv in sync: d' = E d  =>  u' = E u,
    // u_inv' = u_inv E^{-1}; columns dually for v.
    macro_rules! swap_rows {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            u.swap_rows($i, $j);
            u_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! swap_cols {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            v.swap_cols($i, $j);
            v_inv.swap_rows($i, $j);
        }};
    }
    macro_rules! add_row {
        ($i:expr, $j:expr, $k:expr) => {{
            let k = $k;
            d.add_row($i, $j, &k);
            u.add_row($i, $j, &k);
            u_inv.add_col($j, $i, &-&k);
        }};
    }
    macro_rules! add_col {
        ($i:expr, $j:expr, $k:expr) => {{
            let k = $k;
            d.add_col($i, $j, &k);
            v.add_col($i, $j, &k);
            v_inv.add_row($j, $i, &-&k);
        }};
    }

    let maxk = m.rows().min(m.cols());
    let mut k = 0;
    while k < maxk {
        let Some((pr, pc)) = find_pivot(&d, k) else {
            break;
        };
        swap_rows!(k, pr);
        swap_cols!(k, pc);

        loop {
            // clear column k
            let mut dirty = false;
            for i in 0..d.rows() {
                if i == k || d.at(i, k).is_zero() {
                    continue;
                }
                let q = div_round(d.at(i, k), d.at(k, k));
                if !q.is_zero() {
                    add_row!(k, i, -q);
                }
                if !d.at(i, k).is_zero() {
                    // remainder became the new smaller pivot
                    swap_rows!(k, i);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // clear row k
            for j in 0..d.cols() {
                if j == k || d.at(k, j).is_zero() {
                    continue;
                }
                let q = div_round(d.at(k, j), d.at(k, k));
                if !q.is_zero() {
                    add_col!(k, j, -q);
                }
                if !d.at(k, j).is_zero() {
                    swap_cols!(k, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // column may have been re-polluted by column ops
            if (0..d.rows()).any(|i| i != k && !d.at(i, k).is_zero()) {
                continue;
            }
            // pivot must divide the rest of the submatrix
            let mut offending = None;
            'scan: for i in k + 1..d.rows() {
                for j in k + 1..d.cols() {
                    if !(d.at(i, j) % d.at(k, k)).is_zero() {
                        offending = Some(i);
                        break 'scan;
                    }
                }
            }
            match offending {
                Some(i) => {
                    add_row!(i, k, BigInt::one());
                }
                None => break,
            }
        }
        k += 1;
    }

    // normalize signs
    for i in 0..maxk {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
            for r in 0..u_inv.rows() {
                let vneg = -u_inv.at(r, i);
                u_inv.set(r, i, vneg);
            }
        }
    }

    SmithData {
        u,
        u_inv,
        d,
        v,
        v_inv,
    }
}

/// Quotient rounding to nearest keeps entries small during elimination.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let (q, r) = num_integer::Integer::div_rem(a, b);
    // adjust so |a - qb| <= |b|/2
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Solve `a x = b` exactly over the integers. Returns any solution.
pub fn solve_exact(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.rows(), b.len());
    let s = smith_normal_form(a);
    let ub = s.u.mul_vec(b);
    let mut z = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        let di = if i < a.cols() {
            s.d.at(i, i).clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = num_integer::Integer::div_rem(&ub[i], &di);
            if !r.is_zero() {
                return None;
            }
            z[i] = q;
        }
    }
    Some(s.v.mul_vec(&z))
}

/// Basis of the integer kernel lattice `{x : a x = 0}`, as matrix columns.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let rank = (0..a.rows().min(a.cols()))
        .take_while(|&i| !s.d.at(i, i).is_zero())
        .count();
    let free: Vec<usize> = (rank..a.cols()).collect();
    s.v.submatrix_cols(&free)
}

/// True when the matrix is square with determinant plus or minus one.
pub fn is_unimodular(a: &IntMatrix) -> bool {
    if a.rows() != a.cols() {
        return false;
    }
    let s = smith_normal_form(a);
    (0..a.rows()).all(|i| s.d.at(i, i) == &BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diag(entries: &[i64]) -> IntMatrix {
        let n = entries.len();
        IntMatrix::from_fn(n, n, |r, c| {
            if r == c {
                BigInt::from(entries[r])
            } else {
                BigInt::zero()
            }
        })
    }

    #[test]
    fn snf_of_diag_2_3() {
        // hand elimination: gcd(2,3) = 1, lcm = 6
        let s = smith_normal_form(&diag(&[2, 3]));
        assert_eq!(s.d, diag(&[1, 6]));
    }

    #[test]
    fn snf_of_identity() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_of_zero() {
        let s = smith_normal_form(&IntMatrix::zero(2, 2));
        assert_eq!(s.d, IntMatrix::zero(2, 2));
    }

    #[test]
    fn snf_transforms_multiply_out() {
        let m = IntMatrix::from_i64(2, 3, &[2, 4, 4, -6, 6, 12]);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(2));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(3));
        assert!(is_unimodular(&s.u));
        assert!(is_unimodular(&s.v));
        assert_eq!(s.d, diag_rect(2, 3, &[2, 6]));
    }

    fn diag_rect(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |r, c| {
            if r == c && r < entries.len() {
                BigInt::from(entries[r])
            } else {
                BigInt::zero()
            }
        })
    }

    #[test]
    fn snf_is_deterministic() {
        let m = IntMatrix::from_i64(3, 3, &[6, 4, 2, 4, 10, 2, 2, 2, 8]);
        let s1 = smith_normal_form(&m);
        let s2 = smith_normal_form(&m);
        assert_eq!(s1.u, s2.u);
        assert_eq!(s1.v, s2.v);
        assert_eq!(s1.d, s2.d);
    }

    #[test]
    fn solve_and_kernel() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 0, 2, 4]);
        let b = [BigInt::from(6), BigInt::from(4)];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b.to_vec());
        assert!(solve_exact(&a, &[BigInt::from(0), BigInt::from(1)]).is_none());

        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
    }

    proptest! {
        #[test]
        fn snf_identities_hold(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = IntMatrix::from_fn(rows, cols, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            let s = smith_normal_form(&m);
            prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
            prop_assert!(is_unimodular(&s.u));
            prop_assert!(is_unimodular(&s.v));
            prop_assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(rows));
            prop_assert_eq!(s.v_inv.mul(&s.v), IntMatrix::identity(cols));
            // divisibility chain, nonnegative diagonal
            let dg = s.diag(rows.min(cols));
            for i in 0..dg.len() {
                prop_assert!(!dg[i].is_negative());
                if i + 1 < dg.len() && !dg[i].is_zero() {
                    prop_assert!((&dg[i + 1] % &dg[i]).is_zero() || dg[i + 1].is_zero());
                }
                if dg[i].is_zero() && i + 1 < dg.len() {
                    prop_assert!(dg[i + 1].is_zero());
                }
            }
        }
    }
}
