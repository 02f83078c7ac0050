#![allow(clippy::needless_range_loop)]

//! Small integer lattices: Gram matrices, determinant and signature by exact
//! congruence diagonalization, integer kernels and Hermite normal form.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::Serialize;

use super::LatticeError;

/// Largest rank accepted by [`IntegerLattice::new`].
pub const MAX_RANK: usize = 4;

/// Symmetric integer Gram matrix of rank at most [`MAX_RANK`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    gram: Vec<Vec<BigInt>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeInvariants {
    #[serde(serialize_with = "crate::rational::serialize_bigint")]
    pub det: BigInt,
    pub signature: Signature,
}

impl IntegerLattice {
    pub fn new(gram: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if n > MAX_RANK {
            return Err(LatticeError::RankTooLarge(n));
        }
        if gram.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric { i, j });
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// The rank-0 lattice; its determinant is the empty product 1.
    pub fn empty() -> Self {
        Self { gram: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<BigInt>] {
        &self.gram
    }

    /// Gram matrix of the basis whose `k`-th vector is `sum_j rows[k][j] e_j`,
    /// i.e. `U G Uᵀ`.
    pub fn change_basis(&self, rows: &[Vec<BigInt>]) -> Result<Self, LatticeError> {
        let n = self.rank();
        if rows.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        let m = rows.len();
        let mut out = vec![vec![BigInt::zero(); m]; m];
        for a in 0..m {
            for b in 0..m {
                let mut acc = BigInt::zero();
                for i in 0..n {
                    if rows[a][i].is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        acc += &rows[a][i] * &self.gram[i][j] * &rows[b][j];
                    }
                }
                out[a][b] = acc;
            }
        }
        Self::new(out)
    }

    /// Determinant and signature from one exact congruence diagonalization.
    pub fn invariants(&self) -> LatticeInvariants {
        let diag = congruence_diagonal(&self.gram);
        let mut det = BigRational::one();
        let mut sig = Signature { pos: 0, neg: 0, zero: 0 };
        for d in &diag {
            det *= d;
            if d.is_positive() {
                sig.pos += 1;
            } else if d.is_negative() {
                sig.neg += 1;
            } else {
                sig.zero += 1;
            }
        }
        debug_assert!(det.is_integer());
        LatticeInvariants { det: det.to_integer(), signature: sig }
    }

    pub fn det(&self) -> BigInt {
        self.invariants().det
    }
}

/// Free-function form of [`IntegerLattice::invariants`].
pub fn lattice_invariants(lattice: &IntegerLattice) -> LatticeInvariants {
    lattice.invariants()
}

/// Diagonal entries of a matrix congruent to `gram` over the rationals.
///
/// Only determinant-one congruences are used (symmetric swaps and
/// `e_i += e_j`), so the product of the returned entries is `det(gram)`.
fn congruence_diagonal(gram: &[Vec<BigInt>]) -> Vec<BigRational> {
    let n = gram.len();
    let mut a: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|row| row.iter().cloned().map(BigRational::from_integer).collect())
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(p) = (k + 1..n).find(|&p| !a[p][p].is_zero()) {
                a.swap(k, p);
                for row in a.iter_mut() {
                    row.swap(k, p);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // diagonal vanishes but a[k][j] != 0: e_k += e_j gives 2 a[k][j] on the diagonal
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][k] += t;
                }
            } else if let Some((i, j)) = (k + 1..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // row/column k is zero; bring a nonzero off-diagonal pair into play
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
                for c in 0..n {
                    let t = a[j][c].clone();
                    a[k][c] += t;
                }
                for r in 0..n {
                    let t = a[r][j].clone();
                    a[r][k] += t;
                }
            }
        }
        let pivot = a[k][k].clone();
        if !pivot.is_zero() {
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let f = &a[i][k] / &pivot;
                for c in k..n {
                    let t = &f * &a[k][c];
                    a[i][c] -= t;
                }
                for r in k..n {
                    let t = &f * &a[r][k];
                    a[r][i] -= t;
                }
            }
        }
        diag.push(pivot);
    }
    diag
}

/// Extended gcd with `g = x*a + y*b`, `g >= 0`.
pub(crate) fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Basis of the integer kernel `{u ∈ Zⁿ : row·u = 0}`, which is saturated.
///
/// Column operations with determinant-one 2×2 blocks reduce `row` to
/// `(gcd, 0, …, 0)`; the remaining columns of the accumulated unimodular
/// matrix span the kernel.
pub fn integer_kernel(row: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = row.len();
    if n == 0 {
        return Vec::new();
    }
    let mut c: Vec<BigInt> = row.to_vec();
    // columns of U, stored as vectors
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for j in 1..n {
        if c[j].is_zero() {
            continue;
        }
        let (g, x, y) = ext_gcd(&c[0], &c[j]);
        let p = &c[0] / &g;
        let q = &c[j] / &g;
        let new0: Vec<BigInt> = cols[0].iter().zip(&cols[j]).map(|(u, v)| &x * u + &y * v).collect();
        let newj: Vec<BigInt> = cols[0].iter().zip(&cols[j]).map(|(u, v)| -(&q * u) + &p * v).collect();
        cols[0] = new0;
        cols[j] = newj;
        c[0] = g;
        c[j] = BigInt::zero();
    }
    if c[0].is_zero() {
        // zero row: everything is kernel
        return cols;
    }
    cols.into_iter().skip(1).collect()
}

/// Row Hermite normal form: pivots positive, entries above a pivot reduced
/// into `[0, pivot)`, zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        if r >= m.len() {
            break;
        }
        for i in r + 1..m.len() {
            if m[i][col].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&m[r][col], &m[i][col]);
            let p = &m[r][col] / &g;
            let q = &m[i][col] / &g;
            let top: Vec<BigInt> = m[r].iter().zip(&m[i]).map(|(u, v)| &x * u + &y * v).collect();
            let bot: Vec<BigInt> = m[r].iter().zip(&m[i]).map(|(u, v)| -(&q * u) + &p * v).collect();
            m[r] = top;
            m[i] = bot;
        }
        if m[r][col].is_zero() {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        let pivot = m[r][col].clone();
        for i in 0..r {
            let f = m[i][col].div_floor(&pivot);
            if f.is_zero() {
                continue;
            }
            for c in 0..ncols {
                let t = &f * &m[r][c];
                m[i][c] -= t;
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// Leibniz expansion; independent of the diagonalization path.
    fn det_leibniz(m: &[Vec<BigInt>]) -> BigInt {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = m.len();
        perms(n)
            .into_iter()
            .map(|p| {
                let inversions =
                    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
                let prod: BigInt = (0..n).map(|i| m[i][p[i]].clone()).product();
                if inversions % 2 == 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn invariants_of_small_forms() {
        let l = IntegerLattice::from_i64(&[&[2, 0], &[0, -2]]).unwrap();
        let inv = l.invariants();
        assert_eq!(inv.det, BigInt::from(-4));
        assert_eq!(inv.signature, Signature { pos: 1, neg: 1, zero: 0 });

        let h = IntegerLattice::from_i64(&[&[0, -1], &[-1, 0]]).unwrap();
        let inv = h.invariants();
        assert_eq!(inv.det, BigInt::from(-1));
        assert_eq!(inv.signature, Signature { pos: 1, neg: 1, zero: 0 });

        let one = IntegerLattice::from_i64(&[&[8]]).unwrap();
        assert_eq!(one.invariants().det, BigInt::from(8));
        assert_eq!(one.invariants().signature, Signature { pos: 1, neg: 0, zero: 0 });
    }

    #[test]
    fn empty_lattice_has_det_one() {
        let inv = IntegerLattice::empty().invariants();
        assert_eq!(inv.det, BigInt::one());
        assert_eq!(inv.signature, Signature { pos: 0, neg: 0, zero: 0 });
    }

    #[test]
    fn degenerate_and_zero_diagonal_forms() {
        let z = IntegerLattice::from_i64(&[&[0, 0, 0], &[0, 0, 3], &[0, 3, 0]]).unwrap();
        let inv = z.invariants();
        assert_eq!(inv.det, BigInt::zero());
        assert_eq!(inv.signature, Signature { pos: 1, neg: 1, zero: 1 });

        let u = IntegerLattice::from_i64(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]).unwrap();
        let inv = u.invariants();
        assert_eq!(inv.det, BigInt::one());
        assert_eq!(inv.signature, Signature { pos: 2, neg: 2, zero: 0 });
    }

    #[test]
    fn det_matches_leibniz() {
        let cases: [&[&[i64]]; 4] = [
            &[&[4, -2], &[-2, 0]],
            &[&[2, 1, 0], &[1, -2, 3], &[0, 3, 0]],
            &[&[0, 2, 1, 1], &[2, 0, 1, -1], &[1, 1, 0, 5], &[1, -1, 5, -3]],
            &[&[0, 0, 1], &[0, 0, 1], &[1, 1, 0]],
        ];
        for rows in cases {
            let l = IntegerLattice::from_i64(rows).unwrap();
            assert_eq!(l.det(), det_leibniz(l.gram()), "{rows:?}");
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(IntegerLattice::from_i64(&[&[1, 2], &[3, 4]]), Err(LatticeError::NotSymmetric { .. })));
        assert!(matches!(IntegerLattice::from_i64(&[&[1, 2]]), Err(LatticeError::NotSquare)));
        let five = vec![vec![BigInt::zero(); 5]; 5];
        assert!(matches!(IntegerLattice::new(five), Err(LatticeError::RankTooLarge(5))));
    }

    #[test]
    fn kernel_of_row() {
        let row: Vec<BigInt> = [4, 6, -10].iter().map(|&x| BigInt::from(x)).collect();
        let ker = integer_kernel(&row);
        assert_eq!(ker.len(), 2);
        for k in &ker {
            let dot: BigInt = k.iter().zip(&row).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_normal_form(&big(&[&[2, -1, 0], &[0, 0, 1]]));
        let b = hermite_normal_form(&big(&[&[2, -1, 1], &[-2, 1, 0]]));
        assert_eq!(a, b);
        assert_eq!(a, big(&[&[2, -1, 0], &[0, 0, 1]]));
    }

    #[test]
    fn change_basis_is_ugut() {
        let l = IntegerLattice::from_i64(&[&[2, 0], &[0, -2]]).unwrap();
        let u = big(&[&[1, 1], &[0, 1]]);
        let l2 = l.change_basis(&u).unwrap();
        assert_eq!(l2.gram(), big(&[&[0, -2], &[-2, -2]]).as_slice());
        assert_eq!(l2.det(), l.det());
    }
}
