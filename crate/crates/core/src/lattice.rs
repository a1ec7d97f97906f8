//! Integral lattices presented by Gram matrices.
//!
//! A lattice here is a free Z-module of finite rank with a symmetric
//! integer-valued pairing, stored as its Gram matrix. Signatures are
//! computed by symmetric congruence diagonalization over exact rationals,
//! discriminant groups through Smith normal form, and orthogonal
//! complements as integer kernels of the pairing map (hence saturated).
//!
//! Sign convention: `E8` names the positive-definite form. The K3 lattice
//! is built as E8(−1) ⊕ E8(−1) ⊕ U ⊕ U ⊕ U, which has the usual signature
//! (3, 19); sources that write it with positive E8 summands and U(−1)
//! factors mean the same lattice since U(−1) ≅ U.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mat::IntMat;
use crate::snf::{left_kernel, smith_normal_form};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    NotSquare { rows: usize, cols: usize },
    NotSymmetric { row: usize, col: usize },
    DimensionMismatch { expected: usize, got: usize },
    ZeroVector,
    ZeroScale,
    Degenerate,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSquare { rows, cols } => {
                write!(f, "gram matrix is {rows}x{cols}, not square")
            }
            LatticeError::NotSymmetric { row, col } => {
                write!(f, "gram matrix is not symmetric at ({row},{col})")
            }
            LatticeError::DimensionMismatch { expected, got } => {
                write!(f, "vector has {got} coordinates, lattice rank is {expected}")
            }
            LatticeError::ZeroVector => write!(f, "the zero vector is not allowed here"),
            LatticeError::ZeroScale => write!(f, "scale factor must be nonzero"),
            LatticeError::Degenerate => write!(f, "operation requires a nondegenerate lattice"),
        }
    }
}

/// Inertia of a symmetric integer form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub null: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.null)
    }
}

/// coker(gram) fingerprint: invariant factors d₁ | d₂ | …, each ≥ 2.
/// Unimodular lattices have an empty list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantGroup {
    pub invariant_factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.invariant_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: IntMat,
}

/// A saturated sublattice: basis rows in ambient coordinates plus the
/// restricted pairing.
#[derive(Clone, Debug)]
pub struct Sublattice {
    pub basis: IntMat,
    pub lattice: Lattice,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(rank {}) {:?}", self.rank(), self.gram)
    }
}

impl Lattice {
    pub fn new(gram: IntMat) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(LatticeError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Lattice { gram })
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let r = rows.len();
        for row in &rows {
            if row.len() != r {
                return Err(LatticeError::NotSquare {
                    rows: r,
                    cols: row.len(),
                });
            }
        }
        Lattice::new(IntMat::from_rows(rows))
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LatticeError> {
        Lattice::new(IntMat::from_i64(rows))
    }

    /// The rank-0 lattice, the identity for `direct_sum`.
    pub fn empty() -> Self {
        Lattice {
            gram: IntMat::zero(0, 0),
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &IntMat {
        &self.gram
    }

    /// ⟨x, y⟩ with respect to the Gram matrix.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let gy = self.gram.mul_vec(y);
        Ok(x.iter().zip(&gy).map(|(a, b)| a * b).sum())
    }

    pub fn square(&self, x: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.pair(x, x)
    }

    fn check_dim(&self, v: &[BigInt]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            Err(LatticeError::DimensionMismatch {
                expected: self.rank(),
                got: v.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.det().is_zero()
    }

    /// Gram scaled entrywise by n ≠ 0 (the classical L(n) twist).
    pub fn twist(&self, n: &BigInt) -> Result<Lattice, LatticeError> {
        if n.is_zero() {
            return Err(LatticeError::ZeroScale);
        }
        Ok(Lattice {
            gram: self.gram.scale(n),
        })
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Lattice {
            gram: self.gram.block_diag(&other.gram),
        }
    }

    /// Exact inertia by symmetric congruence diagonalization over rationals.
    /// Zero diagonals with a live off-diagonal entry are resolved by adding
    /// the partner row/column, which puts 2·⟨eᵢ,eⱼ⟩ on the diagonal.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from_integer(self.gram[(i, j)].clone()))
                    .collect()
            })
            .collect();
        let mut sig = Signature {
            positive: 0,
            negative: 0,
            null: 0,
        };

        for i in 0..n {
            if a[i][i].is_zero() {
                // Prefer a later index with a nonzero diagonal.
                if let Some(j) = (i + 1..n).find(|&j| !a[j][j].is_zero()) {
                    swap_symmetric(&mut a, i, j);
                } else if let Some(j) = (i + 1..n).find(|&j| !a[i][j].is_zero()) {
                    // a[j][j] = 0 too, so the new diagonal entry is 2·a[i][j] ≠ 0.
                    add_symmetric(&mut a, i, j);
                } else {
                    sig.null += 1;
                    continue;
                }
            }
            let pivot = a[i][i].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            for j in i + 1..n {
                if a[j][i].is_zero() {
                    continue;
                }
                let f = &a[j][i] / &pivot;
                for k in i..n {
                    let t = &f * &a[i][k];
                    a[j][k] -= t;
                }
                for k in i..n {
                    let t = &f * &a[k][i];
                    a[k][j] -= t;
                }
            }
        }
        sig
    }

    /// Invariant factors ≥ 2 of coker(gram: Zʳ → Zʳ).
    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        if !self.is_nondegenerate() {
            return Err(LatticeError::Degenerate);
        }
        let snf = smith_normal_form(&self.gram);
        let factors = snf
            .diagonal()
            .into_iter()
            .filter(|d| d > &BigInt::one())
            .collect();
        Ok(DiscriminantGroup {
            invariant_factors: factors,
        })
    }

    /// Saturated orthogonal complement {x : ⟨x, v⟩ = 0 for all v in vs},
    /// as basis rows plus the restricted Gram matrix.
    pub fn orthogonal_complement(&self, vs: &[Vec<BigInt>]) -> Result<Sublattice, LatticeError> {
        for v in vs {
            self.check_dim(v)?;
        }
        // x is orthogonal to all of vs iff x annihilates the columns of
        // gram · vsᵀ; the left kernel is saturated by construction.
        let rank = self.rank();
        let mut pair_map = IntMat::zero(rank, vs.len());
        for (j, v) in vs.iter().enumerate() {
            let gv = self.gram.mul_vec(v);
            for i in 0..rank {
                pair_map[(i, j)] = gv[i].clone();
            }
        }
        let basis_rows = left_kernel(&pair_map);
        let basis = if basis_rows.is_empty() {
            IntMat::zero(0, rank)
        } else {
            IntMat::from_rows(basis_rows)
        };
        let sub_gram = basis.mul(&self.gram).mul(&basis.transpose());
        Ok(Sublattice {
            basis,
            lattice: Lattice { gram: sub_gram },
        })
    }

    /// gcd of ⟨v, x⟩ over all lattice vectors x, i.e. of the entries of gram·v.
    pub fn divisibility(&self, v: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.check_dim(v)?;
        if v.iter().all(BigInt::is_zero) {
            return Err(LatticeError::ZeroVector);
        }
        let gv = self.gram.mul_vec(v);
        let g = gv.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            // v pairs to zero with everything: lattice degenerate along v.
            return Err(LatticeError::Degenerate);
        }
        Ok(g)
    }
}

fn swap_symmetric(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let t = a[i][k].clone();
        a[i][k] = a[j][k].clone();
        a[j][k] = t;
    }
    for row in a.iter_mut().take(n) {
        row.swap(i, j);
    }
}

fn add_symmetric(a: &mut [Vec<BigRational>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let t = a[j][k].clone();
        a[i][k] += t;
    }
    for k in 0..n {
        let t = a[k][j].clone();
        a[k][i] += t;
    }
}

/// gcd of the coordinates.
pub fn content(v: &[BigInt]) -> Result<BigInt, LatticeError> {
    if v.iter().all(BigInt::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)))
}

pub fn is_primitive(v: &[BigInt]) -> Result<bool, LatticeError> {
    Ok(content(v)?.is_one())
}

/// Splits v = d·w with w primitive and d ≥ 1.
pub fn primitive_scale(v: &[BigInt]) -> Result<(BigInt, Vec<BigInt>), LatticeError> {
    let d = content(v)?;
    let w = v.iter().map(|x| x / &d).collect();
    Ok((d, w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardLattice {
    /// Hyperbolic plane [[0,1],[1,0]].
    U,
    /// Positive-definite E8 (Cartan matrix Gram).
    E8,
    /// Rank one: [[n]], n ≠ 0.
    A1(i64),
    /// E8(−1)² ⊕ U³, rank 22, signature (3,19).
    K3,
    /// U³, rank 6, signature (3,3): degree-2 cohomology of a 2-torus.
    TorusH2,
    /// K3 ⊕ U, rank 24, signature (4,20): full even cohomology of a K3.
    MukaiK3,
    /// TorusH2 ⊕ U, rank 8, signature (4,4).
    MukaiAbelian,
}

pub fn standard_lattice(name: StandardLattice) -> Result<Lattice, LatticeError> {
    let u = || Lattice::from_i64(&[&[0, 1], &[1, 0]]).expect("U is symmetric");
    let e8 = || {
        Lattice::from_i64(&[
            &[2, 0, -1, 0, 0, 0, 0, 0],
            &[0, 2, 0, -1, 0, 0, 0, 0],
            &[-1, 0, 2, -1, 0, 0, 0, 0],
            &[0, -1, -1, 2, -1, 0, 0, 0],
            &[0, 0, 0, -1, 2, -1, 0, 0],
            &[0, 0, 0, 0, -1, 2, -1, 0],
            &[0, 0, 0, 0, 0, -1, 2, -1],
            &[0, 0, 0, 0, 0, 0, -1, 2],
        ])
        .expect("E8 is symmetric")
    };
    let minus_one = BigInt::from(-1);
    let k3 = || {
        let e8m = e8().twist(&minus_one).expect("-1 is nonzero");
        e8m.direct_sum(&e8m)
            .direct_sum(&u())
            .direct_sum(&u())
            .direct_sum(&u())
    };
    let torus = || u().direct_sum(&u()).direct_sum(&u());
    Ok(match name {
        StandardLattice::U => u(),
        StandardLattice::E8 => e8(),
        StandardLattice::A1(n) => {
            if n == 0 {
                return Err(LatticeError::ZeroScale);
            }
            Lattice::from_i64(&[&[n]]).expect("1x1 is symmetric")
        }
        StandardLattice::K3 => k3(),
        StandardLattice::TorusH2 => torus(),
        StandardLattice::MukaiK3 => k3().direct_sum(&u()),
        StandardLattice::MukaiAbelian => torus().direct_sum(&u()),
    })
}

/// (rank, signature, discriminant) fingerprint used to compare lattices
/// that are expected to be isometric. Degenerate lattices report their
/// discriminant as None.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeInvariants {
    pub rank: usize,
    pub signature: Signature,
    pub discriminant: Option<Vec<BigInt>>,
}

pub fn invariants(l: &Lattice) -> LatticeInvariants {
    LatticeInvariants {
        rank: l.rank(),
        signature: l.signature(),
        discriminant: l.discriminant_group().ok().map(|d| d.invariant_factors),
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        s.push('[');
        for i in 0..self.rank() {
            if i > 0 {
                s.push_str(", ");
            }
            s.push('[');
            for j in 0..self.rank() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&alloc::format!("{}", self.gram[(i, j)]));
            }
            s.push(']');
        }
        s.push(']');
        f.write_str(&s)
    }
}
