//! Mukai vectors over a polarized surface model.
//!
//! The even cohomology of a K3 or Abelian surface is a unimodular lattice
//! H²(S,Z) ⊕ U under the Mukai pairing
//!
//!   ⟨(r, c, s), (r′, c′, s′)⟩ = c·c′ − r s′ − r′ s,
//!
//! with c·c′ the intersection pairing. Sheaves enter only through their
//! numerical shadow v(F) = (rk F, c₁F, ch₂F + ε·rk F), where ε is 1 on K3
//! and 0 on Abelian surfaces (the Todd-class correction). This module
//! computes the pairing, positivity in the sense of having an effective
//! first Chern class where that is decidable, and the orthogonal
//! complement v⊥ that carries the degree-2 cohomology of the moduli
//! spaces built from v — abstractly, in explicit full-lattice
//! coordinates, and inside the algebraic part Z ⊕ NS(S) ⊕ Z.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::lattice::{
    content, standard_lattice, Lattice, LatticeError, Signature, StandardLattice,
};
use crate::mat::IntMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurfaceKind {
    K3,
    Abelian,
}

impl SurfaceKind {
    /// Todd-class correction to ch₂: 1 on K3, 0 on Abelian surfaces.
    pub fn epsilon(self) -> i64 {
        match self {
            SurfaceKind::K3 => 1,
            SurfaceKind::Abelian => 0,
        }
    }

    /// Degree-2 cohomology lattice of the surface itself.
    pub fn h2_lattice(self) -> Lattice {
        let name = match self {
            SurfaceKind::K3 => StandardLattice::K3,
            SurfaceKind::Abelian => StandardLattice::TorusH2,
        };
        standard_lattice(name).expect("fixed standard lattice")
    }

    /// Full even-cohomology lattice H² ⊕ U carrying the Mukai pairing.
    pub fn full_lattice(self) -> Lattice {
        let name = match self {
            SurfaceKind::K3 => StandardLattice::MukaiK3,
            SurfaceKind::Abelian => StandardLattice::MukaiAbelian,
        };
        standard_lattice(name).expect("fixed standard lattice")
    }

    /// Second Betti number of the surface: 22 or 6.
    pub fn b2(self) -> usize {
        match self {
            SurfaceKind::K3 => 22,
            SurfaceKind::Abelian => 6,
        }
    }
}

impl fmt::Display for SurfaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceKind::K3 => f.write_str("k3"),
            SurfaceKind::Abelian => f.write_str("abelian"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MukaiError {
    Lattice(LatticeError),
    /// NS lattices of these surfaces are even; an odd diagonal entry means
    /// the Gram matrix cannot be an intersection form here.
    NsDiagonalOdd { index: usize },
    /// NS must have signature (1, ρ−1, 0).
    NsNotHyperbolic { got: Signature },
    AmpleSquareNotPositive,
    /// v² = 2k needs k ≥ 1.
    NonPositiveSquare { k: i64 },
    ZeroVector,
    /// The vector is d·w with w primitive and d > 1.
    Imprimitive { scale: BigInt },
    /// No principal block of the surface H² lattice matches the NS Gram.
    NoEmbeddingWindow,
    /// The supplied NS ↪ H² matrix does not preserve the pairing.
    EmbeddingNotIsometric,
}

impl From<LatticeError> for MukaiError {
    fn from(e: LatticeError) -> Self {
        MukaiError::Lattice(e)
    }
}

impl fmt::Display for MukaiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MukaiError::Lattice(e) => write!(f, "{e}"),
            MukaiError::NsDiagonalOdd { index } => {
                write!(f, "ns gram has an odd diagonal entry at index {index}; the lattice must be even")
            }
            MukaiError::NsNotHyperbolic { got } => {
                write!(f, "ns signature must be (1, rank-1, 0), got {got}")
            }
            MukaiError::AmpleSquareNotPositive => {
                write!(f, "ample class must have positive self-intersection")
            }
            MukaiError::NonPositiveSquare { k } => {
                write!(f, "square parameter k must be positive, got {k}")
            }
            MukaiError::ZeroVector => write!(f, "the zero vector is not allowed here"),
            MukaiError::Imprimitive { scale } => {
                write!(f, "vector is imprimitive with content {scale}")
            }
            MukaiError::NoEmbeddingWindow => {
                write!(f, "ns gram does not appear as a principal block of the surface lattice; supply an explicit embedding")
            }
            MukaiError::EmbeddingNotIsometric => {
                write!(f, "embedding matrix does not preserve the pairing")
            }
        }
    }
}

/// A surface only through its lattice data: kind, Néron–Severi Gram, and
/// a distinguished ample class. ε and the ambient lattices are derived
/// from the kind, never stored.
#[derive(Clone, Debug)]
pub struct SurfaceModel {
    kind: SurfaceKind,
    ns: Lattice,
    ample: Vec<BigInt>,
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind, ns: Lattice, ample: Vec<BigInt>) -> Result<Self, MukaiError> {
        for i in 0..ns.rank() {
            if ns.gram()[(i, i)].is_odd() {
                return Err(MukaiError::NsDiagonalOdd { index: i });
            }
        }
        let sig = ns.signature();
        let expected = Signature {
            positive: 1,
            negative: ns.rank().saturating_sub(1),
            null: 0,
        };
        if ns.rank() == 0 || sig != expected {
            return Err(MukaiError::NsNotHyperbolic { got: sig });
        }
        let h2 = ns.square(&ample)?;
        if !h2.is_positive() {
            return Err(MukaiError::AmpleSquareNotPositive);
        }
        Ok(SurfaceModel { kind, ns, ample })
    }

    /// Picard-rank-1 model: NS = [[2d]] with the generator ample.
    pub fn rank_one(kind: SurfaceKind, generator_square: i64) -> Result<Self, MukaiError> {
        let ns = Lattice::from_i64(&[&[generator_square]]).expect("1x1 symmetric");
        SurfaceModel::new(kind, ns, alloc::vec![BigInt::from(1)])
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn ns(&self) -> &Lattice {
        &self.ns
    }

    pub fn ample(&self) -> &[BigInt] {
        &self.ample
    }

    /// Picard rank ρ.
    pub fn rho(&self) -> usize {
        self.ns.rank()
    }

    pub fn epsilon(&self) -> i64 {
        self.kind.epsilon()
    }
}

/// (v₀, v₁, v₂): rank, Néron–Severi class, and the degree-4 component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MukaiVector {
    pub r: BigInt,
    pub c: Vec<BigInt>,
    pub s: BigInt,
}

impl MukaiVector {
    pub fn new(r: BigInt, c: Vec<BigInt>, s: BigInt) -> Self {
        MukaiVector { r, c, s }
    }

    pub fn from_i64(r: i64, c: &[i64], s: i64) -> Self {
        MukaiVector {
            r: BigInt::from(r),
            c: c.iter().map(|&x| BigInt::from(x)).collect(),
            s: BigInt::from(s),
        }
    }

    /// Flattened coordinates [r, c…, s].
    pub fn coords(&self) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(self.c.len() + 2);
        out.push(self.r.clone());
        out.extend(self.c.iter().cloned());
        out.push(self.s.clone());
        out
    }

    pub fn from_coords(x: &[BigInt]) -> Self {
        assert!(x.len() >= 2, "need at least (r, s)");
        MukaiVector {
            r: x[0].clone(),
            c: x[1..x.len() - 1].to_vec(),
            s: x[x.len() - 1].clone(),
        }
    }

    pub fn scale(&self, m: &BigInt) -> Self {
        MukaiVector {
            r: &self.r * m,
            c: self.c.iter().map(|x| x * m).collect(),
            s: &self.s * m,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero() && self.c.iter().all(BigInt::is_zero)
    }
}

impl Add for &MukaiVector {
    type Output = MukaiVector;
    fn add(self, other: &MukaiVector) -> MukaiVector {
        assert_eq!(self.c.len(), other.c.len(), "NS ranks differ");
        MukaiVector {
            r: &self.r + &other.r,
            c: self
                .c
                .iter()
                .zip(&other.c)
                .map(|(a, b)| a + b)
                .collect(),
            s: &self.s + &other.s,
        }
    }
}

impl fmt::Display for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, (", self.r)?;
        for (i, x) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "), {})", self.s)
    }
}

/// ⟨a, b⟩ = a₁·b₁ − a₀b₂ − a₂b₀.
pub fn mukai_pairing(
    a: &MukaiVector,
    b: &MukaiVector,
    model: &SurfaceModel,
) -> Result<BigInt, MukaiError> {
    let cc = model.ns().pair(&a.c, &b.c)?;
    Ok(cc - &a.r * &b.s - &a.s * &b.r)
}

pub fn mukai_square(v: &MukaiVector, model: &SurfaceModel) -> Result<BigInt, MukaiError> {
    mukai_pairing(v, v, model)
}

/// v(F) = (rk, c₁, ch₂ + ε·rk).
pub fn mukai_from_chern(
    rank: BigInt,
    c1: Vec<BigInt>,
    ch2: BigInt,
    model: &SurfaceModel,
) -> MukaiVector {
    let s = ch2 + BigInt::from(model.epsilon()) * &rank;
    MukaiVector { r: rank, c: c1, s }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Yes,
    No,
    /// v₀ = 0 and v₁ ≠ 0 with ρ > 1: whether v₁ is effective is surface
    /// geometry the lattice cannot decide.
    NeedsEffectivityOracle,
}

/// Positivity trichotomy: v₀ > 0; or v₀ = 0 with v₁ effective; or
/// v₀ = 0, v₁ = 0, v₂ > 0. On ρ = 1 effectivity is ⟨v₁, h⟩ > 0.
pub fn is_positive_mukai_vector(
    v: &MukaiVector,
    model: &SurfaceModel,
) -> Result<Positivity, MukaiError> {
    if v.c.len() != model.rho() {
        return Err(LatticeError::DimensionMismatch {
            expected: model.rho(),
            got: v.c.len(),
        }
        .into());
    }
    if v.r.is_negative() {
        return Ok(Positivity::No);
    }
    if v.r.is_positive() {
        return Ok(Positivity::Yes);
    }
    if v.c.iter().all(BigInt::is_zero) {
        return Ok(if v.s.is_positive() {
            Positivity::Yes
        } else {
            Positivity::No
        });
    }
    if model.rho() == 1 {
        // NS = Z: effective classes are exactly the positive multiples of
        // the ample generator.
        let with_ample = model.ns().pair(&v.c, model.ample())?;
        return Ok(if with_ample.is_positive() {
            Positivity::Yes
        } else {
            Positivity::No
        });
    }
    Ok(Positivity::NeedsEffectivityOracle)
}

/// Same trichotomy, with an effectivity predicate closing the open case.
pub fn is_positive_mukai_vector_with<F>(
    v: &MukaiVector,
    model: &SurfaceModel,
    is_effective: F,
) -> Result<Positivity, MukaiError>
where
    F: FnOnce(&[BigInt]) -> bool,
{
    match is_positive_mukai_vector(v, model)? {
        Positivity::NeedsEffectivityOracle => Ok(if is_effective(&v.c) {
            Positivity::Yes
        } else {
            Positivity::No
        }),
        decided => Ok(decided),
    }
}

/// v⊥ for a primitive v of square 2k > 0 and divisibility 1, without
/// choosing coordinates: such a v can be written e + k·f in a hyperbolic
/// summand of the Mukai lattice, so v⊥ ≅ H²(S,Z) ⊕ [−2k].
pub fn vperp_abstract(k: i64, kind: SurfaceKind) -> Result<Lattice, MukaiError> {
    if k <= 0 {
        return Err(MukaiError::NonPositiveSquare { k });
    }
    let a1 = Lattice::from_rows(alloc::vec![alloc::vec![BigInt::from(-2) * k]])
        .expect("1x1 symmetric");
    Ok(kind.h2_lattice().direct_sum(&a1))
}

/// v⊥ from explicit coordinates in the rank-24 or rank-8 Mukai lattice.
pub fn vperp_explicit(v: &[BigInt], kind: SurfaceKind) -> Result<Lattice, MukaiError> {
    let full = kind.full_lattice();
    if v.len() != full.rank() {
        return Err(LatticeError::DimensionMismatch {
            expected: full.rank(),
            got: v.len(),
        }
        .into());
    }
    if v.iter().all(BigInt::is_zero) {
        return Err(MukaiError::ZeroVector);
    }
    let scale = content(v)?;
    if scale > BigInt::from(1) {
        return Err(MukaiError::Imprimitive { scale });
    }
    let c = full.orthogonal_complement(&[v.to_vec()])?;
    Ok(c.lattice)
}

/// The algebraic Mukai lattice Z ⊕ NS(S) ⊕ Z in coordinates (r, c…, s):
/// Gram [[0,0,−1],[0,G_NS,0],[−1,0,0]], matching the Mukai pairing.
pub fn algebraic_mukai_lattice(model: &SurfaceModel) -> Lattice {
    let rho = model.rho();
    let mut g = IntMat::zero(rho + 2, rho + 2);
    for i in 0..rho {
        for j in 0..rho {
            g[(i + 1, j + 1)] = model.ns().gram()[(i, j)].clone();
        }
    }
    g[(0, rho + 1)] = BigInt::from(-1);
    g[(rho + 1, 0)] = BigInt::from(-1);
    Lattice::new(g).expect("symmetric by construction")
}

/// v⊥ inside Z ⊕ NS ⊕ Z: the Picard lattice of the moduli space.
pub fn algebraic_vperp(v: &MukaiVector, model: &SurfaceModel) -> Result<Lattice, MukaiError> {
    if v.is_zero() {
        return Err(MukaiError::ZeroVector);
    }
    if v.c.len() != model.rho() {
        return Err(LatticeError::DimensionMismatch {
            expected: model.rho(),
            got: v.c.len(),
        }
        .into());
    }
    let ambient = algebraic_mukai_lattice(model);
    let c = ambient.orthogonal_complement(&[v.coords()])?;
    Ok(c.lattice)
}

/// Default NS ↪ H²(S) embedding. First choice: the first contiguous
/// principal block of the surface lattice whose Gram equals the NS Gram
/// (covers NS given as blocks of the standard form, U summands and the
/// like). For rank-1 NS = [[2d]] with no such block, the generator goes
/// to e + d·f in the first hyperbolic summand, which has square 2d.
pub fn leading_window_embedding(
    ns: &Lattice,
    kind: SurfaceKind,
) -> Result<IntMat, MukaiError> {
    let h2 = kind.h2_lattice();
    let rho = ns.rank();
    let b2 = h2.rank();
    if rho > b2 {
        return Err(MukaiError::NoEmbeddingWindow);
    }
    if let Some(start) = find_principal_window(&h2, ns) {
        let mut e = IntMat::zero(rho, b2);
        for i in 0..rho {
            e[(i, start + i)] = BigInt::from(1);
        }
        return Ok(e);
    }
    if rho == 1 && ns.gram()[(0, 0)].is_even() {
        let u = standard_lattice(StandardLattice::U).expect("fixed standard lattice");
        if let Some(start) = find_principal_window(&h2, &u) {
            let d: BigInt = ns.gram()[(0, 0)].clone() / 2;
            let mut e = IntMat::zero(1, b2);
            e[(0, start)] = BigInt::from(1);
            e[(0, start + 1)] = d;
            return Ok(e);
        }
    }
    Err(MukaiError::NoEmbeddingWindow)
}

/// Start index of the first contiguous principal block of `ambient`
/// equal to the Gram of `sub`, if any.
fn find_principal_window(ambient: &Lattice, sub: &Lattice) -> Option<usize> {
    let rho = sub.rank();
    let n = ambient.rank();
    if rho > n {
        return None;
    }
    'windows: for start in 0..=n - rho {
        for i in 0..rho {
            for j in 0..rho {
                if ambient.gram()[(start + i, start + j)] != sub.gram()[(i, j)] {
                    continue 'windows;
                }
            }
        }
        return Some(start);
    }
    None
}

/// Checks E·G_{H²}·Eᵀ = G_NS for a proposed embedding matrix.
pub fn validate_ns_embedding(
    embedding: &IntMat,
    ns: &Lattice,
    kind: SurfaceKind,
) -> Result<(), MukaiError> {
    let h2 = kind.h2_lattice();
    if embedding.rows() != ns.rank() || embedding.cols() != h2.rank() {
        return Err(MukaiError::EmbeddingNotIsometric);
    }
    let restricted = embedding.mul(h2.gram()).mul(&embedding.transpose());
    if &restricted == ns.gram() {
        Ok(())
    } else {
        Err(MukaiError::EmbeddingNotIsometric)
    }
}

/// Coordinates of (r, c, s) in the full Mukai lattice: c goes through the
/// NS embedding, and (r, s) land in the trailing hyperbolic summand as
/// (r, −s) — the sign that turns U's pairing xy′ + x′y into −rs′ − r′s.
pub fn embed_mukai_vector(
    v: &MukaiVector,
    kind: SurfaceKind,
    ns_embedding: &IntMat,
) -> Result<Vec<BigInt>, MukaiError> {
    let b2 = kind.b2();
    if ns_embedding.rows() != v.c.len() || ns_embedding.cols() != b2 {
        return Err(LatticeError::DimensionMismatch {
            expected: v.c.len(),
            got: ns_embedding.rows(),
        }
        .into());
    }
    let mut out = alloc::vec![BigInt::zero(); b2 + 2];
    for j in 0..b2 {
        let mut acc = BigInt::zero();
        for (i, ci) in v.c.iter().enumerate() {
            acc += ci * &ns_embedding[(i, j)];
        }
        out[j] = acc;
    }
    out[b2] = v.r.clone();
    out[b2 + 1] = -v.s.clone();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{invariants, is_primitive, primitive_scale};
    use num_traits::One;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn u_lattice() -> Lattice {
        standard_lattice(StandardLattice::U).unwrap()
    }

    fn k3_rank1(h_square: i64) -> SurfaceModel {
        SurfaceModel::rank_one(SurfaceKind::K3, h_square).unwrap()
    }

    fn k3_with_u_ns() -> SurfaceModel {
        SurfaceModel::new(SurfaceKind::K3, u_lattice(), big(&[1, 1])).unwrap()
    }

    #[test]
    fn model_validation() {
        assert!(SurfaceModel::rank_one(SurfaceKind::K3, 2).is_ok());
        assert!(SurfaceModel::rank_one(SurfaceKind::Abelian, 6).is_ok());
        assert_eq!(
            SurfaceModel::rank_one(SurfaceKind::K3, -2).unwrap_err(),
            MukaiError::NsNotHyperbolic {
                got: Signature {
                    positive: 0,
                    negative: 1,
                    null: 0
                }
            }
        );
        assert!(matches!(
            SurfaceModel::rank_one(SurfaceKind::K3, 3),
            Err(MukaiError::NsDiagonalOdd { index: 0 })
        ));
        // Hyperbolic NS but the chosen class has negative square.
        assert_eq!(
            SurfaceModel::new(SurfaceKind::K3, u_lattice(), big(&[1, -1])).unwrap_err(),
            MukaiError::AmpleSquareNotPositive
        );
        // Signature (2,0,0) is not allowed even though it contains (1,·).
        let diag22 = Lattice::from_i64(&[&[2, 0], &[0, 2]]).unwrap();
        assert!(matches!(
            SurfaceModel::new(SurfaceKind::K3, diag22, big(&[1, 0])),
            Err(MukaiError::NsNotHyperbolic { .. })
        ));
        let m = k3_with_u_ns();
        assert_eq!(m.rho(), 2);
        assert_eq!(m.epsilon(), 1);
        assert_eq!(SurfaceModel::rank_one(SurfaceKind::Abelian, 2).unwrap().epsilon(), 0);
    }

    #[test]
    fn pairing_fixed_values() {
        // (0,h,0)² = h² = 2k.
        let m = k3_rank1(6);
        let v = MukaiVector::from_i64(0, &[1], 0);
        assert_eq!(mukai_square(&v, &m).unwrap(), BigInt::from(6));

        let a = MukaiVector::from_i64(1, &[0], 0);
        let b = MukaiVector::from_i64(0, &[0], 1);
        assert_eq!(mukai_pairing(&a, &b, &m).unwrap(), BigInt::from(-1));

        // (1,0,1−n)² = 2n−2 for n = 4.
        let m2 = k3_rank1(2);
        let v = MukaiVector::from_i64(1, &[0], 1 - 4);
        assert_eq!(mukai_square(&v, &m2).unwrap(), BigInt::from(6));
    }

    #[test]
    fn pairing_is_symmetric_and_bilinear() {
        let m = k3_with_u_ns();
        let mut rng = StdRng::seed_from_u64(0xb111);
        for _ in 0..30 {
            let mut v = || {
                MukaiVector::from_i64(
                    rng.gen_range(-5i64..=5),
                    &[rng.gen_range(-5i64..=5), rng.gen_range(-5i64..=5)],
                    rng.gen_range(-5i64..=5),
                )
            };
            let (a, b, c) = (v(), v(), v());
            assert_eq!(
                mukai_pairing(&a, &b, &m).unwrap(),
                mukai_pairing(&b, &a, &m).unwrap()
            );
            let lhs = mukai_pairing(&(&a + &c), &b, &m).unwrap();
            let rhs = mukai_pairing(&a, &b, &m).unwrap() + mukai_pairing(&c, &b, &m).unwrap();
            assert_eq!(lhs, rhs);
            // Even lattice: all squares even.
            assert!(mukai_square(&a, &m).unwrap().is_even());
        }
    }

    #[test]
    fn pairing_dimension_mismatch() {
        let m = k3_rank1(2);
        let a = MukaiVector::from_i64(1, &[0, 0], 0);
        assert!(matches!(
            mukai_pairing(&a, &a, &m),
            Err(MukaiError::Lattice(LatticeError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn chern_construction() {
        let ab = SurfaceModel::rank_one(SurfaceKind::Abelian, 4).unwrap();
        let v = mukai_from_chern(BigInt::zero(), big(&[1]), BigInt::zero(), &ab);
        assert_eq!(v, MukaiVector::from_i64(0, &[1], 0));

        let k3 = k3_rank1(2);
        let structure = mukai_from_chern(BigInt::one(), big(&[0]), BigInt::zero(), &k3);
        assert_eq!(structure, MukaiVector::from_i64(1, &[0], 1));
        assert_eq!(mukai_square(&structure, &k3).unwrap(), BigInt::from(-2));

        for n in 1..=5i64 {
            let ideal = mukai_from_chern(BigInt::one(), big(&[0]), BigInt::from(-n), &k3);
            assert_eq!(ideal, MukaiVector::from_i64(1, &[0], 1 - n));
            assert_eq!(
                mukai_square(&ideal, &k3).unwrap(),
                BigInt::from(2 * n - 2)
            );
        }
    }

    #[test]
    fn chern_construction_is_additive() {
        let k3 = k3_with_u_ns();
        let mut rng = StdRng::seed_from_u64(0xadd);
        for _ in 0..20 {
            let mut trip = || {
                (
                    BigInt::from(rng.gen_range(-4i64..=4)),
                    big(&[rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4)]),
                    BigInt::from(rng.gen_range(-4i64..=4)),
                )
            };
            let (r1, c1, t1) = trip();
            let (r2, c2, t2) = trip();
            let sum_c: Vec<BigInt> = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
            let joint = mukai_from_chern(&r1 + &r2, sum_c, &t1 + &t2, &k3);
            let split = &mukai_from_chern(r1, c1, t1, &k3) + &mukai_from_chern(r2, c2, t2, &k3);
            assert_eq!(joint, split);
        }
    }

    #[test]
    fn positivity_trichotomy() {
        let m = k3_rank1(2);
        let yes = |v: &MukaiVector| {
            assert_eq!(is_positive_mukai_vector(v, &m).unwrap(), Positivity::Yes)
        };
        let no = |v: &MukaiVector| {
            assert_eq!(is_positive_mukai_vector(v, &m).unwrap(), Positivity::No)
        };
        yes(&MukaiVector::from_i64(2, &[1], -3));
        yes(&MukaiVector::from_i64(0, &[0], 5));
        no(&MukaiVector::from_i64(0, &[-1], 1));
        yes(&MukaiVector::from_i64(0, &[1], -7));
        no(&MukaiVector::from_i64(-1, &[0], 0));
        no(&MukaiVector::from_i64(0, &[0], 0));
        no(&MukaiVector::from_i64(0, &[0], -5));

        let wide = k3_with_u_ns();
        let undecided = MukaiVector::from_i64(0, &[1, 0], 0);
        assert_eq!(
            is_positive_mukai_vector(&undecided, &wide).unwrap(),
            Positivity::NeedsEffectivityOracle
        );
        assert_eq!(
            is_positive_mukai_vector_with(&undecided, &wide, |_| true).unwrap(),
            Positivity::Yes
        );
        assert_eq!(
            is_positive_mukai_vector_with(&undecided, &wide, |_| false).unwrap(),
            Positivity::No
        );
        // The oracle is never consulted when the trichotomy already decides.
        assert_eq!(
            is_positive_mukai_vector_with(&MukaiVector::from_i64(1, &[0, 0], 0), &wide, |_| {
                panic!("oracle must not run")
            })
            .unwrap(),
            Positivity::Yes
        );
    }

    #[test]
    fn abstract_complement_fixed_values() {
        let k3 = vperp_abstract(1, SurfaceKind::K3).unwrap();
        assert_eq!(k3.rank(), 23);
        assert_eq!(
            k3.signature(),
            Signature {
                positive: 3,
                negative: 20,
                null: 0
            }
        );
        assert_eq!(
            k3.discriminant_group().unwrap().invariant_factors,
            [BigInt::from(2)]
        );

        let ab2 = vperp_abstract(2, SurfaceKind::Abelian).unwrap();
        assert_eq!(ab2.rank(), 7);
        assert_eq!(
            ab2.signature(),
            Signature {
                positive: 3,
                negative: 4,
                null: 0
            }
        );
        assert_eq!(
            ab2.discriminant_group().unwrap().invariant_factors,
            [BigInt::from(4)]
        );

        let ab1 = vperp_abstract(1, SurfaceKind::Abelian).unwrap();
        assert_eq!(ab1.rank(), 7);
        assert_eq!(ab1.det().abs(), BigInt::from(2));

        assert_eq!(
            vperp_abstract(0, SurfaceKind::K3),
            Err(MukaiError::NonPositiveSquare { k: 0 })
        );
        assert!(vperp_abstract(-3, SurfaceKind::Abelian).is_err());
    }

    #[test]
    fn abstract_complement_invariants_sweep() {
        for k in 1..=12i64 {
            for kind in [SurfaceKind::K3, SurfaceKind::Abelian] {
                let l = vperp_abstract(k, kind).unwrap();
                let (rank, neg) = match kind {
                    SurfaceKind::K3 => (23, 20),
                    SurfaceKind::Abelian => (7, 4),
                };
                assert_eq!(l.rank(), rank);
                assert_eq!(
                    l.signature(),
                    Signature {
                        positive: 3,
                        negative: neg,
                        null: 0
                    }
                );
                assert_eq!(
                    l.discriminant_group().unwrap().invariant_factors,
                    [BigInt::from(2 * k)]
                );
            }
        }
    }

    #[test]
    fn explicit_complement_examples() {
        // Ideal-sheaf vector for n = 2: v = (1, 0, −1), i.e. full
        // coordinates e + 1·f in the trailing hyperbolic summand.
        let mut v = alloc::vec![BigInt::zero(); 24];
        v[22] = BigInt::one();
        v[23] = BigInt::one();
        let l = vperp_explicit(&v, SurfaceKind::K3).unwrap();
        assert_eq!(l.rank(), 23);
        assert_eq!(
            invariants(&l),
            invariants(&vperp_abstract(1, SurfaceKind::K3).unwrap())
        );

        let mut w = alloc::vec![BigInt::zero(); 8];
        w[6] = BigInt::one();
        w[7] = BigInt::one();
        let l = vperp_explicit(&w, SurfaceKind::Abelian).unwrap();
        assert_eq!(l.rank(), 7);
        assert_eq!(
            invariants(&l),
            invariants(&vperp_abstract(1, SurfaceKind::Abelian).unwrap())
        );
    }

    #[test]
    fn explicit_complement_error_paths() {
        let zero = alloc::vec![BigInt::zero(); 24];
        assert_eq!(
            vperp_explicit(&zero, SurfaceKind::K3),
            Err(MukaiError::ZeroVector)
        );
        let mut doubled = alloc::vec![BigInt::zero(); 24];
        doubled[0] = BigInt::from(2);
        doubled[23] = BigInt::from(4);
        assert_eq!(
            vperp_explicit(&doubled, SurfaceKind::K3),
            Err(MukaiError::Imprimitive {
                scale: BigInt::from(2)
            })
        );
        let short = alloc::vec![BigInt::one(); 6];
        assert!(matches!(
            vperp_explicit(&short, SurfaceKind::K3),
            Err(MukaiError::Lattice(LatticeError::DimensionMismatch { .. }))
        ));
    }

    #[test]
    fn explicit_complement_corank_one_on_random_primitive_vectors() {
        let mut rng = StdRng::seed_from_u64(0xc0ae);
        for kind in [SurfaceKind::K3, SurfaceKind::Abelian] {
            let n = kind.full_lattice().rank();
            let mut done = 0;
            while done < 20 {
                let v: Vec<BigInt> = (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect();
                if v.iter().all(BigInt::is_zero) || !is_primitive(&v).unwrap() {
                    continue;
                }
                done += 1;
                let l = vperp_explicit(&v, kind).unwrap();
                assert_eq!(l.rank(), n - 1);
            }
        }
    }

    #[test]
    fn explicit_matches_abstract_for_e_plus_kf() {
        for k in 1..=6i64 {
            for kind in [SurfaceKind::K3, SurfaceKind::Abelian] {
                let n = kind.full_lattice().rank();
                let mut v = alloc::vec![BigInt::zero(); n];
                v[n - 2] = BigInt::one();
                v[n - 1] = BigInt::from(k);
                let explicit = vperp_explicit(&v, kind).unwrap();
                let abstract_ = vperp_abstract(k, kind).unwrap();
                assert_eq!(invariants(&explicit), invariants(&abstract_));
            }
        }
    }

    #[test]
    fn algebraic_complement_examples() {
        // ρ = 1, h² = 2, v = (0, h, 0): complement is spanned by
        // (1,0,0) and (0,0,1) with Gram [[0,−1],[−1,0]].
        let m = k3_rank1(2);
        let v = MukaiVector::from_i64(0, &[1], 0);
        let l = algebraic_vperp(&v, &m).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(l.det(), BigInt::from(-1));
        assert_eq!(
            l.signature(),
            Signature {
                positive: 1,
                negative: 1,
                null: 0
            }
        );

        let w = MukaiVector::from_i64(1, &[0], 1);
        let l = algebraic_vperp(&w, &m).unwrap();
        assert_eq!(l.rank(), 2);

        let wide = k3_with_u_ns();
        let u = MukaiVector::from_i64(0, &[1, 0], 0);
        assert_eq!(algebraic_vperp(&u, &wide).unwrap().rank(), 3);

        assert_eq!(
            algebraic_vperp(&MukaiVector::from_i64(0, &[0], 0), &m),
            Err(MukaiError::ZeroVector)
        );
    }

    #[test]
    fn algebraic_complement_brute_force_for_rank_one_example() {
        // Everything orthogonal to (0,h,0) in a small box must be an
        // integer combination of the claimed basis {(1,0,0),(0,0,1)}.
        let m = k3_rank1(2);
        let ambient = algebraic_mukai_lattice(&m);
        let v = big(&[0, 1, 0]);
        for r in -3i64..=3 {
            for c in -3i64..=3 {
                for s in -3i64..=3 {
                    let x = big(&[r, c, s]);
                    let p = ambient.pair(&x, &v).unwrap();
                    assert_eq!(p.is_zero(), c == 0, "orthogonality must mean c = 0");
                }
            }
        }
        // And the ambient really encodes the Mukai pairing.
        let a = MukaiVector::from_i64(2, &[3], -1);
        let b = MukaiVector::from_i64(-1, &[2], 5);
        assert_eq!(
            ambient.pair(&a.coords(), &b.coords()).unwrap(),
            mukai_pairing(&a, &b, &m).unwrap()
        );
    }

    #[test]
    fn embedding_window_and_pairing_preservation() {
        let model = k3_with_u_ns();
        let e = leading_window_embedding(model.ns(), SurfaceKind::K3).unwrap();
        validate_ns_embedding(&e, model.ns(), SurfaceKind::K3).unwrap();
        // U first appears at index 16 of E8(−1)² ⊕ U³.
        assert_eq!(e[(0, 16)], BigInt::one());
        assert_eq!(e[(1, 17)], BigInt::one());

        let full = SurfaceKind::K3.full_lattice();
        let mut rng = StdRng::seed_from_u64(0xe3bed);
        for _ in 0..25 {
            let mut v = || {
                MukaiVector::from_i64(
                    rng.gen_range(-4i64..=4),
                    &[rng.gen_range(-4i64..=4), rng.gen_range(-4i64..=4)],
                    rng.gen_range(-4i64..=4),
                )
            };
            let (a, b) = (v(), v());
            let ea = embed_mukai_vector(&a, SurfaceKind::K3, &e).unwrap();
            let eb = embed_mukai_vector(&b, SurfaceKind::K3, &e).unwrap();
            assert_eq!(
                full.pair(&ea, &eb).unwrap(),
                mukai_pairing(&a, &b, &model).unwrap()
            );
        }
    }

    #[test]
    fn embedding_of_ideal_sheaf_vector() {
        // (1, 0, 1−n) must land on coordinates with x[22] = 1, x[23] = n−1.
        let model = k3_rank1(2);
        let e = leading_window_embedding(model.ns(), SurfaceKind::K3).unwrap();
        for n in 2..=4i64 {
            let v = MukaiVector::from_i64(1, &[0], 1 - n);
            let x = embed_mukai_vector(&v, SurfaceKind::K3, &e).unwrap();
            assert_eq!(x[22], BigInt::one());
            assert_eq!(x[23], BigInt::from(n - 1));
            let l = vperp_explicit(&x, SurfaceKind::K3).unwrap();
            assert_eq!(
                invariants(&l),
                invariants(&vperp_abstract(n - 1, SurfaceKind::K3).unwrap())
            );
        }
    }

    #[test]
    fn embedding_of_polarized_rank_one_ns() {
        // [[2d]] is not a block of any surface gram (diagonals are −2 or
        // 0), so the generator must go to e + d·f in a hyperbolic summand.
        for kind in [SurfaceKind::K3, SurfaceKind::Abelian] {
            for d in 1..=4i64 {
                let ns = Lattice::from_i64(&[&[2 * d]]).unwrap();
                let e = leading_window_embedding(&ns, kind).unwrap();
                validate_ns_embedding(&e, &ns, kind).unwrap();
                let row = e.row(0).to_vec();
                assert!(crate::lattice::is_primitive(&row).unwrap());
                assert_eq!(kind.h2_lattice().square(&row).unwrap(), BigInt::from(2 * d));
            }
        }
    }

    #[test]
    fn embedding_rejections() {
        // diag(2, −2) embeds abstractly but matches no contiguous block,
        // and the helper does not search further: the caller supplies an
        // explicit matrix in such cases.
        let ns = Lattice::from_i64(&[&[2, 0], &[0, -2]]).unwrap();
        assert_eq!(
            leading_window_embedding(&ns, SurfaceKind::K3),
            Err(MukaiError::NoEmbeddingWindow)
        );
        // Wrong-shape and non-isometric matrices are rejected.
        let rank1 = Lattice::from_i64(&[&[2]]).unwrap();
        assert_eq!(
            validate_ns_embedding(&IntMat::zero(1, 22), &rank1, SurfaceKind::K3),
            Err(MukaiError::EmbeddingNotIsometric)
        );
        assert_eq!(
            validate_ns_embedding(&IntMat::zero(2, 22), &rank1, SurfaceKind::K3),
            Err(MukaiError::EmbeddingNotIsometric)
        );
    }

    #[test]
    fn primitive_scale_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(0x5ca1e);
        for _ in 0..30 {
            let w: Vec<BigInt> = (0..4)
                .map(|_| BigInt::from(rng.gen_range(-6i64..=6)))
                .collect();
            if w.iter().all(BigInt::is_zero) {
                continue;
            }
            let (d, _) = primitive_scale(&w).unwrap();
            for m in 1..=5i64 {
                let scaled: Vec<BigInt> = w.iter().map(|x| x * m).collect();
                let (dm, prim) = primitive_scale(&scaled).unwrap();
                assert_eq!(dm, &d * m);
                assert!(is_primitive(&prim).unwrap());
            }
        }
    }
}
