//! Genericity walls for polarizations, in Néron–Severi rank ≤ 2.
//!
//! A Mukai vector v with positive rank singles out the divisor classes
//! D with −|v| ≤ D² < 0, where |v| = (v₀²/4)(v,v) + v₀^{2+2ε}/2; a
//! polarization H is v-generic when H·D ≠ 0 for every such D. In an
//! indefinite rank-2 Picard lattice that divisor set is typically
//! infinite (its norm condition is a Pell equation), but only finitely
//! many of the hyperplanes D⊥ cross a compact segment of the positive
//! cone, and those are what stability chambers are made of.
//!
//! The enumeration works in the dual coordinates s = ⟨D,h1⟩,
//! t = ⟨D,h2⟩ attached to the segment ends: on the cone st ≤ 0 cut out
//! by the segment, the Gram data a = h1², b = h1·h2, c = h2²,
//! Δ = b² − ac > 0 give D² = (2b·st − c·s² − a·t²)/Δ, a sum of
//! nonpositive terms, so −|v| ≤ D² pins s² ≤ |v|Δ/c and t² ≤ |v|Δ/a.
//! That finite integer box is scanned exactly.
//!
//! Wall divisors are kept as found, one per ordered factorization of
//! the norm, not reduced to primitive classes: distinct sheaf-theoretic
//! wall data may share a hyperplane, and the census counts the data.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::lattice::LatticeError;
use crate::mukai::{mukai_square, MukaiError, MukaiVector, SurfaceModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallsError {
    Lattice(LatticeError),
    Mukai(MukaiError),
    /// v₀ > 0 is required for the norm bound and the wall census.
    NonPositiveRank { got: BigInt },
    /// A polarization or segment end with nonpositive square.
    NotInPositiveCone,
    InvalidSegment(&'static str),
    Unsupported(String),
    MultiplierOutOfRange { p: i64, m: i64 },
}

impl From<LatticeError> for WallsError {
    fn from(e: LatticeError) -> Self {
        WallsError::Lattice(e)
    }
}

impl From<MukaiError> for WallsError {
    fn from(e: MukaiError) -> Self {
        WallsError::Mukai(e)
    }
}

impl fmt::Display for WallsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WallsError::Lattice(e) => write!(f, "{e}"),
            WallsError::Mukai(e) => write!(f, "{e}"),
            WallsError::NonPositiveRank { got } => {
                write!(f, "the wall bound needs rank v0 > 0, got {got}")
            }
            WallsError::NotInPositiveCone => {
                write!(f, "the polarization must have positive self-intersection")
            }
            WallsError::InvalidSegment(why) => write!(f, "invalid ample segment: {why}"),
            WallsError::Unsupported(why) => write!(f, "unsupported: {why}"),
            WallsError::MultiplierOutOfRange { p, m } => {
                write!(f, "submultiplier {p} is outside 1..={m}")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WallSource {
    /// Walls of positive-rank vectors: −|v| ≤ D² < 0.
    PositiveRank,
    /// Witnesses D = u₂v₁ − v₂u₁ from candidate subsheaf data of a
    /// rank-zero vector.
    TorsionFree,
}

/// A wall divisor in NS coordinates, sign-normalized so the first
/// nonzero coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wall {
    pub d: Vec<BigInt>,
    pub d_square: BigInt,
    pub source: WallSource,
}

/// A closed segment [h1, h2] inside one component of the positive cone;
/// the ends may coincide or be parallel, which degenerates the segment
/// to a single polarization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleSegment {
    h1: Vec<BigInt>,
    h2: Vec<BigInt>,
}

impl AmpleSegment {
    pub fn new(
        model: &SurfaceModel,
        h1: Vec<BigInt>,
        h2: Vec<BigInt>,
    ) -> Result<Self, WallsError> {
        if h1.len() != model.rho() || h2.len() != model.rho() {
            return Err(WallsError::InvalidSegment(
                "segment ends must have one coordinate per Picard generator",
            ));
        }
        if !model.ns().square(&h1)?.is_positive() || !model.ns().square(&h2)?.is_positive() {
            return Err(WallsError::InvalidSegment(
                "segment ends must have positive self-intersection",
            ));
        }
        if !model.ns().pair(&h1, &h2)?.is_positive() {
            return Err(WallsError::InvalidSegment(
                "segment ends must lie in the same positive-cone component",
            ));
        }
        Ok(AmpleSegment { h1, h2 })
    }

    pub fn around(model: &SurfaceModel, h: &[BigInt]) -> Result<Self, WallsError> {
        AmpleSegment::new(model, h.to_vec(), h.to_vec())
    }

    pub fn ends(&self) -> (&[BigInt], &[BigInt]) {
        (&self.h1, &self.h2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Genericity {
    Generic,
    OnWall(Wall),
    Unsupported(String),
}

/// |v| = (v₀²/4)(v,v) + v₀^{2+2ε}/2, the norm bounding the walls of v.
pub fn v_norm_bound(v: &MukaiVector, model: &SurfaceModel) -> Result<BigRational, WallsError> {
    if !v.r.is_positive() {
        return Err(WallsError::NonPositiveRank { got: v.r.clone() });
    }
    let vv = mukai_square(v, model)?;
    let r2 = &v.r * &v.r;
    let quad = BigRational::new(&r2 * &vv, BigInt::from(4));
    let exp = (2 + 2 * model.epsilon()) as usize;
    let tail = BigRational::new(num_traits::pow(v.r.clone(), exp), BigInt::from(2));
    Ok(quad + tail)
}

fn canonical_sign(d: &mut [BigInt]) {
    for x in d.iter() {
        if x.is_positive() {
            return;
        }
        if x.is_negative() {
            break;
        }
    }
    for x in d.iter_mut() {
        *x = -&*x;
    }
}

fn is_parallel_2d(x: &[BigInt], y: &[BigInt]) -> bool {
    (&x[0] * &y[1] - &x[1] * &y[0]).is_zero()
}

/// Floor of the square root of a rational, as a nonnegative integer;
/// negative inputs give 0.
fn isqrt_floor(q: &BigRational) -> BigInt {
    if q.is_negative() {
        return BigInt::zero();
    }
    q.floor().to_integer().sqrt()
}

/// Replace a degenerate segment through h by a short transverse one,
/// n·h ± e, with e a basis vector independent of h and n the smallest
/// scale keeping both ends (and their pairing) in the positive cone.
/// Any divisor orthogonal to h has dual coordinates (⟨D,e⟩, −⟨D,e⟩)
/// on the widened segment, so its hyperplane still meets it.
fn widen(model: &SurfaceModel, h: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>), WallsError> {
    let mut aux = alloc::vec![BigInt::zero(), BigInt::one()];
    if is_parallel_2d(h, &aux) {
        aux = alloc::vec![BigInt::one(), BigInt::zero()];
    }
    let ns = model.ns();
    let mut n = BigInt::one();
    loop {
        let scaled: Vec<BigInt> = h.iter().map(|x| x * &n).collect();
        let plus: Vec<BigInt> = scaled.iter().zip(&aux).map(|(x, e)| x + e).collect();
        let minus: Vec<BigInt> = scaled.iter().zip(&aux).map(|(x, e)| x - e).collect();
        if ns.square(&plus)?.is_positive()
            && ns.square(&minus)?.is_positive()
            && ns.pair(&plus, &minus)?.is_positive()
        {
            return Ok((plus, minus));
        }
        n += 1;
        debug_assert!(n < BigInt::from(1_000_000), "widening failed to stabilize");
    }
}

/// All sign-normalized D with −bound ≤ D² < 0 whose hyperplane D⊥
/// meets the segment [h1, h2] (h1, h2 independent, both in the cone):
/// the box scan described in the module docs.
fn scan_transverse(
    model: &SurfaceModel,
    bound: &BigRational,
    h1: &[BigInt],
    h2: &[BigInt],
) -> Result<Vec<Wall>, WallsError> {
    let ns = model.ns();
    let a = ns.square(h1)?;
    let b = ns.pair(h1, h2)?;
    let c = ns.square(h2)?;
    let delta = &b * &b - &a * &c;
    debug_assert!(
        delta.is_positive(),
        "independent cone classes in a hyperbolic plane have b^2 > ac"
    );

    // (s,t) = A·D with A = [h1ᵀG; h2ᵀG].
    let g = ns.gram();
    let row = |h: &[BigInt]| -> Vec<BigInt> {
        (0..2)
            .map(|j| (0..2).map(|i| &h[i] * &g[(i, j)]).sum())
            .collect()
    };
    let a0 = row(h1);
    let a1 = row(h2);
    let det = &a0[0] * &a1[1] - &a0[1] * &a1[0];
    debug_assert!(!det.is_zero());

    let s_max = isqrt_floor(&(bound * BigRational::new(delta.clone(), c)));
    let t_max = isqrt_floor(&(bound * BigRational::new(delta, a)));

    let mut seen: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut s = -s_max.clone();
    while s <= s_max {
        let mut t = -t_max.clone();
        while t <= t_max {
            if (&s * &t).is_positive() || (s.is_zero() && t.is_zero()) {
                t += 1;
                continue;
            }
            // D = A⁻¹ (s,t), kept only when integral.
            let num0 = &a1[1] * &s - &a0[1] * &t;
            let num1 = &a0[0] * &t - &a1[0] * &s;
            let (d0, r0) = num0.div_rem(&det);
            let (d1, r1) = num1.div_rem(&det);
            if r0.is_zero() && r1.is_zero() {
                let mut d = alloc::vec![d0, d1];
                let dsq = ns.square(&d)?;
                if dsq.is_negative() && BigRational::from(dsq) >= -bound {
                    canonical_sign(&mut d);
                    seen.insert(d);
                }
            }
            t += 1;
        }
        s += 1;
    }

    Ok(seen
        .into_iter()
        .map(|d| {
            let d_square = ns.square(&d).expect("dimensions already checked");
            Wall {
                d,
                d_square,
                source: WallSource::PositiveRank,
            }
        })
        .collect())
}

/// The walls of v crossing the given ample segment, sign-normalized and
/// sorted by coordinates. Rank-1 Picard lattices are positive definite
/// and have none; rank ≥ 3 is refused.
pub fn enumerate_walls(
    v: &MukaiVector,
    model: &SurfaceModel,
    seg: &AmpleSegment,
) -> Result<Vec<Wall>, WallsError> {
    if !v.r.is_positive() {
        return Err(WallsError::NonPositiveRank { got: v.r.clone() });
    }
    if seg.h1.len() != model.rho() {
        return Err(WallsError::InvalidSegment(
            "segment does not match the Picard rank of the model",
        ));
    }
    match model.rho() {
        1 => Ok(Vec::new()),
        2 => {
            let bound = v_norm_bound(v, model)?;
            if !bound.is_positive() {
                return Ok(Vec::new());
            }
            if is_parallel_2d(&seg.h1, &seg.h2) {
                // The segment is a single ray: a wall crosses it exactly
                // when it passes through h1.
                let (p, q) = widen(model, &seg.h1)?;
                let mut walls = scan_transverse(model, &bound, &p, &q)?;
                walls.retain(|w| model.ns().pair(&w.d, &seg.h1).expect("checked").is_zero());
                Ok(walls)
            } else {
                scan_transverse(model, &bound, &seg.h1, &seg.h2)
            }
        }
        rho => Err(WallsError::Unsupported(format!(
            "wall enumeration is implemented for Picard rank <= 2, got rank {rho}"
        ))),
    }
}

/// Is H a v-generic polarization? For positive-rank v this enumerates
/// the walls through H; a rank-zero v needs candidate subsheaf data
/// (see [`is_v_generic_with_candidates`]) unless the Picard rank is 1.
pub fn is_v_generic(
    h: &[BigInt],
    v: &MukaiVector,
    model: &SurfaceModel,
) -> Result<Genericity, WallsError> {
    is_v_generic_with_candidates(h, v, model, &[])
}

pub fn is_v_generic_with_candidates(
    h: &[BigInt],
    v: &MukaiVector,
    model: &SurfaceModel,
    candidates: &[MukaiVector],
) -> Result<Genericity, WallsError> {
    if h.len() != model.rho() {
        return Err(WallsError::Lattice(LatticeError::DimensionMismatch {
            expected: model.rho(),
            got: h.len(),
        }));
    }
    if !model.ns().square(h)?.is_positive() {
        return Err(WallsError::NotInPositiveCone);
    }
    if v.r.is_negative() {
        return Err(WallsError::NonPositiveRank { got: v.r.clone() });
    }

    if v.r.is_zero() {
        if model.rho() == 1 {
            // A definite Picard lattice carries no wall divisors.
            return Ok(Genericity::Generic);
        }
        if candidates.is_empty() {
            return Ok(Genericity::Unsupported(String::from(
                "rank-zero vectors need candidate subsheaf vectors to test against",
            )));
        }
        // Each candidate subsheaf vector u contributes D = u₂v₁ − v₂u₁.
        for u in candidates {
            if u.c.len() != model.rho() || v.c.len() != model.rho() {
                return Err(WallsError::Lattice(LatticeError::DimensionMismatch {
                    expected: model.rho(),
                    got: u.c.len().max(v.c.len()),
                }));
            }
            let mut d: Vec<BigInt> = v
                .c
                .iter()
                .zip(&u.c)
                .map(|(vc, uc)| &u.s * vc - &v.s * uc)
                .collect();
            if d.iter().all(Zero::is_zero) {
                continue;
            }
            if model.ns().pair(h, &d)?.is_zero() {
                canonical_sign(&mut d);
                let d_square = model.ns().square(&d)?;
                return Ok(Genericity::OnWall(Wall {
                    d,
                    d_square,
                    source: WallSource::TorsionFree,
                }));
            }
        }
        return Ok(Genericity::Generic);
    }

    match model.rho() {
        1 => Ok(Genericity::Generic),
        2 => {
            let bound = v_norm_bound(v, model)?;
            if !bound.is_positive() {
                return Ok(Genericity::Generic);
            }
            let (p, q) = widen(model, h)?;
            let walls = scan_transverse(model, &bound, &p, &q)?;
            for w in walls {
                if model.ns().pair(&w.d, h)?.is_zero() {
                    return Ok(Genericity::OnWall(w));
                }
            }
            Ok(Genericity::Generic)
        }
        rho => Ok(Genericity::Unsupported(format!(
            "genericity testing is implemented for Picard rank <= 2, got rank {rho}"
        ))),
    }
}

/// Do all walls of p·w crossing the segment also bound chambers of
/// m·w? A polarization generic for the larger vector is then generic
/// for every submultiple. For rank-zero w the wall data of p·w scales
/// into that of m·w by D ↦ (m/p)·D, so the inclusion is structural.
pub fn check_wall_inclusion(
    w: &MukaiVector,
    m: i64,
    p: i64,
    model: &SurfaceModel,
    seg: &AmpleSegment,
) -> Result<bool, WallsError> {
    if p < 1 || p > m {
        return Err(WallsError::MultiplierOutOfRange { p, m });
    }
    if w.r.is_zero() {
        return Ok(true);
    }
    let sub = enumerate_walls(&w.scale(&BigInt::from(p)), model, seg)?;
    let full = enumerate_walls(&w.scale(&BigInt::from(m)), model, seg)?;
    let full_set: BTreeSet<&Vec<BigInt>> = full.iter().map(|wall| &wall.d).collect();
    Ok(sub.iter().all(|wall| full_set.contains(&wall.d)))
}
