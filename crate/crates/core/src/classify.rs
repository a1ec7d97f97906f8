//! The case table for moduli of semistable sheaves with v = m·w, w² = 2k.
//!
//! Given only (surface kind, space, m, k) — everything else is a
//! deformation invariant — this module reports what the moduli space
//! M_v or the fiber K_v is: empty, a point, a surface, a symmetric
//! product, a smooth manifold, or a singular symplectic variety with or
//! without a crepant resolution; its dimension, second Betti number,
//! singularity and factoriality profile, the Beauville–Namikawa form
//! where one is defined, and the Fujiki constant where one is known.
//!
//! Dimensions follow 2m²k+2 for M_v and 2m²k−2 for K_v on k ≥ 1; the
//! k ≤ 0 degenerations (points, symmetric products of a surface) carry
//! their geometric dimensions instead.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_traits::One;

use crate::fujiki::{fujiki_kv, fujiki_mv, Space};
use crate::lattice::{invariants, standard_lattice, Lattice, StandardLattice};
use crate::mukai::{vperp_abstract, SurfaceKind, SurfaceModel};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassifyError {
    /// K_v is the Albanese fiber; only Abelian surfaces have one here.
    KvUndefinedForK3,
    NonPositiveM { got: i64 },
    ParameterOverflow,
    /// moduli_dim on an empty space.
    EmptyModuli,
    /// beauville_lattice on a class without a Beauville–Namikawa form.
    NoBeauvilleForm,
}

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifyError::KvUndefinedForK3 => {
                write!(f, "the fiber space K_v is only defined over Abelian surfaces")
            }
            ClassifyError::NonPositiveM { got } => write!(f, "m must be >= 1, got {got}"),
            ClassifyError::ParameterOverflow => {
                write!(f, "parameters too large for exact evaluation")
            }
            ClassifyError::EmptyModuli => write!(f, "the moduli space is empty"),
            ClassifyError::NoBeauvilleForm => {
                write!(f, "this class carries no Beauville-Namikawa form")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModuliClass {
    Empty,
    Point,
    K3Surface,
    AbelianSurfaceTimesDual,
    SymmetricProductNamikawa,
    IhsManifold,
    IsVarietyWithResolution,
    IsVarietyTerminalLocallyFactorial,
}

impl fmt::Display for ModuliClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ModuliClass::Empty => "empty",
            ModuliClass::Point => "point",
            ModuliClass::K3Surface => "k3_surface",
            ModuliClass::AbelianSurfaceTimesDual => "abelian_surface_times_dual",
            ModuliClass::SymmetricProductNamikawa => "symmetric_product_namikawa",
            ModuliClass::IhsManifold => "ihs_manifold",
            ModuliClass::IsVarietyWithResolution => "is_variety_with_resolution",
            ModuliClass::IsVarietyTerminalLocallyFactorial => {
                "is_variety_terminal_locally_factorial"
            }
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationClass {
    HilbN(i64),
    KumN(i64),
    Og10,
    Og6,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularities {
    Smooth,
    CanonicalNonTerminal,
    Terminal,
}

impl fmt::Display for Singularities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Singularities::Smooth => "smooth",
            Singularities::CanonicalNonTerminal => "canonical_non_terminal",
            Singularities::Terminal => "terminal",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factoriality {
    LocallyFactorial,
    TwoFactorialOrLocallyFactorial,
    TwoFactorial,
    NotApplicable,
}

impl fmt::Display for Factoriality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Factoriality::LocallyFactorial => "locally_factorial",
            Factoriality::TwoFactorialOrLocallyFactorial => "two_factorial_or_locally_factorial",
            Factoriality::TwoFactorial => "two_factorial",
            Factoriality::NotApplicable => "not_applicable",
        };
        f.write_str(s)
    }
}

/// Second Betti number, or an explicit admission that it is not pinned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum B2 {
    Known(i64),
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuliReport {
    pub kind: SurfaceKind,
    pub space: Space,
    pub m: i64,
    pub k: i64,
    pub class: ModuliClass,
    pub deformation_class: Option<DeformationClass>,
    pub dim: i64,
    pub b2: B2,
    pub singularities: Singularities,
    pub factoriality: Factoriality,
    pub beauville_gram: Option<Lattice>,
    pub fujiki: Option<BigInt>,
    pub warnings: Vec<String>,
}

fn dim_formula(m: i64, k: i64, space: Space) -> Result<i64, ClassifyError> {
    let n = (m as i128) * (m as i128) * (k as i128) * 2
        + match space {
            Space::Mv => 2,
            Space::Kv => -2,
        };
    i64::try_from(n).map_err(|_| ClassifyError::ParameterOverflow)
}

const FIBRATION_WARNING: &str = "this space fibers over the product of the surface and its dual \
and is not simply connected; the class tag mirrors the structure of the fiber";

pub fn classify(
    kind: SurfaceKind,
    space: Space,
    m: i64,
    k: i64,
) -> Result<ModuliReport, ClassifyError> {
    if m < 1 {
        return Err(ClassifyError::NonPositiveM { got: m });
    }
    if kind == SurfaceKind::K3 && space == Space::Kv {
        return Err(ClassifyError::KvUndefinedForK3);
    }

    let mut report = ModuliReport {
        kind,
        space,
        m,
        k,
        class: ModuliClass::Empty,
        deformation_class: None,
        dim: 0,
        b2: B2::Known(0),
        singularities: Singularities::Smooth,
        factoriality: Factoriality::NotApplicable,
        beauville_gram: None,
        fujiki: None,
        warnings: Vec::new(),
    };
    let smooth_lf = |r: &mut ModuliReport| {
        r.singularities = Singularities::Smooth;
        r.factoriality = Factoriality::LocallyFactorial;
    };

    match (kind, space) {
        (SurfaceKind::K3, Space::Mv) => match k {
            _ if k < -1 => {}
            -1 => {
                // w² = −2: a rigid sheaf, and every multiplicity gives the
                // same single point.
                report.class = ModuliClass::Point;
                smooth_lf(&mut report);
            }
            0 if m == 1 => {
                report.class = ModuliClass::K3Surface;
                report.dim = 2;
                report.b2 = B2::Known(22);
                smooth_lf(&mut report);
                report.fujiki = Some(BigInt::one());
            }
            0 => {
                // Sym^m of the k = 0 moduli surface.
                report.class = ModuliClass::SymmetricProductNamikawa;
                report.dim = 2 * m;
                report.b2 = B2::Known(22);
                report.singularities = Singularities::CanonicalNonTerminal;
            }
            _ if m == 1 => {
                report.class = ModuliClass::IhsManifold;
                report.deformation_class = Some(DeformationClass::HilbN(k + 1));
                report.dim = dim_formula(m, k, space)?;
                report.b2 = B2::Known(23);
                smooth_lf(&mut report);
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k >= 1"));
                report.fujiki = Some(fujiki_mv(m, k).expect("m,k >= 1").value);
                if k == 1 {
                    report.warnings.push(String::from(
                        "b2 = 23 is the Betti number of the 4-dimensional moduli space; \
rank-22 figures sometimes quoted for k = 1 refer to the surface lattice instead",
                    ));
                }
            }
            _ if (m, k) == (2, 1) => {
                report.class = ModuliClass::IsVarietyWithResolution;
                report.deformation_class = Some(DeformationClass::Og10);
                report.dim = 10;
                report.b2 = B2::Known(23);
                report.singularities = Singularities::CanonicalNonTerminal;
                report.factoriality = Factoriality::TwoFactorialOrLocallyFactorial;
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k = 1"));
                report.fujiki = Some(fujiki_mv(m, k).expect("m,k >= 1").value);
            }
            _ => {
                report.class = ModuliClass::IsVarietyTerminalLocallyFactorial;
                report.dim = dim_formula(m, k, space)?;
                report.b2 = B2::Known(23);
                report.singularities = Singularities::Terminal;
                report.factoriality = Factoriality::LocallyFactorial;
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k >= 1"));
                report.fujiki = Some(fujiki_mv(m, k).expect("m,k >= 1").value);
            }
        },
        (SurfaceKind::Abelian, Space::Kv) => match k {
            _ if k < 0 => {}
            0 if m == 1 => {
                report.class = ModuliClass::Point;
                smooth_lf(&mut report);
            }
            0 => {
                // Fiber of Sym^m over the dual surface: the singular model
                // of the Kummer series, second Betti number 6.
                report.class = ModuliClass::SymmetricProductNamikawa;
                report.dim = 2 * m - 2;
                report.b2 = B2::Known(6);
                report.singularities = Singularities::CanonicalNonTerminal;
            }
            1 if m == 1 => {
                report.class = ModuliClass::Point;
                smooth_lf(&mut report);
            }
            2 if m == 1 => {
                // The Kummer surface of S.
                report.class = ModuliClass::K3Surface;
                report.dim = 2;
                report.b2 = B2::Known(22);
                smooth_lf(&mut report);
                report.fujiki = Some(BigInt::one());
            }
            _ if m == 1 => {
                report.class = ModuliClass::IhsManifold;
                report.deformation_class = Some(DeformationClass::KumN(k - 1));
                report.dim = dim_formula(m, k, space)?;
                report.b2 = B2::Known(7);
                smooth_lf(&mut report);
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k >= 3"));
                report.fujiki = Some(fujiki_kv(m, k).expect("k >= 3").value);
            }
            _ if (m, k) == (2, 1) => {
                report.class = ModuliClass::IsVarietyWithResolution;
                report.deformation_class = Some(DeformationClass::Og6);
                report.dim = 6;
                report.b2 = B2::Known(7);
                report.singularities = Singularities::CanonicalNonTerminal;
                report.factoriality = Factoriality::TwoFactorial;
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k = 1"));
                report.fujiki = Some(fujiki_kv(m, k).expect("(2,1)").value);
            }
            _ => {
                report.class = ModuliClass::IsVarietyTerminalLocallyFactorial;
                report.dim = dim_formula(m, k, space)?;
                report.b2 = B2::Known(7);
                report.singularities = Singularities::Terminal;
                report.factoriality = Factoriality::LocallyFactorial;
                report.beauville_gram = Some(vperp_abstract(k, kind).expect("k >= 1"));
                report.fujiki = Some(fujiki_kv(m, k).expect("m >= 2").value);
            }
        },
        (SurfaceKind::Abelian, Space::Mv) => match k {
            _ if k < 0 => {}
            0 if m == 1 => {
                // M_w for w² = 0 is the dual surface itself.
                report.class = ModuliClass::SymmetricProductNamikawa;
                report.dim = 2;
                report.b2 = B2::Known(6);
                smooth_lf(&mut report);
            }
            0 => {
                report.class = ModuliClass::SymmetricProductNamikawa;
                report.dim = 2 * m;
                report.b2 = B2::Unknown;
                report.singularities = Singularities::CanonicalNonTerminal;
                report.warnings.push(String::from(
                    "second Betti number of this symmetric product is not pinned here",
                ));
            }
            _ if (m, k) == (1, 1) => {
                report.class = ModuliClass::AbelianSurfaceTimesDual;
                report.dim = 4;
                report.b2 = B2::Known(28);
                smooth_lf(&mut report);
            }
            _ if m == 1 => {
                report.class = ModuliClass::IhsManifold;
                report.dim = dim_formula(m, k, space)?;
                smooth_lf(&mut report);
                report.warnings.push(String::from(FIBRATION_WARNING));
                if k == 2 {
                    report.b2 = B2::Unknown;
                    report.warnings.push(String::from(
                        "second Betti number left unknown: the fiber is a K3 surface, so \
the rank-35 count for the generic fibers does not apply",
                    ));
                } else {
                    report.b2 = B2::Known(35);
                }
            }
            _ if (m, k) == (2, 1) => {
                report.class = ModuliClass::IsVarietyWithResolution;
                report.dim = 10;
                report.b2 = B2::Known(35);
                report.singularities = Singularities::CanonicalNonTerminal;
                report.factoriality = Factoriality::TwoFactorial;
                report.warnings.push(String::from(FIBRATION_WARNING));
            }
            _ => {
                report.class = ModuliClass::IsVarietyTerminalLocallyFactorial;
                report.dim = dim_formula(m, k, space)?;
                report.b2 = B2::Known(35);
                report.singularities = Singularities::Terminal;
                report.factoriality = Factoriality::LocallyFactorial;
                report.warnings.push(String::from(FIBRATION_WARNING));
            }
        },
        (SurfaceKind::K3, Space::Kv) => unreachable!("rejected above"),
    }

    Ok(report)
}

/// classify, taking the kind from a surface model: the outcome depends on
/// nothing else in the model.
pub fn classify_for(
    model: &SurfaceModel,
    space: Space,
    m: i64,
    k: i64,
) -> Result<ModuliReport, ClassifyError> {
    classify(model.kind(), space, m, k)
}

/// Dimension of the (nonempty) moduli space: 2m²k ± 2 on k ≥ 1, the
/// geometric dimension of the degenerate small-k cases.
pub fn moduli_dim(
    kind: SurfaceKind,
    space: Space,
    m: i64,
    k: i64,
) -> Result<i64, ClassifyError> {
    let report = classify(kind, space, m, k)?;
    if report.class == ModuliClass::Empty {
        return Err(ClassifyError::EmptyModuli);
    }
    Ok(report.dim)
}

/// The Beauville–Namikawa form of the report's space. For the surface
/// cases this is the K3 intersection lattice itself; for the honest
/// (m,k)-triple cases it is v⊥ ≅ H²(S) ⊕ [−2k], cross-checked against
/// the Hilbert-scheme and Kummer presentations H² ⊕ Z·δ when the report
/// names one of those deformation classes.
pub fn beauville_lattice(report: &ModuliReport) -> Result<Lattice, ClassifyError> {
    if report.class == ModuliClass::K3Surface {
        return Ok(standard_lattice(StandardLattice::K3).expect("fixed"));
    }
    let is_style = matches!(
        report.class,
        ModuliClass::IhsManifold
            | ModuliClass::IsVarietyWithResolution
            | ModuliClass::IsVarietyTerminalLocallyFactorial
    );
    let guarded_space = matches!(
        (report.kind, report.space),
        (SurfaceKind::K3, Space::Mv) | (SurfaceKind::Abelian, Space::Kv)
    );
    if !is_style || !guarded_space {
        return Err(ClassifyError::NoBeauvilleForm);
    }
    let l = vperp_abstract(report.k, report.kind).expect("classified cells have k >= 1");
    match report.deformation_class {
        Some(DeformationClass::HilbN(n)) => {
            // H²(S) ⊕ Z·δ with δ² = 2 − 2n.
            let delta = Lattice::from_rows(alloc::vec![alloc::vec![BigInt::from(2 - 2 * n)]])
                .expect("1x1");
            let presented = report.kind.h2_lattice().direct_sum(&delta);
            assert_eq!(
                invariants(&l),
                invariants(&presented),
                "Hilbert-scheme presentation disagrees with the complement"
            );
        }
        Some(DeformationClass::KumN(n)) => {
            // Here δ² = −2(n+1): the half-sum of the exceptional classes.
            let delta = Lattice::from_rows(alloc::vec![alloc::vec![BigInt::from(-2 * (n + 1))]])
                .expect("1x1");
            let presented = report.kind.h2_lattice().direct_sum(&delta);
            assert_eq!(
                invariants(&l),
                invariants(&presented),
                "Kummer presentation disagrees with the complement"
            );
        }
        _ => {}
    }
    Ok(l)
}
