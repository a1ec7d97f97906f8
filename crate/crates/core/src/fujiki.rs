//! Fujiki constants, covering degrees, and stratum dimension tables.
//!
//! For an irreducible holomorphic symplectic manifold X of dimension 2n
//! the Fujiki relation ∫_X α^{2n} = C_X · q(α)ⁿ pins a positive rational
//! constant C_X; for the moduli spaces handled here it is an integer with
//! a closed factorial form depending only on m²k:
//!
//!   C(M_v) = (2m²k+2)! / ((m²k+1)!·2^{m²k+1})
//!   C(K_v) = (2m²k−2)!·m²k / ((m²k−1)!·2^{m²k−1})
//!
//! Both divisions are exact; this module performs them over
//! arbitrary-precision integers and asserts the remainder away rather
//! than assuming it. The same numbers arise from the punctual Hilbert
//! scheme and generalized Kummer series of the matching dimension, which
//! the tests use as an independent cross-check.

use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::mukai::SurfaceKind;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FujikiError {
    NonPositiveParameter { name: &'static str, got: i64 },
    /// v = m·w has no proper submultiples when m < 2, so there is no
    /// boundary table to tabulate.
    NoProperSubmultiples { m: i64 },
    /// (m,k) = (1,1): the fiber K_v is a single point.
    KvIsPoint,
    /// (m,k) = (1,2): the fiber is a K3 surface, where the intersection
    /// form itself is the invariant and the constant is 1; the factorial
    /// formula would give `formula_value` instead, so the operation
    /// refuses and reports both numbers.
    KvIsK3Surface {
        formula_value: BigInt,
        surface_constant: BigInt,
    },
    /// Intermediate arithmetic exceeded the machine-integer range used
    /// for parameters.
    ParameterOverflow,
}

impl fmt::Display for FujikiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FujikiError::NonPositiveParameter { name, got } => {
                write!(f, "{name} must be >= 1, got {got}")
            }
            FujikiError::NoProperSubmultiples { m } => {
                write!(f, "the boundary table needs m >= 2, got {m}; v = m*w has no proper submultiples")
            }
            FujikiError::KvIsPoint => write!(f, "K_v is a point for (m,k) = (1,1); no Fujiki constant"),
            FujikiError::KvIsK3Surface {
                formula_value,
                surface_constant,
            } => write!(
                f,
                "K_v is a K3 surface for (m,k) = (1,2): its constant is {surface_constant} by the intersection form, not the formula value {formula_value}"
            ),
            FujikiError::ParameterOverflow => write!(f, "parameters too large for exact evaluation"),
        }
    }
}

/// Which space a constant belongs to: the moduli space M_v or the
/// Albanese fiber K_v.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    Mv,
    Kv,
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Mv => f.write_str("mv"),
            Space::Kv => f.write_str("kv"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FujikiValue {
    pub value: BigInt,
    pub space: Space,
    pub m: i64,
    pub k: i64,
}

fn require_positive(name: &'static str, x: i64) -> Result<(), FujikiError> {
    if x < 1 {
        Err(FujikiError::NonPositiveParameter { name, got: x })
    } else {
        Ok(())
    }
}

/// m²k as a machine integer, the only quantity whose overflow could slip
/// through silently.
fn msqk(m: i64, k: i64) -> Result<i64, FujikiError> {
    m.checked_mul(m)
        .and_then(|m2| m2.checked_mul(k))
        .ok_or(FujikiError::ParameterOverflow)
}

/// Product of lo..=hi, split recursively so the factors being multiplied
/// stay balanced in size; a left-fold grinds one huge operand against
/// single limbs and dominates the runtime for the larger parameters.
fn range_product(lo: u64, hi: u64) -> BigInt {
    if lo > hi {
        return BigInt::one();
    }
    if hi - lo < 16 {
        let mut acc = BigInt::from(lo);
        for i in lo + 1..=hi {
            acc *= i;
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

fn factorial(n: u64) -> BigInt {
    range_product(2, n)
}

fn pow2(n: u64) -> BigInt {
    BigInt::one() << n
}

/// Exact quotient; the caller vouches for divisibility and the division
/// is still checked.
fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    let (q, r) = num.div_rem(&den);
    assert!(r.is_zero(), "factorial quotient left a remainder");
    q
}

/// C(M_v) = (2n+2)!/((n+1)!·2^{n+1}) with n = m²k.
pub fn fujiki_mv(m: i64, k: i64) -> Result<FujikiValue, FujikiError> {
    require_positive("m", m)?;
    require_positive("k", k)?;
    let n = msqk(m, k)? as u64;
    let num = factorial(2 * n + 2);
    let den = factorial(n + 1) * pow2(n + 1);
    Ok(FujikiValue {
        value: exact_div(num, den),
        space: Space::Mv,
        m,
        k,
    })
}

/// C(K_v) = (2n−2)!·n/((n−1)!·2^{n−1}) with n = m²k. Refuses the two
/// degenerate fibers: a point at (1,1) and a K3 surface at (1,2).
pub fn fujiki_kv(m: i64, k: i64) -> Result<FujikiValue, FujikiError> {
    require_positive("m", m)?;
    require_positive("k", k)?;
    if (m, k) == (1, 1) {
        return Err(FujikiError::KvIsPoint);
    }
    let n = msqk(m, k)? as u64;
    let value = kv_formula(n);
    if (m, k) == (1, 2) {
        return Err(FujikiError::KvIsK3Surface {
            formula_value: value,
            surface_constant: BigInt::one(),
        });
    }
    Ok(FujikiValue {
        value,
        space: Space::Kv,
        m,
        k,
    })
}

fn kv_formula(n: u64) -> BigInt {
    let num = factorial(2 * n - 2) * n;
    let den = factorial(n - 1) * pow2(n - 1);
    exact_div(num, den)
}

/// The two classical deformation series, keyed by half-dimension n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnownClass {
    /// Hilbert scheme of n points on a K3: C = (2n)!/(n!·2ⁿ).
    HilbN(i64),
    /// Generalized Kummer of dimension 2n: C = (2n)!·(n+1)/(n!·2ⁿ).
    KumN(i64),
}

pub fn fujiki_known(class: KnownClass) -> Result<BigInt, FujikiError> {
    let (n, kummer) = match class {
        KnownClass::HilbN(n) => (n, false),
        KnownClass::KumN(n) => (n, true),
    };
    require_positive("n", n)?;
    let n = n as u64;
    let base = exact_div(factorial(2 * n), factorial(n) * pow2(n));
    Ok(if kummer { base * (n + 1) } else { base })
}

/// g = km² + 1, the genus parameter of the degree computations.
fn genus(m: i64, k: i64) -> Result<i64, FujikiError> {
    msqk(m, k)?
        .checked_add(1)
        .ok_or(FujikiError::ParameterOverflow)
}

/// Degree of the étale covering attached to (m,k): (g−1)^{2g} over a K3,
/// (g−1)^{2g−4} over an Abelian surface, with g = km²+1. The exponents
/// differ by 4 because the Abelian case quotients a (g−2)-dimensional
/// Abelian kernel and its dual.
pub fn psi_degree(m: i64, k: i64, kind: SurfaceKind) -> Result<BigInt, FujikiError> {
    require_positive("m", m)?;
    require_positive("k", k)?;
    let g = genus(m, k)?;
    let base = BigInt::from(g - 1);
    let exp = match kind {
        SurfaceKind::K3 => 2 * (g as i128),
        SurfaceKind::Abelian => 2 * (g as i128) - 4,
    };
    let exp = u64::try_from(exp).map_err(|_| FujikiError::ParameterOverflow)?;
    Ok(Pow::pow(&base, exp))
}

/// The factor km² relating a determinant class to its pullback through
/// the degree-(g−1)^… covering; equal to g−1 by construction.
pub fn pullback_scaling(m: i64, k: i64) -> Result<BigInt, FujikiError> {
    require_positive("m", m)?;
    require_positive("k", k)?;
    let scale = msqk(m, k)?;
    debug_assert_eq!(scale, genus(m, k)? - 1);
    Ok(BigInt::from(scale))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StratumCase {
    V1,
    V2,
    V3,
}

impl fmt::Display for StratumCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumCase::V1 => f.write_str("v1"),
            StratumCase::V2 => f.write_str("v2"),
            StratumCase::V3 => f.write_str("v3"),
        }
    }
}

/// One stratum estimate. For V3 the formula is only an upper bound on the
/// dimension, so `upper_bound` is set and `codim` is a lower bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRow {
    pub i: i64,
    pub case: StratumCase,
    pub dim: i64,
    pub upper_bound: bool,
    pub codim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTable {
    pub m: i64,
    pub k: i64,
    /// dim M_v = 2m²k + 2.
    pub dim_moduli: i64,
    pub rows: Vec<StratumRow>,
}

impl StratumTable {
    pub fn min_codim(&self) -> Option<i64> {
        self.rows.iter().map(|r| r.codim).min()
    }
}

/// Dimensions of the loci of S-equivalence classes with a length-2
/// subobject pattern indexed by i in 1..m−1, in the three configurations
/// the boundary analysis distinguishes. The codimension-3 conclusion
/// holds away from (m,k) = (2,1); the table itself is produced for every
/// m ≥ 2 so the excluded case can be inspected.
pub fn strata_dimensions(m: i64, k: i64) -> Result<StratumTable, FujikiError> {
    if m < 2 {
        return Err(FujikiError::NoProperSubmultiples { m });
    }
    require_positive("k", k)?;

    let ck = |x: Option<i64>| x.ok_or(FujikiError::ParameterOverflow);
    let dim_moduli = ck(msqk(m, k)?.checked_mul(2).and_then(|x| x.checked_add(2)))?;

    let mut rows = Vec::new();
    for i in 1..m {
        let j = m - i; // the complementary index m−i
        let a = ck(k.checked_mul(j).and_then(|x| x.checked_mul(j)).and_then(|x| x.checked_mul(2)))?;
        let b = ck(k.checked_mul(i).and_then(|x| x.checked_mul(i)).and_then(|x| x.checked_mul(2)))?;
        let cross = ck(k.checked_mul(i).and_then(|x| x.checked_mul(j)).and_then(|x| x.checked_mul(2)))?;

        // dim(V1) = 2k(m−i)² + 2 + 2ki² + 2: two factors moving freely.
        let v1 = ck(a.checked_add(b).and_then(|x| x.checked_add(4)))?;
        // dim(V2) = dim(V1) + 2k(m−i)i − 1: one extension parameter family.
        let v2 = ck(v1.checked_add(cross).and_then(|x| x.checked_sub(1)))?;
        // dim(V3) ≤ 2k(m−i)² + 2 + 2ki(m−i) + 2(m−i) − 1.
        let v3 = ck(a
            .checked_add(cross)
            .and_then(|x| x.checked_add(2 * j))
            .and_then(|x| x.checked_add(1)))?;

        for (case, dim, upper) in [
            (StratumCase::V1, v1, false),
            (StratumCase::V2, v2, false),
            (StratumCase::V3, v3, true),
        ] {
            rows.push(StratumRow {
                i,
                case,
                dim,
                upper_bound: upper,
                codim: dim_moduli - dim,
            });
        }
    }

    Ok(StratumTable {
        m,
        k,
        dim_moduli,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: (2N)!/(N!·2^N) is the odd double factorial
    // (2N−1)!! = 1·3·5···(2N−1), so
    //   C(M_v) = (2n+1)!!          with n = m²k,
    //   C(K_v) = n·(2n−3)!!,
    //   HilbN(n) = (2n−1)!!, KumN(n) = (n+1)·(2n−1)!!.
    fn odd_double_factorial(top: i64) -> BigInt {
        let mut acc = BigInt::one();
        let mut j = 1i64;
        while j <= top {
            acc *= j;
            j += 2;
        }
        acc
    }

    #[test]
    fn fixed_values_for_mv() {
        assert_eq!(fujiki_mv(2, 1).unwrap().value, BigInt::from(945));
        assert_eq!(fujiki_mv(1, 1).unwrap().value, BigInt::from(3));
        let fv = fujiki_mv(3, 2).unwrap();
        assert_eq!((fv.space, fv.m, fv.k), (Space::Mv, 3, 2));
    }

    #[test]
    fn fixed_values_for_kv() {
        assert_eq!(fujiki_kv(2, 1).unwrap().value, BigInt::from(60));
        assert_eq!(fujiki_kv(1, 3).unwrap().value, BigInt::from(9));
        assert_eq!(fujiki_kv(1, 3).unwrap().space, Space::Kv);
    }

    #[test]
    fn degenerate_fibers_are_refused() {
        assert_eq!(fujiki_kv(1, 1), Err(FujikiError::KvIsPoint));
        assert_eq!(
            fujiki_kv(1, 2),
            Err(FujikiError::KvIsK3Surface {
                formula_value: BigInt::from(2),
                surface_constant: BigInt::one(),
            })
        );
        assert!(matches!(
            fujiki_mv(0, 1),
            Err(FujikiError::NonPositiveParameter { name: "m", .. })
        ));
        assert!(matches!(
            fujiki_mv(1, -2),
            Err(FujikiError::NonPositiveParameter { name: "k", .. })
        ));
        assert!(matches!(
            fujiki_kv(1, 0),
            Err(FujikiError::NonPositiveParameter { name: "k", .. })
        ));
    }

    #[test]
    fn double_factorial_oracle_agrees() {
        for m in 1..=8i64 {
            for k in 1..=8i64 {
                let n = m * m * k;
                assert_eq!(
                    fujiki_mv(m, k).unwrap().value,
                    odd_double_factorial(2 * n + 1),
                    "M_v constant at ({m},{k})"
                );
                if (m, k) != (1, 1) && (m, k) != (1, 2) {
                    assert_eq!(
                        fujiki_kv(m, k).unwrap().value,
                        odd_double_factorial(2 * n - 3) * n,
                        "K_v constant at ({m},{k})"
                    );
                }
            }
        }
    }

    #[test]
    fn rank_one_series_matches_section_formula() {
        // (1,k): C = (2k+2)!/((k+1)!·2^{k+1}), evaluated independently.
        for k in 1..=10i64 {
            let ku = k as u64;
            let expected = {
                let num = factorial(2 * ku + 2);
                let den = factorial(ku + 1) * pow2(ku + 1);
                exact_div(num, den)
            };
            assert_eq!(fujiki_mv(1, k).unwrap().value, expected);
        }
    }

    #[test]
    fn known_series_fixed_values() {
        assert_eq!(fujiki_known(KnownClass::HilbN(1)).unwrap(), BigInt::one());
        assert_eq!(
            fujiki_known(KnownClass::HilbN(5)).unwrap(),
            fujiki_mv(1, 4).unwrap().value
        );
        assert_eq!(fujiki_known(KnownClass::KumN(2)).unwrap(), BigInt::from(9));
        assert!(matches!(
            fujiki_known(KnownClass::HilbN(0)),
            Err(FujikiError::NonPositiveParameter { .. })
        ));
        assert!(matches!(
            fujiki_known(KnownClass::KumN(-1)),
            Err(FujikiError::NonPositiveParameter { .. })
        ));
    }

    #[test]
    fn constants_depend_only_on_dimension() {
        // M_v matches Hilb^{m²k+1}, K_v matches Kum^{m²k−1}; at (1,2) the
        // refusal still carries the formula value, which must equal the
        // Kummer series at n = 1.
        for m in 1..=6i64 {
            for k in 1..=6i64 {
                let n = m * m * k;
                assert_eq!(
                    fujiki_mv(m, k).unwrap().value,
                    fujiki_known(KnownClass::HilbN(n + 1)).unwrap()
                );
                if (m, k) == (1, 1) {
                    continue;
                }
                let kum = fujiki_known(KnownClass::KumN(n - 1)).unwrap();
                match fujiki_kv(m, k) {
                    Ok(fv) => assert_eq!(fv.value, kum),
                    Err(FujikiError::KvIsK3Surface { formula_value, .. }) => {
                        assert_eq!(formula_value, kum)
                    }
                    Err(e) => panic!("unexpected refusal at ({m},{k}): {e}"),
                }
            }
        }
    }

    #[test]
    fn mv_constant_is_strictly_monotone() {
        for k in 1..=4i64 {
            for m in 1..=4i64 {
                let here = fujiki_mv(m, k).unwrap().value;
                assert!(fujiki_mv(m + 1, k).unwrap().value > here);
                assert!(fujiki_mv(m, k + 1).unwrap().value > here);
            }
        }
    }

    #[test]
    fn covering_degrees() {
        assert_eq!(psi_degree(1, 1, SurfaceKind::K3).unwrap(), BigInt::one());
        assert_eq!(
            psi_degree(2, 1, SurfaceKind::K3).unwrap(),
            BigInt::from(1048576)
        );
        assert_eq!(
            psi_degree(2, 1, SurfaceKind::Abelian).unwrap(),
            BigInt::from(4096)
        );
        // The two exponents differ by exactly 4.
        for m in 1..=5i64 {
            for k in 1..=5i64 {
                let g1 = BigInt::from(k * m * m);
                let ratio = Pow::pow(&g1, 4u64);
                assert_eq!(
                    psi_degree(m, k, SurfaceKind::K3).unwrap(),
                    psi_degree(m, k, SurfaceKind::Abelian).unwrap() * ratio
                );
            }
        }
    }

    #[test]
    fn pullback_scaling_values() {
        assert_eq!(pullback_scaling(2, 1).unwrap(), BigInt::from(4));
        assert_eq!(pullback_scaling(1, 1).unwrap(), BigInt::one());
        assert_eq!(pullback_scaling(3, 2).unwrap(), BigInt::from(18));
        assert!(pullback_scaling(0, 1).is_err());
    }

    #[test]
    fn strata_fixed_rows() {
        let t = strata_dimensions(2, 2).unwrap();
        assert_eq!(t.dim_moduli, 18);
        let v1 = t
            .rows
            .iter()
            .find(|r| r.i == 1 && r.case == StratumCase::V1)
            .unwrap();
        assert_eq!(v1.dim, 12);
        assert_eq!(v1.codim, 6);
        assert!(!v1.upper_bound);

        let t = strata_dimensions(3, 1).unwrap();
        assert_eq!(t.dim_moduli, 20);
        let v2 = t
            .rows
            .iter()
            .find(|r| r.i == 1 && r.case == StratumCase::V2)
            .unwrap();
        assert_eq!(v2.dim, 17);
        assert_eq!(v2.codim, 3);

        // i runs over 1..m−1 with three configurations each.
        assert_eq!(t.rows.len(), 6);
        assert!(t.rows.iter().all(|r| r.i == 1 || r.i == 2));
    }

    #[test]
    fn excluded_small_case_is_tabulated_but_shallow() {
        let t = strata_dimensions(2, 1).unwrap();
        assert_eq!(t.dim_moduli, 10);
        let dims: Vec<i64> = t.rows.iter().map(|r| r.dim).collect();
        assert_eq!(dims, [8, 9, 7]);
        assert_eq!(t.min_codim(), Some(1));
        let v3 = t.rows.iter().find(|r| r.case == StratumCase::V3).unwrap();
        assert!(v3.upper_bound);
    }

    #[test]
    fn strata_are_deep_outside_the_excluded_case() {
        for m in 2..=6i64 {
            for k in 1..=5i64 {
                if (m, k) == (2, 1) {
                    continue;
                }
                let t = strata_dimensions(m, k).unwrap();
                assert_eq!(t.rows.len(), 3 * (m as usize - 1));
                assert!(
                    t.min_codim().unwrap() >= 3,
                    "codim < 3 at ({m},{k}): {:?}",
                    t.rows
                );
            }
        }
    }

    #[test]
    fn strata_input_validation() {
        assert!(matches!(
            strata_dimensions(1, 1),
            Err(FujikiError::NoProperSubmultiples { m: 1 })
        ));
        assert!(strata_dimensions(2, 0).is_err());
    }
}
