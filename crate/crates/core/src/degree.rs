//! Degree functionals on multi-indices and the index sets they truncate to.
//!
//! A polynomial has degree at most `n` in a family when every monomial it
//! contains satisfies `degree(k, family) ≤ n`. The boundary `degree = n` is
//! always included. All three sets are downward closed and nested:
//!
//! ```text
//! Total(n) ⊆ Euclidean(n) ⊆ Max(n)
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Upper bound on the number of indices [`enumerate_index_set`] materializes.
pub const DEFAULT_INDEX_CAP: usize = 10_000_000;

/// Largest `⌊n²⌋` the Euclidean lattice count will scan.
pub const EUCLIDEAN_COUNT_LIMIT: u64 = 4_000_000;

// n² stays an exactly representable integer below this bound
const MAX_EUCLIDEAN_BOUND: f64 = (1u64 << 26) as f64;

/// Exponent vector `(k_1, ..., k_s)` of a monomial `x_1^{k_1} ⋯ x_s^{k_s}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("multi-index needs at least one entry"));
        }
        Ok(MultiIndex(entries))
    }

    pub fn zeros(dims: usize) -> Result<Self> {
        Self::new(vec![0; dims])
    }

    pub fn dims(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn l1(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    pub fn sum_squares(&self) -> u64 {
        self.0.iter().map(|&k| (k as u64) * (k as u64)).sum()
    }

    pub fn l2(&self) -> f64 {
        (self.sum_squares() as f64).sqrt()
    }

    pub fn linf(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0) as u64
    }

    pub fn degree(&self, family: DegreeFamily) -> f64 {
        degree(self, family)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// Which norm of the exponent vector counts as the degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeFamily {
    Total,
    Euclidean,
    Max,
}

impl DegreeFamily {
    /// Families in the order used for interleaved output.
    pub const ALL: [DegreeFamily; 3] = [DegreeFamily::Total, DegreeFamily::Euclidean, DegreeFamily::Max];

    pub fn name(self) -> &'static str {
        match self {
            DegreeFamily::Total => "total",
            DegreeFamily::Euclidean => "euclidean",
            DegreeFamily::Max => "max",
        }
    }
}

impl fmt::Display for DegreeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DegreeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "total" | "t" => Ok(DegreeFamily::Total),
            "euclidean" | "e" => Ok(DegreeFamily::Euclidean),
            "max" | "maximal" | "m" => Ok(DegreeFamily::Max),
            other => Err(Error::invalid(format!("unknown degree family '{other}'"))),
        }
    }
}

/// `‖k‖_1`, `‖k‖_2` or `‖k‖_∞`. Exact for Total and Max.
pub fn degree(k: &MultiIndex, family: DegreeFamily) -> f64 {
    match family {
        DegreeFamily::Total => k.l1() as f64,
        DegreeFamily::Euclidean => k.l2(),
        DegreeFamily::Max => k.linf() as f64,
    }
}

/// Integer budget equivalent to `degree(k, family) ≤ n`.
///
/// For Total and Max the degree is an integer, so the bound is `⌊n⌋`. For
/// Euclidean the comparison `Σ k_j² ≤ n²` has an integer left side, so it is
/// equivalent to `Σ k_j² ≤ ⌊n²⌋`; the floor is computed exactly from the
/// rounding error of `n * n`, which keeps boundary indices with `‖k‖_2 = n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    family: DegreeFamily,
    budget: u64,
}

impl DegreeBound {
    pub fn new(n: f64, family: DegreeFamily) -> Result<Self> {
        check_bound(n)?;
        let budget = match family {
            DegreeFamily::Total | DegreeFamily::Max => {
                if n >= u32::MAX as f64 {
                    return Err(Error::invalid(format!("degree bound {n} too large")));
                }
                n.floor() as u64
            }
            DegreeFamily::Euclidean => floor_square(n)?,
        };
        Ok(DegreeBound { family, budget })
    }

    pub fn family(&self) -> DegreeFamily {
        self.family
    }

    /// `⌊n⌋` for Total and Max, `⌊n²⌋` for Euclidean.
    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Largest single entry any member can have.
    pub fn max_entry(&self) -> u64 {
        match self.family {
            DegreeFamily::Euclidean => isqrt(self.budget),
            _ => self.budget,
        }
    }

    pub fn contains(&self, k: &[usize]) -> bool {
        match self.family {
            DegreeFamily::Total => k.iter().map(|&v| v as u64).sum::<u64>() <= self.budget,
            DegreeFamily::Euclidean => k.iter().map(|&v| (v as u64) * (v as u64)).sum::<u64>() <= self.budget,
            DegreeFamily::Max => k.iter().all(|&v| (v as u64) <= self.budget),
        }
    }

    // what a single entry of value `v` consumes from the budget
    fn cost(&self, v: u64) -> u64 {
        match self.family {
            DegreeFamily::Total => v,
            DegreeFamily::Euclidean => v * v,
            DegreeFamily::Max => 0,
        }
    }
}

fn check_bound(n: f64) -> Result<()> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::invalid(format!("degree bound must be finite and >= 0, got {n}")));
    }
    Ok(())
}

fn check_dims(s: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    Ok(())
}

/// Exact `⌊n²⌋` for `0 ≤ n < 2^26`.
fn floor_square(n: f64) -> Result<u64> {
    if n >= MAX_EUCLIDEAN_BOUND {
        return Err(Error::invalid(format!("Euclidean degree bound {n} too large")));
    }
    let sq = n * n;
    // n² = sq + err exactly
    let err = n.mul_add(n, -sq);
    let fl = sq.floor();
    if sq == fl && err < 0.0 {
        Ok(fl as u64 - 1)
    } else {
        Ok(fl as u64)
    }
}

fn isqrt(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}

/// `{k ∈ Z_{≥0}^s : degree(k, family) ≤ n}` in lexicographic order.
pub fn enumerate_index_set(s: usize, n: f64, family: DegreeFamily) -> Result<Vec<MultiIndex>> {
    enumerate_index_set_with_cap(s, n, family, DEFAULT_INDEX_CAP)
}

/// As [`enumerate_index_set`], failing once more than `cap` indices are produced.
pub fn enumerate_index_set_with_cap(s: usize, n: f64, family: DegreeFamily, cap: usize) -> Result<Vec<MultiIndex>> {
    check_dims(s)?;
    let bound = DegreeBound::new(n, family)?;
    let mut out = Vec::new();
    let mut current = vec![0usize; s];
    walk(&bound, 0, bound.budget(), &mut current, &mut out, cap)?;
    Ok(out)
}

fn walk(
    bound: &DegreeBound,
    axis: usize,
    remaining: u64,
    current: &mut [usize],
    out: &mut Vec<MultiIndex>,
    cap: usize,
) -> Result<()> {
    if axis == current.len() {
        if out.len() == cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(MultiIndex(current.to_vec()));
        return Ok(());
    }
    let mut v = 0u64;
    while v <= bound.max_entry() && bound.cost(v) <= remaining {
        current[axis] = v as usize;
        walk(bound, axis + 1, remaining - bound.cost(v), current, out, cap)?;
        v += 1;
    }
    current[axis] = 0;
    Ok(())
}

/// Cardinality of the index set, without materializing it.
///
/// Total uses `binomial(⌊n⌋ + s, s)`, Max uses `(⌊n⌋ + 1)^s`, Euclidean
/// counts lattice points in the ball by dynamic programming over the exact
/// sum of squares.
pub fn count_index_set(s: usize, n: f64, family: DegreeFamily) -> Result<u64> {
    check_dims(s)?;
    let bound = DegreeBound::new(n, family)?;
    let b = bound.budget();
    match family {
        DegreeFamily::Total => binomial(b + s as u64, s as u64),
        DegreeFamily::Max => {
            let s32 = u32::try_from(s).map_err(|_| Error::Overflow { what: "max-degree set" })?;
            (b + 1)
                .checked_pow(s32)
                .ok_or(Error::Overflow { what: "max-degree set" })
        }
        DegreeFamily::Euclidean => count_ball(s, b),
    }
}

fn binomial(n: u64, k: u64) -> Result<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) / i stays integral at every step
        acc = acc.checked_mul((n - k + i) as u128).ok_or(Error::Overflow {
            what: "total-degree set",
        })? / i as u128;
    }
    u64::try_from(acc).map_err(|_| Error::Overflow {
        what: "total-degree set",
    })
}

fn count_ball(s: usize, m: u64) -> Result<u64> {
    if m > EUCLIDEAN_COUNT_LIMIT {
        return Err(Error::invalid(format!(
            "Euclidean lattice count limited to n² <= {EUCLIDEAN_COUNT_LIMIT}"
        )));
    }
    let m = m as usize;
    let overflow = || Error::Overflow {
        what: "Euclidean-degree set",
    };
    // ways[t] = number of d-vectors with Σ k_j² = t
    let mut ways = vec![0u64; m + 1];
    ways[0] = 1;
    for _ in 0..s {
        let mut next = vec![0u64; m + 1];
        for (t, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u64;
            let mut v = 0usize;
            while v * v <= t {
                acc = acc.checked_add(ways[t - v * v]).ok_or_else(overflow)?;
                v += 1;
            }
            *slot = acc;
        }
        ways = next;
    }
    ways.iter()
        .try_fold(0u64, |acc, &w| acc.checked_add(w).ok_or_else(overflow))
}

fn ln_factorial(m: u64) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

// ln Γ(s/2 + 1)
fn ln_gamma_half_plus_one(s: u64) -> f64 {
    if s.is_multiple_of(2) {
        ln_factorial(s / 2)
    } else {
        // Γ(m + 1/2) = √π ∏_{i<m} (i + 1/2), m = (s+1)/2
        let m = s.div_ceil(2);
        0.5 * PI.ln() + (0..m).map(|i| (i as f64 + 0.5).ln()).sum::<f64>()
    }
}

/// Asymptotic ratio `#family / #Euclidean` of index-set sizes at equal resolution.
///
/// Uses volume ratios of the truncation regions in the positive orthant. For
/// Total the comparison degree is `√s·n` (so the simplex contains the
/// Euclidean ball), for Max it is `n` (the cube contains the ball):
///
/// ```text
/// Total:  s^{s/2} Γ(s/2+1) 2^s / (s! π^{s/2})
/// Max:    Γ(s/2+1) 2^s / π^{s/2}
/// ```
pub fn dof_ratio(s: usize, family: DegreeFamily) -> Result<f64> {
    check_dims(s)?;
    let sf = s as f64;
    let s64 = s as u64;
    let common = ln_gamma_half_plus_one(s64) + sf * 2f64.ln() - 0.5 * sf * PI.ln();
    let ln_ratio = match family {
        DegreeFamily::Total => common + 0.5 * sf * sf.ln() - ln_factorial(s64),
        DegreeFamily::Max => common,
        DegreeFamily::Euclidean => {
            return Err(Error::invalid("dof_ratio is relative to Euclidean degree"));
        }
    };
    Ok(ln_ratio.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mi(v: &[usize]) -> MultiIndex {
        MultiIndex::new(v.to_vec()).unwrap()
    }

    // every k with entries ≤ ⌊n⌋, filtered by the floating-point norm
    fn brute_force(s: usize, n: f64, family: DegreeFamily) -> Vec<MultiIndex> {
        let top = n.floor() as usize;
        let mut out = Vec::new();
        let total = (top + 1).pow(s as u32);
        for code in 0..total {
            let mut k = vec![0; s];
            let mut c = code;
            for slot in k.iter_mut().rev() {
                *slot = c % (top + 1);
                c /= top + 1;
            }
            let norm = match family {
                DegreeFamily::Total => k.iter().sum::<usize>() as f64,
                DegreeFamily::Euclidean => (k.iter().map(|v| v * v).sum::<usize>() as f64).sqrt(),
                DegreeFamily::Max => *k.iter().max().unwrap() as f64,
            };
            if norm <= n + 1e-12 {
                out.push(mi(&k));
            }
        }
        out
    }

    #[test]
    fn degree_examples() {
        let k = mi(&[3, 4]);
        assert_eq!(degree(&k, DegreeFamily::Total), 7.0);
        assert_eq!(degree(&k, DegreeFamily::Euclidean), 5.0);
        assert_eq!(degree(&k, DegreeFamily::Max), 4.0);
        assert_relative_eq!(degree(&mi(&[1, 1]), DegreeFamily::Euclidean), 2f64.sqrt());
    }

    #[test]
    fn empty_multi_index_rejected() {
        assert!(MultiIndex::new(vec![]).is_err());
    }

    #[test]
    fn enumerate_examples() {
        let got = enumerate_index_set(2, 1.0, DegreeFamily::Total).unwrap();
        assert_eq!(got, vec![mi(&[0, 0]), mi(&[0, 1]), mi(&[1, 0])]);

        let got = enumerate_index_set(2, 2.0, DegreeFamily::Euclidean).unwrap();
        assert_eq!(got, brute_force(2, 2.0, DegreeFamily::Euclidean));
        assert_eq!(
            got,
            vec![
                mi(&[0, 0]),
                mi(&[0, 1]),
                mi(&[0, 2]),
                mi(&[1, 0]),
                mi(&[1, 1]),
                mi(&[2, 0])
            ]
        );

        for family in DegreeFamily::ALL {
            let got = enumerate_index_set(1, 3.0, family).unwrap();
            assert_eq!(got, vec![mi(&[0]), mi(&[1]), mi(&[2]), mi(&[3])]);
        }
    }

    #[test]
    fn enumerate_rejects_bad_input() {
        assert!(enumerate_index_set(0, 1.0, DegreeFamily::Total).is_err());
        assert!(enumerate_index_set(2, -1.0, DegreeFamily::Total).is_err());
        assert!(enumerate_index_set(2, f64::NAN, DegreeFamily::Max).is_err());
        assert_eq!(
            enumerate_index_set_with_cap(3, 4.0, DegreeFamily::Max, 100),
            Err(Error::CapExceeded { cap: 100 })
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_index_set(2, 3.0, DegreeFamily::Total).unwrap(), 10);
        assert_eq!(count_index_set(3, 2.0, DegreeFamily::Max).unwrap(), 27);
        assert_eq!(count_index_set(2, 2.0, DegreeFamily::Euclidean).unwrap(), 6);
    }

    #[test]
    fn count_overflow_is_an_error() {
        assert!(matches!(
            count_index_set(40, 1000.0, DegreeFamily::Max),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            count_index_set(60, 10_000.0, DegreeFamily::Total),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn non_integer_bounds_floor() {
        assert_eq!(count_index_set(2, 3.9, DegreeFamily::Total).unwrap(), 10);
        assert_eq!(count_index_set(3, 2.5, DegreeFamily::Max).unwrap(), 27);
        // √2 exactly admits (1,1) only through the floor of n² = 2.0000000000000004
        let r2 = 2f64.sqrt();
        let set = enumerate_index_set(2, r2, DegreeFamily::Euclidean).unwrap();
        assert!(set.contains(&mi(&[1, 1])));
        assert_eq!(set, brute_force(2, r2, DegreeFamily::Euclidean));
    }

    #[test]
    fn euclidean_boundary_included() {
        // 3-4-5 triple sits exactly on the sphere of radius 5
        let set = enumerate_index_set(2, 5.0, DegreeFamily::Euclidean).unwrap();
        assert!(set.contains(&mi(&[3, 4])));
        assert!(!set.contains(&mi(&[4, 4])));
        assert!(!enumerate_index_set(2, 4.999_999_999, DegreeFamily::Euclidean)
            .unwrap()
            .contains(&mi(&[3, 4])));
    }

    #[test]
    fn floor_square_exact() {
        assert_eq!(floor_square(5.0).unwrap(), 25);
        assert_eq!(floor_square(0.0).unwrap(), 0);
        assert_eq!(floor_square(2f64.sqrt()).unwrap(), 2);
        // 0.1² = 0.010000000000000002 in f64 but the exact square is above 0.01
        assert_eq!(floor_square(0.1).unwrap(), 0);
        let below_three = f64::from_bits(3f64.sqrt().to_bits() - 1);
        assert_eq!(floor_square(below_three).unwrap(), 2);
    }

    #[test]
    fn counts_match_enumeration_against_brute_force() {
        for s in 1..=3 {
            for n in [0.0, 1.0, 2.5, 4.0, 5.0, 6.3] {
                for family in DegreeFamily::ALL {
                    let set = enumerate_index_set(s, n, family).unwrap();
                    assert_eq!(set, brute_force(s, n, family), "s={s} n={n} {family}");
                    assert_eq!(count_index_set(s, n, family).unwrap(), set.len() as u64);
                }
            }
        }
    }

    #[test]
    fn dof_ratio_values() {
        assert_relative_eq!(dof_ratio(1, DegreeFamily::Total).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(dof_ratio(1, DegreeFamily::Max).unwrap(), 1.0, epsilon = 1e-14);
        // s = 2: total 8/(2π) = 4/π, max 4/π
        assert_relative_eq!(dof_ratio(2, DegreeFamily::Total).unwrap(), 4.0 / PI, epsilon = 1e-14);
        assert_relative_eq!(dof_ratio(2, DegreeFamily::Max).unwrap(), 4.0 / PI, epsilon = 1e-14);
        let t10 = dof_ratio(10, DegreeFamily::Total).unwrap();
        let m10 = dof_ratio(10, DegreeFamily::Max).unwrap();
        assert!((t10 - 11.07).abs() < 0.05, "{t10}");
        assert!((m10 - 401.5).abs() < 0.5, "{m10}");
        assert!(dof_ratio(3, DegreeFamily::Euclidean).is_err());
        assert!(dof_ratio(0, DegreeFamily::Total).is_err());
    }

    #[test]
    fn family_parsing() {
        assert_eq!("Euclidean".parse::<DegreeFamily>().unwrap(), DegreeFamily::Euclidean);
        assert_eq!("max".parse::<DegreeFamily>().unwrap(), DegreeFamily::Max);
        assert!("l3".parse::<DegreeFamily>().is_err());
    }
}
