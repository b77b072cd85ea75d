//! Angular-momentum algebra: exact half-integers and the Wigner 3-j, 6-j and
//! Clebsch-Gordan coefficients.
//!
//! Coefficients are evaluated with the Racah sums in exact rational
//! arithmetic. The result is kept as `prefactor · √radicand` with both parts
//! rational, so squared coefficients (all the line strengths need) stay exact
//! until the final conversion to floating point.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Real;

use super::MathError;

/// An angular momentum or projection quantum number, stored as twice its
/// value so half-integers are exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfInteger {
    twice: i32,
}

impl HalfInteger {
    pub const ZERO: Self = Self { twice: 0 };
    pub const HALF: Self = Self { twice: 1 };
    pub const ONE: Self = Self { twice: 2 };

    pub const fn from_twice(twice: i32) -> Self {
        Self { twice }
    }

    pub const fn from_integer(n: i32) -> Self {
        Self { twice: 2 * n }
    }

    pub const fn twice_value(self) -> i32 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_integer(self) -> Option<i32> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub const fn abs(self) -> Self {
        Self { twice: self.twice.abs() }
    }

    pub fn value<T: Real>(self) -> T {
        T::lit(f64::from(self.twice) * 0.5)
    }

    /// `2j + 1`.
    pub const fn multiplicity(self) -> i32 {
        self.twice + 1
    }

    /// Projections `-j, -j+1, ..., j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInteger> {
        let j = self.twice;
        (0..=j).map(move |k| HalfInteger::from_twice(-j + 2 * k))
    }

    /// Values `|a - b|, |a - b| + 1, ..., a + b` allowed by the triangle rule.
    pub fn coupled_range(a: Self, b: Self) -> impl Iterator<Item = HalfInteger> {
        let lo = (a.twice - b.twice).abs();
        let hi = a.twice + b.twice;
        (lo..=hi).step_by(2).map(HalfInteger::from_twice)
    }
}

impl From<i32> for HalfInteger {
    fn from(n: i32) -> Self {
        Self::from_integer(n)
    }
}

impl Add for HalfInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInteger {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInteger {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInteger {
    type Err = MathError;

    /// Accepts `"3"`, `"-1"`, `"3/2"`, `"-1/2"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || MathError::InvalidAngularMomentum(format!("cannot parse {s:?} as a half-integer"));
        match s.split_once('/') {
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                let twice: i32 = num.trim().parse().map_err(|_| bad())?;
                Ok(Self::from_twice(twice))
            }
            None => {
                let n: i32 = s.parse().map_err(|_| bad())?;
                Ok(Self::from_integer(n))
            }
        }
    }
}

impl From<HalfInteger> for String {
    fn from(h: HalfInteger) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInteger {
    type Error = MathError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// An exact angular coefficient `prefactor · √radicand`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularCoefficient {
    prefactor: BigRational,
    radicand: BigRational,
}

impl AngularCoefficient {
    pub fn zero() -> Self {
        Self { prefactor: BigRational::zero(), radicand: BigRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero() || self.radicand.is_zero()
    }

    /// The exact square of the coefficient.
    pub fn squared(&self) -> BigRational {
        &self.prefactor * &self.prefactor * &self.radicand
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let p = self.prefactor.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::NAN);
        p * r.sqrt()
    }

    pub fn value<T: Real>(&self) -> T {
        T::lit(self.to_f64())
    }
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn sign(exponent: i64) -> i64 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_magnitude(j: HalfInteger) -> Result<(), MathError> {
    if j.twice < 0 {
        Err(MathError::InvalidAngularMomentum(format!("negative angular momentum {j}")))
    } else {
        Ok(())
    }
}

fn check_pair(j: HalfInteger, m: HalfInteger) -> Result<(), MathError> {
    check_magnitude(j)?;
    if (j.twice - m.twice) % 2 != 0 {
        return Err(MathError::InvalidAngularMomentum(format!("projection {m} incompatible with j = {j}")));
    }
    if m.twice.abs() > j.twice {
        return Err(MathError::InvalidAngularMomentum(format!("|m| = {} exceeds j = {j}", m.abs())));
    }
    Ok(())
}

/// True when `(a, b, c)` satisfies the triangle rule and sums to an integer.
pub fn triangle(a: HalfInteger, b: HalfInteger, c: HalfInteger) -> bool {
    let (a, b, c) = (a.twice, b.twice, c.twice);
    a >= 0 && b >= 0 && c >= 0 && (a + b + c) % 2 == 0 && c <= a + b && c >= (a - b).abs()
}

/// Δ(abc) = (a+b-c)!(a-b+c)!(-a+b+c)! / (a+b+c+1)! for a valid triad.
fn triangle_coefficient(a: HalfInteger, b: HalfInteger, c: HalfInteger) -> BigRational {
    let (a, b, c) = (i64::from(a.twice), i64::from(b.twice), i64::from(c.twice));
    let num = factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2);
    let den = factorial((a + b + c) / 2 + 1);
    BigRational::new(num, den)
}

/// Exact Wigner 3-j symbol `(j1 j2 j3; m1 m2 m3)`.
///
/// Returns zero when `m1 + m2 + m3 ≠ 0` or the triangle rule fails; errors if
/// any `|mᵢ| > jᵢ` or a projection has the wrong integrality.
pub fn wigner_3j_exact(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> Result<AngularCoefficient, MathError> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;
    if m1.twice + m2.twice + m3.twice != 0 || !triangle(j1, j2, j3) {
        return Ok(AngularCoefficient::zero());
    }
    // all combinations below are integers once the checks above pass
    let h = |x: HalfInteger| i64::from(x.twice);
    let int = |twice: i64| twice / 2;
    let (tj1, tj2, tj3, tm1, tm2, tm3) = (h(j1), h(j2), h(j3), h(m1), h(m2), h(m3));

    let mut radicand = triangle_coefficient(j1, j2, j3);
    for (tj, tm) in [(tj1, tm1), (tj2, tm2), (tj3, tm3)] {
        radicand *= BigRational::from_integer(factorial(int(tj + tm)) * factorial(int(tj - tm)));
    }

    let a1 = int(tj3 - tj2 + tm1);
    let a2 = int(tj3 - tj1 - tm2);
    let b1 = int(tj1 + tj2 - tj3);
    let b2 = int(tj1 - tm1);
    let b3 = int(tj2 + tm2);
    let k_min = 0.max(-a1).max(-a2);
    let k_max = b1.min(b2).min(b3);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = factorial(k)
            * factorial(a1 + k)
            * factorial(a2 + k)
            * factorial(b1 - k)
            * factorial(b2 - k)
            * factorial(b3 - k);
        sum += BigRational::new(BigInt::from(sign(k)), den);
    }
    let phase = sign(int(tj1 - tj2 - tm3));
    Ok(AngularCoefficient { prefactor: sum * BigInt::from(phase), radicand })
}

/// Exact Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}`; zero unless all four
/// triads `(j1 j2 j3)`, `(j1 j5 j6)`, `(j4 j2 j6)`, `(j4 j5 j3)` are valid.
pub fn wigner_6j_exact(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    j4: HalfInteger,
    j5: HalfInteger,
    j6: HalfInteger,
) -> Result<AngularCoefficient, MathError> {
    for j in [j1, j2, j3, j4, j5, j6] {
        check_magnitude(j)?;
    }
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| triangle(a, b, c)) {
        return Ok(AngularCoefficient::zero());
    }
    let radicand = triads
        .iter()
        .fold(BigRational::one(), |acc, &(a, b, c)| acc * triangle_coefficient(a, b, c));

    let h = |x: HalfInteger| i64::from(x.twice);
    let lower = triads.map(|(a, b, c)| (h(a) + h(b) + h(c)) / 2);
    let upper = [
        (h(j1) + h(j2) + h(j4) + h(j5)) / 2,
        (h(j2) + h(j3) + h(j5) + h(j6)) / 2,
        (h(j3) + h(j1) + h(j6) + h(j4)) / 2,
    ];
    let t_min = *lower.iter().max().expect("four triads");
    let t_max = *upper.iter().min().expect("three sums");
    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let den = lower.iter().fold(BigInt::one(), |acc, &a| acc * factorial(t - a))
            * upper.iter().fold(BigInt::one(), |acc, &b| acc * factorial(b - t));
        sum += BigRational::new(BigInt::from(sign(t)) * factorial(t + 1), den);
    }
    Ok(AngularCoefficient { prefactor: sum, radicand })
}

/// Exact Clebsch-Gordan coefficient `⟨j1 m1, j2 m2 | J M⟩`.
pub fn clebsch_gordan_exact(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Result<AngularCoefficient, MathError> {
    check_pair(j, m)?;
    if m1 + m2 != m {
        check_pair(j1, m1)?;
        check_pair(j2, m2)?;
        return Ok(AngularCoefficient::zero());
    }
    let three_j = wigner_3j_exact(j1, j2, j, m1, m2, -m)?;
    if three_j.is_zero() {
        return Ok(three_j);
    }
    let phase = sign(i64::from(j1.twice - j2.twice + m.twice) / 2);
    Ok(AngularCoefficient {
        prefactor: three_j.prefactor * BigInt::from(phase),
        radicand: three_j.radicand * BigInt::from(j.multiplicity()),
    })
}

pub fn wigner_3j<T: Real>(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    m1: HalfInteger,
    m2: HalfInteger,
    m3: HalfInteger,
) -> Result<T, MathError> {
    wigner_3j_exact(j1, j2, j3, m1, m2, m3).map(|c| c.value())
}

pub fn wigner_6j<T: Real>(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
    j4: HalfInteger,
    j5: HalfInteger,
    j6: HalfInteger,
) -> Result<T, MathError> {
    wigner_6j_exact(j1, j2, j3, j4, j5, j6).map(|c| c.value())
}

pub fn clebsch_gordan<T: Real>(
    j1: HalfInteger,
    m1: HalfInteger,
    j2: HalfInteger,
    m2: HalfInteger,
    j: HalfInteger,
    m: HalfInteger,
) -> Result<T, MathError> {
    clebsch_gordan_exact(j1, m1, j2, m2, j, m).map(|c| c.value())
}

/// Converts an exact rational to floating point.
pub fn rational_to<T: Real>(r: &BigRational) -> T {
    if r.is_negative() {
        -T::lit((-r).to_f64().unwrap_or(f64::NAN))
    } else {
        T::lit(r.to_f64().unwrap_or(f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hi(twice: i32) -> HalfInteger {
        HalfInteger::from_twice(twice)
    }

    fn int(n: i32) -> HalfInteger {
        HalfInteger::from_integer(n)
    }

    fn w3j(j: [i32; 3], m: [i32; 3]) -> f64 {
        wigner_3j(hi(j[0]), hi(j[1]), hi(j[2]), hi(m[0]), hi(m[1]), hi(m[2])).unwrap()
    }

    fn w6j(j: [i32; 6]) -> f64 {
        wigner_6j(hi(j[0]), hi(j[1]), hi(j[2]), hi(j[3]), hi(j[4]), hi(j[5])).unwrap()
    }

    #[test]
    fn half_integer_parsing_and_display() {
        assert_eq!("3/2".parse::<HalfInteger>().unwrap(), hi(3));
        assert_eq!("-1/2".parse::<HalfInteger>().unwrap(), hi(-1));
        assert_eq!("2".parse::<HalfInteger>().unwrap(), int(2));
        assert!("3/4".parse::<HalfInteger>().is_err());
        assert_eq!(hi(5).to_string(), "5/2");
        assert_eq!(int(-1).to_string(), "-1");
        let ms: Vec<_> = hi(3).projections().collect();
        assert_eq!(ms, vec![hi(-3), hi(-1), hi(1), hi(3)]);
        let js: Vec<_> = HalfInteger::coupled_range(int(1), hi(1)).collect();
        assert_eq!(js, vec![hi(1), hi(3)]);
    }

    #[test]
    fn trivial_3j_values() {
        assert_eq!(w3j([0, 0, 0], [0, 0, 0]), 1.0);
        assert_eq!(w3j([2, 2, 2], [2, 0, 0]), 0.0);
        // (-1)^{j-m}/sqrt(2j+1) with j = 1, m = 0
        assert!((w3j([2, 2, 0], [0, 0, 0]) + 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closed_form_3j_with_zero() {
        // (j j 0; m -m 0) = (-1)^{j-m} / sqrt(2j+1)
        for tj in 0..12 {
            for tm in (-tj..=tj).step_by(2) {
                let phase = if ((tj - tm) / 2) % 2 == 0 { 1.0 } else { -1.0 };
                let expected = phase / f64::from(tj + 1).sqrt();
                assert!((w3j([tj, tj, 0], [tm, -tm, 0]) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn out_of_range_projection_is_an_error() {
        assert!(wigner_3j::<f64>(int(1), int(1), int(1), int(2), int(-2), int(0)).is_err());
        assert!(wigner_3j::<f64>(int(1), int(1), int(1), hi(1), hi(-1), int(0)).is_err());
    }

    #[test]
    fn trivial_6j_values() {
        // {1 1 1; 0 1 1}: closed form (-1)^{j1+j2+j3} / sqrt((2j2+1)(2j3+1)) with j4 = 0
        assert!((w6j([2, 2, 2, 0, 2, 2]) + 1.0 / 3.0).abs() < 1e-12);
        for (a, b, c) in [(2, 4, 4), (3, 5, 4), (4, 4, 2)] {
            let phase = if ((a + b + c) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            let expected = phase / f64::from((b + 1) * (c + 1)).sqrt();
            // {a b c; 0 c b}
            assert!((w6j([a, b, c, 0, c, b]) - expected).abs() < 1e-12);
        }
        // broken triad
        assert_eq!(w6j([2, 2, 8, 2, 2, 2]), 0.0);
    }

    #[test]
    fn clebsch_gordan_basics() {
        for tj in 0..8 {
            for tm in (-tj..=tj).step_by(2) {
                let v: f64 = clebsch_gordan(hi(tj), hi(tm), int(0), int(0), hi(tj), hi(tm)).unwrap();
                assert!((v - 1.0).abs() < 1e-14);
            }
        }
        // two spin-1/2: triplet m = 0 and singlet
        let t: f64 = clebsch_gordan(hi(1), hi(1), hi(1), hi(-1), int(1), int(0)).unwrap();
        let s: f64 = clebsch_gordan(hi(1), hi(1), hi(1), hi(-1), int(0), int(0)).unwrap();
        assert!((t - 0.5f64.sqrt()).abs() < 1e-14);
        assert!((s - 0.5f64.sqrt()).abs() < 1e-14);
        let zero: f64 = clebsch_gordan(int(1), int(1), int(1), int(0), int(2), int(0)).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn squared_coefficients_are_exact() {
        let c = wigner_3j_exact(int(1), int(1), int(0), int(0), int(0), int(0)).unwrap();
        assert_eq!(c.squared(), BigRational::new(BigInt::from(1), BigInt::from(3)));
    }

    fn tuple_3j() -> impl Strategy<Value = ([i32; 3], [i32; 3])> {
        (0i32..8, 0i32..8, prop::bool::ANY)
            .prop_flat_map(|(a, b, half)| {
                let (ta, tb) = (2 * a + i32::from(half), 2 * b);
                let lo = (ta - tb).abs();
                let hi = ta + tb;
                ((lo / 2)..=(hi / 2)).prop_map(move |k| (ta, tb, lo + 2 * (k - lo / 2)))
            })
            .prop_flat_map(|(ta, tb, tc)| {
                (0..=ta, 0..=tb).prop_filter_map("m3 out of range", move |(ia, ib)| {
                    let (ma, mb) = (-ta + 2 * ia, -tb + 2 * ib);
                    let mc = -ma - mb;
                    (mc.abs() <= tc).then_some(([ta, tb, tc], [ma, mb, mc]))
                })
            })
    }

    proptest! {
        #[test]
        fn column_permutation_symmetry((j, m) in tuple_3j()) {
            let base = w3j(j, m);
            let odd = if ((j[0] + j[1] + j[2]) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            // even (cyclic) permutations
            prop_assert!((w3j([j[1], j[2], j[0]], [m[1], m[2], m[0]]) - base).abs() < 1e-12);
            prop_assert!((w3j([j[2], j[0], j[1]], [m[2], m[0], m[1]]) - base).abs() < 1e-12);
            // odd permutations
            prop_assert!((w3j([j[1], j[0], j[2]], [m[1], m[0], m[2]]) - odd * base).abs() < 1e-12);
            prop_assert!((w3j([j[0], j[2], j[1]], [m[0], m[2], m[1]]) - odd * base).abs() < 1e-12);
            // sign reversal of all m
            prop_assert!((w3j(j, [-m[0], -m[1], -m[2]]) - odd * base).abs() < 1e-12);
        }

        #[test]
        fn orthogonality(a in 0i32..6, b in 0i32..6, half in prop::bool::ANY) {
            let (ta, tb) = (2 * a + i32::from(half), 2 * b + i32::from(half));
            let range: Vec<i32> = ((ta - tb).abs()..=ta + tb).step_by(2).collect();
            for &tc in &range {
                for &tc2 in &range {
                    for tm3 in (-tc..=tc).step_by(2) {
                        for tm3b in (-tc2..=tc2).step_by(2) {
                            let mut sum = 0.0;
                            for tm1 in (-ta..=ta).step_by(2) {
                                for tm2 in (-tb..=tb).step_by(2) {
                                    if tm1 + tm2 + tm3 != 0 || tm1 + tm2 + tm3b != 0 {
                                        continue;
                                    }
                                    sum += w3j([ta, tb, tc], [tm1, tm2, tm3]) * w3j([ta, tb, tc2], [tm1, tm2, tm3b]);
                                }
                            }
                            let expected = if tc == tc2 && tm3 == tm3b { 1.0 } else { 0.0 };
                            prop_assert!((f64::from(tc + 1) * sum - expected).abs() < 1e-10);
                        }
                    }
                }
            }
        }

        #[test]
        fn six_j_column_exchange(j in prop::array::uniform6(0i32..7)) {
            let base = w6j(j);
            let swaps = [
                [j[1], j[0], j[2], j[4], j[3], j[5]],
                [j[0], j[2], j[1], j[3], j[5], j[4]],
                [j[2], j[1], j[0], j[5], j[4], j[3]],
                // upper/lower exchange in two columns
                [j[3], j[4], j[2], j[0], j[1], j[5]],
                [j[0], j[4], j[5], j[3], j[1], j[2]],
            ];
            for s in swaps {
                prop_assert!((w6j(s) - base).abs() < 1e-12);
            }
        }
    }
}
