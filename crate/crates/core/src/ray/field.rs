//! Exact arithmetic in `ℚ[√2]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `a + b·√2` with rational `a` and `b`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElement {
    a: BigRational,
    b: BigRational,
}

fn sign_of(p: &BigRational, q: &BigRational) -> Ordering {
    // Sign of p + q√2.
    let sp = p.cmp(&BigRational::zero());
    let sq = q.cmp(&BigRational::zero());
    if sq == Ordering::Equal {
        return sp;
    }
    if sp == Ordering::Equal || sp == sq {
        return sq;
    }
    let p2 = p * p;
    let q2 = q * q * BigRational::from_integer(2.into());
    // Opposite signs: the larger magnitude wins.
    match p2.cmp(&q2) {
        Ordering::Greater => sp,
        Ordering::Less => sq,
        Ordering::Equal => Ordering::Equal,
    }
}

impl FieldElement {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        FieldElement { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        FieldElement { a, b: BigRational::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(n.into()))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    pub fn sqrt2() -> Self {
        FieldElement { a: BigRational::zero(), b: BigRational::one() }
    }

    /// `a + b·√2` from small integers.
    pub fn from_parts(a: (i64, i64), b: (i64, i64)) -> Self {
        FieldElement {
            a: BigRational::new(a.0.into(), a.1.into()),
            b: BigRational::new(b.0.into(), b.1.into()),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> Ordering {
        sign_of(&self.a, &self.b)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        FieldElement { a: &self.a * k, b: &self.b * k }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        // (a - b√2) / (a² - 2b²); the norm vanishes only at zero.
        let norm = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(2.into());
        if norm.is_zero() {
            return None;
        }
        Some(FieldElement { a: &self.a / &norm, b: -&self.b / &norm })
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2f64.sqrt()
    }

    /// Largest integer not above `self`.
    pub fn floor(&self) -> BigInt {
        let mut k = BigInt::from(self.to_f64().floor() as i64);
        loop {
            let kf = Self::rational(BigRational::from_integer(k.clone()));
            if kf > *self {
                k -= 1;
            } else if Self::rational(BigRational::from_integer(&k + 1)) <= *self {
                k += 1;
            } else {
                return k;
            }
        }
    }

    /// A rational strictly between `lo` and `hi` (`lo < hi`), preferring
    /// short dyadic fractions.
    pub fn rational_between(lo: &Self, hi: &Self) -> Self {
        debug_assert!(lo < hi);
        let mut den = BigInt::one();
        loop {
            let scaled = lo.scale(&BigRational::from_integer(den.clone()));
            let num = scaled.floor() + 1;
            let cand = Self::rational(BigRational::new(num, den.clone()));
            if cand < *hi {
                return cand;
            }
            den *= 2;
        }
    }

    pub fn midpoint(lo: &Self, hi: &Self) -> Self {
        (lo + hi).scale(&BigRational::new(1.into(), 2.into()))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_of(&(&self.a - &other.a), &(&self.b - &other.b))
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, o: &FieldElement) -> FieldElement {
        FieldElement { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, o: &FieldElement) -> FieldElement {
        let two = BigRational::from_integer(2.into());
        FieldElement {
            a: &self.a * &o.a + &self.b * &o.b * two,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, o: &FieldElement) -> FieldElement {
        self * &o.recip().expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { a: -&self.a, b: -&self.b }
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, o: FieldElement) -> FieldElement {
        &self + &o
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, o: FieldElement) -> FieldElement {
        &self - &o
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return f.write_str(&fmt_rat(&self.a));
        }
        let coeff = if self.b.abs().is_one() {
            String::new()
        } else {
            fmt_rat(&self.b.abs())
        };
        let surd = format!("{coeff}√2");
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{surd}"),
            (true, true) => write!(f, "-{surd}"),
            (false, false) => write!(f, "{}+{surd}", fmt_rat(&self.a)),
            (false, true) => write!(f, "{}-{surd}", fmt_rat(&self.a)),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Integers that fit in `i64` are written as JSON numbers, others as strings.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Int {
    Small(i64),
    Big(String),
}

impl Int {
    fn of(n: &BigInt) -> Int {
        n.to_i64().map_or_else(|| Int::Big(n.to_string()), Int::Small)
    }

    fn value<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            Int::Small(n) => Ok(n.into()),
            Int::Big(s) => s.parse().map_err(|_| E::custom(format!("bad integer {s:?}"))),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    a: [Int; 2],
    b: [Int; 2],
}

fn pair(r: &BigRational) -> [Int; 2] {
    [Int::of(r.numer()), Int::of(r.denom())]
}

fn rat<E: serde::de::Error>([n, d]: [Int; 2]) -> Result<BigRational, E> {
    let (n, d) = (n.value::<E>()?, d.value::<E>()?);
    if d.is_zero() {
        return Err(E::custom("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Repr { a: pair(&self.a), b: pair(&self.b) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = Repr::deserialize(d)?;
        Ok(FieldElement { a: rat(r.a)?, b: rat(r.b)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(a: (i64, i64), b: (i64, i64)) -> FieldElement {
        FieldElement::from_parts(a, b)
    }

    #[test]
    fn ordering_examples() {
        let two = FieldElement::int(2);
        assert!(FieldElement::sqrt2() < two);
        assert!(FieldElement::sqrt2() > FieldElement::frac(7, 5));
        assert!(FieldElement::sqrt2() < FieldElement::frac(3, 2));
        assert!(fe((3, 1), (-2, 1)) > FieldElement::zero());
        assert!(fe((-3, 1), (2, 1)) < FieldElement::zero());
        assert_eq!(fe((0, 1), (0, 1)).signum(), Ordering::Equal);
    }

    #[test]
    fn floor_and_between() {
        assert_eq!(FieldElement::sqrt2().floor(), 1.into());
        assert_eq!((-FieldElement::sqrt2()).floor(), (-2).into());
        assert_eq!(FieldElement::int(3).floor(), 3.into());
        let lo = FieldElement::sqrt2();
        let hi = &lo + &FieldElement::frac(1, 1000);
        let r = FieldElement::rational_between(&lo, &hi);
        assert!(r.is_rational() && lo < r && r < hi);
    }

    #[test]
    fn display_and_json() {
        assert_eq!(FieldElement::frac(1, 2).to_string(), "1/2");
        assert_eq!(FieldElement::sqrt2().to_string(), "√2");
        assert_eq!(fe((1, 1), (-3, 2)).to_string(), "1-3/2√2");
        let j = serde_json::to_string(&FieldElement::frac(-1, 2)).unwrap();
        assert_eq!(j, r#"{"a":[-1,2],"b":[0,1]}"#);
        let back: FieldElement = serde_json::from_str(r#"{"a":[2,4],"b":[1,1]}"#).unwrap();
        assert_eq!(back, fe((1, 2), (1, 1)));
        assert!(serde_json::from_str::<FieldElement>(r#"{"a":[1,0],"b":[0,1]}"#).is_err());
    }

    fn arb() -> impl Strategy<Value = FieldElement> {
        (-50i64..50, 1i64..20, -50i64..50, 1i64..20).prop_map(|(p, q, r, s)| fe((p, q), (r, s)))
    }

    proptest! {
        #[test]
        fn order_agrees_with_floats(x in arb(), y in arb()) {
            let (fx, fy) = (x.to_f64(), y.to_f64());
            if (fx - fy).abs() > 1e-9 {
                prop_assert_eq!(x < y, fx < fy);
            }
        }

        #[test]
        fn field_laws(x in arb(), y in arb()) {
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
            prop_assert_eq!(x < y, -&y < -&x);
            let f = x.floor();
            prop_assert!(FieldElement::rational(BigRational::from_integer(f.clone())) <= x);
            prop_assert!(FieldElement::rational(BigRational::from_integer(f + 1)) > x);
        }
    }
}
