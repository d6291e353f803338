//! Coefficient rings for the graded algebras: integers, F₂, integral and
//! rational Laurent rings in the Bott class `z`, and the KO coefficient ring.
//!
//! All values are immutable and kept in a unique normal form, so equality is
//! coefficient-by-coefficient comparison. `z` sits in cohomological degree −2;
//! the KO generators `e`, `x`, `y` sit in degrees −1, −4, −8 and satisfy
//! `2e = 0`, `e³ = 0`, `ex = 0`, `x² = 4y`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{BottError, Result};

/// Arbitrary-precision integers; the coefficients of `H*(M^k; Z)`.
pub type IntegerScalar = BigInt;

/// Interface shared by the four coefficient rings.
///
/// `degree` reports the cohomological degree of a homogeneous value
/// (`Ok(None)` for zero) and signals `Inhomogeneous` otherwise.
pub trait Scalar:
    Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Image of an integer under the unique ring map from Z.
    fn from_int(n: i64) -> Self;
    fn degree(&self) -> Result<Option<i64>>;
    fn to_json(&self) -> Value;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        BigInt::from(0)
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }
    fn degree(&self) -> Result<Option<i64>> {
        if Zero::is_zero(self) {
            Ok(None)
        } else {
            Ok(Some(0))
        }
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

/// The field with two elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct F2(pub bool);

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.0 { "1" } else { "0" })
    }
}

impl Scalar for F2 {
    fn zero() -> Self {
        F2(false)
    }
    fn one() -> Self {
        F2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 & rhs.0)
    }
    fn from_int(n: i64) -> Self {
        F2(n.rem_euclid(2) == 1)
    }
    fn degree(&self) -> Result<Option<i64>> {
        Ok(if self.0 { Some(0) } else { None })
    }
    fn to_json(&self) -> Value {
        json!(if self.0 { "1" } else { "0" })
    }
}

/// Element of Z[z, z⁻¹]; the map sends a z-exponent to its integer
/// coefficient and stores no zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentScalar {
    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(iter: I) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in iter {
            if !Zero::is_zero(&c) {
                let entry = terms.entry(e).or_insert_with(|| BigInt::from(0));
                *entry += c;
                if Zero::is_zero(entry) {
                    terms.remove(&e);
                }
            }
        }
        LaurentScalar { terms }
    }

    /// The monomial `c·z^exp`.
    pub fn z_pow_int(exp: i64, c: i64) -> Self {
        Self::from_terms([(exp, BigInt::from(c))])
    }

    pub fn z_pow(exp: i64) -> Self {
        Self::z_pow_int(exp, 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    /// Multiply by `z^exp`.
    pub fn shifted(&self, exp: i64) -> Self {
        LaurentScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + exp, c.clone()))
                .collect(),
        }
    }

    /// Complex conjugation on coefficients: z ↦ −z.
    pub fn conj(&self) -> Self {
        LaurentScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// The coefficient of `z^exp`.
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(|| BigInt::from(0))
    }

    /// The single `(exponent, coefficient)` pair of a monomial value.
    pub fn as_monomial(&self) -> Option<(i64, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> RationalLaurentScalar {
        RationalLaurentScalar {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, BigRational::from_integer(c.clone())))
                .collect(),
        }
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 if c.is_one() => "z".to_string(),
                1 => format!("{c}*z"),
                _ if c.is_one() => format!("z^{e}"),
                _ => format!("{c}*z^{e}"),
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{body}")
    }
}

impl Scalar for LaurentScalar {
    fn zero() -> Self {
        LaurentScalar::default()
    }
    fn one() -> Self {
        LaurentScalar::z_pow(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms.entry(*e).or_insert_with(|| BigInt::from(0));
            *entry += c;
            if Zero::is_zero(entry) {
                terms.remove(e);
            }
        }
        LaurentScalar { terms }
    }
    fn neg(&self) -> Self {
        LaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1 + e2;
                let entry = terms.entry(e).or_insert_with(|| BigInt::from(0));
                *entry += c1 * c2;
                if Zero::is_zero(entry) {
                    terms.remove(&e);
                }
            }
        }
        LaurentScalar { terms }
    }
    fn from_int(n: i64) -> Self {
        Self::z_pow_int(0, n)
    }
    fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = -2 * e;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(BottError::Inhomogeneous),
            }
        }
        Ok(deg)
    }
    fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }
}

/// Element of Q[z, z⁻¹]; coefficients are exact rationals in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct RationalLaurentScalar {
    terms: BTreeMap<i64, BigRational>,
}

impl RationalLaurentScalar {
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(iter: I) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in iter {
            if !Zero::is_zero(&c) {
                let entry = terms
                    .entry(e)
                    .or_insert_with(|| BigRational::from_integer(BigInt::from(0)));
                *entry += c;
                if Zero::is_zero(entry) {
                    terms.remove(&e);
                }
            }
        }
        RationalLaurentScalar { terms }
    }

    /// The monomial `(num/den)·z^exp`.
    pub fn z_pow_ratio(exp: i64, num: BigInt, den: BigInt) -> Self {
        Self::from_terms([(exp, BigRational::new(num, den))])
    }
}

impl fmt::Display for RationalLaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body = self
            .terms
            .iter()
            .map(|(e, c)| {
                if *e == 0 {
                    c.to_string()
                } else {
                    format!("{c}*z^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{body}")
    }
}

impl Scalar for RationalLaurentScalar {
    fn zero() -> Self {
        RationalLaurentScalar::default()
    }
    fn one() -> Self {
        Self::z_pow_ratio(0, BigInt::from(1), BigInt::from(1))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            let entry = terms
                .entry(*e)
                .or_insert_with(|| BigRational::from_integer(BigInt::from(0)));
            *entry += c;
            if Zero::is_zero(entry) {
                terms.remove(e);
            }
        }
        RationalLaurentScalar { terms }
    }
    fn neg(&self) -> Self {
        RationalLaurentScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut terms: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e = e1 + e2;
                let entry = terms
                    .entry(e)
                    .or_insert_with(|| BigRational::from_integer(BigInt::from(0)));
                *entry += c1 * c2;
                if Zero::is_zero(entry) {
                    terms.remove(&e);
                }
            }
        }
        RationalLaurentScalar { terms }
    }
    fn from_int(n: i64) -> Self {
        Self::z_pow_ratio(0, BigInt::from(n), BigInt::from(1))
    }
    fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = -2 * e;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(BottError::Inhomogeneous),
            }
        }
        Ok(deg)
    }
    fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|(e, c)| (e.to_string(), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }
}

/// Torsion tokens of the KO coefficient ring basis {y^n, e·y^n, e²·y^n, x·y^n}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum KoToken {
    One,
    E,
    E2,
    X,
}

impl KoToken {
    fn degree(self) -> i64 {
        match self {
            KoToken::One => 0,
            KoToken::E => -1,
            KoToken::E2 => -2,
            KoToken::X => -4,
        }
    }

    fn is_torsion(self) -> bool {
        matches!(self, KoToken::E | KoToken::E2)
    }

    fn name(self) -> &'static str {
        match self {
            KoToken::One => "1",
            KoToken::E => "e",
            KoToken::E2 => "e2",
            KoToken::X => "x",
        }
    }

    /// Product of two tokens under 2e = 0, e³ = 0, ex = 0, x² = 4y.
    /// Returns `(token, extra y power, integer factor)`; `None` is zero.
    fn mul(self, rhs: KoToken) -> Option<(KoToken, u32, i64)> {
        use KoToken::*;
        match (self, rhs) {
            (One, t) | (t, One) => Some((t, 0, 1)),
            (E, E) => Some((E2, 0, 1)),
            (X, X) => Some((One, 1, 4)),
            _ => None,
        }
    }
}

/// Element of KO_* = Z[e, x, y]/(2e, e³, ex, x² − 4y), with y-powers kept
/// explicit; the unique normal form has e/e² coefficients reduced mod 2.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct KOScalar {
    terms: BTreeMap<(KoToken, u32), BigInt>,
}

impl KOScalar {
    pub fn from_terms<I: IntoIterator<Item = (KoToken, u32, BigInt)>>(iter: I) -> Self {
        let mut out = KOScalar::default();
        for (t, n, c) in iter {
            out.insert(t, n, c);
        }
        out
    }

    /// The monomial `c·token·y^n`.
    pub fn monomial(token: KoToken, y_pow: u32, c: i64) -> Self {
        Self::from_terms([(token, y_pow, BigInt::from(c))])
    }

    pub fn e() -> Self {
        Self::monomial(KoToken::E, 0, 1)
    }
    pub fn e2() -> Self {
        Self::monomial(KoToken::E2, 0, 1)
    }
    pub fn x() -> Self {
        Self::monomial(KoToken::X, 0, 1)
    }
    pub fn y() -> Self {
        Self::monomial(KoToken::One, 1, 1)
    }

    fn insert(&mut self, t: KoToken, n: u32, c: BigInt) {
        if Zero::is_zero(&c) {
            return;
        }
        let key = (t, n);
        let entry = self.terms.entry(key).or_insert_with(|| BigInt::from(0));
        *entry += c;
        if t.is_torsion() {
            // 2e = 0: torsion coefficients live mod 2.
            let odd = !Zero::is_zero(&(&*entry % 2u8));
            if odd {
                *entry = BigInt::from(1);
            } else {
                self.terms.remove(&key);
                return;
            }
        }
        if Zero::is_zero(self.terms.get(&key).unwrap_or(&BigInt::from(0))) {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(KoToken, u32), &BigInt)> {
        self.terms.iter()
    }

    /// The e/e² component (the part killed by complexification).
    pub fn torsion_part(&self) -> KOScalar {
        KOScalar {
            terms: self
                .terms
                .iter()
                .filter(|((t, _), _)| t.is_torsion())
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Image in K_* = Z[z, z⁻¹] under complexification:
    /// y ↦ z⁴, x ↦ 2z², e ↦ 0.
    pub fn complexify(&self) -> LaurentScalar {
        LaurentScalar::from_terms(self.terms.iter().filter_map(|((t, n), c)| match t {
            KoToken::One => Some((4 * *n as i64, c.clone())),
            KoToken::X => Some((4 * *n as i64 + 2, c * 2)),
            KoToken::E | KoToken::E2 => None,
        }))
    }

    fn term_name(t: KoToken, n: u32) -> String {
        let y = match n {
            0 => String::new(),
            1 => "y".to_string(),
            _ => format!("y^{n}"),
        };
        match (t, y.is_empty()) {
            (KoToken::One, true) => "1".to_string(),
            (KoToken::One, false) => y,
            (_, true) => t.name().to_string(),
            (_, false) => format!("{}*{}", t.name(), y),
        }
    }
}

impl fmt::Display for KOScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let body = self
            .terms
            .iter()
            .map(|((t, n), c)| {
                let name = KOScalar::term_name(*t, *n);
                if c.is_one() {
                    name
                } else if name == "1" {
                    c.to_string()
                } else {
                    format!("{c}*{name}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        write!(f, "{body}")
    }
}

impl Scalar for KOScalar {
    fn zero() -> Self {
        KOScalar::default()
    }
    fn one() -> Self {
        Self::monomial(KoToken::One, 0, 1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for ((t, n), c) in &rhs.terms {
            out.insert(*t, *n, c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        // Torsion coefficients are self-inverse mod 2.
        KOScalar {
            terms: self
                .terms
                .iter()
                .map(|((t, n), c)| ((*t, *n), if t.is_torsion() { c.clone() } else { -c }))
                .collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = KOScalar::default();
        for ((t1, n1), c1) in &self.terms {
            for ((t2, n2), c2) in &rhs.terms {
                if let Some((t, dy, f)) = t1.mul(*t2) {
                    out.insert(t, n1 + n2 + dy, c1 * c2 * f);
                }
            }
        }
        out
    }
    fn from_int(n: i64) -> Self {
        Self::monomial(KoToken::One, 0, n)
    }
    fn degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (t, n) in self.terms.keys() {
            let d = t.degree() - 8 * *n as i64;
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                _ => return Err(BottError::Inhomogeneous),
            }
        }
        Ok(deg)
    }
    fn to_json(&self) -> Value {
        let map: serde_json::Map<String, Value> = self
            .terms
            .iter()
            .map(|((t, n), c)| (KOScalar::term_name(*t, *n), Value::String(c.to_string())))
            .collect();
        Value::Object(map)
    }
}

/// ko_scalar_mul from the module contract; alias for the trait method.
pub fn ko_scalar_mul(p: &KOScalar, q: &KOScalar) -> KOScalar {
    p.mul(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ko_relations() {
        let e = KOScalar::e();
        let x = KOScalar::x();
        let y = KOScalar::y();
        // e·e = e²
        assert_eq!(e.mul(&e), KOScalar::e2());
        // e·x = 0
        assert!(e.mul(&x).is_zero());
        // e³ = 0
        assert!(e.mul(&e).mul(&e).is_zero());
        // x·x = 4y
        assert_eq!(x.mul(&x), KOScalar::monomial(KoToken::One, 1, 4));
        // 2e = 0
        assert!(e.add(&e).is_zero());
        // e²·x = 0, e²·e² = 0
        assert!(KOScalar::e2().mul(&x).is_zero());
        assert!(KOScalar::e2().mul(&KOScalar::e2()).is_zero());
        assert_eq!(x.mul(&y), KOScalar::monomial(KoToken::X, 1, 1));
    }

    #[test]
    fn ko_degrees() {
        assert_eq!(KOScalar::e().degree().unwrap(), Some(-1));
        assert_eq!(KOScalar::e2().degree().unwrap(), Some(-2));
        assert_eq!(KOScalar::x().degree().unwrap(), Some(-4));
        assert_eq!(KOScalar::y().degree().unwrap(), Some(-8));
        let mixed = KOScalar::x().add(&KOScalar::y());
        assert_eq!(mixed.degree(), Err(BottError::Inhomogeneous));
    }

    #[test]
    fn laurent_examples() {
        let z2 = LaurentScalar::z_pow(2);
        let zm2 = LaurentScalar::z_pow(-2);
        assert_eq!(z2.mul(&zm2), LaurentScalar::one());
        assert_eq!(LaurentScalar::z_pow(3).degree().unwrap(), Some(-6));
        let mixed = z2.add(&LaurentScalar::one());
        assert_eq!(mixed.degree(), Err(BottError::Inhomogeneous));
    }

    #[test]
    fn laurent_conj() {
        let v = LaurentScalar::from_terms([
            (1, BigInt::from(3)),
            (2, BigInt::from(5)),
            (-1, BigInt::from(1)),
        ]);
        let c = v.conj();
        assert_eq!(c.coeff(1), BigInt::from(-3));
        assert_eq!(c.coeff(2), BigInt::from(5));
        assert_eq!(c.coeff(-1), BigInt::from(-1));
        assert_eq!(c.conj(), v);
    }

    fn arb_int() -> impl Strategy<Value = BigInt> {
        (-9i64..=9).prop_map(BigInt::from)
    }

    fn arb_laurent() -> impl Strategy<Value = LaurentScalar> {
        proptest::collection::vec(((-3i64..=3), (-9i64..=9)), 0..4).prop_map(|v| {
            LaurentScalar::from_terms(v.into_iter().map(|(e, c)| (e, BigInt::from(c))))
        })
    }

    fn arb_rational() -> impl Strategy<Value = RationalLaurentScalar> {
        proptest::collection::vec(((-2i64..=2), (-9i64..=9), (1i64..=5)), 0..4).prop_map(|v| {
            RationalLaurentScalar::from_terms(
                v.into_iter()
                    .map(|(e, n, d)| (e, BigRational::new(BigInt::from(n), BigInt::from(d)))),
            )
        })
    }

    fn arb_ko() -> impl Strategy<Value = KOScalar> {
        let token = prop_oneof![
            Just(KoToken::One),
            Just(KoToken::E),
            Just(KoToken::E2),
            Just(KoToken::X)
        ];
        proptest::collection::vec((token, 0u32..3, -9i64..=9), 0..4).prop_map(|v| {
            KOScalar::from_terms(v.into_iter().map(|(t, n, c)| (t, n, BigInt::from(c))))
        })
    }

    macro_rules! ring_axioms {
        ($name:ident, $arb:ident) => {
            mod $name {
                use super::*;
                proptest! {
                    #[test]
                    fn add_commutes(a in $arb(), b in $arb()) {
                        prop_assert_eq!(a.add(&b), b.add(&a));
                    }
                    #[test]
                    fn mul_commutes(a in $arb(), b in $arb()) {
                        prop_assert_eq!(a.mul(&b), b.mul(&a));
                    }
                    #[test]
                    fn mul_associates(a in $arb(), b in $arb(), c in $arb()) {
                        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
                    }
                    #[test]
                    fn distributes(a in $arb(), b in $arb(), c in $arb()) {
                        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                    }
                    #[test]
                    fn units(a in $arb()) {
                        prop_assert_eq!(a.mul(&Scalar::one()), a.clone());
                        prop_assert_eq!(a.add(&Scalar::zero()), a.clone());
                        prop_assert!(Scalar::is_zero(&a.add(&a.neg())));
                    }
                }
            }
        };
    }

    ring_axioms!(int_axioms, arb_int);
    ring_axioms!(laurent_axioms, arb_laurent);
    ring_axioms!(rational_axioms, arb_rational);
    ring_axioms!(ko_axioms, arb_ko);

    proptest! {
        #[test]
        fn ko_torsion_doubles_to_zero(a in arb_ko()) {
            let t = a.torsion_part();
            prop_assert!(t.add(&t).is_zero());
        }

        #[test]
        fn laurent_degree_additive(e1 in -3i64..=3, e2 in -3i64..=3, c1 in 1i64..=9, c2 in 1i64..=9) {
            let a = LaurentScalar::z_pow_int(e1, c1);
            let b = LaurentScalar::z_pow_int(e2, c2);
            let d = a.mul(&b).degree().unwrap().unwrap();
            prop_assert_eq!(d, a.degree().unwrap().unwrap() + b.degree().unwrap().unwrap());
        }

        #[test]
        fn ko_complexify_multiplicative(a in arb_ko(), b in arb_ko()) {
            prop_assert_eq!(a.mul(&b).complexify(), a.complexify().mul(&b.complexify()));
        }
    }
}
