//! Exact scalars: the rationals and prime fields of odd characteristic.
//!
//! A [`FieldSpec`] names the field; a [`FieldElement`] carries its own field
//! tag so that values produced by different fields cannot be mixed silently.
//! Arithmetic between elements of different fields panics, in the same way
//! that indexing a slice out of bounds does: it is a programming error, and
//! callers validating untrusted input should compare [`FieldElement::field`]
//! first.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest modulus accepted; residues then fit in 32 bits and products in 64.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// The field an algebra is built over: `Q` or `F_p` with `p` an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    modulus: Option<u64>,
}

impl FieldSpec {
    pub const fn rationals() -> Self {
        Self { modulus: None }
    }

    /// `F_p`. Rejects `p = 2` (the whole construction needs to halve) and
    /// anything composite.
    pub fn prime(p: u64) -> Result<Self> {
        let name = format!("Fp:{p}");
        if p < 3 {
            return Err(Error::InvalidField(
                name,
                "characteristic must be an odd prime (p >= 3)".into(),
            ));
        }
        if p > MAX_MODULUS {
            return Err(Error::InvalidField(
                name,
                format!("modulus larger than {MAX_MODULUS} is not supported"),
            ));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(name, format!("{p} is not prime")));
        }
        Ok(Self { modulus: Some(p) })
    }

    pub fn kind(&self) -> FieldKind {
        match self.modulus {
            None => FieldKind::Rationals,
            Some(_) => FieldKind::PrimeField,
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    pub fn is_finite(&self) -> bool {
        self.modulus.is_some()
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match self.modulus {
            None => FieldElement::small_int(n),
            Some(p) => FieldElement::residue(n.rem_euclid(p as i64) as u64, p),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match self.modulus {
            None => FieldElement::rational(BigRational::from_integer(n.clone())),
            Some(p) => {
                let r = n % BigInt::from(p);
                let r = if r.is_negative() {
                    r + BigInt::from(p)
                } else {
                    r
                };
                FieldElement::residue(r.to_u64().expect("residue below modulus"), p)
            }
        }
    }

    /// `num / den`; fails when `den` vanishes in this field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElement> {
        let den = self.from_i64(den);
        Ok(self.from_i64(num) * den.inv()?)
    }

    /// Parses an integer or `num/den` literal into this field.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let bad = || Error::InvalidElement(s.to_string(), self.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let mut value = self.from_bigint(&num);
        if let Some(d) = den {
            let d: BigInt = d.parse().map_err(|_| bad())?;
            value *= self.from_bigint(&d).inv().map_err(|_| bad())?;
        }
        Ok(value)
    }

    /// All elements of a finite field in the order `0, 1, ..., p - 1`.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldElement>> {
        self.modulus
            .map(|p| (0..p).map(move |v| FieldElement::residue(v, p)))
    }

    /// A random element. Over `Q` numerators are drawn from `[-6, 6]` and
    /// denominators from `[1, 4]`, which keeps exact elimination cheap while
    /// still exercising non-integral entries.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match self.modulus {
            None => {
                let n: i64 = rng.gen_range(-6..=6);
                let d: i64 = rng.gen_range(1..=4);
                FieldElement::from_i128(n.into(), d.into())
            }
            Some(p) => FieldElement::residue(rng.gen_range(0..p), p),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.modulus {
            None => f.write_str("Q"),
            Some(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `"Q"` or `"Fp:<prime>"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "Q" {
            return Ok(Self::rationals());
        }
        match t.strip_prefix("Fp:") {
            Some(p) => {
                let p: u64 = p.trim().parse().map_err(|_| {
                    Error::InvalidField(t.to_string(), "modulus is not an integer".into())
                })?;
                Self::prime(p)
            }
            None => Err(Error::InvalidField(
                t.to_string(),
                "expected `Q` or `Fp:<prime>`".into(),
            )),
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Rationals whose reduced numerator and denominator fit in `i64` are
/// always stored as `Small`; `Big` only holds values that do not. Keeping
/// the split canonical lets equality and hashing stay structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(BigRational),
    Residue { value: u64, modulus: u64 },
}

/// An exact scalar, kept in canonical form (reduced fraction with positive
/// denominator, or residue in `[0, p)`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FieldElement {
    fn rational(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Self(Repr::Small { num, den }),
            _ => Self(Repr::Big(r)),
        }
    }

    fn small_int(n: i64) -> Self {
        Self(Repr::Small { num: n, den: 1 })
    }

    /// `num / den` from a fraction with `den > 0`, reduced here.
    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den > 0);
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        let (num, den) = if g > 1 {
            (num / g, den / g)
        } else {
            (num, den)
        };
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Self(Repr::Small { num, den }),
            _ => Self(Repr::Big(BigRational::new_raw(num.into(), den.into()))),
        }
    }

    fn residue(value: u64, modulus: u64) -> Self {
        debug_assert!(value < modulus);
        Self(Repr::Residue { value, modulus })
    }

    pub fn field(&self) -> FieldSpec {
        match &self.0 {
            Repr::Small { .. } | Repr::Big(_) => FieldSpec::rationals(),
            Repr::Residue { modulus, .. } => FieldSpec {
                modulus: Some(*modulus),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num == 0,
            Repr::Big(_) => false,
            Repr::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small { num, den } => *num == 1 && *den == 1,
            Repr::Big(_) => false,
            Repr::Residue { value, .. } => *value == 1,
        }
    }

    /// The value as a `BigRational`, for elements of `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Small { num, den } => {
                Some(BigRational::new_raw(BigInt::from(*num), BigInt::from(*den)))
            }
            Repr::Big(r) => Some(r.clone()),
            Repr::Residue { .. } => None,
        }
    }

    /// The residue in `[0, p)` for prime-field elements.
    pub fn residue_value(&self) -> Option<u64> {
        match &self.0 {
            Repr::Residue { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.0 {
            Repr::Small { num, den } => {
                let (n, d) = (*den as i128, *num as i128);
                if d < 0 {
                    Self::from_i128(-n, -d)
                } else {
                    Self::from_i128(n, d)
                }
            }
            Repr::Big(r) => Self::rational(r.recip()),
            Repr::Residue { value, modulus } => {
                Self::residue(pow_mod(*value, modulus - 2, *modulus), *modulus)
            }
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Whether `self = b^2` for some `b` in the same field.
    ///
    /// Over `F_p` this is Euler's criterion; over `Q` the reduced fraction
    /// must be positive with square numerator and denominator.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroHasNoSquareClass);
        }
        Ok(match &self.0 {
            Repr::Residue { value, modulus } => pow_mod(*value, (modulus - 1) / 2, *modulus) == 1,
            _ => {
                let r = self.as_rational().expect("rational");
                r.is_positive() && is_square_int(r.numer()) && is_square_int(r.denom())
            }
        })
    }

    fn big(&self) -> BigRational {
        self.as_rational().expect("rational")
    }
}

fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

fn mismatch(a: &FieldElement, b: &FieldElement) -> ! {
    panic!(
        "arithmetic between elements of different fields ({} and {})",
        a.field(),
        b.field()
    )
}

fn small_add(an: i64, ad: i64, bn: i64, bd: i64) -> FieldElement {
    if ad == 1 && bd == 1 {
        return FieldElement::from_i128(an as i128 + bn as i128, 1);
    }
    let num = an as i128 * bd as i128 + bn as i128 * ad as i128;
    FieldElement::from_i128(num, ad as i128 * bd as i128)
}

fn small_mul(an: i64, ad: i64, bn: i64, bd: i64) -> FieldElement {
    if an == 0 || bn == 0 {
        return FieldElement::small_int(0);
    }
    // Cross-cancel so the product is already reduced.
    let g1 = gcd_u128(an.unsigned_abs() as u128, bd as u128) as i128;
    let g2 = gcd_u128(bn.unsigned_abs() as u128, ad as u128) as i128;
    let num = (an as i128 / g1) * (bn as i128 / g2);
    let den = (ad as i128 / g2) * (bd as i128 / g1);
    match (i64::try_from(num), i64::try_from(den)) {
        (Ok(num), Ok(den)) => FieldElement(Repr::Small { num, den }),
        _ => FieldElement(Repr::Big(BigRational::new_raw(num.into(), den.into()))),
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                small_add(*an, *ad, *bn, *bd)
            }
            (
                Repr::Residue {
                    value: a,
                    modulus: p,
                },
                Repr::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => FieldElement::residue((a + b) % p, *p),
            (Repr::Residue { .. }, _) | (_, Repr::Residue { .. }) => mismatch(self, rhs),
            _ => FieldElement::rational(self.big() + rhs.big()),
        }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd })
                if *bn != i64::MIN =>
            {
                small_add(*an, *ad, -*bn, *bd)
            }
            (
                Repr::Residue {
                    value: a,
                    modulus: p,
                },
                Repr::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => FieldElement::residue((a + p - b) % p, *p),
            (Repr::Residue { .. }, _) | (_, Repr::Residue { .. }) => mismatch(self, rhs),
            _ => FieldElement::rational(self.big() - rhs.big()),
        }
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) => {
                small_mul(*an, *ad, *bn, *bd)
            }
            (
                Repr::Residue {
                    value: a,
                    modulus: p,
                },
                Repr::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => FieldElement::residue(a * b % p, *p),
            (Repr::Residue { .. }, _) | (_, Repr::Residue { .. }) => mismatch(self, rhs),
            _ => FieldElement::rational(self.big() * rhs.big()),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        match &self.0 {
            Repr::Small { num, den } if *num != i64::MIN => FieldElement(Repr::Small {
                num: -num,
                den: *den,
            }),
            Repr::Residue { value, modulus } => {
                FieldElement::residue((modulus - value) % modulus, *modulus)
            }
            _ => FieldElement::rational(-self.big()),
        }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! forward_binop {
    ($Trait:ident, $method:ident, $AssignTrait:ident, $assign:ident) => {
        impl $Trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $Trait<&'a FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &'a FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }

        impl<'a> $Trait<FieldElement> for &'a FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }

        impl $AssignTrait<&FieldElement> for FieldElement {
            fn $assign(&mut self, rhs: &FieldElement) {
                *self = (&*self).$method(rhs);
            }
        }

        impl $AssignTrait<FieldElement> for FieldElement {
            fn $assign(&mut self, rhs: FieldElement) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl fmt::Display for FieldElement {
    /// Decimal integers, or `num/den` for non-integral rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}
