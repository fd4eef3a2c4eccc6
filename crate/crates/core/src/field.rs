//! Valued fields with an exact, computable non-Archimedean valuation.
//!
//! Two backends are provided:
//!
//! * [`Q`] with the trivial valuation (`v(x) = 0` for `x != 0`);
//! * [`RatFunc`], rational functions in one indeterminate `t` over `Q` with the
//!   `t`-adic valuation `ord_t(num) - ord_t(den)`.
//!
//! Absolute values `|x| = e^{-v(x)}` are never materialized; every comparison in
//! the crate happens on valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::rational::{self, Q};
use crate::{Error, Result};

/// A valuation value: an exact rational or `+inf` (the valuation of zero).
///
/// Also used as the `-log` of a norm value, where `+inf` is the norm of the zero vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Q),
    Infinite,
}

impl Valuation {
    pub fn zero() -> Self {
        Valuation::Finite(Q::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinite => None,
        }
    }

    pub fn plus(&self, q: &Q) -> Valuation {
        match self {
            Valuation::Finite(v) => Valuation::Finite(v + q),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    TrivialQ,
    TAdic,
}

/// An exact field with a valuation, as consumed by the linear algebra and norm code.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    fn backend() -> Backend;
    fn valuation(&self) -> Valuation;
    fn from_rational(q: &Q) -> Self;
    fn to_scalar(&self) -> Scalar;
    fn from_scalar(s: &Scalar) -> Result<Self>;

    /// Integer valuation of a nonzero element, when the value group is discrete.
    fn integer_valuation(&self) -> Option<i64> {
        self.valuation().finite().filter(|q| rational::is_integer(q)).and_then(|q| q.to_integer().to_i64())
    }

    /// The uniformizer raised to `e`, if the valuation is discrete and nontrivial.
    fn uniformizer_pow(e: i64) -> Option<Self>;
}

impl Field for Q {
    fn backend() -> Backend {
        Backend::TrivialQ
    }

    fn valuation(&self) -> Valuation {
        if self.is_zero() {
            Valuation::Infinite
        } else {
            Valuation::zero()
        }
    }

    fn from_rational(q: &Q) -> Self {
        q.clone()
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::Q(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::Q(q) => Ok(q.clone()),
            Scalar::T(_) => Err(Error::BackendMismatch),
        }
    }

    fn uniformizer_pow(_e: i64) -> Option<Self> {
        None
    }
}

/// Dense polynomial in `t` with integer coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: BigInt, deg: usize) -> Self {
        let mut v = vec![BigInt::zero(); deg];
        v.push(c);
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.0.last()
    }

    /// Order of vanishing at `t = 0`.
    pub fn order(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    fn scale_div(&self, c: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|x| x / c).collect())
    }

    fn scale(&self, c: &BigInt) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        self.scale_div(&c)
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Pseudo-remainder of `self` by `d` (`d` nonzero).
    fn prem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let ld = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            let shifted = d.mul(&Poly::monomial(lr, dr - dd));
            r = r.scale(&ld).add(&shifted.neg());
        }
        r
    }

    /// Primitive gcd in `Z[t]` (equivalently, gcd in `Q[t]` normalized to a primitive integer polynomial).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.primitive_part();
        let mut b = o.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// Exact division, assuming `d` divides `self` in `Z[t]`.
    fn div_exact(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let ld = d.leading().unwrap();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.0.len().saturating_sub(dd).max(1)];
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let (c, rem) = r.leading().unwrap().div_rem(ld);
            debug_assert!(rem.is_zero(), "inexact polynomial division");
            q[dr - dd] = c.clone();
            r = r.add(&d.mul(&Poly::monomial(c, dr - dd)).neg());
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Poly::new(q)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{sign}")?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{a}t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{a}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Rational function `num/den` in `Q(t)`, kept in a canonical reduced form:
/// `gcd(num, den) = 1`, joint integer content 1, and `den` has positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Malformed("zero denominator".into()));
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc { num: Poly(vec![]), den: Poly::from_i64(&[1]) };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) =
            if g.degree().unwrap_or(0) > 0 { (num.div_exact(&g), den.div_exact(&g)) } else { (num, den) };
        let mut c = n.content().gcd(&d.content());
        if d.leading().is_some_and(|l| l.is_negative()) {
            c = -c;
        }
        if !c.is_one() {
            n = n.scale_div(&c);
            d = d.scale_div(&c);
        }
        RatFunc { num: n, den: d }
    }

    pub fn t() -> Self {
        RatFunc { num: Poly::from_i64(&[0, 1]), den: Poly::from_i64(&[1]) }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self::reduce(p, Poly::from_i64(&[1]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn t_pow(e: i64) -> Self {
        let m = Poly::monomial(BigInt::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            Self::from_poly(m)
        } else {
            Self::reduce(Poly::from_i64(&[1]), m)
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::from_i64(&[1]) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly(vec![]), den: Poly::from_i64(&[1]) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc { num: Poly::from_i64(&[1]), den: Poly::from_i64(&[1]) }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        if self.den == o.den {
            return Self::reduce(self.num.add(&o.num), self.den);
        }
        Self::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den }
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: RatFunc) -> RatFunc {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: RatFunc) -> RatFunc {
        Self::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero, like integer division.
    fn div(self, o: RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        Self::reduce(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}

impl Field for RatFunc {
    fn backend() -> Backend {
        Backend::TAdic
    }

    fn valuation(&self) -> Valuation {
        match (self.num.order(), self.den.order()) {
            (None, _) => Valuation::Infinite,
            (Some(a), Some(b)) => Valuation::Finite(rational::int(a as i64 - b as i64)),
            (Some(_), None) => unreachable!("denominator is never zero"),
        }
    }

    fn from_rational(q: &Q) -> Self {
        Self::reduce(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
    }

    fn to_scalar(&self) -> Scalar {
        Scalar::T(self.clone())
    }

    fn from_scalar(s: &Scalar) -> Result<Self> {
        match s {
            Scalar::T(r) => Ok(r.clone()),
            Scalar::Q(_) => Err(Error::BackendMismatch),
        }
    }

    fn uniformizer_pow(e: i64) -> Option<Self> {
        Some(RatFunc::t_pow(e))
    }
}

/// Backend-tagged scalar, the unit of the JSON interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Q),
    T(RatFunc),
}

impl Scalar {
    pub fn backend(&self) -> Backend {
        match self {
            Scalar::Q(_) => Backend::TrivialQ,
            Scalar::T(_) => Backend::TAdic,
        }
    }

    pub fn valuation(&self) -> Valuation {
        valuation(self)
    }

    pub fn to_json(&self) -> Value {
        match self {
            Scalar::Q(q) => json!({ "q": rational::render(q) }),
            Scalar::T(r) => json!({ "t": { "num": poly_json(&r.num), "den": poly_json(&r.den) } }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Scalar> {
        let obj = v.as_object().ok_or_else(|| Error::Parse(format!("scalar must be an object, got {v}")))?;
        if let Some(q) = obj.get("q") {
            return Ok(Scalar::Q(rational::q_from_json(q)?));
        }
        if let Some(t) = obj.get("t") {
            let num = poly_from_json(t.get("num").ok_or_else(|| Error::Parse("t-scalar needs \"num\"".into()))?)?;
            let den = match t.get("den") {
                Some(d) => poly_from_json(d)?,
                None => Poly::from_i64(&[1]),
            };
            return Ok(Scalar::T(RatFunc::new(num, den)?));
        }
        Err(Error::Parse(format!("scalar needs a \"q\" or \"t\" key: {v}")))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::T(r) => write!(f, "{r}"),
        }
    }
}

/// Valuation of a tagged scalar; `+inf` exactly for zero.
pub fn valuation(x: &Scalar) -> Valuation {
    match x {
        Scalar::Q(q) => q.valuation(),
        Scalar::T(r) => r.valuation(),
    }
}

fn poly_json(p: &Poly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| match c.to_i64() {
                Some(i) => json!(i),
                None => Value::String(c.to_string()),
            })
            .collect(),
    )
}

fn poly_from_json(v: &Value) -> Result<Poly> {
    let items = v.as_array().ok_or_else(|| Error::Parse(format!("polynomial must be an array, got {v}")))?;
    let mut coeffs = Vec::with_capacity(items.len());
    for item in items {
        let c = match item {
            Value::Number(n) => {
                n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("non-integer coefficient {n}")))?
            }
            Value::String(s) => s.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))?,
            other => return Err(Error::Parse(format!("bad coefficient {other}"))),
        };
        coeffs.push(c);
    }
    Ok(Poly::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(num), Poly::from_i64(den)).unwrap()
    }

    #[test]
    fn trivial_valuation_examples() {
        assert_eq!(valuation(&Scalar::Q(frac(7, 3))), Valuation::zero());
        assert_eq!(valuation(&Scalar::Q(int(0))), Valuation::Infinite);
    }

    #[test]
    fn tadic_valuation_example() {
        // (t^2 + t^3) / (1 - t)
        let x = rf(&[0, 0, 1, 1], &[1, -1]);
        assert_eq!(valuation(&Scalar::T(x)), Valuation::Finite(int(2)));
        assert_eq!(RatFunc::t_pow(-3).valuation(), Valuation::Finite(int(-3)));
    }

    #[test]
    fn ratfunc_is_reduced() {
        // (t^2 - 1)/(2t - 2) = (t + 1)/2
        let x = rf(&[-1, 0, 1], &[-2, 2]);
        assert_eq!(x, rf(&[1, 1], &[2]));
        assert_eq!(x.clone() * rf(&[2], &[1]), rf(&[1, 1], &[1]));
        assert!((x.clone() - x).is_zero());
        let y = rf(&[1, 2, 3], &[4, 0, 1]);
        assert_eq!((y.clone() / y.clone()), RatFunc::one());
    }

    #[test]
    fn scalar_json_round_trip() {
        let s = Scalar::T(rf(&[0, 0, 1, 1], &[1, -1]));
        assert_eq!(Scalar::from_json(&s.to_json()).unwrap(), s);
        let q = Scalar::Q(frac(-5, 4));
        assert_eq!(q.to_json(), json!({"q": "-5/4"}));
        assert_eq!(Scalar::from_json(&q.to_json()).unwrap(), q);
    }

    fn random_q(rng: &mut ChaCha8Rng) -> Q {
        if rng.gen_bool(0.1) {
            return int(0);
        }
        frac(rng.gen_range(-9..=9), rng.gen_range(1..=5))
    }

    fn random_poly(rng: &mut ChaCha8Rng) -> Poly {
        let low = rng.gen_range(0..3);
        let len = rng.gen_range(1..4);
        let mut c = vec![0i64; low];
        for _ in 0..len {
            c.push(rng.gen_range(-4..=4));
        }
        if c.iter().all(|&x| x == 0) {
            c.push(1);
        }
        Poly::from_i64(&c)
    }

    fn random_t(rng: &mut ChaCha8Rng) -> RatFunc {
        if rng.gen_bool(0.1) {
            return RatFunc::zero();
        }
        RatFunc::new(random_poly(rng), random_poly(rng)).unwrap()
    }

    fn check_laws<F: Field>(x: &F, y: &F) {
        let vx = x.valuation();
        let vy = y.valuation();
        assert_eq!((x.clone() * y.clone()).valuation(), vx.clone() + vy.clone());
        let vs = (x.clone() + y.clone()).valuation();
        let m = vx.clone().min(vy.clone());
        assert!(vs >= m);
        if vx != vy {
            assert_eq!(vs, m);
        }
    }

    #[test]
    fn multiplicative_and_ultrametric_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            check_laws(&random_q(&mut rng), &random_q(&mut rng));
            check_laws(&random_t(&mut rng), &random_t(&mut rng));
        }
    }
}
