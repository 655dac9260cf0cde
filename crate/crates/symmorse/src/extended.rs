//! Extended-precision binary floating point.
//!
//! The series evaluations in this crate (confluent hypergeometric sums,
//! Whittaker connection formulae, Spouge's gamma approximation) suffer
//! catastrophic cancellation in ordinary `f64` for parts of the parameter
//! range we need. `BigFloat` is a small arbitrary-precision binary float —
//! sign, `BigUint` mantissa, binary exponent, working precision in bits —
//! with truncation rounding (error ≤ 1 ulp per operation, toward zero).
//!
//! Only what the solver needs is implemented: field arithmetic, square
//! root, `exp`, `ln`, real powers, π and ln 2 (cached per precision), and
//! Γ via Spouge's formula with exact-integer-factorial coefficients. All
//! functions are pure; the constant caches are guarded by mutexes and grow
//! monotonically in precision.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

/// Arbitrary-precision binary float: `sign * mant * 2^exp`.
///
/// Invariants: `sign ∈ {-1, 0, +1}`; `sign == 0` iff `mant == 0` (and then
/// `exp == 0`); after every arithmetic operation the mantissa is truncated
/// to at most `prec` bits. Exact inputs shorter than `prec` bits are kept
/// exact (no padding), so integer and dyadic arithmetic below the precision
/// limit is error-free.
#[derive(Clone, Debug)]
pub struct BigFloat {
    sign: i8,
    mant: BigUint,
    exp: i64,
    prec: u32,
}

pub const MIN_PREC: u32 = 32;

impl BigFloat {
    // ---------------------------------------------------------------- ctors

    pub fn zero(prec: u32) -> Self {
        BigFloat { sign: 0, mant: BigUint::zero(), exp: 0, prec: prec.max(MIN_PREC) }
    }

    pub fn one(prec: u32) -> Self {
        BigFloat { sign: 1, mant: BigUint::one(), exp: 0, prec: prec.max(MIN_PREC) }
    }

    pub fn from_u64(v: u64, prec: u32) -> Self {
        if v == 0 {
            return Self::zero(prec);
        }
        BigFloat { sign: 1, mant: BigUint::from(v), exp: 0, prec: prec.max(MIN_PREC) }.truncated()
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        let mut r = Self::from_u64(v.unsigned_abs(), prec);
        if v < 0 {
            r.sign = -r.sign;
        }
        r
    }

    pub fn from_biguint(mant: BigUint, exp: i64, prec: u32) -> Self {
        if mant.is_zero() {
            return Self::zero(prec);
        }
        BigFloat { sign: 1, mant, exp, prec: prec.max(MIN_PREC) }.truncated()
    }

    pub fn from_bigint(mant: BigInt, exp: i64, prec: u32) -> Self {
        let (sign, mag) = mant.into_parts();
        let mut r = Self::from_biguint(mag, exp, prec);
        if sign == Sign::Minus {
            r.sign = -r.sign;
        }
        r
    }

    /// Exact conversion: every finite `f64` is a dyadic rational.
    ///
    /// Panics on NaN/infinity — callers validate their inputs first.
    pub fn from_f64(v: f64, prec: u32) -> Self {
        assert!(v.is_finite(), "BigFloat::from_f64 requires a finite value, got {v}");
        if v == 0.0 {
            return Self::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if biased == 0 {
            (frac, -1074) // subnormal
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        let mut r = Self::from_biguint(BigUint::from(mant), exp, prec);
        r.sign *= sign;
        r
    }

    // ------------------------------------------------------------ accessors

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Position of the most significant bit: the value's magnitude lies in
    /// `[2^(hi_pos-1), 2^hi_pos)`. Returns `i64::MIN` for zero.
    pub fn hi_pos(&self) -> i64 {
        if self.sign == 0 {
            i64::MIN
        } else {
            self.mant.bits() as i64 + self.exp
        }
    }

    /// Returns a copy carried at (at least) precision `prec`.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut r = self.clone();
        r.prec = prec.max(MIN_PREC);
        r.truncated()
    }

    /// True when the value is an exact integer.
    pub fn is_integer(&self) -> bool {
        if self.sign == 0 || self.exp >= 0 {
            return true;
        }
        let shift = (-self.exp) as u64;
        if shift >= self.mant.bits() {
            return false; // |value| < 1 and nonzero
        }
        self.mant.trailing_zeros().unwrap_or(0) >= shift
    }

    // ------------------------------------------------------------- rounding

    /// Truncate the mantissa to `prec` bits (round toward zero, ≤ 1 ulp).
    fn truncated(mut self) -> Self {
        if self.sign == 0 {
            return self;
        }
        let bits = self.mant.bits();
        let prec = self.prec as u64;
        if bits > prec {
            let drop = bits - prec;
            self.mant >>= drop;
            self.exp += drop as i64;
            if self.mant.is_zero() {
                return Self::zero(self.prec);
            }
        }
        self
    }

    // ----------------------------------------------------------- comparison

    fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.sign == 0, other.sign == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let ha = self.hi_pos();
        let hb = other.hi_pos();
        if ha != hb {
            return ha.cmp(&hb);
        }
        // Same magnitude order: align to the smaller exponent and compare.
        if self.exp >= other.exp {
            let a = &self.mant << (self.exp - other.exp) as u64;
            a.cmp(&other.mant)
        } else {
            let b = &other.mant << (other.exp - self.exp) as u64;
            self.mant.cmp(&b)
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => {}
            o => return o,
        }
        if self.sign >= 0 {
            self.cmp_abs(other)
        } else {
            other.cmp_abs(self)
        }
    }

    pub fn abs(&self) -> Self {
        let mut r = self.clone();
        if r.sign != 0 {
            r.sign = 1;
        }
        r
    }

    // ----------------------------------------------------------- arithmetic

    fn add_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.sign == 0 {
            return other.with_prec(prec);
        }
        if other.sign == 0 {
            return self.with_prec(prec);
        }
        if self.sign == other.sign {
            let mut r = Self::add_mag(self, other, prec);
            r.sign = self.sign;
            return r.truncated();
        }
        // Opposite signs: subtract magnitudes, larger magnitude wins.
        match self.cmp_abs(other) {
            Ordering::Equal => Self::zero(prec),
            Ordering::Greater => {
                let mut r = Self::sub_mag(self, other, prec);
                r.sign = if r.mant.is_zero() { 0 } else { self.sign };
                r.truncated()
            }
            Ordering::Less => {
                let mut r = Self::sub_mag(other, self, prec);
                r.sign = if r.mant.is_zero() { 0 } else { other.sign };
                r.truncated()
            }
        }
    }

    /// |a| + |b|; drops the smaller operand when the exponent gap makes it
    /// invisible below 1 ulp at the working precision (error ≤ 1 ulp).
    fn add_mag(a: &Self, b: &Self, prec: u32) -> Self {
        let (hi, lo) = if a.hi_pos() >= b.hi_pos() { (a, b) } else { (b, a) };
        let gap = hi.hi_pos() - lo.hi_pos();
        if gap > prec as i64 + 64 {
            return BigFloat { sign: 1, mant: hi.mant.clone(), exp: hi.exp, prec };
        }
        let exp = hi.exp.min(lo.exp);
        let m = (&hi.mant << (hi.exp - exp) as u64) + (&lo.mant << (lo.exp - exp) as u64);
        BigFloat { sign: 1, mant: m, exp, prec }
    }

    /// |a| − |b| for |a| > |b|, same gap policy as `add_mag`.
    fn sub_mag(a: &Self, b: &Self, prec: u32) -> Self {
        let gap = a.hi_pos() - b.hi_pos();
        if gap > prec as i64 + 64 {
            return BigFloat { sign: 1, mant: a.mant.clone(), exp: a.exp, prec };
        }
        let exp = a.exp.min(b.exp);
        let m = (&a.mant << (a.exp - exp) as u64) - (&b.mant << (b.exp - exp) as u64);
        BigFloat { sign: 1, mant: m, exp, prec }
    }

    fn sub_impl(&self, other: &Self) -> Self {
        self.add_impl(&other.neg_impl())
    }

    fn neg_impl(&self) -> Self {
        let mut r = self.clone();
        r.sign = -r.sign;
        r
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        if self.sign == 0 || other.sign == 0 {
            return Self::zero(prec);
        }
        BigFloat {
            sign: self.sign * other.sign,
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
            prec,
        }
        .truncated()
    }

    fn div_impl(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        assert!(other.sign != 0, "BigFloat division by zero");
        if self.sign == 0 {
            return Self::zero(prec);
        }
        let extra = (other.mant.bits() as i64 - self.mant.bits() as i64).max(0) as u64;
        let shift = prec as u64 + 64 + extra;
        let q = (&self.mant << shift) / &other.mant;
        BigFloat {
            sign: self.sign * other.sign,
            mant: q,
            exp: self.exp - other.exp - shift as i64,
            prec,
        }
        .truncated()
    }

    /// Exact scaling by a power of two.
    pub fn mul_pow2(&self, n: i64) -> Self {
        let mut r = self.clone();
        if r.sign != 0 {
            r.exp += n;
        }
        r
    }

    // ---------------------------------------------------------- conversions

    /// Round to the nearest `f64` (≤ 1 ulp beyond f64's own rounding; the
    /// mantissa is first truncated to 64 bits, then converted).
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let bits = self.mant.bits();
        let take = bits.min(64);
        let top: u64 = ((&self.mant >> (bits - take)) & BigUint::from(u64::MAX))
            .to_u64()
            .expect("top 64 bits fit");
        let mut v = top as f64;
        let mut e = self.exp + (bits - take) as i64;
        while e > 0 {
            let s = e.min(512);
            v *= 2f64.powi(s as i32);
            e -= s;
            if v.is_infinite() {
                break;
            }
        }
        while e < 0 {
            let s = (-e).min(512);
            v /= 2f64.powi(s as i32);
            e += s;
            if v == 0.0 {
                break;
            }
        }
        if self.sign < 0 {
            -v
        } else {
            v
        }
    }

    // --------------------------------------------------- elementary functions

    /// Square root by integer square root on a widened mantissa.
    pub fn sqrt(&self) -> Self {
        assert!(self.sign >= 0, "BigFloat::sqrt of a negative value");
        if self.sign == 0 {
            return self.clone();
        }
        let prec = self.prec;
        let want = 2 * (prec as u64 + 2);
        let bits = self.mant.bits();
        let mut shift = want.saturating_sub(bits);
        if (self.exp - shift as i64).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift;
        let r = m.sqrt();
        BigFloat { sign: 1, mant: r, exp: (self.exp - shift as i64) / 2, prec }.truncated()
    }

    /// e^x. Range reduction x = n·ln2 + r with |r| ≤ ln2, then Taylor.
    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.sign == 0 {
            return Self::one(prec);
        }
        let approx = self.to_f64();
        assert!(approx.abs() < 1e9, "BigFloat::exp argument out of supported range");
        let wp = prec + 48;
        let x = self.with_prec(wp);
        let n = (approx / std::f64::consts::LN_2).round() as i64;
        let r = &x - &ln2(wp).mul_int(n);
        // Taylor around 0: Σ r^k / k!
        let mut sum = Self::one(wp);
        let mut term = Self::one(wp);
        let mut k: u64 = 1;
        loop {
            term = &(&term * &r) / &Self::from_u64(k, wp);
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
            if term.hi_pos() < sum.hi_pos() - (wp as i64 + 2) {
                break;
            }
            k += 1;
            assert!(k < 100_000, "BigFloat::exp failed to converge");
        }
        sum.mul_pow2(n).with_prec(prec)
    }

    /// Natural logarithm (x > 0) via atanh series on the mantissa in [1, 2).
    pub fn ln(&self) -> Self {
        assert!(self.sign > 0, "BigFloat::ln requires a positive value");
        let prec = self.prec;
        let wp = prec + 48;
        let bits = self.mant.bits() as i64;
        // m = mant · 2^{-(bits-1)} ∈ [1, 2);   self = m · 2^{exp + bits - 1}
        let m = BigFloat { sign: 1, mant: self.mant.clone(), exp: -(bits - 1), prec: wp };
        let e = self.exp + bits - 1;
        let one = Self::one(wp);
        let u = &(&m - &one) / &(&m + &one); // [0, 1/3)
        let mut ln_m = Self::zero(wp);
        if !u.is_zero() {
            let u2 = &u * &u;
            let mut power = u.clone();
            let mut k: u64 = 0;
            let threshold = u.hi_pos() - (wp as i64 + 2);
            loop {
                ln_m = &ln_m + &(&power / &Self::from_u64(2 * k + 1, wp));
                power = &power * &u2;
                if power.is_zero() || power.hi_pos() < threshold {
                    break;
                }
                k += 1;
                assert!(k < 1_000_000, "BigFloat::ln failed to converge");
            }
            ln_m = ln_m.mul_pow2(1);
        }
        (&ln_m + &ln2(wp).mul_int(e)).with_prec(prec)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, n: i64) -> Self {
        let prec = self.prec;
        if n == 0 {
            return Self::one(prec);
        }
        let wp = prec + 32;
        let mut base = self.with_prec(wp);
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(wp);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        let acc = acc.with_prec(prec);
        if n < 0 {
            &Self::one(prec) / &acc
        } else {
            acc
        }
    }

    /// x^y for x > 0 via exp(y ln x).
    pub fn pow_real(&self, y: &Self) -> Self {
        let prec = self.prec.max(y.prec);
        if y.is_zero() {
            return Self::one(prec);
        }
        let wp = prec + 32;
        (&y.with_prec(wp) * &self.with_prec(wp).ln()).exp().with_prec(prec)
    }

    /// Multiplication by a machine integer (exact up to the working
    /// precision's truncation).
    fn mul_int(&self, n: i64) -> Self {
        self * &Self::from_i64(n, self.prec)
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

macro_rules! bf_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl<'a, 'b> $trait<&'b BigFloat> for &'a BigFloat {
            type Output = BigFloat;
            fn $method(self, rhs: &'b BigFloat) -> BigFloat {
                self.$impl_fn(rhs)
            }
        }
    };
}
bf_binop!(Add, add, add_impl);
bf_binop!(Sub, sub, sub_impl);
bf_binop!(Mul, mul, mul_impl);
bf_binop!(Div, div, div_impl);

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        self.neg_impl()
    }
}

// ------------------------------------------------------------------ constants

struct ConstCache {
    by_prec: Mutex<HashMap<u32, Arc<BigFloat>>>,
}

impl ConstCache {
    fn new() -> Self {
        ConstCache { by_prec: Mutex::new(HashMap::new()) }
    }

    fn get(&self, prec: u32, compute: impl Fn(u32) -> BigFloat) -> BigFloat {
        let mut map = self.by_prec.lock().expect("constant cache poisoned");
        if let Some(v) = map.get(&prec) {
            return (**v).clone();
        }
        // Reuse any sufficiently precise cached value.
        if let Some((_, v)) = map.iter().filter(|(p, _)| **p >= prec + 16).min_by_key(|(p, _)| **p)
        {
            let out = v.with_prec(prec);
            map.insert(prec, Arc::new(out.clone()));
            return out;
        }
        let v = compute(prec);
        map.insert(prec, Arc::new(v.clone()));
        v
    }
}

fn pi_cache() -> &'static ConstCache {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    CACHE.get_or_init(ConstCache::new)
}

fn ln2_cache() -> &'static ConstCache {
    static CACHE: OnceLock<ConstCache> = OnceLock::new();
    CACHE.get_or_init(ConstCache::new)
}

/// arctan(1/n) in fixed point with `frac_bits` fractional bits (n ≥ 2).
fn atan_inv_fixed(n: u64, frac_bits: u64) -> BigInt {
    let scale = BigUint::one() << frac_bits;
    let n2 = BigUint::from(n * n);
    let mut power = scale / BigUint::from(n); // (1/n)^(2k+1) scaled
    let mut sum = BigInt::from_biguint(Sign::Plus, power.clone()); // k = 0 term
    let mut k: u64 = 1;
    loop {
        power /= &n2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigUint::from(2 * k + 1);
        if term.is_zero() {
            break; // power only shrinks and 2k+1 grows: all later terms are 0
        }
        let t = BigInt::from_biguint(Sign::Plus, term);
        if k % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        k += 1;
    }
    sum
}

/// π at the requested precision (Machin's formula), cached.
pub fn pi(prec: u32) -> BigFloat {
    pi_cache().get(prec.max(MIN_PREC), |p| {
        let fb = p as u64 + 64;
        let a5 = atan_inv_fixed(5, fb);
        let a239 = atan_inv_fixed(239, fb);
        let fixed = a5 * BigInt::from(16) - a239 * BigInt::from(4);
        BigFloat::from_bigint(fixed, -(fb as i64), p)
    })
}

/// ln 2 at the requested precision (2·atanh(1/3)), cached.
pub fn ln2(prec: u32) -> BigFloat {
    ln2_cache().get(prec.max(MIN_PREC), |p| {
        let fb = p as u64 + 64;
        let scale = BigUint::one() << fb;
        let mut power = scale / BigUint::from(3u32); // 3^-(2k+1) scaled
        let mut sum = power.clone();
        let mut k: u64 = 1;
        loop {
            power /= BigUint::from(9u32);
            if power.is_zero() {
                break;
            }
            sum += &power / BigUint::from(2 * k + 1);
            k += 1;
        }
        BigFloat::from_biguint(sum << 1, -(fb as i64), p)
    })
}

// -------------------------------------------------------------------- gamma

/// Spouge parameter: relative error ~ (2π)^{-(a+1/2)}, i.e. ≈ 2.65 bits per
/// unit of `a`.
fn spouge_a(prec: u32) -> u64 {
    ((prec as f64) / 2.65).ceil() as u64 + 8
}

struct SpougeCache {
    by_prec: Mutex<HashMap<u32, Arc<Vec<BigFloat>>>>,
}

fn spouge_cache() -> &'static SpougeCache {
    static CACHE: OnceLock<SpougeCache> = OnceLock::new();
    CACHE.get_or_init(|| SpougeCache { by_prec: Mutex::new(HashMap::new()) })
}

/// Spouge coefficients c_0 = √(2π), c_k = (−1)^{k−1}(a−k)^{k−1/2} e^{a−k}/(k−1)!
/// at working precision `wp`, cached per precision.
fn spouge_coeffs(wp: u32) -> Arc<Vec<BigFloat>> {
    let mut map = spouge_cache().by_prec.lock().expect("spouge cache poisoned");
    if let Some(v) = map.get(&wp) {
        return Arc::clone(v);
    }
    let a = spouge_a(wp);
    let mut coeffs = Vec::with_capacity(a as usize);
    let two_pi = pi(wp).mul_pow2(1);
    coeffs.push(two_pi.sqrt());
    let mut factorial = BigUint::one(); // (k-1)! running
    let half = BigFloat::from_f64(0.5, wp);
    for k in 1..a {
        if k >= 2 {
            factorial *= BigUint::from(k - 1);
        }
        let amk = BigFloat::from_u64(a - k, wp);
        // (a-k)^(k-1/2)
        let e = &BigFloat::from_u64(k, wp) - &half;
        let pow = amk.pow_real(&e);
        let expf = BigFloat::from_u64(a - k, wp).exp();
        let fact = BigFloat::from_biguint(factorial.clone(), 0, wp);
        let mut c = &(&pow * &expf) / &fact;
        if k % 2 == 0 {
            c = -&c;
        }
        coeffs.push(c);
    }
    let arc = Arc::new(coeffs);
    map.insert(wp, Arc::clone(&arc));
    arc
}

/// Γ(z) for real z that is not zero or a negative integer.
///
/// Negative and small arguments are shifted up with Γ(z) = Γ(z+1)/z until
/// z ≥ 1, then Spouge's formula is applied. Relative error is a few ulps at
/// the requested precision.
pub fn gamma(z: &BigFloat, prec: u32) -> Result<BigFloat, GammaError> {
    if z.is_zero() || (z.sign() < 0 && z.is_integer()) {
        return Err(GammaError::Pole);
    }
    let wp = prec + 64;
    let mut w = z.with_prec(wp);
    let one = BigFloat::one(wp);
    let mut denom = BigFloat::one(wp);
    // Shift until w ≥ 1.
    while w.cmp_value(&one) == Ordering::Less {
        denom = &denom * &w;
        w = &w + &one;
        if denom.is_zero() {
            return Err(GammaError::Pole);
        }
    }
    let coeffs = spouge_coeffs(wp);
    let a = spouge_a(wp);
    // Γ(w) with w ≥ 1: Spouge at s = w - 1 ≥ 0.
    let s = &w - &one;
    let mut sum = coeffs[0].clone();
    for (k, c) in coeffs.iter().enumerate().skip(1) {
        let dk = &s + &BigFloat::from_u64(k as u64, wp);
        sum = &sum + &(c / &dk);
    }
    let sa = &s + &BigFloat::from_u64(a, wp);
    let exponent = &s + &BigFloat::from_f64(0.5, wp);
    let g = &(&sum * &sa.pow_real(&exponent)) * &(-&sa).exp();
    Ok((&g / &denom).with_prec(prec))
}

/// Γ's only failure mode on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaError {
    /// z is zero or a negative integer.
    Pole,
}

impl std::fmt::Display for GammaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "gamma function pole (argument is zero or a negative integer)")
    }
}

impl std::error::Error for GammaError {}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference values below were produced by an independent 50-digit
    /// arbitrary-precision evaluation and are stored as a two-f64 hi/lo sum
    /// (hi + lo reproduces ~32 significant digits).
    fn hi_lo(hi: f64, lo: f64, prec: u32) -> BigFloat {
        &BigFloat::from_f64(hi, prec) + &BigFloat::from_f64(lo, prec)
    }

    /// |a - b| / |b| as f64 (b nonzero).
    fn rel_err(a: &BigFloat, b: &BigFloat) -> f64 {
        let d = &(a - b) / b;
        d.to_f64().abs()
    }

    #[test]
    fn f64_roundtrip_is_exact() {
        for &v in &[
            0.0,
            1.0,
            -3.5,
            1e-300,
            -1.2345678912345e10,
            f64::MIN_POSITIVE,
            5e-324,
            0.1,
            std::f64::consts::PI,
        ] {
            let b = BigFloat::from_f64(v, 64);
            assert_eq!(b.to_f64().to_bits(), v.to_bits(), "roundtrip failed for {v}");
        }
    }

    #[test]
    fn dyadic_arithmetic_is_exact() {
        let p = 128;
        let a = BigFloat::from_f64(0.125, p);
        let b = BigFloat::from_f64(0.25, p);
        assert_eq!((&a + &b).to_f64(), 0.375);
        assert_eq!((&a * &b).to_f64(), 0.03125);
        // (1 + 2^-80) - 1 = 2^-80 exactly at 128-bit precision.
        let one = BigFloat::one(p);
        let tiny = BigFloat::one(p).mul_pow2(-80);
        let sum = &one + &tiny;
        let back = &sum - &one;
        assert_eq!(back.cmp_value(&tiny), Ordering::Equal);
    }

    #[test]
    fn division_and_sqrt_meet_precision() {
        let p = 128;
        let third = &BigFloat::one(p) / &BigFloat::from_u64(3, p);
        let recon = &third * &BigFloat::from_u64(3, p);
        assert!(rel_err(&recon, &BigFloat::one(p)) < 1e-36);
        let two = BigFloat::from_u64(2, p);
        let r = two.sqrt();
        assert!(rel_err(&(&r * &r), &two) < 1e-36);
        // Exponent-parity case: sqrt(2^-201).
        let t = BigFloat::one(p).mul_pow2(-201);
        let s = t.sqrt();
        assert!(rel_err(&(&s * &s), &t) < 1e-36);
    }

    #[test]
    fn pi_matches_reference() {
        let p = 192;
        let reference = hi_lo(3.141592653589793, 1.2246467991473532e-16, p);
        assert!(rel_err(&pi(p), &reference) < 1e-31);
    }

    #[test]
    fn ln2_matches_reference() {
        let p = 192;
        let reference = hi_lo(0.6931471805599453, 2.3190468138462996e-17, p);
        assert!(rel_err(&ln2(p), &reference) < 1e-31);
    }

    #[test]
    fn exp_matches_reference() {
        let p = 192;
        // exp(5.25)
        let x = BigFloat::from_f64(5.25, p);
        let reference = hi_lo(190.56626845863, 4.4213804551803864e-15, p);
        assert!(rel_err(&x.exp(), &reference) < 1e-30);
        // exp(-1)
        let xm1 = BigFloat::from_i64(-1, p);
        let reference = hi_lo(0.36787944117144233, -1.2428753672788363e-17, p);
        assert!(rel_err(&xm1.exp(), &reference) < 1e-30);
        // exp(2) = e^2
        let x2 = BigFloat::from_u64(2, p);
        let reference = hi_lo(7.38905609893065, -1.7971139497839148e-16, p);
        assert!(rel_err(&x2.exp(), &reference) < 1e-30);
        // exp(0) = 1 exactly
        assert_eq!(BigFloat::zero(p).exp().to_f64(), 1.0);
    }

    #[test]
    fn ln_matches_reference() {
        let p = 192;
        // ln(3.6 e) where 3.6 e is supplied as a hi/lo reference value
        let t0 = hi_lo(9.785814582452563, -1.247417079754509e-17, p);
        let reference = hi_lo(2.2809338454620645, -1.4001399100991097e-16, p);
        assert!(rel_err(&t0.ln(), &reference) < 1e-30);
        // ln(exp(1)) = 1
        let e = BigFloat::one(p).exp();
        assert!(rel_err(&e.ln(), &BigFloat::one(p)) < 1e-40);
        // ln(1) = 0 exactly
        assert!(BigFloat::one(p).ln().is_zero());
        // ln(2^100) = 100 ln 2
        let big = BigFloat::one(p).mul_pow2(100);
        let expected = &ln2(p) * &BigFloat::from_u64(100, p);
        assert!(rel_err(&big.ln(), &expected) < 1e-40);
    }

    #[test]
    fn powers_compose() {
        let p = 160;
        let two = BigFloat::from_u64(2, p);
        let half = BigFloat::from_f64(0.5, p);
        assert!(rel_err(&two.pow_real(&half), &two.sqrt()) < 1e-40);
        let c = BigFloat::from_f64(1.7, p);
        assert!(rel_err(&c.powi(7), &c.pow_real(&BigFloat::from_u64(7, p))) < 1e-40);
        let inv = c.powi(-3);
        let direct = &BigFloat::one(p) / &c.powi(3);
        assert!(rel_err(&inv, &direct) < 1e-40);
    }

    #[test]
    fn gamma_matches_reference() {
        let p = 192;
        // Γ(0.5) = √π
        let g = gamma(&BigFloat::from_f64(0.5, p), p).unwrap();
        let reference = hi_lo(1.772453850905516, -7.666586499825799e-17, p);
        assert!(rel_err(&g, &reference) < 1e-30);
        // Γ(7.25)
        let g = gamma(&BigFloat::from_f64(7.25, p), p).unwrap();
        let reference = hi_lo(1155.3810139199898, -6.76651526228037e-14, p);
        assert!(rel_err(&g, &reference) < 1e-30);
        // Γ(-2.7) — negative non-integer argument via recurrence shift
        let g = gamma(&BigFloat::from_f64(-2.7, p), p).unwrap();
        let reference = hi_lo(-0.931082784838964, 4.055478833876187e-17, p);
        assert!(rel_err(&g, &reference) < 1e-30);
        // Γ(5) = 24
        let g = gamma(&BigFloat::from_u64(5, p), p).unwrap();
        assert!(rel_err(&g, &BigFloat::from_u64(24, p)) < 1e-40);
        // Γ(1) = 1
        let g = gamma(&BigFloat::one(p), p).unwrap();
        assert!(rel_err(&g, &BigFloat::one(p)) < 1e-40);
    }

    #[test]
    fn gamma_rejects_poles() {
        let p = 96;
        assert_eq!(gamma(&BigFloat::zero(p), p), Err(GammaError::Pole));
        assert_eq!(gamma(&BigFloat::from_i64(-3, p), p), Err(GammaError::Pole));
    }

    #[test]
    fn tiny_magnitudes_survive_to_f64() {
        let p = 96;
        let t = BigFloat::one(p).mul_pow2(-740);
        let v = t.to_f64();
        assert!(v > 0.0 && v.is_finite());
        assert!((v.log2() - (-740.0)).abs() < 1e-9);
    }

    #[test]
    fn comparisons_order_values() {
        let p = 96;
        let a = BigFloat::from_f64(1.5, p);
        let b = BigFloat::from_f64(-2.5, p);
        let c = BigFloat::from_f64(1.5000001, p);
        assert_eq!(a.cmp_value(&b), Ordering::Greater);
        assert_eq!(b.cmp_value(&a), Ordering::Less);
        assert_eq!(a.cmp_value(&c), Ordering::Less);
        assert_eq!(a.cmp_value(&a.clone()), Ordering::Equal);
        // Values with very different exponents but equal top positions.
        let d = BigFloat::from_f64(3.0, p).mul_pow2(-600);
        assert_eq!(d.cmp_value(&a), Ordering::Less);
        assert_eq!(d.sign(), 1);
    }

    #[test]
    fn integer_detection() {
        let p = 96;
        assert!(BigFloat::from_f64(4.0, p).is_integer());
        assert!(BigFloat::from_f64(-17.0, p).is_integer());
        assert!(!BigFloat::from_f64(0.5, p).is_integer());
        assert!(!BigFloat::from_f64(-2.7, p).is_integer());
        assert!(BigFloat::zero(p).is_integer());
        assert!(!BigFloat::from_f64(1e-20, p).is_integer());
    }
}
