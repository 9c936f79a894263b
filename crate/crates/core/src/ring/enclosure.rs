//! Dyadic interval enclosures of `λ = 2cos(π/p)` and of its powers.
//!
//! Every enclosure is rigorous: the bounds are exact big integers over a
//! power of two, refined by bisection on the exact sign of the minimal
//! polynomial. Floating point only seeds the initial bracket, which is then
//! checked exactly.

use std::cmp::Ordering;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Coeff, Sign};

/// Precision of the i128 fast path.
const FAST_BITS: u32 = 60;
/// Precision of the first big-integer level; level k uses `BASE_BITS << k`.
const BASE_BITS: u64 = 64;

/// Power enclosures at one precision: `lo[i] <= λ^i * 2^bits <= hi[i]`.
#[derive(Debug)]
struct Level {
    lo: Vec<BigInt>,
    hi: Vec<BigInt>,
}

#[derive(Debug)]
struct Bracket {
    /// `λ ∈ [lo, hi] / 2^bits`.
    lo: BigInt,
    hi: BigInt,
    bits: u64,
    sign_at_lo: Ordering,
}

#[derive(Debug)]
pub(crate) struct LambdaEnclosure {
    min_poly: Vec<Coeff>,
    degree: usize,
    fast: Option<(Vec<i128>, Vec<i128>)>,
    state: Mutex<(Bracket, Vec<Arc<Level>>)>,
}

/// `2^(bits*deg) * f(n / 2^bits)`, exact.
fn eval_scaled(poly: &[Coeff], n: &BigInt, bits: u64) -> BigInt {
    let deg = poly.len() - 1;
    let mut acc = BigInt::zero();
    // Horner on the homogenised form: acc = acc * n + c_i * 2^(bits * (deg - i)).
    for (i, &c) in poly.iter().enumerate().rev() {
        acc *= n;
        if c != 0 {
            acc += BigInt::from(c) << (bits * (deg - i) as u64) as usize;
        }
    }
    acc
}

fn ordering_of(x: &BigInt) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl LambdaEnclosure {
    pub(crate) fn new(min_poly: Vec<Coeff>, approx: f64) -> Self {
        let degree = min_poly.len() - 1;
        let bracket = Self::initial_bracket(&min_poly, approx);
        let mut enc = LambdaEnclosure {
            min_poly,
            degree,
            fast: None,
            state: Mutex::new((bracket, Vec::new())),
        };
        if degree > 1 {
            let level0 = enc.level(0);
            enc.fast = Self::fast_from(&level0, degree);
        }
        enc
    }

    fn initial_bracket(poly: &[Coeff], approx: f64) -> Bracket {
        let bits: u64 = 48;
        let scale = (1u64 << bits) as f64;
        let mut radius = 1e-10;
        for _ in 0..8 {
            let lo = BigInt::from(((approx - radius) * scale).floor() as i128);
            let hi = BigInt::from(((approx + radius) * scale).ceil() as i128);
            let slo = ordering_of(&eval_scaled(poly, &lo, bits));
            let shi = ordering_of(&eval_scaled(poly, &hi, bits));
            if slo != Ordering::Equal && shi != Ordering::Equal && slo != shi {
                return Bracket { lo, hi, bits, sign_at_lo: slo };
            }
            if poly.len() == 2 {
                // Linear (p = 3): λ is the rational root itself.
                let root = -BigInt::from(poly[0]) << bits as usize;
                return Bracket { lo: root.clone(), hi: root, bits, sign_at_lo: Ordering::Equal };
            }
            radius *= 1024.0;
        }
        panic!("failed to isolate 2cos(pi/p) for minimal polynomial {poly:?}");
    }

    fn refine(&self, bracket: &mut Bracket, target: u64) {
        while bracket.bits < target {
            bracket.bits += 1;
            let lo2 = &bracket.lo << 1usize;
            let hi2 = &bracket.hi << 1usize;
            let mid = &bracket.lo + &bracket.hi;
            let s = ordering_of(&eval_scaled(&self.min_poly, &mid, bracket.bits));
            if s == Ordering::Equal {
                // Only possible for a rational root, excluded for degree > 1.
                bracket.lo = mid.clone();
                bracket.hi = mid;
            } else if s == bracket.sign_at_lo {
                bracket.lo = mid;
                bracket.hi = hi2;
            } else {
                bracket.lo = lo2;
                bracket.hi = mid;
            }
        }
    }

    /// Power enclosures at `BASE_BITS << k` bits, computed on demand.
    fn level(&self, k: usize) -> Arc<Level> {
        let mut guard = self.state.lock().expect("enclosure lock poisoned");
        let (bracket, levels) = &mut *guard;
        while levels.len() <= k {
            let bits = BASE_BITS << levels.len();
            self.refine(bracket, bits);
            let shift = bracket.bits - bits;
            // Round outward when dropping the extra bits of the bracket.
            let lo = &bracket.lo >> shift as usize;
            let hi = {
                let h = &bracket.hi;
                let q = h >> shift as usize;
                if (&q << shift as usize) == *h { q } else { q + 1 }
            };
            let mut lo_pows = Vec::with_capacity(self.degree);
            let mut hi_pows = Vec::with_capacity(self.degree);
            let one = BigInt::one() << bits as usize;
            lo_pows.push(one.clone());
            hi_pows.push(one);
            let mut lo_raw = BigInt::one();
            let mut hi_raw = BigInt::one();
            for i in 1..self.degree {
                lo_raw *= &lo;
                hi_raw *= &hi;
                let s = bits as usize * (i - 1);
                lo_pows.push(&lo_raw >> s);
                let q: BigInt = &hi_raw >> s;
                hi_pows.push(if (&q << s) == hi_raw { q } else { q + 1 });
            }
            levels.push(Arc::new(Level { lo: lo_pows, hi: hi_pows }));
        }
        Arc::clone(&levels[k])
    }

    fn fast_from(level: &Level, degree: usize) -> Option<(Vec<i128>, Vec<i128>)> {
        let drop = (BASE_BITS as u32 - FAST_BITS) as usize;
        let mut lo = Vec::with_capacity(degree);
        let mut hi = Vec::with_capacity(degree);
        for i in 0..degree {
            lo.push((&level.lo[i] >> drop).to_i128()?);
            let h = &level.hi[i];
            let q: BigInt = h >> drop;
            let q = if (&q << drop) == *h { q } else { q + 1 };
            let q = q.to_i128()?;
            // Leave headroom for the coefficient products.
            if q > (1i128 << 100) {
                return None;
            }
            hi.push(q);
        }
        Some((lo, hi))
    }

    fn fast_sign(&self, coeffs: &[Coeff]) -> Option<Sign> {
        let (lo, hi) = self.fast.as_ref()?;
        let mut lo_sum: i128 = 0;
        let mut hi_sum: i128 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let (a, b) = if c > 0 { (lo[i], hi[i]) } else { (hi[i], lo[i]) };
            lo_sum = lo_sum.checked_add(c.checked_mul(a)?)?;
            hi_sum = hi_sum.checked_add(c.checked_mul(b)?)?;
        }
        if lo_sum > 0 {
            Some(Sign::Positive)
        } else if hi_sum < 0 {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    fn level_sign(level: &Level, coeffs: &[Coeff]) -> Option<Sign> {
        let mut lo_sum = BigInt::zero();
        let mut hi_sum = BigInt::zero();
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let bc = BigInt::from(c);
            let (a, b) = if c > 0 { (&level.lo[i], &level.hi[i]) } else { (&level.hi[i], &level.lo[i]) };
            lo_sum += &bc * a;
            hi_sum += &bc * b;
        }
        if lo_sum.is_positive() {
            Some(Sign::Positive)
        } else if hi_sum.is_negative() {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    /// Sign of a nonzero element of degree > 1 under the real embedding.
    /// Terminates because the embedding of a nonzero canonical element is
    /// nonzero and the enclosure width shrinks to zero.
    pub(crate) fn sign_nonzero(&self, coeffs: &[Coeff]) -> Sign {
        if let Some(s) = self.fast_sign(coeffs) {
            return s;
        }
        let mut k = 0;
        loop {
            let level = self.level(k);
            if let Some(s) = Self::level_sign(&level, coeffs) {
                return s;
            }
            k += 1;
        }
    }

    /// Current bracket of λ, rounded to floats.
    pub(crate) fn bracket_f64(&self) -> (f64, f64) {
        let guard = self.state.lock().expect("enclosure lock poisoned");
        let b = &guard.0;
        let scale = 2f64.powi(b.bits as i32);
        (
            b.lo.to_f64().unwrap_or(f64::NAN) / scale,
            b.hi.to_f64().unwrap_or(f64::NAN) / scale,
        )
    }

    /// Evaluates the minimal polynomial on the current bracket with interval
    /// arithmetic and reports whether the result straddles zero.
    pub(crate) fn min_poly_straddles_zero(&self, level: usize) -> bool {
        let lvl = self.level(level);
        let d = self.degree;
        // min_poly = λ^d + Σ m_i λ^i; λ^d enclosure from λ^(d-1) * λ.
        let bits = BASE_BITS << level;
        let (lam_lo, lam_hi) = if d > 1 { (&lvl.lo[1], &lvl.hi[1]) } else { return true };
        let top_lo: BigInt = (&lvl.lo[d - 1] * lam_lo) >> bits as usize;
        let top_hi: BigInt = ((&lvl.hi[d - 1] * lam_hi) >> bits as usize) + 1;
        let mut lo_sum = top_lo;
        let mut hi_sum = top_hi;
        for i in 0..d {
            let c = self.min_poly[i];
            if c == 0 {
                continue;
            }
            let bc = BigInt::from(c);
            let (a, b) = if c > 0 { (&lvl.lo[i], &lvl.hi[i]) } else { (&lvl.hi[i], &lvl.lo[i]) };
            lo_sum += &bc * a;
            hi_sum += &bc * b;
        }
        !lo_sum.is_positive() && !hi_sum.is_negative()
    }
}
