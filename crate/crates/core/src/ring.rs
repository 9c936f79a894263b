//! Exact arithmetic in `Z[λ]`, `λ = 2cos(π/p)`.
//!
//! Elements are integer coefficient vectors in the power basis
//! `1, λ, …, λ^(d-1)` where `d = φ(2p)/2`. Products are always reduced modulo
//! the minimal polynomial, so two elements are equal exactly when their
//! coefficient vectors are equal. Signs under the real embedding are decided
//! exactly by interval refinement (see [`RingContext::sign`]).

mod enclosure;
mod minpoly;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use enclosure::LambdaEnclosure;

/// Integer type of the coefficients.
pub type Coeff = i128;

/// Largest coefficient magnitude accepted by the division routines, leaving
/// headroom for the intermediate products.
const DIVIDE_BOUND: Coeff = 1 << 60;

/// Default iteration cap for the pseudo-Euclidean chain.
pub const DEFAULT_MAX_ITER: usize = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("p must be at least 3 (got {0})")]
    InvalidOrder(u32),
    #[error("element has {got} coefficients but the ring has degree {expected}")]
    ContextMismatch { expected: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("pseudo-Euclidean chain did not terminate within {0} steps")]
    NonTermination(usize),
    #[error("coefficients exceed the supported range")]
    Overflow,
    #[error("element is not divisible by 2")]
    NotDivisible,
    #[error("malformed ring element `{0}`")]
    Parse(String),
}

/// Sign of a real number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn negate(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// The four ring operations exposed by [`RingContext::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Neg,
}

/// An element of `Z[λ]`: coefficient `i` multiplies `λ^i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    coeffs: SmallVec<[Coeff; 4]>,
}

impl RingElem {
    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// True when the element is the rational integer `n`.
    pub fn is_int(&self, n: Coeff) -> bool {
        self.coeffs[0] == n && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Greatest common divisor of the coefficients (0 for the zero element).
    pub fn content(&self) -> Coeff {
        self.coeffs.iter().fold(0, |g, &c| g.gcd(&c))
    }

    fn from_slice(c: &[Coeff]) -> Self {
        RingElem { coeffs: SmallVec::from_slice(c) }
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `[c0,c1,...]`, base 10, no spaces.
impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for RingElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(|c| *c as i64))
    }
}

/// Parses the coefficient-list grammar without checking the degree; use
/// [`RingContext::parse_elem`] to validate against a ring.
impl FromStr for RingElem {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| RingError::Parse(s.to_string()))?;
        let coeffs = inner
            .split(',')
            .map(|tok| tok.trim().parse::<Coeff>().map_err(|_| RingError::Parse(s.to_string())))
            .collect::<Result<SmallVec<[Coeff; 4]>, _>>()?;
        if coeffs.is_empty() {
            return Err(RingError::Parse(s.to_string()));
        }
        Ok(RingElem { coeffs })
    }
}

/// Minimal polynomial of `2cos(π/p)` over the rationals, little-endian and
/// monic, of degree `φ(2p)/2`.
pub fn minimal_polynomial(p: u32) -> Result<Vec<Coeff>, RingError> {
    if p < 3 {
        return Err(RingError::InvalidOrder(p));
    }
    Ok(minpoly::real_cyclotomic(p))
}

/// Shared, immutable description of `Z[λ_p]`.
#[derive(Debug)]
pub struct RingContext {
    p: u32,
    degree: usize,
    min_poly: Vec<Coeff>,
    /// `fold[j]` is `λ^(degree + j)` reduced to the power basis.
    fold: Vec<SmallVec<[Coeff; 4]>>,
    lambda_approx: f64,
    lambda_pows_approx: Vec<f64>,
    max_iter: usize,
    enclosure: LambdaEnclosure,
}

impl RingContext {
    pub fn new(p: u32) -> Result<Arc<Self>, RingError> {
        Self::with_max_iter(p, DEFAULT_MAX_ITER)
    }

    /// Context whose pseudo-Euclidean chains stop after `max_iter` steps.
    pub fn with_max_iter(p: u32, max_iter: usize) -> Result<Arc<Self>, RingError> {
        let min_poly = minimal_polynomial(p)?;
        let degree = min_poly.len() - 1;

        let mut fold: Vec<SmallVec<[Coeff; 4]>> = Vec::with_capacity(degree.saturating_sub(1));
        if degree > 1 {
            // λ^d = -Σ m_i λ^i
            let mut cur: SmallVec<[Coeff; 4]> = min_poly[..degree].iter().map(|&m| -m).collect();
            fold.push(cur.clone());
            for _ in 1..degree - 1 {
                let top = cur[degree - 1];
                let mut next: SmallVec<[Coeff; 4]> = smallvec![0; degree];
                next[1..degree].copy_from_slice(&cur[..degree - 1]);
                for i in 0..degree {
                    next[i] -= top * min_poly[i];
                }
                cur = next;
                fold.push(cur.clone());
            }
        }

        let lambda_approx = 2.0 * (std::f64::consts::PI / p as f64).cos();
        let lambda_pows_approx = (0..degree).map(|i| lambda_approx.powi(i as i32)).collect();
        let enclosure = LambdaEnclosure::new(min_poly.clone(), lambda_approx);
        Ok(Arc::new(RingContext {
            p,
            degree,
            min_poly,
            fold,
            lambda_approx,
            lambda_pows_approx,
            max_iter,
            enclosure,
        }))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[Coeff] {
        &self.min_poly
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn is_even(&self) -> bool {
        self.p % 2 == 0
    }

    /// Floating-point value of λ. Never used to decide anything.
    pub fn lambda_f64(&self) -> f64 {
        self.lambda_approx
    }

    /// Current rigorous bracket around λ, rounded to floats.
    pub fn lambda_interval(&self) -> (f64, f64) {
        if self.degree == 1 {
            return (1.0, 1.0);
        }
        self.enclosure.bracket_f64()
    }

    /// Whether interval evaluation of the minimal polynomial on the
    /// enclosure of λ at refinement `level` contains zero.
    pub fn min_poly_encloses_zero(&self, level: usize) -> bool {
        self.degree == 1 || self.enclosure.min_poly_straddles_zero(level)
    }

    // ---- construction -------------------------------------------------

    /// Validated element from explicit coefficients.
    pub fn elem(&self, coeffs: &[Coeff]) -> Result<RingElem, RingError> {
        if coeffs.len() != self.degree {
            return Err(RingError::ContextMismatch { expected: self.degree, got: coeffs.len() });
        }
        Ok(RingElem::from_slice(coeffs))
    }

    pub fn parse_elem(&self, s: &str) -> Result<RingElem, RingError> {
        let e: RingElem = s.parse()?;
        self.check(&e)?;
        Ok(e)
    }

    pub fn check(&self, x: &RingElem) -> Result<(), RingError> {
        if x.coeffs.len() != self.degree {
            return Err(RingError::ContextMismatch { expected: self.degree, got: x.coeffs.len() });
        }
        Ok(())
    }

    pub fn zero(&self) -> RingElem {
        RingElem { coeffs: smallvec![0; self.degree] }
    }

    pub fn int(&self, n: Coeff) -> RingElem {
        let mut z = self.zero();
        z.coeffs[0] = n;
        z
    }

    pub fn one(&self) -> RingElem {
        self.int(1)
    }

    /// `λ` itself (equal to `1` when `p = 3`).
    pub fn lambda(&self) -> RingElem {
        if self.degree == 1 {
            return RingElem::from_slice(&[-self.min_poly[0]]);
        }
        let mut z = self.zero();
        z.coeffs[1] = 1;
        z
    }

    // ---- arithmetic ---------------------------------------------------

    pub fn arith(&self, op: ArithOp, x: &RingElem, y: &RingElem) -> Result<RingElem, RingError> {
        self.check(x)?;
        self.check(y)?;
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Sub => self.sub(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Neg => self.neg(x),
        })
    }

    pub fn add(&self, x: &RingElem, y: &RingElem) -> RingElem {
        debug_assert_eq!(x.coeffs.len(), y.coeffs.len());
        RingElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, x: &RingElem, y: &RingElem) -> RingElem {
        debug_assert_eq!(x.coeffs.len(), y.coeffs.len());
        RingElem { coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self, x: &RingElem) -> RingElem {
        RingElem { coeffs: x.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, x: &RingElem, k: Coeff) -> RingElem {
        RingElem { coeffs: x.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, x: &RingElem, y: &RingElem) -> RingElem {
        let d = self.degree;
        debug_assert_eq!(x.coeffs.len(), d);
        debug_assert_eq!(y.coeffs.len(), d);
        if d == 1 {
            return RingElem { coeffs: smallvec![x.coeffs[0] * y.coeffs[0]] };
        }
        let mut prod: SmallVec<[Coeff; 8]> = smallvec![0; 2 * d - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let mut out: SmallVec<[Coeff; 4]> = SmallVec::from_slice(&prod[..d]);
        for (j, row) in self.fold.iter().enumerate() {
            let c = prod[d + j];
            if c != 0 {
                for (o, &f) in out.iter_mut().zip(row.iter()) {
                    *o += c * f;
                }
            }
        }
        RingElem { coeffs: out }
    }

    /// `x * λ`.
    pub fn mul_lambda(&self, x: &RingElem) -> RingElem {
        self.mul(x, &self.lambda())
    }

    pub fn pow(&self, x: &RingElem, mut e: u32) -> RingElem {
        let mut base = x.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    // ---- order ----------------------------------------------------------

    /// Exact sign of `x` under `λ ↦ 2cos(π/p)`.
    pub fn sign(&self, x: &RingElem) -> Sign {
        if x.is_zero() {
            return Sign::Zero;
        }
        if self.degree == 1 {
            return if x.coeffs[0] > 0 { Sign::Positive } else { Sign::Negative };
        }
        self.enclosure.sign_nonzero(&x.coeffs)
    }

    /// `|x|` under the real embedding.
    pub fn abs(&self, x: &RingElem) -> RingElem {
        if self.sign(x) == Sign::Negative {
            self.neg(x)
        } else {
            x.clone()
        }
    }

    /// Compares the embeddings of `x` and `y`.
    pub fn cmp_real(&self, x: &RingElem, y: &RingElem) -> std::cmp::Ordering {
        match self.sign(&self.sub(x, y)) {
            Sign::Negative => std::cmp::Ordering::Less,
            Sign::Zero => std::cmp::Ordering::Equal,
            Sign::Positive => std::cmp::Ordering::Greater,
        }
    }

    /// Floating-point approximation of the embedding. Only used for guesses
    /// that are subsequently checked exactly, and for display.
    pub fn approx(&self, x: &RingElem) -> f64 {
        x.coeffs.iter().zip(&self.lambda_pows_approx).map(|(&c, &l)| c as f64 * l).sum()
    }

    // ---- pseudo-Euclidean division -----------------------------------

    /// Writes `a = b·(nλ) + r` with `|r| ≤ |bλ|/2`. On the boundary, where
    /// both neighbouring quotients qualify, the one with `r ≥ 0` is taken.
    pub fn pseudo_divide(&self, a: &RingElem, b: &RingElem) -> Result<(i64, RingElem), RingError> {
        self.check(a)?;
        self.check(b)?;
        if b.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        if a.coeffs.iter().chain(&b.coeffs).any(|c| c.abs() > DIVIDE_BOUND) {
            return Err(RingError::Overflow);
        }
        if a.is_zero() {
            return Ok((0, self.zero()));
        }
        let bl = self.mul_lambda(b);
        let s = self.sign(&bl);
        // Work with c = |bλ| > 0 and y = s·a, so that r = s·(y - n c).
        let (c, y) = if s == Sign::Negative { (self.neg(&bl), self.neg(a)) } else { (bl.clone(), a.clone()) };
        let two_y = self.scale(&y, 2);

        // upper(n): (2n+1)c - 2y >= 0, monotone in n.
        let upper = |n: i64| -> bool {
            let t = self.sub(&self.scale(&c, 2 * n as Coeff + 1), &two_y);
            self.sign(&t) != Sign::Negative
        };

        let guess = self.approx(&y) / self.approx(&c);
        let mut n = if guess.is_finite() && guess.abs() < 1e15 { guess.round() as i64 } else { 0 };
        // Find the least n with upper(n); from a good guess this is 0 or 1 steps.
        if upper(n) {
            let mut step = 1i64;
            let mut lo = n - step;
            while upper(lo) {
                n = lo;
                step *= 2;
                lo = n - step;
            }
            // upper(lo) false, upper(n) true
            let (mut l, mut h) = (lo, n);
            while h - l > 1 {
                let m = l + (h - l) / 2;
                if upper(m) {
                    h = m;
                } else {
                    l = m;
                }
            }
            n = h;
        } else {
            let mut step = 1i64;
            let mut hi = n + step;
            while !upper(hi) {
                n = hi;
                step *= 2;
                hi = n + step;
            }
            let (mut l, mut h) = (n, hi);
            while h - l > 1 {
                let m = l + (h - l) / 2;
                if upper(m) {
                    h = m;
                } else {
                    l = m;
                }
            }
            n = h;
        }

        // Boundary tie: (2n+1)c == 2y, so n and n+1 both qualify; r_n = s·c/2.
        let boundary = self.sub(&self.scale(&c, 2 * n as Coeff + 1), &two_y).is_zero();
        if boundary && s == Sign::Negative {
            n += 1;
        }
        let r = self.sub(a, &self.scale(&bl, n as Coeff));
        Ok((n, r))
    }

    /// Terminal value `(a, b)_p` of the pseudo-Euclidean chain, made
    /// positive. `(a, 0)_p = |a|`.
    pub fn pseudo_gcd(&self, a: &RingElem, b: &RingElem) -> Result<RingElem, RingError> {
        self.check(a)?;
        self.check(b)?;
        let mut x = a.clone();
        let mut y = b.clone();
        for _ in 0..=self.max_iter {
            if y.is_zero() {
                return Ok(self.abs(&x));
            }
            // Coefficient blow-up means the chain is running away from a unit.
            let (_, r) = match self.pseudo_divide(&x, &y) {
                Err(RingError::Overflow) => return Err(RingError::NonTermination(self.max_iter)),
                other => other?,
            };
            x = y;
            y = r;
        }
        Err(RingError::NonTermination(self.max_iter))
    }

    /// `x / 2` when every coefficient is even.
    pub fn halve(&self, x: &RingElem) -> Result<RingElem, RingError> {
        if x.coeffs.iter().any(|c| c % 2 != 0) {
            return Err(RingError::NotDivisible);
        }
        Ok(RingElem { coeffs: x.coeffs.iter().map(|c| c / 2).collect() })
    }
}

/// An element of `Q(λ)` with a rational-integer denominator, kept in lowest
/// terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: RingElem,
    den: Coeff,
}

impl FieldElem {
    pub fn new(num: RingElem, den: Coeff) -> Result<Self, RingError> {
        if den == 0 {
            return Err(RingError::DivisionByZero);
        }
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = RingElem { coeffs: num.coeffs.iter().map(|c| -c).collect() };
            den = -den;
        }
        let g = num.content().gcd(&den);
        if num.is_zero() {
            den = 1;
        } else if g > 1 {
            num = RingElem { coeffs: num.coeffs.iter().map(|c| c / g).collect() };
            den /= g;
        }
        Ok(FieldElem { num, den })
    }

    pub fn from_ring(x: RingElem) -> Self {
        FieldElem { num: x, den: 1 }
    }

    pub fn num(&self) -> &RingElem {
        &self.num
    }

    pub fn den(&self) -> Coeff {
        self.den
    }

    /// The ring element, when the denominator is 1.
    pub fn to_ring(&self) -> Option<RingElem> {
        (self.den == 1).then(|| self.num.clone())
    }

    pub fn add(&self, ctx: &RingContext, other: &FieldElem) -> FieldElem {
        let n = ctx.add(&ctx.scale(&self.num, other.den), &ctx.scale(&other.num, self.den));
        FieldElem::new(n, self.den * other.den).expect("nonzero denominators")
    }

    pub fn sub(&self, ctx: &RingContext, other: &FieldElem) -> FieldElem {
        self.add(ctx, &other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { num: RingElem { coeffs: self.num.coeffs.iter().map(|c| -c).collect() }, den: self.den }
    }

    pub fn mul(&self, ctx: &RingContext, other: &FieldElem) -> FieldElem {
        FieldElem::new(ctx.mul(&self.num, &other.num), self.den * other.den).expect("nonzero denominators")
    }

    /// Cross-multiplicative equality; agrees with `==` on canonical forms.
    pub fn cross_eq(&self, ctx: &RingContext, other: &FieldElem) -> bool {
        ctx.scale(&self.num, other.den) == ctx.scale(&other.num, self.den)
    }

    pub fn sign(&self, ctx: &RingContext) -> Sign {
        ctx.sign(&self.num)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}
