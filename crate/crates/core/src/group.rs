//! Determinant-one matrices over `Z[λ]` taken up to sign, and the Hecke group
//! `Γ_p` inside them.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::ring::{Coeff, RingContext, RingElem, RingError, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("matrix has determinant {0}, expected 1")]
    NotDeterminantOne(RingElem),
    #[error("elements belong to different rings (p = {0} and p = {1})")]
    ContextMismatch(u32, u32),
    #[error("malformed matrix `{0}`")]
    Parse(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Raw 2×2 matrix `[m11, m12, m21, m22]`, not sign-normalised.
pub type Mat = [RingElem; 4];

pub(crate) fn mat_mul(ctx: &RingContext, x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, j: usize| {
        ctx.add(&ctx.mul(&x[2 * i], &y[j]), &ctx.mul(&x[2 * i + 1], &y[2 + j]))
    };
    [e(0, 0), e(0, 1), e(1, 0), e(1, 1)]
}

/// Adjugate, which is the inverse for determinant one.
pub(crate) fn mat_adj(ctx: &RingContext, x: &Mat) -> Mat {
    [x[3].clone(), ctx.neg(&x[1]), ctx.neg(&x[2]), x[0].clone()]
}

pub(crate) fn mat_neg(ctx: &RingContext, x: &Mat) -> Mat {
    [ctx.neg(&x[0]), ctx.neg(&x[1]), ctx.neg(&x[2]), ctx.neg(&x[3])]
}

pub(crate) fn mat_det(ctx: &RingContext, x: &Mat) -> RingElem {
    ctx.sub(&ctx.mul(&x[0], &x[3]), &ctx.mul(&x[1], &x[2]))
}

pub(crate) fn mat_identity(ctx: &RingContext) -> Mat {
    [ctx.one(), ctx.zero(), ctx.zero(), ctx.one()]
}

/// `x == ±y`.
pub(crate) fn mat_eq_projective(x: &Mat, y: &Mat) -> bool {
    if x == y {
        return true;
    }
    x.iter()
        .zip(y.iter())
        .all(|(a, b)| a.coeffs().iter().zip(b.coeffs()).all(|(u, v)| *u == -*v))
}

pub(crate) fn mat_is_projective_identity(x: &Mat) -> bool {
    x[1].is_zero() && x[2].is_zero() && ((x[0].is_int(1) && x[3].is_int(1)) || (x[0].is_int(-1) && x[3].is_int(-1)))
}

/// Picks the lift whose first nonzero entry (row-major) is positive.
pub(crate) fn mat_normalize(ctx: &RingContext, x: Mat) -> Mat {
    for e in x.iter() {
        match ctx.sign(e) {
            Sign::Zero => continue,
            Sign::Positive => return x,
            Sign::Negative => return mat_neg(ctx, &x),
        }
    }
    x
}

fn fmt_mat(m: &Mat, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    write!(f, "[[{},{}],[{},{}]]", m[0], m[1], m[2], m[3])
}

/// An element of `PSL(2, Z[λ])` in canonical sign form.
#[derive(Clone)]
pub struct GroupElement {
    ctx: Arc<RingContext>,
    m: Mat,
}

impl GroupElement {
    /// Checks the determinant and normalises the sign.
    pub fn new(ctx: &Arc<RingContext>, m: Mat) -> Result<Self, GroupError> {
        for e in m.iter() {
            ctx.check(e)?;
        }
        let det = mat_det(ctx, &m);
        if !det.is_int(1) {
            return Err(GroupError::NotDeterminantOne(det));
        }
        Ok(Self::from_mat(ctx, m))
    }

    /// From entries given as integer coefficient slices.
    pub fn from_coeffs(ctx: &Arc<RingContext>, entries: [&[Coeff]; 4]) -> Result<Self, GroupError> {
        let m = [ctx.elem(entries[0])?, ctx.elem(entries[1])?, ctx.elem(entries[2])?, ctx.elem(entries[3])?];
        Self::new(ctx, m)
    }

    /// Determinant one is the caller's responsibility.
    pub(crate) fn from_mat(ctx: &Arc<RingContext>, m: Mat) -> Self {
        debug_assert!(mat_det(ctx, &m).is_int(1));
        GroupElement { ctx: Arc::clone(ctx), m: mat_normalize(ctx, m) }
    }

    pub fn identity(ctx: &Arc<RingContext>) -> Self {
        GroupElement { ctx: Arc::clone(ctx), m: mat_identity(ctx) }
    }

    /// Parses `[[e,e],[e,e]]` where each `e` is a ring element `[c0,...]`.
    pub fn parse(ctx: &Arc<RingContext>, s: &str) -> Result<Self, GroupError> {
        let nested: Vec<Vec<Vec<Coeff>>> =
            serde_json::from_str(s.trim()).map_err(|_| GroupError::Parse(s.to_string()))?;
        if nested.len() != 2 || nested.iter().any(|row| row.len() != 2) {
            return Err(GroupError::Parse(s.to_string()));
        }
        Self::from_coeffs(ctx, [&nested[0][0], &nested[0][1], &nested[1][0], &nested[1][1]])
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn entries(&self) -> &Mat {
        &self.m
    }

    pub fn a(&self) -> &RingElem {
        &self.m[0]
    }
    pub fn b(&self) -> &RingElem {
        &self.m[1]
    }
    pub fn c(&self) -> &RingElem {
        &self.m[2]
    }
    pub fn d(&self) -> &RingElem {
        &self.m[3]
    }

    fn same_ring(&self, other: &GroupElement) -> Result<(), GroupError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.p() == other.ctx.p() {
            Ok(())
        } else {
            Err(GroupError::ContextMismatch(self.ctx.p(), other.ctx.p()))
        }
    }

    pub fn try_mul(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        self.same_ring(other)?;
        Ok(self.mul(other))
    }

    /// Product; panics on mismatched rings (use [`Self::try_mul`] otherwise).
    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        assert_eq!(self.ctx.p(), other.ctx.p(), "multiplying elements of different Hecke groups");
        Self::from_mat(&self.ctx, mat_mul(&self.ctx, &self.m, &other.m))
    }

    pub fn inverse(&self) -> GroupElement {
        Self::from_mat(&self.ctx, mat_adj(&self.ctx, &self.m))
    }

    pub fn pow(&self, n: i64) -> GroupElement {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = mat_identity(&self.ctx);
        let mut sq = base.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = mat_mul(&self.ctx, &acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = mat_mul(&self.ctx, &sq, &sq);
            }
        }
        Self::from_mat(&self.ctx, acc)
    }

    /// `x · self · x⁻¹`.
    pub fn conjugate_by(&self, x: &GroupElement) -> GroupElement {
        x.mul(self).mul(&x.inverse())
    }

    pub fn is_identity(&self) -> bool {
        mat_is_projective_identity(&self.m)
    }

    /// Trace of the canonical lift.
    pub fn trace(&self) -> RingElem {
        self.ctx.add(&self.m[0], &self.m[3])
    }

    /// Trace of the lift with nonnegative trace.
    pub fn abs_trace(&self) -> RingElem {
        self.ctx.abs(&self.trace())
    }

    /// Elliptic, parabolic or hyperbolic according to `tr² - 4`.
    pub fn classify(&self) -> ElementClass {
        let ctx = &self.ctx;
        let t = self.trace();
        let disc = ctx.sub(&ctx.mul(&t, &t), &ctx.int(4));
        let kind = match ctx.sign(&disc) {
            Sign::Negative => ElementKind::Elliptic,
            Sign::Zero => ElementKind::Parabolic,
            Sign::Positive => ElementKind::Hyperbolic,
        };
        let order = if kind == ElementKind::Elliptic {
            let mut acc = self.m.clone();
            let mut found = None;
            for k in 1..=2 * ctx.p() {
                if mat_is_projective_identity(&acc) {
                    found = Some(k);
                    break;
                }
                acc = mat_mul(ctx, &acc, &self.m);
            }
            found
        } else {
            None
        };
        ElementClass { kind, order }
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.classify().kind == ElementKind::Hyperbolic
    }

    /// Order-two elliptic element.
    pub fn is_involution(&self) -> bool {
        !self.is_identity() && mat_is_projective_identity(&mat_mul(&self.ctx, &self.m, &self.m))
    }

    /// Membership in `Γ_p`: `(a, c)_p = (b, d)_p = 1`.
    pub fn is_member(&self) -> Membership {
        let ctx = &self.ctx;
        let mut verdict = Membership::Member;
        for (x, y) in [(&self.m[0], &self.m[2]), (&self.m[1], &self.m[3])] {
            match ctx.pseudo_gcd(x, y) {
                Ok(g) if g.is_int(1) => {}
                Ok(_) => return Membership::NotMember,
                Err(_) => verdict = Membership::Undetermined,
            }
        }
        verdict
    }

    /// `(b - c : a - d)`, or `∞` when `a = d ≠ …`, or the degenerate value 1.
    pub fn fixed_point_ratio(&self) -> FixedPointRatio {
        let ctx = &self.ctx;
        let [a, b, c, d] = &self.m;
        if a != d {
            FixedPointRatio::Finite { num: ctx.sub(b, c), den: ctx.sub(a, d) }
        } else if b != c {
            FixedPointRatio::Infinity
        } else {
            FixedPointRatio::DegenerateOne
        }
    }

    pub fn is_symmetric_rep(&self) -> bool {
        self.m[1] == self.m[2]
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.p() == other.ctx.p() && self.m == other.m
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.p().hash(state);
        self.m.hash(state);
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ctx.p().cmp(&other.ctx.p()).then_with(|| self.m.cmp(&other.m))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_mat(&self.m, f)
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Γ{}", self.ctx.p())?;
        fmt_mat(&self.m, f)
    }
}

impl Serialize for GroupElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ElementClass {
    pub kind: ElementKind,
    /// Least `k ≤ 2p` with `g^k = 1`, elliptic elements only.
    pub order: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Member,
    NotMember,
    Undetermined,
}

/// Fixed-point ratio as a projective pair, so no field inversion is needed.
#[derive(Debug, Clone)]
pub enum FixedPointRatio {
    Finite { num: RingElem, den: RingElem },
    Infinity,
    DegenerateOne,
}

impl FixedPointRatio {
    /// Cross-multiplicative equality.
    pub fn same_as(&self, ctx: &RingContext, other: &FixedPointRatio) -> bool {
        match (self, other) {
            (FixedPointRatio::Finite { num: n1, den: d1 }, FixedPointRatio::Finite { num: n2, den: d2 }) => {
                ctx.mul(n1, d2) == ctx.mul(n2, d1)
            }
            (FixedPointRatio::Infinity, FixedPointRatio::Infinity) => true,
            (FixedPointRatio::DegenerateOne, FixedPointRatio::DegenerateOne) => true,
            _ => false,
        }
    }

    pub fn negated(&self, ctx: &RingContext) -> FixedPointRatio {
        match self {
            FixedPointRatio::Finite { num, den } => FixedPointRatio::Finite { num: ctx.neg(num), den: den.clone() },
            other => other.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FixedPointRatio::Finite { num, .. } if num.is_zero())
    }

    /// `θ = λ/2 = cos(π/p)`, i.e. `2·num = λ·den`.
    pub fn is_cos_pi_over_p(&self, ctx: &RingContext) -> bool {
        match self {
            FixedPointRatio::Finite { num, den } => ctx.scale(num, 2) == ctx.mul_lambda(den),
            _ => false,
        }
    }

    pub fn is_degenerate_one(&self) -> bool {
        matches!(self, FixedPointRatio::DegenerateOne)
    }

    /// `|θ| < 1` for a finite ratio.
    pub fn inside_unit_interval(&self, ctx: &RingContext) -> bool {
        match self {
            FixedPointRatio::Finite { num, den } => {
                let gap = ctx.sub(&ctx.mul(den, den), &ctx.mul(num, num));
                ctx.sign(&gap) == Sign::Positive
            }
            _ => false,
        }
    }

    /// Approximate value, for display.
    pub fn approx(&self, ctx: &RingContext) -> f64 {
        match self {
            FixedPointRatio::Finite { num, den } => ctx.approx(num) / ctx.approx(den),
            FixedPointRatio::Infinity => f64::INFINITY,
            FixedPointRatio::DegenerateOne => 1.0,
        }
    }

    pub fn describe(&self, ctx: &RingContext) -> String {
        match self {
            FixedPointRatio::Finite { num, den } => format!("{num}/{den}"),
            FixedPointRatio::Infinity => "infinity".to_string(),
            FixedPointRatio::DegenerateOne => {
                let _ = ctx;
                "degenerate_one".to_string()
            }
        }
    }
}

/// Lifts `S` of `ι`, `T` of `α_p`, and `G = ST` of `γ_p = ια_p`.
pub fn generators(ctx: &Arc<RingContext>) -> (GroupElement, GroupElement, GroupElement) {
    let (z, o, l) = (ctx.zero(), ctx.one(), ctx.lambda());
    let s = GroupElement::from_mat(ctx, [z.clone(), ctx.neg(&o), o.clone(), z.clone()]);
    let t = GroupElement::from_mat(ctx, [o.clone(), l.clone(), z.clone(), o.clone()]);
    let g = GroupElement::from_mat(ctx, [z, ctx.neg(&o), o, l]);
    (s, t, g)
}

/// The sequence `a_0 = 0, a_1 = 1, a_{k+1} = λ a_k - a_{k-1}`, up to `a_n`.
pub fn gamma_sequence(ctx: &RingContext, n: usize) -> Vec<RingElem> {
    let mut seq = vec![ctx.zero(), ctx.one()];
    let lambda = ctx.lambda();
    while seq.len() <= n {
        let k = seq.len();
        let next = ctx.sub(&ctx.mul(&lambda, &seq[k - 1]), &seq[k - 2]);
        seq.push(next);
    }
    seq.truncate(n + 1);
    seq
}

/// Raw lift `[[-a_{k-1}, -a_k], [a_k, a_{k+1}]]` of `γ_p^k`.
pub(crate) fn gamma_power_mat(ctx: &RingContext, k: usize) -> Mat {
    let a = gamma_sequence(ctx, k + 1);
    [ctx.neg(&a[k - 1]), ctx.neg(&a[k]), a[k].clone(), a[k + 1].clone()]
}

/// `γ_p^k` for `k ≥ 1` via the entry recurrence.
pub fn gamma_power(ctx: &Arc<RingContext>, k: usize) -> GroupElement {
    assert!(k >= 1, "gamma_power needs k >= 1");
    GroupElement::from_mat(ctx, gamma_power_mat(ctx, k))
}
