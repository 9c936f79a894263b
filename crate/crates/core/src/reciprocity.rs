//! Reciprocity decisions, involutive reciprocators and the canonical
//! fixed-point ratio of reciprocal hyperbolic elements.

use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::group::{mat_adj, mat_eq_projective, mat_is_projective_identity, mat_mul, ElementKind, FixedPointRatio, GroupElement, Mat};
use crate::ring::{RingContext, Sign};
use crate::words::{conjugacy_witness, cyclic_reduce, matrix_to_word, primitive_root, Evaluator, Letter, Word, WordTable};

/// Default conjugator search depth, in letters.
pub const DEFAULT_DEPTH: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReciprocityError {
    #[error("matrix is not a member of the Hecke group")]
    NotAMember,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("element is not reciprocal")]
    NotReciprocal,
    #[error("no verified reciprocator among words of length <= {0}")]
    SearchExhausted(usize),
    #[error("no canonical conjugate among conjugators of length <= {0}")]
    DepthExhausted(usize),
    #[error("element is not an involution")]
    NotAnInvolution,
    #[error("fixed-point ratio is 1 or infinite")]
    DegenerateTheta,
    #[error("fixed-point ratio does not satisfy |theta| < 1")]
    ThetaOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReciprocityKind {
    Identity,
    Involution,
    HyperbolicReciprocal,
    NotReciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReciprocatorType {
    IotaClass,
    GammaClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalTheta {
    Zero,
    One,
    CosPiOverP,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReciprocityVerdict {
    pub reciprocal: bool,
    pub kind: ReciprocityKind,
    pub reciprocator: Option<(Word, GroupElement)>,
    pub reciprocator_type: Option<ReciprocatorType>,
    pub canonical_theta: Option<CanonicalTheta>,
    /// Conjugator realising `canonical_theta`.
    pub witness: Option<Word>,
}

impl ReciprocityVerdict {
    fn not_reciprocal() -> Self {
        ReciprocityVerdict {
            reciprocal: false,
            kind: ReciprocityKind::NotReciprocal,
            reciprocator: None,
            reciprocator_type: None,
            canonical_theta: None,
            witness: None,
        }
    }

    /// A reciprocal hyperbolic whose canonical conjugate was not reached.
    pub fn is_inconclusive(&self) -> bool {
        self.kind == ReciprocityKind::HyperbolicReciprocal && self.canonical_theta.is_none()
    }
}

impl Serialize for ReciprocityVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ReciprocityVerdict", 7)?;
        st.serialize_field("reciprocal", &self.reciprocal)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("reciprocator_word", &self.reciprocator.as_ref().map(|r| &r.0))?;
        st.serialize_field("reciprocator_matrix", &self.reciprocator.as_ref().map(|r| &r.1))?;
        st.serialize_field("reciprocator_type", &self.reciprocator_type)?;
        st.serialize_field("canonical_theta", &self.canonical_theta)?;
        st.serialize_field("witness_word", &self.witness)?;
        st.end()
    }
}

/// `h g h⁻¹ = g⁻¹` and `h² = 1`, checked as `h g = g⁻¹ h`.
pub(crate) fn reverses(ctx: &RingContext, h: &Mat, g: &Mat) -> bool {
    let lhs = mat_mul(ctx, h, g);
    let rhs = mat_mul(ctx, &mat_adj(ctx, g), h);
    mat_eq_projective(&lhs, &rhs) && mat_is_projective_identity(&mat_mul(ctx, h, h))
}

/// Public form of the reciprocator check on group elements.
pub fn is_involutive_reciprocator(h: &GroupElement, g: &GroupElement) -> bool {
    reverses(g.ctx(), h.entries(), g.entries())
}

/// Holds the generator lifts and a conjugator table shared by all searches
/// at one `p`.
#[derive(Clone)]
pub struct Reciprocity {
    ev: Evaluator,
    table: Arc<WordTable>,
    bfs_depth: usize,
    theta_depth: usize,
}

impl Reciprocity {
    pub fn new(ctx: &Arc<RingContext>) -> Self {
        Self::with_depths(ctx, DEFAULT_DEPTH, DEFAULT_DEPTH)
    }

    pub fn with_depths(ctx: &Arc<RingContext>, bfs_depth: usize, theta_depth: usize) -> Self {
        let ev = Evaluator::new(ctx);
        let table = Arc::new(WordTable::new(&ev, bfs_depth.max(theta_depth)));
        Reciprocity { ev, table, bfs_depth, theta_depth }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        self.ev.ctx()
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.ev
    }

    pub fn table(&self) -> &Arc<WordTable> {
        &self.table
    }

    /// Word for `g`, checked by re-evaluation.
    pub fn word_of(&self, g: &GroupElement) -> Result<Word, ReciprocityError> {
        let w = matrix_to_word(g).map_err(|_| ReciprocityError::NotAMember)?;
        if self.ev.evaluate(&w) != *g {
            return Err(ReciprocityError::NotAMember);
        }
        Ok(w)
    }

    pub fn is_reciprocal(&self, g: &GroupElement) -> Result<ReciprocityVerdict, ReciprocityError> {
        let w = self.word_of(g)?;
        if g.is_identity() {
            return Ok(ReciprocityVerdict {
                reciprocal: true,
                kind: ReciprocityKind::Identity,
                reciprocator: Some((Word::empty(w.p()), g.clone())),
                reciprocator_type: None,
                canonical_theta: None,
                witness: None,
            });
        }
        if g.is_involution() {
            return Ok(ReciprocityVerdict {
                reciprocal: true,
                kind: ReciprocityKind::Involution,
                reciprocator: Some((Word::empty(w.p()), GroupElement::identity(self.ctx()))),
                reciprocator_type: None,
                canonical_theta: None,
                witness: None,
            });
        }
        if g.classify().kind != ElementKind::Hyperbolic {
            return Ok(ReciprocityVerdict::not_reciprocal());
        }
        if conjugacy_witness(&w, &w.inverse()).is_none() {
            return Ok(ReciprocityVerdict::not_reciprocal());
        }
        let (hw, h) = self.find_reciprocator(g)?;
        let ty = reciprocator_type(&h)?;
        let (theta, witness) = match self.canonical_theta(g) {
            Ok((t, x)) => (Some(t), Some(x)),
            Err(ReciprocityError::DepthExhausted(_)) => (None, None),
            Err(e) => return Err(e),
        };
        Ok(ReciprocityVerdict {
            reciprocal: true,
            kind: ReciprocityKind::HyperbolicReciprocal,
            reciprocator: Some((hw, h)),
            reciprocator_type: Some(ty),
            canonical_theta: theta,
            witness,
        })
    }

    /// Involutive reciprocator of a reciprocal hyperbolic element, verified
    /// exactly before it is returned.
    pub fn find_reciprocator(&self, g: &GroupElement) -> Result<(Word, GroupElement), ReciprocityError> {
        if !g.is_hyperbolic() {
            return Err(ReciprocityError::NotHyperbolic);
        }
        let w = self.word_of(g)?;
        let ctx = self.ctx();
        let h0 = conjugacy_witness(&w, &w.inverse()).ok_or(ReciprocityError::NotReciprocal)?;
        // h0 w⁻¹ h0⁻¹ = w, so h0⁻¹ reverses w. Every reciprocator lies in the
        // coset h·⟨root⟩; pick the shortest nearby representative.
        let h = h0.inverse();
        let (root, _) = primitive_root(&w).ok_or(ReciprocityError::NotHyperbolic)?;
        let mut candidates: Vec<Word> = (-3..=3).map(|k| h.concat(&root.pow(k))).collect();
        candidates.sort();
        for cand in candidates {
            let m = self.ev.eval_mat(&cand);
            if reverses(ctx, &m, g.entries()) {
                return Ok((cand, GroupElement::from_mat(ctx, m)));
            }
        }
        self.bfs_reciprocator(g).ok_or(ReciprocityError::SearchExhausted(self.bfs_depth))
    }

    /// Smallest word (length, then lex) of length `≤ bfs_depth` that is an
    /// involutive reciprocator of `g`.
    pub fn bfs_reciprocator(&self, g: &GroupElement) -> Option<(Word, GroupElement)> {
        let ctx = self.ctx();
        let n = self.table.count_up_to(self.bfs_depth);
        (0..n)
            .find(|&i| reverses(ctx, self.table.mat(i), g.entries()))
            .map(|i| (self.table.word(i).clone(), GroupElement::from_mat(ctx, self.table.mat(i).clone())))
    }

    /// First conjugate `x g x⁻¹` (x by length, then lex) whose fixed-point
    /// ratio is 0, or for even `p` also the degenerate 1 or `cos(π/p)`.
    pub fn canonical_theta(&self, g: &GroupElement) -> Result<(CanonicalTheta, Word), ReciprocityError> {
        if !g.is_hyperbolic() {
            return Err(ReciprocityError::NotHyperbolic);
        }
        let ctx = self.ctx();
        let even = ctx.is_even();
        let n = self.table.count_up_to(self.theta_depth);
        for i in 0..n {
            let conj = GroupElement::from_mat(ctx, self.table.conjugate_mat(ctx, i, g.entries()));
            if let Some(t) = theta_class(ctx, &conj.fixed_point_ratio(), even) {
                return Ok((t, self.table.word(i).clone()));
            }
        }
        Err(ReciprocityError::DepthExhausted(self.theta_depth))
    }
}

/// Which canonical value, if any, a fixed-point ratio takes.
pub fn theta_class(ctx: &RingContext, theta: &FixedPointRatio, even: bool) -> Option<CanonicalTheta> {
    if theta.is_zero() {
        Some(CanonicalTheta::Zero)
    } else if even && theta.is_degenerate_one() {
        Some(CanonicalTheta::One)
    } else if even && theta.is_cos_pi_over_p(ctx) {
        Some(CanonicalTheta::CosPiOverP)
    } else {
        None
    }
}

pub fn is_reciprocal(g: &GroupElement) -> Result<ReciprocityVerdict, ReciprocityError> {
    Reciprocity::new(g.ctx()).is_reciprocal(g)
}

/// Conjugate to `ι`, or to `γ^{p/2}` (even `p` only).
pub fn reciprocator_type(h: &GroupElement) -> Result<ReciprocatorType, ReciprocityError> {
    if !h.is_involution() {
        return Err(ReciprocityError::NotAnInvolution);
    }
    let w = matrix_to_word(h).map_err(|_| ReciprocityError::NotAMember)?;
    let (c, _) = cyclic_reduce(&w);
    match c.as_word().letters() {
        [Letter::Iota] => Ok(ReciprocatorType::IotaClass),
        [Letter::Gamma(m)] if 2 * m == h.ctx().p() => Ok(ReciprocatorType::GammaClass),
        _ => Err(ReciprocityError::NotAnInvolution),
    }
}

/// With `θ = n/d`, checks `M g adj(M) = ±(d² − n²) g⁻¹` for
/// `M = [[n, d], [−d, −n]]`, the denominator-cleared form of
/// `[[θ, 1], [−1, −θ]]`.
pub fn phi_identity_check(g: &GroupElement) -> Result<bool, ReciprocityError> {
    let ctx = g.ctx();
    let theta = g.fixed_point_ratio();
    let FixedPointRatio::Finite { num, den } = &theta else {
        return Err(ReciprocityError::DegenerateTheta);
    };
    if !theta.inside_unit_interval(ctx) {
        return Err(ReciprocityError::ThetaOutOfRange);
    }
    let m: Mat = [num.clone(), den.clone(), ctx.neg(den), ctx.neg(num)];
    let lhs = mat_mul(ctx, &mat_mul(ctx, &m, g.entries()), &mat_adj(ctx, &m));
    let factor = ctx.sub(&ctx.mul(den, den), &ctx.mul(num, num));
    debug_assert_eq!(ctx.sign(&factor), Sign::Positive);
    let inv = mat_adj(ctx, g.entries());
    let rhs: Mat = [
        ctx.mul(&factor, &inv[0]),
        ctx.mul(&factor, &inv[1]),
        ctx.mul(&factor, &inv[2]),
        ctx.mul(&factor, &inv[3]),
    ];
    Ok(mat_eq_projective(&lhs, &rhs))
}
