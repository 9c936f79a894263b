//! Exact arithmetic and reciprocity in the Hecke groups `Γ_p`.
//!
//! `Γ_p` is generated by `ι: z ↦ −1/z` and `z ↦ z + λ_p` with
//! `λ_p = 2cos(π/p)`, and is isomorphic to `Z₂ ∗ Z_p`.

pub mod classes;
pub mod group;
pub mod reciprocity;
pub mod ring;
pub mod words;

pub use classes::{
    element_to_tuple, tuple_to_matrix, verify_fibers, CaseTag, CensusResult, ClassError, ClassRecord, ClassTuple,
    FiberCheck, FiberStatus, Survey, SurveyRow, SymTuple,
};
pub use group::{
    gamma_power, generators, ElementClass, ElementKind, FixedPointRatio, GroupElement, GroupError, Membership,
};
pub use reciprocity::{
    is_reciprocal, phi_identity_check, reciprocator_type, CanonicalTheta, ReciprocatorType, Reciprocity,
    ReciprocityError, ReciprocityKind, ReciprocityVerdict,
};
pub use ring::{minimal_polynomial, FieldElem, RingContext, RingElem, RingError, Sign, DEFAULT_MAX_ITER};
pub use words::{
    are_conjugate, conjugacy_witness, cyclic_reduce, evaluate, is_primitive, matrix_to_word, vblock_form,
    CyclicWord, Evaluator, Letter, Word, WordError, WordTable,
};
