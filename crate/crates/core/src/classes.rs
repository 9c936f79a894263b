//! Reciprocal conjugacy classes: enumeration by word length, censuses of
//! symmetric and p-reciprocal conjugates, and the tuple parametrisation.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{mat_adj, GroupElement};
use crate::reciprocity::{reciprocator_type, ReciprocatorType, Reciprocity, ReciprocityError};
use crate::ring::{RingContext, RingElem, Sign};
use crate::words::{cyclic_reduce, CyclicWord, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("element does not satisfy the tuple conditions")]
    NotEligible,
    #[error("invalid tuple: {0}")]
    InvalidTuple(&'static str),
    #[error("symmetric tuples are only defined for odd p")]
    EvenP,
    #[error("class is not reciprocal")]
    NotReciprocal,
    #[error(transparent)]
    Reciprocity(#[from] ReciprocityError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    OddDefault,
    EvenIotaOnly,
    EvenGammaOnly,
    #[serde(rename = "EvenBoth_NoIotaGammaPower")]
    EvenBothNoIotaGammaPower,
    #[serde(rename = "EvenBoth_WithIotaGammaPower")]
    EvenBothWithIotaGammaPower,
}

impl CaseTag {
    /// Number of tuples expected over one primitive reciprocal class.
    pub fn predicted_fiber(self, p: u32) -> usize {
        let m = (p / 2) as usize;
        match self {
            CaseTag::OddDefault | CaseTag::EvenIotaOnly => 2,
            CaseTag::EvenGammaOnly => p as usize,
            CaseTag::EvenBothNoIotaGammaPower => m + 1,
            CaseTag::EvenBothWithIotaGammaPower => m,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::OddDefault => "OddDefault",
            CaseTag::EvenIotaOnly => "EvenIotaOnly",
            CaseTag::EvenGammaOnly => "EvenGammaOnly",
            CaseTag::EvenBothNoIotaGammaPower => "EvenBoth_NoIotaGammaPower",
            CaseTag::EvenBothWithIotaGammaPower => "EvenBoth_WithIotaGammaPower",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `(a, b, c, t)` with `[[ (t−b)/2, a ], [ c, (t+b)/2 ]]` in the group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassTuple {
    pub a: RingElem,
    pub b: RingElem,
    pub c: RingElem,
    pub t: RingElem,
}

/// `(a, b, t)`: the symmetric case `a = c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SymTuple {
    pub a: RingElem,
    pub b: RingElem,
    pub t: RingElem,
}

impl ClassTuple {
    /// Checks every tuple condition.
    pub fn validate(&self, ctx: &RingContext) -> Result<(), ClassError> {
        let ClassTuple { a, b, c, t } = self;
        for x in [a, c, t] {
            if ctx.sign(x) != Sign::Positive {
                return Err(ClassError::InvalidTuple("a, c and t must be positive"));
            }
        }
        let d = ctx.add(&ctx.scale(&ctx.mul(a, c), 4), &ctx.mul(b, b));
        if !ctx.sub(&ctx.mul(t, t), &d).is_int(4) {
            return Err(ClassError::InvalidTuple("t^2 - (4ac + b^2) must equal 4"));
        }
        let lo = ctx.halve(&ctx.sub(t, b)).map_err(|_| ClassError::InvalidTuple("(t - b)/2 not integral"))?;
        let hi = ctx.halve(&ctx.add(t, b)).map_err(|_| ClassError::InvalidTuple("(t + b)/2 not integral"))?;
        let coprime = |x: &RingElem, y: &RingElem| matches!(ctx.pseudo_gcd(x, y), Ok(g) if g.is_int(1));
        if !coprime(&lo, c) || !coprime(&hi, a) {
            return Err(ClassError::InvalidTuple("coprimality conditions fail"));
        }
        let ratio_branch = ctx.scale(&ctx.sub(c, a), 2) == ctx.mul_lambda(b);
        if a != c && !ratio_branch {
            return Err(ClassError::InvalidTuple("neither a = c nor 2(c - a) = b lambda"));
        }
        Ok(())
    }
}

/// Reads the tuple off the positive-trace lift of `g`.
pub fn element_to_tuple(g: &GroupElement) -> Result<ClassTuple, ClassError> {
    let ctx = g.ctx();
    if !g.is_hyperbolic() {
        return Err(ClassError::NotEligible);
    }
    let [m11, m12, m21, m22] = g.entries().clone();
    let flip = ctx.sign(&g.trace()) == Sign::Negative;
    let f = |x: RingElem| if flip { ctx.neg(&x) } else { x };
    let (m11, m12, m21, m22) = (f(m11), f(m12), f(m21), f(m22));
    let tu = ClassTuple { a: m12, b: ctx.sub(&m22, &m11), c: m21, t: ctx.add(&m11, &m22) };
    tu.validate(ctx).map_err(|_| ClassError::NotEligible)?;
    Ok(tu)
}

pub fn tuple_to_matrix(ctx: &Arc<RingContext>, tu: &ClassTuple) -> Result<GroupElement, ClassError> {
    tu.validate(ctx)?;
    let lo = ctx.halve(&ctx.sub(&tu.t, &tu.b)).map_err(|_| ClassError::InvalidTuple("(t - b)/2 not integral"))?;
    let hi = ctx.halve(&ctx.add(&tu.t, &tu.b)).map_err(|_| ClassError::InvalidTuple("(t + b)/2 not integral"))?;
    GroupElement::new(ctx, [lo, tu.a.clone(), tu.c.clone(), hi]).map_err(|_| ClassError::InvalidTuple("determinant is not 1"))
}

pub fn sym_tuple_of(g: &GroupElement) -> Result<SymTuple, ClassError> {
    let tu = element_to_tuple(g)?;
    if tu.a != tu.c {
        return Err(ClassError::NotEligible);
    }
    Ok(SymTuple { a: tu.a, b: tu.b, t: tu.t })
}

pub fn sym_tuple_to_matrix(ctx: &Arc<RingContext>, st: &SymTuple) -> Result<GroupElement, ClassError> {
    tuple_to_matrix(ctx, &ClassTuple { a: st.a.clone(), b: st.b.clone(), c: st.a.clone(), t: st.t.clone() })
}

/// Distinct conjugates of one class representative, each with the smallest
/// conjugator (length, then lex) that produced it.
#[derive(Debug, Clone, Default)]
pub struct CensusResult {
    pub symmetric: BTreeMap<GroupElement, Word>,
    pub p_reciprocal: BTreeMap<GroupElement, Word>,
    pub symmetric_p_reciprocal: BTreeMap<GroupElement, Word>,
    pub depth_used: usize,
    pub stabilized: bool,
    /// Set sizes when conjugators are limited to length `depth_used − 1`.
    pub previous_counts: [usize; 3],
}

/// Number of `{g, g⁻¹}` pairs in a set of elements.
fn inverse_pairs(set: &BTreeMap<GroupElement, Word>) -> usize {
    let mut seen = BTreeSet::new();
    let mut pairs = 0;
    for g in set.keys() {
        if seen.contains(g) {
            continue;
        }
        pairs += 1;
        seen.insert(g.clone());
        seen.insert(g.inverse());
    }
    pairs
}

impl CensusResult {
    pub fn counts(&self) -> [usize; 3] {
        [self.symmetric.len(), self.p_reciprocal.len(), self.symmetric_p_reciprocal.len()]
    }

    /// The same counts with each element identified with its inverse.
    pub fn inverse_paired_counts(&self) -> [usize; 3] {
        [inverse_pairs(&self.symmetric), inverse_pairs(&self.p_reciprocal), inverse_pairs(&self.symmetric_p_reciprocal)]
    }

    /// `p_reciprocal` minus `symmetric_p_reciprocal`.
    pub fn p_reciprocal_only(&self) -> usize {
        self.p_reciprocal.len() - self.symmetric_p_reciprocal.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = (&GroupElement, &Word)> {
        self.symmetric.iter().chain(self.p_reciprocal.iter())
    }

    /// Inverse pairs among symmetric and p-reciprocal elements together.
    pub fn paired_total(&self) -> usize {
        let union: BTreeMap<GroupElement, Word> = self.elements().map(|(g, w)| (g.clone(), w.clone())).collect();
        inverse_pairs(&union)
    }
}

#[derive(Debug, Clone)]
pub struct ClassRecord {
    pub key: CyclicWord,
    pub rep: GroupElement,
    /// Trace of the positive-trace lift.
    pub trace: RingElem,
    pub primitive: bool,
    pub reciprocal: bool,
    pub reciprocator: Option<(Word, GroupElement)>,
    /// Types of the two conjugacy classes of reciprocators, `h` and `h·root`.
    pub reciprocator_types: Option<(ReciprocatorType, ReciprocatorType)>,
    pub case_tag: Option<CaseTag>,
    pub census: Option<CensusResult>,
    pub tuples: BTreeSet<ClassTuple>,
}

impl ClassRecord {
    pub fn predicted_fiber(&self) -> Option<usize> {
        self.case_tag.map(|c| c.predicted_fiber(self.rep.ctx().p()))
    }
}

/// Advances `js` (entries in `1..p`) in lexicographic order.
fn next_sequence(js: &mut [u32], p: u32) -> bool {
    for i in (0..js.len()).rev() {
        if js[i] + 1 < p {
            js[i] += 1;
            js[i + 1..].iter_mut().for_each(|x| *x = 1);
            return true;
        }
    }
    false
}

/// Cyclic words `ι γ^{j₁} ⋯ ι γ^{jₙ}` that are rotation-minimal, `2n ≤ max_len`.
fn cyclic_keys(p: u32, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for n in 1..=max_len / 2 {
        let mut js = vec![1u32; n];
        loop {
            let minimal = (1..n).all(|r| {
                let rot = (0..n).map(|i| js[(i + r) % n]);
                rot.cmp(js.iter().copied()) != Ordering::Less
            });
            if minimal {
                let letters = js.iter().flat_map(|&j| [Letter::Iota, Letter::Gamma(j)]).collect();
                out.push(Word::new(p, letters).expect("alternating word"));
            }
            if !next_sequence(&mut js, p) {
                break;
            }
        }
    }
    out
}

/// Class enumeration and census over a fixed conjugator table.
pub struct Survey {
    engine: Reciprocity,
    depth: usize,
}

impl Survey {
    pub fn new(ctx: &Arc<RingContext>, depth: usize) -> Self {
        Survey { engine: Reciprocity::with_depths(ctx, crate::reciprocity::DEFAULT_DEPTH, depth), depth }
    }

    pub fn engine(&self) -> &Reciprocity {
        &self.engine
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        self.engine.ctx()
    }

    /// All hyperbolic classes with a cyclically reduced word of length
    /// `≤ max_len`, ordered by trace and then key.
    pub fn enumerate(&self, max_len: usize) -> Vec<ClassRecord> {
        let ctx = self.ctx();
        let ev = self.engine.evaluator();
        let keys = cyclic_keys(ctx.p(), max_len);
        let mut records: Vec<ClassRecord> = keys
            .par_iter()
            .filter_map(|w| {
                let rep = ev.evaluate(w);
                if !rep.is_hyperbolic() {
                    return None;
                }
                let (key, _) = cyclic_reduce(w);
                let (inv_key, _) = cyclic_reduce(&w.inverse());
                Some(ClassRecord {
                    primitive: key.period() == key.len(),
                    reciprocal: key == inv_key,
                    trace: rep.abs_trace(),
                    key,
                    rep,
                    reciprocator: None,
                    reciprocator_types: None,
                    case_tag: None,
                    census: None,
                    tuples: BTreeSet::new(),
                })
            })
            .collect();
        records.sort_by(|x, y| ctx.cmp_real(&x.trace, &y.trace).then_with(|| x.key.cmp(&y.key)));
        records
    }

    /// Conjugates `x·rep·x⁻¹` for all table words `x` of length `≤ depth`.
    pub fn census(&self, cls: &ClassRecord) -> CensusResult {
        let ctx = self.ctx();
        let table = self.engine.table();
        let even = ctx.is_even();
        let mut out = CensusResult { depth_used: self.depth, ..Default::default() };
        let prev_end = if self.depth == 0 { 0 } else { table.count_up_to(self.depth - 1) };
        let end = table.count_up_to(self.depth);
        let rep = cls.rep.entries();
        for i in 0..end {
            if i == prev_end {
                out.previous_counts = out.counts();
            }
            let g = GroupElement::from_mat(ctx, table.conjugate_mat(ctx, i, rep));
            let theta = g.fixed_point_ratio();
            let one = even && theta.is_degenerate_one();
            let cos = even && theta.is_cos_pi_over_p(ctx);
            if g.is_symmetric_rep() && !out.symmetric.contains_key(&g) {
                out.symmetric.insert(g.clone(), table.word(i).clone());
            }
            if (one || cos) && !out.p_reciprocal.contains_key(&g) {
                out.p_reciprocal.insert(g.clone(), table.word(i).clone());
            }
            if one && !out.symmetric_p_reciprocal.contains_key(&g) {
                out.symmetric_p_reciprocal.insert(g, table.word(i).clone());
            }
        }
        if prev_end == end {
            out.previous_counts = out.counts();
        }
        out.stabilized = out.previous_counts == out.counts();
        out
    }

    /// Types of the reciprocators `h` and `h·r`, `r` the primitive root.
    /// Every reciprocator is conjugate under the centraliser to one of them.
    pub fn reciprocator_types(&self, cls: &ClassRecord) -> Result<((Word, GroupElement), (ReciprocatorType, ReciprocatorType)), ClassError> {
        if !cls.reciprocal {
            return Err(ClassError::NotReciprocal);
        }
        let (hw, h) = self.engine.find_reciprocator(&cls.rep)?;
        let key = cls.key.as_word();
        let root = Word::new(key.p(), key.letters()[..cls.key.period()].to_vec()).expect("prefix of a normal word");
        let hr = self.engine.evaluator().evaluate(&hw.concat(&root));
        Ok(((hw, h.clone()), (reciprocator_type(&h)?, reciprocator_type(&hr)?)))
    }

    pub fn classify_case(&self, cls: &ClassRecord) -> Result<CaseTag, ClassError> {
        let p = self.ctx().p();
        if p % 2 == 1 {
            return Ok(CaseTag::OddDefault);
        }
        let (_, types) = self.reciprocator_types(cls)?;
        Ok(case_from_types(types, contains_iota_gamma_power(&cls.key)))
    }

    /// Enumerates, then runs reciprocator typing, census and tuple collection
    /// on every primitive reciprocal class.
    pub fn run(&self, max_len: usize) -> Result<Vec<ClassRecord>, ClassError> {
        self.enumerate(max_len).into_par_iter().map(|cls| self.analyse(cls)).collect()
    }

    /// Fully analysed record for the class of a hyperbolic member `g`. The
    /// representative is the evaluation of the class key, as in `enumerate`.
    pub fn record_of(&self, g: &GroupElement) -> Result<ClassRecord, ClassError> {
        if !g.is_hyperbolic() {
            return Err(ReciprocityError::NotHyperbolic.into());
        }
        let w = self.engine.word_of(g)?;
        let (key, _) = cyclic_reduce(&w);
        let (inv_key, _) = cyclic_reduce(&w.inverse());
        let rep = self.engine.evaluator().evaluate(key.as_word());
        let cls = ClassRecord {
            primitive: key.period() == key.len(),
            reciprocal: key == inv_key,
            trace: rep.abs_trace(),
            key,
            rep,
            reciprocator: None,
            reciprocator_types: None,
            case_tag: None,
            census: None,
            tuples: BTreeSet::new(),
        };
        self.analyse(cls)
    }

    fn analyse(&self, mut cls: ClassRecord) -> Result<ClassRecord, ClassError> {
        if cls.reciprocal {
            let (rec, types) = self.reciprocator_types(&cls)?;
            cls.reciprocator = Some(rec);
            cls.reciprocator_types = Some(types);
            cls.case_tag = Some(if self.ctx().is_even() {
                case_from_types(types, contains_iota_gamma_power(&cls.key))
            } else {
                CaseTag::OddDefault
            });
            if cls.primitive {
                let census = self.census(&cls);
                cls.tuples = census.elements().filter_map(|(g, _)| element_to_tuple(g).ok()).collect();
                cls.census = Some(census);
            }
        }
        Ok(cls)
    }
}

fn case_from_types(types: (ReciprocatorType, ReciprocatorType), iota_gamma_power: bool) -> CaseTag {
    use ReciprocatorType::*;
    match types {
        (IotaClass, IotaClass) => CaseTag::EvenIotaOnly,
        (GammaClass, GammaClass) => CaseTag::EvenGammaOnly,
        _ if iota_gamma_power => CaseTag::EvenBothWithIotaGammaPower,
        _ => CaseTag::EvenBothNoIotaGammaPower,
    }
}

/// Whether the class is that of `(ιγ^m)^k` for some `k ≠ 0`, `m = p/2`.
/// Cyclic words of the powers grow by two letters per step, so only powers
/// up to the key length need testing.
pub fn contains_iota_gamma_power(key: &CyclicWord) -> bool {
    let p = key.as_word().p();
    if p % 2 == 1 {
        return false;
    }
    let base = Word::new(p, vec![Letter::Iota, Letter::Gamma(p / 2)]).expect("normal word");
    (1..).map(|k| cyclic_reduce(&base.pow(k)).0).take_while(|c| c.len() <= key.len()).any(|c| c == *key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberStatus {
    Match,
    Mismatch,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberCheck {
    pub key: CyclicWord,
    pub case_tag: CaseTag,
    pub fiber_size: usize,
    pub predicted_fiber: usize,
    pub stabilized: bool,
    pub status: FiberStatus,
    /// Symmetric and p-reciprocal census elements counted up to inversion.
    pub paired_count: usize,
}

/// Compares each surveyed fiber with the size predicted by its case.
pub fn verify_fibers(classes: &[ClassRecord]) -> Vec<FiberCheck> {
    classes
        .iter()
        .filter_map(|cls| {
            let census = cls.census.as_ref()?;
            let case_tag = cls.case_tag?;
            let predicted = case_tag.predicted_fiber(cls.rep.ctx().p());
            let status = if cls.tuples.len() == predicted {
                FiberStatus::Match
            } else if census.stabilized {
                FiberStatus::Mismatch
            } else {
                FiberStatus::Inconclusive
            };
            Some(FiberCheck {
                key: cls.key.clone(),
                case_tag,
                fiber_size: cls.tuples.len(),
                predicted_fiber: predicted,
                stabilized: census.stabilized,
                status,
                paired_count: census.paired_total(),
            })
        })
        .collect()
}

/// Symmetric tuples per surveyed class (odd `p` only).
pub fn sym_tuples(ctx: &RingContext, classes: &[ClassRecord]) -> Result<BTreeMap<CyclicWord, BTreeSet<SymTuple>>, ClassError> {
    if ctx.is_even() {
        return Err(ClassError::EvenP);
    }
    Ok(classes
        .iter()
        .filter_map(|cls| {
            let census = cls.census.as_ref()?;
            let set = census.symmetric.keys().filter_map(|g| sym_tuple_of(g).ok()).collect();
            Some((cls.key.clone(), set))
        })
        .collect())
}

/// One row of the survey report.
#[derive(Debug, Clone, Serialize)]
pub struct SurveyRow {
    pub key: String,
    pub rep: String,
    pub trace: RingElem,
    pub primitive: bool,
    pub reciprocal: bool,
    pub reciprocator_word: Option<Word>,
    pub reciprocator_types: Option<(ReciprocatorType, ReciprocatorType)>,
    pub case_tag: Option<CaseTag>,
    pub symmetric: Option<usize>,
    pub p_reciprocal: Option<usize>,
    pub symmetric_p_reciprocal: Option<usize>,
    pub inverse_paired: Option<[usize; 3]>,
    pub depth_used: Option<usize>,
    pub stabilized: Option<bool>,
    pub tuples: Vec<[RingElem; 4]>,
    pub fiber_size: Option<usize>,
    pub predicted_fiber: Option<usize>,
    pub fiber_status: Option<FiberStatus>,
    pub paired_count: Option<usize>,
}

impl SurveyRow {
    pub fn from_record(cls: &ClassRecord) -> Self {
        let census = cls.census.as_ref();
        SurveyRow {
            key: cls.key.to_string(),
            rep: cls.rep.to_string(),
            trace: cls.trace.clone(),
            primitive: cls.primitive,
            reciprocal: cls.reciprocal,
            reciprocator_word: cls.reciprocator.as_ref().map(|r| r.0.clone()),
            reciprocator_types: cls.reciprocator_types,
            case_tag: cls.case_tag,
            symmetric: census.map(|c| c.symmetric.len()),
            p_reciprocal: census.map(|c| c.p_reciprocal.len()),
            symmetric_p_reciprocal: census.map(|c| c.symmetric_p_reciprocal.len()),
            inverse_paired: census.map(|c| c.inverse_paired_counts()),
            depth_used: census.map(|c| c.depth_used),
            stabilized: census.map(|c| c.stabilized),
            tuples: cls.tuples.iter().map(|t| [t.a.clone(), t.b.clone(), t.c.clone(), t.t.clone()]).collect(),
            fiber_size: census.map(|_| cls.tuples.len()),
            predicted_fiber: census.and(cls.predicted_fiber()),
            fiber_status: verify_fibers(std::slice::from_ref(cls)).first().map(|f| f.status),
            paired_count: census.map(|c| c.paired_total()),
        }
    }
}

pub const CSV_HEADER: &str =
    "class_key,trace,case,symmetric,p_reciprocal,sym_p_reciprocal,fiber_size,predicted_fiber,stabilized";

fn opt<T: fmt::Display>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl SurveyRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},\"{}\",{},{},{},{},{},{},{}",
            self.key,
            self.trace,
            opt(self.case_tag),
            opt(self.symmetric),
            opt(self.p_reciprocal),
            opt(self.symmetric_p_reciprocal),
            opt(self.fiber_size),
            opt(self.predicted_fiber),
            opt(self.stabilized),
        )
    }
}

/// Runs a full survey and flattens it into report rows.
pub fn survey_rows(ctx: &Arc<RingContext>, max_len: usize, depth: usize) -> Result<Vec<SurveyRow>, ClassError> {
    Ok(Survey::new(ctx, depth).run(max_len)?.iter().map(SurveyRow::from_record).collect())
}

pub fn render_json(rows: &[SurveyRow]) -> String {
    let mut out = serde_json::to_string_pretty(rows).expect("rows serialise");
    out.push('\n');
    out
}

pub fn render_csv(rows: &[SurveyRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

/// Word whose conjugate realises a census element, as a sanity helper:
/// `x·rep·x⁻¹ = g`.
pub fn census_witness_holds(ctx: &RingContext, rep: &GroupElement, x: &GroupElement, g: &GroupElement) -> bool {
    let lhs = crate::group::mat_mul(ctx, &crate::group::mat_mul(ctx, x.entries(), rep.entries()), &mat_adj(ctx, x.entries()));
    crate::group::mat_eq_projective(&lhs, g.entries())
}
