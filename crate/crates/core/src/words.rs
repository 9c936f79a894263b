//! Normal forms in `Z₂ ∗ Z_p` on the letters `ι` and `γ^k`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::group::{gamma_power_mat, mat_adj, mat_identity, mat_mul, GroupElement, Mat};
use crate::ring::{RingContext, Sign};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("malformed word token `{0}`")]
    Parse(String),
    #[error("gamma exponent {k} outside 1..{p}")]
    BadExponent { k: i64, p: u32 },
    #[error("word is not in normal form")]
    NotNormal,
    #[error("words over different groups (p = {0} and p = {1})")]
    ContextMismatch(u32, u32),
    #[error("matrix is not a member of the Hecke group")]
    NotAMember,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
    #[error("no V-block form for a torsion word")]
    NotApplicable,
}

/// `ι` sorts before every `γ^k`, and `γ^k` before `γ^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Iota,
    Gamma(u32),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Iota => f.write_str("i"),
            Letter::Gamma(k) => write!(f, "g^{k}"),
        }
    }
}

/// A normal-form word: letters alternate between `ι` and powers of `γ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    p: u32,
    letters: Vec<Letter>,
}

/// Appends `l` to a normal-form stack, cancelling and merging as needed.
fn push_letter(p: u32, stack: &mut Vec<Letter>, l: Letter) {
    match (stack.last().copied(), l) {
        (Some(Letter::Iota), Letter::Iota) => {
            stack.pop();
        }
        (Some(Letter::Gamma(a)), Letter::Gamma(b)) => {
            stack.pop();
            let k = (a + b) % p;
            if k != 0 {
                stack.push(Letter::Gamma(k));
            }
        }
        _ => stack.push(l),
    }
}

impl Word {
    pub fn empty(p: u32) -> Self {
        Word { p, letters: Vec::new() }
    }

    pub fn iota(p: u32) -> Self {
        Word { p, letters: vec![Letter::Iota] }
    }

    /// `γ^k` with `k` taken mod `p`.
    pub fn gamma(p: u32, k: i64) -> Self {
        let k = k.rem_euclid(p as i64) as u32;
        Word { p, letters: if k == 0 { vec![] } else { vec![Letter::Gamma(k)] } }
    }

    /// Validates an already-reduced letter sequence.
    pub fn new(p: u32, letters: Vec<Letter>) -> Result<Self, WordError> {
        for l in &letters {
            if let Letter::Gamma(k) = *l {
                if k == 0 || k >= p {
                    return Err(WordError::BadExponent { k: k as i64, p });
                }
            }
        }
        let normal = letters.windows(2).all(|w| {
            !matches!((w[0], w[1]), (Letter::Iota, Letter::Iota) | (Letter::Gamma(_), Letter::Gamma(_)))
        });
        if !normal {
            return Err(WordError::NotNormal);
        }
        Ok(Word { p, letters })
    }

    /// Reduces an arbitrary letter sequence (exponents taken mod `p`).
    pub fn reduce<I: IntoIterator<Item = Letter>>(p: u32, letters: I) -> Self {
        let mut stack = Vec::new();
        for l in letters {
            match l {
                Letter::Gamma(k) if k % p == 0 => {}
                Letter::Gamma(k) => push_letter(p, &mut stack, Letter::Gamma(k % p)),
                Letter::Iota => push_letter(p, &mut stack, Letter::Iota),
            }
        }
        Word { p, letters: stack }
    }

    /// Parses whitespace-separated `i` and `g^k` tokens (`g` alone means `g^1`).
    /// The result is reduced to normal form.
    pub fn parse(p: u32, s: &str) -> Result<Self, WordError> {
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let l = match tok {
                "i" => Letter::Iota,
                "g" => Letter::Gamma(1),
                "e" | "1" => continue,
                _ => {
                    let k: i64 = tok
                        .strip_prefix("g^")
                        .and_then(|e| e.parse().ok())
                        .ok_or_else(|| WordError::Parse(tok.to_string()))?;
                    if k < 1 || k >= p as i64 {
                        return Err(WordError::BadExponent { k, p });
                    }
                    Letter::Gamma(k as u32)
                }
            };
            letters.push(l);
        }
        Ok(Self::reduce(p, letters))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(self.p, other.p, "concatenating words over different groups");
        let mut stack = self.letters.clone();
        for &l in &other.letters {
            push_letter(self.p, &mut stack, l);
        }
        Word { p: self.p, letters: stack }
    }

    pub fn try_concat(&self, other: &Word) -> Result<Word, WordError> {
        if self.p != other.p {
            return Err(WordError::ContextMismatch(self.p, other.p));
        }
        Ok(self.concat(other))
    }

    pub fn inverse(&self) -> Word {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| match *l {
                Letter::Iota => Letter::Iota,
                Letter::Gamma(k) => Letter::Gamma(self.p - k),
            })
            .collect();
        Word { p: self.p, letters }
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::empty(self.p);
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base);
        }
        acc
    }

    /// `self · w · self⁻¹`.
    pub fn conjugate(&self, w: &Word) -> Word {
        self.concat(w).concat(&self.inverse())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Length first, then lexicographic.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.letters.len().cmp(&other.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Rotation-minimal representative of a cyclically reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord(Word);

impl CyclicWord {
    pub fn as_word(&self) -> &Word {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest `d` such that the cyclic sequence has period `d`.
    pub fn period(&self) -> usize {
        let l = self.0.letters();
        let n = l.len();
        (1..=n).find(|&d| n % d == 0 && (0..n).all(|i| l[i] == l[(i + d) % n])).unwrap_or(0)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclic({})", self.0)
    }
}

impl Serialize for CyclicWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn least_rotation(l: &[Letter]) -> usize {
    let n = l.len();
    let mut best = 0;
    for r in 1..n {
        let ord = (0..n).map(|i| l[(r + i) % n].cmp(&l[(best + i) % n])).find(|o| o.is_ne());
        if ord == Some(Ordering::Less) {
            best = r;
        }
    }
    best
}

/// Returns `(c, conj)` with `w = conj · c · conj⁻¹`.
pub fn cyclic_reduce(w: &Word) -> (CyclicWord, Word) {
    let p = w.p;
    let mut conj: Vec<Letter> = Vec::new();
    let mut body: Vec<Letter> = w.letters.clone();
    while body.len() >= 2 {
        match (body[0], body[body.len() - 1]) {
            (Letter::Iota, Letter::Iota) => {
                conj.push(Letter::Iota);
                body = body[1..body.len() - 1].to_vec();
            }
            (Letter::Gamma(a), Letter::Gamma(b)) => {
                // γ^a u γ^b = γ^a (u γ^{a+b}) γ^{-a}
                conj.push(Letter::Gamma(a));
                let mut inner = body[1..body.len() - 1].to_vec();
                let k = (a + b) % p;
                if k != 0 {
                    inner.push(Letter::Gamma(k));
                }
                body = inner;
            }
            _ => break,
        }
    }
    let r = least_rotation(&body);
    let mut rotated = body[r..].to_vec();
    rotated.extend_from_slice(&body[..r]);
    conj.extend_from_slice(&body[..r]);
    (CyclicWord(Word { p, letters: rotated }), Word::reduce(p, conj))
}

/// Witness `h` with `h · w2 · h⁻¹ = w1`, if the words are conjugate.
pub fn conjugacy_witness(w1: &Word, w2: &Word) -> Option<Word> {
    if w1.p != w2.p {
        return None;
    }
    let (c1, u1) = cyclic_reduce(w1);
    let (c2, u2) = cyclic_reduce(w2);
    (c1 == c2).then(|| u1.concat(&u2.inverse()))
}

pub fn are_conjugate(w1: &Word, w2: &Word) -> bool {
    conjugacy_witness(w1, w2).is_some()
}

/// Precomputed generator lifts for fast evaluation.
#[derive(Clone)]
pub struct Evaluator {
    ctx: Arc<RingContext>,
    iota: Mat,
    gammas: Vec<Mat>,
}

impl Evaluator {
    pub fn new(ctx: &Arc<RingContext>) -> Self {
        let (z, o) = (ctx.zero(), ctx.one());
        let iota = [z.clone(), ctx.neg(&o), o, z];
        let gammas = (0..ctx.p() as usize)
            .map(|k| if k == 0 { mat_identity(ctx) } else { gamma_power_mat(ctx, k) })
            .collect();
        Evaluator { ctx: Arc::clone(ctx), iota, gammas }
    }

    pub fn ctx(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub(crate) fn letter_mat(&self, l: Letter) -> &Mat {
        match l {
            Letter::Iota => &self.iota,
            Letter::Gamma(k) => &self.gammas[k as usize],
        }
    }

    pub(crate) fn eval_mat(&self, w: &Word) -> Mat {
        let mut acc = mat_identity(&self.ctx);
        for &l in &w.letters {
            acc = mat_mul(&self.ctx, &acc, self.letter_mat(l));
        }
        acc
    }

    pub fn evaluate(&self, w: &Word) -> GroupElement {
        assert_eq!(w.p, self.ctx.p(), "word and ring disagree on p");
        GroupElement::from_mat(&self.ctx, self.eval_mat(w))
    }
}

/// Product of the generator lifts; the empty word is the identity.
pub fn evaluate(ctx: &Arc<RingContext>, w: &Word) -> GroupElement {
    Evaluator::new(ctx).evaluate(w)
}

/// Decomposes a member into a normal-form word via the nearest-λ-multiple
/// continued fraction.
pub fn matrix_to_word(g: &GroupElement) -> Result<Word, WordError> {
    let ctx = g.ctx();
    let p = ctx.p();
    let mut m = g.entries().clone();
    let s_mat: Mat = [ctx.zero(), ctx.neg(&ctx.one()), ctx.one(), ctx.zero()];
    let mut quotients: Vec<i64> = Vec::new();
    let mut steps = 0;
    while !m[2].is_zero() {
        steps += 1;
        if steps > ctx.max_iter() {
            return Err(WordError::NotAMember);
        }
        let (n, r) = ctx.pseudo_divide(&m[0], &m[2]).map_err(|_| WordError::NotAMember)?;
        let nl = ctx.scale(&ctx.lambda(), n as i128);
        // T^{-n} M, then S on the left.
        let top = [r, ctx.sub(&m[1], &ctx.mul(&nl, &m[3]))];
        let shifted: Mat = [top[0].clone(), top[1].clone(), m[2].clone(), m[3].clone()];
        m = mat_mul(ctx, &s_mat, &shifted);
        quotients.push(n);
    }
    // Now m = ±[[1, eλ], [0, 1]].
    if ctx.sign(&m[0]) == Sign::Negative {
        m = crate::group::mat_neg(ctx, &m);
    }
    if !m[0].is_int(1) || !m[3].is_int(1) {
        return Err(WordError::NotAMember);
    }
    let e = {
        let c = m[1].coeffs();
        let e = if ctx.degree() == 1 { c[0] } else { c[1] };
        if ctx.scale(&ctx.lambda(), e) != m[1] {
            return Err(WordError::NotAMember);
        }
        i64::try_from(e).map_err(|_| WordError::NotAMember)?
    };
    // M = T^{n0} S T^{n1} S ... S T^e, with T = ιγ and T⁻¹ = γ^{p-1}ι.
    let mut stack = Vec::new();
    let push_t = |stack: &mut Vec<Letter>, n: i64| {
        for _ in 0..n.unsigned_abs() {
            if n > 0 {
                push_letter(p, stack, Letter::Iota);
                push_letter(p, stack, Letter::Gamma(1));
            } else {
                push_letter(p, stack, Letter::Gamma(p - 1));
                push_letter(p, stack, Letter::Iota);
            }
        }
    };
    for &n in &quotients {
        push_t(&mut stack, n);
        push_letter(p, &mut stack, Letter::Iota);
    }
    push_t(&mut stack, e);
    Ok(Word { p, letters: stack })
}

/// Splits `w = root^k` with `root` primitive; `None` for torsion words.
pub fn primitive_root(w: &Word) -> Option<(Word, usize)> {
    let (c, u) = cyclic_reduce(w);
    if c.len() < 2 {
        return None;
    }
    let d = c.period();
    let q = Word { p: w.p, letters: c.as_word().letters[..d].to_vec() };
    Some((u.conjugate(&q), c.len() / d))
}

/// A hyperbolic word is primitive iff its cyclic word is aperiodic.
pub fn is_primitive(ctx: &Arc<RingContext>, w: &Word) -> Result<bool, WordError> {
    if !evaluate(ctx, w).is_hyperbolic() {
        return Err(WordError::NotHyperbolic);
    }
    let (c, _) = cyclic_reduce(w);
    Ok(c.period() == c.len())
}

/// Exponents `(j₁, …, jₙ)` with `w` conjugate to `V_{j₁} ⋯ V_{jₙ}`, `V_j = ιγ^j`.
pub fn vblock_form(w: &Word) -> Result<Vec<u32>, WordError> {
    let (c, _) = cyclic_reduce(w);
    let l = c.as_word().letters();
    if l.len() < 2 {
        return Err(WordError::NotApplicable);
    }
    // Rotation-minimal and alternating, so it starts with ι.
    debug_assert_eq!(l[0], Letter::Iota);
    Ok(l.chunks(2)
        .map(|pair| match pair[1] {
            Letter::Gamma(k) => k,
            Letter::Iota => unreachable!("cyclically reduced words alternate"),
        })
        .collect())
}

/// Reassembles `V_{j₁} ⋯ V_{jₙ}`.
pub fn vblock_word(p: u32, js: &[u32]) -> Result<Word, WordError> {
    let mut letters = Vec::with_capacity(2 * js.len());
    for &j in js {
        if j == 0 || j >= p {
            return Err(WordError::BadExponent { k: j as i64, p });
        }
        letters.push(Letter::Iota);
        letters.push(Letter::Gamma(j));
    }
    Word::new(p, letters)
}

/// Letters in lexicographic order.
pub fn alphabet(p: u32) -> Vec<Letter> {
    std::iter::once(Letter::Iota).chain((1..p).map(Letter::Gamma)).collect()
}

/// All normal-form words of length `≤ max_len` in length-then-lex order,
/// paired with their raw matrices.
pub struct WordTable {
    words: Vec<Word>,
    mats: Vec<Mat>,
    /// `level_start[n]` is the index of the first word of length `n`.
    level_start: Vec<usize>,
}

impl WordTable {
    pub fn new(ev: &Evaluator, max_len: usize) -> Self {
        let ctx = ev.ctx();
        let p = ctx.p();
        let letters = alphabet(p);
        let mut words = vec![Word::empty(p)];
        let mut mats = vec![mat_identity(ctx)];
        let mut level_start = vec![0, 1];
        for _ in 1..=max_len {
            let (lo, hi) = (level_start[level_start.len() - 2], level_start[level_start.len() - 1]);
            for i in lo..hi {
                for &l in &letters {
                    if let Some(&last) = words[i].letters.last() {
                        if matches!((last, l), (Letter::Iota, Letter::Iota) | (Letter::Gamma(_), Letter::Gamma(_))) {
                            continue;
                        }
                    }
                    let mut ls = words[i].letters.clone();
                    ls.push(l);
                    mats.push(mat_mul(ctx, &mats[i], ev.letter_mat(l)));
                    words.push(Word { p, letters: ls });
                }
            }
            level_start.push(words.len());
        }
        WordTable { words, mats, level_start }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.level_start.len() - 2
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub(crate) fn mat(&self, i: usize) -> &Mat {
        &self.mats[i]
    }

    /// Number of entries of length `≤ n`.
    pub fn count_up_to(&self, n: usize) -> usize {
        self.level_start[(n + 1).min(self.level_start.len() - 1)]
    }

    /// `x · g · x⁻¹` for table entry `i`, as a raw matrix.
    pub(crate) fn conjugate_mat(&self, ctx: &RingContext, i: usize, g: &Mat) -> Mat {
        let x = &self.mats[i];
        mat_mul(ctx, &mat_mul(ctx, x, g), &mat_adj(ctx, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::generators;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(p: u32) -> Arc<RingContext> {
        RingContext::new(p).unwrap()
    }

    pub(crate) fn random_word(rng: &mut ChaCha8Rng, p: u32, max_len: usize) -> Word {
        let len = rng.gen_range(0..=max_len);
        let mut letters = Vec::with_capacity(len);
        let mut iota_next = rng.gen_bool(0.5);
        for _ in 0..len {
            letters.push(if iota_next { Letter::Iota } else { Letter::Gamma(rng.gen_range(1..p)) });
            iota_next = !iota_next;
        }
        Word::new(p, letters).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        for p in 3..=6 {
            let r = ctx(p);
            let (s, t, _) = generators(&r);
            assert_eq!(evaluate(&r, &Word::iota(p)), s);
            assert_eq!(evaluate(&r, &Word::parse(p, "i g^1").unwrap()), t);
            assert!(evaluate(&r, &Word::empty(p)).is_identity());
        }
    }

    #[test]
    fn worked_example_matrix() {
        let r = ctx(4);
        let w = Word::parse(4, "i g^1 i g^3 i g^2").unwrap();
        assert_eq!(evaluate(&r, &w).to_string(), "[[[0,4],[5,0]],[[3,0],[0,2]]]");
    }

    #[test]
    fn parse_and_reduce() {
        assert_eq!(Word::parse(5, "i i g^2").unwrap().to_string(), "g^2");
        assert_eq!(Word::parse(5, "g^2 g^3 i").unwrap().to_string(), "i");
        assert_eq!(Word::parse(5, "g i").unwrap().to_string(), "g^1 i");
        assert!(Word::parse(5, "g^5").is_err());
        assert!(Word::parse(5, "x").is_err());
        assert!(Word::new(5, vec![Letter::Iota, Letter::Iota]).is_err());
    }

    #[test]
    fn matrix_to_word_examples() {
        let r = ctx(4);
        let (s, _, _) = generators(&r);
        assert_eq!(matrix_to_word(&s).unwrap(), Word::iota(4));
        assert!(matrix_to_word(&GroupElement::identity(&r)).unwrap().is_empty());
        let bad = GroupElement::from_coeffs(&r, [&[1, 0], &[1, 0], &[0, 0], &[1, 0]]).unwrap();
        assert_eq!(matrix_to_word(&bad), Err(WordError::NotAMember));
    }

    #[test]
    fn round_trip_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 3..=6 {
            let r = ctx(p);
            let ev = Evaluator::new(&r);
            for _ in 0..100 {
                let w = random_word(&mut rng, p, 12);
                let g = ev.evaluate(&w);
                let back = matrix_to_word(&g).unwrap();
                assert_eq!(ev.evaluate(&back), g, "p={p} w={w} back={back}");
            }
        }
    }

    #[test]
    fn evaluate_is_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in 3..=6 {
            let ev = Evaluator::new(&ctx(p));
            for _ in 0..50 {
                let (a, b) = (random_word(&mut rng, p, 8), random_word(&mut rng, p, 8));
                assert_eq!(ev.evaluate(&a.concat(&b)), ev.evaluate(&a).mul(&ev.evaluate(&b)));
            }
        }
    }

    #[test]
    fn cyclic_reduce_examples() {
        let p = 5;
        let (c, conj) = cyclic_reduce(&Word::parse(p, "i g^1 i").unwrap());
        assert_eq!(c.to_string(), "g^1");
        assert_eq!(conj, Word::iota(p));

        let (c, conj) = cyclic_reduce(&Word::parse(p, "g^2 i g^3").unwrap());
        assert_eq!(c.to_string(), "i");
        assert_eq!(conj, Word::gamma(p, 2));

        let w = Word::parse(p, "g^2 i g^1 i").unwrap();
        let (c, conj) = cyclic_reduce(&w);
        assert_eq!(c.to_string(), "i g^1 i g^2");
        assert_eq!(conj.conjugate(c.as_word()), w);
    }

    #[test]
    fn cyclic_reduce_witness_verifies() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for p in 3..=6 {
            let ev = Evaluator::new(&ctx(p));
            for _ in 0..100 {
                let w = random_word(&mut rng, p, 12);
                let (c, conj) = cyclic_reduce(&w);
                assert_eq!(ev.evaluate(&conj.conjugate(c.as_word())), ev.evaluate(&w));
                let l = c.as_word().letters();
                if l.len() >= 2 {
                    assert_ne!(
                        matches!((l[0], l[l.len() - 1]), (Letter::Iota, Letter::Iota)),
                        true
                    );
                }
            }
        }
    }

    #[test]
    fn conjugacy() {
        let p = 4;
        let w = Word::parse(p, "i g^1 i g^3 i g^2").unwrap();
        let rot = Word::parse(p, "i g^3 i g^2 i g^1").unwrap();
        let h = conjugacy_witness(&w, &rot).unwrap();
        assert_eq!(h.conjugate(&rot), w);
        assert!(!are_conjugate(&Word::gamma(p, 1), &Word::gamma(p, 2)));

        let ev = Evaluator::new(&ctx(3));
        let w = matrix_to_word(&GroupElement::parse(ev.ctx(), "[[[1],[1]],[[1],[2]]]").unwrap()).unwrap();
        let h = conjugacy_witness(&w, &w.inverse()).unwrap();
        assert_eq!(ev.evaluate(&h.conjugate(&w.inverse())), ev.evaluate(&w));
    }

    #[test]
    fn primitivity() {
        let r5 = ctx(5);
        let w = Word::parse(5, "i g^1 i g^2").unwrap();
        assert_eq!(is_primitive(&r5, &w), Ok(true));
        assert_eq!(is_primitive(&r5, &w.pow(2)), Ok(false));
        assert_eq!(is_primitive(&r5, &w.pow(3)), Ok(false));
        assert_eq!(is_primitive(&r5, &Word::iota(5)), Err(WordError::NotHyperbolic));
        let r3 = ctx(3);
        assert_eq!(is_primitive(&r3, &Word::parse(3, "i g^1 i g^2").unwrap()), Ok(true));
    }

    #[test]
    fn primitive_roots() {
        let ev = Evaluator::new(&ctx(4));
        let r = Word::parse(4, "g^1 i g^2 i g^3 i").unwrap();
        for k in 1..=3 {
            let (root, n) = primitive_root(&r.pow(k)).unwrap();
            assert_eq!(n, k as usize);
            assert_eq!(ev.evaluate(&root.pow(k)), ev.evaluate(&r.pow(k)));
        }
        assert!(primitive_root(&Word::iota(4)).is_none());
    }

    #[test]
    fn vblocks() {
        let w = Word::parse(4, "i g^1 i g^3 i g^2").unwrap();
        assert_eq!(vblock_form(&w).unwrap(), vec![1, 3, 2]);
        assert_eq!(vblock_form(&Word::parse(4, "i g^2").unwrap()).unwrap(), vec![2]);
        assert_eq!(vblock_form(&Word::gamma(4, 2)), Err(WordError::NotApplicable));
        let js = [2, 1, 3, 3];
        let back = vblock_form(&vblock_word(4, &js).unwrap()).unwrap();
        let n = js.len();
        assert!((0..n).any(|r| (0..n).all(|i| back[i] == js[(i + r) % n])));
    }

    #[test]
    fn word_table_order_and_matrices() {
        let ev = Evaluator::new(&ctx(4));
        let table = WordTable::new(&ev, 5);
        assert!(table.words().windows(2).all(|w| w[0] < w[1]));
        // 1 + 4 + (1·3 + 3·1) + ... : count words per length directly.
        let mut expected = 1;
        let (mut ends_i, mut ends_g) = (1usize, 3usize);
        expected += ends_i + ends_g;
        for _ in 2..=5 {
            let (ni, ng) = (ends_g, ends_i * 3);
            ends_i = ni;
            ends_g = ng;
            expected += ends_i + ends_g;
        }
        assert_eq!(table.len(), expected);
        for i in (0..table.len()).step_by(17) {
            assert_eq!(GroupElement::from_mat(ev.ctx(), table.mat(i).clone()), ev.evaluate(table.word(i)));
        }
        assert_eq!(table.count_up_to(1), 5);
    }
}
