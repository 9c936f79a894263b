//! Benchmark fixtures shared by the criterion harness.

use std::sync::Arc;

use hecke_core::{evaluate, GroupElement, RingContext, Word};

/// Alternating word with about `len` letters and varied exponents.
pub fn long_word(p: u32, len: usize) -> Word {
    let js: Vec<String> = (0..len / 2).map(|i| format!("i g^{}", 1 + (i as u32 * 7 + 1) % (p - 1))).collect();
    Word::parse(p, &js.join(" ")).expect("alternating word")
}

pub fn element(ctx: &Arc<RingContext>, len: usize) -> GroupElement {
    evaluate(ctx, &long_word(ctx.p(), len))
}
