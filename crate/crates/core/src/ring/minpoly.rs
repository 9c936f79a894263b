//! Cyclotomic polynomials and their real-subfield folding.
//!
//! The minimal polynomial of `2cos(π/p)` is obtained from the `2p`-th
//! cyclotomic polynomial: `Φ_{2p}(x) = x^k Ψ(x + 1/x)` where `k = φ(2p)/2`,
//! and `Ψ` is the polynomial we want.

use super::Coeff;

/// Little-endian integer polynomial.
type Poly = Vec<Coeff>;

fn trim(mut p: Poly) -> Poly {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Coeff], b: &[Coeff]) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Exact division by a monic divisor. Panics if the remainder is nonzero.
fn poly_div_exact(num: &[Coeff], den: &[Coeff]) -> Poly {
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
        return vec![0];
    }
    let mut quot = vec![0; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[k + j] -= c * d;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
    trim(quot)
}

/// The `n`-th cyclotomic polynomial, computed by dividing `x^n - 1` by the
/// cyclotomic factors of all proper divisors.
pub(crate) fn cyclotomic(n: u32) -> Poly {
    assert!(n >= 1);
    let mut acc: Poly = vec![1];
    for d in 1..n {
        if n % d == 0 {
            acc = poly_mul(&acc, &cyclotomic(d));
        }
    }
    let mut xn = vec![0; n as usize + 1];
    xn[0] = -1;
    xn[n as usize] = 1;
    poly_div_exact(&xn, &acc)
}

/// Minimal polynomial of `2cos(π/p)` as a little-endian monic coefficient list.
pub(crate) fn real_cyclotomic(p: u32) -> Poly {
    let phi = cyclotomic(2 * p);
    let two_k = phi.len() - 1;
    debug_assert!(two_k % 2 == 0);
    let k = two_k / 2;

    // Dickson polynomials D_j(y) = x^j + x^-j with y = x + 1/x.
    let mut dickson: Vec<Poly> = Vec::with_capacity(k + 1);
    dickson.push(vec![2]);
    dickson.push(vec![0, 1]);
    for j in 2..=k {
        let shifted: Poly = std::iter::once(0).chain(dickson[j - 1].iter().copied()).collect();
        let mut next = shifted;
        for (i, &c) in dickson[j - 2].iter().enumerate() {
            next[i] -= c;
        }
        dickson.push(trim(next));
    }

    let mut psi = vec![0; k + 1];
    psi[0] = phi[k];
    for j in 1..=k {
        let c = phi[k + j];
        for (i, &d) in dickson[j].iter().enumerate() {
            psi[i] += c * d;
        }
    }
    trim(psi)
}

/// Euler's totient, used only to cross-check degrees.
#[cfg(test)]
fn totient(mut n: u32) -> u32 {
    let mut result = n;
    let mut f = 2;
    while f * f <= n {
        if n % f == 0 {
            while n % f == 0 {
                n /= f;
            }
            result -= result / f;
        }
        f += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}
