//! Base sequences, each memoized and each with an independent second
//! computation path used by the test suite:
//!
//! - `factorial`, `binomial` (Pascal rows, falling back to factorial
//!   quotients for large upper index);
//! - `derangement` via the recurrence `d_n = (n-1)(d_{n-1} + d_{n-2})`,
//!   cross-checked against the alternating sum `n! * sum (-1)^i / i!`;
//! - `rencontres(n, k) = C(n, k) * d_{n-k}`, the permutations of an
//!   `n`-set with exactly `k` fixed points;
//! - signed Stirling numbers of the first kind via
//!   `s(q+1, k) = s(q, k-1) - q s(q, k)`, coherent with the coefficients
//!   of the falling and rising factorial polynomials;
//! - Stirling numbers of the second kind via the explicit alternating
//!   sum `(1/k!) * sum_j (-1)^(k-j) C(k, j) j^q`, cross-checked against
//!   the usual two-term recurrence;
//! - Bell numbers as Stirling-2 row sums;
//! - Eulerian numbers via `<i, j> = (j+1)<i-1, j> + (i-j)<i-1, j-1>`.
//!
//! `0^0 == 1` throughout.

use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

use crate::cache::{SequenceCache, TriangleCache};
use crate::poly::IntPolynomial;
use crate::{Int, Nat};

/// Largest upper index for which `binomial` reads a memoized Pascal row;
/// beyond it the factorial quotient is used instead of materializing rows.
const PASCAL_ROW_LIMIT: u64 = 512;

static FACTORIAL: SequenceCache<Nat> = SequenceCache::new("factorial", |n, earlier| {
    if n == 0 {
        Nat::one()
    } else {
        &earlier[n - 1] * Nat::from(n)
    }
});

static DERANGEMENT: SequenceCache<Nat> = SequenceCache::new("euler-derangement", |n, earlier| {
    match n {
        0 => Nat::one(),
        1 => Nat::zero(),
        _ => (&earlier[n - 1] + &earlier[n - 2]) * Nat::from(n - 1),
    }
});

static BELL: SequenceCache<Nat> = SequenceCache::new("stirling2-row-sum", |q, _| {
    STIRLING2_RECURRENCE.row(q).iter().sum()
});

static PASCAL: TriangleCache<Nat> = TriangleCache::new("pascal", |q, prev| {
    (0..=q)
        .map(|k| {
            if k == 0 || k == q {
                Nat::one()
            } else {
                &prev[k - 1] + &prev[k]
            }
        })
        .collect()
});

static STIRLING1: TriangleCache<Int> = TriangleCache::new("stirling1-signed", |q, prev| {
    if q == 0 {
        return vec![Int::one()];
    }
    (0..=q)
        .map(|k| {
            let lead = if k >= 1 { prev[k - 1].clone() } else { Int::zero() };
            let tail = prev.get(k).cloned().unwrap_or_else(Int::zero);
            lead - tail * Int::from(q - 1)
        })
        .collect()
});

static STIRLING2_RECURRENCE: TriangleCache<Nat> = TriangleCache::new("stirling2-recurrence", |q, prev| {
    if q == 0 {
        return vec![Nat::one()];
    }
    (0..=q)
        .map(|k| {
            let lead = if k >= 1 { prev[k - 1].clone() } else { Nat::zero() };
            let tail = prev.get(k).cloned().unwrap_or_else(Nat::zero);
            lead + tail * Nat::from(k)
        })
        .collect()
});

static STIRLING2_SUM: TriangleCache<Nat> = TriangleCache::new("stirling2-alternating-sum", |q, _| {
    let powers: Vec<Nat> = (0..=q).map(|j| nat_pow(&Nat::from(j), q as u64)).collect();
    (0..=q)
        .map(|k| {
            let mut acc = Int::zero();
            for (j, jq) in powers.iter().enumerate().take(k + 1) {
                let term = Int::from(binomial(k as u64, j as u64) * jq);
                if (k - j) % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let acc = acc.to_biguint().expect("k! * S2(q, k) is nonnegative");
            let (s2, rem) = acc.div_rem(&factorial(k as u64));
            debug_assert!(rem.is_zero(), "alternating sum must be divisible by k!");
            s2
        })
        .collect()
});

static EULERIAN: TriangleCache<Nat> = TriangleCache::new("eulerian", |i, prev| {
    if i == 0 {
        return vec![Nat::one()];
    }
    (0..=i)
        .map(|j| {
            let stay = prev.get(j).cloned().unwrap_or_else(Nat::zero) * Nat::from(j + 1);
            let rise = if j >= 1 {
                prev[j - 1].clone() * Nat::from(i - j)
            } else {
                Nat::zero()
            };
            stay + rise
        })
        .collect()
});

/// `n!`
pub fn factorial(n: u64) -> Nat {
    FACTORIAL.value(to_usize(n))
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    if n <= PASCAL_ROW_LIMIT {
        PASCAL.row(to_usize(n))[to_usize(k)].clone()
    } else {
        binomial_by_factorials(n, k)
    }
}

/// `C(n, k)` as the factorial quotient `n! / (k! (n-k)!)`; the
/// independent path behind `binomial` for large `n` and the cross-check
/// for the Pascal rows.
pub fn binomial_by_factorials(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Binomial coefficient with a signed upper index:
/// `C(n, k) = (-1)^k C(k - n - 1, k)` for `n < 0`, zero for `k < 0`.
///
/// The nested sum rules index binomials by expressions that reach `-1`
/// at the degenerate order `r + 1 == 0`, where `C(-1, 0) == 1` is
/// required.
pub fn binomial_signed(n: i64, k: i64) -> Int {
    if k < 0 {
        return Int::zero();
    }
    if n >= 0 {
        return Int::from(binomial(n as u64, k as u64));
    }
    let flipped = Int::from(binomial((k - n - 1) as u64, k as u64));
    if k % 2 == 0 {
        flipped
    } else {
        -flipped
    }
}

/// Number of derangements `d_n`, by the Euler recurrence.
pub fn derangement(n: u64) -> Nat {
    DERANGEMENT.value(to_usize(n))
}

/// `d_n` by the alternating sum `sum_i (-1)^i n!/i!`; the independent
/// path behind `derangement`.
pub fn derangement_alternating(n: u64) -> Nat {
    let mut acc = Int::zero();
    let mut term = Int::one(); // n!/i! for i = n
    for i in (0..=n).rev() {
        if i % 2 == 0 {
            acc += &term;
        } else {
            acc -= &term;
        }
        term *= Int::from(i.max(1));
    }
    acc.to_biguint().expect("derangement count is nonnegative")
}

/// Rencontres number `p_n(k) = C(n, k) d_{n-k}`: permutations of an
/// `n`-set with exactly `k` fixed points. Zero when `k > n`.
pub fn rencontres(n: u64, k: u64) -> Nat {
    if k > n {
        return Nat::zero();
    }
    binomial(n, k) * derangement(n - k)
}

/// The full row `p_n(0), ..., p_n(n)`.
pub fn rencontres_row(n: u64) -> Vec<Nat> {
    (0..=n).map(|k| rencontres(n, k)).collect()
}

/// Signed Stirling number of the first kind `s(q, k)`, zero for `k > q`.
pub fn stirling1_signed(q: u64, k: u64) -> Int {
    STIRLING1
        .entry(to_usize(q), to_usize(k))
        .unwrap_or_else(Int::zero)
}

/// `|s(q, k)|`: the number of permutations of `q` elements with exactly
/// `k` cycles.
pub fn stirling1_unsigned(q: u64, k: u64) -> Nat {
    stirling1_signed(q, k)
        .abs()
        .to_biguint()
        .expect("absolute value is nonnegative")
}

/// The signed row `s(q, 0), ..., s(q, q)`.
pub fn stirling1_row(q: u64) -> Vec<Int> {
    STIRLING1.row(to_usize(q)).to_vec()
}

/// Stirling number of the second kind, by the explicit alternating sum
/// `(1/k!) sum_j (-1)^(k-j) C(k, j) j^q`. Zero for `k > q`.
pub fn stirling2(q: u64, k: u64) -> Nat {
    STIRLING2_SUM
        .entry(to_usize(q), to_usize(k))
        .unwrap_or_else(Nat::zero)
}

/// Stirling number of the second kind by the recurrence
/// `S(q, k) = k S(q-1, k) + S(q-1, k-1)`; the cross-check path behind
/// `stirling2` and the engine behind `bell`.
pub fn stirling2_recurrence(q: u64, k: u64) -> Nat {
    STIRLING2_RECURRENCE
        .entry(to_usize(q), to_usize(k))
        .unwrap_or_else(Nat::zero)
}

/// The row `S(q, 0), ..., S(q, q)` of the explicit-sum path.
pub fn stirling2_row(q: u64) -> Vec<Nat> {
    STIRLING2_SUM.row(to_usize(q)).to_vec()
}

/// Bell number `B_q = sum_k S(q, k)`.
pub fn bell(q: u64) -> Nat {
    BELL.value(to_usize(q))
}

/// Eulerian number `<i, j>`: permutations of `i` elements with exactly
/// `j` ascents. Zero for `j >= i >= 1`.
pub fn eulerian(i: u64, j: u64) -> Nat {
    EULERIAN
        .entry(to_usize(i), to_usize(j))
        .unwrap_or_else(Nat::zero)
}

/// The Eulerian row for `i`, one entry per attainable ascent count:
/// `[<i, 0>, ..., <i, i-1>]`, and `[1]` for `i == 0`.
pub fn eulerian_row(i: u64) -> Vec<Nat> {
    let row = EULERIAN.row(to_usize(i));
    if i == 0 {
        return row.to_vec();
    }
    row[..to_usize(i)].to_vec()
}

/// Coefficients of the falling factorial
/// `x(x-1)...(x-q+1) = sum_k s(q, k) x^k`.
pub fn falling_factorial_poly(q: u64) -> IntPolynomial {
    let mut p = IntPolynomial::one();
    for t in 0..q {
        p = &p * &IntPolynomial::from_coeffs(vec![-Int::from(t), Int::one()]);
    }
    p
}

/// Coefficients of the rising factorial
/// `x(x+1)...(x+n-1) = sum_k |s(n, k)| x^k`.
pub fn rising_factorial_poly(n: u64) -> IntPolynomial {
    let mut p = IntPolynomial::one();
    for t in 0..n {
        p = &p * &IntPolynomial::from_coeffs(vec![Int::from(t), Int::one()]);
    }
    p
}

/// The falling product `x(x-1)...(x-m+1)` with `m` factors (`1` for
/// `m == 0`) at an integer point.
pub fn falling_factorial_eval(x: &Int, m: u64) -> Int {
    let mut acc = Int::one();
    for t in 0..m {
        acc *= x - Int::from(t);
    }
    acc
}

/// `base^exp` with the convention `0^0 == 1`.
pub fn nat_pow(base: &Nat, exp: u64) -> Nat {
    if exp == 0 {
        return Nat::one();
    }
    Pow::pow(base, exp)
}

fn to_usize(n: u64) -> usize {
    usize::try_from(n).expect("index exceeds the address space")
}
