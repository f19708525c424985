//! Brute-force ground truth.
//!
//! Exhaustive enumeration of permutations (in lexicographic order, by
//! iterative successor computation) and of set partitions (as restricted
//! growth strings), histogrammed by the statistic of interest. Closed
//! forms are validated against these histograms; nothing here consults
//! the formulas it is meant to check, except [`closed_form_row`], which
//! exists only to pair each statistic with its closed form.
//!
//! Enumeration is capped by [`EnumLimits`]; the defaults keep runs at
//! desk scale (9! = 362880 permutations is sub-second, partitions of a
//! 12-set number in the millions). Larger runs are an explicit caller
//! choice. Above [`PAR_CHUNK_MIN`] elements, permutations are enumerated
//! in parallel over disjoint lexicographic ranges, one per leading
//! element, and the histograms merged.

use std::str::FromStr;

use rayon::prelude::*;

use crate::combinat::{
    bell, binomial, eulerian_row, factorial, nat_pow, rencontres_row, stirling1_unsigned,
    stirling2_row,
};
use crate::poly::IntPolynomial;
use crate::{Error, Int, Nat, Result};

/// Permutation sizes from which enumeration fans out over leading
/// elements.
const PAR_CHUNK_MIN: u64 = 10;

/// Ceiling for the literal marked-tuple enumerator, which materializes
/// every tuple one by one.
const LITERAL_TUPLE_MAX_N: u64 = 5;
const LITERAL_TUPLE_MAX_Q: u64 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StatisticId {
    /// Positions `i` with `sigma(i) == i`; histogram row is `p_n(k)`.
    FixedPoints,
    /// Cycle count; histogram row is `|s(n, k)|`.
    Cycles,
    /// Non-empty blocks of a set partition; histogram row is `S(n, k)`,
    /// total `B_n`.
    PartitionBlocks,
    /// Positions `i < n` with `sigma(i) < sigma(i+1)`; histogram row is
    /// the Eulerian row.
    Ascents,
    /// Permutations with a marked ordered `q`-tuple of (repeatable)
    /// fixed points; the single total is `sum_k k^q p_n(k) = B_q n!`.
    MarkedTuples,
}

impl StatisticId {
    pub const ALL: [StatisticId; 5] = [
        StatisticId::FixedPoints,
        StatisticId::Cycles,
        StatisticId::PartitionBlocks,
        StatisticId::Ascents,
        StatisticId::MarkedTuples,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatisticId::FixedPoints => "FIXED_POINTS",
            StatisticId::Cycles => "CYCLES",
            StatisticId::PartitionBlocks => "PARTITION_BLOCKS",
            StatisticId::Ascents => "ASCENTS",
            StatisticId::MarkedTuples => "MARKED_TUPLES",
        }
    }
}

impl FromStr for StatisticId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.to_ascii_uppercase();
        StatisticId::ALL
            .into_iter()
            .find(|stat| stat.as_str() == wanted)
            .ok_or_else(|| Error::Usage(format!("unknown statistic `{s}`")))
    }
}

impl std::fmt::Display for StatisticId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact histogram from one exhaustive enumeration.
#[derive(Clone, Debug, PartialEq)]
pub struct StatRow {
    pub statistic: StatisticId,
    pub n: u64,
    /// `counts[v]` objects attain statistic value `v`; for
    /// `MarkedTuples` this is the single total count.
    pub counts: Vec<Nat>,
    /// Tuple order `q`, present exactly for `MarkedTuples`.
    pub tuple_order: Option<u64>,
}

/// Enumeration ceilings. Exceeding one is a [`Error::ResourceLimit`],
/// never a silent truncation.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub permutation_max: u64,
    pub partition_max: u64,
}

impl Default for EnumLimits {
    fn default() -> Self {
        EnumLimits {
            permutation_max: 9,
            partition_max: 12,
        }
    }
}

/// Exhaustively enumerates `stat` over size `n`. `q` is required exactly
/// for [`StatisticId::MarkedTuples`].
pub fn enumerate_statistic(
    stat: StatisticId,
    n: u64,
    q: Option<u64>,
    limits: &EnumLimits,
) -> Result<StatRow> {
    match (stat, q) {
        (StatisticId::MarkedTuples, None) => {
            return Err(Error::Usage("MARKED_TUPLES requires a tuple order q".to_string()));
        }
        (StatisticId::MarkedTuples, Some(_)) => {}
        (_, Some(_)) => {
            return Err(Error::Usage(format!("{stat} does not take a tuple order q")));
        }
        (_, None) => {}
    }

    let ceiling = match stat {
        StatisticId::PartitionBlocks => limits.partition_max,
        _ => limits.permutation_max,
    };
    if n > ceiling {
        return Err(Error::ResourceLimit(format!(
            "{stat} enumeration at n = {n} exceeds the ceiling {ceiling}; raise the limit explicitly for runs beyond desk scale"
        )));
    }

    let counts = match stat {
        StatisticId::FixedPoints => permutation_histogram(n, count_fixed_points),
        StatisticId::Cycles => permutation_histogram(n, count_cycles),
        StatisticId::Ascents => {
            let mut counts = permutation_histogram(n, count_ascents);
            counts.truncate(n.max(1) as usize); // ascent values reach only n-1
            counts
        }
        StatisticId::PartitionBlocks => partition_histogram(n),
        StatisticId::MarkedTuples => {
            let q = q.expect("checked above");
            let fixed = permutation_histogram(n, count_fixed_points);
            let total = fixed
                .iter()
                .enumerate()
                .map(|(k, c)| nat_pow(&Nat::from(k), q) * c)
                .sum();
            vec![total]
        }
    };

    Ok(StatRow {
        statistic: stat,
        n,
        counts,
        tuple_order: q,
    })
}

/// The closed-form row each statistic is checked against.
pub fn closed_form_row(stat: StatisticId, n: u64, q: Option<u64>) -> Result<Vec<Nat>> {
    match stat {
        StatisticId::FixedPoints => Ok(rencontres_row(n)),
        StatisticId::Cycles => Ok((0..=n).map(|k| stirling1_unsigned(n, k)).collect()),
        StatisticId::PartitionBlocks => Ok(stirling2_row(n)),
        StatisticId::Ascents => Ok(eulerian_row(n)),
        StatisticId::MarkedTuples => {
            let q = q.ok_or_else(|| {
                Error::Usage("MARKED_TUPLES requires a tuple order q".to_string())
            })?;
            Ok(vec![bell(q) * factorial(n)])
        }
    }
}

/// Counts every marked tuple one by one: for each permutation, walks the
/// whole `q`-fold cartesian power of its fixed-point set with an
/// odometer. Only for tiny sizes, as a self-check of the weighted
/// histogram shortcut in `enumerate_statistic`.
pub fn marked_tuples_literal(n: u64, q: u64) -> Result<Nat> {
    if n > LITERAL_TUPLE_MAX_N || q > LITERAL_TUPLE_MAX_Q {
        return Err(Error::ResourceLimit(format!(
            "literal tuple marking is capped at n <= {LITERAL_TUPLE_MAX_N}, q <= {LITERAL_TUPLE_MAX_Q}, got n = {n}, q = {q}"
        )));
    }
    let mut total = Nat::default();
    for_each_permutation(n as usize, |perm| {
        let fixed: Vec<usize> = perm
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i == v)
            .map(|(i, _)| i)
            .collect();
        if q == 0 {
            total += 1u32; // exactly one empty tuple per permutation
            return;
        }
        if fixed.is_empty() {
            return;
        }
        let mut odometer = vec![0usize; q as usize];
        'tuples: loop {
            total += 1u32;
            for slot in odometer.iter_mut() {
                *slot += 1;
                if *slot < fixed.len() {
                    continue 'tuples;
                }
                *slot = 0;
            }
            break;
        }
    });
    Ok(total)
}

/// Coefficient of `x^((k-1)i)` in `((1+x)^k - x^k)^i`, extracted by
/// exact polynomial arithmetic; equals `k^i`.
pub fn power_by_coefficient_extraction(k: u64, i: u64) -> Result<Nat> {
    if k == 0 {
        return Err(Error::Domain(
            "power_by_coefficient_extraction requires k >= 1 (degree bookkeeping)".to_string(),
        ));
    }
    // (1+x)^k - x^k has the binomial coefficients C(k, 0..k-1).
    let base = IntPolynomial::from_coeffs((0..k).map(|j| Int::from(binomial(k, j))).collect());
    let power = base.pow(i);
    let degree = (k - 1) * i;
    power
        .coeff(degree as usize)
        .to_biguint()
        .ok_or_else(|| Error::Domain("extracted coefficient is negative".to_string()))
}

fn count_fixed_points(perm: &[usize]) -> usize {
    perm.iter().enumerate().filter(|&(i, &v)| i == v).count()
}

fn count_cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
        }
    }
    cycles
}

fn count_ascents(perm: &[usize]) -> usize {
    perm.windows(2).filter(|w| w[0] < w[1]).count()
}

/// Rearranges `a` into its lexicographic successor; `false` once `a` is
/// the final (descending) arrangement.
fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut pivot = a.len() - 1;
    while pivot > 0 && a[pivot - 1] >= a[pivot] {
        pivot -= 1;
    }
    if pivot == 0 {
        return false;
    }
    let mut swap = a.len() - 1;
    while a[swap] <= a[pivot - 1] {
        swap -= 1;
    }
    a.swap(pivot - 1, swap);
    a[pivot..].reverse();
    true
}

/// Visits all permutations of `0..n` in lexicographic order.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..n).collect();
    loop {
        f(&a);
        if !next_permutation(&mut a) {
            return;
        }
    }
}

/// Histogram of `statistic` over all permutations of `0..n`, indexed by
/// statistic value `0..=n`. Fans out over the leading element for large
/// `n`.
fn permutation_histogram(n: u64, statistic: fn(&[usize]) -> usize) -> Vec<Nat> {
    let size = n as usize;
    if n < PAR_CHUNK_MIN {
        let mut counts = vec![0u64; size + 2];
        for_each_permutation(size, |perm| counts[statistic(perm)] += 1);
        counts.truncate(size + 1);
        return counts.into_iter().map(Nat::from).collect();
    }

    let merged = (0..size)
        .into_par_iter()
        .map(|first| {
            // Permutations with a[0] == first form one contiguous
            // lexicographic range: iterate successors of the suffix.
            let mut a = Vec::with_capacity(size);
            a.push(first);
            a.extend((0..size).filter(|&v| v != first));
            let mut counts = vec![0u64; size + 2];
            loop {
                counts[statistic(&a)] += 1;
                if !next_permutation(&mut a[1..]) {
                    break;
                }
            }
            counts
        })
        .reduce(
            || vec![0u64; size + 2],
            |mut acc, chunk| {
                for (a, c) in acc.iter_mut().zip(chunk) {
                    *a += c;
                }
                acc
            },
        );
    merged[..=size].iter().copied().map(Nat::from).collect()
}

/// Histogram of block counts over all set partitions of an `n`-set,
/// enumerated as restricted growth strings.
fn partition_histogram(n: u64) -> Vec<Nat> {
    let size = n as usize;
    let mut counts = vec![0u64; size + 1];
    if size == 0 {
        counts[0] = 1; // the empty partition has zero blocks
        return counts.into_iter().map(Nat::from).collect();
    }
    let mut rgs = vec![0usize; size];
    loop {
        let blocks = rgs.iter().copied().max().unwrap_or(0) + 1;
        counts[blocks] += 1;
        // Successor: bump the rightmost digit that may still grow, zero
        // the tail.
        let mut i = size - 1;
        loop {
            if i == 0 {
                return counts.into_iter().map(Nat::from).collect();
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for slot in rgs.iter_mut().skip(i + 1) {
                    *slot = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}
