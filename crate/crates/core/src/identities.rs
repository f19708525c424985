//! Exact two-sided evaluation of the sum-rule catalog.
//!
//! Every identity is evaluated literally, term by term: the binomial
//! expansions of powers are *not* collapsed to the power they are known
//! to equal, since that equality is exactly what is being checked. Where
//! a printed formula is known to contain a misprint, the evaluator
//! supports two modes: [`EvalMode::AsWritten`] reproduces the printed
//! text (and is expected to fail), [`EvalMode::Corrected`] evaluates the
//! repaired form. Identities without a known misprint ignore the mode.
//!
//! Everything is exact integer or rational arithmetic except the finite
//! Dobinski variant, which cannot hold exactly (it carries a factor
//! `1/e`) and is reported as a residual diagnostic instead of a pass or
//! fail.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};

use crate::bounds::bigfloat_from_nat;
use crate::combinat::{
    bell, binomial, binomial_signed, derangement, eulerian, factorial, falling_factorial_eval,
    nat_pow, rencontres, rencontres_row, stirling1_row,
};
use crate::poly::IntPolynomial;
use crate::{Error, Int, Nat, Params, Rat, Result};

/// The identity catalog. Each tag maps to exactly one evaluator in
/// [`verify_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IdentityId {
    /// `sum_k sum_i s(r+1, i) k^i p_n(k) = n!`
    MainSumRule,
    /// `sum_k k(k-1)...(k-r) p_n(k) = n!`
    FallingMoment,
    /// `sum_k k^q p_n(k) = B_q n!` for `n >= q`
    MomentBell,
    /// `sum_k t^k p_n(k) = n! sum_i (t-1)^i / i!` as polynomials in `t`
    GeneratingPoly,
    /// `p_n(0) = sum_k (k-1) C(n, k) p_{n-k}(0)`
    DeutschElizalde,
    /// `d_n = (n-1)(d_{n-1} + d_{n-2})`
    EulerRecurrence,
    /// `p_n(k) = C(n, k) sum_l (l-1) p_{n-k}(l)`
    WeightedPnk,
    /// Main sum rule with `k^i` expanded by the Vassilev-Missana binomial sum
    BinomialSumRule,
    /// Binomial sum rule with `s(r+1, i)` expanded by the Schlomilch double
    /// sum and the inner power re-expanded once more
    NestedSchlomilch,
    /// The fully normalized nested sum, equal to `1`
    NormalizedNested,
    /// Bell numbers as the double sum over `i^q` terms
    BellDouble,
    /// Bell numbers as the triple binomial sum, `n >= q`
    BellBinomial,
    /// Finite Dobinski variant; diagnostic only
    DobinskiFinite,
}

impl IdentityId {
    pub const ALL: [IdentityId; 13] = [
        IdentityId::MainSumRule,
        IdentityId::FallingMoment,
        IdentityId::MomentBell,
        IdentityId::GeneratingPoly,
        IdentityId::DeutschElizalde,
        IdentityId::EulerRecurrence,
        IdentityId::WeightedPnk,
        IdentityId::BinomialSumRule,
        IdentityId::NestedSchlomilch,
        IdentityId::NormalizedNested,
        IdentityId::BellDouble,
        IdentityId::BellBinomial,
        IdentityId::DobinskiFinite,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::MainSumRule => "MAIN_SUM_RULE",
            IdentityId::FallingMoment => "FALLING_MOMENT",
            IdentityId::MomentBell => "MOMENT_BELL",
            IdentityId::GeneratingPoly => "GENERATING_POLY",
            IdentityId::DeutschElizalde => "DEUTSCH_ELIZALDE",
            IdentityId::EulerRecurrence => "EULER_RECURRENCE",
            IdentityId::WeightedPnk => "WEIGHTED_PNK",
            IdentityId::BinomialSumRule => "BINOMIAL_SUM_RULE",
            IdentityId::NestedSchlomilch => "NESTED_SCHLOMILCH",
            IdentityId::NormalizedNested => "NORMALIZED_NESTED",
            IdentityId::BellDouble => "BELL_DOUBLE",
            IdentityId::BellBinomial => "BELL_BINOMIAL",
            IdentityId::DobinskiFinite => "DOBINSKI_FINITE",
        }
    }

    /// Parameter names the identity requires, in declaration order.
    pub fn required_params(self) -> &'static [&'static str] {
        match self {
            IdentityId::MainSumRule
            | IdentityId::FallingMoment
            | IdentityId::BinomialSumRule
            | IdentityId::NestedSchlomilch
            | IdentityId::NormalizedNested => &["n", "r"],
            IdentityId::MomentBell | IdentityId::BellBinomial => &["n", "q"],
            IdentityId::GeneratingPoly
            | IdentityId::DeutschElizalde
            | IdentityId::EulerRecurrence => &["n"],
            IdentityId::WeightedPnk => &["n", "k"],
            IdentityId::BellDouble | IdentityId::DobinskiFinite => &["q"],
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == wanted)
            .ok_or_else(|| Error::Usage(format!("unknown identity `{s}`")))
    }
}

/// Whether a printed formula is evaluated verbatim or with its known
/// misprints repaired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EvalMode {
    AsWritten,
    #[default]
    Corrected,
}

impl EvalMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalMode::AsWritten => "as-written",
            EvalMode::Corrected => "corrected",
        }
    }
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "as-written" | "as_written" | "aswritten" => Ok(EvalMode::AsWritten),
            "corrected" => Ok(EvalMode::Corrected),
            other => Err(Error::Usage(format!("unknown mode `{other}`"))),
        }
    }
}

/// One side of an identity. Most identities produce exact rationals;
/// the generating-function identity compares whole polynomials and the
/// Dobinski diagnostic carries an approximate right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub enum ReportValue {
    Exact(Rat),
    Poly(IntPolynomial),
    Approx(f64),
}

impl ReportValue {
    /// Decimal rendering: `a` or `a/b` for rationals, `;`-joined
    /// coefficients for polynomials. Exact quantities never render as
    /// floats.
    pub fn render(&self) -> String {
        match self {
            ReportValue::Exact(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            ReportValue::Poly(p) => p.coeff_string(),
            ReportValue::Approx(v) => format!("{v:?}"),
        }
    }
}

/// Record of one identity evaluation.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub mode: EvalMode,
    pub params: Params,
    pub lhs: ReportValue,
    pub rhs: ReportValue,
    /// Exact equality of the two sides; `None` for diagnostics that have
    /// no exact right-hand side.
    pub equal: Option<bool>,
    /// Signed difference `lhs - rhs` for diagnostic identities.
    pub residual: Option<f64>,
    pub elapsed_ms: u64,
}

impl IdentityReport {
    /// A report counts as passed unless an exact comparison failed.
    pub fn passed(&self) -> bool {
        self.equal != Some(false)
    }
}

/// The Vassilev-Missana expansion
/// `k^i = sum_{l=0}^{floor((k-1)i/k)} (-1)^l C(i, l) C(k(i-l), i)`,
/// evaluated literally. The floor bound is undefined at `k = 0`.
pub fn vassilev_power(k: u64, i: u64) -> Result<Nat> {
    if k == 0 {
        return Err(Error::Domain(
            "vassilev_power requires k >= 1: the bound floor((k-1)i/k) is undefined at k = 0"
                .to_string(),
        ));
    }
    power_expansion(k, i, i)
        .to_biguint()
        .ok_or_else(|| Error::Domain("vassilev sum evaluated negative".to_string()))
}

/// `sum_t (-1)^t C(exp, t) C(base(exp - t), lower)` over
/// `t <= floor((base-1) exp / base)`; equals `base^exp` when
/// `lower == exp`. The `lower` index is threaded separately so the
/// misprinted variant of the normalized nested identity can be
/// reproduced verbatim.
fn power_expansion(base: u64, exp: u64, lower: u64) -> Int {
    debug_assert!(base >= 1);
    let bound = (base - 1) * exp / base;
    let mut acc = Int::zero();
    for t in 0..=bound {
        let term = Int::from(binomial(exp, t) * binomial(base * (exp - t), lower));
        if t % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// The Worpitzky expansion of `k^i` over Eulerian numbers.
///
/// The corrected form sums `<i, j> C(k+j, i)` and equals `k^i`; the
/// as-written form sums the printed `<i, j> C(k+j, j)`, which does not.
pub fn worpitzky_power(k: u64, i: u64, mode: EvalMode) -> Nat {
    let mut acc = Nat::zero();
    for j in 0..=i {
        let lower = match mode {
            EvalMode::Corrected => i,
            EvalMode::AsWritten => j,
        };
        acc += eulerian(i, j) * binomial(k + j, lower);
    }
    acc
}

/// Stirling numbers of the first kind by the Schlomilch double sum
/// (with `0^0 == 1` at the `h == j`, zero-exponent corner). Zero for
/// `i > q`; must agree with the recurrence triangle everywhere.
pub fn schlomilch_stirling1(q: u64, i: u64) -> Int {
    if i > q {
        return Int::zero();
    }
    let depth = q - i;
    let scale = factorial(depth);
    let mut acc = Int::zero();
    for h in 0..=depth {
        let weight = Int::from(&scale / factorial(h)); // (q-i)!/h!, exact
        for j in 0..=h {
            let exp = depth + h;
            let base = h - j;
            let power = direct_power(base, exp);
            if power.is_zero() {
                continue;
            }
            let mut term = Int::from(binomial(h, j))
                * binomial_signed(q as i64 - 1 + h as i64, (depth + h) as i64)
                * Int::from(binomial(2 * q - i, depth - h))
                * power
                * &weight;
            if (j + h) % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
    }
    exact_div(acc, &scale)
}

/// `base^exp` as an `Int`, with `0^0 == 1`.
fn direct_power(base: u64, exp: u64) -> Int {
    Int::from(nat_pow(&Nat::from(base), exp))
}

fn exact_div(value: Int, by: &Nat) -> Int {
    let by = Int::from(by.clone());
    let (quot, rem) = num_integer::Integer::div_rem(&value, &by);
    debug_assert!(rem.is_zero(), "division must be exact");
    quot
}

/// Evaluates both sides of `id` at `params` and reports the outcome.
pub fn verify_identity(id: IdentityId, mode: EvalMode, params: &Params) -> Result<IdentityReport> {
    check_param_names(id, params)?;
    let started = Instant::now();
    let outcome = match id {
        IdentityId::MainSumRule => main_sum_rule(params)?,
        IdentityId::FallingMoment => falling_moment(params)?,
        IdentityId::MomentBell => moment_bell(params)?,
        IdentityId::GeneratingPoly => generating_poly(params)?,
        IdentityId::DeutschElizalde => deutsch_elizalde(params)?,
        IdentityId::EulerRecurrence => euler_recurrence(params)?,
        IdentityId::WeightedPnk => weighted_pnk(params)?,
        IdentityId::BinomialSumRule => binomial_sum_rule(params)?,
        IdentityId::NestedSchlomilch => nested_schlomilch(params, mode)?,
        IdentityId::NormalizedNested => normalized_nested(params, mode)?,
        IdentityId::BellDouble => bell_double(params, mode)?,
        IdentityId::BellBinomial => bell_binomial(params)?,
        IdentityId::DobinskiFinite => dobinski_finite(params)?,
    };
    Ok(IdentityReport {
        id,
        mode,
        params: params.clone(),
        lhs: outcome.lhs,
        rhs: outcome.rhs,
        equal: outcome.equal,
        residual: outcome.residual,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

struct Outcome {
    lhs: ReportValue,
    rhs: ReportValue,
    equal: Option<bool>,
    residual: Option<f64>,
}

impl Outcome {
    fn exact(lhs: Rat, rhs: Rat) -> Self {
        let equal = Some(lhs == rhs);
        Outcome {
            lhs: ReportValue::Exact(lhs),
            rhs: ReportValue::Exact(rhs),
            equal,
            residual: None,
        }
    }

    fn poly(lhs: IntPolynomial, rhs: IntPolynomial) -> Self {
        let equal = Some(lhs == rhs);
        Outcome {
            lhs: ReportValue::Poly(lhs),
            rhs: ReportValue::Poly(rhs),
            equal,
            residual: None,
        }
    }
}

fn check_param_names(id: IdentityId, params: &Params) -> Result<()> {
    let required = id.required_params();
    for name in required {
        if !params.contains_key(*name) {
            return Err(Error::Usage(format!(
                "{id} requires parameter `{name}` (needs {})",
                required.join(", ")
            )));
        }
    }
    for name in params.keys() {
        if !required.contains(&name.as_str()) {
            return Err(Error::Usage(format!(
                "{id} does not take parameter `{name}` (needs {})",
                required.join(", ")
            )));
        }
    }
    Ok(())
}

fn get_param(params: &Params, name: &str) -> i64 {
    params[name]
}

fn nonneg_param(id: IdentityId, params: &Params, name: &str) -> Result<u64> {
    let v = get_param(params, name);
    u64::try_from(v).map_err(|_| Error::Domain(format!("{id}: parameter {name} = {v} must be >= 0")))
}

/// Extracts `(n, r+1)` for the sum-rule family, enforcing `n >= 1` and
/// `0 <= r+1 <= n`. `r = -1` is admissible: the inner sum then collapses
/// to the plain row sum.
fn order_params(id: IdentityId, params: &Params) -> Result<(u64, u64)> {
    let n = nonneg_param(id, params, "n")?;
    if n == 0 {
        return Err(Error::Domain(format!("{id}: n must be >= 1")));
    }
    let r = get_param(params, "r");
    if r < -1 {
        return Err(Error::Domain(format!("{id}: r = {r} must be >= -1")));
    }
    let order = (r + 1) as u64;
    if order > n {
        return Err(Error::Domain(format!(
            "{id}: requires r+1 <= n, got r+1 = {order}, n = {n}"
        )));
    }
    Ok((n, order))
}

fn rat_nat(v: Nat) -> Rat {
    Rat::from_integer(Int::from(v))
}

fn rat_int(v: Int) -> Rat {
    Rat::from_integer(v)
}

fn main_sum_rule(params: &Params) -> Result<Outcome> {
    let (n, order) = order_params(IdentityId::MainSumRule, params)?;
    let srow = stirling1_row(order);
    let mut lhs = Int::zero();
    for (k, pnk) in rencontres_row(n).into_iter().enumerate() {
        let mut weight = Int::zero();
        for (i, s) in srow.iter().enumerate() {
            weight += s * direct_power(k as u64, i as u64);
        }
        lhs += weight * Int::from(pnk);
    }
    Ok(Outcome::exact(rat_int(lhs), rat_nat(factorial(n))))
}

fn falling_moment(params: &Params) -> Result<Outcome> {
    let (n, order) = order_params(IdentityId::FallingMoment, params)?;
    let mut lhs = Int::zero();
    for (k, pnk) in rencontres_row(n).into_iter().enumerate() {
        lhs += falling_factorial_eval(&Int::from(k), order) * Int::from(pnk);
    }
    Ok(Outcome::exact(rat_int(lhs), rat_nat(factorial(n))))
}

fn moment_bell(params: &Params) -> Result<Outcome> {
    let id = IdentityId::MomentBell;
    let n = nonneg_param(id, params, "n")?;
    let q = nonneg_param(id, params, "q")?;
    if q > n {
        return Err(Error::Domain(format!("{id}: requires n >= q, got n = {n}, q = {q}")));
    }
    let mut lhs = Nat::zero();
    for (k, pnk) in rencontres_row(n).into_iter().enumerate() {
        lhs += nat_pow(&Nat::from(k), q) * pnk;
    }
    Ok(Outcome::exact(rat_nat(lhs), rat_nat(bell(q) * factorial(n))))
}

fn generating_poly(params: &Params) -> Result<Outcome> {
    let n = nonneg_param(IdentityId::GeneratingPoly, params, "n")?;
    let lhs = IntPolynomial::from_coeffs(rencontres_row(n).into_iter().map(Int::from).collect());
    // n! sum_{i<=n} (t-1)^i / i!, assembled with the exact integer
    // weights n!/i!.
    let t_minus_1 = IntPolynomial::from_coeffs(vec![-Int::one(), Int::one()]);
    let nfac = factorial(n);
    let mut rhs = IntPolynomial::zero();
    let mut power = IntPolynomial::one();
    for i in 0..=n {
        let weight = Int::from(&nfac / factorial(i));
        rhs = &rhs + &power.scale(&weight);
        if i < n {
            power = &power * &t_minus_1;
        }
    }
    Ok(Outcome::poly(lhs, rhs))
}

fn deutsch_elizalde(params: &Params) -> Result<Outcome> {
    let id = IdentityId::DeutschElizalde;
    let n = nonneg_param(id, params, "n")?;
    if n == 0 {
        return Err(Error::Domain(format!("{id}: n must be >= 1")));
    }
    let mut rhs = Nat::zero();
    for k in 1..=n {
        rhs += Nat::from(k - 1) * binomial(n, k) * derangement(n - k);
    }
    Ok(Outcome::exact(rat_nat(derangement(n)), rat_nat(rhs)))
}

fn euler_recurrence(params: &Params) -> Result<Outcome> {
    let id = IdentityId::EulerRecurrence;
    let n = nonneg_param(id, params, "n")?;
    if n < 2 {
        return Err(Error::Domain(format!("{id}: n must be >= 2")));
    }
    let rhs = Nat::from(n - 1) * (derangement(n - 1) + derangement(n - 2));
    Ok(Outcome::exact(rat_nat(derangement(n)), rat_nat(rhs)))
}

fn weighted_pnk(params: &Params) -> Result<Outcome> {
    let id = IdentityId::WeightedPnk;
    let n = nonneg_param(id, params, "n")?;
    let k = nonneg_param(id, params, "k")?;
    if k >= n {
        return Err(Error::Domain(format!(
            "{id}: requires k < n (the sum is empty at k = n), got n = {n}, k = {k}"
        )));
    }
    let mut inner = Nat::zero();
    for l in 1..=(n - k) {
        inner += Nat::from(l - 1) * rencontres(n - k, l);
    }
    Ok(Outcome::exact(
        rat_nat(rencontres(n, k)),
        rat_nat(binomial(n, k) * inner),
    ))
}

/// `sum_{m=0}^{limit} (-1)^m / m!`, accumulated literally in lowest
/// terms.
fn alternating_inverse_factorials(limit: u64) -> Rat {
    let mut acc = Rat::zero();
    for m in 0..=limit {
        let term = Rat::new(Int::one(), Int::from(factorial(m)));
        if m % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// `sum_l (-1)^l C(i, l) C(k(i-l), i)` with the `k = 0` column handled
/// as the direct power `0^i`, per the convention the derivation needs.
fn vassilev_or_direct(k: u64, i: u64) -> Int {
    if k == 0 {
        direct_power(0, i)
    } else {
        power_expansion(k, i, i)
    }
}

fn binomial_sum_rule(params: &Params) -> Result<Outcome> {
    let (n, order) = order_params(IdentityId::BinomialSumRule, params)?;
    let srow = stirling1_row(order);
    let mut lhs = Int::zero();
    for (k, pnk) in rencontres_row(n).into_iter().enumerate() {
        let mut weight = Int::zero();
        for (i, s) in srow.iter().enumerate() {
            weight += s * vassilev_or_direct(k as u64, i as u64);
        }
        lhs += weight * Int::from(pnk);
    }
    Ok(Outcome::exact(rat_int(lhs), rat_nat(factorial(n))))
}

/// The Schlomilch block of the nested identities: for fixed expansion
/// order and `i`, the sum over `0 <= j <= h <= order - i` and over the
/// re-expansion index `t`, scaled by `order!/h!` so the result stays an
/// integer (`scaled == true` restores the `1/h!` of the Schlomilch
/// formula, which the printed quintuple and normalized displays drop).
/// Returns `order! * s(order, i)` when corrected.
///
/// `power_lower` is the lower index of the re-expansion binomial:
/// `order - i + h` in the corrected form, the misprinted `order - i + k`
/// otherwise.
fn schlomilch_block(order: u64, i: u64, power_lower: impl Fn(u64) -> u64, scaled: bool) -> Int {
    let depth = order - i;
    let order_fac = factorial(order);
    let mut acc = Int::zero();
    for h in 0..=depth {
        let weight = if scaled {
            Int::from(&order_fac / factorial(h))
        } else {
            Int::one()
        };
        for j in 0..=h {
            let base = h - j;
            let exp = depth + h;
            // h == j: the power factor is evaluated directly; the
            // re-expansion is only valid for a positive base.
            let expanded = if base == 0 {
                direct_power(0, exp)
            } else {
                power_expansion(base, exp, power_lower(h))
            };
            if expanded.is_zero() {
                continue;
            }
            let mut term = Int::from(binomial(h, j))
                * binomial_signed(order as i64 - 1 + h as i64, (depth + h) as i64)
                * Int::from(binomial(2 * order - i, depth - h))
                * expanded
                * &weight;
            if (j + h) % 2 == 1 {
                term = -term;
            }
            acc += term;
        }
    }
    acc
}

fn nested_schlomilch(params: &Params, mode: EvalMode) -> Result<Outcome> {
    let (n, order) = order_params(IdentityId::NestedSchlomilch, params)?;
    let scaled = mode == EvalMode::Corrected;
    let blocks: Vec<Int> = (0..=order)
        .map(|i| schlomilch_block(order, i, |h| order - i + h, scaled))
        .collect();
    let mut lhs = Int::zero();
    for (k, pnk) in rencontres_row(n).into_iter().enumerate() {
        let mut weight = Int::zero();
        for (i, block) in blocks.iter().enumerate() {
            weight += block * vassilev_or_direct(k as u64, i as u64);
        }
        lhs += weight * Int::from(pnk);
    }
    let lhs = if scaled {
        Rat::new(lhs, Int::from(factorial(order)))
    } else {
        rat_int(lhs)
    };
    Ok(Outcome::exact(lhs, rat_nat(factorial(n))))
}

fn normalized_nested(params: &Params, mode: EvalMode) -> Result<Outcome> {
    let (n, order) = order_params(IdentityId::NormalizedNested, params)?;
    let scaled = mode == EvalMode::Corrected;
    let scale = if scaled { factorial(order) } else { Nat::one() };
    let mut lhs = Rat::zero();
    for k in 0..=n {
        let mut weight = Int::zero();
        for i in 0..=order {
            let block = match mode {
                EvalMode::Corrected => schlomilch_block(order, i, |h| order - i + h, scaled),
                EvalMode::AsWritten => schlomilch_block(order, i, |_| order - i + k, scaled),
            };
            weight += block * vassilev_or_direct(k, i);
        }
        let tail = alternating_inverse_factorials(n - k);
        lhs += Rat::new(weight, Int::from(factorial(k) * &scale)) * tail;
    }
    Ok(Outcome::exact(lhs, Rat::one()))
}

fn bell_double(params: &Params, mode: EvalMode) -> Result<Outcome> {
    let q = nonneg_param(IdentityId::BellDouble, params, "q")?;
    let mut lhs = Rat::zero();
    match mode {
        // Printed form: sum_{k=1}^q sum_{i=1}^k (-1)^(k-i) i^q / k!.
        EvalMode::AsWritten => {
            for k in 1..=q {
                for i in 1..=k {
                    let term = Rat::new(direct_power(i, q), Int::from(factorial(k)));
                    if (k - i) % 2 == 0 {
                        lhs += term;
                    } else {
                        lhs -= term;
                    }
                }
            }
        }
        // Standard Stirling-2 expansion: denominators i!(k-i)! and the
        // k = i = 0 corner included.
        EvalMode::Corrected => {
            for k in 0..=q {
                for i in 0..=k {
                    let term = Rat::new(
                        direct_power(i, q),
                        Int::from(factorial(i) * factorial(k - i)),
                    );
                    if (k - i) % 2 == 0 {
                        lhs += term;
                    } else {
                        lhs -= term;
                    }
                }
            }
        }
    }
    Ok(Outcome::exact(lhs, rat_nat(bell(q))))
}

fn bell_binomial(params: &Params) -> Result<Outcome> {
    let id = IdentityId::BellBinomial;
    let n = nonneg_param(id, params, "n")?;
    let q = nonneg_param(id, params, "q")?;
    if q > n {
        return Err(Error::Domain(format!("{id}: requires n >= q, got n = {n}, q = {q}")));
    }
    let mut lhs = Rat::zero();
    for k in 0..=n {
        let power_part = vassilev_or_direct(k, q);
        let tail = alternating_inverse_factorials(n - k);
        lhs += Rat::new(power_part, Int::from(factorial(k))) * tail;
    }
    Ok(Outcome::exact(lhs, rat_nat(bell(q))))
}

fn dobinski_finite(params: &Params) -> Result<Outcome> {
    let q = nonneg_param(IdentityId::DobinskiFinite, params, "q")?;
    let mut sum = Rat::zero();
    for k in 0..=q {
        sum += Rat::new(direct_power(k, q), Int::from(factorial(k)));
    }
    // The printed identity B_q = (1/e) sum_{k<=q} k^q/k! cannot hold
    // exactly (classical Dobinski needs the infinite sum), so the
    // comparison against e*B_q is reported as a float residual only.
    let target = num_bigfloat::E * bigfloat_from_nat(&bell(q));
    let sum_float = bigfloat_from_nat(sum.numer().magnitude())
        / bigfloat_from_nat(sum.denom().magnitude());
    let residual = (sum_float - target).to_f64();
    Ok(Outcome {
        lhs: ReportValue::Exact(sum),
        rhs: ReportValue::Approx(target.to_f64()),
        equal: None,
        residual: Some(residual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params_from;

    fn check(id: IdentityId, mode: EvalMode, pairs: &[(&str, i64)]) -> IdentityReport {
        verify_identity(id, mode, &params_from(pairs)).expect("evaluation should succeed")
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn vassilev_examples() {
        for i in 0..=10 {
            assert_eq!(vassilev_power(1, i).unwrap(), Nat::one());
        }
        assert_eq!(vassilev_power(2, 2).unwrap(), Nat::from(4u32));
        assert_eq!(vassilev_power(3, 2).unwrap(), Nat::from(9u32));
        assert!(matches!(vassilev_power(0, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn schlomilch_examples() {
        assert_eq!(schlomilch_stirling1(1, 1), Int::from(1));
        assert_eq!(schlomilch_stirling1(2, 1), Int::from(-1));
        assert_eq!(schlomilch_stirling1(4, 2), Int::from(11));
        assert_eq!(schlomilch_stirling1(0, 0), Int::from(1));
        assert_eq!(schlomilch_stirling1(3, 5), Int::from(0));
    }

    #[test]
    fn worpitzky_examples() {
        assert_eq!(worpitzky_power(5, 1, EvalMode::Corrected), Nat::from(5u32));
        assert_eq!(worpitzky_power(3, 2, EvalMode::Corrected), Nat::from(9u32));
        // The printed lower index C(k+j, j) under-counts: erratum evidence.
        assert_eq!(worpitzky_power(3, 2, EvalMode::AsWritten), Nat::from(5u32));
    }

    #[test]
    fn main_sum_rule_small_case() {
        let report = check(IdentityId::MainSumRule, EvalMode::Corrected, &[("n", 3), ("r", 0)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(6, 1)));
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn main_sum_rule_row_sum_degenerate_order() {
        // r = -1 collapses the Stirling layer to s(0,0) = 1.
        let report = check(IdentityId::MainSumRule, EvalMode::Corrected, &[("n", 5), ("r", -1)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(120, 1)));
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn moment_bell_examples() {
        let report = check(IdentityId::MomentBell, EvalMode::Corrected, &[("n", 10), ("q", 5)]);
        let expected = rat_nat(Nat::from(52u32) * factorial(10));
        assert_eq!(report.lhs, ReportValue::Exact(expected));
        assert_eq!(report.equal, Some(true));

        let report = check(IdentityId::MomentBell, EvalMode::Corrected, &[("n", 2), ("q", 1)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(2, 1)));
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn generating_poly_small_case() {
        let report = check(IdentityId::GeneratingPoly, EvalMode::Corrected, &[("n", 3)]);
        match &report.lhs {
            ReportValue::Poly(p) => assert_eq!(p.coeff_string(), "2;3;0;1"),
            other => panic!("expected polynomial, got {other:?}"),
        }
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn bell_double_erratum() {
        let report = check(IdentityId::BellDouble, EvalMode::AsWritten, &[("q", 2)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(5, 2)));
        assert_eq!(report.equal, Some(false));
        assert!(!report.passed());

        let report = check(IdentityId::BellDouble, EvalMode::Corrected, &[("q", 2)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(2, 1)));
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn normalized_nested_smallest_case() {
        let report =
            check(IdentityId::NormalizedNested, EvalMode::Corrected, &[("n", 1), ("r", 0)]);
        assert_eq!(report.lhs, ReportValue::Exact(rat(1, 1)));
        assert_eq!(report.equal, Some(true));
    }

    #[test]
    fn dobinski_is_diagnostic_only() {
        let report = check(IdentityId::DobinskiFinite, EvalMode::Corrected, &[("q", 3)]);
        assert_eq!(report.equal, None);
        assert!(report.passed());
        let residual = report.residual.expect("diagnostic must carry a residual");
        // sum_{k<=3} k^3/k! = 0 + 1 + 4 + 4.5 = 9.5 versus e*B_3 = 5e.
        assert!((residual - (9.5 - std::f64::consts::E * 5.0)).abs() < 1e-12);
    }

    #[test]
    fn parameter_validation() {
        let err = verify_identity(IdentityId::MainSumRule, EvalMode::Corrected, &params_from(&[("n", 3)]));
        assert!(matches!(err, Err(Error::Usage(_))));

        let err = verify_identity(
            IdentityId::MainSumRule,
            EvalMode::Corrected,
            &params_from(&[("n", 3), ("r", 3)]),
        );
        assert!(matches!(err, Err(Error::Domain(_))));

        let err = verify_identity(
            IdentityId::WeightedPnk,
            EvalMode::Corrected,
            &params_from(&[("n", 4), ("k", 4)]),
        );
        assert!(matches!(err, Err(Error::Domain(_))));

        let err = verify_identity(
            IdentityId::MomentBell,
            EvalMode::Corrected,
            &params_from(&[("n", 3), ("q", 5)]),
        );
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn identity_names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert!("NO_SUCH_IDENTITY".parse::<IdentityId>().is_err());
    }
}
