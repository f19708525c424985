//! Magnitude bounds and asymptotics for Stirling and Bell numbers,
//! verified against exact values.
//!
//! The exact quantities grow factorially, so every comparison happens in
//! log-domain: [`log_of_nat`] turns an exact big integer into its natural
//! logarithm with roughly 40 significant decimal digits (the working
//! type keeps a 130-bit mantissa, far beyond the 60 bits of comparison
//! accuracy the checks need), and bound expressions are assembled in the
//! same precision. Reports project the logs down to `f64` for display;
//! the satisfied/violated decision is always made at full precision.

use num_bigfloat::BigFloat;
use num_traits::Zero;

use crate::combinat::{bell, factorial, rencontres_row, stirling1_unsigned};
use crate::{Error, Nat, Params, Result};

/// Natural logarithm of a strictly positive quantity, kept in
/// high-precision floating point (40 significant decimal digits).
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogValue(BigFloat);

impl LogValue {
    pub fn from_ln(ln: BigFloat) -> Self {
        debug_assert!(!ln.is_nan() && !ln.is_inf());
        LogValue(ln)
    }

    pub fn bigfloat(self) -> BigFloat {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0.to_f64()
    }

    /// Log-domain difference `self - other` as a display float.
    pub fn slack_over(self, other: LogValue) -> f64 {
        (self.0 - other.0).to_f64()
    }
}

/// Which bound a report speaks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundId {
    Adell,
    LambdaSandwich,
    BerendTal,
}

impl BoundId {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Adell => "adell",
            BoundId::LambdaSandwich => "lambda",
            BoundId::BerendTal => "berend-tal",
        }
    }
}

/// Outcome of one bound check. `log_exact` is `None` when the exact
/// value is zero (the bound is then vacuously satisfied and the slack is
/// infinite, encoded as `None`). The two `lower` fields are only present
/// for the sandwich check, which verifies an inequality on each side.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub id: BoundId,
    pub params: Params,
    pub log_exact: Option<f64>,
    pub log_bound: f64,
    pub log_lower: Option<f64>,
    pub satisfied: bool,
    pub slack: Option<f64>,
    pub slack_lower: Option<f64>,
}

/// Both Lambert-W asymptotic estimates of `log B_n` next to the exact
/// value, with their relative log errors.
#[derive(Clone, Copy, Debug)]
pub struct BellAsymptotics {
    pub n: u64,
    pub log_exact: f64,
    pub log_debruijn: f64,
    pub log_odlyzko: f64,
    pub rel_err_debruijn: f64,
    pub rel_err_odlyzko: f64,
}

/// `BigFloat` with the exact value of a big integer (top 127 bits of
/// mantissa; exact whenever the integer fits in `u128`).
pub fn bigfloat_from_nat(x: &Nat) -> BigFloat {
    let bits = x.bits();
    if bits <= 127 {
        let mut v: u128 = 0;
        for (i, d) in x.to_u64_digits().into_iter().enumerate() {
            v |= (d as u128) << (64 * i);
        }
        return BigFloat::from_u128(v) * num_bigfloat::ONE;
    }
    let shift = bits - 127;
    let top = x >> shift;
    let mut v: u128 = 0;
    for (i, d) in top.to_u64_digits().into_iter().enumerate() {
        v |= (d as u128) << (64 * i);
    }
    BigFloat::from_u128(v) * num_bigfloat::ONE * pow2(shift)
}

/// `u64` to `BigFloat`, renormalized. The raw conversion can leave a
/// denormalized mantissa, which truncates subsequent divisions to a few
/// digits; multiplying by one forces renormalization.
fn bf_u64(v: u64) -> BigFloat {
    BigFloat::from_u64(v) * num_bigfloat::ONE
}

/// `2^e` by binary exponentiation (exact in the working precision until
/// the exponent range runs out near `10^167`).
fn pow2(mut e: u64) -> BigFloat {
    let mut acc = num_bigfloat::ONE;
    let mut base = num_bigfloat::TWO;
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// Natural log of a positive big integer, from the bit length plus the
/// normalized leading 127 bits: `ln x = ln(top) + shift * ln 2`.
pub fn log_of_nat(x: &Nat) -> Result<LogValue> {
    if x.is_zero() {
        return Err(Error::Domain("log_of_nat requires x >= 1".to_string()));
    }
    let bits = x.bits();
    if bits <= 127 {
        return Ok(LogValue::from_ln(bigfloat_from_nat(x).ln()));
    }
    let shift = bits - 127;
    let top = x >> shift;
    let ln = bigfloat_from_nat(&top).ln() + bf_u64(shift) * num_bigfloat::LN_2;
    Ok(LogValue::from_ln(ln))
}

/// Principal-branch Lambert W on `[0, inf)`: the `w >= 0` with
/// `w e^w = x`, by damped Halley iteration from the logarithmic guess
/// `ln(1 + x)`.
pub fn lambert_w(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "lambert_w is implemented on the principal branch [0, inf) only, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = x.ln_1p();
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
        let mut step = f / denom;
        // Damping: never let a step push w negative.
        while w - step < 0.0 {
            step /= 2.0;
        }
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// Checks `|s(n+1, m+1)| <= n! (log n)^m / m! * (1 + m / log n)`.
pub fn check_adell(n: u64, m: u64) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "adell bound needs n >= 2 (log n must be positive), got n = {n}"
        )));
    }
    if m > n {
        return Err(Error::Domain(format!("adell bound needs m <= n, got n = {n}, m = {m}")));
    }
    let params = crate::params_from(&[("n", n as i64), ("m", m as i64)]);
    let ln_log_n = bf_u64(n).ln();
    let log_bound = log_of_nat(&factorial(n))?.bigfloat() + bf_u64(m) * ln_log_n.ln()
        - log_of_nat(&factorial(m))?.bigfloat()
        + (num_bigfloat::ONE + bf_u64(m) / ln_log_n).ln();
    let log_bound = LogValue::from_ln(log_bound);

    let exact = stirling1_unsigned(n + 1, m + 1);
    if exact.is_zero() {
        return Ok(BoundReport {
            id: BoundId::Adell,
            params,
            log_exact: None,
            log_bound: log_bound.as_f64(),
            log_lower: None,
            satisfied: true,
            slack: None,
            slack_lower: None,
        });
    }
    let log_exact = log_of_nat(&exact)?;
    Ok(BoundReport {
        id: BoundId::Adell,
        params,
        log_exact: Some(log_exact.as_f64()),
        log_bound: log_bound.as_f64(),
        log_lower: None,
        satisfied: log_exact.bigfloat() <= log_bound.bigfloat(),
        slack: Some(log_bound.slack_over(log_exact)),
        slack_lower: None,
    })
}

fn lambda_sum_bigfloat(r: u64, k: u64) -> BigFloat {
    let log_r = bf_u64(r).ln();
    let r_fac = bigfloat_from_nat(&factorial(r));
    let kf = bf_u64(k);
    let mut acc = BigFloat::new();
    let mut log_r_pow = num_bigfloat::ONE; // (log r)^(i-1)
    let mut fac = num_bigfloat::ONE; // (i-1)!
    let mut k_pow = kf; // k^i
    for i in 1..=(r + 1) {
        let correction = num_bigfloat::ONE + bf_u64(i - 1) / log_r;
        acc += r_fac * log_r_pow / fac * correction * k_pow;
        log_r_pow *= log_r;
        fac *= bf_u64(i);
        k_pow *= kf;
    }
    acc
}

/// The Adell-derived weight
/// `lambda_{r,k} = sum_{i=0}^{r+1} r! (log r)^(i-1)/(i-1)! (1 + (i-1)/log r) k^i`,
/// with the `i = 0` term taken as zero (its `1/(-1)!` factor vanishes
/// under the reciprocal-gamma convention).
pub fn lambda_sum(r: u64, k: u64) -> Result<f64> {
    if r < 2 {
        return Err(Error::Domain(format!(
            "lambda_sum needs r >= 2 (log r must be positive), got r = {r}"
        )));
    }
    Ok(lambda_sum_bigfloat(r, k).to_f64())
}

/// Checks the sandwich
/// `n! <= sum_{k,i} |s(r+1, i)| k^i p_n(k) <= sum_k lambda_{r,k} p_n(k)`.
///
/// The middle term is exact; the left inequality is decided on integers,
/// the right one in log domain against the float bound.
pub fn check_lambda_sandwich(n: u64, r: u64) -> Result<BoundReport> {
    if r < 2 {
        return Err(Error::Domain(format!("lambda sandwich needs r >= 2, got r = {r}")));
    }
    if r + 1 > n {
        return Err(Error::Domain(format!(
            "lambda sandwich needs r + 1 <= n, got r = {r}, n = {n}"
        )));
    }
    let params = crate::params_from(&[("n", n as i64), ("r", r as i64)]);
    let row = rencontres_row(n);

    let mut middle = Nat::zero();
    for (k, pnk) in row.iter().enumerate() {
        let mut weight = Nat::zero();
        for i in 0..=(r + 1) {
            weight += stirling1_unsigned(r + 1, i)
                * crate::combinat::nat_pow(&Nat::from(k), i);
        }
        middle += weight * pnk;
    }

    let mut upper = BigFloat::new();
    for (k, pnk) in row.iter().enumerate() {
        upper += lambda_sum_bigfloat(r, k as u64) * bigfloat_from_nat(pnk);
    }

    let lower = factorial(n);
    let log_lower = log_of_nat(&lower)?;
    let log_middle = log_of_nat(&middle)?;
    let log_upper = LogValue::from_ln(upper.ln());

    let satisfied = lower <= middle && log_middle.bigfloat() <= log_upper.bigfloat();
    Ok(BoundReport {
        id: BoundId::LambdaSandwich,
        params,
        log_exact: Some(log_middle.as_f64()),
        log_bound: log_upper.as_f64(),
        log_lower: Some(log_lower.as_f64()),
        satisfied,
        slack: Some(log_upper.slack_over(log_middle)),
        slack_lower: Some(log_middle.slack_over(log_lower)),
    })
}

/// Checks `B_n < (0.792 n / log(n+1))^n`.
pub fn check_berend_tal(n: u64) -> Result<BoundReport> {
    if n < 1 {
        return Err(Error::Domain("berend-tal bound needs n >= 1".to_string()));
    }
    let params = crate::params_from(&[("n", n as i64)]);
    let c = BigFloat::parse("0.792").expect("constant parses");
    let log_bound = bf_u64(n) * (c.ln() + bf_u64(n).ln() - bf_u64(n + 1).ln().ln());
    let log_bound = LogValue::from_ln(log_bound);
    let log_exact = log_of_nat(&bell(n))?;
    Ok(BoundReport {
        id: BoundId::BerendTal,
        params,
        log_exact: Some(log_exact.as_f64()),
        log_bound: log_bound.as_f64(),
        log_lower: None,
        satisfied: log_exact.bigfloat() < log_bound.bigfloat(),
        slack: Some(log_bound.slack_over(log_exact)),
        slack_lower: None,
    })
}

/// Log-domain values of the de Bruijn and Odlyzko asymptotic forms for
/// `B_n` next to the exact Bell number.
pub fn bell_asymptotics(n: u64) -> Result<BellAsymptotics> {
    if n < 2 {
        return Err(Error::Domain(format!("bell_asymptotics needs n >= 2, got n = {n}")));
    }
    let w = lambert_w(n as f64)?;
    let nf = n as f64;
    let ln_n = nf.ln();
    // (1/sqrt(n)) (n/W)^(n+1/2) exp(n/W - n - 1)
    let log_debruijn = -0.5 * ln_n + (nf + 0.5) * (ln_n - w.ln()) + nf / w - nf - 1.0;
    // n!/sqrt(2 pi W^2 e^W) * e^(e^W - 1) / W^n, with e^W = n/W.
    let log_factorial = log_of_nat(&factorial(n))?.as_f64();
    let log_odlyzko = log_factorial
        - 0.5 * (2.0 * std::f64::consts::PI).ln()
        - w.ln()
        - w / 2.0
        + nf / w
        - 1.0
        - nf * w.ln();
    let log_exact = log_of_nat(&bell(n))?.as_f64();
    Ok(BellAsymptotics {
        n,
        log_exact,
        log_debruijn,
        log_odlyzko,
        rel_err_debruijn: (log_debruijn - log_exact).abs() / log_exact,
        rel_err_odlyzko: (log_odlyzko - log_exact).abs() / log_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn log_of_nat_examples() {
        assert_eq!(log_of_nat(&Nat::one()).unwrap().as_f64(), 0.0);

        let v = log_of_nat(&Nat::from(1024u32)).unwrap().as_f64();
        let expected = 10.0 * std::f64::consts::LN_2;
        assert!((v - expected).abs() <= 1e-15 * expected);

        let v = log_of_nat(&Nat::from(120u32)).unwrap().as_f64();
        assert!((v - 120f64.ln()).abs() <= 1e-15 * v);

        assert!(log_of_nat(&Nat::zero()).is_err());
    }

    #[test]
    fn log_of_nat_handles_huge_integers() {
        let x = Nat::one() << 2000;
        let v = log_of_nat(&x).unwrap().as_f64();
        let expected = 2000.0 * std::f64::consts::LN_2;
        assert!((v - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn bigfloat_from_nat_is_accurate() {
        let x = (Nat::one() << 130u32) + Nat::from(12345u32);
        let approx = bigfloat_from_nat(&x).to_f64();
        let expected = 2f64.powi(130);
        assert!((approx - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn lambert_w_examples() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);

        let w = lambert_w(std::f64::consts::E).unwrap();
        assert!((w - 1.0).abs() <= 1e-14);

        let w = lambert_w(100.0).unwrap();
        assert!((w * w.exp() - 100.0).abs() <= 1e-10);

        assert!(lambert_w(-0.1).is_err());
    }

    #[test]
    fn adell_examples() {
        let report = check_adell(2, 0).unwrap();
        assert!(report.satisfied);
        assert!(report.slack.unwrap().abs() < 1e-30, "|s(3,1)| = 2 meets the bound exactly");

        let report = check_adell(2, 1).unwrap();
        assert!(report.satisfied);
        let expected_bound = (2.0 * std::f64::consts::LN_2 + 2.0f64).ln();
        assert!((report.log_bound - expected_bound).abs() < 1e-12);
        assert!((report.log_exact.unwrap() - 3f64.ln()).abs() < 1e-12);

        let report = check_adell(10, 10).unwrap();
        assert!(report.satisfied);
        assert_eq!(report.log_exact, Some(0.0));

        assert!(check_adell(1, 0).is_err());
    }

    #[test]
    fn lambda_sum_examples() {
        assert_eq!(lambda_sum(2, 0).unwrap(), 0.0);

        let ln2 = std::f64::consts::LN_2;
        let expected = 2.0 + (2.0 * ln2 + 2.0) + (ln2 * ln2 + 2.0 * ln2);
        assert!((lambda_sum(2, 1).unwrap() - expected).abs() < 1e-12);

        assert!(lambda_sum(3, 2).unwrap() > lambda_sum(3, 1).unwrap());
        assert!(lambda_sum(1, 1).is_err());
    }

    #[test]
    fn lambda_sandwich_examples() {
        let report = check_lambda_sandwich(5, 2).unwrap();
        assert!(report.satisfied);
        // Middle term for n=5, r=2: sum (2k + 3k^2 + k^3) p_5(k) = 1560.
        assert!((report.log_exact.unwrap() - 1560f64.ln()).abs() < 1e-12);
        assert!(report.slack_lower.unwrap() > 0.0);

        let report = check_lambda_sandwich(8, 3).unwrap();
        assert!(report.satisfied);

        assert!(check_lambda_sandwich(5, 1).is_err());
        assert!(check_lambda_sandwich(2, 2).is_err());
    }

    #[test]
    fn berend_tal_examples() {
        let report = check_berend_tal(1).unwrap();
        assert!(report.satisfied);
        assert_eq!(report.log_exact, Some(0.0));
        assert!((report.log_bound - (0.792f64 / std::f64::consts::LN_2).ln()).abs() < 1e-12);

        let report = check_berend_tal(5).unwrap();
        assert!(report.satisfied);
        assert!((report.log_exact.unwrap() - 52f64.ln()).abs() < 1e-12);

        let report = check_berend_tal(100).unwrap();
        assert!(report.satisfied);

        assert!(check_berend_tal(0).is_err());
    }

    #[test]
    fn asymptotics_converge() {
        let a10 = bell_asymptotics(10).unwrap();
        assert!((a10.log_exact - 115_975f64.ln()).abs() < 1e-12);
        assert!(a10.rel_err_debruijn < 0.20);
        assert!(a10.rel_err_odlyzko < 0.20);

        let a50 = bell_asymptotics(50).unwrap();
        assert!(a50.rel_err_debruijn < a10.rel_err_debruijn);
        assert!(a50.rel_err_odlyzko < a10.rel_err_odlyzko);

        let a200 = bell_asymptotics(200).unwrap();
        assert!(a200.rel_err_odlyzko < 0.02);

        assert!(bell_asymptotics(1).is_err());
    }
}
