//! Parameter-grid expansion for verification sweeps.
//!
//! A range string names one inclusive integer interval or value list per
//! parameter, `"n=1..10,r=0..n-1"` style. Interval endpoints may
//! reference any previously declared parameter, optionally with a
//! `+`/`-` integer offset; dependent bounds are resolved per outer value
//! at expansion time. A bare comma-separated number extends the previous
//! parameter's value list, so `"n=10,50,100,200"` is a single
//! four-value parameter.

use rencontres::{Error, Params, Result};

/// Hard cap on expanded grid size; beyond it the sweep is refused
/// rather than silently truncated.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeSpec {
    params: Vec<(String, ValueSet)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ValueSet {
    List(Vec<i64>),
    Interval(Bound, Bound),
}

/// `base + offset`, where `base` is an earlier parameter or absolute.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bound {
    base: Option<String>,
    offset: i64,
}

impl Bound {
    fn resolve(&self, point: &Params) -> Result<i64> {
        let base = match &self.base {
            None => 0,
            Some(name) => *point.get(name).ok_or_else(|| {
                Error::Usage(format!("range bound references `{name}` before it is declared"))
            })?,
        };
        Ok(base + self.offset)
    }
}

impl RangeSpec {
    /// Parses `"name=a..b,name=v1,v2,..."`.
    pub fn parse(text: &str) -> Result<RangeSpec> {
        let mut params: Vec<(String, ValueSet)> = Vec::new();
        for segment in text.split(',') {
            let segment = segment.trim();
            if segment.is_empty() {
                return Err(Error::Usage("empty segment in range".to_string()));
            }
            match segment.split_once('=') {
                Some((name, spec)) => {
                    let name = name.trim();
                    if name.is_empty() {
                        return Err(Error::Usage(format!("missing parameter name in `{segment}`")));
                    }
                    if params.iter().any(|(n, _)| n == name) {
                        return Err(Error::Usage(format!("parameter `{name}` declared twice")));
                    }
                    params.push((name.to_string(), parse_value_set(spec.trim())?));
                }
                None => {
                    // Continuation of the previous parameter's list.
                    let value: i64 = parse_int(segment)?;
                    match params.last_mut() {
                        Some((_, ValueSet::List(values))) => values.push(value),
                        Some((name, ValueSet::Interval(..))) => {
                            return Err(Error::Usage(format!(
                                "cannot mix interval and list values for `{name}`"
                            )));
                        }
                        None => {
                            return Err(Error::Usage(format!(
                                "value `{segment}` appears before any parameter name"
                            )));
                        }
                    }
                }
            }
        }
        if params.is_empty() {
            return Err(Error::Usage("range declares no parameters".to_string()));
        }
        Ok(RangeSpec { params })
    }

    pub fn param_names(&self) -> Vec<&str> {
        self.params.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Expands the grid in lexicographic order of the declared
    /// parameters. Dependent intervals that come out empty for some
    /// outer value contribute no points.
    pub fn expand(&self) -> Result<Vec<Params>> {
        let mut points = Vec::new();
        let mut current = Params::new();
        self.expand_rec(0, &mut current, &mut points)?;
        Ok(points)
    }

    fn expand_rec(&self, depth: usize, current: &mut Params, out: &mut Vec<Params>) -> Result<()> {
        if depth == self.params.len() {
            if out.len() >= MAX_POINTS {
                return Err(Error::ResourceLimit(format!(
                    "sweep exceeds {MAX_POINTS} parameter points"
                )));
            }
            out.push(current.clone());
            return Ok(());
        }
        let (name, values) = &self.params[depth];
        match values {
            ValueSet::List(list) => {
                for &v in list {
                    current.insert(name.clone(), v);
                    self.expand_rec(depth + 1, current, out)?;
                }
            }
            ValueSet::Interval(lo, hi) => {
                let lo = lo.resolve(current)?;
                let hi = hi.resolve(current)?;
                for v in lo..=hi {
                    current.insert(name.clone(), v);
                    self.expand_rec(depth + 1, current, out)?;
                }
            }
        }
        current.remove(name);
        Ok(())
    }
}

fn parse_value_set(spec: &str) -> Result<ValueSet> {
    match spec.split_once("..") {
        Some((lo, hi)) => Ok(ValueSet::Interval(parse_bound(lo.trim())?, parse_bound(hi.trim())?)),
        None => Ok(ValueSet::List(vec![parse_int(spec)?])),
    }
}

fn parse_int(text: &str) -> Result<i64> {
    text.parse::<i64>()
        .map_err(|_| Error::Usage(format!("`{text}` is not an integer")))
}

/// A bound is an integer, a parameter name, or `name+int` / `name-int`.
fn parse_bound(text: &str) -> Result<Bound> {
    if text.is_empty() {
        return Err(Error::Usage("empty range bound".to_string()));
    }
    if let Ok(v) = text.parse::<i64>() {
        return Ok(Bound { base: None, offset: v });
    }
    let split_at = text[1..].find(['+', '-']).map(|p| p + 1);
    let (name, offset) = match split_at {
        Some(pos) => {
            let (name, rest) = text.split_at(pos);
            (name.trim(), parse_int_with_sign(rest)?)
        }
        None => (text, 0),
    };
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::Usage(format!("`{text}` is not a valid range bound")));
    }
    Ok(Bound {
        base: Some(name.to_string()),
        offset,
    })
}

fn parse_int_with_sign(text: &str) -> Result<i64> {
    let body = text.trim();
    match body.strip_prefix('+') {
        Some(rest) => parse_int(rest.trim()),
        None => parse_int(body),
    }
}

/// Tally of one sweep: every check, the failures, and the first failing
/// line in output order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub total: u64,
    pub passes: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    pub wall_ms: u64,
}

impl RunSummary {
    pub fn record(&mut self, passed: bool, line: &str) {
        self.total += 1;
        if passed {
            self.passes += 1;
        } else {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(line.to_string());
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures == 0 {
            0
        } else {
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(text: &str) -> Vec<Vec<(String, i64)>> {
        RangeSpec::parse(text)
            .unwrap()
            .expand()
            .unwrap()
            .into_iter()
            .map(|p| p.into_iter().collect())
            .collect()
    }

    #[test]
    fn dependent_upper_bound() {
        let points = expand("n=1..3,r=0..n-1");
        let flat: Vec<(i64, i64)> = points
            .iter()
            .map(|p| (p[0].1, p[1].1))
            .collect();
        assert_eq!(flat, vec![(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)]);
    }

    #[test]
    fn list_values_extend_the_previous_parameter() {
        let points = expand("n=10,50,100,200");
        assert_eq!(points.len(), 4);
        assert_eq!(points[3], vec![("n".to_string(), 200)]);
    }

    #[test]
    fn negative_bounds_parse() {
        let points = expand("r=-1..1");
        assert_eq!(points.len(), 3);
        assert_eq!(points[0], vec![("r".to_string(), -1)]);
    }

    #[test]
    fn dependent_lower_bound() {
        // Maps sort by name, so each point reads (n, r); r is the outer
        // declared parameter.
        let points = expand("r=2..3,n=r+1..5");
        let flat: Vec<(i64, i64)> = points.iter().map(|p| (p[0].1, p[1].1)).collect();
        assert_eq!(flat, vec![(3, 2), (4, 2), (5, 2), (4, 3), (5, 3)]);
    }

    #[test]
    fn malformed_ranges_are_usage_errors() {
        assert!(RangeSpec::parse("").is_err());
        assert!(RangeSpec::parse("n=").is_err());
        assert!(RangeSpec::parse("5..10").is_err());
        assert!(RangeSpec::parse("n=1..3,n=2..4").is_err());
        assert!(RangeSpec::parse("n=1..q+1").is_err() || {
            // forward references surface at expansion time
            RangeSpec::parse("n=1..q+1").unwrap().expand().is_err()
        });
    }

    #[test]
    fn summary_tracks_first_failure() {
        let mut s = RunSummary::default();
        s.record(true, "a");
        s.record(false, "b");
        s.record(false, "c");
        assert_eq!(s.total, 3);
        assert_eq!(s.failures, 2);
        assert_eq!(s.first_failure.as_deref(), Some("b"));
        assert_eq!(s.exit_code(), 1);
    }
}
