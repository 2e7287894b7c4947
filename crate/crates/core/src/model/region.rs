use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// An interval of the real line with per-endpoint open/closed flags.
/// Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
    lower_closed: bool,
    upper_closed: bool,
}

impl Interval {
    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn lower_closed(&self) -> bool {
        self.lower_closed
    }

    pub fn upper_closed(&self) -> bool {
        self.upper_closed
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite()
    }

    pub fn contains(&self, theta: f64) -> bool {
        let above = if self.lower_closed {
            theta >= self.lower
        } else {
            theta > self.lower
        };
        let below = if self.upper_closed {
            theta <= self.upper
        } else {
            theta < self.upper
        };
        above && below
    }
}

/// A hypothesis region: a single parameter value or an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParameterRegion {
    Point(f64),
    Interval(Interval),
}

impl ParameterRegion {
    pub fn point(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::domain(format!(
                "point region must be finite, got {value}"
            )));
        }
        Ok(Self::Point(value))
    }

    pub fn interval(
        lower: f64,
        upper: f64,
        lower_closed: bool,
        upper_closed: bool,
    ) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::domain("interval endpoints must not be NaN"));
        }
        if !(lower < upper) {
            return Err(Error::domain(format!(
                "interval needs lower < upper, got [{lower}, {upper}]"
            )));
        }
        if lower == f64::INFINITY || upper == f64::NEG_INFINITY {
            return Err(Error::domain("interval is empty"));
        }
        Ok(Self::Interval(Interval {
            lower,
            upper,
            lower_closed: lower_closed && lower.is_finite(),
            upper_closed: upper_closed && upper.is_finite(),
        }))
    }

    /// `[lower, upper]`
    pub fn closed(lower: f64, upper: f64) -> Result<Self> {
        Self::interval(lower, upper, true, true)
    }

    /// `(-inf, upper]`
    pub fn at_most(upper: f64) -> Result<Self> {
        Self::interval(f64::NEG_INFINITY, upper, false, true)
    }

    /// `(lower, inf)`
    pub fn greater_than(lower: f64) -> Result<Self> {
        Self::interval(lower, f64::INFINITY, false, false)
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Self::Point(_))
    }

    pub fn contains(&self, theta: f64) -> bool {
        match self {
            Self::Point(p) => theta == *p,
            Self::Interval(i) => i.contains(theta),
        }
    }

    /// Lower and upper bounds of the closure.
    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Self::Point(p) => (*p, *p),
            Self::Interval(i) => (i.lower, i.upper),
        }
    }

    /// Nearest point of the closure to `theta`, and whether it belongs to
    /// the region itself.
    pub fn project(&self, theta: f64) -> (f64, bool) {
        match self {
            Self::Point(p) => (*p, true),
            Self::Interval(i) => {
                if theta < i.lower {
                    (i.lower, i.lower_closed)
                } else if theta > i.upper {
                    (i.upper, i.upper_closed)
                } else if theta == i.lower {
                    (theta, i.lower_closed)
                } else if theta == i.upper {
                    (theta, i.upper_closed)
                } else {
                    (theta, true)
                }
            }
        }
    }

    /// Complement in the real line as a list of disjoint regions.
    pub fn complement(&self) -> Vec<ParameterRegion> {
        let mut parts = Vec::with_capacity(2);
        let (lo, hi, lo_closed, hi_closed) = match self {
            Self::Point(p) => (*p, *p, true, true),
            Self::Interval(i) => (i.lower, i.upper, i.lower_closed, i.upper_closed),
        };
        if lo > f64::NEG_INFINITY {
            parts.push(Self::Interval(Interval {
                lower: f64::NEG_INFINITY,
                upper: lo,
                lower_closed: false,
                upper_closed: !lo_closed,
            }));
        }
        if hi < f64::INFINITY {
            parts.push(Self::Interval(Interval {
                lower: hi,
                upper: f64::INFINITY,
                lower_closed: !hi_closed,
                upper_closed: false,
            }));
        }
        parts
    }

    /// True when `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &ParameterRegion) -> bool {
        match (self, other) {
            (Self::Point(p), r) => r.contains(*p),
            (Self::Interval(_), Self::Point(_)) => false,
            (Self::Interval(a), Self::Interval(b)) => {
                let lower_ok = a.lower > b.lower
                    || (a.lower == b.lower && (b.lower_closed || !a.lower_closed));
                let upper_ok = a.upper < b.upper
                    || (a.upper == b.upper && (b.upper_closed || !a.upper_closed));
                lower_ok && upper_ok
            }
        }
    }

    pub fn is_disjoint_from(&self, other: &ParameterRegion) -> bool {
        match (self, other) {
            (Self::Point(a), Self::Point(b)) => a != b,
            (Self::Point(p), r) | (r, Self::Point(p)) => !r.contains(*p),
            (Self::Interval(a), Self::Interval(b)) => {
                let separated = |left: &Interval, right: &Interval| {
                    left.upper < right.lower
                        || (left.upper == right.lower && !(left.upper_closed && right.lower_closed))
                };
                separated(a, b) || separated(b, a)
            }
        }
    }
}

fn fmt_endpoint(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for ParameterRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Point(p) => write!(f, "{{{}}}", fmt_endpoint(*p)),
            Self::Interval(i) => write!(
                f,
                "{}{}, {}{}",
                if i.lower_closed { '[' } else { '(' },
                fmt_endpoint(i.lower),
                fmt_endpoint(i.upper),
                if i.upper_closed { ']' } else { ')' },
            ),
        }
    }
}

fn parse_endpoint(s: &str) -> Result<f64> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t
            .parse::<f64>()
            .map_err(|_| Error::domain(format!("cannot parse region endpoint `{t}`"))),
    }
}

/// Parses `{x}`, `[a, b]`, `(a, b]`, `(-inf, b]`, `(a, inf)` and so on.
impl FromStr for ParameterRegion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            return Self::point(parse_endpoint(inner)?);
        }
        let lower_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => {
                return Err(Error::domain(format!(
                    "region `{s}` must start with `[`, `(` or `{{`"
                )))
            }
        };
        let upper_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => {
                return Err(Error::domain(format!(
                    "region `{s}` must end with `]` or `)`"
                )))
            }
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| Error::domain(format!("region `{s}` needs two endpoints")))?;
        let (lower, upper) = (parse_endpoint(a)?, parse_endpoint(b)?);
        if (lower.is_infinite() && lower_closed) || (upper.is_infinite() && upper_closed) {
            return Err(Error::domain(format!(
                "region `{s}` closes an infinite endpoint"
            )));
        }
        Self::interval(lower, upper, lower_closed, upper_closed)
    }
}

/// The partition `Theta_1 / Theta_2` naming `H1` and `H2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisPair {
    theta1: ParameterRegion,
    theta2: ParameterRegion,
}

impl HypothesisPair {
    pub fn new(theta1: ParameterRegion, theta2: ParameterRegion) -> Result<Self> {
        if !theta1.is_disjoint_from(&theta2) {
            return Err(Error::domain(format!(
                "hypothesis regions {theta1} and {theta2} overlap"
            )));
        }
        Ok(Self { theta1, theta2 })
    }

    /// `Theta_1 = {theta1}`, `Theta_2 = {theta1 + delta}`.
    pub fn points(theta1: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::domain(format!(
                "delta must be positive, got {delta}"
            )));
        }
        Self::new(
            ParameterRegion::point(theta1)?,
            ParameterRegion::point(theta1 + delta)?,
        )
    }

    pub fn theta1(&self) -> &ParameterRegion {
        &self.theta1
    }

    pub fn theta2(&self) -> &ParameterRegion {
        &self.theta2
    }

    pub fn is_point_pair(&self) -> bool {
        self.theta1.is_point() && self.theta2.is_point()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_regions() {
        assert!(ParameterRegion::point(f64::NAN).is_err());
        assert!(ParameterRegion::closed(1.0, 1.0).is_err());
        assert!(ParameterRegion::closed(2.0, 1.0).is_err());
        assert!("[-inf, 0]".parse::<ParameterRegion>().is_err());
        assert!("0, 1".parse::<ParameterRegion>().is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in [
            "{0}",
            "[0, 1]",
            "(-inf, 0]",
            "(0, inf)",
            "[0.5, 1.5)",
            "{-1.25}",
        ] {
            let r: ParameterRegion = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }

    #[test]
    fn membership_respects_endpoint_flags() {
        let r: ParameterRegion = "(0, 1]".parse().unwrap();
        assert!(!r.contains(0.0));
        assert!(r.contains(1.0));
        assert!(r.contains(0.5));
        assert!(!r.contains(1.5));
    }

    #[test]
    fn projection_flags_open_endpoints() {
        let open = ParameterRegion::greater_than(0.0).unwrap();
        assert_eq!(open.project(-0.3), (0.0, false));
        assert_eq!(open.project(0.4), (0.4, true));
        let closed = ParameterRegion::interval(0.0, f64::INFINITY, true, false).unwrap();
        assert_eq!(closed.project(-0.3), (0.0, true));
    }

    #[test]
    fn disjointness() {
        let a = ParameterRegion::at_most(0.0).unwrap();
        let b = ParameterRegion::greater_than(0.0).unwrap();
        assert!(HypothesisPair::new(a, b).is_ok());
        let c = ParameterRegion::interval(0.0, 1.0, true, true).unwrap();
        assert!(HypothesisPair::new(a, c).is_err());
        assert!(HypothesisPair::new(ParameterRegion::Point(0.0), a).is_err());
        assert!(
            HypothesisPair::new(ParameterRegion::Point(0.0), ParameterRegion::Point(0.0)).is_err()
        );
        assert!(HypothesisPair::points(0.0, 0.0).is_err());
        assert!(HypothesisPair::points(0.0, 1.0).unwrap().is_point_pair());
    }

    #[test]
    fn complement_and_subsets() {
        let r = ParameterRegion::closed(0.0, 0.5).unwrap();
        let parts = r.complement();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].to_string(), "(-inf, 0)");
        assert_eq!(parts[1].to_string(), "(0.5, inf)");
        for p in &parts {
            assert!(p.is_disjoint_from(&r));
        }
        let outer = ParameterRegion::closed(0.0, 1.0).unwrap();
        assert!(r.is_subset_of(&outer));
        assert!(!outer.is_subset_of(&r));
        assert!(ParameterRegion::at_most(0.0).unwrap().complement()[0].to_string() == "(0, inf)");
    }
}
