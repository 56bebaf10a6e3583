//! Time-of-use price schedules and the built-in pricing schemes.
//!
//! All prices are per period of length `delta`: charging during period `t`
//! costs `charge(t)`, discharging earns `discharge(t)`, and energy left to be
//! restored overnight is billed at `night` per period-worth of charge time.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, ParseError, ParseErrorKind, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodPrice {
    pub charge: f64,
    pub discharge: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PriceSchedule {
    /// Period length in minutes.
    pub delta: f64,
    pub periods: Vec<PeriodPrice>,
    pub night: f64,
}

impl PriceSchedule {
    pub fn new(delta: f64, periods: Vec<PeriodPrice>, night: f64) -> Result<Self, ParseErrorKind> {
        let schedule = Self {
            delta,
            periods,
            night,
        };
        schedule.validate()?;
        Ok(schedule)
    }

    fn validate(&self) -> Result<(), ParseErrorKind> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(ParseErrorKind::InvalidPrices(
                "delta must be positive".into(),
            ));
        }
        if self.periods.is_empty() {
            return Err(ParseErrorKind::InvalidPrices("no periods".into()));
        }
        let all_ok = self
            .periods
            .iter()
            .flat_map(|p| [p.charge, p.discharge])
            .chain(std::iter::once(self.night))
            .all(|v| v.is_finite() && v >= 0.0);
        if !all_ok {
            return Err(ParseErrorKind::InvalidPrices(
                "prices must be finite and nonnegative".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    /// End of the planning horizon in minutes.
    pub fn horizon(&self) -> f64 {
        self.delta * self.periods.len() as f64
    }

    /// `(charge cost, discharge reward)` for the 1-based period `t`.
    pub fn price_at(&self, t: usize) -> Result<(f64, f64)> {
        if t == 0 || t > self.periods.len() {
            return Err(Error::PeriodOutOfRange {
                period: t,
                periods: self.periods.len(),
            });
        }
        let p = self.periods[t - 1];
        Ok((p.charge, p.discharge))
    }

    /// Unchecked 1-based accessors for the hot paths.
    #[inline]
    pub fn charge(&self, t: usize) -> f64 {
        self.periods[t - 1].charge
    }

    #[inline]
    pub fn discharge(&self, t: usize) -> f64 {
        self.periods[t - 1].discharge
    }

    /// Every price multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            delta: self.delta,
            periods: self
                .periods
                .iter()
                .map(|p| PeriodPrice {
                    charge: p.charge * factor,
                    discharge: p.discharge * factor,
                })
                .collect(),
            night: self.night * factor,
        }
    }

    pub fn scheme(id: SchemeId) -> Self {
        // Built-in files are checked by the unit tests below.
        parse_prices(id.source()).expect("built-in scheme file is valid")
    }

    /// Parses the lines following a `PRICES` marker. `first_line` is the
    /// 1-based line number of the first entry, for error reporting.
    pub(crate) fn parse_section<'a>(
        lines: impl Iterator<Item = (usize, &'a str)>,
        marker_line: usize,
    ) -> Result<Self, ParseError> {
        let mut delta = None;
        let mut periods = Vec::new();
        let mut night = None;
        let mut last_line = marker_line;
        for (no, raw) in lines {
            last_line = no;
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| ParseError::new(no, ParseErrorKind::InvalidPrices(msg.into()));
            match fields.as_slice() {
                ["delta", v] => delta = Some(parse_f64(v, no)?),
                ["night", v] => night = Some(parse_f64(v, no)?),
                [t, c, d] => {
                    let t: usize = t
                        .parse()
                        .map_err(|_| err("period index must be an integer"))?;
                    if t != periods.len() + 1 {
                        return Err(err("period indices must be consecutive from 1"));
                    }
                    periods.push(PeriodPrice {
                        charge: parse_f64(c, no)?,
                        discharge: parse_f64(d, no)?,
                    });
                }
                _ => {
                    return Err(ParseError::new(
                        no,
                        ParseErrorKind::Malformed(line.to_string()),
                    ))
                }
            }
        }
        let delta = delta.ok_or_else(|| {
            ParseError::new(
                last_line,
                ParseErrorKind::InvalidPrices("missing `delta`".into()),
            )
        })?;
        let night = night.ok_or_else(|| {
            ParseError::new(
                last_line,
                ParseErrorKind::InvalidPrices("missing `night`".into()),
            )
        })?;
        Self::new(delta, periods, night).map_err(|k| ParseError::new(marker_line, k))
    }

    /// Writes the `PRICES` section.
    pub fn write_section(&self, out: &mut String) {
        use fmt::Write;
        out.push_str("PRICES\n");
        let _ = writeln!(out, "delta {}", self.delta);
        for (i, p) in self.periods.iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", i + 1, p.charge, p.discharge);
        }
        let _ = writeln!(out, "night {}", self.night);
    }
}

/// Parses a standalone scheme file: optional comments, a `PRICES` line,
/// then the section body.
pub fn parse_prices(text: &str) -> Result<PriceSchedule, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    for (no, raw) in lines.by_ref() {
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if line == "PRICES" {
            return PriceSchedule::parse_section(lines, no);
        }
        return Err(ParseError::new(
            no,
            ParseErrorKind::Malformed(line.to_string()),
        ));
    }
    Err(ParseError::new(0, ParseErrorKind::MissingPrices))
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => line[..i].trim(),
        None => line.trim(),
    }
}

pub(crate) fn parse_f64(s: &str, line: usize) -> Result<f64, ParseError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| ParseError::new(line, ParseErrorKind::InvalidValue(s.to_string())))
}

/// The built-in time-of-use schemes (A and B in summer and winter layouts,
/// flat-peak C, charge-only D).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    ASummer,
    AWinter,
    BSummer,
    BWinter,
    C,
    D,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::ASummer,
        SchemeId::AWinter,
        SchemeId::BSummer,
        SchemeId::BWinter,
        SchemeId::C,
        SchemeId::D,
    ];

    fn source(self) -> &'static str {
        match self {
            SchemeId::ASummer => include_str!("../schemes/a-summer.prices"),
            SchemeId::AWinter => include_str!("../schemes/a-winter.prices"),
            SchemeId::BSummer => include_str!("../schemes/b-summer.prices"),
            SchemeId::BWinter => include_str!("../schemes/b-winter.prices"),
            SchemeId::C => include_str!("../schemes/c.prices"),
            SchemeId::D => include_str!("../schemes/d.prices"),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::ASummer => "A-summer",
            SchemeId::AWinter => "A-winter",
            SchemeId::BSummer => "B-summer",
            SchemeId::BWinter => "B-winter",
            SchemeId::C => "C",
            SchemeId::D => "D",
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}
