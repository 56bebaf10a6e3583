//! Solutions and their text format.
//!
//! ```text
//! EVRPTW-TP SOLUTION v1
//! routes 2
//! route 0 0 3 1 7
//! visit 0 0 8:D 9:D
//! visit 0 4 14:D
//! route 1 0 2 7
//! objective 82.61
//! violations 0 0 0
//! end
//! ```
//!
//! `route k` lists the node ids of route `k`. `visit k p` lists the actions at
//! position `p` of route `k` as `period:C` (charge) or `period:D`
//! (discharge); idle periods are omitted. `objective` and `violations`
//! (time window, battery, cargo) are informational and optional. Numbers are
//! written in shortest round-trip form, so files are reproducible byte for
//! byte.

use std::fmt::Write as _;

use crate::error::{ParseError, ParseErrorKind};
use crate::instance::Instance;
use crate::pricing::{parse_f64, strip_comment};
use crate::route::{Route, Violations};

const HEADER: &str = "EVRPTW-TP SOLUTION v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Idle,
    Charge,
    Discharge,
}

/// Actions per route position; positions of customers stay empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChargePlan {
    pub visits: Vec<Vec<(usize, Action)>>,
}

impl ChargePlan {
    pub fn idle(route_len: usize) -> Self {
        Self {
            visits: vec![Vec::new(); route_len],
        }
    }

    /// Number of charge and discharge periods.
    pub fn counts(&self) -> (usize, usize) {
        let mut c = 0;
        let mut d = 0;
        for &(_, a) in self.visits.iter().flatten() {
            match a {
                Action::Charge => c += 1,
                Action::Discharge => d += 1,
                Action::Idle => {}
            }
        }
        (c, d)
    }

    /// Drops idle entries and sorts each visit by period.
    pub fn normalize(&mut self) {
        for v in &mut self.visits {
            v.retain(|&(_, a)| a != Action::Idle);
            v.sort();
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Solution {
    pub routes: Vec<Route>,
    pub plans: Vec<ChargePlan>,
}

/// Informational trailer of a solution file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub objective: f64,
    pub violations: Violations,
}

impl Solution {
    /// `k` trivial routes with idle plans.
    pub fn empty(inst: &Instance, k: usize) -> Self {
        Self {
            routes: vec![Route::empty(inst); k],
            plans: vec![ChargePlan::idle(2); k],
        }
    }

    pub fn distance(&self, inst: &Instance) -> f64 {
        self.routes.iter().map(|r| r.distance(inst)).sum()
    }

    pub fn to_text(&self, summary: Option<&Summary>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "routes {}", self.routes.len());
        for (k, route) in self.routes.iter().enumerate() {
            let ids: Vec<String> = route.nodes.iter().map(|id| id.to_string()).collect();
            let _ = writeln!(out, "route {k} {}", ids.join(" "));
            if let Some(plan) = self.plans.get(k) {
                for (p, acts) in plan.visits.iter().enumerate() {
                    let acts: Vec<String> = acts
                        .iter()
                        .filter(|(_, a)| *a != Action::Idle)
                        .map(|(t, a)| {
                            format!("{t}:{}", if *a == Action::Charge { 'C' } else { 'D' })
                        })
                        .collect();
                    if !acts.is_empty() {
                        let _ = writeln!(out, "visit {k} {p} {}", acts.join(" "));
                    }
                }
            }
        }
        if let Some(s) = summary {
            let _ = writeln!(out, "objective {}", s.objective);
            let v = &s.violations;
            let _ = writeln!(out, "violations {} {} {}", v.tw, v.batt, v.cargo);
        }
        out.push_str("end\n");
        out
    }
}

/// Parses a solution file. Node ids are checked only syntactically; use the
/// verifier for checks against an instance.
pub fn parse_solution(text: &str) -> Result<(Solution, Option<Summary>), ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l)))
        .filter(|(_, l)| !l.is_empty());
    let malformed =
        |no: usize, l: &str| ParseError::new(no, ParseErrorKind::Malformed(l.to_string()));
    let int = |s: &str, no: usize| -> Result<usize, ParseError> {
        s.parse::<usize>()
            .map_err(|_| ParseError::new(no, ParseErrorKind::InvalidValue(s.to_string())))
    };

    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((no, l)) => return Err(malformed(no, l)),
        None => {
            return Err(ParseError::new(
                0,
                ParseErrorKind::Malformed("empty solution".into()),
            ))
        }
    }
    let (no, l) = lines.next().ok_or_else(|| {
        ParseError::new(1, ParseErrorKind::Malformed("missing route count".into()))
    })?;
    let k = match l.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["routes", k] => int(k, no)?,
        _ => return Err(malformed(no, l)),
    };
    let mut sol = Solution {
        routes: Vec::with_capacity(k),
        plans: Vec::with_capacity(k),
    };
    let mut objective = None;
    let mut violations = None;
    let mut ended = false;
    let mut last = no;
    for (no, l) in lines.by_ref() {
        last = no;
        let fields: Vec<&str> = l.split_whitespace().collect();
        match fields.as_slice() {
            ["route", idx, ids @ ..] => {
                if int(idx, no)? != sol.routes.len() || sol.routes.len() >= k {
                    return Err(malformed(no, l));
                }
                let nodes = ids
                    .iter()
                    .map(|s| int(s, no))
                    .collect::<Result<Vec<_>, _>>()?;
                if nodes.len() < 2 {
                    return Err(malformed(no, l));
                }
                sol.plans.push(ChargePlan::idle(nodes.len()));
                sol.routes.push(Route { nodes });
            }
            ["visit", idx, pos, acts @ ..] => {
                let idx = int(idx, no)?;
                let pos = int(pos, no)?;
                if idx + 1 != sol.routes.len() || pos >= sol.routes[idx].nodes.len() {
                    return Err(malformed(no, l));
                }
                let visit = &mut sol.plans[idx].visits[pos];
                if !visit.is_empty() {
                    return Err(malformed(no, l));
                }
                for a in acts {
                    let (t, kind) = a.split_once(':').ok_or_else(|| malformed(no, l))?;
                    let action = match kind {
                        "C" => Action::Charge,
                        "D" => Action::Discharge,
                        _ => return Err(malformed(no, l)),
                    };
                    visit.push((int(t, no)?, action));
                }
                visit.sort();
            }
            ["objective", v] => objective = Some(parse_f64(v, no)?),
            ["violations", tw, batt, cargo] => {
                violations = Some(Violations {
                    tw: parse_f64(tw, no)?,
                    batt: parse_f64(batt, no)?,
                    cargo: parse_f64(cargo, no)?,
                })
            }
            ["end"] => {
                ended = true;
                break;
            }
            _ => return Err(malformed(no, l)),
        }
    }
    if let Some((no, l)) = lines.next() {
        return Err(malformed(no, l));
    }
    if !ended || sol.routes.len() != k {
        return Err(ParseError::new(
            last,
            ParseErrorKind::Malformed("truncated solution".into()),
        ));
    }
    let summary = match (objective, violations) {
        (Some(objective), Some(violations)) => Some(Summary {
            objective,
            violations,
        }),
        (None, None) => None,
        _ => {
            return Err(ParseError::new(
                last,
                ParseErrorKind::Malformed("incomplete summary".into()),
            ))
        }
    };
    Ok((sol, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Solution {
        let mut plan = ChargePlan::idle(5);
        plan.visits[0] = vec![(8, Action::Discharge), (9, Action::Discharge)];
        plan.visits[3] = vec![(14, Action::Charge)];
        Solution {
            routes: vec![
                Route {
                    nodes: vec![0, 3, 1, 7, 8],
                },
                Route { nodes: vec![0, 8] },
            ],
            plans: vec![plan, ChargePlan::idle(2)],
        }
    }

    #[test]
    fn text_round_trip() {
        let sol = sample();
        let summary = Summary {
            objective: 82.61,
            violations: Violations {
                tw: 0.0,
                batt: 1.5,
                cargo: 0.0,
            },
        };
        let text = sol.to_text(Some(&summary));
        assert!(text.contains("visit 0 0 8:D 9:D\n"));
        let (back, s) = parse_solution(&text).unwrap();
        assert_eq!(back, sol);
        assert_eq!(s, Some(summary));
        assert_eq!(back.to_text(Some(&summary)), text);

        let (back, s) = parse_solution(&sol.to_text(None)).unwrap();
        assert_eq!(back, sol);
        assert_eq!(s, None);
    }

    #[test]
    fn rejects_broken_files() {
        let text = sample().to_text(None);
        assert!(parse_solution(&text.replace("routes 2", "routes 3")).is_err());
        assert!(parse_solution(&text.replace("14:C", "14:X")).is_err());
        assert!(parse_solution(&text.replace("end\n", "")).is_err());
        assert!(parse_solution(&text.replace("visit 0 3", "visit 0 9")).is_err());
        assert!(parse_solution("").is_err());
    }

    #[test]
    fn counts_and_normalize() {
        let mut plan = ChargePlan::idle(3);
        plan.visits[2] = vec![
            (5, Action::Discharge),
            (2, Action::Idle),
            (1, Action::Charge),
        ];
        plan.normalize();
        assert_eq!(
            plan.visits[2],
            vec![(1, Action::Charge), (5, Action::Discharge)]
        );
        assert_eq!(plan.counts(), (1, 1));
    }
}
