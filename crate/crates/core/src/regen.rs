//! Builds benchmark instances from the public EVRPTW files.
//!
//! Coordinates, demands and service times are kept. Fleet parameters are
//! replaced by the experiment's (cargo 200, full charge 270 minutes at 3.39
//! minutes per energy unit, unit consumption and speed), and each customer's
//! window becomes the morning, afternoon or evening block containing the
//! midpoint of its original window, after scaling the original day to the
//! price horizon. Depot and stations are open all day.

use crate::error::{ParseError, ParseErrorKind};
use crate::instance::{DistanceMode, FleetParams, Instance, RawInstance, RawNode};
use crate::pricing::{PriceSchedule, SchemeId};

#[derive(Debug, Clone, PartialEq)]
pub struct RegenConfig {
    pub vehicles: usize,
    pub cargo_capacity: f64,
    /// Minutes to charge a full battery.
    pub full_charge: f64,
    pub charge_rate: f64,
    pub consumption_rate: f64,
    pub speed: f64,
    pub prices: PriceSchedule,
    /// Keep only the first `n` customers in file order.
    pub customers: Option<usize>,
}

impl Default for RegenConfig {
    fn default() -> Self {
        Self {
            vehicles: 1,
            cargo_capacity: 200.0,
            full_charge: 270.0,
            charge_rate: 3.39,
            consumption_rate: 1.0,
            speed: 1.0,
            prices: PriceSchedule::scheme(SchemeId::ASummer),
            customers: None,
        }
    }
}

/// Block boundaries as fractions of the horizon: 5am-12pm, 12pm-6pm,
/// 6pm-12am over a 19-hour day.
const BLOCKS: [f64; 2] = [7.0 / 19.0, 13.0 / 19.0];

/// The block `[start, end]` containing time `t` of a horizon `h`.
pub fn block_window(t: f64, h: f64) -> (f64, f64) {
    let b1 = h * BLOCKS[0];
    let b2 = h * BLOCKS[1];
    if t < b1 {
        (0.0, b1)
    } else if t < b2 {
        (b1, b2)
    } else {
        (b2, h)
    }
}

pub fn regenerate(
    raw: &RawInstance,
    name: &str,
    config: &RegenConfig,
) -> Result<Instance, ParseError> {
    let depot = raw
        .rows
        .iter()
        .find(|r| r.kind == 'd')
        .ok_or_else(|| ParseError::new(raw.last_line, ParseErrorKind::DepotCount(0)))?;
    let day = depot.due;
    if !(day > 0.0) {
        return Err(ParseError::new(
            depot.line,
            ParseErrorKind::InvalidValue("depot due date must be positive".into()),
        ));
    }
    let horizon = config.prices.horizon();
    let scale = horizon / day;
    let mut kept = 0usize;
    let mut rows: Vec<RawNode> = Vec::with_capacity(raw.rows.len());
    for r in &raw.rows {
        let mut r = r.clone();
        match r.kind {
            'c' => {
                if config.customers.is_some_and(|n| kept >= n) {
                    continue;
                }
                kept += 1;
                let mid = 0.5 * (r.ready + r.due) * scale;
                let (e, l) = block_window(mid, horizon);
                r.ready = e;
                r.due = l;
            }
            _ => {
                r.ready = 0.0;
                r.due = horizon;
            }
        }
        rows.push(r);
    }
    let fleet = FleetParams {
        vehicles: config.vehicles,
        cargo_capacity: config.cargo_capacity,
        battery_capacity: config.full_charge / config.charge_rate,
        charge_rate: config.charge_rate,
        consumption_rate: config.consumption_rate,
        speed: config.speed,
    };
    Instance::from_rows(
        name.to_string(),
        &rows,
        fleet,
        config.prices.clone(),
        DistanceMode::Euclidean,
    )
}

/// Parses a benchmark file and regenerates it.
pub fn regenerate_text(
    text: &str,
    name: &str,
    config: &RegenConfig,
) -> Result<Instance, ParseError> {
    regenerate(&RawInstance::parse(text)?, name, config)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C101_5: &str = include_str!("../../../data/schneider/5/c101C5.txt");

    #[test]
    fn blocks_follow_the_day_split() {
        assert_eq!(block_window(0.0, 1140.0), (0.0, 420.0));
        assert_eq!(block_window(419.9, 1140.0), (0.0, 420.0));
        assert_eq!(block_window(420.0, 1140.0), (420.0, 780.0));
        assert_eq!(block_window(1000.0, 1140.0), (780.0, 1140.0));
    }

    #[test]
    fn regenerates_small_benchmark() {
        let inst = regenerate_text(C101_5, "c101C5", &RegenConfig::default()).unwrap();
        assert_eq!(inst.n_customers(), 5);
        assert_eq!(inst.n_stations(), 3);
        assert_eq!(inst.full_charge(), 270.0);
        assert_eq!(inst.fleet.cargo_capacity, 200.0);
        // C30: original [355, 407], midpoint 381 scaled by 1140/1236.
        let c30 = inst.node(1);
        assert_eq!(c30.name, "C30");
        assert_eq!((c30.ready, c30.due), (0.0, 420.0));
        let c100 = inst.node(3);
        assert_eq!((c100.ready, c100.due), (420.0, 780.0));
        assert_eq!(c100.service, 90.0);
        for s in inst.stations() {
            assert_eq!((inst.node(s).ready, inst.node(s).due), (0.0, 1140.0));
        }
        let back = crate::instance::parse_instance(&inst.to_text()).unwrap();
        assert_eq!(back.with_name("c101C5"), inst);
    }

    #[test]
    fn truncates_customers_in_file_order() {
        let cfg = RegenConfig {
            customers: Some(2),
            ..RegenConfig::default()
        };
        let inst = regenerate_text(C101_5, "x", &cfg).unwrap();
        assert_eq!(inst.n_customers(), 2);
        assert_eq!(inst.node(2).name, "C12");
    }
}
