//! Problem data: nodes, fleet parameters, prices and the instance text format.
//!
//! The text format is the line-oriented layout of the public EVRPTW benchmark
//! (a `StringID Type x y demand ReadyTime DueDate ServiceTime` table followed
//! by `Q`, `C`, `r`, `g`, `v` parameter lines), extended with an optional
//! `K Vehicle count /k/` line, a mandatory `PRICES` section and an optional
//! `MATRIX <n>` section holding explicit distances in table-row order.
//!
//! Parameter letters keep the benchmark's meaning: `Q` is the battery (tank)
//! capacity in energy units, `C` the cargo capacity, `r` the energy consumed
//! per distance unit, `g` the charging time per energy unit and `v` the speed.
//!
//! Node ids are canonical: `0` is the start depot, `1..=N` the customers,
//! `N+1..=N+S` the stations and `N+S+1` the end depot.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::pricing::{parse_f64, strip_comment, PriceSchedule};
use crate::schedule::SelectionTable;

/// Slack used when comparing times and energies.
pub const TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    DepotStart,
    DepotEnd,
    Customer,
    Station,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: usize,
    pub name: String,
    pub kind: NodeKind,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub service: f64,
    pub ready: f64,
    pub due: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FleetParams {
    pub vehicles: usize,
    /// Cargo capacity `Q`.
    pub cargo_capacity: f64,
    /// Battery capacity `C` in energy units.
    pub battery_capacity: f64,
    /// Charging time per energy unit (`alpha`, minutes).
    pub charge_rate: f64,
    /// Energy per distance unit (`g`).
    pub consumption_rate: f64,
    /// Distance per minute (`v`).
    pub speed: f64,
}

impl FleetParams {
    /// Minutes needed to charge an empty battery, `B = alpha * C`.
    pub fn full_charge_time(&self) -> f64 {
        self.charge_rate * self.battery_capacity
    }

    fn validate(&self) -> Result<(), ParseErrorKind> {
        let positive = [
            ("cargo capacity", self.cargo_capacity),
            ("battery capacity", self.battery_capacity),
            ("charge rate", self.charge_rate),
            ("consumption rate", self.consumption_rate),
            ("speed", self.speed),
        ];
        for (what, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ParseErrorKind::InvalidValue(format!(
                    "{what} must be positive"
                )));
            }
        }
        if self.vehicles == 0 {
            return Err(ParseErrorKind::InvalidValue(
                "vehicle count must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DistanceMode {
    Euclidean,
    /// Distances between table rows, in table-row order.
    Matrix(Vec<Vec<f64>>),
}

/// The four coupled quantities of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeQuantities {
    pub distance: f64,
    pub time: f64,
    pub energy: f64,
    /// Charging minutes needed to restore the edge's energy.
    pub charge_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    nodes: Vec<Node>,
    pub fleet: FleetParams,
    prices: PriceSchedule,
    selection: SelectionTable,
    distance_mode: DistanceMode,
    /// Canonical id of each table row, in table order.
    row_order: Vec<usize>,
    n_customers: usize,
    n_stations: usize,
    full_charge: f64,
    dist: Vec<f64>,
    time: Vec<f64>,
    charge: Vec<f64>,
}

/// One table row before validation.
#[derive(Debug, Clone)]
pub struct RawNode {
    pub line: usize,
    pub name: String,
    pub kind: char,
    pub x: f64,
    pub y: f64,
    pub demand: f64,
    pub ready: f64,
    pub due: f64,
    pub service: f64,
}

/// Lexical content of an instance file.
#[derive(Debug, Clone, Default)]
pub struct RawInstance {
    pub rows: Vec<RawNode>,
    pub tank_capacity: Option<f64>,
    pub load_capacity: Option<f64>,
    pub consumption_rate: Option<f64>,
    pub charge_rate: Option<f64>,
    pub speed: Option<f64>,
    pub vehicles: Option<usize>,
    pub prices: Option<PriceSchedule>,
    pub matrix: Option<Vec<Vec<f64>>>,
    pub last_line: usize,
}

impl RawInstance {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut raw = RawInstance::default();
        let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect();
        raw.last_line = lines.len();
        let mut names = HashSet::new();
        let mut i = 0;
        while i < lines.len() {
            let (no, full) = lines[i];
            i += 1;
            let line = strip_comment(full);
            if line.is_empty() || line.starts_with("StringID") {
                continue;
            }
            if line == "PRICES" {
                let start = i;
                while i < lines.len() && !strip_comment(lines[i].1).starts_with("night") {
                    i += 1;
                }
                let end = (i + 1).min(lines.len());
                raw.prices = Some(PriceSchedule::parse_section(
                    lines[start..end].iter().copied(),
                    no,
                )?);
                i = end;
                continue;
            }
            if let Some(rest) = line.strip_prefix("MATRIX") {
                let n: usize = rest.trim().parse().map_err(|_| {
                    ParseError::new(
                        no,
                        ParseErrorKind::InvalidMatrix("expected `MATRIX <n>`".into()),
                    )
                })?;
                let mut matrix = Vec::with_capacity(n);
                while matrix.len() < n {
                    let Some(&(rno, rline)) = lines.get(i) else {
                        return Err(ParseError::new(
                            no,
                            ParseErrorKind::InvalidMatrix("truncated".into()),
                        ));
                    };
                    i += 1;
                    let rline = strip_comment(rline);
                    if rline.is_empty() {
                        continue;
                    }
                    let row = rline
                        .split_whitespace()
                        .map(|v| parse_f64(v, rno))
                        .collect::<Result<Vec<_>, _>>()?;
                    if row.len() != n {
                        return Err(ParseError::new(
                            rno,
                            ParseErrorKind::InvalidMatrix(format!(
                                "expected {n} entries, found {}",
                                row.len()
                            )),
                        ));
                    }
                    matrix.push(row);
                }
                raw.matrix = Some(matrix);
                continue;
            }
            if line.contains('/') {
                raw.parse_parameter(no, line)?;
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 8 {
                return Err(ParseError::new(
                    no,
                    ParseErrorKind::Malformed(line.to_string()),
                ));
            }
            let kind = match fields[1] {
                "d" => 'd',
                "f" => 'f',
                "c" => 'c',
                _ => {
                    return Err(ParseError::new(
                        no,
                        ParseErrorKind::Malformed(line.to_string()),
                    ))
                }
            };
            let name = fields[0].to_string();
            if !names.insert(name.clone()) {
                return Err(ParseError::new(no, ParseErrorKind::DuplicateNodeId(name)));
            }
            raw.rows.push(RawNode {
                line: no,
                name,
                kind,
                x: parse_f64(fields[2], no)?,
                y: parse_f64(fields[3], no)?,
                demand: parse_f64(fields[4], no)?,
                ready: parse_f64(fields[5], no)?,
                due: parse_f64(fields[6], no)?,
                service: parse_f64(fields[7], no)?,
            });
        }
        Ok(raw)
    }

    fn parse_parameter(&mut self, no: usize, line: &str) -> Result<(), ParseError> {
        let malformed = || ParseError::new(no, ParseErrorKind::Malformed(line.to_string()));
        let key = line.split_whitespace().next().ok_or_else(malformed)?;
        let mut parts = line.split('/');
        parts.next();
        let value = parts.next().ok_or_else(malformed)?.trim();
        match key {
            "Q" => self.tank_capacity = Some(parse_f64(value, no)?),
            "C" => self.load_capacity = Some(parse_f64(value, no)?),
            "r" => self.consumption_rate = Some(parse_f64(value, no)?),
            "g" => self.charge_rate = Some(parse_f64(value, no)?),
            "v" => self.speed = Some(parse_f64(value, no)?),
            "K" => {
                let k = value
                    .parse::<f64>()
                    .ok()
                    .filter(|k| k.fract() == 0.0 && *k >= 1.0)
                    .ok_or_else(|| {
                        ParseError::new(no, ParseErrorKind::InvalidValue(value.to_string()))
                    })?;
                self.vehicles = Some(k as usize);
            }
            _ => return Err(malformed()),
        }
        Ok(())
    }

    pub fn fleet(&self) -> Result<FleetParams, ParseError> {
        let line = self.last_line;
        let need = |v: Option<f64>, what: &'static str| {
            v.ok_or_else(|| ParseError::new(line, ParseErrorKind::MissingParameter(what)))
        };
        Ok(FleetParams {
            vehicles: self.vehicles.unwrap_or(1),
            cargo_capacity: need(self.load_capacity, "C")?,
            battery_capacity: need(self.tank_capacity, "Q")?,
            charge_rate: need(self.charge_rate, "g")?,
            consumption_rate: need(self.consumption_rate, "r")?,
            speed: need(self.speed, "v")?,
        })
    }
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let raw = RawInstance::parse(text)?;
    let fleet = raw.fleet()?;
    let prices = raw
        .prices
        .clone()
        .ok_or_else(|| ParseError::new(raw.last_line, ParseErrorKind::MissingPrices))?;
    let mode = match raw.matrix.clone() {
        Some(m) => DistanceMode::Matrix(m),
        None => DistanceMode::Euclidean,
    };
    Instance::from_rows(String::new(), &raw.rows, fleet, prices, mode)
}

impl Instance {
    /// Builds a validated instance from table rows (in table order).
    pub fn from_rows(
        name: String,
        rows: &[RawNode],
        fleet: FleetParams,
        prices: PriceSchedule,
        distance_mode: DistanceMode,
    ) -> Result<Self, ParseError> {
        let last_line = rows.last().map_or(0, |r| r.line);
        fleet
            .validate()
            .map_err(|k| ParseError::new(last_line, k))?;
        let depots: Vec<&RawNode> = rows.iter().filter(|r| r.kind == 'd').collect();
        if depots.len() != 1 {
            return Err(ParseError::new(
                depots.get(1).map_or(last_line, |r| r.line),
                ParseErrorKind::DepotCount(depots.len()),
            ));
        }
        let mut seen = HashSet::new();
        for r in rows {
            if !seen.insert(r.name.as_str()) {
                return Err(ParseError::new(
                    r.line,
                    ParseErrorKind::DuplicateNodeId(r.name.clone()),
                ));
            }
        }
        let horizon = prices.horizon();
        let n_customers = rows.iter().filter(|r| r.kind == 'c').count();
        let n_stations = rows.iter().filter(|r| r.kind == 'f').count();

        let mut nodes = Vec::with_capacity(n_customers + n_stations + 2);
        let mut row_order = vec![0; rows.len()];
        let make = |r: &RawNode, id: usize, kind: NodeKind| -> Result<Node, ParseError> {
            if !(r.ready <= r.due) || r.ready < 0.0 {
                return Err(ParseError::new(
                    r.line,
                    ParseErrorKind::InvalidWindow(r.name.clone()),
                ));
            }
            if r.due > horizon + TOLERANCE {
                return Err(ParseError::new(
                    r.line,
                    ParseErrorKind::WindowExceedsHorizon(r.name.clone()),
                ));
            }
            if kind != NodeKind::Customer && (r.demand != 0.0 || r.service != 0.0) {
                return Err(ParseError::new(
                    r.line,
                    ParseErrorKind::InvalidValue(format!(
                        "{} must have zero demand and service",
                        r.name
                    )),
                ));
            }
            if r.demand < 0.0 || r.service < 0.0 {
                return Err(ParseError::new(
                    r.line,
                    ParseErrorKind::InvalidValue(format!(
                        "{} has negative demand or service",
                        r.name
                    )),
                ));
            }
            Ok(Node {
                id,
                name: r.name.clone(),
                kind,
                x: r.x,
                y: r.y,
                demand: r.demand,
                service: r.service,
                ready: r.ready,
                due: r.due,
            })
        };

        let depot = depots[0];
        nodes.push(make(depot, 0, NodeKind::DepotStart)?);
        for (ri, r) in rows.iter().enumerate() {
            if r.kind == 'c' {
                row_order[ri] = nodes.len();
                nodes.push(make(r, nodes.len(), NodeKind::Customer)?);
            }
        }
        for (ri, r) in rows.iter().enumerate() {
            if r.kind == 'f' {
                row_order[ri] = nodes.len();
                nodes.push(make(r, nodes.len(), NodeKind::Station)?);
            }
        }
        let end_id = nodes.len();
        let mut end = nodes[0].clone();
        end.id = end_id;
        end.kind = NodeKind::DepotEnd;
        nodes.push(end);

        if let DistanceMode::Matrix(m) = &distance_mode {
            if m.len() != rows.len() || m.iter().any(|row| row.len() != rows.len()) {
                return Err(ParseError::new(
                    last_line,
                    ParseErrorKind::InvalidMatrix(format!(
                        "expected {0}x{0} distances",
                        rows.len()
                    )),
                ));
            }
            if m.iter().flatten().any(|d| *d < 0.0) {
                return Err(ParseError::new(
                    last_line,
                    ParseErrorKind::InvalidMatrix("negative distance".into()),
                ));
            }
        }

        let n = nodes.len();
        let mut dist = vec![0.0; n * n];
        match &distance_mode {
            DistanceMode::Euclidean => {
                for i in 0..n {
                    for j in 0..n {
                        dist[i * n + j] = (nodes[i].x - nodes[j].x).hypot(nodes[i].y - nodes[j].y);
                    }
                }
            }
            DistanceMode::Matrix(m) => {
                // Both depot copies share the depot row.
                let mut row_of = vec![0; n];
                for (ri, &id) in row_order.iter().enumerate() {
                    row_of[id] = ri;
                }
                let depot_row = rows.iter().position(|r| r.kind == 'd').unwrap();
                row_of[0] = depot_row;
                row_of[end_id] = depot_row;
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            dist[i * n + j] = m[row_of[i]][row_of[j]];
                        }
                    }
                }
            }
        }
        let v = fleet.speed;
        let per_dist = fleet.charge_rate * fleet.consumption_rate;
        let time = dist.iter().map(|d| d / v).collect();
        let charge = dist.iter().map(|d| d * per_dist).collect();

        Ok(Instance {
            name,
            nodes,
            selection: SelectionTable::new(&prices),
            full_charge: fleet.full_charge_time(),
            fleet,
            prices,
            distance_mode,
            row_order,
            n_customers,
            n_stations,
            dist,
            time,
            charge,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_vehicles(mut self, k: usize) -> Self {
        self.fleet.vehicles = k.max(1);
        self
    }

    /// Same network and fleet under another price schedule. Node windows
    /// must still fit the new horizon.
    pub fn with_prices(&self, prices: PriceSchedule) -> Result<Self, ParseError> {
        let rows = self.rows();
        Instance::from_rows(
            self.name.clone(),
            &rows,
            self.fleet.clone(),
            prices,
            self.distance_mode.clone(),
        )
    }

    /// Table rows in their original order.
    pub fn rows(&self) -> Vec<RawNode> {
        self.row_order
            .iter()
            .map(|&id| {
                let n = &self.nodes[id];
                RawNode {
                    line: 0,
                    name: n.name.clone(),
                    kind: match n.kind {
                        NodeKind::DepotStart | NodeKind::DepotEnd => 'd',
                        NodeKind::Customer => 'c',
                        NodeKind::Station => 'f',
                    },
                    x: n.x,
                    y: n.y,
                    demand: n.demand,
                    ready: n.ready,
                    due: n.due,
                    service: n.service,
                }
            })
            .collect()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    #[inline]
    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_customers(&self) -> usize {
        self.n_customers
    }

    pub fn n_stations(&self) -> usize {
        self.n_stations
    }

    pub fn vehicles(&self) -> usize {
        self.fleet.vehicles
    }

    pub fn depot_start(&self) -> usize {
        0
    }

    pub fn depot_end(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn customers(&self) -> std::ops::RangeInclusive<usize> {
        1..=self.n_customers
    }

    pub fn stations(&self) -> std::ops::Range<usize> {
        self.n_customers + 1..self.n_customers + 1 + self.n_stations
    }

    #[inline]
    pub fn kind(&self, id: usize) -> NodeKind {
        self.nodes[id].kind
    }

    #[inline]
    pub fn is_customer(&self, id: usize) -> bool {
        id >= 1 && id <= self.n_customers
    }

    #[inline]
    pub fn is_station(&self, id: usize) -> bool {
        id > self.n_customers && id <= self.n_customers + self.n_stations
    }

    /// Stations and depots, where a vehicle may charge or discharge.
    #[inline]
    pub fn is_charge_capable(&self, id: usize) -> bool {
        !self.is_customer(id)
    }

    /// `B`, minutes to fully charge the battery.
    #[inline]
    pub fn full_charge(&self) -> f64 {
        self.full_charge
    }

    pub fn prices(&self) -> &PriceSchedule {
        &self.prices
    }

    pub(crate) fn selection(&self) -> &SelectionTable {
        &self.selection
    }

    pub fn horizon(&self) -> f64 {
        self.prices.horizon()
    }

    pub fn delta(&self) -> f64 {
        self.prices.delta
    }

    pub fn periods(&self) -> usize {
        self.prices.len()
    }

    pub fn distance_mode(&self) -> &DistanceMode {
        &self.distance_mode
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.nodes.len() + j]
    }

    #[inline]
    pub fn travel_time(&self, i: usize, j: usize) -> f64 {
        self.time[i * self.nodes.len() + j]
    }

    /// `f_ij`, the charging minutes consumed by traversing `(i, j)`.
    #[inline]
    pub fn charge_time(&self, i: usize, j: usize) -> f64 {
        self.charge[i * self.nodes.len() + j]
    }

    pub fn edge_quantities(&self, i: usize, j: usize) -> Result<EdgeQuantities> {
        let n = self.nodes.len();
        for id in [i, j] {
            if id >= n {
                return Err(Error::InvalidNode(id));
            }
        }
        let distance = self.distance(i, j);
        Ok(EdgeQuantities {
            distance,
            time: self.travel_time(i, j),
            energy: self.fleet.consumption_rate * distance,
            charge_time: self.charge_time(i, j),
        })
    }

    /// Whether detours never shorten travel, which lets exact searches prune
    /// time-infeasible prefixes.
    pub fn satisfies_triangle_inequality(&self) -> bool {
        match self.distance_mode {
            DistanceMode::Euclidean => true,
            DistanceMode::Matrix(_) => {
                let n = self.nodes.len();
                (0..n).all(|i| {
                    (0..n).all(|j| {
                        (0..n).all(|k| {
                            self.distance(i, j)
                                <= self.distance(i, k) + self.distance(k, j) + TOLERANCE
                        })
                    })
                })
            }
        }
    }

    /// Serializes the instance in the format read by [`parse_instance`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(out, "# {}", self.name);
        }
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:<10} {:<10} {:<10} {:<10} {:<10} {:<10}",
            "StringID", "Type", "x", "y", "demand", "ReadyTime", "DueDate", "ServiceTime"
        );
        for r in self.rows() {
            let _ = writeln!(
                out,
                "{:<10} {:<10} {:<10} {:<10} {:<10} {:<10} {:<10} {:<10}",
                r.name, r.kind, r.x, r.y, r.demand, r.ready, r.due, r.service
            );
        }
        out.push('\n');
        let f = &self.fleet;
        let _ = writeln!(out, "Q Vehicle fuel tank capacity /{}/", f.battery_capacity);
        let _ = writeln!(out, "C Vehicle load capacity /{}/", f.cargo_capacity);
        let _ = writeln!(out, "r fuel consumption rate /{}/", f.consumption_rate);
        let _ = writeln!(out, "g inverse refueling rate /{}/", f.charge_rate);
        let _ = writeln!(out, "v average Velocity /{}/", f.speed);
        let _ = writeln!(out, "K Vehicle count /{}/", f.vehicles);
        out.push('\n');
        self.prices.write_section(&mut out);
        if let DistanceMode::Matrix(m) = &self.distance_mode {
            let _ = writeln!(out, "\nMATRIX {}", m.len());
            for row in m {
                let line: Vec<String> = row.iter().map(|d| d.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }
}

/// Programmatic construction, mostly for tests and generated instances.
#[derive(Debug, Clone)]
pub struct InstanceBuilder {
    rows: Vec<RawNode>,
    fleet: FleetParams,
    prices: PriceSchedule,
    matrix: Option<Vec<Vec<f64>>>,
}

impl InstanceBuilder {
    pub fn new(depot: (f64, f64), fleet: FleetParams, prices: PriceSchedule) -> Self {
        let horizon = prices.horizon();
        Self {
            rows: vec![RawNode {
                line: 0,
                name: "D0".into(),
                kind: 'd',
                x: depot.0,
                y: depot.1,
                demand: 0.0,
                ready: 0.0,
                due: horizon,
                service: 0.0,
            }],
            fleet,
            prices,
            matrix: None,
        }
    }

    pub fn station(mut self, x: f64, y: f64) -> Self {
        let horizon = self.prices.horizon();
        let name = format!("S{}", self.rows.iter().filter(|r| r.kind == 'f').count());
        self.rows.push(RawNode {
            line: 0,
            name,
            kind: 'f',
            x,
            y,
            demand: 0.0,
            ready: 0.0,
            due: horizon,
            service: 0.0,
        });
        self
    }

    pub fn customer(
        mut self,
        x: f64,
        y: f64,
        demand: f64,
        window: (f64, f64),
        service: f64,
    ) -> Self {
        let name = format!(
            "C{}",
            self.rows.iter().filter(|r| r.kind == 'c').count() + 1
        );
        self.rows.push(RawNode {
            line: 0,
            name,
            kind: 'c',
            x,
            y,
            demand,
            ready: window.0,
            due: window.1,
            service,
        });
        self
    }

    /// Explicit distances over the rows added so far, in insertion order
    /// (depot first).
    pub fn matrix(mut self, m: Vec<Vec<f64>>) -> Self {
        self.matrix = Some(m);
        self
    }

    pub fn build(self) -> Result<Instance, ParseError> {
        let mode = match self.matrix {
            Some(m) => DistanceMode::Matrix(m),
            None => DistanceMode::Euclidean,
        };
        Instance::from_rows(String::new(), &self.rows, self.fleet, self.prices, mode)
    }
}
