//! Electric vehicle routing with time windows under time-of-use electricity
//! prices, with vehicle-to-grid discharging.
//!
//! The crate covers the whole pipeline: instance parsing ([`instance`]),
//! route metrics and full verification ([`route`], [`verify`]), exact
//! per-route charge scheduling ([`schedule`]), the VNS/TS metaheuristic
//! ([`heuristic`]), Lagrangian lower bounds ([`lagrangian`]) and an
//! exhaustive oracle for tiny instances ([`oracle`]).

pub mod error;
pub mod eval;
pub mod heuristic;
pub mod instance;
pub mod lagrangian;
pub mod oracle;
pub mod pricing;
pub mod regen;
pub mod route;
pub mod schedule;
pub mod solution;
pub mod synth;
pub mod verify;

pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use eval::{evaluate_route, evaluate_routes, f_gen, priced_solution, RouteEval, SolutionEval};
pub use instance::{parse_instance, FleetParams, Instance, InstanceBuilder, Node, NodeKind};
pub use pricing::{parse_prices, PeriodPrice, PriceSchedule, SchemeId};
pub use route::{compute_metrics, Penalties, Route, RouteMetrics, Violations};
pub use schedule::{price_route, CaseTag, PricedRoute};
pub use solution::{parse_solution, Action, ChargePlan, Solution, Summary};
pub use verify::{verify_full, VerifyReport};
