//! Hybrid variable neighborhood search with tabu-search intensification.
//!
//! Search states are plain node lists; route costs come from
//! [`evaluate_route`](crate::eval::evaluate_route) through a cache, so every
//! route is priced with its optimal charge plan.

mod anneal;
mod cost;
mod multi;
mod params;
mod shake;
mod sweep;
mod tabu;
mod vns;

pub use anneal::{accept, Temperature, FROZEN};
pub use cost::{conserves_customers, CostCache, RouteCost, Scored};
pub use multi::{multi_start, MultiStartResult};
pub use params::SearchParams;
pub use shake::cyclic_exchange;
pub use sweep::sweep_routes;
pub use tabu::{best_neighbor, for_each_neighbor, tabu_search, Move, Operator, TabuList};
pub use vns::{sweep_init, trace_csv, vns_ts, TraceRow, VnsResult, TRACE_HEADER};
