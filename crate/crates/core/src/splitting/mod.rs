//! Splitting methods: coefficients, order conditions and the composition driver.

pub mod compose;
pub mod method;
pub mod order;
pub mod strang_search;

pub use compose::{integrate, integrate_with, step, step_schedule, FlowSet, HookPoint, SubFlowSet};
pub use method::{builtin_method, builtin_method_by_name, write_catalog_csv, MethodId, SplittingMethod};
pub use order::{verify_order_conditions, OrderConditionReport, DEFAULT_ORDER_TOLERANCE};
pub use strang_search::{search_five_subintegration_methods, PatternSolution, StrangSearchReport};
