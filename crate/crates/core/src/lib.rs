pub mod brusselator;
pub mod error;
pub mod harness;
pub mod kv;
pub mod numerics;
pub mod scalar;
pub mod splitting;
pub mod vlasov;

pub use error::{Error, FlowError, Result};
pub use scalar::Real;
pub use splitting::{
    builtin_method, builtin_method_by_name, integrate, integrate_with, step, verify_order_conditions, FlowSet, MethodId,
    OrderConditionReport, SplittingMethod, SubFlowSet,
};

/// Double-precision splitting method.
pub type Method = SplittingMethod<f64>;

/// Double-precision ECDI configuration.
pub type VlasovConfig = vlasov::EcdiConfig<f64>;

/// Double-precision phase space.
pub type Phase = vlasov::PhaseSpace<f64>;

/// Double-precision Brusselator configuration.
pub type BrusselatorSetup = brusselator::BrusselatorConfig<f64>;
