//! Benchmark harness: efficiency model, timing protocol, step-size search
//! and report emission.

mod comparison;
mod efficiency;
mod records;
mod report;
mod search;
mod svg;
mod timing;

pub use comparison::{
    brusselator_efficiency, vlasov_comparison, BrusselatorEfficiencyOptions, EfficiencyRow, VlasovComparison,
    VlasovMethodSummary, MRMS_TARGETS,
};
pub use efficiency::{efficiency_gain, extra_time_fraction, extra_time_fraction_from_seconds, time_saved};
pub use records::{read_records, write_csv, write_records, MetricKind, WorkPrecisionRecord};
pub use report::{emit_report, series_slopes, ReportFormat};
pub use search::{largest_dt_for_target, DtSearch, DtSearchResult};
pub use svg::{LogLogPlot, Series};
pub use timing::{timing_protocol, TimingSummary, DEFAULT_REPEATS};
