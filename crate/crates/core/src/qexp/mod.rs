//! q-expansions: divisor-sum series, multitangent reduction and Fourier
//! expansions of multiple Eisenstein series.

pub mod expansion;
pub mod gseries;
pub mod qseries;
pub mod reduce;

pub use expansion::{
    fourier_expansion, gstar_series, gstar_symbolic, FourierExpansion, GhatPoly, MiddleTerm,
};
pub use gseries::{g_series, g_series_f64, ghat_series, monotangent_series, monotangent_value};
pub use qseries::{qseries_eval, QSeries};
pub use reduce::{multitangent_reduce, multitangent_reduce_raw, Reduction};
