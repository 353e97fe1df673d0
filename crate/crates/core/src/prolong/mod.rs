//! Pfaffian prolongation, ideal decomposition, Riccati charts, gauge changes.

mod chart;
mod decompose;
mod extend;
mod gauge;
mod pfaffian;

pub use chart::{
    first_ratio_index, riccati_chart, subchart_curvature, subsystem_pfaffians, trace_closure, RatioDef, RiccatiChart,
    SubCurvature, SubsystemSet,
};
pub use decompose::{closure_decompose, Basis, IdealDecomposition};
pub use extend::{extend_sl2, Sl2Extension};
pub use gauge::{constant_gauge, gauge_transform, GaugeMatrix, GaugeResult};
pub use pfaffian::{bianchi_defect, curvature, linear_closure, pfaffians, Pfaffian, PfaffianSet};
