//! Ground motions, filtering, runs and post-processing of wall pressures.

pub mod comparison;
pub mod filter;
pub mod motion;
pub mod pressure;
pub mod report;
pub mod run;

pub use comparison::{
    analytic_table, comparison_table, passive_increases_with_shaking, AnalyticRow, static_rows, Analytic, ComparisonRow, ComparisonTable, ObservationFlags,
    SideSummary, CLOSE_TO_MO,
};
pub use filter::lowpass_filter;
pub use motion::{load_ground_motion, parse_ground_motion, synthesize_motion, AccelUnits, GroundMotion, SynthKind, SynthSpec};
pub use pressure::{
    application_height, back_calculate_k, kh_from_acceleration, select_peaks, wall_adjacent_elements, wall_pressure_profile,
    wedge_probe_point, PressureProfile, WallSide,
};
pub use run::{
    calibrate_damping, configured_motions, dynamic_settings, prepare_motion, record_dynamic, run_static, shake_all,
    static_profiles, DampingChoice, DynamicRecord, SideHistory,
};
pub use report::{
    run_meta, write_analytic_table_csv, write_comparison_csv, write_dynamic_outputs, write_kh_series_csv, write_profiles_csv, write_static_outputs,
    MotionResult,
};
