//! Scenario harness for the slipstance controller: configuration, the
//! simulation runner, telemetry CSV, run comparison, SVG plots and the
//! acceptance suite.

pub mod acceptance;
pub mod compare;
pub mod config;
pub mod plot;
pub mod runner;
pub mod telemetry;

/// Bundled scenario configurations, also shipped under `scenarios/`.
pub mod scenarios {
    use crate::config::ScenarioConfig;

    pub const SCENARIO1: &str = include_str!("../scenarios/scenario1.toml");
    pub const SCENARIO2: &str = include_str!("../scenarios/scenario2.toml");
    pub const SCENARIO2_NOADAPT: &str = include_str!("../scenarios/scenario2_noadapt.toml");
    pub const SCENARIO3: &str = include_str!("../scenarios/scenario3.toml");
    pub const SCENARIO3_NOADAPT: &str = include_str!("../scenarios/scenario3_noadapt.toml");

    /// All bundled scenarios in a fixed order.
    pub fn all() -> Vec<(&'static str, &'static str)> {
        vec![
            ("scenario1", SCENARIO1),
            ("scenario2", SCENARIO2),
            ("scenario2_noadapt", SCENARIO2_NOADAPT),
            ("scenario3", SCENARIO3),
            ("scenario3_noadapt", SCENARIO3_NOADAPT),
        ]
    }

    pub fn parse(name: &str) -> Option<ScenarioConfig> {
        all()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(n, text)| {
                ScenarioConfig::from_toml(text, n).expect("bundled scenario must parse")
            })
    }
}
