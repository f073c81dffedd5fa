//! Bundled scenario configs.

use crate::config::{parse_config, ScenarioConfig};
use crate::error::CliError;

pub const PRESETS: [(&str, &str); 7] = [
    ("fig1", include_str!("../presets/fig1.json")),
    ("fig2", include_str!("../presets/fig2.json")),
    ("fig3", include_str!("../presets/fig3.json")),
    ("fig3-single", include_str!("../presets/fig3-single.json")),
    ("fig4", include_str!("../presets/fig4.json")),
    ("fig5", include_str!("../presets/fig5.json")),
    ("fig6", include_str!("../presets/fig6.json")),
];

pub fn preset_text(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn preset(name: &str) -> Result<ScenarioConfig, CliError> {
    let text = preset_text(name).ok_or_else(|| CliError::Config {
        path: "--preset".into(),
        message: format!(
            "unknown preset '{name}'; available: {}",
            PRESETS.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        ),
    })?;
    parse_config(text)
}
