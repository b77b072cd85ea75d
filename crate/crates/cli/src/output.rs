//! Report envelopes and file emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const TOOL: &str = concat!("nanotrap ", env!("CARGO_PKG_VERSION"));

/// SHA-256 of the resolved configuration in its canonical JSON form.
pub fn config_hash(config: &RunConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("configuration serialises");
    Sha256::digest(&canonical).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub config_sha256: String,
    pub units: &'static str,
}

impl Meta {
    pub fn new(config: &RunConfig, units: &'static str) -> Self {
        Self { tool: TOOL, config_sha256: config_hash(config), units }
    }

    /// `#`-prefixed header lines for CSV files.
    pub fn csv_header(&self, extra: &[String]) -> Vec<String> {
        let mut lines = vec![self.tool.to_string(), format!("config_sha256: {}", self.config_sha256), format!("units: {}", self.units)];
        lines.extend_from_slice(extra);
        lines
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<B: Serialize> {
    pub meta: Meta,
    #[serde(flatten)]
    pub body: B,
}

pub fn to_json<B: Serialize>(value: &B) -> anyhow::Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Prints `text` and, when an output directory is set, writes it to `name` there.
pub fn emit(text: &str, out: Option<&Path>, name: &str) -> anyhow::Result<Option<PathBuf>> {
    print!("{text}");
    out.map(|dir| write_file(dir, name, text.as_bytes())).transpose()
}

pub fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let mut file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
    file.write_all(bytes).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(path)
}

/// File-name fragment for a state label.
pub fn state_tag(label: &str) -> String {
    label
        .chars()
        .filter_map(|c| match c {
            'a'..='z' | 'A'..='Z' | '0'..='9' => Some(c),
            '-' => Some('m'),
            ',' | ':' => Some('_'),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_tags_are_distinct_and_safe() {
        let plus = state_tag("a:L=0,S=1,Sigma=1,v=0,J=1,M=1");
        let minus = state_tag("a:L=0,S=1,Sigma=1,v=0,J=1,M=-1");
        assert_ne!(plus, minus);
        assert!(plus.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'));
        assert_eq!(state_tag("b:L=0,S=1/2"), "b_L0_S12");
    }
}
