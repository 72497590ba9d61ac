//! Key=value configuration files with command-line overrides, and the
//! process error type that maps onto exit codes.

use std::path::{Path, PathBuf};

use dlgsum_core::extract::SearchConfig;
use dlgsum_core::graph::EdgeWeightMode;
use dlgsum_core::pipeline::PipelineConfig;

use crate::SummarizeArgs;

/// Failures surfaced to the user. Input problems exit 1, configuration
/// problems exit 2.
#[derive(Debug)]
pub enum AppError {
    Input(String),
    Config(String),
}

impl AppError {
    pub fn message(&self) -> &str {
        match self {
            AppError::Input(m) | AppError::Config(m) => m,
        }
    }

    pub fn code(&self) -> u8 {
        match self {
            AppError::Input(_) => 1,
            AppError::Config(_) => 2,
        }
    }
}

/// The full effective configuration of a summarize run.
#[derive(Debug, Clone)]
pub struct Settings {
    pub edge_weight: String,
    pub topics: usize,
    pub segment_threshold_chars: usize,
    pub k_paths: usize,
    pub search_depth: usize,
    pub min_tokens: usize,
    pub require_verb: bool,
    pub pov: bool,
    pub pov_keep_possessives: bool,
    pub stopwords: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for Settings {
    fn default() -> Self {
        let p = PipelineConfig::default();
        Settings {
            edge_weight: "paper".to_string(),
            topics: p.topics_p,
            segment_threshold_chars: p.segment_threshold_chars,
            k_paths: p.search.k_paths,
            search_depth: p.search.search_depth,
            min_tokens: p.search.min_tokens,
            require_verb: p.search.require_verb,
            pov: p.pov_enabled,
            pov_keep_possessives: p.pov_keep_possessives,
            stopwords: None,
            jobs: 1,
        }
    }
}

/// Command-line values that take precedence over a config file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub edge_weight: Option<String>,
    pub topics: Option<usize>,
    pub segment_threshold_chars: Option<usize>,
    pub k_paths: Option<usize>,
    pub search_depth: Option<usize>,
    pub min_tokens: Option<usize>,
    pub no_verb_filter: bool,
    pub no_pov: bool,
    pub pov_keep_possessives: bool,
    pub stopwords: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl Overrides {
    pub fn from_args(args: &SummarizeArgs) -> Overrides {
        Overrides {
            edge_weight: args.graph.edge_weight.clone(),
            topics: args.topics,
            segment_threshold_chars: args.segment_threshold_chars,
            k_paths: args.k_paths,
            search_depth: args.search_depth,
            min_tokens: args.min_tokens,
            no_verb_filter: args.no_verb_filter,
            no_pov: args.no_pov,
            pov_keep_possessives: args.pov_keep_possessives,
            stopwords: crate::resolve_stopwords(&args.graph.stopwords),
            jobs: args.jobs,
        }
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, AppError> {
    value
        .parse()
        .map_err(|_| AppError::Config(format!("{key}: expected an integer, got {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, AppError> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(AppError::Config(format!(
            "{key}: expected true/false, got {value:?}"
        ))),
    }
}

/// Read a config file of `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<Settings, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))?;
    let mut s = Settings::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            AppError::Config(format!(
                "{}:{}: expected key=value, got {raw:?}",
                path.display(),
                i + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "edge_weight" => s.edge_weight = value.to_string(),
            "topics" => s.topics = parse_usize(key, value)?,
            "segment_threshold_chars" => {
                s.segment_threshold_chars = parse_usize(key, value)?
            }
            "k_paths" => s.k_paths = parse_usize(key, value)?,
            "search_depth" => s.search_depth = parse_usize(key, value)?,
            "min_tokens" => s.min_tokens = parse_usize(key, value)?,
            "require_verb" => s.require_verb = parse_bool(key, value)?,
            "pov" => s.pov = parse_bool(key, value)?,
            "pov_keep_possessives" => {
                s.pov_keep_possessives = parse_bool(key, value)?
            }
            "stopwords" => s.stopwords = Some(PathBuf::from(value)),
            "jobs" => s.jobs = parse_usize(key, value)?,
            _ => {
                return Err(AppError::Config(format!(
                    "{}:{}: unknown key {key:?}",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(s)
}

impl Settings {
    /// Apply command-line overrides on top of file/default values.
    pub fn apply(&mut self, ov: &Overrides) -> Result<(), AppError> {
        if let Some(v) = &ov.edge_weight {
            self.edge_weight = v.clone();
        }
        if let Some(v) = ov.topics {
            self.topics = v;
        }
        if let Some(v) = ov.segment_threshold_chars {
            self.segment_threshold_chars = v;
        }
        if let Some(v) = ov.k_paths {
            self.k_paths = v;
        }
        if let Some(v) = ov.search_depth {
            self.search_depth = v;
        }
        if let Some(v) = ov.min_tokens {
            self.min_tokens = v;
        }
        if ov.no_verb_filter {
            self.require_verb = false;
        }
        if ov.no_pov {
            self.pov = false;
        }
        if ov.pov_keep_possessives {
            self.pov_keep_possessives = true;
        }
        if let Some(v) = &ov.stopwords {
            self.stopwords = Some(v.clone());
        }
        if let Some(v) = ov.jobs {
            if v == 0 {
                return Err(AppError::Config("jobs must be at least 1".to_string()));
            }
            self.jobs = v;
        }
        Ok(())
    }

    pub fn to_pipeline_config(&self) -> Result<PipelineConfig, AppError> {
        let edge_weight_mode: EdgeWeightMode = self
            .edge_weight
            .parse()
            .map_err(|e: dlgsum_core::Error| AppError::Config(e.to_string()))?;
        Ok(PipelineConfig {
            edge_weight_mode,
            topics_p: self.topics,
            segment_threshold_chars: self.segment_threshold_chars,
            search: SearchConfig {
                k_paths: self.k_paths,
                search_depth: self.search_depth,
                min_tokens: self.min_tokens,
                require_verb: self.require_verb,
            },
            pov_enabled: self.pov,
            pov_keep_possessives: self.pov_keep_possessives,
            stopword_path: self.stopwords.clone(),
        })
    }

    /// Render back to the key=value format, suitable for re-running.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("edge_weight = {}\n", self.edge_weight));
        out.push_str(&format!("topics = {}\n", self.topics));
        out.push_str(&format!(
            "segment_threshold_chars = {}\n",
            self.segment_threshold_chars
        ));
        out.push_str(&format!("k_paths = {}\n", self.k_paths));
        out.push_str(&format!("search_depth = {}\n", self.search_depth));
        out.push_str(&format!("min_tokens = {}\n", self.min_tokens));
        out.push_str(&format!("require_verb = {}\n", self.require_verb));
        out.push_str(&format!("pov = {}\n", self.pov));
        out.push_str(&format!(
            "pov_keep_possessives = {}\n",
            self.pov_keep_possessives
        ));
        if let Some(p) = &self.stopwords {
            out.push_str(&format!("stopwords = {}\n", p.display()));
        }
        out.push_str(&format!("jobs = {}\n", self.jobs));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn config_roundtrip() {
        let s = Settings {
            topics: 4,
            jobs: 2,
            ..Settings::default()
        };
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(s.render().as_bytes()).unwrap();
        let back = read_config_file(f.path()).unwrap();
        assert_eq!(back.topics, 4);
        assert_eq!(back.jobs, 2);
        assert_eq!(back.render(), s.render());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# a comment\n\ntopics = 3 # trailing").unwrap();
        assert_eq!(read_config_file(f.path()).unwrap().topics, 3);
    }

    #[test]
    fn unknown_key_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "nonsense = 1").unwrap();
        assert!(matches!(
            read_config_file(f.path()),
            Err(AppError::Config(_))
        ));
    }

    #[test]
    fn overrides_take_precedence() {
        let mut s = Settings::default();
        s.apply(&Overrides {
            topics: Some(2),
            no_pov: true,
            ..Overrides::default()
        })
        .unwrap();
        assert_eq!(s.topics, 2);
        assert!(!s.pov);
    }
}
