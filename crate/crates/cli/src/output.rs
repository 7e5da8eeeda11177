use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::Format;
use crate::config::Settings;
use crate::error::CliError;

/// Writes the artifacts whose format was requested and remembers them.
pub struct Artifacts<'a> {
    settings: &'a Settings,
    pub written: Vec<PathBuf>,
}

impl<'a> Artifacts<'a> {
    pub fn new(settings: &'a Settings) -> Self {
        Self {
            settings,
            written: Vec::new(),
        }
    }

    pub fn text(&mut self, format: Format, name: &str, body: &str) -> Result<(), CliError> {
        if !self.settings.wants(format) {
            return Ok(());
        }
        let dir = &self.settings.out_dir;
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        self.text(Format::Json, name, &to_json(value))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}
