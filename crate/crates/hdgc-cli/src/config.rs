//! Optional TOML defaults file: `[test]`, `[network]`, `[simulate]`,
//! `[lagselect]`, `[montecarlo]` sections plus top-level keys. Values are
//! consulted only for flags the user did not pass.

use hdgc::pds::TestVariant;
use std::path::Path;

#[derive(Default)]
pub struct FileDefaults {
    root: Option<toml::Value>,
}

pub struct Section<'a> {
    table: Option<&'a toml::value::Table>,
}

impl FileDefaults {
    pub fn load(path: &Path) -> hdgc::Result<FileDefaults> {
        let text = std::fs::read_to_string(path)?;
        let root: toml::Value = text.parse().map_err(|e| hdgc::Error::ParseError {
            line: 0,
            msg: format!("bad TOML config: {e}"),
        })?;
        Ok(FileDefaults { root: Some(root) })
    }

    pub fn section(&self, name: &str) -> Section<'_> {
        Section {
            table: self
                .root
                .as_ref()
                .and_then(|r| r.get(name))
                .and_then(|v| v.as_table()),
        }
    }

    pub fn usize_value(&self, key: &str) -> Option<usize> {
        self.root
            .as_ref()
            .and_then(|r| r.get(key))
            .and_then(|v| v.as_integer())
            .and_then(|v| usize::try_from(v).ok())
    }
}

impl Section<'_> {
    fn get(&self, key: &str) -> Option<&toml::Value> {
        self.table.and_then(|t| t.get(key))
    }

    pub fn usize_value(&self, key: &str) -> Option<usize> {
        self.get(key)
            .and_then(|v| v.as_integer())
            .and_then(|v| usize::try_from(v).ok())
    }

    pub fn u64_value(&self, key: &str) -> Option<u64> {
        self.get(key)
            .and_then(|v| v.as_integer())
            .and_then(|v| u64::try_from(v).ok())
    }

    pub fn f64_value(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| match v {
            toml::Value::Float(f) => Some(*f),
            toml::Value::Integer(i) => Some(*i as f64),
            _ => None,
        })
    }

    pub fn bool_value(&self, key: &str) -> Option<bool> {
        self.get(key).and_then(|v| v.as_bool())
    }

    pub fn string_value(&self, key: &str) -> Option<String> {
        self.get(key).and_then(|v| v.as_str()).map(str::to_string)
    }

    pub fn variant_value(&self, key: &str) -> Option<TestVariant> {
        match self.string_value(key).as_deref() {
            Some("lm-f") => Some(TestVariant::LmF),
            Some("lm-chi2") => Some(TestVariant::LmChi2),
            Some("wald") => Some(TestVariant::Wald),
            _ => None,
        }
    }
}
