//! Flat `key = value` text files.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored. Keys are
//! case-sensitive. Both `=` and `:` are accepted as separators.

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub value: String,
    pub line: usize,
}

/// Parsed key-value document; remembers where it came from for diagnostics.
#[derive(Debug, Clone, Default)]
pub struct KvFile {
    pub source_name: String,
    entries: BTreeMap<String, Entry>,
}

impl KvFile {
    pub fn parse(source_name: &str, text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let sep = content.find(['=', ':']).ok_or_else(|| Error::Parse {
                source_name: source_name.to_string(),
                line,
                message: format!("expected `key = value`, got `{content}`"),
            })?;
            let key = content[..sep].trim();
            let value = content[sep + 1..].trim();
            if key.is_empty() {
                return Err(Error::Parse {
                    source_name: source_name.to_string(),
                    line,
                    message: "empty key".into(),
                });
            }
            let prev = entries.insert(
                key.to_string(),
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
            if let Some(prev) = prev {
                return Err(Error::Parse {
                    source_name: source_name.to_string(),
                    line,
                    message: format!("duplicate key `{key}` (first set on line {})", prev.line),
                });
            }
        }
        Ok(KvFile {
            source_name: source_name.to_string(),
            entries,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&path.display().to_string(), &text)
    }

    /// Fails on the first key not in `allowed`.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        for (key, entry) in &self.entries {
            if !allowed.contains(&key.as_str()) {
                return Err(Error::UnknownKey {
                    source_name: self.source_name.clone(),
                    line: entry.line,
                    key: key.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    pub fn require_str(&self, key: &str) -> Result<&str> {
        self.get_str(key).ok_or_else(|| Error::MissingKey {
            source_name: self.source_name.clone(),
            key: key.to_string(),
        })
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        let v: f64 = entry.value.parse().map_err(|_| Error::Parse {
            source_name: self.source_name.clone(),
            line: entry.line,
            message: format!("`{key}`: `{}` is not a number", entry.value),
        })?;
        if !v.is_finite() {
            return Err(Error::Parse {
                source_name: self.source_name.clone(),
                line: entry.line,
                message: format!("`{key}`: value must be finite"),
            });
        }
        Ok(Some(v))
    }

    pub fn require_f64(&self, key: &str) -> Result<f64> {
        self.get_f64(key)?.ok_or_else(|| Error::MissingKey {
            source_name: self.source_name.clone(),
            key: key.to_string(),
        })
    }

    pub fn get_usize(&self, key: &str) -> Result<Option<usize>> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        entry.value.parse().map(Some).map_err(|_| Error::Parse {
            source_name: self.source_name.clone(),
            line: entry.line,
            message: format!("`{key}`: `{}` is not a non-negative integer", entry.value),
        })
    }

    /// Comma-separated list of reals.
    pub fn get_f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some(entry) = self.entries.get(key) else {
            return Ok(None);
        };
        entry
            .value
            .split(',')
            .map(|s| {
                s.trim().parse::<f64>().map_err(|_| Error::Parse {
                    source_name: self.source_name.clone(),
                    line: entry.line,
                    message: format!("`{key}`: `{}` is not a number", s.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    pub fn line_of(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.line)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_scientific_notation() {
        let kv = KvFile::parse("t", "# header\nG = 6.67e-11 # trailing\n\nhbar: 1.05E-34\n").unwrap();
        assert_eq!(kv.require_f64("G").unwrap(), 6.67e-11);
        assert_eq!(kv.require_f64("hbar").unwrap(), 1.05e-34);
        assert_eq!(kv.line_of("hbar"), Some(4));
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(matches!(
            KvFile::parse("t", "a = 1\na = 2"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            KvFile::parse("t", "just words"),
            Err(Error::Parse { line: 1, .. })
        ));
        let kv = KvFile::parse("t", "a = x").unwrap();
        assert!(kv.get_f64("a").is_err());
        assert!(KvFile::parse("t", "a = inf").unwrap().get_f64("a").is_err());
    }

    #[test]
    fn unknown_key_names_the_key() {
        let kv = KvFile::parse("cfg", "a = 1\nbogus = 2").unwrap();
        let err = kv.reject_unknown(&["a"]).unwrap_err();
        assert_eq!(
            err,
            Error::UnknownKey {
                source_name: "cfg".into(),
                line: 2,
                key: "bogus".into()
            }
        );
    }

    #[test]
    fn lists() {
        let kv = KvFile::parse("t", "e = 0.1, 0.2056,0.5").unwrap();
        assert_eq!(kv.get_f64_list("e").unwrap().unwrap(), vec![0.1, 0.2056, 0.5]);
    }
}
