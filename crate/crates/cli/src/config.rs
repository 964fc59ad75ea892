//! Flat `key = value` job files. Keys mirror the long flag names; `#` starts
//! a comment line.

use std::collections::BTreeMap;
use std::path::Path;

pub type Settings = BTreeMap<String, String>;

pub fn parse(text: &str) -> Result<Settings, String> {
    let mut out = Settings::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(format!("config line {}: empty key", n + 1));
        }
        let v = v.trim();
        let v = v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v);
        out.insert(key, v.to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Settings, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse(&text)
}

/// Config values overlaid by explicitly given flags.
pub fn merge(config: Settings, flags: Settings) -> Settings {
    let mut out = config;
    out.extend(flags);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_merges() {
        let c = parse("# job\nfield = \"5,0,1\"\ntarget_n=2\n\n--g = 3\n").unwrap();
        assert_eq!(c["field"], "5,0,1");
        assert_eq!(c["target-n"], "2");
        assert_eq!(c["g"], "3");
        let m = merge(c, Settings::from([("g".to_string(), "1".to_string())]));
        assert_eq!(m["g"], "1");
        assert!(parse("novalue").is_err());
    }
}
