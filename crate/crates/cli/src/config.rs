//! Flat `key = value` config files.
//!
//! Each entry becomes a `--key=value` token placed directly after the
//! subcommand, so flags given on the command line, which come later,
//! take precedence. `true` turns on a switch and `false` leaves it off.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

pub fn parse(text: &str, origin: &Path) -> Result<Vec<OsString>, String> {
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("{}:{}: expected 'key = value'", origin.display(), i + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(format!("{}:{}: bad key '{key}'", origin.display(), i + 1));
        }
        if key == "config" {
            return Err(format!("{}:{}: config files cannot nest", origin.display(), i + 1));
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            "true" => tokens.push(OsString::from(flag)),
            "false" => {}
            v => tokens.push(OsString::from(format!("{flag}={v}"))),
        }
    }
    Ok(tokens)
}

/// Splices the file named by `--config` into `args`.
pub fn overlay(args: Vec<OsString>, subcommands: &[String]) -> Result<Vec<OsString>, String> {
    let Some(sub) = args
        .iter()
        .skip(1)
        .position(|a| subcommands.iter().any(|s| a.to_str() == Some(s)))
        .map(|i| i + 1)
    else {
        return Ok(args);
    };
    let mut path = None;
    let mut it = args[sub + 1..].iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--") => break,
            Some("--config") => path = it.next().cloned(),
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => {}
        }
    }
    let Some(path) = path else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let tokens = parse(&text, path)?;
    let mut out = args[..=sub].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&args[sub + 1..]);
    Ok(out)
}
