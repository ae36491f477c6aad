//! TOML defaults for command-line flags.
//!
//! Top-level keys hold global flags (`seed`, `out`, `json`, `verbose`);
//! tables named after a command path (`[sim.run]`, `[gap.check]`, `[toy]`)
//! hold that command's flags. Keys use flag names, with `_` or `-`. Values
//! become `--key value` tokens placed right after the command path, so flags
//! typed on the command line override them.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

use toml::{Table, Value};

use crate::error::CliError;

const COMMANDS: [&str; 7] = ["pda", "sim", "audit", "curves", "bounds", "gap", "toy"];
const GLOBAL_VALUE_FLAGS: [&str; 3] = ["--out", "--seed", "--config"];

/// Path of the config file given by `--config`, if any.
fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Index just past the command path, and the path itself.
fn command_path(args: &[OsString]) -> (usize, Vec<String>) {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if COMMANDS.contains(&s.as_ref()) {
            let mut path = vec![s.to_string()];
            i += 1;
            if path[0] != "toy" {
                if let Some(sub) = args.get(i).map(|a| a.to_string_lossy().to_string()) {
                    if !sub.starts_with('-') {
                        path.push(sub);
                        i += 1;
                    }
                }
            }
            return (i, path);
        }
        i += if GLOBAL_VALUE_FLAGS.contains(&s.as_ref()) { 2 } else { 1 };
    }
    (args.len(), Vec::new())
}

fn flag_tokens(key: &str, value: &Value) -> Result<Vec<OsString>, CliError> {
    let flag = format!("--{}", key.replace('_', "-"));
    let scalar = |v: &Value| -> Result<String, CliError> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Integer(i) => Ok(i.to_string()),
            Value::Float(f) => Ok(f.to_string()),
            _ => Err(CliError::Usage(format!("config key {key}: unsupported value {v}"))),
        }
    };
    Ok(match value {
        Value::Boolean(true) => vec![flag.into()],
        Value::Boolean(false) => Vec::new(),
        Value::Array(items) => {
            let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
            vec![flag.into(), parts.join(",").into()]
        }
        Value::Table(_) => Vec::new(),
        v => vec![flag.into(), scalar(v)?.into()],
    })
}

fn load(path: &Path) -> Result<Table, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    text.parse::<Table>().map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// `args` with the config file's defaults spliced in.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let table = load(Path::new(&path))?;
    let (at, cmd) = command_path(&args);
    if cmd.is_empty() {
        return Ok(args);
    }
    let mut extra = Vec::new();
    for (key, value) in &table {
        if key != "config" && !COMMANDS.contains(&key.as_str()) {
            extra.extend(flag_tokens(key, value)?);
        }
    }
    let mut section = Some(&table);
    for name in &cmd {
        section = section.and_then(|t| t.get(name)).and_then(Value::as_table);
    }
    if let Some(section) = section {
        for (key, value) in section {
            extra.extend(flag_tokens(key, value)?);
        }
    }
    let mut out = args[..at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_command_path() {
        assert_eq!(command_path(&os(&["splfr", "--seed", "3", "sim", "run", "--n", "2"])), (5, vec!["sim".into(), "run".into()]));
        assert_eq!(command_path(&os(&["splfr", "toy", "--json"])), (2, vec!["toy".into()]));
        assert_eq!(command_path(&os(&["splfr", "--json"])).1, Vec::<String>::new());
    }

    #[test]
    fn splices_defaults() {
        let dir = std::env::temp_dir().join(format!("splfr-config-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.toml");
        fs::write(&path, "seed = 9\njson = true\n[sim.run]\nn = 4\nfield = \"p:3\"\n[gap.check]\nn = 7\n").unwrap();
        let args = os(&["splfr", "--config", path.to_str().unwrap(), "sim", "run", "--n", "5"]);
        let got: Vec<String> = expand(args).unwrap().into_iter().map(|s| s.into_string().unwrap()).collect();
        let tail = &got[5..];
        assert!(tail.windows(2).any(|w| w == ["--seed", "9"]));
        assert!(tail.contains(&"--json".to_string()));
        assert!(tail.windows(2).any(|w| w == ["--field", "p:3"]));
        assert_eq!(&got[got.len() - 2..], ["--n", "5"]);
        assert!(!tail.contains(&"7".to_string()));
        fs::remove_dir_all(dir).unwrap();
    }
}
