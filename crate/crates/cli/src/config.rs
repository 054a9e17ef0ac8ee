//! TOML config files: one section per subcommand, keys named like the long
//! flags. Top-level keys apply to every subcommand. Entries become flags
//! placed ahead of the command line, so explicit flags win.

use std::ffi::OsString;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::error::{config, Result};

const SUBCOMMANDS: [&str; 5] = ["planewave", "packet", "exact", "barrier-study", "tdse"];

fn config_path(argv: &[OsString]) -> Result<Option<PathBuf>> {
    let mut it = argv.iter().skip(1);
    let mut found = None;
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            let path = it.next().ok_or_else(|| config("--config needs a path"))?;
            found = Some(PathBuf::from(path));
        } else if let Some(rest) = s.strip_prefix("--config=") {
            found = Some(PathBuf::from(rest));
        }
    }
    Ok(found)
}

fn value_args(key: &str, value: &Value, out: &mut Vec<OsString>) -> Result<()> {
    let scalar = |v: &Value| -> Result<String> {
        match v {
            Value::String(s) => Ok(s.clone()),
            Value::Integer(i) => Ok(i.to_string()),
            Value::Float(f) => Ok(f.to_string()),
            other => Err(config(format!("`{key}`: unsupported value {other}"))),
        }
    };
    match value {
        Value::Boolean(true) => out.push(format!("--{key}").into()),
        Value::Boolean(false) => {}
        Value::Array(items) => {
            out.push(format!("--{key}").into());
            for item in items {
                out.push(scalar(item)?.into());
            }
        }
        Value::Table(_) => return Err(config(format!("`{key}`: nested tables are not supported"))),
        v => out.push(format!("--{key}={}", scalar(v)?).into()),
    }
    Ok(())
}

/// Flags for `subcommand` from the parsed file.
pub fn config_args(table: &Table, subcommand: &str) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    let mut push_all = |t: &Table, section: bool| -> Result<()> {
        for (key, value) in t {
            if key == "config" {
                return Err(config("`config` cannot be set from a config file"));
            }
            if value.is_table() && !section {
                if !SUBCOMMANDS.contains(&key.as_str()) {
                    return Err(config(format!("unknown section [{key}]")));
                }
                continue;
            }
            value_args(key, value, &mut out)?;
        }
        Ok(())
    };
    push_all(table, false)?;
    if let Some(section) = table.get(subcommand) {
        let section = section
            .as_table()
            .ok_or_else(|| config(format!("`{subcommand}` must be a section")))?;
        push_all(section, true)?;
    }
    Ok(out)
}

/// Splices config-file flags in after the subcommand name.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let Some(pos) = argv
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map(|p| p + 1)
    else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    let table: Table = text
        .parse()
        .map_err(|e| config(format!("{}: {e}", path.display())))?;
    let extra = config_args(&table, &argv[pos].to_string_lossy())?;
    let mut out = argv[..=pos].to_vec();
    out.extend(extra);
    out.extend_from_slice(&argv[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(v: Vec<OsString>) -> Vec<String> {
        v.into_iter().map(|s| s.into_string().unwrap()).collect()
    }

    #[test]
    fn section_keys_follow_top_level() {
        let t: Table = r#"
            format = "record"
            [exact]
            step = 3
            k0 = 2.0
            sweep = ["sigma", "50:400:4:log"]
            [tdse]
            n = 4096
        "#
        .parse()
        .unwrap();
        assert_eq!(
            strings(config_args(&t, "exact").unwrap()),
            [
                "--format=record",
                "--k0=2",
                "--step=3",
                "--sweep",
                "sigma",
                "50:400:4:log"
            ]
        );
        assert_eq!(
            strings(config_args(&t, "tdse").unwrap()),
            ["--format=record", "--n=4096"]
        );
    }

    #[test]
    fn negative_values_stay_attached() {
        let t: Table = "[tdse]\nx-min = -500.0".parse().unwrap();
        assert_eq!(strings(config_args(&t, "tdse").unwrap()), ["--x-min=-500"]);
    }

    #[test]
    fn rejects_bad_layouts() {
        let t: Table = "[nonsense]\nx = 1".parse().unwrap();
        assert!(config_args(&t, "exact").is_err());
        let t: Table = "[exact]\nconfig = \"a.toml\"".parse().unwrap();
        assert!(config_args(&t, "exact").is_err());
        let t: Table = "[exact.inner]\nx = 1".parse().unwrap();
        assert!(config_args(&t, "exact").is_err());
    }

    #[test]
    fn without_config_argv_is_untouched() {
        let argv: Vec<OsString> = ["wavescatter", "exact", "--k0", "2"]
            .map(OsString::from)
            .to_vec();
        assert_eq!(expand(argv.clone()).unwrap(), argv);
    }
}
