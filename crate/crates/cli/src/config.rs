//! `--config FILE` support: `key = value` lines supply defaults for flags that
//! were not given on the command line.

use std::path::Path;

use clap::{ArgAction, Command};

#[derive(Debug, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

/// Parses `key = value` (or `key value`) lines; `#` starts a comment.
pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => match line.split_once(char::is_whitespace) {
                Some((k, v)) => (k.trim(), v.trim()),
                None => (line, "true"),
            },
        };
        let key = key.trim_start_matches('-');
        if key.is_empty() {
            return Err(format!("line {}: missing key", no + 1));
        }
        out.push(Entry {
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}

fn config_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// The deepest subcommand named on the command line.
fn leaf<'a>(mut cmd: &'a Command, argv: &[String]) -> &'a Command {
    for a in argv.iter().skip(1) {
        if let Some(sub) = cmd.find_subcommand(a) {
            cmd = sub;
        }
    }
    cmd
}

fn given(argv: &[String], long: &str) -> bool {
    let flag = format!("--{long}");
    argv.iter()
        .any(|a| *a == flag || a.starts_with(&format!("{flag}=")))
}

/// Appends config defaults to `argv`. Keys that the invoked command does not
/// know are reported on stderr and skipped.
pub fn inject(root: &Command, argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(Path::new(&path))
        .map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse(&text).map_err(|e| format!("{path}: {e}"))?;
    let mut root = root.clone();
    root.build();
    let cmd = leaf(&root, &argv);
    let mut out = argv.clone();
    for e in entries {
        let Some(arg) = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()))
        else {
            eprintln!(
                "warning: config key `{}` is not an option of `{}`; ignored",
                e.key,
                cmd.get_name()
            );
            continue;
        };
        if e.key == "config" || given(&argv, &e.key) {
            continue;
        }
        match arg.get_action() {
            ArgAction::SetTrue => match e.value.as_str() {
                "true" | "1" | "yes" => out.push(format!("--{}", e.key)),
                "false" | "0" | "no" => {}
                v => return Err(format!("{path}: `{}` expects true/false, got `{v}`", e.key)),
            },
            _ => out.push(format!("--{}={}", e.key, e.value)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_separators_and_comments() {
        let e = parse("# defaults\nseed = 7\n--samples 100 # trailing\nstdout\n\n").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(
            e[0],
            Entry {
                key: "seed".into(),
                value: "7".into()
            }
        );
        assert_eq!(
            e[1],
            Entry {
                key: "samples".into(),
                value: "100".into()
            }
        );
        assert_eq!(
            e[2],
            Entry {
                key: "stdout".into(),
                value: "true".into()
            }
        );
    }

    #[test]
    fn rejects_empty_key() {
        assert!(parse("= 3").is_err());
    }
}
