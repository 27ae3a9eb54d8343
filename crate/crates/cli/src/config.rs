//! `key = value` run configuration merged underneath the command line.
//!
//! ```text
//! # tail study
//! command = mc tail
//! q = 2
//! n = 10000
//! z = 1 2 3 4
//! ```
//!
//! Keys are the long flag names of the selected subcommand. A value with
//! several whitespace-separated words supplies a multi-valued flag. Flags
//! given on the command line win over the file.

use std::path::Path;

use clap::Command;

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub values: Vec<String>,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, CliError> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Parse(format!("config line {}: expected `key = value`", i + 1)))?;
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() {
            return Err(CliError::Parse(format!("config line {}: empty key", i + 1)));
        }
        if out.iter().any(|e| e.key == key) {
            return Err(CliError::Parse(format!("config line {}: duplicate key {key:?}", i + 1)));
        }
        out.push(Entry { line: i + 1, key, values: value.split_whitespace().map(String::from).collect() });
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<Vec<Entry>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Removes `--config PATH` (or `--config=PATH`) from `args`.
pub fn take_config_flag(args: &mut Vec<String>) -> Result<Option<String>, CliError> {
    let Some(pos) = args.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(None);
    };
    let flag = args.remove(pos);
    if let Some(v) = flag.strip_prefix("--config=") {
        return Ok(Some(v.to_string()));
    }
    if pos < args.len() {
        Ok(Some(args.remove(pos)))
    } else {
        Err(CliError::Usage("--config needs a file path".into()))
    }
}

/// Leading tokens of `args` (after the program name) that name nested
/// subcommands of `root`.
fn command_path(root: &Command, args: &[String]) -> Vec<String> {
    let mut cmd = root;
    let mut path = Vec::new();
    for a in args.iter().skip(1) {
        match cmd.find_subcommand(a) {
            Some(sub) => {
                path.push(a.clone());
                cmd = sub;
            }
            None => break,
        }
    }
    path
}

fn leaf<'a>(root: &'a Command, path: &[String]) -> &'a Command {
    path.iter().fold(root, |c, name| c.find_subcommand(name).expect("path was resolved against this command"))
}

/// Rewrites `args` so that config entries not already given on the command
/// line become flags of the selected subcommand.
pub fn merge(root: &Command, mut args: Vec<String>, entries: &[Entry]) -> Result<Vec<String>, CliError> {
    let mut path = command_path(root, &args);
    if let Some(c) = entries.iter().find(|e| e.key == "command") {
        if path.is_empty() {
            args.splice(1..1, c.values.iter().cloned());
            path = command_path(root, &args);
            if path.len() != c.values.len() {
                return Err(CliError::Usage(format!("config line {}: unknown command {:?}", c.line, c.values.join(" "))));
            }
        }
    }
    let cmd = leaf(root, &path);
    for e in entries.iter().filter(|e| e.key != "command") {
        let arg = cmd
            .get_arguments()
            .find(|a| a.get_long() == Some(e.key.as_str()))
            .ok_or_else(|| CliError::Usage(format!("config line {}: unknown key {:?} for this command", e.line, e.key)))?;
        let flag = format!("--{}", e.key);
        let given = args.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        if arg.get_action().takes_values() {
            args.push(flag);
            args.extend(e.values.iter().cloned());
        } else {
            match e.values.as_slice() {
                [v] if v == "true" => args.push(flag),
                [v] if v == "false" => {}
                _ => return Err(CliError::Usage(format!("config line {}: {:?} expects true or false", e.line, e.key))),
            }
        }
    }
    Ok(args)
}
