//! `key = value` config files. Each key is a long flag name of the chosen
//! subcommand; entries are spliced in front of the command-line flags so
//! the latter win.

use std::path::Path;

use anyhow::{bail, Context, Result};

/// Flags parsed from a config file, as `--key value` tokens.
pub fn read(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!("line {}: expected `key = value`, got `{line}`", n + 1);
        };
        let key = key.trim().trim_start_matches("--");
        let value = value.trim();
        if key.is_empty() || key == "config" {
            bail!("line {}: invalid key `{key}`", n + 1);
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            v => {
                out.push(format!("--{key}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

/// Splices config flags into `args` right after the subcommand name and
/// drops the `--config` flag itself.
pub fn merge_args(args: Vec<String>) -> Result<Vec<String>> {
    let mut config_path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            match it.next() {
                Some(p) => config_path = Some(p),
                None => bail!("--config needs a file path"),
            }
        } else if let Some(p) = a.strip_prefix("--config=") {
            config_path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config_path else {
        return Ok(rest);
    };
    let extra = read(Path::new(&path))?;
    // position after the program name and the subcommand
    let at = rest.iter().skip(1).position(|a| !a.starts_with('-')).map(|i| i + 2);
    let at = at.unwrap_or(rest.len()).min(rest.len());
    rest.splice(at..at, extra);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_comments_and_switches() {
        let got = parse("# comment\ngeometry = cone\ntheta1=pi/4 # inline\n\nkernel-only = true\njson = false\n").unwrap();
        assert_eq!(got, ["--geometry", "cone", "--theta1", "pi/4", "--kernel-only"]);
        assert!(parse("novalue\n").is_err());
    }
}
