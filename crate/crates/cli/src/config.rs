//! `--config FILE`: `key = value` lines, spliced in front of the command-line
//! flags so that explicit flags win.

use std::ffi::OsString;

use anyhow::{bail, Context};

pub fn expand(argv: Vec<OsString>) -> anyhow::Result<Vec<OsString>> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        match a.to_str() {
            Some("--config") => {
                let Some(p) = it.next() else {
                    bail!("--config needs a path");
                };
                path = Some(p);
            }
            Some(s) if s.starts_with("--config=") => path = Some(OsString::from(&s["--config=".len()..])),
            _ => rest.push(a),
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("reading config {}", path.to_string_lossy()))?;
    let flags = parse(&text)?;
    // program name, then the subcommand, then config flags
    let at = rest.len().min(2);
    rest.splice(at..at, flags);
    Ok(rest)
}

fn parse(text: &str) -> anyhow::Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected `key = value`", n + 1);
        };
        let (k, v) = (k.trim().replace('_', "-"), v.trim());
        if k.is_empty() {
            bail!("config line {}: empty key", n + 1);
        }
        match v {
            "true" => out.push(format!("--{k}").into()),
            "false" => {}
            _ => out.push(format!("--{k}={v}").into()),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn lines_become_flags() {
        let f = parse("# comment\nres = 50\n\nexact = true\nnumeric = false\nx_min = -1 # trailing\n").unwrap();
        assert_eq!(f, os(&["--res=50", "--exact", "--x-min=-1"]));
        assert!(parse("oops").is_err());
    }

    #[test]
    fn config_flags_precede_explicit_ones() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.conf");
        std::fs::write(&p, "res = 10\n").unwrap();
        let argv = os(&["specpoint", "classify", "--res", "20", "--config", p.to_str().unwrap()]);
        let out = expand(argv).unwrap();
        assert_eq!(out, os(&["specpoint", "classify", "--res=10", "--res", "20"]));
    }
}
