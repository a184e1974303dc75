//! `key=value` defaults file.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Keys are flag names without the leading dashes (`_` and `-` are
//! interchangeable). A key becomes `--key value` on the command line unless
//! the flag was already given there. `true`/`false` toggle switches.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value, got {raw:?}", i + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("line {}: bad key {key:?}", i + 1));
        }
        out.push(Entry { key, value: value.trim().to_string() });
    }
    Ok(out)
}

/// Path named by `--config` in raw arguments.
pub fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
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

fn given(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_eq = format!("{flag}=");
    args.iter().any(|a| *a == flag || a.starts_with(&with_eq))
}

/// Append file defaults for flags absent from `args`.
pub fn merge(mut args: Vec<String>, entries: &[Entry]) -> Vec<String> {
    let explicit = args.clone();
    for e in entries {
        if e.key == "config" || given(&explicit, &e.key) {
            continue;
        }
        match e.value.as_str() {
            "true" => args.push(format!("--{}", e.key)),
            "false" => {}
            v => {
                args.push(format!("--{}", e.key));
                args.push(v.to_string());
            }
        }
    }
    args
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn grammar() {
        let e = parse("# defaults\nc = 11/10\n\nx=1e5   # scale\nweight_mode=log\n").unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e[0], Entry { key: "c".into(), value: "11/10".into() });
        assert_eq!(e[2].key, "weight-mode");
        assert!(parse("novalue\n").is_err());
        assert!(parse("--c=2\n").is_err());
    }

    #[test]
    fn flags_override_file() {
        let entries = parse("c=11/10\ndelta=0.5\njson=true\nthreads=false").unwrap();
        let args = merge(v(&["diocheck", "search2", "--c=23/20"]), &entries);
        assert_eq!(args, v(&["diocheck", "search2", "--c=23/20", "--delta", "0.5", "--json"]));
        assert_eq!(config_path(&v(&["x", "--config", "a.cfg"])), Some("a.cfg".into()));
        assert_eq!(config_path(&v(&["x", "--config=b.cfg"])), Some("b.cfg".into()));
    }
}
