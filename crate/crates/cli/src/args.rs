//! Command-line flags, merged over an optional JSON job file.

use clap::Parser;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Parser)]
#[command(name = "flagbord", version, about = "Flag bundles, coinvariants and formal group laws")]
pub struct Cli {
    /// flag, principal, coinv, fgl or oracle. Overrides the job file.
    pub task: Option<String>,
    /// JSON job file; `-` reads standard input.
    #[arg(long)]
    pub job: Option<String>,
    /// Group type: GL, A, B, C or D.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// Simple-root indices generating the parabolic, e.g. `1,3`.
    #[arg(long, value_delimiter = ',')]
    pub parabolic: Option<Vec<usize>>,
    /// Base generator `name:degree[:weight]`, repeatable.
    #[arg(long = "gen")]
    pub generators: Vec<String>,
    /// Base relation, repeatable.
    #[arg(long = "relation")]
    pub relations: Vec<String>,
    /// Characteristic class `sigma_i=expr`, repeatable.
    #[arg(long = "class")]
    pub classes: Vec<String>,
    /// Character class `name=expr` for principal bundles, repeatable.
    #[arg(long = "character")]
    pub characters: Vec<String>,
    /// standard or dual.
    #[arg(long)]
    pub convention: Option<String>,
    /// Task checked by `oracle`.
    #[arg(long = "of")]
    pub oracle_of: Option<String>,
    /// text or json.
    #[arg(long)]
    pub format: Option<String>,
    /// Truncation degree D.
    #[arg(long)]
    pub truncate: Option<u32>,
    /// chow or cobordism.
    #[arg(long)]
    pub mode: Option<String>,
}

fn split_pair<'a>(flag: &str, s: &'a str) -> Result<(&'a str, &'a str), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("--{flag} expects name=expression, got `{s}`"))
}

fn parse_generator(s: &str) -> Result<Value, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || format!("--gen expects name:degree[:weight], got `{s}`");
    if !(2..=3).contains(&parts.len()) || parts[0].is_empty() {
        return Err(bad());
    }
    let degree: i64 = parts[1].parse().map_err(|_| bad())?;
    let mut g = json!({"name": parts[0], "degree": degree});
    if let Some(w) = parts.get(2) {
        g["weight"] = json!(w.parse::<i64>().map_err(|_| bad())?);
    }
    Ok(g)
}

fn object_mut<'a>(v: &'a mut Map<String, Value>, key: &str) -> Result<&'a mut Map<String, Value>, String> {
    v.entry(key.to_string())
        .or_insert_with(|| json!({}))
        .as_object_mut()
        .ok_or_else(|| format!("/{key} in the job file is not an object"))
}

fn array_mut<'a>(v: &'a mut Map<String, Value>, key: &str, path: &str) -> Result<&'a mut Vec<Value>, String> {
    v.entry(key.to_string())
        .or_insert_with(|| json!([]))
        .as_array_mut()
        .ok_or_else(|| format!("{path} in the job file is not an array"))
}

impl Cli {
    /// Applies the flags on top of `file` (an empty object when absent).
    /// Repeatable flags append; scalar flags replace.
    pub fn merge_into(&self, file: Option<Value>) -> Result<Value, String> {
        let mut root = match file.unwrap_or_else(|| json!({})) {
            Value::Object(m) => m,
            _ => return Err("the job file must contain a JSON object".into()),
        };
        let set = |root: &mut Map<String, Value>, key: &str, v: Option<Value>| {
            if let Some(v) = v {
                root.insert(key.to_string(), v);
            }
        };
        set(&mut root, "task", self.task.clone().map(Value::from));
        set(&mut root, "oracle_of", self.oracle_of.clone().map(Value::from));
        set(&mut root, "mode", self.mode.clone().map(Value::from));
        set(&mut root, "truncation_degree", self.truncate.map(Value::from));
        set(&mut root, "convention", self.convention.clone().map(Value::from));
        set(&mut root, "format", self.format.clone().map(Value::from));
        set(&mut root, "parabolic", self.parabolic.clone().map(Value::from));
        if self.group.is_some() || self.rank.is_some() {
            let g = object_mut(&mut root, "group")?;
            if let Some(t) = &self.group {
                g.insert("type".into(), json!(t));
            }
            if let Some(r) = self.rank {
                g.insert("rank".into(), json!(r));
            }
        }
        let touches_base = !(self.generators.is_empty()
            && self.relations.is_empty()
            && self.classes.is_empty()
            && self.characters.is_empty());
        if touches_base {
            let base = object_mut(&mut root, "base")?;
            for g in &self.generators {
                let g = parse_generator(g)?;
                array_mut(base, "generators", "/base/generators")?.push(g);
            }
            for r in &self.relations {
                array_mut(base, "relations", "/base/relations")?.push(json!(r));
            }
            for c in &self.classes {
                let (k, v) = split_pair("class", c)?;
                object_mut(base, "char_classes")?.insert(k.into(), json!(v));
            }
            for c in &self.characters {
                let (k, v) = split_pair("character", c)?;
                object_mut(base, "characters")?.insert(k.into(), json!(v));
            }
        }
        Ok(Value::Object(root))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("flagbord").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_build_a_job() {
        let v = cli(&[
            "flag", "--group", "GL", "--rank", "2", "--gen", "h:1", "--relation", "h^2",
            "--class", "sigma_1=h", "--class", "sigma_2=0",
        ])
        .merge_into(None)
        .unwrap();
        assert_eq!(
            v,
            json!({
                "task": "flag",
                "group": {"type": "GL", "rank": 2},
                "base": {
                    "generators": [{"name": "h", "degree": 1}],
                    "relations": ["h^2"],
                    "char_classes": {"sigma_1": "h", "sigma_2": "0"}
                }
            })
        );
    }

    #[test]
    fn flags_override_file() {
        let file = json!({"task": "coinv", "group": {"type": "B", "rank": 3}, "mode": "chow"});
        let v = cli(&["--rank", "2", "--mode", "cobordism", "--parabolic", "1,2"])
            .merge_into(Some(file))
            .unwrap();
        assert_eq!(v["group"], json!({"type": "B", "rank": 2}));
        assert_eq!(v["mode"], "cobordism");
        assert_eq!(v["parabolic"], json!([1, 2]));
    }

    #[test]
    fn malformed_flags_are_reported() {
        assert!(cli(&["--gen", "h"]).merge_into(None).is_err());
        assert!(cli(&["--class", "=h"]).merge_into(None).is_err());
        assert!(cli(&["--gen", "h:1:x"]).merge_into(None).is_err());
    }
}
