//! Job files: parsing, validation and serialization.
//!
//! Validation walks the raw JSON value so that every problem is reported at
//! once, each with the JSON pointer of the offending field.

use std::collections::BTreeMap;
use std::fmt;

use flagbord_core::bundle::{base_table, Convention, Generator, Mode};
use flagbord_core::poly::{parse_polynomial, VariableTable};
use flagbord_core::weyl::{check_supported, invariant_degrees, simple_root_count, GroupType};
use serde::Serialize;
use serde_json::{Map, Value};

pub const DEFAULT_TRUNCATION: u32 = 6;
pub const MAX_TRUNCATION: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Flag,
    Principal,
    Coinv,
    Fgl,
    Oracle,
}

impl Task {
    pub fn parse(s: &str) -> Option<Task> {
        match s {
            "flag" => Some(Task::Flag),
            "principal" => Some(Task::Principal),
            "coinv" => Some(Task::Coinv),
            "fgl" => Some(Task::Fgl),
            "oracle" => Some(Task::Oracle),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Task::Flag => "flag",
            Task::Principal => "principal",
            Task::Coinv => "coinv",
            Task::Fgl => "fgl",
            Task::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub kind: String,
    pub rank: usize,
}

impl GroupSpec {
    pub fn group_type(&self) -> GroupType {
        self.kind.parse().expect("validated group type")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct BaseSpec {
    pub generators: Vec<GeneratorSpec>,
    pub relations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub char_classes: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub characters: Option<BTreeMap<String, String>>,
}

impl BaseSpec {
    pub fn generators(&self) -> Vec<Generator> {
        self.generators
            .iter()
            .map(|g| Generator::with_weight(g.name.clone(), g.degree, g.weight.unwrap_or(0)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Job {
    pub task: Task,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_of: Option<Task>,
    #[serde(serialize_with = "ser_mode")]
    pub mode: Mode,
    pub truncation_degree: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSpec>,
    pub parabolic: Vec<usize>,
    pub base: BaseSpec,
    #[serde(serialize_with = "ser_convention")]
    pub convention: Convention,
    pub format: Format,
}

fn ser_mode<S: serde::Serializer>(m: &Mode, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(m.as_str())
}

fn ser_convention<S: serde::Serializer>(c: &Convention, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.as_str())
}

impl Job {
    /// The task whose numbers are computed (the checked task for `oracle`).
    pub fn effective_task(&self) -> Task {
        match self.task {
            Task::Oracle => self.oracle_of.unwrap_or(Task::Coinv),
            t => t,
        }
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("job serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("job serializes")
    }
}

/// One validation problem at a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path = if self.path.is_empty() { "/" } else { &self.path };
        write!(f, "{path}: {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&lines.join("\n"))
    }
}

impl std::error::Error for ValidationErrors {}

struct Collector {
    errors: Vec<ValidationError>,
}

impl Collector {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ValidationError {
            path: path.into(),
            message: message.into(),
        });
    }

    fn check_keys(&mut self, obj: &Map<String, Value>, path: &str, allowed: &[&str]) {
        for key in obj.keys() {
            if !allowed.contains(&key.as_str()) {
                self.push(
                    format!("{path}/{key}"),
                    format!("unknown field `{key}` (allowed: {})", allowed.join(", ")),
                );
            }
        }
    }

    fn string<'a>(&mut self, v: &'a Value, path: &str) -> Option<&'a str> {
        match v.as_str() {
            Some(s) => Some(s),
            None => {
                self.push(path, "expected a string");
                None
            }
        }
    }

    fn int(&mut self, v: &Value, path: &str) -> Option<i64> {
        match v.as_i64() {
            Some(n) => Some(n),
            None => {
                self.push(path, "expected an integer");
                None
            }
        }
    }

    fn choice<T>(&mut self, v: Option<&Value>, path: &str, default: T, options: &[(&str, T)]) -> T
    where
        T: Copy,
    {
        let Some(v) = v else { return default };
        let Some(s) = self.string(v, path) else { return default };
        match options.iter().find(|(name, _)| *name == s) {
            Some((_, t)) => *t,
            None => {
                let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                self.push(path, format!("unknown value `{s}` (expected one of {})", names.join(", ")));
                default
            }
        }
    }
}

const TASKS: [(&str, Task); 5] = [
    ("flag", Task::Flag),
    ("principal", Task::Principal),
    ("coinv", Task::Coinv),
    ("fgl", Task::Fgl),
    ("oracle", Task::Oracle),
];

/// Parses and validates a job from JSON text.
pub fn parse_job(text: &str) -> Result<Job, ValidationErrors> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        ValidationErrors(vec![ValidationError {
            path: String::new(),
            message: format!("malformed JSON: {e}"),
        }])
    })?;
    parse_job_value(&value)
}

/// Validates an already-decoded JSON value.
pub fn parse_job_value(value: &Value) -> Result<Job, ValidationErrors> {
    let mut c = Collector { errors: Vec::new() };
    let Some(obj) = value.as_object() else {
        c.push("", "a job must be a JSON object");
        return Err(ValidationErrors(c.errors));
    };
    c.check_keys(
        obj,
        "",
        &[
            "task",
            "oracle_of",
            "mode",
            "truncation_degree",
            "group",
            "parabolic",
            "base",
            "convention",
            "format",
        ],
    );

    let task = match obj.get("task") {
        None => {
            c.push("/task", "missing required field");
            None
        }
        Some(v) => {
            let t = c.choice(Some(v), "/task", None, &TASKS.map(|(n, t)| (n, Some(t))));
            t
        }
    };
    let oracle_of = match obj.get("oracle_of") {
        None => None,
        Some(v) => {
            let opts = [
                ("flag", Some(Task::Flag)),
                ("principal", Some(Task::Principal)),
                ("coinv", Some(Task::Coinv)),
                ("fgl", Some(Task::Fgl)),
            ];
            c.choice(Some(v), "/oracle_of", None, &opts)
        }
    };
    if oracle_of.is_some() && task.is_some() && task != Some(Task::Oracle) {
        c.push("/oracle_of", "only meaningful when task is `oracle`");
    }
    if task == Some(Task::Oracle) && oracle_of.is_none() && obj.get("oracle_of").is_none() {
        c.push("/oracle_of", "required when task is `oracle` (flag, principal, coinv or fgl)");
    }

    let mode = c.choice(
        obj.get("mode"),
        "/mode",
        Mode::Chow,
        &[("chow", Mode::Chow), ("cobordism", Mode::Cobordism)],
    );
    let convention = c.choice(
        obj.get("convention"),
        "/convention",
        Convention::Standard,
        &[("standard", Convention::Standard), ("dual", Convention::Dual)],
    );
    let format = c.choice(
        obj.get("format"),
        "/format",
        Format::Text,
        &[("text", Format::Text), ("json", Format::Json)],
    );

    let mut truncation = DEFAULT_TRUNCATION;
    if let Some(v) = obj.get("truncation_degree") {
        if let Some(n) = c.int(v, "/truncation_degree") {
            if n < 1 || n > MAX_TRUNCATION as i64 {
                c.push(
                    "/truncation_degree",
                    format!("must lie in 1..={MAX_TRUNCATION}, got {n}"),
                );
            } else {
                truncation = n as u32;
            }
        }
    }

    let effective = match task {
        Some(Task::Oracle) => oracle_of,
        t => t,
    };

    let group = parse_group(&mut c, obj.get("group"));
    let needs_group = matches!(effective, Some(Task::Flag | Task::Coinv));
    if needs_group && obj.get("group").is_none() {
        c.push("/group", "missing required field for this task");
    }

    let mut parabolic = Vec::new();
    if let Some(v) = obj.get("parabolic") {
        match v.as_array() {
            None => c.push("/parabolic", "expected an array of simple-root indices"),
            Some(items) => {
                let limit = group
                    .as_ref()
                    .map(|g| simple_root_count(g.group_type(), g.rank));
                for (k, item) in items.iter().enumerate() {
                    let path = format!("/parabolic/{k}");
                    if let Some(n) = c.int(item, &path) {
                        match limit {
                            _ if n < 1 => c.push(&path, format!("index {n} must be at least 1")),
                            Some(l) if n as usize > l => c.push(
                                &path,
                                format!("index {n} exceeds the number of simple roots ({l})"),
                            ),
                            _ => {
                                if parabolic.contains(&(n as usize)) {
                                    c.push(&path, format!("index {n} is repeated"));
                                } else {
                                    parabolic.push(n as usize);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    let base = parse_base(&mut c, obj.get("base"), mode, truncation, group.as_ref(), effective);

    if !c.errors.is_empty() {
        return Err(ValidationErrors(c.errors));
    }
    Ok(Job {
        task: task.expect("validated"),
        oracle_of,
        mode,
        truncation_degree: truncation,
        group,
        parabolic,
        base,
        convention,
        format,
    })
}

fn parse_group(c: &mut Collector, v: Option<&Value>) -> Option<GroupSpec> {
    let v = v?;
    let Some(obj) = v.as_object() else {
        c.push("/group", "expected an object {\"type\", \"rank\"}");
        return None;
    };
    c.check_keys(obj, "/group", &["type", "rank"]);
    let kind = match obj.get("type") {
        None => {
            c.push("/group/type", "missing required field");
            None
        }
        Some(t) => c.string(t, "/group/type").and_then(|s| match s.parse::<GroupType>() {
            Ok(_) => Some(s.to_string()),
            Err(_) => {
                c.push("/group/type", format!("unknown group type `{s}` (GL, A, B, C, D, G2)"));
                None
            }
        }),
    };
    let rank = match obj.get("rank") {
        None => {
            c.push("/group/rank", "missing required field");
            None
        }
        Some(r) => c.int(r, "/group/rank").and_then(|n| {
            if n < 1 {
                c.push("/group/rank", format!("rank must be positive, got {n}"));
                None
            } else {
                Some(n as usize)
            }
        }),
    };
    let (kind, rank) = (kind?, rank?);
    if let Err(e) = check_supported(kind.parse().expect("checked"), rank) {
        c.push("/group", e.to_string());
        return None;
    }
    Some(GroupSpec { kind, rank })
}

fn parse_base(
    c: &mut Collector,
    v: Option<&Value>,
    mode: Mode,
    truncation: u32,
    group: Option<&GroupSpec>,
    task: Option<Task>,
) -> BaseSpec {
    let mut base = BaseSpec::default();
    let Some(v) = v else {
        return base;
    };
    let Some(obj) = v.as_object() else {
        c.push("/base", "expected an object");
        return base;
    };
    c.check_keys(obj, "/base", &["generators", "relations", "char_classes", "characters"]);

    if let Some(gens) = obj.get("generators") {
        match gens.as_array() {
            None => c.push("/base/generators", "expected an array"),
            Some(items) => {
                for (k, item) in items.iter().enumerate() {
                    let path = format!("/base/generators/{k}");
                    let Some(g) = item.as_object() else {
                        c.push(&path, "expected an object {\"name\", \"degree\", \"weight\"?}");
                        continue;
                    };
                    c.check_keys(g, &path, &["name", "degree", "weight"]);
                    let name = match g.get("name") {
                        None => {
                            c.push(format!("{path}/name"), "missing required field");
                            None
                        }
                        Some(n) => c.string(n, &format!("{path}/name")).map(str::to_string),
                    };
                    let degree = match g.get("degree") {
                        None => {
                            c.push(format!("{path}/degree"), "missing required field");
                            None
                        }
                        Some(d) => c.int(d, &format!("{path}/degree")),
                    };
                    let weight = g.get("weight").and_then(|w| c.int(w, &format!("{path}/weight")));
                    if let Some(d) = degree {
                        if d < 1 {
                            c.push(format!("{path}/degree"), format!("degree must be positive, got {d}"));
                        }
                    }
                    if let Some(n) = &name {
                        let reserved = n.starts_with('x') && n[1..].parse::<usize>().is_ok()
                            || n.starts_with('b') && n[1..].parse::<usize>().is_ok();
                        if reserved {
                            c.push(
                                format!("{path}/name"),
                                format!("`{n}` is reserved (x<i> are torus classes, b<i> Lazard generators)"),
                            );
                        }
                        if base.generators.iter().any(|e| &e.name == n) {
                            c.push(format!("{path}/name"), format!("duplicate generator `{n}`"));
                        }
                    }
                    if let (Some(name), Some(degree)) = (name, degree) {
                        base.generators.push(GeneratorSpec {
                            name,
                            degree: degree as i32,
                            weight: weight.map(|w| w as i32),
                        });
                    }
                }
            }
        }
    }

    let table = base_table(mode, truncation, &base.generators()).ok();
    let check_expr = |c: &mut Collector, text: &str, path: &str| -> Option<Option<i32>> {
        let table: &std::sync::Arc<VariableTable> = table.as_ref()?;
        match parse_polynomial(text, table) {
            Err(e) => {
                c.push(path, format!("cannot parse `{text}`: {e}"));
                None
            }
            Ok(p) if p.is_zero() => Some(None),
            Ok(p) => match p.homogeneous_degree() {
                Some(d) => Some(Some(d)),
                None => {
                    c.push(path, format!("`{text}` is not homogeneous"));
                    None
                }
            },
        }
    };

    if let Some(rels) = obj.get("relations") {
        match rels.as_array() {
            None => c.push("/base/relations", "expected an array of expressions"),
            Some(items) => {
                for (k, item) in items.iter().enumerate() {
                    let path = format!("/base/relations/{k}");
                    if let Some(s) = c.string(item, &path) {
                        check_expr(c, s, &path);
                        base.relations.push(s.to_string());
                    }
                }
            }
        }
    }

    if let Some(classes) = obj.get("char_classes") {
        match classes.as_object() {
            None => c.push("/base/char_classes", "expected an object {\"sigma_i\": expr}"),
            Some(map) => {
                let degrees = group.map(|g| invariant_degrees(g.group_type(), g.rank));
                let mut out = BTreeMap::new();
                for (key, val) in map {
                    let path = format!("/base/char_classes/{key}");
                    let index = key
                        .strip_prefix("sigma_")
                        .and_then(|s| s.parse::<usize>().ok())
                        .filter(|i| *i >= 1);
                    let Some(i) = index else {
                        c.push(&path, format!("unknown key `{key}` (expected sigma_1, sigma_2, …)"));
                        continue;
                    };
                    let Some(s) = c.string(val, &path) else { continue };
                    out.insert(key.clone(), s.to_string());
                    let Some(deg) = check_expr(c, s, &path) else { continue };
                    if let Some(ds) = &degrees {
                        match ds.get(i - 1) {
                            None => c.push(&path, format!("sigma_{i} does not exist: the group has {} fundamental invariants", ds.len())),
                            Some(&want) => {
                                if let Some(d) = deg {
                                    if d != want as i32 {
                                        c.push(
                                            &path,
                                            format!("sigma_{i} has degree {want}, but the class `{s}` has degree {d}"),
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
                if let Some(ds) = &degrees {
                    for i in 1..=ds.len() {
                        if !out.contains_key(&format!("sigma_{i}")) {
                            c.push(
                                "/base/char_classes",
                                format!("missing sigma_{i} (omit char_classes entirely for the trivial bundle)"),
                            );
                        }
                    }
                }
                base.char_classes = Some(out);
            }
        }
    }

    if let Some(chars) = obj.get("characters") {
        match chars.as_object() {
            None => c.push("/base/characters", "expected an object {\"name\": expr}"),
            Some(map) => {
                let mut out = BTreeMap::new();
                for (key, val) in map {
                    let path = format!("/base/characters/{key}");
                    let Some(s) = c.string(val, &path) else { continue };
                    if let Some(Some(d)) = check_expr(c, s, &path) {
                        if d != 1 {
                            c.push(&path, format!("character classes must have degree 1, `{s}` has degree {d}"));
                        }
                    }
                    out.insert(key.clone(), s.to_string());
                }
                base.characters = Some(out);
            }
        }
    }

    match task {
        Some(Task::Principal) if base.char_classes.is_some() => {
            c.push("/base/char_classes", "not used by principal-bundle jobs; give `characters`");
        }
        Some(Task::Flag) if base.characters.is_some() => {
            c.push("/base/characters", "not used by flag-bundle jobs; give `char_classes`");
        }
        _ => {}
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_flag_job_gets_defaults() {
        let job = parse_job(r#"{"task": "flag", "group": {"type": "GL", "rank": 2}}"#).unwrap();
        assert_eq!(job.truncation_degree, 6);
        assert_eq!(job.mode, Mode::Chow);
        assert!(job.parabolic.is_empty());
        assert_eq!(job.format, Format::Text);
    }

    #[test]
    fn relation_degree_is_accepted() {
        let job = parse_job(
            r#"{"task": "flag", "group": {"type": "GL", "rank": 2},
                "base": {"generators": [{"name": "h", "degree": 1}], "relations": ["h^2"]}}"#,
        )
        .unwrap();
        assert_eq!(job.base.relations, vec!["h^2"]);
    }

    #[test]
    fn wrong_class_degree_names_sigma_and_degrees() {
        let err = parse_job(
            r#"{"task": "flag", "group": {"type": "GL", "rank": 2},
                "base": {"generators": [{"name": "h", "degree": 1}], "relations": ["h^2"],
                         "char_classes": {"sigma_1": "h", "sigma_2": "h"}}}"#,
        )
        .unwrap_err();
        let text = err.to_string();
        assert!(text.contains("/base/char_classes/sigma_2"), "{text}");
        assert!(text.contains("degree 2") && text.contains("degree 1"), "{text}");
    }

    #[test]
    fn all_errors_are_collected() {
        let err = parse_job(
            r#"{"task": "flag", "parabollic": [1], "mode": "motivic",
                "group": {"type": "E", "rank": 2}}"#,
        )
        .unwrap_err();
        let paths: Vec<&str> = err.0.iter().map(|e| e.path.as_str()).collect();
        assert!(paths.contains(&"/parabollic"));
        assert!(paths.contains(&"/mode"));
        assert!(paths.contains(&"/group/type"));
    }

    #[test]
    fn malformed_json_and_bad_expressions() {
        assert!(parse_job("{").is_err());
        let err = parse_job(
            r#"{"task": "principal", "base": {"generators": [{"name": "h", "degree": 1}],
                "relations": ["h^2 + "], "characters": {"chi": "h^2"}}}"#,
        )
        .unwrap_err();
        let paths: Vec<&str> = err.0.iter().map(|e| e.path.as_str()).collect();
        assert_eq!(paths, vec!["/base/relations/0", "/base/characters/chi"]);
    }

    #[test]
    fn round_trip() {
        let text = r#"{"task": "oracle", "oracle_of": "flag", "mode": "cobordism",
            "truncation_degree": 3, "group": {"type": "GL", "rank": 3}, "parabolic": [2],
            "base": {"generators": [{"name": "h", "degree": 1, "weight": 1}], "relations": ["h^2"],
                     "char_classes": {"sigma_1": "h", "sigma_2": "0", "sigma_3": "0"}},
            "convention": "dual", "format": "json"}"#;
        let job = parse_job(text).unwrap();
        assert_eq!(parse_job(&job.to_json()).unwrap(), job);
    }
}
