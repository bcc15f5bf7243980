//! Runnable scenario definitions and the JSON scenario file format.
//!
//! A scenario file overrides one built-in base scenario. Every section and
//! key is optional:
//!
//! ```json
//! {
//!   "name": "heavier refactoring",
//!   "base": "s2",
//!   "params": { "refactoring_effort_necessary": 0.5, "accrual_basis": "allocated" },
//!   "initial": { "production_library": 12000 },
//!   "policy": { "type": "table", "breakpoints": [[0, 0.2], [0.95, 0.2], [1, 1]], "smoothing_time": 12 },
//!   "settings": { "dt": 0.25, "horizon": 132, "record_every": 1 }
//! }
//! ```
//!
//! A table-driven policy without an explicit `smoothing_time` uses
//! `params.smoothing_time`. `initial.allocation_level` defaults to the
//! policy's starting level and must equal it when given.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::engine::{
    integrate, EngineError, IntegrateError, IntegrationSettings, RunResult, TableFunction,
};
use crate::model::{AccrualBasis, InvalidState, MaintenanceModel, ModelParameters, StockState};
use crate::policy::AllocationPolicy;
use crate::ValidationError;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("unknown scenario `{0}` (built-in scenarios: s1, s2)")]
    UnknownScenario(String),
    #[error("`{0}` is not a numeric parameter path (expected params.<name>, policy.value or policy.smoothing_time)")]
    UnknownPath(String),
}

pub type SimulationError = IntegrateError<InvalidState>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinScenario {
    /// Everything allocated to perfective maintenance.
    PerfectiveOnly,
    /// Allocation reacts to productivity decay through the knee table.
    ReactivePreventive,
}

impl BuiltinScenario {
    pub const ALL: [BuiltinScenario; 2] = [Self::PerfectiveOnly, Self::ReactivePreventive];

    pub fn id(self) -> &'static str {
        match self {
            Self::PerfectiveOnly => "s1",
            Self::ReactivePreventive => "s2",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Self::PerfectiveOnly => "perfective maintenance only",
            Self::ReactivePreventive => "preventive maintenance triggered by productivity decay",
        }
    }

    pub fn spec(self) -> ScenarioSpec {
        let params = ModelParameters::default();
        let policy = match self {
            Self::PerfectiveOnly => AllocationPolicy::fixed(1.0),
            Self::ReactivePreventive => AllocationPolicy::reactive(params.smoothing_time),
        }
        .expect("built-in policy is valid");
        ScenarioSpec {
            name: self.id().to_string(),
            initial: StockState {
                allocation_level: policy.initial_level(),
                ..StockState::default()
            },
            params,
            policy,
            settings: IntegrationSettings::default(),
        }
    }
}

impl FromStr for BuiltinScenario {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|b| b.id() == s)
            .ok_or_else(|| ScenarioError::UnknownScenario(s.to_string()))
    }
}

impl fmt::Display for BuiltinScenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

pub fn builtin_scenario(id: &str) -> Result<ScenarioSpec, ScenarioError> {
    Ok(id.parse::<BuiltinScenario>()?.spec())
}

/// Everything needed to run the model once.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub params: ModelParameters,
    pub initial: StockState,
    pub policy: AllocationPolicy,
    pub settings: IntegrationSettings,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<(), ValidationError> {
        self.params.validate()?;
        self.initial.validate()?;
        self.policy.validate()?;
        self.settings.validate().map_err(settings_error)?;
        let expected = self.policy.initial_level();
        if self.initial.allocation_level != expected {
            return Err(ValidationError::new(
                "initial.allocation_level",
                format!(
                    "must equal the policy's starting level {expected}, got {}",
                    self.initial.allocation_level
                ),
            ));
        }
        if let Some(tau) = self.policy.smoothing_time() {
            if self.settings.dt > tau {
                return Err(ValidationError::new(
                    "settings.dt",
                    format!(
                        "must not exceed the policy smoothing time {tau}, got {}",
                        self.settings.dt
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<RunResult, SimulationError> {
        let model = MaintenanceModel {
            params: &self.params,
            policy: &self.policy,
        };
        integrate(&model, &self.initial.to_levels(), &self.settings)
    }

    /// Replaces integration settings, keeping whichever fields are `None`.
    pub fn with_settings(
        &self,
        dt: Option<f64>,
        horizon: Option<f64>,
        record_every: Option<f64>,
    ) -> Result<Self, ValidationError> {
        let mut spec = self.clone();
        spec.settings.dt = dt.unwrap_or(spec.settings.dt);
        spec.settings.horizon = horizon.unwrap_or(spec.settings.horizon);
        spec.settings.record_every = record_every.unwrap_or(spec.settings.record_every);
        spec.validate()?;
        Ok(spec)
    }

    pub fn value_at_path(&self, path: &str) -> Result<f64, ScenarioError> {
        let unknown = || ScenarioError::UnknownPath(path.to_string());
        match path.split_once('.') {
            Some(("params", key)) => self.params.get(key).ok_or_else(unknown),
            Some(("policy", "value")) => match &self.policy {
                AllocationPolicy::Fixed { value } => Ok(*value),
                _ => Err(unknown()),
            },
            Some(("policy", "smoothing_time")) => self.policy.smoothing_time().ok_or_else(unknown),
            _ => Err(unknown()),
        }
    }

    /// Checks that `path` names a numeric field this spec can sweep.
    pub fn check_path(&self, path: &str) -> Result<(), ScenarioError> {
        self.value_at_path(path).map(|_| ())
    }

    /// Copy of the spec with one numeric field replaced, validated.
    ///
    /// Linked fields follow: a fixed policy's value also moves the initial
    /// allocation level, and `params.smoothing_time` also moves a table
    /// policy's smoothing time.
    pub fn with_value(&self, path: &str, value: f64) -> Result<Self, ScenarioError> {
        self.check_path(path)?;
        let mut spec = self.clone();
        match path.split_once('.') {
            Some(("params", key)) => {
                spec.params.set(key, value);
                if key == "smoothing_time" {
                    if let AllocationPolicy::TableDriven { smoothing_time, .. } = &mut spec.policy {
                        *smoothing_time = value;
                    }
                }
            }
            Some(("policy", "value")) => {
                spec.policy = AllocationPolicy::Fixed { value };
                spec.initial.allocation_level = value;
            }
            Some(("policy", "smoothing_time")) => {
                if let AllocationPolicy::TableDriven { smoothing_time, .. } = &mut spec.policy {
                    *smoothing_time = value;
                }
            }
            _ => unreachable!("checked above"),
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn settings_error(e: EngineError) -> ValidationError {
    let key = match &e {
        EngineError::NonPositive { field, .. } | EngineError::NotAMultiple { field, .. } => {
            format!("settings.{field}")
        }
        _ => "settings".to_string(),
    };
    ValidationError::new(key, e.to_string())
}

/// Parses a scenario document over the base it names (`s1` when absent).
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let doc = parse_document(text)?;
    let base = match doc.get("base") {
        None => BuiltinScenario::PerfectiveOnly,
        Some(Value::String(id)) => id.parse()?,
        Some(other) => return Err(type_error("base", "a scenario id string", other).into()),
    };
    apply_document(base.spec(), &doc)
}

/// Parses a scenario document as overrides on an explicit base, ignoring any `base` key's id.
pub fn parse_scenario_over(base: &ScenarioSpec, text: &str) -> Result<ScenarioSpec, ScenarioError> {
    let doc = parse_document(text)?;
    if let Some(v) = doc.get("base") {
        if !v.is_string() {
            return Err(type_error("base", "a scenario id string", v).into());
        }
    }
    apply_document(base.clone(), &doc)
}

fn parse_document(text: &str) -> Result<Map<String, Value>, ScenarioError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    match value {
        Value::Object(map) => Ok(map),
        other => Err(type_error("(document)", "an object", &other).into()),
    }
}

fn apply_document(
    mut spec: ScenarioSpec,
    doc: &Map<String, Value>,
) -> Result<ScenarioSpec, ScenarioError> {
    for key in doc.keys() {
        if !matches!(
            key.as_str(),
            "name" | "base" | "params" | "initial" | "policy" | "settings"
        ) {
            return Err(ValidationError::new(key.clone(), "unknown key").into());
        }
    }
    if let Some(v) = doc.get("name") {
        spec.name = v
            .as_str()
            .ok_or_else(|| type_error("name", "a string", v))?
            .to_string();
    }

    if let Some(section) = doc.get("params") {
        let section = object(section, "params")?;
        for (key, v) in section {
            let path = format!("params.{key}");
            if key == "accrual_basis" {
                let s = v.as_str().ok_or_else(|| type_error(&path, "a string", v))?;
                spec.params.accrual_basis = AccrualBasis::parse(s).ok_or_else(|| {
                    ValidationError::new(
                        &path,
                        format!("must be \"allocated\" or \"expended\", got \"{s}\""),
                    )
                })?;
            } else if spec.params.get(key).is_some() {
                spec.params.set(key, number(v, &path)?);
            } else {
                return Err(ValidationError::new(path, "unknown key").into());
            }
        }
    }

    let policy_section = doc.get("policy").map(|v| object(v, "policy")).transpose()?;
    let explicit_smoothing = policy_section.is_some_and(|p| p.contains_key("smoothing_time"));
    if let Some(section) = policy_section {
        spec.policy = apply_policy(&spec.policy, section, spec.params.smoothing_time)?;
    }
    if !explicit_smoothing {
        if let AllocationPolicy::TableDriven { smoothing_time, .. } = &mut spec.policy {
            *smoothing_time = spec.params.smoothing_time;
        }
    }
    spec.initial.allocation_level = spec.policy.initial_level();

    if let Some(section) = doc.get("initial") {
        for (key, v) in object(section, "initial")? {
            let path = format!("initial.{key}");
            if !spec.initial.set(key, number(v, &path)?) {
                return Err(ValidationError::new(path, "unknown key").into());
            }
        }
    }

    if let Some(section) = doc.get("settings") {
        for (key, v) in object(section, "settings")? {
            let path = format!("settings.{key}");
            let value = number(v, &path)?;
            match key.as_str() {
                "dt" => spec.settings.dt = value,
                "horizon" => spec.settings.horizon = value,
                "record_every" => spec.settings.record_every = value,
                _ => return Err(ValidationError::new(path, "unknown key").into()),
            }
        }
    }

    spec.validate()?;
    Ok(spec)
}

fn apply_policy(
    base: &AllocationPolicy,
    section: &Map<String, Value>,
    default_smoothing: f64,
) -> Result<AllocationPolicy, ValidationError> {
    let mut policy = match section.get("type") {
        None => base.clone(),
        Some(Value::String(t)) if t == "fixed" => match base {
            AllocationPolicy::Fixed { .. } => base.clone(),
            _ => AllocationPolicy::Fixed { value: 1.0 },
        },
        Some(Value::String(t)) if t == "table" => match base {
            AllocationPolicy::TableDriven { .. } => base.clone(),
            _ => AllocationPolicy::TableDriven {
                table: crate::policy::default_scenario_table(),
                smoothing_time: default_smoothing,
            },
        },
        Some(Value::String(t)) => {
            return Err(ValidationError::new(
                "policy.type",
                format!("must be \"fixed\" or \"table\", got \"{t}\""),
            ))
        }
        Some(other) => return Err(type_error("policy.type", "a string", other)),
    };

    for (key, v) in section {
        let path = format!("policy.{key}");
        match (key.as_str(), &mut policy) {
            ("type", _) => {}
            ("value", AllocationPolicy::Fixed { value }) => *value = number(v, &path)?,
            ("smoothing_time", AllocationPolicy::TableDriven { smoothing_time, .. }) => {
                *smoothing_time = number(v, &path)?
            }
            ("breakpoints", AllocationPolicy::TableDriven { table, .. }) => {
                *table = breakpoints(v)?
            }
            ("value" | "smoothing_time" | "breakpoints", _) => {
                return Err(ValidationError::new(
                    path,
                    format!("not allowed for a {} policy", policy_type(&policy)),
                ))
            }
            _ => return Err(ValidationError::new(path, "unknown key")),
        }
    }
    policy.validate()?;
    Ok(policy)
}

fn breakpoints(v: &Value) -> Result<TableFunction, ValidationError> {
    const KEY: &str = "policy.breakpoints";
    let items = v
        .as_array()
        .ok_or_else(|| type_error(KEY, "an array of [x, y] pairs", v))?;
    let mut points = Vec::with_capacity(items.len());
    for (i, item) in items.iter().enumerate() {
        let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| {
            ValidationError::new(KEY, format!("entry {i} must be an [x, y] pair, got {item}"))
        })?;
        let x = number(&pair[0], &format!("{KEY}[{i}].x"))?;
        let y = number(&pair[1], &format!("{KEY}[{i}].y"))?;
        points.push((x, y));
    }
    TableFunction::new(points).map_err(|e| ValidationError::new(KEY, e.to_string()))
}

fn object<'a>(v: &'a Value, key: &str) -> Result<&'a Map<String, Value>, ValidationError> {
    v.as_object().ok_or_else(|| type_error(key, "an object", v))
}

fn number(v: &Value, key: &str) -> Result<f64, ValidationError> {
    v.as_f64().ok_or_else(|| type_error(key, "a number", v))
}

fn type_error(key: &str, expected: &str, got: &Value) -> ValidationError {
    ValidationError::new(key, format!("expected {expected}, got {got}"))
}

fn policy_type(policy: &AllocationPolicy) -> &'static str {
    match policy {
        AllocationPolicy::Fixed { .. } => "fixed",
        AllocationPolicy::TableDriven { .. } => "table",
    }
}

/// Serializes a spec as a complete scenario document that parses back to it.
pub fn render_scenario(spec: &ScenarioSpec) -> String {
    let mut params = Map::new();
    for key in ModelParameters::NUMERIC_KEYS {
        params.insert(
            key.to_string(),
            json!(spec.params.get(key).expect("listed key")),
        );
    }
    params.insert(
        "accrual_basis".into(),
        json!(spec.params.accrual_basis.as_str()),
    );

    let mut initial = Map::new();
    for key in StockState::KEYS {
        initial.insert(
            key.to_string(),
            json!(spec.initial.get(key).expect("listed key")),
        );
    }

    let policy = match &spec.policy {
        AllocationPolicy::Fixed { value } => json!({ "type": "fixed", "value": value }),
        AllocationPolicy::TableDriven {
            table,
            smoothing_time,
        } => json!({
            "type": "table",
            "breakpoints": table.points().iter().map(|&(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "smoothing_time": smoothing_time,
        }),
    };

    let doc = json!({
        "name": spec.name,
        "params": params,
        "initial": initial,
        "policy": policy,
        "settings": {
            "dt": spec.settings.dt,
            "horizon": spec.settings.horizon,
            "record_every": spec.settings.record_every,
        },
    });
    serde_json::to_string_pretty(&doc).expect("scenario serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtins() {
        let s1 = builtin_scenario("s1").unwrap();
        let s2 = builtin_scenario("s2").unwrap();
        assert_eq!(s1.policy, AllocationPolicy::Fixed { value: 1.0 });
        assert_eq!(s1.initial.production_library, 10_000.0);
        assert_eq!(s2.policy.smoothing_time(), Some(12.0));
        assert_eq!(s1.params, s2.params);
        assert_eq!(s1.initial, s2.initial);
        assert_eq!(s1.settings, s2.settings);
        assert_eq!(s1.settings.dt, 0.25);
        assert_eq!(s1.settings.horizon, 132.0);
        assert_eq!(s1.params.maintenance_team, 14.0);
        assert_eq!(s1.initial.technical_debt, 0.0);
        s1.validate().unwrap();
        s2.validate().unwrap();
        assert!(matches!(
            builtin_scenario("s3"),
            Err(ScenarioError::UnknownScenario(_))
        ));
    }

    #[test]
    fn empty_override_is_base() {
        assert_eq!(
            parse_scenario("{}").unwrap(),
            builtin_scenario("s1").unwrap()
        );
        let s2 = builtin_scenario("s2").unwrap();
        assert_eq!(parse_scenario_over(&s2, "{}").unwrap(), s2);
        let mut named = parse_scenario(r#"{"base": "s2"}"#).unwrap();
        assert_eq!(named, s2);
        named.name = "other".into();
        assert_ne!(named, s2);
    }

    #[test]
    fn single_key_override() {
        let spec = parse_scenario(r#"{"params": {"refactoring_effort_necessary": 0.5}}"#).unwrap();
        let mut expected = builtin_scenario("s1").unwrap();
        expected.params.refactoring_effort_necessary = 0.5;
        assert_eq!(spec, expected);
    }

    #[test]
    fn negative_team_is_rejected() {
        let err = parse_scenario(r#"{"params": {"maintenance_team": -1}}"#).unwrap_err();
        match err {
            ScenarioError::Validation(v) => assert_eq!(v.key, "params.maintenance_team"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_name_their_key() {
        let cases = [
            (r#"{"params": {"bogus": 1}}"#, "params.bogus"),
            (
                r#"{"params": {"maintenance_team": "14"}}"#,
                "params.maintenance_team",
            ),
            (
                r#"{"params": {"accrual_basis": "spent"}}"#,
                "params.accrual_basis",
            ),
            (r#"{"initial": {"backlog": -3}}"#, "initial.backlog"),
            (
                r#"{"initial": {"allocation_level": 0.5}}"#,
                "initial.allocation_level",
            ),
            (
                r#"{"policy": {"type": "table", "breakpoints": [[0, 0.2], [0, 1]]}}"#,
                "policy.breakpoints",
            ),
            (
                r#"{"policy": {"type": "table", "breakpoints": [[0, 0.2], [1, 1.5]]}}"#,
                "policy.breakpoints",
            ),
            (
                r#"{"policy": {"type": "table", "breakpoints": [[0, "a"], [1, 1]]}}"#,
                "policy.breakpoints[0].y",
            ),
            (r#"{"policy": {"type": "maybe"}}"#, "policy.type"),
            (
                r#"{"policy": {"smoothing_time": 3}}"#,
                "policy.smoothing_time",
            ),
            (r#"{"policy": {"value": 2}}"#, "policy.value"),
            (
                r#"{"settings": {"dt": 0.35, "record_every": 0.35}}"#,
                "settings.horizon",
            ),
            (
                r#"{"settings": {"dt": 0.5, "record_every": 0.75}}"#,
                "settings.record_every",
            ),
            (r#"{"settings": {"dt": 0}}"#, "settings.dt"),
            (r#"{"settings": {"step": 1}}"#, "settings.step"),
            (r#"{"extra": {}}"#, "extra"),
            (r#"{"params": []}"#, "params"),
        ];
        for (doc, key) in cases {
            match parse_scenario(doc) {
                Err(ScenarioError::Validation(v)) => assert_eq!(v.key, key, "{doc}"),
                other => panic!("{doc}: unexpected {other:?}"),
            }
        }
        assert!(matches!(
            parse_scenario(r#"{"base": "s9"}"#),
            Err(ScenarioError::UnknownScenario(_))
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        match parse_scenario("{\n  \"params\": {,}\n}") {
            Err(ScenarioError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert!(column > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn policy_switch_and_smoothing_default() {
        let spec =
            parse_scenario(r#"{"params": {"smoothing_time": 6}, "policy": {"type": "table"}}"#)
                .unwrap();
        assert_eq!(spec.policy.smoothing_time(), Some(6.0));
        assert_eq!(spec.initial.allocation_level, 1.0);
        let spec =
            parse_scenario(r#"{"base": "s2", "policy": {"type": "fixed", "value": 0.4}}"#).unwrap();
        assert_eq!(spec.policy, AllocationPolicy::Fixed { value: 0.4 });
        assert_eq!(spec.initial.allocation_level, 0.4);
        let spec = parse_scenario(r#"{"base": "s2", "params": {"smoothing_time": 24}}"#).unwrap();
        assert_eq!(spec.policy.smoothing_time(), Some(24.0));
    }

    #[test]
    fn paths() {
        let s1 = builtin_scenario("s1").unwrap();
        let s2 = builtin_scenario("s2").unwrap();
        assert_eq!(
            s1.value_at_path("params.refactoring_effort_necessary")
                .unwrap(),
            0.3
        );
        assert_eq!(s1.value_at_path("policy.value").unwrap(), 1.0);
        assert!(matches!(
            s1.check_path("policy.smoothing_time"),
            Err(ScenarioError::UnknownPath(_))
        ));
        assert!(matches!(
            s1.check_path("params.bogus"),
            Err(ScenarioError::UnknownPath(_))
        ));
        assert!(matches!(
            s1.check_path("settings.dt"),
            Err(ScenarioError::UnknownPath(_))
        ));
        let moved = s2.with_value("policy.smoothing_time", 6.0).unwrap();
        assert_eq!(moved.policy.smoothing_time(), Some(6.0));
        let moved = s1.with_value("policy.value", 0.5).unwrap();
        assert_eq!(moved.initial.allocation_level, 0.5);
        match s1.with_value("params.maintenance_team", -2.0) {
            Err(ScenarioError::Validation(v)) => assert_eq!(v.key, "params.maintenance_team"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn settings_override() {
        let s1 = builtin_scenario("s1").unwrap();
        let spec = s1.with_settings(Some(0.125), None, None).unwrap();
        assert_eq!(spec.settings.dt, 0.125);
        assert_eq!(spec.settings.horizon, 132.0);
        assert_eq!(
            s1.with_settings(Some(-1.0), None, None).unwrap_err().key,
            "settings.dt"
        );
    }

    fn any_spec() -> impl Strategy<Value = ScenarioSpec> {
        (
            0.01f64..0.5,
            0.5f64..10.0,
            0.05f64..=1.0,
            1.0f64..40.0,
            0.0f64..5000.0,
            prop::option::of(0.0f64..=1.0),
            1.0f64..36.0,
            0.05f64..0.9,
            prop::sample::select(vec![0.125, 0.25, 0.5, 1.0]),
            1u32..200,
            any::<bool>(),
        )
            .prop_map(
                |(
                    demands,
                    prod,
                    fraction,
                    team,
                    backlog,
                    fixed,
                    tau,
                    knee,
                    dt,
                    months,
                    expended,
                )| {
                    let mut spec = builtin_scenario("s1").unwrap();
                    spec.name = format!("spec-{months}");
                    spec.params.new_business_demands = demands;
                    spec.params.nominal_productivity = prod;
                    spec.params.refactoring_effort_necessary = fraction;
                    spec.params.maintenance_team = team;
                    if expended {
                        spec.params.accrual_basis = AccrualBasis::Expended;
                    }
                    spec.initial.backlog = backlog;
                    spec.policy = match fixed {
                        Some(value) => AllocationPolicy::Fixed { value },
                        None => AllocationPolicy::TableDriven {
                            table: TableFunction::new(vec![(0.0, 0.1), (knee, 0.3), (1.0, 1.0)])
                                .unwrap(),
                            smoothing_time: tau,
                        },
                    };
                    spec.initial.allocation_level = spec.policy.initial_level();
                    spec.settings = IntegrationSettings::new(dt, months as f64, dt).unwrap();
                    spec
                },
            )
    }

    proptest! {
        #[test]
        fn render_round_trips(spec in any_spec()) {
            let text = render_scenario(&spec);
            let parsed = parse_scenario(&text).unwrap();
            prop_assert_eq!(parsed, spec);
        }
    }
}
