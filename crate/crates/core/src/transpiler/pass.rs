use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::model::Model;
use crate::dag::CircuitDag;

/// A DAG-to-DAG transformation that may read and update the model.
pub trait Pass {
    fn name(&self) -> &str;
    fn run(&self, dag: CircuitDag, model: &mut Model) -> Result<CircuitDag, String>;
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TranspileError {
    #[error("pass '{pass}' failed: {cause}")]
    Pass { pass: String, cause: String },
    #[error("unknown pass '{0}'")]
    UnknownPass(String),
    #[error("invalid parameters for pass '{pass}': {cause}")]
    Params { pass: String, cause: String },
    #[error("optimization level {0} out of range 0..=3")]
    Level(u8),
    #[error("malformed pass flow: {0}")]
    Flow(String),
}

/// Name plus JSON parameters; resolved through a [`PassRegistry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassDescriptor {
    pub name: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub params: Value,
}

impl PassDescriptor {
    pub fn new(name: &str) -> Self {
        PassDescriptor { name: name.into(), params: Value::Null }
    }

    pub fn with(name: &str, params: Value) -> Self {
        PassDescriptor { name: name.into(), params }
    }
}

/// An ordered list of pass descriptors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PassFlow {
    pub passes: Vec<PassDescriptor>,
}

impl PassFlow {
    pub fn new(passes: Vec<PassDescriptor>) -> Self {
        PassFlow { passes }
    }

    pub fn from_json(text: &str) -> Result<Self, TranspileError> {
        serde_json::from_str(text).map_err(|e| TranspileError::Flow(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pass flow serializes")
    }
}

pub type PassFactory = Box<dyn Fn(&Value) -> Result<Box<dyn Pass>, String> + Send + Sync>;

/// Maps pass names to constructors.
pub struct PassRegistry {
    factories: BTreeMap<String, PassFactory>,
}

impl PassRegistry {
    pub fn empty() -> Self {
        PassRegistry { factories: BTreeMap::new() }
    }

    pub fn register<F>(&mut self, name: &str, f: F)
    where
        F: Fn(&Value) -> Result<Box<dyn Pass>, String> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_string(), Box::new(f));
    }

    pub fn contains(&self, name: &str) -> bool {
        self.factories.contains_key(name)
    }

    pub fn names(&self) -> Vec<&str> {
        self.factories.keys().map(String::as_str).collect()
    }

    pub fn build(&self, d: &PassDescriptor) -> Result<Box<dyn Pass>, TranspileError> {
        let f = self.factories.get(&d.name).ok_or_else(|| TranspileError::UnknownPass(d.name.clone()))?;
        f(&d.params).map_err(|cause| TranspileError::Params { pass: d.name.clone(), cause })
    }
}

impl Default for PassRegistry {
    /// Registry with all built-in passes.
    fn default() -> Self {
        let mut r = PassRegistry::empty();
        crate::passes::register_builtin(&mut r);
        r
    }
}
