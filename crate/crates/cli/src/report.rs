//! Ordered key/value reports with a text and a JSON rendering.

use fermiex::format::fmt_real;
use fermiex::Complex64;
use serde_json::{json, Map, Value as Json};

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Text(String),
    Real(f64),
    Int(i64),
    Bool(bool),
    Complex(Complex64),
    List(Vec<Value>),
}

impl Value {
    pub fn render(&self) -> String {
        match self {
            Value::Text(s) => s.clone(),
            Value::Real(v) => fmt_real(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Complex(z) => format!("{}:{}", fmt_real(z.re), fmt_real(z.im)),
            Value::List(items) => {
                let parts: Vec<String> = items.iter().map(Value::render).collect();
                format!("[{}]", parts.join(", "))
            }
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Text(s) => json!(s),
            Value::Real(v) => json!(v),
            Value::Int(v) => json!(v),
            Value::Bool(v) => json!(v),
            Value::Complex(z) => json!([z.re, z.im]),
            Value::List(items) => Json::Array(items.iter().map(Value::to_json).collect()),
        }
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::Text(s.to_owned())
    }
}

impl From<String> for Value {
    fn from(s: String) -> Self {
        Value::Text(s)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<Complex64> for Value {
    fn from(z: Complex64) -> Self {
        Value::Complex(z)
    }
}

impl From<Vec<f64>> for Value {
    fn from(v: Vec<f64>) -> Self {
        Value::List(v.into_iter().map(Value::Real).collect())
    }
}

impl From<&[Complex64]> for Value {
    fn from(v: &[Complex64]) -> Self {
        Value::List(v.iter().copied().map(Value::Complex).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    pub entries: Vec<(String, Value)>,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            entries: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.to_owned(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", s.name));
            for (k, v) in &s.entries {
                out.push_str(&format!("{k}: {}\n", v.render()));
            }
        }
        out
    }

    pub fn to_json(&self, exit_code: i32) -> Json {
        let mut sections = Map::new();
        for s in &self.sections {
            let mut obj = Map::new();
            for (k, v) in &s.entries {
                obj.insert(k.clone(), v.to_json());
            }
            sections.insert(s.name.clone(), Json::Object(obj));
        }
        json!({
            "command": self.command,
            "exit_code": exit_code,
            "sections": sections,
        })
    }
}
