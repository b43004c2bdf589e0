use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    JsonLines,
}

/// One output record: its text rendering and the same content as fields.
pub struct Line {
    pub text: String,
    pub fields: Map<String, Value>,
}

impl Line {
    pub fn new(text: impl Into<String>) -> Self {
        Line {
            text: text.into(),
            fields: Map::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }

    /// A `key=value` line whose JSON form is `{"key": value}`.
    pub fn kv(key: &str, value: impl Into<Value>) -> Self {
        let value = value.into();
        let shown = match &value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        Line::new(format!("{key}={shown}")).field(key, value)
    }
}

pub fn render(lines: &[Line], format: Format) -> String {
    let mut out = String::new();
    for line in lines {
        match format {
            Format::Text => out.push_str(&line.text),
            Format::JsonLines => out.push_str(&Value::Object(line.fields.clone()).to_string()),
        }
        out.push('\n');
    }
    out
}
