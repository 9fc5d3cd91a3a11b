use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

/// Appends one JSON line tagged with the tool name, version and command.
pub fn append(path: &Path, command: &str, body: Value) -> std::io::Result<()> {
    let mut record = Map::new();
    record.insert("tool".into(), json!("hgbos"));
    record.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    record.insert("command".into(), json!(command));
    if let Value::Object(fields) = body {
        record.extend(fields);
    }
    let mut line = serde_json::to_string(&Value::Object(record))?;
    line.push('\n');
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    file.write_all(line.as_bytes())
}

/// Manifest location for a single output file.
pub fn beside(output: &Path) -> std::path::PathBuf {
    output
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."))
        .join("manifest.jsonl")
}
