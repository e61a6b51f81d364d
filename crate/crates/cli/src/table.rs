use serde_json::Value;

/// Renders a JSON value as a plain-text table: objects become aligned
/// key/value lines, arrays of objects become column tables.
pub fn render(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            let mut out = String::new();
            let mut nested = Vec::new();
            for (k, v) in map {
                match v {
                    Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                        nested.push((k, v));
                    }
                    Value::Object(_) => nested.push((k, v)),
                    _ => out.push_str(&format!("{k:<width$}  {}\n", inline(v))),
                }
            }
            for (k, v) in nested {
                out.push_str(&format!("\n{k}:\n{}", render(v)));
            }
            out
        }
        Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => columns(items),
        other => format!("{}\n", inline(other)),
    }
}

fn columns(items: &[Value]) -> String {
    let mut headers: Vec<&str> = Vec::new();
    for item in items {
        for k in item.as_object().into_iter().flat_map(|m| m.keys()) {
            if !headers.contains(&k.as_str()) {
                headers.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| headers.iter().map(|h| item.get(*h).map(inline).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(c, h)| cells.iter().map(|r| r[c].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let line = |row: Vec<&str>| {
        let padded: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
        format!("{}\n", padded.join("  ").trim_end())
    };
    let mut out = line(headers.clone());
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "n/a".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}
