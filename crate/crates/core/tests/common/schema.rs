//! Validator for the subset of JSON Schema used by the report schema:
//! `type`, `enum`, `const`, `properties`, `required`,
//! `additionalProperties: false`, `items`, `minItems`, `maxItems`,
//! `minimum`, `pattern`, `allOf`, `if`/`then` and local `$ref`.

use regex::Regex;
use serde_json::Value;

pub struct Validator {
    root: Value,
}

impl Validator {
    pub fn new(root: Value) -> Validator {
        Validator { root }
    }

    pub fn from_file(path: &std::path::Path) -> Validator {
        let text = std::fs::read_to_string(path).unwrap();
        Validator::new(serde_json::from_str(&text).unwrap())
    }

    /// All violations, as `path: message`.
    pub fn errors(&self, v: &Value) -> Vec<String> {
        let mut out = Vec::new();
        self.check(&self.root, v, "$", &mut out);
        out
    }

    fn resolve<'a>(&'a self, r: &str) -> &'a Value {
        let path = r.strip_prefix("#/").unwrap_or_else(|| panic!("non-local ref {r}"));
        path.split('/').fold(&self.root, |v, k| &v[k])
    }

    fn check(&self, s: &Value, v: &Value, at: &str, out: &mut Vec<String>) {
        if let Some(r) = s.get("$ref").and_then(Value::as_str) {
            self.check(self.resolve(r), v, at, out);
        }
        if let Some(t) = s.get("type") {
            let ok = match t {
                Value::String(t) => type_matches(t, v),
                Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
                _ => panic!("bad type keyword"),
            };
            if !ok {
                out.push(format!("{at}: expected type {t}"));
                return;
            }
        }
        if let Some(e) = s.get("enum").and_then(Value::as_array) {
            if !e.contains(v) {
                out.push(format!("{at}: not in enum"));
            }
        }
        if let Some(c) = s.get("const") {
            if c != v {
                out.push(format!("{at}: const mismatch"));
            }
        }
        if let (Some(m), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
            if x < m {
                out.push(format!("{at}: below minimum {m}"));
            }
        }
        if let (Some(p), Some(x)) = (s.get("pattern").and_then(Value::as_str), v.as_str()) {
            if !Regex::new(p).unwrap().is_match(x) {
                out.push(format!("{at}: `{x}` does not match {p}"));
            }
        }
        if let Some(obj) = v.as_object() {
            let props = s.get("properties").and_then(Value::as_object);
            if let Some(req) = s.get("required").and_then(Value::as_array) {
                for k in req {
                    if !obj.contains_key(k.as_str().unwrap()) {
                        out.push(format!("{at}: missing {k}"));
                    }
                }
            }
            for (k, x) in obj {
                match props.and_then(|p| p.get(k)) {
                    Some(ps) => self.check(ps, x, &format!("{at}.{k}"), out),
                    None => {
                        if s.get("additionalProperties") == Some(&Value::Bool(false)) {
                            out.push(format!("{at}: unexpected property {k}"));
                        }
                    }
                }
            }
        }
        if let Some(arr) = v.as_array() {
            if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
                if (arr.len() as u64) < n {
                    out.push(format!("{at}: fewer than {n} items"));
                }
            }
            if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
                if arr.len() as u64 > n {
                    out.push(format!("{at}: more than {n} items"));
                }
            }
            if let Some(is) = s.get("items") {
                for (i, x) in arr.iter().enumerate() {
                    self.check(is, x, &format!("{at}[{i}]"), out);
                }
            }
        }
        if let Some(all) = s.get("allOf").and_then(Value::as_array) {
            for sub in all {
                self.check(sub, v, at, out);
            }
        }
        if let Some(cond) = s.get("if") {
            let mut tmp = Vec::new();
            self.check(cond, v, at, &mut tmp);
            if tmp.is_empty() {
                if let Some(t) = s.get("then") {
                    self.check(t, v, at, out);
                }
            }
        }
    }
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => panic!("unknown type {t}"),
    }
}
