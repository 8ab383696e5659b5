//! Structural comparison of JSON trees with a numeric tolerance.

use serde_json::Value;

use crate::lottie::LottieDocument;

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// JSON pointers of every leaf where `a` and `b` differ. Numbers compare
/// within `tolerance` regardless of integer/float representation; arrays of
/// different lengths and values of different types are reported at their own
/// path; object keys missing on either side are reported individually.
pub fn json_diff(a: &Value, b: &Value, tolerance: f64) -> Vec<String> {
    let mut out = Vec::new();
    diff_into(a, b, tolerance, &mut String::new(), &mut out);
    out
}

fn diff_into(a: &Value, b: &Value, tol: f64, path: &mut String, out: &mut Vec<String>) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            if !((x - y).abs() <= tol || x == y) {
                out.push(path.clone());
            }
        }
        (Value::Object(x), Value::Object(y)) => {
            for (k, xv) in x {
                let len = path.len();
                path.push('/');
                path.push_str(&escape(k));
                match y.get(k) {
                    Some(yv) => diff_into(xv, yv, tol, path, out),
                    None => out.push(path.clone()),
                }
                path.truncate(len);
            }
            for k in y.keys().filter(|k| !x.contains_key(*k)) {
                out.push(format!("{path}/{}", escape(k)));
            }
        }
        (Value::Array(x), Value::Array(y)) => {
            if x.len() != y.len() {
                out.push(path.clone());
                return;
            }
            for (i, (xv, yv)) in x.iter().zip(y).enumerate() {
                let len = path.len();
                path.push('/');
                path.push_str(&i.to_string());
                diff_into(xv, yv, tol, path, out);
                path.truncate(len);
            }
        }
        _ => {
            if a != b {
                out.push(path.clone());
            }
        }
    }
}

pub fn semantically_equal(a: &Value, b: &Value, tolerance: f64) -> bool {
    json_diff(a, b, tolerance).is_empty()
}

/// Documents are equivalent when their serialized JSON trees are.
pub fn documents_equivalent(a: &LottieDocument, b: &LottieDocument, tolerance: f64) -> bool {
    semantically_equal(&a.to_json_value(), &b.to_json_value(), tolerance)
}
