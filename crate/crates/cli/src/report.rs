//! Reports: an ordered list of sections of key/value items, rendered either
//! as indented text or as JSON with the same content and order.

use dialgebra::scalars::fmt_scalar;
use dialgebra::{Mat, Scalar};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub exit_code: i32,
    pub sections: Vec<Section>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub title: String,
    pub items: Vec<Item>,
}

/// `ok` is `None` for purely informational items; any `Some(false)` makes
/// the command exit with status 1.
#[derive(Clone, Debug, Serialize)]
pub struct Item {
    pub key: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ok: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
    /// Render as `key = value` instead of `key: value` in text mode.
    #[serde(skip)]
    pub equation: bool,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section { title: title.into(), items: Vec::new() }
    }

    pub fn info(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Item {
        self.push(key, value, None)
    }

    pub fn check(&mut self, key: impl Into<String>, value: impl Into<Value>, ok: bool) -> &mut Item {
        self.push(key, value, Some(ok))
    }

    fn push(&mut self, key: impl Into<String>, value: impl Into<Value>, ok: Option<bool>) -> &mut Item {
        self.items.push(Item { key: key.into(), value: value.into(), ok, details: Vec::new(), equation: false });
        self.items.last_mut().unwrap()
    }

    pub fn failed(&self) -> bool {
        self.items.iter().any(|i| i.ok == Some(false))
    }
}

impl Item {
    pub fn as_equation(&mut self) -> &mut Self {
        self.equation = true;
        self
    }

    pub fn detail(&mut self, line: impl Into<String>) -> &mut Self {
        self.details.push(line.into());
        self
    }
}

impl Report {
    pub fn new(command: impl Into<String>, sections: Vec<Section>) -> Self {
        let exit_code = if sections.iter().any(Section::failed) { 1 } else { 0 };
        Report { command: command.into(), exit_code, sections }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, s) in self.sections.iter().enumerate() {
            if k > 0 {
                out.push('\n');
            }
            out.push_str(&s.title);
            out.push('\n');
            for item in &s.items {
                let sep = if item.equation { " =" } else { ":" };
                out.push_str(&format!("  {}{sep} {}\n", item.key, text_value(&item.value)));
                for d in &item.details {
                    out.push_str(&format!("    {d}\n"));
                }
            }
        }
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => (if *b { "yes" } else { "no" }).into(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Array(xs) => format!("[{}]", xs.iter().map(text_value).collect::<Vec<_>>().join(", ")),
        Value::Object(m) => {
            let parts: Vec<String> = m.iter().map(|(k, x)| format!("{k}={}", text_value(x))).collect();
            format!("{{{}}}", parts.join(", "))
        }
    }
}

pub fn scalar(x: &Scalar) -> Value {
    Value::String(fmt_scalar(x))
}

pub fn vector(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

/// Rows of a matrix, each an array of rational strings.
pub fn matrix(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|r| vector(m.row(r))).collect())
}

/// `[a, b; c, d]`, the compact form used in detail lines.
pub fn matrix_text(m: &Mat) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|r| m.row(r).iter().map(fmt_scalar).collect::<Vec<_>>().join(", "))
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn basis_tuple(basis: &[String], idx: &[usize]) -> String {
    idx.iter().map(|&i| basis[i].as_str()).collect::<Vec<_>>().join(", ")
}

/// `3/2*e1 - e2`, or `0`.
pub fn combination(basis: &[String], v: &[Scalar]) -> String {
    use num_traits::{One, Signed, Zero};
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if !a.is_one() {
            out.push_str(&fmt_scalar(&a));
            out.push('*');
        }
        out.push_str(&basis[i]);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use dialgebra::scalars::{frac, int};

    #[test]
    fn text_and_json_agree_on_order() {
        let mut s = Section::new("dialgebra A");
        s.check("axioms", "OK (6/6)", true);
        s.info("coefficients", vector(&[frac(1, 2), int(-3)])).detail("note");
        let r = Report::new("verify", vec![s]);
        assert_eq!(r.exit_code, 0);
        assert_eq!(r.to_text(), "dialgebra A\n  axioms: OK (6/6)\n  coefficients: [1/2, -3]\n    note\n");
        let j = r.to_json();
        assert!(j.find("\"command\"").unwrap() < j.find("\"exit_code\"").unwrap());
        assert!(j.contains("\"1/2\""));
    }

    #[test]
    fn failing_item_sets_exit_code() {
        let mut s = Section::new("x");
        s.check("axioms", "FAIL (5/6)", false);
        assert_eq!(Report::new("verify", vec![s]).exit_code, 1);
    }

    #[test]
    fn combinations() {
        let b = vec!["e1".to_string(), "e2".to_string()];
        assert_eq!(combination(&b, &[frac(3, 2), int(-1)]), "3/2*e1 - e2");
        assert_eq!(combination(&b, &[int(0), int(0)]), "0");
        assert_eq!(combination(&b, &[int(-2), int(0)]), "-2*e1");
    }
}
