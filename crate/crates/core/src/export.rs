//! Stable JSON and CSV serialization of tables, matrices and invariants.
//!
//! Floats are rounded to 15 significant digits and -0 is printed as 0, so
//! output bytes depend only on the inputs. Rationals print as "p/q".

use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::autoinv::{AutoInvForm, Classified, SingleLabel};
use crate::fusion::FusionTable;
use crate::modular::{GaloisAction, ModularData};
use crate::perm::Permutation;
use crate::search::SearchReport;
use crate::weights::{AlgebraSpec, Rational, Weight, WeightTable};

/// x rounded to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let y: f64 = format!("{x:.14e}").parse().expect("formatted float parses");
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

pub fn fmt_f64(x: f64) -> String {
    format!("{}", round15(x))
}

/// "re+imj" with both parts at 15 significant digits.
pub fn fmt_complex(z: Complex64) -> String {
    let im = round15(z.im);
    let sign = if im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}j", fmt_f64(z.re), sign, fmt_f64(im.abs()))
}

/// "p/q", with q = 1 kept explicit.
pub fn fmt_rational(q: Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn num(x: f64) -> Value {
    json!(round15(x))
}

fn compact<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

fn weight_json(w: &Weight) -> String {
    compact(w)
}

#[derive(Serialize)]
struct Header<'a> {
    spec: &'a AlgebraSpec,
    weights: &'a [Weight],
}

fn header(table: &WeightTable) -> Header<'_> {
    Header {
        spec: table.spec(),
        weights: table.weights(),
    }
}

fn with_header(table: &WeightTable, fields: Value) -> Value {
    let mut v = serde_json::to_value(header(table)).expect("header serializes");
    if let (Value::Object(map), Value::Object(extra)) = (&mut v, fields) {
        map.extend(extra);
    }
    v
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

pub fn weights_json(table: &WeightTable) -> Value {
    serde_json::to_value(table.repr()).expect("table serializes")
}

pub fn weights_csv(table: &WeightTable) -> String {
    let mut rows = vec![vec!["index".to_string(), "weight".to_string()]];
    for (i, w) in table.weights().iter().enumerate() {
        rows.push(vec![i.to_string(), weight_json(w)]);
    }
    csv_string(rows)
}

pub fn smatrix_json(md: &ModularData) -> Value {
    let entries: Vec<Value> = md
        .s_matrix()
        .iter()
        .map(|z| json!([num(z.re), num(z.im)]))
        .collect();
    with_header(md.table(), json!({ "n": md.n(), "entries": entries }))
}

pub fn smatrix_csv(md: &ModularData) -> String {
    let mut head = vec!["weight".to_string()];
    head.extend(md.table().weights().iter().map(weight_json));
    let mut rows = vec![head];
    for (i, w) in md.table().weights().iter().enumerate() {
        let mut row = vec![weight_json(w)];
        row.extend(md.s_row(i).iter().map(|&z| fmt_complex(z)));
        rows.push(row);
    }
    csv_string(rows)
}

pub fn tvector_json(md: &ModularData) -> Value {
    let texp: Vec<String> = md.t_exps().iter().map(|&q| fmt_rational(q)).collect();
    let anomaly: Vec<String> = (0..md.n()).map(|i| fmt_rational(md.anomaly(i))).collect();
    with_header(md.table(), json!({ "texp": texp, "anomaly": anomaly }))
}

pub fn tvector_csv(md: &ModularData) -> String {
    let mut rows = vec![vec!["weight".into(), "texp".into(), "anomaly".into()]];
    for (i, w) in md.table().weights().iter().enumerate() {
        rows.push(vec![
            weight_json(w),
            fmt_rational(md.t_exp(i)),
            fmt_rational(md.anomaly(i)),
        ]);
    }
    csv_string(rows)
}

pub fn qdim_json(md: &ModularData) -> Value {
    let q: Vec<Value> = md.q_dims().iter().map(|&x| num(x)).collect();
    with_header(md.table(), json!({ "q": q }))
}

pub fn qdim_csv(md: &ModularData) -> String {
    let mut rows = vec![vec!["weight".into(), "q".into()]];
    for (i, w) in md.table().weights().iter().enumerate() {
        rows.push(vec![weight_json(w), fmt_f64(md.q(i))]);
    }
    csv_string(rows)
}

/// One nonzero fusion coefficient.
pub type FusionEntry = (usize, usize, usize, u64);

pub fn fusion_json(ft: &FusionTable, entries: &[FusionEntry]) -> Value {
    let t = ft.table();
    Value::Array(
        entries
            .iter()
            .map(|&(l, m, nu, n)| {
                json!({
                    "lambda": t.weight(l),
                    "mu": t.weight(m),
                    "nu": t.weight(nu),
                    "N": n,
                })
            })
            .collect(),
    )
}

pub fn fusion_csv(ft: &FusionTable, entries: &[FusionEntry]) -> String {
    let t = ft.table();
    let mut rows = vec![vec!["lambda".into(), "mu".into(), "nu".into(), "N".into()]];
    for &(l, m, nu, n) in entries {
        rows.push(vec![
            weight_json(t.weight(l)),
            weight_json(t.weight(m)),
            weight_json(t.weight(nu)),
            n.to_string(),
        ]);
    }
    csv_string(rows)
}

#[derive(Serialize)]
struct LabelRepr {
    #[serde(rename = "type")]
    kind: &'static str,
    #[serde(flatten)]
    label: SingleLabel,
}

pub fn invariant_json(form: &AutoInvForm, permutation: &Permutation, label: Option<SingleLabel>) -> Value {
    let mut v = json!({ "form": form, "permutation": permutation });
    if let Some(label) = label {
        v["label"] = serde_json::to_value(LabelRepr {
            kind: "C^a sigma_m",
            label,
        })
        .expect("label serializes");
    }
    v
}

pub fn classification_json(items: &[Classified]) -> Value {
    Value::Array(
        items
            .iter()
            .map(|c| invariant_json(&c.form, &c.permutation, c.label))
            .collect(),
    )
}

pub fn classification_csv(items: &[Classified]) -> String {
    let mut rows = vec![vec![
        "index".into(),
        "pi".into(),
        "c".into(),
        "a".into(),
        "permutation".into(),
    ]];
    for (i, c) in items.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            compact(&c.form.pi),
            compact(&c.form.c),
            compact(&c.form.a),
            compact(&c.permutation),
        ]);
    }
    csv_string(rows)
}

pub fn search_json(found: &[Permutation], report: &SearchReport) -> Value {
    json!({ "permutations": found, "report": report })
}

pub fn search_csv(found: &[Permutation]) -> String {
    let mut rows = vec![vec!["index".into(), "permutation".into()]];
    for (i, p) in found.iter().enumerate() {
        rows.push(vec![i.to_string(), compact(p)]);
    }
    csv_string(rows)
}

pub fn galois_json(g: &GaloisAction, defect: f64) -> Value {
    json!({
        "ell": g.ell,
        "conductor": g.conductor,
        "image": g.image,
        "signs": g.signs,
        "defect": num(defect),
    })
}

pub fn galois_csv(actions: &[(GaloisAction, f64)]) -> String {
    let mut rows = vec![vec![
        "ell".into(),
        "conductor".into(),
        "image".into(),
        "signs".into(),
        "defect".into(),
    ]];
    for (g, d) in actions {
        rows.push(vec![
            g.ell.to_string(),
            g.conductor.to_string(),
            compact(&g.image),
            compact(&g.signs),
            fmt_f64(*d),
        ]);
    }
    csv_string(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(-0.0), "0");
        assert_eq!(fmt_f64(-1e-20), "-0.00000000000000000001");
        assert_eq!(fmt_f64(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_complex(Complex64::new(0.5, -0.25)), "0.5-0.25j");
        assert_eq!(fmt_complex(Complex64::new(1.0, -0.0)), "1+0j");
    }

    #[test]
    fn rationals() {
        assert_eq!(fmt_rational(Rational::new(-1, 24)), "-1/24");
        assert_eq!(fmt_rational(Rational::from_integer(1)), "1/1");
    }

    #[test]
    fn smatrix_shape() {
        let md = ModularData::new(&AlgebraSpec::simple(1, 1).unwrap());
        let v = smatrix_json(&md);
        assert_eq!(v["n"], 2);
        assert_eq!(v["entries"].as_array().unwrap().len(), 4);
        assert_eq!(v["spec"]["factors"][0]["r"], 1);
        assert_eq!(v["weights"][0], json!([[1, 0]]));
        let csv = smatrix_csv(&md);
        assert_eq!(csv.lines().count(), 3);
    }

    #[test]
    fn label_shape() {
        let v = invariant_json(
            &AutoInvForm::identity(1),
            &Permutation::identity(2),
            Some(SingleLabel { c: 1, m: 2 }),
        );
        assert_eq!(v["label"], json!({"type": "C^a sigma_m", "a": 1, "m": 2}));
        assert_eq!(v["form"], json!({"pi": [0], "c": [0], "a": [[0]]}));
    }
}
