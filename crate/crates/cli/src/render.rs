//! Plain-text views of command values.

use std::fmt::Write;

use serde_json::Value;
use springer_core::gamma::GammaGraph;

use crate::{Command, GraphFormat};

fn s(v: &Value) -> String {
    match v {
        Value::String(x) => x.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn word(v: &Value) -> String {
    match v.as_str() {
        Some("") => "e".into(),
        Some(w) => format!("s({w})"),
        None => "-".into(),
    }
}

fn ints(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().map(s).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn simple_set(v: &Value) -> String {
    let parts: Vec<String> = v
        .as_array()
        .map(|a| a.iter().map(|i| format!("s{}", s(i))).collect())
        .unwrap_or_default();
    format!("{{{}}}", parts.join(","))
}

pub(crate) fn text(cmd: &Command, v: &Value) -> String {
    let mut o = String::new();
    match cmd {
        Command::Roots { .. } => roots(&mut o, v),
        Command::Cells { .. } => cells(&mut o, v),
        Command::Components { .. } => components(&mut o, v),
        Command::Graph { format, .. } => {
            let g: GammaGraph = serde_json::from_value(v.clone()).expect("cached graph has graph shape");
            match format {
                GraphFormat::Dot => o.push_str(&g.to_dot()),
                GraphFormat::Json => o.push_str(&g.to_json()),
            }
        }
        Command::Kl { .. } => {
            if v["related"] == Value::Bool(false) {
                let _ = writeln!(o, "0  ({} is not below {})", word(&v["x"]), word(&v["w"]));
            } else {
                let _ = writeln!(o, "{}", s(&v["polynomial"]));
            }
        }
        Command::Poincare { ends: Some(_), .. } => {
            let _ = writeln!(o, "{} {}: length {}", s(&v["type"]), word(&v["w"]), v["length"]);
            let _ = writeln!(o, "lowest coefficients (q^0 up):  {}", ints(&v["low"]));
            let _ = writeln!(o, "highest coefficients (q^l down): {}", ints(&v["high"]));
            let verdict = if v["non_palindromic"] == Value::Bool(true) {
                "not palindromic"
            } else {
                "palindromic on the computed ends"
            };
            let _ = writeln!(o, "{verdict}");
        }
        Command::Poincare { .. } => {
            let _ = writeln!(o, "{}", s(&v["polynomial"]));
            let _ = writeln!(
                o,
                "interval size {}, {}",
                v["interval_size"],
                if v["palindromic"] == Value::Bool(true) { "palindromic" } else { "not palindromic" }
            );
        }
        Command::Smooth { .. } => {
            let smooth = v["rationally_smooth"] == Value::Bool(true);
            let _ = writeln!(
                o,
                "{} {} is {}rationally smooth ({} test)",
                s(&v["type"]),
                word(&v["w"]),
                if smooth { "" } else { "not " },
                s(&v["method"])
            );
        }
        Command::Table2 { .. } => table2(&mut o, v),
        Command::F4Verify => f4(&mut o, v),
        Command::MainTheorem { .. } => main_theorem(&mut o, v),
    }
    o
}

fn roots(o: &mut String, v: &Value) {
    let _ = writeln!(o, "{}: rank {}, {} positive roots", s(&v["type"]), v["rank"], v["num_positive"]);
    let _ = writeln!(o, "Cartan matrix:");
    for row in v["cartan"].as_array().into_iter().flatten() {
        let cells: Vec<String> = row.as_array().into_iter().flatten().map(|c| format!("{:>3}", s(c))).collect();
        let _ = writeln!(o, " {}", cells.join(""));
    }
    let _ = writeln!(o, "highest root:       {}", ints(&v["highest_root"]));
    let _ = writeln!(o, "highest short root: {}", ints(&v["highest_short_root"]));
    let _ = writeln!(o, "positive roots (height, length, coefficients):");
    for r in v["positive_roots"].as_array().into_iter().flatten() {
        let len = if r["long"] == Value::Bool(true) { "long" } else { "short" };
        let _ = writeln!(o, "  {:>3} {:<5} {}", s(&r["height"]), len, ints(&r["coeffs"]));
    }
}

fn cells(o: &mut String, v: &Value) {
    let _ = writeln!(
        o,
        "{} {}: fiber dimension {}, {} components, {} nonempty cells",
        s(&v["type"]),
        s(&v["orbit"]),
        v["fiber_dim"],
        v["components"],
        v["total_cells"]
    );
    let hist: Vec<String> = v["histogram"]
        .as_array()
        .into_iter()
        .flatten()
        .enumerate()
        .map(|(d, c)| format!("{d}:{}", s(c)))
        .collect();
    let _ = writeln!(o, "cells per dimension: {}", hist.join(" "));
    let list = v["cells"].as_array().cloned().unwrap_or_default();
    let _ = writeln!(o, "{} cells of dimension >= {}:", list.len(), v["min_dim"]);
    for c in &list {
        let roots: Vec<String> = c["a_set"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|r| format!("({})", ints(r).replace(' ', ",")))
            .collect();
        let _ = writeln!(o, "  dim {:>3}  {}  A_w = {}", s(&c["dim"]), word(&c["word"]), roots.join(" "));
    }
}

fn components(o: &mut String, v: &Value) {
    let list = v["components"].as_array().cloned().unwrap_or_default();
    let _ = writeln!(
        o,
        "{} {}: {} components of dimension {}",
        s(&v["type"]),
        s(&v["orbit"]),
        list.len(),
        v["fiber_dim"]
    );
    for c in &list {
        let flag = if c["i_x_decided"] == Value::Bool(true) { "" } else { " (partly undecided)" };
        let _ = writeln!(o, "  {:<4} {}  I_X = {}{flag}", s(&c["label"]), word(&c["word"]), simple_set(&c["i_x"]));
    }
}

fn table2(o: &mut String, v: &Value) {
    let _ = writeln!(o, "{:<5} {:<11} {:>9} {:>10}  expected", "type", "orbit", "fiber dim", "components");
    for r in v["rows"].as_array().into_iter().flatten() {
        let mark = if r["matches"] == Value::Bool(true) { "ok" } else { "MISMATCH" };
        let _ = writeln!(
            o,
            "{:<5} {:<11} {:>9} {:>10}  {} / {}  {mark}",
            s(&r["type"]),
            s(&r["orbit"]),
            s(&r["fiber_dim"]),
            s(&r["component_count"]),
            s(&r["expected_fiber_dim"]),
            s(&r["expected_component_count"])
        );
    }
}

fn f4(o: &mut String, v: &Value) {
    for line in v["transcript"].as_array().into_iter().flatten() {
        let _ = writeln!(o, "{}", s(line));
    }
    let edges: Vec<String> = v["final_edges"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|e| format!("{}-{}", s(&e[0]), s(&e[1])))
        .collect();
    let _ = writeln!(o, "edges: {}", edges.join(", "));
    let _ = writeln!(
        o,
        "{}",
        if v["ok"] == Value::Bool(true) {
            "graph matches the expected F4 figure"
        } else {
            "graph DOES NOT match the expected F4 figure"
        }
    );
}

fn main_theorem(o: &mut String, v: &Value) {
    let g = &v["fiber_graph"];
    let labels: Vec<String> = g["vertices"]
        .as_array()
        .into_iter()
        .flatten()
        .map(|x| s(&x["label"]))
        .collect();
    let _ = writeln!(o, "{}: {}", s(&v["type_name"]), s(&v["result"]));
    let _ = writeln!(o, "components: {}", labels.join(" "));
    for e in g["edges"].as_array().into_iter().flatten() {
        if e["status"] == "certified" {
            let _ = writeln!(o, "  {} -- {}", labels[e["u"].as_u64().unwrap_or(0) as usize], labels[e["v"].as_u64().unwrap_or(0) as usize]);
        }
    }
    let und = v["undetermined"].as_array().map_or(0, |a| a.len());
    let _ = writeln!(o, "undetermined pairs: {und}");
    let _ = writeln!(o, "I_X labels compatible with the dual curve: {}", v["labels_compatible"]);
}
