//! Bundled worked examples. Each entry runs one subcommand on embedded files
//! and states the verdict it should reach.

use std::time::Instant;

use serde_json::{json, Value};

use crate::commands::{self, AnalyzeOptions, FlattenOptions, Source};
use crate::report::{CliError, Report};

pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
    pub affirmative: bool,
    /// Substring the verdict summary must contain.
    pub expect: &'static str,
    run: fn() -> Result<Report, CliError>,
    /// Further conditions on the report beyond the verdict.
    check: fn(&Report) -> Result<(), String>,
}

macro_rules! file {
    ($name:literal) => {
        Source::inline(concat!("catalogue/", $name, ".json"), include_str!(concat!("../catalogue/", $name, ".json")))
    };
}

fn no_check(_: &Report) -> Result<(), String> {
    Ok(())
}

fn field(v: &Value, path: &[&str]) -> Value {
    path.iter().fold(v.clone(), |acc, k| acc.get(*k).cloned().unwrap_or(Value::Null))
}

fn require(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn residual_list_contains(r: &Report, key: &str, wanted: &str) -> Result<(), String> {
    let found = r.residuals.get(key).and_then(Value::as_array).is_some_and(|l| l.iter().any(|s| s == wanted));
    require(found, &format!("residual {key} does not contain {wanted}"))
}

fn analyze(src: Source) -> Result<Report, CliError> {
    commands::analyze(&src, &AnalyzeOptions::default())
}

fn involutive(form: Source, frame: Source) -> Result<Report, CliError> {
    commands::involutive(&form, &frame, 20, 0)
}

pub fn entries() -> Vec<Entry> {
    vec![
        Entry {
            name: "standard-1-1",
            description: "dx1∧dx2∧dy on R^3: the model of type (1,1)",
            affirmative: true,
            expect: "dvs linear type (1,1); frame {dy_j}; flat candidate",
            run: || analyze(file!("standard_1_1")),
            check: no_check,
        },
        Entry {
            name: "standard-2-1",
            description: "(dx1∧dx2 + dx3∧dx4)∧dy on R^5: the model of type (2,1)",
            affirmative: true,
            expect: "dvs linear type (2,1); frame {dy_j}; flat candidate",
            run: || analyze(file!("standard_2_1")),
            check: no_check,
        },
        Entry {
            name: "standard-2-2",
            description: "(dx1∧dx2 + dx3∧dx4)∧dy1∧dy2 on R^6: the model of type (2,2)",
            affirmative: true,
            expect: "dvs linear type (2,2); frame {dy_j}; flat candidate",
            run: || analyze(file!("standard_2_2")),
            check: no_check,
        },
        Entry {
            name: "nonflat-analyze",
            description: "x1 dx1∧dx2∧dx3 + dx1∧dx2∧dy + dx3∧dx4∧dy: pointwise (2,1) everywhere, frame found, not involutive",
            affirmative: false,
            expect: "dvs linear type (2,1); frame found; involutivity FAILS",
            run: || analyze(file!("nonflat_2_1")),
            check: |r| residual_list_contains(r, "involutivity", "dx1∧dx3∧dy"),
        },
        Entry {
            name: "nonflat-involutive",
            description: "the same form with the frame dy + x1 dx3: dα∧α = dx1∧dx3∧dy ≠ 0",
            affirmative: false,
            expect: "not flat",
            run: || involutive(file!("nonflat_2_1"), file!("nonflat_2_1_frame")),
            check: |r| {
                require(r.certificates["frame_in_f"] == true, "frame not in F")?;
                residual_list_contains(r, "involutivity", "dx1∧dx3∧dy")
            },
        },
        Entry {
            name: "nonflat-family-k2",
            description: "(dx1∧dx2 + dx3∧dx4)∧(dy1 + x2 dx4)∧dy2 on R^6: not flat",
            affirmative: false,
            expect: "not flat",
            run: || involutive(file!("nonflat_family_k2"), file!("nonflat_family_k2_frame")),
            check: |r| residual_list_contains(r, "involutivity", "dx2∧dx4∧dy1∧dy2"),
        },
        Entry {
            name: "nonflat-family-k3",
            description: "(dx1∧dx2 + dx3∧dx4)∧(dy1 + x2 dx4)∧dy2∧dy3 on R^7: not flat",
            affirmative: false,
            expect: "not flat",
            run: || involutive(file!("nonflat_family_k3"), file!("nonflat_family_k3_frame")),
            check: |r| residual_list_contains(r, "involutivity", "dx2∧dx4∧dy1∧dy2∧dy3"),
        },
        Entry {
            name: "degenerate",
            description: "dx1∧dx2∧dx3 on R^4: ι_{∂x4} kills it, so it is not multisymplectic",
            affirmative: false,
            expect: "not multisymplectic",
            run: || analyze(file!("degenerate")),
            check: no_check,
        },
        Entry {
            name: "perturbed-flatten",
            description: "(1 + x1x2/5) dx1∧dx2∧dy: Moser flow to the model, checked on a 3×3×3 grid",
            affirmative: true,
            expect: "flattened at 27 grid points",
            run: || commands::flatten_cmd(&file!("perturbed_1_1"), &FlattenOptions::default()),
            check: |r| require(r.residuals["max"].as_f64().is_some_and(|m| m < 1e-8), "max residual ≥ 1e-8"),
        },
        Entry {
            name: "symmetry-build",
            description: "H = x1 on the (1,1) model gives V = −∂x2",
            affirmative: true,
            expect: "symmetry",
            run: || commands::symmetry_build(&file!("generator_h_x1"), None),
            check: |r| require(r.certificates["field"] == "-∂x2", "field is not −∂x2"),
        },
        Entry {
            name: "symmetry-build-y",
            description: "H = x1x2y, Y = y∂y on the (1,1) model: the built field preserves ω",
            affirmative: true,
            expect: "symmetry",
            run: || commands::symmetry_build(&file!("generator_x1x2y_ydy"), None),
            check: no_check,
        },
        Entry {
            name: "symmetry-verify",
            description: "−∂x2 preserves dx1∧dx2∧dy",
            affirmative: true,
            expect: "symmetry: L_Vω = 0",
            run: || commands::symmetry_verify(&file!("field_minus_dx2"), None),
            check: no_check,
        },
        Entry {
            name: "symmetry-verify-fails",
            description: "x1∂x1 scales dx1∧dx2∧dy, so it is not a symmetry",
            affirmative: false,
            expect: "not a symmetry",
            run: || commands::symmetry_verify(&file!("field_x1dx1"), None),
            check: no_check,
        },
        Entry {
            name: "symmetry-decompose",
            description: "−∂x2 recovers H = x1 and Y = 0",
            affirmative: true,
            expect: "symmetry",
            run: || commands::symmetry_decompose(&file!("field_minus_dx2"), None),
            check: |r| require(r.certificates["h"] == "x1", "H is not x1"),
        },
        Entry {
            name: "symmetry-hamform",
            description: "H = x1x2y, Y = y∂y: the candidate 1-form α satisfies dα = ι_Vω",
            affirmative: true,
            expect: "Hamiltonian form",
            run: || commands::symmetry_hamform(&file!("generator_x1x2y_ydy")),
            check: no_check,
        },
        Entry {
            name: "cosymplectic-validate",
            description: "α = dy, β = dx1∧dx2 + dx3∧dx4 on R^5: α∧β² is a constant multiple of the volume",
            affirmative: true,
            expect: "certified globally",
            run: || commands::cosymplectic_validate(&file!("pair_standard_5"), 20, 0),
            check: no_check,
        },
        Entry {
            name: "cosymplectic-induce",
            description: "β∧α is a closed dvs form of type (2,1) with involutive frame {α}",
            affirmative: true,
            expect: "β∧α is dvs of type (2,1)",
            run: || commands::cosymplectic_induce(&file!("pair_standard_5"), 20, 0),
            check: no_check,
        },
        Entry {
            name: "cosymplectic-reeb",
            description: "∂y preserves (α, β) with α(∂y) = 1, so it is weakly co-Hamiltonian and not co-Hamiltonian",
            affirmative: true,
            expect: "weakly co-Hamiltonian with α(X) = 1",
            run: || commands::cosymplectic_classify(&file!("pair_standard_5"), &file!("field_dy_5")),
            check: no_check,
        },
        Entry {
            name: "cosymplectic-coham",
            description: "X_f for f = (x1² + x2²)/2 + x3 is co-Hamiltonian with a primitive of ι_X(β∧α)",
            affirmative: true,
            expect: "co-Hamiltonian",
            run: || commands::cosymplectic_classify(&file!("pair_standard_5"), &file!("field_coham_5")),
            check: |r| {
                require(r.certificates["class"] == "co-Hamiltonian", "class is not co-Hamiltonian")?;
                require(r.residuals["coham_primitive"] == "0", "primitive residual is nonzero")
            },
        },
        Entry {
            name: "cosymplectic-box-exactness",
            description: "on a box the closed form ι_{∂y}(β∧α) is exact; the Poincaré primitive is exhibited",
            affirmative: true,
            expect: "weakly co-Hamiltonian",
            run: || commands::cosymplectic_classify(&file!("pair_standard_5"), &file!("field_dy_5")),
            check: |r| {
                let be = &r.certificates["box_exactness"];
                require(field(be, &["closed"]) == true, "contraction is not closed")?;
                require(!field(be, &["primitive"]).is_null(), "no primitive")
            },
        },
        Entry {
            name: "lepage",
            description: "∧ω̄ on Λ^l(R^{2m}) for m = 2, 3, 4: injective for l ≤ m − 1, kernel 5 at (m, l) = (2, 2)",
            affirmative: true,
            expect: "injective",
            run: || commands::lepage(&[2, 3, 4], None),
            check: |r| {
                let rows = r.certificates["table"].as_array().cloned().unwrap_or_default();
                let row = rows.iter().find(|row| row["m"] == 2 && row["l"] == 2);
                require(row.is_some_and(|row| row["kernel_dim"] == 5), "kernel at (2, 2) is not 5")
            },
        },
    ]
}

pub fn find(name: &str) -> Result<Entry, CliError> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CliError::Input(format!("no catalogue entry \"{name}\"; see `dvs catalogue list`")))
}

/// Outcome of one entry: the inner report and whether it matched.
pub struct Outcome {
    pub inner: Report,
    pub mismatch: Option<String>,
}

pub fn execute(entry: &Entry) -> Result<Outcome, CliError> {
    let inner = (entry.run)()?;
    let mismatch = if inner.verdict.affirmative != entry.affirmative {
        Some(format!("verdict is {}, expected {}", inner.verdict.affirmative, entry.affirmative))
    } else if !inner.verdict.summary.contains(entry.expect) {
        Some(format!("summary \"{}\" lacks \"{}\"", inner.verdict.summary, entry.expect))
    } else {
        (entry.check)(&inner).err()
    };
    Ok(Outcome { inner, mismatch })
}

pub fn list() -> Report {
    let mut r = Report::new("catalogue list");
    let rows: Vec<Value> = entries()
        .iter()
        .map(|e| json!({"name": e.name, "expected": if e.affirmative { "affirmative" } else { "negative" }, "description": e.description}))
        .collect();
    let count = rows.len();
    r.certificate("entries", rows);
    r.conclude(true, format!("{count} entries"))
}

pub fn run(name: &str) -> Result<Report, CliError> {
    let entry = find(name)?;
    let outcome = execute(&entry)?;
    let mut r = outcome.inner;
    r.command = format!("catalogue run {name} ({})", r.command);
    r.input("entry", entry.name);
    r.input("description", entry.description);
    r.certificate("expected_affirmative", entry.affirmative);
    r.certificate("expected_summary", entry.expect);
    let summary = r.verdict.summary.clone();
    Ok(match outcome.mismatch {
        None => r.conclude(true, format!("as expected: {summary}")),
        Some(m) => r.conclude(false, format!("MISMATCH: {m}")),
    })
}

pub fn run_all() -> Result<Report, CliError> {
    let started = Instant::now();
    let mut r = Report::new("catalogue run-all");
    let mut rows = Vec::new();
    let mut failures = 0;
    for entry in entries() {
        let t = Instant::now();
        let (status, summary) = match execute(&entry) {
            Ok(Outcome { inner, mismatch: None }) => ("ok".to_string(), inner.verdict.summary),
            Ok(Outcome { inner, mismatch: Some(m) }) => {
                failures += 1;
                (format!("MISMATCH: {m}"), inner.verdict.summary)
            }
            Err(e) => {
                failures += 1;
                (format!("ERROR: {e}"), String::new())
            }
        };
        r.timing(entry.name, t.elapsed().as_secs_f64());
        rows.push(json!({"name": entry.name, "status": status, "summary": summary}));
    }
    let total = rows.len();
    r.certificate("entries", rows);
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    Ok(if failures == 0 {
        r.conclude(true, format!("all {total} entries as expected"))
    } else {
        r.conclude(false, format!("{failures} of {total} entries differ from their expectation"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = entries().iter().map(|e| e.name).collect();
        let before = names.len();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), before);
        assert!(matches!(find("nope"), Err(CliError::Input(_))));
    }

    #[test]
    fn every_entry_matches() {
        for entry in entries() {
            let outcome = execute(&entry).unwrap_or_else(|e| panic!("{}: {e}", entry.name));
            assert!(outcome.mismatch.is_none(), "{}: {:?}", entry.name, outcome.mismatch);
        }
    }
}
