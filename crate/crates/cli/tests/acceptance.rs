//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use dvs_core::cosymplectic::{
    box_exactness_check, classify_symmetry, coham_primitive, induced_dvs_report, validate_pair, CosymplecticPair,
    SymmetryClass, VolumeCheck,
};
use dvs_core::exterior::{rational, standard_dvs, standard_symplectic};
use dvs_core::flatness::{auto_involutivity_audit, flatten, integration_errors, involutivity_check, FlattenParams};
use dvs_core::numeric::lie_derivative_fd;
use dvs_core::pointwise::{dvs_type, lepage_injectivity, linear_normal_basis};
use dvs_core::poly::Poly;
use dvs_core::polyform::{CoordinateSplit, FrameSpec, PolyForm, PolyVectorField};
use dvs_core::sample::{
    box_point, box_points, change_basis, closed_dvs_instance, generator, invertible, moser_instance, poly_form,
    rational_in, rng, vector_field,
};
use dvs_core::symmetry::{
    build_symmetry, conformal_residual, decompose_symmetry, hamiltonian_form_candidate, verify_symmetry, ModelContext,
};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn catalogue(name: &str) -> String {
    format!("{}/catalogue/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn dvs(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_dvs")).args(args).arg("--json").output().expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v)
}

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, format!("runtime {:.2}s exceeds {}s", t.as_secs_f64(), limit.as_secs_f64()))
}

fn one(n: usize) -> Poly {
    Poly::one(n)
}

/// The three-part pipeline on one form and its frame: `analyze` at 20 random
/// points, then `involutive`, then an exact library check of the residual.
fn obstruction_pipeline(form: &str, frame: &str, residual_blade: &[usize], residual_text: &str) -> Result<(), String> {
    let (code, v) = dvs(&["analyze", &catalogue(form), "--samples", "20"]);
    ensure(code == 1, format!("analyze exit {code}"))?;
    ensure(v["certificates"]["closed"] == true, "not reported closed")?;
    let rows = v["certificates"]["samples"].as_array().cloned().unwrap_or_default();
    ensure(rows.len() == 20, format!("{} samples", rows.len()))?;
    for row in &rows {
        ensure(row["nondegenerate"] == true, format!("degenerate at {}", row["point"]))?;
        ensure(row["f_dim"] == v["certificates"]["split"]["y"].as_array().map_or(0, Vec::len), "F-dimension is not k")?;
    }
    ensure(v["verdict"]["summary"].as_str().is_some_and(|s| s.ends_with("involutivity FAILS")), "analyze verdict")?;

    let (code, v) = dvs(&["involutive", &catalogue(form), "--frame", &catalogue(frame)]);
    ensure(code == 1, format!("involutive exit {code}"))?;
    ensure(v["verdict"]["summary"].as_str().is_some_and(|s| s.starts_with("not flat")), "verdict is not \"not flat\"")?;
    ensure(v["residuals"]["involutivity"][0] == residual_text, format!("residual {}", v["residuals"]["involutivity"][0]))?;

    let doc = dvs_core::format::parse_document(&std::fs::read_to_string(catalogue(frame)).unwrap()).unwrap();
    let frame = FrameSpec::new(doc.generators.unwrap());
    let inv = involutivity_check(&frame, doc.dim);
    let expected = PolyForm::term(doc.dim, residual_blade, one(doc.dim));
    ensure(inv.residuals[0] == expected, "library residual differs")?;
    ensure(inv.residuals[1..].iter().all(PolyForm::is_zero), "other residuals nonzero")
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    obstruction_pipeline("nonflat_2_1", "nonflat_2_1_frame", &[0, 2, 4], "dx1∧dx3∧dy")?;
    within(started, Duration::from_secs(1))?;
    Ok(format!("residual dx1∧dx3∧dy, not flat ({:.3}s)", started.elapsed().as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let started = Instant::now();
    obstruction_pipeline("nonflat_family_k2", "nonflat_family_k2_frame", &[1, 3, 4, 5], "dx2∧dx4∧dy1∧dy2")?;
    obstruction_pipeline("nonflat_family_k3", "nonflat_family_k3_frame", &[1, 3, 4, 5, 6], "dx2∧dx4∧dy1∧dy2∧dy3")?;
    within(started, Duration::from_secs(2))?;
    Ok(format!("k = 2, 3 residuals exact ({:.3}s)", started.elapsed().as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let started = Instant::now();
    let mut r = rng(3);
    let pairs = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)];
    for trial in 0..100 {
        let (m, k) = pairs[trial % pairs.len()];
        let model = standard_dvs(m, k);
        let scrambled = change_basis(&model, &invertible(&mut r, 2 * m + k));
        let nb = linear_normal_basis(&scrambled).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(nb.certificate == model, format!("trial {trial}: certificate differs"))?;
        let residual = scrambled.pullback(&nb.basis).unwrap().sub(&model).unwrap();
        ensure(residual.is_zero(), format!("trial {trial}: residual nonzero"))?;
    }
    within(started, Duration::from_secs(30))?;
    Ok(format!("100/100 certificates exact ({:.2}s)", started.elapsed().as_secs_f64()))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let params = FlattenParams::default();
    let mut lines = Vec::new();
    for m in 1..=3 {
        for k in 1..=2 {
            let started = Instant::now();
            let omega = moser_instance(&mut r, m, k);
            let split = CoordinateSplit::standard(m, k);
            let n = split.dim();
            let report = flatten(&omega, &split, &vec![rational(0); n], &params).map_err(|e| format!("({m},{k}): {e}"))?;
            let chart = &report.chart;
            ensure(
                chart.max_residual < 1e-8,
                format!("({m},{k}): max residual {:e} at {} steps", chart.max_residual, chart.steps),
            )?;
            let stride = (chart.points.len() / 27).max(1);
            let subset: Vec<Vec<f64>> = chart.points.iter().step_by(stride).take(27).map(|p| p.start.clone()).collect();
            let e = integration_errors(&report.setup, &subset, &[200, 400], 3200).map_err(|e| e.to_string())?;
            ensure(e[1] * 8.0 <= e[0], format!("({m},{k}): integration error {:e} → {:e}, ratio {:.2}", e[0], e[1], e[0] / e[1]))?;
            within(started, Duration::from_secs(60)).map_err(|s| format!("({m},{k}): {s}"))?;
            lines.push(format!("({m},{k}) {:.1e} ratio {:.1}", chart.max_residual, e[0] / e[1]));
        }
    }
    for (m, k) in [(1, 1), (2, 1), (2, 2)] {
        let split = CoordinateSplit::standard(m, k);
        let n = split.dim();
        let bar = change_basis(&standard_symplectic(m), &invertible(&mut r, 2 * m)).embed(n, split.x()).unwrap();
        let omega = PolyForm::from_alt(&bar).wedge(&split.y_volume());
        let report = flatten(&omega, &split, &vec![rational(0); n], &params).map_err(|e| e.to_string())?;
        ensure(report.chart.max_residual == 0.0, format!("constant ({m},{k}): residual {:e}", report.chart.max_residual))?;
    }
    Ok(format!("{}; constant inputs 0.0", lines.join(", ")))
}

fn criterion_5() -> Outcome {
    let started = Instant::now();
    let mut r = rng(5);
    let split = CoordinateSplit::standard(3, 1);
    for trial in 0..100 {
        let (omega, frame) = closed_dvs_instance(&mut r, 3, 1);
        let samples = box_points(&mut r, split.dim(), 3);
        let audit = auto_involutivity_audit(&omega, &frame, &split, &samples).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(audit.concluded_r_zero && audit.r_zero_symbolic, format!("trial {trial}: R(α) ≠ 0"))?;
        ensure(audit.involutivity.involutive, format!("trial {trial}: not involutive"))?;
        ensure(involutivity_check(&frame, split.dim()).involutive, format!("trial {trial}: check fails"))?;
    }
    for (m, l, kernel) in [(3, 2, 0), (3, 1, 0), (4, 2, 0), (4, 3, 0), (2, 2, 5)] {
        let (_, got) = lepage_injectivity(&standard_symplectic(m), l);
        ensure(got == kernel, format!("kernel at (m, l) = ({m}, {l}) is {got}, expected {kernel}"))?;
    }
    within(started, Duration::from_secs(20))?;
    Ok(format!("100/100 audits, Lepage kernels as stated ({:.2}s)", started.elapsed().as_secs_f64()))
}

fn criterion_6() -> Outcome {
    let started = Instant::now();
    let mut r = rng(6);
    for trial in 0..50 {
        let (m, k) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let ctx = ModelContext::standard(m, k);
        let (g, _) = generator(&mut r, m, k, 3);
        let v = build_symmetry(&g, &ctx).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(verify_symmetry(&v, &ctx.omega()).is_zero(), format!("trial {trial}: L_Vω ≠ 0"))?;
        let back = decompose_symmetry(&v, &ctx).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(back == g, format!("trial {trial}: round trip differs"))?;
        let hf = hamiltonian_form_candidate(&g, &ctx).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(hf.certifies(), format!("trial {trial}: Hamiltonian form residual nonzero"))?;
    }
    for trial in 0..10 {
        let (m, k) = (1 + trial % 3, trial % 3);
        let c = rational_in(&mut r, 9, 7);
        ensure(conformal_residual(&c, &ModelContext::standard(m, k)).is_zero(), format!("L_cℰ ω̄ ≠ c ω̄ for c = {c}"))?;
    }
    within(started, Duration::from_secs(30))?;
    Ok(format!("50/50 generators, 10/10 conformal ({:.2}s)", started.elapsed().as_secs_f64()))
}

fn criterion_7() -> Outcome {
    let started = Instant::now();
    let n = 5;
    let pair = CosymplecticPair::standard(2);
    let samples = box_points(&mut rng(7), n, 20);
    let report = validate_pair(&pair, &samples).map_err(|e| e.to_string())?;
    ensure(matches!(report.volume, VolumeCheck::CertifiedGlobally { .. }), "volume not certified globally")?;
    let induced = induced_dvs_report(&pair, &samples).map_err(|e| e.to_string())?;
    ensure(induced.passed(2), "induced form fails the dvs checks")?;
    ensure(induced.types.iter().all(|t| t.map(|t| (t.m, t.k)) == Some((2, 1))), "type is not (2,1)")?;
    ensure(dvs_type(&induced.omega.evaluate_at(&samples[0]).unwrap()).is_some(), "dvs_type fails")?;
    ensure(induced.involutivity.involutive, "frame {α} is not involutive")?;

    let mut reeb = PolyVectorField::zero(n);
    reeb.components[4] = one(n);
    let c = classify_symmetry(&reeb, &pair);
    ensure(c.class == SymmetryClass::WeaklyCoHamiltonian, format!("∂y is {}", c.class))?;
    ensure(c.alpha_of_x == one(n), "α(∂y) ≠ 1")?;

    // X_f for f = (x1² + x2²)/2 + x3.
    let mut x = PolyVectorField::zero(n);
    x.components[0] = Poly::var(n, 1);
    x.components[1] = -&Poly::var(n, 0);
    x.components[3] = -&one(n);
    ensure(classify_symmetry(&x, &pair).class == SymmetryClass::CoHamiltonian, "X_f is not co-Hamiltonian")?;
    let p = coham_primitive(&x, &pair).map_err(|e| e.to_string())?;
    ensure(p.residual.is_zero(), "co-Hamiltonian primitive residual nonzero")?;

    let be = box_exactness_check(&reeb, &pair);
    ensure(be.closed && be.exact(), "box-level closed form has no primitive")?;
    let primitive = be.primitive.as_ref().unwrap();
    ensure(primitive.d() == be.contraction, "box primitive does not integrate the contraction")?;
    within(started, Duration::from_secs(5))?;
    Ok(format!("certified, (2,1) induced, ∂y weakly co-Hamiltonian, X_f co-Hamiltonian ({:.3}s)", started.elapsed().as_secs_f64()))
}

fn split_for(seed: u64, n: usize) -> CoordinateSplit {
    let mask = ((seed as usize) % (1 << n)) | 1;
    let (x, y): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| mask >> i & 1 == 1);
    CoordinateSplit::new(x, y).unwrap()
}

fn criterion_8() -> Outcome {
    use num_traits::ToPrimitive;
    let started = Instant::now();
    let mut r = rng(8);
    let count = 100;
    for trial in 0..count {
        let n = 1 + trial % 6;
        let p = r.gen_range(0..n);
        let split = split_for(r.gen(), n);
        let eta = poly_form(&mut r, n, p, 3, 3);
        ensure(eta.d().d().is_zero(), format!("trial {trial}: d² ≠ 0"))?;
        let (dx, dy) = (eta.d_x(&split), eta.d_y(&split));
        ensure(
            dx.d_x(&split).is_zero() && dy.d_y(&split).is_zero() && dx.d_y(&split) == dy.d_x(&split).neg(),
            format!("trial {trial}: bigraded anticommutation fails"),
        )?;
    }
    for trial in 0..count {
        let n = 2 + trial % 5;
        let p = r.gen_range(1..n);
        let split = split_for(r.gen(), n);
        let eta = poly_form(&mut r, n, p, 3, 3).filter(|mi| split.bidegree(mi).0 >= 1);
        let back = eta.homotopy_x(&split).d_x(&split).add(&eta.d_x(&split).homotopy_x(&split));
        ensure(back == eta, format!("trial {trial}: d^x h + h d^x ≠ id"))?;
    }
    for trial in 0..count {
        let n = 1 + trial % 5;
        let p = r.gen_range(0..=n);
        let eta = poly_form(&mut r, n, p, 3, 3);
        let v = vector_field(&mut r, n, 2);
        let point = box_point(&mut r, n);
        let exact = eta.lie_derivative(&v).evaluate_at(&point).unwrap();
        let pf: Vec<f64> = point.iter().map(|c| c.to_f64().unwrap()).collect();
        let scale = exact.max_abs_coefficient().to_f64().unwrap().max(1.0);
        for (mi, value) in lie_derivative_fd(&eta, &v, &pf, 1e-5) {
            let e = exact.coefficient(mi).to_f64().unwrap();
            ensure((value - e).abs() <= 1e-6 * scale, format!("trial {trial}: Lie derivative {value} vs {e}"))?;
        }
    }
    let (code, v) = dvs(&["catalogue", "run-all"]);
    ensure(code == 0, format!("catalogue run-all exit {code}: {}", v["verdict"]["summary"]))?;
    within(started, Duration::from_secs(60))?;
    Ok(format!("{count} instances per identity, catalogue run-all exit 0 ({:.2}s)", started.elapsed().as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 non-flat 3-form", criterion_1),
        ("2 non-flat family", criterion_2),
        ("3 linear normal form", criterion_3),
        ("4 Moser/Darboux", criterion_4),
        ("5 automatic involutivity", criterion_5),
        ("6 symmetry algebra", criterion_6),
        ("7 cosymplectic", criterion_7),
        ("8 infrastructure", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_string()));
        let t = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{t:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{t:.2}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

