//! Subcommand bodies. Each returns a [`Report`] whose verdict decides the
//! exit code; malformed input is a [`CliError`].

use std::path::Path;
use std::time::Instant;

use dvs_core::cosymplectic::{
    self, box_exactness_check, classify_symmetry, coham_primitive, induced_dvs_report, validate_pair, SymmetryClass,
    VolumeCheck,
};
use dvs_core::exterior::{binomial, standard_symplectic, Rational};
use dvs_core::flatness::{
    find_frame, flatten, involutivity_check, suggest_split, verify_frame, FlatnessError, FlattenParams,
};
use dvs_core::format::{self, emit_field, emit_generator, parse_document, parse_rational, Document, FileError};
use dvs_core::pointwise::{d_space, dvs_type, f_space, is_nondegenerate, lepage_injectivity};
use dvs_core::polyform::{CoordinateSplit, FrameSpec, PolyForm, PolyVectorField};
use dvs_core::sample;
use dvs_core::symmetry::{
    build_symmetry, decompose_symmetry, hamiltonian_form_candidate, verify_symmetry, ModelContext, SymmetryError,
};
use serde_json::{json, Value};

use crate::report::{input_error, internal_error, CliError, Report};

/// A named input text: a file on disk or a catalogue entry.
#[derive(Clone, Debug)]
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Ok(Source { label: path.display().to_string(), text })
    }

    pub fn inline(label: &str, text: &str) -> Self {
        Source { label: label.to_string(), text: text.to_string() }
    }

    fn document(&self) -> Result<Document, CliError> {
        parse_document(&self.text).map_err(|e| CliError::Input(format!("{}: {e}", self.label)))
    }
}

fn file_error(src: &Source, e: FileError) -> CliError {
    CliError::Input(format!("{}: {e}", src.label))
}

fn need<T>(src: &Source, v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("{}: file has no \"{key}\" entry", src.label)))
}

/// `"1/2,0,-3"` as a point of the given dimension.
pub fn parse_point(text: &str, dim: usize) -> Result<Vec<Rational>, CliError> {
    let coords: Vec<Rational> = text.split(',').map(|c| parse_rational(c.trim())).collect::<Result<_, _>>().map_err(input_error)?;
    if coords.len() != dim {
        return Err(CliError::Input(format!("point \"{text}\" has {} coordinates, expected {dim}", coords.len())));
    }
    Ok(coords)
}

fn point_text(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn split_value(split: &CoordinateSplit, names: &[String]) -> Value {
    let label = |ix: &[usize]| ix.iter().map(|&i| names[i].clone()).collect::<Vec<_>>();
    json!({"x": label(split.x()), "y": label(split.y())})
}

fn show(form: &PolyForm, names: &[String]) -> String {
    form.display_with(names).to_string()
}

fn frame_text(frame: &FrameSpec, names: &[String]) -> Vec<String> {
    frame.generators.iter().map(|g| show(g, names)).collect()
}

/// Given points followed by `samples` seeded random points of the box `[−1/4, 1/4]^n`.
fn sample_points(dim: usize, points: &[String], samples: usize, seed: u64) -> Result<Vec<Vec<Rational>>, CliError> {
    let mut out: Vec<Vec<Rational>> = points.iter().map(|p| parse_point(p, dim)).collect::<Result<_, _>>()?;
    out.extend(sample::box_points(&mut sample::rng(seed), dim, samples));
    if out.is_empty() {
        return Err(CliError::Input("no sample points".to_string()));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub points: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    /// Largest coefficient degree tried when searching for a frame.
    pub frame_degree: Option<u32>,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { points: Vec::new(), samples: 20, seed: 0, frame_degree: None }
    }
}

pub fn analyze(src: &Source, opts: &AnalyzeOptions) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let omega = need(src, doc.form.clone(), "terms")?;
    let names = &doc.names;
    let n = doc.dim;
    let mut r = Report::new("analyze");
    r.input("file", src.label.clone());
    r.input("samples", opts.samples);
    r.input("seed", opts.seed);
    r.input("form", show(&omega, names));

    let d_omega = omega.d();
    let closed = d_omega.is_zero();
    r.certificate("closed", closed);
    r.residual("d_omega", show(&d_omega, names));

    let points = sample_points(n, &opts.points, opts.samples, opts.seed)?;
    let mut rows = Vec::new();
    let mut types = Vec::new();
    let mut degenerate_at = None;
    for p in &points {
        let at = omega.evaluate_at(p).map_err(input_error)?;
        let nondegenerate = is_nondegenerate(&at);
        let t = dvs_type(&at);
        let f_dim = f_space(&at).len();
        rows.push(json!({
            "point": point_text(p),
            "nondegenerate": nondegenerate,
            "f_dim": f_dim,
            "d_dim": d_space(&at).len(),
            "type": t.map(|t| format!("({},{})", t.m, t.k)),
        }));
        if !nondegenerate && degenerate_at.is_none() {
            degenerate_at = Some(point_text(p));
        }
        types.push(t);
    }
    r.certificate("samples", rows);
    r.timing("pointwise_seconds", started.elapsed().as_secs_f64());

    if let Some(p) = degenerate_at {
        return Ok(r.conclude(false, format!("not multisymplectic: degenerate at {p}")));
    }
    if !closed {
        return Ok(r.conclude(false, "not multisymplectic: not closed"));
    }
    let Some(t) = types[0].filter(|t| types.iter().all(|u| *u == Some(*t))) else {
        return Ok(r.conclude(false, "multisymplectic, but not of constant dvs type at the samples"));
    };
    r.certificate("dvs_type", format!("({},{})", t.m, t.k));

    let split = match doc.split.clone() {
        Some(s) => Some(s),
        None => suggest_split(&omega, &points[0]).map_err(internal_error)?,
    };
    let Some(split) = split.filter(|s| s.y().len() == t.k) else {
        return Ok(r.conclude(false, format!("dvs linear type ({},{}); F is not a coordinate complement", t.m, t.k)));
    };
    r.certificate("split", split_value(&split, names));
    let degree = opts.frame_degree.unwrap_or_else(|| omega.max_coefficient_degree().min(3));
    r.input("frame_degree", degree);
    let frame_started = Instant::now();
    let Some(frame) = find_frame(&omega, &split, degree) else {
        return Ok(r.conclude(
            false,
            format!("dvs linear type ({},{}); no frame dy_j + (x-terms) of coefficient degree ≤ {degree}", t.m, t.k),
        ));
    };
    r.timing("frame_seconds", frame_started.elapsed().as_secs_f64());
    r.certificate("frame", frame_text(&frame, names));
    let inv = involutivity_check(&frame, n);
    r.certificate("involutive", inv.involutive);
    r.residual("involutivity", inv.residuals.iter().map(|f| show(f, names)).collect::<Vec<_>>());
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    let summary = if frame == FrameSpec::coordinate(&split) {
        return Ok(r.conclude(true, format!("dvs linear type ({},{}); frame {{dy_j}}; flat candidate", t.m, t.k)));
    } else if inv.involutive {
        format!("dvs linear type ({},{}); frame found; involutive", t.m, t.k)
    } else {
        format!("dvs linear type ({},{}); frame found; involutivity FAILS", t.m, t.k)
    };
    Ok(r.conclude(inv.involutive, summary))
}

pub fn involutive(src: &Source, frame_src: &Source, samples: usize, seed: u64) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let omega = need(src, doc.form.clone(), "terms")?;
    let fdoc = frame_src.document()?;
    let frame = FrameSpec::new(need(frame_src, fdoc.generators, "generators")?);
    if fdoc.dim != doc.dim {
        return Err(CliError::Input(format!("frame has dim {}, form has dim {}", fdoc.dim, doc.dim)));
    }
    let names = &doc.names;
    let mut r = Report::new("involutive");
    r.input("file", src.label.clone());
    r.input("frame_file", frame_src.label.clone());
    r.input("frame", frame_text(&frame, names));
    let points = sample_points(doc.dim, &[], samples, seed)?;
    let fr = verify_frame(&omega, &frame, &points).map_err(input_error)?;
    r.certificate("frame_in_f", fr.members());
    r.certificate("frame_independent_at_samples", fr.independent());
    r.residual("alpha_wedge_omega", fr.products.iter().map(|f| show(f, names)).collect::<Vec<_>>());
    let inv = involutivity_check(&frame, doc.dim);
    r.certificate("involutive", inv.involutive);
    r.residual("involutivity", inv.residuals.iter().map(|f| show(f, names)).collect::<Vec<_>>());
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if !fr.members() {
        return Ok(r.conclude(false, "frame is not contained in F(ω)"));
    }
    if let Some(p) = fr.dependent_at {
        return Ok(r.conclude(false, format!("frame is dependent at {}", point_text(&p))));
    }
    if inv.involutive {
        Ok(r.conclude(true, "involutive; flatness not obstructed"))
    } else {
        let nonzero: Vec<String> = inv.residuals.iter().filter(|f| !f.is_zero()).map(|f| show(f, names)).collect();
        Ok(r.conclude(false, format!("not flat: dα∧α_1∧…∧α_k = {}", nonzero.join(", "))))
    }
}

#[derive(Clone, Debug, Default)]
pub struct FlattenOptions {
    pub center: Option<String>,
    pub half_width: Option<String>,
    pub grid: Option<usize>,
    pub steps: Option<usize>,
    pub tol: Option<f64>,
}

pub fn flatten_cmd(src: &Source, opts: &FlattenOptions) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let omega = need(src, doc.form.clone(), "terms")?;
    let n = doc.dim;
    let names = &doc.names;
    let defaults = FlattenParams::default();
    let params = FlattenParams {
        half_width: match &opts.half_width {
            Some(w) => parse_rational(w).map_err(input_error)?,
            None => defaults.half_width,
        },
        samples_per_axis: opts.grid.unwrap_or(defaults.samples_per_axis),
        steps: opts.steps.unwrap_or(defaults.steps),
        tol: opts.tol.unwrap_or(defaults.tol),
    };
    let center = match &opts.center {
        Some(c) => parse_point(c, n)?,
        None => vec![Rational::from_integer(0.into()); n],
    };
    let mut r = Report::new("flatten");
    r.input("file", src.label.clone());
    r.input("center", point_text(&center));
    r.input("half_width", params.half_width.to_string());
    r.input("grid", params.samples_per_axis);
    r.input("steps", params.steps);
    r.input("tol", params.tol);
    let split = match doc.split.clone() {
        Some(s) => s,
        None => match suggest_split(&omega, &center) {
            Ok(Some(s)) => s,
            Ok(None) | Err(_) => return Ok(r.conclude(false, "no coordinate split with F = span{dy_j} at the centre")),
        },
    };
    r.input("split", split_value(&split, names));
    let report = match flatten(&omega, &split, &center, &params) {
        Ok(report) => report,
        Err(FlatnessError::Form(e)) => return Err(input_error(e)),
        Err(FlatnessError::BadBox) => return Err(input_error(FlatnessError::BadBox)),
        Err(e) => {
            r.timing("total_seconds", started.elapsed().as_secs_f64());
            return Ok(r.conclude(false, format!("not flattened: {e}")));
        }
    };
    let chart = &report.chart;
    r.certificate("theta", show(&report.setup.theta, names));
    r.certificate("omega_bar_0", show(&report.setup.omega_bar_0, names));
    r.certificate("normal_form", report.normal_basis.certificate.display_with(names).to_string());
    r.certificate("grid_points", chart.points.len());
    r.certificate("verified_at_samples", chart.verified);
    r.certificate(
        "points",
        chart
            .points
            .iter()
            .map(|p| json!({"start": p.start, "end": p.end, "residual": p.residual}))
            .collect::<Vec<_>>(),
    );
    r.residual("max", chart.max_residual);
    r.residual("mean", chart.mean_residual);
    r.timing("verify_seconds", chart.seconds);
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    let summary = format!(
        "{} at {} grid points: max residual {:e} {} tol {:e}",
        if chart.verified { "flattened" } else { "not verified" },
        chart.points.len(),
        chart.max_residual,
        if chart.verified { "<" } else { "≥" },
        chart.tol
    );
    Ok(r.conclude(chart.verified, summary))
}

fn symmetry_error(e: SymmetryError) -> CliError {
    match e {
        SymmetryError::Form(_) | SymmetryError::FieldDimension { .. } | SymmetryError::NotModel => input_error(e),
        other => internal_error(other),
    }
}

fn model(split: &CoordinateSplit) -> Result<ModelContext, CliError> {
    ModelContext::for_split(split).map_err(|_| CliError::Input("the split needs an even number of x-coordinates".into()))
}

fn split_of(src: &Source, doc: &Document) -> Result<CoordinateSplit, CliError> {
    need(src, doc.split.clone(), "split")
}

fn field_of(src: &Source, doc: &Document) -> Result<PolyVectorField, CliError> {
    PolyVectorField::new(need(src, doc.components.clone(), "components")?).map_err(input_error)
}

fn write_out(path: Option<&Path>, text: &str, r: &mut Report) -> Result<(), CliError> {
    if let Some(p) = path {
        std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        r.input("out", p.display().to_string());
    }
    Ok(())
}

pub fn symmetry_build(src: &Source, out: Option<&Path>) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let (g, split) = format::parse_generator(&src.text).map_err(|e| file_error(src, e))?;
    let names = &doc.names;
    let ctx = model(&split)?;
    let mut r = Report::new("symmetry build");
    r.input("file", src.label.clone());
    r.input("h", g.h.display_with(names).to_string());
    r.input("y", g.y.display_with(names));
    let v = build_symmetry(&g, &ctx).map_err(symmetry_error)?;
    let lie = verify_symmetry(&v, &ctx.omega());
    r.certificate("field", v.display_with(names));
    r.certificate("euler", ctx.euler.display_with(names));
    r.residual("lie_derivative", show(&lie, names));
    write_out(out, &emit_field(&v, names, Some(&split)), &mut r)?;
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if !lie.is_zero() {
        return Err(internal_error(format!("built field does not preserve ω: L_Vω = {}", show(&lie, names))));
    }
    Ok(r.conclude(true, "symmetry: L_Vω = 0"))
}

pub fn symmetry_verify(src: &Source, form: Option<&Source>) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let v = field_of(src, &doc)?;
    let names = &doc.names;
    let omega = match form {
        Some(f) => need(f, f.document()?.form, "terms")?,
        None => model(&split_of(src, &doc)?)?.omega(),
    };
    if omega.dim() != v.dim() {
        return Err(CliError::Input(format!("field has dim {}, form has dim {}", v.dim(), omega.dim())));
    }
    let mut r = Report::new("symmetry verify");
    r.input("file", src.label.clone());
    r.input("field", v.display_with(names));
    r.input("form", show(&omega, names));
    let lie = verify_symmetry(&v, &omega);
    r.residual("lie_derivative", show(&lie, names));
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if lie.is_zero() {
        Ok(r.conclude(true, "symmetry: L_Vω = 0"))
    } else {
        Ok(r.conclude(false, "not a symmetry: L_Vω ≠ 0"))
    }
}

pub fn symmetry_decompose(src: &Source, out: Option<&Path>) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let v = field_of(src, &doc)?;
    let split = split_of(src, &doc)?;
    let names = &doc.names;
    let ctx = model(&split)?;
    let mut r = Report::new("symmetry decompose");
    r.input("file", src.label.clone());
    r.input("field", v.display_with(names));
    let g = match decompose_symmetry(&v, &ctx) {
        Ok(g) => g,
        Err(SymmetryError::YDependsOnX { component, monomial, coefficient }) => {
            r.residual("x_dependent_term", format!("{coefficient}·{monomial:?} in component {}", names[component]));
            return Ok(r.conclude(false, "not a symmetry: the y-part depends on x"));
        }
        Err(SymmetryError::NotConformal { residual }) => {
            r.residual("d_x_beta", show(&residual, names));
            return Ok(r.conclude(false, "not a symmetry: the x-part is not conformally symplectic"));
        }
        Err(e) => return Err(symmetry_error(e)),
    };
    r.certificate("h", g.h.display_with(names).to_string());
    r.certificate("y", g.y.display_with(names));
    r.certificate("normalized", g.is_normalized(&split));
    write_out(out, &emit_generator(&g, names, &split), &mut r)?;
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    Ok(r.conclude(true, "symmetry: V = X_H − div_y(Y)ℰ + Y with H(0, y) = 0"))
}

pub fn symmetry_hamform(src: &Source) -> Result<Report, CliError> {
    let started = Instant::now();
    let doc = src.document()?;
    let (g, split) = format::parse_generator(&src.text).map_err(|e| file_error(src, e))?;
    let names = &doc.names;
    let ctx = model(&split)?;
    let mut r = Report::new("symmetry hamform");
    r.input("file", src.label.clone());
    let hf = hamiltonian_form_candidate(&g, &ctx).map_err(symmetry_error)?;
    r.certificate("alpha", show(&hf.alpha, names));
    r.residual("d_alpha_minus_contraction", show(&hf.residual, names));
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if hf.certifies() {
        Ok(r.conclude(true, "Hamiltonian form: dα = ι_Vω"))
    } else {
        Ok(r.conclude(false, "candidate is not a Hamiltonian form: dα ≠ ι_Vω"))
    }
}

fn pair_of(src: &Source) -> Result<(cosymplectic::CosymplecticPair, Vec<String>), CliError> {
    let doc = src.document()?;
    let pair = format::parse_pair(&src.text).map_err(|e| file_error(src, e))?;
    Ok((pair, doc.names))
}

fn cosymplectic_error(e: cosymplectic::CosymplecticError) -> CliError {
    internal_error(e)
}

pub fn cosymplectic_validate(src: &Source, samples: usize, seed: u64) -> Result<Report, CliError> {
    let started = Instant::now();
    let (pair, names) = pair_of(src)?;
    let mut r = Report::new("cosymplectic validate");
    r.input("file", src.label.clone());
    r.input("alpha", show(&pair.alpha, &names));
    r.input("beta", show(&pair.beta, &names));
    let points = sample_points(pair.dim(), &[], samples, seed)?;
    let report = match validate_pair(&pair, &points) {
        Ok(report) => report,
        Err(cosymplectic::CosymplecticError::NotClosed { which, residual }) => {
            r.residual(&format!("d_{which}"), show(&residual, &names));
            return Ok(r.conclude(false, format!("not cosymplectic: d{which} ≠ 0")));
        }
        Err(e) => return Err(cosymplectic_error(e)),
    };
    r.certificate("top_coefficient", report.top_coefficient.display_with(&names).to_string());
    r.certificate("outside_n_greater_than_1", report.below_stated_range);
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    let note = if report.below_stated_range { " (n = 1, outside the usual n > 1)" } else { "" };
    match report.volume {
        VolumeCheck::CertifiedGlobally { value } => {
            r.certificate("volume", format!("α∧β^n = {value} · vol"));
            Ok(r.conclude(true, format!("cosymplectic: certified globally{note}")))
        }
        VolumeCheck::VerifiedAtSamples { count } => {
            Ok(r.conclude(true, format!("cosymplectic: volume verified at {count} samples{note}")))
        }
        VolumeCheck::VanishesAt { point } => {
            Ok(r.conclude(false, format!("not cosymplectic: α∧β^n vanishes at {}", point_text(&point))))
        }
    }
}

pub fn cosymplectic_induce(src: &Source, samples: usize, seed: u64) -> Result<Report, CliError> {
    let started = Instant::now();
    let (pair, names) = pair_of(src)?;
    let mut r = Report::new("cosymplectic induce");
    r.input("file", src.label.clone());
    let points = sample_points(pair.dim(), &[], samples, seed)?;
    let rep = induced_dvs_report(&pair, &points).map_err(cosymplectic_error)?;
    r.certificate("omega", show(&rep.omega, &names));
    r.certificate("closed", rep.closed);
    r.certificate("frame", vec![show(&pair.alpha, &names)]);
    r.certificate("involutive", rep.involutivity.involutive);
    r.certificate(
        "types",
        rep.types.iter().map(|t| t.map(|t| format!("({},{})", t.m, t.k))).collect::<Vec<_>>(),
    );
    r.certificate("f_dims", rep.f_dims.clone());
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if rep.passed(pair.n) {
        Ok(r.conclude(true, format!("β∧α is dvs of type ({},1) at {} samples; frame {{α}} involutive", pair.n, points.len())))
    } else {
        Ok(r.conclude(false, "β∧α fails the dvs checks at the samples"))
    }
}

pub fn cosymplectic_classify(src: &Source, field: &Source) -> Result<Report, CliError> {
    let started = Instant::now();
    let (pair, names) = pair_of(src)?;
    let fdoc = field.document()?;
    let x = field_of(field, &fdoc)?;
    if x.dim() != pair.dim() {
        return Err(CliError::Input(format!("field has dim {}, pair has dim {}", x.dim(), pair.dim())));
    }
    let mut r = Report::new("cosymplectic classify");
    r.input("file", src.label.clone());
    r.input("field_file", field.label.clone());
    r.input("field", x.display_with(&names));
    let c = classify_symmetry(&x, &pair);
    r.certificate("class", c.class.to_string());
    r.certificate("alpha_of_x", c.alpha_of_x.display_with(&names).to_string());
    r.certificate("one_form", show(&c.one_form, &names));
    if let Some(p) = &c.primitive {
        r.certificate("primitive", p.display_with(&names).to_string());
    }
    r.residual("lie_alpha", show(&c.lie_alpha, &names));
    r.residual("lie_beta", show(&c.lie_beta, &names));
    r.residual("d_one_form", show(&c.closedness, &names));
    if c.class == SymmetryClass::CoHamiltonian {
        let p = coham_primitive(&x, &pair).map_err(cosymplectic_error)?;
        r.certificate("coham_gamma", p.gamma.display_with(&names).to_string());
        r.certificate("coham_primitive", show(&p.form, &names));
        r.residual("coham_primitive", show(&p.residual, &names));
    }
    let be = box_exactness_check(&x, &pair);
    r.certificate(
        "box_exactness",
        json!({
            "contraction": show(&be.contraction, &names),
            "closed": be.closed,
            "primitive": be.primitive.as_ref().map(|p| show(p, &names)),
        }),
    );
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    let summary = match c.class {
        SymmetryClass::None => "not cosymplectic".to_string(),
        SymmetryClass::CoHamiltonian => "co-Hamiltonian".to_string(),
        other if !c.alpha_of_x.is_zero() => {
            format!("{other} with α(X) = {} (hence not co-Hamiltonian)", c.alpha_of_x.display_with(&names))
        }
        other => other.to_string(),
    };
    Ok(r.conclude(c.class >= SymmetryClass::Cosymplectic, summary))
}

/// `"3"`, `"2,4"` or `"1..4"` (inclusive).
pub fn parse_range(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad range \"{text}\""));
    if let Some((a, b)) = text.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        return if a <= b { Ok((a..=b).collect()) } else { Err(bad()) };
    }
    text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

pub fn lepage(ms: &[usize], ls: Option<&[usize]>) -> Result<Report, CliError> {
    let started = Instant::now();
    let mut r = Report::new("lepage");
    r.input("m", ms.to_vec());
    if let Some(ls) = ls {
        r.input("l", ls.to_vec());
    }
    let mut rows = Vec::new();
    let mut consistent = true;
    for &m in ms {
        if m == 0 || 2 * m > dvs_core::exterior::MAX_DIM {
            return Err(CliError::Input(format!("m = {m} is outside 1..={}", dvs_core::exterior::MAX_DIM / 2)));
        }
        let b = standard_symplectic(m);
        let all: Vec<usize> = (0..=2 * m).collect();
        for &l in ls.unwrap_or(&all) {
            if l + 2 > 2 * m {
                continue;
            }
            let (injective, kernel) = lepage_injectivity(&b, l);
            if l < m && !injective {
                consistent = false;
            }
            rows.push(json!({"m": m, "l": l, "dim_lambda_l": binomial(2 * m, l), "kernel_dim": kernel, "injective": injective}));
        }
    }
    r.certificate("table", rows);
    r.timing("total_seconds", started.elapsed().as_secs_f64());
    if consistent {
        Ok(r.conclude(true, "∧ω̄ is injective on Λ^l for every l ≤ m − 1 in the table"))
    } else {
        Ok(r.conclude(false, "∧ω̄ has a kernel on some Λ^l with l ≤ m − 1"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_and_ranges() {
        assert_eq!(parse_point("1/2, 0,-3", 3).unwrap()[0], Rational::new(1.into(), 2.into()));
        assert!(matches!(parse_point("1,2", 3), Err(CliError::Input(_))));
        assert!(matches!(parse_point("1,x,2", 3), Err(CliError::Input(_))));
        assert_eq!(parse_range("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_range("2,4").unwrap(), vec![2, 4]);
        assert!(parse_range("3..1").is_err());
    }

    #[test]
    fn lepage_table() {
        let r = lepage(&[2], Some(&[2])).unwrap();
        assert_eq!(r.certificates["table"][0]["kernel_dim"], 5);
        assert!(r.verdict.affirmative);
        let r = lepage(&[3, 4], None).unwrap();
        assert!(r.verdict.affirmative);
    }

    #[test]
    fn degenerate_input_is_negative() {
        let src = Source::inline("t", include_str!("../catalogue/degenerate.json"));
        let r = analyze(&src, &AnalyzeOptions { samples: 3, ..AnalyzeOptions::default() }).unwrap();
        assert!(!r.verdict.affirmative);
        assert!(r.verdict.summary.starts_with("not multisymplectic"), "{}", r.verdict.summary);
    }

    #[test]
    fn malformed_input_is_an_input_error() {
        let src = Source::inline("t", "{\"dim\": 3, \"degree\": 1, \"terms\": [{\"indices\": [0, 0], \"poly\": []}]}");
        assert!(matches!(analyze(&src, &AnalyzeOptions::default()), Err(CliError::Input(_))));
    }
}
