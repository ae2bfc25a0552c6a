use std::fs;

use anyhow::{anyhow, Context as _, Result};
use num_complex::Complex64;
use serde_json::Value;

use triwell::dynamics::{
    beat_period, default_t_grid, default_x_grid, evolve as evolve_field, project_initial,
    InitialCondition, Well,
};
use triwell::model::{mode_for_root, Mode, ModeBranch, ROOT_TOLERANCE};
use triwell::spectra::{
    find_ep3 as solve_ep3, find_ep3_continued, spectrum as solve_spectrum, sweep_gamma,
    trace_ep3_family, Ep3Guess, Ep3Solution,
};
use triwell::waveguide::{beta_from_k, physical_separation, to_model, WaveguideSpec};
use triwell::{ComplexK, SystemParams};

use crate::output::{array, complex, fmt, num, object, Csv, OutDir};
use crate::{
    Ep3Args, EvolveArgs, Format, ModelArgs, ModesArgs, SpectrumArgs, Usage, WaveguideArgs, WellArg,
};

pub struct Context {
    pub format: Format,
    pub quiet: bool,
}

impl Context {
    fn warn(&self, msg: &str) {
        if !self.quiet {
            eprintln!("warning: {msg}");
        }
    }
}

fn params(m: &ModelArgs) -> Result<SystemParams> {
    Ok(SystemParams::new(m.gamma, m.b, m.big_gamma)?)
}

fn params_json(p: &SystemParams) -> Value {
    object([
        ("gamma", num(p.gamma())),
        ("b", num(p.b())),
        ("big_gamma", num(p.big_gamma())),
    ])
}

pub fn spectrum(a: &SpectrumArgs, ctx: &Context, out: &mut OutDir) -> Result<()> {
    let grid = &a.gamma.0;
    let first = *grid
        .first()
        .ok_or_else(|| Usage("empty gamma grid".into()))?;
    let p0 = SystemParams::new(first, a.b, a.big_gamma)?;
    let sweep = sweep_gamma(&p0, grid)?;

    for pt in &sweep {
        if let Some(r) = pt.spectrum.residuals.iter().find(|&&r| r > ROOT_TOLERANCE) {
            return Err(anyhow!(
                "root residual {r:e} above tolerance at gamma = {}",
                pt.spectrum.params.gamma()
            ));
        }
        if pt.ambiguous {
            ctx.warn(&format!(
                "near-degenerate roots at gamma = {}; branch labels ambiguous",
                pt.spectrum.params.gamma()
            ));
        }
    }

    match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["gamma", "root_index", "re_k", "im_k", "residual"]);
            for pt in &sweep {
                let s = &pt.spectrum;
                for (i, (k, r)) in s.roots.iter().zip(&s.residuals).enumerate() {
                    csv.fields(&[
                        fmt(s.params.gamma()),
                        i.to_string(),
                        fmt(k.re()),
                        fmt(k.im()),
                        fmt(*r),
                    ]);
                }
            }
            out.write("spectrum.csv", &csv.into_string())
        }
        Format::Json => {
            let points: Vec<Value> = sweep
                .iter()
                .map(|pt| {
                    let s = &pt.spectrum;
                    let roots = s
                        .roots
                        .iter()
                        .zip(&s.residuals)
                        .zip(&pt.labels)
                        .map(|((k, r), l)| {
                            object([
                                ("re_k", num(k.re())),
                                ("im_k", num(k.im())),
                                ("residual", num(*r)),
                                ("branch", Value::from(*l)),
                            ])
                        })
                        .collect();
                    object([
                        ("gamma", num(s.params.gamma())),
                        ("near_degenerate", Value::Bool(pt.ambiguous)),
                        ("roots", Value::Array(roots)),
                    ])
                })
                .collect();
            let doc = object([
                ("b", num(a.b)),
                ("big_gamma", num(a.big_gamma)),
                ("points", Value::Array(points)),
            ]);
            out.write_json("spectrum.json", &doc)
        }
    }
}

/// Modes for every root found at `p`, in descending `Re k`.
fn all_modes(p: &SystemParams) -> Result<Vec<Mode>> {
    let s = solve_spectrum(p);
    if s.roots.is_empty() {
        return Err(anyhow!("no bound-state eigenvalues found at {p}"));
    }
    let modes = s
        .roots
        .iter()
        .map(|&k| mode_for_root(k, p))
        .collect::<triwell::Result<Vec<_>>>()?;
    for (index, m) in modes.iter().enumerate() {
        let value = m.c_norm.norm();
        if value < triwell::dynamics::NORM_GUARD {
            return Err(triwell::Error::NormTooSmall { index, value }.into());
        }
    }
    Ok(modes)
}

fn branch_name(b: ModeBranch) -> &'static str {
    match b {
        ModeBranch::Regular => "regular",
        ModeBranch::GammaZeroLimit => "gamma_zero_limit",
    }
}

fn mode_json(m: &Mode, p: &SystemParams) -> Value {
    object([
        ("k", complex(m.k.value())),
        ("c_norm", complex(m.c_norm)),
        ("normalized_c_norm", complex(m.normalized_c_norm(p))),
        ("r", complex(m.r)),
        ("rho1", complex(m.rho1)),
        ("rho2", complex(m.rho2)),
        ("branch", Value::from(branch_name(m.branch))),
    ])
}

pub fn modes(a: &ModesArgs, ctx: &Context, out: &mut OutDir) -> Result<()> {
    let p = params(&a.model)?;
    let x =
        a.x.as_ref()
            .map_or_else(|| default_x_grid(&p), |g| g.0.clone());
    let modes = all_modes(&p)?;

    let mut entries = Vec::new();
    for (i, m) in modes.iter().enumerate() {
        let w = m.wavefunction(&p);
        let psi: Vec<Complex64> = x.iter().map(|&xi| w.eval(xi)).collect();
        let mut entry = match mode_json(m, &p) {
            Value::Object(o) => o,
            _ => unreachable!(),
        };
        entry.insert("index".into(), Value::from(i + 1));
        match ctx.format {
            Format::Csv => {
                let name = format!("mode_{}.csv", i + 1);
                let mut csv = Csv::new(&["x", "re_psi", "im_psi"]);
                for (xi, v) in x.iter().zip(&psi) {
                    csv.row(&[*xi, v.re, v.im]);
                }
                out.write(&name, &csv.into_string())?;
                entry.insert("file".into(), Value::from(name));
            }
            Format::Json => {
                entry.insert("re_psi".into(), array(psi.iter().map(|v| v.re)));
                entry.insert("im_psi".into(), array(psi.iter().map(|v| v.im)));
            }
        }
        entries.push(Value::Object(entry));
    }

    let mut doc = match params_json(&p) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    doc.insert(
        "phase_convention".into(),
        Value::from("r = 1 (psi(0) = 2); limit branch r = 0 with rho = -i(1-2k)/k"),
    );
    if ctx.format == Format::Json {
        doc.insert("x".into(), array(x.iter().copied()));
    }
    doc.insert("modes".into(), Value::Array(entries));
    out.write_json("modes.json", &Value::Object(doc))
}

pub fn evolve(a: &EvolveArgs, ctx: &Context, out: &mut OutDir) -> Result<()> {
    let p = params(&a.model)?;
    let modes = all_modes(&p)?;
    let ic = match &a.coeffs {
        Some(c) => InitialCondition::coefficients(c.0.clone())?,
        None => {
            let well = match a.ic {
                WellArg::Left => Well::Left,
                WellArg::Middle => Well::Middle,
                WellArg::Right => Well::Right,
            };
            InitialCondition::gaussian(well, a.width)?
        }
    };
    let coeffs = project_initial(&ic, &modes, &p)?;
    let period = beat_period(&modes);
    let t = match (&a.t, &period) {
        (Some(g), _) => g.0.clone(),
        (None, Ok(per)) => default_t_grid(*per),
        (None, Err(e)) => {
            return Err(anyhow!(
                "{e}; no default time grid without a beat period, pass --t"
            ))
        }
    };
    let x =
        a.x.as_ref()
            .map_or_else(|| default_x_grid(&p), |g| g.0.clone());
    let field = evolve_field(&modes, &coeffs, &p, &t, &x)?;
    let (peak, it, ix) = field.peak();

    let field_name = match ctx.format {
        Format::Csv => {
            let mut csv = Csv::new(&["t", "x", "intensity"]);
            for (i, &ti) in t.iter().enumerate() {
                for (j, &xj) in x.iter().enumerate() {
                    csv.row(&[ti, xj, field.get(i, j)]);
                }
            }
            out.write("field.csv", &csv.into_string())?;
            "field.csv"
        }
        Format::Json => {
            let rows: Vec<Value> = (0..t.len())
                .map(|i| array(field.row(i).iter().copied()))
                .collect();
            let doc = object([
                ("t", array(t.iter().copied())),
                ("x", array(x.iter().copied())),
                ("intensity", Value::Array(rows)),
            ]);
            out.write_json("field.json", &doc)?;
            "field.json"
        }
    };
    if period.is_err() {
        ctx.warn("eigenvalues are not all real; intensity may grow without bound");
    }

    let meta = object([
        ("params", params_json(&p)),
        ("initial_condition", Value::from(ic.description())),
        (
            "eigenvalues",
            Value::Array(modes.iter().map(|m| complex(m.k.value())).collect()),
        ),
        (
            "c_norms",
            Value::Array(modes.iter().map(|m| complex(m.c_norm)).collect()),
        ),
        (
            "coefficients",
            Value::Array(coeffs.iter().map(|&c| complex(c)).collect()),
        ),
        (
            "beat_period",
            period.as_ref().map_or(Value::Null, |&v| num(v)),
        ),
        (
            "peak",
            object([
                ("intensity", num(peak)),
                ("t", num(t[it])),
                ("x", num(x[ix])),
            ]),
        ),
        ("t_points", Value::from(t.len())),
        ("x_points", Value::from(x.len())),
        ("field", Value::from(field_name)),
    ]);
    out.write_json("evolve.json", &meta)
}

fn ep3_json(s: &Ep3Solution) -> Value {
    object([
        ("big_gamma", num(s.big_gamma)),
        ("gamma", num(s.gamma)),
        ("b", num(s.b)),
        ("k", num(s.k)),
        ("residuals", array(s.condition_residuals)),
        ("iterations", Value::from(s.iterations)),
    ])
}

fn guess_from_file(path: &std::path::Path) -> Result<Ep3Guess> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read guess file {}", path.display()))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Usage(format!("guess file {}: {e}", path.display())))?;
    let field = |key: &str| {
        doc.get(key).and_then(Value::as_f64).ok_or_else(|| {
            Usage(format!(
                "guess file {} lacks numeric '{key}'",
                path.display()
            ))
        })
    };
    Ok(Ep3Guess {
        gamma: field("gamma")?,
        b: field("b")?,
        k: field("k")?,
    })
}

pub fn find_ep3(a: &Ep3Args, ctx: &Context, out: &mut OutDir) -> Result<()> {
    let guess = match (&a.guess, &a.guess_file) {
        (Some(list), _) => match list.0.as_slice() {
            &[gamma, b, k] => Some(Ep3Guess { gamma, b, k }),
            _ => return Err(Usage("--guess takes GAMMA,B,K".into()).into()),
        },
        (None, Some(path)) => Some(guess_from_file(path)?),
        (None, None) => None,
    };
    let sol = match guess {
        Some(g) => solve_ep3(a.big_gamma, g)?,
        None => find_ep3_continued(a.big_gamma)?,
    };

    let mut doc = match ep3_json(&sol) {
        Value::Object(o) => o,
        _ => unreachable!(),
    };
    let mut failure = None;
    if let Some(span) = a.trace {
        let trace = trace_ep3_family((span.lo, span.hi), span.count)?;
        match ctx.format {
            Format::Csv => {
                let mut csv = Csv::new(&[
                    "big_gamma",
                    "gamma",
                    "b",
                    "k",
                    "residual_f",
                    "residual_df",
                    "residual_d2f",
                    "iterations",
                ]);
                for s in &trace.solutions {
                    let mut fields: Vec<String> = [s.big_gamma, s.gamma, s.b, s.k]
                        .into_iter()
                        .chain(s.condition_residuals)
                        .map(fmt)
                        .collect();
                    fields.push(s.iterations.to_string());
                    csv.fields(&fields);
                }
                out.write("ep3_trace.csv", &csv.into_string())?;
            }
            Format::Json => {
                let pts = Value::Array(trace.solutions.iter().map(ep3_json).collect());
                out.write_json("ep3_trace.json", &pts)?;
            }
        }
        doc.insert(
            "trace".into(),
            object([
                ("points", Value::from(trace.solutions.len())),
                ("gamma_increasing", Value::Bool(trace.gamma_increasing)),
                ("b_decreasing", Value::Bool(trace.b_decreasing)),
                (
                    "failure",
                    trace.failure.as_ref().map_or(Value::Null, |f| {
                        object([
                            ("big_gamma", num(f.big_gamma)),
                            ("error", Value::from(f.error.to_string())),
                        ])
                    }),
                ),
            ]),
        );
        failure = trace.failure;
    }
    out.write_json("ep3.json", &Value::Object(doc))?;
    match failure {
        Some(f) => Err(anyhow::Error::new(f.error)
            .context(format!("trace stopped at Gamma = {}", f.big_gamma))),
        None => Ok(()),
    }
}

pub fn waveguide(a: &WaveguideArgs, ctx: &Context, out: &mut OutDir) -> Result<()> {
    let spec = WaveguideSpec {
        n0: a.n0,
        delta_n: a.delta_n,
        delta_n_prime: a.delta_n_prime,
        lambda0: a.lambda0,
        a: a.a,
        delta_n_mid: a.delta_n_mid,
    };
    let scales = to_model(&spec)?;
    if !spec.is_weak_contrast() {
        ctx.warn(&format!(
            "index contrast |dn|/n0 = {} is not small; the delta-well model is a poor approximation",
            spec.contrast_ratio()
        ));
    }
    let betas = match &a.k {
        Some(list) => list
            .0
            .iter()
            .map(|&k| {
                let k = ComplexK::from_complex(k)?;
                Ok(object([
                    ("k", complex(k.value())),
                    ("beta", complex(beta_from_k(k, &scales, spec.n0))),
                ]))
            })
            .collect::<triwell::Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let separation = match a.b {
        Some(b) if b > 0.0 && b.is_finite() => object([
            ("b", num(b)),
            ("microns", num(physical_separation(b, &scales))),
        ]),
        Some(b) => return Err(Usage(format!("--b must be > 0, got {b}")).into()),
        None => Value::Null,
    };
    let doc = object([
        ("n0", num(spec.n0)),
        ("delta_n", num(spec.delta_n)),
        ("delta_n_prime", num(spec.delta_n_prime)),
        ("lambda0", num(spec.lambda0)),
        ("a", num(spec.a)),
        ("ell", num(scales.ell)),
        ("big_l", num(scales.big_l)),
        ("gamma", num(scales.gamma)),
        ("k0", num(scales.k0)),
        ("big_gamma", scales.big_gamma.map_or(Value::Null, num)),
        ("contrast_ratio", num(spec.contrast_ratio())),
        ("weak_contrast", Value::Bool(spec.is_weak_contrast())),
        ("beta", Value::Array(betas)),
        ("separation", separation),
    ]);
    out.write_json("waveguide.json", &doc)
}
