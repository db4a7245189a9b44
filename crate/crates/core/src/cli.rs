//! Command-line interface: argument parsing, config-file merging and
//! CSV/JSON emission. Lives in the library so the whole surface is
//! testable; the binary wraps [`run`].
//!
//! Exit codes: 0 success, 1 failed validation checks, 2 usage error,
//! 3 numerical non-convergence. Error text goes to standard error only;
//! artifacts are written once, to stdout or `--output`.

use crate::analysis::{
    find_peak, limit_audit, sweep, AnalysisError, SweepFamily, SweepScale, SweepSpec,
    SweptVariable,
};
use crate::models::{Polarization, SurfaceModel};
use crate::quadrature::QuadratureConfig;
use crate::shifts::{
    general_shift, general_shift_omega, large_distance_asymptote, nondisp_closed, nondisp_large_n,
    plasma_total, pm_shift, small_distance_asymptote, sp_only_shift, Geometry, Orientation,
    ScaledShift, ShiftError,
};
use crate::units::{self, LabInputs};

use std::collections::BTreeMap;
use std::fmt::Write as _;

const USAGE: &str = "usage: mushift <command> [flags]

commands:
  shift     evaluate a single scaled shift
  sweep     tabulate shifts over a parameter range
  peak      locate the dispersive enhancement peak
  validate  run the numerical cross-check suite
  convert   convert lab inputs (eV, nm) to dimensionless products

common flags:
  --config <file>           key=value defaults merged before flags (flags win)
  --format json|csv         output format (sweep defaults to csv, others json)
  --output <file>           write the artifact to a file instead of stdout
  --rel-tol --abs-tol --max-subdivisions --tail-cut
                            quadrature overrides

shift flags:
  --model pm|nondispersive|plasma|dispersive
  --orientation perp|para
  --n <x>                   refractive index (nondispersive)
  --omega-p-d <x> --omega-t-d <x>
                            dimensionless products
  --omega-p-ev <x> --omega-t-ev <x> --z-nm <x>
                            lab inputs (do not mix with products)
  --evaluator auto|omega|sp-only|small-distance|large-distance|large-n

sweep flags:
  --family nondispersive|plasma|dispersive
  --var sqrt-chi0|omega-p-d|distance
  --range lo:hi  --points <n>  --scale linear|log  --orientation perp|para
  --omega-t-d <x>            (dispersive sqrt-chi0 sweeps)
  --omega-t-over-omega-p <x> (dispersive distance sweeps)

peak flags:
  --omega-t-d <x> | --omega-t-ev <x> --z-nm <x>
  --orientation perp|para

convert flags:
  --z-nm <x>  [--omega-p-ev <x>] [--omega-t-ev <x>]
";

/// Serializes every float with 17 significant digits.
fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

fn json_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl From<ShiftError> for CliError {
    fn from(e: ShiftError) -> Self {
        match e {
            ShiftError::NonConvergence { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Shift(ShiftError::NonConvergence { .. }) => {
                CliError::Numerical(e.to_string())
            }
            AnalysisError::AllRowsFailed(_) => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Flag map in deterministic order.
type Flags = BTreeMap<String, String>;

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut flags = Flags::new();
    let mut i = 0;
    while i < args.len() {
        let a = &args[i];
        let Some(stripped) = a.strip_prefix("--") else {
            return Err(CliError::Usage(format!("unexpected argument `{a}`")));
        };
        if let Some((k, v)) = stripped.split_once('=') {
            flags.insert(k.to_string(), v.to_string());
            i += 1;
        } else {
            let v = args
                .get(i + 1)
                .ok_or_else(|| CliError::Usage(format!("flag --{stripped} needs a value")))?;
            flags.insert(stripped.to_string(), v.clone());
            i += 2;
        }
    }
    Ok(flags)
}

/// Line-oriented `key=value` config file; `#` starts a comment.
fn parse_config_file(path: &str) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {path}: {e}")))?;
    let mut flags = Flags::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config file {path}:{}: expected key=value, got `{line}`",
                lineno + 1
            )));
        };
        flags.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(flags)
}

struct FlagReader {
    flags: Flags,
    known: Vec<&'static str>,
}

impl FlagReader {
    fn new(flags: Flags) -> Self {
        FlagReader { flags, known: vec!["config", "format", "output"] }
    }

    fn take(&mut self, key: &'static str) -> Option<String> {
        self.known.push(key);
        self.flags.remove(key)
    }

    fn take_f64(&mut self, key: &'static str) -> Result<Option<f64>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("--{key}: `{v}` is not a number"))),
        }
    }

    fn take_u32(&mut self, key: &'static str) -> Result<Option<u32>, CliError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<u32>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("--{key}: `{v}` is not an integer"))),
        }
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.flags.retain(|k, _| !self.known.contains(&k.as_str()));
        if let Some((k, _)) = self.flags.iter().next() {
            return Err(CliError::Usage(format!("unknown flag --{k}")));
        }
        Ok(())
    }
}

fn parse_orientation(r: &mut FlagReader) -> Result<Orientation, CliError> {
    match r.take("orientation").as_deref() {
        None | Some("perp") | Some("perpendicular") => Ok(Orientation::Perpendicular),
        Some("para") | Some("parallel") => Ok(Orientation::Parallel),
        Some(v) => Err(CliError::Usage(format!("--orientation: `{v}` (use perp|para)"))),
    }
}

fn parse_quad_config(r: &mut FlagReader) -> Result<QuadratureConfig, CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(v) = r.take_f64("rel-tol")? {
        cfg.rel_tol = v;
    }
    if let Some(v) = r.take_f64("abs-tol")? {
        cfg.abs_tol = v;
    }
    if let Some(v) = r.take_u32("max-subdivisions")? {
        cfg.max_subdivisions = v;
    }
    if let Some(v) = r.take_f64("tail-cut")? {
        cfg.tail_cut = v;
    }
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

/// Resolves model parameters from either dimensionless products or lab
/// pairs; mixing both is a usage error. Returns the model, the distance
/// (unity when only products are given) and the resolved input listing.
struct ResolvedModel {
    model: SurfaceModel,
    geometry: Geometry,
    inputs: Vec<(String, String)>,
}

fn resolve_model(r: &mut FlagReader) -> Result<ResolvedModel, CliError> {
    let model_name = r
        .take("model")
        .ok_or_else(|| CliError::Usage("--model is required".into()))?;
    let n = r.take_f64("n")?;
    let omega_p_d = r.take_f64("omega-p-d")?;
    let omega_t_d = r.take_f64("omega-t-d")?;
    let omega_p_ev = r.take_f64("omega-p-ev")?;
    let omega_t_ev = r.take_f64("omega-t-ev")?;
    let z_nm = r.take_f64("z-nm")?;
    let distance = r.take_f64("distance")?;

    let lab_given = omega_p_ev.is_some() || omega_t_ev.is_some() || z_nm.is_some();
    let product_given = omega_p_d.is_some() || omega_t_d.is_some();
    if lab_given && product_given {
        return Err(CliError::Usage(
            "give either dimensionless products (--omega-p-d/--omega-t-d) or lab inputs (--omega-p-ev/--omega-t-ev with --z-nm), not both".into(),
        ));
    }
    if lab_given && z_nm.is_none() {
        return Err(CliError::Usage("lab inputs require --z-nm".into()));
    }

    let mut inputs: Vec<(String, String)> = vec![("model".into(), model_name.clone())];
    let (wpd, wtd) = if lab_given {
        let lab = LabInputs::new(z_nm.unwrap(), omega_p_ev, omega_t_ev)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let nat = units::to_natural(&lab);
        inputs.push(("z_nm".into(), fmt_f64(lab.z_nm)));
        if let Some(v) = omega_p_ev {
            inputs.push(("omega_p_ev".into(), fmt_f64(v)));
        }
        if let Some(v) = omega_t_ev {
            inputs.push(("omega_t_ev".into(), fmt_f64(v)));
        }
        (nat.omega_p_d, nat.omega_t_d)
    } else {
        (omega_p_d, omega_t_d)
    };

    let geometry = Geometry::new(distance.unwrap_or(1.0))?;
    let model = match model_name.as_str() {
        "pm" | "perfect-reflector" => SurfaceModel::PerfectReflector,
        "nondispersive" => {
            let n = n.ok_or_else(|| CliError::Usage("nondispersive model needs --n".into()))?;
            inputs.push(("n".into(), fmt_f64(n)));
            SurfaceModel::nondispersive(n).map_err(|e| CliError::Usage(e.to_string()))?
        }
        "plasma" => {
            let wpd = wpd.ok_or_else(|| {
                CliError::Usage("plasma model needs --omega-p-d or --omega-p-ev".into())
            })?;
            inputs.push(("omega_p_d".into(), fmt_f64(wpd)));
            // scale invariance: only the product matters, so fold it into
            // omega_p at the resolved distance
            SurfaceModel::plasma(wpd / geometry.d()).map_err(|e| CliError::Usage(e.to_string()))?
        }
        "dispersive" => {
            let wpd = wpd.ok_or_else(|| {
                CliError::Usage("dispersive model needs --omega-p-d or --omega-p-ev".into())
            })?;
            let wtd = wtd.ok_or_else(|| {
                CliError::Usage("dispersive model needs --omega-t-d or --omega-t-ev".into())
            })?;
            inputs.push(("omega_p_d".into(), fmt_f64(wpd)));
            inputs.push(("omega_t_d".into(), fmt_f64(wtd)));
            SurfaceModel::dispersive(wpd / geometry.d(), wtd / geometry.d())
                .map_err(|e| CliError::Usage(e.to_string()))?
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown model `{other}` (use pm|nondispersive|plasma|dispersive)"
            )));
        }
    };
    Ok(ResolvedModel { model, geometry, inputs })
}

fn orientation_str(o: Orientation) -> &'static str {
    match o {
        Orientation::Perpendicular => "perpendicular",
        Orientation::Parallel => "parallel",
    }
}

fn shift_json(s: &ScaledShift, inputs: &[(String, String)]) -> String {
    let mut out = String::from("{\n");
    let _ = writeln!(out, "  \"value\": {},", json_f64(s.s_hat));
    let _ = writeln!(out, "  \"est_err\": {},", json_f64(s.est_err));
    let _ = writeln!(out, "  \"method\": {},", json_str(s.method.as_str()));
    match &s.breakdown {
        Some(b) => {
            let field = |v: Option<f64>| v.map_or("null".to_string(), json_f64);
            let _ = writeln!(
                out,
                "  \"breakdown\": {{\"te\": {}, \"tm\": {}, \"sp\": {}}},",
                field(b.te),
                field(b.tm),
                field(b.sp)
            );
        }
        None => {
            let _ = writeln!(out, "  \"breakdown\": null,");
        }
    }
    if let Some(w) = &s.warning {
        let _ = writeln!(out, "  \"warning\": {},", json_str(w));
    }
    let _ = writeln!(out, "  \"inputs\": {{");
    for (i, (k, v)) in inputs.iter().enumerate() {
        let comma = if i + 1 == inputs.len() { "" } else { "," };
        // numbers were already formatted with fmt_f64; quote everything else
        let value = if v.parse::<f64>().is_ok() && v.contains('e') {
            v.clone()
        } else {
            json_str(v)
        };
        let _ = writeln!(out, "    {}: {}{}", json_str(k), value, comma);
    }
    let _ = writeln!(out, "  }},");
    let _ = writeln!(out, "  \"version\": {}", json_str(crate::VERSION));
    out.push_str("}\n");
    out
}

fn cmd_shift(mut r: FlagReader, format: Format) -> Result<String, CliError> {
    let cfg = parse_quad_config(&mut r)?;
    let orientation = parse_orientation(&mut r)?;
    let evaluator = r.take("evaluator").unwrap_or_else(|| "auto".into());
    let resolved = resolve_model(&mut r)?;
    r.finish()?;

    let ResolvedModel { model, geometry, mut inputs } = resolved;
    inputs.push(("orientation".into(), orientation_str(orientation).into()));
    inputs.push(("evaluator".into(), evaluator.clone()));

    let shift = match (evaluator.as_str(), &model) {
        ("auto", SurfaceModel::PerfectReflector) => pm_shift(orientation, geometry),
        ("auto", SurfaceModel::Nondispersive { n }) => nondisp_closed(*n, orientation, geometry)?,
        ("auto", SurfaceModel::Plasma { omega_p }) => {
            plasma_total(*omega_p, orientation, geometry, &cfg)?
        }
        ("auto", _) => general_shift(&model, orientation, geometry, &cfg)?,
        ("omega", _) => general_shift_omega(&model, orientation, geometry, &cfg)?,
        ("sp-only", _) => sp_only_shift(&model, orientation, geometry, &cfg)?,
        ("small-distance", _) => small_distance_asymptote(&model, orientation, geometry)?,
        ("large-distance", _) => large_distance_asymptote(&model, orientation, geometry)?,
        ("large-n", SurfaceModel::Nondispersive { n }) => {
            nondisp_large_n(*n, orientation, geometry)?
        }
        ("large-n", _) => {
            return Err(CliError::Usage("--evaluator large-n needs the nondispersive model".into()));
        }
        (other, _) => {
            return Err(CliError::Usage(format!(
                "unknown evaluator `{other}` (auto|omega|sp-only|small-distance|large-distance|large-n)"
            )));
        }
    };

    Ok(match format {
        Format::Json => shift_json(&shift, &inputs),
        Format::Csv => {
            let mut out = format!("# version={}\n", crate::VERSION);
            out.push_str("value,est_err,method\n");
            let _ = writeln!(
                out,
                "{},{},{}",
                fmt_f64(shift.s_hat),
                fmt_f64(shift.est_err),
                shift.method.as_str()
            );
            out
        }
    })
}

fn cmd_sweep(mut r: FlagReader, format: Format) -> Result<String, CliError> {
    let cfg = parse_quad_config(&mut r)?;
    let orientation = parse_orientation(&mut r)?;
    let family_name = r
        .take("family")
        .ok_or_else(|| CliError::Usage("--family is required".into()))?;
    let var = match r.take("var").as_deref() {
        Some("sqrt-chi0") => SweptVariable::SqrtChi0,
        Some("omega-p-d") => SweptVariable::OmegaPD,
        Some("distance") => SweptVariable::Distance,
        Some(v) => {
            return Err(CliError::Usage(format!(
                "--var: `{v}` (use sqrt-chi0|omega-p-d|distance)"
            )));
        }
        None => return Err(CliError::Usage("--var is required".into())),
    };
    let range = r
        .take("range")
        .ok_or_else(|| CliError::Usage("--range lo:hi is required".into()))?;
    let (lo, hi) = range
        .split_once(':')
        .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)))
        .ok_or_else(|| CliError::Usage(format!("--range: `{range}` is not lo:hi")))?;
    let points = r.take_u32("points")?.unwrap_or(50);
    let scale = match r.take("scale").as_deref() {
        None | Some("linear") => SweepScale::Linear,
        Some("log") => SweepScale::Log,
        Some(v) => return Err(CliError::Usage(format!("--scale: `{v}` (use linear|log)"))),
    };
    let omega_t_d = r.take_f64("omega-t-d")?;
    let ratio = r.take_f64("omega-t-over-omega-p")?;
    r.finish()?;

    let family = match family_name.as_str() {
        "nondispersive" => SweepFamily::Nondispersive,
        "plasma" => SweepFamily::Plasma,
        "dispersive" => SweepFamily::Dispersive { omega_t_d, omega_t_over_omega_p: ratio },
        other => {
            return Err(CliError::Usage(format!(
                "unknown family `{other}` (nondispersive|plasma|dispersive)"
            )));
        }
    };
    let spec = SweepSpec { family, variable: var, lo, hi, points, scale, orientation };
    let result = sweep(&spec, &cfg)?;

    Ok(match format {
        Format::Csv => {
            let mut out = format!("# version={}\n", crate::VERSION);
            out.push_str("x,s_hat,est_err,method\n");
            for row in &result.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_f64(row.x),
                    row.s_hat.map_or("nan".into(), fmt_f64),
                    row.est_err.map_or("nan".into(), fmt_f64),
                    row.method.map_or("failed", |m| m.as_str()),
                );
            }
            out
        }
        Format::Json => {
            let mut out = String::from("{\n  \"rows\": [\n");
            for (i, row) in result.rows.iter().enumerate() {
                let comma = if i + 1 == result.rows.len() { "" } else { "," };
                match (row.s_hat, row.est_err, row.method) {
                    (Some(s), Some(e), Some(m)) => {
                        let _ = writeln!(
                            out,
                            "    {{\"x\": {}, \"s_hat\": {}, \"est_err\": {}, \"method\": {}}}{}",
                            json_f64(row.x),
                            json_f64(s),
                            json_f64(e),
                            json_str(m.as_str()),
                            comma
                        );
                    }
                    _ => {
                        let _ = writeln!(
                            out,
                            "    {{\"x\": {}, \"error\": {}}}{}",
                            json_f64(row.x),
                            json_str(row.error.as_deref().unwrap_or("failed")),
                            comma
                        );
                    }
                }
            }
            let _ = writeln!(out, "  ],");
            let _ = writeln!(out, "  \"variable\": {},", json_str(result.variable));
            let _ = writeln!(out, "  \"orientation\": {},", json_str(orientation_str(orientation)));
            let _ = writeln!(out, "  \"version\": {}", json_str(crate::VERSION));
            out.push_str("}\n");
            out
        }
    })
}

fn cmd_peak(mut r: FlagReader, format: Format) -> Result<String, CliError> {
    let cfg = parse_quad_config(&mut r)?;
    let orientation = parse_orientation(&mut r)?;
    let omega_t_d = r.take_f64("omega-t-d")?;
    let omega_t_ev = r.take_f64("omega-t-ev")?;
    let z_nm = r.take_f64("z-nm")?;
    r.finish()?;

    let wtd = match (omega_t_d, omega_t_ev, z_nm) {
        (Some(v), None, None) => v,
        (None, Some(ev), Some(z)) => {
            let lab = LabInputs::new(z, None, Some(ev)).map_err(|e| CliError::Usage(e.to_string()))?;
            units::to_natural(&lab).omega_t_d.expect("omega_t provided")
        }
        _ => {
            return Err(CliError::Usage(
                "give --omega-t-d, or --omega-t-ev with --z-nm (not both)".into(),
            ));
        }
    };
    let report = find_peak(wtd, orientation, &cfg)?;

    Ok(match format {
        Format::Json => {
            let opt = |v: Option<f64>| v.map_or("null".to_string(), json_f64);
            let mut out = String::from("{\n");
            let _ = writeln!(out, "  \"found\": {},", report.found);
            let _ = writeln!(out, "  \"location\": {},", opt(report.location));
            let _ = writeln!(out, "  \"height\": {},", opt(report.height));
            let _ = writeln!(
                out,
                "  \"enhancement_vs_nondisp\": {},",
                opt(report.enhancement_vs_nondisp)
            );
            let _ = writeln!(out, "  \"omega_t_d\": {},", json_f64(report.omega_t_d));
            let _ = writeln!(out, "  \"orientation\": {},", json_str(orientation_str(orientation)));
            let _ = writeln!(out, "  \"version\": {}", json_str(crate::VERSION));
            out.push_str("}\n");
            out
        }
        Format::Csv => {
            let mut out = format!("# version={}\n", crate::VERSION);
            out.push_str("found,location,height,enhancement_vs_nondisp,omega_t_d\n");
            let opt = |v: Option<f64>| v.map_or("nan".to_string(), fmt_f64);
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                report.found,
                opt(report.location),
                opt(report.height),
                opt(report.enhancement_vs_nondisp),
                fmt_f64(report.omega_t_d)
            );
            out
        }
    })
}

fn cmd_convert(mut r: FlagReader, format: Format) -> Result<String, CliError> {
    let _ = parse_quad_config(&mut r)?;
    let z_nm = r
        .take_f64("z-nm")?
        .ok_or_else(|| CliError::Usage("--z-nm is required".into()))?;
    let omega_p_ev = r.take_f64("omega-p-ev")?;
    let omega_t_ev = r.take_f64("omega-t-ev")?;
    r.finish()?;

    let lab = LabInputs::new(z_nm, omega_p_ev, omega_t_ev)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let nat = units::to_natural(&lab);
    let scale = units::pm_relative_scale_at_1nm() / (z_nm * z_nm);

    Ok(match format {
        Format::Json => {
            let opt = |v: Option<f64>| v.map_or("null".to_string(), json_f64);
            let mut out = String::from("{\n");
            let _ = writeln!(out, "  \"omega_p_d\": {},", opt(nat.omega_p_d));
            let _ = writeln!(out, "  \"omega_t_d\": {},", opt(nat.omega_t_d));
            let _ = writeln!(out, "  \"m_d\": {},", json_f64(nat.m_d));
            let _ = writeln!(out, "  \"relative_shift_per_unit_s\": {},", json_f64(scale));
            let _ = writeln!(out, "  \"inputs\": {{\"z_nm\": {}}},", json_f64(z_nm));
            let _ = writeln!(out, "  \"version\": {}", json_str(crate::VERSION));
            out.push_str("}\n");
            out
        }
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or("nan".to_string(), fmt_f64);
            let mut out = format!("# version={}\n", crate::VERSION);
            out.push_str("omega_p_d,omega_t_d,m_d,relative_shift_per_unit_s\n");
            let _ = writeln!(
                out,
                "{},{},{},{}",
                opt(nat.omega_p_d),
                opt(nat.omega_t_d),
                fmt_f64(nat.m_d),
                fmt_f64(scale)
            );
            out
        }
    })
}

struct Check {
    name: &'static str,
    got: f64,
    want: f64,
    tol: f64,
}

impl Check {
    fn passed(&self) -> bool {
        (self.got - self.want).abs() <= self.tol
    }
}

/// The cross-check suite behind `mushift validate`. Returns the rendered
/// report and whether every check passed.
fn run_validation(cfg: &QuadratureConfig) -> Result<(String, bool), CliError> {
    let unit = Geometry::new(1.0).expect("unit");
    let mut checks: Vec<Check> = Vec::new();

    // perfect-mirror exactness
    checks.push(Check {
        name: "pm perpendicular is +1",
        got: pm_shift(Orientation::Perpendicular, unit).s_hat,
        want: 1.0,
        tol: 0.0,
    });
    checks.push(Check {
        name: "pm parallel is -1",
        got: pm_shift(Orientation::Parallel, unit).s_hat,
        want: -1.0,
        tol: 0.0,
    });

    // closed form vs wedge quadrature
    for n in [1.5, 2.0, 5.0] {
        let model = SurfaceModel::nondispersive(n).map_err(|e| CliError::Usage(e.to_string()))?;
        for o in [Orientation::Perpendicular, Orientation::Parallel] {
            let c = nondisp_closed(n, o, unit)?;
            let q = general_shift(&model, o, unit, cfg)?;
            checks.push(Check {
                name: match (n as u32, o) {
                    (1, Orientation::Perpendicular) => "closed-form oracle n=1.5 perpendicular",
                    (1, Orientation::Parallel) => "closed-form oracle n=1.5 parallel",
                    (2, Orientation::Perpendicular) => "closed-form oracle n=2 perpendicular",
                    (2, Orientation::Parallel) => "closed-form oracle n=2 parallel",
                    (_, Orientation::Perpendicular) => "closed-form oracle n=5 perpendicular",
                    (_, Orientation::Parallel) => "closed-form oracle n=5 parallel",
                },
                got: q.s_hat,
                want: c.s_hat,
                tol: 1e-6 * c.s_hat.abs(),
            });
        }
    }

    // representation equivalence
    let disp = SurfaceModel::dispersive(2.0, 1.0).map_err(|e| CliError::Usage(e.to_string()))?;
    let n2 = SurfaceModel::nondispersive(2.0).map_err(|e| CliError::Usage(e.to_string()))?;
    for (name, model, o) in [
        ("representation equivalence nondispersive perpendicular", &n2, Orientation::Perpendicular),
        ("representation equivalence nondispersive parallel", &n2, Orientation::Parallel),
        ("representation equivalence dispersive perpendicular", &disp, Orientation::Perpendicular),
    ] {
        let w = general_shift(model, o, unit, cfg)?;
        let om = general_shift_omega(model, o, unit, cfg)?;
        checks.push(Check { name, got: om.s_hat, want: w.s_hat, tol: 1e-5 * w.s_hat.abs() });
    }

    // reflection-coefficient parameterizations agree pointwise
    let mut worst: f64 = 0.0;
    for &xi in &[0.01f64, 0.7, 4.0] {
        for &k in &[0.1, 1.0, 9.0] {
            let eta = (xi * xi + k * k).sqrt() / xi;
            let pt = crate::models::ImaginaryFrequencyPoint::new(xi, eta)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            for pol in [Polarization::Te, Polarization::Tm] {
                let a = disp.reflection_omega(pol, xi, k).map_err(|e| CliError::Usage(e.to_string()))?;
                let b = disp.reflection_xi_eta(pol, pt).map_err(|e| CliError::Usage(e.to_string()))?;
                worst = worst.max((a - b).abs());
            }
        }
    }
    checks.push(Check { name: "reflection parameterizations agree", got: worst, want: 0.0, tol: 1e-12 });

    // vacuum nullity through the quadrature route
    let vacuum = SurfaceModel::custom(|_| 1.0).map_err(|e| CliError::Usage(e.to_string()))?;
    let v = general_shift(&vacuum, Orientation::Perpendicular, unit, cfg)?;
    checks.push(Check { name: "vacuum nullity", got: v.s_hat, want: 0.0, tol: 1e-10 });

    // scale invariance of the plasma evaluator
    let s1 = plasma_total(3.0, Orientation::Perpendicular, Geometry::new(0.7).expect("d"), cfg)?;
    let s2 = plasma_total(6.0, Orientation::Perpendicular, Geometry::new(0.35).expect("d"), cfg)?;
    checks.push(Check {
        name: "plasma scale invariance",
        got: s2.s_hat,
        want: s1.s_hat,
        tol: 1e-8 * s1.s_hat.abs(),
    });

    // plasma short-distance asymptote
    let plasma_small = SurfaceModel::plasma(1e-3).map_err(|e| CliError::Usage(e.to_string()))?;
    let asym = small_distance_asymptote(&plasma_small, Orientation::Perpendicular, unit)?;
    let full = plasma_total(1e-3, Orientation::Perpendicular, unit, cfg)?;
    checks.push(Check {
        name: "plasma short-distance asymptote",
        got: asym.s_hat,
        want: full.s_hat,
        tol: 0.05 * full.s_hat.abs(),
    });

    // limit-commutation audit
    let audit = limit_audit(cfg)?;
    for c in &audit.checks {
        checks.push(Check {
            name: match c.id {
                "nondispersive-vs-pm" => "limit audit: nondispersive diverges from pm",
                "plasma-vs-pm" => "limit audit: plasma reaches pm",
                "dispersive-vs-plasma-general" => "limit audit: dispersive omega_t->0 is not plasma",
                _ => "limit audit: surface-mode asymptotes agree",
            },
            got: if c.passed { 1.0 } else { 0.0 },
            want: 1.0,
            tol: 0.0,
        });
    }

    let mut out = String::new();
    let mut all = true;
    for c in &checks {
        let ok = c.passed();
        all &= ok;
        let _ = writeln!(
            out,
            "{} {} : value {} vs {} (tolerance {})",
            if ok { "PASS" } else { "FAIL" },
            c.name,
            fmt_f64(c.got),
            fmt_f64(c.want),
            fmt_f64(c.tol),
        );
    }
    let _ = writeln!(out, "{}: {} checks", if all { "OK" } else { "FAILED" }, checks.len());
    Ok((out, all))
}

fn cmd_validate(mut r: FlagReader) -> Result<(String, bool), CliError> {
    let cfg = parse_quad_config(&mut r)?;
    r.finish()?;
    run_validation(&cfg)
}

/// Entry point used by the binary; returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    match run_inner(args) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{USAGE}");
            2
        }
        Err(CliError::Numerical(msg)) => {
            eprintln!("error: {msg}");
            3
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn run_inner(args: &[String]) -> Result<i32, CliError> {
    let Some(command) = args.first() else {
        return Err(CliError::Usage("a command is required".into()));
    };
    if command == "--help" || command == "-h" || command == "help" {
        println!("{USAGE}");
        return Ok(0);
    }

    let mut flags = parse_flags(&args[1..])?;
    // config file provides defaults; explicit flags win
    if let Some(path) = flags.get("config").cloned() {
        let mut merged = parse_config_file(&path)?;
        merged.remove("config");
        for (k, v) in merged {
            flags.entry(k).or_insert(v);
        }
    }
    let format = match flags.get("format").map(|s| s.as_str()) {
        Some("json") => Some(Format::Json),
        Some("csv") => Some(Format::Csv),
        Some(other) => {
            return Err(CliError::Usage(format!("--format: `{other}` (use json|csv)")));
        }
        None => None,
    };
    let output = flags.get("output").cloned();
    let reader = FlagReader::new(flags);

    let (artifact, code) = match command.as_str() {
        "shift" => (cmd_shift(reader, format.unwrap_or(Format::Json))?, 0),
        "sweep" => (cmd_sweep(reader, format.unwrap_or(Format::Csv))?, 0),
        "peak" => (cmd_peak(reader, format.unwrap_or(Format::Json))?, 0),
        "convert" => (cmd_convert(reader, format.unwrap_or(Format::Json))?, 0),
        "validate" => {
            let (report, all) = cmd_validate(reader)?;
            (report, if all { 0 } else { 1 })
        }
        other => {
            return Err(CliError::Usage(format!("unknown command `{other}`")));
        }
    };

    match output {
        Some(path) => {
            std::fs::write(&path, artifact)
                .map_err(|e| CliError::Io(format!("cannot write {path}: {e}")))?;
        }
        None => {
            print!("{artifact}");
        }
    }
    Ok(code)
}
