use std::collections::BTreeMap;

use num_rational::BigRational;
use reebcone_core::characters::{auto_truncated_oracle, DEFAULT_MAX_BOX_POINTS, DEFAULT_MAX_ORDER};
use reebcone_core::geometry::lattice_points;
use reebcone_core::stability::delta_with_boundary;
use reebcone_core::{
    decompose_dual, delta, dual_cone, futaki_product, gorenstein_vector, grid_search_oracle,
    index_character, minimize_volume, s_m_oracle, s_value, weight_character, CharacterOptions,
    LaurentSeries, MinimizeOptions, ReebVector, Scalar, ToricCone, ToricValuation,
};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::report::*;
use crate::spec::{parse_cone_spec, parse_token, ConeSpec, Number, SpecError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Q-Gorenstein test, Reeb membership and K-semistability verdict.
    Check,
    /// δ-invariant and barycenter certificate.
    Delta,
    /// Volume minimization over the Reeb slice.
    Minimize,
    /// Futaki invariant of the product test configuration.
    Futaki,
    /// Laurent coefficients of the index (and weight) character.
    Character,
    /// Lattice-sum oracles: S_m tables and truncated characters.
    Oracle,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Delta => "delta",
            Command::Minimize => "minimize",
            Command::Futaki => "futaki",
            Command::Character => "character",
            Command::Oracle => "oracle",
        }
    }
}

/// Command-line options other than the command and spec path.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Flags {
    pub xi: Option<Vec<String>>,
    pub eta: Option<Vec<String>>,
    pub order: Option<usize>,
    pub tol: Option<f64>,
    pub m_max: Option<u64>,
    pub probe_rational: Option<u64>,
    pub t: Option<Vec<f64>>,
    pub grid: Option<usize>,
    pub float: bool,
    pub experimental: bool,
}

impl Flags {
    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                m.insert(k.to_string(), v);
            }
        };
        put("xi", self.xi.as_ref().map(|v| v.join(",")));
        put("eta", self.eta.as_ref().map(|v| v.join(",")));
        put("order", self.order.map(|x| x.to_string()));
        put("tol", self.tol.map(|x| format!("{x:e}")));
        put("m-max", self.m_max.map(|x| x.to_string()));
        put("probe-rational", self.probe_rational.map(|x| x.to_string()));
        put(
            "t",
            self.t.as_ref().map(|v| {
                v.iter()
                    .map(|x| format!("{x:?}"))
                    .collect::<Vec<_>>()
                    .join(",")
            }),
        );
        put("grid", self.grid.map(|x| x.to_string()));
        put("float", self.float.then(|| "true".to_string()));
        put(
            "experimental",
            self.experimental.then(|| "true".to_string()),
        );
        m
    }
}

pub const DEFAULT_PRECISION_BITS: u32 = 128;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Mantissa bits of the floating-point mode.
pub const FLOAT_BITS: u32 = 53;

/// Settings read from `REEBCONE_PRECISION` and `REEBCONE_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub precision_bits: u32,
    pub tol: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            precision_bits: DEFAULT_PRECISION_BITS,
            tol: DEFAULT_TOL,
        }
    }
}

impl Settings {
    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Settings, String> {
        let mut s = Settings::default();
        if let Some(p) = get("REEBCONE_PRECISION") {
            s.precision_bits = p
                .trim()
                .parse()
                .ok()
                .filter(|&b| b > 0)
                .ok_or_else(|| format!("REEBCONE_PRECISION={p:?} is not a positive integer"))?;
        }
        if let Some(t) = get("REEBCONE_TOL") {
            s.tol = t
                .trim()
                .parse()
                .ok()
                .filter(|&x: &f64| x > 0.0 && x.is_finite())
                .ok_or_else(|| format!("REEBCONE_TOL={t:?} is not a positive number"))?;
        }
        Ok(s)
    }

    pub fn from_env() -> Result<Settings, String> {
        Settings::from_lookup(|k| std::env::var(k).ok())
    }
}

#[derive(Debug, Error)]
enum Failure {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Core(#[from] reebcone_core::Error),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    fn info(&self) -> ErrorInfo {
        let (name, exit_code) = match self {
            Failure::Spec(e) => (e.kind(), EXIT_INPUT),
            Failure::Core(e) => (e.kind(), exit_code_for(e.class())),
            Failure::Input(_) => ("InvalidInput", EXIT_INPUT),
        };
        ErrorInfo {
            name: name.to_string(),
            message: self.to_string(),
            exit_code,
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Report for an input that could not be read at all.
pub fn input_failure(
    command: Command,
    spec_label: &str,
    flags: &Flags,
    settings: &Settings,
    message: String,
) -> Report {
    Report {
        command: echo(command, spec_label, flags),
        input_hash: String::new(),
        results: None,
        provenance: provenance(settings, false),
        warnings: Vec::new(),
        error: Some(ErrorInfo {
            name: "IoError".into(),
            message,
            exit_code: EXIT_INPUT,
        }),
    }
}

fn echo(command: Command, spec_label: &str, flags: &Flags) -> CommandEcho {
    CommandEcho {
        name: command.name().into(),
        spec: spec_label.into(),
        flags: flags.echo(),
    }
}

fn provenance(settings: &Settings, real: bool) -> Provenance {
    Provenance {
        library: "reebcone-core".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        arithmetic: if real { "binary64" } else { "exact-rational" }.into(),
        requested_precision_bits: settings.precision_bits,
        working_precision_bits: real.then_some(FLOAT_BITS),
        tolerance: settings.tol,
        max_order: DEFAULT_MAX_ORDER,
    }
}

/// Runs one command on the text of a spec file.
pub fn run(
    command: Command,
    spec_text: &str,
    spec_label: &str,
    flags: &Flags,
    settings: &Settings,
) -> Report {
    let mut warnings = Vec::new();
    let mut real = flags.float || command == Command::Minimize;
    let results = prepare(spec_text, flags, &mut real).and_then(|(spec, xi, eta)| {
        let mut ctx = Context {
            spec,
            flags,
            settings,
            warnings: &mut warnings,
        };
        if real {
            ctx.dispatch::<f64>(command, xi, eta)
        } else {
            ctx.dispatch::<BigRational>(command, xi, eta)
        }
    });
    if real && settings.precision_bits > FLOAT_BITS {
        warnings.push(format!(
            "floating-point mode works in binary64 ({FLOAT_BITS} bits); requested precision {} bits not available",
            settings.precision_bits
        ));
    }
    let (results, error) = match results {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.info())),
    };
    Report {
        command: echo(command, spec_label, flags),
        input_hash: input_hash(spec_text.as_bytes()),
        results,
        provenance: provenance(settings, real),
        warnings,
        error,
    }
}

type Prepared = (ConeSpec, Option<Vec<Number>>, Option<Vec<Number>>);

fn prepare(text: &str, flags: &Flags, real: &mut bool) -> Outcome<Prepared> {
    let spec = parse_cone_spec(text)?;
    let xi = match &flags.xi {
        Some(tokens) => Some(parse_flag_vector("xi", tokens, spec.dim, flags.float)?),
        None => spec.xi.clone(),
    };
    let eta = match &flags.eta {
        Some(tokens) => Some(parse_flag_vector("eta", tokens, spec.dim, flags.float)?),
        None => spec.eta.clone(),
    };
    if xi.iter().chain(eta.iter()).flatten().any(|x| !x.is_exact()) {
        *real = true;
    }
    Ok((spec, xi, eta))
}

fn parse_flag_vector(
    name: &str,
    tokens: &[String],
    dim: usize,
    real: bool,
) -> Outcome<Vec<Number>> {
    let v = tokens
        .iter()
        .map(|t| parse_token(t, real).map_err(|m| Failure::Input(format!("--{name}: {m}"))))
        .collect::<Outcome<Vec<_>>>()?;
    if v.len() != dim {
        return Err(SpecError::DimensionMismatch {
            field: format!("--{name}"),
            expected: dim,
            found: v.len(),
        }
        .into());
    }
    Ok(v)
}

/// Conversion from parsed input numbers.
trait FromNumber: Scalar {
    fn from_number(x: &Number) -> Self;
}

impl FromNumber for BigRational {
    fn from_number(x: &Number) -> Self {
        match x {
            Number::Exact(r) => r.clone(),
            Number::Real(_) => unreachable!("real inputs select binary64 mode"),
        }
    }
}

impl FromNumber for f64 {
    fn from_number(x: &Number) -> Self {
        x.to_f64()
    }
}

struct Context<'a> {
    spec: ConeSpec,
    flags: &'a Flags,
    settings: &'a Settings,
    warnings: &'a mut Vec<String>,
}

impl Context<'_> {
    fn cone(&mut self) -> Outcome<ToricCone> {
        let cone = dual_cone(&self.spec.rays, self.spec.dim)?;
        self.warnings
            .extend(cone.warnings().iter().map(|w| w.to_string()));
        Ok(cone)
    }

    fn tol(&self) -> f64 {
        self.flags.tol.unwrap_or(self.settings.tol)
    }

    fn dispatch<S: FromNumber>(
        &mut self,
        command: Command,
        xi: Option<Vec<Number>>,
        eta: Option<Vec<Number>>,
    ) -> Outcome<Value> {
        let conv =
            |v: Option<Vec<Number>>| v.map(|v| v.iter().map(S::from_number).collect::<Vec<S>>());
        let xi = conv(xi);
        let eta = conv(eta);
        let cone = self.cone()?;
        let mut out = Map::new();
        out.insert("cone".into(), cone_summary(&self.spec, &cone));
        let body = match command {
            Command::Check => self.check(&cone, xi)?,
            Command::Delta => self.delta(&cone, required(xi, "xi")?)?,
            Command::Minimize => {
                self.minimize(&cone, xi.map(|v| v.iter().map(Scalar::to_f64).collect()))?
            }
            Command::Futaki => self.futaki(&cone, required(xi, "xi")?, required(eta, "eta")?)?,
            Command::Character => self.character(&cone, required(xi, "xi")?, eta)?,
            Command::Oracle => self.oracle(&cone, required(xi, "xi")?, eta)?,
        };
        out.insert(command.name().into(), body);
        Ok(Value::Object(out))
    }

    fn check<S: Scalar>(&mut self, cone: &ToricCone, xi: Option<Vec<S>>) -> Outcome<Value> {
        let mut m = Map::new();
        let l = gorenstein_vector(cone);
        match &l {
            Ok(l) => {
                m.insert("q_gorenstein".into(), true.into());
                m.insert("gorenstein".into(), rationals(&l.l));
            }
            Err(e) => {
                m.insert("q_gorenstein".into(), false.into());
                m.insert("gorenstein_error".into(), e.kind().into());
            }
        }
        if let Some(xi) = xi {
            match ReebVector::new(cone, xi) {
                Ok(reeb) => {
                    m.insert("in_reeb_cone".into(), true.into());
                    m.insert("margin".into(), num(&reeb.margin(cone)));
                    if l.is_ok() {
                        let rep = delta(cone, &reeb)?;
                        m.insert("delta".into(), num(&rep.delta));
                        m.insert("kss".into(), rep.kss.into());
                        m.insert("kss_residual".into(), num(&rep.residual));
                    }
                }
                Err(reebcone_core::Error::NotInReebCone { index }) => {
                    m.insert("in_reeb_cone".into(), false.into());
                    m.insert("violated_dual_ray".into(), index.into());
                }
                Err(e) => return Err(e.into()),
            }
        }
        Ok(Value::Object(m))
    }

    fn delta<S: Scalar>(&mut self, cone: &ToricCone, xi: Vec<S>) -> Outcome<Value> {
        let reeb = ReebVector::new(cone, xi)?;
        let rep = match &self.spec.boundary_coeffs {
            Some(c) => delta_with_boundary(cone, &reeb, c, self.flags.experimental)?,
            None => delta(cone, &reeb)?,
        };
        Ok(json!({
            "delta": num(&rep.delta),
            "delta_prime": num(&rep.delta_prime),
            "delta_definitional": num(&rep.delta_definitional),
            "bary_p": nums(&rep.bary_p),
            "bary_q": nums(&rep.bary_q),
            "gorenstein": rationals(&rep.gorenstein),
            "normalized_xi": nums(&rep.normalized_xi),
            "rescale": num(&rep.rescale),
            "ray_pairings": nums(&rep.ray_pairings),
            "minimizing_rays": rep.minimizing_rays,
            "kss": rep.kss,
            "kss_residual": num(&rep.residual),
        }))
    }

    fn minimize(&mut self, cone: &ToricCone, xi: Option<Vec<f64>>) -> Outcome<Value> {
        let opts = MinimizeOptions {
            tol: self.tol(),
            start: xi,
            probe_denominator: self.flags.probe_rational,
            ..Default::default()
        };
        let r = minimize_volume(cone, &opts)?;
        let mut m = Map::new();
        m.insert("xi_star".into(), floats(&r.xi));
        m.insert("chart".into(), floats(&r.chart));
        m.insert("a0_star".into(), float(r.value));
        m.insert("vol_star".into(), float(r.volume));
        m.insert("gradient_norm".into(), float(r.gradient_norm));
        m.insert("iterations".into(), r.iterations.into());
        m.insert("kss_residual".into(), float(r.kss_residual));
        m.insert("delta".into(), float(r.delta));
        m.insert("margin".into(), float(r.margin));
        if let Some(p) = &r.rational_candidate {
            m.insert(
                "rational_candidate".into(),
                json!({
                    "values": rationals(&p.values),
                    "denominator": p.denominator,
                    "distance": float(p.distance),
                    "max_denominator": p.max_denominator,
                }),
            );
        }
        if let Some(res) = self.flags.grid {
            let g = grid_search_oracle(cone, res)?;
            m.insert(
                "grid".into(),
                json!({
                    "resolution": res,
                    "xi": floats(&g.xi),
                    "chart": floats(&g.chart),
                    "value": float(g.value),
                    "spacing": floats(&g.spacing),
                    "evaluated": g.evaluated,
                }),
            );
        }
        Ok(Value::Object(m))
    }

    fn futaki<S: Scalar>(&mut self, cone: &ToricCone, xi: Vec<S>, eta: Vec<S>) -> Outcome<Value> {
        let reeb = ReebVector::new(cone, xi)?;
        let pieces = decompose_dual(cone, DEFAULT_MAX_BOX_POINTS)?;
        let r = futaki_product(&pieces, &reeb, &eta, CharacterOptions::default())?;
        Ok(json!({
            "xi": nums(reeb.xi()),
            "eta": nums(&eta),
            "a0": num(&r.a0),
            "a1": num(&r.a1),
            "b0": num(&r.b0),
            "b1": num(&r.b1),
            "f1": num(&r.f1),
            "fut": num(&r.fut),
        }))
    }

    fn character<S: Scalar>(
        &mut self,
        cone: &ToricCone,
        xi: Vec<S>,
        eta: Option<Vec<S>>,
    ) -> Outcome<Value> {
        let n = cone.dim();
        let order = self.flags.order.unwrap_or(2);
        let opts = CharacterOptions::default();
        let reeb = ReebVector::new(cone, xi)?;
        let pieces = decompose_dual(cone, DEFAULT_MAX_BOX_POINTS)?;
        let f = index_character(&pieces, &reeb, order, opts)?;
        let mut index = series_json(&f);
        index.insert("a0".into(), num(&f.leading_index_coefficient(n)?));
        if n >= 2 && order >= 1 {
            index.insert("a1".into(), num(&f.index_coefficients(n)?.1));
        }
        let mut m = Map::new();
        m.insert("order".into(), order.into());
        m.insert("piece_count".into(), pieces.len().into());
        m.insert("index".into(), Value::Object(index));
        if let Some(eta) = eta {
            let c = weight_character(&pieces, &reeb, &eta, order, opts)?;
            let mut weight = series_json(&c);
            if order >= 1 {
                let (b0, b1) = c.weight_coefficients(n)?;
                weight.insert("b0".into(), num(&b0));
                weight.insert("b1".into(), num(&b1));
            }
            m.insert("weight".into(), Value::Object(weight));
        }
        Ok(Value::Object(m))
    }

    fn oracle<S: Scalar>(
        &mut self,
        cone: &ToricCone,
        xi: Vec<S>,
        eta: Option<Vec<S>>,
    ) -> Outcome<Value> {
        if self.flags.m_max.is_none() && self.flags.t.is_none() {
            return Err(Failure::Input("oracle needs --m-max or --t".into()));
        }
        let reeb = ReebVector::new(cone, xi)?;
        let mut m = Map::new();
        if let Some(m_max) = self.flags.m_max {
            if m_max == 0 {
                return Err(Failure::Input("--m-max must be positive".into()));
            }
            let mut per_ray = Vec::new();
            for (i, v) in cone.rays().iter().enumerate() {
                let val = ToricValuation::<S>::ray(cone, i);
                let s = s_value(cone, &reeb, &val)?;
                let table = (1..=m_max)
                    .map(|k| s_m_oracle(cone, &reeb, val.vector(), k).map(|x| rational(&x)))
                    .collect::<Result<Vec<_>, _>>()?;
                per_ray.push(json!({
                    "ray": v,
                    "s": num(&s.s),
                    "s_m": table,
                }));
            }
            let counts = (1..=m_max)
                .map(|k| lattice_points(cone, &reeb, k).map(|p| p.len()))
                .collect::<Result<Vec<_>, _>>()?;
            m.insert(
                "s_m".into(),
                json!({ "m_max": m_max, "lattice_counts": counts, "rays": per_ray }),
            );
        }
        if let Some(ts) = &self.flags.t {
            let pieces = decompose_dual(cone, DEFAULT_MAX_BOX_POINTS)?;
            let order = DEFAULT_MAX_ORDER;
            let opts = CharacterOptions::default();
            let series = match &eta {
                Some(e) => weight_character(&pieces, &reeb, e, order, opts)?,
                None => index_character(&pieces, &reeb, order, opts)?,
            };
            let tail_tol = self.tol();
            let rows = ts
                .iter()
                .map(|&t| {
                    let o = auto_truncated_oracle(cone, &reeb, eta.as_deref(), t, tail_tol)?;
                    Ok(json!({
                        "t": float(t),
                        "truncated_sum": float(o.value),
                        "tail_estimate": float(o.tail_estimate),
                        "cutoff": float(o.cutoff),
                        "columns": o.columns,
                        "series": float(series.eval(t)),
                    }))
                })
                .collect::<Result<Vec<_>, reebcone_core::Error>>()?;
            m.insert(
                "truncated".into(),
                json!({
                    "character": if eta.is_some() { "weight" } else { "index" },
                    "series_order": order,
                    "tail_tolerance": float(tail_tol),
                    "values": rows,
                }),
            );
        }
        Ok(Value::Object(m))
    }
}

fn required<T>(v: Option<T>, name: &str) -> Outcome<T> {
    v.ok_or_else(|| {
        Failure::Input(format!(
            "missing {name}: give --{name} or put it in the spec"
        ))
    })
}

fn cone_summary(spec: &ConeSpec, cone: &ToricCone) -> Value {
    json!({
        "name": spec.name,
        "dim": cone.dim(),
        "rays": int_vectors(cone.rays()),
        "dual_rays": int_vectors(cone.dual_rays()),
    })
}

fn series_json<S: Scalar>(s: &LaurentSeries<S>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("order_low".into(), s.order_low.into());
    m.insert(
        "coefficients".into(),
        Value::Array(
            s.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| json!({ "exponent": s.order_low + k as i32, "value": num(c) }))
                .collect(),
        ),
    );
    m
}
