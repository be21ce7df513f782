//! Command-line parsing into a validated [`RunConfig`] and rendering back to argv.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use qwalk_core::CoinClass;

type C = Complex64;
// Aliases keep clap from treating the lists as repeated flags.
type VertexList = Vec<(usize, usize)>;
type RingSizes = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subcommand {
    Coin,
    Graph,
    Spectrum,
    Evolve,
    Period,
    Localize,
    SweepTheta,
    SweepN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Algorithm choice; which values are valid depends on the subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Theorem,
    Spectral,
    Brute,
    Direct,
    Limit,
    Numeric,
    ClosedForm,
}

impl Method {
    fn allowed(sub: Subcommand) -> &'static [Method] {
        use Method::*;
        match sub {
            Subcommand::Period => &[Theorem, Spectral, Brute],
            Subcommand::Localize => &[Direct, Spectral, Limit],
            Subcommand::Spectrum => &[Numeric, ClosedForm],
            _ => &[],
        }
    }
}

/// A coin angle written as a π-multiple or as decimal radians.
///
/// Grammar: `[-] [INT] "pi" ["/" INT]`, or any decimal float.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaExpr {
    text: String,
    value: f64,
}

impl ThetaExpr {
    pub fn value(&self) -> f64 {
        self.value
    }
}

impl FromStr for ThetaExpr {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let text = s.trim().to_ascii_lowercase();
        let bad = || format!("malformed angle '{s}': expected [-][INT]pi[/INT] or decimal radians");
        let value = if let Some(pos) = text.find("pi") {
            let (head, tail) = (&text[..pos], &text[pos + 2..]);
            let (neg, digits) = match head.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, head),
            };
            let num: u64 = if digits.is_empty() { 1 } else { parse_uint(digits).ok_or_else(bad)? };
            let den: u64 = if tail.is_empty() {
                1
            } else {
                let d = tail.strip_prefix('/').and_then(parse_uint).ok_or_else(bad)?;
                if d == 0 {
                    return Err(format!("angle '{s}' divides by zero"));
                }
                d
            };
            let v = num as f64 * PI / den as f64;
            if neg {
                -v
            } else {
                v
            }
        } else {
            text.parse::<f64>().map_err(|_| bad())?
        };
        if !value.is_finite() {
            return Err(format!("angle '{s}' is not finite"));
        }
        Ok(Self { text, value })
    }
}

fn parse_uint(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for ThetaExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoinSpec {
    Uniform,
    Amplitudes([C; 3]),
}

impl CoinSpec {
    pub fn amplitudes(&self) -> [C; 3] {
        match self {
            CoinSpec::Uniform => [C::new(1.0 / 3f64.sqrt(), 0.0); 3],
            CoinSpec::Amplitudes(a) => *a,
        }
    }
}

/// Initial vertex and coin state, written `s=1,r=0,coin=uniform` or
/// `s=0,r=2,coin=1:0:0` with complex amplitudes such as `0.6+0.8i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitSpec {
    pub s0: usize,
    pub r0: usize,
    pub coin: CoinSpec,
}

impl FromStr for InitSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (mut s0, mut r0, mut coin) = (None, None, None);
        for part in s.split(',') {
            let (key, val) = part.split_once('=').ok_or_else(|| format!("init entry '{part}' is not key=value"))?;
            match key.trim() {
                "s" => s0 = Some(val.trim().parse::<usize>().map_err(|e| format!("init s: {e}"))?),
                "r" => r0 = Some(val.trim().parse::<usize>().map_err(|e| format!("init r: {e}"))?),
                "coin" => coin = Some(parse_coin(val.trim())?),
                other => return Err(format!("unknown init key '{other}'")),
            }
        }
        let s0 = s0.ok_or("init is missing s")?;
        if s0 > 1 {
            return Err(format!("init s must be 0 or 1, got {s0}"));
        }
        Ok(Self { s0, r0: r0.ok_or("init is missing r")?, coin: coin.ok_or("init is missing coin")? })
    }
}

fn parse_coin(s: &str) -> Result<CoinSpec, String> {
    if s.eq_ignore_ascii_case("uniform") {
        return Ok(CoinSpec::Uniform);
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("coin '{s}' needs three amplitudes separated by ':' or 'uniform'"));
    }
    let mut a = [C::new(0.0, 0.0); 3];
    for (slot, p) in a.iter_mut().zip(parts) {
        *slot = p.trim().parse::<C>().map_err(|_| format!("bad complex amplitude '{p}'"))?;
        if !slot.re.is_finite() || !slot.im.is_finite() {
            return Err(format!("amplitude '{p}' is not finite"));
        }
    }
    let norm2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if (norm2 - 1.0).abs() > 1e-12 {
        return Err(format!("coin amplitudes have norm² {norm2}, expected 1"));
    }
    Ok(CoinSpec::Amplitudes(a))
}

impl fmt::Display for InitSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={},r={},coin=", self.s0, self.r0)?;
        match self.coin {
            CoinSpec::Uniform => f.write_str("uniform"),
            CoinSpec::Amplitudes([a, b, c]) => write!(f, "{a}:{b}:{c}"),
        }
    }
}

fn parse_class(s: &str) -> Result<CoinClass, String> {
    s.parse().map_err(|e: qwalk_core::Error| e.to_string())
}

fn parse_vertices(s: &str) -> Result<Vec<(usize, usize)>, String> {
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| format!("vertex '{p}' is not s:r"))?;
            let s0: usize = a.trim().parse().map_err(|e| format!("vertex '{p}': {e}"))?;
            if s0 > 1 {
                return Err(format!("vertex '{p}': reflection bit must be 0 or 1"));
            }
            Ok((s0, b.trim().parse().map_err(|e| format!("vertex '{p}': {e}"))?))
        })
        .collect()
}

fn parse_ns(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').map(|p| p.trim().parse().map_err(|e| format!("ring size '{p}': {e}"))).collect()
}

#[derive(Parser, Debug)]
#[command(name = "qwalk", about = "Three-state coined quantum walks on dihedral Cayley graphs")]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// coin class X, Y, Z or W
    #[arg(long, default_value = "X", value_parser = parse_class)]
    class: CoinClass,
    /// coin angle: [-][INT]pi[/INT] or decimal radians
    #[arg(long, default_value = "pi", allow_hyphen_values = true)]
    theta: ThetaExpr,
    /// ring size N
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// initial state, e.g. s=1,r=0,coin=uniform
    #[arg(long, default_value = "s=1,r=0,coin=uniform")]
    init: InitSpec,
    /// number of averaged steps
    #[arg(long = "T", default_value_t = 300)]
    t: u64,
    /// brute-force period search bound
    #[arg(long, default_value_t = 1000)]
    t_max: u64,
    /// largest denominator accepted for eigenphase rationals
    #[arg(long, default_value_t = 10_000)]
    q_max: u64,
    /// number of angles in the theta sweep
    #[arg(long, default_value_t = 60)]
    grid: usize,
    /// vertices reported by the theta sweep, e.g. 0:0,0:1,1:0
    #[arg(long, default_value = "0:0,0:1,1:0", value_parser = parse_vertices)]
    vertices: VertexList,
    /// ring sizes for the N sweep
    #[arg(long, default_value = "10,20,50", value_parser = parse_ns)]
    ns: RingSizes,
    /// steps taken by evolve
    #[arg(long, default_value_t = 100)]
    steps: u64,
    /// algorithm for period, localize or spectrum
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// output path, '-' for standard output
    #[arg(long, default_value = "-")]
    out: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// use data parallelism where available
    #[arg(long)]
    parallel: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Subcommand,
    pub class: CoinClass,
    pub theta: ThetaExpr,
    pub n: usize,
    pub init: InitSpec,
    pub t: u64,
    pub t_max: u64,
    pub q_max: u64,
    pub grid: usize,
    pub vertices: Vec<(usize, usize)>,
    pub ns: Vec<usize>,
    pub steps: u64,
    pub method: Option<Method>,
    pub out: String,
    pub format: Format,
    pub parallel: bool,
}

/// Parses `argv` (program name first). Errors carry clap's formatted message.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let a = Args::try_parse_from(argv)?;
    let cfg = RunConfig {
        subcommand: a.subcommand,
        class: a.class,
        theta: a.theta,
        n: a.n,
        init: a.init,
        t: a.t,
        t_max: a.t_max,
        q_max: a.q_max,
        grid: a.grid,
        vertices: a.vertices,
        ns: a.ns,
        steps: a.steps,
        method: a.method,
        out: a.out,
        format: a.format,
        parallel: a.parallel,
    };
    validate(&cfg).map_err(|msg| clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{msg}\n")))?;
    Ok(cfg)
}

fn validate(c: &RunConfig) -> Result<(), String> {
    if let Some(m) = c.method {
        if !Method::allowed(c.subcommand).contains(&m) {
            return Err(format!("--method {} does not apply to {}", value_name(m), value_name(c.subcommand)));
        }
    }
    if c.n < 3 {
        return Err(format!("--n must be at least 3, got {}", c.n));
    }
    if c.init.r0 >= c.n && c.subcommand != Subcommand::SweepN {
        return Err(format!("init r = {} is outside the ring of size {}", c.init.r0, c.n));
    }
    if c.subcommand == Subcommand::SweepN {
        if let Some(&bad) = c.ns.iter().find(|&&m| m < 3 || c.init.r0 >= m) {
            return Err(format!("ring size {bad} is too small for the run"));
        }
    }
    if c.subcommand == Subcommand::SweepTheta {
        if c.grid < 2 {
            return Err(format!("--grid needs at least 2 points, got {}", c.grid));
        }
        if let Some(&(s, r)) = c.vertices.iter().find(|v| v.1 >= c.n) {
            return Err(format!("vertex {s}:{r} is outside the ring of size {}", c.n));
        }
    }
    if matches!(c.subcommand, Subcommand::Localize | Subcommand::SweepTheta | Subcommand::SweepN) && c.t == 0 {
        return Err("--T must be positive".to_string());
    }
    Ok(())
}

fn value_name<V: ValueEnum>(v: V) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// Argument vector (program name first) that parses back to `c`.
#[cfg_attr(not(test), allow(dead_code))]
pub fn render(c: &RunConfig) -> Vec<String> {
    let mut v = vec![
        "qwalk".to_string(),
        value_name(c.subcommand),
        "--class".into(),
        c.class.to_string(),
        "--theta".into(),
        c.theta.to_string(),
        "--n".into(),
        c.n.to_string(),
        "--init".into(),
        c.init.to_string(),
        "--T".into(),
        c.t.to_string(),
        "--t-max".into(),
        c.t_max.to_string(),
        "--q-max".into(),
        c.q_max.to_string(),
        "--grid".into(),
        c.grid.to_string(),
        "--vertices".into(),
        c.vertices.iter().map(|(s, r)| format!("{s}:{r}")).collect::<Vec<_>>().join(","),
        "--ns".into(),
        c.ns.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
        "--steps".into(),
        c.steps.to_string(),
        "--out".into(),
        c.out.clone(),
        "--format".into(),
        value_name(c.format),
    ];
    if let Some(m) = c.method {
        v.push("--method".into());
        v.push(value_name(m));
    }
    if c.parallel {
        v.push("--parallel".into());
    }
    v
}
