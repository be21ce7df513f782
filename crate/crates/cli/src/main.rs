mod config;
mod output;

use std::io::Write;
use std::process::ExitCode;

use qwalk_core::fourier::{block_spectra, spectrum_csv};
use qwalk_core::{
    brute_force_period, build_cayley, build_evolution, eigen_closed_form, evolve_t, limit_time_avg, spectral_period,
    sweep_n, sweep_theta, theorem_period, time_avg_direct, time_avg_spectral, BruteMode, CoinMatrix, EigenSystem,
    InitialCondition,
};

use config::{parse_config, Format, Method, RunConfig, Subcommand};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Matrix-power tolerance for the brute-force period search.
const BRUTE_TOL: f64 = 1e-9;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Numerical(String),
}

impl From<qwalk_core::Error> for Failure {
    fn from(e: qwalk_core::Error) -> Self {
        use qwalk_core::Error::*;
        match e {
            Input(_) | Constraint { .. } | Range { .. } => Failure::Usage(e.to_string()),
            NumericalFailure(_) | Capacity(_) => Failure::Numerical(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cfg = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cfg).and_then(|text| write_output(&cfg.out, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}

fn write_output(path: &str, text: &str) -> Result<(), Failure> {
    let res = if path == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush())
    } else {
        std::fs::write(path, text)
    };
    res.map_err(|e| Failure::Io(format!("cannot write {path}: {e}")))
}

fn init_condition(cfg: &RunConfig) -> Result<InitialCondition, Failure> {
    Ok(InitialCondition::new(cfg.init.coin.amplitudes(), cfg.init.s0, cfg.init.r0)?)
}

fn run(cfg: &RunConfig) -> Result<String, Failure> {
    let theta = cfg.theta.value();
    let coin = || CoinMatrix::from_theta(cfg.class, theta).map_err(Failure::from);
    let json = cfg.format == Format::Json;
    let text = match cfg.subcommand {
        Subcommand::Coin => {
            let c = coin()?;
            if json {
                c.to_json() + "\n"
            } else {
                output::coin_csv(&c)
            }
        }
        Subcommand::Graph => {
            let g = build_cayley(cfg.n)?;
            if json {
                output::graph_json(&g)
            } else {
                output::graph_csv(&g)
            }
        }
        Subcommand::Spectrum => {
            let c = coin()?;
            let systems: Vec<EigenSystem> = match cfg.method.unwrap_or(Method::Numeric) {
                Method::ClosedForm => {
                    (0..cfg.n).map(|k| eigen_closed_form(cfg.class, &c, cfg.n, k)).collect::<Result<_, _>>()?
                }
                _ => block_spectra(&c, cfg.n, cfg.parallel)?,
            };
            if json {
                output::spectrum_json(&systems)
            } else {
                spectrum_csv(&systems)
            }
        }
        Subcommand::Evolve => {
            let c = coin()?;
            let u = build_evolution(&c, cfg.n)?;
            let psi0 = init_condition(cfg)?.state(cfg.n)?;
            let steps = i64::try_from(cfg.steps).map_err(|_| Failure::Usage("--steps is too large".into()))?;
            let psi = evolve_t(&psi0, &u, steps)?;
            if json {
                output::state_json(&psi)
            } else {
                psi.to_csv()
            }
        }
        Subcommand::Period => {
            let res = match cfg.method.unwrap_or(Method::Theorem) {
                Method::Spectral => spectral_period(&coin()?, cfg.n, cfg.q_max)?,
                Method::Brute => brute_force_period(&coin()?, cfg.n, cfg.t_max, BRUTE_TOL, BruteMode::Dense)?,
                _ => theorem_period(cfg.class, theta, cfg.n)?,
            };
            if json {
                res.to_json() + "\n"
            } else {
                output::period_csv(&res)
            }
        }
        Subcommand::Localize => {
            let c = coin()?;
            let init = init_condition(cfg)?;
            let res = match cfg.method.unwrap_or(Method::Direct) {
                Method::Spectral => time_avg_spectral(&c, cfg.n, &init, cfg.t)?,
                Method::Limit => limit_time_avg(&c, cfg.n, &init)?,
                _ => time_avg_direct(&c, cfg.n, &init, cfg.t)?,
            };
            if json {
                output::average_json(&res)
            } else {
                res.to_csv()
            }
        }
        Subcommand::SweepTheta => {
            let init = init_condition(cfg)?;
            let res = sweep_theta(cfg.class, cfg.grid, cfg.n, &init, cfg.t, &cfg.vertices, cfg.parallel)?;
            if json {
                output::sweep_json(&res)
            } else {
                res.to_csv()
            }
        }
        Subcommand::SweepN => {
            let init = init_condition(cfg)?;
            let res = sweep_n(cfg.class, theta, &cfg.ns, &init, cfg.t, cfg.parallel)?;
            if json {
                output::sweep_json(&res)
            } else {
                res.to_csv()
            }
        }
    };
    Ok(text)
}
