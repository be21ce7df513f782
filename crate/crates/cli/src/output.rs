//! CSV and JSON renderings for results that lack one in the core crate.
//!
//! Floats go through [`raw_f64`] so JSON keeps the same 17 significant digits as CSV.

use std::fmt::Write;

use qwalk_core::export::{fmt_f64, raw_f64};
use qwalk_core::fourier::phase;
use qwalk_core::{
    AverageMethod, CayleyGraph, CoinMatrix, DihedralVertex, EigenSystem, PeriodOutcome, PeriodResult, SweepAxis,
    SweepResult, TimeAveragedResult, WalkState,
};
use serde::Serialize;
use serde_json::value::RawValue;

type Raw = Box<RawValue>;

fn to_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable") + "\n"
}

/// Columns `i,j,entry`.
pub fn coin_csv(c: &CoinMatrix) -> String {
    let mut out = String::from("i,j,entry\n");
    for (i, row) in c.entries().iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            writeln!(out, "{i},{j},{}", fmt_f64(*v)).unwrap();
        }
    }
    out
}

/// Columns `kind,s,r,s_to,r_to`; `D` rows are arcs, `U` rows undirected edges.
pub fn graph_csv(g: &CayleyGraph) -> String {
    let mut out = String::from("kind,s,r,s_to,r_to\n");
    for line in g.to_edge_list().lines() {
        out.push_str(&line.replace(' ', ","));
        out.push('\n');
    }
    out
}

pub fn graph_json(g: &CayleyGraph) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        n: usize,
        vertices: Vec<DihedralVertex>,
        arcs: &'a [(DihedralVertex, DihedralVertex)],
        edges: &'a [(DihedralVertex, DihedralVertex)],
    }
    to_line(&Doc { n: g.n(), vertices: g.vertices().collect(), arcs: g.directed_arcs(), edges: g.undirected_edges() })
}

pub fn spectrum_json(systems: &[EigenSystem]) -> String {
    #[derive(Serialize)]
    struct Row {
        k: usize,
        j: usize,
        re: Raw,
        im: Raw,
        phase: Raw,
        residual: Raw,
    }
    let mut rows = Vec::new();
    for sys in systems {
        for (j, (l, r)) in sys.eigenvalues.iter().zip(&sys.residuals).enumerate() {
            rows.push(Row { k: sys.k, j, re: raw_f64(l.re), im: raw_f64(l.im), phase: raw_f64(phase(*l)), residual: raw_f64(*r) });
        }
    }
    to_line(&rows)
}

pub fn state_json(psi: &WalkState) -> String {
    #[derive(Serialize)]
    struct Amp {
        l: usize,
        s: usize,
        r: usize,
        re: Raw,
        im: Raw,
    }
    #[derive(Serialize)]
    struct Doc {
        n: usize,
        time: u64,
        amplitudes: Vec<Amp>,
    }
    let n = psi.n();
    let mut amplitudes = Vec::with_capacity(6 * n);
    for l in 0..3 {
        for s in 0..2 {
            for r in 0..n {
                let z = psi.amplitude(l, s, r);
                amplitudes.push(Amp { l, s, r, re: raw_f64(z.re), im: raw_f64(z.im) });
            }
        }
    }
    to_line(&Doc { n, time: psi.time(), amplitudes })
}

/// Columns `method,outcome,tau,cap,witness,note`; empty cells where not applicable.
pub fn period_csv(res: &PeriodResult) -> String {
    let (outcome, tau, cap, witness) = match &res.outcome {
        PeriodOutcome::Finite(t) => ("finite", t.to_string(), String::new(), String::new()),
        PeriodOutcome::Aperiodic(w) => ("aperiodic", String::new(), String::new(), format!("\"{w}\"")),
        PeriodOutcome::Unknown(c) => ("unknown", String::new(), c.to_string(), String::new()),
    };
    let note = res.note.as_deref().map(|n| format!("\"{n}\"")).unwrap_or_default();
    format!("method,outcome,tau,cap,witness,note\n{},{outcome},{tau},{cap},{witness},{note}\n", res.method)
}

#[derive(Serialize)]
struct VertexValue {
    s: usize,
    r: usize,
    pbar: Raw,
}

pub fn average_json(res: &TimeAveragedResult) -> String {
    #[derive(Serialize)]
    struct Init {
        s: usize,
        r: usize,
        coin: Vec<[Raw; 2]>,
    }
    #[derive(Serialize)]
    struct Doc {
        n: usize,
        #[serde(rename = "T")]
        t: Option<u64>,
        method: &'static str,
        coin: Raw,
        init: Init,
        pbar: Vec<VertexValue>,
        diagonal_origin: Option<[Raw; 2]>,
    }
    let mut pbar = Vec::with_capacity(2 * res.n);
    for s in 0..2 {
        for r in 0..res.n {
            pbar.push(VertexValue { s, r, pbar: raw_f64(res.at(s, r)) });
        }
    }
    let method = match res.method {
        AverageMethod::Direct => "direct",
        AverageMethod::Spectral => "spectral",
        AverageMethod::Limit => "limit",
    };
    let init = Init {
        s: res.init.s0,
        r: res.init.r0,
        coin: res.init.coin_amplitudes.iter().map(|z| [raw_f64(z.re), raw_f64(z.im)]).collect(),
    };
    to_line(&Doc {
        n: res.n,
        t: res.t,
        method,
        coin: RawValue::from_string(res.coin.to_json()).expect("coin JSON"),
        init,
        pbar,
        diagonal_origin: res.diagonal_origin.map(|d| [raw_f64(d[0]), raw_f64(d[1])]),
    })
}

pub fn sweep_json(res: &SweepResult) -> String {
    #[derive(Serialize)]
    struct Point {
        param: Raw,
        values: Vec<VertexValue>,
    }
    #[derive(Serialize)]
    struct Doc {
        axis: &'static str,
        points: Vec<Point>,
    }
    let axis = match res.axis {
        SweepAxis::Theta => "theta",
        SweepAxis::N => "n",
    };
    let points = res
        .points
        .iter()
        .map(|(param, values)| Point {
            param: match res.axis {
                SweepAxis::Theta => raw_f64(*param),
                SweepAxis::N => RawValue::from_string((*param as u64).to_string()).expect("integer JSON"),
            },
            values: res
                .vertices
                .iter()
                .zip(values)
                .map(|(&(s, r), v)| VertexValue { s, r, pbar: raw_f64(*v) })
                .collect(),
        })
        .collect();
    to_line(&Doc { axis, points })
}
