use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use tclgen_core::linalg::fmt_e12;
use tclgen_core::numerics::{Evaluator, GeneratorPath};
use tclgen_core::oracle::{exact_reduced_trajectory, scaling_probe, FullModel};
use tclgen_core::propagate::{propagate_observable, propagate_state, Trajectory};
use tclgen_core::terms::{
    count_terms, generator_terms, render_polynomial, CountMethod, Kind, RenderFormat,
    MAX_VANKAMPEN_ORDER,
};
use tclgen_core::TclError;

use crate::config::Setup;
use crate::CliError;

/// Highest order `count` enumerates; the sign-resolved census grows as `3^(n-1)`.
pub const MAX_COUNT_ORDER: usize = 12;

pub fn terms(order: usize, kind: Kind, format: RenderFormat) -> Result<String, CliError> {
    let poly = generator_terms(order, kind)?;
    Ok(render_polynomial(&poly, format)? + "\n")
}

/// CSV table `order,recursive_V,recursive_PM,vankampen` for orders
/// `1..=max_order`; the Van Kampen column is blank above its tabulated range.
pub fn count(max_order: usize) -> Result<String, CliError> {
    if max_order == 0 || max_order > MAX_COUNT_ORDER {
        return Err(TclError::Order {
            order: max_order,
            reason: "outside the count range 1..=12",
        }
        .into());
    }
    let mut out = String::from("order,recursive_V,recursive_PM,vankampen\n");
    for n in 1..=max_order {
        let vk = if n <= MAX_VANKAMPEN_ORDER {
            count_terms(n, CountMethod::VanKampen)?.to_string()
        } else {
            String::new()
        };
        out += &format!(
            "{n},{},{},{vk}\n",
            count_terms(n, CountMethod::RecursiveV)?,
            count_terms(n, CountMethod::RecursivePm)?
        );
    }
    Ok(out)
}

fn create(out_dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>), CliError> {
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    let file = File::create(&path)?;
    Ok((path, BufWriter::new(file)))
}

fn require<'a>(
    m: &'a Option<tclgen_core::CMat>,
    what: &str,
) -> Result<&'a tclgen_core::CMat, CliError> {
    m.as_ref()
        .ok_or_else(|| CliError::Config(format!("this command needs {what} in the config")))
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Schrodinger => "schrodinger",
        Kind::Adjoint => "adjoint",
    }
}

/// Writes the full generator on every grid node: `t,row,col,re,im` with
/// `row`, `col` indices of the column-major vectorized operator.
pub fn evaluate(setup: &Setup, kind: Kind, out_dir: &Path) -> Result<Value, CliError> {
    let ev = Evaluator::new(&setup.model, &setup.quad, kind)?;
    let table = ev.generator_table(setup.order, GeneratorPath::MatrixRecursion)?;
    let name = format!("generator_{}.csv", kind_name(kind));
    let (path, mut w) = create(out_dir, &name)?;
    writeln!(w, "t,row,col,re,im")?;
    for (i, l) in table.iter().enumerate() {
        let t = fmt_e12(setup.quad.grid.time(i));
        for row in 0..l.nrows() {
            for col in 0..l.ncols() {
                let z = l[(row, col)];
                writeln!(w, "{t},{row},{col},{},{}", fmt_e12(z.re), fmt_e12(z.im))?;
            }
        }
    }
    w.flush()?;
    Ok(json!({
        "command": "evaluate",
        "kind": kind_name(kind),
        "order": setup.order,
        "nodes": table.len(),
        "file": path.display().to_string(),
    }))
}

fn write_trajectory(traj: &Trajectory, out_dir: &Path, name: &str) -> Result<PathBuf, CliError> {
    let (path, w) = create(out_dir, name)?;
    traj.write_csv(w)?;
    Ok(path)
}

fn monitor_summary(traj: &Trajectory) -> Value {
    let max = |f: fn(&tclgen_core::propagate::Monitor) -> f64| {
        traj.monitors.iter().map(f).fold(0.0, f64::max)
    };
    let min_eig = traj
        .monitors
        .iter()
        .filter_map(|m| m.min_eig)
        .fold(f64::INFINITY, f64::min);
    json!({
        "max_trace_dev": max(|m| m.trace_dev),
        "max_herm_residual": max(|m| m.herm_residual),
        "min_eig": if min_eig.is_finite() { json!(min_eig) } else { Value::Null },
    })
}

pub fn propagate(setup: &Setup, kind: Kind, out_dir: &Path) -> Result<Value, CliError> {
    let (traj, name) = match kind {
        Kind::Schrodinger => (
            propagate_state(
                &setup.model,
                require(&setup.rho0, "model.rho0")?,
                &setup.quad,
                setup.order,
            )?,
            "state.csv",
        ),
        Kind::Adjoint => (
            propagate_observable(
                &setup.model,
                require(&setup.observable, "observable")?,
                &setup.quad,
                setup.order,
            )?,
            "observable.csv",
        ),
    };
    let path = write_trajectory(&traj, out_dir, name)?;
    Ok(json!({
        "command": "propagate",
        "kind": kind_name(kind),
        "order": setup.order,
        "file": path.display().to_string(),
        "monitors": monitor_summary(&traj),
    }))
}

pub fn oracle(setup: &Setup, out_dir: &Path) -> Result<Value, CliError> {
    let full = FullModel::new(&setup.model, require(&setup.rho0, "model.rho0")?)?;
    let traj = exact_reduced_trajectory(&full, &setup.quad.grid)?;
    let path = write_trajectory(&traj, out_dir, "oracle.csv")?;
    Ok(json!({
        "command": "oracle",
        "dim": full.dim(),
        "file": path.display().to_string(),
        "monitors": monitor_summary(&traj),
    }))
}

/// Trace distance between the order-`N` equation and the exact dynamics per
/// time, plus the scaling table over `compare.couplings` when given.
pub fn compare(setup: &Setup, out_dir: &Path) -> Result<Value, CliError> {
    let rho0 = require(&setup.rho0, "model.rho0")?;
    let tcl = propagate_state(&setup.model, rho0, &setup.quad, setup.order)?;
    let exact = exact_reduced_trajectory(&FullModel::new(&setup.model, rho0)?, &setup.quad.grid)?;
    let dist = tcl.trace_distances(&exact)?;
    let (path, mut w) = create(out_dir, "compare.csv")?;
    writeln!(w, "t,trace_distance")?;
    for (t, d) in tcl.times.iter().zip(&dist) {
        writeln!(w, "{},{}", fmt_e12(*t), fmt_e12(*d))?;
    }
    w.flush()?;
    let mut summary = json!({
        "command": "compare",
        "order": setup.order,
        "g": setup.model.g(),
        "max_error": dist.iter().copied().fold(0.0, f64::max),
        "file": path.display().to_string(),
    });
    if !setup.couplings.is_empty() {
        let rows = scaling_probe(
            &setup.model,
            rho0,
            &setup.quad,
            setup.order,
            &setup.couplings,
        )?;
        let table: Vec<Value> = rows
            .iter()
            .map(|r| json!({"g": r.g, "err": r.err, "ratio": r.ratio}))
            .collect();
        let (scaling_path, mut w) = create(out_dir, "scaling.json")?;
        serde_json::to_writer_pretty(&mut w, &table).map_err(|e| CliError::Io(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        summary["scaling"] = Value::Array(table);
        summary["scaling_file"] = json!(scaling_path.display().to_string());
    }
    Ok(summary)
}
