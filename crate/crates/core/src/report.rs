//! Batch orchestration: run many graphs through the fault sweep, average
//! their tolerance curves, emit summary tables mirroring the per-probability
//! layout of the reference experiment, and render SVG charts.
//!
//! Batch config files are line oriented:
//!
//! ```text
//! [sim]
//! trials = 2000
//! seed = 99
//! exact-threshold = 2000   # optional, defaults to trials
//! workers = 0              # 0 = one per core
//!
//! [grid]
//! p = 0.1:0.9:0.1
//!
//! [graph]
//! Q4   = hypercube:n=4
//! 1-M4 = mobius:v=1,n=4
//! R    = random-regular:n=16,d=4,seed=100 x50   # 50 graphs, seeds 100..149
//!
//! [average]
//! H4 = Q4, 1-M4
//! R4 = R
//! ```
//!
//! An `xN` suffix replicates a `random-regular` spec N times with
//! consecutive seeds; the replicas are named `<name>.00`, `<name>.01`, ...
//! and the bare name stands for all of them inside `[average]`.

use crate::sim::{build_fault_profile, SimConfig};
use crate::tolerance::{build_curve, validate_grid, CurveRow, ToleranceCurve};
use crate::topology::GraphSpec;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

/// Writes through a temp file in the same directory, then renames, so
/// concurrent batch members never expose half-written files.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::validation(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    std::fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// `start:stop:step` grid with inclusive endpoints.
pub fn parse_p_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::validation(format!(
            "p-grid must be start:stop:step, got {text:?}"
        )));
    }
    let num = |s: &str| -> Result<f64> {
        s.parse()
            .map_err(|_| Error::validation(format!("p-grid component {s:?} is not a number")))
    };
    let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
    if !(step > 0.0) {
        return Err(Error::validation("p-grid step must be positive"));
    }
    if start > stop {
        return Err(Error::validation("p-grid start must not exceed stop"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|k| start + k as f64 * step).collect();
    validate_grid(&grid)?;
    Ok(grid)
}

/// One graph of a batch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchMember {
    pub name: String,
    pub spec: GraphSpec,
}

/// A named average over previously declared graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageSpec {
    pub label: String,
    /// Fully expanded member names.
    pub members: Vec<String>,
}

/// Parsed batch configuration.
#[derive(Clone, Debug)]
pub struct BatchConfig {
    pub sim: SimConfig,
    pub workers: usize,
    pub grid: Vec<f64>,
    pub members: Vec<BatchMember>,
    pub averages: Vec<AverageSpec>,
    /// Names declared as single graphs (not ensemble replicas), in
    /// declaration order; these become the summary columns.
    pub summary_names: Vec<String>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}

/// Parses a batch config; errors carry the line number.
pub fn parse_batch_config(text: &str) -> Result<BatchConfig> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Sim,
        Grid,
        Graph,
        Average,
    }
    let mut section = Section::None;
    let mut trials: u64 = 2000;
    let mut seed: u64 = 0;
    let mut exact_threshold: Option<u64> = None;
    let mut workers: usize = 0;
    let mut grid: Option<Vec<f64>> = None;
    let mut members: Vec<BatchMember> = Vec::new();
    let mut summary_names: Vec<String> = Vec::new();
    // Declared name -> expanded member names.
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut declared_order: Vec<String> = Vec::new();
    let mut raw_averages: Vec<(String, Vec<String>, usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let fail = |msg: String| Error::validation(format!("batch config line {lineno}: {msg}"));
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            section = match name {
                "sim" => Section::Sim,
                "grid" => Section::Grid,
                "graph" => Section::Graph,
                "average" => Section::Average,
                other => return Err(fail(format!("unknown section [{other}]"))),
            };
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| fail("expected key = value".into()))?;
        match section {
            Section::None => return Err(fail("directive outside any section".into())),
            Section::Sim => match key {
                "trials" => {
                    trials = value
                        .parse()
                        .map_err(|_| fail(format!("bad trials value {value:?}")))?
                }
                "seed" => {
                    seed = value
                        .parse()
                        .map_err(|_| fail(format!("bad seed value {value:?}")))?
                }
                "exact-threshold" => {
                    exact_threshold = Some(
                        value
                            .parse()
                            .map_err(|_| fail(format!("bad exact-threshold value {value:?}")))?,
                    )
                }
                "workers" => {
                    workers = value
                        .parse()
                        .map_err(|_| fail(format!("bad workers value {value:?}")))?
                }
                other => return Err(fail(format!("unknown [sim] key {other:?}"))),
            },
            Section::Grid => match key {
                "p" => grid = Some(parse_p_grid(value).map_err(|e| fail(e.to_string()))?),
                other => return Err(fail(format!("unknown [grid] key {other:?}"))),
            },
            Section::Graph => {
                if !valid_name(key) {
                    return Err(fail(format!(
                        "graph name {key:?} may only contain [A-Za-z0-9._-]"
                    )));
                }
                if groups.contains_key(key) {
                    return Err(fail(format!("graph name {key:?} declared twice")));
                }
                let mut tokens = value.split_whitespace();
                let spec_text = tokens
                    .next()
                    .ok_or_else(|| fail("missing graph spec".into()))?;
                let spec = GraphSpec::parse(spec_text).map_err(|e| fail(e.to_string()))?;
                let replicate = match tokens.next() {
                    None => None,
                    Some(tok) => {
                        let n: usize = tok
                            .strip_prefix('x')
                            .and_then(|digits| digits.parse().ok())
                            .filter(|&n| n >= 1)
                            .ok_or_else(|| {
                                fail(format!("expected replication suffix xN, got {tok:?}"))
                            })?;
                        if tokens.next().is_some() {
                            return Err(fail("trailing tokens after the replication suffix".into()));
                        }
                        Some(n)
                    }
                };
                match replicate {
                    None => {
                        members.push(BatchMember {
                            name: key.to_string(),
                            spec,
                        });
                        groups.insert(key.to_string(), vec![key.to_string()]);
                        declared_order.push(key.to_string());
                        summary_names.push(key.to_string());
                    }
                    Some(count) => {
                        let GraphSpec::RandomRegular { n, d, seed: base } = spec else {
                            return Err(fail(
                                "xN replication is only meaningful for random-regular specs"
                                    .into(),
                            ));
                        };
                        let width = (count.saturating_sub(1)).to_string().len().max(2);
                        let mut names = Vec::with_capacity(count);
                        for k in 0..count {
                            let name = format!("{key}.{k:0width$}");
                            let seed = base.checked_add(k as u64).ok_or_else(|| {
                                fail("replica seed overflows 64 bits".into())
                            })?;
                            members.push(BatchMember {
                                name: name.clone(),
                                spec: GraphSpec::RandomRegular { n, d, seed },
                            });
                            names.push(name);
                        }
                        groups.insert(key.to_string(), names);
                        declared_order.push(key.to_string());
                    }
                }
            }
            Section::Average => {
                if !valid_name(key) {
                    return Err(fail(format!(
                        "average label {key:?} may only contain [A-Za-z0-9._-]"
                    )));
                }
                let refs: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if refs.is_empty() {
                    return Err(fail(format!("average {key:?} lists no graphs")));
                }
                raw_averages.push((key.to_string(), refs, lineno));
            }
        }
    }

    if members.is_empty() {
        return Err(Error::validation("batch config declares no graphs"));
    }
    let mut averages = Vec::with_capacity(raw_averages.len());
    let mut labels_seen = Vec::new();
    for (label, refs, lineno) in raw_averages {
        if labels_seen.contains(&label) || groups.contains_key(&label) {
            return Err(Error::validation(format!(
                "batch config line {lineno}: average label {label:?} collides with another name"
            )));
        }
        let mut expanded = Vec::new();
        for r in refs {
            let group = groups.get(&r).ok_or_else(|| {
                Error::validation(format!(
                    "batch config line {lineno}: average {label:?} references undeclared graph {r:?}"
                ))
            })?;
            expanded.extend(group.iter().cloned());
        }
        labels_seen.push(label.clone());
        averages.push(AverageSpec {
            label,
            members: expanded,
        });
    }

    let mut sim = SimConfig::new(trials, seed);
    sim.exact_threshold = exact_threshold.unwrap_or(trials);
    Ok(BatchConfig {
        sim,
        workers,
        grid: grid.unwrap_or_else(|| parse_p_grid("0.1:0.9:0.1").expect("default grid")),
        members,
        averages,
        summary_names,
    })
}

/// What [`run_batch`] produced, for progress reporting.
#[derive(Debug)]
pub struct BatchReport {
    pub members: usize,
    pub averages: usize,
    pub files_written: usize,
}

/// Runs every member through the fault sweep, writes per-graph files,
/// averaged curves, and the two summary tables into `out_dir`.
///
/// Members run concurrently up to `cfg.workers` threads; since every
/// member's output depends only on `(spec, sim config, name)`, the output
/// tree is byte-identical across runs and worker counts.
pub fn run_batch(cfg: &BatchConfig, out_dir: &Path) -> Result<BatchReport> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Internal(format!("cannot build worker pool: {e}")))?;
    let results: Vec<Result<ToleranceCurve>> = pool.install(|| {
        cfg.members
            .par_iter()
            .map(|member| run_member(member, cfg, out_dir))
            .collect()
    });
    // Report failures in declaration order so the culprit is deterministic.
    let mut curves: BTreeMap<&str, ToleranceCurve> = BTreeMap::new();
    for (member, result) in cfg.members.iter().zip(results) {
        curves.insert(member.name.as_str(), result?);
    }
    let mut files_written = 3 * cfg.members.len();

    for avg in &cfg.averages {
        let picked: Vec<&ToleranceCurve> = avg
            .members
            .iter()
            .map(|name| curves.get(name.as_str()).expect("validated at parse time"))
            .collect();
        let curve = average_curves(&avg.label, &picked)?;
        curve.write_csv_file(&out_dir.join(format!("avg-{}.tolerance.csv", avg.label)))?;
        curves.insert(avg.label.as_str(), curve);
        files_written += 1;
    }

    let columns: Vec<(&str, &ToleranceCurve)> = cfg
        .summary_names
        .iter()
        .map(|n| n.as_str())
        .chain(cfg.averages.iter().map(|a| a.label.as_str()))
        .map(|name| (name, curves.get(name).expect("present by construction")))
        .collect();
    let ef = summary_table(&cfg.grid, &columns, |row| row.ef);
    write_atomic(&out_dir.join("summary-ef.csv"), ef.as_bytes())?;
    let mef = summary_table(&cfg.grid, &columns, |row| row.mef);
    write_atomic(&out_dir.join("summary-mef.csv"), mef.as_bytes())?;
    files_written += 2;

    Ok(BatchReport {
        members: cfg.members.len(),
        averages: cfg.averages.len(),
        files_written,
    })
}

fn run_member(member: &BatchMember, cfg: &BatchConfig, out_dir: &Path) -> Result<ToleranceCurve> {
    let named = |e: Error| -> Error {
        match e {
            Error::Io { .. } => e,
            Error::Internal(msg) => Error::Internal(format!("member {}: {msg}", member.name)),
            Error::BudgetExceeded(msg) => {
                Error::BudgetExceeded(format!("member {}: {msg}", member.name))
            }
            Error::Validation(msg) => Error::Validation(format!("member {}: {msg}", member.name)),
        }
    };
    let graph = member.spec.materialize().map_err(named)?;
    crate::graph::write_graph_file(
        &out_dir.join(format!("{}.graph.txt", member.name)),
        &graph,
        Some(&member.spec.canonical_name()),
    )?;
    let profile = build_fault_profile(&graph, &member.name, &cfg.sim).map_err(named)?;
    profile.write_csv_file(&out_dir.join(format!("{}.profile.csv", member.name)))?;
    let curve = build_curve(&profile, &cfg.grid, None).map_err(named)?;
    curve.write_csv_file(&out_dir.join(format!("{}.tolerance.csv", member.name)))?;
    Ok(curve)
}

/// Arithmetic mean of member tolerances at each grid point, in member order.
pub fn average_curves(label: &str, members: &[&ToleranceCurve]) -> Result<ToleranceCurve> {
    let first = members
        .first()
        .ok_or_else(|| Error::validation("average over an empty member list"))?;
    let rows = first.rows.len();
    for c in members {
        if c.rows.len() != rows || c.rows.iter().zip(&first.rows).any(|(a, b)| a.p != b.p) {
            return Err(Error::validation(format!(
                "average {label:?}: member {} uses a different probability grid",
                c.graph_name
            )));
        }
    }
    let k = members.len() as f64;
    let rows = (0..rows)
        .map(|i| CurveRow {
            p: first.rows[i].p,
            ef: members.iter().map(|c| c.rows[i].ef).sum::<f64>() / k,
            mef: members.iter().map(|c| c.rows[i].mef).sum::<f64>() / k,
            bound: None,
        })
        .collect();
    Ok(ToleranceCurve {
        graph_name: label.to_string(),
        rows,
    })
}

/// Per-probability table with one column per graph and a trailing
/// average-over-p row, mirroring the layout of the reference tables.
fn summary_table(
    grid: &[f64],
    columns: &[(&str, &ToleranceCurve)],
    pick: impl Fn(&CurveRow) -> f64,
) -> String {
    let mut out = String::from("p");
    for (name, _) in columns {
        let _ = write!(out, ",{name}");
    }
    out.push('\n');
    for (i, &p) in grid.iter().enumerate() {
        let _ = write!(out, "{p:.6}");
        for (_, curve) in columns {
            let _ = write!(out, ",{:.6}", pick(&curve.rows[i]));
        }
        out.push('\n');
    }
    out.push_str("average");
    for (_, curve) in columns {
        let mean = curve.rows.iter().map(&pick).sum::<f64>() / curve.rows.len() as f64;
        let _ = write!(out, ",{mean:.6}");
    }
    out.push('\n');
    out
}

// ---------------------------------------------------------------------------
// SVG chart
// ---------------------------------------------------------------------------

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

const SVG_W: f64 = 720.0;
const SVG_H: f64 = 480.0;
const MARGIN_L: f64 = 62.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 24.0;
const MARGIN_B: f64 = 48.0;

/// Renders tolerance curves as one SVG: solid polylines for EF tolerance,
/// dashed for MEF tolerance, optionally dotted for the upper bound. All
/// inputs must share the same probability grid. Output bytes depend only on
/// the inputs.
pub fn render_curves_svg(inputs: &[(String, ToleranceCurve)], show_bound: bool) -> Result<String> {
    let (first_label, first) = inputs
        .first()
        .ok_or_else(|| Error::validation("no tolerance curves to plot"))?;
    if first.rows.is_empty() {
        return Err(Error::validation(format!("curve {first_label:?} is empty")));
    }
    for (label, curve) in inputs {
        if curve.rows.len() != first.rows.len()
            || curve.rows.iter().zip(&first.rows).any(|(a, b)| a.p != b.p)
        {
            return Err(Error::validation(format!(
                "curve {label:?} uses a different probability grid than {first_label:?}"
            )));
        }
    }
    let grid: Vec<f64> = first.rows.iter().map(|r| r.p).collect();
    let (p_min, p_max) = (grid[0], *grid.last().unwrap());
    let span = if p_max > p_min { p_max - p_min } else { 1.0 };
    let plot_w = SVG_W - MARGIN_L - MARGIN_R;
    let plot_h = SVG_H - MARGIN_T - MARGIN_B;
    let x = |p: f64| MARGIN_L + (p - p_min) / span * plot_w;
    let y = |t: f64| MARGIN_T + (1.0 - t.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\" font-family=\"monospace\" font-size=\"11\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>"
    );
    // Axes.
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
        MARGIN_L,
        MARGIN_T,
        MARGIN_L,
        MARGIN_T + plot_h
    );
    // Y ticks every 0.2.
    for k in 0..=5 {
        let t = k as f64 * 0.2;
        let yy = y(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#cccccc\"/>",
            MARGIN_L,
            MARGIN_L + plot_w
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{t:.1}</text>",
            MARGIN_L - 6.0,
            yy + 4.0
        );
    }
    // X ticks on (a subset of) the grid.
    let stride = grid.len().div_ceil(10).max(1);
    for (i, &p) in grid.iter().enumerate() {
        if i % stride != 0 && i + 1 != grid.len() {
            continue;
        }
        let xx = x(p);
        let _ = writeln!(
            svg,
            "<line x1=\"{xx:.2}\" y1=\"{:.2}\" x2=\"{xx:.2}\" y2=\"{:.2}\" stroke=\"black\"/>",
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{xx:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{p:.2}</text>",
            MARGIN_T + plot_h + 18.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">edge failure probability p</text>",
        MARGIN_L + plot_w / 2.0,
        SVG_H - 10.0
    );

    let polyline = |svg: &mut String, pts: &[(f64, f64)], color: &str, dash: &str| {
        let coords: Vec<String> = pts.iter().map(|&(a, b)| format!("{a:.2},{b:.2}")).collect();
        let dash_attr = if dash.is_empty() {
            String::new()
        } else {
            format!(" stroke-dasharray=\"{dash}\"")
        };
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr} points=\"{}\"/>",
            coords.join(" ")
        );
    };

    for (i, (_, curve)) in inputs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let ef: Vec<(f64, f64)> = curve.rows.iter().map(|r| (x(r.p), y(r.ef))).collect();
        polyline(&mut svg, &ef, color, "");
        let mef: Vec<(f64, f64)> = curve.rows.iter().map(|r| (x(r.p), y(r.mef))).collect();
        polyline(&mut svg, &mef, color, "7 4");
        if show_bound && curve.rows.iter().all(|r| r.bound.is_some()) {
            let bound: Vec<(f64, f64)> = curve
                .rows
                .iter()
                .map(|r| (x(r.p), y(r.bound.unwrap())))
                .collect();
            polyline(&mut svg, &bound, color, "2 4");
        }
    }

    // Legend.
    let legend_x = MARGIN_L + plot_w + 14.0;
    let mut legend_y = MARGIN_T + 10.0;
    for (i, (label, _)) in inputs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(
            svg,
            "<line x1=\"{legend_x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            legend_y - 4.0,
            legend_x + 26.0,
            legend_y - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{legend_y:.2}\">{}</text>",
            legend_x + 32.0,
            xml_escape(label)
        );
        legend_y += 16.0;
    }
    legend_y += 8.0;
    for (style, what) in [("", "t_e"), ("7 4", "t_e^M"), ("2 4", "bound")] {
        if style == "2 4" && !show_bound {
            continue;
        }
        let _ = writeln!(
            svg,
            "<line x1=\"{legend_x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"{}/>",
            legend_y - 4.0,
            legend_x + 26.0,
            legend_y - 4.0,
            if style.is_empty() {
                String::new()
            } else {
                format!(" stroke-dasharray=\"{style}\"")
            }
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{legend_y:.2}\">{what}</text>",
            legend_x + 32.0
        );
        legend_y += 16.0;
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
