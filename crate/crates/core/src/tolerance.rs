//! Converts a fault profile into tolerance values: the probability that the
//! graph stays connected (EF tolerance) or strongly Menger edge-connected
//! (MEF tolerance) when every edge fails independently with probability `p`,
//! plus the `(1 - p^d)^i` upper bound for d-regular graphs and its limit
//! behavior for growing families.

use crate::sim::FaultProfile;
use crate::{Error, Result};
use std::io::{BufRead, Write};
use std::path::Path;

/// Binomial mixture of the fault profile at failure probability `p`:
///
/// ```text
/// t = sum over f of C(m, f) * p_f * p^f * (1-p)^(m-f)
/// ```
///
/// Returns `(EF tolerance, MEF tolerance)` from the same profile. The
/// binomial weights are computed in log space and exponentiated per term,
/// so the sum stays finite for any edge count. Fault counts missing from
/// the profile contribute 0, with a warning.
pub fn combine(profile: &FaultProfile, p: f64) -> Result<(f64, f64)> {
    let weights = BinomialWeights::new(profile.m, p)?;
    warn_if_truncated(profile);
    let mut ef = 0.0;
    let mut mef = 0.0;
    for f in 0..=profile.m {
        let w = weights.weight(f);
        if w == 0.0 {
            continue;
        }
        if let Some(level) = profile.level(f) {
            ef += w * level.p_connected();
            mef += w * level.p_menger();
        }
    }
    Ok((ef, mef))
}

/// Standard errors of [`combine`]'s two estimates, propagated from the
/// per-level binomial variance `p_f (1 - p_f) / trials_f`. Exact and forced
/// levels contribute no variance.
pub fn combine_std_err(profile: &FaultProfile, p: f64) -> Result<(f64, f64)> {
    let weights = BinomialWeights::new(profile.m, p)?;
    let mut var_ef = 0.0;
    let mut var_mef = 0.0;
    for level in &profile.levels {
        if level.mode != crate::sim::LevelMode::Sampled || level.trials == 0 {
            continue;
        }
        let w = weights.weight(level.f);
        let t = level.trials as f64;
        let pc = level.p_connected();
        let pm = level.p_menger();
        var_ef += w * w * pc * (1.0 - pc) / t;
        var_mef += w * w * pm * (1.0 - pm) / t;
    }
    Ok((var_ef.sqrt(), var_mef.sqrt()))
}

fn warn_if_truncated(profile: &FaultProfile) {
    if !profile.covers_full_range() {
        log::warn!(
            "profile for {} covers {}..={} of 0..={}; missing fault counts count as 0",
            if profile.graph_name.is_empty() {
                "<unnamed>"
            } else {
                &profile.graph_name
            },
            profile.levels.first().map(|l| l.f).unwrap_or(0),
            profile.levels.last().map(|l| l.f).unwrap_or(0),
            profile.m,
        );
    }
}

/// `C(m, f) p^f (1-p)^(m-f)` for all `f`, with `p = 0` and `p = 1` handled
/// as exact limits so no `0 * log 0` appears.
struct BinomialWeights {
    m: usize,
    p: f64,
    ln_fact: Vec<f64>,
}

impl BinomialWeights {
    fn new(m: usize, p: f64) -> Result<BinomialWeights> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!(
                "failure probability {p} is outside [0, 1]"
            )));
        }
        let mut ln_fact = Vec::with_capacity(m + 1);
        ln_fact.push(0.0);
        for i in 1..=m {
            ln_fact.push(ln_fact[i - 1] + (i as f64).ln());
        }
        Ok(BinomialWeights { m, p, ln_fact })
    }

    fn weight(&self, f: usize) -> f64 {
        if self.p == 0.0 {
            return if f == 0 { 1.0 } else { 0.0 };
        }
        if self.p == 1.0 {
            return if f == self.m { 1.0 } else { 0.0 };
        }
        let ln_choose = self.ln_fact[self.m] - self.ln_fact[f] - self.ln_fact[self.m - f];
        (ln_choose + f as f64 * self.p.ln() + (self.m - f) as f64 * (1.0 - self.p).ln()).exp()
    }
}

/// Upper bound `(1 - p^d)^i` on the EF tolerance of any d-regular graph
/// with independence number `i`.
pub fn upper_bound(d: usize, i: usize, p: f64) -> f64 {
    debug_assert!(d >= 1 && i >= 1);
    debug_assert!((0.0..=1.0).contains(&p));
    (1.0 - p.powi(d as i32)).powi(i as i32)
}

/// Parameters of a growing regular-graph family whose independence number
/// scales like `c * alpha^d` in the regular degree `d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundParams {
    pub degree: usize,
    pub independence: usize,
    pub alpha: f64,
    pub c: f64,
}

impl BoundParams {
    pub fn new(degree: usize, independence: usize, alpha: f64, c: f64) -> Result<BoundParams> {
        if degree < 1 || independence < 1 {
            return Err(Error::validation(
                "degree and independence number must be at least 1",
            ));
        }
        if !(alpha > 1.0) {
            return Err(Error::validation("alpha must exceed 1"));
        }
        if !(c > 0.0) {
            return Err(Error::validation("growth constant c must be positive"));
        }
        Ok(BoundParams {
            degree,
            independence,
            alpha,
            c,
        })
    }
}

/// Limit of the upper bound along a family with `i ~ c * alpha^d` as the
/// degree grows: 1 below the critical probability `1/alpha`, `e^(-c)` at
/// it, 0 above it.
pub fn corollary_limit(params: &BoundParams, p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    let critical = 1.0 / params.alpha;
    if p < critical {
        1.0
    } else if p == critical {
        (-params.c).exp()
    } else {
        0.0
    }
}

/// One evaluated grid point of a tolerance curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub p: f64,
    pub ef: f64,
    pub mef: f64,
    pub bound: Option<f64>,
}

/// EF/MEF tolerance over a probability grid, optionally with the regular
/// upper bound alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceCurve {
    pub graph_name: String,
    pub rows: Vec<CurveRow>,
}

/// Evaluates [`combine`] across a strictly increasing grid; the bound column
/// is filled when `(d, i)` is supplied.
pub fn build_curve(
    profile: &FaultProfile,
    grid: &[f64],
    bound: Option<(usize, usize)>,
) -> Result<ToleranceCurve> {
    validate_grid(grid)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &p in grid {
        let (ef, mef) = combine(profile, p)?;
        rows.push(CurveRow {
            p,
            ef,
            mef,
            bound: bound.map(|(d, i)| upper_bound(d, i, p)),
        });
    }
    Ok(ToleranceCurve {
        graph_name: profile.graph_name.clone(),
        rows,
    })
}

pub(crate) fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::validation("probability grid is empty"));
    }
    for pair in grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::validation(format!(
                "probability grid must be strictly increasing, got {} after {}",
                pair[1], pair[0]
            )));
        }
    }
    if grid[0] < 0.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::validation("probability grid must lie within [0, 1]"));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Tolerance CSV
// ---------------------------------------------------------------------------
//
// Header `p,t_e,t_e_sm,upper_bound`; probabilities with 6 decimals; the
// bound cell stays empty when it was not computed.

impl ToleranceCurve {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        if !self.graph_name.is_empty() {
            writeln!(w, "# graph={}", self.graph_name)?;
        }
        writeln!(w, "p,t_e,t_e_sm,upper_bound")?;
        for row in &self.rows {
            match row.bound {
                Some(b) => writeln!(
                    w,
                    "{:.6},{:.6},{:.6},{:.6}",
                    row.p, row.ef, row.mef, b
                )?,
                None => writeln!(w, "{:.6},{:.6},{:.6},", row.p, row.ef, row.mef)?,
            }
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("curve CSV is ASCII")
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<ToleranceCurve> {
        let mut graph_name = String::new();
        let mut saw_header = false;
        let mut rows = Vec::new();
        for (idx, line) in r.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::validation(format!("line {lineno}: {e}")))?;
            let line = line.trim_end();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("graph=") {
                    graph_name = v.to_string();
                }
                continue;
            }
            if !saw_header {
                if line != "p,t_e,t_e_sm,upper_bound" {
                    return Err(Error::validation(format!(
                        "line {lineno}: unexpected tolerance header {line:?}"
                    )));
                }
                saw_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::validation(format!(
                    "line {lineno}: expected 4 fields, found {}",
                    fields.len()
                )));
            }
            let num = |s: &str, what: &str| -> Result<f64> {
                s.parse().map_err(|_| {
                    Error::validation(format!("line {lineno}: bad {what} value {s:?}"))
                })
            };
            rows.push(CurveRow {
                p: num(fields[0], "p")?,
                ef: num(fields[1], "t_e")?,
                mef: num(fields[2], "t_e_sm")?,
                bound: if fields[3].is_empty() {
                    None
                } else {
                    Some(num(fields[3], "upper_bound")?)
                },
            });
        }
        if !saw_header {
            return Err(Error::validation("missing tolerance header line"));
        }
        Ok(ToleranceCurve { graph_name, rows })
    }

    pub fn write_csv_file(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).map_err(|e| Error::io(path, e))?;
        crate::report::write_atomic(path, &buf)
    }

    pub fn read_csv_file(path: &Path) -> Result<ToleranceCurve> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        ToleranceCurve::read_csv(std::io::BufReader::new(file))
    }
}
