//! Append-only experiment reports and their text serializations.

use crate::certify::Certificate;

/// Decimal with 17 significant digits, round-trip exact for `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("{v}")
    }
}

/// A declared acceptance check; any failure makes the run exit with 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Monotonicity {
    pub violations: usize,
    pub worst_increment: f64,
    pub threshold: f64,
}

impl Monotonicity {
    /// Counts increments of `series` above `relative * series[0]`.
    pub fn of(series: &[f64], relative: f64) -> Monotonicity {
        let threshold = relative * series.first().copied().unwrap_or(0.0).abs();
        let mut violations = 0;
        let mut worst = f64::NEG_INFINITY;
        for w in series.windows(2) {
            let d = w[1] - w[0];
            worst = worst.max(d);
            if d > threshold {
                violations += 1;
            }
        }
        Monotonicity {
            violations,
            worst_increment: if worst.is_finite() { worst } else { 0.0 },
            threshold,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DecayReport {
    pub kind: String,
    pub config_hash: String,
    pub grid_n: usize,
    pub grid_l: f64,
    pub grid_h: f64,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub monotonicity: Option<Monotonicity>,
    pub integrals: Vec<(String, f64)>,
    pub bounds: Vec<(String, f64)>,
    pub constants: Vec<(String, f64)>,
    pub certificates: Vec<Certificate>,
    pub checks: Vec<Check>,
    pub flags: Vec<String>,
    pub notes: Vec<(String, String)>,
    pub boundary_contaminated: bool,
}

impl DecayReport {
    pub fn new(kind: &str, config_hash: &str, grid: &crate::grid::Grid) -> DecayReport {
        DecayReport {
            kind: kind.to_string(),
            config_hash: config_hash.to_string(),
            grid_n: grid.n(),
            grid_l: grid.half_width(),
            grid_h: grid.h(),
            ..Default::default()
        }
    }

    pub fn set_columns(&mut self, cols: &[&str]) {
        assert!(self.columns.is_empty(), "series columns are fixed once set");
        self.columns = cols.iter().map(|s| s.to_string()).collect();
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn integral(&mut self, name: &str, v: f64) {
        self.integrals.push((name.to_string(), v));
    }

    pub fn bound(&mut self, name: &str, v: f64) {
        self.bounds.push((name.to_string(), v));
    }

    pub fn constant(&mut self, name: &str, v: f64) {
        self.constants.push((name.to_string(), v));
    }

    pub fn note(&mut self, key: &str, value: impl Into<String>) {
        self.notes.push((key.to_string(), value.into()));
    }

    pub fn flag(&mut self, f: &str) {
        if !self.flags.iter().any(|x| x == f) {
            self.flags.push(f.to_string());
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records the certificate and a check of the same name.
    pub fn certificate(&mut self, c: Certificate) {
        self.check(
            &c.name,
            c.passed,
            format!("margin={} tol={}", fmt_f64(c.margin), fmt_f64(c.tolerance)),
        );
        self.certificates.push(c);
    }

    pub fn lookup(&self, name: &str) -> Option<f64> {
        self.integrals
            .iter()
            .chain(&self.bounds)
            .chain(&self.constants)
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn series_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&v| fmt_f64(v)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn certificates_csv(&self) -> String {
        let mut s = String::from(
            "name,params,n,h,bulk_start,bulk_end,lambda_min,lambda_max,required,margin,tolerance,strict,passed\n",
        );
        for c in &self.certificates {
            s.push_str(&format!(
                "{},\"{}\",{},{},{},{},{},{},{},{},{},{},{}\n",
                c.name,
                c.params.replace('"', "'"),
                c.n,
                fmt_f64(c.h),
                c.bulk.start,
                c.bulk.end,
                fmt_f64(c.lambda_min),
                fmt_f64(c.lambda_max),
                fmt_f64(c.required),
                fmt_f64(c.margin),
                fmt_f64(c.tolerance),
                c.strict,
                c.passed
            ));
        }
        s
    }

    /// Line-oriented `key=value` summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: String, v: String| s.push_str(&format!("{k}={v}\n"));
        kv("kind".into(), self.kind.clone());
        kv("status".into(), if self.passed() { "pass" } else { "fail" }.into());
        kv("boundary_contaminated".into(), self.boundary_contaminated.to_string());
        kv("flags".into(), self.flags.join(","));
        if let Some(m) = &self.monotonicity {
            kv("monotonicity.violations".into(), m.violations.to_string());
            kv("monotonicity.worst_increment".into(), fmt_f64(m.worst_increment));
            kv("monotonicity.threshold".into(), fmt_f64(m.threshold));
        }
        for (k, v) in &self.integrals {
            kv(format!("integral.{k}"), fmt_f64(*v));
        }
        for (k, v) in &self.bounds {
            kv(format!("bound.{k}"), fmt_f64(*v));
        }
        for (k, v) in &self.constants {
            kv(format!("constant.{k}"), fmt_f64(*v));
        }
        for c in &self.certificates {
            kv(format!("certificate.{}.margin", c.name), fmt_f64(c.margin));
        }
        for c in &self.checks {
            kv(
                format!("check.{}", c.name),
                format!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.detail),
            );
        }
        for (k, v) in &self.notes {
            kv(format!("note.{k}"), v.clone());
        }
        s
    }
}

/// Trapezoid rule over a possibly non-uniform abscissa.
pub fn trapezoid(t: &[f64], y: &[f64]) -> f64 {
    t.windows(2)
        .zip(y.windows(2))
        .map(|(tt, yy)| 0.5 * (tt[1] - tt[0]) * (yy[0] + yy[1]))
        .sum()
}

/// Running trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(t: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..t.len() {
        acc += 0.5 * (t[k] - t[k - 1]) * (y[k] + y[k - 1]);
        out.push(acc);
    }
    out
}
