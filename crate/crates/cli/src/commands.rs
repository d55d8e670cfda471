//! Command implementations. Each renders its complete output into a String
//! so that results computed in parallel are emitted in index order.

use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;
use serde_json::{json, Value};

use dmf_core::isogeny::census;
use dmf_core::spectra::{
    conjecture_scans, figure_rows, oldnew_criterion_with_cap, ram_suff_check, repeated_eig_detect, spectrum, trace_powers,
    HankelEvidence, HankelVerdict, SpectrumOptions, SpectrumReport,
};
use dmf_core::traces::{trace_auto, TraceQuery, TraceResult};
use dmf_core::combinat::dim_cusp;
use dmf_core::{Error, FieldDesc, PolyA};

use crate::config::{parse_prime, split_list, Format, UsageError};

/// Why a command failed.
#[derive(Debug)]
pub enum CmdError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError::Core(e)
    }
}

impl From<UsageError> for CmdError {
    fn from(e: UsageError) -> Self {
        CmdError::Usage(e.0)
    }
}

impl From<csv::Error> for CmdError {
    fn from(e: csv::Error) -> Self {
        CmdError::Usage(format!("csv output failed: {e}"))
    }
}

pub type CmdResult = Result<String, CmdError>;

/// Everything a trace-style query needs after validation.
#[derive(Clone, Debug)]
pub struct Query {
    pub field: FieldDesc,
    pub prime: PolyA,
    pub n: u32,
    pub l: i64,
    pub cap: u32,
    pub unscaled: bool,
}

impl Query {
    pub fn at(&self, k: u64) -> Result<TraceQuery, CmdError> {
        Ok(TraceQuery::new(&self.prime, self.n, k, self.l)?.with_cap(self.cap))
    }

    /// The trace of T_℘ⁿ, times ℘ⁿ when the unscaled operator is requested.
    fn trace(&self, k: u64) -> Result<TraceResult, CmdError> {
        let mut r = trace_auto(&self.at(k)?)?;
        if self.unscaled {
            r.value = r.value.mul(&self.prime.pow(self.n as u64));
        }
        Ok(r)
    }

    fn header(&self) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("q".into(), json!(self.field.size()));
        m.insert("modulus".into(), json!(self.field.modulus_string()));
        m.insert("prime".into(), json!(self.prime.to_string()));
        m.insert("n".into(), json!(self.n));
        m
    }
}

fn trace_json(q: &Query, r: &TraceResult) -> Value {
    let f = &q.field;
    let coeffs: Vec<Value> = r
        .value
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(e, &c)| json!([e, f.format(c)]))
        .collect();
    let mut m = q.header();
    m.insert("k".into(), json!(r.query.k));
    m.insert("l".into(), json!(r.query.l));
    m.insert("trace".into(), json!(r.value.to_string()));
    m.insert("coeffs".into(), Value::Array(coeffs));
    m.insert("method".into(), json!(r.method.as_str()));
    Value::Object(m)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn ratio_str(r: &Ratio<i64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_decimal(r: &Ratio<i64>) -> String {
    let v = *r.numer() as f64 / *r.denom() as f64;
    format!("{v}")
}

pub fn cmd_trace(q: &Query, ks: &[u64], format: Format) -> CmdResult {
    let results: Vec<TraceResult> = ks.par_iter().map(|&k| q.trace(k)).collect::<Result<_, _>>()?;
    match format {
        Format::Text => {
            let mut out = String::new();
            if let [r] = results.as_slice() {
                out.push_str(&format!("{}\nmethod: {}\n", r.value, r.method.as_str()));
            } else {
                for r in &results {
                    out.push_str(&format!("k={}\t{}\t{}\n", r.query.k, r.value, r.method.as_str()));
                }
            }
            Ok(out)
        }
        Format::Json => match results.as_slice() {
            [r] => Ok(pretty(&trace_json(q, r))),
            _ => Ok(pretty(&Value::Array(results.iter().map(|r| trace_json(q, r)).collect()))),
        },
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "l", "trace", "method"])?;
            for r in &results {
                w.write_record([r.query.k.to_string(), r.query.l.to_string(), r.value.to_string(), r.method.as_str().into()])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| CmdError::Usage(e.to_string()))?).expect("utf-8"))
        }
    }
}

/// One column of a table: a field and a prime in it.
pub struct Column {
    pub label: String,
    pub query: Query,
}

/// Builds the table columns: one per q when several fields are given or a
/// single prime is named, otherwise one per prime.
pub fn table_columns(
    fields: &[FieldDesc],
    primes: &str,
    n: u32,
    l: i64,
    cap: u32,
    unscaled: bool,
) -> Result<Vec<Column>, CmdError> {
    let names = split_list(primes);
    if names.is_empty() {
        return Err(CmdError::Usage("--prime needs at least one polynomial".into()));
    }
    if fields.len() > 1 && names.len() > 1 {
        return Err(CmdError::Usage("give several --q values or several primes, not both".into()));
    }
    let mut cols = Vec::new();
    for f in fields {
        for name in &names {
            let prime = parse_prime(f, name)?;
            let label = if names.len() > 1 { prime.to_string() } else { format!("q{}", f.size()) };
            cols.push(Column {
                label,
                query: Query { field: f.clone(), prime, n, l, cap, unscaled },
            });
        }
    }
    Ok(cols)
}

pub fn cmd_table(cols: &[Column], ks: &[u64], format: Format) -> CmdResult {
    let cells: Vec<(u64, usize)> = ks.iter().flat_map(|&k| (0..cols.len()).map(move |c| (k, c))).collect();
    let values: Vec<TraceResult> = cells
        .par_iter()
        .map(|&(k, c)| cols[c].query.trace(k))
        .collect::<Result<_, _>>()?;
    let row = |i: usize| &values[i * cols.len()..(i + 1) * cols.len()];
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["k".to_string()];
            header.extend(cols.iter().map(|c| c.label.clone()));
            w.write_record(&header)?;
            for (i, k) in ks.iter().enumerate() {
                let mut rec = vec![k.to_string()];
                rec.extend(row(i).iter().map(|r| r.value.to_string()));
                w.write_record(&rec)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| CmdError::Usage(e.to_string()))?).expect("utf-8"))
        }
        Format::Text => {
            let mut out = format!("| k | {} |\n", cols.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(" | "));
            out.push_str(&format!("|---|{}\n", "---|".repeat(cols.len())));
            for (i, k) in ks.iter().enumerate() {
                let cells: Vec<String> = row(i).iter().map(|r| r.value.to_string()).collect();
                out.push_str(&format!("| {k} | {} |\n", cells.join(" | ")));
            }
            Ok(out)
        }
        Format::Json => {
            let arr = values
                .iter()
                .enumerate()
                .map(|(i, r)| trace_json(&cols[i % cols.len()].query, r))
                .collect();
            Ok(pretty(&Value::Array(arr)))
        }
    }
}

pub fn cmd_census(q: &Query, format: Format) -> CmdResult {
    let c = census(&q.prime, q.n)?;
    let rows = c.to_csv_rows();
    match format {
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["a", "b", "case", "count_mod_p"])?;
            for r in &rows {
                w.write_record(r)?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| CmdError::Usage(e.to_string()))?).expect("utf-8"))
        }
        Format::Json => {
            let arr = rows
                .iter()
                .map(|r| json!({"a": r[0], "b": r[1], "case": r[2], "count_mod_p": r[3]}))
                .collect();
            let mut m = q.header();
            m.insert("classes".into(), Value::Array(arr));
            Ok(pretty(&Value::Object(m)))
        }
    }
}

pub fn cmd_iso(q: &Query, a: &str, b: &str, format: Format) -> CmdResult {
    let f = &q.field;
    let a = PolyA::parse(f, a).map_err(|e| CmdError::Usage(format!("invalid --a '{a}': {e}")))?;
    let b = f.parse(b).map_err(|e| CmdError::Usage(format!("invalid --b '{b}': {e}")))?;
    if b == 0 {
        return Err(CmdError::Usage("--b must be a nonzero field element".into()));
    }
    let c = census(&q.prime, q.n)?;
    let count = c.count(&a, b);
    match format {
        Format::Json => {
            let mut m = q.header();
            m.insert("a".into(), json!(a.to_string()));
            m.insert("b".into(), json!(f.format(b)));
            m.insert("count_mod_p".into(), json!(f.format(count)));
            Ok(pretty(&Value::Object(m)))
        }
        _ => Ok(format!("{}\n", f.format(count))),
    }
}

fn slopes_json(s: &[(Ratio<i64>, u64)]) -> Value {
    Value::Array(
        s.iter()
            .map(|(r, m)| json!({"slope": ratio_str(r), "abs": ratio_str(&r.abs()), "multiplicity": m}))
            .collect(),
    )
}

fn evidence_str(e: HankelEvidence) -> &'static str {
    match e {
        HankelEvidence::Exact => "exact",
        HankelEvidence::NonzeroAtPoint => "nonzero_at_point",
        HankelEvidence::KernelVector => "kernel_vector",
    }
}

fn hankel_json(h: &HankelVerdict) -> Value {
    json!({
        "det": h.det.as_ref().map(|d| d.to_string()),
        "repeated": h.repeated,
        "evidence": evidence_str(h.evidence),
    })
}

fn spectrum_json(q: &Query, sp: &SpectrumReport) -> Value {
    let mut m = q.header();
    m.insert("k".into(), json!(sp.query.k));
    m.insert("l".into(), json!(sp.query.l));
    m.insert("dim".into(), json!(sp.dim));
    m.insert("traces".into(), json!(sp.traces.iter().map(|t| t.to_string()).collect::<Vec<_>>()));
    m.insert("charpoly".into(), json!(sp.charpoly.as_ref().map(|c| c.to_string())));
    m.insert("recurrence".into(), json!(sp.recurrence.as_ref().map(|c| c.to_string())));
    m.insert("note".into(), json!(sp.note));
    m.insert("hankel".into(), sp.hankel.as_ref().map(hankel_json).unwrap_or(Value::Null));
    m.insert("repeated".into(), json!(sp.repeated()));
    m.insert("slopes_inf".into(), slopes_json(&sp.slopes_inf));
    m.insert("slopes_wp".into(), slopes_json(&sp.slopes_wp));
    m.insert(
        "odd_mult_eigs".into(),
        json!(sp.odd_mult_eigs.as_ref().map(|v| v.iter().map(|e| e.to_string()).collect::<Vec<_>>())),
    );
    Value::Object(m)
}

fn slopes_text(label: &str, s: &[(Ratio<i64>, u64)]) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|(r, m)| format!("{} (x{m}, |slope| {})", ratio_str(r), ratio_str(&r.abs())))
        .collect();
    format!("{label}: {}\n", if parts.is_empty() { "none".into() } else { parts.join(", ") })
}

fn spectra_for(q: &Query, ks: &[u64], fallback: bool) -> Result<Vec<SpectrumReport>, CmdError> {
    let opts = SpectrumOptions { fallback, skip_hankel: false };
    Ok(ks.par_iter().map(|&k| spectrum(&q.at(k)?, opts).map_err(CmdError::from)).collect::<Result<_, _>>()?)
}

pub fn cmd_spectrum(q: &Query, ks: &[u64], fallback: bool, format: Format) -> CmdResult {
    let reports = spectra_for(q, ks, fallback)?;
    match format {
        Format::Json | Format::Csv => match reports.as_slice() {
            [sp] => Ok(pretty(&spectrum_json(q, sp))),
            _ => Ok(pretty(&Value::Array(reports.iter().map(|sp| spectrum_json(q, sp)).collect()))),
        },
        Format::Text => {
            let mut out = String::new();
            for sp in &reports {
                out.push_str(&format!("k={} l={} dim={}\n", sp.query.k, sp.query.l, sp.dim));
                if let Some(c) = &sp.charpoly {
                    out.push_str(&format!("charpoly: {c}\n"));
                }
                if let Some(r) = &sp.recurrence {
                    out.push_str(&format!("recurrence: {r}\n"));
                }
                if let Some(n) = &sp.note {
                    out.push_str(&format!("note: {n}\n"));
                }
                if let Some(rep) = sp.repeated() {
                    out.push_str(&format!("repeated eigenvalue: {rep}\n"));
                }
                out.push_str(&slopes_text("slopes at inf", &sp.slopes_inf));
                out.push_str(&slopes_text(&format!("slopes at {}", q.prime), &sp.slopes_wp));
                if let Some(e) = &sp.odd_mult_eigs {
                    let list: Vec<String> = e.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!("odd-multiplicity eigenvalues: {}\n", list.join(", ")));
                }
            }
            Ok(out)
        }
    }
}

pub fn cmd_slopes(q: &Query, ks: &[u64], fallback: bool, format: Format) -> CmdResult {
    let reports = spectra_for(q, ks, fallback)?;
    match format {
        Format::Text => {
            let mut out = String::new();
            for sp in &reports {
                out.push_str(&format!("k={} l={} dim={}\n", sp.query.k, sp.query.l, sp.dim));
                out.push_str(&slopes_text("slopes at inf", &sp.slopes_inf));
                out.push_str(&slopes_text(&format!("slopes at {}", q.prime), &sp.slopes_wp));
            }
            Ok(out)
        }
        _ => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|sp| {
                    let mut m = q.header();
                    m.insert("k".into(), json!(sp.query.k));
                    m.insert("l".into(), json!(sp.query.l));
                    m.insert("dim".into(), json!(sp.dim));
                    m.insert("slopes_inf".into(), slopes_json(&sp.slopes_inf));
                    m.insert("slopes_wp".into(), slopes_json(&sp.slopes_wp));
                    Value::Object(m)
                })
                .collect();
            match rows.as_slice() {
                [one] => Ok(pretty(one)),
                _ => Ok(pretty(&Value::Array(rows))),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScanKind {
    /// Trace degrees, strong-bound attainment and slope residues.
    Conjectures,
    /// Weights whose Hecke action has no repeated eigenvalue.
    Repetition,
    /// Whether ±℘^{(k−2)/2} is an eigenvalue.
    Oldnew,
    /// The sufficient condition for the strong bound, tuple by tuple.
    RamSuff,
}

fn scan_conjectures(q: &Query, ks: &[u64], with_spectra: bool) -> Result<Value, CmdError> {
    let chunks: Vec<_> = ks
        .par_iter()
        .map(|&k| conjecture_scans(&q.prime, [k], q.l, with_spectra))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let (mut att, mut res, mut bnd) = (Vec::new(), Vec::new(), Vec::new());
    for rep in chunks {
        att.extend(rep.attainment_mismatches);
        res.extend(rep.residue_mismatches);
        bnd.extend(rep.bound_violations);
        for r in rep.rows {
            rows.push(json!({
                "k": r.k,
                "dim": r.dim,
                "trace_deg": r.trace_deg,
                "strong_bound": ratio_str(&r.strong_bound),
                "slopes_inf": r.slopes_inf.as_deref().map(slopes_json),
                "attained": r.attained,
                "predicted": r.predicted.map(|(n, d)| json!({"n": n, "multiplicity": d})),
                "residues_ok": r.residues_ok,
                "note": r.note,
            }));
        }
    }
    let mut m = q.header();
    m.insert("l".into(), json!(q.l));
    m.insert("rows".into(), Value::Array(rows));
    m.insert("attainment_mismatches".into(), json!(att));
    m.insert("residue_mismatches".into(), json!(res));
    m.insert("bound_violations".into(), json!(bnd));
    Ok(Value::Object(m))
}

fn scan_repetition(q: &Query, ks: &[u64]) -> Result<Value, CmdError> {
    let qf = q.field.size() as u64;
    let rows: Vec<(u64, u64, Option<HankelVerdict>)> = ks
        .par_iter()
        .map(|&k| {
            let d = dim_cusp(k, q.l, qf);
            let qy = q.at(k)?;
            if d == 0 || !qy.admissible() {
                return Ok((k, d, None));
            }
            let traces = trace_powers(&qy, (2 * d as usize).saturating_sub(2))?;
            Ok((k, d, Some(repeated_eig_detect(&q.field, d, &traces)?)))
        })
        .collect::<Result<_, CmdError>>()?;
    let no_rep: Vec<u64> = rows.iter().filter(|(_, _, v)| v.as_ref().is_some_and(|v| !v.repeated)).map(|r| r.0).collect();
    let mut m = q.header();
    m.insert("l".into(), json!(q.l));
    m.insert(
        "rows".into(),
        Value::Array(
            rows.iter()
                .filter_map(|(k, d, v)| v.as_ref().map(|v| json!({"k": k, "dim": d, "repeated": v.repeated, "evidence": evidence_str(v.evidence)})))
                .collect(),
        ),
    );
    m.insert("no_repetition".into(), json!(no_rep));
    Ok(Value::Object(m))
}

fn scan_oldnew(q: &Query, ks: &[u64]) -> Result<Value, CmdError> {
    let verdicts: Vec<_> = ks
        .par_iter()
        .filter(|&&k| k >= 2)
        .map(|&k| oldnew_criterion_with_cap(&q.prime, k, q.l, q.cap))
        .collect::<Result<_, _>>()?;
    let failing: Vec<u64> = verdicts.iter().filter(|v| !v.decomposition_holds()).map(|v| v.k).collect();
    let mut m = q.header();
    m.insert("l".into(), json!(q.l));
    m.insert(
        "rows".into(),
        Value::Array(
            verdicts
                .iter()
                .map(|v| json!({"k": v.k, "dim": v.dim, "critical_eigenvalue": v.occurs, "via": v.via}))
                .collect(),
        ),
    );
    m.insert("critical_weights".into(), json!(failing));
    Ok(Value::Object(m))
}

fn scan_ram_suff(q: &Query) -> Result<Value, CmdError> {
    let rep = ram_suff_check(&q.prime, q.n)?;
    let mut m = q.header();
    m.insert("tuples_checked".into(), json!(rep.tuples_checked));
    m.insert(
        "violations".into(),
        Value::Array(
            rep.violations
                .iter()
                .map(|v| json!({"exponents": v.exponents, "t": v.t, "value": q.field.format(v.value)}))
                .collect(),
        ),
    );
    Ok(Value::Object(m))
}

pub fn cmd_scan(q: &Query, ks: &[u64], kind: ScanKind, with_spectra: bool) -> CmdResult {
    let v = match kind {
        ScanKind::Conjectures => scan_conjectures(q, ks, with_spectra)?,
        ScanKind::Repetition => scan_repetition(q, ks)?,
        ScanKind::Oldnew => scan_oldnew(q, ks)?,
        ScanKind::RamSuff => scan_ram_suff(q)?,
    };
    Ok(pretty(&v))
}

pub fn cmd_figure(q: &Query, ks: &[u64], format: Format) -> CmdResult {
    let rows: Vec<_> = ks
        .par_iter()
        .map(|&k| figure_rows(&q.prime, q.n, [k], q.l))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    match format {
        Format::Json => Ok(pretty(&Value::Array(
            rows.iter()
                .map(|r| json!({"k": r.k, "deg_trace": r.deg_trace, "strong_bound": ratio_decimal(&r.strong_bound), "log_distance": r.log_distance}))
                .collect(),
        ))),
        _ => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["k", "deg_trace", "strong_bound", "log_distance"])?;
            for r in &rows {
                w.write_record([
                    r.k.to_string(),
                    r.deg_trace.to_string(),
                    ratio_decimal(&r.strong_bound),
                    format!("{:.6}", r.log_distance),
                ])?;
            }
            Ok(String::from_utf8(w.into_inner().map_err(|e| CmdError::Usage(e.to_string()))?).expect("utf-8"))
        }
    }
}
