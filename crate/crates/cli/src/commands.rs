//! Command implementations: each verb takes the parsed inputs and returns
//! the rendered output text, with failures classified by exit code.

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use valgraph_core::blowup::{self, BlowupError, Trace};
use valgraph_core::cf::ContinuedFraction;
use valgraph_core::dualgraph::DualGraph;
use valgraph_core::poly::BiPoly;
use valgraph_core::semigroup::{self, BetaTable, SemigroupError};
use valgraph_core::spec::{BlowupKind, ValuationSpec, ValuationType};
use valgraph_core::value::Value;

use crate::format::parse_rational;

/// Failure classified for the process exit code: 1 bad arguments, 2 spec
/// file problems, 3 domain errors.
#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CommandError {}

pub fn argument_error(message: impl Into<String>) -> CommandError {
    CommandError {
        code: 1,
        message: message.into(),
    }
}

pub fn spec_error(message: impl Into<String>) -> CommandError {
    CommandError {
        code: 2,
        message: message.into(),
    }
}

pub fn domain_error(message: impl Into<String>) -> CommandError {
    CommandError {
        code: 3,
        message: message.into(),
    }
}

impl From<BlowupError> for CommandError {
    fn from(e: BlowupError) -> Self {
        match e {
            BlowupError::InvalidSpec(_) => spec_error(e.to_string()),
            _ => domain_error(e.to_string()),
        }
    }
}

impl From<SemigroupError> for CommandError {
    fn from(e: SemigroupError) -> Self {
        match e {
            SemigroupError::InvalidSpec(_) => spec_error(e.to_string()),
            _ => domain_error(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Json,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CommandError> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| domain_error(format!("serialization failed: {e}")))
}

// ---- classify ----------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ClassifyReport {
    #[serde(rename = "type")]
    pub type_tag: String,
    pub rank: u8,
    pub rational_rank: u8,
    pub residue_transcendence_degree: u8,
    pub discrete: bool,
    pub value_group: String,
}

pub fn classify(spec: &ValuationSpec, mode: OutputMode) -> Result<String, CommandError> {
    let report = spec.classify();
    let out = ClassifyReport {
        type_tag: report.type_tag.to_string(),
        rank: report.rank,
        rational_rank: report.rational_rank,
        residue_transcendence_degree: report.residue_transcendence_degree,
        discrete: report.discrete,
        value_group: report.value_group.to_string(),
    };
    match mode {
        OutputMode::Json => to_json(&out),
        OutputMode::Text => Ok(format!(
            "type: {}\nrank: {}\nrational rank: {}\nresidue transcendence degree: {}\ndiscreteness: {}\nvalue group: {}\n",
            out.type_tag,
            out.rank,
            out.rational_rank,
            out.residue_transcendence_degree,
            if out.discrete { "discrete" } else { "non-discrete" },
            out.value_group,
        )),
    }
}

// ---- trace -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceReport {
    pub initial_x: String,
    pub initial_y: String,
    pub steps: Vec<TraceStep>,
    pub complete: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceStep {
    pub level: u64,
    pub kind: String,
    pub vx: String,
    pub vy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<String>,
}

pub fn default_trace_depth(spec: &ValuationSpec) -> usize {
    match spec.type_tag {
        ValuationType::T0 => (spec.pieces.iter().flatten().sum::<u64>() + spec.tail + 1) as usize,
        _ => spec.depth,
    }
}

pub fn trace(
    spec: &ValuationSpec,
    depth: Option<usize>,
    mode: OutputMode,
) -> Result<String, CommandError> {
    let depth = depth.unwrap_or_else(|| default_trace_depth(spec));
    let run = blowup::trace(spec, depth)?;
    match mode {
        OutputMode::Json => to_json(&TraceReport {
            initial_x: run.initial_x.to_string(),
            initial_y: run.initial_y.to_string(),
            steps: run
                .steps
                .iter()
                .map(|s| TraceStep {
                    level: s.level,
                    kind: s.kind.to_string(),
                    vx: s.vx.to_string(),
                    vy: s.vy.to_string(),
                    residue: s.residue.as_ref().map(|c| c.to_string()),
                })
                .collect(),
            complete: run.complete,
        }),
        OutputMode::Text => Ok(render_trace_table(&run)),
    }
}

/// The per-level table: each row shows the parameter values before the
/// blowup at that level and the substitution it performs.
pub fn render_trace_table(run: &Trace) -> String {
    let mut rows: Vec<[String; 5]> = Vec::new();
    rows.push([
        String::from("level"),
        String::from("nu(x_i)"),
        String::from("nu(y_i)"),
        String::from("x transformation"),
        String::from("y transformation"),
    ]);
    let mut vx = run.initial_x.clone();
    let mut vy = run.initial_y.clone();
    for step in &run.steps {
        let i = step.level - 1;
        let j = step.level;
        let (x_rule, y_rule) = match step.kind {
            BlowupKind::X => (format!("x{i} = x{j}"), format!("y{i} = x{j}*y{j}")),
            BlowupKind::Y => (format!("x{i} = x{j}*y{j}"), format!("y{i} = y{j}")),
            BlowupKind::Z => {
                let c = step.residue.clone().unwrap_or_else(BigRational::one);
                let translated = if c.is_negative() {
                    format!("(y{j} - {})", -c)
                } else {
                    format!("(y{j} + {c})")
                };
                (format!("x{i} = x{j}"), format!("y{i} = x{j}*{translated}"))
            }
        };
        rows.push([
            i.to_string(),
            vx.to_string(),
            vy.to_string(),
            x_rule,
            y_rule,
        ]);
        vx = step.vx.clone();
        vy = step.vy.clone();
    }
    render_columns(&rows)
}

fn render_columns<const N: usize>(rows: &[[String; N]]) -> String {
    let mut widths = [0usize; N];
    for row in rows {
        for (width, cell) in widths.iter_mut().zip(row.iter()) {
            *width = (*width).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in rows {
        for (k, (cell, width)) in row.iter().zip(widths.iter()).enumerate() {
            if k > 0 {
                out.push_str("  ");
            }
            let _ = write!(out, "{cell:<width$}", width = width);
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

// ---- graph -------------------------------------------------------------

pub fn graph(spec: &ValuationSpec, depth: Option<usize>) -> Result<String, CommandError> {
    let full = default_trace_depth(spec);
    let depth = depth.unwrap_or(full);
    let kinds = spec
        .decode_blowups(depth)
        .map_err(|e| domain_error(e.to_string()))?;
    let graph = if spec.type_tag == ValuationType::T0 && depth == full {
        DualGraph::build_complete(&kinds)
    } else {
        DualGraph::build(&kinds)
    }
    .map_err(|e| domain_error(e.to_string()))?;
    Ok(graph.to_dot())
}

// ---- betas -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BetasReport {
    pub beta0: String,
    pub rows: Vec<BetaRowReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tail_values: Vec<String>,
    pub truncated: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BetaRowReport {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_tilde: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_prime: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub beta: String,
}

pub fn betas(
    spec: &ValuationSpec,
    depth: Option<usize>,
    mode: OutputMode,
) -> Result<String, CommandError> {
    let table = semigroup::beta_table(spec, depth)?;
    match mode {
        OutputMode::Json => to_json(&BetasReport {
            beta0: table.beta0.to_string(),
            rows: table
                .rows
                .iter()
                .map(|r| BetaRowReport {
                    index: r.index,
                    beta_tilde: r.beta_tilde.as_ref().map(|cf| cf.to_string()),
                    beta_prime: r.beta_prime.as_ref().map(|b| b.to_string()),
                    p: r.p.as_ref().map(|p| p.to_string()),
                    q: r.q.as_ref().map(|q| q.to_string()),
                    beta: r.beta.to_string(),
                })
                .collect(),
            tail_values: table.tail_values.iter().map(|v| v.to_string()).collect(),
            truncated: table.truncated,
        }),
        OutputMode::Text => Ok(semigroup::render_beta_table(&table)),
    }
}

// ---- represent ---------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RepresentReport {
    pub value: String,
    pub in_semigroup: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
}

pub fn represent(
    spec: &ValuationSpec,
    value_text: &str,
    depth: Option<usize>,
    mode: OutputMode,
) -> Result<String, CommandError> {
    let table = semigroup::beta_table(spec, depth)?;
    let value = parse_value(value_text, &table)?;
    let outcome = semigroup::represent(&value, &table);
    let report = match outcome {
        Ok(digits) => RepresentReport {
            value: value.to_string(),
            in_semigroup: true,
            alpha: Some(digits.digits.iter().map(|d| d.to_string()).collect()),
        },
        Err(SemigroupError::NotInSemigroup) => RepresentReport {
            value: value.to_string(),
            in_semigroup: false,
            alpha: None,
        },
        Err(e) => return Err(e.into()),
    };
    match mode {
        OutputMode::Json => to_json(&report),
        OutputMode::Text => Ok(match &report.alpha {
            Some(alpha) => format!("alpha = [{}]\n", alpha.join(", ")),
            None => String::from("NOT_IN_SEMIGROUP\n"),
        }),
    }
}

/// Parse a value literal: `p/q`, `(hi, lo)`, or `r + s*tau` (also with the
/// rendered `·τ` spelling). Irrational values bind to the table's τ.
pub fn parse_value(text: &str, table: &BetaTable) -> Result<Value, CommandError> {
    let compact: String = text
        .replace('τ', "tau")
        .replace('·', "*")
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    if compact.is_empty() {
        return Err(argument_error("empty value"));
    }
    if let Some(inner) = compact.strip_prefix('(') {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| argument_error(format!("unbalanced parentheses in '{text}'")))?;
        let (hi, lo) = inner
            .split_once(',')
            .ok_or_else(|| argument_error(format!("expected '(hi, lo)' in '{text}'")))?;
        let hi =
            parse_rational(hi).ok_or_else(|| argument_error(format!("bad rational '{hi}'")))?;
        let lo =
            parse_rational(lo).ok_or_else(|| argument_error(format!("bad rational '{lo}'")))?;
        return Ok(Value::rank2(hi, lo));
    }
    if let Some(head) = compact.strip_suffix("tau") {
        let head = head.strip_suffix('*').unwrap_or(head);
        // split the trailing coefficient term off the rational part: the
        // last sign that follows a digit separates them
        let split = head
            .char_indices()
            .skip(1)
            .filter(|&(k, c)| (c == '+' || c == '-') && head.as_bytes()[k - 1].is_ascii_digit())
            .map(|(k, _)| k)
            .last();
        let (rational_text, coefficient_text) = match split {
            Some(k) => (&head[..k], &head[k..]),
            None => ("0", head),
        };
        let rational = parse_rational(rational_text)
            .ok_or_else(|| argument_error(format!("bad rational '{rational_text}'")))?;
        let coefficient = match coefficient_text {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => {
                let t = t.strip_prefix('+').unwrap_or(t);
                parse_rational(t).ok_or_else(|| argument_error(format!("bad coefficient '{t}'")))?
            }
        };
        let tau = table_tau(table)
            .ok_or_else(|| domain_error("this valuation's value group has no irrational part"))?;
        return Ok(Value::irr(rational, coefficient, tau));
    }
    match parse_rational(&compact) {
        Some(q) => Ok(Value::Rat(q)),
        None => Err(argument_error(format!("cannot parse value '{text}'"))),
    }
}

fn table_tau(table: &BetaTable) -> Option<Arc<ContinuedFraction>> {
    match &table.beta0 {
        Value::Irr { tau, .. } => Some(tau.clone()),
        _ => table.rows.iter().rev().find_map(|row| match &row.beta {
            Value::Irr { tau, .. } => Some(tau.clone()),
            _ => None,
        }),
    }
}

// ---- frobenius ---------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub entries: Vec<u64>,
    pub frobenius: String,
    pub brauer_bound: String,
}

pub fn frobenius(entries: &[u64], mode: OutputMode) -> Result<String, CommandError> {
    let map_err = |e: SemigroupError| match e {
        SemigroupError::GcdNotOne | SemigroupError::NeedAtLeastTwo | SemigroupError::ZeroEntry => {
            argument_error(e.to_string())
        }
        other => CommandError::from(other),
    };
    let f = semigroup::frobenius_bruteforce(entries).map_err(map_err)?;
    let bound = semigroup::brauer_bound(entries).map_err(map_err)?;
    let report = FrobeniusReport {
        entries: entries.to_vec(),
        frobenius: f.to_string(),
        brauer_bound: bound.to_string(),
    };
    match mode {
        OutputMode::Json => to_json(&report),
        OutputMode::Text => Ok(format!(
            "F = {}, Brauer bound = {}\n",
            report.frobenius, report.brauer_bound
        )),
    }
}

// ---- value -------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValueReport {
    pub polynomial: String,
    pub value: String,
}

pub fn value_of_poly(
    spec: &ValuationSpec,
    poly_text: &str,
    mode: OutputMode,
) -> Result<String, CommandError> {
    let poly = BiPoly::parse(poly_text).map_err(|e| argument_error(e.to_string()))?;
    let value = blowup::divisorial_value(&poly, spec)?;
    let report = ValueReport {
        polynomial: poly.to_string(),
        value: value.to_string(),
    };
    match mode {
        OutputMode::Json => to_json(&report),
        OutputMode::Text => Ok(format!("nu({}) = {}\n", report.polynomial, report.value)),
    }
}

// ---- genseq ------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GenseqReport {
    pub polynomials: Vec<String>,
}

pub fn genseq(
    spec: &ValuationSpec,
    upto: Option<usize>,
    mode: OutputMode,
) -> Result<String, CommandError> {
    let last = match (upto, spec.last_generator_index()) {
        (Some(u), Some(last)) => {
            if u > last {
                return Err(domain_error(format!(
                    "the generating sequence ends at index {last}"
                )));
            }
            u
        }
        (Some(u), None) => u,
        (None, Some(last)) => last,
        // infinitely many generators: keep the default small, every further
        // element costs a polynomial expansion
        (None, None) => 3,
    };
    let table = semigroup::beta_table(
        spec,
        if spec.type_tag == ValuationType::T1 {
            Some(last.max(1))
        } else {
            None
        },
    )?;
    let mut polynomials = vec![BiPoly::var_x().to_string()];
    if last >= 1 {
        polynomials.push(BiPoly::var_y().to_string());
    }
    for i in 2..=last {
        let q = semigroup::construct_q(spec, i, &table)?;
        polynomials.push(q.to_string());
    }
    let report = GenseqReport { polynomials };
    match mode {
        OutputMode::Json => to_json(&report),
        OutputMode::Text => {
            let mut out = String::new();
            for (k, poly) in report.polynomials.iter().enumerate() {
                let _ = writeln!(out, "Q_{k} = {poly}");
            }
            Ok(out)
        }
    }
}

// ---- represent helper for tests ----------------------------------------

/// Exact comparison helper used by integration tests: the digit vector of a
/// rational against a spec's table.
pub fn represent_value(
    spec: &ValuationSpec,
    value: &Value,
) -> Result<Result<Vec<BigInt>, SemigroupError>, CommandError> {
    let table = semigroup::beta_table(spec, None)?;
    match semigroup::represent(value, &table) {
        Ok(d) => Ok(Ok(d.digits)),
        Err(e) => Ok(Err(e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use valgraph_core::semigroup::beta_table;

    fn dgex() -> ValuationSpec {
        ValuationSpec::new(ValuationType::T0, vec![vec![3, 1], vec![1, 2]])
    }

    #[test]
    fn parse_value_forms() {
        let table = beta_table(&dgex(), None).unwrap();
        assert_eq!(parse_value("9/2", &table).unwrap(), Value::rat(9, 2));
        assert_eq!(
            parse_value("(1, -3/2)", &table).unwrap(),
            Value::rank2(
                BigRational::from(BigInt::from(1)),
                BigRational::new(BigInt::from(-3), BigInt::from(2))
            )
        );
        // no tau in a divisorial table
        assert!(parse_value("1 + 2*tau", &table).is_err());

        let t2 = ValuationSpec {
            extras: valgraph_core::spec::TypeExtras::PeriodicSegments { period: vec![2] },
            ..ValuationSpec::new(ValuationType::T2, vec![vec![1]])
        };
        let table = beta_table(&t2, None).unwrap();
        let v = parse_value("3/2 + 2*tau", &table).unwrap();
        match v {
            Value::Irr {
                rational,
                tau_coefficient,
                ..
            } => {
                assert_eq!(rational, BigRational::new(BigInt::from(3), BigInt::from(2)));
                assert_eq!(tau_coefficient, BigRational::from(BigInt::from(2)));
            }
            other => panic!("expected irrational value, got {other:?}"),
        }
        // rendered spellings round-trip, including negative coefficients
        let v = parse_value("-1/2 + 1/2·τ", &table).unwrap();
        assert_eq!(v.to_string(), "-1/2 + 1/2·τ");
        let v = parse_value("1 - 1/2·τ", &table).unwrap();
        assert_eq!(v.to_string(), "1 - 1/2·τ");
        // bare and signed tau terms
        assert!(parse_value("tau", &table).is_ok());
        assert!(parse_value("2-tau", &table).is_ok());
    }

    #[test]
    fn trace_table_layout() {
        let run = blowup::trace(&dgex(), 8).unwrap();
        let table = render_trace_table(&run);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 9);
        // row 6 of the table body is level 5
        assert!(lines[6].starts_with("5"));
        assert!(lines[6].contains("1/2"));
        assert!(lines[6].contains("1/6"));
        assert!(lines[5].contains("x4 = x5"));
        assert!(lines[5].contains("y4 = x5*(y5 + 1)"));
    }

    #[test]
    fn frobenius_text() {
        assert_eq!(
            frobenius(&[3, 5], OutputMode::Text).unwrap(),
            "F = 7, Brauer bound = 7\n"
        );
    }
}
