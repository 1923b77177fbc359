use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use stabtrim::canonical::canonicalize;
use stabtrim::clifford::{apply_all, measure, measure_seeded, parse_gate_log};
use stabtrim::crt::{crt_decompose, factor_square_free, trim_square_free};
use stabtrim::cv::{cv_canonicalize, cv_check_trim, cv_execute_trim, CvStabilizer};
use stabtrim::modular::is_prime;
use stabtrim::oracle::{dense_state, entropy};
use stabtrim::par::Execution;
use stabtrim::partition::parse_labels;
use stabtrim::survey::{run_survey, summarize, to_csv, SurveyConfig};
use stabtrim::trimming::{check_trim, execute_trim, plan_trim};
use stabtrim::{Cut, Error, PauliOperator, StabilizerTableau};

use crate::{Cli, Command, Format};

pub const SCHEMA: &str = "stabtrim-records/1";

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotPure(_)
            | Error::Inadmissible { .. }
            | Error::Degenerate(_)
            | Error::Infeasible
            | Error::OutcomeContradiction { .. }
            | Error::ZeroProbability
            | Error::NotPsd(_)
            | Error::IdentityOperator => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: String) -> Failure {
    Failure { code: 2, message }
}

/// Output of one command in both renderings.
pub struct Report {
    pub code: u8,
    text: String,
    records: Vec<(String, String)>,
    /// Raw text emitted verbatim in either format (CSV).
    raw: Option<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        Report { code: 0, text: String::new(), records: vec![("command".into(), command.into())], raw: None }
    }

    fn rec(&mut self, key: &str, value: impl ToString) {
        self.records.push((key.into(), value.to_string()));
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        if !s.as_ref().ends_with('\n') {
            self.text.push('\n');
        }
    }

    pub fn render(&self, format: Format) -> String {
        if let Some(raw) = &self.raw {
            return raw.clone();
        }
        match format {
            Format::Text => self.text.clone(),
            Format::Records => {
                let mut out = format!("schema={SCHEMA}\n");
                for (k, v) in &self.records {
                    let _ = writeln!(out, "{k}={v}");
                }
                out
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(cli: &Cli, path: &Path) -> Result<StabilizerTableau, Failure> {
    let t = StabilizerTableau::parse(&read(path)?)?;
    if let Some(d) = cli.dim {
        if d != t.dim() {
            return Err(usage(format!("--dim {d} but {} declares dim={}", path.display(), t.dim())));
        }
    }
    Ok(t)
}

fn relabel(t: StabilizerTableau, partition: Option<&str>) -> Result<StabilizerTableau, Failure> {
    match partition {
        Some(p) => Ok(t.with_parties(parse_labels(p)?)?),
        None => Ok(t),
    }
}

fn ops(v: &[PauliOperator]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn run(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Validate { file } => validate(cli, file),
        Command::Canon { file, partition } => canon(cli, file, partition),
        Command::Trim { file, partition } => trim(cli, file, partition.as_deref()),
        Command::Survey { sites, partition, samples, seed, no_execute, sequential } => {
            survey(cli, *sites, partition.as_deref(), *samples, *seed, !*no_execute, *sequential)
        }
        Command::OracleCheck { file, partition } => oracle_check(cli, file, partition.as_deref()),
        Command::Apply { file, gates } => apply(cli, file, gates),
        Command::Measure { file, pauli, outcome, seed } => measure_cmd(cli, file, pauli, *outcome, *seed),
        Command::Crt { file } => crt(cli, file),
        Command::CvCanon { file, partition } => cv_canon(cli, file, partition),
        Command::CvTrim { file, partition } => cv_trim(cli, file, partition.as_deref()),
    }
}

fn validate(cli: &Cli, file: &Path) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let v = t.validate();
    let mut r = Report::new("validate");
    r.rec("dim", v.dim);
    r.rec("sites", v.sites);
    r.rec("generators", v.generators);
    r.rec("commuting", v.noncommuting.is_empty());
    r.rec("admissible", v.inadmissible.is_empty());
    r.rec("independent", v.independent());
    r.rec("pure", v.is_pure());
    if let Some(o) = v.order_log2 {
        r.rec("order_log2", o);
    }
    if let Some(p) = v.purity() {
        r.rec("purity", p);
    }
    r.line(format!("dim={} sites={} generators={}", v.dim, v.sites, v.generators));
    for (i, j) in &v.noncommuting {
        r.line(format!("generators {i} and {j} do not commute"));
    }
    for i in &v.inadmissible {
        r.line(format!("generator {i} has an inadmissible phase"));
    }
    r.line(format!("independent: {}", v.independent()));
    if let Some(p) = v.purity() {
        r.line(format!("purity tr(rho^2) = {p}"));
    }
    r.line(if v.is_pure() { "pure stabilizer state" } else { "not a pure stabilizer state" });
    r.code = if v.is_pure() { 0 } else { 1 };
    Ok(r)
}

fn canon(cli: &Cli, file: &Path, partition: &str) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let cut = Cut::parse(partition, t.parties(), t.sites())?;
    let cf = canonicalize(&t, &cut)?;
    let mut r = Report::new("canon");
    r.rec("cut", &cut);
    r.rec("local_a", cf.local_a.len());
    r.rec("local_b", cf.local_b.len());
    r.rec("pairs", cf.pair_count());
    r.rec("entanglement_bits", cf.entanglement_bits());
    r.rec("generators", ops(&cf.generators()));
    r.line(cf.to_string());
    r.line(format!("# cut={cut} pairs={} entanglement_bits={}", cf.pair_count(), cf.entanglement_bits()));
    Ok(r)
}

fn trim(cli: &Cli, file: &Path, partition: Option<&str>) -> Result<Report, Failure> {
    let t = relabel(load(cli, file)?, partition)?;
    if !is_prime(t.dim()) {
        factor_square_free(t.dim())?;
        let v = trim_square_free(&t)?;
        let mut r = Report::new("trim");
        r.rec("dim", t.dim());
        r.rec("factors", v.factors.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
        for (d, c) in v.factors.iter().zip(&v.components) {
            r.rec(&format!("component.{d}.feasible"), c.feasible);
            r.rec(&format!("component.{d}.initial_bits"), c.initial_bits);
        }
        r.rec("feasible", v.feasible);
        r.line(v.to_string());
        r.code = if v.feasible { 0 } else { 1 };
        return Ok(r);
    }
    let v = check_trim(&t)?;
    let mut r = Report::new("trim");
    r.rec("feasible", v.feasible);
    r.rec("initial_bits", v.initial_bits);
    r.rec("pair_count", v.pair_count);
    r.rec("b_free_rank", v.b_free_rank);
    r.rec("condition1", v.condition1.iter().map(|c| c.witness.to_string()).collect::<Vec<_>>().join(","));
    r.rec("condition2_groups", v.condition2.len());
    r.line(format!("E(A|BC) = {} bits, AB|C pairs = {}, B-free rank = {}", v.initial_bits, v.pair_count, v.b_free_rank));
    for c in &v.condition1 {
        r.line(format!("condition (1): witness {} partner {}", c.witness, c.partner));
    }
    for g in &v.condition2 {
        r.line(format!(
            "condition (2): pairs ({}, {}) and ({}, {})",
            g.pairs[0].0, g.pairs[0].1, g.pairs[1].0, g.pairs[1].1
        ));
    }
    if !v.feasible {
        for (s, sb) in &v.uncovered {
            r.line(format!("uncovered: {s} and {sb} act as identity on B with no matching partner"));
        }
        r.line("verdict: not trimmable");
        r.code = 1;
        return Ok(r);
    }
    let plan = plan_trim(&t, &v)?;
    let res = execute_trim(&t, &plan)?;
    r.rec("plan", ops(&plan.measurements));
    r.rec("achieved_bits", res.achieved_bits);
    r.rec("success", res.success);
    r.rec("stripped", res.stripped.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    r.line(format!("plan: measure [{}] with outcome 0", ops(&plan.measurements)));
    r.line(format!("E(A|B) after trimming = {} bits", res.achieved_bits));
    if let Some(ab) = &res.ab_tableau {
        r.line("AB state:");
        r.line(ab.to_string());
    }
    r.line(if res.success { "verdict: trimmed" } else { "verdict: execution failed" });
    r.code = if res.success { 0 } else { 1 };
    Ok(r)
}

fn survey(
    cli: &Cli,
    sites: usize,
    partition: Option<&str>,
    samples: usize,
    seed: u64,
    execute: bool,
    sequential: bool,
) -> Result<Report, Failure> {
    let labels = partition.map(parse_labels).transpose()?;
    let cfg = SurveyConfig { sites, dim: cli.dim.unwrap_or(2), labels, samples, seed, execute };
    let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
    let start = Instant::now();
    let rows = run_survey(&cfg, exec)?;
    eprintln!("survey: {} samples in {:.3?}", rows.len(), start.elapsed());
    let mut r = Report::new("survey");
    r.raw = Some(to_csv(&rows));
    r.code = if summarize(&rows).failures == 0 { 0 } else { 1 };
    Ok(r)
}

fn oracle_check(cli: &Cli, file: &Path, partition: Option<&str>) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let tol = cli.tolerance.unwrap_or(1e-9);
    let rho = dense_state(&t)?;
    let cuts: Vec<Cut> = match partition {
        Some(p) => vec![Cut::parse(p, t.parties(), t.sites())?],
        None => Cut::all(t.sites()).filter(|c| c.in_first(0)).collect(),
    };
    let mut r = Report::new("oracle-check");
    let mut worst: f64 = 0.0;
    for cut in &cuts {
        let exact = canonicalize(&t, cut)?.entanglement_bits();
        let dense = entropy(&rho, cut)?;
        worst = worst.max((exact - dense).abs());
        r.line(format!("cut {cut}: canonical {exact} bits, dense {dense:.12} bits"));
        r.rec(&format!("cut.{cut}"), format!("{exact},{dense}"));
    }
    r.rec("cuts", cuts.len());
    r.rec("max_deviation", worst);
    r.rec("agree", worst <= tol);
    r.line(format!("max deviation {worst:e} (tolerance {tol:e})"));
    r.code = if worst <= tol { 0 } else { 1 };
    Ok(r)
}

fn apply(cli: &Cli, file: &Path, gates: &Path) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let log = parse_gate_log(&read(gates)?)?;
    let out = apply_all(&t, &log)?;
    let mut r = Report::new("apply");
    r.rec("gates", log.len());
    r.rec("generators", ops(out.generators()));
    r.line(out.to_string());
    Ok(r)
}

fn measure_cmd(cli: &Cli, file: &Path, pauli: &str, outcome: Option<u32>, seed: Option<u64>) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let p = PauliOperator::parse(pauli, t.dim())?;
    let (out, rec) = match seed {
        Some(s) => measure_seeded(&t, &p, s)?,
        None => measure(&t, &p, outcome.unwrap_or(0))?,
    };
    let mut r = Report::new("measure");
    r.rec("operator", &rec.operator);
    r.rec("outcome", rec.outcome);
    r.rec("deterministic", rec.deterministic());
    r.rec("replaced", rec.replaced.map_or("-".to_string(), |i| i.to_string()));
    r.rec("generators", ops(out.generators()));
    r.line(format!(
        "# measured {} outcome {} ({})",
        rec.operator,
        rec.outcome,
        match rec.replaced {
            Some(i) => format!("replaced generator {i}"),
            None => "deterministic".into(),
        }
    ));
    r.line(out.to_string());
    Ok(r)
}

fn crt(cli: &Cli, file: &Path) -> Result<Report, Failure> {
    let t = load(cli, file)?;
    let dec = crt_decompose(&t)?;
    let mut r = Report::new("crt");
    r.rec("dim", dec.dim);
    r.rec("factors", dec.factors.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    r.rec("residues", dec.residues.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
    for (d, c) in dec.factors.iter().zip(&dec.components) {
        r.rec(&format!("component.{d}"), ops(c.generators()));
    }
    r.line(dec.to_string());
    Ok(r)
}

fn load_cv(cli: &Cli, file: &Path) -> Result<CvStabilizer, Failure> {
    let s = CvStabilizer::parse(&read(file)?)?;
    match cli.tolerance {
        Some(tol) if tol != s.tolerance() => {
            Ok(CvStabilizer::new(s.vectors().to_vec(), s.parties().map(<[_]>::to_vec), tol)?)
        }
        _ => Ok(s),
    }
}

fn cv_canon(cli: &Cli, file: &Path, partition: &str) -> Result<Report, Failure> {
    let s = load_cv(cli, file)?;
    let cut = Cut::parse(partition, s.parties(), s.modes())?;
    let cf = cv_canonicalize(&s, &cut)?;
    let mut r = Report::new("cv-canon");
    r.rec("cut", &cut);
    r.rec("local_a", cf.local_a.len());
    r.rec("local_b", cf.local_b.len());
    r.rec("pairs", cf.pair_count());
    r.rec("max_violation", cf.max_violation());
    r.line(cf.to_string());
    r.line(format!("# cut={cut} pairs={} max_violation={:e}", cf.pair_count(), cf.max_violation()));
    Ok(r)
}

fn cv_trim(cli: &Cli, file: &Path, partition: Option<&str>) -> Result<Report, Failure> {
    let mut s = load_cv(cli, file)?;
    if let Some(p) = partition {
        s = s.with_parties(parse_labels(p)?)?;
    }
    let v = cv_check_trim(&s)?;
    let mut r = Report::new("cv-trim");
    r.rec("feasible", v.feasible);
    r.rec("initial_pairs", v.initial_pairs);
    r.rec("pair_count", v.pair_count);
    r.rec("b_free_rank", v.b_free_rank);
    r.rec("condition1", v.condition1.len());
    r.rec("condition2_groups", v.condition2.len());
    r.line(format!(
        "A|BC pairs = {}, AB|C pairs = {}, B-free rank = {}",
        v.initial_pairs, v.pair_count, v.b_free_rank
    ));
    let fmt_vec = |x: &[f64]| x.iter().map(|e| format!("{e:.6}")).collect::<Vec<_>>().join(" ");
    for (w, _) in &v.condition1 {
        r.line(format!("condition (1) witness: {}", fmt_vec(w)));
    }
    r.line(format!("condition (2) groups: {}", v.condition2.len()));
    if v.feasible {
        let out = cv_execute_trim(&s, &v)?;
        for c in v.plan() {
            r.line(format!("measure: {}", fmt_vec(&c)));
        }
        r.rec("plan_length", v.plan().len());
        r.rec("achieved_pairs", out.achieved_pairs);
        r.rec("success", out.success);
        r.line(format!("after trimming: C-local rank {}, A|B pairs {}", out.c_local_rank, out.achieved_pairs));
        r.line(if out.success { "verdict: trimmed" } else { "verdict: execution failed" });
        r.code = if out.success { 0 } else { 1 };
    } else {
        r.line("verdict: not trimmable");
        r.code = 1;
    }
    Ok(r)
}
