use std::fmt;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use massey_core::arithq::{
    character_with_local_data, character_with_local_data_ramified, cup_vanishes_p2,
    dirichlet_oracle, find_aux_prime, frobenius_matrix, global_cup_vanishes, gras_munnier,
    local_restriction, CharacterQ, LocalDatum,
};
use massey_core::lifting::{
    decide, lift_tower, strong_massey_check, validate_witness, CharTuple, LiftStatus, MasseyCheck,
    MasseyReport, Target,
};
use massey_core::modular::{is_prime, mod_pow, valuation};
use massey_core::presentation::Presentation;
use massey_core::unipotent::{abelian_plan, block_plan, sr_plan, BlockSpec, UniMatrix};
use massey_core::Error;

use crate::{Cli, Command, PlanArg, TargetArg};

pub const SCHEMA: u32 = 1;

pub struct Outcome {
    pub report: Value,
    pub summary: String,
    pub code: u8,
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    /// A result failed its own re-verification. Never expected.
    Tripwire(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Tripwire(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Tripwire(m) => write!(f, "internal check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn envelope(command: &str, body: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "result": body })
}

fn completed(command: &str, body: Value, summary: String) -> Outcome {
    Outcome {
        report: envelope(command, body),
        summary,
        code: 0,
    }
}

fn exhausted(command: &str, body: Value, summary: String) -> Outcome {
    Outcome {
        report: envelope(command, body),
        summary,
        code: 2,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_presentation(path: &Path, p: u64) -> Result<Presentation> {
    Presentation::parse(&read(path)?, p)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_character(path: &Path) -> Result<CharacterQ> {
    CharacterQ::parse(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Input(format!("bad integer `{x}` in `{s}`")))
        })
        .collect()
}

/// Builds the `g x n` table from one value list per character.
fn char_tuple(presentation: &Presentation, chis: &[String]) -> Result<CharTuple> {
    let p = presentation.p() as i64;
    let cols: Vec<Vec<u64>> = chis
        .iter()
        .map(|s| parse_list(s).map(|v| v.into_iter().map(|x| x.rem_euclid(p) as u64).collect()))
        .collect::<Result<_>>()?;
    let g = presentation.num_generators();
    if let Some(bad) = cols.iter().find(|c| c.len() != g) {
        return Err(CliError::Input(format!(
            "character {bad:?} needs {g} values"
        )));
    }
    let values = (0..g)
        .map(|gen| cols.iter().map(|c| c[gen]).collect())
        .collect();
    Ok(CharTuple::new(presentation, values)?)
}

fn check_witness(
    presentation: &Presentation,
    theta: &CharTuple,
    target: Target,
    w: &Option<Vec<UniMatrix>>,
) -> Result<()> {
    match w {
        Some(w) if !validate_witness(presentation, theta, target, w) => Err(CliError::Tripwire(
            format!("emitted {target:?} witness does not validate"),
        )),
        _ => Ok(()),
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "budget exceeded",
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Group { file, p, n, r, chi } => run_group(file, *p, *n, *r, chi, cli.budget),
        Command::Lift {
            file,
            p,
            r,
            chi,
            target,
        } => run_lift(file, *p, *r, chi, *target, cli.budget),
        Command::Cup { a, b, char } => run_cup(*a, *b, char),
        Command::GrasMunnier {
            p,
            s,
            t,
            oracle_budget,
        } => run_gras_munnier(*p, s, t, *oracle_budget),
        Command::FindPrime {
            p,
            m,
            bound,
            kummer,
            char,
            prescribe,
            ramified,
        } => {
            if prescribe.is_empty() {
                run_find_prime(*p, *m, *bound, kummer, char)
            } else {
                run_local_data(*p, *m, *bound, prescribe, *ramified)
            }
        }
        Command::Plan {
            kind,
            p,
            q,
            r,
            sigma,
            tau,
            n,
            chi_sigma,
            chi_tau,
            block,
        } => run_plan(
            *kind, *p, *q, *r, sigma, tau, *n, *chi_sigma, *chi_tau, block,
        ),
        Command::Counterexamples => Ok(run_counterexamples()),
    }
}

fn run_group(
    file: &Path,
    p: u64,
    n: usize,
    r: u32,
    chis: &[String],
    budget: u64,
) -> Result<Outcome> {
    if n < 2 || r < 1 {
        return Err(CliError::Input("need n >= 2 and r >= 1".into()));
    }
    let presentation = load_presentation(file, p)?;
    if chis.is_empty() {
        let report = strong_massey_check(&presentation, n, r, budget)?;
        let summary = format!(
            "strong {n}-fold Massey property (mod {p}^{r}): {}\ntuples lifted: {}\nnodes: {}\n",
            match report.holds() {
                Some(true) => "holds".to_string(),
                Some(false) => format!("fails at {:?}", counterexample_columns(&report)),
                None => "budget exceeded".to_string(),
            },
            report.tuples_checked,
            report.stats.nodes
        );
        let body = serde_json::to_value(&report).expect("serializable");
        return Ok(if report.holds().is_none() {
            exhausted("group", body, summary)
        } else {
            completed("group", body, summary)
        });
    }
    if chis.len() != n {
        return Err(CliError::Input(format!(
            "{} characters given for n = {n}",
            chis.len()
        )));
    }
    let theta = char_tuple(&presentation, chis)?;
    let verdict = match decide(&presentation, &theta, r, budget) {
        Ok(v) => v,
        Err(Error::BudgetExceeded(nodes)) => {
            let body = json!({ "status": "budget_exceeded", "nodes": nodes });
            return Ok(exhausted(
                "group",
                body,
                "cup conditions: budget exceeded\n".into(),
            ));
        }
        Err(e) => return Err(e.into()),
    };
    check_witness(
        &presentation,
        &theta,
        Target::Quotient,
        &verdict.defined.witness,
    )?;
    check_witness(
        &presentation,
        &theta,
        Target::Full,
        &verdict.vanishing.witness,
    )?;
    let summary = format!(
        "cup products vanish: {:?}\ndefined: {}\nvanishing: {}\n",
        verdict.cup_ok,
        yes_no(verdict.defined.ok),
        yes_no(verdict.vanishing.ok)
    );
    let over = verdict.defined.status == LiftStatus::BudgetExceeded
        || verdict.vanishing.status == LiftStatus::BudgetExceeded;
    let body = serde_json::to_value(&verdict).expect("serializable");
    Ok(if over {
        exhausted("group", body, summary)
    } else {
        completed("group", body, summary)
    })
}

fn counterexample_columns(report: &MasseyReport) -> Vec<Vec<u64>> {
    match &report.result {
        MasseyCheck::Fails { counterexample } => (1..=counterexample.n())
            .map(|j| counterexample.column(j))
            .collect(),
        _ => Vec::new(),
    }
}

fn run_lift(
    file: &Path,
    p: u64,
    r: u32,
    chis: &[String],
    target: TargetArg,
    budget: u64,
) -> Result<Outcome> {
    if r < 1 {
        return Err(CliError::Input("need r >= 1".into()));
    }
    let presentation = load_presentation(file, p)?;
    let theta = char_tuple(&presentation, chis)?;
    let target = match target {
        TargetArg::Full => Target::Full,
        TargetArg::Quotient => Target::Quotient,
    };
    let res = lift_tower(&presentation, &theta, target, r, budget)?;
    check_witness(&presentation, &theta, target, &res.witness)?;
    let mut summary = format!(
        "lift to {} target mod {p}^{r}: {}\n",
        format!("{target:?}").to_lowercase(),
        yes_no(res.ok())
    );
    if let Some(w) = &res.witness {
        for (k, m) in w.iter().enumerate() {
            summary.push_str(&format!("x{} -> {:?}\n", k + 1, m.rows()));
        }
    }
    let body = serde_json::to_value(&res).expect("serializable");
    Ok(if res.ok().is_none() {
        exhausted("lift", body, summary)
    } else {
        completed("lift", body, summary)
    })
}

fn run_cup(a: Option<i64>, b: Option<i64>, chars: &[std::path::PathBuf]) -> Result<Outcome> {
    if let (Some(a), Some(b)) = (a, b) {
        let ledger = cup_vanishes_p2(a, b)?;
        let mut summary = format!("({a}, {b}) cup vanishes: {}\n", ledger.vanishes);
        for (v, s) in &ledger.symbols {
            summary.push_str(&format!("  ({a},{b})_{v} = {s:+}\n"));
        }
        return Ok(completed(
            "cup",
            serde_json::to_value(&ledger).expect("serializable"),
            summary,
        ));
    }
    let [f1, f2] = chars else {
        return Err(CliError::Input(
            "give either --a/--b or exactly two --char files".into(),
        ));
    };
    let (chi, psi) = (load_character(f1)?, load_character(f2)?);
    let ledger = global_cup_vanishes(&chi, &psi)?;
    let mut summary = format!("cup vanishes: {}\n", ledger.vanishes);
    for pl in &ledger.places {
        summary.push_str(&format!("  q = {}: pairing {}\n", pl.q, pl.pairing));
    }
    Ok(completed(
        "cup",
        serde_json::to_value(&ledger).expect("serializable"),
        summary,
    ))
}

fn run_gras_munnier(p: u64, s: &[u64], t: &[u64], oracle_budget: u64) -> Result<Outcome> {
    let cert = gras_munnier(s, t, p)?;
    let matrix = frobenius_matrix(s, t, p)?;
    if let Some(c) = &cert {
        if !c.verify()? {
            return Err(CliError::Tripwire(format!(
                "certificate {:?} fails its own relation",
                c.a
            )));
        }
    }
    let oracle = match dirichlet_oracle(s, t, p, oracle_budget) {
        Ok(found) => {
            if found != cert.is_some() {
                return Err(CliError::Tripwire(format!(
                    "governing-field answer {} but Dirichlet enumeration answer {found} for S = {s:?}, T = {t:?}",
                    cert.is_some()
                )));
            }
            json!({ "checked": true, "exists": found })
        }
        Err(Error::BudgetExceeded(_)) => {
            json!({ "checked": false, "reason": "modulus exceeds oracle budget" })
        }
        Err(e) => return Err(e.into()),
    };
    let summary = match &cert {
        Some(c) => format!("extension exists; a = {:?} over S = {s:?}\n", c.a),
        None => format!("no extension ramified exactly at {s:?} and split at {t:?}\nsigma matrix (rows T, columns S): {matrix:?}\n"),
    };
    let body = json!({
        "p": p,
        "S": s,
        "T": t,
        "sigma": matrix,
        "certificate": cert,
        "oracle": oracle,
    });
    Ok(completed("gras-munnier", body, summary))
}

fn run_find_prime(
    p: u64,
    m: u32,
    bound: u64,
    kummer: &[i64],
    char_files: &[std::path::PathBuf],
) -> Result<Outcome> {
    let chars: Vec<CharacterQ> = char_files
        .iter()
        .map(|f| load_character(f))
        .collect::<Result<_>>()?;
    let search = find_aux_prime(p, m, kummer, &chars, bound)?;
    let body = serde_json::to_value(&search).expect("serializable");
    let Some(ell) = search.prime else {
        let summary = format!(
            "no prime up to {bound} ({} candidates examined)\n",
            search.candidates_examined
        );
        return Ok(exhausted("find-prime", body, summary));
    };
    let kummer_ok = kummer.iter().all(|&a| {
        let a = a.rem_euclid(ell as i64) as u64;
        a != 0 && mod_pow(a, (ell - 1) / p, ell) == 1
    });
    let chars_ok = chars
        .iter()
        .all(|c| c.component(ell) == 0 && (c.frobenius(ell) == Ok(0)));
    if !is_prime(ell) || valuation(ell - 1, p) != m || !kummer_ok || !chars_ok {
        return Err(CliError::Tripwire(format!(
            "{ell} fails a splitting condition"
        )));
    }
    let summary = format!(
        "l = {ell} ({} candidates examined, bound {bound})\n",
        search.candidates_examined
    );
    Ok(completed("find-prime", body, summary))
}

fn parse_datum(s: &str, p: u64) -> Result<LocalDatum> {
    let parts: Vec<&str> = s.split(':').collect();
    let [q, t, sv] = parts[..] else {
        return Err(CliError::Input(format!("expected q:t:s, got `{s}`")));
    };
    let num = |x: &str| {
        x.trim()
            .parse::<i64>()
            .map_err(|_| CliError::Input(format!("bad integer `{x}` in `{s}`")))
    };
    let q = u64::try_from(num(q)?).map_err(|_| CliError::Input(format!("bad prime in `{s}`")))?;
    Ok(LocalDatum::new(q, num(t)?, num(sv)?, p)?)
}

fn run_local_data(
    p: u64,
    m: u32,
    bound: u64,
    prescribe: &[String],
    ramified: bool,
) -> Result<Outcome> {
    let data: Vec<LocalDatum> = prescribe
        .iter()
        .map(|s| parse_datum(s, p))
        .collect::<Result<_>>()?;
    let construct = if ramified {
        character_with_local_data_ramified
    } else {
        character_with_local_data
    };
    let out = match construct(&data, p, m, bound) {
        Ok(o) => o,
        Err(Error::NotFound { bound, detail }) => {
            let body = json!({ "status": "not_found", "bound": bound, "detail": detail });
            return Ok(exhausted("find-prime", body, format!("{detail}\n")));
        }
        Err(e) => return Err(e.into()),
    };
    for d in &data {
        let got = local_restriction(&out.chi, d.q)?;
        if got != *d {
            return Err(CliError::Tripwire(format!(
                "restriction at {} is {got:?}, prescribed {d:?}",
                d.q
            )));
        }
    }
    if let Some(aux) = &out.aux {
        if valuation(aux.prime - 1, p) != m || out.chi.component(aux.prime) == 0 {
            return Err(CliError::Tripwire(format!(
                "auxiliary prime {} violates its conditions",
                aux.prime
            )));
        }
    }
    let summary = format!(
        "{}auxiliary prime: {}\n",
        out.chi,
        out.aux.as_ref().map_or("none".to_string(), |a| format!(
            "{} (exponent {})",
            a.prime, a.exponent
        ))
    );
    let body = json!({
        "prescribed": data,
        "character": out.chi,
        "aux": out.aux,
        "candidates_examined": out.candidates_examined,
    });
    Ok(completed("find-prime", body, summary))
}

fn parse_block(s: &str) -> Result<BlockSpec> {
    let (start, lambdas) = s
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("expected start:l1,l2,..., got `{s}`")))?;
    let start = start
        .trim()
        .parse::<usize>()
        .map_err(|_| CliError::Input(format!("bad block start in `{s}`")))?;
    let lambdas = parse_list(lambdas)?
        .into_iter()
        .map(|x| x.max(0) as u64)
        .collect();
    Ok(BlockSpec { start, lambdas })
}

#[allow(clippy::too_many_arguments)]
fn run_plan(
    kind: PlanArg,
    p: u64,
    q: u64,
    r: u32,
    sigma: &[i64],
    tau: &[i64],
    n: Option<usize>,
    chi_sigma: u64,
    chi_tau: u64,
    blocks: &[String],
) -> Result<Outcome> {
    let built = match kind {
        PlanArg::Sr => sr_plan(&UniMatrix::from_near_diagonal(p, r, tau)?, q),
        PlanArg::Abelian => {
            if sigma.len() != tau.len() {
                return Err(CliError::Input(
                    "--sigma and --tau need the same length".into(),
                ));
            }
            abelian_plan(
                &UniMatrix::from_near_diagonal(p, r, sigma)?,
                &UniMatrix::from_near_diagonal(p, r, tau)?,
                q,
            )
        }
        PlanArg::Block => {
            let n = n.ok_or_else(|| CliError::Input("block plans need --n".into()))?;
            let specs: Vec<BlockSpec> = blocks
                .iter()
                .map(|b| parse_block(b))
                .collect::<Result<_>>()?;
            block_plan(n, p, chi_sigma, chi_tau, &specs, q)
        }
    };
    match built {
        Ok(plan) => {
            if !plan.satisfies_tame_relation() {
                return Err(CliError::Tripwire(format!(
                    "plan at {q} violates the tame relation"
                )));
            }
            let summary = format!(
                "valid {} plan at q = {q}\nsigma -> {:?}\ntau -> {:?} (order {})\n",
                format!("{:?}", plan.kind).to_lowercase(),
                plan.sigma_image.rows(),
                plan.tau_image.rows(),
                plan.tau_image.order()
            );
            let body = json!({ "valid": true, "tau_order": plan.tau_image.order(), "plan": plan });
            Ok(completed("plan", body, summary))
        }
        Err(Error::PlanInvalid(reason)) => {
            let summary = format!("invalid plan: {reason}\n");
            Ok(completed(
                "plan",
                json!({ "valid": false, "reason": reason }),
                summary,
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn run_counterexamples() -> Outcome {
    let tuples: [(&str, [i64; 4], Option<&str>); 3] = [
        (
            "harpaz-wittenberg",
            [34, 2, 17, 34],
            Some("four-fold Massey product is not defined (cited, not recomputed)"),
        ),
        (
            "merkurjev-scavia",
            [221, 13, 17, 221],
            Some("four-fold Massey product is not defined (cited, not recomputed)"),
        ),
        ("control", [-1, -1, -1, -1], None),
    ];
    let mut summary = String::new();
    let mut entries = Vec::new();
    for (name, tuple, claim) in tuples {
        let ledgers: Vec<_> = tuple
            .windows(2)
            .map(|w| cup_vanishes_p2(w[0], w[1]).expect("nonzero entries"))
            .collect();
        let member = ledgers.iter().all(|l| l.vanishes);
        let failing: Vec<String> = ledgers
            .iter()
            .flat_map(|l| {
                l.symbols
                    .iter()
                    .filter(|(_, s)| *s == -1)
                    .map(move |(v, _)| format!("({},{})_{v}", l.a, l.b))
            })
            .collect();
        summary.push_str(&format!("{name} {tuple:?}: adjacent cups vanish: {member}"));
        if !failing.is_empty() {
            summary.push_str(&format!(" (nontrivial: {})", failing.join(", ")));
        }
        summary.push('\n');
        if let Some(c) = claim {
            summary.push_str(&format!("  {c}\n"));
        }
        entries.push(json!({
            "name": name,
            "tuple": tuple,
            "cups_vanish": member,
            "symbols": ledgers,
            "claim": claim,
        }));
    }
    completed(
        "counterexamples",
        json!({ "p": 2, "tuples": entries }),
        summary,
    )
}
