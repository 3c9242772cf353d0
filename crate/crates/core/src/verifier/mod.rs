//! Check registry, orchestration and reports.

mod checks;
mod report;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{make_field, make_field_allow_repeated, rat, Field, Rational};
use crate::poly::default_budget;
use crate::tower::{Breaks, TowerContext};

pub use report::{emit_report, without_timing, write_report, Format, Report, Summary};

/// Deliberate faults selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BreakId {
    RetainLambda1,
    KeepOrigin,
    CorruptRho,
    ExcludePlusLambda,
    RepeatLambda,
}

impl BreakId {
    pub const ALL: [BreakId; 5] = [
        BreakId::RetainLambda1,
        BreakId::KeepOrigin,
        BreakId::CorruptRho,
        BreakId::ExcludePlusLambda,
        BreakId::RepeatLambda,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BreakId::RetainLambda1 => "retain-lambda1",
            BreakId::KeepOrigin => "keep-origin",
            BreakId::CorruptRho => "corrupt-rho",
            BreakId::ExcludePlusLambda => "exclude-plus-lambda",
            BreakId::RepeatLambda => "repeat-lambda",
        }
    }

    /// Checks expected to fail under this fault alone.
    pub fn predicted_failures(self) -> &'static [&'static str] {
        match self {
            BreakId::RetainLambda1 => &["C8"],
            BreakId::KeepOrigin => &["C7", "C12"],
            BreakId::CorruptRho => &["C3", "C7", "C10", "C14"],
            BreakId::ExcludePlusLambda => &["C8", "C11", "C14"],
            BreakId::RepeatLambda => &["C1", "C13"],
        }
    }
}

impl fmt::Display for BreakId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BreakId {
    type Err = Error;

    fn from_str(s: &str) -> Result<BreakId> {
        BreakId::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown fault `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    pub lambdas: [Rational; 3],
    pub n: usize,
    pub degree_bound: u32,
    /// Empty means every registered check.
    pub checks: Vec<String>,
    pub budget: u64,
    pub breaks: Vec<BreakId>,
    /// Include a dump of every constructed object in the report.
    pub verbose: bool,
}

impl Default for Config {
    fn default() -> Config {
        Config {
            lambdas: [rat(1), rat(2), rat(3)],
            n: 3,
            degree_bound: 4,
            checks: Vec::new(),
            budget: default_budget(),
            breaks: Vec::new(),
            verbose: false,
        }
    }
}

impl Config {
    fn tower_breaks(&self) -> Breaks {
        let has = |b| self.breaks.contains(&b);
        Breaks {
            retain_lambda1_point: has(BreakId::RetainLambda1),
            keep_origin: has(BreakId::KeepOrigin),
            corrupt_rho: has(BreakId::CorruptRho),
            exclude_plus_lambda: has(BreakId::ExcludePlusLambda),
        }
    }

    /// The parameters actually used, after any fault is applied.
    pub fn effective_lambdas(&self) -> [Rational; 3] {
        let mut l = self.lambdas.clone();
        if self.breaks.contains(&BreakId::RepeatLambda) {
            l[1] = l[0].clone();
        }
        l
    }

    pub fn field(&self) -> Result<Field> {
        let [a, b, c] = self.effective_lambdas();
        let k = if self.breaks.contains(&BreakId::RepeatLambda) {
            make_field_allow_repeated(a, b, c)
        } else {
            make_field(a, b, c)
        };
        k.map_err(|e| match e {
            Error::DegenerateParameters(m) => Error::Config(format!("bad parameters: {m}")),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.degree_bound == 0 {
            return Err(Error::Config("degree bound must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Config("budget must be positive".into()));
        }
        for id in &self.checks {
            if !REGISTRY.iter().any(|c| c.id == id) {
                return Err(Error::Config(format!("unknown check `{id}`")));
            }
        }
        self.field().map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Budget,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub title: String,
    pub claim: String,
    pub status: Status,
    /// Dump of the violating object; always present on `Fail`.
    pub witness: Option<String>,
    /// Reason for `Skipped` or `Budget`.
    pub note: Option<String>,
    pub evidence: Option<serde_json::Value>,
    pub wall_ms: u64,
}

/// Result of a check body before timing and error mapping.
pub(crate) struct Verdict {
    pub(crate) failures: Vec<String>,
    pub(crate) skipped: Option<String>,
    pub(crate) evidence: Option<serde_json::Value>,
}

impl Verdict {
    pub(crate) fn new() -> Verdict {
        Verdict {
            failures: Vec::new(),
            skipped: None,
            evidence: None,
        }
    }

    pub(crate) fn require(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(witness());
        }
    }
}

pub(crate) struct Suite<'a> {
    pub(crate) cfg: &'a Config,
    pub(crate) ctx: &'a TowerContext,
}

type Runner = fn(&Suite) -> Result<Verdict>;

pub struct CheckSpec {
    pub id: &'static str,
    pub title: &'static str,
    /// The mathematical fact the check certifies.
    pub claim: &'static str,
    runner: Runner,
}

pub static REGISTRY: [CheckSpec; 14] = [
    CheckSpec { id: "C1", title: "smoothness of E", claim: "y^2 = f(x) is a smooth plane curve: its Jacobian ideal is the unit ideal", runner: checks::c1 },
    CheckSpec { id: "C2", title: "presentations of Y_n", claim: "the iterated pullback of Y_1 agrees with the closed presentation of Y_n, compatibly with the open X_n", runner: checks::c2 },
    CheckSpec { id: "C3", title: "structure maps well defined", claim: "phi_n, psi_n are coordinate projections Y_n -> Y_{n-1} and rho_1: A1 x E -> Y_1 is a morphism", runner: checks::c3 },
    CheckSpec { id: "C4", title: "pullback square commutes", claim: "phi_{n-1} psi_n = psi_{n-1} phi_n", runner: checks::c4 },
    CheckSpec { id: "C5", title: "named points", claim: "alpha_n, beta_n lie on X_n and the pair (alpha_1, beta_1) glues over A1", runner: checks::c5 },
    CheckSpec { id: "C6", title: "psi swaps the named points", claim: "psi_n(alpha_n) = beta_{n-1}, psi_n(beta_n) = alpha_{n-1}, phi_n(alpha_n) = alpha_{n-1}, alpha_n != beta_n", runner: checks::c6 },
    CheckSpec { id: "C7", title: "rho_1 off the zero fiber", claim: "rho_1 is an isomorphism after inverting x0, and rho_1(0,0,L) = (0,0,0) lies outside X_1", runner: checks::c7 },
    CheckSpec { id: "C8", title: "Nisnevich cover", claim: "p_1: V_1 -> A1 and p_2: A1 minus 0 -> A1 form an elementary Nisnevich cover", runner: checks::c8 },
    CheckSpec { id: "C9", title: "gluing maps well defined", claim: "psi_1 h_i = p_i and h_1, h_2 land in X_1", runner: checks::c9 },
    CheckSpec { id: "C10", title: "homotopy endpoints", claim: "H(1) = h_1 on W and H(0) = h_2 p_1 on W, also after lifting to every level", runner: checks::c10 },
    CheckSpec { id: "C11", title: "endpoint images", claim: "h_1(0,L) = alpha_1, h_2(1) = beta_1 and the lifts send ((0,L), beta_n) to alpha_{n+1}, (1, alpha_n) to beta_{n+1}", runner: checks::c11 },
    CheckSpec { id: "C12", title: "fibers of phi_n", claim: "fibers of phi_n over the named points are E or the punctured double line, by parity", runner: checks::c12 },
    CheckSpec { id: "C13", title: "rigidity certificates", claim: "no nonconstant maps A1 -> E, G_m or the punctured double line up to the degree bound", runner: checks::c13 },
    CheckSpec { id: "C14", title: "modified homotopies", claim: "h_1^a and its twin on V_1~ are well defined, H(a) = h_1^a on W, and rho_1(0, l_i, 0) lies in the image of h_2", runner: checks::c14 },
];

/// Facts of the construction and where each is certified.
pub enum Coverage {
    Check(&'static str),
    OutOfScope(&'static str),
}

pub static INVENTORY: &[(&str, Coverage)] = &[
    ("E is a smooth affine plane cubic", Coverage::Check("C1")),
    (
        "Y_n and X_n have explicit coordinate presentations",
        Coverage::Check("C2"),
    ),
    ("X_n is open in Y_n", Coverage::Check("C2")),
    (
        "X_n is an iterated fiber product of X_1 over A1",
        Coverage::Check("C2"),
    ),
    ("phi_n, psi_n are projections", Coverage::Check("C3")),
    ("rho_1: A1 x E -> Y_1", Coverage::Check("C3")),
    (
        "Y_n is the pullback of phi_{n-1} along psi_{n-1}",
        Coverage::Check("C4"),
    ),
    (
        "alpha_n and beta_n are points of X_n",
        Coverage::Check("C5"),
    ),
    ("psi_n exchanges the named points", Coverage::Check("C6")),
    ("alpha_n and beta_n are distinct", Coverage::Check("C6")),
    (
        "rho_1 is an isomorphism away from x0 = 0",
        Coverage::Check("C7"),
    ),
    ("rho_1 does not factor through X_1", Coverage::Check("C7")),
    (
        "p_1, p_2 form an elementary Nisnevich cover of A1",
        Coverage::Check("C8"),
    ),
    (
        "h_1, h_2 and their lifts are well defined",
        Coverage::Check("C9"),
    ),
    (
        "the homotopy H glues h_1 and h_2 on the overlap",
        Coverage::Check("C10"),
    ),
    (
        "the glued section sends the named points where expected",
        Coverage::Check("C11"),
    ),
    ("fibers of phi_n are A1-rigid", Coverage::Check("C12")),
    ("E and G_m are A1-rigid", Coverage::Check("C13")),
    (
        "the ghost homotopies h_1^a for a != 0",
        Coverage::Check("C14"),
    ),
    (
        "naive A1-connected components and their iterates",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "the iterates of naive components differ on X_n",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "A1-connected components of X_n are trivial",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "the universal A1-invariant quotient",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "Nisnevich covers give cocartesian squares of sheaves",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "homotopy classes of sections glue",
        Coverage::OutOfScope("sheaf-level statement"),
    ),
    (
        "maps from A1 extend to the projective closure of E",
        Coverage::OutOfScope("genus argument"),
    ),
    (
        "smooth embeddings Z_n of X_n",
        Coverage::OutOfScope("not constructed"),
    ),
];

/// Runs the selected checks on a fresh tower.
pub fn run_suite(cfg: &Config) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let field = cfg.field()?;
    let ctx = TowerContext::build_with_budget(&field, cfg.n, cfg.tower_breaks(), cfg.budget)?;
    let suite = Suite { cfg, ctx: &ctx };
    let selected: Vec<&CheckSpec> = REGISTRY
        .iter()
        .filter(|c| cfg.checks.is_empty() || cfg.checks.iter().any(|id| id == c.id))
        .collect();
    let checks: Vec<CheckReport> = selected
        .par_iter()
        .map(|spec| run_one(spec, &suite))
        .collect();
    let objects = cfg.verbose.then(|| ctx.dump());
    Ok(Report::new(
        cfg,
        checks,
        objects,
        start.elapsed().as_millis() as u64,
    ))
}

fn run_one(spec: &CheckSpec, suite: &Suite) -> CheckReport {
    let start = Instant::now();
    let outcome = (spec.runner)(suite);
    let wall_ms = start.elapsed().as_millis() as u64;
    let mut report = CheckReport {
        id: spec.id.into(),
        title: spec.title.into(),
        claim: spec.claim.into(),
        status: Status::Pass,
        witness: None,
        note: None,
        evidence: None,
        wall_ms,
    };
    match outcome {
        Ok(v) => {
            report.evidence = v.evidence;
            if !v.failures.is_empty() {
                report.status = Status::Fail;
                report.witness = Some(v.failures.join("\n"));
            } else if let Some(reason) = v.skipped {
                report.status = Status::Skipped;
                report.note = Some(reason);
            }
        }
        Err(Error::BudgetExceeded(b)) => {
            report.status = Status::Budget;
            report.note = Some(format!("Gröbner budget of {b} steps exhausted"));
        }
        Err(e) => {
            report.status = Status::Fail;
            report.witness = Some(e.to_string());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_ids_unique_and_inventory_consistent() {
        let ids: HashSet<&str> = REGISTRY.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
        let mut covered = HashSet::new();
        for (topic, cov) in INVENTORY {
            match cov {
                Coverage::Check(id) => {
                    assert!(ids.contains(id), "{topic} points at unknown {id}");
                    covered.insert(*id);
                }
                Coverage::OutOfScope(reason) => assert!(!reason.is_empty()),
            }
        }
        assert_eq!(covered, ids, "every check certifies some listed fact");
    }

    #[test]
    fn config_errors() {
        let bad = Config {
            lambdas: [rat(1), rat(1), rat(3)],
            ..Config::default()
        };
        assert!(matches!(run_suite(&bad), Err(Error::Config(_))));
        let bad = Config {
            n: 0,
            ..Config::default()
        };
        assert!(matches!(run_suite(&bad), Err(Error::Config(_))));
        let bad = Config {
            checks: vec!["C99".into()],
            ..Config::default()
        };
        assert!(matches!(run_suite(&bad), Err(Error::Config(_))));
        assert!("nonsense".parse::<BreakId>().is_err());
        for b in BreakId::ALL {
            assert_eq!(b.as_str().parse::<BreakId>().unwrap(), b);
        }
    }

    #[test]
    fn small_suite_passes() {
        let cfg = Config {
            n: 2,
            degree_bound: 2,
            ..Config::default()
        };
        let report = run_suite(&cfg).unwrap();
        for c in &report.checks {
            assert_eq!(c.status, Status::Pass, "{} {:?}", c.id, c.witness);
        }
    }

    #[test]
    fn level_one_skips_the_square() {
        let cfg = Config {
            n: 1,
            degree_bound: 1,
            checks: vec!["C4".into(), "C6".into()],
            ..Config::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.checks[0].status, Status::Skipped);
        assert_eq!(report.checks[1].status, Status::Pass);
    }
}
