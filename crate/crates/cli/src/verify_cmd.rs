use std::fs;
use std::path::Path;
use std::str::FromStr;

use drsubmax::instances::Instance;
use drsubmax::verify::{
    check_antitone, check_cross_partials, check_directional_concavity, check_dr, check_join_meet_inequality,
    check_monotone, check_weak_dr, CheckOptions, CheckReport, HessianMode,
};
use drsubmax::Objective;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    WeakDr,
    Dr,
    Antitone,
    WeakAntitone,
    CrossPartials,
    Hessian,
    DirectionalConcavity,
    Monotone,
    JoinMeet,
}

impl Check {
    pub const ALL: [Check; 9] = [
        Check::WeakDr,
        Check::Dr,
        Check::Antitone,
        Check::WeakAntitone,
        Check::CrossPartials,
        Check::Hessian,
        Check::DirectionalConcavity,
        Check::Monotone,
        Check::JoinMeet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::WeakDr => "weak_dr",
            Check::Dr => "dr",
            Check::Antitone => "antitone",
            Check::WeakAntitone => "weak_antitone",
            Check::CrossPartials => "cross_partials",
            Check::Hessian => "hessian",
            Check::DirectionalConcavity => "directional_concavity",
            Check::Monotone => "monotone",
            Check::JoinMeet => "join_meet",
        }
    }

    pub fn run(self, obj: &dyn Objective, opts: &CheckOptions) -> drsubmax::Result<CheckReport> {
        match self {
            Check::WeakDr => check_weak_dr(obj, opts),
            Check::Dr => check_dr(obj, opts),
            Check::Antitone => check_antitone(obj, opts, false),
            Check::WeakAntitone => check_antitone(obj, opts, true),
            Check::CrossPartials => check_cross_partials(obj, opts, HessianMode::OffDiagonal),
            Check::Hessian => check_cross_partials(obj, opts, HessianMode::All),
            Check::DirectionalConcavity => check_directional_concavity(obj, opts),
            Check::Monotone => check_monotone(obj, opts),
            Check::JoinMeet => check_join_meet_inequality(obj, 0.0, opts),
        }
    }
}

impl FromStr for Check {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        let s = s.strip_prefix("check_").unwrap_or(s);
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
            CliError::validation(format!("unknown check `{s}`; expected one of {}", names.join(", ")))
        })
    }
}

pub fn parse_checks(list: &str) -> Result<Vec<Check>, CliError> {
    let checks: Vec<Check> = list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect::<Result<_, _>>()?;
    if checks.is_empty() {
        return Err(CliError::validation("no checks given"));
    }
    Ok(checks)
}

/// Runs `checks` on the instance and writes `verify_<check>.json` into
/// `out`. Fails with the verification exit code when any check fails.
pub fn verify(instance: &Path, checks: &[Check], opts: &CheckOptions, out: &Path) -> Result<(), CliError> {
    let inst = Instance::load(instance).map_err(|e| CliError::from_core(&instance.display().to_string(), e))?;
    let base = instance.parent().unwrap_or(Path::new("."));
    let problem = inst.build(Some(base)).map_err(|e| CliError::from_core("instance", e))?;
    fs::create_dir_all(out)?;
    let mut failed = Vec::new();
    for &check in checks {
        let report = check
            .run(problem.objective.as_ref(), opts)
            .map_err(|e| CliError::runtime(format!("{}: {e}", check.name())))?;
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::runtime(e.to_string()))?;
        fs::write(out.join(format!("verify_{}.json", check.name())), text + "\n")?;
        println!(
            "{} {}: {} violations in {} samples, worst margin {:e}",
            if report.pass { "PASS" } else { "FAIL" },
            check.name(),
            report.violation_count,
            report.samples,
            report.worst_margin
        );
        if !report.pass {
            failed.push(check.name());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::verification(format!("failed checks: {}", failed.join(", "))))
    }
}
