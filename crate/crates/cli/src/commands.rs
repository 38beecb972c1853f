use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use sl2heat::group::{CartanCoords, GroupElement};
use sl2heat::synthesis::{cost_model, KernelPlan, SynthesisConfig};
use sl2heat::verify::suites::{run_suite, Suite, SuiteOptions};
use sl2heat::Error;

use crate::config::{
    resolve_synthesis, FileConfig, Overrides, Resolved, DEFAULT_PATHS, DEFAULT_SEED,
};
use crate::{Cli, CliError, Command};

pub fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let (paths_flag, seed_flag) = match &cli.command {
        Command::Verify { paths, seed, .. } => (*paths, *seed),
        _ => (None, None),
    };
    let flags = Overrides {
        tol: cli.tol,
        t_min: cli.t_min,
        ktype_cutoff: cli.ktype_cutoff,
        paths: paths_flag,
        seed: seed_flag,
    };
    let synthesis = resolve_synthesis(&file, &flags)?;
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.clone().map(PathBuf::from));
    let paths = flags.paths.or(file.paths).unwrap_or(DEFAULT_PATHS);
    let seed = flags.seed.or(file.seed).unwrap_or(DEFAULT_SEED);
    let mut resolved = Resolved {
        command: String::new(),
        synthesis,
        paths,
        seed,
        inputs: BTreeMap::new(),
    };
    let text = match cli.command {
        Command::Eval { t, g, cartan } => {
            let g = match (g, cartan) {
                (Some(spec), _) => parse_matrix(&spec)?,
                (None, Some(spec)) => parse_cartan(&spec)?,
                (None, None) => return Err(CliError::Parse("eval needs --g or --cartan".into())),
            };
            resolved.command = "eval".into();
            resolved.inputs.insert("t".into(), json!(t));
            resolved.inputs.insert("g".into(), json!(g.entries()));
            eval(t, &g, &resolved)?
        }
        Command::Table { t_grid, s_grid } => {
            let ts = parse_grid(&t_grid, "t-grid")?;
            let ss = parse_grid(&s_grid, "s-grid")?;
            resolved.command = "table".into();
            resolved.inputs.insert("t_grid".into(), json!(ts));
            resolved.inputs.insert("s_grid".into(), json!(ss));
            table(&ts, &ss, &resolved.synthesis)?
        }
        Command::Verify { suite, t, n, .. } => {
            let parsed: Suite = suite.parse().map_err(CliError::Parse)?;
            resolved.command = "verify".into();
            resolved.inputs.insert("suite".into(), json!(parsed));
            resolved.inputs.insert("t".into(), json!(t));
            resolved.inputs.insert("n".into(), json!(n));
            return verify(parsed, t, n, &resolved, out);
        }
    };
    emit(&text, out.as_ref())
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Runtime(e.to_string()))
        }
    }
}

fn parse_numbers(spec: &str, what: &str, count: usize) -> Result<Vec<f64>, CliError> {
    let v: Vec<f64> = spec
        .split(',')
        .map(|x| x.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            CliError::Parse(format!(
                "{what}: expected {count} comma-separated numbers, got '{spec}'"
            ))
        })?;
    if v.len() != count || v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Parse(format!(
            "{what}: expected {count} finite numbers, got '{spec}'"
        )));
    }
    Ok(v)
}

pub fn parse_matrix(spec: &str) -> Result<GroupElement, CliError> {
    let v = parse_numbers(spec, "--g", 4)?;
    GroupElement::new(v[0], v[1], v[2], v[3]).map_err(|e| CliError::Parse(format!("--g: {e}")))
}

pub fn parse_cartan(spec: &str) -> Result<GroupElement, CliError> {
    let v = parse_numbers(spec, "--cartan", 3)?;
    Ok(CartanCoords::new(v[0], v[1], v[2]).to_element())
}

/// `a,b,c` or `start:stop:count` (inclusive, evenly spaced).
pub fn parse_grid(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    let bad = || {
        CliError::Parse(format!(
            "--{what}: expected 'x1,x2,...' or 'start:stop:count', got '{spec}'"
        ))
    };
    let v: Vec<f64> = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        match n {
            0 => return Err(bad()),
            1 => vec![a],
            _ => (0..n)
                .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    } else {
        spec.split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?
    };
    if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok(v)
}

fn synthesis_error(e: Error, cfg: &SynthesisConfig) -> CliError {
    match e {
        Error::Tail { t, tol, .. } => {
            let cost = match cost_model(t, tol, cfg.nu_nodes_per_unit) {
                Ok(c) => format!(
                    "; this needs a K-type cutoff N = {} (budget n_max = {}) and {} ν-nodes on [0, {:.2}] per profile",
                    c.cutoff, cfg.n_max, c.nu_nodes, c.nu_max
                ),
                Err(_) => String::new(),
            };
            let reason = if t < cfg.t_min {
                format!("t = {t} is below t_min = {}", cfg.t_min)
            } else {
                e.to_string()
            };
            CliError::Tail(format!("{reason}{cost}"))
        }
        Error::Domain(m) => CliError::Parse(m),
        other => CliError::Runtime(other.to_string()),
    }
}

fn eval(t: f64, g: &GroupElement, resolved: &Resolved) -> Result<String, CliError> {
    let cfg = &resolved.synthesis;
    let v = KernelPlan::new(t, cfg)
        .and_then(|p| p.rho(g))
        .map_err(|e| synthesis_error(e, cfg))?;
    let per_n: BTreeMap<String, Value> = v
        .per_n
        .iter()
        .map(|(n, c)| (n.to_string(), json!([c.re, c.im])))
        .collect();
    let doc = json!({
        "t": t,
        "g": g.entries(),
        "rho": v.value,
        "imag_residual": v.imag_residual,
        "tail_bound": v.tail_bound,
        "quad_error": v.quad_error,
        "per_n": per_n,
        "fingerprint": resolved.fingerprint(),
        "config": resolved,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("json") + "\n")
}

fn table(ts: &[f64], ss: &[f64], cfg: &SynthesisConfig) -> Result<String, CliError> {
    let mut out = String::from("t,s,rho,tail_bound,imag_residual\n");
    for &t in ts {
        let plan = KernelPlan::new(t, cfg).map_err(|e| synthesis_error(e, cfg))?;
        for &s in ss {
            // the same point `eval --cartan 0,s,0` builds
            let g = CartanCoords::new(0.0, s, 0.0).to_element();
            let v = plan.rho(&g).map_err(|e| synthesis_error(e, cfg))?;
            out.push_str(&format!(
                "{t:.16e},{s:.16e},{:.16e},{:.16e},{:.16e}\n",
                v.value, v.tail_bound, v.imag_residual
            ));
        }
    }
    Ok(out)
}

fn verify(
    suite: Suite,
    t: Option<f64>,
    n: Option<i64>,
    resolved: &Resolved,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let opts = SuiteOptions {
        synthesis: resolved.synthesis,
        t,
        n,
        paths: resolved.paths,
        seed: resolved.seed,
    };
    let reports = run_suite(suite, &opts);
    let failures: Vec<&str> = reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.check.as_str())
        .collect();
    let pass = failures.is_empty();
    let doc = json!({
        "suite": suite,
        "pass": pass,
        "checks": reports.len(),
        "failures": failures,
        "fingerprint": resolved.fingerprint(),
        "config": resolved,
        "reports": reports,
    });
    emit(
        &(serde_json::to_string_pretty(&doc).expect("json") + "\n"),
        out.as_ref(),
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "{} of {} checks failed: {}",
            failures.len(),
            reports.len(),
            failures.join(", ")
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        assert_eq!(
            parse_grid("0.5,1,2", "t-grid").unwrap(),
            vec![0.5, 1.0, 2.0]
        );
        assert_eq!(parse_grid("0:1:3", "s-grid").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("2:9:1", "s-grid").unwrap(), vec![2.0]);
        assert!(parse_grid("0:1", "s-grid").is_err());
        assert!(parse_grid("a,b", "s-grid").is_err());
    }

    #[test]
    fn matrix_spec_checks_determinant() {
        assert!(parse_matrix("1,0,0,1").is_ok());
        assert!(matches!(parse_matrix("2,0,0,1"), Err(CliError::Parse(_))));
        assert!(matches!(parse_matrix("1,0,0"), Err(CliError::Parse(_))));
    }

    #[test]
    fn cartan_identity_is_exact() {
        assert_eq!(
            parse_cartan("0,0,0").unwrap().entries(),
            [1.0, 0.0, 0.0, 1.0]
        );
    }
}
