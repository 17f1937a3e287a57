use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use kcbs_qkd::contextuality::{
    born_correlations, classical_optimum, evaluate_witness, ideal_strategy, parse_context_csv,
    ClassicalOptimum, DuplicateRule, ExtendedGraph, CLASSICAL_BOUND,
};
use kcbs_qkd::data;
use kcbs_qkd::protocol::{
    estimate_witness_errors, pack_key_hex, records_csv, run_rounds, sift, ProtocolConfig,
    ResampleMode,
};
use kcbs_qkd::security::channel::dephase_mix;
use kcbs_qkd::security::{
    key_rate_csv, key_rate_vs_s, randomness_bounds, seesaw::unit_grid, Coloring, KeyRatePoint,
    RandomnessConfig, SeesawConfig, KEY_ROUND_FRACTION, REFERENCE_COLORING,
};
use kcbs_qkd::source::{
    s2_crossing, sweep_csv, sweep_mu as run_sweep, two_photon_prob_for_g2, SourceModel,
};
use kcbs_qkd::{Error, WitnessReport};

use crate::manifest::RunManifest;
use crate::{
    AttackArgs, Bundled, Duplicates, KeyrateArgs, RandomnessArgs, SeesawArgs, SimulateArgs,
    SourceArg, SweepArgs, WitnessArgs,
};

fn print_witness(r: &WitnessReport) {
    let err = |v: Option<f64>| v.map(|e| format!(" ± {e:.4}")).unwrap_or_default();
    let e = r.errors.as_ref();
    println!("S1 = {:.4}{}", r.s1, err(e.map(|e| e.s1)));
    println!("S2 = {:.4}{}", r.s2, err(e.map(|e| e.s2)));
    println!(
        "S  = {:.4}{}  (S/35 = {:.5})",
        r.s,
        err(e.map(|e| e.s)),
        r.s_normalized
    );
    let verdict = if r.violation {
        "VIOLATION"
    } else {
        "NO VIOLATION"
    };
    println!("{verdict} of the classical bound {}", r.classical_bound);
}

pub fn witness(a: &WitnessArgs, dir: &Path) -> Result<()> {
    let (name, text) = match (&a.input, a.bundled) {
        (Some(path), _) => (
            path.display().to_string(),
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        ),
        (None, Some(b)) => {
            let text = match b {
                Bundled::Measured => data::MEASURED_CONTEXTS_CSV,
                Bundled::Ideal => data::IDEAL_TABLE_CSV,
                Bundled::Uniform => data::UNIFORM_TABLE_CSV,
            };
            (
                format!(
                    "bundled:{}",
                    serde_json::to_value(b)?.as_str().unwrap_or("")
                ),
                text.to_string(),
            )
        }
        (None, None) => bail!("either --input or --bundled is required"),
    };
    let mut manifest = RunManifest::new("witness", a, Some(a.seed), dir)?;
    manifest.add_input(&name, text.as_bytes());

    let rule = match a.duplicates {
        Duplicates::Average => DuplicateRule::Average,
        Duplicates::Max => DuplicateRule::Max,
    };
    let table = parse_context_csv(&text)?.to_table(rule)?;
    let report = match evaluate_witness(&table) {
        Err(Error::MissingPairs(pairs)) => {
            let list: Vec<String> = pairs
                .iter()
                .map(|(x, y)| format!("(x={x}, y={y})"))
                .collect();
            bail!(
                "table is missing {} witness pairs: {}",
                pairs.len(),
                list.join(" ")
            );
        }
        other => other?,
    };
    let report = if table.has_counts() {
        estimate_witness_errors(&table, a.resamples, a.seed, ResampleMode::Poisson)?
    } else {
        report
    };
    print_witness(&report);
    manifest.write_json("witness.json", &report)?;
    manifest.finish()
}

pub fn simulate(a: &SimulateArgs, dir: &Path) -> Result<()> {
    let source = match a.source {
        SourceArg::Qd => SourceModel::deterministic(two_photon_prob_for_g2(a.g2)?),
        SourceArg::Single => SourceModel::single_photon(),
        SourceArg::Coherent => SourceModel::coherent(a.mu),
    }
    .with_dark_counts(a.dark_count);
    if !(0.0..=1.0).contains(&a.q) {
        bail!("--q {} outside [0, 1]", a.q);
    }
    let strategy = ideal_strategy::<f64>().map_states(|r| dephase_mix(r, a.q));
    let mut config = ProtocolConfig::new(a.rounds, a.seed, strategy, source);
    config.verification_fraction = a.verification_fraction;

    let mut manifest = RunManifest::new("simulate", a, Some(a.seed), dir)?;
    let records = run_rounds(&config)?;
    let sifted = sift(
        &records,
        &ExtendedGraph::new(),
        a.verification_fraction,
        a.seed,
    )?;

    let witness = match sifted.witness_estimate {
        Some(_) => Some(estimate_witness_errors(
            &sifted.verification_table,
            a.resamples,
            a.seed,
            ResampleMode::Poisson,
        )?),
        None => None,
    };
    let expected_pk = KEY_ROUND_FRACTION * (1.0 - sifted.discarded_rounds as f64 / a.rounds as f64);
    let pk_sigma = (expected_pk * (1.0 - expected_pk) / a.rounds as f64).sqrt();
    let summary = json!({
        "rounds": a.rounds,
        "key_rounds": sifted.key_rounds,
        "verification_rounds": sifted.verification_rounds,
        "discarded_rounds": sifted.discarded_rounds,
        "empirical_Pk": sifted.empirical_pk,
        "expected_Pk": expected_pk,
        "Pk_sigma": pk_sigma,
        "agreement_rate": sifted.agreement_rate,
        "source": config.source,
        "witness": witness,
    });

    println!(
        "key rounds {} of {}: P_k = {:.5} (expected {:.5} ± {:.5})",
        sifted.key_rounds, a.rounds, sifted.empirical_pk, expected_pk, pk_sigma
    );
    println!("key agreement {:.6}", sifted.agreement_rate);
    match &witness {
        Some(w) => print_witness(w),
        None => println!("too few verification rounds to estimate the witness"),
    }

    let header = manifest.header_line();
    if !a.no_round_log {
        manifest.write("rounds.csv", &records_csv(&sifted.records, &header))?;
    }
    manifest.write(
        "alice_key.hex",
        &format!("# {header}\n{}\n", pack_key_hex(&sifted.alice_key)),
    )?;
    manifest.write(
        "bob_key.hex",
        &format!("# {header}\n{}\n", pack_key_hex(&sifted.bob_key)),
    )?;
    manifest.write_json("simulate.json", &summary)?;
    manifest.finish()
}

pub fn sweep_mu(a: &SweepArgs, dir: &Path) -> Result<()> {
    let grid: Vec<f64> = if a.mu.is_empty() {
        if a.points < 2 || !(a.mu_min > 0.0 && a.mu_max > a.mu_min) {
            bail!("need --points ≥ 2 and 0 < --mu-min < --mu-max");
        }
        (0..a.points)
            .map(|i| a.mu_min + (a.mu_max - a.mu_min) * i as f64 / (a.points - 1) as f64)
            .collect()
    } else {
        a.mu.clone()
    };
    let mut manifest = RunManifest::new("sweep-mu", a, None, dir)?;
    let ideal = born_correlations(&ideal_strategy())?;
    let template = SourceModel::coherent(1.0).with_dark_counts(a.dark_count);
    let points = run_sweep(&ideal, &grid, &template)?;
    let crossing = s2_crossing(&points, a.level);
    match crossing {
        Some(mu) => println!("S2 falls below {} at mu = {mu:.4}", a.level),
        None => println!("S2 does not cross {} on this grid", a.level),
    }
    let header = manifest.header_line();
    manifest.write(
        "sweep_mu.csv",
        &format!("# {header}\n{}", sweep_csv(&points)),
    )?;
    manifest.write_json(
        "sweep_mu.json",
        &json!({ "level": a.level, "crossing_mu": crossing, "points": points }),
    )?;
    manifest.finish()
}

fn parse_coloring(s: &str) -> Result<Option<Coloring>> {
    match s {
        "reference" => Ok(Some(REFERENCE_COLORING)),
        "all" => Ok(None),
        list => {
            let colors: Vec<u8> = list
                .split(',')
                .map(|c| c.trim().parse::<u8>())
                .collect::<Result<_, _>>()
                .with_context(|| format!("coloring `{list}`"))?;
            let colors: Coloring = colors
                .try_into()
                .map_err(|_| anyhow::anyhow!("coloring needs exactly 8 colors"))?;
            if !ExtendedGraph::new().is_proper_coloring(&colors) {
                bail!("{colors:?} is not a proper coloring of the graph");
            }
            Ok(Some(colors))
        }
    }
}

fn seesaw_config(a: &SeesawArgs) -> SeesawConfig {
    SeesawConfig {
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        tolerance: a.tolerance,
        seed: a.seed,
    }
}

fn write_curve(manifest: &mut RunManifest, stem: &str, points: &[KeyRatePoint<f64>]) -> Result<()> {
    for p in points {
        let r = &p.report;
        let flag = if r.overall_rate < 0.0 {
            "  (negative, reported as 0)"
        } else {
            ""
        };
        println!(
            "q = {:.2}  S_max = {:.4}  I_AB = {:.4}  I_AE = {:.4}  overall rate = {:.4}{flag}",
            r.q,
            p.seesaw.s_max,
            r.i_ab,
            r.i_ae,
            r.overall_rate.max(0.0)
        );
    }
    let header = manifest.header_line();
    manifest.write(
        &format!("{stem}.csv"),
        &format!("# {header}\n{}", key_rate_csv(points)),
    )?;
    manifest.write_json(&format!("{stem}_strategies.json"), &points)?;
    Ok(())
}

pub fn attack(a: &AttackArgs, dir: &Path) -> Result<()> {
    let coloring = parse_coloring(&a.seesaw.coloring)?;
    let mut manifest = RunManifest::new("attack", a, Some(a.seesaw.seed), dir)?;
    let points = key_rate_vs_s(&a.q, coloring, &seesaw_config(&a.seesaw))?;
    write_curve(&mut manifest, "attack", &points)?;
    manifest.finish()
}

pub fn keyrate(a: &KeyrateArgs, dir: &Path) -> Result<()> {
    if a.steps == 0 {
        bail!("--steps must be at least 1");
    }
    let coloring = parse_coloring(&a.seesaw.coloring)?;
    let mut manifest = RunManifest::new("keyrate", a, Some(a.seesaw.seed), dir)?;
    let points = key_rate_vs_s(&unit_grid(a.steps), coloring, &seesaw_config(&a.seesaw))?;
    write_curve(&mut manifest, "key_rate", &points)?;
    manifest.finish()
}

pub fn randomness(a: &RandomnessArgs, dir: &Path) -> Result<()> {
    let config = RandomnessConfig {
        restarts: a.restarts,
        outer_iterations: a.outer_iterations,
        seed: a.seed,
        ..RandomnessConfig::default()
    };
    let mut manifest = RunManifest::new("randomness", a, Some(a.seed), dir)?;
    let report = randomness_bounds(a.s1, a.s2, &config)?;
    match (report.ideal_pstar, report.ideal_r_bits) {
        (Some(p), Some(r)) => println!("certified: p* = {p:.5}, R = {r:.5} bits"),
        _ => println!("no certified randomness at (S1, S2) = ({}, {})", a.s1, a.s2),
    }
    if let Some(p) = report.achievable_pstar {
        println!("largest guessing probability found: {p:.5}");
    }
    println!("{}", report.note);
    manifest.write_json("randomness.json", &report)?;
    manifest.finish()
}

pub fn classical_bound(dir: &Path) -> Result<()> {
    let mut manifest = RunManifest::new("classical-bound", &json!({}), None, dir)?;
    let start = Instant::now();
    let best: ClassicalOptimum =
        classical_optimum(&kcbs_qkd::contextuality::classical::ALL_SUBSETS);
    println!(
        "classical bound {} (S1 = {}, S2 = {}) over 8^8 assignments in {:.1?}",
        best.total,
        best.s1,
        best.s2,
        start.elapsed()
    );
    if best.total != CLASSICAL_BOUND {
        bail!(
            "enumeration gave {}, expected {CLASSICAL_BOUND}",
            best.total
        );
    }
    manifest.write_json("classical_bound.json", &best)?;
    manifest.finish()
}
