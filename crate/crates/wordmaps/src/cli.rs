//! Command-line surface.
//!
//! Three command families: `group` builds and inspects groups, `words`
//! computes images, canonical forms and catalogs, `verify` runs the named
//! verification suites over group fleets. Every run emits one JSON report
//! (or `--csv` for a flattened view).
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or presentation
//! error, 3 budget exceeded.

use std::time::Instant;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::group::{build_group, ElementSet, Group, GroupSpec};
use crate::report::RunReport;
use crate::words::{self, parse_word};
use crate::{aut, exit_code, extraspecial, preset, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "wordmaps", version, about = "Word images on finite p-groups")]
pub struct Cli {
    /// Group preset name (see the preset registry).
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,

    /// Group presentation JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    pub spec: Option<std::path::PathBuf>,

    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = words::DEFAULT_SEED)]
    pub seed: u64,

    /// Worker threads for enumeration sweeps; output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Emit the report as flattened CSV.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Evaluation / search-node budget.
    #[arg(long, global = true, value_name = "NODES")]
    pub budget: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and inspect groups.
    Group {
        #[command(subcommand)]
        action: GroupCmd,
    },
    /// Word images, canonical forms, and catalogs.
    Words {
        #[command(subcommand)]
        action: WordsCmd,
    },
    /// Verification suites over a fleet of groups.
    Verify {
        /// One of: exhaustive, identities, thm-3-2, thm-4-10, thm-4-11,
        /// thm-5-2.
        check: String,
        /// Fleet name; each check has a sensible default.
        #[arg(long, value_name = "NAME")]
        fleet: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Validate and build a group from --spec or --preset.
    Build,
    /// Report order, exponents, subgroup sizes and specialness.
    Info,
}

#[derive(Subcommand, Debug)]
pub enum WordsCmd {
    /// Exact image of a word on the selected group.
    Image {
        #[arg(long, value_name = "STR")]
        word: String,
    },
    /// Canonical form of a word over the selected group.
    Canon {
        #[arg(long, value_name = "STR")]
        word: String,
    },
    /// Image of every canonical word for the selected group.
    Catalog,
}

/// Configure the global worker pool; call once at process start.
pub fn init_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // A second initialization in the same process is fine to ignore:
        // the pool is already running.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Run a parsed command line; returns the report and the process exit
/// code. Usage and budget errors come back as `Err`.
pub fn execute(cli: &Cli) -> Result<(RunReport, i32)> {
    let started = Instant::now();
    let eval_budget = cli.budget.unwrap_or(words::DEFAULT_EVAL_BUDGET);
    let node_budget = cli.budget.unwrap_or(aut::DEFAULT_NODE_BUDGET);

    let (command, inputs, results, exit) = match &cli.command {
        Command::Group { action } => {
            let (source, group) = selected_group(cli)?;
            let name = match action {
                GroupCmd::Build => "group build",
                GroupCmd::Info => "group info",
            };
            (name.to_string(), source, group_info(&group), exit_code::PASS)
        }
        Command::Words { action } => {
            let (source, group) = selected_group(cli)?;
            match action {
                WordsCmd::Image { word } => {
                    let w = parse_word(word)?;
                    let set = words::image(&w, &group, eval_budget)?;
                    (
                        "words image".to_string(),
                        merge(source, json!({"word": word})),
                        json!({
                            "word": w.print(),
                            "size": set.len(),
                            "image_hex": set.to_hex(),
                        }),
                        exit_code::PASS,
                    )
                }
                WordsCmd::Canon { word } => {
                    let w = parse_word(word)?;
                    let canon = words::canonicalize(&w, &group, eval_budget)?;
                    (
                        "words canon".to_string(),
                        merge(source, json!({"word": word})),
                        json!({
                            "word": w.print(),
                            "m": canon.m,
                            "n": canon.n,
                            "canonical": canon.to_word().print(),
                        }),
                        exit_code::PASS,
                    )
                }
                WordsCmd::Catalog => {
                    let catalog = words::word_images_catalog(&group, eval_budget)?;
                    let members: Vec<Value> = catalog
                        .iter()
                        .map(|entry| {
                            json!({
                                "m": entry.word.m,
                                "n": entry.word.n,
                                "image_hex": entry.image.to_hex(),
                                "size": entry.image.len(),
                            })
                        })
                        .collect();
                    (
                        "words catalog".to_string(),
                        source,
                        json!({
                            "members": members,
                            "distinct_images": words::distinct_images(&catalog),
                        }),
                        exit_code::PASS,
                    )
                }
            }
        }
        Command::Verify { check, fleet } => {
            let fleet_name = fleet.clone().unwrap_or_else(|| default_fleet(check));
            let members = preset::fleet_members(&fleet_name)?;
            let rows = run_verify(check, members, cli.seed, eval_budget, node_budget)?;
            let passed = rows.iter().filter(|r| r.status == "pass").count();
            let failed = rows.iter().filter(|r| r.status == "fail").count();
            let skipped = rows.iter().filter(|r| r.status == "skip").count();
            let rows_json: Vec<Value> = rows
                .iter()
                .map(|r| json!({"name": r.name, "status": r.status, "details": r.details}))
                .collect();
            let exit = if failed > 0 {
                exit_code::VERIFICATION_FAILURE
            } else {
                exit_code::PASS
            };
            (
                format!("verify {check}"),
                json!({"fleet": fleet_name, "budget": cli.budget}),
                json!({
                    "checks": rows_json,
                    "passed": passed,
                    "failed": failed,
                    "skipped": skipped,
                }),
                exit,
            )
        }
    };

    // The worker count is deliberately not echoed into the report: output
    // is independent of it, and reports must compare byte-equal across
    // worker counts.
    Ok((
        RunReport {
            command,
            inputs,
            results,
            seed: cli.seed,
            timing_ms: started.elapsed().as_secs_f64() * 1e3,
        },
        exit,
    ))
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Some(ao), Some(bo)) = (a.as_object_mut(), b.as_object()) {
        for (k, v) in bo {
            ao.insert(k.clone(), v.clone());
        }
    }
    a
}

fn selected_group(cli: &Cli) -> Result<(Value, Group)> {
    match (&cli.preset, &cli.spec) {
        (Some(name), None) => Ok((json!({"preset": name}), preset::resolve(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            let spec = GroupSpec::from_json(&text)?;
            Ok((
                json!({"spec": path.display().to_string()}),
                build_group(spec)?,
            ))
        }
        (Some(_), Some(_)) => Err(Error::InvalidSpec(
            "give either --preset or --spec, not both".into(),
        )),
        (None, None) => Err(Error::InvalidSpec(
            "select a group with --preset or --spec".into(),
        )),
    }
}

fn group_info(group: &Group) -> Value {
    let ex = group.exponents();
    let spec = group.spec();
    json!({
        "kind": spec.kind_name(),
        "order": group.order(),
        "p": if spec.p() == 0 { Value::Null } else { json!(spec.p()) },
        "n": spec.dim_v(),
        "m": spec.dim_s(),
        "exponents": {"e": ex.e, "e_prime": ex.e_prime, "f": ex.f},
        "center_size": group.center().len(),
        "derived_size": group.derived_subgroup().len(),
        "frattini_size": group.frattini().len(),
        "is_special_p_group": group.is_special_p_group(),
    })
}

fn default_fleet(check: &str) -> String {
    match check {
        "thm-3-2" => "abelian-small",
        "thm-4-10" | "thm-4-11" => "extraspecial-small",
        _ => "class2-small",
    }
    .to_string()
}

struct CheckRow {
    name: String,
    status: &'static str,
    details: Value,
}

impl CheckRow {
    fn pass(name: String, details: Value) -> Self {
        CheckRow {
            name,
            status: "pass",
            details,
        }
    }

    fn fail(name: String, details: Value) -> Self {
        CheckRow {
            name,
            status: "fail",
            details,
        }
    }

    fn skip(name: String, reason: String) -> Self {
        CheckRow {
            name,
            status: "skip",
            details: json!({"reason": reason}),
        }
    }
}

fn run_verify(
    check: &str,
    members: &[&str],
    seed: u64,
    eval_budget: u64,
    node_budget: u64,
) -> Result<Vec<CheckRow>> {
    match check {
        "exhaustive" => verify_exhaustive(members, seed, eval_budget),
        "identities" => verify_identities(members, seed),
        "thm-3-2" => verify_impostor_existence(members, node_budget, eval_budget),
        "thm-4-10" => verify_three_images(members, eval_budget),
        "thm-4-11" => verify_census(members),
        "thm-5-2" => verify_detector(members, eval_budget),
        other => Err(Error::InvalidSpec(format!("unknown check {other:?}"))),
    }
}

/// Normalization soundness plus the image-shape invariants, on seeded
/// random words.
fn verify_exhaustive(members: &[&str], seed: u64, budget: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in members {
        let row_name = format!("exhaustive/{name}");
        let group = preset::resolve(name)?;
        let sample = words::random_words(seed, 50, 20);
        let ex = group.exponents();
        let canon_set = words::exhaustive_set(ex.e, ex.e_prime, ex.f);
        let mut failures = Vec::new();
        let mut outcome = Ok(());
        for word in &sample {
            let attempt = (|| -> Result<()> {
                let canon = words::canonicalize(word, &group, budget)?;
                let im_word = words::image(word, &group, budget)?;
                let im_canon = words::image(&canon.to_word(), &group, budget)?;
                if im_word != im_canon {
                    failures.push(json!({
                        "word": word.print(),
                        "canonical": canon.to_word().print(),
                        "word_image_size": im_word.len(),
                        "canonical_image_size": im_canon.len(),
                    }));
                    return Ok(());
                }
                if !canon_set.contains(&canon) {
                    failures.push(json!({
                        "word": word.print(),
                        "issue": "canonical form outside the exhaustive set",
                    }));
                    return Ok(());
                }
                // Images are closed under inverses and powers, and
                // nonsurjective images stay inside the Frattini subgroup.
                for r in im_word.iter() {
                    let e = group.unrank(r)?;
                    if !im_word.contains(group.rank(&group.inv_unchecked(&e))) {
                        failures.push(json!({
                            "word": word.print(),
                            "issue": "image not closed under inverses",
                        }));
                        return Ok(());
                    }
                }
                if im_word.len() < group.order() && !im_word.is_subset_of(group.frattini()) {
                    failures.push(json!({
                        "word": word.print(),
                        "issue": "nonsurjective image escapes the Frattini subgroup",
                    }));
                }
                Ok(())
            })();
            if let Err(err) = attempt {
                outcome = Err(err);
                break;
            }
        }
        match outcome {
            Err(Error::BudgetExceeded { what, .. }) => {
                rows.push(CheckRow::skip(row_name, format!("budget exceeded: {what}")));
            }
            Err(err) => return Err(err),
            Ok(()) if failures.is_empty() => {
                rows.push(CheckRow::pass(
                    row_name,
                    json!({"words": sample.len(), "order": group.order()}),
                ));
            }
            Ok(()) => {
                rows.push(CheckRow::fail(row_name, json!({"failures": failures})));
            }
        }
    }
    Ok(rows)
}

/// Class-2 commutator and power identities on random tuples.
fn verify_identities(members: &[&str], seed: u64) -> Result<Vec<CheckRow>> {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for name in members {
        let g = preset::resolve(name)?;
        let e = g.exponents().e as i64;
        let span = 2 * e * e;
        let mut failure = None;
        for _ in 0..1000 {
            let a = g.unrank(rng.gen_range(0..g.order()))?;
            let b = g.unrank(rng.gen_range(0..g.order()))?;
            let n = rng.gen_range(-span..=span);
            let c = g.commutator_unchecked(&a, &b);
            let cn = g.pow_unchecked(&c, n);
            let power_moves = cn == g.commutator_unchecked(&g.pow_unchecked(&a, n), &b)
                && cn == g.commutator_unchecked(&a, &g.pow_unchecked(&b, n));

            let (i, j, k, l) = (
                rng.gen_range(-8i64..=8),
                rng.gen_range(-8i64..=8),
                rng.gen_range(-8i64..=8),
                rng.gen_range(-8i64..=8),
            );
            let mixed = g.commutator_unchecked(
                &g.mul_unchecked(&g.pow_unchecked(&a, i), &g.pow_unchecked(&b, j)),
                &g.mul_unchecked(&g.pow_unchecked(&a, k), &g.pow_unchecked(&b, l)),
            ) == g.pow_unchecked(&c, i * l - j * k);

            let product_power = g.pow_unchecked(&g.mul_unchecked(&a, &b), n)
                == g.mul_unchecked(
                    &g.mul_unchecked(&g.pow_unchecked(&a, n), &g.pow_unchecked(&b, n)),
                    &g.pow_unchecked(&g.commutator_unchecked(&b, &a), n * (n - 1) / 2),
                );

            if !(power_moves && mixed && product_power) {
                failure = Some(json!({
                    "a": g.rank(&a),
                    "b": g.rank(&b),
                    "n": n,
                    "power_moves": power_moves,
                    "mixed_commutator": mixed,
                    "product_power": product_power,
                }));
                break;
            }
        }
        let row_name = format!("identities/{name}");
        match failure {
            None => rows.push(CheckRow::pass(row_name, json!({"tuples": 1000}))),
            Some(payload) => rows.push(CheckRow::fail(row_name, payload)),
        }
    }
    Ok(rows)
}

/// Impostor existence: expected false exactly for abelian groups of prime
/// exponent.
fn verify_impostor_existence(
    members: &[&str],
    node_budget: u64,
    eval_budget: u64,
) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in members {
        let row_name = format!("thm-3-2/{name}");
        let g = preset::resolve(name)?;
        let expected = if g.is_abelian_kind() {
            !crate::fp::is_prime(g.exponents().e)
        } else {
            true
        };
        match aut::has_impostor(&g, node_budget, eval_budget) {
            Ok(got) if got == expected => rows.push(CheckRow::pass(
                row_name,
                json!({"expected": expected, "got": got}),
            )),
            Ok(got) => rows.push(CheckRow::fail(
                row_name,
                json!({"expected": expected, "got": got}),
            )),
            Err(Error::BudgetExceeded { what, .. }) => {
                rows.push(CheckRow::skip(row_name, format!("budget exceeded: {what}")))
            }
            Err(err) => return Err(err),
        }
    }
    Ok(rows)
}

/// The catalog of an extraspecial group holds exactly three images:
/// {1}, the center, and the whole group.
fn verify_three_images(members: &[&str], budget: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in members {
        let row_name = format!("thm-4-10/{name}");
        if preset::extraspecial_kind(name).is_err() {
            rows.push(CheckRow::skip(row_name, "not an extraspecial preset".into()));
            continue;
        }
        let g = preset::resolve(name)?;
        let catalog = words::word_images_catalog(&g, budget)?;
        let got: std::collections::BTreeSet<String> =
            catalog.iter().map(|e| e.image.to_hex()).collect();
        let mut one = ElementSet::empty(g.order());
        one.insert(g.rank(&g.identity()));
        let full = {
            let mut s = ElementSet::empty(g.order());
            for r in 0..g.order() {
                s.insert(r);
            }
            s
        };
        let expected: std::collections::BTreeSet<String> =
            [one.to_hex(), g.center().to_hex(), full.to_hex()]
                .into_iter()
                .collect();
        if got == expected {
            rows.push(CheckRow::pass(
                row_name,
                json!({"distinct_images": 3, "catalog_size": catalog.len()}),
            ));
        } else {
            rows.push(CheckRow::fail(
                row_name,
                json!({"distinct_images": got.len()}),
            ));
        }
    }
    Ok(rows)
}

/// Census counts against materialized candidate enumeration.
fn verify_census(members: &[&str]) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in members {
        let row_name = format!("thm-4-11/{name}");
        let kind = match preset::extraspecial_kind(name) {
            Ok(kind) => kind,
            Err(_) => {
                rows.push(CheckRow::skip(row_name, "not an extraspecial preset".into()));
                continue;
            }
        };
        let census = extraspecial::census(kind);
        let g = kind.build()?;
        let candidates = extraspecial::enumerate_candidates(kind, &g)?;
        let realized = candidates.iter().filter(|c| c.realized.is_some()).count() as u64;
        let impostors = candidates.len() as u64 - realized;
        let ok = candidates.len() as u64 == census.candidates
            && realized == census.word_images
            && impostors == census.impostors;
        let details = json!({
            "census": census,
            "materialized_candidates": candidates.len(),
            "materialized_realized": realized,
            "materialized_impostors": impostors,
        });
        rows.push(if ok {
            CheckRow::pass(row_name, details)
        } else {
            CheckRow::fail(row_name, details)
        });
    }
    Ok(rows)
}

/// Three-image detection implies specialness; the catalog sizes match the
/// known shapes of the fleet.
fn verify_detector(members: &[&str], budget: u64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for name in members {
        let row_name = format!("thm-5-2/{name}");
        let g = preset::resolve(name)?;
        if g.is_abelian_kind() {
            rows.push(CheckRow::skip(row_name, "detector needs a nonabelian group".into()));
            continue;
        }
        // detect_special_from_images errors out if a three-image group
        // fails the subgroup-coincidence check.
        let detected = words::detect_special_from_images(&g, budget)?;
        let expected = preset::extraspecial_kind(name).is_ok();
        let ok = if expected { detected } else { !detected };
        let details = json!({
            "detected": detected,
            "is_special_p_group": g.is_special_p_group(),
        });
        rows.push(if ok {
            CheckRow::pass(row_name, details)
        } else {
            CheckRow::fail(row_name, details)
        });
    }
    Ok(rows)
}
