//! catweight: simple modules versus weights for finite category algebras.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use catweight::cocycle::{self, RawCocycle, TwoCocycle};
use catweight::corpus;
use catweight::error::Error;
use catweight::ffalg::module::ModuleRep;
use catweight::fincat::{FinCategory, RawCategory};
use catweight::porbit;
use catweight::verify::{twisted_equivalence_check, Instance, DEFAULT_AUT_CAP};

const EXIT_OK: u8 = 0;
const EXIT_ENGINE: u8 = 1;
const EXIT_OBSTRUCTION: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;

#[derive(Parser)]
#[command(
    name = "catweight",
    version,
    about = "Simple modules versus weights for finite category algebras",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Awc,
    Gawc,
    Bgawc,
    Aut,
    Full,
}

#[derive(Args)]
struct Common {
    /// Path to a category JSON file, or a bundled corpus name.
    category: String,
    /// The prime p.
    #[arg(long, short)]
    prime: u64,
    /// Optional 2-cocycle JSON file.
    #[arg(long)]
    cocycle: Option<PathBuf>,
    /// Randomisation seed (CATWEIGHT_SEED is the fallback).
    #[arg(long)]
    seed: Option<u64>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    emit: Emit,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a composition-table category file.
    Validate {
        category: String,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Build and emit the p-transporter category T_C.
    Transporter(Common),
    /// Build and emit the p-orbit category O_C.
    Orbit(Common),
    /// List the simple kC-modules over the splitting field.
    Simples(Common),
    /// Enumerate the weight catalog of kO_C.
    Weights {
        #[command(flatten)]
        common: Common,
        /// Restrict the catalog to one block (EI-categories only).
        #[arg(long)]
        block: Option<usize>,
    },
    /// List the blocks of kC with their Galois data.
    Blocks(Common),
    /// Decide the equivariant-bijection conjecture modes on this instance.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "full")]
        mode: Mode,
        /// Restrict blockwise modes to one block.
        #[arg(long)]
        block: Option<usize>,
    },
    /// Write the bundled corpus category files into a directory.
    Corpus {
        #[arg(long, default_value = "corpus")]
        dir: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage = e.use_stderr();
            let _ = e.print();
            return if is_usage {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_OK)
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            let code = match err {
                Error::InvalidCategory(_)
                | Error::InvalidCocycle(_)
                | Error::BadInput(_)
                | Error::Io(_)
                | Error::Json(_)
                | Error::NotPrime(_) => EXIT_INPUT,
                _ => EXIT_ENGINE,
            };
            ExitCode::from(code)
        }
    }
}

fn seed_of(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| {
            std::env::var("CATWEIGHT_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0xCA7)
}

fn load_category(spec: &str) -> Result<FinCategory, Error> {
    let raw: RawCategory = if Path::new(spec).exists() {
        serde_json::from_str(&std::fs::read_to_string(spec)?)?
    } else if let Some(r) = corpus::raw_by_name(spec) {
        r
    } else {
        return Err(Error::BadInput(format!(
            "no such file or bundled corpus entry: {spec}"
        )));
    };
    FinCategory::from_raw(&raw)
}

fn load_cocycle(cat: &FinCategory, path: &Path, prime: u64) -> Result<TwoCocycle, Error> {
    let raw: RawCocycle = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if raw.p != prime {
        return Err(Error::BadInput(format!(
            "cocycle prime {} does not match --prime {}",
            raw.p, prime
        )));
    }
    cocycle::validate_cocycle_err(cat, &raw)
}

fn emit<T: Serialize>(em: Emit, value: &T, text: String) -> Result<(), Error> {
    match em {
        Emit::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Emit::Text => println!("{text}"),
    }
    Ok(())
}

fn require_prime(p: u64) -> Result<(), Error> {
    if !catweight::ffalg::field::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

#[derive(Serialize)]
struct SimpleInfo {
    dim: usize,
    pair_idempotent: String,
    block: usize,
}

#[derive(Serialize)]
struct SimplesReport {
    category: String,
    prime: u64,
    splitting_degree: u32,
    field_order: u64,
    count: usize,
    simples: Vec<SimpleInfo>,
    galois_orbits: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct WeightInfo {
    e: String,
    p_subgroup: Vec<String>,
    dim: usize,
    block: Option<usize>,
}

#[derive(Serialize)]
struct WeightsReport {
    category: String,
    prime: u64,
    splitting_degree: u32,
    count: usize,
    weights: Vec<WeightInfo>,
    galois_orbits: Vec<Vec<usize>>,
    aut_orbits: Option<Vec<Vec<usize>>>,
}

#[derive(Serialize)]
struct BlockInfo {
    index: usize,
    support: Vec<String>,
    simples: usize,
    weights: Option<usize>,
    frobenius_image: usize,
}

#[derive(Serialize)]
struct BlocksReport {
    category: String,
    prime: u64,
    splitting_degree: u32,
    count: usize,
    blocks: Vec<BlockInfo>,
}

#[derive(Serialize)]
struct VerifyReport {
    category: String,
    prime: u64,
    seed: u64,
    splitting_degree: u32,
    counts: (usize, usize),
    modes: Vec<catweight::verify::ModeReport>,
    assembly_sizes: Vec<(String, usize)>,
    /// Explicit Sigma ∘ Pi pairing from the main assembly: simple index ->
    /// weight entry index.
    pairing: Option<Vec<usize>>,
    verdict: bool,
    diagnostics: Vec<String>,
}

/// Orbits of the permutation group generated by the given permutations.
fn orbits_of_perms(n: usize, perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = vec![];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < orbit.len() {
            for p in perms {
                let j = p[orbit[k]];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(j);
                }
            }
            k += 1;
        }
        orbit.sort();
        out.push(orbit);
    }
    out
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { category, emit: em } => {
            let cat = load_category(&category)?;
            #[derive(Serialize)]
            struct V {
                objects: usize,
                morphisms: usize,
                idempotents: usize,
                ei: bool,
            }
            let v = V {
                objects: cat.n_objects(),
                morphisms: cat.n_morphisms(),
                idempotents: cat.idempotent_endos().len(),
                ei: cat.is_ei(),
            };
            emit(
                em,
                &v,
                format!(
                    "valid category: {} object(s), {} morphism(s), {} idempotent(s), EI: {}",
                    v.objects, v.morphisms, v.idempotents, v.ei
                ),
            )?;
            Ok(EXIT_OK)
        }
        Command::Transporter(c) => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let t = porbit::build_transporter(&cat, c.prime)?;
            let raw = t.cat.to_raw(Some(t.metadata.clone()));
            emit(
                c.emit,
                &raw,
                format!(
                    "T_C at p={}: {} objects, {} morphisms",
                    c.prime,
                    t.cat.n_objects(),
                    t.cat.n_morphisms()
                ),
            )?;
            Ok(EXIT_OK)
        }
        Command::Orbit(c) => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let t = porbit::build_transporter(&cat, c.prime)?;
            let o = porbit::build_orbit(&t, &cat)?;
            let raw = o.cat.to_raw(Some(o.metadata.clone()));
            emit(
                c.emit,
                &raw,
                format!(
                    "O_C at p={}: {} objects, {} morphisms",
                    c.prime,
                    o.cat.n_objects(),
                    o.cat.n_morphisms()
                ),
            )?;
            Ok(EXIT_OK)
        }
        Command::Simples(c) => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let seed = seed_of(c.seed);
            if let Some(path) = c.cocycle.clone() {
                let alpha = load_cocycle(&cat, &path, c.prime)?;
                return twisted_simples(&cat, &alpha, &c, seed);
            }
            let inst = Instance::build(cat, c.prime, seed, DEFAULT_AUT_CAP)?;
            let report = SimplesReport {
                category: c.category.clone(),
                prime: c.prime,
                splitting_degree: inst.m,
                field_order: inst.field.q(),
                count: inst.kc_simples.len(),
                simples: (0..inst.kc_simples.len())
                    .map(|i| {
                        let pe = &inst.pairs[inst.pi_map[i]];
                        SimpleInfo {
                            dim: inst.kc_simples[i].dim,
                            pair_idempotent: inst.cat.mor_labels
                                [inst.reps.idems[pe.e_idx].morph]
                                .clone(),
                            block: pe.block.unwrap_or(0),
                        }
                    })
                    .collect(),
                galois_orbits: orbits_of_perms(inst.kc_simples.len(), &inst.galois_simples),
            };
            let text = format!(
                "{} simple kC-module(s) over F_{} (degree {})",
                report.count, report.field_order, report.splitting_degree
            );
            emit(c.emit, &report, text)?;
            Ok(EXIT_OK)
        }
        Command::Weights { common: c, block } => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let seed = seed_of(c.seed);
            if block.is_some() && !cat.is_ei() {
                return Err(Error::NotEI);
            }
            if let Some(path) = c.cocycle.clone() {
                let alpha = load_cocycle(&cat, &path, c.prime)?;
                return twisted_weights(&cat, &alpha, &c, seed);
            }
            let inst = Instance::build(cat, c.prime, seed, DEFAULT_AUT_CAP)?;
            let entries: Vec<&catweight::weights::WeightEntry> = inst
                .weights
                .entries
                .iter()
                .filter(|w| block.is_none() || w.block == block)
                .collect();
            let report = WeightsReport {
                category: c.category.clone(),
                prime: c.prime,
                splitting_degree: inst.m,
                count: entries.len(),
                weights: entries
                    .iter()
                    .map(|w| WeightInfo {
                        e: inst.cat.mor_labels[inst.reps.idems[w.e_idx].morph].clone(),
                        p_subgroup: inst.reps.psubs[w.e_idx][w.p_idx]
                            .iter()
                            .map(|&m| inst.cat.mor_labels[m].clone())
                            .collect(),
                        dim: w.dim,
                        block: w.block,
                    })
                    .collect(),
                galois_orbits: orbits_of_perms(inst.weights.len(), &inst.galois_weights),
                aut_orbits: inst
                    .auts
                    .as_ref()
                    .map(|a| orbits_of_perms(inst.weights.len(), &a.on_weights)),
            };
            let text = format!("{} weight(s) at p={}", report.count, c.prime);
            emit(c.emit, &report, text)?;
            Ok(EXIT_OK)
        }
        Command::Blocks(c) => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let seed = seed_of(c.seed);
            let inst = Instance::build(cat, c.prime, seed, DEFAULT_AUT_CAP)?;
            let report = BlocksReport {
                category: c.category.clone(),
                prime: c.prime,
                splitting_degree: inst.m,
                count: inst.blocks.len(),
                blocks: inst
                    .blocks
                    .iter()
                    .enumerate()
                    .map(|(bi, b)| {
                        let twisted = inst.kc.frobenius_vec(&b.coeffs, 1);
                        let image = inst
                            .blocks
                            .iter()
                            .position(|c| c.coeffs == twisted)
                            .unwrap_or(bi);
                        BlockInfo {
                            index: bi,
                            support: b
                                .coeffs
                                .iter()
                                .enumerate()
                                .filter(|(_, &c)| c != 0)
                                .map(|(i, _)| inst.kc.labels[i].clone())
                                .collect(),
                            simples: inst.block_simples(bi).len(),
                            weights: inst.is_ei.then(|| inst.block_weights(bi).len()),
                            frobenius_image: image,
                        }
                    })
                    .collect(),
            };
            let text = format!("{} block(s) of kC at p={}", report.count, c.prime);
            emit(c.emit, &report, text)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            common: c,
            mode,
            block,
        } => {
            let cat = load_category(&c.category)?;
            require_prime(c.prime)?;
            let seed = seed_of(c.seed);
            if let Some(path) = c.cocycle.clone() {
                let alpha = load_cocycle(&cat, &path, c.prime)?;
                let report = twisted_equivalence_check(&cat, &alpha, seed, DEFAULT_AUT_CAP)?;
                let verdict = report.verdict;
                emit(
                    c.emit,
                    &report,
                    format!(
                        "twisted equivalence: dim kC^e_R = {} = |Mor C| = {}, verdict {}",
                        report.dim_khat_er, report.mor_c, verdict
                    ),
                )?;
                return Ok(if verdict { EXIT_OK } else { EXIT_OBSTRUCTION });
            }
            let inst = Instance::build(cat, c.prime, seed, DEFAULT_AUT_CAP)?;
            let mut modes = vec![];
            let mut diagnostics = vec![];
            let mut assembly_sizes = vec![];
            let mut verdict = true;
            let want = |m: Mode| mode == m || mode == Mode::Full;
            if want(Mode::Awc) {
                let r = inst.check_awc();
                verdict &= r.verdict;
                modes.push(r);
            }
            if want(Mode::Gawc) {
                let r = inst.check_gawc();
                verdict &= r.verdict;
                modes.push(r);
            }
            if want(Mode::Bgawc) {
                match inst.check_bgawc(block) {
                    Ok(r) => {
                        verdict &= r.verdict;
                        modes.push(r);
                    }
                    Err(Error::NotEI) if mode == Mode::Full => {
                        diagnostics.push("bgawc skipped: category is not EI".into());
                    }
                    Err(e) => return Err(e),
                }
            }
            if want(Mode::Aut) {
                match inst.check_aut() {
                    Ok(r) => {
                        verdict &= r.verdict;
                        modes.push(r);
                    }
                    Err(Error::GroupUnavailable) if mode == Mode::Full => {
                        diagnostics.push("aut skipped: automorphism enumeration capped".into());
                    }
                    Err(e) => return Err(e),
                }
            }
            let mut pairing = None;
            if mode == Mode::Full {
                match inst.assemble_main(None) {
                    Ok(asm) => {
                        pairing = Some(asm.pairing.clone());
                        assembly_sizes.push(("main".into(), asm.left.len()))
                    }
                    Err(Error::GroupLevelObstruction { idem, detail }) => {
                        verdict = false;
                        diagnostics.push(format!("group-level obstruction at {idem}: {detail}"));
                    }
                    Err(e) => return Err(e),
                }
                if inst.is_ei {
                    for bi in 0..inst.blocks.len() {
                        if block.is_some_and(|b| b != bi) {
                            continue;
                        }
                        match inst.assemble_main(Some(bi)) {
                            Ok(asm) => {
                                assembly_sizes.push((format!("main2 block {bi}"), asm.left.len()))
                            }
                            Err(Error::GroupLevelObstruction { idem, detail }) => {
                                verdict = false;
                                diagnostics.push(format!(
                                    "block {bi}: group-level obstruction at {idem}: {detail}"
                                ));
                            }
                            Err(e) => return Err(e),
                        }
                    }
                }
                if inst.auts.is_some() {
                    match inst.assemble_main3(1, None, DEFAULT_AUT_CAP) {
                        Ok(asm) => assembly_sizes.push(("main3".into(), asm.left.len())),
                        Err(
                            e @ (Error::ConditionsIncompatible(_)
                            | Error::GroupLevelObstruction { .. }
                            | Error::RepresentativeNotEquivariant(_)),
                        ) => {
                            verdict = false;
                            diagnostics.push(format!("main3: {e}"));
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
            let report = VerifyReport {
                category: c.category.clone(),
                prime: c.prime,
                seed,
                splitting_degree: inst.m,
                counts: (inst.kc_simples.len(), inst.weights.len()),
                modes,
                assembly_sizes,
                pairing,
                verdict,
                diagnostics,
            };
            let text = format!(
                "verdict: {} (|S(kC)| = {}, |W(kO_C)| = {})",
                if report.verdict { "exists" } else { "obstructed" },
                report.counts.0,
                report.counts.1
            );
            emit(c.emit, &report, text)?;
            Ok(if report.verdict {
                EXIT_OK
            } else {
                EXIT_OBSTRUCTION
            })
        }
        Command::Corpus { dir } => {
            std::fs::create_dir_all(&dir)?;
            for name in corpus::NAMES {
                let raw = corpus::raw_by_name(name).expect("bundled");
                let path = dir.join(format!("{name}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(&raw)?)?;
            }
            let cocycle_path = dir.join("twisted_c2_p5.cocycle.json");
            std::fs::write(
                &cocycle_path,
                serde_json::to_string_pretty(&corpus::twisted_c2_p5_cocycle())?,
            )?;
            println!(
                "wrote {} categories and 1 cocycle to {}",
                corpus::NAMES.len(),
                dir.display()
            );
            Ok(EXIT_OK)
        }
    }
}

/// Simples of the twisted algebra k_alpha C, computed directly over the
/// extension category's splitting field.
fn twisted_simples(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    c: &Common,
    seed: u64,
) -> Result<u8, Error> {
    use rand_chacha::ChaCha8Rng;
    use rand_core::SeedableRng;
    let ext = cocycle::build_extension(cat, alpha)?;
    let hat = Instance::build(ext.ext.clone(), c.prime, seed, DEFAULT_AUT_CAP)?;
    let kalpha = cocycle::twisted_algebra(cat, alpha, hat.field.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reg = ModuleRep::regular(&kalpha);
    let simples: Vec<ModuleRep> =
        catweight::ffalg::module::composition_factors(&reg, &kalpha, &mut rng, hat.budget)?
            .into_iter()
            .map(|(s, _)| s)
            .collect();
    let mut perms = vec![];
    for j in 0..hat.m {
        perms.push(catweight::grouprep::frobenius_perm(
            &simples, &kalpha, j, &mut rng,
        )?);
    }
    #[derive(Serialize)]
    struct T {
        category: String,
        prime: u64,
        twisted: bool,
        splitting_degree: u32,
        count: usize,
        dims: Vec<usize>,
        galois_orbits: Vec<Vec<usize>>,
    }
    let report = T {
        category: c.category.clone(),
        prime: c.prime,
        twisted: true,
        splitting_degree: hat.m,
        count: simples.len(),
        dims: simples.iter().map(|s| s.dim).collect(),
        galois_orbits: orbits_of_perms(simples.len(), &perms),
    };
    emit(
        c.emit,
        &report,
        format!("{} simple twisted kC-module(s)", report.count),
    )?;
    Ok(EXIT_OK)
}

/// Twisted weights, reduced through the extension category: the weight
/// catalog of the extension restricted to the blocks of its e_R part.
fn twisted_weights(
    cat: &FinCategory,
    alpha: &TwoCocycle,
    c: &Common,
    seed: u64,
) -> Result<u8, Error> {
    // Restricting the extension catalog to the e_R blocks uses the b-weight
    // partition, which exists for EI-categories only.
    if !cat.is_ei() {
        return Err(Error::NotEI);
    }
    let ext = cocycle::build_extension(cat, alpha)?;
    let hat = Instance::build(ext.ext.clone(), c.prime, seed, DEFAULT_AUT_CAP)?;
    let e_r = cocycle::e_r_idempotent(cat, alpha, &ext, &hat.kc);
    let er_blocks: Vec<usize> = (0..hat.blocks.len())
        .filter(|&bi| hat.kc.mul_vec(&hat.blocks[bi].coeffs, &e_r) == hat.blocks[bi].coeffs)
        .collect();
    let entries: Vec<&catweight::weights::WeightEntry> = hat
        .weights
        .entries
        .iter()
        .filter(|w| w.block.map(|b| er_blocks.contains(&b)).unwrap_or(false))
        .collect();
    #[derive(Serialize)]
    struct T {
        category: String,
        prime: u64,
        twisted: bool,
        via_extension: bool,
        splitting_degree: u32,
        count: usize,
        weights: Vec<WeightInfo>,
    }
    let report = T {
        category: c.category.clone(),
        prime: c.prime,
        twisted: true,
        via_extension: true,
        splitting_degree: hat.m,
        count: entries.len(),
        weights: entries
            .iter()
            .map(|w| WeightInfo {
                e: hat.cat.mor_labels[hat.reps.idems[w.e_idx].morph].clone(),
                p_subgroup: hat.reps.psubs[w.e_idx][w.p_idx]
                    .iter()
                    .map(|&m| hat.cat.mor_labels[m].clone())
                    .collect(),
                dim: w.dim,
                block: w.block,
            })
            .collect(),
    };
    emit(
        c.emit,
        &report,
        format!(
            "{} twisted weight(s) via the extension category",
            report.count
        ),
    )?;
    Ok(EXIT_OK)
}
