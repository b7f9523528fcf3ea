//! Command line front end: encode / corrupt / decode workflows over bit
//! files, parameter validation, block classification, and Monte-Carlo
//! experiment campaigns.
//!
//! Exit codes: 0 success, 1 decode failure, 2 usage or configuration error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use aldc::channels::{self, EditOp, EditScript};
use aldc::compiler::InsdelPaldc;
use aldc::error::Error;
use aldc::harness::{
    aggregate_table, bitfile_decode, bitfile_encode, csv_string, run_experiment, CodeId,
    ExperimentConfig,
};
use aldc::oracle::CorruptedOracle;
use aldc::paldc::{paldc_dec, paldc_enc, paldc_gen, SecretKey};
use aldc::resource::{raldc_dec, raldc_enc_with_seed, InsdelRaldc};
use aldc::seed;

#[derive(Parser)]
#[command(name = "aldc", about = "Amortized locally decodable codes workbench")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct ConfigOpts {
    /// Experiment/config file (flat key = value).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code id when no config file is given: paldc, insdel_paldc,
    /// raldc_hamming, raldc_insdel.
    #[arg(long)]
    code: Option<String>,
}

impl ConfigOpts {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        match (&self.config, &self.code) {
            (Some(path), _) => {
                let text = fs::read_to_string(path)?;
                ExperimentConfig::parse(&text)
            }
            (None, Some(code)) => Ok(ExperimentConfig::default_for(CodeId::parse(code)?)),
            (None, None) => Err(Error::InvalidInput("need --config or --code".into())),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the configuration and print the derived constants.
    Validate {
        #[command(flatten)]
        cfg: ConfigOpts,
    },
    /// Encode a message bit file into a codeword bit file.
    Encode {
        #[command(flatten)]
        cfg: ConfigOpts,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Where to store the secret key (private-key codes).
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Apply a named corruption strategy to a codeword bit file.
    Corrupt {
        #[command(flatten)]
        cfg: ConfigOpts,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the witnessing edit script here.
        #[arg(long)]
        script: Option<PathBuf>,
        #[arg(long)]
        strategy: String,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Decode a (possibly corrupted) codeword bit file.
    Decode {
        #[command(flatten)]
        cfg: ConfigOpts,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Secret key file written by encode (private-key codes).
        #[arg(long)]
        key: Option<PathBuf>,
        /// Message interval L:R (default: the whole message).
        #[arg(long)]
        range: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Classify blocks of a corrupted codeword against the clean one.
    Classify {
        #[command(flatten)]
        cfg: ConfigOpts,
        #[arg(long)]
        clean: PathBuf,
        #[arg(long)]
        corrupted: PathBuf,
        #[arg(long)]
        script: PathBuf,
    },
    /// Run a sweep of seeded trials and write a CSV.
    Experiment {
        #[command(flatten)]
        cfg: ConfigOpts,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Override the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the trial count of every sweep row.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the interval size of every sweep row.
        #[arg(long)]
        kappa: Option<usize>,
    },
}

fn parse_range(range: &Option<String>, k: usize) -> Result<(usize, usize), Error> {
    match range {
        None => Ok((1, k)),
        Some(text) => {
            let bad = || Error::InvalidInput(format!("bad range {text:?}, expected L:R"));
            let (l, r) = text.split_once(':').ok_or_else(bad)?;
            let l: usize = l.parse().map_err(|_| bad())?;
            let r: usize = r.parse().map_err(|_| bad())?;
            if l < 1 || r < l || r > k {
                return Err(Error::InvalidInput(format!(
                    "range [{l},{r}] outside the {k}-bit message"
                )));
            }
            Ok((l, r))
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Validate { cfg } => {
            let cfg = cfg.load()?;
            match cfg.validate() {
                Ok(summary) => {
                    print!("{summary}");
                    Ok(())
                }
                Err(violations) => Err(Error::InvalidParams(violations)),
            }
        }
        Cmd::Encode {
            cfg,
            input,
            out,
            key,
            seed,
        } => {
            let mut cfg = cfg.load()?;
            let x = bitfile_decode(&fs::read(&input)?)?;
            cfg.k = x.len();
            let key_seed = seed::derive(seed, "key", 0);
            let codeword = match cfg.code {
                CodeId::Paldc => {
                    let p = cfg.paldc_params(cfg.k)?;
                    let sk = paldc_gen(&p, key_seed)?;
                    if let Some(path) = &key {
                        fs::write(path, sk.to_bytes())?;
                    }
                    paldc_enc(&sk, &x, &p)?
                }
                CodeId::InsdelPaldc => {
                    let code = InsdelPaldc::new(cfg.paldc_params(cfg.k)?, cfg.compiler_params()?)?;
                    let sk = code.gen(key_seed)?;
                    if let Some(path) = &key {
                        fs::write(path, sk.to_bytes())?;
                    }
                    code.enc(&sk, &x)?
                }
                CodeId::RaldcHamming => {
                    let p = cfg.raldc_params(cfg.k)?;
                    raldc_enc_with_seed(&x, &p, key_seed)?
                }
                CodeId::RaldcInsdel => {
                    let code = InsdelRaldc::new(cfg.raldc_params(cfg.k)?, cfg.compiler_params()?)?;
                    code.enc_with_seed(&x, key_seed)?
                }
            };
            fs::write(&out, bitfile_encode(&codeword))?;
            eprintln!(
                "encoded {} message bits into {} codeword bits",
                x.len(),
                codeword.len()
            );
            Ok(())
        }
        Cmd::Corrupt {
            cfg,
            input,
            out,
            script,
            strategy,
            delta,
            seed,
        } => {
            let cfg = cfg.load()?;
            let y = bitfile_decode(&fs::read(&input)?)?;
            let mut rng = seed::rng(seed, "channel", 0);
            let (noisy, edit_script) = if cfg.code.is_insdel() {
                let compiler = cfg.compiler_params()?;
                let s = match strategy.as_str() {
                    "uniform_indel" => channels::InsdelStrategy::UniformIndel,
                    "burst_delete" => channels::InsdelStrategy::BurstDelete,
                    "buffer_zeroing" => channels::InsdelStrategy::BufferZeroing {
                        blk_len: compiler.blk_len(),
                        buf_len: compiler.block.buf_len(),
                    },
                    "block_kill" => channels::InsdelStrategy::BlockKill {
                        blk_len: compiler.blk_len(),
                    },
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "unknown insdel strategy {strategy:?}"
                        )))
                    }
                };
                channels::corrupt_insdel(&y, delta, s, &mut rng)?
            } else {
                let s = match strategy.as_str() {
                    "uniform_random" => channels::HammingStrategy::UniformRandom,
                    "prefix_burst" => channels::HammingStrategy::PrefixBurst,
                    "block_targeting" => channels::HammingStrategy::BlockTargeting {
                        block_bits: cfg.paldc_params(cfg.k)?.c_a(),
                    },
                    _ => {
                        return Err(Error::InvalidInput(format!(
                            "unknown hamming strategy {strategy:?}"
                        )))
                    }
                };
                let noisy = channels::corrupt_hamming(&y, delta, s, &mut rng)?;
                // Substitution-only script from the diff.
                let ops: Vec<EditOp> = (0..y.len())
                    .filter(|&i| y.bit(i) != noisy.bit(i))
                    .map(|i| EditOp {
                        pos: i + 1,
                        kind: channels::EditKind::Substitute(noisy.bit(i)),
                    })
                    .collect();
                (noisy, EditScript::new(ops))
            };
            fs::write(&out, bitfile_encode(&noisy))?;
            if let Some(path) = &script {
                fs::write(path, edit_script.to_text())?;
            }
            eprintln!(
                "corrupted: {} -> {} bits, script cost {}",
                y.len(),
                noisy.len(),
                edit_script.cost()
            );
            Ok(())
        }
        Cmd::Decode {
            cfg,
            input,
            out,
            key,
            range,
            seed,
        } => {
            let mut cfg = cfg.load()?;
            let noisy = bitfile_decode(&fs::read(&input)?)?;
            let loaded_key = match &key {
                Some(path) => Some(SecretKey::from_bytes(&fs::read(path)?)?),
                None => None,
            };
            // For private-key codes the key pins the geometry; recover k.
            if let Some(sk) = &loaded_key {
                let p = cfg.paldc_params(cfg.k)?;
                cfg.k = sk.m() / p.c_a() * p.ca();
            }
            let k = cfg.k;
            let (l, r) = parse_range(&range, k)?;
            let mut oracle = CorruptedOracle::open(noisy)?;
            let mut dec_rng = seed::rng(seed, "decode", 0);
            let bits = match cfg.code {
                CodeId::Paldc => {
                    let sk = loaded_key
                        .ok_or_else(|| Error::InvalidInput("paldc decode needs --key".into()))?;
                    let p = cfg.paldc_params(k)?;
                    paldc_dec(&sk, &mut oracle, l, r, &p)?
                }
                CodeId::InsdelPaldc => {
                    let sk = loaded_key.ok_or_else(|| {
                        Error::InvalidInput("insdel_paldc decode needs --key".into())
                    })?;
                    let code = InsdelPaldc::new(cfg.paldc_params(k)?, cfg.compiler_params()?)?;
                    code.dec(&sk, &mut oracle, l, r, &mut dec_rng)?
                }
                CodeId::RaldcHamming => {
                    let p = cfg.raldc_params(k)?;
                    raldc_dec(&mut oracle, l, r, &p, &mut dec_rng)?
                }
                CodeId::RaldcInsdel => {
                    let code = InsdelRaldc::new(cfg.raldc_params(k)?, cfg.compiler_params()?)?;
                    code.dec(&mut oracle, l, r, &mut dec_rng)?
                }
            };
            fs::write(&out, bitfile_encode(&bits))?;
            eprintln!(
                "decoded [{l},{r}] with {} queries (alpha {:.3})",
                oracle.queries_used(),
                oracle.queries_used() as f64 / (r - l + 1) as f64
            );
            Ok(())
        }
        Cmd::Classify {
            cfg,
            clean,
            corrupted,
            script,
        } => {
            let cfg = cfg.load()?;
            let compiler = cfg.compiler_params()?;
            let clean = bitfile_decode(&fs::read(&clean)?)?;
            let corrupted = bitfile_decode(&fs::read(&corrupted)?)?;
            let script = EditScript::parse(&fs::read_to_string(&script)?)?;
            let blk_len = compiler.blk_len();
            if clean.len() % blk_len != 0 {
                return Err(Error::InvalidInput(format!(
                    "clean word is not a whole number of {blk_len}-bit blocks"
                )));
            }
            let blocks = (clean.len() / blk_len) as u32;
            let replayed = script.apply(&clean)?;
            if replayed != corrupted {
                return Err(Error::InvalidInput(
                    "script does not map the clean word to the corrupted word".into(),
                ));
            }
            let map = channels::derive_block_map(&script, blocks, blk_len)?;
            let health = channels::classify_blocks(
                &clean,
                &corrupted,
                &map,
                blk_len,
                compiler.tau(),
                compiler.gamma,
                compiler.theta,
            )?;
            println!("block  cost  gamma_good  local_good");
            for j in 0..health.blocks() {
                println!(
                    "{:<6} {:<5} {:<11} {}",
                    j + 1,
                    health.costs[j],
                    health.gamma_good[j],
                    health.local_good[j]
                );
            }
            println!(
                "gamma-bad fraction {:.4}, local-bad fraction {:.4}",
                health.gamma_bad_fraction(),
                health.local_bad_fraction()
            );
            Ok(())
        }
        Cmd::Experiment {
            cfg,
            out,
            seed,
            trials,
            kappa,
        } => {
            let mut cfg = cfg.load()?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            if let Some(trials) = trials {
                for row in &mut cfg.sweep {
                    row.trials = trials;
                }
            }
            if let Some(kappa) = kappa {
                for row in &mut cfg.sweep {
                    row.kappa = kappa;
                }
            }
            let records = run_experiment(&cfg)?;
            fs::write(&out, csv_string(&records))?;
            print!("{}", aggregate_table(&records));
            eprintln!("wrote {} records to {}", records.len(), out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::DecodeFailure(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
