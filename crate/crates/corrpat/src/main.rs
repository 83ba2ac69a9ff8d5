use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corrpat::harness::{self, DEFAULT_FRACTION};
use corrpat::output::{write_tables, Format, Table};
use corrpat::tables;
use corrpat::tsv::{read_wordlist, DatasetFilter};
use corrpat_core::alignment::complete_alignments;
use corrpat_core::detect::{detect_irregular, Rescoring};
use corrpat_core::patterns::{infer_patterns, SiteTable};
use corrpat_core::regularity::report;
use corrpat_core::simulate::{inject_noise, inject_replacements, simulate};
use corrpat_core::SimulationConfig;

/// Regularity of sound-correspondence patterns in cognate-coded wordlists.
#[derive(Parser, Debug)]
#[command(name = "corrpat", version)]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,
    /// Worker threads; 0 uses every available core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Add an ALIGNMENT column, aligning cognate sets that lack one.
    Align {
        #[arg(long)]
        input: PathBuf,
        /// Output file; standard output if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Infer correspondence patterns.
    Patterns {
        #[arg(long)]
        input: PathBuf,
        /// Directory for patterns and sites tables; the pattern table goes to standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score regularity per cognate set and per dataset.
    Regularity {
        #[arg(long)]
        input: PathBuf,
        /// Directory for per-cognate-set and per-site tables.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Leave-one-out search for irregular word forms.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Report cognate sets whose score is below this value.
        #[arg(long, default_value_t = f64::INFINITY)]
        threshold: f64,
        /// Also write the gain of every member (requires --out).
        #[arg(long)]
        all_gains: bool,
        /// Re-infer patterns for every masking instead of matching the fixed collection.
        #[arg(long)]
        reinfer: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a language family with known replacements.
    Simulate {
        #[command(flatten)]
        sim: SimArgs,
        /// Share of segments replaced by random phones.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Share of eligible cognate sets receiving a replaced word.
        #[arg(long, default_value_t = 0.0)]
        fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the validation experiments.
    Evaluate {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Wordlists for the inject and sweep modes.
        #[arg(long, num_args = 1..)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [5, 10])]
        sample_size: Vec<usize>,
        /// Noise rates for the sim mode; defaults to 0 and 0.05 to 0.50.
        #[arg(long, value_delimiter = ',')]
        noise: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_FRACTION)]
        fraction: f64,
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Sim,
    Inject,
    Sweep,
}

#[derive(Args, Debug)]
struct SimArgs {
    #[arg(long, default_value_t = 200)]
    concepts: usize,
    #[arg(long, default_value_t = 10)]
    consonants: usize,
    #[arg(long, default_value_t = 4)]
    vowels: usize,
    #[arg(long, default_value_t = 10)]
    daughters: usize,
    #[arg(long, default_value_t = 2)]
    max_mergers: usize,
}

impl SimArgs {
    fn config(&self, seed: u64) -> SimulationConfig {
        SimulationConfig {
            n_concepts: self.concepts,
            n_consonants: self.consonants,
            n_vowels: self.vowels,
            n_daughters: self.daughters,
            max_mergers: self.max_mergers,
            seed,
        }
    }
}

/// Optional dataset selection for inject and sweep; nothing is filtered by default.
#[derive(Args, Debug)]
struct FilterArgs {
    #[arg(long, default_value_t = 0)]
    min_doculects: usize,
    #[arg(long, default_value_t = 0)]
    min_concepts: usize,
}

enum Failure {
    Usage(String),
    Data(String),
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

fn emit(dir: Option<&Path>, tables: &[Table], format: Format) -> Result<(), Failure> {
    match dir {
        Some(dir) => write_tables(dir, tables, format).map(drop).map_err(|e| data(format!("{}: {e}", dir.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            for t in tables {
                stdout.write_all(t.render(format).as_bytes()).map_err(data)?;
            }
            Ok(())
        }
    }
}

fn label(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let format = cli.format;
    match cli.command {
        Command::Align { input, output } => {
            let wl = complete_alignments(&read_wordlist(&input).map_err(data)?).map_err(data)?;
            let table = tables::wordlist_table("aligned", &wl);
            match output {
                Some(path) => std::fs::write(&path, table.render(format)).map_err(|e| {
                    let _ = std::fs::remove_file(&path);
                    data(format!("{}: {e}", path.display()))
                }),
                None => emit(None, &[table], format),
            }
        }
        Command::Patterns { input, out } => {
            let wl = read_wordlist(&input).map_err(data)?;
            let table = SiteTable::from_wordlist(&wl);
            let pc = infer_patterns(table.sites());
            let [patterns, sites] = tables::pattern_tables(&table, &pc);
            match out {
                Some(dir) => emit(Some(&dir), &[patterns, sites], format),
                None => emit(None, &[patterns], format),
            }
        }
        Command::Regularity { input, out } => {
            let wl = read_wordlist(&input).map_err(data)?;
            let table = SiteTable::from_wordlist(&wl);
            if table.sites().is_empty() {
                return Err(data("no cognate sets with alignment sites"));
            }
            let pc = infer_patterns(table.sites());
            let rep = report(&table, &pc).map_err(data)?;
            if let Some(dir) = &out {
                emit(Some(dir), &tables::regularity_tables(&rep), format)?;
            }
            match format {
                Format::Tsv => println!("{}", corrpat::output::fmt_real(rep.dataset_score)),
                Format::Json => emit(None, &[tables::score_table(&rep)], format)?,
            }
            Ok(())
        }
        Command::Detect { input, threshold, all_gains, reinfer, out } => {
            if all_gains && out.is_none() {
                return Err(Failure::Usage("--all-gains requires --out".into()));
            }
            let wl = read_wordlist(&input).map_err(data)?;
            let table = SiteTable::from_wordlist(&wl);
            let pc = infer_patterns(table.sites());
            let rescoring = if reinfer { Rescoring::Reinfer } else { Rescoring::Fixed };
            let results = detect_irregular(&table, &pc, threshold, rescoring).map_err(data)?;
            let mut out_tables = vec![tables::detection_table(&wl, &results)];
            if all_gains {
                out_tables.push(tables::gains_table(&wl, &results));
            }
            emit(out.as_deref(), &out_tables, format)
        }
        Command::Simulate { sim, noise, fraction, out } => {
            let cfg = sim.config(cli.seed);
            let s = simulate(&cfg).map_err(data)?;
            let (noised, positions) = inject_noise(&s.wordlist, noise, cli.seed).map_err(data)?;
            let (perturbed, replaced) = inject_replacements(&noised, fraction, cli.seed).map_err(data)?;
            let out_tables = [
                tables::wordlist_table("wordlist", &perturbed),
                tables::wordlist_table("proto", &s.proto),
                tables::merger_table(&s),
                tables::truth_table(&replaced),
                tables::noise_table(&positions),
            ];
            emit(Some(&out), &out_tables, format)
        }
        Command::Evaluate { mode, input, runs, sample_size, noise, fraction, sim, filter, out } => {
            let filter = DatasetFilter { min_doculects: filter.min_doculects, min_concepts: filter.min_concepts };
            let out_tables = match mode {
                Mode::Sim => {
                    let rates = if noise.is_empty() { harness::default_noise_grid() } else { noise };
                    let trials = harness::run_simulated(&sim.config(cli.seed), &rates, runs, fraction, cli.seed).map_err(data)?;
                    trial_tables(&trials)
                }
                Mode::Inject => {
                    if input.is_empty() {
                        return Err(Failure::Usage("--mode inject needs at least one --input".into()));
                    }
                    let mut trials = Vec::new();
                    for path in &input {
                        let wl = read_wordlist(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
                        if let Some(reason) = filter.reject_reason(&wl) {
                            log::warn!("{}: skipped, {reason}", path.display());
                            continue;
                        }
                        trials.extend(
                            harness::run_injection(&label(path), &wl, &sample_size, runs, fraction, cli.seed).map_err(data)?,
                        );
                    }
                    trial_tables(&trials)
                }
                Mode::Sweep => {
                    if input.is_empty() {
                        return Err(Failure::Usage("--mode sweep needs at least one --input".into()));
                    }
                    let datasets = input
                        .iter()
                        .map(|path| {
                            let wl = read_wordlist(path).map_err(|e| e.to_string()).and_then(|wl| match filter.reject_reason(&wl) {
                                Some(reason) => Err(format!("filtered: {reason}")),
                                None => Ok(wl),
                            });
                            (label(path), wl)
                        })
                        .collect();
                    harness::sweep_tables(&harness::regularity_sweep(datasets))
                }
            };
            emit(Some(&out), &out_tables, format)
        }
    }
}

fn trial_tables(trials: &[harness::TrialResult]) -> Vec<Table> {
    vec![
        harness::trials_table(trials),
        harness::summary_table(&harness::summarize(trials)),
        harness::accuracy_plot_table(trials),
    ]
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
