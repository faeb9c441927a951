use clap::{Args, ValueEnum};
use termdrift_core::corpus;
use termdrift_core::lexicon::parse_lexicon;
use termdrift_core::matcher::read_counts;
use termdrift_core::stats::{compute_report, group_by_conference, Analysis, AnalysisOptions, JaccardMode};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AnalysisArg {
    Timeseries,
    Ks,
    Composition,
    Jaccard,
    Majority,
    Quartiles,
}

impl From<AnalysisArg> for Analysis {
    fn from(a: AnalysisArg) -> Self {
        match a {
            AnalysisArg::Timeseries => Analysis::Timeseries,
            AnalysisArg::Ks => Analysis::Ks,
            AnalysisArg::Composition => Analysis::Composition,
            AnalysisArg::Jaccard => Analysis::Jaccard,
            AnalysisArg::Majority => Analysis::Majority,
            AnalysisArg::Quartiles => Analysis::Quartiles,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Set,
    Weighted,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Analyses to run (repeatable; default: all).
    #[arg(long, value_enum, value_name = "ANALYSIS")]
    analysis: Vec<AnalysisArg>,
    /// Jaccard operand (default: both).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Count model-free papers as having no majority.
    #[arg(long)]
    include_zero: bool,
    /// Components kept in each composition difference.
    #[arg(long, default_value_t = 10, value_name = "K")]
    top_k: usize,
}

pub fn run(config: &Config, args: StatsArgs) -> Result<(), CliError> {
    let corpus = corpus::load(&config.corpus).data_err("loading corpus")?;
    let counts = read_counts(&config.counts).data_err("loading counts")?;
    let lexicon = parse_lexicon(&config.lexicon).data_err("loading lexicon")?;
    let confs = group_by_conference(&corpus, &counts).data_err("grouping counts")?;
    let analyses: Vec<Analysis> = if args.analysis.is_empty() {
        Analysis::ALL.to_vec()
    } else {
        args.analysis.iter().map(|&a| a.into()).collect()
    };
    let options = AnalysisOptions {
        jaccard_modes: match args.mode {
            None => vec![JaccardMode::Set, JaccardMode::Weighted],
            Some(ModeArg::Set) => vec![JaccardMode::Set],
            Some(ModeArg::Weighted) => vec![JaccardMode::Weighted],
        },
        include_zero_majority: args.include_zero,
        diff_top_k: args.top_k,
    };
    for a in analyses {
        let files = compute_report(a, &confs, &lexicon, &options).data_err(format!("{} analysis", a.name()))?;
        for f in files {
            let path = f.write_to(&config.stats_dir).data_err("writing stats")?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
