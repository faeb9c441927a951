use clap::{Args, ValueEnum};
use termdrift_core::corpus;
use termdrift_core::lexicon::parse_lexicon;
use termdrift_core::matcher::{write_counts, ScanScope, Scanner};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Scope {
    Body,
    Abstract,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Text to scan (overrides the config).
    #[arg(long, value_enum)]
    scope: Option<Scope>,
}

pub fn run(config: &Config, args: ScanArgs) -> Result<(), CliError> {
    let scope = match args.scope {
        Some(Scope::Body) => ScanScope::Body,
        Some(Scope::Abstract) => ScanScope::Abstract,
        None => config.scan_scope,
    };
    let corpus = corpus::load(&config.corpus).data_err("loading corpus")?;
    let lexicon = parse_lexicon(&config.lexicon).data_err("loading lexicon")?;
    let counts = Scanner::new(&lexicon).scan_corpus(&corpus, scope);
    write_counts(&config.counts, &counts).data_err("writing counts")?;
    let related = counts.iter().filter(|c| c.is_lm_related()).count();
    println!(
        "scanned {} papers ({related} LM-related) -> {}",
        counts.len(),
        config.counts.display()
    );
    Ok(())
}
