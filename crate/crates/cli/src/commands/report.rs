use clap::Args;
use termdrift_core::lexicon::parse_lexicon;
use termdrift_core::report::{emit_all, ReportError, Style};
use termdrift_core::stats::StatsBundle;

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Overwrite a non-empty output directory.
    #[arg(long)]
    force: bool,
}

pub fn run(config: &Config, args: ReportArgs) -> Result<(), CliError> {
    let bundle = StatsBundle::load(&config.stats_dir).data_err("loading stats")?;
    let lexicon = parse_lexicon(&config.lexicon).data_err("loading lexicon")?;
    let manifest = emit_all(&bundle, &lexicon, &config.output, &Style::default(), args.force).map_err(|e| match e {
        ReportError::OutputNotEmpty(_) => CliError::usage(e),
        e => CliError::data(e),
    })?;
    println!(
        "wrote {} files ({} chart kinds) to {}",
        manifest.files.len(),
        manifest.kinds().len(),
        config.output.display()
    );
    Ok(())
}
