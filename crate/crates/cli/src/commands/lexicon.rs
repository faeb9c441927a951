use anyhow::anyhow;
use clap::Subcommand;
use termdrift_core::lexicon::{demo_lexicon, parse_lexicon, seed_lexicon, write_lexicon};

use crate::config::Config;
use crate::error::{CliError, ResultExt};

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    /// Write the seed lexicon (every known model as its own root).
    Init {
        /// Write the small demo lexicon with aliases and dependencies instead.
        #[arg(long)]
        demo: bool,
        /// Replace an existing file.
        #[arg(long)]
        force: bool,
    },
    /// Validate the lexicon and print a summary.
    Check,
}

pub fn run(config: &Config, cmd: LexiconCommand) -> Result<(), CliError> {
    match cmd {
        LexiconCommand::Init { demo, force } => {
            if config.lexicon.exists() && !force {
                return Err(CliError::usage(anyhow!(
                    "{} exists (use --force to replace it)",
                    config.lexicon.display()
                )));
            }
            let lex = if demo { demo_lexicon() } else { seed_lexicon() };
            write_lexicon(&lex, &config.lexicon).data_err("writing lexicon")?;
            println!("wrote {} entries to {}", lex.len(), config.lexicon.display());
        }
        LexiconCommand::Check => {
            let lex = parse_lexicon(&config.lexicon).data_err(config.lexicon.display())?;
            let roots = lex.entries().filter(|e| e.parent.is_none()).count();
            let aliases: usize = lex.entries().map(|e| e.aliases.len()).sum();
            println!(
                "ok: {} entries, {roots} roots, {aliases} aliases, depth {}, terms [{}]",
                lex.len(),
                lex.forest_depth(),
                lex.l_terms().terms().join(", ")
            );
        }
    }
    Ok(())
}
