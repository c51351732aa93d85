//! The `asp-templates` command line.
//!
//! `solve` and `validate` expand their input first, so files with template
//! directives can be used directly.

use std::io::Read;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use asp_templates::corelib::{builtin_registry, is_long_name, BUILTIN_SEED};
use asp_templates::semantics::{format_models, stable_models, EngineLimits};
use asp_templates::syntax::{render, Program};
use asp_templates::templates::{expand_source, TemplateRegistry, UuidSource};
use asp_templates::validation::{parse_manifest, run_manifest};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "asp-templates", version, about = "Expand, solve and validate ASP programs with templates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replace template declarations and applications by ordinary rules.
    Expand {
        /// Input file, `-` for standard input.
        #[arg(default_value = "-")]
        input: String,
    },
    /// Print the stable models of the (expanded) program.
    Solve {
        #[arg(default_value = "-")]
        input: String,
    },
    /// Run the `%!` validation directives of the input.
    Validate {
        #[arg(default_value = "-")]
        input: String,
        /// Only drop local atoms whose name carries a generated suffix in
        /// `cannot_be_extended` checks.
        #[arg(long)]
        strict: bool,
    },
    /// List the names of the available templates.
    ListTemplates,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum UuidMode {
    #[default]
    Random,
    Deterministic,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Write the result here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// How local predicates are made unique.
    #[arg(long, value_enum, default_value_t = UuidMode::Random, global = true)]
    pub uuid: UuidMode,
    /// First counter value in deterministic mode.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest number of atoms enumerated for models.
    #[arg(long, global = true, default_value_t = EngineLimits::default().max_atoms)]
    pub max_atoms: usize,
    /// Largest number of atoms enumerated for here-and-there models.
    #[arg(long, global = true, default_value_t = EngineLimits::default().max_ht_atoms)]
    pub max_ht_atoms: usize,
    /// Include the long template names.
    #[arg(long, global = true)]
    pub long: bool,
    /// Load templates from this file, or from the `.lp` files of this
    /// directory, instead of the built-in library.
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,
}

impl Options {
    fn limits(&self) -> EngineLimits {
        EngineLimits {
            max_atoms: self.max_atoms,
            max_ht_atoms: self.max_ht_atoms,
        }
    }

    fn uuids(&self) -> Result<UuidSource> {
        match (self.uuid, self.seed) {
            (UuidMode::Random, Some(_)) => bail!("--seed requires --uuid deterministic"),
            (UuidMode::Random, None) => Ok(UuidSource::random()),
            (UuidMode::Deterministic, seed) => Ok(UuidSource::deterministic(seed.unwrap_or(0))),
        }
    }

    fn registry(&self) -> Result<TemplateRegistry> {
        let library_uuids = match self.uuid {
            UuidMode::Random => UuidSource::random(),
            UuidMode::Deterministic => UuidSource::deterministic(BUILTIN_SEED),
        };
        match &self.registry {
            None => Ok(builtin_registry(&library_uuids)),
            Some(path) => load_registry(path, &library_uuids),
        }
    }
}

fn load_registry(path: &Path, uuids: &UuidSource) -> Result<TemplateRegistry> {
    let files = if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(path)
            .with_context(|| format!("reading {}", path.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "lp"))
            .collect();
        files.sort();
        files
    } else {
        vec![path.to_owned()]
    };
    let mut registry = TemplateRegistry::new();
    for file in files {
        let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
        let rest = registry
            .declare_from_source(&text, uuids)
            .with_context(|| format!("{}", file.display()))?;
        if !rest.is_empty() {
            log::warn!("{}: statements outside template declarations are ignored", file.display());
        }
    }
    Ok(registry)
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(input).with_context(|| format!("reading {input}"))
    }
}

/// What a command printed and the exit code it asks for.
#[derive(Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

fn expand_text(source: &str, input: &str, options: &Options) -> Result<Program> {
    let uuids = options.uuids()?;
    let mut registry = options.registry()?;
    expand_source(source, &mut registry, &uuids).with_context(|| format!("expanding {input}"))
}

/// Runs a command. Errors map to exit code 2.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let options = &cli.options;
    options.uuids()?;
    match &cli.command {
        Command::Expand { input } => {
            let program = expand_text(&read_input(input)?, input, options)?;
            let mut text = render(&program);
            if !text.is_empty() {
                text.push('\n');
            }
            Ok(Outcome { text, code: 0 })
        }
        Command::Solve { input } => {
            let program = expand_text(&read_input(input)?, input, options)?;
            let models = stable_models(&program, &options.limits())?;
            Ok(Outcome {
                code: if models.is_empty() { 1 } else { 0 },
                text: format_models(&models),
            })
        }
        Command::Validate { input, strict } => {
            let source = read_input(input)?;
            let manifest = parse_manifest(&source).with_context(|| format!("in {input}"))?;
            if manifest.is_empty() {
                log::warn!("{input}: no `%!` validation directives");
            }
            let program = expand_text(&source, input, options)?;
            let reports = run_manifest(&program, &manifest, *strict, &options.limits())?;
            let mut text = String::new();
            for report in &reports {
                text.push_str(&report.to_string());
                text.push('\n');
            }
            let failed = reports.iter().any(|r| !r.passed());
            Ok(Outcome {
                text,
                code: u8::from(failed),
            })
        }
        Command::ListTemplates => {
            let registry = options.registry()?;
            let mut text = String::new();
            for name in registry.names().filter(|n| options.long || !is_long_name(n)) {
                text.push_str(name);
                text.push('\n');
            }
            Ok(Outcome { text, code: 0 })
        }
    }
}

/// Writes the outcome to `--output` or standard output.
pub fn emit(options: &Options, outcome: &Outcome) -> Result<()> {
    match &options.output {
        Some(path) => std::fs::write(path, &outcome.text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    }
}
