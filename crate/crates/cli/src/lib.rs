//! Command-line front end for the `ddbar` engine.

pub mod catalog;
pub mod diamond_file;
pub mod manifest;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ddbar_core::cdba::CdbaError;
use ddbar_core::cohomology::{report, CohomologyReport};
use ddbar_core::diamond::{
    blowup_diamond, check_hodge_structure, projectivize, DiamondError, HodgeNumbers,
};
use ddbar_core::group::{
    dimension_grid, invariant_differentials_report, invariant_subcomplex, GroupError,
};
use thiserror::Error;

use crate::diamond_file::{parse_diamond, render_diamond};
use crate::manifest::{parse_manifest, Manifest, ParseError};
use crate::render::{render_quotient_header, render_table, JsonQuotient, JsonReport};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status when the engine rejects well-formed input.
pub const EXIT_COMPUTATION: i32 = 1;
/// Exit status for unreadable or malformed input.
pub const EXIT_PARSE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{source}")]
    Parse { origin: String, source: ParseError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("'{0}' is neither a readable file nor a builtin ({known})", known = catalog::names().join(", "))]
    UnknownManifest(String),
    #[error("unknown builtin '{0}' (available: {known})", known = catalog::names().join(", "))]
    UnknownBuiltin(String),
    #[error("manifest declares no action '{name}' (available: {available})")]
    UnknownAction { name: String, available: String },
    #[error("no --action given and the manifest has no default (available: {0})")]
    MissingAction(String),
    #[error(transparent)]
    Cdba(#[from] CdbaError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { source, .. } => source.code(),
            CliError::Io { .. } => "io",
            CliError::UnknownManifest(_) => "unknown-manifest",
            CliError::UnknownBuiltin(_) => "unknown-builtin",
            CliError::UnknownAction { .. } => "unknown-action",
            CliError::MissingAction(_) => "missing-action",
            CliError::Cdba(CdbaError::IntegrabilityFailure { .. }) => "integrability",
            CliError::Cdba(CdbaError::BadBidegree { .. }) => "bad-bidegree",
            CliError::Cdba(_) => "invalid-cdba",
            CliError::Group(GroupError::NotChainMap { .. }) => "not-chain-map",
            CliError::Group(GroupError::NotHolomorphic { .. }) => "not-holomorphic",
            CliError::Group(GroupError::NotInvertible) => "not-invertible",
            CliError::Group(GroupError::GroupTooLarge(_)) => "group-too-large",
            CliError::Group(_) => "group",
            CliError::Diamond(DiamondError::DimensionMismatch { .. }) => "dimension-mismatch",
            CliError::Diamond(_) => "diamond",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::Io { .. }
            | CliError::UnknownManifest(_)
            | CliError::UnknownBuiltin(_)
            | CliError::UnknownAction { .. }
            | CliError::MissingAction(_) => EXIT_PARSE,
            CliError::Cdba(_) | CliError::Group(_) | CliError::Diamond(_) => EXIT_COMPUTATION,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ddbar",
    version,
    about = "Cohomology of complex differential bigraded algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ReportOpts {
    /// Emit JSON instead of a table.
    #[arg(long, conflicts_with = "reps")]
    json: bool,
    /// Print class representatives.
    #[arg(long)]
    reps: bool,
    /// Write the Dolbeault diamond and Betti numbers to FILE.
    #[arg(long, value_name = "FILE")]
    export_diamond: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dolbeault, Bott-Chern, Aeppli and de Rham cohomology of a manifest.
    Cohomology {
        /// Manifest file or builtin name.
        manifest: String,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Cohomology of the subcomplex invariant under a named action.
    Quotient {
        /// Manifest file or builtin name.
        manifest: String,
        /// Action declared in the manifest; repeat to combine actions.
        #[arg(long = "action", value_name = "NAME")]
        actions: Vec<String>,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Hodge numbers of a blow-up along a center of codimension K.
    Blowup {
        #[arg(long, value_name = "FILE")]
        ambient: PathBuf,
        #[arg(long, value_name = "FILE")]
        center: PathBuf,
        #[arg(long, value_name = "K")]
        codim: usize,
    },
    /// Hodge numbers of the projectivization of a rank-R bundle.
    Projectivize {
        #[arg(long, value_name = "FILE")]
        base: PathBuf,
        #[arg(long, value_name = "R")]
        rank: usize,
    },
    /// Run `cohomology` on a catalog entry.
    Builtin {
        #[arg(value_name = "NAME")]
        name: String,
        #[command(flatten)]
        opts: ReportOpts,
    },
}

/// A parsed manifest with its display name and default quotient action.
struct Source {
    name: String,
    manifest: Manifest,
    default_action: Option<String>,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn resolve(arg: &str) -> Result<Source, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = read(path)?;
        let mut manifest = parse_manifest(&text).map_err(|source| CliError::Parse {
            origin: arg.to_string(),
            source,
        })?;
        if manifest.name.is_empty() {
            manifest.name = path
                .file_stem()
                .map_or_else(|| arg.to_string(), |s| s.to_string_lossy().into_owned());
        }
        return Ok(Source {
            name: manifest.name.clone(),
            manifest,
            default_action: None,
        });
    }
    let entry = catalog::lookup(arg).ok_or_else(|| CliError::UnknownManifest(arg.to_string()))?;
    Ok(Source {
        name: entry.name.to_string(),
        manifest: entry.manifest(),
        default_action: entry.action.map(str::to_string),
    })
}

fn export(path: &Path, r: &CohomologyReport) -> Result<(), CliError> {
    std::fs::write(path, render_diamond(&HodgeNumbers::from_report(r))).map_err(|source| {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    })
}

fn cohomology(src: &Source, opts: &ReportOpts, out: &mut dyn Write) -> Result<(), CliError> {
    let x = src.manifest.build_cdba()?;
    let r = report(&x.compile(), opts.reps);
    if let Some(path) = &opts.export_diamond {
        export(path, &r)?;
    }
    let order = src.manifest.field_order;
    if opts.json {
        let json =
            serde_json::to_string(&JsonReport::new(&src.name, order, &r)).expect("serializable");
        writeln!(out, "{json}").ok();
    } else {
        write!(out, "{}", render_table(&src.name, order, &r)).ok();
    }
    Ok(())
}

fn quotient(
    src: &Source,
    actions: &[String],
    opts: &ReportOpts,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let m = &src.manifest;
    let names: Vec<String> = if actions.is_empty() {
        src.default_action.iter().cloned().collect()
    } else {
        actions.to_vec()
    };
    let available = || {
        m.actions
            .iter()
            .map(|a| a.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    if names.is_empty() {
        return Err(CliError::MissingAction(available()));
    }
    let mut combined = manifest::ActionSpec {
        name: names.join("+"),
        generators: Vec::new(),
    };
    for name in &names {
        let spec = m.action(name).ok_or_else(|| CliError::UnknownAction {
            name: name.clone(),
            available: available(),
        })?;
        combined.generators.extend(spec.generators.iter().cloned());
    }
    let x = m.build_cdba()?;
    let group = m.build_group(&x, &combined)?;
    let sub = invariant_subcomplex(&x.compile(), &group)?;
    let r = report(&sub, opts.reps);
    if let Some(path) = &opts.export_diamond {
        export(path, &r)?;
    }
    let dims = dimension_grid(&sub);
    let relations = invariant_differentials_report(&sub);
    if opts.json {
        let json = JsonQuotient {
            report: JsonReport::new(&src.name, m.field_order, &r),
            action: combined.name.clone(),
            group_order: group.order(),
            invariant_dims: dims,
            differentials: relations.iter().map(ToString::to_string).collect(),
        };
        writeln!(
            out,
            "{}",
            serde_json::to_string(&json).expect("serializable")
        )
        .ok();
    } else {
        let header =
            render_quotient_header(&src.name, &combined.name, group.order(), &dims, &relations);
        write!(
            out,
            "{header}{}",
            render_table(&src.name, m.field_order, &r)
        )
        .ok();
    }
    Ok(())
}

fn load_diamond(path: &Path) -> Result<HodgeNumbers, CliError> {
    parse_diamond(&read(path)?).map_err(|source| CliError::Parse {
        origin: path.display().to_string(),
        source,
    })
}

fn write_diamond(x: &HodgeNumbers, out: &mut dyn Write) {
    let consistent = check_hodge_structure(&x.diamond, &x.betti);
    write!(out, "{}", render_diamond(x)).ok();
    writeln!(
        out,
        "# hodge structure: {}",
        if consistent {
            "consistent"
        } else {
            "inconsistent"
        }
    )
    .ok();
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Cohomology { manifest, opts } => {
            let src = resolve(&manifest)?;
            match src.default_action.clone() {
                Some(a) => quotient(&src, &[a], &opts, out),
                None => cohomology(&src, &opts, out),
            }
        }
        Command::Quotient {
            manifest,
            actions,
            opts,
        } => quotient(&resolve(&manifest)?, &actions, &opts, out),
        Command::Builtin { name, opts } => {
            if catalog::lookup(&name).is_none() {
                return Err(CliError::UnknownBuiltin(name));
            }
            dispatch(
                Command::Cohomology {
                    manifest: name,
                    opts,
                },
                out,
            )
        }
        Command::Blowup {
            ambient,
            center,
            codim,
        } => {
            let x = load_diamond(&ambient)?;
            let z = load_diamond(&center)?;
            write_diamond(&blowup_diamond(&x, &z, codim)?, out);
            Ok(())
        }
        Command::Projectivize { base, rank } => {
            let x = load_diamond(&base)?;
            write_diamond(&projectivize(&x, rank)?, out);
            Ok(())
        }
    }
}

/// Runs one invocation; `args` includes the program name. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                write!(err, "{text}").ok();
                EXIT_PARSE
            } else {
                write!(out, "{text}").ok();
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            writeln!(err, "error: {}: {e}", e.code()).ok();
            e.exit_code()
        }
    }
}
