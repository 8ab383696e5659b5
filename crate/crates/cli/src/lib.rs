//! `mgcolor` command line.
//!
//! Every subcommand reads one Lottie document (a path, or stdin when the path
//! is `-` or missing) and prints JSON on stdout. Errors go to stderr as one
//! JSON object per line. Exit codes: 0 success, 1 usage/parse/IO errors,
//! 2 domain errors such as an empty group or an unknown color.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use mgcolor_core::elements::build_element_list;
use mgcolor_core::palette::{palette_for, DocBounds, DEFAULT_ZOOM};
use mgcolor_core::recolor::{anchor_color, group_auto, set_rgb_by_hex, EditKind, EditLog, HslShift};
use mgcolor_core::theme::DEFAULT_SIMILARITY_THRESHOLD;
use mgcolor_core::{
    extract_occurrences, extract_theme, parse_document, report, serialize_document, Error, LottieDocument,
    PaletteConfig, Rgba, ThemeConfig,
};
use mgcolor_service::{ServiceConfig, SessionSettings};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "mgcolor", version, about = "Color analysis and recoloring for Lottie animations")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// K-Means seed
    #[arg(long, global = true, env = "MGCOLOR_SEED")]
    pub seed: Option<u64>,
    /// Number of theme colors
    #[arg(long, global = true, env = "MGCOLOR_K")]
    pub k: Option<usize>,
    /// ΔE threshold for auto grouping
    #[arg(long, global = true, env = "MGCOLOR_THRESHOLD")]
    pub threshold: Option<f64>,
    /// Frames per palette column
    #[arg(long, global = true, env = "MGCOLOR_STEP")]
    pub step: Option<f64>,
    /// Palette zoom, 0 to 100
    #[arg(long, global = true)]
    pub zoom: Option<f64>,
    /// Write the result here instead of stdout
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every color occurrence with area, interval and proportion
    Analyze { input: Option<PathBuf> },
    /// Cluster the document's colors into theme swatches
    ExtractTheme { input: Option<PathBuf> },
    /// Lay out colors on the timeline
    Palette {
        input: Option<PathBuf>,
        /// SVG column width in pixels
        #[arg(long, default_value_t = 10.0)]
        column_width: f64,
    },
    /// Show the layer/group tree with the colors each element paints
    ListElements { input: Option<PathBuf> },
    /// Shift a similar-color group along one HSL channel, or replace one color
    Recolor(RecolorArgs),
    /// Run the HTTP session service
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("shift").args(["hue", "sat", "light"]).multiple(false)))]
pub struct RecolorArgs {
    pub input: Option<PathBuf>,
    /// Theme color whose similar colors are shifted
    #[arg(long = "match", value_parser = parse_hex, conflicts_with_all = ["from", "to"])]
    pub match_color: Option<Rgba>,
    /// Hue shift in degrees
    #[arg(long, allow_hyphen_values = true)]
    pub hue: Option<f64>,
    /// Saturation shift in [-1, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub sat: Option<f64>,
    /// Lightness shift in [-1, 1]
    #[arg(long, allow_hyphen_values = true)]
    pub light: Option<f64>,
    #[arg(long, value_parser = parse_hex, requires = "to")]
    pub from: Option<Rgba>,
    #[arg(long, value_parser = parse_hex, requires = "from")]
    pub to: Option<Rgba>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "MGCOLOR_BIND", default_value = "127.0.0.1:8080")]
    pub bind: SocketAddr,
    /// Idle session lifetime in seconds
    #[arg(long, env = "MGCOLOR_TTL", default_value_t = 7200)]
    pub ttl: u64,
    /// Keep uploads and edit logs here and replay them on start
    #[arg(long, env = "MGCOLOR_PERSIST_DIR")]
    pub persist_dir: Option<PathBuf>,
    /// Also serve the studio UI's static files
    #[arg(long)]
    pub with_ui: bool,
    #[arg(long, env = "MGCOLOR_UI_DIR", default_value = "ui")]
    pub ui_dir: PathBuf,
}

fn parse_hex(s: &str) -> Result<Rgba, String> {
    Rgba::from_hex(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: String, error: std::io::Error },
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_domain() => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::Core(e) => e.kind(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Io { path, error } => format!("{path}: {error}"),
            CliError::Core(e) => e.to_string(),
        }
    }

    pub fn record(&self) -> Value {
        json!({ "error": self.kind(), "message": self.message(), "exit_code": self.exit_code() })
    }
}

/// What a subcommand produced: data for stdout or the output file, and for
/// `recolor -o` a separate summary for stdout.
struct Output {
    data: String,
    summary: Option<String>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let message = e.render().to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return report_error(stderr, &CliError::Usage(first));
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => {
            if let Err(e) = deliver(&cli, out, stdout) {
                return report_error(stderr, &e);
            }
            0
        }
        Err(e) => report_error(stderr, &e),
    }
}

fn report_error(stderr: &mut dyn Write, e: &CliError) -> i32 {
    let _ = writeln!(stderr, "{}", e.record());
    e.exit_code()
}

fn deliver(cli: &Cli, out: Output, stdout: &mut dyn Write) -> Result<(), CliError> {
    fn io(path: &str) -> impl FnOnce(std::io::Error) -> CliError + '_ {
        move |error| CliError::Io { path: path.to_string(), error }
    }
    match &cli.global.output {
        Some(path) => {
            std::fs::write(path, &out.data).map_err(io(&path.display().to_string()))?;
            if let Some(summary) = out.summary {
                stdout.write_all(summary.as_bytes()).map_err(io("<stdout>"))?;
            }
        }
        None => stdout.write_all(out.data.as_bytes()).map_err(io("<stdout>"))?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn read_input(path: Option<&Path>, stdin: &mut dyn Read) -> Result<LottieDocument, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p != Path::new("-") => {
            text = std::fs::read_to_string(p).map_err(|error| CliError::Io { path: p.display().to_string(), error })?;
        }
        _ => {
            stdin.read_to_string(&mut text).map_err(|error| CliError::Io { path: "<stdin>".into(), error })?;
        }
    }
    Ok(parse_document(&text)?)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn theme_config(g: &Global) -> ThemeConfig {
    let mut cfg = ThemeConfig::default();
    if let Some(k) = g.k {
        cfg.k = k;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    cfg
}

fn palette_config(g: &Global) -> PaletteConfig {
    PaletteConfig { step: g.step, zoom: g.zoom.unwrap_or(DEFAULT_ZOOM), ..PaletteConfig::default() }
}

/// Flag checks that need no file access.
fn validate(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    if g.k == Some(0) {
        return Err(usage("--k must be at least 1"));
    }
    if let Some(t) = g.threshold {
        if !t.is_finite() || t < 0.0 {
            return Err(usage("--threshold must be a non-negative number"));
        }
    }
    if let Some(s) = g.step {
        if !s.is_finite() || s <= 0.0 {
            return Err(usage("--step must be positive"));
        }
    }
    if let Some(z) = g.zoom {
        if !(0.0..=100.0).contains(&z) {
            return Err(usage("--zoom must be within [0, 100]"));
        }
    }
    if g.format == Some(Format::Svg) && !matches!(cli.command, Command::Palette { .. }) {
        return Err(usage("--format svg is only available for palette"));
    }
    match &cli.command {
        Command::Palette { column_width, .. } if !column_width.is_finite() || *column_width <= 0.0 => {
            Err(usage("--column-width must be positive"))
        }
        Command::Recolor(r) => recolor_mode(r).map(|_| ()),
        Command::Serve(s) if s.with_ui && !s.ui_dir.is_dir() => {
            Err(usage(format!("UI directory {} does not exist", s.ui_dir.display())))
        }
        Command::Serve(_) if g.output.is_some() => Err(usage("serve does not take --output")),
        _ => Ok(()),
    }
}

enum RecolorMode {
    Match(Rgba, HslShift),
    Replace(Rgba, Rgba),
}

fn recolor_mode(r: &RecolorArgs) -> Result<RecolorMode, CliError> {
    let shift = match (r.hue, r.sat, r.light) {
        (Some(d), None, None) => Some(HslShift::hue(d)),
        (None, Some(d), None) => Some(HslShift::saturation(d)),
        (None, None, Some(d)) => Some(HslShift::lightness(d)),
        _ => None,
    };
    if let Some(s) = &shift {
        if !s.delta.is_finite() {
            return Err(usage("shift must be a finite number"));
        }
    }
    match (r.match_color, shift, r.from, r.to) {
        (Some(m), Some(s), None, None) => Ok(RecolorMode::Match(m, s)),
        (Some(_), None, _, _) => Err(usage("--match needs one of --hue, --sat, --light")),
        (None, None, Some(from), Some(to)) => Ok(RecolorMode::Replace(from, to)),
        (None, Some(_), _, _) => Err(usage("--hue/--sat/--light need --match")),
        _ => Err(usage("recolor needs --match with a shift, or --from and --to")),
    }
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    validate(cli)?;
    let g = &cli.global;
    let data = |v: Value| Output { data: pretty(&v), summary: None };
    match &cli.command {
        Command::Analyze { input } => {
            let doc = read_input(input.as_deref(), stdin)?;
            let set = extract_occurrences(&doc);
            Ok(data(report::occurrences_json(&set)?))
        }
        Command::ExtractTheme { input } => {
            let doc = read_input(input.as_deref(), stdin)?;
            let cfg = theme_config(g);
            let theme = extract_theme(&extract_occurrences(&doc), &cfg)?;
            Ok(data(report::theme_json(&theme, &cfg)))
        }
        Command::Palette { input, column_width } => {
            let doc = read_input(input.as_deref(), stdin)?;
            let palette = palette_for(&extract_occurrences(&doc), DocBounds::of(&doc), &palette_config(g))?;
            match g.format.unwrap_or(Format::Json) {
                Format::Json => Ok(data(report::palette_json(&palette))),
                Format::Svg => Ok(Output { data: palette.to_svg(*column_width), summary: None }),
            }
        }
        Command::ListElements { input } => {
            let doc = read_input(input.as_deref(), stdin)?;
            let set = extract_occurrences(&doc);
            Ok(data(report::elements_json(&build_element_list(&doc, &set))))
        }
        Command::Recolor(r) => {
            let mode = recolor_mode(r)?;
            let mut doc = read_input(r.input.as_deref(), stdin)?;
            let set = extract_occurrences(&doc);
            let threshold = g.threshold.unwrap_or(DEFAULT_SIMILARITY_THRESHOLD);
            let kind = match mode {
                RecolorMode::Match(color, shift) => {
                    let group = group_auto(&anchor_color(&set, &color), &set, threshold)?;
                    EditKind::GroupShift { group, shift }
                }
                RecolorMode::Replace(from, to) => set_rgb_by_hex(&set, &from, to)?,
            };
            let group = match &kind {
                EditKind::GroupShift { group, .. } => group.members().to_vec(),
                EditKind::SetRgb { from, .. } => vec![*from],
                EditKind::Remap { mapping } => mapping.iter().map(|(f, _)| *f).collect(),
                EditKind::FrameIsolated { .. } => Vec::new(),
            };
            let outcome = EditLog::new().execute(&mut doc, kind)?;
            let mut summary = report::outcome_json(&outcome);
            summary["group"] = report::colors_json(&group);
            Ok(Output { data: serialize_document(&doc), summary: Some(pretty(&summary)) })
        }
        Command::Serve(s) => {
            let config = ServiceConfig {
                bind: s.bind,
                ttl: Duration::from_secs(s.ttl),
                persist_dir: s.persist_dir.clone(),
                settings: SessionSettings {
                    theme: theme_config(g),
                    threshold: g.threshold.unwrap_or(DEFAULT_SIMILARITY_THRESHOLD),
                    palette: palette_config(g),
                },
                ui_dir: s.with_ui.then(|| s.ui_dir.clone()),
            };
            let _ = tracing_subscriber::fmt()
                .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
                .with_writer(std::io::stderr)
                .try_init();
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .enable_all()
                .build()
                .map_err(|error| CliError::Io { path: "<runtime>".into(), error })?;
            runtime
                .block_on(mgcolor_service::serve(config))
                .map_err(|error| CliError::Io { path: s.bind.to_string(), error })?;
            Ok(Output { data: String::new(), summary: None })
        }
    }
}
