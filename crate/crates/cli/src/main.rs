use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use arabmorph::disambig::{parse_rules, FreqTable, LmModel, DEFAULT_LAMBDA};
use arabmorph::eval::{read_gold, system_from_tei, EvalReport};
use arabmorph::lexicon::{
    import_tei_dictionary, import_wordlist, merge_reviewed, EntryKind, FlagSet, Lexicon,
    ReviewBatch,
};
use arabmorph::pipeline::Pipeline;
use arabmorph::teixml::{parse_tei, TeiMeta};
use arabmorph::translit::Translit;

#[derive(Parser)]
#[command(
    name = "arabmorph",
    version,
    about = "Morphological analysis and disambiguation for Arabic text"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a text file and print ranked readings
    Analyze(AnalyzeArgs),
    /// Apply the corrections marked in an annotated TEI file
    Correct {
        /// TEI file with `ed="correct"` marks
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Train a disambiguation model from a gold sample
    TrainLm {
        /// Gold rows: surface, voc/lemma/pos, genre
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        freq: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_LAMBDA)]
        lambda: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Score an annotated TEI run against a gold file
    Eval {
        #[command(flatten)]
        lexicon: LexiconArg,
        /// TEI output of `analyze`, possibly hand-corrected
        system: PathBuf,
        /// Gold rows: surface, voc/lemma/pos, genre
        gold: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Turn a TEI dictionary or a wordlist into a review file
    Import {
        /// TEI dictionary (.xml) or surface/gloss/pos wordlist
        input: PathBuf,
        /// Flags assigned to every imported entry
        #[arg(long)]
        flags: String,
        #[arg(long, value_enum)]
        from: Option<ImportFormat>,
        /// Entry kind for wordlists (prefix, stem or suffix)
        #[arg(long, default_value = "stem")]
        kind: String,
        /// Existing lexicon, used to reject duplicates
        #[arg(long, env = "ARABMORPH_LEXICON")]
        lexicon: Option<PathBuf>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Merge accepted entries of a review file into a lexicon
    Merge {
        /// Review file with every candidate marked A or R
        review: PathBuf,
        #[command(flatten)]
        lexicon: LexiconArg,
        /// Output directory; defaults to updating the lexicon in place
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct LexiconArg {
    /// Lexicon directory
    #[arg(long = "lexicon", env = "ARABMORPH_LEXICON")]
    dir: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input text; `-` reads standard input
    input: PathBuf,
    #[command(flatten)]
    lexicon: LexiconArg,
    /// Active flags, e.g. `MSA` or `CA|NE`; `classical` selects the classical preset
    #[arg(long)]
    flags: String,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    lm: Option<PathBuf>,
    /// Frequency list; replaces the one stored in the model
    #[arg(long)]
    freq: Option<PathBuf>,
    #[arg(long, requires = "lm")]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Tei)]
    format: OutputFormat,
    /// Treat hamzated alif forms and wasla as bare alif when matching
    #[arg(long)]
    normalize_alif: bool,
    /// Replacement transliteration table
    #[arg(long)]
    translit: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Tei,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImportFormat {
    Tei,
    Wordlist,
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn display_name(path: &Path) -> String {
    path.file_name().map_or_else(
        || path.display().to_string(),
        |n| n.to_string_lossy().into_owned(),
    )
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating a temporary file in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, contents: &str) -> Result<()> {
    match output {
        Some(p) => write_atomic(p, contents),
        None => {
            io::stdout().write_all(contents.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_flags(s: &str) -> Result<FlagSet> {
    if s.trim().eq_ignore_ascii_case("classical") {
        return Ok(FlagSet::classical_preset());
    }
    let flags = FlagSet::parse_list(s)?;
    if flags.is_empty() {
        bail!("no flags given; valid flags: {}", FlagSet::valid_names());
    }
    Ok(flags)
}

fn load_lexicon(dir: &Path) -> Result<Lexicon> {
    Lexicon::load_dir(dir).with_context(|| format!("loading lexicon from {}", dir.display()))
}

fn load_freq(path: &Path) -> Result<FreqTable> {
    Ok(FreqTable::parse(&read_text(path)?, &display_name(path))?)
}

fn analyze(args: AnalyzeArgs) -> Result<()> {
    // everything the run depends on is loaded before the input is touched
    let active = parse_flags(&args.flags)?;
    let lex = load_lexicon(&args.lexicon.dir)?;
    let rules = match &args.rules {
        Some(p) => parse_rules(&read_text(p)?, &display_name(p))?,
        None => Vec::new(),
    };
    let freq = args.freq.as_deref().map(load_freq).transpose()?;
    let model = match &args.lm {
        Some(p) => {
            let mut m = LmModel::load(&read_text(p)?, &display_name(p))?;
            if let Some(f) = freq {
                m = m.with_freq(f);
            }
            if let Some(l) = args.lambda {
                m = m.with_lambda(l)?;
            }
            m
        }
        None => LmModel::frequency_only(freq.unwrap_or_default()),
    };
    let table = match &args.translit {
        Some(p) => Some(
            Translit::from_table(&read_text(p)?)
                .with_context(|| format!("loading {}", p.display()))?,
        ),
        None => None,
    };
    let text = read_text(&args.input)?;

    let mut pipeline = Pipeline::new(&lex, active, rules, model);
    if let Some(t) = &table {
        pipeline = pipeline.with_translit(t);
    }
    let pipeline = pipeline.fold_alif(args.normalize_alif);
    let out = pipeline.run(&text);
    let rendered = match args.format {
        OutputFormat::Tei => out
            .to_tei(TeiMeta::new(display_name(&args.input), active.to_string()))
            .to_xml(),
        OutputFormat::Tsv => out.to_tsv(pipeline.rules()),
    };
    io::stdout().write_all(rendered.as_bytes())?;
    eprintln!("{}", out.summary);
    Ok(())
}

fn train_lm(gold: &Path, freq: Option<&Path>, lambda: f64, output: &Path) -> Result<()> {
    let freq = freq.map(load_freq).transpose()?.unwrap_or_default();
    let sentences = read_gold(&read_text(gold)?, &display_name(gold))?;
    let tuples: Vec<Vec<_>> = sentences
        .iter()
        .map(|s| s.iter().map(|t| t.lemma_pos()).collect())
        .collect();
    let model = LmModel::train(&tuples, freq, lambda)?;
    write_atomic(output, &model.serialize())?;
    eprintln!(
        "{} tuples, vocabulary {}, written to {}",
        model.sample_size(),
        model.vocab_size(),
        output.display()
    );
    Ok(())
}

fn eval(
    lexicon: &Path,
    system: &Path,
    gold: &Path,
    format: ReportFormat,
    output: Option<&Path>,
) -> Result<()> {
    let lex = load_lexicon(lexicon)?;
    let doc =
        parse_tei(&read_text(system)?).with_context(|| format!("parsing {}", system.display()))?;
    let gold: Vec<_> = read_gold(&read_text(gold)?, &display_name(gold))?
        .into_iter()
        .flatten()
        .collect();
    let report = EvalReport::compute(&system_from_tei(&doc), &gold, &lex.lemma_pos_inventory())?;
    let rendered = match format {
        ReportFormat::Table => format!("{report}\n"),
        ReportFormat::Tsv => report.to_tsv(),
    };
    emit(output, &rendered)
}

fn import(
    input: &Path,
    flags: &str,
    from: Option<ImportFormat>,
    kind: &str,
    lexicon: Option<&Path>,
    output: &Path,
) -> Result<()> {
    let assign = parse_flags(flags)?;
    let kind = EntryKind::parse(kind)
        .with_context(|| format!("unknown entry kind {kind:?}; expected prefix, stem or suffix"))?;
    let from = from.unwrap_or_else(|| match input.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("xml") => ImportFormat::Tei,
        _ => ImportFormat::Wordlist,
    });
    let live = lexicon.map(load_lexicon).transpose()?.unwrap_or_default();
    let text = read_text(input)?;
    let source = display_name(input);
    let batch = match from {
        ImportFormat::Tei => {
            if kind != EntryKind::Stem {
                bail!("dictionary imports always produce stems");
            }
            import_tei_dictionary(&text, &source, assign, &live)?
        }
        ImportFormat::Wordlist => import_wordlist(&text, &source, kind, assign)?,
    };
    write_atomic(output, &batch.to_tsv())?;
    eprintln!("{} candidates written to {}", batch.len(), output.display());
    Ok(())
}

fn merge(review: &Path, lexicon: &Path, output: Option<&Path>) -> Result<()> {
    let lex = load_lexicon(lexicon)?;
    let batch = ReviewBatch::from_tsv(&read_text(review)?, &display_name(review))?;
    let (merged, warnings) = merge_reviewed(&lex, &batch)?;
    for w in &warnings {
        log::warn!("{w}");
    }
    let dir = output.unwrap_or(lexicon);
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    for (name, contents) in merged.render_files() {
        write_atomic(&dir.join(name), &contents)?;
    }
    eprintln!(
        "{} entries ({} added), written to {}",
        merged.len(),
        merged.len() - lex.len(),
        dir.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => analyze(args),
        Command::Correct { input, output } => {
            let doc = parse_tei(&read_text(&input)?)
                .with_context(|| format!("parsing {}", input.display()))?;
            emit(output.as_deref(), &doc.apply_corrections().to_xml())
        }
        Command::TrainLm {
            gold,
            freq,
            lambda,
            output,
        } => train_lm(&gold, freq.as_deref(), lambda, &output),
        Command::Eval {
            lexicon,
            system,
            gold,
            format,
            output,
        } => eval(&lexicon.dir, &system, &gold, format, output.as_deref()),
        Command::Import {
            input,
            flags,
            from,
            kind,
            lexicon,
            output,
        } => import(&input, &flags, from, &kind, lexicon.as_deref(), &output),
        Command::Merge {
            review,
            lexicon,
            output,
        } => merge(&review, &lexicon.dir, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
