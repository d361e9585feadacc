//! Command-line front end.
//!
//! Every command validates its whole flag set and checks that its input
//! paths exist before reading anything. Tabular output is tab-separated with
//! a header line (the feature matrix is comma-separated), written atomically
//! to `--out` or to stdout when `--out` is absent.
//!
//! Exit codes: 0 success, 2 usage or validation error, 1 runtime failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::denoiser::{
    denoise, export_denoised_corpus, stability_report, sweep, write_partition, DenoiseConfig,
    Threshold, PARTITION_HEADER,
};
use crate::error::Error;
use crate::evalstats::{
    kfold_split, paired_t, write_metrics, ConfusionCounts, FoldScores, MetricsRow, METRICS_HEADER,
};
use crate::mlprep::{
    apply_labels, balance_report, extract_features, load_labels, load_terms, read_features, smote,
    write_features, BalanceReport, Label, Lexicons, SmoteConfig,
};
use crate::output::write_atomic;
use crate::readability::{score_all, sentence_vectors, write_scores, IndexKind, SCORE_HEADER};
use crate::relminer::{
    accuracy_against_gold, annotate_gold, load_concepts, load_gold, rank_by_frequency,
    rank_tallies, write_ranked, ConceptMiner, PairTally, RANKED_HEADER,
};
use crate::textseg::{read_document, Abbreviations, Document, Segmenter, SyllableCounter};

/// Directory searched for lexicon files when the matching flag is absent.
pub const LEXICON_DIR_ENV: &str = "TEXTDENOISE_LEXICON_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "textdenoise",
    version,
    about = "Keep the hardest-to-read sentences of a text and analyse them"
)]
struct Cli {
    /// Suppress progress messages (warnings still go to stderr).
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SegmentOpts {
    /// Abbreviation list replacing the built-in one (one per line).
    #[arg(long, value_name = "FILE")]
    abbreviations: Option<PathBuf>,

    /// Syllable exceptions, `word<TAB>count` per line, merged over the built-in table.
    #[arg(long, value_name = "FILE")]
    syllables: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CorpusOpts {
    /// A `.txt` file or a directory of them.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,

    #[command(flatten)]
    segment: SegmentOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RankBy {
    Ppv,
    Frequency,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-sentence readability scores.
    Score {
        #[command(flatten)]
        corpus: CorpusOpts,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Split every document into denoised and noise sentences.
    Denoise {
        #[command(flatten)]
        corpus: CorpusOpts,
        #[arg(long, default_value = "fi", value_parser = parse_index)]
        index: IndexKind,
        #[arg(long, default_value = "0.3", value_parser = parse_threshold)]
        threshold: Threshold,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Also write `<doc_id>.denoised.txt` files here.
        #[arg(long, value_name = "DIR")]
        export_dir: Option<PathBuf>,
    },
    /// Partitions at several thresholds, optionally with concept-pair stability.
    Sweep {
        #[command(flatten)]
        corpus: CorpusOpts,
        #[arg(long, default_value = "fi", value_parser = parse_index)]
        index: IndexKind,
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_threshold)]
        thresholds: Vec<Threshold>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Concept list; enables the stability report.
        #[arg(long, value_name = "FILE", requires = "stability_out")]
        concepts: Option<PathBuf>,
        #[arg(long, value_name = "FILE", requires = "concepts")]
        stability_out: Option<PathBuf>,
    },
    /// Rank concept pairs found in the denoised text.
    Mine {
        #[command(flatten)]
        corpus: CorpusOpts,
        #[arg(long, default_value = "fi", value_parser = parse_index)]
        index: IndexKind,
        #[arg(long, default_value = "0.3", value_parser = parse_threshold)]
        threshold: Threshold,
        #[arg(long, value_name = "FILE")]
        concepts: PathBuf,
        /// Related pairs, `conceptA<TAB>conceptB` per line.
        #[arg(long, value_name = "FILE")]
        gold: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "ppv")]
        rank_by: RankBy,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Micro/macro metrics, paired t-test, or k-fold assignment.
    #[command(group(ArgGroup::new("mode").required(true).args(["counts", "folds", "split"])))]
    Eval {
        /// `index<TAB>item<TAB>tp<TAB>fp<TAB>fn` records.
        #[arg(long, value_name = "FILE")]
        counts: Option<PathBuf>,
        /// `fold<TAB>system_a<TAB>system_b` records.
        #[arg(long, value_name = "FILE")]
        folds: Option<PathBuf>,
        /// Item ids, one per line, to deal into folds.
        #[arg(long, value_name = "FILE")]
        split: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Per-sentence feature matrix for external learners.
    Features {
        #[command(flatten)]
        corpus: CorpusOpts,
        /// `doc_id<TAB>sentence_index<TAB>label` records.
        #[arg(long, value_name = "FILE")]
        labels: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        stopwords: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        entities: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        verbs: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        semantic: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Oversample the positive class of a feature matrix.
    Smote {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        multiplier: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    s.parse::<Threshold>().map_err(|e| e.to_string())
}

fn parse_index(s: &str) -> Result<IndexKind, String> {
    s.parse::<IndexKind>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult<T> = Result<T, Failure>;

struct Diagnostics {
    quiet: bool,
}

impl Diagnostics {
    fn progress(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn warn(&self, msg: impl AsRef<str>) {
        eprintln!("warning: {}", msg.as_ref());
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let diag = Diagnostics { quiet: cli.quiet };
    match execute(cli.command, &diag) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Documents loaded from a file or directory, plus notes for the diagnostic stream.
#[derive(Debug, Default)]
pub struct LoadedCorpus {
    pub documents: Vec<Document>,
    pub notes: Vec<String>,
}

/// One document per `.txt` file of a directory (ordered by doc id), or one
/// document for a single file.
pub fn load_corpus(path: &Path, segmenter: &Segmenter) -> crate::Result<LoadedCorpus> {
    let mut corpus = LoadedCorpus::default();
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_file() {
        corpus.documents.push(read_document(segmenter, path)?);
        return Ok(corpus);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).map_err(|e| Error::io(path, e))? {
        let p = entry.map_err(|e| Error::io(path, e))?.path();
        if !p.is_file() {
            continue;
        }
        if p.extension().is_some_and(|e| e == "txt") {
            files.push(p);
        } else {
            corpus.notes.push(format!("skipping non-.txt file {}", p.display()));
        }
    }
    corpus.notes.sort();
    for f in &files {
        corpus.documents.push(read_document(segmenter, f)?);
    }
    corpus
        .documents
        .sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.source_path.cmp(&b.source_path)));
    if corpus.documents.is_empty() {
        corpus
            .notes
            .push(format!("no .txt documents found in {}", path.display()));
    }
    Ok(corpus)
}

fn lexicon_default(flag: &Option<PathBuf>, file_name: &str) -> Option<PathBuf> {
    if flag.is_some() {
        return flag.clone();
    }
    let dir = std::env::var_os(LEXICON_DIR_ENV)?;
    let candidate = Path::new(&dir).join(file_name);
    candidate.is_file().then_some(candidate)
}

fn require_exists(paths: &[&Path]) -> CliResult<()> {
    for p in paths {
        if !p.exists() {
            return Err(Failure::Usage(format!("{}: no such file or directory", p.display())));
        }
    }
    Ok(())
}

impl SegmentOpts {
    fn resolved(&self) -> (Option<PathBuf>, Option<PathBuf>) {
        (
            lexicon_default(&self.abbreviations, "abbreviations.txt"),
            lexicon_default(&self.syllables, "syllables.tsv"),
        )
    }
}

impl CorpusOpts {
    fn paths(&self) -> Vec<PathBuf> {
        let (abbr, syl) = self.segment.resolved();
        [Some(self.input.clone()), abbr, syl].into_iter().flatten().collect()
    }

    fn load(&self, diag: &Diagnostics) -> CliResult<Vec<Document>> {
        let (abbr, syl) = self.segment.resolved();
        let abbreviations = match abbr {
            Some(p) => Abbreviations::from_file(&p)?,
            None => Abbreviations::default(),
        };
        let mut syllables = SyllableCounter::default();
        if let Some(p) = syl {
            syllables.load_lexicon(&p)?;
        }
        let corpus = load_corpus(&self.input, &Segmenter::new(abbreviations, syllables))?;
        for note in &corpus.notes {
            diag.warn(note);
        }
        let mut docs = Vec::with_capacity(corpus.documents.len());
        for doc in corpus.documents {
            if doc.is_empty() {
                diag.warn(format!("document {:?} has no sentences; skipped", doc.id));
            } else {
                docs.push(doc);
            }
        }
        diag.progress(format!("loaded {} document(s)", docs.len()));
        Ok(docs)
    }
}

fn emit<F>(out: &Option<PathBuf>, fill: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => write_atomic(path, fill)?,
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock)
                .and_then(|_| lock.flush())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(())
}

fn execute(command: Command, diag: &Diagnostics) -> CliResult<()> {
    match command {
        Command::Score { corpus, out } => {
            require_exists(&corpus.paths().iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
            let docs = corpus.load(diag)?;
            let mut scored = Vec::with_capacity(docs.len());
            for doc in &docs {
                scored.push((doc.id.as_str(), score_all(doc)?));
            }
            emit(&out, |w| {
                writeln!(w, "{SCORE_HEADER}")?;
                for (id, scores) in &scored {
                    write_scores(w, id, scores)?;
                }
                Ok(())
            })
        }
        Command::Denoise {
            corpus,
            index,
            threshold,
            out,
            export_dir,
        } => {
            require_exists(&corpus.paths().iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
            let docs = corpus.load(diag)?;
            let config = DenoiseConfig::new(index, threshold);
            let mut partitions = Vec::with_capacity(docs.len());
            for doc in &docs {
                partitions.push(denoise(doc, &sentence_vectors(doc)?, config)?);
            }
            emit(&out, |w| {
                writeln!(w, "{PARTITION_HEADER}")?;
                for p in &partitions {
                    write_partition(w, p)?;
                }
                Ok(())
            })?;
            if let Some(dir) = export_dir {
                let files = export_denoised_corpus(&docs, config, &dir)?;
                diag.progress(format!("exported {} denoised file(s) to {}", files.len(), dir.display()));
            }
            Ok(())
        }
        Command::Sweep {
            corpus,
            index,
            thresholds,
            out,
            concepts,
            stability_out,
        } => {
            let mut paths = corpus.paths();
            paths.extend(concepts.clone());
            require_exists(&paths.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
            let miner = match &concepts {
                Some(p) => Some(ConceptMiner::new(&load_concepts(p)?)?),
                None => None,
            };
            let docs = corpus.load(diag)?;
            let values: Vec<f64> = thresholds.iter().map(|t| t.value()).collect();
            let mut blocks = Vec::with_capacity(docs.len());
            let mut stability = Vec::new();
            for doc in &docs {
                blocks.push(sweep(doc, index, &values)?);
                if let Some(miner) = &miner {
                    let pairs = miner.pairs();
                    if !pairs.is_empty() {
                        stability.push((doc.id.clone(), stability_report(doc, index, &pairs, &values)?));
                    }
                }
            }
            emit(&out, |w| {
                writeln!(w, "threshold\t{PARTITION_HEADER}")?;
                for block in &blocks {
                    for (t, p) in block {
                        for (i, part) in p.records() {
                            writeln!(w, "{t}\t{}\t{i}\t{}", p.doc_id, part.name())?;
                        }
                    }
                }
                Ok(())
            })?;
            if stability_out.is_some() {
                emit(&stability_out, |w| {
                    writeln!(w, "doc_id\tthreshold\tconcept_a\tconcept_b\tfrequency")?;
                    for (id, rows) in &stability {
                        for r in rows {
                            writeln!(
                                w,
                                "{id}\t{}\t{}\t{}\t{}",
                                r.threshold,
                                r.pair.a(),
                                r.pair.b(),
                                r.frequency
                            )?;
                        }
                    }
                    Ok(())
                })?;
            }
            Ok(())
        }
        Command::Mine {
            corpus,
            index,
            threshold,
            concepts,
            gold,
            rank_by,
            out,
        } => {
            let mut paths = corpus.paths();
            paths.push(concepts.clone());
            paths.extend(gold.clone());
            require_exists(&paths.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
            let miner = ConceptMiner::new(&load_concepts(&concepts)?)?;
            let gold = gold.as_deref().map(load_gold).transpose()?;
            let docs = corpus.load(diag)?;
            let config = DenoiseConfig::new(index, threshold);
            let mut tallies: BTreeMap<_, PairTally> = BTreeMap::new();
            for doc in &docs {
                let partition = denoise(doc, &sentence_vectors(doc)?, config)?;
                for (pair, t) in miner.tally(doc, &partition) {
                    *tallies.entry(pair).or_default() += t;
                }
            }
            tallies.retain(|_, t| t.tp > 0);
            let mut ranked = match rank_by {
                RankBy::Ppv => rank_tallies(&tallies),
                RankBy::Frequency => {
                    rank_by_frequency(&tallies.iter().map(|(p, t)| (p.clone(), t.tp)).collect())
                }
            };
            if let Some(gold) = &gold {
                annotate_gold(&mut ranked, gold);
                if !ranked.is_empty() {
                    let acc = accuracy_against_gold(&ranked, gold)?;
                    diag.progress(format!("accuracy against gold: {acc:.4} over {} pair(s)", ranked.len()));
                }
            }
            emit(&out, |w| {
                writeln!(w, "{RANKED_HEADER}")?;
                write_ranked(w, &ranked)
            })
        }
        Command::Eval {
            counts,
            folds,
            split,
            k,
            seed,
            out,
        } => {
            let input = counts.as_ref().or(folds.as_ref()).or(split.as_ref()).cloned();
            require_exists(&input.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;
            if split.is_some() && k < 2 {
                return Err(Failure::Usage(format!("--k must be at least 2, got {k}")));
            }
            if let Some(path) = counts {
                let rows = read_counts(&path)?;
                emit(&out, |w| {
                    writeln!(w, "{METRICS_HEADER}")?;
                    write_metrics(w, &rows)
                })
            } else if let Some(path) = folds {
                let scores = read_fold_scores(&path)?;
                let r = paired_t(&scores);
                emit(&out, |w| {
                    writeln!(w, "folds\tmean_difference\tsd_difference\tt\tdf\tsignificant")?;
                    let sig = match r.significant {
                        Some(true) => "yes",
                        Some(false) => "no",
                        None => "n/a",
                    };
                    writeln!(
                        w,
                        "{}\t{:.4}\t{:.4}\t{:.4}\t{}\t{sig}",
                        scores.folds(),
                        r.mean_difference,
                        r.sd_difference,
                        r.t,
                        r.df
                    )
                })
            } else {
                let path = split.expect("clap enforces one mode");
                let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                let ids: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
                let folds = kfold_split(&ids, k, seed)?;
                emit(&out, |w| {
                    writeln!(w, "item\tfold")?;
                    for (f, fold) in folds.iter().enumerate() {
                        for id in fold {
                            writeln!(w, "{id}\t{}", f + 1)?;
                        }
                    }
                    Ok(())
                })
            }
        }
        Command::Features {
            corpus,
            labels,
            stopwords,
            entities,
            verbs,
            semantic,
            out,
        } => {
            let stopwords = lexicon_default(&stopwords, "stopwords.txt").ok_or_else(|| {
                Failure::Usage(format!(
                    "a stopword lexicon is required: pass --stopwords or set {LEXICON_DIR_ENV}"
                ))
            })?;
            let entities = lexicon_default(&entities, "entities.txt");
            let verbs = lexicon_default(&verbs, "verbs.txt");
            let semantic = lexicon_default(&semantic, "semantic.txt");
            let mut paths = corpus.paths();
            paths.push(stopwords.clone());
            paths.extend([&labels, &entities, &verbs, &semantic].into_iter().flatten().cloned());
            require_exists(&paths.iter().map(PathBuf::as_path).collect::<Vec<_>>())?;

            let lexicons = Lexicons {
                stopwords: Some(load_terms(&stopwords)?.into_iter().collect()),
                entities: entities.as_deref().map(load_terms).transpose()?.unwrap_or_default(),
                verbs: verbs.as_deref().map(load_terms).transpose()?.unwrap_or_default(),
                semantic: semantic.as_deref().map(load_terms).transpose()?,
            };
            let labels = labels.as_deref().map(load_labels).transpose()?;
            let docs = corpus.load(diag)?;
            let mut vectors = Vec::new();
            for doc in &docs {
                vectors.extend(extract_features(doc, &sentence_vectors(doc)?, &lexicons)?);
            }
            if let Some(labels) = &labels {
                apply_labels(&mut vectors, labels);
                let missing = vectors.iter().filter(|v| v.label.is_none()).count();
                if missing > 0 {
                    diag.warn(format!("{missing} sentence(s) have no label"));
                } else {
                    report_balance(diag, "labels", &balance_report(&vectors)?);
                }
            }
            let schema = lexicons.schema();
            emit(&out, |w| write_features(w, &schema, &vectors))
        }
        Command::Smote {
            input,
            k,
            multiplier,
            seed,
            out,
        } => {
            if k < 1 || multiplier < 1 {
                return Err(Failure::Usage("--k and --multiplier must be at least 1".into()));
            }
            require_exists(&[input.as_path()])?;
            let (schema, rows) = read_features(&input)?;
            let before = balance_report(&rows)?;
            report_balance(diag, "before", &before);
            let minority: Vec<_> = rows
                .iter()
                .filter(|v| v.label == Some(Label::Positive))
                .cloned()
                .collect();
            let synthetic = smote(&minority, &SmoteConfig { k, multiplier, seed })?;
            let mut all = rows;
            all.extend(synthetic);
            report_balance(diag, "after", &balance_report(&all)?);
            emit(&out, |w| write_features(w, &schema, &all))
        }
    }
}

fn report_balance(diag: &Diagnostics, stage: &str, r: &BalanceReport) {
    diag.progress(format!(
        "{stage}: {} positive, {} negative, skew {:.2}",
        r.positive, r.negative, r.skew_ratio
    ));
}

fn data_lines<'a>(text: &'a str, header: &str) -> impl Iterator<Item = (usize, Vec<String>)> + 'a {
    let header = header.to_string();
    text.lines()
        .enumerate()
        .filter(move |(i, l)| {
            let l = l.trim();
            !(l.is_empty() || l.starts_with('#') || (*i == 0 && l.starts_with(header.as_str())))
        })
        .map(|(i, l)| (i + 1, l.split('\t').map(|c| c.trim().to_string()).collect()))
}

fn read_counts(path: &Path) -> crate::Result<Vec<MetricsRow>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut order: Vec<String> = Vec::new();
    let mut items: BTreeMap<String, Vec<ConfusionCounts>> = BTreeMap::new();
    for (line, cols) in data_lines(&text, "index") {
        if cols.len() != 5 {
            return Err(bad(line, "expected index<TAB>item<TAB>tp<TAB>fp<TAB>fn".into()));
        }
        let num = |s: &str| s.parse::<u64>().map_err(|e| bad(line, format!("bad count {s:?}: {e}")));
        let c = ConfusionCounts::new(num(&cols[2])?, num(&cols[3])?, num(&cols[4])?);
        if !items.contains_key(&cols[0]) {
            order.push(cols[0].clone());
        }
        items.entry(cols[0].clone()).or_default().push(c);
    }
    order
        .into_iter()
        .map(|name| {
            let rows = &items[&name];
            MetricsRow::compute(name, rows)
        })
        .collect()
}

fn read_fold_scores(path: &Path) -> crate::Result<FoldScores> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let bad = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (line, cols) in data_lines(&text, "fold") {
        if cols.len() != 3 {
            return Err(bad(line, "expected fold<TAB>system_a<TAB>system_b".into()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| bad(line, format!("bad score {s:?}: {e}")));
        a.push(num(&cols[1])?);
        b.push(num(&cols[2])?);
    }
    FoldScores::new(a, b)
}
