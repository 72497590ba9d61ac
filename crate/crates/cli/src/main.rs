//! `dlgsum`: summarize dialogue transcripts, evaluate summaries with
//! ROUGE, and inspect the intermediate word graphs and topic segments.

mod config;
mod report;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use dlgsum_core::corpus::{
    dataset_stats, read_corpus_file, read_references, CorpusDocument,
};
use dlgsum_core::graph::build_graph;
use dlgsum_core::kcore::{core_decompose, extract_keywords};
use dlgsum_core::pipeline::summarize_document;
use dlgsum_core::rouge::lead3;
use dlgsum_core::segment::{gap_distances, topic_vectors};
use dlgsum_core::tagger::{StopwordSet, Tagger};
use dlgsum_core::transcript::split_sentences;

use config::{AppError, Overrides};

#[derive(Parser)]
#[command(name = "dlgsum", version, about = "Unsupervised dialogue summarizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a corpus into JSON Lines records.
    Summarize(SummarizeArgs),
    /// Score system summaries against references with ROUGE-1/2/L.
    Evaluate(EvaluateArgs),
    /// Print dataset size statistics.
    Stats(StatsArgs),
    /// Export a document's word graph as DOT.
    GraphDump(GraphDumpArgs),
    /// Emit CSV of topic-gap distances for plotting.
    PlotData(PlotDataArgs),
}

#[derive(Args)]
struct CommonGraphArgs {
    /// Edge weight mode: `paper` or `filippova`.
    #[arg(long)]
    edge_weight: Option<String>,
    /// Custom stopword list, one lowercase word per line
    /// (default: bundled list, or $DLGSUM_STOPWORDS).
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Input corpus (JSON Lines, optionally .gz).
    input: PathBuf,
    /// Output path (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Disable reported-speech conversion (semi-extractive ablation).
    #[arg(long)]
    no_pov: bool,
    /// Replace the pipeline with a baseline (`lead3`).
    #[arg(long)]
    baseline: Option<String>,
    /// Number of topic segments p for long transcripts.
    #[arg(long)]
    topics: Option<usize>,
    /// Transcript length (chars) above which segmentation activates.
    #[arg(long)]
    segment_threshold_chars: Option<usize>,
    #[arg(long)]
    k_paths: Option<usize>,
    #[arg(long)]
    search_depth: Option<usize>,
    #[arg(long)]
    min_tokens: Option<usize>,
    /// Accept paths without a verb node.
    #[arg(long)]
    no_verb_filter: bool,
    /// Leave possessive pronouns untouched during conversion.
    #[arg(long)]
    pov_keep_possessives: bool,
    /// Worker threads for document-level parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Add per-segment keyword lists to each record.
    #[arg(long)]
    dump_keywords: bool,
    /// Add per-line speaker/segment/score diagnostics to each record.
    #[arg(long)]
    dump_scores: bool,
    /// Add segment sentence ranges to each record.
    #[arg(long)]
    dump_segments: bool,
    #[command(flatten)]
    graph: CommonGraphArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    /// System output JSON Lines ({"id", "summary"}).
    #[arg(long)]
    system: PathBuf,
    /// Reference JSON Lines ({"id", "summary"}); repeated ids act as
    /// multiple references.
    #[arg(long)]
    reference: PathBuf,
    /// Directory for report.json and report.csv (default: current).
    #[arg(short, long, default_value = ".")]
    output_dir: PathBuf,
    /// ROUGE-L variant: `whole` (whole-summary LCS) or `union`.
    #[arg(long, default_value = "whole")]
    rouge_l_mode: String,
}

#[derive(Args)]
struct StatsArgs {
    input: PathBuf,
}

#[derive(Args)]
struct GraphDumpArgs {
    input: PathBuf,
    /// Document id to dump (default: first document).
    #[arg(long)]
    doc: Option<String>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    graph: CommonGraphArgs,
}

#[derive(Args)]
struct PlotDataArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    graph: CommonGraphArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Summarize(args) => cmd_summarize(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Stats(args) => cmd_stats(args),
        Command::GraphDump(args) => cmd_graph_dump(args),
        Command::PlotData(args) => cmd_plot_data(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn resolve_stopwords(arg: &Option<PathBuf>) -> Option<PathBuf> {
    arg.clone()
        .or_else(|| std::env::var_os("DLGSUM_STOPWORDS").map(PathBuf::from))
}

fn load_stopword_set(path: &Option<PathBuf>) -> Result<StopwordSet, AppError> {
    match resolve_stopwords(path) {
        Some(p) => StopwordSet::from_file(&p)
            .map_err(|e| AppError::Input(format!("stopword list: {e}"))),
        None => Ok(StopwordSet::bundled()),
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, AppError> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(File::create(p).map_err(
            |e| AppError::Input(format!("cannot create {}: {e}", p.display())),
        )?))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn load_corpus(path: &Path) -> Result<Vec<CorpusDocument>, AppError> {
    read_corpus_file(path)
        .map_err(|e| AppError::Input(format!("{}: {e}", path.display())))
}

fn cmd_summarize(args: SummarizeArgs) -> Result<(), AppError> {
    let overrides = Overrides::from_args(&args);
    let mut settings = match &args.config {
        Some(path) => config::read_config_file(path)?,
        None => config::Settings::default(),
    };
    settings.apply(&overrides)?;
    let pipeline_cfg = settings.to_pipeline_config()?;
    pipeline_cfg
        .validate()
        .map_err(|e| AppError::Config(e.to_string()))?;

    if let Some(name) = &args.baseline {
        if name != "lead3" {
            return Err(AppError::Config(format!("unknown baseline: {name}")));
        }
    }

    let docs = load_corpus(&args.input)?;

    // Echo the effective configuration next to the output for
    // reproducibility.
    if let Some(out) = &args.output {
        let dir = out.parent().filter(|p| !p.as_os_str().is_empty());
        let echo = dir.unwrap_or(Path::new(".")).join("effective-config.txt");
        std::fs::write(&echo, settings.render())
            .map_err(|e| AppError::Input(format!("{}: {e}", echo.display())))?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| AppError::Config(e.to_string()))?;

    let records: Vec<Result<serde_json::Value, String>> = pool.install(|| {
        docs.par_iter()
            .map(|doc| {
                if args.baseline.is_some() {
                    let summary = lead3(&doc.transcript);
                    return Ok(serde_json::json!({
                        "id": doc.transcript.doc_id,
                        "summary": summary,
                        "sentences": split_sentences(&summary),
                        "keywords": [],
                        "threshold": 0.0,
                        "segments": 1,
                    }));
                }
                summarize_document(&doc.transcript, &pipeline_cfg)
                    .map(|bundle| {
                        let mut rec = bundle.to_record();
                        let obj = rec.as_object_mut().unwrap();
                        if args.dump_keywords {
                            obj.insert(
                                "segment_keywords".into(),
                                serde_json::json!(bundle.segment_keywords),
                            );
                        }
                        if args.dump_scores {
                            obj.insert(
                                "lines".into(),
                                serde_json::json!(bundle.lines),
                            );
                        }
                        if args.dump_segments {
                            obj.insert(
                                "segment_ranges".into(),
                                serde_json::json!(bundle.segment_ranges),
                            );
                        }
                        rec
                    })
                    .map_err(|e| format!("{}: {e}", doc.transcript.doc_id))
            })
            .collect()
    });

    let mut out = open_output(&args.output)?;
    let mut failures = Vec::new();
    for record in records {
        match record {
            Ok(rec) => writeln!(out, "{rec}")
                .map_err(|e| AppError::Input(e.to_string()))?,
            Err(msg) => failures.push(msg),
        }
    }
    out.flush().map_err(|e| AppError::Input(e.to_string()))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(AppError::Input(format!(
            "{} document(s) failed:\n{}",
            failures.len(),
            failures.join("\n")
        )))
    }
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), AppError> {
    let union_lcs = match args.rouge_l_mode.as_str() {
        "whole" => false,
        "union" => true,
        other => {
            return Err(AppError::Config(format!(
                "unknown rouge-l mode: {other} (expected whole|union)"
            )))
        }
    };
    let system = read_references(&args.system)
        .map_err(|e| AppError::Input(format!("{}: {e}", args.system.display())))?;
    let references = read_references(&args.reference).map_err(|e| {
        AppError::Input(format!("{}: {e}", args.reference.display()))
    })?;

    let missing_refs: Vec<&String> = system
        .keys()
        .filter(|id| !references.contains_key(*id))
        .collect();
    let missing_sys: Vec<&String> = references
        .keys()
        .filter(|id| !system.contains_key(*id))
        .collect();
    if !missing_refs.is_empty() || !missing_sys.is_empty() {
        let mut msg = String::from("id mismatch between system and reference:");
        if !missing_refs.is_empty() {
            msg.push_str(&format!(
                "\n  no reference for: {}",
                missing_refs
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        if !missing_sys.is_empty() {
            msg.push_str(&format!(
                "\n  no system output for: {}",
                missing_sys
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        return Err(AppError::Input(msg));
    }

    let pairs: BTreeMap<&String, (&Vec<String>, &Vec<String>)> = system
        .iter()
        .map(|(id, sys)| (id, (sys, &references[id])))
        .collect();
    let rep = report::build_report(&pairs, union_lcs)
        .map_err(AppError::Input)?;

    std::fs::create_dir_all(&args.output_dir)
        .map_err(|e| AppError::Input(e.to_string()))?;
    let json_path = args.output_dir.join("report.json");
    let csv_path = args.output_dir.join("report.csv");
    std::fs::write(&json_path, rep.to_json())
        .map_err(|e| AppError::Input(e.to_string()))?;
    std::fs::write(&csv_path, rep.to_csv())
        .map_err(|e| AppError::Input(e.to_string()))?;
    println!(
        "documents={} R1={:.4} R2={:.4} RL={:.4}",
        rep.per_doc.len(),
        rep.mean.0,
        rep.mean.1,
        rep.mean.2
    );
    println!("reports: {} {}", json_path.display(), csv_path.display());
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), AppError> {
    let docs = load_corpus(&args.input)?;
    let stats =
        dataset_stats(&docs).map_err(|e| AppError::Input(e.to_string()))?;
    println!("documents: {}", stats.documents);
    println!("mean dialogue length (chars): {}", stats.mean_chars.round());
    println!("mean dialogue length (words): {}", stats.mean_words.round());
    println!("total utterances: {}", stats.total_utterances);
    Ok(())
}

fn graph_inputs(
    args_graph: &CommonGraphArgs,
) -> Result<(StopwordSet, dlgsum_core::graph::EdgeWeightMode), AppError> {
    let stopwords = load_stopword_set(&args_graph.stopwords)?;
    let mode = match &args_graph.edge_weight {
        Some(s) => s
            .parse()
            .map_err(|e: dlgsum_core::Error| AppError::Config(e.to_string()))?,
        None => dlgsum_core::graph::EdgeWeightMode::Paper,
    };
    Ok((stopwords, mode))
}

fn cmd_graph_dump(args: GraphDumpArgs) -> Result<(), AppError> {
    let docs = load_corpus(&args.input)?;
    let doc = match &args.doc {
        Some(id) => docs
            .iter()
            .find(|d| &d.transcript.doc_id == id)
            .ok_or_else(|| AppError::Input(format!("no document with id {id}")))?,
        None => docs
            .first()
            .ok_or_else(|| AppError::Input("empty corpus".to_string()))?,
    };
    let (stopwords, mode) = graph_inputs(&args.graph)?;
    let tagger = Tagger::new();
    let sentences =
        dlgsum_core::pipeline::prepare_sentences(&doc.transcript, &tagger)
            .map_err(|e| AppError::Input(e.to_string()))?;
    let graph = build_graph(&sentences, &stopwords, mode)
        .map_err(|e| AppError::Input(e.to_string()))?;
    let mut out = open_output(&args.output)?;
    out.write_all(graph.export_dot().as_bytes())
        .map_err(|e| AppError::Input(e.to_string()))?;
    Ok(())
}

fn cmd_plot_data(args: PlotDataArgs) -> Result<(), AppError> {
    let docs = load_corpus(&args.input)?;
    let (stopwords, mode) = graph_inputs(&args.graph)?;
    let tagger = Tagger::new();
    let mut out = open_output(&args.output)?;
    writeln!(out, "doc_id,gap_index,distance")
        .map_err(|e| AppError::Input(e.to_string()))?;
    for doc in &docs {
        let sentences =
            dlgsum_core::pipeline::prepare_sentences(&doc.transcript, &tagger)
                .map_err(|e| AppError::Input(e.to_string()))?;
        if sentences.len() < 2 {
            continue;
        }
        let graph = build_graph(&sentences, &stopwords, mode)
            .map_err(|e| AppError::Input(e.to_string()))?;
        let decomp = core_decompose(&graph);
        let kw = match extract_keywords(&graph, &decomp) {
            Ok(kw) => kw,
            Err(_) => continue,
        };
        let vectors = topic_vectors(&graph, &kw)
            .map_err(|e| AppError::Input(e.to_string()))?;
        let gaps = gap_distances(&vectors)
            .map_err(|e| AppError::Input(e.to_string()))?;
        for (i, d) in gaps.iter().enumerate() {
            writeln!(out, "{},{},{}", doc.transcript.doc_id, i, d)
                .map_err(|e| AppError::Input(e.to_string()))?;
        }
    }
    out.flush().map_err(|e| AppError::Input(e.to_string()))?;
    Ok(())
}
