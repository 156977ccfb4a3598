use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use newsrec_core::agent::{greedy_policy, train_agent, AgentConfig, QTable, QTableFile, RewardModel};
use newsrec_core::corpus::{default_stopwords, load_corpus, preprocess_all, write_processed, LoadOptions};
use newsrec_core::eda::{fit_tfidf, heatmap_terms, write_matrix};
use newsrec_core::evaluation::compare_tools;
use newsrec_core::hybrid::{stratified_split, train, FeatureRow, TrainConfig};
use newsrec_core::lexicons::LabelThresholds;
use newsrec_core::pipeline::{build_pool, feature_rows, read_scored_file, score_articles, write_scored};
use newsrec_core::{LexiconBundle, SoftmaxClassifier};

#[derive(Debug, Parser)]
#[command(name = "newsrec", version, about = "Sentiment-aware news recommendation pipeline")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a news CSV and write cleaned text and tokens.
    Ingest(IngestArgs),
    /// Append the four lexicon scores, per-tool labels and consensus.
    Score(ScoreArgs),
    /// Fit the hybrid classifier on the training split of a scored CSV.
    TrainHybrid(TrainHybridArgs),
    /// Compare the hybrid and the four tools on the held-out split.
    Eval(EvalArgs),
    /// Train the Q-learning agent against the simulated user.
    TrainRl(RlArgs),
    /// Train the agent and print its Q-table and greedy policy.
    Simulate(RlArgs),
    /// Write a TF-IDF matrix for selected documents.
    Eda(EdaArgs),
    /// Serve live recommendation sessions over HTTP.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Keep at most this many articles.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Directory of lexicon files to use instead of the bundled ones.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Seed for the stratified split.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.2)]
    pub test_fraction: f64,
}

#[derive(Debug, Args)]
pub struct TrainHybridArgs {
    /// Scored CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Model JSON.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub l2: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Scored CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Report JSON; the table always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub split: SplitArgs,
}

#[derive(Debug, Args)]
pub struct RlArgs {
    /// Scored CSV whose articles form the recommendation pool.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Q-table JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 200_000)]
    pub steps: u64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub epsilon_start: f64,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon_end: f64,
    /// Steps over which epsilon decays; defaults to half of `--steps`.
    #[arg(long)]
    pub epsilon_decay_steps: Option<u64>,
    /// Visit-count learning-rate decay constant; 0 disables decay.
    #[arg(long, default_value_t = 1000)]
    pub alpha_tau: u64,
    #[arg(long, default_value_t = 1.0)]
    pub reward_base: f64,
    #[arg(long, default_value_t = 0.5)]
    pub reward_p: f64,
    #[arg(long, default_value_t = 0.3)]
    pub reward_c: f64,
}

impl RlArgs {
    pub fn config(&self) -> AgentConfig {
        AgentConfig {
            alpha: self.alpha,
            gamma: self.gamma,
            epsilon_start: self.epsilon_start,
            epsilon_end: self.epsilon_end,
            epsilon_decay_steps: self.epsilon_decay_steps.unwrap_or(self.steps / 2),
            steps: self.steps,
            seed: self.seed,
            alpha_decay_tau: (self.alpha_tau > 0).then_some(self.alpha_tau),
        }
    }

    pub fn reward_model(&self) -> RewardModel {
        RewardModel {
            base: self.reward_base,
            positivity_bonus: self.reward_p,
            congruence_bonus: self.reward_c,
        }
    }
}

#[derive(Debug, Args)]
pub struct EdaArgs {
    /// News CSV.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Matrix CSV.
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated article ids for the rows; defaults to the first ten.
    #[arg(long, value_delimiter = ',')]
    pub ids: Vec<u64>,
    /// Terms taken from each document's top list.
    #[arg(long, default_value_t = 5)]
    pub top_k: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_vocab: usize,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    /// Scored CSV whose articles form the recommendation pool.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Trained Q-table; sessions start from a zero table without one.
    #[arg(long)]
    pub qtable: Option<PathBuf>,
    /// Evaluation report served at /api/report.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Directory of UI assets served at /.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
    /// Where to save all sessions as JSON on shutdown.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.9)]
    pub gamma: f64,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(&a),
        Command::Score(a) => score(&a),
        Command::TrainHybrid(a) => train_hybrid(&a),
        Command::Eval(a) => eval(&a),
        Command::TrainRl(a) => train_rl(&a, false),
        Command::Simulate(a) => train_rl(&a, true),
        Command::Eda(a) => eda(&a),
        Command::Serve(a) => serve(a),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<SoftmaxClassifier> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SoftmaxClassifier::from_json(&text).with_context(|| format!("parsing model {}", path.display()))
}

pub fn load_qtable(path: &Path) -> Result<QTable> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = QTableFile::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.table()?)
}

fn ingest(a: &IngestArgs) -> Result<()> {
    let corpus = load_corpus(&a.input, &LoadOptions { limit: a.limit })?;
    let processed = preprocess_all(&corpus.articles, default_stopwords());
    write_processed(create(&a.out)?, &corpus.articles, &processed)?;
    eprintln!(
        "ingested {} articles ({} skipped) -> {}",
        corpus.articles.len(),
        corpus.skipped,
        a.out.display()
    );
    Ok(())
}

fn score(a: &ScoreArgs) -> Result<()> {
    let corpus = load_corpus(&a.input, &LoadOptions::default())?;
    let owned;
    let bundle = match &a.lexicons {
        Some(dir) => {
            owned = LexiconBundle::from_dir(dir)?;
            &owned
        }
        None => LexiconBundle::bundled(),
    };
    let scored = score_articles(&corpus.articles, bundle, &LabelThresholds::default())?;
    write_scored(create(&a.out)?, &scored)?;
    eprintln!("scored {} articles -> {}", scored.len(), a.out.display());
    Ok(())
}

/// Non-tied feature rows of a scored CSV, plus the number of tied rows.
fn labelled_rows(path: &Path) -> Result<(Vec<FeatureRow>, usize)> {
    let rows = feature_rows(&read_scored_file(path)?);
    let total = rows.len();
    let labelled: Vec<FeatureRow> = rows
        .into_iter()
        .filter(|r| r.consensus.label().is_some())
        .collect();
    let ties = total - labelled.len();
    Ok((labelled, ties))
}

fn train_hybrid(a: &TrainHybridArgs) -> Result<()> {
    let (rows, _) = labelled_rows(&a.input)?;
    let config = TrainConfig {
        max_iter: a.max_iter,
        l2: a.l2,
        seed: a.split.seed,
        ..TrainConfig::default()
    };
    let (train_rows, _) = stratified_split(&rows, a.split.test_fraction, a.split.seed)?;
    let model = train(&train_rows, &config)?;
    write_text(&a.out, &model.to_json()?)?;
    eprintln!(
        "trained on {} rows in {} iterations (loss {:.6}) -> {}",
        train_rows.len(),
        model.training_meta.iterations,
        model.training_meta.final_loss,
        a.out.display()
    );
    Ok(())
}

fn eval(a: &EvalArgs) -> Result<()> {
    let (labelled, tie_excluded) = labelled_rows(&a.input)?;
    let model = load_model(&a.model)?;
    let (_, test) = stratified_split(&labelled, a.split.test_fraction, a.split.seed)?;
    let mut report = compare_tools(&test, &model)?;
    report.dataset.tie_excluded = tie_excluded;
    print!("{}", report.render_table());
    if let Some(out) = &a.out {
        write_text(out, &report.to_json()?)?;
    }
    Ok(())
}

fn train_rl(a: &RlArgs, print: bool) -> Result<()> {
    let config = a.config();
    let reward_model = a.reward_model();
    let rows = feature_rows(&read_scored_file(&a.input)?);
    let pool = build_pool(&load_model(&a.model)?, &rows)?;
    let (table, log) = train_agent(&pool, &config, &reward_model)?;
    if let Some(out) = &a.out {
        write_text(out, &QTableFile::new(&table, &config, &reward_model).to_json()?)?;
    }
    if print {
        let mut stdout = io::stdout().lock();
        write_qtable(&mut stdout, &table)?;
        writeln!(stdout, "total reward {:.3} over {} steps", log.total_reward, log.steps)?;
        if log.fallback_deliveries > 0 {
            writeln!(stdout, "fallback deliveries {}", log.fallback_deliveries)?;
        }
    } else {
        eprintln!(
            "trained {} steps, mean reward {:.4}",
            log.steps,
            if log.steps == 0 { 0.0 } else { log.total_reward / log.steps as f64 }
        );
    }
    Ok(())
}

pub fn write_qtable(out: &mut impl Write, table: &QTable) -> io::Result<()> {
    writeln!(
        out,
        "{:<10} {:>18} {:>18} {:>18}   greedy",
        "state", "RecommendNegative", "RecommendNeutral", "RecommendPositive"
    )?;
    let policy = greedy_policy(table);
    for (state, action) in policy.pairs() {
        let row = table.row(state);
        writeln!(
            out,
            "{:<10} {:>18.6} {:>18.6} {:>18.6}   {}",
            state.as_str(),
            row[0],
            row[1],
            row[2],
            action
        )?;
    }
    Ok(())
}

fn eda(a: &EdaArgs) -> Result<()> {
    let corpus = load_corpus(&a.input, &LoadOptions::default())?;
    let processed = preprocess_all(&corpus.articles, default_stopwords());
    let model = fit_tfidf(&processed, a.max_vocab)?;
    let docs: Vec<_> = if a.ids.is_empty() {
        processed.iter().take(10).collect()
    } else {
        a.ids
            .iter()
            .map(|id| {
                processed
                    .iter()
                    .find(|p| p.id == *id)
                    .with_context(|| format!("no article with id {id}"))
            })
            .collect::<Result<_>>()?
    };
    if a.top_k == 0 {
        bail!("--top-k must be at least 1");
    }
    let terms = heatmap_terms(&model, &docs, a.top_k);
    let mut w = create(&a.out)?;
    write_matrix(&mut w, &model, &docs, &terms)?;
    w.flush()?;
    eprintln!("{} documents x {} terms -> {}", docs.len(), terms.len(), a.out.display());
    Ok(())
}

fn serve(a: ServeArgs) -> Result<()> {
    let state = crate::server::load_state(&a)?;
    let addr: SocketAddr = format!("{}:{}", a.host, a.port)
        .parse()
        .with_context(|| format!("bad address {}:{}", a.host, a.port))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(crate::server::serve(state, addr, a.static_dir, a.out))
}
