//! Tabular Q-learning over three sentiment states and three recommend
//! actions.
//!
//! The state is the argmax of an article's sentiment distribution. Taking an
//! action delivers an article of the targeted sentiment, and the delivered
//! article's sentiment becomes the next state; the chain never terminates.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::SentimentDistribution;
use crate::lexicons::SentimentLabel;

pub type SentimentState = SentimentLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Action {
    RecommendNegative,
    RecommendNeutral,
    RecommendPositive,
}

impl Action {
    pub const ALL: [Action; 3] = [
        Self::RecommendNegative,
        Self::RecommendNeutral,
        Self::RecommendPositive,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    /// The sentiment this action asks for.
    pub fn target(self) -> SentimentLabel {
        SentimentLabel::ALL[self.index()]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::RecommendNegative => "RecommendNegative",
            Self::RecommendNeutral => "RecommendNeutral",
            Self::RecommendPositive => "RecommendPositive",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown action `{s}`")))
    }
}

/// Argmax state; ties resolve to Neutral, then to label order.
pub fn state_of(dist: &SentimentDistribution) -> SentimentState {
    dist.argmax()
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QTable {
    /// Rows are states, columns actions.
    pub q: [[f64; 3]; 3],
    pub visits: [[u64; 3]; 3],
}

impl QTable {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_values(q: [[f64; 3]; 3]) -> Self {
        QTable {
            q,
            visits: [[0; 3]; 3],
        }
    }

    pub fn get(&self, s: SentimentState, a: Action) -> f64 {
        self.q[s.index()][a.index()]
    }

    pub fn row(&self, s: SentimentState) -> &[f64; 3] {
        &self.q[s.index()]
    }

    pub fn max_value(&self, s: SentimentState) -> f64 {
        self.row(s).iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Row argmax, ties toward the lowest-index action.
    pub fn greedy_action(&self, s: SentimentState) -> Action {
        let row = self.row(s);
        let mut best = 0;
        for a in 1..3 {
            if row[a] > row[best] {
                best = a;
            }
        }
        Action::ALL[best]
    }

    pub fn max_abs_diff(&self, other: &[[f64; 3]; 3]) -> f64 {
        self.q
            .iter()
            .flatten()
            .zip(other.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Greedy action per state, indexed by state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Policy(pub [Action; 3]);

impl Policy {
    pub fn action(&self, s: SentimentState) -> Action {
        self.0[s.index()]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (SentimentState, Action)> + '_ {
        SentimentLabel::ALL.into_iter().zip(self.0)
    }
}

pub fn greedy_policy(table: &QTable) -> Policy {
    Policy(SentimentLabel::ALL.map(|s| table.greedy_action(s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    pub alpha: f64,
    pub gamma: f64,
    pub epsilon_start: f64,
    pub epsilon_end: f64,
    pub epsilon_decay_steps: u64,
    pub steps: u64,
    pub seed: u64,
    /// Per-cell learning-rate decay `alpha / (1 + visits / tau)`.
    pub alpha_decay_tau: Option<u64>,
}

impl Default for AgentConfig {
    fn default() -> Self {
        AgentConfig {
            alpha: 0.1,
            gamma: 0.9,
            epsilon_start: 1.0,
            epsilon_end: 0.05,
            epsilon_decay_steps: 100_000,
            steps: 200_000,
            seed: 7,
            alpha_decay_tau: Some(1000),
        }
    }
}

impl AgentConfig {
    /// Default settings for `steps` interactions, decaying epsilon over the
    /// first half.
    pub fn with_steps(steps: u64) -> Self {
        AgentConfig {
            steps,
            epsilon_decay_steps: steps / 2,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::Config(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        if !(self.gamma >= 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!("gamma must be in [0, 1), got {}", self.gamma)));
        }
        if !unit.contains(&self.epsilon_start) || !unit.contains(&self.epsilon_end) {
            return Err(Error::Config("epsilon must be in [0, 1]".into()));
        }
        if self.epsilon_end > self.epsilon_start {
            return Err(Error::Config("epsilon_end exceeds epsilon_start".into()));
        }
        if self.alpha_decay_tau == Some(0) {
            return Err(Error::Config("alpha_decay_tau must be positive".into()));
        }
        Ok(())
    }

    /// Linear decay from `epsilon_start` to `epsilon_end` over
    /// `epsilon_decay_steps`, then constant.
    pub fn epsilon_at(&self, step: u64) -> f64 {
        if self.epsilon_decay_steps == 0 || step >= self.epsilon_decay_steps {
            return self.epsilon_end;
        }
        let frac = step as f64 / self.epsilon_decay_steps as f64;
        self.epsilon_start + (self.epsilon_end - self.epsilon_start) * frac
    }

    pub fn alpha_for(&self, visits: u64) -> f64 {
        match self.alpha_decay_tau {
            Some(tau) => self.alpha / (1.0 + visits as f64 / tau as f64),
            None => self.alpha,
        }
    }
}

/// Simulated engagement reward:
/// `base + positivity_bonus·[delivered Positive] + congruence_bonus·[delivered = state]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RewardModel {
    pub base: f64,
    pub positivity_bonus: f64,
    pub congruence_bonus: f64,
}

impl Default for RewardModel {
    fn default() -> Self {
        RewardModel {
            base: 1.0,
            positivity_bonus: 0.5,
            congruence_bonus: 0.3,
        }
    }
}

impl RewardModel {
    pub fn reward(&self, state: SentimentState, delivered: SentimentLabel) -> f64 {
        let mut r = self.base;
        if delivered == SentimentLabel::Positive {
            r += self.positivity_bonus;
        }
        if delivered == state {
            r += self.congruence_bonus;
        }
        r
    }

    pub fn max_reward(&self) -> f64 {
        self.base + self.positivity_bonus.max(0.0) + self.congruence_bonus.max(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.base, self.positivity_bonus, self.congruence_bonus]
            .iter()
            .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(Error::NonFinite("reward model"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoolArticle {
    pub id: u64,
    pub distribution: SentimentDistribution,
    /// Hybrid label, i.e. `state_of(distribution)`.
    pub label: SentimentLabel,
}

impl PoolArticle {
    pub fn new(id: u64, distribution: SentimentDistribution) -> Self {
        PoolArticle {
            id,
            distribution,
            label: state_of(&distribution),
        }
    }
}

/// Articles available for recommendation, indexed by hybrid label.
#[derive(Debug, Clone, PartialEq)]
pub struct ArticlePool {
    articles: Vec<PoolArticle>,
    by_label: [Vec<usize>; 3],
}

impl ArticlePool {
    pub fn new(articles: Vec<PoolArticle>) -> Result<Self> {
        if articles.is_empty() {
            return Err(Error::Empty("article pool"));
        }
        let mut by_label: [Vec<usize>; 3] = Default::default();
        for (i, a) in articles.iter().enumerate() {
            by_label[a.label.index()].push(i);
        }
        Ok(ArticlePool { articles, by_label })
    }

    pub fn articles(&self) -> &[PoolArticle] {
        &self.articles
    }

    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn with_label(&self, label: SentimentLabel) -> impl Iterator<Item = &PoolArticle> {
        self.by_label[label.index()].iter().map(|&i| &self.articles[i])
    }

    pub fn count(&self, label: SentimentLabel) -> usize {
        self.by_label[label.index()].len()
    }

    pub fn get(&self, id: u64) -> Option<&PoolArticle> {
        self.articles.iter().find(|a| a.id == id)
    }

    /// Uniform draw among articles labelled `label`; `None` if there are
    /// none.
    pub fn sample_label<R: Rng + ?Sized>(
        &self,
        label: SentimentLabel,
        rng: &mut R,
    ) -> Option<&PoolArticle> {
        let members = &self.by_label[label.index()];
        if members.is_empty() {
            return None;
        }
        Some(&self.articles[members[rng.random_range(0..members.len())]])
    }

    pub fn sample_any<R: Rng + ?Sized>(&self, rng: &mut R) -> &PoolArticle {
        &self.articles[rng.random_range(0..self.articles.len())]
    }
}

/// With probability `epsilon` a uniformly random action, otherwise the
/// greedy action for `state`.
pub fn select_action<R: Rng + ?Sized>(
    table: &QTable,
    state: SentimentState,
    epsilon: f64,
    rng: &mut R,
) -> Action {
    if rng.random::<f64>() < epsilon {
        Action::ALL[rng.random_range(0..3)]
    } else {
        table.greedy_action(state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub reward: f64,
    pub next_state: SentimentState,
    pub article_id: u64,
    /// No article matched the action's target, so any article was delivered.
    pub fallback: bool,
}

pub fn simulate_step<R: Rng + ?Sized>(
    state: SentimentState,
    action: Action,
    reward_model: &RewardModel,
    pool: &ArticlePool,
    rng: &mut R,
) -> StepOutcome {
    let (article, fallback) = match pool.sample_label(action.target(), rng) {
        Some(a) => (a, false),
        None => (pool.sample_any(rng), true),
    };
    StepOutcome {
        reward: reward_model.reward(state, article.label),
        next_state: article.label,
        article_id: article.id,
        fallback,
    }
}

/// One temporal-difference update of cell `(s, a)`:
/// `Q(s,a) += alpha · (r + gamma · max Q(s_next, ·) − Q(s,a))`.
pub fn q_update(
    table: &mut QTable,
    s: SentimentState,
    a: Action,
    r: f64,
    s_next: SentimentState,
    alpha: f64,
    gamma: f64,
) -> Result<()> {
    if !r.is_finite() {
        return Err(Error::NonFinite("reward"));
    }
    if !(0.0..=1.0).contains(&alpha) || !(0.0..1.0).contains(&gamma) {
        return Err(Error::Config(format!(
            "alpha {alpha} or gamma {gamma} out of range"
        )));
    }
    let target = r + gamma * table.max_value(s_next);
    let cell = &mut table.q[s.index()][a.index()];
    *cell += alpha * (target - *cell);
    table.visits[s.index()][a.index()] += 1;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingLog {
    pub steps: u64,
    pub total_reward: f64,
    /// Mean reward of each consecutive window of `window` steps.
    pub window: u64,
    pub window_mean_rewards: Vec<f64>,
    pub fallback_deliveries: u64,
    pub final_epsilon: f64,
    pub initial_state: SentimentState,
}

const LOG_WINDOW: u64 = 1000;

/// Runs `config.steps` rounds of ε-greedy selection, simulated delivery and
/// Q-update from a zero table. The start state is the label of a uniformly
/// drawn pool article.
pub fn train_agent(
    pool: &ArticlePool,
    config: &AgentConfig,
    reward_model: &RewardModel,
) -> Result<(QTable, TrainingLog)> {
    config.validate()?;
    reward_model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = QTable::zero();
    let mut state = pool.sample_any(&mut rng).label;
    let initial_state = state;

    let mut log = TrainingLog {
        steps: config.steps,
        total_reward: 0.0,
        window: LOG_WINDOW,
        window_mean_rewards: Vec::new(),
        fallback_deliveries: 0,
        final_epsilon: config.epsilon_at(config.steps),
        initial_state,
    };
    let mut window_sum = 0.0;
    for step in 0..config.steps {
        let epsilon = config.epsilon_at(step);
        let action = select_action(&table, state, epsilon, &mut rng);
        let outcome = simulate_step(state, action, reward_model, pool, &mut rng);
        let alpha = config.alpha_for(table.visits[state.index()][action.index()]);
        q_update(
            &mut table,
            state,
            action,
            outcome.reward,
            outcome.next_state,
            alpha,
            config.gamma,
        )?;
        log.total_reward += outcome.reward;
        log.fallback_deliveries += u64::from(outcome.fallback);
        window_sum += outcome.reward;
        if (step + 1) % LOG_WINDOW == 0 {
            log.window_mean_rewards.push(window_sum / LOG_WINDOW as f64);
            window_sum = 0.0;
        }
        state = outcome.next_state;
    }
    Ok((table, log))
}

/// Optimal action values of the deterministic chain in which action `a`
/// always delivers `a.target()`, by repeated Bellman optimality backups
/// until the max-norm change drops below `tolerance`.
pub fn value_iteration(reward_model: &RewardModel, gamma: f64, tolerance: f64) -> Result<[[f64; 3]; 3]> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Config(format!("gamma must be in [0, 1), got {gamma}")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    reward_model.validate()?;
    let mut q = [[0.0f64; 3]; 3];
    loop {
        let v: [f64; 3] = std::array::from_fn(|s| q[s].iter().copied().fold(f64::NEG_INFINITY, f64::max));
        let next: [[f64; 3]; 3] = std::array::from_fn(|s| {
            std::array::from_fn(|a| {
                let target = Action::ALL[a].target();
                reward_model.reward(SentimentLabel::ALL[s], target) + gamma * v[target.index()]
            })
        });
        let delta = next
            .iter()
            .flatten()
            .zip(q.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        q = next;
        if delta < tolerance {
            return Ok(q);
        }
    }
}

/// Greedy action for the distribution's state, plus an article of the
/// targeted sentiment. When none exists, the article with the highest
/// probability of that sentiment is chosen (earliest on ties).
pub fn recommend<R: Rng + ?Sized>(
    table: &QTable,
    dist: &SentimentDistribution,
    pool: &ArticlePool,
    rng: &mut R,
) -> (Action, u64) {
    let action = greedy_policy(table).action(state_of(dist));
    let target = action.target();
    let article = pool.sample_label(target, rng).unwrap_or_else(|| {
        pool.articles()
            .iter()
            .reduce(|best, a| {
                if a.distribution.probability(target) > best.distribution.probability(target) {
                    a
                } else {
                    best
                }
            })
            .expect("pool is non-empty")
    });
    (action, article.id)
}

/// Q-table persistence layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QTableFile {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub q: [[f64; 3]; 3],
    pub visits: [[u64; 3]; 3],
    pub config: AgentConfig,
    pub reward_model: RewardModel,
    pub steps_trained: u64,
}

impl QTableFile {
    pub fn new(table: &QTable, config: &AgentConfig, reward_model: &RewardModel) -> Self {
        QTableFile {
            states: SentimentLabel::ALL.iter().map(|s| s.to_string()).collect(),
            actions: Action::ALL.iter().map(|a| a.to_string()).collect(),
            q: table.q,
            visits: table.visits,
            config: *config,
            reward_model: *reward_model,
            steps_trained: config.steps,
        }
    }

    pub fn table(&self) -> Result<QTable> {
        let states: Vec<String> = SentimentLabel::ALL.iter().map(|s| s.to_string()).collect();
        let actions: Vec<String> = Action::ALL.iter().map(|a| a.to_string()).collect();
        if self.states != states || self.actions != actions {
            return Err(Error::Config("q-table state or action order mismatch".into()));
        }
        if !self.q.iter().flatten().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("q-table"));
        }
        Ok(QTable {
            q: self.q,
            visits: self.visits,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}
