//! Live recommendation sessions driven by human feedback.
//!
//! Each session owns a copy of the trained Q-table and updates it online
//! from engage/skip events. The pool, catalogue and base table are shared
//! read-only; every session sits behind its own mutex.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, RwLock};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::agent::{greedy_policy, q_update, recommend, Action, ArticlePool, QTable, SentimentState};
use crate::corpus::Article;
use crate::error::{Error, Result};
use crate::hybrid::SentimentDistribution;
use crate::lexicons::SentimentLabel;

/// Dwell time that earns the full reading bonus.
pub const FULL_DWELL_MS: u64 = 30_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackEvent {
    pub article_id: u64,
    pub engaged: bool,
    pub dwell_ms: u64,
}

/// `1.0·engaged + 0.5·min(dwell / 30 s, 1)`, so always in `[0, 1.5]`.
pub fn live_reward(event: &FeedbackEvent) -> f64 {
    let engaged = if event.engaged { 1.0 } else { 0.0 };
    let dwell = (event.dwell_ms as f64 / FULL_DWELL_MS as f64).min(1.0);
    engaged + 0.5 * dwell
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub article_id: u64,
    pub action: Action,
    pub reward: f64,
    pub state: SentimentState,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Session {
    pub session_id: String,
    pub initial_qtable: QTable,
    pub initial_state: SentimentState,
    pub qtable: QTable,
    pub current_state: SentimentState,
    pub last_recommendation: Option<(u64, Action)>,
    pub cumulative_reward: f64,
    pub history: Vec<HistoryEntry>,
    pub alpha: f64,
    pub gamma: f64,
    pub seed: u64,
    #[serde(skip, default = "placeholder_rng")]
    rng: ChaCha8Rng,
}

fn placeholder_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArticleCard {
    pub id: u64,
    pub title: String,
    pub description: String,
    pub link: String,
    pub distribution: SentimentDistribution,
    pub label: SentimentLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recommendation {
    pub article: ArticleCard,
    pub action: Action,
    /// The state the action was chosen for.
    pub state: SentimentState,
    /// The delivered article's hybrid distribution.
    pub distribution: SentimentDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackOutcome {
    pub reward: f64,
    pub updated_state: SentimentState,
    pub updated_action: Action,
    pub q_row: [f64; 3],
    pub state: SentimentState,
    pub cumulative_reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub session_id: String,
    pub states: Vec<SentimentState>,
    pub actions: Vec<Action>,
    pub q: [[f64; 3]; 3],
    pub visits: [[u64; 3]; 3],
    pub policy: BTreeMap<SentimentState, Action>,
    pub current_state: SentimentState,
    pub cumulative_reward: f64,
    pub history_len: usize,
    pub history: Vec<HistoryEntry>,
}

impl Session {
    pub fn new(session_id: String, qtable: QTable, alpha: f64, gamma: f64, seed: u64) -> Self {
        // No feedback yet, so nothing to prefer: start from the neutral state.
        let state = SentimentLabel::Neutral;
        Session {
            session_id,
            initial_qtable: qtable,
            initial_state: state,
            qtable,
            current_state: state,
            last_recommendation: None,
            cumulative_reward: 0.0,
            history: Vec::new(),
            alpha,
            gamma,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_recommendation(&mut self, pool: &ArticlePool) -> Result<(Action, u64)> {
        if pool.is_empty() {
            return Err(Error::Conflict("article pool is empty".into()));
        }
        let representative = SentimentDistribution::one_hot(self.current_state);
        let (action, id) = recommend(&self.qtable, &representative, pool, &mut self.rng);
        self.last_recommendation = Some((id, action));
        Ok((action, id))
    }

    pub fn apply_feedback(&mut self, event: &FeedbackEvent, pool: &ArticlePool) -> Result<FeedbackOutcome> {
        let (id, action) = self
            .last_recommendation
            .ok_or_else(|| Error::Conflict("no outstanding recommendation".into()))?;
        if id != event.article_id {
            return Err(Error::Conflict(format!(
                "feedback for article {} but article {id} is outstanding",
                event.article_id
            )));
        }
        let next = pool
            .get(id)
            .ok_or_else(|| Error::Conflict(format!("article {id} is not in the pool")))?
            .label;
        let reward = live_reward(event);
        let from = self.current_state;
        q_update(&mut self.qtable, from, action, reward, next, self.alpha, self.gamma)?;
        self.current_state = next;
        self.last_recommendation = None;
        self.cumulative_reward += reward;
        self.history.push(HistoryEntry {
            article_id: id,
            action,
            reward,
            state: next,
        });
        Ok(FeedbackOutcome {
            reward,
            updated_state: from,
            updated_action: action,
            q_row: *self.qtable.row(from),
            state: next,
            cumulative_reward: self.cumulative_reward,
        })
    }

    pub fn snapshot(&self) -> Snapshot {
        let policy = greedy_policy(&self.qtable);
        Snapshot {
            session_id: self.session_id.clone(),
            states: SentimentLabel::ALL.to_vec(),
            actions: Action::ALL.to_vec(),
            q: self.qtable.q,
            visits: self.qtable.visits,
            policy: policy.pairs().collect(),
            current_state: self.current_state,
            cumulative_reward: self.cumulative_reward,
            history_len: self.history.len(),
            history: self.history.clone(),
        }
    }

    /// The Q-table obtained by re-applying the history to the initial table.
    pub fn replay(&self) -> Result<QTable> {
        replay(
            &self.initial_qtable,
            self.initial_state,
            &self.history,
            self.alpha,
            self.gamma,
        )
    }
}

pub fn replay(
    initial: &QTable,
    initial_state: SentimentState,
    history: &[HistoryEntry],
    alpha: f64,
    gamma: f64,
) -> Result<QTable> {
    let mut table = *initial;
    let mut state = initial_state;
    for h in history {
        q_update(&mut table, state, h.action, h.reward, h.state, alpha, gamma)?;
        state = h.state;
    }
    Ok(table)
}

/// Shared, read-only data behind every session.
#[derive(Debug)]
pub struct Catalog {
    pub pool: ArticlePool,
    pub articles: HashMap<u64, Article>,
    pub base_qtable: QTable,
    pub alpha: f64,
    pub gamma: f64,
}

impl Catalog {
    pub fn card(&self, id: u64) -> Result<ArticleCard> {
        let pooled = self
            .pool
            .get(id)
            .ok_or_else(|| Error::Conflict(format!("article {id} is not in the pool")))?;
        let (title, description, link) = match self.articles.get(&id) {
            Some(a) => (a.title.clone(), a.description.clone(), a.link.clone()),
            None => (String::new(), String::new(), String::new()),
        };
        Ok(ArticleCard {
            id,
            title,
            description,
            link,
            distribution: pooled.distribution,
            label: pooled.label,
        })
    }
}

/// In-memory session registry. Distinct sessions lock independently.
#[derive(Debug)]
pub struct SessionStore {
    catalog: Arc<Catalog>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    seed: u64,
}

impl SessionStore {
    pub fn new(catalog: Catalog, seed: u64) -> Self {
        SessionStore {
            catalog: Arc::new(catalog),
            sessions: RwLock::new(HashMap::new()),
            seed,
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.catalog
    }

    pub fn create(&self, session_id: String) -> Result<String> {
        let mut sessions = self.sessions.write().expect("session map poisoned");
        if sessions.contains_key(&session_id) {
            return Err(Error::Conflict(format!("session {session_id} already exists")));
        }
        let seed = self.seed.wrapping_add(sessions.len() as u64);
        let c = &self.catalog;
        let session = Session::new(session_id.clone(), c.base_qtable, c.alpha, c.gamma, seed);
        sessions.insert(session_id.clone(), Arc::new(Mutex::new(session)));
        Ok(session_id)
    }

    fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(id.to_owned()))
    }

    pub fn with_session<T>(&self, id: &str, f: impl FnOnce(&mut Session) -> Result<T>) -> Result<T> {
        let session = self.get(id)?;
        let mut guard = session.lock().expect("session poisoned");
        f(&mut guard)
    }

    pub fn next_recommendation(&self, id: &str) -> Result<Recommendation> {
        self.with_session(id, |s| {
            let state = s.current_state;
            let (action, article_id) = s.next_recommendation(&self.catalog.pool)?;
            let article = self.catalog.card(article_id)?;
            Ok(Recommendation {
                distribution: article.distribution,
                article,
                action,
                state,
            })
        })
    }

    pub fn apply_feedback(&self, id: &str, event: &FeedbackEvent) -> Result<FeedbackOutcome> {
        self.with_session(id, |s| s.apply_feedback(event, &self.catalog.pool))
    }

    pub fn snapshot(&self, id: &str) -> Result<Snapshot> {
        self.with_session(id, |s| Ok(s.snapshot()))
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All sessions as JSON, ordered by id.
    pub fn to_json(&self) -> Result<String> {
        let sessions = self.sessions.read().expect("session map poisoned");
        let mut all: Vec<Session> = sessions
            .values()
            .map(|s| s.lock().expect("session poisoned").clone())
            .collect();
        all.sort_by(|a, b| a.session_id.cmp(&b.session_id));
        Ok(serde_json::to_string_pretty(&all)?)
    }

    /// Restores sessions saved by [`SessionStore::to_json`]. Each restored
    /// session gets a fresh generator from its stored seed.
    pub fn load_json(&self, text: &str) -> Result<usize> {
        let restored: Vec<Session> = serde_json::from_str(text)?;
        let mut sessions = self.sessions.write().expect("session map poisoned");
        let n = restored.len();
        for mut s in restored {
            s.rng = ChaCha8Rng::seed_from_u64(s.seed);
            sessions.insert(s.session_id.clone(), Arc::new(Mutex::new(s)));
        }
        Ok(n)
    }
}
