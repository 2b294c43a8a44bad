//! Drives one game from first observation to sealed history. Used
//! identically by the local runner and the network gateway, which keeps the
//! two transports' logs equal.

use std::collections::BTreeSet;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crate::engine::{observe, step, Action, EngineError, GameState, GameStatus, ObservedState, StepResult};
use crate::gateway::{expand_macro, MacroError};
use crate::metrics::{EndRecord, EpisodeHistory, HistoryHeader, Outcome, Record, StepRecord};
use crate::world::ActorId;

#[derive(Debug, thiserror::Error)]
pub enum EpisodeError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Macro(#[from] MacroError),
    #[error("the episode is over")]
    Over,
}

/// Why a macro stopped before its last primitive.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case", tag = "interrupt")]
pub enum Interrupt {
    Refused,
    MonsterSighted { monsters: Vec<ActorId> },
    GameOver,
}

#[derive(Debug, Clone)]
pub struct ActOutcome {
    /// Primitives the action expanded to (just the action for primitives).
    pub expansion: Vec<Action>,
    /// One result per executed primitive.
    pub results: Vec<StepResult>,
    pub interrupted: Option<Interrupt>,
}

#[derive(Debug, Clone, Default)]
pub struct EpisodeInfo {
    pub config_hash: String,
    pub agent: String,
    pub scenario: Option<String>,
    pub turn_limit: Option<u64>,
}

fn unix_now() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

pub struct Episode {
    game: GameState,
    history: EpisodeHistory,
    turn_limit: Option<u64>,
    started: Instant,
    observation: ObservedState,
}

fn visible_ids(obs: &ObservedState) -> BTreeSet<ActorId> {
    obs.monsters.iter().map(|m| m.id).collect()
}

impl Episode {
    pub fn new(game: GameState, info: EpisodeInfo) -> Self {
        let header = HistoryHeader {
            seed: game.seed,
            config_hash: info.config_hash,
            agent: info.agent,
            scenario: info.scenario,
            start_level: game.player.level,
            start_depth: game.current_level().depth,
            start_time: unix_now(),
        };
        let observation = observe(&game);
        let mut episode = Episode {
            game,
            history: EpisodeHistory::new(header),
            turn_limit: info.turn_limit,
            started: Instant::now(),
            observation,
        };
        episode.check_limit();
        episode
    }

    pub fn game(&self) -> &GameState {
        &self.game
    }

    pub fn observation(&self) -> &ObservedState {
        &self.observation
    }

    pub fn history(&self) -> &EpisodeHistory {
        &self.history
    }

    pub fn into_history(self) -> EpisodeHistory {
        self.history
    }

    pub fn is_over(&self) -> bool {
        self.history.is_sealed()
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.history.end().map(|e| e.outcome)
    }

    fn seal(&mut self, outcome: Outcome) {
        let end = EndRecord {
            outcome,
            turn: self.game.turn_count(),
            clock_aut: self.game.clock_aut,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        self.history.record_event(Record::End(end)).expect("sealed at most once");
    }

    /// Truncates when the next action would cross the turn limit.
    fn check_limit(&mut self) {
        if self.is_over() {
            return;
        }
        if let Some(limit) = self.turn_limit {
            let next = self.game.clock_aut + self.game.player.next_action_cost();
            if next > limit * crate::engine::rules::AUT_PER_TURN {
                self.seal(Outcome::Truncated);
            }
        }
    }

    /// Ends the episode early, e.g. when an agent disconnects.
    pub fn abandon(&mut self) {
        if !self.is_over() {
            self.seal(Outcome::Truncated);
        }
    }

    /// Runs one primitive and records it.
    pub fn step_primitive(&mut self, action: &Action) -> Result<StepResult, EpisodeError> {
        if self.is_over() {
            return Err(if self.game.is_running() { EpisodeError::Over } else { EngineError::Terminal.into() });
        }
        let result = step(&mut self.game, action)?;
        let player = &self.game.player;
        let record = StepRecord {
            turn: self.game.turn_count(),
            clock_aut: self.game.clock_aut,
            action: action.clone(),
            events: result.events.clone(),
            level: player.level,
            depth: self.game.current_level().depth,
            hp: player.hp,
            xp_earned: player.xp_earned,
            runes: player.runes_held.len(),
        };
        self.history.record_event(Record::Step(record)).expect("unsealed history accepts steps");
        match result.status {
            GameStatus::Dead => self.seal(Outcome::Dead),
            GameStatus::Won => self.seal(Outcome::Won),
            GameStatus::Running => self.check_limit(),
        }
        self.observation = result.observation.clone();
        Ok(result)
    }

    /// Runs a primitive or a macro. Macros stop early when a step is refused
    /// or a monster not previously in view appears. `progress` sees each
    /// executed primitive with its index and the expansion length.
    pub fn act(
        &mut self,
        action: &Action,
        mut progress: impl FnMut(usize, usize, &Action, &StepResult),
    ) -> Result<ActOutcome, EpisodeError> {
        if self.is_over() {
            return Err(if self.game.is_running() { EpisodeError::Over } else { EngineError::Terminal.into() });
        }
        if !action.is_macro() {
            let result = self.step_primitive(action)?;
            progress(0, 1, action, &result);
            return Ok(ActOutcome { expansion: vec![action.clone()], results: vec![result], interrupted: None });
        }
        let expansion = expand_macro(action, &self.observation)?;
        let mut results = Vec::with_capacity(expansion.len());
        let mut interrupted = None;
        for (i, primitive) in expansion.iter().enumerate() {
            let before = visible_ids(&self.observation);
            let result = self.step_primitive(primitive)?;
            progress(i, expansion.len(), primitive, &result);
            let refused = result.events.iter().any(|e| matches!(e, crate::engine::Event::Refused { .. }));
            let sighted: Vec<ActorId> = visible_ids(&result.observation).difference(&before).copied().collect();
            results.push(result);
            if i + 1 == expansion.len() {
                break;
            }
            if self.is_over() {
                interrupted = Some(Interrupt::GameOver);
            } else if refused {
                interrupted = Some(Interrupt::Refused);
            } else if !sighted.is_empty() {
                interrupted = Some(Interrupt::MonsterSighted { monsters: sighted });
            }
            if interrupted.is_some() {
                break;
            }
        }
        Ok(ActOutcome { expansion, results, interrupted })
    }
}

/// What a new episode is played on.
#[derive(Debug, Clone, PartialEq)]
pub enum GameSource {
    Scenario(crate::scenario::ScenarioSpec),
    Dungeon(crate::world::WorldConfig),
}

#[derive(Debug, thiserror::Error)]
pub enum SourceError {
    #[error(transparent)]
    World(#[from] crate::world::WorldError),
    #[error(transparent)]
    Scenario(#[from] crate::scenario::ScenarioError),
}

impl GameSource {
    pub fn name(&self) -> String {
        match self {
            GameSource::Scenario(spec) => spec.name.clone(),
            GameSource::Dungeon(_) => "dungeon".to_string(),
        }
    }

    pub fn config_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        match self {
            GameSource::Scenario(spec) => {
                hex::encode(Sha256::digest(crate::scenario::render_scenario(spec).as_bytes()))
            }
            GameSource::Dungeon(world) => world.config_hash(),
        }
    }

    /// Seed to use when the caller gives none.
    pub fn default_seed(&self) -> u64 {
        match self {
            GameSource::Scenario(spec) => spec.header.default_seed,
            GameSource::Dungeon(_) => 0,
        }
    }

    pub fn turn_limit(&self) -> Option<u64> {
        match self {
            GameSource::Scenario(spec) => spec.header.turn_limit,
            GameSource::Dungeon(world) => world.dungeon.turn_limit,
        }
    }

    pub fn new_game(&self, seed: u64) -> Result<GameState, SourceError> {
        Ok(match self {
            GameSource::Scenario(spec) => crate::scenario::instantiate_scenario(spec, seed)?,
            GameSource::Dungeon(world) => GameState::new_dungeon(seed, world)?,
        })
    }

    /// A fresh episode. `turn_limit` overrides the scenario's own limit.
    pub fn start(&self, seed: u64, agent: &str, turn_limit: Option<u64>) -> Result<Episode, SourceError> {
        let info = EpisodeInfo {
            config_hash: self.config_hash(),
            agent: agent.to_string(),
            scenario: match self {
                GameSource::Scenario(spec) => Some(spec.name.clone()),
                GameSource::Dungeon(_) => None,
            },
            turn_limit: turn_limit.or(self.turn_limit()),
        };
        Ok(Episode::new(self.new_game(seed)?, info))
    }
}
