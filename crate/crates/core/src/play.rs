//! Match execution, transcripts and their JSON form.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{
    apply_round, apply_round_with, initial_state, terminal, BoardState, GameConfig, GameError, GameVariant, MoveSet,
    Outcome, PathId, RemovalAction, RemovalRule,
};
use crate::strategies::{PusherStrategy, RemoverStrategy, StrategyError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Pusher,
    Remover,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Pusher => "pusher",
            Side::Remover => "remover",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub mv: MoveSet,
    pub removal: RemovalAction,
}

/// Replayable record of a finished game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub config: GameConfig,
    pub rounds: Vec<Round>,
    pub outcome: Outcome,
}

impl Transcript {
    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TranscriptJson::from(self)).expect("transcript serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ReplayError> {
        let raw: TranscriptJson = serde_json::from_str(text).map_err(|e| ReplayError::Parse(e.to_string()))?;
        raw.try_into()
    }
}

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("no result after {limit} rounds")]
    RoundLimit { limit: u64 },
    #[error("{side} strategy failed in round {round}: {source}")]
    Strategy {
        side: Side,
        round: usize,
        #[source]
        source: StrategyError,
    },
    #[error("{side} played an illegal action in round {round}: {source}")]
    Illegal {
        side: Side,
        round: usize,
        #[source]
        source: GameError,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("malformed transcript: {0}")]
    Parse(String),
    #[error("round {round}: {source}")]
    Illegal {
        round: usize,
        #[source]
        source: GameError,
    },
    #[error("game already ended before round {round}")]
    PlayedPastEnd { round: usize },
    #[error("game has not ended after the recorded rounds")]
    Unfinished,
    #[error("recorded outcome {recorded} but replay gives {actual}")]
    OutcomeMismatch { recorded: Outcome, actual: Outcome },
    #[error("recorded roundCount {recorded} but {actual} rounds are listed")]
    CountMismatch { recorded: usize, actual: usize },
}

/// Plays a full game between two strategies.
pub fn play_match(
    pusher: &mut dyn PusherStrategy,
    remover: &mut dyn RemoverStrategy,
    config: &GameConfig,
    round_limit: u64,
) -> Result<Transcript, MatchError> {
    play_match_observed(pusher, remover, config, round_limit, |_, _, _| {})
}

/// Like [`play_match`], calling `on_round(before, round, after)` after every round.
pub fn play_match_observed<F>(
    pusher: &mut dyn PusherStrategy,
    remover: &mut dyn RemoverStrategy,
    config: &GameConfig,
    round_limit: u64,
    mut on_round: F,
) -> Result<Transcript, MatchError>
where
    F: FnMut(&BoardState, &Round, &BoardState),
{
    let mut state = initial_state(config);
    let mut rounds = Vec::new();
    loop {
        if let Some(outcome) = terminal(&state) {
            return Ok(Transcript { config: *config, rounds, outcome });
        }
        if rounds.len() as u64 >= round_limit {
            return Err(MatchError::RoundLimit { limit: round_limit });
        }
        let round = rounds.len() + 1;
        let mv = pusher
            .next_move(&state)
            .map_err(|source| MatchError::Strategy { side: Side::Pusher, round, source })?;
        crate::game::check_move(&state, &mv, config)
            .map_err(|source| MatchError::Illegal { side: Side::Pusher, round, source })?;
        let removal = remover
            .choose(&state, &mv)
            .map_err(|source| MatchError::Strategy { side: Side::Remover, round, source })?;
        let next = apply_round(&state, &mv, &removal, config)
            .map_err(|source| MatchError::Illegal { side: Side::Remover, round, source })?;
        pusher
            .observe(&removal)
            .map_err(|source| MatchError::Strategy { side: Side::Pusher, round, source })?;
        let record = Round { mv, removal };
        on_round(&state, &record, &next);
        rounds.push(record);
        state = next;
    }
}

/// Re-applies every round from the initial board, returning all boards.
pub fn replay(transcript: &Transcript) -> Result<Vec<BoardState>, ReplayError> {
    replay_with(transcript, RemovalRule::NonDominated)
}

/// [`replay`] under an explicit removal rule.
pub fn replay_with(transcript: &Transcript, rule: RemovalRule) -> Result<Vec<BoardState>, ReplayError> {
    let config = &transcript.config;
    let mut states = vec![initial_state(config)];
    for (i, round) in transcript.rounds.iter().enumerate() {
        let state = states.last().unwrap();
        if terminal(state).is_some() {
            return Err(ReplayError::PlayedPastEnd { round: i + 1 });
        }
        let next = apply_round_with(state, &round.mv, &round.removal, config, rule)
            .map_err(|source| ReplayError::Illegal { round: i + 1, source })?;
        states.push(next);
    }
    match terminal(states.last().unwrap()) {
        None => Err(ReplayError::Unfinished),
        Some(actual) if actual != transcript.outcome => {
            Err(ReplayError::OutcomeMismatch { recorded: transcript.outcome, actual })
        }
        Some(_) => Ok(states),
    }
}

// JSON wire format.

#[derive(Serialize, Deserialize)]
pub(crate) struct ConfigJson {
    pub k: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub variant: String,
    pub c: Option<u32>,
}

impl From<&GameConfig> for ConfigJson {
    fn from(config: &GameConfig) -> Self {
        let c = match config.variant {
            GameVariant::General => None,
            v => v.move_cap(),
        };
        ConfigJson { k: config.k, n: config.n, variant: config.variant.name().to_string(), c }
    }
}

impl TryFrom<ConfigJson> for GameConfig {
    type Error = GameError;

    fn try_from(raw: ConfigJson) -> Result<Self, GameError> {
        let variant = GameVariant::from_name(&raw.variant, raw.c)?;
        GameConfig::new(raw.k, raw.n, variant)
    }
}

#[derive(Serialize, Deserialize)]
struct AdvanceJson {
    first: Vec<u32>,
    second: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RemovalJson {
    kind: String,
    path: PathId,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    position: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct RoundJson {
    advance: AdvanceJson,
    removal: RemovalJson,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct TranscriptJson {
    config: ConfigJson,
    rounds: Vec<RoundJson>,
    outcome: Outcome,
    round_count: usize,
}

impl From<&Transcript> for TranscriptJson {
    fn from(t: &Transcript) -> Self {
        let rounds = t
            .rounds
            .iter()
            .map(|r| RoundJson {
                advance: AdvanceJson {
                    first: r.mv.path(PathId::First).to_vec(),
                    second: r.mv.path(PathId::Second).to_vec(),
                },
                removal: match r.removal {
                    RemovalAction::PathChoice(path) => RemovalJson { kind: "path".into(), path, position: None },
                    RemovalAction::ChipChoice { path, position } => {
                        RemovalJson { kind: "chip".into(), path, position: Some(position) }
                    }
                },
            })
            .collect();
        TranscriptJson { config: (&t.config).into(), rounds, outcome: t.outcome, round_count: t.rounds.len() }
    }
}

impl TryFrom<TranscriptJson> for Transcript {
    type Error = ReplayError;

    fn try_from(raw: TranscriptJson) -> Result<Self, ReplayError> {
        let config: GameConfig = raw.config.try_into().map_err(|e: GameError| ReplayError::Parse(e.to_string()))?;
        if raw.round_count != raw.rounds.len() {
            return Err(ReplayError::CountMismatch { recorded: raw.round_count, actual: raw.rounds.len() });
        }
        let mut rounds = Vec::with_capacity(raw.rounds.len());
        for (i, r) in raw.rounds.into_iter().enumerate() {
            if r.advance.first.len() != config.k + 1 || r.advance.second.len() != config.k + 1 {
                return Err(ReplayError::Parse(format!("round {}: advance arrays must have k+1 entries", i + 1)));
            }
            let mv = MoveSet::from_advance(r.advance.first, r.advance.second)
                .map_err(|e| ReplayError::Parse(format!("round {}: {e}", i + 1)))?;
            let removal = match (r.removal.kind.as_str(), r.removal.position) {
                ("path", None) => RemovalAction::PathChoice(r.removal.path),
                ("chip", Some(position)) => RemovalAction::ChipChoice { path: r.removal.path, position },
                (kind, _) => {
                    return Err(ReplayError::Parse(format!("round {}: bad removal kind `{kind}`", i + 1)));
                }
            };
            rounds.push(Round { mv, removal });
        }
        Ok(Transcript { config, rounds, outcome: raw.outcome })
    }
}
