//! Generic shuffled-model execution: every user runs the local randomizer on
//! an independent stream, all messages are pooled and shuffled, and the
//! analyzer sees only the shuffled pool.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Transcript;
use crate::rng::{RandomSource, SHUFFLE_STREAM};
use crate::shuffle::shuffle_in_place;

/// The parameters a randomizer/analyzer pair must agree on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub n: usize,
    pub lambda: f64,
    pub messages_per_user: usize,
}

pub trait Randomizer: Sync {
    type Input: Sync;
    type Message: Send;

    /// Appends this user's messages to `out`.
    fn randomize<R: Rng + ?Sized>(
        &self,
        x: &Self::Input,
        rng: &mut R,
        out: &mut Vec<Self::Message>,
    );

    fn config(&self) -> ProtocolConfig;
}

pub trait Analyzer {
    type Message;
    type Output;

    fn analyze(&self, messages: &[Self::Message]) -> Result<Self::Output>;

    fn config(&self) -> ProtocolConfig;
}

/// Stream used by user `i` of a run seeded with `source`.
pub fn user_stream(source: &RandomSource, user: usize) -> RandomSource {
    source.with_stream(user as u64)
}

/// Runs `randomizer` for each user, shuffles, and applies `analyzer`.
///
/// The result is a pure function of `(source.seed, dataset, parameters)`.
pub fn run_protocol<R, A>(
    randomizer: &R,
    analyzer: &A,
    dataset: &[R::Input],
    source: &RandomSource,
) -> Result<(A::Output, Transcript<R::Message>)>
where
    R: Randomizer,
    A: Analyzer<Message = R::Message>,
{
    let mut messages = local_reports(randomizer, analyzer, dataset, source)?;
    shuffle_in_place(&mut messages, &source.with_stream(SHUFFLE_STREAM));
    let estimate = analyzer.analyze(&messages)?;
    Ok((estimate, Transcript { messages }))
}

/// Randomizer outputs in user order, before the shuffler.
pub(crate) fn local_reports<R, A>(
    randomizer: &R,
    analyzer: &A,
    dataset: &[R::Input],
    source: &RandomSource,
) -> Result<Vec<R::Message>>
where
    R: Randomizer,
    A: Analyzer<Message = R::Message>,
{
    let rc = randomizer.config();
    let ac = analyzer.config();
    if rc != ac {
        return Err(Error::ParameterMismatch(format!(
            "randomizer {rc:?} vs analyzer {ac:?}"
        )));
    }
    if dataset.len() != rc.n {
        return Err(Error::LengthMismatch {
            expected: rc.n,
            actual: dataset.len(),
        });
    }
    let mut messages = Vec::with_capacity(rc.n * rc.messages_per_user);
    for (i, x) in dataset.iter().enumerate() {
        let mut rng = user_stream(source, i).rng();
        randomizer.randomize(x, &mut rng, &mut messages);
    }
    Ok(messages)
}
