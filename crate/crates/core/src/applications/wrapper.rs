//! Runs a one-message shuffled protocol as a local protocol whose analyzer
//! performs the shuffle itself.

use crate::error::{Error, Result};
use crate::protocol::{local_reports, Analyzer, Randomizer};
use crate::rng::{RandomSource, SHUFFLE_STREAM};
use crate::shuffle::shuffle_in_place;

/// A local-model protocol `(R, A o S)`.
#[derive(Debug, Clone)]
pub struct LocalProtocol<R, A> {
    randomizer: R,
    analyzer: A,
}

/// Packages a one-message shuffled protocol as a local one. Fails for
/// randomizers that send more than one message.
pub fn shuffled_to_local<R, A>(randomizer: R, analyzer: A) -> Result<LocalProtocol<R, A>>
where
    R: Randomizer,
    A: Analyzer<Message = R::Message>,
{
    let m = randomizer.config().messages_per_user;
    if m != 1 {
        return Err(Error::Unsupported(format!(
            "only one-message randomizers can be wrapped, this one sends {m}"
        )));
    }
    Ok(LocalProtocol {
        randomizer,
        analyzer,
    })
}

impl<R, A> LocalProtocol<R, A>
where
    R: Randomizer,
    A: Analyzer<Message = R::Message>,
{
    pub fn randomizer(&self) -> &R {
        &self.randomizer
    }

    /// Each user's report, in user order, as seen without a shuffler.
    pub fn reports(&self, dataset: &[R::Input], source: &RandomSource) -> Result<Vec<R::Message>> {
        local_reports(&self.randomizer, &self.analyzer, dataset, source)
    }

    /// The wrapped analyzer: shuffle the reports, then analyze.
    pub fn analyze(
        &self,
        mut reports: Vec<R::Message>,
        source: &RandomSource,
    ) -> Result<A::Output> {
        shuffle_in_place(&mut reports, &source.with_stream(SHUFFLE_STREAM));
        self.analyzer.analyze(&reports)
    }

    pub fn run(&self, dataset: &[R::Input], source: &RandomSource) -> Result<A::Output> {
        let reports = self.reports(dataset, source)?;
        self.analyze(reports, source)
    }
}
