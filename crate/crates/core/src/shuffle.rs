//! The trusted shuffler: a uniformly random permutation of all messages.

use rand::seq::SliceRandom;

use crate::rng::RandomSource;

/// Returns the messages in a uniformly random order (Fisher-Yates).
pub fn shuffle<M>(mut messages: Vec<M>, source: &RandomSource) -> Vec<M> {
    shuffle_in_place(&mut messages, source);
    messages
}

pub fn shuffle_in_place<M>(messages: &mut [M], source: &RandomSource) {
    let mut rng = source.rng();
    messages.shuffle(&mut rng);
}
