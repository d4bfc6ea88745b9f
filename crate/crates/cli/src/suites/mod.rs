//! One verifier batch per suite. Each returns its checks in a fixed order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{RunConfig, Suite};
use crate::report::SuiteReport;

mod coneprobe;
mod covering;
mod cutting;
mod intnorm;
mod matnorm;
mod norms;
mod products;

/// Each suite draws from its own ChaCha stream of the run seed, so results
/// do not depend on which other suites run or in which order.
fn rng_for(config: &RunConfig, suite: Suite) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(suite.stream());
    rng
}

pub fn run(suite: Suite, config: &RunConfig) -> SuiteReport {
    let mut rng = rng_for(config, suite);
    let (checks, series) = match suite {
        Suite::Norms => (norms::run(config), vec![]),
        Suite::Cutting => (cutting::run(config, &mut rng), vec![]),
        Suite::Covering => (covering::run(config, &mut rng), vec![]),
        Suite::Intnorm => (intnorm::run(config), vec![]),
        Suite::Matnorm => (matnorm::run(config, &mut rng), vec![]),
        Suite::Products => (products::run(config), vec![]),
        Suite::Coneprobe => coneprobe::run(config, &mut rng),
        Suite::All => unreachable!("`all` is expanded before dispatch"),
    };
    SuiteReport::new(suite, checks, series)
}
