use crate::error::{Error, Result};
use crate::setsystems::{constructors, SetSystem};

/// Default cap on the interval size for [`maximal_aps`].
pub const MAXIMAL_AP_CAP: usize = 1024;

/// The inclusion-maximal arithmetic progressions inside an interval `I`,
/// split by difference: `small_difference` has `δ <= sqrt|I|`,
/// `large_difference` has `δ > sqrt|I|`.
#[derive(Clone, Debug)]
pub struct MaximalAps {
    pub interval_size: usize,
    pub all: SetSystem,
    pub small_difference: SetSystem,
    pub large_difference: SetSystem,
}

/// For each difference `δ = 1..=|I|` and each residue class mod `δ`, the
/// unique maximal progression in `I = [interval_size]` with that difference.
pub fn maximal_aps(interval_size: usize) -> Result<MaximalAps> {
    if interval_size == 0 {
        return Err(Error::invalid("maximal_aps needs a nonempty interval"));
    }
    if interval_size > MAXIMAL_AP_CAP {
        return Err(Error::TooLarge {
            what: "maximal AP interval size",
            size: interval_size as u128,
            cap: MAXIMAL_AP_CAP as u128,
        });
    }
    let n = interval_size;
    let mut small = Vec::new();
    let mut large = Vec::new();
    for delta in 1..=n {
        let bucket = if delta * delta <= n { &mut small } else { &mut large };
        for r in 0..delta.min(n) {
            bucket.push((r..n).step_by(delta).collect::<Vec<_>>());
        }
    }
    let small = SetSystem::from_sets(n, &small)?.dedup();
    let large = SetSystem::from_sets(n, &large)?.dedup();
    let all = constructors::union(&small, &large)?;
    Ok(MaximalAps {
        interval_size,
        all,
        small_difference: small,
        large_difference: large,
    })
}
