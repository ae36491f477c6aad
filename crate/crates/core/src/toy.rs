//! The three-user, four-file walkthrough with one-bit packets, as a
//! self-checking run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::engine::{
    random_demands, unit_demands, CacheRecord, EngineError, Library, Measurement, Mode, Randomness, SchemeState,
};
use crate::field::{FieldContext, FieldElement};
use crate::pda::{man_pda, Pda, PdaError};
use crate::rational::int;

pub const TOY_SEED: u64 = 2021;
pub const TOY_N: usize = 4;
pub const TOY_K: usize = 3;
pub const TOY_B: usize = 3;

/// The 3x3 array used by the walkthrough, row by row; 0 is a star.
pub const TOY_ARRAY: [[u32; 3]; 3] = [[0, 1, 2], [1, 0, 3], [2, 3, 0]];

/// Expected cache of each user: `(row, None)` for all packets of that row,
/// `(row, Some(s))` for `T_{row,k} + V_s`. Rows and symbols are 1-based.
pub const CACHE_TABLE: [[(usize, Option<u32>); 3]; 3] = [
    [(1, None), (2, Some(1)), (3, Some(2))],
    [(2, None), (1, Some(1)), (3, Some(3))],
    [(3, None), (1, Some(2)), (2, Some(3))],
];

#[derive(Debug, Error)]
pub enum ToyError {
    #[error(transparent)]
    Pda(#[from] PdaError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToyReport {
    pub seed: u64,
    /// The MAN array for `K = 3, t = 1` equals [`TOY_ARRAY`].
    pub array_matches: bool,
    /// Every user's cache has the record kinds and contents of [`CACHE_TABLE`].
    pub layout_matches: bool,
    pub unit_demands_decoded: bool,
    pub measurement: Measurement,
    /// Demand tuples for which every user decoded correctly.
    pub demand_tuples_passed: u64,
    pub demand_tuples_total: u64,
}

impl ToyReport {
    pub fn pass(&self) -> bool {
        self.array_matches
            && self.layout_matches
            && self.unit_demands_decoded
            && self.measurement.memory == int(2)
            && self.measurement.load == int(1)
            && self.demand_tuples_passed == self.demand_tuples_total
    }
}

pub fn toy_array() -> Pda {
    let grid = TOY_ARRAY
        .iter()
        .map(|row| row.iter().map(|&s| if s == 0 { crate::PdaEntry::Star } else { crate::PdaEntry::Ordinary(s) }).collect())
        .collect();
    Pda::validate(grid).expect("the toy array is a PDA")
}

/// Places the toy scheme in SP-LFR mode with keys and files drawn from `seed`.
pub fn toy_state(seed: u64) -> Result<SchemeState, ToyError> {
    let ctx = FieldContext::prime(2).expect("2 is prime");
    let pda = toy_array();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let library = Library::random(ctx.clone(), TOY_N, TOY_B, &mut rng);
    let randomness = Randomness::generate(&pda, &ctx, TOY_N, TOY_B, &mut rng)?;
    Ok(SchemeState::place(pda, library, randomness, Mode::SpLfr)?)
}

fn layout_matches(state: &SchemeState) -> Result<bool, EngineError> {
    let ctx = state.ctx();
    for (k, expected) in CACHE_TABLE.iter().enumerate() {
        for &(row, symbol) in expected {
            let i = row - 1;
            let ok = match (&state.caches()[k].records[i], symbol) {
                (CacheRecord::Uncoded(packets), None) => {
                    (0..TOY_N).all(|n| packets[n] == state.library().packet(n, i, TOY_K))
                }
                (CacheRecord::Coded(rec), Some(s)) => {
                    let mut want = state.privacy_key(i, k)?;
                    ctx.add_assign(&mut want, &state.randomness().security_keys[s as usize - 1]);
                    *rec == want
                }
                _ => false,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every demand tuple in `(F_2^4)^3`, in a fixed order.
fn all_demand_tuples(ctx: &FieldContext) -> impl Iterator<Item = Vec<Vec<FieldElement>>> + '_ {
    let per_user = 1u32 << TOY_N;
    (0..per_user.pow(TOY_K as u32)).map(move |idx| {
        (0..TOY_K)
            .map(|u| {
                let v = idx / per_user.pow(u as u32) % per_user;
                (0..TOY_N).map(|n| ctx.reduce(u64::from(v >> n & 1))).collect()
            })
            .collect()
    })
}

/// Runs the walkthrough and every check in [`ToyReport`].
pub fn golden_toy(seed: u64) -> Result<ToyReport, ToyError> {
    let state = toy_state(seed)?;
    let ctx = state.ctx().clone();
    let array_matches = man_pda(TOY_K, 1)? == *state.pda();
    let units = unit_demands(&ctx, TOY_K, TOY_N);
    let payload = state.deliver(&units)?;
    let unit_demands_decoded = (0..TOY_K)
        .map(|u| Ok(state.user_view(u).decode(&payload, &units[u])? == state.library().file(u)))
        .collect::<Result<Vec<bool>, EngineError>>()?
        .into_iter()
        .all(|ok| ok);
    let mut passed = 0;
    let mut total = 0;
    for demands in all_demand_tuples(&ctx) {
        total += 1;
        if state.verify_demands(&demands)?.into_iter().all(|ok| ok) {
            passed += 1;
        }
    }
    Ok(ToyReport {
        seed,
        array_matches,
        layout_matches: layout_matches(&state)?,
        unit_demands_decoded,
        measurement: state.measure(&payload),
        demand_tuples_passed: passed,
        demand_tuples_total: total,
    })
}

/// Random-demand spot check used by seed sweeps: `rounds` random tuples.
pub fn toy_random_rounds(seed: u64, rounds: usize) -> Result<bool, ToyError> {
    let state = toy_state(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for _ in 0..rounds {
        let d = random_demands(state.ctx(), TOY_K, TOY_N, &mut rng);
        if !state.verify_demands(&d)?.into_iter().all(|ok| ok) {
            return Ok(false);
        }
    }
    Ok(true)
}
