//! The PDA-based SP-LFR scheme: placement with superposed keys, delivery,
//! per-user decoding and the multi-round key update.
//!
//! Files are split into `F` packets of `B/F` symbols; packet `i` of every file
//! belongs to row `i` of the PDA and user `k` to column `k`. Placement stores,
//! for user `k` and row `i`,
//!
//! - all `N` packets `W_{n,i}` when `a_{i,k}` is a star, or
//! - the single record `V_{a_{i,k}} + T_{i,k}` otherwise, where
//!   `T_{i,k} = sum_n p_{k,n} W_{n,i}`.
//!
//! Delivery for demands `d_k` sends `q_k = p_k + d_k` and, for every symbol
//! `s`, `Y_s = V_s + sum_{a_{i,j} = s} sum_n q_{j,n} W_{n,i}`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldContext, FieldElement, FieldError};
use crate::pda::{Pda, PdaEntry};
use crate::rational::{frac, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("file length B={b} is not divisible by F={f}")]
    NonDivisibleB { b: usize, f: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("privacy key requested for star cell ({row}, {col})")]
    StarCell { row: usize, col: usize },
    #[error("payload does not match the scheme: {0}")]
    PayloadMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Which key families are active.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Security and privacy keys.
    SpLfr,
    /// Privacy keys only (all `V_s = 0`).
    PLfr,
    /// Security keys only (all `p_k = 0`).
    SLfr,
    /// Neither.
    Lfr,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::SpLfr, Mode::PLfr, Mode::SLfr, Mode::Lfr];

    pub fn has_security_keys(self) -> bool {
        matches!(self, Mode::SpLfr | Mode::SLfr)
    }

    pub fn has_privacy_keys(self) -> bool {
        matches!(self, Mode::SpLfr | Mode::PLfr)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::SpLfr => "splfr",
            Mode::PLfr => "plfr",
            Mode::SLfr => "slfr",
            Mode::Lfr => "lfr",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode {s:?} (expected splfr, plfr, slfr or lfr)"))
    }
}

/// `N` files of `B` symbols each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Library {
    ctx: FieldContext,
    b: usize,
    data: Vec<Vec<FieldElement>>,
}

impl Library {
    pub fn new(ctx: FieldContext, data: Vec<Vec<FieldElement>>) -> Result<Self, EngineError> {
        let b = data.first().map_or(0, Vec::len);
        if data.is_empty() || b == 0 {
            return Err(EngineError::Shape("library needs at least one non-empty file".into()));
        }
        if let Some(n) = data.iter().position(|f| f.len() != b) {
            return Err(EngineError::Shape(format!("file {} has {} symbols, expected {b}", n + 1, data[n].len())));
        }
        for file in &data {
            ctx.check(file)?;
        }
        Ok(Library { ctx, b, data })
    }

    pub fn random<R: Rng + ?Sized>(ctx: FieldContext, n_files: usize, b: usize, rng: &mut R) -> Self {
        let q = ctx.order();
        let data = (0..n_files)
            .map(|_| (0..b).map(|_| ctx.reduce(rng.gen_range(0..q) as u64)).collect())
            .collect();
        Library { ctx, b, data }
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn n_files(&self) -> usize {
        self.data.len()
    }

    /// Symbols per file.
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn file(&self, n: usize) -> &[FieldElement] {
        &self.data[n]
    }

    pub fn files(&self) -> &[Vec<FieldElement>] {
        &self.data
    }

    /// Packet `i` (0-based) of file `n` under an `F`-way split.
    pub fn packet(&self, n: usize, i: usize, f: usize) -> &[FieldElement] {
        let len = self.b / f;
        &self.data[n][i * len..(i + 1) * len]
    }

    /// `sum_n d_n W_n`, computed directly from the plaintext files.
    pub fn combination(&self, demand: &[FieldElement]) -> Result<Vec<FieldElement>, EngineError> {
        check_vector(&self.ctx, demand, self.n_files(), "demand")?;
        let mut out = vec![FieldElement::ZERO; self.b];
        for (file, &d) in self.data.iter().zip(demand) {
            self.ctx.axpy(&mut out, d, file);
        }
        Ok(out)
    }
}

fn check_vector(ctx: &FieldContext, v: &[FieldElement], len: usize, what: &str) -> Result<(), EngineError> {
    if v.len() != len {
        return Err(EngineError::Shape(format!("{what} has length {}, expected {len}", v.len())));
    }
    ctx.check(v)?;
    Ok(())
}

fn check_vectors(
    ctx: &FieldContext,
    vs: &[Vec<FieldElement>],
    count: usize,
    len: usize,
    what: &str,
) -> Result<(), EngineError> {
    if vs.len() != count {
        return Err(EngineError::Shape(format!("expected {count} {what} vectors, got {}", vs.len())));
    }
    vs.iter().try_for_each(|v| check_vector(ctx, v, len, what))
}

/// Splits a file into `f` contiguous packets of equal length.
pub fn split(file: &[FieldElement], f: usize) -> Result<Vec<&[FieldElement]>, EngineError> {
    if f == 0 || !file.len().is_multiple_of(f) {
        return Err(EngineError::NonDivisibleB { b: file.len(), f });
    }
    Ok(file.chunks(file.len() / f).collect())
}

/// The server's private randomness `P = (V_1..V_S, p_1..p_K)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Randomness {
    /// `S` vectors of `B/F` symbols.
    pub security_keys: Vec<Vec<FieldElement>>,
    /// `K` vectors of `N` symbols.
    pub privacy_vectors: Vec<Vec<FieldElement>>,
}

impl Randomness {
    pub fn zeros(pda: &Pda, n_files: usize, packet_len: usize) -> Self {
        Randomness {
            security_keys: vec![vec![FieldElement::ZERO; packet_len]; pda.s()],
            privacy_vectors: vec![vec![FieldElement::ZERO; n_files]; pda.k()],
        }
    }

    /// Uniform keys from `rng`. Security keys are drawn first, then privacy
    /// vectors, so a seed fixes both.
    pub fn generate<R: Rng + ?Sized>(
        pda: &Pda,
        ctx: &FieldContext,
        n_files: usize,
        b: usize,
        rng: &mut R,
    ) -> Result<Self, EngineError> {
        if !b.is_multiple_of(pda.f()) {
            return Err(EngineError::NonDivisibleB { b, f: pda.f() });
        }
        let q = ctx.order();
        let mut draw = |len: usize| -> Vec<FieldElement> {
            (0..len).map(|_| ctx.reduce(rng.gen_range(0..q) as u64)).collect()
        };
        let security_keys = (0..pda.s()).map(|_| draw(b / pda.f())).collect();
        let privacy_vectors = (0..pda.k()).map(|_| draw(n_files)).collect();
        Ok(Randomness { security_keys, privacy_vectors })
    }

    /// Zeroes the key families `mode` does not use.
    pub fn masked(mut self, mode: Mode) -> Self {
        if !mode.has_security_keys() {
            self.security_keys.iter_mut().flatten().for_each(|x| *x = FieldElement::ZERO);
        }
        if !mode.has_privacy_keys() {
            self.privacy_vectors.iter_mut().flatten().for_each(|x| *x = FieldElement::ZERO);
        }
        self
    }
}

/// What a user stores for one PDA row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CacheRecord {
    /// Packet `i` of every file, indexed by file.
    Uncoded(Vec<Vec<FieldElement>>),
    /// `V_{a_{i,k}} + T_{i,k}`.
    Coded(Vec<FieldElement>),
}

impl CacheRecord {
    pub fn symbols(&self) -> usize {
        match self {
            CacheRecord::Uncoded(p) => p.iter().map(Vec::len).sum(),
            CacheRecord::Coded(v) => v.len(),
        }
    }
}

/// Cache content `Z_k`, one record per PDA row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UserCache {
    pub records: Vec<CacheRecord>,
}

impl UserCache {
    pub fn symbols(&self) -> usize {
        self.records.iter().map(CacheRecord::symbols).sum()
    }
}

/// Everything the server sends: `X = (q_1..q_K, Y_1..Y_S)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeliveryPayload {
    pub coeff_vectors: Vec<Vec<FieldElement>>,
    pub blocks: Vec<Vec<FieldElement>>,
}

impl DeliveryPayload {
    /// Every transmitted symbol in a fixed order (coefficients, then blocks).
    pub fn symbols(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.coeff_vectors.iter().chain(&self.blocks).flatten().copied()
    }
}

/// Randomness consumed by a scheme, as an integer number of GF(q) symbols.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomnessBudget {
    pub symbols: u64,
    pub q: u32,
}

impl RandomnessBudget {
    pub fn bits(&self) -> f64 {
        self.symbols as f64 * (self.q as f64).log2()
    }
}

impl fmt::Display for RandomnessBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*log2({})", self.symbols, self.q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    /// Cached symbols per user divided by `B`.
    pub memory: Rational,
    /// `S / F`; the coefficient overhead vanishes as `B` grows.
    pub load: Rational,
    /// `S B/F + K N` symbols actually sent.
    pub tx_symbols: u64,
    pub randomness: RandomnessBudget,
}

/// A placed scheme. Immutable; [`SchemeState::update_round`] returns a new one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeState {
    pda: Pda,
    library: Library,
    randomness: Randomness,
    mode: Mode,
    caches: Vec<UserCache>,
}

/// Computes `sum_n coeffs[n] * W_{n,row}` into `out`.
fn mix_packets(ctx: &FieldContext, out: &mut [FieldElement], coeffs: &[FieldElement], packets: &[&[FieldElement]]) {
    for (&c, p) in coeffs.iter().zip(packets) {
        ctx.axpy(out, c, p);
    }
}

impl SchemeState {
    /// Fills every user's cache. Keys the mode does not use are zeroed first.
    pub fn place(pda: Pda, library: Library, randomness: Randomness, mode: Mode) -> Result<Self, EngineError> {
        let (k, f, _, s) = pda.params();
        let b = library.b();
        if !b.is_multiple_of(f) {
            return Err(EngineError::NonDivisibleB { b, f });
        }
        let ctx = library.ctx().clone();
        check_vectors(&ctx, &randomness.security_keys, s, b / f, "security key")?;
        check_vectors(&ctx, &randomness.privacy_vectors, k, library.n_files(), "privacy")?;
        let mut state = SchemeState { pda, library, randomness: randomness.masked(mode), mode, caches: Vec::new() };
        state.caches = (0..k).map(|user| state.build_cache(user)).collect();
        Ok(state)
    }

    fn build_cache(&self, user: usize) -> UserCache {
        let ctx = self.library.ctx();
        let records = (0..self.pda.f())
            .map(|i| match self.pda.entry(i, user) {
                PdaEntry::Star => CacheRecord::Uncoded(
                    (0..self.library.n_files()).map(|n| self.packet(n, i).to_vec()).collect(),
                ),
                PdaEntry::Ordinary(s) => {
                    let mut rec = self.randomness.security_keys[s as usize - 1].clone();
                    ctx.add_assign(&mut rec, &self.privacy_key_unchecked(i, user));
                    CacheRecord::Coded(rec)
                }
            })
            .collect();
        UserCache { records }
    }

    pub fn pda(&self) -> &Pda {
        &self.pda
    }

    pub fn library(&self) -> &Library {
        &self.library
    }

    pub fn randomness(&self) -> &Randomness {
        &self.randomness
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn ctx(&self) -> &FieldContext {
        self.library.ctx()
    }

    pub fn caches(&self) -> &[UserCache] {
        &self.caches
    }

    /// Symbols per packet, `B / F`.
    pub fn packet_len(&self) -> usize {
        self.library.b() / self.pda.f()
    }

    fn packet(&self, n: usize, i: usize) -> &[FieldElement] {
        self.library.packet(n, i, self.pda.f())
    }

    fn packets_of_row(&self, i: usize) -> Vec<&[FieldElement]> {
        (0..self.library.n_files()).map(|n| self.packet(n, i)).collect()
    }

    fn privacy_key_unchecked(&self, i: usize, j: usize) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO; self.packet_len()];
        mix_packets(self.ctx(), &mut out, &self.randomness.privacy_vectors[j], &self.packets_of_row(i));
        out
    }

    /// `T_{i,j} = sum_n p_{j,n} W_{n,i}` for a non-star cell (0-based).
    pub fn privacy_key(&self, i: usize, j: usize) -> Result<Vec<FieldElement>, EngineError> {
        if self.pda.entry(i, j).is_star() {
            return Err(EngineError::StarCell { row: i + 1, col: j + 1 });
        }
        Ok(self.privacy_key_unchecked(i, j))
    }

    pub fn user_view(&self, user: usize) -> UserView<'_> {
        UserView {
            user,
            pda: &self.pda,
            ctx: self.ctx(),
            n_files: self.library.n_files(),
            packet_len: self.packet_len(),
            cache: &self.caches[user],
        }
    }

    pub fn deliver(&self, demands: &[Vec<FieldElement>]) -> Result<DeliveryPayload, EngineError> {
        let ctx = self.ctx();
        let n = self.library.n_files();
        check_vectors(ctx, demands, self.pda.k(), n, "demand")?;
        let coeff_vectors: Vec<Vec<FieldElement>> = self
            .randomness
            .privacy_vectors
            .iter()
            .zip(demands)
            .map(|(p, d)| p.iter().zip(d).map(|(&a, &b)| ctx.add(a, b)).collect())
            .collect();
        let blocks = (1..=self.pda.s() as u32)
            .map(|s| {
                let mut y = self.randomness.security_keys[s as usize - 1].clone();
                for &(i, j) in self.pda.occurrences(s) {
                    mix_packets(ctx, &mut y, &coeff_vectors[j], &self.packets_of_row(i));
                }
                y
            })
            .collect();
        Ok(DeliveryPayload { coeff_vectors, blocks })
    }

    pub fn measure(&self, payload: &DeliveryPayload) -> Measurement {
        let (k, f, _, s) = self.pda.params();
        let b = self.library.b();
        let n = self.library.n_files();
        let cached = self.caches.iter().map(UserCache::symbols).max().unwrap_or(0);
        let tx = payload.blocks.iter().map(Vec::len).sum::<usize>()
            + payload.coeff_vectors.iter().map(Vec::len).sum::<usize>();
        let mut randomness = 0u64;
        if self.mode.has_security_keys() {
            randomness += (s * b / f) as u64;
        }
        if self.mode.has_privacy_keys() {
            randomness += (n * k) as u64;
        }
        Measurement {
            memory: frac(cached as i64, b as i64),
            load: frac(s as i64, f as i64),
            tx_symbols: tx as u64,
            randomness: RandomnessBudget { symbols: randomness, q: self.ctx().order() },
        }
    }

    /// Serves `demands`, then refreshes the superposed keys: `V_s += fresh_s`
    /// and `p_k += c_k d_k`. Each user's coded records are updated from its own
    /// decoded output and the public fresh keys only.
    pub fn update_round(
        &self,
        demands: &[Vec<FieldElement>],
        fresh_security_keys: &[Vec<FieldElement>],
        local_coeffs: &[FieldElement],
    ) -> Result<SchemeState, EngineError> {
        let ctx = self.ctx().clone();
        let (k, f, _, s) = self.pda.params();
        check_vectors(&ctx, fresh_security_keys, s, self.packet_len(), "fresh security key")?;
        check_vector(&ctx, local_coeffs, k, "local coefficient")?;
        let zero = FieldElement::ZERO;
        let fresh = |s: usize, t: usize| {
            if self.mode.has_security_keys() { fresh_security_keys[s][t] } else { zero }
        };
        let coeff = |u: usize| if self.mode.has_privacy_keys() { local_coeffs[u] } else { zero };

        let payload = self.deliver(demands)?;
        let mut caches = Vec::with_capacity(k);
        for user in 0..k {
            let decoded = self.user_view(user).decode(&payload, &demands[user])?;
            let wanted = split(&decoded, f)?;
            let mut cache = self.caches[user].clone();
            for (i, rec) in cache.records.iter_mut().enumerate() {
                if let (CacheRecord::Coded(key), PdaEntry::Ordinary(sym)) = (rec, self.pda.entry(i, user)) {
                    for (t, x) in key.iter_mut().enumerate() {
                        let upd = ctx.add(fresh(sym as usize - 1, t), ctx.mul(coeff(user), wanted[i][t]));
                        *x = ctx.add(*x, upd);
                    }
                }
            }
            caches.push(cache);
        }

        let mut randomness = self.randomness.clone();
        for (si, v) in randomness.security_keys.iter_mut().enumerate() {
            for (t, x) in v.iter_mut().enumerate() {
                *x = ctx.add(*x, fresh(si, t));
            }
        }
        for (u, p) in randomness.privacy_vectors.iter_mut().enumerate() {
            ctx.axpy(p, coeff(u), &demands[u]);
        }
        Ok(SchemeState { pda: self.pda.clone(), library: self.library.clone(), randomness, mode: self.mode, caches })
    }

    /// Delivers `demands` and checks every user's decoded output against the
    /// direct combination of the library. Returns per-user verdicts.
    pub fn verify_demands(&self, demands: &[Vec<FieldElement>]) -> Result<Vec<bool>, EngineError> {
        let payload = self.deliver(demands)?;
        (0..self.pda.k())
            .map(|u| Ok(self.user_view(u).decode(&payload, &demands[u])? == self.library.combination(&demands[u])?))
            .collect()
    }
}

/// What user `k` holds: its own cache plus the public PDA and field. Decoding
/// through this type cannot reach the server's keys or other users' caches.
#[derive(Copy, Clone, Debug)]
pub struct UserView<'a> {
    pub user: usize,
    pub pda: &'a Pda,
    pub ctx: &'a FieldContext,
    pub n_files: usize,
    pub packet_len: usize,
    pub cache: &'a UserCache,
}

impl UserView<'_> {
    /// Recovers `sum_n d_n W_n` from the cache, the payload and the demand.
    pub fn decode(&self, payload: &DeliveryPayload, demand: &[FieldElement]) -> Result<Vec<FieldElement>, EngineError> {
        let ctx = self.ctx;
        let (k, f, _, s) = self.pda.params();
        check_vector(ctx, demand, self.n_files, "demand")?;
        if payload.coeff_vectors.len() != k || payload.blocks.len() != s {
            return Err(EngineError::PayloadMismatch(format!(
                "expected {k} coefficient vectors and {s} blocks, got {} and {}",
                payload.coeff_vectors.len(),
                payload.blocks.len()
            )));
        }
        if payload.coeff_vectors.iter().any(|q| q.len() != self.n_files)
            || payload.blocks.iter().any(|y| y.len() != self.packet_len)
        {
            return Err(EngineError::PayloadMismatch("vector lengths".into()));
        }
        if self.cache.records.len() != f {
            return Err(EngineError::PayloadMismatch("cache does not match the PDA".into()));
        }
        let uncoded = |row: usize| -> Result<&Vec<Vec<FieldElement>>, EngineError> {
            match &self.cache.records[row] {
                CacheRecord::Uncoded(p) => Ok(p),
                CacheRecord::Coded(_) => {
                    Err(EngineError::PayloadMismatch(format!("row {} not cached uncoded", row + 1)))
                }
            }
        };

        let mut out = Vec::with_capacity(f * self.packet_len);
        for h in 0..f {
            let mut packet = vec![FieldElement::ZERO; self.packet_len];
            match self.pda.entry(h, self.user) {
                PdaEntry::Star => {
                    for (&d, w) in demand.iter().zip(uncoded(h)?) {
                        ctx.axpy(&mut packet, d, w);
                    }
                }
                PdaEntry::Ordinary(sym) => {
                    let CacheRecord::Coded(key) = &self.cache.records[h] else {
                        return Err(EngineError::PayloadMismatch(format!("row {} not cached coded", h + 1)));
                    };
                    packet.copy_from_slice(&payload.blocks[sym as usize - 1]);
                    ctx.sub_assign(&mut packet, key);
                    for &(i, j) in self.pda.occurrences(sym) {
                        if j == self.user {
                            continue;
                        }
                        for (&c, w) in payload.coeff_vectors[j].iter().zip(uncoded(i)?) {
                            ctx.axpy(&mut packet, ctx.neg(c), w);
                        }
                    }
                }
            }
            out.extend(packet);
        }
        Ok(out)
    }
}

/// Demand tuple where user `k` wants file `k mod N` (0-based).
pub fn unit_demands(ctx: &FieldContext, k: usize, n_files: usize) -> Vec<Vec<FieldElement>> {
    (0..k)
        .map(|u| (0..n_files).map(|n| if n == u % n_files { ctx.one() } else { ctx.zero() }).collect())
        .collect()
}

pub fn random_demands<R: Rng + ?Sized>(ctx: &FieldContext, k: usize, n_files: usize, rng: &mut R) -> Vec<Vec<FieldElement>> {
    let q = ctx.order();
    (0..k).map(|_| (0..n_files).map(|_| ctx.reduce(rng.gen_range(0..q) as u64)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pda::man_pda;
    use crate::rational::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn el(ctx: &FieldContext, xs: &[u32]) -> Vec<FieldElement> {
        xs.iter().map(|&x| ctx.element(x).unwrap()).collect()
    }

    fn toy(seed: u64, mode: Mode) -> SchemeState {
        let ctx = FieldContext::prime(2).unwrap();
        let pda = man_pda(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lib = Library::random(ctx.clone(), 4, 3, &mut rng);
        let rnd = Randomness::generate(&pda, &ctx, 4, 3, &mut rng).unwrap();
        SchemeState::place(pda, lib, rnd, mode).unwrap()
    }

    #[test]
    fn split_examples() {
        let ctx = FieldContext::prime(5).unwrap();
        let f = el(&ctx, &[1, 2, 3]);
        assert_eq!(split(&f, 3).unwrap(), vec![&f[0..1], &f[1..2], &f[2..3]]);
        assert_eq!(split(&f, 1).unwrap(), vec![&f[..]]);
        let g = el(&ctx, &[1, 2, 3, 4]);
        assert_eq!(split(&g, 3), Err(EngineError::NonDivisibleB { b: 4, f: 3 }));
        assert_eq!(split(&g, 2).unwrap().concat(), g);
    }

    #[test]
    fn privacy_key_examples() {
        let mut st = toy(3, Mode::SpLfr);
        let ctx = st.ctx().clone();
        st.randomness.privacy_vectors[0] = el(&ctx, &[0, 0, 1, 0]);
        assert_eq!(st.privacy_key(1, 0).unwrap(), st.library.packet(2, 1, 3));
        st.randomness.privacy_vectors[0] = el(&ctx, &[0, 0, 0, 0]);
        assert_eq!(st.privacy_key(2, 0).unwrap(), el(&ctx, &[0]));
        st.randomness.privacy_vectors[0] = el(&ctx, &[1, 1, 0, 1]);
        let xor = ctx.add(ctx.add(st.library.file(0)[1], st.library.file(1)[1]), st.library.file(3)[1]);
        assert_eq!(st.privacy_key(1, 0).unwrap(), vec![xor]);
        assert_eq!(st.privacy_key(0, 0), Err(EngineError::StarCell { row: 1, col: 1 }));
    }

    #[test]
    fn toy_cache_layout_and_signals() {
        let st = toy(11, Mode::SpLfr);
        let ctx = st.ctx().clone();
        let v = &st.randomness.security_keys;
        // user 1: W_[4],1 ; T_{2,1}+V_1 ; T_{3,1}+V_2
        let z1 = &st.caches[0].records;
        assert_eq!(z1[0], CacheRecord::Uncoded((0..4).map(|n| st.library.packet(n, 0, 3).to_vec()).collect()));
        let coded = |i, j, s: usize| {
            let mut r = st.privacy_key(i, j).unwrap();
            ctx.add_assign(&mut r, &v[s]);
            CacheRecord::Coded(r)
        };
        assert_eq!(z1[1], coded(1, 0, 0));
        assert_eq!(z1[2], coded(2, 0, 1));
        assert_eq!(st.caches[1].records[0], coded(0, 1, 0));
        assert_eq!(st.caches[1].records[2], coded(2, 1, 2));
        assert_eq!(st.caches[2].records[0], coded(0, 2, 1));
        assert_eq!(st.caches[2].records[1], coded(1, 2, 2));

        let demands = unit_demands(&ctx, 3, 4);
        let x = st.deliver(&demands).unwrap();
        // Y_1 = V_1 + (W_{1,2} + T_{2,1}) + (W_{2,1} + T_{1,2})
        let w = |n: usize, i: usize| st.library.packet(n, i, 3)[0];
        let t = |i, j| st.privacy_key(i, j).unwrap()[0];
        let sum = |xs: &[FieldElement]| xs.iter().fold(ctx.zero(), |a, &b| ctx.add(a, b));
        assert_eq!(x.blocks[0], vec![sum(&[v[0][0], w(0, 1), t(1, 0), w(1, 0), t(0, 1)])]);
        assert_eq!(x.blocks[1], vec![sum(&[v[1][0], w(0, 2), t(2, 0), w(2, 0), t(0, 2)])]);
        assert_eq!(x.blocks[2], vec![sum(&[v[2][0], w(1, 2), t(2, 1), w(2, 1), t(1, 2)])]);
        for u in 0..3 {
            assert_eq!(st.user_view(u).decode(&x, &demands[u]).unwrap(), st.library.file(u));
        }

        let m = st.measure(&x);
        assert_eq!((m.memory, m.load, m.tx_symbols), (int(2), int(1), 15));
        assert_eq!(m.randomness.symbols, 3 + 12);
        assert_eq!(m.randomness.to_string(), "15*log2(2)");
    }

    #[test]
    fn all_star_array_caches_everything() {
        let ctx = FieldContext::prime(3).unwrap();
        let pda = Pda::validate(vec![vec![PdaEntry::Star; 3]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let lib = Library::random(ctx.clone(), 4, 5, &mut rng);
        let rnd = Randomness::generate(&pda, &ctx, 4, 5, &mut rng).unwrap();
        let st = SchemeState::place(pda, lib, rnd, Mode::SpLfr).unwrap();
        let d = random_demands(&ctx, 3, 4, &mut rng);
        let x = st.deliver(&d).unwrap();
        let m = st.measure(&x);
        assert_eq!((m.memory, m.load, m.tx_symbols), (int(4), int(0), 12));
        assert!(st.verify_demands(&d).unwrap().iter().all(|&ok| ok));
    }

    #[test]
    fn zero_demand_decodes_zero_file() {
        let st = toy(5, Mode::SpLfr);
        let ctx = st.ctx().clone();
        let d = vec![el(&ctx, &[0, 0, 0, 0]); 3];
        let x = st.deliver(&d).unwrap();
        for u in 0..3 {
            assert_eq!(st.user_view(u).decode(&x, &d[u]).unwrap(), el(&ctx, &[0, 0, 0]));
        }
        let lfr = toy(5, Mode::Lfr);
        let x = lfr.deliver(&d).unwrap();
        assert!(x.symbols().all(|s| s.is_zero()));
    }

    #[test]
    fn lfr_mode_is_plain_man_placement() {
        let st = toy(9, Mode::Lfr);
        for (u, cache) in st.caches.iter().enumerate() {
            for (i, rec) in cache.records.iter().enumerate() {
                match rec {
                    CacheRecord::Uncoded(p) => {
                        assert!(st.pda.entry(i, u).is_star());
                        assert_eq!(p.len(), 4);
                    }
                    CacheRecord::Coded(key) => assert!(key.iter().all(|x| x.is_zero())),
                }
            }
        }
    }

    #[test]
    fn mode_degenerations() {
        let ctx = FieldContext::prime(3).unwrap();
        let pda = man_pda(4, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let lib = Library::random(ctx.clone(), 3, 12, &mut rng);
        let rnd = Randomness::generate(&pda, &ctx, 3, 12, &mut rng).unwrap();
        let demands = unit_demands(&ctx, 4, 3);

        // S-LFR: q_k = d_k and Y_s = V_s + sum over cells of W_{d_j, i}.
        let st = SchemeState::place(pda.clone(), lib.clone(), rnd.clone(), Mode::SLfr).unwrap();
        let x = st.deliver(&demands).unwrap();
        assert_eq!(x.coeff_vectors, demands);
        let direct_blocks = |keys: &[Vec<FieldElement>]| -> Vec<Vec<FieldElement>> {
            (1..=pda.s() as u32)
                .map(|s| {
                    let mut y = keys[s as usize - 1].clone();
                    for &(i, j) in pda.occurrences(s) {
                        let wanted = j % 3;
                        ctx.add_assign(&mut y, lib.packet(wanted, i, pda.f()));
                    }
                    y
                })
                .collect()
        };
        assert_eq!(x.blocks, direct_blocks(&rnd.security_keys));

        // LFR: the plain PDA multicast.
        let st = SchemeState::place(pda.clone(), lib.clone(), rnd.clone(), Mode::Lfr).unwrap();
        let x = st.deliver(&demands).unwrap();
        assert_eq!(x.blocks, direct_blocks(&Randomness::zeros(&pda, 3, 2).security_keys));

        // P-LFR keeps the privacy vectors and drops the security keys.
        let st = SchemeState::place(pda.clone(), lib.clone(), rnd.clone(), Mode::PLfr).unwrap();
        assert!(st.randomness.security_keys.iter().flatten().all(|x| x.is_zero()));
        assert_eq!(st.randomness.privacy_vectors, rnd.privacy_vectors);
        let m = st.measure(&st.deliver(&demands).unwrap());
        assert_eq!(m.randomness.symbols, 12);
        for mode in Mode::ALL {
            let st = SchemeState::place(pda.clone(), lib.clone(), rnd.clone(), mode).unwrap();
            assert!(st.verify_demands(&demands).unwrap().into_iter().all(|ok| ok), "{mode}");
        }
    }

    #[test]
    fn cache_budget_matches_memory_formula() {
        let ctx = FieldContext::binary(2).unwrap();
        for (k, t) in [(3, 0), (3, 1), (4, 2), (5, 3), (4, 4)] {
            let pda = man_pda(k, t).unwrap();
            let (_, f, z, _) = pda.params();
            let b = f * 2;
            let n = 3;
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64);
            let lib = Library::random(ctx.clone(), n, b, &mut rng);
            let rnd = Randomness::generate(&pda, &ctx, n, b, &mut rng).unwrap();
            let (m, _) = pda.memory_load(n);
            let st = SchemeState::place(pda, lib, rnd, Mode::SpLfr).unwrap();
            for c in st.caches() {
                assert_eq!(c.symbols(), (z * n + f - z) * b / f);
                assert_eq!(frac(c.symbols() as i64, b as i64), m);
            }
        }
    }

    #[test]
    fn shape_errors() {
        let st = toy(1, Mode::SpLfr);
        let ctx = st.ctx().clone();
        assert!(matches!(st.deliver(&unit_demands(&ctx, 2, 4)), Err(EngineError::Shape(_))));
        let wrong_len = vec![el(&ctx, &[1, 0, 0]); 3];
        assert!(matches!(st.deliver(&wrong_len), Err(EngineError::Shape(_))));
        let gf5 = FieldContext::prime(5).unwrap();
        let foreign = vec![el(&gf5, &[4, 0, 0, 0]); 3];
        assert!(matches!(st.deliver(&foreign), Err(EngineError::Field(_))));

        let d = unit_demands(&ctx, 3, 4);
        let mut x = st.deliver(&d).unwrap();
        x.blocks.pop();
        assert!(matches!(st.user_view(0).decode(&x, &d[0]), Err(EngineError::PayloadMismatch(_))));

        let pda = man_pda(3, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let lib = Library::random(ctx.clone(), 4, 4, &mut rng);
        let rnd = Randomness::zeros(&pda, 4, 1);
        assert_eq!(SchemeState::place(pda.clone(), lib, rnd.clone(), Mode::SpLfr), Err(EngineError::NonDivisibleB { b: 4, f: 3 }));
        let lib = Library::random(ctx.clone(), 4, 6, &mut rng);
        assert!(matches!(SchemeState::place(pda, lib, rnd, Mode::SpLfr), Err(EngineError::Shape(_))));
    }

    #[test]
    fn update_with_zero_refresh_is_identity() {
        let st = toy(2, Mode::SpLfr);
        let ctx = st.ctx().clone();
        let d = unit_demands(&ctx, 3, 4);
        let next = st.update_round(&d, &vec![el(&ctx, &[0]); 3], &el(&ctx, &[0, 0, 0])).unwrap();
        assert_eq!(next, st);
    }

    #[test]
    fn update_matches_fresh_placement() {
        let ctx = FieldContext::prime(5).unwrap();
        let pda = man_pda(4, 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let lib = Library::random(ctx.clone(), 3, 8, &mut rng);
        let rnd = Randomness::generate(&pda, &ctx, 3, 8, &mut rng).unwrap();
        for mode in Mode::ALL {
            let mut st = SchemeState::place(pda.clone(), lib.clone(), rnd.clone(), mode).unwrap();
            let mut acc = st.randomness().clone();
            for _ in 0..3 {
                let d = random_demands(&ctx, 4, 3, &mut rng);
                let fresh = Randomness::generate(&pda, &ctx, 3, 8, &mut rng).unwrap().security_keys;
                let c: Vec<_> = (0..4).map(|_| ctx.reduce(rng.gen_range(0..5))).collect();
                st = st.update_round(&d, &fresh, &c).unwrap();
                if mode.has_security_keys() {
                    for (v, u) in acc.security_keys.iter_mut().zip(&fresh) {
                        ctx.add_assign(v, u);
                    }
                }
                if mode.has_privacy_keys() {
                    for ((p, dk), &ck) in acc.privacy_vectors.iter_mut().zip(&d).zip(&c) {
                        ctx.axpy(p, ck, dk);
                    }
                }
                let scratch = SchemeState::place(pda.clone(), lib.clone(), acc.clone(), mode).unwrap();
                assert_eq!(st, scratch, "{mode}");
                let next = random_demands(&ctx, 4, 3, &mut rng);
                assert!(st.verify_demands(&next).unwrap().into_iter().all(|ok| ok));
            }
        }
    }
}
