//! Exact information-theoretic audits by full enumeration.
//!
//! Files, keys and demands are independent and uniform, so every atom
//! `(W, V, p, d)` has the same probability and a distribution is just an
//! integer count table. Two variables `A`, `B` are independent iff
//!
//! ```text
//! count(a, b) * total == count(a) * count(b)
//! ```
//!
//! for every `a` in the support of `A` and `b` in the support of `B`,
//! including pairs that never occur together. This is the same as
//! `I(A; B) = 0` and needs no logarithms.
//!
//! Key families that the mode zeroes are not enumerated, so the atom count
//! for P-LFR, S-LFR and LFR is smaller than for SP-LFR.

use std::collections::HashMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::engine::{DeliveryPayload, EngineError, Library, Mode, Randomness, SchemeState};
use crate::exec::Strategy;
use crate::field::{FieldContext, FieldElement};
use crate::pda::Pda;
use crate::rational::Rational;

pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Above this many atoms the unconditional privacy diagnostic is skipped,
/// since it needs the full joint table.
pub const DIAGNOSTIC_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("{atoms} atoms exceed the budget of {budget}")]
    BudgetExceeded { atoms: u128, budget: u64 },
    #[error("invalid colluding subset {0:?}")]
    BadSubset(Vec<usize>),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Which demand vectors each user may pick.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum DemandSpace {
    /// Every vector in `F_q^N`.
    All,
    /// Unit vectors only, i.e. plain file retrieval.
    Units,
}

#[derive(Clone, Debug)]
pub struct AuditConfig {
    pub pda: Pda,
    pub n_files: usize,
    pub b: usize,
    pub ctx: FieldContext,
    pub mode: Mode,
    pub demand_space: DemandSpace,
    /// 0-based user indices.
    pub colluding_subsets: Vec<Vec<usize>>,
    pub budget: u64,
    pub strategy: Strategy,
}

impl AuditConfig {
    /// Full demand space, every nonempty subset, default budget.
    pub fn new(pda: Pda, n_files: usize, b: usize, ctx: FieldContext, mode: Mode) -> Self {
        let colluding_subsets = all_subsets(pda.k());
        AuditConfig {
            pda,
            n_files,
            b,
            ctx,
            mode,
            demand_space: DemandSpace::All,
            colluding_subsets,
            budget: DEFAULT_BUDGET,
            strategy: Strategy::default(),
        }
    }

    /// Number of atoms, or an error if it exceeds the budget.
    pub fn atoms(&self) -> Result<u64, AuditError> {
        Space::new(self).map(|s| s.atoms())
    }
}

/// Every nonempty subset of `0..k`, ordered by size then lexicographically.
pub fn all_subsets(k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u64..1 << k)
        .map(|mask| (0..k).filter(|&u| mask >> u & 1 == 1).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// A distribution given by integer counts over tuples.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactDistribution {
    counts: HashMap<Vec<u32>, u64>,
    total: u64,
}

impl ExactDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, key: Vec<u32>, count: u64) {
        *self.counts.entry(key).or_insert(0) += count;
        self.total += count;
    }

    pub fn merge(mut self, other: ExactDistribution) -> Self {
        if self.counts.len() < other.counts.len() {
            return other.merge(self);
        }
        for (k, c) in other.counts {
            self.add(k, c);
        }
        self
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, key: &[u32]) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn probability(&self, key: &[u32]) -> Rational {
        Rational::new(BigInt::from(self.count(key)), BigInt::from(self.total))
    }
}

impl FromIterator<(Vec<u32>, u64)> for ExactDistribution {
    fn from_iter<I: IntoIterator<Item = (Vec<u32>, u64)>>(iter: I) -> Self {
        let mut d = ExactDistribution::new();
        for (k, c) in iter {
            d.add(k, c);
        }
        d
    }
}

/// Outcome of an independence check between two parts of a distribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutualInformation {
    /// Every factorization identity holds, i.e. `I = 0` exactly.
    pub zero: bool,
    /// Identities checked: `|supp A| * |supp B|`.
    pub checks: u64,
    pub violations: u64,
    /// `2 TV^2` between the joint and the product of marginals, a lower bound
    /// on `I` in bits by Pinsker's inequality. Zero iff `zero`.
    pub lower_bound_bits: Rational,
}

impl MutualInformation {
    fn from_parts(checks: u64, violations: u64, tv_num: u128, total: u64) -> Self {
        // TV = tv_num / (2 T^2), so 2 TV^2 = tv_num^2 / (2 T^4).
        let t2 = BigInt::from(total) * BigInt::from(total);
        let lower = Rational::new(BigInt::from(tv_num).pow(2), BigInt::from(2) * &t2 * &t2);
        MutualInformation { zero: violations == 0, checks, violations, lower_bound_bits: lower }
    }
}

/// Accumulates factorization identities over the joint support. Pairs outside
/// the joint support are handled in closed form: each one is a violation and
/// contributes `count(a) count(b)` to the TV numerator.
#[derive(Default)]
struct Identities {
    checks: u64,
    violations: u64,
    tv_num: u128,
}

fn check_factorization(joint: &HashMap<(Vec<u32>, Vec<u32>), u64>, total: u64) -> Identities {
    let mut left: HashMap<&[u32], u64> = HashMap::new();
    let mut right: HashMap<&[u32], u64> = HashMap::new();
    for ((a, b), &c) in joint {
        *left.entry(a).or_insert(0) += c;
        *right.entry(b).or_insert(0) += c;
    }
    let t = total as u128;
    let pairs = left.len() as u64 * right.len() as u64;
    let mut id = Identities { checks: pairs, violations: pairs - joint.len() as u64, tv_num: t * t };
    for ((a, b), &c) in joint {
        let lhs = c as u128 * t;
        let rhs = left[a.as_slice()] as u128 * right[b.as_slice()] as u128;
        if lhs != rhs {
            id.violations += 1;
        }
        id.tv_num = id.tv_num + lhs.abs_diff(rhs) - rhs;
    }
    id
}

/// Exact independence check between the coordinates in `left` and the rest.
pub fn mutual_information_bits(dist: &ExactDistribution, left: &[usize]) -> MutualInformation {
    let mut joint: HashMap<(Vec<u32>, Vec<u32>), u64> = HashMap::new();
    for (key, &c) in &dist.counts {
        let a = left.iter().map(|&i| key[i]).collect();
        let b = (0..key.len()).filter(|i| !left.contains(i)).map(|i| key[i]).collect();
        *joint.entry((a, b)).or_insert(0) += c;
    }
    let id = check_factorization(&joint, dist.total);
    MutualInformation::from_parts(id.checks, id.violations, id.tv_num, dist.total)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AuditKind {
    Correctness,
    Security,
    Privacy,
}

impl AuditKind {
    pub fn name(self) -> &'static str {
        match self {
            AuditKind::Correctness => "correctness",
            AuditKind::Security => "security",
            AuditKind::Privacy => "privacy",
        }
    }
}

/// A witness for a failed audit. Field values are plain integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub files: Vec<Vec<u32>>,
    pub demands: Vec<Vec<u32>>,
    /// 1-based user, for correctness failures.
    pub user: Option<usize>,
    pub observable: Vec<u32>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub kind: AuditKind,
    pub mode: Mode,
    /// 1-based colluding users, for privacy audits.
    pub subset: Option<Vec<usize>>,
    /// The information quantity the verdict certifies to be zero.
    pub quantity: &'static str,
    pub verdict: bool,
    pub atoms: u64,
    pub checks: u64,
    pub violations: u64,
    /// Rational lower bound on the leaked information in bits; zero on pass.
    pub leakage_lower_bound_bits: Rational,
    pub counterexample: Option<Counterexample>,
    /// A related quantity reported for information only.
    pub diagnostic: Option<Diagnostic>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub quantity: &'static str,
    pub result: MutualInformation,
}

fn values(v: &[FieldElement]) -> Vec<u32> {
    v.iter().map(|x| x.value()).collect()
}

fn values2(v: &[Vec<FieldElement>]) -> Vec<Vec<u32>> {
    v.iter().map(|x| values(x)).collect()
}

/// Mixed-radix layout of the atom space.
struct Space<'a> {
    cfg: &'a AuditConfig,
    q: u64,
    packet_len: usize,
    key_digits: usize,
    priv_digits: usize,
    file_count: u64,
    key_count: u64,
    demand_choices: u64,
    demand_tuples: u64,
}

fn checked_pow(base: u64, exp: usize) -> Option<u128> {
    (base as u128).checked_pow(exp as u32)
}

impl<'a> Space<'a> {
    fn new(cfg: &'a AuditConfig) -> Result<Self, AuditError> {
        let (k, f, _, s) = cfg.pda.params();
        if !cfg.b.is_multiple_of(f) {
            return Err(EngineError::NonDivisibleB { b: cfg.b, f }.into());
        }
        let q = cfg.ctx.order() as u64;
        let packet_len = cfg.b / f;
        let key_digits = if cfg.mode.has_security_keys() { s * packet_len } else { 0 };
        let priv_digits = if cfg.mode.has_privacy_keys() { k * cfg.n_files } else { 0 };
        let demand_choices = match cfg.demand_space {
            DemandSpace::All => checked_pow(q, cfg.n_files),
            DemandSpace::Units => Some(cfg.n_files as u128),
        };
        let parts = [
            checked_pow(q, cfg.n_files * cfg.b),
            checked_pow(q, key_digits + priv_digits),
            demand_choices.and_then(|c| c.checked_pow(k as u32)),
        ];
        let atoms = parts.iter().try_fold(1u128, |acc, p| p.and_then(|p| acc.checked_mul(p))).unwrap_or(u128::MAX);
        if atoms > cfg.budget as u128 {
            return Err(AuditError::BudgetExceeded { atoms, budget: cfg.budget });
        }
        let space = Space {
            cfg,
            q,
            packet_len,
            key_digits,
            priv_digits,
            file_count: parts[0].unwrap() as u64,
            key_count: parts[1].unwrap() as u64,
            demand_choices: demand_choices.unwrap() as u64,
            demand_tuples: parts[2].unwrap() as u64,
        };
        // Surface shape errors once, before the sweep.
        space.state(0, 0)?.deliver(&space.demands(0))?;
        Ok(space)
    }

    fn atoms(&self) -> u64 {
        self.file_count * self.key_count * self.demand_tuples
    }

    fn digits(&self, mut index: u64, count: usize) -> Vec<FieldElement> {
        (0..count)
            .map(|_| {
                let d = index % self.q;
                index /= self.q;
                self.cfg.ctx.element(d as u32).expect("digit below q")
            })
            .collect()
    }

    fn files(&self, w: u64) -> Vec<Vec<FieldElement>> {
        let flat = self.digits(w, self.cfg.n_files * self.cfg.b);
        flat.chunks(self.cfg.b).map(<[_]>::to_vec).collect()
    }

    fn state(&self, w: u64, key: u64) -> Result<SchemeState, EngineError> {
        let cfg = self.cfg;
        let library = Library::new(cfg.ctx.clone(), self.files(w))?;
        let mut rnd = Randomness::zeros(&cfg.pda, cfg.n_files, self.packet_len);
        let flat = self.digits(key, self.key_digits + self.priv_digits);
        let (v, p) = flat.split_at(self.key_digits);
        if !v.is_empty() {
            rnd.security_keys = v.chunks(self.packet_len).map(<[_]>::to_vec).collect();
        }
        if !p.is_empty() {
            rnd.privacy_vectors = p.chunks(cfg.n_files).map(<[_]>::to_vec).collect();
        }
        SchemeState::place(cfg.pda.clone(), library, rnd, cfg.mode)
    }

    fn demands(&self, mut index: u64) -> Vec<Vec<FieldElement>> {
        let ctx = &self.cfg.ctx;
        (0..self.cfg.pda.k())
            .map(|_| {
                let choice = index % self.demand_choices;
                index /= self.demand_choices;
                match self.cfg.demand_space {
                    DemandSpace::All => self.digits(choice, self.cfg.n_files),
                    DemandSpace::Units => (0..self.cfg.n_files as u64)
                        .map(|n| if n == choice { ctx.one() } else { ctx.zero() })
                        .collect(),
                }
            })
            .collect()
    }
}

fn observable(payload: &DeliveryPayload) -> Vec<u32> {
    payload.symbols().map(FieldElement::value).collect()
}

/// Keeps the counterexample from the lowest-indexed atom so both strategies
/// report the same one.
type Witness = Option<(u64, Counterexample)>;

fn earliest(a: Witness, b: Witness) -> Witness {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
        (x, y) => x.or(y),
    }
}

pub fn audit_correctness(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    audit_correctness_with(cfg, |_| {})
}

/// Correctness audit with a hook that may alter each payload before users
/// decode it. Used for mutation testing.
pub fn audit_correctness_with<T>(cfg: &AuditConfig, tamper: T) -> Result<AuditReport, AuditError>
where
    T: Fn(&mut DeliveryPayload) + Sync + Send,
{
    let space = Space::new(cfg)?;
    let k = cfg.pda.k();
    let fold = |(bad, witness): (u64, Witness), base: u64| {
        let (w, key) = (base / space.key_count, base % space.key_count);
        let state = space.state(w, key).expect("validated shapes");
        let mut bad = bad;
        let mut witness = witness;
        for di in 0..space.demand_tuples {
            let demands = space.demands(di);
            let mut payload = state.deliver(&demands).expect("validated shapes");
            tamper(&mut payload);
            for (u, d) in demands.iter().enumerate() {
                let want = state.library().combination(d).expect("validated shapes");
                let got = state.user_view(u).decode(&payload, d);
                if got.as_ref() != Ok(&want) {
                    bad += 1;
                    let atom = base * space.demand_tuples + di;
                    if witness.as_ref().is_none_or(|(a, _)| atom < *a) {
                        let detail = match got {
                            Ok(v) => format!("decoded {:?}, expected {:?}", values(&v), values(&want)),
                            Err(e) => format!("decode failed: {e}"),
                        };
                        let cx = Counterexample {
                            files: values2(state.library().files()),
                            demands: values2(&demands),
                            user: Some(u + 1),
                            observable: observable(&payload),
                            detail,
                        };
                        witness = Some((atom, cx));
                    }
                }
            }
        }
        (bad, witness)
    };
    let (violations, witness) = cfg.strategy.fold_range(
        0..space.file_count * space.key_count,
        || (0u64, None),
        fold,
        |a, b| (a.0 + b.0, earliest(a.1, b.1)),
    );
    Ok(AuditReport {
        kind: AuditKind::Correctness,
        mode: cfg.mode,
        subset: None,
        quantity: "H(Wbar_d | X, d, Z)",
        verdict: violations == 0,
        atoms: space.atoms(),
        checks: space.atoms() * k as u64,
        violations,
        leakage_lower_bound_bits: Rational::default(),
        counterexample: witness.map(|(_, c)| c),
        diagnostic: None,
    })
}

/// Compares one slice histogram of `X` against the marginal. `slice_count`
/// is the number of atoms in the slice. Returns the identities and the
/// smallest violating observable.
fn compare_slice(
    slice: &HashMap<Vec<u32>, u64>,
    slice_count: u128,
    marginal: &ExactDistribution,
) -> (Identities, Option<(Vec<u32>, String)>) {
    let total = marginal.total() as u128;
    let support = marginal.support_size() as u64;
    // x outside the slice: count(s, x) = 0 but count(s) count(x) > 0.
    let seen: u128 = slice.keys().map(|x| marginal.count(x) as u128).sum();
    let mut id = Identities {
        checks: support,
        violations: support - slice.len() as u64,
        tv_num: slice_count * (total - seen),
    };
    let mut first: Option<(Vec<u32>, String)> = None;
    let mut note = |x: &Vec<u32>, msg: String| {
        if first.as_ref().is_none_or(|(y, _)| x < y) {
            first = Some((x.clone(), msg));
        }
    };
    for (x, &c) in slice {
        let lhs = c as u128 * total;
        let rhs = slice_count * marginal.count(x) as u128;
        if lhs != rhs {
            id.violations += 1;
            id.tv_num += lhs.abs_diff(rhs);
            note(x, format!("count(s,x)*total = {lhs} but count(s)*count(x) = {rhs}"));
        }
    }
    if slice.len() as u64 != support {
        let missing = marginal.counts.keys().filter(|x| !slice.contains_key(*x)).min().expect("missing key");
        note(missing, "observable never produced in this slice".into());
    }
    (id, first)
}

fn add_identities(a: Identities, b: Identities) -> Identities {
    Identities { checks: a.checks + b.checks, violations: a.violations + b.violations, tv_num: a.tv_num + b.tv_num }
}

/// Checks secrecy of the delivery signal against an eavesdropper.
///
/// Modes with privacy keys are held to `I(W, d; X) = 0`, which also hides
/// the demands. Modes without them send `q_k = d_k` in the clear, so they are
/// held to file secrecy `I(W; X) = 0`. Both identities are always computed;
/// the one not used for the verdict is attached as the diagnostic.
///
/// Pass one counts the observable marginal over all atoms. Pass two walks
/// the files, builds the histogram of `X` over the keys for every demand
/// tuple, and compares each slice against the marginal.
pub fn audit_security(cfg: &AuditConfig) -> Result<AuditReport, AuditError> {
    let space = Space::new(cfg)?;
    let bases = 0..space.file_count * space.key_count;
    let marginal = cfg.strategy.fold_range(
        bases,
        ExactDistribution::new,
        |mut acc, base| {
            let state = space.state(base / space.key_count, base % space.key_count).expect("validated shapes");
            for di in 0..space.demand_tuples {
                acc.add(observable(&state.deliver(&space.demands(di)).expect("validated shapes")), 1);
            }
            acc
        },
        ExactDistribution::merge,
    );

    struct Acc {
        strong: Identities,
        files_only: Identities,
        strong_witness: Witness,
        files_witness: Witness,
    }
    let per_files = |mut acc: Acc, w: u64| {
        let mut slices: Vec<HashMap<Vec<u32>, u64>> = vec![HashMap::new(); space.demand_tuples as usize];
        let mut files = Vec::new();
        for key in 0..space.key_count {
            let state = space.state(w, key).expect("validated shapes");
            if key == 0 {
                files = values2(state.library().files());
            }
            for (di, slice) in slices.iter_mut().enumerate() {
                let x = observable(&state.deliver(&space.demands(di as u64)).expect("validated shapes"));
                *slice.entry(x).or_insert(0) += 1;
            }
        }
        let mut by_files: HashMap<Vec<u32>, u64> = HashMap::new();
        for (di, slice) in slices.iter().enumerate() {
            for (x, &c) in slice {
                *by_files.entry(x.clone()).or_insert(0) += c;
            }
            let (id, bad) = compare_slice(slice, space.key_count as u128, &marginal);
            acc.strong = add_identities(std::mem::take(&mut acc.strong), id);
            if let Some((x, detail)) = bad {
                let demands = values2(&space.demands(di as u64));
                let cx = Counterexample { files: files.clone(), demands, user: None, observable: x, detail };
                acc.strong_witness = earliest(acc.strong_witness.take(), Some((w * space.demand_tuples + di as u64, cx)));
            }
        }
        let (id, bad) = compare_slice(&by_files, (space.key_count * space.demand_tuples) as u128, &marginal);
        acc.files_only = add_identities(std::mem::take(&mut acc.files_only), id);
        if let Some((x, detail)) = bad {
            let cx = Counterexample { files, demands: Vec::new(), user: None, observable: x, detail };
            acc.files_witness = earliest(acc.files_witness.take(), Some((w, cx)));
        }
        acc
    };
    let init = || Acc {
        strong: Identities::default(),
        files_only: Identities::default(),
        strong_witness: None,
        files_witness: None,
    };
    let acc = cfg.strategy.fold_range(0..space.file_count, init, per_files, |a, b| Acc {
        strong: add_identities(a.strong, b.strong),
        files_only: add_identities(a.files_only, b.files_only),
        strong_witness: earliest(a.strong_witness, b.strong_witness),
        files_witness: earliest(a.files_witness, b.files_witness),
    });
    let total = marginal.total();
    let strong = MutualInformation::from_parts(acc.strong.checks, acc.strong.violations, acc.strong.tv_num, total);
    let files_only =
        MutualInformation::from_parts(acc.files_only.checks, acc.files_only.violations, acc.files_only.tv_num, total);
    let strong = ("I(W,d;X)", strong, acc.strong_witness);
    let files_only = ("I(W;X)", files_only, acc.files_witness);
    let (main, other) = if cfg.mode.has_privacy_keys() { (strong, files_only) } else { (files_only, strong) };
    Ok(AuditReport {
        kind: AuditKind::Security,
        mode: cfg.mode,
        subset: None,
        quantity: main.0,
        verdict: main.1.zero,
        atoms: space.atoms(),
        checks: main.1.checks,
        violations: main.1.violations,
        leakage_lower_bound_bits: main.1.lower_bound_bits,
        counterexample: main.2.map(|(_, c)| c),
        diagnostic: Some(Diagnostic { quantity: other.0, result: other.1 }),
    })
}

/// Checks `I(d_{not S}; X, d_S, Z_S | W) = 0` for one colluding subset
/// (0-based users). The files are the outer loop; each file realization gets
/// its own count table.
pub fn audit_privacy(cfg: &AuditConfig, subset: &[usize]) -> Result<AuditReport, AuditError> {
    let k = cfg.pda.k();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() != subset.len() || sorted.iter().any(|&u| u >= k) {
        return Err(AuditError::BadSubset(subset.to_vec()));
    }
    let space = Space::new(cfg)?;
    let others: Vec<usize> = (0..k).filter(|u| !sorted.contains(u)).collect();
    let diagnostics = space.atoms() <= DIAGNOSTIC_LIMIT;

    struct Acc {
        id: Identities,
        bound: Rational,
        witness: Witness,
        pooled: HashMap<(Vec<u32>, Vec<u32>), u64>,
    }
    let per_files = |mut acc: Acc, w: u64| {
        let mut joint: HashMap<(Vec<u32>, Vec<u32>), u64> = HashMap::new();
        let mut files = Vec::new();
        for key in 0..space.key_count {
            let state = space.state(w, key).expect("validated shapes");
            if key == 0 {
                files = values2(state.library().files());
            }
            let cache_view: Vec<u32> = sorted
                .iter()
                .flat_map(|&u| state.caches()[u].records.iter())
                .flat_map(|r| match r {
                    crate::engine::CacheRecord::Uncoded(p) => p.iter().flatten().map(|x| x.value()).collect::<Vec<_>>(),
                    crate::engine::CacheRecord::Coded(v) => values(v),
                })
                .collect();
            for di in 0..space.demand_tuples {
                let demands = space.demands(di);
                let hidden: Vec<u32> = others.iter().flat_map(|&u| values(&demands[u])).collect();
                let mut seen = observable(&state.deliver(&demands).expect("validated shapes"));
                seen.extend(sorted.iter().flat_map(|&u| values(&demands[u])));
                seen.extend(&cache_view);
                *joint.entry((hidden, seen)).or_insert(0) += 1;
            }
        }
        let slice_total = space.key_count * space.demand_tuples;
        let id = check_factorization(&joint, slice_total);
        if id.violations > 0 && acc.witness.as_ref().is_none_or(|(a, _)| w < *a) {
            let (hidden, seen) = joint.keys().min().expect("nonempty slice");
            let cx = Counterexample {
                files,
                // Demands of the users outside the subset.
                demands: vec![hidden.clone()],
                user: None,
                observable: seen.clone(),
                detail: format!("{} of {} identities fail for this file realization", id.violations, id.checks),
            };
            acc.witness = Some((w, cx));
        }
        acc.bound += MutualInformation::from_parts(id.checks, id.violations, id.tv_num, slice_total).lower_bound_bits;
        acc.id.checks += id.checks;
        acc.id.violations += id.violations;
        if diagnostics {
            for (cell, c) in joint {
                *acc.pooled.entry(cell).or_insert(0) += c;
            }
        }
        acc
    };
    let init = || Acc { id: Identities::default(), bound: Rational::default(), witness: None, pooled: HashMap::new() };
    let acc = cfg.strategy.fold_range(0..space.file_count, init, per_files, |mut a, b| {
        a.id.checks += b.id.checks;
        a.id.violations += b.id.violations;
        a.bound += b.bound;
        a.witness = earliest(a.witness, b.witness);
        for (cell, c) in b.pooled {
            *a.pooled.entry(cell).or_insert(0) += c;
        }
        a
    });
    let diagnostic = diagnostics.then(|| {
        let id = check_factorization(&acc.pooled, space.atoms());
        let result = MutualInformation::from_parts(id.checks, id.violations, id.tv_num, space.atoms());
        Diagnostic { quantity: "I(d_rest; X, d_S, Z_S)", result }
    });
    // I(A; B | W) >= sum_w p(w) 2 TV_w^2.
    let bound = acc.bound / Rational::from_integer(BigInt::from(space.file_count));
    Ok(AuditReport {
        kind: AuditKind::Privacy,
        mode: cfg.mode,
        subset: Some(sorted.iter().map(|u| u + 1).collect()),
        quantity: "I(d_rest; X, d_S, Z_S | W)",
        verdict: acc.id.violations == 0,
        atoms: space.atoms(),
        checks: acc.id.checks,
        violations: acc.id.violations,
        leakage_lower_bound_bits: bound,
        counterexample: acc.witness.map(|(_, c)| c),
        diagnostic,
    })
}

/// Runs [`audit_privacy`] for every subset in the config.
pub fn audit_privacy_all(cfg: &AuditConfig) -> Result<Vec<AuditReport>, AuditError> {
    cfg.colluding_subsets.iter().map(|s| audit_privacy(cfg, s)).collect()
}
