//! Engine and audit behaviour across fields, modes and execution strategies.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use splfr_core::audit::{
    audit_correctness, audit_correctness_with, audit_privacy, audit_security, AuditConfig, AuditError, DemandSpace,
};
use splfr_core::engine::{random_demands, EngineError, Library, Mode, Randomness, SchemeState};
use splfr_core::toy::toy_array;
use splfr_core::{man_pda, FieldContext, FieldElement, Strategy};

/// GF(2^m) product by shift-and-add with reduction by `poly`.
fn gf2m_mul(mut a: u32, mut b: u32, degree: u32, poly: u32) -> u32 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> degree & 1 == 1 {
            a ^= poly;
        }
    }
    acc
}

fn gf2m_combination(files: &[Vec<FieldElement>], d: &[FieldElement], degree: u32, poly: u32) -> Vec<u32> {
    (0..files[0].len())
        .map(|b| files.iter().zip(d).fold(0, |acc, (w, c)| acc ^ gf2m_mul(c.value(), w[b].value(), degree, poly)))
        .collect()
}

#[test]
fn binary_extension_fields_decode() {
    for (degree, poly) in [(2u32, 0b111u32), (3, 0b1011), (4, 0b10011), (8, 0x11B)] {
        let ctx = FieldContext::binary_with_poly(degree, poly).unwrap();
        for (k, t) in [(3, 1), (4, 2), (5, 3)] {
            let pda = man_pda(k, t).unwrap();
            let (n, b) = (3, 2 * pda.f());
            let mut rng = ChaCha8Rng::seed_from_u64(u64::from(degree) * 100 + k as u64);
            for mode in Mode::ALL {
                let lib = Library::random(ctx.clone(), n, b, &mut rng);
                let rnd = Randomness::generate(&pda, &ctx, n, b, &mut rng).unwrap();
                let state = SchemeState::place(pda.clone(), lib.clone(), rnd, mode).unwrap();
                let demands = random_demands(&ctx, k, n, &mut rng);
                let payload = state.deliver(&demands).unwrap();
                for (u, d) in demands.iter().enumerate() {
                    let got: Vec<u32> = state.user_view(u).decode(&payload, d).unwrap().iter().map(|x| x.value()).collect();
                    assert_eq!(got, gf2m_combination(lib.files(), d, degree, poly), "GF(2^{degree}) K={k} t={t} {mode}");
                }
            }
        }
    }
}

#[test]
fn placement_rejects_bad_shapes() {
    let ctx = FieldContext::prime(3).unwrap();
    let pda = man_pda(3, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let lib = Library::random(ctx.clone(), 2, 4, &mut rng);
    assert!(matches!(Randomness::generate(&pda, &ctx, 2, 4, &mut rng), Err(EngineError::NonDivisibleB { b: 4, f: 3 })));
    let rnd = Randomness::zeros(&pda, 2, 1);
    assert!(SchemeState::place(pda, lib, rnd, Mode::SpLfr).is_err());
}

fn small(mode: Mode) -> AuditConfig {
    AuditConfig::new(man_pda(2, 1).unwrap(), 2, 2, FieldContext::prime(2).unwrap(), mode)
}

#[test]
fn audits_agree_across_strategies() {
    for mode in Mode::ALL {
        let runs: Vec<_> = Strategy::available()
            .into_iter()
            .map(|s| {
                let cfg = AuditConfig { strategy: s, ..small(mode) };
                (
                    audit_correctness(&cfg).unwrap(),
                    audit_security(&cfg).unwrap(),
                    audit_privacy(&cfg, &[0]).unwrap(),
                    audit_privacy(&cfg, &[1]).unwrap(),
                )
            })
            .collect();
        assert!(runs.windows(2).all(|w| w[0] == w[1]), "{mode}");
    }
}

#[test]
fn verdicts_by_mode() {
    for mode in Mode::ALL {
        let cfg = small(mode);
        assert!(audit_correctness(&cfg).unwrap().verdict, "{mode} correctness");
        let sec = audit_security(&cfg).unwrap();
        let private = audit_privacy(&cfg, &[0]).unwrap().verdict;
        match mode {
            Mode::SpLfr => assert!(sec.verdict && private),
            // Without security keys the signals carry file data.
            Mode::PLfr => assert!(!sec.verdict && private),
            // File secrecy holds, but demands travel in the clear.
            Mode::SLfr => assert!(sec.verdict && !private),
            Mode::Lfr => assert!(!sec.verdict && !private),
        }
        assert!(sec.diagnostic.is_some());
        if !sec.verdict {
            assert!(sec.leakage_lower_bound_bits > splfr_core::rational::int(0));
            assert!(sec.counterexample.is_some());
        }
    }
}

#[test]
fn unit_demand_space_and_toy_array() {
    let ctx = FieldContext::prime(2).unwrap();
    let mut cfg = AuditConfig::new(toy_array(), 2, 3, ctx, Mode::SpLfr);
    cfg.demand_space = DemandSpace::Units;
    cfg.colluding_subsets = vec![vec![0]];
    let atoms = cfg.atoms().unwrap();
    // files 2^6, keys 2^(3 + 6), demands 2^3
    assert_eq!(atoms, 64 * 512 * 8);
    assert!(audit_security(&cfg).unwrap().verdict);
    let r = audit_privacy(&cfg, &[0]).unwrap();
    assert!(r.verdict);
    assert_eq!(r.subset, Some(vec![1]));
}

#[test]
fn tampering_is_caught() {
    let cfg = small(Mode::SpLfr);
    let ctx = cfg.ctx.clone();
    let report = audit_correctness_with(&cfg, |payload| {
        let x = &mut payload.blocks[0][0];
        *x = ctx.add(*x, ctx.one());
    })
    .unwrap();
    assert!(!report.verdict);
    assert_eq!(report.violations, report.checks);
    assert!(report.counterexample.unwrap().user.is_some());
}

#[test]
fn budget_is_enforced() {
    let mut cfg = small(Mode::SpLfr);
    cfg.budget = 1000;
    assert!(matches!(cfg.atoms(), Err(AuditError::BudgetExceeded { atoms: 8192, budget: 1000 })));
    assert!(matches!(audit_security(&cfg), Err(AuditError::BudgetExceeded { .. })));
}
