//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every assertion is exact (radical-rational equality, zero tolerance);
//! the only numeric bounds are the stated runtime budgets.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use piq4::codebook::build;
use piq4::lp::{
    check_feasibility, closed_forms, direct_feasibility, fm_feasibility, macwilliams_system,
    sweep_nonexistence, Contradiction, Feasibility, FmOutcome,
};
use piq4::oracle::oracle_kl_check;
use piq4::packets::{
    midpoint_packets, round_robin_packets, validate_family, KqElement, Packet, PacketFamily, Parity,
};
use piq4::scalar::{rat, RadicalScalar};
use piq4::sym::{
    cartan_expectation, enumerate_basis, root_adjacent, CartanElement, OccupationVector,
    RootScaling, SymmetricState,
};
use piq4::verify::{
    check_separation_of, check_support_separation, kl_check_of, kl_full_check, solve_balancing,
    transversal_pauli_check, PauliVerdict, SeparationWitness,
};

fn occ(counts: &[u32]) -> OccupationVector {
    OccupationVector::new(counts.to_vec())
}

fn report(criterion: u32, what: &str, started: Instant) {
    println!(
        "criterion {criterion} ({what}): PASS in {:.2}s",
        started.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_1_construction_sweep() {
    let started = Instant::now();
    for q in 2..=25u32 {
        let cb = build(q).expect("buildable");
        let separation = check_support_separation(&cb);
        assert!(separation.passes(), "q = {q}: separation failed");
        let kl = kl_full_check(&cb);
        assert!(kl.passes(), "q = {q}: KL failed");
        assert!(kl.all_lambda_zero(), "q = {q}: nonzero lambda");
        let expected_ops = (q * (q - 1) + q - 1) as usize;
        assert_eq!(kl.lambda_values.len(), expected_ops, "q = {q}");
        assert_eq!(kl.elements_computed, expected_ops * (q as usize).pow(2));
        let pauli = transversal_pauli_check(&cb);
        assert_ne!(pauli.verdict, PauliVerdict::Fail, "q = {q}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 10.0,
        "sweep took {elapsed:?}, budget 10s"
    );
    report(1, "q = 2..25 all operators act as 0 * identity", started);
}

#[test]
fn criterion_2_q3_golden_values() {
    let started = Instant::now();
    let cb = build(3).unwrap();
    let seed = &cb.codewords()[0];
    assert_eq!(
        seed.amplitude(&occ(&[4, 0, 0])).square(),
        RadicalScalar::from_rational(rat(1, 3))
    );
    assert_eq!(
        seed.amplitude(&occ(&[0, 2, 2])).square(),
        RadicalScalar::from_rational(rat(2, 3))
    );
    let h1 = CartanElement::basis(3, 1);
    assert_eq!(h1.eigenvalue(&occ(&[4, 0, 0])), rat(4, 1));
    assert_eq!(h1.eigenvalue(&occ(&[0, 2, 2])), rat(-2, 1));
    // 4 * (1/3) - 2 * (2/3) = 0, exactly.
    assert_eq!(rat(4, 1) * rat(1, 3) + rat(-2, 1) * rat(2, 3), rat(0, 1));
    assert!(cartan_expectation(&h1, seed).is_zero());
    report(
        2,
        "q = 3 squared amplitudes 1/3, 2/3 and H_1 balance",
        started,
    );
}

#[test]
fn criterion_3_q4_golden_values() {
    let started = Instant::now();
    let cb = build(4).unwrap();
    let edges = |label: usize| -> Vec<(u32, u32)> {
        cb.family().packets()[label]
            .elements
            .iter()
            .filter_map(|e| match e {
                KqElement::Edge(i, j) => Some((*i, *j)),
                KqElement::Vertex(_) => None,
            })
            .collect()
    };
    assert_eq!(edges(0), vec![(0, 3), (1, 2)]);
    assert_eq!(edges(1), vec![(0, 2), (1, 3)]);
    assert_eq!(edges(2), vec![(0, 1), (2, 3)]);
    for codeword in cb.codewords() {
        for i in 1..4 {
            assert!(cartan_expectation(&CartanElement::basis(4, i), codeword).is_zero());
        }
    }
    report(
        3,
        "q = 4 matchings and vanishing Cartan expectations",
        started,
    );
}

#[test]
fn criterion_4_oracle_equivalence() {
    let started = Instant::now();
    for q in 2..=6u32 {
        let cb = build(q).unwrap();
        let oracle = oracle_kl_check(&cb).expect("within guard");
        assert!(oracle.r_independent, "q = {q}: site dependence");
        assert!(
            oracle.collective_consistent,
            "q = {q}: n * single-site != collective: {:?}",
            oracle.first_discrepancy
        );
        assert_eq!(oracle.dense_verdict, oracle.fast_verdict, "q = {q}");
        assert!(oracle.passes(), "q = {q}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "oracle sweep took {elapsed:?}, budget 30s"
    );
    report(
        4,
        "dense oracle q = 2..6 matches the fast verifier",
        started,
    );
}

#[test]
fn criterion_5_transversal_pauli_odd_q() {
    let started = Instant::now();
    for q in (3..=25u32).step_by(2) {
        let report = transversal_pauli_check(&build(q).unwrap());
        assert_eq!(report.verdict, PauliVerdict::Pass, "q = {q}");
        let shift: Vec<usize> = (0..q as usize).map(|r| (r + 1) % q as usize).collect();
        assert_eq!(report.x_permutation(), Some(shift), "q = {q}");
        for r in 0..q as u64 {
            assert_eq!(
                report.z_exponents[r as usize],
                Some((4 * r) % u64::from(q)),
                "q = {q}, r = {r}"
            );
        }
    }
    report(5, "odd q = 3..25 logical shift and phase 4r mod q", started);
}

#[test]
fn criterion_6_nonexistence_sweep() {
    let started = Instant::now();
    let certificates = sweep_nonexistence(2, 50).expect("sweep completes");
    assert_eq!(certificates.len(), 49 * 3);
    for cert in &certificates {
        let system = macwilliams_system(cert.n, cert.q, cert.k, true).unwrap();
        assert!(
            cert.verify(&system),
            "(n = {}, q = {}) fails re-substitution",
            cert.n,
            cert.q
        );
        match (cert.n, &cert.contradiction) {
            (1, Contradiction::ForcedUnequal { lhs, rhs, .. }) => {
                assert_eq!(*lhs, closed_forms::n1_forced_b1(cert.q));
                assert_eq!(*rhs, rat(0, 1));
            }
            (2, Contradiction::NegativeForcedValue { name, value }) => {
                assert_eq!(name, "A~1");
                assert_eq!(*value, closed_forms::n2_forced_a1(cert.q));
            }
            (3, Contradiction::SignClash { terms, rhs }) => {
                let (alpha, beta, gamma) = closed_forms::n3_relation(cert.q);
                assert_eq!(terms[0], ("A~1".to_string(), alpha));
                assert_eq!(terms[1], ("A~2".to_string(), beta));
                assert_eq!(*rhs, gamma);
            }
            (n, other) => panic!("unexpected contradiction for n = {n}: {other}"),
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 5.0,
        "nonexistence sweep took {elapsed:?}, budget 5s"
    );
    report(
        6,
        "q = 2..50 and n <= 3 all infeasible with named values",
        started,
    );
}

#[test]
fn criterion_7_solver_cross_validation() {
    let started = Instant::now();

    // Both routes on all 147 standard instances.
    for q in 2..=50u64 {
        for n in 1..=3usize {
            let system = macwilliams_system(n, q, q, true).unwrap();
            let generic = fm_feasibility(&system.constraints);
            let (_, direct) = direct_feasibility(n, q, q, true).unwrap();
            assert_eq!(
                direct.is_ok(),
                generic.is_feasible(),
                "paths disagree at (n = {n}, q = {q})"
            );
            assert!(!generic.is_feasible());
            assert!(matches!(
                check_feasibility(n, q, q).unwrap(),
                Feasibility::Infeasible(_)
            ));
        }
    }

    // Relaxed systems (adjoint equality removed) chosen to be feasible;
    // both routes must find verified witnesses.
    let relaxed: [(usize, u64, u64); 11] = [
        (1, 2, 1),
        (1, 2, 2),
        (1, 3, 1),
        (1, 3, 2),
        (1, 3, 3),
        (1, 5, 1),
        (1, 5, 4),
        (1, 7, 7),
        (2, 2, 1),
        (2, 3, 1),
        (2, 4, 1),
    ];
    for (n, q, k) in relaxed {
        let system = macwilliams_system(n, q, k, false).unwrap();
        let FmOutcome::Feasible(generic_witness) = fm_feasibility(&system.constraints) else {
            panic!("relaxed (n = {n}, q = {q}, K = {k}) must be feasible (generic)");
        };
        let (_, direct) = direct_feasibility(n, q, k, false).unwrap();
        let direct_witness = direct.unwrap_or_else(|c| {
            panic!("relaxed (n = {n}, q = {q}, K = {k}) must be feasible (direct): {c}")
        });
        assert!(system
            .constraints
            .check_point(&generic_witness.assignment)
            .is_ok());
        assert!(system
            .constraints
            .check_point(&direct_witness.assignment)
            .is_ok());
    }

    report(
        7,
        "147 standard instances agree; 11 relaxed instances feasible on both routes",
        started,
    );
}

fn random_scalar(rng: &mut ChaCha8Rng) -> RadicalScalar {
    let mut acc = RadicalScalar::zero();
    for _ in 0..rng.random_range(0..=3) {
        let radicand: i64 = rng.random_range(1..=30);
        let num: i64 = rng.random_range(-100..=100);
        let den: i64 = rng.random_range(1..=40);
        let term = RadicalScalar::sqrt_of_rational(&rat(radicand, 1))
            .unwrap()
            .scale(&rat(num, den));
        acc = &acc + &term;
    }
    acc
}

#[test]
fn criterion_8_property_suites() {
    let started = Instant::now();

    // Ring axioms on 1000 randomized triples.
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..1000 {
        let a = random_scalar(&mut rng);
        let b = random_scalar(&mut rng);
        let c = random_scalar(&mut rng);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert!((&a - &a).is_zero());
    }

    // The even-entry layer contains no root-adjacent pair, exhaustively.
    for q in 2..=12u32 {
        let layer: Vec<OccupationVector> = (0..q)
            .map(|i| KqElement::Vertex(i).to_occupation(q))
            .chain(
                (0..q)
                    .flat_map(|i| (i + 1..q).map(move |j| KqElement::Edge(i, j).to_occupation(q))),
            )
            .collect();
        for x in &layer {
            for y in &layer {
                assert!(!root_adjacent(x, y), "q = {q}: {x} adjacent to {y}");
            }
        }
    }

    // Packet families partition the vertex/edge set, exhaustively.
    for q in (3..=29u32).step_by(2) {
        let family = midpoint_packets(q).unwrap();
        assert!(validate_family(&family).is_valid(), "midpoint q = {q}");
        let total: usize = family.packets().iter().map(|p| p.elements.len()).sum();
        assert_eq!(total as u32, q + q * (q - 1) / 2);
    }
    for q in (2..=30u32).step_by(2) {
        let family = round_robin_packets(q).unwrap();
        assert!(validate_family(&family).is_valid(), "round robin q = {q}");
        let total: usize = family.packets().iter().map(|p| p.elements.len()).sum();
        assert_eq!(total as u32, q + q * (q - 1) / 2);
    }

    // Corrupted codebooks fail with the right witnesses.
    let cb = build(3).unwrap();

    let mut overlapping = cb.codewords().to_vec();
    let stolen = overlapping[0].support().next().unwrap().clone();
    overlapping[1]
        .add_term(stolen.clone(), RadicalScalar::one())
        .unwrap();
    let sep = check_separation_of(&overlapping);
    assert!(!sep.disjoint);
    assert!(matches!(
        sep.witness,
        Some(SeparationWitness::SupportOverlap { i: 0, j: 1, ref occ }) if *occ == stolen
    ));

    let mut adjacent = cb.codewords().to_vec();
    adjacent[0]
        .add_term(occ(&[3, 1, 0]), RadicalScalar::one())
        .unwrap();
    let sep = check_separation_of(&adjacent);
    assert!(!sep.each_root_separated);
    match sep.witness {
        Some(SeparationWitness::RootAdjacentWithin { i: 0, ref x, ref y }) => {
            assert!(root_adjacent(x, y));
        }
        ref other => panic!("expected within-support witness, got {other:?}"),
    }
    assert!(!kl_check_of(&adjacent, RootScaling::Ladder).passes());

    let mut unbalanced = cb.codewords().to_vec();
    unbalanced[2] = SymmetricState::from_terms(
        4,
        3,
        [
            (
                occ(&[0, 0, 4]),
                RadicalScalar::sqrt_of_rational(&rat(2, 3)).unwrap(),
            ),
            (
                occ(&[2, 2, 0]),
                RadicalScalar::sqrt_of_rational(&rat(1, 3)).unwrap(),
            ),
        ],
    )
    .unwrap();
    let sep = check_separation_of(&unbalanced);
    assert!(!sep.cartan_balanced);
    assert!(matches!(
        sep.witness,
        Some(SeparationWitness::CartanImbalance { j: 2, .. })
    ));
    assert!(!kl_check_of(&unbalanced, RootScaling::Ladder).passes());

    report(
        8,
        "ring axioms x1000, even layer x q<=12, partitions x q<=30, corrupted witnesses",
        started,
    );
}

/// Builds a normalized state on the given support with the given positive
/// weights: amplitude on element k is sqrt(w_k / sum w).
fn normalized_state(n: u32, q: u32, support: &[(OccupationVector, i64)]) -> SymmetricState {
    let total: i64 = support.iter().map(|(_, w)| w).sum();
    SymmetricState::from_terms(
        n,
        q,
        support.iter().map(|(occ, w)| {
            (
                occ.clone(),
                RadicalScalar::sqrt_of_rational(&rat(*w, total)).unwrap(),
            )
        }),
    )
    .unwrap()
}

#[test]
fn criterion_9_separation_implies_kl() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut separation_passes = 0usize;

    for trial in 0..200u32 {
        let states: Vec<SymmetricState> = match trial % 4 {
            // A built codebook: always valid.
            0 => {
                let q = rng.random_range(2..=6u32);
                build(q).unwrap().codewords().to_vec()
            }
            // Random partition of the vertex/edge set into packets, with
            // weights solved by the balancing system (valid iff solvable).
            1 => {
                let q = rng.random_range(2..=5u32);
                let parts = rng.random_range(2..=q);
                let mut elements: Vec<KqElement> = (0..q)
                    .map(KqElement::Vertex)
                    .chain((0..q).flat_map(|i| (i + 1..q).map(move |j| KqElement::Edge(i, j))))
                    .collect();
                // Seed each part, then scatter the rest.
                let mut buckets: Vec<Vec<KqElement>> = (0..parts).map(|_| Vec::new()).collect();
                for bucket in buckets.iter_mut() {
                    let pick = rng.random_range(0..elements.len());
                    bucket.push(elements.swap_remove(pick));
                }
                while let Some(e) = elements.pop() {
                    let b = rng.random_range(0..parts) as usize;
                    buckets[b].push(e);
                }
                let family = PacketFamily::from_parts(
                    q,
                    Parity::Odd,
                    buckets
                        .iter()
                        .enumerate()
                        .map(|(label, bucket)| Packet {
                            label: label as u32,
                            elements: bucket.iter().copied().collect(),
                        })
                        .collect(),
                );
                match solve_balancing(&family) {
                    Ok(solution) => solution
                        .weights
                        .iter()
                        .map(|packet| {
                            SymmetricState::from_terms(
                                4,
                                q,
                                packet.iter().map(|(e, w)| {
                                    (
                                        e.to_occupation(q),
                                        RadicalScalar::sqrt_of_rational(w).unwrap(),
                                    )
                                }),
                            )
                            .unwrap()
                        })
                        .collect(),
                    Err(_) => continue,
                }
            }
            // A codebook with one codeword's weights perturbed.
            2 => {
                let q = rng.random_range(3..=6u32);
                let mut states = build(q).unwrap().codewords().to_vec();
                let victim = rng.random_range(0..states.len());
                let support: Vec<(OccupationVector, i64)> = states[victim]
                    .support()
                    .cloned()
                    .map(|occ| (occ, rng.random_range(1..=5)))
                    .collect();
                states[victim] = normalized_state(4, q, &support);
                states
            }
            // Fully random supports over the whole basis.
            _ => {
                let q = rng.random_range(2..=4u32);
                let k = rng.random_range(2..=q + 1);
                let basis = enumerate_basis(4, q);
                (0..k)
                    .map(|_| {
                        let size = rng.random_range(1..=3usize);
                        let support: Vec<(OccupationVector, i64)> = (0..size)
                            .map(|_| {
                                (
                                    basis[rng.random_range(0..basis.len())].clone(),
                                    rng.random_range(1..=5),
                                )
                            })
                            .collect();
                        normalized_state(4, q, &support)
                    })
                    .collect()
            }
        };

        let separation = check_separation_of(&states);
        if separation.passes() {
            separation_passes += 1;
            let kl = kl_check_of(&states, RootScaling::Ladder);
            assert!(
                kl.passes(),
                "trial {trial}: separation passed but KL failed: {:?}",
                kl.first_violation
            );
        }
    }

    assert!(
        separation_passes >= 50,
        "only {separation_passes} separation passes; implication barely exercised"
    );
    report(
        9,
        "200 random families: separation pass implies KL pass",
        started,
    );
}
