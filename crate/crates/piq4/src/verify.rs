//! Exact verification of the distance-two conditions.
//!
//! Two independent criteria are implemented: the support-separation checks
//! (disjointness, root separation within and across supports, Cartan
//! balance), and the full Knill-Laflamme matrix-element check over every
//! collective Cartan-Weyl basis operator. Both work in the radical-rational
//! ring, so a pass is an exact statement. The module also solves packet
//! balancing systems and examines the transversal Pauli action.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::lp::{affine_solution_dim, fm_feasibility, ConstraintSet, FmOutcome};
use crate::packets::{KqElement, PacketFamily};
use crate::scalar::{RadicalScalar, Rational};
use crate::sym::{
    apply_cartan, apply_root_scaled, cartan_expectation, cartan_weyl_basis, cyclic_shift,
    root_adjacent, CartanElement, CollectiveOperator, OccupationVector, RootScaling,
    SymmetricState,
};

/// Outcome of an exact check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

/// First counterexample found by the support-separation checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparationWitness {
    SupportOverlap {
        i: usize,
        j: usize,
        occ: OccupationVector,
    },
    RootAdjacentWithin {
        i: usize,
        x: OccupationVector,
        y: OccupationVector,
    },
    RootAdjacentAcross {
        i: usize,
        j: usize,
        x: OccupationVector,
        y: OccupationVector,
    },
    CartanImbalance {
        operator: String,
        i: usize,
        j: usize,
        value_i: RadicalScalar,
        value_j: RadicalScalar,
    },
}

/// Report of the four support-separation conditions.
#[derive(Debug, Clone)]
pub struct SeparationReport {
    pub q: u32,
    pub n: u32,
    pub disjoint: bool,
    pub each_root_separated: bool,
    pub mutually_root_separated: bool,
    pub cartan_balanced: bool,
    /// Common diagonal expectation per Cartan basis element, recorded when
    /// balanced (zero for the codes built here).
    pub basis_cartan_values: Vec<RadicalScalar>,
    /// Number of extra randomly drawn traceless diagonals spot-checked on
    /// top of the basis elements.
    pub random_spot_checks: usize,
    pub witness: Option<SeparationWitness>,
}

impl SeparationReport {
    pub fn passes(&self) -> bool {
        self.disjoint
            && self.each_root_separated
            && self.mutually_root_separated
            && self.cartan_balanced
    }

    pub fn verdict(&self) -> Verdict {
        if self.passes() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Checks the support-separation criterion on an arbitrary family of states
/// sharing one `(n, q)` sector.
///
/// Verifies, in order: pairwise-disjoint supports; no root-adjacent pair
/// inside any support; no root-adjacent pair across two supports; and
/// equality of every Cartan basis expectation across the family. Three
/// deterministic pseudo-random traceless diagonals are checked as well.
pub fn check_separation_of(states: &[SymmetricState]) -> SeparationReport {
    assert!(!states.is_empty(), "need at least one state");
    let q = states[0].q();
    let n = states[0].n();
    let mut witness = None;

    let mut disjoint = true;
    'overlap: for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i + 1) {
            if let Some(occ) = a.support().find(|occ| !b.amplitude(occ).is_zero()) {
                disjoint = false;
                witness.get_or_insert(SeparationWitness::SupportOverlap {
                    i,
                    j,
                    occ: occ.clone(),
                });
                break 'overlap;
            }
        }
    }

    let mut each_root_separated = true;
    'within: for (i, state) in states.iter().enumerate() {
        let support: Vec<_> = state.support().collect();
        for (k, x) in support.iter().enumerate() {
            for y in support.iter().skip(k + 1) {
                if root_adjacent(x, y) {
                    each_root_separated = false;
                    witness.get_or_insert(SeparationWitness::RootAdjacentWithin {
                        i,
                        x: (*x).clone(),
                        y: (*y).clone(),
                    });
                    break 'within;
                }
            }
        }
    }

    let mut mutually_root_separated = true;
    'across: for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i + 1) {
            for x in a.support() {
                for y in b.support() {
                    if root_adjacent(x, y) {
                        mutually_root_separated = false;
                        witness.get_or_insert(SeparationWitness::RootAdjacentAcross {
                            i,
                            j,
                            x: x.clone(),
                            y: y.clone(),
                        });
                        break 'across;
                    }
                }
            }
        }
    }

    let mut cartan_balanced = true;
    let mut basis_cartan_values = Vec::new();
    for h_index in 1..q {
        let h = CartanElement::basis(q, h_index);
        let values: Vec<RadicalScalar> = states
            .iter()
            .map(|state| cartan_expectation(&h, state))
            .collect();
        if let Some(j) = values.iter().position(|v| *v != values[0]) {
            cartan_balanced = false;
            witness.get_or_insert(SeparationWitness::CartanImbalance {
                operator: format!("H[{h_index}]"),
                i: 0,
                j,
                value_i: values[0].clone(),
                value_j: values[j].clone(),
            });
        }
        basis_cartan_values.push(values.into_iter().next().unwrap());
    }

    // Linearity makes the basis elements sufficient; a few random traceless
    // diagonals are checked anyway. Seeded, so reports stay deterministic.
    let mut random_spot_checks = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0x7069_7134 ^ (u64::from(q) << 16) ^ u64::from(n));
    for _ in 0..3 {
        let h = random_traceless_diagonal(q, &mut rng);
        let values: Vec<RadicalScalar> = states
            .iter()
            .map(|state| cartan_expectation(&h, state))
            .collect();
        random_spot_checks += 1;
        if let Some(j) = values.iter().position(|v| *v != values[0]) {
            cartan_balanced = false;
            witness.get_or_insert(SeparationWitness::CartanImbalance {
                operator: "H[random]".into(),
                i: 0,
                j,
                value_i: values[0].clone(),
                value_j: values[j].clone(),
            });
        }
    }

    SeparationReport {
        q,
        n,
        disjoint,
        each_root_separated,
        mutually_root_separated,
        cartan_balanced,
        basis_cartan_values,
        random_spot_checks,
        witness,
    }
}

/// [`check_separation_of`] applied to a built codebook.
pub fn check_support_separation(cb: &Codebook) -> SeparationReport {
    check_separation_of(cb.codewords())
}

fn random_traceless_diagonal(q: u32, rng: &mut ChaCha8Rng) -> CartanElement {
    loop {
        let mut diagonal: Vec<Rational> = (0..q - 1)
            .map(|_| Rational::from(BigInt::from(rng.random_range(-5i64..=5))))
            .collect();
        let trace: Rational = diagonal.iter().sum();
        diagonal.push(-trace);
        if diagonal.iter().any(|h| !h.is_zero()) {
            return CartanElement::new(diagonal).expect("trace forced to zero");
        }
    }
}

/// A nonvanishing root matrix element `<psi_i|E_ab|psi_j>`.
#[derive(Debug, Clone)]
pub struct RootCheck {
    pub a: u32,
    pub b: u32,
    pub i: usize,
    pub j: usize,
    pub value: RadicalScalar,
}

/// A Cartan matrix element `<psi_i|H_k|psi_j>`; every diagonal entry is
/// recorded, off-diagonal entries only when nonzero.
#[derive(Debug, Clone)]
pub struct CartanCheck {
    pub h_index: u32,
    pub i: usize,
    pub j: usize,
    pub value: RadicalScalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    OffDiagonalNonzero,
    DiagonalMismatch,
}

/// First counterexample to the scalar-identity condition.
#[derive(Debug, Clone)]
pub struct KLViolation {
    pub operator: String,
    pub i: usize,
    pub j: usize,
    pub kind: ViolationKind,
    pub value: RadicalScalar,
    /// For a diagonal mismatch, the value it was supposed to repeat.
    pub expected: Option<RadicalScalar>,
}

/// Full Knill-Laflamme report over the collective Cartan-Weyl basis.
#[derive(Debug, Clone)]
pub struct KLReport {
    pub q: u32,
    pub n: u32,
    /// Total matrix elements evaluated: (q(q-1) + q - 1) operators times
    /// one entry per ordered codeword pair.
    pub elements_computed: usize,
    pub root_checks: Vec<RootCheck>,
    pub cartan_checks: Vec<CartanCheck>,
    /// Per-operator scalar when the operator acts as lambda times identity.
    pub lambda_values: Vec<(CollectiveOperator, RadicalScalar)>,
    pub verdict: Verdict,
    pub first_violation: Option<KLViolation>,
}

impl KLReport {
    pub fn passes(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// True when every recorded scalar is exactly zero.
    pub fn all_lambda_zero(&self) -> bool {
        self.lambda_values.iter().all(|(_, l)| l.is_zero())
    }
}

/// Evaluates `<psi_i|A|psi_j>` for every collective Cartan-Weyl basis
/// operator `A` and every ordered pair of family members, exactly.
///
/// The verdict is `Pass` when each operator's matrix on the family is a
/// scalar multiple of the identity; the scalar is recorded per operator and
/// is not required to be zero.
pub fn kl_check_of(states: &[SymmetricState], scaling: RootScaling) -> KLReport {
    assert!(!states.is_empty(), "need at least one state");
    let q = states[0].q();
    let n = states[0].n();
    let k = states.len();

    // Inverted support index: every basis label that appears anywhere, with
    // the states carrying it. One operator application then yields a whole
    // column of matrix elements at once.
    let mut support_index: std::collections::BTreeMap<
        &OccupationVector,
        Vec<(usize, &RadicalScalar)>,
    > = std::collections::BTreeMap::new();
    for (i, state) in states.iter().enumerate() {
        for (occ, amp) in state.iter() {
            support_index.entry(occ).or_default().push((i, amp));
        }
    }

    let mut elements_computed = 0usize;
    let mut root_checks = Vec::new();
    let mut cartan_checks = Vec::new();
    let mut lambda_values = Vec::new();
    let mut first_violation: Option<KLViolation> = None;

    for op in cartan_weyl_basis(q) {
        let mut diagonal = Vec::with_capacity(k);
        for (j, ket) in states.iter().enumerate() {
            // One operator application per ket, reused across all bras.
            let image = match &op {
                CollectiveOperator::Root { a, b } => apply_root_scaled(*a, *b, ket, scaling),
                CollectiveOperator::CartanBasis(i) => {
                    apply_cartan(&CartanElement::basis(q, *i), ket)
                }
                CollectiveOperator::Cartan(h) => apply_cartan(h, ket),
            };
            let mut column: Vec<RadicalScalar> = vec![RadicalScalar::zero(); k];
            for (occ, amp) in image.iter() {
                if let Some(holders) = support_index.get(occ) {
                    for (i, bra_amp) in holders {
                        column[*i] = &column[*i] + &(*bra_amp * amp);
                    }
                }
            }
            for (i, value) in column.into_iter().enumerate() {
                elements_computed += 1;
                let nonzero = !value.is_zero();
                match &op {
                    CollectiveOperator::Root { a, b } => {
                        if nonzero {
                            root_checks.push(RootCheck {
                                a: *a,
                                b: *b,
                                i,
                                j,
                                value: value.clone(),
                            });
                        }
                    }
                    CollectiveOperator::CartanBasis(h_index) => {
                        if nonzero || i == j {
                            cartan_checks.push(CartanCheck {
                                h_index: *h_index,
                                i,
                                j,
                                value: value.clone(),
                            });
                        }
                    }
                    CollectiveOperator::Cartan(_) => {}
                }
                if i == j {
                    diagonal.push(value);
                } else if nonzero && first_violation.is_none() {
                    first_violation = Some(KLViolation {
                        operator: op.to_string(),
                        i,
                        j,
                        kind: ViolationKind::OffDiagonalNonzero,
                        value,
                        expected: None,
                    });
                }
            }
        }
        let consistent = diagonal.iter().all(|v| *v == diagonal[0]);
        if consistent {
            lambda_values.push((op.clone(), diagonal[0].clone()));
        } else if first_violation.is_none() {
            let j = diagonal.iter().position(|v| *v != diagonal[0]).unwrap();
            first_violation = Some(KLViolation {
                operator: op.to_string(),
                i: j,
                j,
                kind: ViolationKind::DiagonalMismatch,
                value: diagonal[j].clone(),
                expected: Some(diagonal[0].clone()),
            });
        }
    }

    let verdict = if first_violation.is_none() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    KLReport {
        q,
        n,
        elements_computed,
        root_checks,
        cartan_checks,
        lambda_values,
        verdict,
        first_violation,
    }
}

/// [`kl_check_of`] on a built codebook with the ladder weighting.
pub fn kl_full_check(cb: &Codebook) -> KLReport {
    kl_check_of(cb.codewords(), RootScaling::Ladder)
}

/// Nonnegative normalized per-element weights solving a packet balancing
/// system.
#[derive(Debug, Clone)]
pub struct BalancingSolution {
    /// Per packet, the squared-amplitude weight assigned to each element,
    /// in packet element order.
    pub weights: Vec<Vec<(KqElement, Rational)>>,
    /// Dimension of the affine solution space of the equality system;
    /// zero means the balanced weights are unique.
    pub solution_space_dim: usize,
}

/// Solves for squared amplitudes making every packet's state normalized and
/// every Cartan basis expectation equal across packets.
///
/// The equalities are reduced exactly; if they leave free directions, a
/// nonnegative point is searched for by the same elimination engine used for
/// the enumerator systems. Infeasibility is reported, never panicked.
pub fn solve_balancing(family: &PacketFamily) -> Result<BalancingSolution> {
    let q = family.q();
    let packets = family.packets();
    let layout: Vec<(usize, KqElement)> = packets
        .iter()
        .enumerate()
        .flat_map(|(p, packet)| packet.elements.iter().map(move |e| (p, *e)))
        .collect();
    let num_vars = layout.len();
    let var_of = |p: usize, e: KqElement| -> usize {
        layout
            .iter()
            .position(|(pp, ee)| *pp == p && *ee == e)
            .expect("element belongs to layout")
    };

    let mut system = ConstraintSet::new(
        (0..num_vars)
            .map(|v| format!("w[{};{}]", layout[v].0, layout[v].1))
            .collect(),
    );

    // Normalization per packet.
    for (p, packet) in packets.iter().enumerate() {
        let mut coeffs = vec![Rational::zero(); num_vars];
        for e in &packet.elements {
            coeffs[var_of(p, *e)] = Rational::from(BigInt::from(1));
        }
        system.push_equality(
            coeffs,
            Rational::from(BigInt::from(1)),
            format!("norm[{p}]"),
        );
    }

    // Equal Cartan expectation: packet p versus packet 0 for each basis H_i.
    for h_index in 1..q {
        let h = CartanElement::basis(q, h_index);
        for p in 1..packets.len() {
            let mut coeffs = vec![Rational::zero(); num_vars];
            for e in &packets[p].elements {
                coeffs[var_of(p, *e)] = h.eigenvalue(&e.to_occupation(q));
            }
            for e in &packets[0].elements {
                let idx = var_of(0, *e);
                coeffs[idx] = &coeffs[idx] - h.eigenvalue(&e.to_occupation(q));
            }
            system.push_equality(coeffs, Rational::zero(), format!("balance[H{h_index};{p}]"));
        }
    }

    // Nonnegativity.
    for v in 0..num_vars {
        let mut coeffs = vec![Rational::zero(); num_vars];
        coeffs[v] = Rational::from(BigInt::from(-1));
        system.push_inequality(coeffs, Rational::zero(), format!("w[{v}] >= 0"));
    }

    let solution_space_dim = affine_solution_dim(&system)
        .ok_or_else(|| Error::BalancingInfeasible("equality system is inconsistent".into()))?;

    match fm_feasibility(&system) {
        FmOutcome::Feasible(witness) => {
            let mut weights: Vec<Vec<(KqElement, Rational)>> =
                packets.iter().map(|_| Vec::new()).collect();
            for (v, (p, e)) in layout.iter().enumerate() {
                weights[*p].push((*e, witness.assignment[v].clone()));
            }
            Ok(BalancingSolution {
                weights,
                solution_space_dim,
            })
        }
        FmOutcome::Infeasible(trace) => Err(Error::BalancingInfeasible(trace.contradiction())),
    }
}

/// Per-codeword transversal Pauli findings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliReport {
    pub q: u32,
    /// For each codeword r, the codebook index that equals its image under
    /// the transversal shift, if any.
    pub x_images: Vec<Option<usize>>,
    /// True when the shift acts as the logical cycle r -> r + 1 (mod q).
    pub is_shift: bool,
    /// For each codeword, the common label-sum exponent mod q across its
    /// support, if constant.
    pub z_exponents: Vec<Option<u64>>,
    /// True when every codeword has a constant exponent, i.e. the
    /// transversal diagonal Pauli acts diagonally on the logical basis.
    pub z_is_diag: bool,
    pub verdict: PauliVerdict,
}

/// Odd-`q` codebooks are asserted against the shift/phase action; even-`q`
/// findings are informational since no such action is claimed there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliVerdict {
    Pass,
    Fail,
    Informational,
}

impl PauliReport {
    /// The induced permutation, when every shifted codeword lands back in
    /// the codebook and does so bijectively.
    pub fn x_permutation(&self) -> Option<Vec<usize>> {
        let images: Option<Vec<usize>> = self.x_images.iter().copied().collect();
        let images = images?;
        let mut seen = vec![false; images.len()];
        for &t in &images {
            if seen[t] {
                return None;
            }
            seen[t] = true;
        }
        Some(images)
    }
}

/// Examines the transversal Pauli action on a codebook.
///
/// The shift image of each codeword is matched exactly against the codebook;
/// the diagonal part records, per codeword, whether `sum_j j a_j (mod q)` is
/// constant over the support. For odd `q` the verdict demands the logical
/// cycle and exponents `4r mod q`.
pub fn transversal_pauli_check(cb: &Codebook) -> PauliReport {
    let q = cb.q();
    let states = cb.codewords();

    let x_images: Vec<Option<usize>> = states
        .iter()
        .map(|state| {
            let shifted = cyclic_shift(state, 1);
            states.iter().position(|candidate| *candidate == shifted)
        })
        .collect();
    let is_shift = x_images
        .iter()
        .enumerate()
        .all(|(r, image)| *image == Some((r + 1) % q as usize));

    let z_exponents: Vec<Option<u64>> = states
        .iter()
        .map(|state| {
            let mut exponents = state.support().map(|occ| occ.label_sum() % u64::from(q));
            let first = exponents.next()?;
            exponents.all(|e| e == first).then_some(first)
        })
        .collect();
    let z_is_diag = z_exponents.iter().all(Option::is_some);

    let verdict = if q.is_multiple_of(2) {
        PauliVerdict::Informational
    } else {
        let phases_match = z_exponents
            .iter()
            .enumerate()
            .all(|(r, e)| *e == Some((4 * r as u64) % u64::from(q)));
        if is_shift && phases_match {
            PauliVerdict::Pass
        } else {
            PauliVerdict::Fail
        }
    };

    PauliReport {
        q,
        x_images,
        is_shift,
        z_exponents,
        z_is_diag,
        verdict,
    }
}
