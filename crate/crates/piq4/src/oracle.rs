//! Brute-force cross-check in the full tensor space.
//!
//! Symmetric states are expanded word by word into `(C^q)^{tensor n}` and
//! single-site operators are applied literally to one tensor factor. For
//! permutation-invariant states the matrix element of a single-site operator
//! is independent of the site and equals `1/n` of the collective element, so
//! the expansion confirms both the fast verifier and the ladder constant in
//! the sparse root action.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codebook::Codebook;
use crate::error::{Error, Result};
use crate::scalar::{RadicalScalar, Rational};
use crate::sym::{
    cartan_weyl_basis, collective_matrix_element, CartanElement, CollectiveOperator, RootScaling,
    SymmetricState,
};
use crate::verify::{kl_check_of, Verdict};

/// Expansion guard: the oracle is a desk-scale trust anchor, not the
/// production verifier.
pub const DEFAULT_ORACLE_MAX_Q: u32 = 8;

/// A sparse state over computational words of length `n` with symbols in
/// `0..q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseState {
    q: u32,
    n: u32,
    amplitudes: BTreeMap<Vec<u8>, RadicalScalar>,
}

impl DenseState {
    pub fn zero(n: u32, q: u32) -> Self {
        Self {
            q,
            n,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn add_term(&mut self, word: Vec<u8>, amp: RadicalScalar) {
        if amp.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.amplitudes.entry(word) {
            Entry::Vacant(slot) => {
                slot.insert(amp);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get() + &amp;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    pub fn amplitude(&self, word: &[u8]) -> RadicalScalar {
        self.amplitudes.get(word).cloned().unwrap_or_default()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sq(&self) -> RadicalScalar {
        let mut acc = RadicalScalar::zero();
        for amp in self.amplitudes.values() {
            acc = &acc + &amp.square();
        }
        acc
    }

    /// Real inner product.
    pub fn inner(&self, other: &Self) -> RadicalScalar {
        let (small, large) = if self.amplitudes.len() <= other.amplitudes.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = RadicalScalar::zero();
        for (word, amp) in &small.amplitudes {
            if let Some(other_amp) = large.amplitudes.get(word) {
                acc = &acc + &(amp * other_amp);
            }
        }
        acc
    }

    /// True if the amplitude is constant on every permutation orbit.
    pub fn is_permutation_invariant(&self) -> bool {
        self.amplitudes.iter().all(|(word, amp)| {
            let mut sorted = word.clone();
            sorted.sort_unstable();
            self.amplitude(&sorted) == *amp
        })
    }
}

/// Expands an occupation-basis state into words: each occupation vector `a`
/// becomes its orbit of `multinomial(n; a)` distinct words, every word
/// carrying the original amplitude divided by the square root of the orbit
/// size.
pub fn expand(state: &SymmetricState) -> DenseState {
    let mut dense = DenseState::zero(state.n(), state.q());
    for (occ, amp) in state.iter() {
        let mut base: Vec<u8> = Vec::with_capacity(state.n() as usize);
        for (symbol, count) in occ.counts().iter().enumerate() {
            base.extend(std::iter::repeat_n(symbol as u8, *count as usize));
        }
        let orbit: BTreeSet<Vec<u8>> = base
            .iter()
            .copied()
            .permutations(base.len())
            .map(|w| w.to_vec())
            .collect();
        let multinomial = Rational::from(BigInt::from(orbit.len() as u64));
        let word_amp = amp
            * &RadicalScalar::sqrt_of_rational(&(Rational::from(BigInt::from(1)) / multinomial))
                .expect("orbit size positive");
        for word in orbit {
            dense.add_term(word, word_amp.clone());
        }
    }
    dense
}

/// A one-body operator as a full `q x q` matrix of exact scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteOperator {
    q: u32,
    entries: Vec<RadicalScalar>,
}

impl SiteOperator {
    pub fn zero(q: u32) -> Self {
        Self {
            q,
            entries: vec![RadicalScalar::zero(); (q * q) as usize],
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn entry(&self, row: u32, col: u32) -> &RadicalScalar {
        &self.entries[(row * self.q + col) as usize]
    }

    pub fn set(&mut self, row: u32, col: u32, value: RadicalScalar) {
        self.entries[(row * self.q + col) as usize] = value;
    }

    /// The matrix unit `E_{ab}`, sending `|b>` to `|a>`.
    pub fn root(q: u32, a: u32, b: u32) -> Self {
        let mut op = Self::zero(q);
        op.set(a, b, RadicalScalar::one());
        op
    }

    pub fn cartan(q: u32, h: &CartanElement) -> Self {
        let mut op = Self::zero(q);
        for (i, value) in h.diagonal().iter().enumerate() {
            op.set(
                i as u32,
                i as u32,
                RadicalScalar::from_rational(value.clone()),
            );
        }
        op
    }

    pub fn from_collective(q: u32, op: &CollectiveOperator) -> Self {
        match op {
            CollectiveOperator::Root { a, b } => Self::root(q, *a, *b),
            CollectiveOperator::CartanBasis(i) => Self::cartan(q, &CartanElement::basis(q, *i)),
            CollectiveOperator::Cartan(h) => Self::cartan(q, h),
        }
    }
}

/// Applies `A` to tensor factor `site` only (1-based, as in `A^{[r]}`).
pub fn apply_single_site(op: &SiteOperator, site: usize, state: &DenseState) -> DenseState {
    assert!(
        site >= 1 && site <= state.n() as usize,
        "site index out of range"
    );
    let q = state.q();
    debug_assert_eq!(op.q(), q);
    let idx = site - 1;
    let mut out = DenseState::zero(state.n(), q);
    for (word, amp) in &state.amplitudes {
        let source = u32::from(word[idx]);
        for target in 0..q {
            let entry = op.entry(target, source);
            if entry.is_zero() {
                continue;
            }
            let mut new_word = word.clone();
            new_word[idx] = target as u8;
            out.add_term(new_word, amp * entry);
        }
    }
    out
}

/// `<bra|A^{[site]}|ket>` in the word basis.
pub fn dense_matrix_element(
    op: &SiteOperator,
    site: usize,
    bra: &DenseState,
    ket: &DenseState,
) -> RadicalScalar {
    bra.inner(&apply_single_site(op, site, ket))
}

/// Outcome of the dense cross-check against the occupation-basis verifier.
#[derive(Debug, Clone)]
pub struct OracleReport {
    pub q: u32,
    pub n: u32,
    /// Dense matrix elements evaluated (operators x sites x codeword pairs).
    pub elements_checked: usize,
    /// Every single-site element was independent of the site.
    pub r_independent: bool,
    /// `n` times the site-1 element equaled the collective element, for
    /// every basis operator and codeword pair.
    pub collective_consistent: bool,
    /// Extra randomly drawn traceless one-body operators whose elements were
    /// matched against the corresponding combination of basis elements.
    pub random_operator_checks: usize,
    /// Verdict computed purely from dense elements.
    pub dense_verdict: Verdict,
    /// Verdict of the occupation-basis verifier on the same codebook.
    pub fast_verdict: Verdict,
    pub first_discrepancy: Option<String>,
}

impl OracleReport {
    /// The two verifiers agree and the dense elements are internally
    /// consistent.
    pub fn agreement(&self) -> bool {
        self.r_independent && self.collective_consistent && self.dense_verdict == self.fast_verdict
    }

    pub fn passes(&self) -> bool {
        self.agreement() && self.dense_verdict == Verdict::Pass
    }
}

/// Runs the dense cross-check with the default size guard.
pub fn oracle_kl_check(cb: &Codebook) -> Result<OracleReport> {
    oracle_kl_check_with_guard(cb, DEFAULT_ORACLE_MAX_Q)
}

/// Dense verification of every Cartan-Weyl basis operator at every site, on
/// every codeword pair, plus three random traceless one-body operators.
pub fn oracle_kl_check_with_guard(cb: &Codebook, max_q: u32) -> Result<OracleReport> {
    oracle_check_of(cb.codewords(), max_q)
}

/// [`oracle_kl_check_with_guard`] on an arbitrary family of states sharing
/// one `(n, q)` sector.
pub fn oracle_check_of(states: &[SymmetricState], max_q: u32) -> Result<OracleReport> {
    assert!(!states.is_empty(), "need at least one state");
    let q = states[0].q();
    let n = states[0].n();
    if q > max_q {
        return Err(Error::OracleGuardExceeded { q, max: max_q });
    }

    let fast = kl_check_of(states, RootScaling::Ladder);
    let dense: Vec<DenseState> = states.iter().map(expand).collect();
    let n_scalar = RadicalScalar::from_integer(i64::from(n));

    let mut elements_checked = 0usize;
    let mut r_independent = true;
    let mut collective_consistent = true;
    let mut first_discrepancy: Option<String> = None;
    let mut dense_violation = false;

    for op in cartan_weyl_basis(q) {
        let site_op = SiteOperator::from_collective(q, &op);
        let mut diagonal: Vec<RadicalScalar> = Vec::new();
        for (j, ket) in dense.iter().enumerate() {
            let images: Vec<DenseState> = (1..=n as usize)
                .map(|site| apply_single_site(&site_op, site, ket))
                .collect();
            for (i, bra) in dense.iter().enumerate() {
                let site_values: Vec<RadicalScalar> =
                    images.iter().map(|image| bra.inner(image)).collect();
                elements_checked += site_values.len();
                if site_values.iter().any(|v| *v != site_values[0]) {
                    r_independent = false;
                    first_discrepancy
                        .get_or_insert(format!("{op} on pair ({i},{j}): site-dependent element"));
                }
                let collective = collective_matrix_element(&op, &states[i], &states[j]);
                if &n_scalar * &site_values[0] != collective {
                    collective_consistent = false;
                    first_discrepancy.get_or_insert(format!(
                        "{op} on pair ({i},{j}): n x single-site = {} but collective = {}",
                        &n_scalar * &site_values[0],
                        collective
                    ));
                }
                if i == j {
                    diagonal.push(site_values[0].clone());
                } else if !site_values[0].is_zero() {
                    dense_violation = true;
                }
            }
        }
        if diagonal.iter().any(|v| *v != diagonal[0]) {
            dense_violation = true;
        }
    }

    // Arbitrary traceless one-body operators must give the matching linear
    // combination of basis elements. Seeded for reproducibility.
    let mut rng = ChaCha8Rng::seed_from_u64(0x6f72_6163 ^ (u64::from(q) << 8) ^ u64::from(n));
    let mut random_operator_checks = 0;
    for _ in 0..3 {
        let (site_op, roots, diag) = random_traceless_operator(q, &mut rng);
        random_operator_checks += 1;
        for (j, ket) in dense.iter().enumerate() {
            let image = apply_single_site(&site_op, 1, ket);
            for (i, bra) in dense.iter().enumerate() {
                let dense_value = &n_scalar * &bra.inner(&image);
                let mut expected = RadicalScalar::zero();
                for (a, b, coeff) in &roots {
                    let basis = collective_matrix_element(
                        &CollectiveOperator::Root { a: *a, b: *b },
                        &states[i],
                        &states[j],
                    );
                    expected = &expected + &basis.scale(coeff);
                }
                expected = &expected
                    + &collective_matrix_element(
                        &CollectiveOperator::Cartan(diag.clone()),
                        &states[i],
                        &states[j],
                    );
                if dense_value != expected {
                    collective_consistent = false;
                    first_discrepancy.get_or_insert(format!(
                        "random traceless operator on pair ({i},{j}): {dense_value} != {expected}"
                    ));
                }
            }
        }
    }

    let dense_verdict = if dense_violation {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(OracleReport {
        q,
        n,
        elements_checked,
        r_independent,
        collective_consistent,
        random_operator_checks,
        dense_verdict,
        fast_verdict: fast.verdict,
        first_discrepancy,
    })
}

/// A random traceless matrix together with its decomposition into matrix
/// units (off-diagonal part) and a traceless diagonal.
fn random_traceless_operator(
    q: u32,
    rng: &mut ChaCha8Rng,
) -> (SiteOperator, Vec<(u32, u32, Rational)>, CartanElement) {
    let mut op = SiteOperator::zero(q);
    let mut roots = Vec::new();
    for a in 0..q {
        for b in 0..q {
            if a == b {
                continue;
            }
            let coeff = Rational::from(BigInt::from(rng.random_range(-3i64..=3)));
            if !coeff.is_zero() {
                op.set(a, b, RadicalScalar::from_rational(coeff.clone()));
                roots.push((a, b, coeff));
            }
        }
    }
    let mut diagonal: Vec<Rational> = (0..q - 1)
        .map(|_| Rational::from(BigInt::from(rng.random_range(-3i64..=3))))
        .collect();
    let trace: Rational = diagonal.iter().sum();
    diagonal.push(-trace);
    for (i, h) in diagonal.iter().enumerate() {
        op.set(i as u32, i as u32, RadicalScalar::from_rational(h.clone()));
    }
    let diag = CartanElement::new(diagonal).expect("trace forced to zero");
    (op, roots, diag)
}
