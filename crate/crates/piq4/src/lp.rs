//! Exact feasibility analysis of the enumerator constraint systems that rule
//! out block lengths below four.
//!
//! For `n = 1, 2, 3` the normalized enumerator transform `B~ = K * M * A~` is
//! hardcoded, and the distance-two constraint set is decided by two
//! independent routes: a transcription of the case-by-case elimination that
//! produces the named contradiction values, and a generic exact
//! Gaussian/Fourier-Motzkin eliminator over the full system. The two must
//! agree; disagreement is surfaced as an error, never papered over.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

fn int(v: i64) -> Rational {
    Rational::from(BigInt::from(v))
}

fn uint(v: u64) -> Rational {
    Rational::from(BigInt::from(v))
}

/// One linear constraint `sum coeffs[i] * x_i (= | <=) rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub label: String,
}

impl Constraint {
    fn eval_lhs(&self, point: &[Rational]) -> Rational {
        self.coeffs.iter().zip(point).map(|(c, x)| c * x).sum()
    }
}

/// A system of exact linear equalities and `<=` inequalities over named
/// rational variables.
#[derive(Debug, Clone)]
pub struct ConstraintSet {
    names: Vec<String>,
    pub equalities: Vec<Constraint>,
    pub inequalities: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new(names: Vec<String>) -> Self {
        Self {
            names,
            equalities: Vec::new(),
            inequalities: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn push_equality(&mut self, coeffs: Vec<Rational>, rhs: Rational, label: String) {
        debug_assert_eq!(coeffs.len(), self.names.len());
        self.equalities.push(Constraint { coeffs, rhs, label });
    }

    /// Adds `sum coeffs * x <= rhs`.
    pub fn push_inequality(&mut self, coeffs: Vec<Rational>, rhs: Rational, label: String) {
        debug_assert_eq!(coeffs.len(), self.names.len());
        self.inequalities.push(Constraint { coeffs, rhs, label });
    }

    /// Substitutes a point into every constraint; returns the label of the
    /// first violated one.
    pub fn check_point(&self, point: &[Rational]) -> std::result::Result<(), String> {
        for eq in &self.equalities {
            if eq.eval_lhs(point) != eq.rhs {
                return Err(eq.label.clone());
            }
        }
        for ineq in &self.inequalities {
            if ineq.eval_lhs(point) > ineq.rhs {
                return Err(ineq.label.clone());
            }
        }
        Ok(())
    }
}

/// `(pivot var, constant, [(free var, coeff)])`.
type PivotExpr = (usize, Rational, Vec<(usize, Rational)>);

/// Reduced row echelon data for an equality system: each pivot variable is
/// expressed as a constant plus a combination of the free variables.
struct ReducedEqualities {
    pivots: Vec<PivotExpr>,
    free_vars: Vec<usize>,
}

enum ReduceOutcome {
    Ok(ReducedEqualities),
    /// The equalities force `0 = value` with `value != 0`.
    Inconsistent {
        label: String,
        value: Rational,
    },
}

fn reduce_equalities(num_vars: usize, equalities: &[Constraint]) -> ReduceOutcome {
    let mut rows: Vec<(Vec<Rational>, Rational, String)> = equalities
        .iter()
        .map(|c| (c.coeffs.clone(), c.rhs.clone(), c.label.clone()))
        .collect();

    let mut pivot_cols: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut next_row = 0;
    for col in 0..num_vars {
        let Some(found) = (next_row..rows.len()).find(|&r| !rows[r].0[col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, found);
        let inv = {
            let p = rows[next_row].0[col].clone();
            Rational::from(BigInt::from(1)) / p
        };
        for c in rows[next_row].0.iter_mut() {
            *c = &*c * &inv;
        }
        rows[next_row].1 = &rows[next_row].1 * &inv;
        for r in 0..rows.len() {
            if r == next_row || rows[r].0[col].is_zero() {
                continue;
            }
            let factor = rows[r].0[col].clone();
            for c in 0..num_vars {
                let delta = &factor * &rows[next_row].0[c];
                rows[r].0[c] = &rows[r].0[c] - delta;
            }
            let delta = &factor * &rows[next_row].1;
            rows[r].1 = &rows[r].1 - delta;
        }
        pivot_cols.push((next_row, col));
        next_row += 1;
    }

    for (coeffs, rhs, label) in rows.iter().skip(next_row) {
        debug_assert!(coeffs.iter().all(Zero::is_zero));
        if !rhs.is_zero() {
            return ReduceOutcome::Inconsistent {
                label: label.clone(),
                value: rhs.clone(),
            };
        }
    }

    let pivot_set: Vec<usize> = pivot_cols.iter().map(|&(_, c)| c).collect();
    let free_vars: Vec<usize> = (0..num_vars).filter(|v| !pivot_set.contains(v)).collect();
    let pivots = pivot_cols
        .iter()
        .map(|&(row, col)| {
            let free: Vec<(usize, Rational)> = free_vars
                .iter()
                .filter(|&&f| !rows[row].0[f].is_zero())
                .map(|&f| (f, -rows[row].0[f].clone()))
                .collect();
            (col, rows[row].1.clone(), free)
        })
        .collect();
    ReduceOutcome::Ok(ReducedEqualities { pivots, free_vars })
}

/// A linear form over the free variables: `constant + sum coeff * x_free`.
#[derive(Debug, Clone)]
struct FreeExpr {
    constant: Rational,
    free: BTreeMap<usize, Rational>,
}

impl ReducedEqualities {
    /// Rewrites `sum coeffs * x` over the free variables.
    fn substitute(&self, coeffs: &[Rational]) -> FreeExpr {
        let mut constant = Rational::zero();
        let mut free: BTreeMap<usize, Rational> = BTreeMap::new();
        let add = |v: usize, c: &Rational, free: &mut BTreeMap<usize, Rational>| {
            let entry = free.entry(v).or_insert_with(Rational::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                free.remove(&v);
            }
        };
        for (v, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some((_, constant_part, free_part)) =
                self.pivots.iter().find(|(p, _, _)| *p == v)
            {
                constant += c * constant_part;
                for (f, fc) in free_part {
                    add(*f, &(c * fc), &mut free);
                }
            } else {
                add(v, c, &mut free);
            }
        }
        FreeExpr { constant, free }
    }

    /// The value a linear form is pinned to by the equalities, when it is
    /// constant on the whole solution space.
    fn pinned_value(&self, coeffs: &[Rational]) -> Option<Rational> {
        let expr = self.substitute(coeffs);
        expr.free.is_empty().then_some(expr.constant)
    }

    fn pinned_var(&self, var: usize, num_vars: usize) -> Option<Rational> {
        let mut coeffs = vec![Rational::zero(); num_vars];
        coeffs[var] = Rational::from(BigInt::from(1));
        self.pinned_value(&coeffs)
    }
}

/// Number of free directions left by the equality subsystem, `None` when the
/// equalities are already inconsistent.
pub fn affine_solution_dim(cs: &ConstraintSet) -> Option<usize> {
    match reduce_equalities(cs.num_vars(), &cs.equalities) {
        ReduceOutcome::Ok(red) => Some(red.free_vars.len()),
        ReduceOutcome::Inconsistent { .. } => None,
    }
}

/// The value the equality subsystem forces on a named variable, when it is
/// the same on the whole solution space. `None` if the variable is free, the
/// name unknown, or the equalities inconsistent.
pub fn pinned_variable(cs: &ConstraintSet, name: &str) -> Option<Rational> {
    let var = cs.var_index(name)?;
    match reduce_equalities(cs.num_vars(), &cs.equalities) {
        ReduceOutcome::Ok(red) => red.pinned_var(var, cs.num_vars()),
        ReduceOutcome::Inconsistent { .. } => None,
    }
}

/// A full variable assignment satisfying a constraint set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<Rational>,
}

/// Step-by-step record of the generic elimination.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EliminationTrace {
    pub steps: Vec<String>,
    /// The violated constant inequality or inconsistent equality reached at
    /// the end of elimination.
    pub final_violation: Option<String>,
}

impl EliminationTrace {
    pub fn contradiction(&self) -> String {
        self.final_violation.clone().unwrap_or_default()
    }
}

/// Verdict of the generic eliminator.
#[derive(Debug, Clone)]
pub enum FmOutcome {
    Feasible(Witness),
    Infeasible(EliminationTrace),
}

impl FmOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

#[derive(Debug, Clone)]
struct FmRow {
    free: BTreeMap<usize, Rational>,
    bound: Rational,
    label: String,
}

/// Normalizes rows to leading coefficient of magnitude one, keeps only the
/// tightest bound per direction, and consumes constant rows on the spot.
/// Keeps the pairwise combination step from exploding.
fn compress_rows(rows: Vec<FmRow>) -> std::result::Result<Vec<FmRow>, FmRow> {
    let mut kept: BTreeMap<Vec<(usize, Rational)>, FmRow> = BTreeMap::new();
    for row in rows {
        if row.free.is_empty() {
            if row.bound.is_negative() {
                return Err(row);
            }
            continue;
        }
        let scale = row.free.values().next().unwrap().abs();
        let key: Vec<(usize, Rational)> = row.free.iter().map(|(f, c)| (*f, c / &scale)).collect();
        let scaled = FmRow {
            free: key.iter().cloned().collect(),
            bound: &row.bound / &scale,
            label: row.label,
        };
        use std::collections::btree_map::Entry;
        match kept.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(scaled);
            }
            Entry::Occupied(mut slot) => {
                if scaled.bound < slot.get().bound {
                    *slot.get_mut() = scaled;
                }
            }
        }
    }
    Ok(kept.into_values().collect())
}

/// Decides feasibility exactly: Gaussian elimination on the equalities, then
/// Fourier-Motzkin elimination of the free variables, then back-substitution
/// to produce a witness when the final constant system is consistent.
pub fn fm_feasibility(cs: &ConstraintSet) -> FmOutcome {
    let mut trace = EliminationTrace::default();
    let red = match reduce_equalities(cs.num_vars(), &cs.equalities) {
        ReduceOutcome::Ok(red) => red,
        ReduceOutcome::Inconsistent { label, value } => {
            trace.steps.push("equality reduction".into());
            trace.final_violation =
                Some(format!("equalities force 0 = {value} (from row '{label}')"));
            return FmOutcome::Infeasible(trace);
        }
    };
    trace.steps.push(format!(
        "equalities solved: {} pivot(s), {} free variable(s)",
        red.pivots.len(),
        red.free_vars.len()
    ));

    let mut active: Vec<FmRow> = cs
        .inequalities
        .iter()
        .map(|c| {
            let expr = red.substitute(&c.coeffs);
            FmRow {
                free: expr.free,
                bound: &c.rhs - expr.constant,
                label: c.label.clone(),
            }
        })
        .collect();

    let mut levels: Vec<(usize, Vec<FmRow>)> = Vec::new();
    for &v in &red.free_vars {
        active = match compress_rows(active) {
            Ok(rows) => rows,
            Err(row) => {
                trace.final_violation = Some(format!(
                    "constant inequality 0 <= {} violated (derived as {})",
                    row.bound, row.label
                ));
                return FmOutcome::Infeasible(trace);
            }
        };
        let (with_v, without): (Vec<FmRow>, Vec<FmRow>) = active
            .into_iter()
            .partition(|row| row.free.contains_key(&v));
        let mut next = without;
        if !with_v.is_empty() {
            let lowers: Vec<&FmRow> = with_v.iter().filter(|r| r.free[&v].is_negative()).collect();
            let uppers: Vec<&FmRow> = with_v.iter().filter(|r| r.free[&v].is_positive()).collect();
            trace.steps.push(format!(
                "fm eliminated x{v}: {} lower x {} upper -> {} derived",
                lowers.len(),
                uppers.len(),
                lowers.len() * uppers.len()
            ));
            for low in &lowers {
                for up in &uppers {
                    // low: c_l x + R_l <= b_l (c_l < 0); up: c_u x + R_u <= b_u (c_u > 0).
                    // (-c_l) * up + c_u * low removes x and keeps direction.
                    let cl = low.free[&v].clone();
                    let cu = up.free[&v].clone();
                    let mut free: BTreeMap<usize, Rational> = BTreeMap::new();
                    for (f, c) in &up.free {
                        if *f != v {
                            free.insert(*f, -&cl * c);
                        }
                    }
                    for (f, c) in &low.free {
                        if *f == v {
                            continue;
                        }
                        let entry = free.entry(*f).or_insert_with(Rational::zero);
                        *entry = &*entry + &cu * c;
                        if entry.is_zero() {
                            free.remove(f);
                        }
                    }
                    next.push(FmRow {
                        free,
                        bound: -&cl * &up.bound + &cu * &low.bound,
                        label: format!("fm({}, {})", low.label, up.label),
                    });
                }
            }
        }
        levels.push((v, with_v));
        active = next;
    }

    for row in &active {
        debug_assert!(row.free.is_empty());
        if row.bound.is_negative() {
            trace.final_violation = Some(format!(
                "constant inequality 0 <= {} violated (derived as {})",
                row.bound, row.label
            ));
            return FmOutcome::Infeasible(trace);
        }
    }

    // Back-substitute a witness, last eliminated variable first.
    let mut free_values: BTreeMap<usize, Rational> = BTreeMap::new();
    for (v, rows) in levels.iter().rev() {
        let mut lower: Option<Rational> = None;
        let mut upper: Option<Rational> = None;
        for row in rows {
            let coeff = row.free[v].clone();
            let rest: Rational = row
                .free
                .iter()
                .filter(|(f, _)| *f != v)
                .map(|(f, c)| c * &free_values[f])
                .sum();
            let limit = (&row.bound - rest) / &coeff;
            if coeff.is_positive() {
                upper = Some(match upper {
                    Some(u) if u <= limit => u,
                    _ => limit,
                });
            } else {
                lower = Some(match lower {
                    Some(l) if l >= limit => l,
                    _ => limit,
                });
            }
        }
        let value = match (lower, upper) {
            (Some(l), _) => l,
            (None, Some(u)) => u.min(Rational::zero()),
            (None, None) => Rational::zero(),
        };
        free_values.insert(*v, value);
    }

    let mut assignment = vec![Rational::zero(); cs.num_vars()];
    for (v, value) in &free_values {
        assignment[*v] = value.clone();
    }
    for (pivot, constant, free_part) in &red.pivots {
        let mut value = constant.clone();
        for (f, c) in free_part {
            value += c * &free_values[f];
        }
        assignment[*pivot] = value;
    }
    debug_assert!(cs.check_point(&assignment).is_ok());
    FmOutcome::Feasible(Witness { assignment })
}

/// The normalized enumerator transform matrix for `Sym^n(C^q)`, `n <= 3`.
pub fn macwilliams_matrix(n: usize, q: u64) -> Result<Vec<Vec<Rational>>> {
    let q = int(q as i64);
    let one = int(1);
    let p = |offsets: &[i64]| -> Rational { offsets.iter().map(|o| &q + int(*o)).product() };
    let m = match n {
        1 => vec![
            vec![&one / &q, &one / &q],
            vec![(&q * &q - &one) / &q, -(&one / &q)],
        ],
        2 => vec![
            vec![
                int(2) / (&q * p(&[1])),
                int(2) / (&q * p(&[1])),
                int(2) / (&q * p(&[1])),
            ],
            vec![
                int(2) * p(&[-1]) / &q,
                (&q * p(&[2]) - int(4)) / (&q * p(&[2])),
                int(-4) / (&q * p(&[2])),
            ],
            vec![
                &q * p(&[-1, 3]) / (int(2) * p(&[1])),
                -(&q * p(&[3])) / p(&[1, 2]),
                int(2) / p(&[1, 2]),
            ],
        ],
        3 => {
            let qq = &q * &q;
            vec![
                vec![
                    int(6) / (&q * p(&[1, 2])),
                    int(6) / (&q * p(&[1, 2])),
                    int(6) / (&q * p(&[1, 2])),
                    int(6) / (&q * p(&[1, 2])),
                ],
                vec![
                    int(6) * p(&[-1]) / (&q * p(&[2])),
                    int(2) * (int(2) * &qq + int(6) * &q - int(9)) / (&q * p(&[2, 3])),
                    int(2) * (&qq + int(4) * &q - int(9)) / (&q * p(&[2, 3])),
                    int(-18) / (&q * p(&[2, 3])),
                ],
                vec![
                    int(3) * &q * p(&[-1, 3]) / (int(2) * p(&[1, 2])),
                    &q * (&qq + int(4) * &q - int(9)) / (int(2) * p(&[1, 2])),
                    int(-2) * (int(2) * &qq + int(10) * &q - int(1)) / p(&[1, 2, 4]),
                    int(18) / p(&[1, 2, 4]),
                ],
                vec![
                    &q * p(&[-1, 1, 5]) / (int(6) * p(&[2])),
                    -(&q * p(&[1, 5])) / (int(2) * p(&[2, 3])),
                    int(2) * p(&[1, 5]) / p(&[2, 3, 4]),
                    int(-6) / p(&[2, 3, 4]),
                ],
            ]
        }
        other => return Err(Error::UnsupportedEnumeratorLength(other)),
    };
    Ok(m)
}

/// Variable names `A~0..A~n, B~0..B~n` used by the enumerator systems.
pub fn enumerator_names(n: usize) -> Vec<String> {
    (0..=n)
        .map(|r| format!("A~{r}"))
        .chain((0..=n).map(|r| format!("B~{r}")))
        .collect()
}

/// The enumerator constraint system for a dimension-`k` code in
/// `Sym^n(C^q)`, `n <= 3`.
#[derive(Debug, Clone)]
pub struct MacWilliamsSystem {
    pub n: usize,
    pub q: u64,
    pub k: u64,
    pub matrix: Vec<Vec<Rational>>,
    pub constraints: ConstraintSet,
}

/// Assembles the normalized constraint set: `A~0 = B~0 = 1`, the transform
/// rows `B~ = K M A~`, `0 <= A~r <= B~r`, and (unless relaxed) the
/// adjoint-sector equality `A~1 = B~1` that encodes single-site error
/// detection.
pub fn macwilliams_system(
    n: usize,
    q: u64,
    k: u64,
    adjoint_equality: bool,
) -> Result<MacWilliamsSystem> {
    let matrix = macwilliams_matrix(n, q)?;
    let names = enumerator_names(n);
    let width = 2 * (n + 1);
    let a = |r: usize| r;
    let b = |r: usize| n + 1 + r;
    let mut cs = ConstraintSet::new(names);

    let unit = |idx: usize| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); width];
        v[idx] = int(1);
        v
    };

    cs.push_equality(unit(a(0)), int(1), "A~0 = 1".into());
    cs.push_equality(unit(b(0)), int(1), "B~0 = 1".into());
    if adjoint_equality {
        let mut coeffs = vec![Rational::zero(); width];
        coeffs[a(1)] = int(1);
        coeffs[b(1)] = int(-1);
        cs.push_equality(coeffs, Rational::zero(), "A~1 = B~1".into());
    }
    for r in 0..=n {
        let mut coeffs = vec![Rational::zero(); width];
        coeffs[b(r)] = int(1);
        for s in 0..=n {
            coeffs[a(s)] = -(uint(k) * &matrix[r][s]);
        }
        cs.push_equality(coeffs, Rational::zero(), format!("transform row {r}"));
    }
    for r in 0..=n {
        let mut coeffs = vec![Rational::zero(); width];
        coeffs[a(r)] = int(-1);
        cs.push_inequality(coeffs, Rational::zero(), format!("A~{r} >= 0"));
        let mut coeffs = vec![Rational::zero(); width];
        coeffs[a(r)] = int(1);
        coeffs[b(r)] = int(-1);
        cs.push_inequality(coeffs, Rational::zero(), format!("A~{r} <= B~{r}"));
    }
    Ok(MacWilliamsSystem {
        n,
        q,
        k,
        matrix,
        constraints: cs,
    })
}

/// The exact contradiction closing an infeasibility argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Contradiction {
    /// Two values forced for quantities an equality requires to agree.
    ForcedUnequal {
        constraint: String,
        lhs_name: String,
        lhs: Rational,
        rhs_name: String,
        rhs: Rational,
    },
    /// A variable pinned by the equalities to a negative value while
    /// constrained nonnegative.
    NegativeForcedValue { name: String, value: Rational },
    /// A combination with nonnegative coefficients over nonnegative
    /// variables pinned to a negative constant.
    SignClash {
        terms: Vec<(String, Rational)>,
        rhs: Rational,
    },
    /// A forced point violates `name <= bound_name`.
    BoundViolated {
        name: String,
        value: Rational,
        bound_name: String,
        bound: Rational,
    },
    /// The equalities collapse to `0 = value` with `value != 0`.
    ZeroForcedNonzero { constraint: String, value: Rational },
    /// A one-dimensional slice has an empty feasible interval.
    EmptyInterval {
        var: String,
        lower: Rational,
        lower_source: String,
        upper: Rational,
        upper_source: String,
    },
    /// A constraint with no remaining variables reads `0 <= value` with
    /// `value < 0`.
    ConstantViolated { constraint: String, value: Rational },
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ForcedUnequal {
                constraint,
                lhs_name,
                lhs,
                rhs_name,
                rhs,
            } => write!(
                f,
                "{lhs_name} = {lhs} and {rhs_name} = {rhs} are forced, contradicting '{constraint}'"
            ),
            Self::NegativeForcedValue { name, value } => {
                write!(f, "{name} = {value} is forced, contradicting {name} >= 0")
            }
            Self::SignClash { terms, rhs } => {
                let lhs = terms
                    .iter()
                    .map(|(n, c)| format!("({c})*{n}"))
                    .collect::<Vec<_>>()
                    .join(" + ");
                write!(
                    f,
                    "{lhs} = {rhs} with nonnegative coefficients and variables; left side >= 0 but right side < 0"
                )
            }
            Self::BoundViolated {
                name,
                value,
                bound_name,
                bound,
            } => write!(
                f,
                "{name} = {value} exceeds {bound_name} = {bound}, contradicting {name} <= {bound_name}"
            ),
            Self::ZeroForcedNonzero { constraint, value } => {
                write!(f, "'{constraint}' reduces to 0 = {value}")
            }
            Self::EmptyInterval {
                var,
                lower,
                lower_source,
                upper,
                upper_source,
            } => write!(
                f,
                "{var} >= {lower} (from '{lower_source}') and {var} <= {upper} (from '{upper_source}') cannot both hold"
            ),
            Self::ConstantViolated { constraint, value } => {
                write!(f, "'{constraint}' reduces to 0 <= {value}")
            }
        }
    }
}

/// Exact rational witness that a `(n, q, K)` enumerator system has no
/// solution, with the derivation trail and the generic-eliminator
/// confirmation.
#[derive(Debug, Clone)]
pub struct InfeasibilityCertificate {
    pub n: usize,
    pub q: u64,
    pub k: u64,
    pub adjoint_equality: bool,
    pub trail: Vec<String>,
    pub contradiction: Contradiction,
    pub elimination: EliminationTrace,
}

impl InfeasibilityCertificate {
    /// Re-substitutes the recorded contradiction into the original
    /// constraint set and confirms it.
    pub fn verify(&self, system: &MacWilliamsSystem) -> bool {
        let cs = &system.constraints;
        let reduce = |equalities: &[Constraint]| match reduce_equalities(cs.num_vars(), equalities)
        {
            ReduceOutcome::Ok(red) => Some(red),
            ReduceOutcome::Inconsistent { .. } => None,
        };
        match &self.contradiction {
            Contradiction::ZeroForcedNonzero { value, .. } => {
                !value.is_zero()
                    && matches!(
                        reduce_equalities(cs.num_vars(), &cs.equalities),
                        ReduceOutcome::Inconsistent { .. }
                    )
            }
            Contradiction::ForcedUnequal {
                constraint,
                lhs_name,
                lhs,
                rhs_name,
                rhs,
            } => {
                // Drop the contradicted equality, pin both sides from the rest.
                let remaining: Vec<Constraint> = cs
                    .equalities
                    .iter()
                    .filter(|c| &c.label != constraint)
                    .cloned()
                    .collect();
                let Some(red) = reduce(&remaining) else {
                    return false;
                };
                let pin = |name: &str| {
                    cs.var_index(name)
                        .and_then(|v| red.pinned_var(v, cs.num_vars()))
                };
                pin(lhs_name) == Some(lhs.clone())
                    && pin(rhs_name) == Some(rhs.clone())
                    && lhs != rhs
            }
            Contradiction::NegativeForcedValue { name, value } => {
                let Some(red) = reduce(&cs.equalities) else {
                    return false;
                };
                value.is_negative()
                    && cs
                        .var_index(name)
                        .and_then(|v| red.pinned_var(v, cs.num_vars()))
                        == Some(value.clone())
            }
            Contradiction::SignClash { terms, rhs } => {
                let Some(red) = reduce(&cs.equalities) else {
                    return false;
                };
                let mut coeffs = vec![Rational::zero(); cs.num_vars()];
                for (name, c) in terms {
                    let Some(v) = cs.var_index(name) else {
                        return false;
                    };
                    if c.is_negative() {
                        return false;
                    }
                    coeffs[v] = c.clone();
                }
                rhs.is_negative() && red.pinned_value(&coeffs) == Some(rhs.clone())
            }
            Contradiction::BoundViolated {
                name,
                value,
                bound_name,
                bound,
            } => {
                let Some(red) = reduce(&cs.equalities) else {
                    return false;
                };
                let pin = |name: &str| {
                    cs.var_index(name)
                        .and_then(|v| red.pinned_var(v, cs.num_vars()))
                };
                pin(name) == Some(value.clone())
                    && pin(bound_name) == Some(bound.clone())
                    && value > bound
            }
            // Interval and constant contradictions arise away from the three
            // transcribed cases; confirm them with the independent eliminator.
            Contradiction::EmptyInterval { lower, upper, .. } => {
                lower > upper && !fm_feasibility(cs).is_feasible()
            }
            Contradiction::ConstantViolated { value, .. } => {
                value.is_negative() && !fm_feasibility(cs).is_feasible()
            }
        }
    }

    pub fn contradiction_string(&self) -> String {
        self.contradiction.to_string()
    }
}

/// Combined verdict of [`check_feasibility`].
#[derive(Debug, Clone)]
pub enum Feasibility {
    Feasible(Witness),
    Infeasible(Box<InfeasibilityCertificate>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Self::Feasible(_))
    }
}

/// Affine function of one parameter, `c0 + c1 * t`.
#[derive(Debug, Clone)]
struct Affine {
    c0: Rational,
    c1: Rational,
}

impl Affine {
    fn constant(c0: Rational) -> Self {
        Self {
            c0,
            c1: Rational::zero(),
        }
    }

    fn param() -> Self {
        Self {
            c0: Rational::zero(),
            c1: int(1),
        }
    }

    fn scale(&self, f: &Rational) -> Self {
        Self {
            c0: &self.c0 * f,
            c1: &self.c1 * f,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            c0: &self.c0 + &other.c0,
            c1: &self.c1 + &other.c1,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        Self {
            c0: &self.c0 - &other.c0,
            c1: &self.c1 - &other.c1,
        }
    }

    fn eval(&self, t: &Rational) -> Rational {
        &self.c0 + &self.c1 * t
    }
}

/// Intersects constraints `lhs(t) <= rhs(t)` into a feasible `t`, or reports
/// why the interval is empty.
#[allow(clippy::result_large_err)]
fn solve_interval(
    var: &str,
    constraints: &[(Affine, Affine, String)],
) -> std::result::Result<Rational, Contradiction> {
    let mut lower: Option<(Rational, String)> = None;
    let mut upper: Option<(Rational, String)> = None;
    for (lhs, rhs, label) in constraints {
        let diff = lhs.sub(rhs); // need diff.c1 * t <= -diff.c0
        let bound = -diff.c0.clone();
        if diff.c1.is_zero() {
            if bound.is_negative() {
                return Err(Contradiction::ConstantViolated {
                    constraint: label.clone(),
                    value: bound,
                });
            }
            continue;
        }
        let limit = &bound / &diff.c1;
        if diff.c1.is_positive() {
            if upper.as_ref().is_none_or(|(u, _)| limit < *u) {
                upper = Some((limit, label.clone()));
            }
        } else if lower.as_ref().is_none_or(|(l, _)| limit > *l) {
            lower = Some((limit, label.clone()));
        }
    }
    match (lower, upper) {
        (Some((l, ls)), Some((u, us))) => {
            if l > u {
                Err(Contradiction::EmptyInterval {
                    var: var.into(),
                    lower: l,
                    lower_source: ls,
                    upper: u,
                    upper_source: us,
                })
            } else {
                Ok(l)
            }
        }
        (Some((l, _)), None) => Ok(l),
        (None, Some((u, _))) => Ok(u.min(Rational::zero())),
        (None, None) => Ok(Rational::zero()),
    }
}

/// `B~` values from `A~` values through the transform.
fn transform_b(matrix: &[Vec<Rational>], k: u64, a: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|row| row.iter().zip(a).map(|(c, av)| c * av).sum::<Rational>() * uint(k))
        .collect()
}

fn transform_b_affine(matrix: &[Vec<Rational>], k: u64, a: &[Affine]) -> Vec<Affine> {
    matrix
        .iter()
        .map(|row| {
            let mut acc = Affine::constant(Rational::zero());
            for (c, av) in row.iter().zip(a) {
                acc = acc.add(&av.scale(c));
            }
            acc.scale(&uint(k))
        })
        .collect()
}

/// Checks `0 <= A~r <= B~r` at a fully determined point, in index order, and
/// returns the full assignment on success.
#[allow(clippy::result_large_err)]
fn finish_point(
    matrix: &[Vec<Rational>],
    k: u64,
    a: Vec<Rational>,
    trail: &mut Vec<String>,
) -> std::result::Result<Witness, Contradiction> {
    let b = transform_b(matrix, k, &a);
    for (r, value) in a.iter().enumerate() {
        if value.is_negative() {
            return Err(Contradiction::NegativeForcedValue {
                name: format!("A~{r}"),
                value: value.clone(),
            });
        }
    }
    for (r, (value, bound)) in a.iter().zip(&b).enumerate() {
        if value > bound {
            return Err(Contradiction::BoundViolated {
                name: format!("A~{r}"),
                value: value.clone(),
                bound_name: format!("B~{r}"),
                bound: bound.clone(),
            });
        }
    }
    trail.push(format!(
        "point satisfies all bounds: A~ = [{}]",
        a.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    ));
    let assignment = a.into_iter().chain(b).collect();
    Ok(Witness { assignment })
}

/// Assembles the constraint list for a one-parameter slice `A~(t)` and
/// intersects it.
#[allow(clippy::result_large_err)]
fn finish_line(
    n: usize,
    matrix: &[Vec<Rational>],
    k: u64,
    var: &str,
    a: &[Affine],
    trail: &mut Vec<String>,
) -> std::result::Result<Witness, Contradiction> {
    let b = transform_b_affine(matrix, k, a);
    let mut constraints = Vec::new();
    for r in 0..=n {
        constraints.push((
            Affine::constant(Rational::zero()),
            a[r].clone(),
            format!("A~{r} >= 0"),
        ));
        constraints.push((a[r].clone(), b[r].clone(), format!("A~{r} <= B~{r}")));
    }
    let t = solve_interval(var, &constraints)?;
    trail.push(format!("one free direction; {var} = {t} chosen"));
    let a_vals: Vec<Rational> = a.iter().map(|affine| affine.eval(&t)).collect();
    finish_point(matrix, k, a_vals, trail)
}

/// The case-by-case elimination, evaluated exactly at `(q, K)`.
///
/// Follows the first transform row (which pins `A~1 + ... + A~n`), then the
/// second row combined with the adjoint equality, and closes with sign
/// checks; the named intermediate values are recorded in the trail. With the
/// adjoint equality dropped, `n = 1, 2` remain decidable here, while `n = 3`
/// leaves two free directions and is out of this path's scope.
pub fn direct_feasibility(
    n: usize,
    q: u64,
    k: u64,
    adjoint_equality: bool,
) -> Result<(Vec<String>, std::result::Result<Witness, Contradiction>)> {
    let matrix = macwilliams_matrix(n, q)?;
    let qr = uint(q);
    let kr = uint(k);
    let one = int(1);
    let mut trail = Vec::new();

    // Row 0 with A~0 = B~0 = 1 pins the sum of the remaining A~ variables:
    // 1 = K * m00 * (1 + A~1 + ... + A~n), all row-0 entries being equal.
    let m00 = matrix[0][0].clone();
    let tail_sum = &one / (&kr * &m00) - &one;
    trail.push(if n == 1 {
        format!("transform row 0 with A~0 = B~0 = 1 gives A~1 = {tail_sum}")
    } else {
        format!("transform row 0 with A~0 = B~0 = 1 gives A~1 + ... + A~{n} = {tail_sum}")
    });

    match (n, adjoint_equality) {
        (1, _) => {
            let a1 = tail_sum;
            let b1 = &kr * (&matrix[1][0] + &matrix[1][1] * &a1);
            trail.push(format!("transform row 1 gives B~1 = {b1}"));
            if adjoint_equality && a1 != b1 {
                return Ok((
                    trail,
                    Err(Contradiction::ForcedUnequal {
                        constraint: "A~1 = B~1".into(),
                        lhs_name: "B~1".into(),
                        lhs: b1,
                        rhs_name: "A~1".into(),
                        rhs: a1,
                    }),
                ));
            }
            let outcome = finish_point(&matrix, k, vec![one, a1], &mut trail);
            Ok((trail, outcome))
        }
        (2, true) => {
            // Row 1 with B~1 = A~1, scaled by q(q+2)/K:
            // c1 * A~1 - 4 * A~2 = d.
            let scale = &qr * (&qr + int(2));
            let c1 = &scale * &matrix[1][1] - &scale / &kr;
            let d = -(&scale * &matrix[1][0]);
            trail.push(format!(
                "transform row 1 with A~1 = B~1 gives ({c1})*A~1 + (-4)*A~2 = {d}"
            ));
            debug_assert_eq!(&scale * &matrix[1][2], int(-4));
            let denom = &c1 + int(4);
            if denom.is_zero() {
                // The combined row is -4 * (A~1 + A~2) = d; consistent only
                // against the row-0 sum.
                let residue = &d + int(4) * &tail_sum;
                if !residue.is_zero() {
                    return Ok((
                        trail,
                        Err(Contradiction::ZeroForcedNonzero {
                            constraint: "transform row 1 with A~1 = B~1".into(),
                            value: residue,
                        }),
                    ));
                }
                let a = vec![
                    Affine::constant(one),
                    Affine::param(),
                    Affine::constant(tail_sum).sub(&Affine::param()),
                ];
                let outcome = finish_line(n, &matrix, k, "A~1", &a, &mut trail);
                return Ok((trail, outcome));
            }
            let a1 = (&d + int(4) * &tail_sum) / &denom;
            let a2 = &tail_sum - &a1;
            trail.push(format!("solving the two rows: A~1 = {a1}, A~2 = {a2}"));
            let outcome = finish_point(&matrix, k, vec![one, a1, a2], &mut trail);
            Ok((trail, outcome))
        }
        (2, false) => {
            let a = vec![
                Affine::constant(one),
                Affine::param(),
                Affine::constant(tail_sum).sub(&Affine::param()),
            ];
            let outcome = finish_line(n, &matrix, k, "A~1", &a, &mut trail);
            Ok((trail, outcome))
        }
        (3, true) => {
            // Row 1 with B~1 = A~1 and A~3 eliminated through the row-0 sum,
            // scaled by q(q+2)(q+3)/K: alpha * A~1 + beta * A~2 = gamma.
            let scale = &qr * (&qr + int(2)) * (&qr + int(3));
            let row = &matrix[1];
            let alpha = &scale * (&row[1] - &row[3]) - &scale / &kr;
            let beta = &scale * (&row[2] - &row[3]);
            let gamma = -(&scale * &row[3] * &tail_sum) - &scale * &row[0];
            trail.push(format!(
                "row 1 with A~1 = B~1 and A~3 eliminated gives ({alpha})*A~1 + ({beta})*A~2 = {gamma}"
            ));
            if !alpha.is_negative() && !beta.is_negative() && gamma.is_negative() {
                return Ok((
                    trail,
                    Err(Contradiction::SignClash {
                        terms: vec![("A~1".into(), alpha), ("A~2".into(), beta)],
                        rhs: gamma,
                    }),
                ));
            }
            // beta = 2q(q+4) > 0 always, so the slice parametrizes by A~1.
            debug_assert!(beta.is_positive());
            let a1 = Affine::param();
            let a2 = Affine::constant(&gamma / &beta).sub(&a1.scale(&(&alpha / &beta)));
            let a3 = Affine::constant(tail_sum).sub(&a1).sub(&a2);
            let a = vec![Affine::constant(one), a1, a2, a3];
            let outcome = finish_line(n, &matrix, k, "A~1", &a, &mut trail);
            Ok((trail, outcome))
        }
        (3, false) => Err(Error::DirectPathUnsupported { n }),
        (other, _) => Err(Error::UnsupportedEnumeratorLength(other)),
    }
}

/// Decides the `(n, q, K)` system by both routes and cross-checks them.
///
/// Returns the transcription's witness or certificate; the generic
/// eliminator's verdict must match or an error is raised. For the one
/// combination the transcription does not cover (`n = 3` relaxed) the
/// generic route alone decides.
pub fn check_feasibility_with(
    n: usize,
    q: u64,
    k: u64,
    adjoint_equality: bool,
) -> Result<Feasibility> {
    let system = macwilliams_system(n, q, k, adjoint_equality)?;
    let generic = fm_feasibility(&system.constraints);

    let direct = match direct_feasibility(n, q, k, adjoint_equality) {
        Ok(outcome) => Some(outcome),
        Err(Error::DirectPathUnsupported { .. }) => None,
        Err(e) => return Err(e),
    };

    match (direct, generic) {
        (Some((trail, Ok(witness))), FmOutcome::Feasible(generic_witness)) => {
            debug_assert!(system.constraints.check_point(&witness.assignment).is_ok());
            debug_assert!(system
                .constraints
                .check_point(&generic_witness.assignment)
                .is_ok());
            let _ = trail;
            Ok(Feasibility::Feasible(witness))
        }
        (Some((trail, Err(contradiction))), FmOutcome::Infeasible(elimination)) => {
            let certificate = InfeasibilityCertificate {
                n,
                q,
                k,
                adjoint_equality,
                trail,
                contradiction,
                elimination,
            };
            debug_assert!(certificate.verify(&system));
            Ok(Feasibility::Infeasible(Box::new(certificate)))
        }
        (Some((_, direct_outcome)), generic_outcome) => Err(Error::SolverDisagreement {
            n,
            q,
            k,
            direct: if direct_outcome.is_ok() {
                "feasible"
            } else {
                "infeasible"
            },
            generic: if generic_outcome.is_feasible() {
                "feasible"
            } else {
                "infeasible"
            },
        }),
        (None, FmOutcome::Feasible(witness)) => Ok(Feasibility::Feasible(witness)),
        (None, FmOutcome::Infeasible(elimination)) => {
            let contradiction = Contradiction::ConstantViolated {
                constraint: elimination.contradiction(),
                value: int(-1),
            };
            Ok(Feasibility::Infeasible(Box::new(
                InfeasibilityCertificate {
                    n,
                    q,
                    k,
                    adjoint_equality,
                    trail: vec!["decided by elimination only".into()],
                    contradiction,
                    elimination,
                },
            )))
        }
    }
}

/// The standard distance-two system (adjoint equality included).
pub fn check_feasibility(n: usize, q: u64, k: u64) -> Result<Feasibility> {
    check_feasibility_with(n, q, k, true)
}

/// Infeasibility certificates for every `q` in range and every `n <= 3`,
/// with `K = q`. A feasible outcome anywhere is a hard error.
pub fn sweep_nonexistence(q_min: u64, q_max: u64) -> Result<Vec<InfeasibilityCertificate>> {
    assert!(2 <= q_min && q_min <= q_max);
    let mut certificates = Vec::new();
    for q in q_min..=q_max {
        for n in 1..=3 {
            match check_feasibility(n, q, q)? {
                Feasibility::Infeasible(cert) => certificates.push(*cert),
                Feasibility::Feasible(_) => {
                    return Err(Error::UnexpectedFeasible { n, q });
                }
            }
        }
    }
    Ok(certificates)
}

/// Closed forms reached by the elimination at `K = q`; kept callable so the
/// sign predicates behind each contradiction can be asserted directly.
pub mod closed_forms {
    use super::{int, uint, Rational};

    /// `n = 1`: the adjoint enumerator forced by the transform, `q^2 - 1`.
    pub fn n1_forced_b1(q: u64) -> Rational {
        &uint(q) * &uint(q) - int(1)
    }

    /// `n = 2`: the forced `A~1 = -2(q+1)/(q+2)`.
    pub fn n2_forced_a1(q: u64) -> Rational {
        int(-2) * (uint(q) + int(1)) / (uint(q) + int(2))
    }

    /// `n = 2`: the forced `A~2 = (q^2 + 5q + 2)/(2(q+2))`.
    pub fn n2_forced_a2(q: u64) -> Rational {
        let qr = uint(q);
        (&qr * &qr + int(5) * &qr + int(2)) / (int(2) * (&qr + int(2)))
    }

    /// `n = 3`: coefficients and right side of the combined row,
    /// `(3q-2)(q+3) * A~1 + 2q(q+4) * A~2 = -3(q-1)(q+2)`.
    pub fn n3_relation(q: u64) -> (Rational, Rational, Rational) {
        let qr = uint(q);
        (
            (int(3) * &qr - int(2)) * (&qr + int(3)),
            int(2) * &qr * (&qr + int(4)),
            int(-3) * (&qr - int(1)) * (&qr + int(2)),
        )
    }
}
