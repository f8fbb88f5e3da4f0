//! Machine-readable certificates.
//!
//! Everything a command produces is wrapped in a [`Certificate`] with a
//! versioned schema. Rationals serialize as numerator/denominator strings so
//! arbitrary precision survives JSON; radical scalars serialize both as term
//! arrays and as their canonical text rendering. Payloads are deterministic:
//! identical inputs give byte-identical payload JSON (the timestamp lives
//! outside the payload).

use serde::{Deserialize, Serialize};

use crate::codebook::{Codebook, Construction};
use crate::lp::{Contradiction, InfeasibilityCertificate};
use crate::oracle::OracleReport;
use crate::packets::{KqElement, Packet, PacketFamily, Parity};
use crate::scalar::{RadicalScalar, Rational};
use crate::verify::{KLReport, PauliReport, PauliVerdict, SeparationReport, Verdict};

pub const SCHEMA_VERSION: &str = "piq4/1";

/// An exact rational as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(r: &Rational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl RationalJson {
    pub fn to_rational(&self) -> Option<Rational> {
        let num = self.num.parse().ok()?;
        let den = self.den.parse().ok()?;
        Some(Rational::new(num, den))
    }
}

/// One term `(num/den) * sqrt(radicand)` of a radical scalar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadicalTermJson {
    pub radicand: u64,
    pub num: String,
    pub den: String,
}

pub fn radical_to_terms(value: &RadicalScalar) -> Vec<RadicalTermJson> {
    value
        .terms()
        .map(|(radicand, coeff)| RadicalTermJson {
            radicand,
            num: coeff.numer().to_string(),
            den: coeff.denom().to_string(),
        })
        .collect()
}

pub fn radical_from_terms(terms: &[RadicalTermJson]) -> Option<RadicalScalar> {
    let mut acc = RadicalScalar::zero();
    for term in terms {
        let coeff = Rational::new(term.num.parse().ok()?, term.den.parse().ok()?);
        let root = RadicalScalar::sqrt_of_rational(&Rational::from(num_bigint::BigInt::from(
            term.radicand,
        )))
        .ok()?;
        acc = &acc + &root.scale(&coeff);
    }
    Some(acc)
}

/// `{"v": i}` for vertices, `{"e": [i, j]}` for edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KqElementJson {
    Vertex { v: u32 },
    Edge { e: [u32; 2] },
}

impl From<&KqElement> for KqElementJson {
    fn from(e: &KqElement) -> Self {
        match e {
            KqElement::Vertex(i) => Self::Vertex { v: *i },
            KqElement::Edge(i, j) => Self::Edge { e: [*i, *j] },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PacketJson {
    pub label: u32,
    pub elements: Vec<KqElementJson>,
}

impl From<&Packet> for PacketJson {
    fn from(p: &Packet) -> Self {
        Self {
            label: p.label,
            elements: p.elements.iter().map(KqElementJson::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub q: u32,
    pub parity: String,
    pub packets: Vec<PacketJson>,
}

impl From<&PacketFamily> for FamilyJson {
    fn from(f: &PacketFamily) -> Self {
        Self {
            q: f.q(),
            parity: match f.parity() {
                Parity::Odd => "odd".into(),
                Parity::Even => "even".into(),
            },
            packets: f.packets().iter().map(PacketJson::from).collect(),
        }
    }
}

/// One basis term of a codeword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordTermJson {
    /// Occupation vector as `(a_0,...,a_{q-1})`.
    pub occupation: String,
    /// Canonical radical rendering of the amplitude.
    pub amplitude: String,
    pub amplitude_terms: Vec<RadicalTermJson>,
    pub amplitude_squared: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodewordJson {
    pub index: u32,
    pub terms: Vec<CodewordTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodebookJson {
    pub q: u32,
    pub n: u32,
    pub construction: String,
    pub family: FamilyJson,
    pub codewords: Vec<CodewordJson>,
}

impl From<&Codebook> for CodebookJson {
    fn from(cb: &Codebook) -> Self {
        let codewords = cb
            .codewords()
            .iter()
            .enumerate()
            .map(|(index, state)| CodewordJson {
                index: index as u32,
                terms: state
                    .iter()
                    .map(|(occ, amp)| {
                        let squared = amp
                            .square()
                            .as_rational()
                            .expect("codeword amplitudes square to rationals");
                        CodewordTermJson {
                            occupation: occ.to_string(),
                            amplitude: amp.to_string(),
                            amplitude_terms: radical_to_terms(amp),
                            amplitude_squared: RationalJson::from(&squared),
                        }
                    })
                    .collect(),
            })
            .collect();
        Self {
            q: cb.q(),
            n: cb.n(),
            construction: match cb.construction() {
                Construction::Midpoint => "midpoint".into(),
                Construction::OneFactorization => "one_factorization".into(),
            },
            family: FamilyJson::from(cb.family()),
            codewords,
        }
    }
}

fn verdict_str(v: Verdict) -> String {
    match v {
        Verdict::Pass => "pass".into(),
        Verdict::Fail => "fail".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationJson {
    pub disjoint: bool,
    pub each_root_separated: bool,
    pub mutually_root_separated: bool,
    pub cartan_balanced: bool,
    pub basis_cartan_values: Vec<String>,
    pub random_spot_checks: usize,
    pub verdict: String,
    pub witness: Option<String>,
}

impl From<&SeparationReport> for SeparationJson {
    fn from(r: &SeparationReport) -> Self {
        Self {
            disjoint: r.disjoint,
            each_root_separated: r.each_root_separated,
            mutually_root_separated: r.mutually_root_separated,
            cartan_balanced: r.cartan_balanced,
            basis_cartan_values: r
                .basis_cartan_values
                .iter()
                .map(|v| v.to_string())
                .collect(),
            random_spot_checks: r.random_spot_checks,
            verdict: verdict_str(r.verdict()),
            witness: r.witness.as_ref().map(|w| format!("{w:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaJson {
    pub operator: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KLJson {
    pub elements_computed: usize,
    pub nonzero_root_elements: usize,
    pub lambda_all_zero: bool,
    pub lambdas: Vec<LambdaJson>,
    pub verdict: String,
    pub first_violation: Option<String>,
}

impl From<&KLReport> for KLJson {
    fn from(r: &KLReport) -> Self {
        Self {
            elements_computed: r.elements_computed,
            nonzero_root_elements: r.root_checks.len(),
            lambda_all_zero: r.all_lambda_zero(),
            lambdas: r
                .lambda_values
                .iter()
                .map(|(op, value)| LambdaJson {
                    operator: op.to_string(),
                    value: value.to_string(),
                })
                .collect(),
            verdict: verdict_str(r.verdict),
            first_violation: r.first_violation.as_ref().map(|v| {
                format!(
                    "{} at ({}, {}): {:?} value {}",
                    v.operator, v.i, v.j, v.kind, v.value
                )
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliJson {
    pub x_images: Vec<Option<usize>>,
    pub is_shift: bool,
    pub z_exponents: Vec<Option<u64>>,
    pub z_is_diag: bool,
    pub verdict: String,
}

impl From<&PauliReport> for PauliJson {
    fn from(r: &PauliReport) -> Self {
        Self {
            x_images: r.x_images.clone(),
            is_shift: r.is_shift,
            z_exponents: r.z_exponents.clone(),
            z_is_diag: r.z_is_diag,
            verdict: match r.verdict {
                PauliVerdict::Pass => "pass".into(),
                PauliVerdict::Fail => "fail".into(),
                PauliVerdict::Informational => "informational".into(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleJson {
    pub elements_checked: usize,
    pub r_independent: bool,
    pub collective_consistent: bool,
    pub random_operator_checks: usize,
    pub dense_verdict: String,
    pub fast_verdict: String,
    pub agreement: bool,
    pub first_discrepancy: Option<String>,
}

impl From<&OracleReport> for OracleJson {
    fn from(r: &OracleReport) -> Self {
        Self {
            elements_checked: r.elements_checked,
            r_independent: r.r_independent,
            collective_consistent: r.collective_consistent,
            random_operator_checks: r.random_operator_checks,
            dense_verdict: verdict_str(r.dense_verdict),
            fast_verdict: verdict_str(r.fast_verdict),
            agreement: r.agreement(),
            first_discrepancy: r.first_discrepancy.clone(),
        }
    }
}

/// Everything `verify` produces for one local dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationJson {
    pub q: u32,
    pub n: u32,
    pub root_scaling: String,
    pub separation: SeparationJson,
    pub kl: KLJson,
    pub pauli: PauliJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleJson>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedRationalJson {
    pub name: String,
    pub value: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceEntryJson {
    pub n: usize,
    pub q: u64,
    pub k: u64,
    pub infeasible: bool,
    pub contradiction: String,
    /// The exact rational values appearing in the contradiction.
    pub values: Vec<NamedRationalJson>,
    pub trail: Vec<String>,
    pub elimination_steps: Vec<String>,
    pub resubstitution_verified: bool,
}

/// The named rational values inside a contradiction, for certificates.
pub fn contradiction_values(c: &Contradiction) -> Vec<NamedRationalJson> {
    let named = |name: &str, value: &Rational| NamedRationalJson {
        name: name.to_string(),
        value: RationalJson::from(value),
    };
    match c {
        Contradiction::ForcedUnequal {
            lhs_name,
            lhs,
            rhs_name,
            rhs,
            ..
        } => vec![named(lhs_name, lhs), named(rhs_name, rhs)],
        Contradiction::NegativeForcedValue { name, value } => vec![named(name, value)],
        Contradiction::SignClash { terms, rhs } => {
            let mut values: Vec<NamedRationalJson> = terms
                .iter()
                .map(|(name, coeff)| named(&format!("coefficient of {name}"), coeff))
                .collect();
            values.push(named("right-hand side", rhs));
            values
        }
        Contradiction::BoundViolated {
            name,
            value,
            bound_name,
            bound,
        } => vec![named(name, value), named(bound_name, bound)],
        Contradiction::ZeroForcedNonzero { value, .. } => vec![named("forced value", value)],
        Contradiction::EmptyInterval {
            var, lower, upper, ..
        } => vec![
            named(&format!("lower bound on {var}"), lower),
            named(&format!("upper bound on {var}"), upper),
        ],
        Contradiction::ConstantViolated { value, .. } => vec![named("constant", value)],
    }
}

pub fn nonexistence_entry(
    cert: &InfeasibilityCertificate,
    verified: bool,
) -> NonexistenceEntryJson {
    NonexistenceEntryJson {
        n: cert.n,
        q: cert.q,
        k: cert.k,
        infeasible: true,
        contradiction: cert.contradiction_string(),
        values: contradiction_values(&cert.contradiction),
        trail: cert.trail.clone(),
        elimination_steps: cert.elimination.steps.clone(),
        resubstitution_verified: verified,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceJson {
    pub entries: Vec<NonexistenceEntryJson>,
    pub all_infeasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum PayloadJson {
    Codebook(CodebookJson),
    Verification(Vec<VerificationJson>),
    Nonexistence(NonexistenceJson),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_oracle: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern_only: Option<bool>,
}

/// Top-level envelope for every command output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub command: String,
    pub params: ParamsJson,
    /// Seconds since the Unix epoch; excluded from any determinism claim.
    pub timestamp: u64,
    pub verdict: String,
    pub payload: PayloadJson,
}

impl Certificate {
    pub fn new(command: &str, params: ParamsJson, verdict: Verdict, payload: PayloadJson) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            params,
            timestamp,
            verdict: verdict_str(verdict),
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Human-readable rendering with the conventional packet names: midpoint
/// packets `S_r`, perfect matchings `F_r`.
pub fn render_text(cert: &Certificate) -> String {
    let mut out = String::new();
    let push = |out: &mut String, line: String| {
        out.push_str(&line);
        out.push('\n');
    };
    push(
        &mut out,
        format!(
            "{} {} -> {}",
            cert.schema_version, cert.command, cert.verdict
        ),
    );
    match &cert.payload {
        PayloadJson::Codebook(cb) => {
            push(
                &mut out,
                format!("codebook q = {}, n = {} ({})", cb.q, cb.n, cb.construction),
            );
            for (packet, codeword) in cb.family.packets.iter().zip(&cb.codewords) {
                let name = match (cb.family.parity.as_str(), packet.label == cb.q - 1) {
                    ("odd", _) => format!("S_{}", packet.label),
                    ("even", false) => format!("F_{}", packet.label),
                    ("even", true) => format!("S_{} (vertices)", packet.label),
                    _ => format!("S_{}", packet.label),
                };
                let elements = packet
                    .elements
                    .iter()
                    .map(|e| match e {
                        KqElementJson::Vertex { v } => format!("V({v})"),
                        KqElementJson::Edge { e } => format!("E({},{})", e[0], e[1]),
                    })
                    .collect::<Vec<_>>()
                    .join(", ");
                push(&mut out, format!("  {name} = {{{elements}}}"));
                for term in &codeword.terms {
                    push(
                        &mut out,
                        format!(
                            "    {}  amp = {}  |amp|^2 = {}/{}",
                            term.occupation,
                            term.amplitude,
                            term.amplitude_squared.num,
                            term.amplitude_squared.den
                        ),
                    );
                }
            }
        }
        PayloadJson::Verification(entries) => {
            for v in entries {
                push(
                    &mut out,
                    format!(
                        "q = {}: separation {}, kl {} ({} elements, lambda all zero: {}), pauli {}",
                        v.q,
                        v.separation.verdict,
                        v.kl.verdict,
                        v.kl.elements_computed,
                        v.kl.lambda_all_zero,
                        v.pauli.verdict
                    ),
                );
                if let Some(oracle) = &v.oracle {
                    push(
                        &mut out,
                        format!(
                            "  oracle: {} elements, agreement {}",
                            oracle.elements_checked, oracle.agreement
                        ),
                    );
                }
                if let Some(witness) = &v.separation.witness {
                    push(&mut out, format!("  separation witness: {witness}"));
                }
                if let Some(violation) = &v.kl.first_violation {
                    push(&mut out, format!("  kl violation: {violation}"));
                }
            }
        }
        PayloadJson::Nonexistence(sweep) => {
            for entry in &sweep.entries {
                push(
                    &mut out,
                    format!(
                        "n = {}, q = {}, K = {}: {} ({})",
                        entry.n,
                        entry.q,
                        entry.k,
                        if entry.infeasible {
                            "infeasible"
                        } else {
                            "FEASIBLE"
                        },
                        entry.contradiction
                    ),
                );
            }
            push(
                &mut out,
                format!("all infeasible: {}", sweep.all_infeasible),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codebook::build;
    use crate::scalar::rat;

    #[test]
    fn rational_round_trip() {
        let r = rat(-22, 7);
        let json = RationalJson::from(&r);
        assert_eq!(json.num, "-22");
        assert_eq!(json.den, "7");
        assert_eq!(json.to_rational(), Some(r));
    }

    #[test]
    fn radical_terms_round_trip() {
        let v = &RadicalScalar::sqrt_of_rational(&rat(2, 3)).unwrap()
            + &RadicalScalar::from_rational(rat(5, 4));
        let terms = radical_to_terms(&v);
        assert_eq!(radical_from_terms(&terms), Some(v));
    }

    #[test]
    fn codebook_payload_round_trips() {
        let cb = build(5).unwrap();
        let payload = PayloadJson::Codebook(CodebookJson::from(&cb));
        let text = serde_json::to_string(&payload).unwrap();
        let back: PayloadJson = serde_json::from_str(&text).unwrap();
        assert_eq!(payload, back);
    }

    #[test]
    fn payload_is_deterministic() {
        let a = serde_json::to_string(&CodebookJson::from(&build(4).unwrap())).unwrap();
        let b = serde_json::to_string(&CodebookJson::from(&build(4).unwrap())).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn kq_element_json_shape() {
        let v = serde_json::to_string(&KqElementJson::Vertex { v: 3 }).unwrap();
        assert_eq!(v, r#"{"v":3}"#);
        let e = serde_json::to_string(&KqElementJson::Edge { e: [0, 2] }).unwrap();
        assert_eq!(e, r#"{"e":[0,2]}"#);
    }
}
