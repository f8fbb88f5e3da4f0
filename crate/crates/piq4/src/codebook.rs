//! Construction of the `((4,q,2))_q` codewords.
//!
//! Odd `q`: a seed state weighted `1/sqrt(q)` on its vertex and `sqrt(2/q)`
//! on each midpoint edge, with the remaining codewords its cyclic-shift
//! translates. Even `q`: a uniform `sqrt(2/q)` superposition over each
//! perfect matching, plus a uniform `1/sqrt(q)` vertex state.

use crate::error::{Error, Result};
use crate::packets::{midpoint_packets, round_robin_packets, KqElement, PacketFamily};
use crate::scalar::{rat, RadicalScalar, Rational};
use crate::sym::{cyclic_shift, SymmetricState};

/// Which packet decomposition produced a codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    Midpoint,
    OneFactorization,
}

/// A full logical basis: `q` exact codewords in `Sym^4(C^q)`, one per packet.
#[derive(Debug, Clone)]
pub struct Codebook {
    q: u32,
    family: PacketFamily,
    construction: Construction,
    codewords: Vec<SymmetricState>,
}

impl Codebook {
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Block length; always 4 for these constructions.
    pub fn n(&self) -> u32 {
        4
    }

    pub fn family(&self) -> &PacketFamily {
        &self.family
    }

    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn codewords(&self) -> &[SymmetricState] {
        &self.codewords
    }
}

/// Uniform superposition over a packet with the given squared amplitude per
/// element.
fn packet_state(
    q: u32,
    elements: impl IntoIterator<Item = KqElement>,
    weight_sq: Rational,
) -> Result<SymmetricState> {
    let amp = RadicalScalar::sqrt_of_rational(&weight_sq)?;
    SymmetricState::from_terms(
        4,
        q,
        elements
            .into_iter()
            .map(|e| (e.to_occupation(q), amp.clone())),
    )
}

/// The odd-`q` code: seed on packet 0, translates by the cyclic shift.
pub fn build_odd(q: u32) -> Result<Codebook> {
    let family = midpoint_packets(q)?;
    let q_i64 = i64::from(q);

    let vertex_amp = RadicalScalar::sqrt_of_rational(&rat(1, q_i64))?;
    let edge_amp = RadicalScalar::sqrt_of_rational(&rat(2, q_i64))?;
    let mut seed = SymmetricState::zero(4, q);
    for element in &family.packets()[0].elements {
        let amp = match element {
            KqElement::Vertex(_) => vertex_amp.clone(),
            KqElement::Edge(..) => edge_amp.clone(),
        };
        seed.add_term(element.to_occupation(q), amp)?;
    }

    let codewords = (0..q).map(|r| cyclic_shift(&seed, r)).collect();
    Ok(Codebook {
        q,
        family,
        construction: Construction::Midpoint,
        codewords,
    })
}

/// The even-`q` code: one uniform state per perfect matching, then the
/// uniform vertex state.
pub fn build_even(q: u32) -> Result<Codebook> {
    let family = round_robin_packets(q)?;
    let q_i64 = i64::from(q);

    let mut codewords = Vec::with_capacity(q as usize);
    for packet in family.packets().iter().take((q - 1) as usize) {
        codewords.push(packet_state(
            q,
            packet.elements.iter().copied(),
            rat(2, q_i64),
        )?);
    }
    let vertex_packet = &family.packets()[(q - 1) as usize];
    codewords.push(packet_state(
        q,
        vertex_packet.elements.iter().copied(),
        rat(1, q_i64),
    )?);

    Ok(Codebook {
        q,
        family,
        construction: Construction::OneFactorization,
        codewords,
    })
}

/// Parity dispatch; `q >= 2` required.
pub fn build(q: u32) -> Result<Codebook> {
    if q < 2 {
        return Err(Error::QTooSmall(q));
    }
    if q % 2 == 1 {
        build_odd(q)
    } else {
        build_even(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sym::OccupationVector;

    fn occ(counts: &[u32]) -> OccupationVector {
        OccupationVector::new(counts.to_vec())
    }

    #[test]
    fn q3_seed_amplitudes() {
        let cb = build(3).unwrap();
        let seed = &cb.codewords()[0];
        assert_eq!(
            seed.amplitude(&occ(&[4, 0, 0])),
            RadicalScalar::sqrt_of_rational(&rat(1, 3)).unwrap()
        );
        assert_eq!(
            seed.amplitude(&occ(&[0, 2, 2])),
            RadicalScalar::sqrt_of_rational(&rat(2, 3)).unwrap()
        );
        assert_eq!(seed.support_len(), 2);
    }

    #[test]
    fn q3_translate_amplitudes() {
        let cb = build(3).unwrap();
        let one = &cb.codewords()[1];
        assert_eq!(
            one.amplitude(&occ(&[0, 4, 0])),
            RadicalScalar::sqrt_of_rational(&rat(1, 3)).unwrap()
        );
        assert_eq!(
            one.amplitude(&occ(&[2, 0, 2])),
            RadicalScalar::sqrt_of_rational(&rat(2, 3)).unwrap()
        );
    }

    #[test]
    fn q5_seed_support_and_squared_weights() {
        let cb = build(5).unwrap();
        let seed = &cb.codewords()[0];
        let third = rat(1, 5);
        let edge = rat(2, 5);
        assert_eq!(
            seed.amplitude(&occ(&[4, 0, 0, 0, 0])).square(),
            RadicalScalar::from_rational(third)
        );
        assert_eq!(
            seed.amplitude(&occ(&[0, 2, 0, 0, 2])).square(),
            RadicalScalar::from_rational(edge.clone())
        );
        assert_eq!(
            seed.amplitude(&occ(&[0, 0, 2, 2, 0])).square(),
            RadicalScalar::from_rational(edge)
        );
        assert_eq!(seed.support_len(), 3);
    }

    #[test]
    fn q4_matching_and_vertex_states() {
        let cb = build(4).unwrap();
        let psi0 = &cb.codewords()[0];
        let half = RadicalScalar::sqrt_of_rational(&rat(1, 2)).unwrap();
        assert_eq!(psi0.amplitude(&occ(&[2, 0, 0, 2])), half);
        assert_eq!(psi0.amplitude(&occ(&[0, 2, 2, 0])), half);

        let vertex = &cb.codewords()[3];
        for i in 0..4 {
            let mut counts = [0u32; 4];
            counts[i] = 4;
            assert_eq!(
                vertex.amplitude(&occ(&counts)),
                RadicalScalar::from_rational(rat(1, 2))
            );
        }
    }

    #[test]
    fn q2_degenerate_codebook() {
        let cb = build(2).unwrap();
        assert_eq!(
            cb.codewords()[0].amplitude(&occ(&[2, 2])),
            RadicalScalar::one()
        );
        let inv_sqrt2 = RadicalScalar::sqrt_of_rational(&rat(1, 2)).unwrap();
        assert_eq!(cb.codewords()[1].amplitude(&occ(&[4, 0])), inv_sqrt2);
        assert_eq!(cb.codewords()[1].amplitude(&occ(&[0, 4])), inv_sqrt2);
    }

    #[test]
    fn dispatch_and_domain_error() {
        assert_eq!(build(3).unwrap().construction(), Construction::Midpoint);
        assert_eq!(
            build(4).unwrap().construction(),
            Construction::OneFactorization
        );
        assert_eq!(build(1).unwrap_err(), Error::QTooSmall(1));
    }

    #[test]
    fn codewords_are_normalized_and_supported_on_their_packets() {
        for q in 2..=11u32 {
            let cb = build(q).unwrap();
            for (codeword, packet) in cb.codewords().iter().zip(cb.family().packets()) {
                assert_eq!(codeword.norm_sq(), RadicalScalar::one(), "q = {q}");
                let expected: Vec<_> = {
                    let mut v: Vec<_> =
                        packet.elements.iter().map(|e| e.to_occupation(q)).collect();
                    v.sort_by(|a, b| b.cmp(a));
                    v
                };
                let support: Vec<_> = codeword.support().cloned().collect();
                assert_eq!(support, expected, "q = {q}, packet {}", packet.label);
                assert!(support.iter().all(|occ| occ.all_even()));
            }
        }
    }

    #[test]
    fn odd_codewords_are_shift_translates() {
        for q in [3u32, 5, 7, 9] {
            let cb = build(q).unwrap();
            for r in 0..q {
                assert_eq!(
                    cb.codewords()[r as usize],
                    cyclic_shift(&cb.codewords()[0], r)
                );
            }
        }
    }

    #[test]
    fn word_notation_normalization_identity() {
        // The seed's edge amplitude written against unnormalized word sums is
        // 1/sqrt(3q); against normalized occupation states it is sqrt(2/q).
        // These agree because |2e_i + 2e_j> carries sqrt(6) words:
        // (1/sqrt(3q)) * sqrt(6) = sqrt(2/q).
        for q in [3i64, 5, 7, 9, 11] {
            let lhs = &RadicalScalar::sqrt_of_rational(&rat(1, 3 * q)).unwrap()
                * &RadicalScalar::sqrt_of_rational(&rat(6, 1)).unwrap();
            let rhs = RadicalScalar::sqrt_of_rational(&rat(2, q)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn pairwise_orthogonality() {
        for q in 2..=8u32 {
            let cb = build(q).unwrap();
            for i in 0..cb.codewords().len() {
                for j in 0..i {
                    assert!(cb.codewords()[i].inner(&cb.codewords()[j]).is_zero());
                }
            }
        }
    }
}
