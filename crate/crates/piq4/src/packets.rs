//! Vertex/edge packets of the complete graph `K_q`.
//!
//! The even-entry occupation layer of `Sym^4(C^q)` is identified with
//! `V(K_q) + E(K_q)`: a vertex `i` stands for `4e_i` and an edge `{i,j}` for
//! `2e_i + 2e_j`. Codeword supports are disjoint packets of this set, built
//! by the midpoint rule for odd `q` and by the round-robin one-factorization
//! for even `q`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::sym::OccupationVector;

/// A vertex or edge of `K_q`; edges are stored with the smaller endpoint
/// first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KqElement {
    Vertex(u32),
    Edge(u32, u32),
}

impl KqElement {
    /// Canonicalizing edge constructor.
    pub fn edge(i: u32, j: u32) -> Self {
        assert_ne!(i, j, "an edge needs two distinct endpoints");
        Self::Edge(i.min(j), i.max(j))
    }

    /// The even-entry occupation vector this element stands for.
    pub fn to_occupation(&self, q: u32) -> OccupationVector {
        match *self {
            Self::Vertex(i) => OccupationVector::single(q, i, 4),
            Self::Edge(i, j) => {
                let mut counts = vec![0; q as usize];
                counts[i as usize] = 2;
                counts[j as usize] = 2;
                OccupationVector::new(counts)
            }
        }
    }
}

impl fmt::Display for KqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vertex(i) => write!(f, "V({i})"),
            Self::Edge(i, j) => write!(f, "E({i},{j})"),
        }
    }
}

/// A labeled set of vertices and edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub label: u32,
    pub elements: BTreeSet<KqElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// The `q` disjoint packets covering `V(K_q) + E(K_q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PacketFamily {
    q: u32,
    parity: Parity,
    packets: Vec<Packet>,
}

impl PacketFamily {
    /// Assembles a family without structural checks; run [`validate_family`]
    /// to test it. Useful for exercising the validator on corrupted input.
    pub fn from_parts(q: u32, parity: Parity, packets: Vec<Packet>) -> Self {
        Self { q, parity, packets }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn packets(&self) -> &[Packet] {
        &self.packets
    }
}

/// For odd `q`: packet `r` holds the vertex `r` together with the edges whose
/// endpoint sum is `2r (mod q)`, a near-perfect matching on the remaining
/// `q - 1` vertices.
pub fn midpoint_packets(q: u32) -> Result<PacketFamily> {
    if q.is_multiple_of(2) {
        return Err(Error::ExpectedOddQ(q));
    }
    if q < 3 {
        return Err(Error::QTooSmall(q));
    }
    let packets = (0..q)
        .map(|r| {
            let mut elements = BTreeSet::new();
            elements.insert(KqElement::Vertex(r));
            for i in 1..=(q - 1) / 2 {
                elements.insert(KqElement::edge((r + i) % q, (r + q - i) % q));
            }
            Packet { label: r, elements }
        })
        .collect();
    Ok(PacketFamily {
        q,
        parity: Parity::Odd,
        packets,
    })
}

/// For even `q`: packets `0..q-1` are the perfect matchings of the
/// round-robin one-factorization (fixed point `q - 1`, rotation modulo
/// `q - 1`), and packet `q - 1` collects all `q` vertices.
pub fn round_robin_packets(q: u32) -> Result<PacketFamily> {
    if q % 2 == 1 {
        return Err(Error::ExpectedEvenQ(q));
    }
    if q < 2 {
        return Err(Error::QTooSmall(q));
    }
    let modulus = q - 1;
    let mut packets: Vec<Packet> = (0..modulus)
        .map(|r| {
            let mut elements = BTreeSet::new();
            elements.insert(KqElement::edge(r, q - 1));
            for i in 1..=q / 2 - 1 {
                elements.insert(KqElement::edge(
                    (r + i) % modulus,
                    (r + modulus - i) % modulus,
                ));
            }
            Packet { label: r, elements }
        })
        .collect();
    packets.push(Packet {
        label: q - 1,
        elements: (0..q).map(KqElement::Vertex).collect(),
    });
    Ok(PacketFamily {
        q,
        parity: Parity::Even,
        packets,
    })
}

/// One structural defect found by [`validate_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationIssue {
    /// The same element appears in two packets.
    DuplicateElement {
        element: KqElement,
        packets: (u32, u32),
    },
    /// A vertex or edge of `K_q` is covered by no packet.
    MissingElement { element: KqElement },
    /// Two edges inside one packet share an endpoint.
    OverlappingEdges {
        packet: u32,
        first: KqElement,
        second: KqElement,
    },
    /// An odd packet does not consist of exactly its own vertex plus a
    /// matching omitting that vertex.
    BadOddPacket { packet: u32, detail: String },
    /// An even edge packet is not a perfect matching, or the vertex packet
    /// is not exactly all vertices.
    BadEvenPacket { packet: u32, detail: String },
    /// An element references a vertex outside `0..q`.
    OutOfRange { packet: u32, element: KqElement },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::DuplicateElement { element, packets } => write!(
                f,
                "{element} appears in packets {} and {}",
                packets.0, packets.1
            ),
            Self::MissingElement { element } => write!(f, "{element} is covered by no packet"),
            Self::OverlappingEdges {
                packet,
                first,
                second,
            } => write!(f, "packet {packet}: {first} and {second} share an endpoint"),
            Self::BadOddPacket { packet, detail } => write!(f, "packet {packet}: {detail}"),
            Self::BadEvenPacket { packet, detail } => write!(f, "packet {packet}: {detail}"),
            Self::OutOfRange { packet, element } => {
                write!(f, "packet {packet}: {element} is out of range")
            }
        }
    }
}

/// Outcome of the structural checks; failures are collected, not thrown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub q: u32,
    pub parity: Parity,
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Checks that a family is pairwise disjoint, covers every vertex and edge of
/// `K_q` exactly once, and has the parity-appropriate matching structure:
/// odd packets are a vertex plus a near-perfect matching omitting it; even
/// families consist of `q - 1` perfect matchings plus the full vertex packet.
pub fn validate_family(family: &PacketFamily) -> ValidationReport {
    let q = family.q;
    let mut issues = Vec::new();

    // Range, duplicates, coverage.
    let mut seen: BTreeMap<KqElement, u32> = BTreeMap::new();
    for packet in &family.packets {
        for element in &packet.elements {
            let in_range = match *element {
                KqElement::Vertex(i) => i < q,
                KqElement::Edge(i, j) => i < j && j < q,
            };
            if !in_range {
                issues.push(ValidationIssue::OutOfRange {
                    packet: packet.label,
                    element: *element,
                });
                continue;
            }
            if let Some(prev) = seen.insert(*element, packet.label) {
                issues.push(ValidationIssue::DuplicateElement {
                    element: *element,
                    packets: (prev, packet.label),
                });
            }
        }
    }
    for i in 0..q {
        let v = KqElement::Vertex(i);
        if !seen.contains_key(&v) {
            issues.push(ValidationIssue::MissingElement { element: v });
        }
        for j in i + 1..q {
            let e = KqElement::Edge(i, j);
            if !seen.contains_key(&e) {
                issues.push(ValidationIssue::MissingElement { element: e });
            }
        }
    }

    // Per-packet matching structure.
    for packet in &family.packets {
        let vertices: Vec<u32> = packet
            .elements
            .iter()
            .filter_map(|e| match e {
                KqElement::Vertex(i) => Some(*i),
                KqElement::Edge(..) => None,
            })
            .collect();
        let edges: Vec<(u32, u32)> = packet
            .elements
            .iter()
            .filter_map(|e| match e {
                KqElement::Edge(i, j) => Some((*i, *j)),
                KqElement::Vertex(_) => None,
            })
            .collect();

        let mut covered = BTreeSet::new();
        for (idx, &(i, j)) in edges.iter().enumerate() {
            let fresh_i = covered.insert(i);
            let fresh_j = covered.insert(j);
            if !fresh_i || !fresh_j {
                let clash = edges[..idx]
                    .iter()
                    .find(|&&(a, b)| a == i || b == i || a == j || b == j)
                    .copied()
                    .unwrap_or((i, j));
                issues.push(ValidationIssue::OverlappingEdges {
                    packet: packet.label,
                    first: KqElement::Edge(clash.0, clash.1),
                    second: KqElement::Edge(i, j),
                });
            }
        }

        match family.parity {
            Parity::Odd => {
                if vertices != [packet.label] {
                    issues.push(ValidationIssue::BadOddPacket {
                        packet: packet.label,
                        detail: format!("expected exactly V({}), found {vertices:?}", packet.label),
                    });
                }
                if edges.len() as u32 != (q - 1) / 2 || covered.contains(&packet.label) {
                    issues.push(ValidationIssue::BadOddPacket {
                        packet: packet.label,
                        detail: format!(
                            "edges must form a near-perfect matching omitting vertex {}",
                            packet.label
                        ),
                    });
                }
            }
            Parity::Even => {
                if packet.label == q - 1 {
                    if !edges.is_empty() || vertices.len() as u32 != q {
                        issues.push(ValidationIssue::BadEvenPacket {
                            packet: packet.label,
                            detail: "vertex packet must hold all q vertices and no edges".into(),
                        });
                    }
                } else if !vertices.is_empty() || covered.len() as u32 != q {
                    issues.push(ValidationIssue::BadEvenPacket {
                        packet: packet.label,
                        detail: "edge packet must be a perfect matching on all q vertices".into(),
                    });
                }
            }
        }
    }

    ValidationReport {
        q,
        parity: family.parity,
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edges_of(packet: &Packet) -> Vec<(u32, u32)> {
        packet
            .elements
            .iter()
            .filter_map(|e| match e {
                KqElement::Edge(i, j) => Some((*i, *j)),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn midpoint_q3_matches_known_packets() {
        let family = midpoint_packets(3).unwrap();
        let expected: [&[KqElement]; 3] = [
            &[KqElement::Vertex(0), KqElement::Edge(1, 2)],
            &[KqElement::Vertex(1), KqElement::Edge(0, 2)],
            &[KqElement::Vertex(2), KqElement::Edge(0, 1)],
        ];
        for (packet, want) in family.packets().iter().zip(expected) {
            assert_eq!(
                packet.elements.iter().copied().collect::<Vec<_>>(),
                want.to_vec()
            );
        }
    }

    #[test]
    fn midpoint_q5_packet_zero() {
        let family = midpoint_packets(5).unwrap();
        let p0: Vec<KqElement> = family.packets()[0].elements.iter().copied().collect();
        assert_eq!(
            p0,
            vec![
                KqElement::Vertex(0),
                KqElement::Edge(1, 4),
                KqElement::Edge(2, 3)
            ]
        );
    }

    #[test]
    fn midpoint_edge_lands_in_unique_packet() {
        // {1,2} has 1+2 = 3 = 2*4 (mod 5), so it sits in packet 4 only.
        let family = midpoint_packets(5).unwrap();
        let holders: Vec<u32> = family
            .packets()
            .iter()
            .filter(|p| p.elements.contains(&KqElement::Edge(1, 2)))
            .map(|p| p.label)
            .collect();
        assert_eq!(holders, vec![4]);
    }

    #[test]
    fn midpoint_rejects_even_q() {
        assert_eq!(midpoint_packets(4), Err(Error::ExpectedOddQ(4)));
    }

    #[test]
    fn round_robin_q4_matches_known_factorization() {
        let family = round_robin_packets(4).unwrap();
        assert_eq!(edges_of(&family.packets()[0]), vec![(0, 3), (1, 2)]);
        assert_eq!(edges_of(&family.packets()[1]), vec![(0, 2), (1, 3)]);
        assert_eq!(edges_of(&family.packets()[2]), vec![(0, 1), (2, 3)]);
        let vertex_packet: Vec<KqElement> = family.packets()[3].elements.iter().copied().collect();
        assert_eq!(
            vertex_packet,
            (0..4).map(KqElement::Vertex).collect::<Vec<_>>()
        );
    }

    #[test]
    fn round_robin_q2_degenerate_case() {
        let family = round_robin_packets(2).unwrap();
        assert_eq!(edges_of(&family.packets()[0]), vec![(0, 1)]);
        assert_eq!(family.packets()[1].elements.len(), 2);
        assert!(validate_family(&family).is_valid());
    }

    #[test]
    fn round_robin_q6_packet_zero() {
        let family = round_robin_packets(6).unwrap();
        assert_eq!(edges_of(&family.packets()[0]), vec![(0, 5), (1, 4), (2, 3)]);
    }

    #[test]
    fn round_robin_rejects_odd_q() {
        assert_eq!(round_robin_packets(5), Err(Error::ExpectedEvenQ(5)));
    }

    #[test]
    fn generated_families_validate() {
        assert!(validate_family(&midpoint_packets(7).unwrap()).is_valid());
        assert!(validate_family(&round_robin_packets(8).unwrap()).is_valid());
    }

    #[test]
    fn duplicated_edge_is_reported_by_name() {
        let mut family = midpoint_packets(5).unwrap();
        let stray = KqElement::Edge(1, 4); // already lives in packet 0
        let mut packets = family.packets.clone();
        packets[2].elements.insert(stray);
        family = PacketFamily::from_parts(5, Parity::Odd, packets);
        let report = validate_family(&family);
        assert!(!report.is_valid());
        assert!(report.issues.iter().any(|issue| matches!(
            issue,
            ValidationIssue::DuplicateElement { element, packets: (0, 2) } if *element == stray
        )));
    }

    #[test]
    fn occupation_images_lie_in_even_layer() {
        for q in 2..=9u32 {
            let all = (0..q)
                .map(KqElement::Vertex)
                .chain((0..q).flat_map(|i| (i + 1..q).map(move |j| KqElement::Edge(i, j))));
            for element in all {
                let occ = element.to_occupation(q);
                assert_eq!(occ.n(), 4);
                assert!(occ.all_even());
            }
        }
    }

    #[test]
    fn packet_sizes_and_edge_counts() {
        for q in (3..=15u32).step_by(2) {
            let family = midpoint_packets(q).unwrap();
            for packet in family.packets() {
                assert_eq!(packet.elements.len() as u32, 1 + (q - 1) / 2);
            }
        }
        for q in (2..=16u32).step_by(2) {
            let family = round_robin_packets(q).unwrap();
            for packet in family.packets().iter().take((q - 1) as usize) {
                assert_eq!(packet.elements.len() as u32, q / 2);
            }
        }
    }
}
