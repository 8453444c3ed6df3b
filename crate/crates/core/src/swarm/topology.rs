use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopologyKind {
    /// Each particle sees `neighbors` others on a ring: `neighbors / 2`
    /// predecessors and the rest successors.
    Ring {
        neighbors: usize,
    },
    FullyConnected,
    /// The hub sees everyone; every other particle sees only itself and the hub.
    Wheel {
        hub: usize,
    },
}

/// Neighbourhood lists for a fixed swarm size. Each list starts with the
/// particle itself, so earlier entries win ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    kind: TopologyKind,
    size: usize,
    neighborhoods: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new(kind: TopologyKind, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidConfig("swarm size must be positive".into()));
        }
        let neighborhoods = match kind {
            TopologyKind::Ring { neighbors } => {
                if neighbors + 1 > size {
                    return Err(Error::InvalidConfig(format!(
                        "ring with {neighbors} neighbours needs at least {} particles, got {size}",
                        neighbors + 1
                    )));
                }
                let before = neighbors / 2;
                let after = neighbors - before;
                (0..size)
                    .map(|i| {
                        let mut n = vec![i];
                        n.extend((1..=before).map(|d| (i + size - d) % size));
                        n.extend((1..=after).map(|d| (i + d) % size));
                        n
                    })
                    .collect()
            }
            TopologyKind::FullyConnected => {
                (0..size).map(|i| std::iter::once(i).chain((0..size).filter(|&j| j != i)).collect()).collect()
            }
            TopologyKind::Wheel { hub } => {
                if hub >= size {
                    return Err(Error::InvalidConfig(format!("wheel hub {hub} outside swarm of {size}")));
                }
                (0..size)
                    .map(|i| {
                        if i == hub {
                            std::iter::once(i).chain((0..size).filter(|&j| j != i)).collect()
                        } else {
                            vec![i, hub]
                        }
                    })
                    .collect()
            }
        };
        Ok(Topology { kind, size, neighborhoods })
    }

    /// Topology for `nn` neighbours excluding self: a ring, or fully
    /// connected once the ring would cover the whole swarm.
    pub fn from_nn(nn: usize, size: usize) -> Result<Self> {
        if nn + 1 > size {
            return Err(Error::InvalidConfig(format!("nn = {nn} needs at least {} particles, got {size}", nn + 1)));
        }
        if nn + 1 == size {
            Self::new(TopologyKind::FullyConnected, size)
        } else {
            Self::new(TopologyKind::Ring { neighbors: nn }, size)
        }
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `i` followed by its neighbours.
    pub fn neighborhood(&self, i: usize) -> &[usize] {
        &self.neighborhoods[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(v: &[usize]) -> Vec<usize> {
        let mut v = v.to_vec();
        v.sort_unstable();
        v
    }

    #[test]
    fn ring_of_three_wraps() {
        let t = Topology::new(TopologyKind::Ring { neighbors: 2 }, 5).unwrap();
        assert_eq!(sorted(t.neighborhood(0)), vec![0, 1, 4]);
        assert_eq!(t.neighborhood(0)[0], 0);
    }

    #[test]
    fn ring_of_eleven_is_five_each_side() {
        let t = Topology::from_nn(10, 40).unwrap();
        assert_eq!(sorted(t.neighborhood(20)), (15..=25).collect::<Vec<_>>());
    }

    #[test]
    fn odd_neighbour_count_favours_successors() {
        let t = Topology::new(TopologyKind::Ring { neighbors: 3 }, 10).unwrap();
        assert_eq!(sorted(t.neighborhood(5)), vec![4, 5, 6, 7]);
    }

    #[test]
    fn full_neighbourhood_covers_swarm() {
        let t = Topology::from_nn(19, 20).unwrap();
        assert_eq!(t.kind(), TopologyKind::FullyConnected);
        for i in 0..20 {
            assert_eq!(t.neighborhood(i).len(), 20);
            assert_eq!(t.neighborhood(i)[0], i);
        }
    }

    #[test]
    fn wheel_spokes_see_hub() {
        let t = Topology::new(TopologyKind::Wheel { hub: 0 }, 6).unwrap();
        assert_eq!(t.neighborhood(3), &[3, 0]);
        assert_eq!(t.neighborhood(0).len(), 6);
    }

    #[test]
    fn oversized_neighbourhood_rejected() {
        assert!(Topology::from_nn(20, 20).is_err());
        assert!(Topology::new(TopologyKind::Wheel { hub: 7 }, 5).is_err());
    }
}
