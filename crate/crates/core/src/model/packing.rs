use super::cycle::Cycle;
use super::edges::{EdgeMultiset, GraphSpec};
use super::vertex::Vertex;
use crate::error::{Error, Result};

/// Edge-disjoint cycles of λK_{v,u} together with the unused edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packing {
    pub spec: GraphSpec,
    pub cycles: Vec<Cycle>,
    pub leave: EdgeMultiset,
}

impl Packing {
    /// Packing with no cycles; the leave is the whole graph.
    pub fn empty(spec: GraphSpec) -> Self {
        Packing {
            spec,
            cycles: Vec::new(),
            leave: EdgeMultiset::complete(&spec),
        }
    }

    pub fn from_cycles(spec: GraphSpec, cycles: Vec<Cycle>) -> Result<Self> {
        let leave = compute_leave(&spec, &cycles)?;
        Ok(Packing {
            spec,
            cycles,
            leave,
        })
    }

    pub fn is_decomposition(&self) -> bool {
        self.leave.is_empty()
    }

    /// Sorted multiset of packed cycle lengths.
    pub fn lengths(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.cycles.iter().map(|c| c.len() as u32).collect();
        v.sort_unstable();
        v
    }

    /// Moves the cycles at `indices` into the leave, preserving the order of the rest.
    pub fn release(&self, indices: &[usize]) -> Packing {
        let mut out = self.clone();
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in sorted.iter().rev() {
            let c = out.cycles.remove(i);
            for (l, r) in c.edges() {
                out.leave.add(Vertex::left(l), Vertex::right(r), 1);
            }
        }
        out
    }

    /// Adds `cycle` to the packing, taking its edges out of the leave.
    pub fn absorb(&mut self, cycle: Cycle) -> Result<()> {
        let mut leave = self.leave.clone();
        for (l, r) in cycle.edges() {
            if !leave.remove(Vertex::left(l), Vertex::right(r), 1) {
                return Err(Error::Overfull {
                    left: Vertex::left(l),
                    right: Vertex::right(r),
                    needed: self.spec.lambda + 1,
                    lambda: self.spec.lambda,
                });
            }
        }
        self.leave = leave;
        self.cycles.push(cycle);
        Ok(())
    }

    /// Swaps the roles of the two parts.
    pub fn mirrored(&self) -> Packing {
        let spec = self.spec.mirrored();
        let cycles = self.cycles.iter().map(Cycle::mirrored).collect();
        let mut leave = EdgeMultiset::empty(spec.v, spec.u);
        for (a, b, m) in self.leave.pairs() {
            leave.add(a.mirrored(), b.mirrored(), m);
        }
        Packing {
            spec,
            cycles,
            leave,
        }
    }
}

/// λ copies of every cross pair minus the edges used by `cycles`.
pub fn compute_leave(spec: &GraphSpec, cycles: &[Cycle]) -> Result<EdgeMultiset> {
    let mut leave = EdgeMultiset::complete(spec);
    let mut used = EdgeMultiset::empty(spec.v, spec.u);
    for c in cycles {
        if let Some(&x) = c.iter().find(|x| !spec.contains(**x)) {
            return Err(Error::Input(format!("vertex {x} is outside {spec}")));
        }
        for (l, r) in c.edges() {
            used.add(Vertex::left(l), Vertex::right(r), 1);
        }
    }
    for (a, b, m) in used.pairs() {
        if m > spec.lambda {
            return Err(Error::Overfull {
                left: a,
                right: b,
                needed: m,
                lambda: spec.lambda,
            });
        }
        leave.remove(a, b, m);
    }
    Ok(leave)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(raw: &[(bool, u32)]) -> Cycle {
        Cycle::new(
            raw.iter()
                .map(|&(l, i)| if l { Vertex::left(i) } else { Vertex::right(i) })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn k22_is_one_four_cycle() {
        let spec = GraphSpec::new(1, 2, 2).unwrap();
        let leave = compute_leave(&spec, &[c(&[(true, 0), (false, 0), (true, 1), (false, 1)])]).unwrap();
        assert!(leave.is_empty());
    }

    #[test]
    fn no_cycles_leaves_everything() {
        let spec = GraphSpec::new(2, 2, 2).unwrap();
        let leave = compute_leave(&spec, &[]).unwrap();
        assert_eq!(leave.size(), 8);
        assert!(leave.pairs().all(|(_, _, m)| m == 2));
    }

    #[test]
    fn overfull_pair_is_rejected() {
        let spec = GraphSpec::new(1, 2, 2).unwrap();
        let cycles = [
            c(&[(true, 0), (false, 0), (true, 1), (false, 1)]),
            c(&[(true, 0), (false, 0)]),
        ];
        assert!(matches!(
            compute_leave(&spec, &cycles),
            Err(Error::Overfull { needed: 3, .. })
        ));
    }

    #[test]
    fn release_and_absorb_round_trip() {
        let spec = GraphSpec::new(2, 2, 2).unwrap();
        let cyc = c(&[(true, 0), (false, 0), (true, 1), (false, 1)]);
        let p = Packing::from_cycles(spec, vec![cyc.clone(), cyc.clone()]).unwrap();
        assert!(p.is_decomposition());
        let mut q = p.release(&[1]);
        assert_eq!(q.leave.size(), 4);
        q.absorb(cyc).unwrap();
        assert_eq!(q, p);
    }
}
