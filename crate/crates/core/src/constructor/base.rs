use crate::error::{Error, Result};
use crate::model::{Cycle, EdgeMultiset, GraphSpec, LengthSeq, Packing, Vertex};
use crate::oracle::{decompose_residual, Budget, Decision};

/// x_{2j} = L_j, x_{2j+1} = R_j.
fn x(i: u32) -> Vertex {
    if i % 2 == 0 {
        Vertex::left(i / 2)
    } else {
        Vertex::right(i / 2)
    }
}

fn cycle_on(indices: &[u32]) -> Cycle {
    Cycle::new(indices.iter().map(|&i| x(i)).collect()).expect("laid-out cycles alternate")
}

/// Appends 2-cycles covering what `cycles` leave of λK_{v,u}.
fn fill_two_cycles(spec: GraphSpec, mut cycles: Vec<Cycle>) -> Result<Packing> {
    let leave = Packing::from_cycles(spec, cycles.clone())?.leave;
    for (a, b, m) in leave.pairs() {
        if m % 2 == 1 {
            return Err(Error::NotEven(a, m));
        }
        for _ in 0..m / 2 {
            cycles.push(Cycle::new(vec![a, b])?);
        }
    }
    Packing::from_cycles(spec, cycles)
}

/// One m_t-cycle, (m_t−2)/2 4-cycles through x_0, and 2-cycles on everything else.
pub fn base_even(spec: &GraphSpec, m_t: u32) -> Result<Packing> {
    if spec.lambda % 2 == 1 {
        return Err(Error::Input(format!("base_even needs even lambda, got {}", spec.lambda)));
    }
    let cap = 2 * spec.v.min(spec.u);
    if m_t % 2 == 1 || m_t < 2 || m_t > cap {
        return Err(Error::Input(format!("m_t = {m_t} must be even in [2, {cap}]")));
    }
    let all: Vec<u32> = (0..m_t).collect();
    let mut cycles = vec![cycle_on(&all)];
    for k in 1..=(m_t - 2) / 2 {
        cycles.push(cycle_on(&[0, 2 * k - 1, 2 * k, 2 * k + 1]));
    }
    fill_two_cycles(*spec, cycles)
}

/// One m_t-cycle C and a fan of polygons from x_0 dissecting C, with 2-cycles
/// on everything else. The polygon sizes must be even, at least 4, and satisfy
/// Σ(p − 2) = m_t − 2; the fan of (m_t−2)/2 4-cycles is [`base_even`].
pub fn base_dissected(spec: &GraphSpec, m_t: u32, polygons: &[u32]) -> Result<Packing> {
    if spec.lambda % 2 == 1 {
        return Err(Error::Input(format!("dissected base needs even lambda, got {}", spec.lambda)));
    }
    fill_two_cycles(*spec, dissection_cycles(spec, m_t, polygons)?)
}

fn dissection_cycles(spec: &GraphSpec, m_t: u32, polygons: &[u32]) -> Result<Vec<Cycle>> {
    let cap = 2 * spec.v.min(spec.u);
    if m_t % 2 == 1 || m_t < 2 || m_t > cap {
        return Err(Error::Input(format!("m_t = {m_t} must be even in [2, {cap}]")));
    }
    if polygons.iter().any(|&p| p < 4 || p % 2 == 1) {
        return Err(Error::Input(format!("polygon sizes {polygons:?} must be even and at least 4")));
    }
    let excess: u32 = polygons.iter().map(|p| p - 2).sum();
    if excess != m_t - 2 {
        return Err(Error::Input(format!(
            "polygons {polygons:?} have excess {excess}, need m_t - 2 = {}",
            m_t - 2
        )));
    }
    let all: Vec<u32> = (0..m_t).collect();
    let mut cycles = vec![cycle_on(&all)];
    let mut a = 1;
    for &p in polygons {
        let b = a + p - 2;
        let mut idx = vec![0];
        idx.extend(a..=b);
        cycles.push(cycle_on(&idx));
        a = b;
    }
    Ok(cycles)
}

/// For odd λ ≥ 3: a simple layer decomposed into `layer`, a dissected m_t-cycle
/// in two further copies, and 2-cycles on the rest.
pub fn base_mixed(
    spec: &GraphSpec,
    layer: &LengthSeq,
    m_t: u32,
    polygons: &[u32],
    budget: &Budget,
) -> Result<Packing> {
    if spec.lambda % 2 == 0 || spec.lambda < 3 {
        return Err(Error::Input(format!("mixed base needs odd lambda >= 3, got {}", spec.lambda)));
    }
    check_layer(spec, layer)?;
    let mut cycles = dissection_cycles(spec, m_t, polygons)?;
    cycles.extend(simple_base(spec.v, spec.u, layer, false, budget)?.cycles);
    fill_two_cycles(*spec, cycles)
}

fn check_layer(spec: &GraphSpec, layer: &LengthSeq) -> Result<()> {
    let (Some(top), Some(next)) = (layer.last(), layer.second_last()) else {
        return Err(Error::Input("layer needs at least two cycles".into()));
    };
    if top > spec.v.min(spec.u).min(3 * next) {
        return Err(Error::Input(format!(
            "layer maximum {top} exceeds min(v, u, 3*{next})"
        )));
    }
    Ok(())
}

/// Base for odd λ: a simple layer holding the 4-cycles, m_{t−1} and m_t, plus 2-cycles.
pub fn base_odd(spec: &GraphSpec, m_t: u32, m_prev: u32, budget: &Budget) -> Result<Packing> {
    let GraphSpec { lambda, v, u } = *spec;
    if lambda % 2 == 0 {
        return Err(Error::Input(format!("base_odd needs odd lambda, got {lambda}")));
    }
    if v % 2 == 1 || u % 2 == 1 {
        return Err(Error::Input(format!("v = {v} and u = {u} must both be even")));
    }
    if m_t % 2 == 1 || m_prev % 2 == 1 || m_prev < 4 || m_prev > m_t {
        return Err(Error::Input(format!(
            "need even 4 <= m_(t-1) <= m_t, got ({m_prev}, {m_t})"
        )));
    }
    if m_t > v.min(u).min(3 * m_prev) {
        return Err(Error::Input(format!(
            "m_t = {m_t} exceeds min(v, u, 3*m_(t-1)) = {}",
            v.min(u).min(3 * m_prev)
        )));
    }
    let rest = (v * u)
        .checked_sub(m_t + m_prev)
        .ok_or_else(|| Error::Input("m_(t-1)+m_t exceeds vu".into()))?;
    if rest % 4 == 0 {
        let mut lengths = vec![4; (rest / 4) as usize];
        lengths.extend([m_prev, m_t]);
        let layer = simple_base(v, u, &LengthSeq::new(lengths)?, false, budget)?;
        return fill_two_cycles(*spec, layer.cycles);
    }
    if lambda == 1 {
        return Err(Error::BaseUnavailable(format!(
            "vu - m_t - m_(t-1) = {rest} is not divisible by 4 and lambda = 1 has no second layer"
        )));
    }
    if rest < 6 {
        return Err(Error::BaseUnavailable(format!(
            "vu - m_t - m_(t-1) = {rest} leaves no room for a 6-cycle leave"
        )));
    }
    let mut lengths = vec![4; ((rest - 6) / 4) as usize];
    lengths.extend([m_prev, m_t]);
    let layer = simple_base(v, u, &LengthSeq::new(lengths)?, true, budget)?;
    let mut cycles = layer.cycles;
    cycles.push(cycle_on(&[0, 1, 2, 3]));
    cycles.push(cycle_on(&[0, 3, 4, 5]));
    fill_two_cycles(*spec, cycles)
}

/// A simple layer decomposed into `layer` plus 2-cycles on the remaining λ−1
/// copies; λ must be odd. The layer is found by search, so its lengths need not
/// stay within min(v, u).
pub fn base_layered(spec: &GraphSpec, layer: &LengthSeq, budget: &Budget) -> Result<Packing> {
    if spec.lambda % 2 == 0 {
        return Err(Error::Input(format!("layered base needs odd lambda, got {}", spec.lambda)));
    }
    let simple = simple_base(spec.v, spec.u, layer, false, budget)?;
    fill_two_cycles(*spec, simple.cycles)
}

/// Packing of K_{v,u} with the given lengths, all at least 4, leaving either
/// nothing or the 6-cycle (x_0, …, x_5).
pub fn simple_base(v: u32, u: u32, m: &LengthSeq, leave6: bool, budget: &Budget) -> Result<Packing> {
    let spec = GraphSpec::new(1, v, u)?;
    let hole = if leave6 { 6 } else { 0 };
    if m.sum() + hole != (v * u) as u64 {
        return Err(Error::Input(format!(
            "sum(M') = {} plus leave {hole} != vu = {}",
            m.sum(),
            v * u
        )));
    }
    if m.lengths().iter().any(|&k| k < 4) {
        return Err(Error::Input(format!("M' = {m} has a length below 4")));
    }
    if leave6 && v.min(u) < 3 {
        return Err(Error::Input("a 6-cycle leave needs both parts of size at least 3".into()));
    }
    if !leave6 && v % 2 == 0 && u % 2 == 0 && m.lengths().iter().all(|&k| k == 4) {
        let mut cycles = Vec::new();
        for i in 0..v / 2 {
            for j in 0..u / 2 {
                cycles.push(Cycle::new(vec![
                    Vertex::left(2 * i),
                    Vertex::right(2 * j),
                    Vertex::left(2 * i + 1),
                    Vertex::right(2 * j + 1),
                ])?);
            }
        }
        return Packing::from_cycles(spec, cycles);
    }
    let mut residual = EdgeMultiset::complete(&spec);
    if leave6 {
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)] {
            residual.remove(x(a), x(b), 1);
        }
    }
    match decompose_residual(&residual, m.lengths(), budget) {
        Decision::Exists(cycles) => Packing::from_cycles(spec, cycles),
        Decision::NotExists(stats) => Err(Error::BaseUnavailable(format!(
            "no ({m}) packing of K_{{{v},{u}}} found ({stats})"
        ))),
        Decision::Timeout(stats) => Err(Error::BaseUnavailable(format!(
            "search for ({m}) packing of K_{{{v},{u}}} timed out ({stats})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{verify_decomposition, verify_packing};

    fn spec(l: u32, v: u32, u: u32) -> GraphSpec {
        GraphSpec::new(l, v, u).unwrap()
    }

    fn seq(v: &[u32]) -> LengthSeq {
        LengthSeq::new(v.to_vec()).unwrap()
    }

    fn cyc(v: &[(char, u32)]) -> Cycle {
        let raw = v
            .iter()
            .map(|&(s, i)| if s == 'L' { Vertex::left(i) } else { Vertex::right(i) })
            .collect();
        Cycle::new(raw).unwrap()
    }

    #[test]
    fn base_even_on_2k33() {
        let s = spec(2, 3, 3);
        let p = base_even(&s, 6).unwrap();
        let expected = vec![
            cyc(&[('L', 0), ('R', 0), ('L', 1), ('R', 1), ('L', 2), ('R', 2)]),
            cyc(&[('L', 0), ('R', 0), ('L', 1), ('R', 1)]),
            cyc(&[('L', 0), ('R', 1), ('L', 2), ('R', 2)]),
            cyc(&[('L', 1), ('R', 2)]),
            cyc(&[('L', 2), ('R', 0)]),
        ];
        assert_eq!(p.cycles, expected);
        let m = seq(&[2, 2, 4, 4, 6]);
        assert!(verify_decomposition(&s, &p.cycles, &m).is_valid());
    }

    #[test]
    fn base_even_degenerate_and_errors() {
        let p = base_even(&spec(2, 2, 2), 2).unwrap();
        assert_eq!(p.lengths(), vec![2, 2, 2, 2]);
        assert!(matches!(base_even(&spec(2, 3, 3), 7), Err(Error::Input(_))));
        assert!(matches!(base_even(&spec(2, 3, 3), 8), Err(Error::Input(_))));
        assert!(matches!(base_even(&spec(3, 4, 4), 4), Err(Error::Input(_))));
    }

    #[test]
    fn dissected_base_generalizes_the_fan() {
        let s = spec(2, 6, 6);
        assert_eq!(base_dissected(&s, 10, &[4, 4, 4, 4]).unwrap(), base_even(&s, 10).unwrap());
        let p = base_dissected(&s, 6, &[6]).unwrap();
        let mut m = vec![2; 30];
        m.extend([6, 6]);
        assert!(verify_decomposition(&s, &p.cycles, &seq(&m)).is_valid());
        let p = base_dissected(&s, 10, &[6, 4, 4]).unwrap();
        assert!(verify_packing(&p).is_valid() && p.is_decomposition());
        assert!(matches!(base_dissected(&s, 10, &[6, 4]), Err(Error::Input(_))));
    }

    #[test]
    fn simple_base_grid_and_search() {
        let b = Budget::seconds(10.0);
        let p = simple_base(4, 4, &seq(&[4, 4, 4, 4]), false, &b).unwrap();
        assert!(p.is_decomposition());
        assert!(verify_packing(&p).is_valid());
        let p = simple_base(6, 6, &seq(&[6; 6]), false, &b).unwrap();
        assert!(verify_decomposition(&spec(1, 6, 6), &p.cycles, &seq(&[6; 6])).is_valid());
        let bad = simple_base(6, 6, &seq(&[4, 4, 4, 4]), true, &b);
        assert!(matches!(bad, Err(Error::Input(_))));
    }

    #[test]
    fn simple_base_with_six_cycle_leave() {
        let p = simple_base(4, 4, &seq(&[4, 6]), true, &Budget::seconds(10.0)).unwrap();
        assert_eq!(p.leave.size(), 6);
        assert!(verify_packing(&p).is_valid());
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)] {
            assert_eq!(p.leave.mult(x(a), x(b)), 1);
        }
    }

    #[test]
    fn base_odd_divisible_branch() {
        let s = spec(3, 6, 6);
        let p = base_odd(&s, 6, 6, &Budget::seconds(30.0)).unwrap();
        let mut m = vec![2; 36];
        m.extend([4, 4, 4, 4, 4, 4, 6, 6]);
        assert!(verify_decomposition(&s, &p.cycles, &seq(&m)).is_valid());
        let p = base_odd(&spec(3, 2, 2), 4, 4, &Budget::seconds(1.0));
        assert!(matches!(p, Err(Error::Input(_))));
    }

    #[test]
    fn layered_base_takes_any_layer() {
        let s = spec(3, 6, 6);
        let p = base_layered(&s, &seq(&[6; 6]), &Budget::seconds(30.0)).unwrap();
        let mut m = vec![2; 36];
        m.extend([6; 6]);
        assert!(verify_decomposition(&s, &p.cycles, &seq(&m)).is_valid());
        let long = base_layered(&s, &seq(&[4, 4, 4, 4, 4, 4, 4, 8]), &Budget::seconds(30.0)).unwrap();
        assert!(long.is_decomposition() && verify_packing(&long).is_valid());
        let even = base_layered(&spec(2, 6, 6), &seq(&[6; 6]), &Budget::seconds(1.0));
        assert!(matches!(even, Err(Error::Input(_))));
    }

    #[test]
    fn mixed_base_holds_a_long_cycle_in_the_spare_copies() {
        let s = spec(3, 6, 6);
        let layer = seq(&[4, 4, 4, 4, 4, 4, 6, 6]);
        let p = base_mixed(&s, &layer, 8, &[4, 4, 4], &Budget::seconds(30.0)).unwrap();
        assert!(p.is_decomposition());
        assert!(verify_packing(&p).is_valid());
        let mut long = p.lengths();
        long.retain(|&k| k > 2);
        assert_eq!(long, vec![4, 4, 4, 4, 4, 4, 4, 4, 4, 6, 6, 8]);
        let one = base_mixed(&spec(1, 6, 6), &layer, 8, &[4, 4, 4], &Budget::seconds(1.0));
        assert!(matches!(one, Err(Error::Input(_))));
    }

    #[test]
    fn base_odd_six_cycle_branch() {
        let s = spec(3, 6, 6);
        let p = base_odd(&s, 6, 4, &Budget::seconds(30.0)).unwrap();
        assert!(p.is_decomposition());
        assert!(verify_packing(&p).is_valid());
        let mut lengths = p.lengths();
        lengths.retain(|&k| k > 2);
        assert_eq!(lengths, vec![4, 4, 4, 4, 4, 4, 4, 4, 6]);
        let lone = base_odd(&spec(1, 6, 6), 6, 4, &Budget::seconds(1.0));
        assert!(matches!(lone, Err(Error::BaseUnavailable(_))));
    }
}
