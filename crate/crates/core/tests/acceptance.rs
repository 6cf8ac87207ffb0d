//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails. Time limits are pinned per criterion.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use bipartite_cycles::certify::verify_decomposition;
use bipartite_cycles::conditions::{check_constructive_hypotheses, check_necessary};
use bipartite_cycles::constructor::{base_even, decompose};
use bipartite_cycles::joining::join_two_cycles;
use bipartite_cycles::model::even_partitions;
use bipartite_cycles::oracle::{oracle_decide, oracle_enumerate, Budget, Decision};
use bipartite_cycles::switching::{perform_switch, switch_edge_set};
use bipartite_cycles::{Cycle, GraphSpec, LengthSeq, Side, Vertex};

use common::{check_switch, naive_decide, partitions, random_packing};

type Outcome = Result<String, String>;

fn spec(lambda: u32, v: u32, u: u32) -> GraphSpec {
    GraphSpec::new(lambda, v, u).unwrap()
}

fn seq(v: Vec<u32>) -> LengthSeq {
    LengthSeq::new(v).unwrap()
}

fn c1_census() -> Outcome {
    let s = spec(2, 2, 2);
    let e = oracle_enumerate(&s, &Budget::seconds(1.0));
    let got: Vec<Vec<u32>> = e.decomposable.iter().map(|m| m.lengths().to_vec()).collect();
    let expected = vec![vec![2, 2, 2, 2], vec![4, 4]];
    if got != expected || !e.timed_out.is_empty() {
        return Err(format!("oracle found {got:?}, timed out {:?}", e.timed_out));
    }
    let mut naive: Vec<Vec<u32>> = partitions(8, 8)
        .into_iter()
        .filter(|m| naive_decide(&s, m))
        .collect();
    naive.sort();
    if naive != expected {
        return Err(format!("brute force found {naive:?}"));
    }
    let m = seq(vec![2, 2, 4]);
    let nec = check_necessary(&s, &m).to_string();
    if !nec.starts_with("fail(c)") {
        return Err(format!("(2,2,4) necessity verdict {nec}"));
    }
    if oracle_decide(&s, &m, &Budget::seconds(1.0)).exists() {
        return Err("(2,2,4) decomposed by the oracle".into());
    }
    Ok(format!("decomposable {got:?}; (2,2,4) {nec}"))
}

fn c2_necessity() -> Outcome {
    let mut checked = 0;
    let mut exists = 0;
    for lambda in 1..=3u32 {
        for v in 1..=3u32 {
            for u in v..=3u32 {
                if lambda * v * u > 24 {
                    continue;
                }
                let s = spec(lambda, v, u);
                let total = lambda * v * u;
                if total % 2 == 1 {
                    continue;
                }
                for m in partitions(total, total) {
                    checked += 1;
                    let ms = seq(m.clone());
                    let naive = naive_decide(&s, &m);
                    let decided = match oracle_decide(&s, &ms, &Budget::seconds(30.0)) {
                        Decision::Exists(_) => true,
                        Decision::NotExists(_) => false,
                        Decision::Timeout(_) => return Err(format!("oracle timeout on {s} {ms}")),
                    };
                    if naive != decided {
                        return Err(format!("{s} {ms}: oracle {decided}, brute force {naive}"));
                    }
                    if decided {
                        exists += 1;
                        if !check_necessary(&s, &ms).passed() {
                            return Err(format!("counterexample {s} {ms}"));
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checked} sequences, {exists} decomposable, 0 counterexamples"))
}

fn c3_switches() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5717c4);
    let mut calls = 0;
    let mut simple = 0;
    let shapes: Vec<(u32, u32, u32)> = (2..=5)
        .flat_map(|v| (2..=5).map(move |u| (v, u)))
        .flat_map(|(v, u)| [(1, v, u), (2, v, u)])
        .filter(|&(l, v, u)| l == 2 || (v % 2 == 0 && u % 2 == 0))
        .collect();
    let mut attempts = 0;
    while calls < 1200 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(format!("only {calls} switch calls generated"));
        }
        let &(lambda, v, u) = shapes.choose(&mut rng).unwrap();
        let s = spec(lambda, v, u);
        let p = random_packing(&mut rng, s);
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let n = s.part_size(side);
        let a = rng.gen_range(0..n);
        let b = (a + rng.gen_range(1..n)) % n;
        let mk = |i| Vertex { side, index: i };
        let (alpha, beta) = (mk(a), mk(b));
        let slots = switch_edge_set(&p.leave, alpha, beta).unwrap();
        let Some(&(origin, x)) = slots.choose(&mut rng) else {
            continue;
        };
        let (alpha, beta) = if x == alpha { (alpha, beta) } else { (beta, alpha) };
        calls += 1;
        let (q, rec) = perform_switch(&p, alpha, beta, origin)
            .map_err(|e| format!("{s} switch ({alpha},{beta}) origin {origin}: {e}"))?;
        if p.leave.is_simple() {
            simple += 1;
        }
        check_switch(&p, &q, rec.alpha, rec.beta, rec.origin, rec.terminus)
            .map_err(|e| format!("{s} switch ({alpha},{beta}) origin {origin}: {e}"))?;
    }
    Ok(format!("{calls} switches, {simple} on simple leaves, 0 failures"))
}

fn c4_base_even() -> Outcome {
    let mut count = 0;
    for lambda in [2u32, 4] {
        for v in 3..=8u32 {
            let s = spec(lambda, v, v);
            for m_t in (2..=2 * v - 2).step_by(2) {
                let p = base_even(&s, m_t).map_err(|e| format!("{s} m_t={m_t}: {e}"))?;
                let ls = p.lengths();
                let m = seq(ls.clone());
                if !verify_decomposition(&s, &p.cycles, &m).is_valid() {
                    return Err(format!("{s} m_t={m_t}: does not verify"));
                }
                // the m_t-cycle itself is not counted among the fan's 4-cycles
                let nu4 = ls.iter().filter(|&&k| k == 4).count() as u32 - u32::from(m_t == 4);
                let t = ls.len() as u32;
                let want_t = lambda / 2 * v * v - m_t + 2;
                let want_nu4 = (m_t - 2) / 2;
                if nu4 != want_nu4 || t != want_t || !ls.contains(&m_t) {
                    return Err(format!("{s} m_t={m_t}: nu_4={nu4} t={t}, want {want_nu4} and {want_t}"));
                }
                count += 1;
            }
        }
    }
    Ok(format!("{count} bases exact"))
}

fn c5_joins() -> Outcome {
    let s = spec(2, 7, 7);
    let d = base_even(&s, 8).map_err(|e| e.to_string())?;
    let idx = |k: usize| -> Vec<usize> { (0..d.cycles.len()).filter(|&i| d.cycles[i].len() == k).collect() };
    let bound = 14;
    let mut joins = 0;
    let mut lengths: Vec<usize> = d.cycles.iter().map(Cycle::len).collect();
    lengths.sort_unstable();
    lengths.dedup();
    for &h in &lengths {
        for &m in &lengths {
            for &m2 in lengths.iter().filter(|&&k| k >= m) {
                if m + m2 > h || h + m + m2 > bound {
                    continue;
                }
                for &hi in &idx(h) {
                    for &mi in idx(m).iter().filter(|&&i| i != hi) {
                        for &m2i in idx(m2).iter().filter(|&&i| i != hi && i != mi && (m != m2 || i > mi)) {
                            let out = join_two_cycles(&d, hi, mi, m2i)
                                .map_err(|e| format!("h={h} m={m} m'={m2} ({hi},{mi},{m2i}): {e}"))?;
                            let mut want: Vec<u32> = d.lengths();
                            for k in [m, m2] {
                                want.remove(want.iter().position(|&x| x as usize == k).unwrap());
                            }
                            want.push((m + m2) as u32);
                            if !verify_decomposition(&s, &out.cycles, &seq(want)).is_valid() {
                                return Err(format!("h={h} m={m} m'={m2} ({hi},{mi},{m2i}) does not verify"));
                            }
                            joins += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{joins} joins verified"))
}

fn c6_covered_sweep() -> Outcome {
    let mut covered = 0;
    let mut failures = Vec::new();
    for v in [5u32, 6] {
        let s = spec(2, v, v);
        for m in even_partitions(2 * v * v, 2 * v) {
            if !check_constructive_hypotheses(&s, &m).covered() {
                continue;
            }
            covered += 1;
            match decompose(&s, &m) {
                Ok(p) if verify_decomposition(&s, &p.cycles, &m).is_valid() => {}
                Ok(_) => failures.push(format!("{s} {m}: invalid output")),
                Err(e) => {
                    let d = oracle_decide(&s, &m, &Budget::seconds(10.0));
                    failures.push(format!("{s} {m}: {e}; oracle {}", d.label()));
                }
            }
        }
    }
    if failures.is_empty() {
        Ok(format!("{covered}/{covered} covered instances constructed and verified"))
    } else {
        Err(format!("{} of {covered} failed: {}", failures.len(), failures.join("; ")))
    }
}

fn c7_odd_lambda() -> Outcome {
    let s = spec(3, 6, 6);
    let mut ls = vec![2; 36];
    ls.extend([4; 6]);
    ls.extend([6, 6]);
    let m = seq(ls);
    let nu2 = m.nu(2) as u32;
    let p = decompose(&s, &m).map_err(|e| format!("{s} {m}: {e}"))?;
    if !verify_decomposition(&s, &p.cycles, &m).is_valid() {
        return Err(format!("{s} {m}: does not verify"));
    }
    let s1 = spec(1, 6, 6);
    let m1 = seq(vec![6; 6]);
    let p1 = decompose(&s1, &m1).map_err(|e| format!("{s1} {m1}: {e}"))?;
    if !verify_decomposition(&s1, &p1.cycles, &m1).is_valid() {
        return Err(format!("{s1} {m1}: does not verify"));
    }
    Ok(format!("{s} with 2*nu_2 = {} <= 72 and {s1} (6^6) verified", 2 * nu2))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 7] = [
        ("oracle census on 2K_{2,2}", 1, c1_census),
        ("necessity soundness, lambda <= 3, v <= u <= 3, lambda*v*u <= 24", 300, c2_necessity),
        ("switch contract on random packings", 120, c3_switches),
        ("base_even exactness, lambda in {2,4}, v = u in 3..=8", 60, c4_base_even),
        ("join sweep on 2K_{7,7} with m_t = 8", 120, c5_joins),
        ("covered sweep, lambda = 2, v = u in {5,6}", 600, c6_covered_sweep),
        ("odd-lambda bases on 3K_{6,6} and 1K_{6,6}", 120, c7_odd_lambda),
    ];
    let mut failed = 0;
    let mut tally = BTreeMap::new();
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let (ok, detail) = match result {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        *tally.entry(ok).or_insert(0) += 1;
        println!(
            "{} criterion {}: {name}: {detail} ({:.2} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!(
        "acceptance: {} passed, {} failed",
        tally.get(&true).unwrap_or(&0),
        failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
