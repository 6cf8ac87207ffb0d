//! Necessary conditions for an (M)-cycle decomposition of λK_{v,u}, and the
//! hypotheses under which the constructor guarantees one.

use std::fmt;

use serde::Serialize;

use crate::model::{GraphSpec, LengthSeq};

/// A violated inequality, both sides evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub label: &'static str,
    pub lhs: i64,
    pub relation: &'static str,
    pub rhs: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fail({}): {} {} {}", self.label, self.lhs, self.relation, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Necessity {
    Pass,
    Fail(Violation),
}

impl Necessity {
    pub fn passed(&self) -> bool {
        matches!(self, Necessity::Pass)
    }
}

impl fmt::Display for Necessity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Necessity::Pass => write!(f, "pass"),
            Necessity::Fail(v) => v.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Coverage {
    Covered,
    NotCovered(String),
}

impl Coverage {
    pub fn covered(&self) -> bool {
        matches!(self, Coverage::Covered)
    }
}

impl fmt::Display for Coverage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coverage::Covered => write!(f, "covered"),
            Coverage::NotCovered(r) => write!(f, "not-covered: {r}"),
        }
    }
}

pub fn nu_count(m: &LengthSeq, k: u32) -> usize {
    m.nu(k)
}

fn exceeds(label: &'static str, lhs: i64, rhs: i64) -> Option<Violation> {
    (lhs > rhs).then_some(Violation {
        label,
        lhs,
        relation: ">",
        rhs,
    })
}

/// Evaluates the sum condition and conditions (a)–(d) in order.
pub fn check_necessary(spec: &GraphSpec, m: &LengthSeq) -> Necessity {
    let lambda = spec.lambda as i64;
    let vu = spec.v as i64 * spec.u as i64;
    let total = lambda * vu;
    let t = m.len() as i64;
    let m_t = m.last().unwrap_or(0) as i64;
    let nu2 = m.nu(2) as i64;

    if m.sum() as i64 != total {
        return Necessity::Fail(Violation {
            label: "sum",
            lhs: m.sum() as i64,
            relation: "!=",
            rhs: total,
        });
    }
    if let Some(v) = exceeds("a", m_t, 2 * spec.v.min(spec.u) as i64) {
        return Necessity::Fail(v);
    }
    for part in [spec.v, spec.u] {
        let deg = lambda * part as i64;
        if deg % 2 != 0 {
            return Necessity::Fail(Violation {
                label: "b",
                lhs: deg % 2,
                relation: "!=",
                rhs: 0,
            });
        }
    }
    if lambda % 2 == 0 {
        if let Some(v) = exceeds("c", t, (lambda / 2) * vu - m_t + 2) {
            return Necessity::Fail(v);
        }
    } else if let Some(v) = exceeds("d", 2 * nu2, (lambda - 1) * vu) {
        return Necessity::Fail(v);
    }
    Necessity::Pass
}

/// Coverage hypotheses, with the smaller part first and the ν_2 bound for every λ.
pub fn check_constructive_hypotheses(spec: &GraphSpec, m: &LengthSeq) -> Coverage {
    hypotheses(spec, m, true)
}

/// Coverage hypotheses with the ν_2 bound only for odd λ.
pub fn check_construction_gate(spec: &GraphSpec, m: &LengthSeq) -> Coverage {
    hypotheses(spec, m, spec.lambda % 2 == 1)
}

fn hypotheses(spec: &GraphSpec, m: &LengthSeq, nu2_bound: bool) -> Coverage {
    let (v, u) = (spec.v.min(spec.u) as i64, spec.v.max(spec.u) as i64);
    let lambda = spec.lambda as i64;
    let vu = v * u;
    let t = m.len() as i64;
    let nc = |s: String| Coverage::NotCovered(s);

    if v < 5 {
        return nc(format!("min(v,u) = {v} < 5; route to oracle"));
    }
    if (lambda * v) % 2 != 0 || (lambda * u) % 2 != 0 {
        return nc("lambda*v or lambda*u is odd".into());
    }
    if m.sum() as i64 != lambda * vu {
        return nc(format!("sum(M) = {} != {}", m.sum(), lambda * vu));
    }
    let (Some(m_t), Some(m_prev)) = (m.last(), m.second_last()) else {
        return nc("M needs at least two cycles".into());
    };
    let (m_t, m_prev) = (m_t as i64, m_prev as i64);
    if m_t > 3 * m_prev {
        return nc(format!("m_t = {m_t} > 3*m_(t-1) = {}", 3 * m_prev));
    }
    if lambda % 2 == 0 && t > (lambda / 2) * vu - m_t + 2 {
        return nc(format!("t = {t} > {}", (lambda / 2) * vu - m_t + 2));
    }
    let bound = if v < u { 2 * v + 2 } else { 2 * v };
    if m_prev + m_t > bound {
        return nc(format!("m_(t-1)+m_t = {} > {bound}", m_prev + m_t));
    }
    let nu2 = m.nu(2) as i64;
    if nu2_bound && 2 * nu2 > (lambda - 1) * vu {
        return nc(format!("2*nu_2 = {} > {}", 2 * nu2, (lambda - 1) * vu));
    }
    Coverage::Covered
}
