//! The small constants δ1, δ2, δ3 and the regularity index N that close the
//! a priori estimate, given the pseudo-product blow-up exponent A.

use serde::Serialize;

/// One strict inequality written as `lhs > rhs`.
#[derive(Clone, Copy, Debug)]
pub struct Inequality {
    /// Short label, e.g. `"I1"`.
    pub label: &'static str,
    pub text: &'static str,
    pub sides: fn(&Candidate) -> (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Candidate {
    pub a: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub n_reg: u64,
}

pub const INEQUALITIES: [Inequality; 12] = [
    Inequality {
        label: "I1",
        text: "d3 (N - 2) + 1/2 + 3 d1 > 1",
        sides: |c| (c.delta3 * (c.n_reg as f64 - 2.0) + 0.5 + 3.0 * c.delta1, 1.0),
    },
    Inequality {
        label: "I2",
        text: "9 d1 > d3 (A + 3/2 - 3 d1)",
        sides: |c| (9.0 * c.delta1, c.delta3 * (c.a + 1.5 - 3.0 * c.delta1)),
    },
    Inequality {
        label: "I3",
        text: "1/2 + 9 d1 > d3 (A + 13/6 - 2 d1)",
        sides: |c| (0.5 + 9.0 * c.delta1, c.delta3 * (c.a + 13.0 / 6.0 - 2.0 * c.delta1)),
    },
    Inequality {
        label: "I4",
        text: "3 d1 > d3 (A + 2) > 0",
        sides: |c| {
            let mid = c.delta3 * (c.a + 2.0);
            // both links of the chain must hold
            if mid > 0.0 {
                (3.0 * c.delta1, mid)
            } else {
                (mid, 0.0)
            }
        },
    },
    Inequality { label: "I5", text: "d2 / 24 > 3 d1", sides: |c| (c.delta2 / 24.0, 3.0 * c.delta1) },
    Inequality { label: "I6", text: "3 d1 + A d2 < 1", sides: |c| (1.0, 3.0 * c.delta1 + c.a * c.delta2) },
    Inequality { label: "I7", text: "A d2 < 1/2", sides: |c| (0.5, c.a * c.delta2) },
    Inequality { label: "I8", text: "A d2 + 3 d1 < 1", sides: |c| (1.0, c.a * c.delta2 + 3.0 * c.delta1) },
    Inequality {
        label: "I9",
        text: "d3 (N - 3/2) > 21/16",
        sides: |c| (c.delta3 * (c.n_reg as f64 - 1.5), 21.0 / 16.0),
    },
    Inequality { label: "I10", text: "d3 (A + 1) < 5/16", sides: |c| (5.0 / 16.0, c.delta3 * (c.a + 1.0)) },
    Inequality { label: "I11", text: "(A + 2) d3 < 3/16", sides: |c| (3.0 / 16.0, (c.a + 2.0) * c.delta3) },
    Inequality { label: "I12", text: "d3 (A + 1) < 3/16", sides: |c| (3.0 / 16.0, c.delta3 * (c.a + 1.0)) },
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Slack {
    pub label: &'static str,
    pub text: &'static str,
    /// `lhs - rhs`; positive when the inequality holds.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantsBudget {
    pub a: f64,
    /// Finite intersection order; carried along, no inequality depends on it.
    pub n_order: u32,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub n_reg: u64,
    pub slacks: Vec<Slack>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConstantsSearch {
    Feasible(ConstantsBudget),
    Infeasible {
        /// Label of the inequality that blocks the best grid candidate.
        binding: &'static str,
        text: &'static str,
        /// Its (negative) slack at that candidate.
        slack: f64,
    },
}

/// Slack of every inequality at the given constants.
pub fn verify_constants(a: f64, delta1: f64, delta2: f64, delta3: f64, n_reg: u64) -> Vec<Slack> {
    let c = Candidate { a, delta1, delta2, delta3, n_reg };
    INEQUALITIES
        .iter()
        .map(|q| {
            let (l, r) = (q.sides)(&c);
            Slack { label: q.label, text: q.text, slack: l - r }
        })
        .collect()
}

pub fn all_hold(slacks: &[Slack]) -> bool {
    slacks.iter().all(|s| s.slack > 0.0)
}

/// Largest N the search will propose.
pub const N_MAX: u64 = 1 << 53;

/// Log grid for each δ: `10^(-k/8)` for `k = 8..=80` (from 0.1 down to 1e-10).
fn delta_grid() -> Vec<f64> {
    (8..=80).map(|k| 10f64.powf(-(k as f64) / 8.0)).collect()
}

/// Smallest N satisfying the two N-dependent inequalities for this δ3.
fn minimal_n(delta1: f64, delta3: f64) -> Option<u64> {
    let from_51 = (0.5 - 3.0 * delta1) / delta3 + 2.0;
    let from_59 = (21.0 / 16.0) / delta3 + 1.5;
    let n = from_51.max(from_59).floor() + 1.0;
    (n.is_finite() && n <= N_MAX as f64).then(|| (n as u64).max(1))
}

/// Grid search for `(δ1, δ2, δ3, N)` with every inequality strict.
///
/// Candidates are visited with δ2 decreasing, then δ1, then δ3; N is the
/// smallest integer that works. The first feasible candidate is returned.
/// When none is found, the inequality violated by the most nearly feasible
/// candidate (fewest violations, then smallest violation) is reported.
pub fn find_admissible_constants(a: f64, n_order: u32) -> ConstantsSearch {
    let grid = delta_grid();
    let mut best: Option<(usize, f64, &'static str, &'static str)> = None;
    for &d2 in &grid {
        for &d1 in grid.iter().filter(|&&d| d < d2) {
            for &d3 in grid.iter().filter(|&&d| d < d1) {
                let n_reg = minimal_n(d1, d3).unwrap_or(N_MAX);
                let slacks = verify_constants(a, d1, d2, d3, n_reg);
                let violated: Vec<&Slack> = slacks.iter().filter(|s| s.slack <= 0.0).collect();
                if violated.is_empty() {
                    return ConstantsSearch::Feasible(ConstantsBudget {
                        a,
                        n_order,
                        delta1: d1,
                        delta2: d2,
                        delta3: d3,
                        n_reg,
                        slacks,
                    });
                }
                let worst = violated.iter().min_by(|x, y| x.slack.partial_cmp(&y.slack).unwrap()).unwrap();
                let key = (violated.len(), worst.slack);
                let better = match &best {
                    None => true,
                    Some((n, s, _, _)) => key.0 < *n || (key.0 == *n && key.1 > *s),
                };
                if better {
                    best = Some((key.0, key.1, worst.label, worst.text));
                }
            }
        }
    }
    let (_, slack, binding, text) = best.expect("grid is non-empty");
    ConstantsSearch::Infeasible { binding, text, slack }
}
