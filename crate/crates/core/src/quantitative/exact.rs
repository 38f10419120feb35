use num_traits::{One, Zero};

use crate::graph::{can_reach, forall_attractor, target_mask};
use crate::model::{ConcreteModel, ModelError, Strategy};
use crate::polyalg::Rational;
use crate::quantitative::QuantError;
use crate::types::Mode;

/// Solves `A x = b` over the rationals by Gaussian elimination with
/// partial pivoting on the first non-zero entry. `A` must be non-singular.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_linear(
    mut a: Vec<Vec<Rational>>,
    mut b: Vec<Rational>,
) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &inv;
            for c in col..n {
                if a[col][c].is_zero() {
                    continue;
                }
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Exact reachability probabilities of every state of a Markov chain.
pub fn mc_reach_values(chain: &ConcreteModel) -> Result<Vec<Rational>, QuantError> {
    if !chain.is_chain() {
        return Err(QuantError::NotAChain);
    }
    let n = chain.num_states();
    let targets = target_mask(n, &chain.targets);
    let reach = can_reach(&chain.topology(), &targets);
    let unknown: Vec<usize> = (0..n).filter(|&s| reach[s] && !targets[s]).collect();
    let mut index = vec![usize::MAX; n];
    for (i, &s) in unknown.iter().enumerate() {
        index[s] = i;
    }
    let m = unknown.len();
    let mut a = vec![vec![Rational::zero(); m]; m];
    let mut b = vec![Rational::zero(); m];
    for (i, &s) in unknown.iter().enumerate() {
        a[i][i] += Rational::one();
        for (t, p) in &chain.choices[s][0].transitions {
            if targets[*t] {
                b[i] += p;
            } else if index[*t] != usize::MAX {
                a[i][index[*t]] -= p;
            }
        }
    }
    let x = solve_linear(a, b).ok_or(QuantError::Singular)?;
    Ok((0..n)
        .map(|s| {
            if targets[s] {
                Rational::one()
            } else if index[s] != usize::MAX {
                x[index[s]].clone()
            } else {
                Rational::zero()
            }
        })
        .collect())
}

/// Exact reachability probability from the initial state.
pub fn mc_reach_exact(chain: &ConcreteModel) -> Result<Rational, QuantError> {
    Ok(mc_reach_values(chain)?.swap_remove(chain.init))
}

/// Result of extremal reachability on an MDP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremum {
    pub values: Vec<Rational>,
    pub strategy: Strategy,
}

impl Extremum {
    pub fn init_value(&self, model: &ConcreteModel) -> &Rational {
        &self.values[model.init]
    }
}

/// Models with at most this many states have their policy iteration result
/// cross-checked by enumerating all strategies.
pub const SELF_CHECK_STATES: usize = 12;
const SELF_CHECK_STRATEGIES: u128 = 4096;

fn q_value(model: &ConcreteModel, s: usize, c: usize, v: &[Rational]) -> Rational {
    model.choices[s][c]
        .transitions
        .iter()
        .fold(Rational::zero(), |acc, (t, p)| acc + p * &v[*t])
}

/// Exact minimal or maximal reachability probabilities with an optimal
/// memoryless deterministic strategy, computed by policy iteration.
///
/// Iteration starts from the lexicographically first strategy, except that
/// for minimisation states of minimal probability zero are pinned to an
/// action that keeps them away from the targets. Improvement switches to
/// the first strictly better action in declaration order.
pub fn mdp_reach_extremum_exact(model: &ConcreteModel, mode: Mode) -> Result<Extremum, QuantError> {
    let n = model.num_states();
    let topo = model.topology();
    let targets = target_mask(n, &model.targets);
    let mut sigma = vec![0usize; n];
    let mut frozen = vec![false; n];
    match mode {
        Mode::Min => {
            let level = forall_attractor(&topo, &targets);
            for s in 0..n {
                if level[s].is_none() {
                    frozen[s] = true;
                    sigma[s] = topo[s]
                        .iter()
                        .position(|ch| ch.iter().all(|&t| level[t].is_none()))
                        .expect("a zero state has an action avoiding the attractor");
                }
            }
        }
        Mode::Max => {
            let reach = can_reach(&topo, &targets);
            for s in 0..n {
                frozen[s] = !reach[s];
            }
        }
    }
    for s in 0..n {
        frozen[s] |= targets[s];
    }
    let values = loop {
        let chain = model.induced(&Strategy(sigma.clone()))?;
        let v = mc_reach_values(&chain)?;
        let mut improved = false;
        for s in 0..n {
            if frozen[s] {
                continue;
            }
            let better = (0..model.choices[s].len()).find(|&c| {
                let q = q_value(model, s, c, &v);
                match mode {
                    Mode::Min => q < v[s],
                    Mode::Max => q > v[s],
                }
            });
            if let Some(c) = better {
                sigma[s] = c;
                improved = true;
            }
        }
        if !improved {
            break v;
        }
    };
    let result = Extremum {
        values,
        strategy: Strategy(sigma),
    };
    if n <= SELF_CHECK_STATES {
        let count = model
            .choices
            .iter()
            .map(|c| c.len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b));
        if count <= SELF_CHECK_STRATEGIES {
            let best = enumerate_extremum(model, mode)?;
            if best != result.values[model.init] {
                return Err(QuantError::Inconsistent(format!(
                    "policy iteration gave {}, enumeration gave {}",
                    result.values[model.init], best
                )));
            }
        }
    }
    Ok(result)
}

/// Extremal value at the initial state over all memoryless deterministic
/// strategies, by brute force.
pub fn enumerate_extremum(model: &ConcreteModel, mode: Mode) -> Result<Rational, QuantError> {
    let mut best: Option<Rational> = None;
    for sigma in model.enumerate_strategies() {
        let v = mc_reach_exact(&model.induced(&sigma)?)?;
        best = Some(match best {
            None => v,
            Some(b) => match mode {
                Mode::Min => b.min(v),
                Mode::Max => b.max(v),
            },
        });
    }
    best.ok_or_else(|| QuantError::Model(ModelError::InvalidStrategy("no strategies".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{instantiate, ModelBuilder, ModelKind};
    use crate::polyalg::{rat, Valuation};

    #[test]
    fn retry_loop_chain() {
        let mut b = ModelBuilder::new(ModelKind::Pmc);
        b.transition("a", "", "a", "1/2");
        b.transition("a", "", "t", "1/4");
        b.transition("a", "", "z", "1/4");
        b.transition("t", "", "t", "1");
        b.transition("z", "", "z", "1");
        b.init("a").target("t");
        let m = instantiate(&b.build().unwrap(), &Valuation::new()).unwrap();
        assert_eq!(mc_reach_exact(&m).unwrap(), rat(1, 2));
    }

    #[test]
    fn min_avoids_end_component() {
        // s can loop forever or go to the target.
        let mut b = ModelBuilder::new(ModelKind::Pmdp);
        b.transition("s", "go", "t", "1");
        b.transition("s", "loop", "s", "1");
        b.transition("t", "stay", "t", "1");
        b.init("s").target("t");
        let m = instantiate(&b.build().unwrap(), &Valuation::new()).unwrap();
        let min = mdp_reach_extremum_exact(&m, Mode::Min).unwrap();
        assert_eq!(min.values[0], rat(0, 1));
        assert_eq!(min.strategy.0[0], 1);
        let max = mdp_reach_extremum_exact(&m, Mode::Max).unwrap();
        assert_eq!(max.values[0], rat(1, 1));
        assert_eq!(max.strategy.0[0], 0);
    }
}
