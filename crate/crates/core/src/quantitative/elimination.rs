use std::collections::BTreeMap;

use crate::graph::{can_reach, target_mask};
use crate::model::ParametricModel;
use crate::polyalg::{Polynomial, RationalFunction};
use crate::quantitative::QuantError;

/// Bounds on intermediate expression size during state elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EliminationLimits {
    pub max_terms: usize,
}

impl Default for EliminationLimits {
    fn default() -> Self {
        EliminationLimits { max_terms: 200_000 }
    }
}

const TARGET: usize = usize::MAX;

/// A row of the reduced system: `P(u, t) = entries[t] / prod(den)`.
#[derive(Clone, Debug)]
struct Row {
    entries: BTreeMap<usize, Polynomial>,
    den: Vec<Polynomial>,
}

impl Row {
    fn den_product(&self) -> Polynomial {
        self.den.iter().fold(Polynomial::one(), |acc, f| &acc * f)
    }

    /// Divides out every denominator factor that divides all entries.
    fn cancel(&mut self) {
        let mut k = 0;
        while k < self.den.len() {
            let f = &self.den[k];
            let mut quotients = BTreeMap::new();
            let mut ok = true;
            for (t, e) in &self.entries {
                match e.div_exact(f) {
                    Some(q) => {
                        quotients.insert(*t, q);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.entries = quotients;
                self.den.remove(k);
            } else {
                k += 1;
            }
        }
    }

    fn size(&self) -> usize {
        self.entries
            .values()
            .map(Polynomial::num_terms)
            .sum::<usize>()
            + self.den.iter().map(Polynomial::num_terms).sum::<usize>()
    }
}

struct System {
    rows: BTreeMap<usize, Row>,
}

impl System {
    fn build(pmc: &ParametricModel) -> (System, Vec<bool>, Vec<bool>) {
        let n = pmc.num_states();
        let targets = target_mask(n, &pmc.targets);
        let reach = can_reach(&pmc.underlying_graph(), &targets);
        let mut rows = BTreeMap::new();
        for s in 0..n {
            if targets[s] || !reach[s] {
                continue;
            }
            let mut entries: BTreeMap<usize, Polynomial> = BTreeMap::new();
            for (t, label) in &pmc.choices[s][0].transitions {
                let key = if targets[*t] {
                    TARGET
                } else if reach[*t] {
                    *t
                } else {
                    continue;
                };
                *entries.entry(key).or_default() += label;
            }
            entries.retain(|_, p| !p.is_zero());
            rows.insert(
                s,
                Row {
                    entries,
                    den: Vec::new(),
                },
            );
        }
        (System { rows }, targets, reach)
    }

    fn degree_product(&self, e: usize) -> usize {
        let outdeg = self.rows[&e].entries.keys().filter(|&&t| t != e).count();
        let indeg = self
            .rows
            .iter()
            .filter(|(u, r)| **u != e && r.entries.contains_key(&e))
            .count();
        indeg * outdeg
    }

    fn eliminate(&mut self, e: usize, limits: &EliminationLimits) -> Result<(), QuantError> {
        let mut row_e = self.rows.remove(&e).expect("eliminated state has a row");
        let self_loop = row_e.entries.remove(&e).unwrap_or_default();
        let pivot = &row_e.den_product() - &self_loop;
        if pivot.is_zero() {
            return Err(QuantError::Singular);
        }
        let (c, pivot) = pivot.make_monic();
        let inv = c.recip();
        for v in row_e.entries.values_mut() {
            *v = v.scale(&inv);
        }
        let constant_pivot = pivot.is_one();
        for row_u in self.rows.values_mut() {
            let Some(a) = row_u.entries.remove(&e) else {
                continue;
            };
            if !constant_pivot {
                for v in row_u.entries.values_mut() {
                    *v = &*v * &pivot;
                }
            }
            for (t, v) in &row_e.entries {
                let add = &a * v;
                let slot = row_u.entries.entry(*t).or_default();
                *slot += &add;
            }
            row_u.entries.retain(|_, p| !p.is_zero());
            if !constant_pivot {
                row_u.den.push(pivot.clone());
                row_u.cancel();
            }
            if row_u.size() > limits.max_terms {
                return Err(QuantError::EliminationBlowup(row_u.size()));
            }
        }
        Ok(())
    }
}

/// Reachability probability from the initial state as a rational function
/// of the parameters. The result agrees with the instantiated chain on
/// every graph-preserving valuation.
pub fn solution_function(pmc: &ParametricModel) -> Result<RationalFunction, QuantError> {
    solution_function_with(pmc, &EliminationLimits::default())
}

pub fn solution_function_with(
    pmc: &ParametricModel,
    limits: &EliminationLimits,
) -> Result<RationalFunction, QuantError> {
    if !pmc.is_pmc() {
        return Err(QuantError::NotAChain);
    }
    let keep = pmc.init;
    let (mut sys, targets, reach) = System::build(pmc);
    if targets[keep] {
        return Ok(RationalFunction::one());
    }
    if !reach[keep] {
        return Ok(RationalFunction::zero());
    }
    loop {
        let next = sys
            .rows
            .keys()
            .copied()
            .filter(|&s| s != keep)
            .min_by_key(|&s| (sys.degree_product(s), s));
        let Some(e) = next else { break };
        sys.eliminate(e, limits)?;
    }
    let mut row = sys.rows.remove(&keep).expect("kept state has a row");
    let self_loop = row.entries.remove(&keep).unwrap_or_default();
    let den = &row.den_product() - &self_loop;
    let num = row.entries.remove(&TARGET).unwrap_or_default();
    let rf = RationalFunction::new(num, den).map_err(|_| QuantError::Singular)?;
    Ok(rf.simplify())
}

/// Solution functions for every state taken as initial state.
pub fn per_state_solution_functions(
    pmc: &ParametricModel,
) -> Result<Vec<RationalFunction>, QuantError> {
    (0..pmc.num_states())
        .map(|s| solution_function(&pmc.with_init(s)))
        .collect()
}
