//! Graph fixpoints on model topologies. Target states are treated as
//! absorbing throughout.

use std::collections::{BTreeSet, VecDeque};

use crate::model::Topology;

pub fn target_mask(n: usize, targets: &BTreeSet<usize>) -> Vec<bool> {
    let mut m = vec![false; n];
    for &t in targets {
        m[t] = true;
    }
    m
}

fn predecessors(topo: &Topology) -> Vec<Vec<usize>> {
    let mut pred = vec![Vec::new(); topo.len()];
    for (s, chs) in topo.iter().enumerate() {
        for ch in chs {
            for &t in ch {
                pred[t].push(s);
            }
        }
    }
    for p in &mut pred {
        p.sort_unstable();
        p.dedup();
    }
    pred
}

/// Length of a shortest path to a target using any action. `None` for
/// states from which no target is reachable.
pub fn exists_distance(topo: &Topology, targets: &[bool]) -> Vec<Option<usize>> {
    let pred = predecessors(topo);
    let mut dist = vec![None; topo.len()];
    let mut queue = VecDeque::new();
    for (s, &t) in targets.iter().enumerate() {
        if t {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        let d = dist[u].unwrap();
        for &p in &pred[u] {
            if dist[p].is_none() && !targets[p] {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// States from which some path reaches a target.
pub fn can_reach(topo: &Topology, targets: &[bool]) -> Vec<bool> {
    exists_distance(topo, targets)
        .into_iter()
        .map(|d| d.is_some())
        .collect()
}

/// Level at which a state enters the least fixpoint
/// `R = T ∪ { s : every action has a successor in R }`.
pub fn forall_attractor(topo: &Topology, targets: &[bool]) -> Vec<Option<usize>> {
    let n = topo.len();
    let mut level: Vec<Option<usize>> = (0..n).map(|s| targets[s].then_some(0)).collect();
    let mut k = 0;
    loop {
        k += 1;
        let mut added = Vec::new();
        for s in 0..n {
            if level[s].is_some() || topo[s].is_empty() {
                continue;
            }
            let ok = topo[s]
                .iter()
                .all(|ch| ch.iter().any(|&t| level[t].is_some_and(|l| l < k)));
            if ok {
                added.push(s);
            }
        }
        if added.is_empty() {
            return level;
        }
        for s in added {
            level[s] = Some(k);
        }
    }
}

/// States with maximal reachability probability one.
pub fn almost_sure_exists(topo: &Topology, targets: &[bool]) -> Vec<bool> {
    let n = topo.len();
    let mut u = vec![true; n];
    loop {
        let mut r: Vec<bool> = targets.to_vec();
        loop {
            let mut changed = false;
            for s in 0..n {
                if r[s] || !u[s] {
                    continue;
                }
                let ok = topo[s]
                    .iter()
                    .any(|ch| ch.iter().all(|&t| u[t]) && ch.iter().any(|&t| r[t]));
                if ok {
                    r[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if r == u {
            return u;
        }
        u = r;
    }
}

/// States with minimal reachability probability one: no strategy can
/// reach a state of minimal probability zero while avoiding the targets.
pub fn almost_sure_forall(topo: &Topology, targets: &[bool]) -> Vec<bool> {
    let zero: Vec<bool> = forall_attractor(topo, targets)
        .into_iter()
        .map(|l| l.is_none())
        .collect();
    let n = topo.len();
    let pred = predecessors(topo);
    let mut bad = zero.clone();
    let mut queue: VecDeque<usize> = (0..n).filter(|&s| zero[s]).collect();
    while let Some(u) = queue.pop_front() {
        for &p in &pred[u] {
            if !bad[p] && !targets[p] {
                bad[p] = true;
                queue.push_back(p);
            }
        }
    }
    bad.into_iter().map(|b| !b).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // s0 -a-> {s1}, s0 -b-> {s0}; s1 -> {s2 (target), s3}; s3 -> {s3}
    fn sample() -> (Topology, Vec<bool>) {
        let topo = vec![
            vec![vec![1], vec![0]],
            vec![vec![2, 3]],
            vec![vec![2]],
            vec![vec![3]],
        ];
        (topo, vec![false, false, true, false])
    }

    #[test]
    fn reachability_sets() {
        let (topo, t) = sample();
        assert_eq!(can_reach(&topo, &t), vec![true, true, true, false]);
        assert_eq!(exists_distance(&topo, &t)[0], Some(2));
        let lv = forall_attractor(&topo, &t);
        assert_eq!(lv, vec![None, Some(1), Some(0), None]);
        assert_eq!(
            almost_sure_exists(&topo, &t),
            vec![false, false, true, false]
        );
        assert_eq!(
            almost_sure_forall(&topo, &t),
            vec![false, false, true, false]
        );
    }

    #[test]
    fn almost_sure_with_retry_loop() {
        // s0 -> {s0, s1}, s1 target
        let topo = vec![vec![vec![0, 1]], vec![vec![1]]];
        let t = vec![false, true];
        assert_eq!(almost_sure_exists(&topo, &t), vec![true, true]);
        assert_eq!(almost_sure_forall(&topo, &t), vec![true, true]);
    }
}
