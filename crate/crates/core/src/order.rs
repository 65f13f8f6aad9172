//! Execution order: pairwise marginal costs and the feedback-arc-set style
//! problem of choosing a permutation that minimises their sum.
//!
//! `w[i][j]` is the extra length paid when `i` runs before `j`: `i`'s path
//! bent around `j`'s start core, `j`'s path bent around `i`'s final core,
//! and the retraction of each while the other moves. For an order `σ` the
//! total overhead is the sum of `w[i][j]` over pairs with `i` before `j`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::PiecewiseCurve;
use crate::instance::{Instance, RevolvingArea};
use crate::plan::{deform_around_cores, retraction_trace};

/// Largest `n` accepted by [`order_exact`].
pub const EXACT_MAX: usize = 14;

/// Overhead on one active path caused by one resting robot.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Interaction {
    /// Arc replacement minus the stretch it replaces.
    pub detour: f64,
    pub retraction: f64,
}

impl Interaction {
    pub fn total(&self) -> f64 {
        self.detour + self.retraction
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWeights {
    /// `w[i][j]`, clamped at zero, zero diagonal.
    pub w: Vec<Vec<f64>>,
    /// `i` active while `j` rests at its start.
    pub before: Vec<Vec<Interaction>>,
    /// `j` active while `i` rests at its final position.
    pub after: Vec<Vec<Interaction>>,
}

impl PairWeights {
    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn from_matrix(w: Vec<Vec<f64>>) -> Self {
        let n = w.len();
        PairWeights { w, before: vec![vec![Interaction::default(); n]; n], after: vec![vec![Interaction::default(); n]; n] }
    }
}

fn interaction(curve: &PiecewiseCurve, area: &RevolvingArea, tol: f64) -> Result<Interaction> {
    let bent = deform_around_cores(curve, &[area.core()])?;
    let trace = retraction_trace(&bent, area.anchor, area.center, tol)?;
    Ok(Interaction { detour: bent.length() - curve.length(), retraction: trace.length })
}

/// All `n²` pairwise marginal costs for the obstacle-only paths `gamma`.
pub fn pair_weights(inst: &Instance, gamma: &[PiecewiseCurve], tol: f64) -> Result<PairWeights> {
    let n = inst.n();
    // rows[a][k] = (a active vs k at start, a active vs k at final)
    let rows: Vec<Vec<(Interaction, Interaction)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            (0..n)
                .map(|k| {
                    if k == a {
                        return Ok((Interaction::default(), Interaction::default()));
                    }
                    Ok((
                        interaction(&gamma[a], &inst.start_areas[k], tol)?,
                        interaction(&gamma[a], &inst.final_areas[k], tol)?,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut w = vec![vec![0.0; n]; n];
    let mut before = vec![vec![Interaction::default(); n]; n];
    let mut after = vec![vec![Interaction::default(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            before[i][j] = rows[i][j].0;
            after[i][j] = rows[j][i].1;
            w[i][j] = (before[i][j].total() + after[i][j].total()).max(0.0);
        }
    }
    Ok(PairWeights { w, before, after })
}

/// `Σ w[σa][σb]` over positions `a < b`.
pub fn delta_cost(w: &PairWeights, sigma: &[usize]) -> f64 {
    let mut s = 0.0;
    for (a, &i) in sigma.iter().enumerate() {
        for &j in &sigma[a + 1..] {
            s += w.w[i][j];
        }
    }
    s
}

/// Arcs `(from, to, weight)`: `j → i` carries `w[i][j]`. The arcs pointing
/// backwards in an order weigh exactly its marginal cost.
pub fn fas_digraph(w: &PairWeights) -> Vec<(usize, usize, f64)> {
    let n = w.n();
    let mut arcs = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i != j && w.w[i][j] > 0.0 {
                arcs.push((j, i, w.w[i][j]));
            }
        }
    }
    arcs
}

pub fn backward_arc_weight(arcs: &[(usize, usize, f64)], sigma: &[usize]) -> f64 {
    let mut rank = vec![0; sigma.len()];
    for (r, &i) in sigma.iter().enumerate() {
        rank[i] = r;
    }
    arcs.iter().filter(|&&(u, v, _)| rank[v] < rank[u]).map(|a| a.2).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Greedy,
    LocalSearch,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingResult {
    pub sigma: Vec<usize>,
    pub delta_cost: f64,
    pub method: Method,
    pub certified_optimal: bool,
}

/// Subset dynamic program over prefixes; optimal for `n ≤ EXACT_MAX`.
pub fn order_exact(w: &PairWeights) -> Result<OrderingResult> {
    let n = w.n();
    if n > EXACT_MAX {
        return Err(Error::TooLarge { n, max: EXACT_MAX });
    }
    let full = 1usize << n;
    // into[k][S] = Σ_{i ∈ S} w[i][k]
    let mut into = vec![vec![0.0; full]; n];
    for (k, row) in into.iter_mut().enumerate() {
        for s in 1..full {
            let low = s.trailing_zeros() as usize;
            row[s] = row[s & (s - 1)] + w.w[low][k];
        }
    }
    let mut best = vec![f64::INFINITY; full];
    let mut last = vec![usize::MAX; full];
    best[0] = 0.0;
    for s in 0..full {
        if !best[s].is_finite() {
            continue;
        }
        for k in 0..n {
            if s & (1 << k) != 0 {
                continue;
            }
            let t = s | (1 << k);
            let c = best[s] + into[k][s];
            if c < best[t] {
                best[t] = c;
                last[t] = k;
            }
        }
    }
    let mut sigma = Vec::with_capacity(n);
    let mut s = full - 1;
    while s != 0 {
        let k = last[s];
        sigma.push(k);
        s &= !(1 << k);
    }
    sigma.reverse();
    Ok(OrderingResult { delta_cost: delta_cost(w, &sigma), sigma, method: Method::Exact, certified_optimal: true })
}

fn insertion_gain(w: &PairWeights, seq: &[usize], k: usize, pos: usize) -> f64 {
    let before: f64 = seq[..pos].iter().map(|&x| w.w[x][k]).sum();
    let after: f64 = seq[pos..].iter().map(|&x| w.w[k][x]).sum();
    before + after
}

fn greedy(w: &PairWeights) -> Vec<usize> {
    let mut seq: Vec<usize> = Vec::with_capacity(w.n());
    for k in 0..w.n() {
        let mut best = (f64::INFINITY, 0);
        for pos in 0..=seq.len() {
            let c = insertion_gain(w, &seq, k, pos);
            if c < best.0 - 1e-12 {
                best = (c, pos);
            }
        }
        seq.insert(best.1, k);
    }
    seq
}

/// Swaps and single moves until neither improves the cost.
fn local_search(w: &PairWeights, mut seq: Vec<usize>) -> Vec<usize> {
    let n = seq.len();
    let mut cost = delta_cost(w, &seq);
    loop {
        let mut improved = false;
        'swaps: for a in 0..n {
            for b in a + 1..n {
                seq.swap(a, b);
                let c = delta_cost(w, &seq);
                if c < cost - 1e-12 {
                    cost = c;
                    improved = true;
                    break 'swaps;
                }
                seq.swap(a, b);
            }
        }
        if !improved {
            'moves: for a in 0..n {
                let k = seq.remove(a);
                for pos in 0..n {
                    if pos == a {
                        continue;
                    }
                    seq.insert(pos, k);
                    let c = delta_cost(w, &seq);
                    if c < cost - 1e-12 {
                        cost = c;
                        improved = true;
                        break 'moves;
                    }
                    seq.remove(pos);
                }
                seq.insert(a, k);
            }
        }
        if !improved {
            return seq;
        }
    }
}

/// Greedy insertion, optionally followed by local search.
pub fn order_heuristic(w: &PairWeights, method: Method) -> OrderingResult {
    let seq = match method {
        Method::Greedy => greedy(w),
        _ => local_search(w, greedy(w)),
    };
    let method = if method == Method::Greedy { Method::Greedy } else { Method::LocalSearch };
    let delta = delta_cost(w, &seq);
    let certified_optimal = delta == 0.0;
    OrderingResult { sigma: seq, delta_cost: delta, method, certified_optimal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_orders(n: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for k in 0..used.len() {
                if !used[k] {
                    used[k] = true;
                    cur.push(k);
                    rec(cur, used, out);
                    cur.pop();
                    used[k] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> PairWeights {
        PairWeights::from_matrix(
            (0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { rng.gen_range(0.0..10.0) }).collect()).collect(),
        )
    }

    #[test]
    fn two_robots() {
        let w = PairWeights::from_matrix(vec![vec![0.0, 1.0], vec![3.0, 0.0]]);
        let r = order_exact(&w).unwrap();
        assert_eq!(r.sigma, vec![0, 1]);
        assert_eq!(r.delta_cost, 1.0);
        assert!(r.certified_optimal);
        assert_eq!(order_heuristic(&w, Method::LocalSearch).sigma, vec![0, 1]);
    }

    #[test]
    fn exact_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [3, 4, 5, 6] {
            let w = random_matrix(&mut rng, n);
            let brute = all_orders(n).iter().map(|s| delta_cost(&w, s)).fold(f64::INFINITY, f64::min);
            assert_eq!(order_exact(&w).unwrap().delta_cost, brute);
        }
    }

    #[test]
    fn zero_weights() {
        let w = PairWeights::from_matrix(vec![vec![0.0; 4]; 4]);
        assert_eq!(order_exact(&w).unwrap().delta_cost, 0.0);
    }

    #[test]
    fn monotone_chain_is_identity() {
        let n = 7;
        let w = PairWeights::from_matrix(
            (0..n).map(|i| (0..n).map(|j| if j < i { 1.0 + (i + j) as f64 } else { 0.0 }).collect()).collect(),
        );
        for m in [Method::Greedy, Method::LocalSearch] {
            let r = order_heuristic(&w, m);
            assert_eq!(r.sigma, (0..n).collect::<Vec<_>>());
            assert_eq!(r.delta_cost, 0.0);
        }
    }

    #[test]
    fn too_large() {
        let w = PairWeights::from_matrix(vec![vec![0.0; 15]; 15]);
        assert!(matches!(order_exact(&w), Err(Error::TooLarge { n: 15, .. })));
    }

    #[test]
    fn backward_arcs_equal_marginal_cost() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = random_matrix(&mut rng, 5);
        let arcs = fas_digraph(&w);
        for s in all_orders(5) {
            assert!((backward_arc_weight(&arcs, &s) - delta_cost(&w, &s)).abs() < 1e-9);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn matrix() -> impl Strategy<Value = PairWeights> {
            (2usize..7).prop_flat_map(|n| {
                proptest::collection::vec(proptest::collection::vec(0.0..5.0f64, n), n).prop_map(|mut m| {
                    for (i, row) in m.iter_mut().enumerate() {
                        row[i] = 0.0;
                    }
                    PairWeights::from_matrix(m)
                })
            })
        }

        proptest! {
            #[test]
            fn exact_never_worse_than_heuristics(w in matrix()) {
                let e = order_exact(&w).unwrap().delta_cost;
                prop_assert!(e <= order_heuristic(&w, Method::Greedy).delta_cost + 1e-9);
                prop_assert!(e <= order_heuristic(&w, Method::LocalSearch).delta_cost + 1e-9);
            }

            #[test]
            fn relabeling_keeps_optimum(w in matrix(), seed in 0u64..1000) {
                let n = w.n();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut perm: Vec<usize> = (0..n).collect();
                for k in (1..n).rev() {
                    perm.swap(k, rand::Rng::gen_range(&mut rng, 0..=k));
                }
                let mut m = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in 0..n {
                        m[perm[i]][perm[j]] = w.w[i][j];
                    }
                }
                let a = order_exact(&w).unwrap().delta_cost;
                let b = order_exact(&PairWeights::from_matrix(m)).unwrap().delta_cost;
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
