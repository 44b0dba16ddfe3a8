use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::Zero;

/// Whether every demand can be met from the supplies along the allowed
/// edges `(supply, demand)`. Supplies may be split across demands.
pub fn covers(supply: &[BigUint], demand: &[BigUint], edges: &[(usize, usize)]) -> bool {
    let need: BigUint = demand.iter().sum();
    if need.is_zero() {
        return true;
    }
    let (ns, nd) = (supply.len(), demand.len());
    let n = ns + nd + 2;
    let (src, snk) = (n - 2, n - 1);
    let mut cap = vec![vec![BigUint::zero(); n]; n];
    let mut adj = vec![Vec::new(); n];
    let mut link = |cap: &mut Vec<Vec<BigUint>>, a: usize, b: usize, c: BigUint| {
        if cap[a][b].is_zero() && cap[b][a].is_zero() {
            adj[a].push(b);
            adj[b].push(a);
        }
        cap[a][b] += c;
    };
    for (i, s) in supply.iter().enumerate() {
        link(&mut cap, src, i, s.clone());
    }
    for (j, d) in demand.iter().enumerate() {
        link(&mut cap, ns + j, snk, d.clone());
    }
    for &(i, j) in edges {
        link(&mut cap, i, ns + j, need.clone());
    }
    let mut flow = BigUint::zero();
    loop {
        let mut prev = vec![usize::MAX; n];
        prev[src] = src;
        let mut q = VecDeque::from([src]);
        while let Some(u) = q.pop_front() {
            for &v in &adj[u] {
                if prev[v] == usize::MAX && !cap[u][v].is_zero() {
                    prev[v] = u;
                    q.push_back(v);
                }
            }
        }
        if prev[snk] == usize::MAX {
            break;
        }
        let mut b: Option<BigUint> = None;
        let mut v = snk;
        while v != src {
            let u = prev[v];
            b = Some(match b {
                Some(x) if x <= cap[u][v] => x,
                _ => cap[u][v].clone(),
            });
            v = u;
        }
        let b = b.expect("path has an edge");
        let mut v = snk;
        while v != src {
            let u = prev[v];
            cap[u][v] -= &b;
            cap[v][u] += &b;
            v = u;
        }
        flow += b;
    }
    flow == need
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: &[u32]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn split_supply() {
        assert!(covers(&b(&[2]), &b(&[1, 1]), &[(0, 0), (0, 1)]));
        assert!(!covers(&b(&[1]), &b(&[1, 1]), &[(0, 0), (0, 1)]));
    }

    #[test]
    fn needs_augmenting_reroute() {
        // greedy 0->0 blocks demand 1 unless rerouted
        assert!(covers(&b(&[1, 1]), &b(&[1, 1]), &[(0, 0), (0, 1), (1, 0)]));
        assert!(!covers(&b(&[1, 1]), &b(&[1, 1]), &[(0, 0), (1, 0)]));
    }

    #[test]
    fn empty_demand() {
        assert!(covers(&[], &[], &[]));
    }
}
