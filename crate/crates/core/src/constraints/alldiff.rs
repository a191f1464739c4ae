//! Domain-consistent AllDifferent via maximum matching and strongly connected
//! components of the value graph.

use crate::store::{Conflict, Domains, PropResult, VarId};

pub(super) fn propagate_alldiff(vars: &[VarId], d: &mut Domains) -> PropResult {
    let doms: Vec<Vec<i32>> = vars.iter().map(|&v| d.dom(v).values()).collect();
    let keep = alldiff_prune(&doms).ok_or(Conflict)?;
    for (k, &v) in vars.iter().enumerate() {
        if keep[k].len() < doms[k].len() {
            d.retain(v, |x| keep[k].binary_search(&x).is_ok())?;
        }
    }
    Ok(())
}

/// Given explicit sorted domains, returns the values that belong to some
/// solution of AllDifferent, or `None` when there is no solution.
pub fn alldiff_prune(doms: &[Vec<i32>]) -> Option<Vec<Vec<i32>>> {
    let n = doms.len();
    let mut values: Vec<i32> = doms.iter().flatten().copied().collect();
    values.sort_unstable();
    values.dedup();
    let m = values.len();
    if m < n {
        return None;
    }
    let adj: Vec<Vec<usize>> = doms
        .iter()
        .map(|dv| dv.iter().map(|x| values.binary_search(x).unwrap()).collect())
        .collect();

    // maximum matching (augmenting paths)
    let mut var_of: Vec<Option<usize>> = vec![None; m];
    let mut val_of: Vec<Option<usize>> = vec![None; n];
    for start in 0..n {
        let mut seen = vec![false; m];
        if !augment(start, &adj, &mut var_of, &mut val_of, &mut seen) {
            return None;
        }
    }

    // graph over nodes 0..n (vars) and n..n+m (values):
    // matched edge var -> val, unmatched edge val -> var
    let nodes = n + m;
    let mut g: Vec<Vec<usize>> = vec![Vec::new(); nodes];
    for (x, vals) in adj.iter().enumerate() {
        for &j in vals {
            if val_of[x] == Some(j) {
                g[x].push(n + j);
            } else {
                g[n + j].push(x);
            }
        }
    }
    // free values reach alternating paths of even length: edges used on such
    // paths are vital-free
    let mut reach = vec![false; nodes];
    let mut stack: Vec<usize> = (0..m).filter(|&j| var_of[j].is_none()).map(|j| n + j).collect();
    for &s in &stack {
        reach[s] = true;
    }
    while let Some(u) = stack.pop() {
        for &w in &g[u] {
            if !reach[w] {
                reach[w] = true;
                stack.push(w);
            }
        }
    }
    let comp = tarjan(&g);

    let mut out = Vec::with_capacity(n);
    for (x, vals) in adj.iter().enumerate() {
        let kept: Vec<i32> = vals
            .iter()
            .filter(|&&j| val_of[x] == Some(j) || comp[x] == comp[n + j] || reach[n + j] && reach[x])
            .map(|&j| values[j])
            .collect();
        out.push(kept);
    }
    Some(out)
}

fn augment(
    x: usize,
    adj: &[Vec<usize>],
    var_of: &mut [Option<usize>],
    val_of: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &j in &adj[x] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if var_of[j].is_none() || augment(var_of[j].unwrap(), adj, var_of, val_of, seen) {
            var_of[j] = Some(x);
            val_of[x] = Some(j);
            return true;
        }
    }
    false
}

/// Iterative Tarjan; returns a component id per node.
fn tarjan(g: &[Vec<usize>]) -> Vec<usize> {
    let n = g.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (u, ref mut k)) = call.last_mut() {
            if *k < g[u].len() {
                let w = g[u][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[u]);
                }
                if low[u] == index[u] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = ncomp;
                        if w == u {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}
