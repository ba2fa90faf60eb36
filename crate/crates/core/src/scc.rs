//! Strongly connected components, iterative Tarjan.

use crate::node_set::NodeSet;
use crate::view::GameView;

/// Decomposes the alive part of a view into maximal SCCs, returned in a
/// topological order: every alive edge stays inside its component or goes
/// from an earlier component to a later one.
pub fn scc_decompose(view: &GameView) -> Vec<NodeSet> {
    let n = view.game().node_count();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n as usize];
    for v in view.alive().iter() {
        adj[v as usize] = view.successors(v).collect();
    }
    let mut components = tarjan(n, view.alive().iter(), |v| &adj[v as usize]);
    // Tarjan emits components in reverse topological order.
    components.reverse();
    components
        .into_iter()
        .map(|nodes| NodeSet::from_nodes(n, nodes))
        .collect()
}

const UNVISITED: u32 = u32::MAX;

/// Iterative Tarjan over an arbitrary successor function. Nodes outside
/// `roots` are ignored entirely; `succs` must only yield such nodes.
pub(crate) fn tarjan<'g>(
    n: u32,
    roots: impl Iterator<Item = u32>,
    succs: impl Fn(u32) -> &'g [u32],
) -> Vec<Vec<u32>> {
    let mut index = vec![UNVISITED; n as usize];
    let mut lowlink = vec![0u32; n as usize];
    let mut on_stack = NodeSet::new(n);
    let mut stack: Vec<u32> = Vec::new();
    let mut next_index = 0u32;
    let mut components: Vec<Vec<u32>> = Vec::new();

    // Work items: (node, next successor position to examine).
    let mut work: Vec<(u32, usize)> = Vec::new();

    for root in roots {
        if index[root as usize] != UNVISITED {
            continue;
        }
        work.push((root, 0));
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos == 0 {
                index[v as usize] = next_index;
                lowlink[v as usize] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack.insert(v);
            }
            let vs = succs(v);
            if *pos < vs.len() {
                let w = vs[*pos];
                *pos += 1;
                if index[w as usize] == UNVISITED {
                    work.push((w, 0));
                } else if on_stack.contains(w) {
                    lowlink[v as usize] = lowlink[v as usize].min(index[w as usize]);
                }
            } else {
                work.pop();
                if let Some(&(parent, _)) = work.last() {
                    lowlink[parent as usize] = lowlink[parent as usize].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == index[v as usize] {
                    let mut component = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack.remove(w);
                        component.push(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(component);
                }
            }
        }
    }
    components
}
