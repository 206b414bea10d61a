use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::model::FlowNetwork;

#[derive(Clone, Copy)]
struct Dist(f64);
impl PartialEq for Dist {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Dist {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Distances from one source, with and without a paid processing step.
#[derive(Debug, Clone)]
pub struct ShortestWalkResult {
    pub source: usize,
    /// Plain shortest-path distance `d(v)`.
    pub dist: Vec<f64>,
    /// `r(v)`: cheapest walk to `v` that processed somewhere on the way.
    pub cost: Vec<f64>,
    plain_pred: Vec<Option<usize>>,
    /// `None` means the walk is processed at this vertex.
    proc_pred: Vec<Option<usize>>,
}

impl ShortestWalkResult {
    /// Reconstructs the cheapest processed walk to `target` as its arcs and
    /// the processing vertex, or `None` when unreachable.
    pub fn walk_to(&self, net: &FlowNetwork, target: usize) -> Option<(Vec<usize>, usize)> {
        if !self.cost[target].is_finite() {
            return None;
        }
        let mut tail = Vec::new();
        let mut v = target;
        while let Some(a) = self.proc_pred[v] {
            tail.push(a);
            v = net.arc(a).tail;
        }
        let at = v;
        let mut head = Vec::new();
        while let Some(a) = self.plain_pred[v] {
            head.push(a);
            v = net.arc(a).tail;
        }
        debug_assert_eq!(v, self.source);
        head.reverse();
        tail.reverse();
        head.extend(tail);
        Some((head, at))
    }
}

fn dijkstra(
    net: &FlowNetwork,
    arc_weight: &[f64],
    dist: &mut [f64],
    pred: &mut [Option<usize>],
    heap: &mut BinaryHeap<Reverse<(Dist, usize)>>,
) {
    while let Some(Reverse((Dist(d), v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &a in net.out_arcs(v) {
            let c = arc_weight[a];
            if !c.is_finite() {
                continue;
            }
            let u = net.arc(a).head;
            let nd = d + c;
            if nd < dist[u] {
                dist[u] = nd;
                pred[u] = Some(a);
                heap.push(Reverse((Dist(nd), u)));
            }
        }
    }
}

/// Cheapest walk from `source` to every vertex that is processed at some
/// vertex along the way: `r(v) = min over u of d(u) + n(u) + dist(u ⇝ v)`.
///
/// Arc weights must be non-negative (infinite disables an arc); node weights
/// non-negative, infinite where processing is impossible.
pub fn shortest_processing_2walk(
    net: &FlowNetwork,
    arc_weight: &[f64],
    node_weight: &[f64],
    source: usize,
) -> ShortestWalkResult {
    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut plain_pred = vec![None; n];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Reverse((Dist(0.0), source)));
    dijkstra(net, arc_weight, &mut dist, &mut plain_pred, &mut heap);

    let mut cost = vec![f64::INFINITY; n];
    let mut proc_pred = vec![None; n];
    for v in 0..n {
        let r = dist[v] + node_weight[v];
        if r < cost[v] {
            cost[v] = r;
            heap.push(Reverse((Dist(r), v)));
        }
    }
    dijkstra(net, arc_weight, &mut cost, &mut proc_pred, &mut heap);
    ShortestWalkResult {
        source,
        dist,
        cost,
        plain_pred,
        proc_pred,
    }
}
