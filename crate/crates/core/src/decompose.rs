//! Turning an edge-based solution back into flow-carrying 2-walks.
//!
//! First cycles made only of unprocessed flow (or only of processed flow) are
//! cancelled; they carry nothing useful. Then, while some vertex still has
//! processing left, a walk is traced backwards through unprocessed flow to
//! the source and forwards through processed flow to the sink. Each of the two
//! halves is a simple path, so every vertex is visited at most twice.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::model::{Demand, FlowNetwork};
use crate::solution::{EdgeFlowSolution, WalkEntry, WalkFlowSolution};
use crate::{Error, Result};

/// The residual flow of one commodity, split into unprocessed (`f1`) and
/// processed (`f2`) parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CommodityView {
    pub demand: usize,
    pub source: usize,
    pub sink: usize,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    pub processing: Vec<f64>,
    /// Values below this are treated as zero.
    pub floor: f64,
}

impl CommodityView {
    pub fn new(sol: &EdgeFlowSolution, demands: &[Demand], i: usize) -> Self {
        let f1: Vec<f64> = sol.unprocessed[i].iter().map(|&w| w.max(0.0)).collect();
        let f2: Vec<f64> = sol.flow[i].iter().zip(&f1).map(|(&f, &w)| (f - w).max(0.0)).collect();
        let processing: Vec<f64> = sol.processing[i].iter().map(|&p| p.max(0.0)).collect();
        let scale = f1.iter().chain(&f2).chain(&processing).fold(1.0_f64, |m, &x| m.max(x));
        let mut view = CommodityView {
            demand: i,
            source: demands[i].source,
            sink: demands[i].sink,
            f1,
            f2,
            processing,
            floor: 1e-12 * scale,
        };
        view.snap();
        view
    }

    /// Ratio of unprocessed to total flow on arc `a` (0 where the arc is idle).
    pub fn rho(&self, a: usize) -> f64 {
        let f = self.f1[a] + self.f2[a];
        if f > 0.0 {
            self.f1[a] / f
        } else {
            0.0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.f1.iter().chain(&self.f2).chain(&self.processing).all(|&x| x == 0.0)
    }

    fn snap(&mut self) {
        let floor = self.floor;
        for x in self.f1.iter_mut().chain(self.f2.iter_mut()).chain(self.processing.iter_mut()) {
            if *x < floor {
                *x = 0.0;
            }
        }
    }

    /// Net flow leaving the source.
    pub fn delivered(&self, net: &FlowNetwork) -> f64 {
        let out: f64 = net.out_arcs(self.source).iter().map(|&a| self.f1[a] + self.f2[a]).sum();
        let inc: f64 = net.in_arcs(self.source).iter().map(|&a| self.f1[a] + self.f2[a]).sum();
        out - inc
    }
}

/// Finds a directed cycle among arcs with positive `flow`, as a list of arcs.
fn find_cycle(net: &FlowNetwork, flow: &[f64]) -> Option<Vec<usize>> {
    // 0 = unvisited, 1 = on stack, 2 = done
    let n = net.node_count();
    let mut state = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let outs = net.out_arcs(v);
            if *next >= outs.len() {
                state[v] = 2;
                stack.pop();
                continue;
            }
            let a = outs[*next];
            *next += 1;
            if flow[a] <= 0.0 {
                continue;
            }
            let u = net.arc(a).head;
            match state[u] {
                0 => {
                    state[u] = 1;
                    via[u] = a;
                    stack.push((u, 0));
                }
                1 => {
                    let mut cycle = vec![a];
                    let mut x = v;
                    while x != u {
                        cycle.push(via[x]);
                        x = net.arc(via[x]).tail;
                    }
                    cycle.reverse();
                    return Some(cycle);
                }
                _ => {}
            }
        }
    }
    None
}

/// Cancels every directed cycle of positive `flow`, snapping values below
/// `floor` to zero. Returns the number of cycles removed.
pub(crate) fn cancel_in(net: &FlowNetwork, flow: &mut [f64], floor: f64) -> usize {
    let mut count = 0;
    while let Some(cycle) = find_cycle(net, flow) {
        let m = cycle.iter().map(|&a| flow[a]).fold(f64::INFINITY, f64::min);
        for &a in &cycle {
            flow[a] -= m;
            if flow[a] < floor {
                flow[a] = 0.0;
            }
        }
        count += 1;
    }
    count
}

/// Removes every cycle that carries only unprocessed, or only processed,
/// flow. Delivered flow and processing are unchanged. Returns the number of
/// cycles cancelled.
pub fn cancel_loops(net: &FlowNetwork, view: &mut CommodityView) -> usize {
    let floor = view.floor;
    cancel_in(net, &mut view.f1, floor) + cancel_in(net, &mut view.f2, floor)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    /// Lazily updated priority queues per vertex.
    Heap,
    /// Plain scan over a vertex's arcs.
    Linear,
}

#[derive(Clone, Copy)]
struct Keyed {
    key: f64,
    arc: usize,
}

impl PartialEq for Keyed {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Keyed {}
impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Keyed {
    // Max-heap on key, then lowest arc index first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.total_cmp(&other.key).then_with(|| other.arc.cmp(&self.arc))
    }
}

/// Per-vertex arc selection: max ρ over incoming arcs with `f1 > 0`, and
/// min ρ over outgoing arcs with `f2 > 0`, ties to the lowest arc index.
struct Selector {
    mode: Traversal,
    incoming: Vec<BinaryHeap<Keyed>>,
    outgoing: Vec<BinaryHeap<Keyed>>,
}

impl Selector {
    fn new(net: &FlowNetwork, view: &CommodityView, mode: Traversal) -> Self {
        let n = net.node_count();
        let mut s = Selector {
            mode,
            incoming: vec![BinaryHeap::new(); n],
            outgoing: vec![BinaryHeap::new(); n],
        };
        if mode == Traversal::Heap {
            for a in 0..net.arc_count() {
                s.touch(net, view, a);
            }
        }
        s
    }

    /// Records that arc `a`'s values changed.
    fn touch(&mut self, net: &FlowNetwork, view: &CommodityView, a: usize) {
        if self.mode == Traversal::Linear {
            return;
        }
        let arc = net.arc(a);
        let rho = view.rho(a);
        if view.f1[a] > 0.0 {
            self.incoming[arc.head].push(Keyed { key: rho, arc: a });
        }
        if view.f2[a] > 0.0 {
            self.outgoing[arc.tail].push(Keyed { key: -rho, arc: a });
        }
    }

    fn best_in(&mut self, net: &FlowNetwork, view: &CommodityView, v: usize) -> Option<usize> {
        match self.mode {
            Traversal::Linear => {
                let mut best: Option<(f64, usize)> = None;
                for &a in net.in_arcs(v) {
                    if view.f1[a] > 0.0 {
                        let r = view.rho(a);
                        if best.is_none_or(|(br, ba)| r > br || (r == br && a < ba)) {
                            best = Some((r, a));
                        }
                    }
                }
                best.map(|(_, a)| a)
            }
            Traversal::Heap => {
                let heap = &mut self.incoming[v];
                while let Some(&top) = heap.peek() {
                    if view.f1[top.arc] > 0.0 && view.rho(top.arc) == top.key {
                        return Some(top.arc);
                    }
                    heap.pop();
                }
                None
            }
        }
    }

    fn best_out(&mut self, net: &FlowNetwork, view: &CommodityView, v: usize) -> Option<usize> {
        match self.mode {
            Traversal::Linear => {
                let mut best: Option<(f64, usize)> = None;
                for &a in net.out_arcs(v) {
                    if view.f2[a] > 0.0 {
                        let r = view.rho(a);
                        if best.is_none_or(|(br, ba)| r < br || (r == br && a < ba)) {
                            best = Some((r, a));
                        }
                    }
                }
                best.map(|(_, a)| a)
            }
            Traversal::Heap => {
                let heap = &mut self.outgoing[v];
                while let Some(&top) = heap.peek() {
                    if view.f2[top.arc] > 0.0 && -view.rho(top.arc) == top.key {
                        return Some(top.arc);
                    }
                    heap.pop();
                }
                None
            }
        }
    }
}

/// Extracts walks from a loop-free view until it is exhausted. Returns the
/// walks and the number of extraction steps.
pub fn extract_walks(net: &FlowNetwork, view: &mut CommodityView, mode: Traversal) -> Result<(Vec<WalkEntry>, usize)> {
    let mut selector = Selector::new(net, view, mode);
    let mut walks = Vec::new();
    let mut steps = 0;
    let tiny = view.floor * 1e3;
    // Bounds every walk half; a longer trace means the input had a cycle.
    let max_len = net.node_count();

    let mut v = 0;
    while v < net.node_count() {
        if view.processing[v] <= 0.0 {
            v += 1;
            continue;
        }
        let mut back = Vec::new();
        let mut x = v;
        let mut stuck = false;
        while x != view.source {
            match selector.best_in(net, view, x) {
                Some(a) if back.len() < max_len => {
                    back.push(a);
                    x = net.arc(a).tail;
                }
                _ => {
                    stuck = true;
                    break;
                }
            }
        }
        let mut fwd = Vec::new();
        let mut y = v;
        while !stuck && y != view.sink {
            match selector.best_out(net, view, y) {
                Some(a) if fwd.len() < max_len => {
                    fwd.push(a);
                    y = net.arc(a).head;
                }
                _ => {
                    stuck = true;
                    break;
                }
            }
        }
        if stuck {
            if view.processing[v] <= tiny {
                view.processing[v] = 0.0;
                continue;
            }
            return Err(Error::Internal(format!(
                "decomposition of demand {} got stuck at {} with {} processing left; the edge solution is infeasible",
                view.demand,
                net.node_name(v),
                view.processing[v]
            )));
        }

        let amount = back
            .iter()
            .map(|&a| view.f1[a])
            .chain(fwd.iter().map(|&a| view.f2[a]))
            .fold(view.processing[v], f64::min);
        let floor = view.floor;
        let sub = |x: &mut f64| {
            *x -= amount;
            if *x < floor {
                *x = 0.0;
            }
        };
        for &a in &back {
            sub(&mut view.f1[a]);
        }
        for &a in &fwd {
            sub(&mut view.f2[a]);
        }
        sub(&mut view.processing[v]);
        for &a in back.iter().chain(&fwd) {
            selector.touch(net, view, a);
        }
        steps += 1;

        back.reverse();
        back.extend(fwd);
        walks.push(WalkEntry {
            demand: view.demand,
            arcs: back,
            flow: amount,
            processing: vec![(v, amount)],
        });
    }
    // Whatever is left is round-off; clear it.
    view.f1.iter_mut().chain(view.f2.iter_mut()).for_each(|x| *x = 0.0);
    Ok((walks, steps))
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DecomposeStats {
    pub cancelled_cycles: Vec<usize>,
    /// Extraction steps per commodity.
    pub extractions: Vec<usize>,
}

/// Decomposes a feasible edge solution into 2-walks.
pub fn decompose(net: &FlowNetwork, demands: &[Demand], sol: &EdgeFlowSolution) -> Result<WalkFlowSolution> {
    decompose_with(net, demands, sol, Traversal::Heap).map(|(w, _)| w)
}

pub fn decompose_with(
    net: &FlowNetwork,
    demands: &[Demand],
    sol: &EdgeFlowSolution,
    mode: Traversal,
) -> Result<(WalkFlowSolution, DecomposeStats)> {
    if sol.commodities() != demands.len()
        || sol.flow.iter().chain(&sol.unprocessed).any(|r| r.len() != net.arc_count())
        || sol.processing.iter().any(|r| r.len() != net.node_count())
    {
        return Err(Error::Structural("edge solution dimensions do not match the instance".into()));
    }
    let mut out = WalkFlowSolution::default();
    let mut stats = DecomposeStats::default();
    for i in 0..demands.len() {
        let mut view = CommodityView::new(sol, demands, i);
        stats.cancelled_cycles.push(cancel_loops(net, &mut view));
        let (walks, steps) = extract_walks(net, &mut view, mode)?;
        stats.extractions.push(steps);
        out.entries.extend(walks);
    }
    Ok((out, stats))
}
