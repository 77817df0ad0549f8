//! Priority queues for pending node sets.
//!
//! Node sets are inserted once and never re-prioritised, so both queues only
//! need `push` and `pop_min`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum HeapKind {
    #[default]
    Binary,
    Fibonacci,
}

/// Min-queue over `(priority, value)`; priorities must be unique for the
/// extraction order to be fully determined.
#[derive(Debug)]
pub enum PendingQueue<K: Ord> {
    Binary(BinaryHeap<Reverse<K>>),
    Fibonacci(FibonacciHeap<K>),
}

impl<K: Ord> PendingQueue<K> {
    pub fn new(kind: HeapKind) -> Self {
        match kind {
            HeapKind::Binary => PendingQueue::Binary(BinaryHeap::new()),
            HeapKind::Fibonacci => PendingQueue::Fibonacci(FibonacciHeap::new()),
        }
    }

    pub fn push(&mut self, key: K) {
        match self {
            PendingQueue::Binary(h) => h.push(Reverse(key)),
            PendingQueue::Fibonacci(h) => h.push(key),
        }
    }

    pub fn pop_min(&mut self) -> Option<K> {
        match self {
            PendingQueue::Binary(h) => h.pop().map(|Reverse(k)| k),
            PendingQueue::Fibonacci(h) => h.pop_min(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            PendingQueue::Binary(h) => h.len(),
            PendingQueue::Fibonacci(h) => h.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug)]
struct FibNode<K> {
    key: K,
    children: Vec<usize>,
}

/// Fibonacci heap without decrease-key: lazy root list, consolidation by
/// degree on extraction. Nodes live in an arena and are recycled.
#[derive(Debug)]
pub struct FibonacciHeap<K> {
    nodes: Vec<Option<FibNode<K>>>,
    free: Vec<usize>,
    roots: Vec<usize>,
    min: Option<usize>,
    len: usize,
}

impl<K: Ord> Default for FibonacciHeap<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord> FibonacciHeap<K> {
    pub fn new() -> Self {
        FibonacciHeap {
            nodes: Vec::new(),
            free: Vec::new(),
            roots: Vec::new(),
            min: None,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn key(&self, id: usize) -> &K {
        &self.nodes[id].as_ref().expect("live node").key
    }

    pub fn push(&mut self, key: K) {
        let node = Some(FibNode {
            key,
            children: Vec::new(),
        });
        let id = match self.free.pop() {
            Some(id) => {
                self.nodes[id] = node;
                id
            }
            None => {
                self.nodes.push(node);
                self.nodes.len() - 1
            }
        };
        self.roots.push(id);
        let pos = self.roots.len() - 1;
        match self.min {
            Some(m) if self.key(self.roots[m]) <= self.key(id) => {}
            _ => self.min = Some(pos),
        }
        self.len += 1;
    }

    pub fn pop_min(&mut self) -> Option<K> {
        let pos = self.min?;
        let id = self.roots.swap_remove(pos);
        let node = self.nodes[id].take().expect("live node");
        self.free.push(id);
        self.roots.extend(node.children);
        self.len -= 1;
        self.consolidate();
        Some(node.key)
    }

    fn link(&mut self, a: usize, b: usize) -> usize {
        let (parent, child) = if self.key(a) <= self.key(b) { (a, b) } else { (b, a) };
        self.nodes[parent]
            .as_mut()
            .expect("live node")
            .children
            .push(child);
        parent
    }

    fn consolidate(&mut self) {
        let mut by_degree: Vec<Option<usize>> = Vec::new();
        for mut root in std::mem::take(&mut self.roots) {
            loop {
                let d = self.nodes[root].as_ref().expect("live node").children.len();
                if by_degree.len() <= d {
                    by_degree.resize(d + 1, None);
                }
                match by_degree[d].take() {
                    Some(other) => root = self.link(root, other),
                    None => {
                        by_degree[d] = Some(root);
                        break;
                    }
                }
            }
        }
        self.roots = by_degree.into_iter().flatten().collect();
        self.min = None;
        for pos in 0..self.roots.len() {
            match self.min {
                Some(m) if self.key(self.roots[m]) <= self.key(self.roots[pos]) => {}
                _ => self.min = Some(pos),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn fibonacci_pops_in_order() {
        let mut h = FibonacciHeap::new();
        for k in [5, 1, 9, 3, 7, 2, 8] {
            h.push(k);
        }
        assert_eq!(h.pop_min(), Some(1));
        h.push(0);
        h.push(6);
        let rest: Vec<_> = std::iter::from_fn(|| h.pop_min()).collect();
        assert_eq!(rest, vec![0, 2, 3, 5, 6, 7, 8, 9]);
        assert!(h.is_empty());
    }

    proptest! {
        #[test]
        fn both_queues_agree(ops in proptest::collection::vec(prop_oneof![(0u32..50).prop_map(Some), Just(None)], 0..200)) {
            let mut bin = PendingQueue::new(HeapKind::Binary);
            let mut fib = PendingQueue::new(HeapKind::Fibonacci);
            for (i, op) in ops.into_iter().enumerate() {
                match op {
                    Some(k) => {
                        bin.push((k, i));
                        fib.push((k, i));
                    }
                    None => prop_assert_eq!(bin.pop_min(), fib.pop_min()),
                }
                prop_assert_eq!(bin.len(), fib.len());
            }
            while let Some(k) = bin.pop_min() {
                prop_assert_eq!(Some(k), fib.pop_min());
            }
            prop_assert!(fib.is_empty());
        }
    }
}
