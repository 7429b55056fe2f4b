//! Paths of distinct vertices with `O(1)` neighbours and `O(log n)` rank,
//! split and concatenation.
//!
//! A [`PathForest`] owns one node per vertex id. Each node sits in an AVL
//! tree ordered by path position (with subtree sizes for ranks) and in a
//! doubly linked list threading the same path. A [`PathSeq`] is a handle to
//! one tree; handles are not `Clone`, so a vertex can only ever be reached
//! through the one path that holds it.

use crate::error::{Error, Result};
use crate::Vertex;

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    prev: u32,
    next: u32,
    size: u32,
    height: u8,
    attached: bool,
}

impl Node {
    const EMPTY: Node = Node {
        left: NIL,
        right: NIL,
        parent: NIL,
        prev: NIL,
        next: NIL,
        size: 0,
        height: 0,
        attached: false,
    };
}

/// Handle to one path stored in a [`PathForest`].
#[derive(Debug, PartialEq, Eq)]
pub struct PathSeq {
    root: u32,
    first: u32,
    last: u32,
    len: usize,
}

impl PathSeq {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn start(&self) -> Vertex {
        self.first
    }

    pub fn end(&self) -> Vertex {
        self.last
    }
}

/// Node storage shared by all paths over the vertex range `0..capacity`.
#[derive(Debug, Clone)]
pub struct PathForest {
    nodes: Vec<Node>,
    live: usize,
}

fn opt(x: u32) -> Option<Vertex> {
    (x != NIL).then_some(x)
}

impl PathForest {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity < NIL as usize);
        Self { nodes: vec![Node::EMPTY; capacity], live: 0 }
    }

    pub fn capacity(&self) -> usize {
        self.nodes.len()
    }

    /// Number of path handles created and not yet merged or dissolved.
    pub fn live_paths(&self) -> usize {
        self.live
    }

    /// Is `v` on some path of this forest?
    pub fn is_attached(&self, v: Vertex) -> bool {
        self.nodes.get(v as usize).is_some_and(|n| n.attached)
    }

    /// Builds a path in input order in `O(k)`.
    pub fn from_sequence(&mut self, vertices: &[Vertex]) -> Result<PathSeq> {
        if vertices.is_empty() {
            return Err(Error::invalid("a path needs at least one vertex"));
        }
        for (i, &v) in vertices.iter().enumerate() {
            let bad = if v as usize >= self.nodes.len() {
                Some(format!("vertex {v} outside forest capacity {}", self.nodes.len()))
            } else if self.nodes[v as usize].attached {
                Some(format!("vertex {v} repeated or already on a path"))
            } else {
                None
            };
            if let Some(msg) = bad {
                for &u in &vertices[..i] {
                    self.nodes[u as usize].attached = false;
                }
                return Err(Error::InvalidArgument(msg));
            }
            self.nodes[v as usize].attached = true;
        }
        for (i, &v) in vertices.iter().enumerate() {
            let node = &mut self.nodes[v as usize];
            node.prev = if i > 0 { vertices[i - 1] } else { NIL };
            node.next = vertices.get(i + 1).copied().unwrap_or(NIL);
        }
        let root = self.build_balanced(vertices);
        self.nodes[root as usize].parent = NIL;
        self.live += 1;
        Ok(PathSeq { root, first: vertices[0], last: vertices[vertices.len() - 1], len: vertices.len() })
    }

    fn build_balanced(&mut self, vs: &[Vertex]) -> u32 {
        if vs.is_empty() {
            return NIL;
        }
        let mid = vs.len() / 2;
        let l = self.build_balanced(&vs[..mid]);
        let r = self.build_balanced(&vs[mid + 1..]);
        self.set_children(vs[mid], l, r);
        vs[mid]
    }

    /// Releases every vertex of `path` in `O(|path|)`.
    pub fn dissolve(&mut self, path: PathSeq) {
        let mut cur = path.first;
        while cur != NIL {
            let next = self.nodes[cur as usize].next;
            self.nodes[cur as usize] = Node::EMPTY;
            cur = next;
        }
        self.live -= 1;
    }

    /// `O(1)` when `path` is the forest's only live path, `O(log |path|)`
    /// otherwise.
    pub fn contains(&self, path: &PathSeq, v: Vertex) -> bool {
        self.is_attached(v) && (self.live == 1 || self.root_of(v) == path.root)
    }

    fn require(&self, path: &PathSeq, v: Vertex) -> Result<()> {
        if self.contains(path, v) {
            Ok(())
        } else {
            Err(Error::NotFound(v))
        }
    }

    pub fn pred(&self, path: &PathSeq, v: Vertex) -> Result<Option<Vertex>> {
        self.require(path, v)?;
        Ok(opt(self.nodes[v as usize].prev))
    }

    pub fn succ(&self, path: &PathSeq, v: Vertex) -> Result<Option<Vertex>> {
        self.require(path, v)?;
        Ok(opt(self.nodes[v as usize].next))
    }

    /// 1-based position of `v`.
    pub fn rank(&self, path: &PathSeq, v: Vertex) -> Result<usize> {
        if !self.is_attached(v) {
            return Err(Error::NotFound(v));
        }
        let (rank, root) = self.rank_and_root(v);
        if root != path.root {
            return Err(Error::NotFound(v));
        }
        Ok(rank)
    }

    /// True iff `v` is among the first `ceil(|path| / 2)` vertices.
    pub fn half(&self, path: &PathSeq, v: Vertex) -> Result<bool> {
        Ok(self.rank(path, v)? <= path.len.div_ceil(2))
    }

    pub fn to_list(&self, path: &PathSeq) -> Vec<Vertex> {
        self.walk(path.first, path.len, |n| n.next)
    }

    pub fn to_list_reversed(&self, path: &PathSeq) -> Vec<Vertex> {
        self.walk(path.last, path.len, |n| n.prev)
    }

    fn walk(&self, from: u32, len: usize, step: impl Fn(&Node) -> u32) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(len);
        let mut cur = from;
        while cur != NIL {
            out.push(cur);
            cur = step(&self.nodes[cur as usize]);
        }
        out
    }

    /// Splits `path` so that it keeps the prefix ending at `pred(v)`; the
    /// returned path starts at `v`.
    pub fn split_before(&mut self, path: &mut PathSeq, v: Vertex) -> Result<PathSeq> {
        if !self.contains(path, v) || v == path.first {
            return Err(Error::InvalidSplit(v));
        }
        let before = self.nodes[v as usize].prev;
        let (left, right) = self.split_tree(v);
        self.nodes[before as usize].next = NIL;
        self.nodes[v as usize].prev = NIL;

        let right_len = self.size(right) as usize;
        let tail = PathSeq { root: right, first: v, last: path.last, len: right_len };
        path.root = left;
        path.last = before;
        path.len -= right_len;
        self.live += 1;
        self.debug_check_root(path);
        self.debug_check_root(&tail);
        Ok(tail)
    }

    /// Appends `right` after `left`.
    pub fn concat(&mut self, mut left: PathSeq, right: PathSeq) -> PathSeq {
        self.append(&mut left, right);
        left
    }

    /// In-place form of [`concat`](Self::concat): `left` becomes `left`
    /// followed by `right`.
    pub fn append(&mut self, left: &mut PathSeq, right: PathSeq) {
        debug_assert_ne!(left.root, right.root);
        debug_assert_eq!(self.root_of(left.last), left.root);
        debug_assert_eq!(self.root_of(right.first), right.root);
        let joint = left.last;
        let rest = if left.len == 1 {
            NIL
        } else {
            let before = self.nodes[joint as usize].prev;
            let (rest, single) = self.split_tree(joint);
            debug_assert_eq!(single, joint);
            left.last = before;
            rest
        };
        let root = self.join(rest, joint, right.root);
        self.nodes[joint as usize].next = right.first;
        self.nodes[right.first as usize].prev = joint;
        self.live -= 1;
        *left = PathSeq { root, first: left.first, last: right.last, len: left.len + right.len };
        self.debug_check_root(left);
    }

    /// Height of the path's tree (a leaf has height 1).
    pub fn height(&self, path: &PathSeq) -> usize {
        self.h(path.root) as usize
    }

    /// Full structural audit in `O(|path|)`: AVL balance, sizes, parent
    /// links, and agreement of in-order traversal with the linked list.
    pub fn check_invariants(&self, path: &PathSeq) -> std::result::Result<(), String> {
        if self.nodes[path.root as usize].parent != NIL {
            return Err("root has a parent".into());
        }
        let mut inorder = Vec::with_capacity(path.len);
        self.audit(path.root, &mut inorder)?;
        let listed = self.to_list(path);
        if inorder != listed {
            return Err(format!("tree order {inorder:?} != list order {listed:?}"));
        }
        if listed.len() != path.len {
            return Err(format!("length {} != cached {}", listed.len(), path.len));
        }
        if listed.first() != Some(&path.first) || listed.last() != Some(&path.last) {
            return Err("cached endpoints are stale".into());
        }
        let bound = 1.45 * ((path.len + 2) as f64).log2();
        if self.height(path) as f64 > bound {
            return Err(format!("height {} exceeds {bound:.2}", self.height(path)));
        }
        Ok(())
    }

    fn audit(&self, x: u32, out: &mut Vec<Vertex>) -> std::result::Result<(u8, u32), String> {
        if x == NIL {
            return Ok((0, 0));
        }
        let node = &self.nodes[x as usize];
        if !node.attached {
            return Err(format!("node {x} reachable but detached"));
        }
        for child in [node.left, node.right] {
            if child != NIL && self.nodes[child as usize].parent != x {
                return Err(format!("bad parent link below {x}"));
            }
        }
        let (hl, sl) = self.audit(node.left, out)?;
        out.push(x);
        let (hr, sr) = self.audit(node.right, out)?;
        if hl.abs_diff(hr) > 1 {
            return Err(format!("node {x} unbalanced ({hl} vs {hr})"));
        }
        if node.height != 1 + hl.max(hr) || node.size != 1 + sl + sr {
            return Err(format!("stale height or size at {x}"));
        }
        Ok((node.height, node.size))
    }

    #[inline]
    fn debug_check_root(&self, path: &PathSeq) {
        debug_assert_eq!(self.nodes[path.root as usize].parent, NIL);
        debug_assert_eq!(self.size(path.root) as usize, path.len);
    }

    // --- tree primitives -------------------------------------------------

    #[inline]
    fn h(&self, x: u32) -> u8 {
        if x == NIL {
            0
        } else {
            self.nodes[x as usize].height
        }
    }

    #[inline]
    fn size(&self, x: u32) -> u32 {
        if x == NIL {
            0
        } else {
            self.nodes[x as usize].size
        }
    }

    fn set_children(&mut self, x: u32, l: u32, r: u32) {
        for c in [l, r] {
            if c != NIL {
                self.nodes[c as usize].parent = x;
            }
        }
        let (hl, hr, sl, sr) = (self.h(l), self.h(r), self.size(l), self.size(r));
        debug_assert!(hl.abs_diff(hr) <= 2);
        let node = &mut self.nodes[x as usize];
        node.left = l;
        node.right = r;
        node.height = 1 + hl.max(hr);
        node.size = 1 + sl + sr;
    }

    fn rotate_left(&mut self, x: u32) -> u32 {
        let r = self.nodes[x as usize].right;
        let (xl, rl, rr) = (self.nodes[x as usize].left, self.nodes[r as usize].left, self.nodes[r as usize].right);
        self.set_children(x, xl, rl);
        self.set_children(r, x, rr);
        r
    }

    fn rotate_right(&mut self, x: u32) -> u32 {
        let l = self.nodes[x as usize].left;
        let (xr, ll, lr) = (self.nodes[x as usize].right, self.nodes[l as usize].left, self.nodes[l as usize].right);
        self.set_children(x, lr, xr);
        self.set_children(l, ll, x);
        l
    }

    /// AVL join: all of `l`, then `k`, then all of `r`. Cost is
    /// `O(|h(l) - h(r)| + 1)`.
    fn join(&mut self, l: u32, k: u32, r: u32) -> u32 {
        let (hl, hr) = (self.h(l), self.h(r));
        let root = if hl > hr + 1 {
            self.join_right(l, k, r)
        } else if hr > hl + 1 {
            self.join_left(l, k, r)
        } else {
            self.set_children(k, l, r);
            k
        };
        self.nodes[root as usize].parent = NIL;
        root
    }

    fn join_right(&mut self, t: u32, k: u32, r: u32) -> u32 {
        let (tl, tr) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        if self.h(tr) <= self.h(r) + 1 {
            self.set_children(k, tr, r);
            if self.h(k) <= self.h(tl) + 1 {
                self.set_children(t, tl, k);
                t
            } else {
                let k = self.rotate_right(k);
                self.set_children(t, tl, k);
                self.rotate_left(t)
            }
        } else {
            let sub = self.join_right(tr, k, r);
            self.set_children(t, tl, sub);
            if self.h(sub) <= self.h(tl) + 1 {
                t
            } else {
                self.rotate_left(t)
            }
        }
    }

    fn join_left(&mut self, l: u32, k: u32, t: u32) -> u32 {
        let (tl, tr) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        if self.h(tl) <= self.h(l) + 1 {
            self.set_children(k, l, tl);
            if self.h(k) <= self.h(tr) + 1 {
                self.set_children(t, k, tr);
                t
            } else {
                let k = self.rotate_left(k);
                self.set_children(t, k, tr);
                self.rotate_right(t)
            }
        } else {
            let sub = self.join_left(l, k, tl);
            self.set_children(t, sub, tr);
            if self.h(sub) <= self.h(tr) + 1 {
                t
            } else {
                self.rotate_right(t)
            }
        }
    }

    /// Splits the tree containing `x` into (nodes before `x`, `x` and the
    /// nodes after it), bottom-up along the ancestor chain.
    fn split_tree(&mut self, x: u32) -> (u32, u32) {
        let mut ancestors: Vec<(u32, bool)> = Vec::with_capacity(48);
        let mut c = x;
        loop {
            let p = self.nodes[c as usize].parent;
            if p == NIL {
                break;
            }
            ancestors.push((p, self.nodes[p as usize].left == c));
            c = p;
        }
        let (l, r) = (self.nodes[x as usize].left, self.nodes[x as usize].right);
        self.detach(l);
        self.detach(r);
        let mut left = l;
        let mut right = self.join(NIL, x, r);
        for (a, from_left) in ancestors {
            let (al, ar) = (self.nodes[a as usize].left, self.nodes[a as usize].right);
            if from_left {
                self.detach(ar);
                right = self.join(right, a, ar);
            } else {
                self.detach(al);
                left = self.join(al, a, left);
            }
        }
        (left, right)
    }

    fn detach(&mut self, x: u32) {
        if x != NIL {
            self.nodes[x as usize].parent = NIL;
        }
    }

    fn root_of(&self, mut x: u32) -> u32 {
        while self.nodes[x as usize].parent != NIL {
            x = self.nodes[x as usize].parent;
        }
        x
    }

    fn rank_and_root(&self, x: u32) -> (usize, u32) {
        let mut rank = self.size(self.nodes[x as usize].left) as usize + 1;
        let mut c = x;
        loop {
            let p = self.nodes[c as usize].parent;
            if p == NIL {
                return (rank, c);
            }
            if self.nodes[p as usize].right == c {
                rank += self.size(self.nodes[p as usize].left) as usize + 1;
            }
            c = p;
        }
    }
}
