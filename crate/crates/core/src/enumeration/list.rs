//! Doubly linked list of window slots, stored as index arrays.

const NIL: u32 = u32::MAX;

/// Intrusive doubly linked list over node ids `0..capacity`, with a dummy head.
///
/// Detached nodes carry no links. The list does not know what the nodes mean;
/// the enumeration keeps it sorted by window end time.
#[derive(Clone, Debug)]
pub struct WindowList {
    next: Vec<u32>,
    prev: Vec<u32>,
    attached: Vec<bool>,
    len: usize,
}

impl WindowList {
    pub fn with_capacity(capacity: usize) -> Self {
        WindowList {
            next: vec![NIL; capacity + 1],
            prev: vec![NIL; capacity + 1],
            attached: vec![false; capacity],
            len: 0,
        }
    }

    fn head(&self) -> u32 {
        (self.next.len() - 1) as u32
    }

    fn slot(&self, after: Option<u32>) -> u32 {
        after.unwrap_or_else(|| self.head())
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_attached(&self, node: u32) -> bool {
        self.attached[node as usize]
    }

    pub fn first(&self) -> Option<u32> {
        self.next_of(self.head())
    }

    /// Successor of `node`, or of the head when `node` is `None`.
    pub fn next(&self, node: Option<u32>) -> Option<u32> {
        self.next_of(self.slot(node))
    }

    pub fn prev(&self, node: u32) -> Option<u32> {
        let p = self.prev[node as usize];
        (p != NIL && p != self.head()).then_some(p)
    }

    fn next_of(&self, raw: u32) -> Option<u32> {
        let n = self.next[raw as usize];
        (n != NIL).then_some(n)
    }

    /// Links detached `node` right after `after` (the head when `None`).
    pub fn insert_after(&mut self, node: u32, after: Option<u32>) {
        debug_assert!(!self.attached[node as usize]);
        let a = self.slot(after);
        let b = self.next[a as usize];
        self.next[node as usize] = b;
        self.prev[node as usize] = a;
        self.next[a as usize] = node;
        if b != NIL {
            self.prev[b as usize] = node;
        }
        self.attached[node as usize] = true;
        self.len += 1;
    }

    /// Unlinks attached `node` and clears its links.
    pub fn delete(&mut self, node: u32) {
        debug_assert!(self.attached[node as usize]);
        let (p, n) = (self.prev[node as usize], self.next[node as usize]);
        self.next[p as usize] = n;
        if n != NIL {
            self.prev[n as usize] = p;
        }
        self.next[node as usize] = NIL;
        self.prev[node as usize] = NIL;
        self.attached[node as usize] = false;
        self.len -= 1;
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        std::iter::successors(self.first(), move |&x| self.next(Some(x)))
    }

    /// Checks link symmetry and the detached-node invariant.
    pub fn is_consistent(&self) -> bool {
        let mut count = 0;
        let mut prev = self.head();
        let mut cur = self.next[prev as usize];
        while cur != NIL {
            if self.prev[cur as usize] != prev || !self.attached[cur as usize] {
                return false;
            }
            count += 1;
            if count > self.attached.len() {
                return false;
            }
            prev = cur;
            cur = self.next[cur as usize];
        }
        let detached_clean = (0..self.attached.len()).all(|i| {
            self.attached[i] || (self.next[i] == NIL && self.prev[i] == NIL)
        });
        count == self.len && detached_clean
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_delete_order() {
        let mut l = WindowList::with_capacity(5);
        assert!(l.is_empty());
        l.insert_after(2, None);
        l.insert_after(4, Some(2));
        l.insert_after(0, None);
        l.insert_after(3, Some(2));
        assert_eq!(l.iter().collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(l.prev(2), Some(0));
        assert_eq!(l.prev(0), None);
        assert!(l.is_consistent());

        l.delete(2);
        assert!(!l.is_attached(2));
        assert_eq!(l.iter().collect::<Vec<_>>(), vec![0, 3, 4]);
        l.delete(4);
        l.delete(0);
        assert_eq!(l.iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(l.len(), 1);
        assert!(l.is_consistent());

        l.insert_after(2, Some(3));
        assert_eq!(l.iter().collect::<Vec<_>>(), vec![3, 2]);
        assert!(l.is_consistent());
    }
}
