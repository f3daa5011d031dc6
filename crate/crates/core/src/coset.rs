//! Coset table over an involutive alphabet.
//!
//! Entry `(v, x)` is the vertex reached from `v` by the letter `a_x`; the
//! inverse entry `(v·a_x, σ(x))` is kept in step. Relator scanning follows the
//! HLT strategy and coincidences are processed with a union-find work queue, so
//! the resulting identifications do not depend on the order they were found in.

use std::collections::VecDeque;

use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
pub struct CosetTable {
    degree: usize,
    sigma: Vec<usize>,
    table: Vec<u32>,
    parent: Vec<u32>,
    scanned: Vec<bool>,
    cap: usize,
    live: usize,
    queue: Vec<u32>,
}

impl CosetTable {
    /// A table holding only the base coset `0`; at most `cap` cosets may be allocated.
    pub fn new(sigma: &[usize], cap: usize) -> Self {
        let degree = sigma.len();
        CosetTable {
            degree,
            sigma: sigma.to_vec(),
            table: vec![NONE; degree],
            parent: vec![0],
            scanned: vec![false],
            cap,
            live: 1,
            queue: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn allocated(&self) -> usize {
        self.parent.len()
    }

    pub fn live_count(&self) -> usize {
        self.live
    }

    pub fn is_live(&self, v: usize) -> bool {
        self.parent[v] as usize == v
    }

    pub fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut c = v;
        while self.parent[c] as usize != r {
            let next = self.parent[c] as usize;
            self.parent[c] = r as u32;
            c = next;
        }
        r
    }

    /// Representative without path compression.
    pub fn rep(&self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
        }
        v
    }

    fn raw(&self, v: usize, x: usize) -> Option<usize> {
        let e = self.table[v * self.degree + x];
        (e != NONE).then_some(e as usize)
    }

    fn set(&mut self, v: usize, x: usize, w: usize) {
        self.table[v * self.degree + x] = w as u32;
    }

    fn unset(&mut self, v: usize, x: usize) {
        self.table[v * self.degree + x] = NONE;
    }

    /// `v·a_x` if defined. Only meaningful for live `v` once no coincidence is pending.
    pub fn get(&self, v: usize, x: usize) -> Option<usize> {
        self.raw(v, x).map(|w| self.rep(w))
    }

    pub fn is_scanned(&self, v: usize) -> bool {
        self.scanned[v]
    }

    pub fn row_complete(&self, v: usize) -> bool {
        (0..self.degree).all(|x| self.raw(v, x).is_some())
    }

    fn new_coset(&mut self) -> Result<usize> {
        let n = self.parent.len();
        if n >= self.cap {
            return Err(Error::ResourceLimit { limit: self.cap });
        }
        self.parent.push(n as u32);
        self.scanned.push(false);
        self.table.extend(std::iter::repeat_n(NONE, self.degree));
        self.live += 1;
        Ok(n)
    }

    fn define(&mut self, v: usize, x: usize) -> Result<usize> {
        let w = self.new_coset()?;
        self.set(v, x, w);
        self.set(w, self.sigma[x], v);
        Ok(w)
    }

    /// Defines every missing neighbour of `v`.
    pub fn fill_row(&mut self, v: usize) -> Result<()> {
        for x in 0..self.degree {
            if self.raw(v, x).is_none() {
                self.define(v, x)?;
            }
        }
        Ok(())
    }

    /// Makes `rel` a closed walk at `v`, defining cosets where needed.
    pub fn scan_and_fill(&mut self, v: usize, rel: &[usize]) -> Result<()> {
        let n = rel.len();
        if n == 0 {
            return Ok(());
        }
        let (mut f, mut i) = (v, 0);
        let (mut b, mut j) = (v, n);
        loop {
            while i < j {
                match self.raw(f, rel[i]) {
                    Some(w) => {
                        f = w;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.raw(b, self.sigma[rel[j - 1]]) {
                    Some(w) => {
                        b = w;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                let x = rel[i];
                self.set(f, x, b);
                match self.raw(b, self.sigma[x]) {
                    None => self.set(b, self.sigma[x], f),
                    Some(g) if g != f => self.coincidence(g, f),
                    Some(_) => {}
                }
                return Ok(());
            }
            f = self.define(f, rel[i])?;
            i += 1;
        }
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.find(k), self.find(l));
        if k == l {
            return;
        }
        let (lo, hi) = (k.min(l), k.max(l));
        self.parent[hi] = lo as u32;
        self.scanned[lo] |= self.scanned[hi];
        self.live -= 1;
        self.queue.push(hi as u32);
    }

    /// Identifies `a` and `b` and everything that follows from it.
    pub fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        let mut idx = 0;
        while idx < self.queue.len() {
            let e = self.queue[idx] as usize;
            idx += 1;
            for x in 0..self.degree {
                let Some(f) = self.raw(e, x) else { continue };
                let sx = self.sigma[x];
                if self.raw(f, sx) == Some(e) {
                    self.unset(f, sx);
                }
                let e1 = self.find(e);
                let f1 = self.find(f);
                if let Some(g) = self.raw(e1, x) {
                    self.merge(f1, g);
                } else if let Some(g) = self.raw(f1, sx) {
                    self.merge(e1, g);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, sx, e1);
                }
            }
        }
        self.queue.clear();
    }

    /// Fills the row of `v` and scans every relator there.
    pub fn process(&mut self, v: usize, relators: &[Vec<usize>]) -> Result<()> {
        self.fill_row(v)?;
        for r in relators {
            if !self.is_live(v) {
                return Ok(());
            }
            self.scan_and_fill(v, r)?;
        }
        if self.is_live(v) {
            self.scanned[v] = true;
        }
        Ok(())
    }

    /// HLT enumeration to completion; fails with `ResourceLimit` if the cap is hit.
    pub fn enumerate(&mut self, relators: &[Vec<usize>]) -> Result<()> {
        let mut v = 0;
        while v < self.allocated() {
            if self.is_live(v) && !self.scanned[v] {
                self.process(v, relators)?;
            }
            v += 1;
        }
        Ok(())
    }

    /// Breadth-first distances from coset `0` over live cosets (`usize::MAX` if unreached).
    pub fn distances(&self) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.allocated()];
        dist[0] = 0;
        let mut q = VecDeque::from([0usize]);
        while let Some(v) = q.pop_front() {
            for x in 0..self.degree {
                if let Some(w) = self.get(v, x) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        q.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// Scans `rel` at `v` without defining anything: a one-letter gap is
    /// deduced, a closed walk ending elsewhere is a coincidence. Returns true
    /// when the table changed.
    fn scan_deduce(&mut self, v: usize, rel: &[usize], stack: &mut Vec<(usize, usize)>) -> bool {
        let n = rel.len();
        let (mut f, mut i) = (v, 0);
        while i < n {
            match self.raw(f, rel[i]) {
                Some(w) => {
                    f = w;
                    i += 1;
                }
                None => break,
            }
        }
        if i == n {
            if self.rep(f) != self.rep(v) {
                self.coincidence(f, v);
                return true;
            }
            return false;
        }
        let (mut b, mut j) = (v, n);
        while j > i {
            match self.raw(b, self.sigma[rel[j - 1]]) {
                Some(w) => {
                    b = w;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i {
            self.coincidence(f, b);
            return true;
        }
        if j == i + 1 {
            let x = rel[i];
            self.set(f, x, b);
            match self.raw(b, self.sigma[x]) {
                None => self.set(b, self.sigma[x], f),
                Some(g) if g != f => self.coincidence(g, f),
                Some(_) => {}
            }
            stack.push((f, x));
            return true;
        }
        false
    }

    /// Rescans every relator through the edges on `stack` until nothing new follows.
    fn deduce(&mut self, by_letter: &[Vec<usize>], relators: &[Vec<usize>], stack: &mut Vec<(usize, usize)>) {
        while let Some((v, x)) = stack.pop() {
            let v = self.find(v);
            let Some(w) = self.get(v, x) else { continue };
            for &r in &by_letter[x] {
                self.scan_deduce(self.rep(v), &relators[r], stack);
            }
            for &r in &by_letter[self.sigma[x]] {
                self.scan_deduce(self.rep(w), &relators[r], stack);
            }
        }
    }

    /// Felsch-style enumeration of the cosets within `depth` of the base:
    /// rows are defined breadth first and relators only ever deduce, so
    /// nothing is defined beyond `depth`. `relators` must be closed under
    /// cyclic rotation and inversion.
    pub fn enumerate_to_depth(&mut self, relators: &[Vec<usize>], depth: usize) -> Result<()> {
        let mut by_letter = vec![Vec::new(); self.degree];
        for (k, r) in relators.iter().enumerate() {
            if let Some(&x) = r.first() {
                by_letter[x].push(k);
            }
        }
        let mut stack = Vec::new();
        loop {
            let dist = self.distances();
            let mut todo: Vec<usize> = (0..dist.len())
                .filter(|&v| dist[v] < depth && self.is_live(v) && !self.row_complete(v))
                .collect();
            todo.sort_by_key(|&v| dist[v]);
            let mut level = dist;
            for v in todo {
                let v = self.find(v);
                if level.get(v).is_none_or(|&l| l >= depth) {
                    continue;
                }
                for x in 0..self.degree {
                    if self.raw(v, x).is_some() || !self.is_live(v) {
                        continue;
                    }
                    let w = self.define(v, x)?;
                    level.push(level[v] + 1);
                    debug_assert_eq!(level.len(), w + 1);
                    stack.push((v, x));
                    self.deduce(&by_letter, relators, &mut stack);
                }
            }
            // closing sweep: every relator at every coset inside the radius
            let dist = self.distances();
            let mut changed = false;
            for v in 0..dist.len() {
                if dist[v] <= depth && self.is_live(v) {
                    for r in relators {
                        if !self.is_live(v) {
                            break;
                        }
                        changed |= self.scan_deduce(v, r, &mut stack);
                        self.deduce(&by_letter, relators, &mut stack);
                    }
                }
            }
            let dist = self.distances();
            let incomplete = (0..dist.len()).any(|v| dist[v] < depth && self.is_live(v) && !self.row_complete(v));
            if !changed && !incomplete {
                return Ok(());
            }
        }
    }

    /// Follows a word from `v`; `None` when it leaves the defined part.
    pub fn trace(&self, v: usize, word: &[usize]) -> Option<usize> {
        word.iter().try_fold(self.rep(v), |c, &x| self.get(c, x))
    }

    /// True when every live coset has a complete row.
    pub fn is_closed(&self) -> bool {
        (0..self.allocated()).all(|v| !self.is_live(v) || self.row_complete(v))
    }
}

/// All cyclic rotations of the words and of their formal inverses, deduplicated.
pub fn cyclic_closure(words: &[Vec<usize>], sigma: &[usize]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for w in words {
        let inv: Vec<usize> = w.iter().rev().map(|&x| sigma[x]).collect();
        for base in [w, &inv] {
            for k in 0..base.len() {
                let mut r = base.clone();
                r.rotate_left(k);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}
