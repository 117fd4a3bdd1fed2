//! Free group arithmetic on the Cayley tree of `F_k`.
//!
//! Letters are encoded as bytes: `2i` is the `i`-th generator and `2i + 1` its
//! inverse, so inversion of a letter is `l ^ 1`. This fixes the generator order
//! `a < A < b < B < ...` used by every enumeration in the crate.

use std::fmt;

use crate::error::{Error, Result};

const NAMES: &[u8] = b"aAbBcCdDeE";

/// Largest supported rank.
pub const MAX_RANK: usize = 5;

#[inline]
pub fn inv_letter(l: u8) -> u8 {
    l ^ 1
}

/// Rank, branching number and volume growth of `F_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupModel {
    pub k: usize,
    pub q: usize,
    pub alpha: f64,
}

/// Geometric constants of the model. All vanish on a tree.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModelConstants {
    pub delta: f64,
    pub c_x: f64,
    pub m: f64,
    pub tau: f64,
    pub rho: f64,
}

impl ModelConstants {
    pub const TREE: ModelConstants = ModelConstants {
        delta: 0.0,
        c_x: 0.0,
        m: 0.0,
        tau: 0.0,
        rho: 0.0,
    };
}

impl GroupModel {
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&k) {
            return Err(Error::InvalidParameter(format!(
                "rank k = {k} outside 2..={MAX_RANK}"
            )));
        }
        let q = 2 * k - 1;
        Ok(GroupModel {
            k,
            q,
            alpha: (q as f64).ln(),
        })
    }

    pub fn constants(&self) -> ModelConstants {
        ModelConstants::TREE
    }

    pub fn letters(&self) -> u8 {
        (2 * self.k) as u8
    }

    /// `|S_n|`, the number of reduced words of length `n`.
    pub fn sphere_size(&self, n: usize) -> usize {
        if n == 0 {
            1
        } else {
            2 * self.k * self.q.pow(n as u32 - 1)
        }
    }

    /// `1/|S_n|` computed in floating point, valid past the range of `usize`.
    pub fn sphere_weight(&self, n: usize) -> f64 {
        if n == 0 {
            1.0
        } else {
            1.0 / (2.0 * self.k as f64 * (self.q as f64).powi(n as i32 - 1))
        }
    }

    /// `|B_n|`, the number of reduced words of length at most `n`.
    pub fn ball_size(&self, n: usize) -> usize {
        (0..=n).map(|j| self.sphere_size(j)).sum()
    }

    /// Position of a reduced word among the words of its length, in lexicographic order.
    pub fn index_of(&self, w: &[u8]) -> usize {
        let mut idx = 0usize;
        let mut prev: Option<u8> = None;
        for &l in w {
            match prev {
                None => idx = l as usize,
                Some(p) => {
                    let skip = inv_letter(p);
                    let rank = if l > skip { l - 1 } else { l } as usize;
                    idx = idx * self.q + rank;
                }
            }
            prev = Some(l);
        }
        idx
    }

    /// Inverse of [`GroupModel::index_of`] for words of length `n`.
    pub fn word_at(&self, n: usize, mut idx: usize) -> Word {
        let mut ranks = vec![0usize; n];
        for slot in ranks.iter_mut().skip(1).rev() {
            *slot = idx % self.q;
            idx /= self.q;
        }
        if n > 0 {
            ranks[0] = idx;
        }
        let mut letters = Vec::with_capacity(n);
        for (i, &r) in ranks.iter().enumerate() {
            let l = if i == 0 {
                r as u8
            } else {
                let skip = inv_letter(letters[i - 1]);
                let r = r as u8;
                if r >= skip {
                    r + 1
                } else {
                    r
                }
            };
            letters.push(l);
        }
        Word(letters)
    }

    /// Letters that may follow `last` in a reduced word.
    pub fn successors(&self, last: Option<u8>) -> impl Iterator<Item = u8> {
        let skip = last.map(inv_letter);
        (0..self.letters()).filter(move |&l| Some(l) != skip)
    }

    /// All reduced words `g` with `nR <= |g| < (n+1)R`, by length and then lexicographically.
    pub fn sphere_enum(&self, n: usize, r: f64) -> SphereIter {
        let lo = (n as f64 * r).ceil() as usize;
        let hi = ((n + 1) as f64 * r).ceil() as usize;
        SphereIter {
            model: *self,
            len: lo,
            end: hi.max(lo),
            idx: 0,
        }
    }

    /// Parse a word such as `abA`. `1`, the empty string and (for `k < 5`) `e` denote the identity.
    pub fn parse(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" || (s == "e" && self.k < 5) {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(s.len());
        for c in s.bytes() {
            let pos = NAMES
                .iter()
                .position(|&n| n == c)
                .filter(|&p| p < 2 * self.k)
                .ok_or_else(|| Error::Parse(s.to_string()))?;
            letters.push(pos as u8);
        }
        Ok(Word::reduce(letters))
    }
}

/// Iterator over a (thickened) sphere of `F_k`.
#[derive(Debug, Clone)]
pub struct SphereIter {
    model: GroupModel,
    len: usize,
    end: usize,
    idx: usize,
}

impl Iterator for SphereIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        while self.len < self.end {
            if self.idx < self.model.sphere_size(self.len) {
                let w = self.model.word_at(self.len, self.idx);
                self.idx += 1;
                return Some(w);
            }
            self.len += 1;
            self.idx = 0;
        }
        None
    }
}

/// A reduced word, i.e. an element of `F_k` and a vertex of its Cayley tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: u8) -> Self {
        Word(vec![l])
    }

    /// Freely reduce an arbitrary letter string.
    pub fn reduce(letters: impl IntoIterator<Item = u8>) -> Self {
        let mut out: Vec<u8> = Vec::new();
        for l in letters {
            if out.last() == Some(&inv_letter(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[1] != inv_letter(p[0]))
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| inv_letter(l)).collect())
    }

    pub fn multiply(&self, other: &Word) -> Word {
        multiply(self, other)
    }

    pub fn prefix(&self, j: usize) -> Result<Word> {
        prefix(self, j)
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        self.0.starts_with(&p.0)
    }

    /// Append a letter; the caller guarantees reducedness.
    pub fn pushed(&self, l: u8) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for &l in &self.0 {
            write!(f, "{}", NAMES[l as usize] as char)?;
        }
        Ok(())
    }
}

/// Reduced form of the concatenation `ab`.
pub fn multiply(a: &Word, b: &Word) -> Word {
    let x = &a.0;
    let y = &b.0;
    let mut c = 0;
    while c < x.len() && c < y.len() && x[x.len() - 1 - c] == inv_letter(y[c]) {
        c += 1;
    }
    let mut out = Vec::with_capacity(x.len() + y.len() - 2 * c);
    out.extend_from_slice(&x[..x.len() - c]);
    out.extend_from_slice(&y[c..]);
    Word(out)
}

/// Longest common prefix length of two letter strings.
pub fn common_prefix(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Gromov product `(a, b)_o`, the common prefix length on the tree.
pub fn gromov(a: &Word, b: &Word) -> usize {
    common_prefix(&a.0, &b.0)
}

pub fn prefix(w: &Word, j: usize) -> Result<Word> {
    if j > w.len() {
        return Err(Error::OutOfRange {
            index: j,
            len: w.len(),
        });
    }
    Ok(Word(w.0[..j].to_vec()))
}

/// Eventually periodic infinite reduced word `head · tail · tail · ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoundaryPoint {
    pub head: Word,
    pub tail: u8,
}

impl BoundaryPoint {
    /// Returns `None` when the tail would cancel the head.
    pub fn new(head: Word, tail: u8) -> Option<Self> {
        if head.last() == Some(inv_letter(tail)) || !head.is_reduced() {
            return None;
        }
        Some(BoundaryPoint::canonical(head, tail))
    }

    pub fn letter(&self, i: usize) -> u8 {
        self.head.0.get(i).copied().unwrap_or(self.tail)
    }

    /// First `n` letters.
    pub fn truncate(&self, n: usize) -> Word {
        Word((0..n).map(|i| self.letter(i)).collect())
    }

    /// Gromov product with another boundary point; `None` when they coincide.
    pub fn gromov(&self, other: &BoundaryPoint) -> Option<usize> {
        let bound = self.head.len().max(other.head.len()) + 1;
        (0..=bound).find(|&i| self.letter(i) != other.letter(i))
    }

    /// Gromov product with a vertex.
    pub fn gromov_word(&self, w: &Word) -> usize {
        (0..w.len())
            .find(|&i| self.letter(i) != w.0[i])
            .unwrap_or(w.len())
    }

    /// The point `g·ξ`.
    pub fn translate(&self, g: &Word) -> BoundaryPoint {
        let mut letters = g.0.clone();
        for i in 0..(self.head.len() + g.len() + 1) {
            let l = self.letter(i);
            if letters.last() == Some(&inv_letter(l)) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        BoundaryPoint::canonical(Word(letters), self.tail)
    }

    fn canonical(mut head: Word, tail: u8) -> BoundaryPoint {
        while head.last() == Some(tail) {
            head.0.pop();
        }
        BoundaryPoint { head, tail }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.head.is_empty() {
            write!(f, "{}", self.head)?;
        }
        write!(f, "({})^∞", NAMES[self.tail as usize] as char)
    }
}

/// Extend `w` to a boundary point without cancellation by repeating its last letter.
pub fn boundary_extension(w: &Word) -> BoundaryPoint {
    let tail = w.last().unwrap_or(0);
    BoundaryPoint::canonical(w.clone(), tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> GroupModel {
        GroupModel::new(2).unwrap()
    }

    #[test]
    fn multiply_cancels() {
        let g = f2();
        let w = |s| g.parse(s).unwrap();
        assert_eq!(multiply(&w("ab"), &w("Ba")), w("aa"));
        assert_eq!(multiply(&w("ab"), &w("ba")), w("abba"));
        let x = w("abAB");
        assert!(multiply(&x, &x.inverse()).is_empty());
    }

    #[test]
    fn gromov_examples() {
        let g = f2();
        let w = |s| g.parse(s).unwrap();
        assert_eq!(gromov(&w("abA"), &w("ab")), 2);
        assert_eq!(gromov(&w("a"), &w("A")), 0);
        assert_eq!(gromov(&w("abba"), &w("abba")), 4);
    }

    #[test]
    fn prefix_bounds() {
        let g = f2();
        let w = g.parse("aba").unwrap();
        assert_eq!(prefix(&w, 2).unwrap(), g.parse("ab").unwrap());
        assert!(prefix(&w, 0).unwrap().is_empty());
        assert!(prefix(&w, 4).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let g = f2();
        for n in 0..6 {
            for i in 0..g.sphere_size(n) {
                let w = g.word_at(n, i);
                assert!(w.is_reduced());
                assert_eq!(g.index_of(&w.0), i);
            }
        }
    }

    #[test]
    fn extension_rule() {
        let g = f2();
        let p = boundary_extension(&g.parse("ab").unwrap());
        assert_eq!(p.truncate(5), g.parse("abbbb").unwrap());
        let e = boundary_extension(&Word::identity());
        assert_eq!(e.truncate(3), g.parse("aaa").unwrap());
    }

    #[test]
    fn display_names() {
        let g = f2();
        assert_eq!(g.parse("aBAb").unwrap().to_string(), "aBAb");
        assert_eq!(Word::identity().to_string(), "1");
        assert!(g.parse("c").is_err());
    }
}
