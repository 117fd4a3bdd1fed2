//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! enumeration or measure code under test.
#![allow(dead_code)]

use hyprd::group::Word;

pub const Q: usize = 3;

/// Free reduction with a stack.
pub fn reduce(letters: &[u8]) -> Vec<u8> {
    let mut out: Vec<u8> = Vec::new();
    for &l in letters {
        if out.last() == Some(&(l ^ 1)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// All reduced words of length exactly `n` over `2k` letters, by recursion.
pub fn words(k: usize, n: usize) -> Vec<Vec<u8>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &acc {
            for l in 0..(2 * k) as u8 {
                if w.last() != Some(&(l ^ 1)) {
                    let mut x = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
        }
        acc = next;
    }
    acc
}

pub fn word(w: &[u8]) -> Word {
    Word(w.to_vec())
}

pub fn lcp(a: &[u8], b: &[u8]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `(x,y)_o = (|x| + |y| − |x⁻¹y|)/2` from the word metric.
pub fn gromov_metric(x: &[u8], y: &[u8]) -> usize {
    let inv: Vec<u8> = x.iter().rev().map(|l| l ^ 1).collect();
    let mut z = inv;
    z.extend_from_slice(y);
    let d = reduce(&z).len();
    (x.len() + y.len() - d) / 2
}

/// Fraction of depth-`depth` words that start with `prefix`.
pub fn counted_measure(k: usize, prefix: &[u8], depth: usize) -> f64 {
    let all = words(k, depth);
    let hits = all.iter().filter(|w| w.starts_with(prefix)).count();
    hits as f64 / all.len() as f64
}

/// A deterministic pseudo-random sequence for tests that must not depend on the crate's RNG plumbing.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }

    pub fn unit(&mut self) -> f64 {
        self.next_u64() as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
