//! Dense permutations of `{0..n}` with Lehmer-code ranking, and
//! breadth-first word lengths over `S_n` for small `n`.
//!
//! A dense permutation is an image table `t` with `t[i]` the image of `i`.
//! Products are left to right, matching [`super::Permutation`].

/// Largest degree for which full rank tables are built.
pub const MAX_DENSE_DEGREE: usize = 10;

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Lehmer rank of `perm` in `0..n!`.
pub fn rank(perm: &[u8]) -> usize {
    let n = perm.len();
    let mut r = 0usize;
    let mut used: u32 = 0;
    for (i, &v) in perm.iter().enumerate() {
        let smaller_unused = (v as u32 - (used & ((1u32 << v) - 1)).count_ones()) as usize;
        r = r * (n - i) + smaller_unused;
        used |= 1 << v;
    }
    r
}

/// Inverse of [`rank`].
pub fn unrank(mut r: usize, n: usize) -> Vec<u8> {
    let mut digits = vec![0usize; n];
    for i in (0..n).rev() {
        let base = n - i;
        digits[i] = r % base;
        r /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.into_iter().map(|d| pool.remove(d)).collect()
}

/// `a` first, then `b`.
pub fn compose(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().map(|&x| b[x as usize]).collect()
}

pub fn compose_into(a: &[u8], b: &[u8], out: &mut [u8]) {
    for (o, &x) in out.iter_mut().zip(a) {
        *o = b[x as usize];
    }
}

pub fn inverse(a: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

pub fn identity(n: usize) -> Vec<u8> {
    (0..n as u8).collect()
}

pub fn is_even(a: &[u8]) -> bool {
    let mut seen = vec![false; a.len()];
    let mut transpositions = 0;
    for start in 0..a.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = a[x] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

/// All of `S_n` in rank order.
pub fn all(n: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..factorial(n)).map(move |r| unrank(r, n))
}

/// All of `A_n` in rank order.
pub fn all_even(n: usize) -> impl Iterator<Item = Vec<u8>> {
    all(n).filter(|p| is_even(p))
}

/// Breadth-first search tree of a Cayley graph of a subgroup of `S_n`,
/// indexed by Lehmer rank. Edges go `g -> g * s` (left to right).
#[derive(Debug, Clone)]
pub struct DenseBfs {
    pub degree: usize,
    /// Word length, `u8::MAX` when unreachable.
    pub dist: Vec<u8>,
    /// Rank of the BFS parent; meaningless where unreachable.
    pub parent: Vec<u32>,
    /// Index into the generator list of the last letter.
    pub via: Vec<u32>,
}

pub const UNREACHED: u8 = u8::MAX;

impl DenseBfs {
    pub fn run(degree: usize, generators: &[Vec<u8>]) -> DenseBfs {
        assert!(degree <= MAX_DENSE_DEGREE, "degree {degree} too large for dense BFS");
        let size = factorial(degree);
        let mut dist = vec![UNREACHED; size];
        let mut parent = vec![0u32; size];
        let mut via = vec![0u32; size];
        let start = rank(&identity(degree));
        dist[start] = 0;
        let mut frontier = vec![start];
        let mut scratch = vec![0u8; degree];
        let mut level = 0u8;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &r in &frontier {
                let g = unrank(r, degree);
                for (gi, s) in generators.iter().enumerate() {
                    compose_into(&g, s, &mut scratch);
                    let t = rank(&scratch);
                    if dist[t] == UNREACHED {
                        dist[t] = level + 1;
                        parent[t] = r as u32;
                        via[t] = gi as u32;
                        next.push(t);
                    }
                }
            }
            frontier = next;
            level += 1;
        }
        DenseBfs { degree, dist, parent, via }
    }

    pub fn distance(&self, perm: &[u8]) -> Option<u8> {
        let d = self.dist[rank(perm)];
        (d != UNREACHED).then_some(d)
    }

    /// Generator indices `i_1, ..., i_k` with `perm = s_{i_1} ... s_{i_k}`.
    pub fn word(&self, perm: &[u8]) -> Option<Vec<usize>> {
        let mut r = rank(perm);
        if self.dist[r] == UNREACHED {
            return None;
        }
        let mut letters = Vec::with_capacity(self.dist[r] as usize);
        while self.dist[r] > 0 {
            letters.push(self.via[r] as usize);
            r = self.parent[r] as usize;
        }
        letters.reverse();
        Some(letters)
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }

    pub fn max_distance(&self) -> u8 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }
}

/// All 3-cycles of `S_n` as dense tables.
pub fn three_cycles(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                // (a b c) and (a c b) with a the minimum
                if a < b && a < c && b != c {
                    let mut t = identity(n);
                    t[a] = b as u8;
                    t[b] = c as u8;
                    t[c] = a as u8;
                    out.push(t);
                }
            }
        }
    }
    out
}
