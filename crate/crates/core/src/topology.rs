//! Deterministic generators for the supported graph families and a textual
//! spec parser, so every experiment input is reproducible from a one-line
//! description.
//!
//! Spec grammar: `<family>:<key>=<value>(,<key>=<value>)*` with
//!
//! ```text
//! hypercube:n=4
//! mobius:v=0,n=4             v is 0 or 1
//! arycube:k=4,n=2
//! circulant:p=16,s=1+4       offsets joined by '+'
//! random-regular:n=16,d=4,seed=7
//! ```
//!
//! The canonical form uses exactly this key ordering.

use crate::graph::Graph;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

/// Largest vertex count a generator will build; beyond this the request is
/// almost certainly a typo and would exhaust memory.
const MAX_VERTICES: usize = 1 << 22;

/// `n`-dimensional hypercube: `2^n` vertices labeled by n-bit strings
/// (vertex index = binary value), edges between strings at Hamming
/// distance 1. n-regular with `n * 2^(n-1)` edges.
pub fn hypercube(n: u32) -> Result<Graph> {
    if n < 1 {
        return Err(Error::validation("hypercube dimension must be at least 1"));
    }
    let size = checked_power(2, n)?;
    let mut edges = Vec::with_capacity(size * n as usize / 2);
    for v in 0..size {
        for b in 0..n {
            let u = v ^ (1usize << b);
            if u > v {
                edges.push((v, u));
            }
        }
    }
    let labels = (0..size)
        .map(|v| format!("{:0width$b}", v, width = n as usize))
        .collect();
    Graph::build(size, &edges)?.with_labels(labels)
}

/// `n`-dimensional Möbius cube.
///
/// Vertices are n-bit strings `x1..xn` (index = binary value, `x1` most
/// significant). The neighbor reached via position `i` flips bit `i` alone
/// when `x(i-1) = 0`, and flips bits `i..n` when `x(i-1) = 1`; for `i = 1`
/// the undefined `x0` is fixed to `variant`. The rule must come out
/// symmetric and n-regular, which is asserted during construction.
pub fn mobius_cube(variant: u8, n: u32) -> Result<Graph> {
    if variant > 1 {
        return Err(Error::validation(format!(
            "mobius variant must be 0 or 1, got {variant}"
        )));
    }
    if n < 1 {
        return Err(Error::validation("mobius dimension must be at least 1"));
    }
    let size = checked_power(2, n)?;
    let width = n as usize;
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::with_capacity(width); size];
    for v in 0..size {
        for i in 1..=width {
            // x(i-1): the bit left of position i; bit i sits at weight n-i.
            let left = if i == 1 {
                variant as usize
            } else {
                v >> (width - (i - 1)) & 1
            };
            let u = if left == 0 {
                v ^ (1usize << (width - i))
            } else {
                v ^ ((1usize << (width - i + 1)) - 1)
            };
            neighbors[v].push(u);
        }
    }
    for (v, nv) in neighbors.iter().enumerate() {
        let distinct: HashSet<usize> = nv.iter().copied().collect();
        if distinct.len() != width || distinct.contains(&v) {
            return Err(Error::Internal(format!(
                "mobius rule is not {width}-regular at vertex {v}"
            )));
        }
        for &u in nv {
            if !neighbors[u].contains(&v) {
                return Err(Error::Internal(format!(
                    "mobius rule is asymmetric between vertices {v} and {u}"
                )));
            }
        }
    }
    let mut edges = Vec::with_capacity(size * width / 2);
    for (v, nv) in neighbors.iter().enumerate() {
        for &u in nv {
            if u > v {
                edges.push((v, u));
            }
        }
    }
    let labels = (0..size)
        .map(|v| format!("{:0width$b}", v, width = width))
        .collect();
    Graph::build(size, &edges)?.with_labels(labels)
}

/// k-ary n-cube: `k^n` vertices labeled by strings over `{0..k-1}` (index =
/// base-k value), adjacent iff exactly one coordinate differs, by ±1 mod k.
/// For `k = 2` this is the hypercube under the same labeling; for `k >= 3`
/// it is 2n-regular.
pub fn ary_cube(k: u32, n: u32) -> Result<Graph> {
    if k < 2 {
        return Err(Error::validation("arycube radix must be at least 2"));
    }
    if n < 1 {
        return Err(Error::validation("arycube dimension must be at least 1"));
    }
    let size = checked_power(k as usize, n)?;
    let kk = k as usize;
    let mut edges = Vec::new();
    for v in 0..size {
        let mut weight = 1usize;
        for _ in 0..n {
            let digit = v / weight % kk;
            // +1 and -1 mod k coincide when k = 2.
            let up = v - digit * weight + (digit + 1) % kk * weight;
            if up > v {
                edges.push((v, up));
            }
            if kk > 2 {
                let down = v - digit * weight + (digit + kk - 1) % kk * weight;
                if down > v {
                    edges.push((v, down));
                }
            }
            weight *= kk;
        }
    }
    let labels = (0..size).map(|v| base_k_label(v, kk, n as usize)).collect();
    Graph::build(size, &edges)?.with_labels(labels)
}

fn base_k_label(mut v: usize, k: usize, width: usize) -> String {
    let mut digits = vec![0usize; width];
    for slot in digits.iter_mut().rev() {
        *slot = v % k;
        v /= k;
    }
    if k <= 10 {
        digits.iter().map(|d| char::from(b'0' + *d as u8)).collect()
    } else {
        digits
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Circulant graph on `p` vertices with connecting offsets: vertex `i` is
/// adjacent to `i ± o (mod p)` for each offset `o`. Strict validation
/// enforces the 2k-regular form: offsets in `[1, p-1]`, pairwise distinct
/// after normalizing `o -> min(o mod p, p - o mod p)`, no normalized offset
/// equal to 0 or `p/2`, and a connected result (`gcd(p, offsets) = 1`).
pub fn circulant(p: usize, offsets: &[usize]) -> Result<Graph> {
    circulant_with(p, offsets, true)
}

/// Circulant generator without the strict 2k-regularity and connectivity
/// checks; for exploratory use.
pub fn circulant_relaxed(p: usize, offsets: &[usize]) -> Result<Graph> {
    circulant_with(p, offsets, false)
}

fn circulant_with(p: usize, offsets: &[usize], strict: bool) -> Result<Graph> {
    if p < 3 {
        return Err(Error::validation("circulant order must be at least 3"));
    }
    if p > MAX_VERTICES {
        return Err(Error::validation(format!("circulant order {p} is too large")));
    }
    if offsets.is_empty() {
        return Err(Error::validation("circulant needs at least one offset"));
    }
    let mut normalized = Vec::with_capacity(offsets.len());
    for &o in offsets {
        if o < 1 || o > p - 1 {
            return Err(Error::validation(format!(
                "offset {o} outside the valid range 1..={}",
                p - 1
            )));
        }
        let norm = (o % p).min(p - o % p);
        if strict && 2 * norm == p {
            return Err(Error::validation(format!(
                "offset {o} equals p/2 = {norm}, which breaks 2k-regularity"
            )));
        }
        if normalized.contains(&norm) {
            return Err(Error::validation(format!(
                "offset {o} duplicates another offset after normalization"
            )));
        }
        normalized.push(norm);
    }
    if strict {
        let g = normalized.iter().fold(p, |acc, &o| gcd(acc, o));
        if g != 1 {
            return Err(Error::validation(format!(
                "gcd(p, offsets) = {g} > 1: the circulant would be disconnected"
            )));
        }
    }
    let mut edges = Vec::with_capacity(p * normalized.len());
    for i in 0..p {
        for &o in &normalized {
            let j = (i + o) % p;
            edges.push((i.min(j), i.max(j)));
        }
    }
    let labels = (0..p).map(|i| i.to_string()).collect();
    Graph::build(p, &edges)?.with_labels(labels)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Attempt cap for [`random_regular`].
pub const DEFAULT_REJECTION_CAP: usize = 1_000_000;

/// Uniform simple d-regular graph on `n` vertices, drawn by the pairing
/// (configuration) model: shuffle `n*d` degree stubs, pair them up, and
/// reject the whole sample whenever a self-loop or duplicate edge appears.
/// Deterministic given `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    random_regular_with_cap(n, d, seed, DEFAULT_REJECTION_CAP)
}

/// [`random_regular`] with an explicit rejection cap.
pub fn random_regular_with_cap(n: usize, d: usize, seed: u64, cap: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::validation("vertex count must be positive"));
    }
    if d >= n {
        return Err(Error::validation(format!(
            "degree {d} must be smaller than the vertex count {n}"
        )));
    }
    if n % 2 == 1 && d % 2 == 1 {
        return Err(Error::validation(format!(
            "n*d = {n}*{d} is odd: no {d}-regular graph on {n} vertices exists"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
    let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    for _ in 0..cap {
        stubs.shuffle(&mut rng);
        seen.clear();
        let mut simple = true;
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                simple = false;
                break;
            }
        }
        if simple {
            let edges: Vec<(usize, usize)> = seen.iter().copied().collect();
            let labels = (0..n).map(|v| v.to_string()).collect();
            return Graph::build(n, &edges)?.with_labels(labels);
        }
    }
    Err(Error::validation(format!(
        "no simple {d}-regular graph found within {cap} pairing attempts"
    )))
}

fn checked_power(base: usize, exp: u32) -> Result<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc
            .checked_mul(base)
            .filter(|&v| v <= MAX_VERTICES)
            .ok_or_else(|| {
                Error::validation(format!("{base}^{exp} vertices exceeds the supported size"))
            })?;
    }
    Ok(acc)
}

/// Parsed description of a topology family instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Hypercube { n: u32 },
    MobiusCube { variant: u8, n: u32 },
    AryCube { k: u32, n: u32 },
    Circulant { p: usize, offsets: Vec<usize> },
    RandomRegular { n: usize, d: usize, seed: u64 },
}

impl GraphSpec {
    /// Parses the spec grammar; errors carry the byte offset of the problem.
    pub fn parse(text: &str) -> Result<GraphSpec> {
        let fail = |pos: usize, msg: &str| -> Error {
            Error::validation(format!("spec parse error at offset {pos}: {msg}"))
        };
        let colon = text
            .find(':')
            .ok_or_else(|| fail(text.len(), "expected \"<family>:<key>=<value>...\""))?;
        let family = &text[..colon];
        let mut fields = Vec::new();
        let mut pos = colon + 1;
        for part in text[colon + 1..].split(',') {
            let eq = part
                .find('=')
                .ok_or_else(|| fail(pos, "expected <key>=<value>"))?;
            fields.push((&part[..eq], &part[eq + 1..], pos + eq + 1));
            pos += part.len() + 1;
        }
        let lookup = |key: &str| -> Result<(&str, usize)> {
            fields
                .iter()
                .find(|(k, _, _)| *k == key)
                .map(|&(_, v, p)| (v, p))
                .ok_or_else(|| fail(text.len(), &format!("missing parameter {key}=")))
        };
        let expect_keys = |allowed: &[&str]| -> Result<()> {
            for &(k, _, p) in &fields {
                if !allowed.contains(&k) {
                    return Err(fail(p, &format!("unknown parameter {k}= for {family}")));
                }
            }
            Ok(())
        };
        fn int<T: FromStr>(value: &str, pos: usize) -> Result<T> {
            value.parse().map_err(|_| {
                Error::validation(format!(
                    "spec parse error at offset {pos}: {value:?} is not a valid integer"
                ))
            })
        }
        match family {
            "hypercube" => {
                expect_keys(&["n"])?;
                let (v, p) = lookup("n")?;
                Ok(GraphSpec::Hypercube { n: int(v, p)? })
            }
            "mobius" => {
                expect_keys(&["v", "n"])?;
                let (v, vp) = lookup("v")?;
                let variant: u8 = int(v, vp)?;
                if variant > 1 {
                    return Err(fail(vp, "variant must be 0 or 1"));
                }
                let (nval, np) = lookup("n")?;
                Ok(GraphSpec::MobiusCube {
                    variant,
                    n: int(nval, np)?,
                })
            }
            "arycube" => {
                expect_keys(&["k", "n"])?;
                let (k, kp) = lookup("k")?;
                let (n, np) = lookup("n")?;
                Ok(GraphSpec::AryCube {
                    k: int(k, kp)?,
                    n: int(n, np)?,
                })
            }
            "circulant" => {
                expect_keys(&["p", "s"])?;
                let (p, pp) = lookup("p")?;
                let (s, sp) = lookup("s")?;
                let mut offsets = Vec::new();
                let mut opos = sp;
                for tok in s.split('+') {
                    offsets.push(int(tok, opos)?);
                    opos += tok.len() + 1;
                }
                offsets.sort_unstable();
                Ok(GraphSpec::Circulant {
                    p: int(p, pp)?,
                    offsets,
                })
            }
            "random-regular" => {
                expect_keys(&["n", "d", "seed"])?;
                let (n, np) = lookup("n")?;
                let (d, dp) = lookup("d")?;
                let (seed, sp) = lookup("seed")?;
                Ok(GraphSpec::RandomRegular {
                    n: int(n, np)?,
                    d: int(d, dp)?,
                    seed: int(seed, sp)?,
                })
            }
            other => Err(fail(0, &format!("unknown graph family {other:?}"))),
        }
    }

    /// Normalized display string; parses back to an equal spec.
    pub fn canonical_name(&self) -> String {
        match self {
            GraphSpec::Hypercube { n } => format!("hypercube:n={n}"),
            GraphSpec::MobiusCube { variant, n } => format!("mobius:v={variant},n={n}"),
            GraphSpec::AryCube { k, n } => format!("arycube:k={k},n={n}"),
            GraphSpec::Circulant { p, offsets } => {
                let s = offsets
                    .iter()
                    .map(|o| o.to_string())
                    .collect::<Vec<_>>()
                    .join("+");
                format!("circulant:p={p},s={s}")
            }
            GraphSpec::RandomRegular { n, d, seed } => {
                format!("random-regular:n={n},d={d},seed={seed}")
            }
        }
    }

    /// Builds the described graph.
    pub fn materialize(&self) -> Result<Graph> {
        match self {
            GraphSpec::Hypercube { n } => hypercube(*n),
            GraphSpec::MobiusCube { variant, n } => mobius_cube(*variant, *n),
            GraphSpec::AryCube { k, n } => ary_cube(*k, *n),
            GraphSpec::Circulant { p, offsets } => circulant(*p, offsets),
            GraphSpec::RandomRegular { n, d, seed } => random_regular(*n, *d, *seed),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_name())
    }
}

impl FromStr for GraphSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<GraphSpec> {
        GraphSpec::parse(s)
    }
}
