use crate::error::{Error, Result};
use crate::linalg::DEFAULT_ELEMENT_CAP;
use crate::setsystems::SetSystem;

/// Default cap on `n` for the arithmetic-progression system.
pub const DEFAULT_AP_CAP: usize = 128;
/// Default ground-set cap for constructed systems.
pub const DEFAULT_GROUND_CAP: usize = 4096;
/// `power_set` refuses `n` above this.
pub const POWER_SET_CAP: usize = 20;

fn check_entries(what: &'static str, rows: u128, cols: u128) -> Result<()> {
    let size = rows * cols;
    if size > DEFAULT_ELEMENT_CAP as u128 {
        return Err(Error::TooLarge {
            what,
            size,
            cap: DEFAULT_ELEMENT_CAP as u128,
        });
    }
    Ok(())
}

fn check_ground(what: &'static str, n: u128) -> Result<()> {
    if n > DEFAULT_GROUND_CAP as u128 {
        return Err(Error::TooLarge {
            what,
            size: n,
            cap: DEFAULT_GROUND_CAP as u128,
        });
    }
    Ok(())
}

/// Initial segments `{1..i}` of `[n]`; the incidence matrix is `T_n`.
pub fn initial_segments(n: usize) -> Result<SetSystem> {
    if n == 0 {
        return Err(Error::invalid("initial_segments needs n >= 1"));
    }
    check_ground("initial segments ground set", n as u128)?;
    let mut bits = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..=i {
            bits[i * n + j] = 1;
        }
    }
    Ok(SetSystem::from_bits(n, bits))
}

/// Sets cut out of the grid `[n]^d` by anchored boxes `[0,b_1] x .. x [0,b_d]`.
///
/// Grid points and boxes are both ordered row-major lexicographically, so the
/// incidence matrix equals the `d`-fold Kronecker power of `T_n` exactly.
pub fn grid_anchored(d: usize, n: usize) -> Result<SetSystem> {
    if d == 0 || n == 0 {
        return Err(Error::invalid("grid_anchored needs d >= 1 and n >= 1"));
    }
    let points = (n as u128).checked_pow(d as u32).unwrap_or(u128::MAX);
    check_ground("anchored grid ground set", points)?;
    check_entries("anchored grid incidence entries", points, points)?;
    power(&initial_segments(n)?, d)
}

/// The 3^d subcubes of `{0,1}^d`, as the `d`-fold product of
/// `{{0,1}, {0}, {1}}`.
pub fn subcubes(d: usize) -> Result<SetSystem> {
    if d == 0 {
        return Err(Error::invalid("subcubes needs d >= 1"));
    }
    let rows = 3u128.checked_pow(d as u32).unwrap_or(u128::MAX);
    let cols = 2u128.checked_pow(d as u32).unwrap_or(u128::MAX);
    check_entries("subcube incidence entries", rows, cols)?;
    let c1 = SetSystem::from_sets(2, &[vec![0, 1], vec![0], vec![1]])?;
    power(&c1, d)
}

fn power(base: &SetSystem, d: usize) -> Result<SetSystem> {
    let mut acc = base.clone();
    for _ in 1..d {
        acc = product(&acc, base)?;
    }
    Ok(acc)
}

/// All arithmetic progressions `{a, a+δ, .., a+(k-1)δ} ⊆ [n]` with `δ, k >= 1`,
/// deduplicated at the set level (first encoding in `(δ, a, k)` order wins).
/// Labels are `a:δ:k`, 1-based.
pub fn arithmetic_progressions(n: usize) -> Result<SetSystem> {
    arithmetic_progressions_with_cap(n, DEFAULT_AP_CAP)
}

pub fn arithmetic_progressions_with_cap(n: usize, cap: usize) -> Result<SetSystem> {
    if n == 0 {
        return Err(Error::invalid("arithmetic_progressions needs n >= 1"));
    }
    if n > cap {
        return Err(Error::TooLarge {
            what: "arithmetic progression ground set",
            size: n as u128,
            cap: cap as u128,
        });
    }
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut labels = Vec::new();
    for delta in 1..n.max(2) {
        for a in 0..n {
            let mut cur = Vec::new();
            let mut x = a;
            while x < n {
                cur.push(x);
                sets.push(cur.clone());
                labels.push(format!("{}:{}:{}", a + 1, delta, cur.len()));
                x += delta;
            }
        }
    }
    Ok(SetSystem::from_sets(n, &sets)?.with_labels(labels)?.dedup())
}

/// Union of the prefix systems `{π(1), .., π(i)}`, `i = 1..n`, over all
/// supplied permutations (0-based), deduplicated. The empty prefix is not
/// included.
pub fn k_permutations(perms: &[Vec<usize>]) -> Result<SetSystem> {
    let n = perms
        .first()
        .map(|p| p.len())
        .ok_or_else(|| Error::invalid("k_permutations needs at least one permutation"))?;
    if n == 0 {
        return Err(Error::invalid("permutations of an empty set"));
    }
    let mut bits = Vec::with_capacity(perms.len() * n * n);
    for (idx, p) in perms.iter().enumerate() {
        if p.len() != n {
            return Err(Error::invalid(format!(
                "permutation {idx} has length {}, expected {n}",
                p.len()
            )));
        }
        let mut seen = vec![false; n];
        for &x in p {
            if x >= n || seen[x] {
                return Err(Error::invalid(format!(
                    "permutation {idx} is not a bijection on [{n}]"
                )));
            }
            seen[x] = true;
        }
        let mut row = vec![0u8; n];
        for &x in p {
            row[x] = 1;
            bits.extend_from_slice(&row);
        }
    }
    Ok(SetSystem::from_bits(n, bits).dedup())
}

/// All `2^n` subsets of `[n]`, including the empty set; row `r` is the
/// subset whose indicator is the binary expansion of `r` (element 0 = lowest bit).
pub fn power_set(n: usize) -> Result<SetSystem> {
    if n == 0 {
        return Err(Error::invalid("power_set needs n >= 1"));
    }
    if n > POWER_SET_CAP {
        return Err(Error::TooLarge {
            what: "power set ground size",
            size: n as u128,
            cap: POWER_SET_CAP as u128,
        });
    }
    let m = 1usize << n;
    let mut bits = vec![0u8; m * n];
    for r in 0..m {
        for j in 0..n {
            bits[r * n + j] = ((r >> j) & 1) as u8;
        }
    }
    Ok(SetSystem::from_bits(n, bits))
}

/// Sets of `f` followed by the sets of `g`, deduplicated.
pub fn union(f: &SetSystem, g: &SetSystem) -> Result<SetSystem> {
    if f.ground_size() != g.ground_size() {
        return Err(Error::DimensionMismatch(format!(
            "union of systems on {} and {} points",
            f.ground_size(),
            g.ground_size()
        )));
    }
    let mut bits = f.bits().to_vec();
    bits.extend_from_slice(g.bits());
    let mut out = SetSystem::from_bits(f.ground_size(), bits);
    if let (Some(a), Some(b)) = (f.labels(), g.labels()) {
        out = out.with_labels(a.iter().chain(b).cloned().collect())?;
    }
    Ok(out.dedup())
}

/// `{F x G}` on the ground set `V x W`, element `(x, y)` numbered `x |W| + y`.
/// The incidence matrix is the Kronecker product of the factors'.
pub fn product(f: &SetSystem, g: &SetSystem) -> Result<SetSystem> {
    let ground = f.ground_size() * g.ground_size();
    let sets = f.num_sets() * g.num_sets();
    check_entries("product incidence entries", sets as u128, ground as u128)?;
    let gw = g.ground_size();
    let mut bits = vec![0u8; sets * ground];
    for (i, fr) in f.rows().enumerate() {
        for (k, gr) in g.rows().enumerate() {
            let row = &mut bits[(i * g.num_sets() + k) * ground..][..ground];
            for (x, &fb) in fr.iter().enumerate() {
                if fb == 1 {
                    row[x * gw..(x + 1) * gw].copy_from_slice(gr);
                }
            }
        }
    }
    Ok(SetSystem::from_bits(ground, bits))
}

/// Restriction to the ground subset `j` (0-based): the column submatrix on
/// `j` (in increasing order), rows deduplicated. Empty traces are kept.
pub fn restrict(f: &SetSystem, j: &[usize]) -> Result<SetSystem> {
    if j.is_empty() {
        return Err(Error::invalid("restriction to an empty ground set"));
    }
    let mut cols = j.to_vec();
    cols.sort_unstable();
    cols.dedup();
    if let Some(&bad) = cols.iter().find(|&&x| x >= f.ground_size()) {
        return Err(Error::invalid(format!(
            "element {bad} outside ground set of size {}",
            f.ground_size()
        )));
    }
    let mut bits = Vec::with_capacity(f.num_sets() * cols.len());
    for r in f.rows() {
        bits.extend(cols.iter().map(|&c| r[c]));
    }
    Ok(SetSystem::from_bits(cols.len(), bits).dedup())
}

/// Systems on disjoint ground sets side by side: `g`'s points are shifted
/// past `f`'s, and the incidence matrix is block-diagonal.
pub fn disjoint_union(f: &SetSystem, g: &SetSystem) -> SetSystem {
    let ground = f.ground_size() + g.ground_size();
    let mut bits = Vec::with_capacity((f.num_sets() + g.num_sets()) * ground);
    for r in f.rows() {
        bits.extend_from_slice(r);
        bits.extend(std::iter::repeat_n(0u8, g.ground_size()));
    }
    for r in g.rows() {
        bits.extend(std::iter::repeat_n(0u8, f.ground_size()));
        bits.extend_from_slice(r);
    }
    SetSystem::from_bits(ground, bits)
}
