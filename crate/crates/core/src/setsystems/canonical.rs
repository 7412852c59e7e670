use std::ops::Range;

use crate::error::{Error, Result};

/// The dyadic block `[offset * 2^level, (offset + 1) * 2^level) ∩ [0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalInterval {
    pub offset: usize,
    pub level: u32,
}

impl CanonicalInterval {
    /// 0-based half-open range, clipped to `[0, n)`.
    pub fn range(&self, n: usize) -> Range<usize> {
        let start = self.offset << self.level;
        let end = ((self.offset + 1) << self.level).min(n);
        start..end.max(start)
    }

    pub fn nominal_size(&self) -> usize {
        1 << self.level
    }
}

/// Splits the initial segment `{1..j}` of `[n]` into disjoint canonical
/// intervals, one per set bit of `j`, largest first.
pub fn canonical_decomposition(j: usize, n: usize) -> Result<Vec<CanonicalInterval>> {
    if j == 0 || j > n {
        return Err(Error::invalid(format!(
            "canonical_decomposition needs 1 <= j <= n, got j = {j}, n = {n}"
        )));
    }
    let mut out = Vec::new();
    let mut start = 0usize;
    for level in (0..usize::BITS - j.leading_zeros()).rev() {
        if (j >> level) & 1 == 1 {
            out.push(CanonicalInterval {
                offset: start >> level,
                level,
            });
            start += 1 << level;
        }
    }
    Ok(out)
}

/// Decomposes the anchored box with (1-based, inclusive) corner `corner` in
/// `[n]^d` into canonical boxes: the Cartesian product of the per-axis
/// canonical decompositions.
pub fn anchored_box_decomposition(corner: &[usize], n: usize) -> Result<Vec<Vec<CanonicalInterval>>> {
    let mut boxes: Vec<Vec<CanonicalInterval>> = vec![Vec::new()];
    for &c in corner {
        let pieces = canonical_decomposition(c, n)?;
        boxes = boxes
            .into_iter()
            .flat_map(|b| {
                pieces.iter().map(move |&p| {
                    let mut nb = b.clone();
                    nb.push(p);
                    nb
                })
            })
            .collect();
    }
    Ok(boxes)
}
