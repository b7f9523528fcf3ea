//! Banded dynamic programming for insertion/deletion distance.
//!
//! Distance here counts insertions and deletions only; a substitution is a
//! deletion plus an insertion and therefore costs 2. This matches the edit
//! budget accounting used by the channel simulator and the block classifier.

const INF: usize = usize::MAX / 4;

/// Indel distance computed within a diagonal band of half-width `band`.
/// The returned value is exact whenever it is <= `band`; larger returns only
/// certify that the true distance exceeds `band`.
#[allow(clippy::needless_range_loop)] // offset-indexed banded DP rows
pub fn indel_distance_banded(x: &[u8], z: &[u8], band: usize) -> usize {
    let n = x.len();
    let m = z.len();
    if n.abs_diff(m) > band {
        return INF;
    }
    let width = 2 * band + 1;
    // row[d] holds D[i][j] for j = i + d - band.
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for d in 0..width {
        let j = d as isize - band as isize;
        if (0..=m as isize).contains(&j) {
            prev[d] = j as usize; // D[0][j] = j inserts
        }
    }
    for i in 1..=n {
        for d in 0..width {
            let j = i as isize + d as isize - band as isize;
            if j < 0 || j > m as isize {
                cur[d] = INF;
                continue;
            }
            let j = j as usize;
            let mut best = INF;
            if j == 0 {
                best = i; // delete everything so far
            } else {
                // Substitution/match: prev row, same offset.
                let sub = if x[i - 1] == z[j - 1] { 0 } else { 2 };
                if prev[d] < INF {
                    best = best.min(prev[d] + sub);
                }
                // Insert z[j-1]: same row, offset d-1.
                if d > 0 && cur[d - 1] < INF {
                    best = best.min(cur[d - 1] + 1);
                }
            }
            // Delete x[i-1]: prev row, offset d+1.
            if d + 1 < width && prev[d + 1] < INF {
                best = best.min(prev[d + 1] + 1);
            }
            cur[d] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d_final = (m + band).wrapping_sub(n);
    if d_final < width {
        prev[d_final]
    } else {
        INF
    }
}

/// Exact indel distance via band doubling.
pub fn indel_distance(x: &[u8], z: &[u8]) -> usize {
    if x == z {
        return 0;
    }
    let mut band = (x.len().abs_diff(z.len()) + 8).min(x.len() + z.len());
    loop {
        let d = indel_distance_banded(x, z, band);
        if d <= band {
            return d;
        }
        if band >= x.len() + z.len() {
            return d.min(x.len() + z.len());
        }
        band = (band * 2).min(x.len() + z.len());
    }
}

/// Returns `Some(distance)` if the indel distance is <= `threshold`,
/// otherwise `None`.
pub fn indel_distance_at_most(x: &[u8], z: &[u8], threshold: usize) -> Option<usize> {
    let d = indel_distance_banded(x, z, threshold);
    if d <= threshold {
        Some(d)
    } else {
        None
    }
}

/// Semi-global variant used for block verification: up to `free_end` symbols
/// at each end of `z` may be discarded for free (boundary-location slop),
/// while `x` must be consumed in full.
#[allow(clippy::needless_range_loop)] // offset-indexed banded DP rows
pub fn indel_distance_semiglobal(x: &[u8], z: &[u8], free_end: usize, band: usize) -> usize {
    let n = x.len();
    let m = z.len();
    let shift = band + free_end;
    let width = 2 * shift + 1;
    let mut prev = vec![INF; width];
    let mut cur = vec![INF; width];
    for d in 0..width {
        let j = d as isize - shift as isize;
        if (0..=m as isize).contains(&j) {
            let j = j as usize;
            prev[d] = j.saturating_sub(free_end); // leading trim is free up to free_end
        }
    }
    for i in 1..=n {
        for d in 0..width {
            let j = i as isize + d as isize - shift as isize;
            if j < 0 || j > m as isize {
                cur[d] = INF;
                continue;
            }
            let j = j as usize;
            let mut best = INF;
            if j == 0 {
                best = i;
            } else {
                let sub = if x[i - 1] == z[j - 1] { 0 } else { 2 };
                if prev[d] < INF {
                    best = best.min(prev[d] + sub);
                }
                if d > 0 && cur[d - 1] < INF {
                    best = best.min(cur[d - 1] + 1);
                }
            }
            if d + 1 < width && prev[d + 1] < INF {
                best = best.min(prev[d + 1] + 1);
            }
            cur[d] = best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    // Trailing trim: ignoring z[j..] costs (m - j) - free_end below zero-floor.
    let mut ans = INF;
    for d in 0..width {
        let j = n as isize + d as isize - shift as isize;
        if (0..=m as isize).contains(&j) && prev[d] < INF {
            let trailing = m - j as usize;
            ans = ans.min(prev[d] + trailing.saturating_sub(free_end));
        }
    }
    ans
}
