//! Adversarial and random corruption with ground-truth edit scripts, plus
//! the good-block classification oracle used to validate block recovery.
//!
//! Every insdel corruption is witnessed by an [`EditScript`] whose replay
//! reproduces the corrupted word bit-exactly. Edit distance counts
//! insertions and deletions; a substitution is modeled as delete-plus-insert
//! and costs 2, so a `delta` budget allows `2*delta*n` script cost.

use rand::Rng;

use crate::align::indel_distance;
use crate::bits::BitString;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EditKind {
    /// Insert the bit immediately before the clean position.
    Insert(u8),
    Delete,
    Substitute(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditOp {
    /// 1-based position in the clean word. Inserts allow `clean_len + 1`
    /// (append).
    pub pos: usize,
    pub kind: EditKind,
}

impl EditOp {
    pub fn cost(&self) -> usize {
        match self.kind {
            EditKind::Insert(_) | EditKind::Delete => 1,
            EditKind::Substitute(_) => 2,
        }
    }
}

/// An ordered list of edits mapping a clean word to its corruption.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    ops: Vec<EditOp>,
}

impl EditScript {
    pub fn new(mut ops: Vec<EditOp>) -> EditScript {
        ops.sort_by_key(|op| op.pos);
        EditScript { ops }
    }

    pub fn ops(&self) -> &[EditOp] {
        &self.ops
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Insertions + deletions + 2 * substitutions.
    pub fn cost(&self) -> usize {
        self.ops.iter().map(|op| op.cost()).sum()
    }

    /// Checks positions against a clean word of `n` bits and that no clean
    /// position carries more than one delete/substitute.
    pub fn validate(&self, n: usize) -> Result<()> {
        let mut last_mut_pos = 0usize;
        for op in &self.ops {
            let max = match op.kind {
                EditKind::Insert(_) => n + 1,
                _ => n,
            };
            if op.pos < 1 || op.pos > max {
                return Err(Error::InvalidInput(format!(
                    "edit position {} out of range for clean length {n}",
                    op.pos
                )));
            }
            if !matches!(op.kind, EditKind::Insert(_)) {
                if op.pos == last_mut_pos {
                    return Err(Error::InvalidInput(format!(
                        "position {} deleted or substituted twice",
                        op.pos
                    )));
                }
                last_mut_pos = op.pos;
            }
        }
        Ok(())
    }

    /// Replays the script against the clean word.
    pub fn apply(&self, clean: &BitString) -> Result<BitString> {
        self.validate(clean.len())?;
        let mut out = BitString::new();
        let mut op_i = 0;
        for pos in 1..=clean.len() + 1 {
            let mut mutation: Option<EditKind> = None;
            while op_i < self.ops.len() && self.ops[op_i].pos == pos {
                match self.ops[op_i].kind {
                    EditKind::Insert(b) => out.push(b),
                    k => mutation = Some(k),
                }
                op_i += 1;
            }
            if pos <= clean.len() {
                match mutation {
                    Some(EditKind::Delete) => {}
                    Some(EditKind::Substitute(b)) => out.push(b),
                    _ => out.push(clean.bit(pos - 1)),
                }
            }
        }
        Ok(out)
    }

    /// Line-oriented text form: `I <pos> <bit>`, `D <pos>`, `S <pos> <bit>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for op in &self.ops {
            match op.kind {
                EditKind::Insert(b) => s.push_str(&format!("I {} {}\n", op.pos, b)),
                EditKind::Delete => s.push_str(&format!("D {}\n", op.pos)),
                EditKind::Substitute(b) => s.push_str(&format!("S {} {}\n", op.pos, b)),
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<EditScript> {
        let mut ops = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let tag = fields.next().unwrap();
            let bad =
                |what: &str| Error::InvalidInput(format!("script line {}: {what}", lineno + 1));
            let pos: usize = fields
                .next()
                .ok_or_else(|| bad("missing position"))?
                .parse()
                .map_err(|_| bad("bad position"))?;
            let parse_bit = |f: Option<&str>| -> Result<u8> {
                match f {
                    Some("0") => Ok(0),
                    Some("1") => Ok(1),
                    _ => Err(bad("bad bit")),
                }
            };
            let kind = match tag {
                "I" => EditKind::Insert(parse_bit(fields.next())?),
                "D" => EditKind::Delete,
                "S" => EditKind::Substitute(parse_bit(fields.next())?),
                _ => return Err(bad("unknown op tag")),
            };
            if fields.next().is_some() {
                return Err(bad("trailing fields"));
            }
            ops.push(EditOp { pos, kind });
        }
        Ok(EditScript::new(ops))
    }
}

/// Hamming corruption strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HammingStrategy {
    UniformRandom,
    /// Flip exactly the first floor(delta*n) bits.
    PrefixBurst,
    /// Flip whole aligned blocks of the given size until the budget is
    /// spent; the natural attack on block-structured codes.
    BlockTargeting {
        block_bits: usize,
    },
}

/// Flips at most floor(delta * |y|) bits of `y`.
pub fn corrupt_hamming<R: Rng>(
    y: &BitString,
    delta: f64,
    strategy: HammingStrategy,
    rng: &mut R,
) -> Result<BitString> {
    if delta < 0.0 {
        return Err(Error::InvalidInput("delta must be non-negative".into()));
    }
    let n = y.len();
    let budget = (delta * n as f64).floor() as usize;
    let mut out = y.clone();
    match strategy {
        HammingStrategy::UniformRandom => {
            // Partial Fisher-Yates: budget distinct positions.
            let mut idx: Vec<usize> = (0..n).collect();
            for i in 0..budget.min(n) {
                let j = rng.gen_range(i..n);
                idx.swap(i, j);
                out.flip(idx[i]);
            }
        }
        HammingStrategy::PrefixBurst => {
            for i in 0..budget.min(n) {
                out.flip(i);
            }
        }
        HammingStrategy::BlockTargeting { block_bits } => {
            if block_bits == 0 || block_bits > n {
                return Err(Error::InvalidInput(
                    "bad block size for block_targeting".into(),
                ));
            }
            let blocks = n / block_bits;
            let mut order: Vec<usize> = (0..blocks).collect();
            for i in 0..blocks {
                let j = rng.gen_range(i..blocks);
                order.swap(i, j);
            }
            let mut left = budget;
            for &b in &order {
                if left == 0 {
                    break;
                }
                let start = b * block_bits;
                let burst = block_bits.min(left);
                for k in 0..burst {
                    out.flip(start + k);
                }
                left -= burst;
            }
        }
    }
    Ok(out)
}

/// Insdel corruption strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsdelStrategy {
    UniformIndel,
    /// One contiguous run of floor(2*delta*n) deletions.
    BurstDelete,
    /// Spend the budget deleting and flipping bits inside the zero buffers,
    /// attacking block boundaries. Needs the block geometry.
    BufferZeroing {
        blk_len: usize,
        buf_len: usize,
    },
    /// Delete whole aligned blocks until the budget is spent.
    BlockKill {
        blk_len: usize,
    },
}

/// Corrupts `y` within edit budget 2*delta*|y|, returning the corrupted word
/// together with the witnessing script.
pub fn corrupt_insdel<R: Rng>(
    y: &BitString,
    delta: f64,
    strategy: InsdelStrategy,
    rng: &mut R,
) -> Result<(BitString, EditScript)> {
    if delta < 0.0 {
        return Err(Error::InvalidInput("delta must be non-negative".into()));
    }
    let n = y.len();
    let budget = (2.0 * delta * n as f64).floor() as usize;
    let mut ops: Vec<EditOp> = Vec::new();
    match strategy {
        InsdelStrategy::UniformIndel => {
            let mut touched = vec![false; n + 1];
            let mut cost = 0usize;
            let mut stall = 0;
            while cost < budget && stall < 10 * budget + 100 {
                stall += 1;
                match rng.gen_range(0..3u8) {
                    0 => {
                        let pos = rng.gen_range(1..=n + 1);
                        ops.push(EditOp {
                            pos,
                            kind: EditKind::Insert(rng.gen_range(0..2)),
                        });
                        cost += 1;
                    }
                    1 => {
                        let pos = rng.gen_range(1..=n);
                        if touched[pos] {
                            continue;
                        }
                        touched[pos] = true;
                        ops.push(EditOp {
                            pos,
                            kind: EditKind::Delete,
                        });
                        cost += 1;
                    }
                    _ => {
                        if cost + 2 > budget {
                            continue;
                        }
                        let pos = rng.gen_range(1..=n);
                        if touched[pos] {
                            continue;
                        }
                        touched[pos] = true;
                        let flipped = y.bit(pos - 1) ^ 1;
                        ops.push(EditOp {
                            pos,
                            kind: EditKind::Substitute(flipped),
                        });
                        cost += 2;
                    }
                }
            }
        }
        InsdelStrategy::BurstDelete => {
            let run = budget.min(n);
            if run > 0 {
                let start = rng.gen_range(1..=n - run + 1);
                for pos in start..start + run {
                    ops.push(EditOp {
                        pos,
                        kind: EditKind::Delete,
                    });
                }
            }
        }
        InsdelStrategy::BufferZeroing { blk_len, buf_len } => {
            if blk_len == 0 || buf_len == 0 || blk_len > n || buf_len * 2 > blk_len {
                return Err(Error::InvalidInput(
                    "bad geometry for buffer_zeroing".into(),
                ));
            }
            let blocks = n / blk_len;
            let mut cost = 0usize;
            let mut round = 0usize;
            'outer: while cost < budget && round < buf_len {
                for b in 0..blocks {
                    let block_start = b * blk_len; // 0-based
                                                   // Alternate leading/trailing buffers and deletes/flips.
                    let lead = (b + round).is_multiple_of(2);
                    let off = rng.gen_range(0..buf_len);
                    let pos = if lead {
                        block_start + off + 1
                    } else {
                        block_start + blk_len - off
                    };
                    if round.is_multiple_of(2) {
                        if cost + 1 > budget {
                            break 'outer;
                        }
                        ops.push(EditOp {
                            pos,
                            kind: EditKind::Delete,
                        });
                        cost += 1;
                    } else {
                        if cost + 2 > budget {
                            break 'outer;
                        }
                        ops.push(EditOp {
                            pos,
                            kind: EditKind::Substitute(1),
                        });
                        cost += 2;
                    }
                }
                round += 1;
            }
            // Drop repeated delete/substitute positions.
            let mut seen = vec![false; n + 2];
            ops.retain(|op| {
                if matches!(op.kind, EditKind::Insert(_)) {
                    return true;
                }
                if seen[op.pos] {
                    false
                } else {
                    seen[op.pos] = true;
                    true
                }
            });
        }
        InsdelStrategy::BlockKill { blk_len } => {
            if blk_len == 0 || blk_len > n {
                return Err(Error::InvalidInput("bad block size for block_kill".into()));
            }
            let blocks = n / blk_len;
            let kills = (budget / blk_len).min(blocks);
            let mut order: Vec<usize> = (0..blocks).collect();
            for i in 0..blocks {
                let j = rng.gen_range(i..blocks);
                order.swap(i, j);
            }
            for &b in order.iter().take(kills) {
                for pos in b * blk_len + 1..=(b + 1) * blk_len {
                    ops.push(EditOp {
                        pos,
                        kind: EditKind::Delete,
                    });
                }
            }
        }
    }
    let script = EditScript::new(ops);
    debug_assert!(script.cost() <= budget);
    let corrupted = script.apply(y)?;
    Ok((corrupted, script))
}

/// Non-decreasing map from corrupted-word positions to originating blocks.
#[derive(Debug, Clone)]
pub struct BlockMap {
    assignment: Vec<u32>,
}

impl BlockMap {
    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Block of the 1-based corrupted position.
    pub fn block_of(&self, pos: usize) -> u32 {
        self.assignment[pos - 1]
    }

    /// 1-based half-open span `[l, r)` of block `j`'s preimage (possibly
    /// empty, in which case `l == r`).
    pub fn preimage(&self, j: u32) -> (usize, usize) {
        let start = self.assignment.partition_point(|&b| b < j);
        let end = self.assignment.partition_point(|&b| b <= j);
        (start + 1, end + 1)
    }
}

/// Derives the ground-truth block decomposition from a script: survivors and
/// substitutions keep their originating block; an inserted bit joins the
/// block of the nearest preceding surviving bit (block 1 if none).
pub fn derive_block_map(script: &EditScript, blocks: u32, blk_len: usize) -> Result<BlockMap> {
    let n = blocks as usize * blk_len;
    script.validate(n)?;
    let block_of_clean = |pos: usize| -> u32 { ((pos - 1) / blk_len) as u32 + 1 };
    let mut assignment = Vec::new();
    let mut op_i = 0;
    let ops = script.ops();
    let mut prev_survivor_block = 1u32;
    for pos in 1..=n + 1 {
        let mut mutation: Option<EditKind> = None;
        while op_i < ops.len() && ops[op_i].pos == pos {
            match ops[op_i].kind {
                EditKind::Insert(_) => assignment.push(prev_survivor_block),
                k => mutation = Some(k),
            }
            op_i += 1;
        }
        if pos <= n {
            match mutation {
                Some(EditKind::Delete) => {}
                _ => {
                    let b = block_of_clean(pos);
                    assignment.push(b);
                    prev_survivor_block = b;
                }
            }
        }
    }
    debug_assert!(assignment.windows(2).all(|w| w[0] <= w[1]));
    Ok(BlockMap { assignment })
}

/// Per-block corruption accounting and goodness flags.
#[derive(Debug, Clone)]
pub struct BlockHealth {
    /// Exact indel distance between each block's corrupted image and its
    /// clean form.
    pub costs: Vec<usize>,
    pub gamma_good: Vec<bool>,
    pub local_good: Vec<bool>,
    pub tau: usize,
    pub gamma: f64,
    pub theta: f64,
}

impl BlockHealth {
    pub fn blocks(&self) -> usize {
        self.costs.len()
    }

    pub fn gamma_bad_fraction(&self) -> f64 {
        let bad = self.gamma_good.iter().filter(|&&g| !g).count();
        bad as f64 / self.blocks() as f64
    }

    pub fn local_bad_fraction(&self) -> f64 {
        let bad = self.local_good.iter().filter(|&&g| !g).count();
        bad as f64 / self.blocks() as f64
    }
}

/// Classifies every block of the clean word (blocks of `blk_len` bits)
/// against the corrupted word: exact per-block edit costs, then goodness of
/// every block interval by exact enumeration with prefix sums.
pub fn classify_blocks(
    y: &BitString,
    corrupted: &BitString,
    map: &BlockMap,
    blk_len: usize,
    tau: usize,
    gamma: f64,
    theta: f64,
) -> Result<BlockHealth> {
    if blk_len == 0 || !y.len().is_multiple_of(blk_len) {
        return Err(Error::InvalidInput(
            "clean word not a whole number of blocks".into(),
        ));
    }
    if map.len() != corrupted.len() {
        return Err(Error::InvalidInput("block map length mismatch".into()));
    }
    let blocks = y.len() / blk_len;
    let mut costs = Vec::with_capacity(blocks);
    for j in 1..=blocks {
        let clean_block = y.block(j, blk_len);
        let (l, r) = map.preimage(j as u32);
        let image = corrupted.slice(l - 1, r - 1);
        costs.push(indel_distance(clean_block.as_slice(), image.as_slice()));
    }
    let gamma_tau = gamma * tau as f64;
    let gamma_good: Vec<bool> = costs
        .iter()
        .map(|&c| c as f64 <= gamma_tau + 1e-9)
        .collect();

    // Interval conditions via prefix sums; local-bad marks via a difference
    // array over all O(B^2) intervals.
    let mut cost_prefix = vec![0u64; blocks + 1];
    let mut bad_prefix = vec![0u32; blocks + 1];
    for j in 0..blocks {
        cost_prefix[j + 1] = cost_prefix[j] + costs[j] as u64;
        bad_prefix[j + 1] = bad_prefix[j] + u32::from(!gamma_good[j]);
    }
    let mut local_bad_marks = vec![0i64; blocks + 2];
    for a in 0..blocks {
        for b in a..blocks {
            let len = (b - a + 1) as f64;
            let cost_sum = (cost_prefix[b + 1] - cost_prefix[a]) as f64;
            let bad_count = (bad_prefix[b + 1] - bad_prefix[a]) as f64;
            let good = cost_sum <= gamma_tau * len + 1e-9 && bad_count <= theta * len + 1e-9;
            if !good {
                local_bad_marks[a] += 1;
                local_bad_marks[b + 1] -= 1;
            }
        }
    }
    let mut local_good = Vec::with_capacity(blocks);
    let mut acc = 0i64;
    for &mark in local_bad_marks.iter().take(blocks) {
        acc += mark;
        local_good.push(acc == 0);
    }
    Ok(BlockHealth {
        costs,
        gamma_good,
        local_good,
        tau,
        gamma,
        theta,
    })
}

/// Exact hypergeometric upper tail P[X > k] for X ~ Hyp(population, marked,
/// draws).
pub fn hypergeometric_tail_gt(population: u64, marked: u64, draws: u64, k: u64) -> f64 {
    assert!(marked <= population && draws <= population);
    let lo = (marked + draws).saturating_sub(population);
    let hi = marked.min(draws);
    if k >= hi {
        return 0.0;
    }
    let ln_choose = |n: u64, r: u64| -> f64 {
        if r > n {
            return f64::NEG_INFINITY;
        }
        let mut s = 0.0;
        for i in 0..r {
            s += ((n - i) as f64).ln() - ((i + 1) as f64).ln();
        }
        s
    };
    let mut tail = 0.0;
    for x in lo.max(k + 1)..=hi {
        let lp = ln_choose(marked, x) + ln_choose(population - marked, draws - x)
            - ln_choose(population, draws);
        tail += lp.exp();
    }
    tail
}
