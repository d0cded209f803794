//! Two-row text diagrams. Top labels head the picture, primed bottom labels
//! close it, and each block with two or more vertices is drawn as a lane
//! segment in between: `^` marks a top vertex, `v` a bottom vertex, `x` both.
//!
//! ```text
//!  1  2  3
//!  x--^
//!  v     v
//!  1' 2' 3'
//! ```

use crate::error::{PResult, PartitionError};
use crate::finite::FinitePartition;

pub const MAX_RENDER: usize = 40;

fn col(i: usize) -> usize {
    3 * (i - 1) + 1
}

pub fn render_ascii(p: &FinitePartition) -> PResult<String> {
    let n = p.n();
    if n > MAX_RENDER {
        return Err(PartitionError::SizeOverflow { n, max: MAX_RENDER });
    }
    let width = 3 * n;
    let mut segs: Vec<(usize, usize, Vec<(usize, u8)>)> = Vec::new();
    for b in p.blocks().iter().filter(|b| b.len() >= 2) {
        let mut marks = vec![0u8; n + 1];
        for &v in b {
            let i = v.unsigned_abs() as usize;
            marks[i] |= if v > 0 { 1 } else { 2 };
        }
        let at: Vec<(usize, u8)> = (1..=n).filter(|&i| marks[i] != 0).map(|i| (i, marks[i])).collect();
        segs.push((col(at[0].0), col(at[at.len() - 1].0), at));
    }
    segs.sort_by_key(|s| (s.0, s.1));

    let mut lanes: Vec<(usize, Vec<u8>)> = Vec::new();
    for (lo, hi, at) in segs {
        let k = match lanes.iter().position(|(end, _)| *end + 1 < lo) {
            Some(k) => k,
            None => {
                lanes.push((0, vec![b' '; width]));
                lanes.len() - 1
            }
        };
        let (end, row) = &mut lanes[k];
        for c in row.iter_mut().take(hi + 1).skip(lo) {
            *c = b'-';
        }
        for (i, m) in at {
            row[col(i)] = match m {
                1 => b'^',
                2 => b'v',
                _ => b'x',
            };
        }
        *end = hi;
    }

    let mut out = String::new();
    out.push_str((1..=n).map(|i| format!("{i:>2} ")).collect::<String>().trim_end());
    out.push('\n');
    for (_, row) in lanes {
        out.push_str(String::from_utf8(row).expect("ascii").trim_end());
        out.push('\n');
    }
    out.push_str((1..=n).map(|i| format!("{i:>2}'")).collect::<String>().trim_end());
    out.push('\n');
    Ok(out)
}

pub fn parse_ascii(text: &str) -> PResult<FinitePartition> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() < 2 {
        return Err(PartitionError::Parse("need a header and a footer".into()));
    }
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    let n = header.len();
    for (k, tok) in header.iter().enumerate() {
        if tok.parse::<usize>().ok() != Some(k + 1) {
            return Err(PartitionError::Parse(format!("bad header label {tok:?}")));
        }
    }
    let footer = lines[lines.len() - 1].matches('\'').count();
    if footer != n {
        return Err(PartitionError::Parse(format!("{n} top labels but {footer} bottom labels")));
    }

    let mut blocks: Vec<Vec<i64>> = Vec::new();
    let mut covered = vec![[false; 2]; n + 1];
    for line in &lines[1..lines.len() - 1] {
        let bytes = line.as_bytes();
        let mut p = 0;
        while p < bytes.len() {
            if bytes[p] == b' ' {
                p += 1;
                continue;
            }
            let mut block = Vec::new();
            while p < bytes.len() && bytes[p] != b' ' {
                let c = bytes[p];
                let on_col = p % 3 == 1;
                let i = p / 3 + 1;
                match c {
                    b'-' => {}
                    b'^' | b'v' | b'x' if on_col && i <= n => {
                        if c != b'v' {
                            block.push(i as i64);
                            covered[i][0] = true;
                        }
                        if c != b'^' {
                            block.push(-(i as i64));
                            covered[i][1] = true;
                        }
                    }
                    _ => return Err(PartitionError::Parse(format!("unexpected {:?} at column {p}", c as char))),
                }
                p += 1;
            }
            blocks.push(block);
        }
    }
    for (i, c) in covered.iter().enumerate().skip(1) {
        if !c[0] {
            blocks.push(vec![i as i64]);
        }
        if !c[1] {
            blocks.push(vec![-(i as i64)]);
        }
    }
    FinitePartition::new(n, blocks).map_err(|e| PartitionError::Parse(e.to_string()))
}
