//! MacKay alist reader/writer for sparse binary matrices.
//!
//! Layout: "n m" (columns, rows), "max_col_wt max_row_wt", column weights,
//! row weights, then per-column 1-based row neighbor lists and per-row
//! column neighbor lists, each line zero-padded to the declared maximum.

use std::path::Path;

use crate::binmat::BinaryMatrix;
use crate::error::{Error, Result};

pub fn to_alist(m: &BinaryMatrix) -> String {
    let (rows, cols) = (m.rows(), m.cols());
    let col_supports: Vec<Vec<usize>> = {
        let t = m.transpose();
        (0..cols).map(|c| t.row_support(c)).collect()
    };
    let row_supports: Vec<Vec<usize>> = (0..rows).map(|r| m.row_support(r)).collect();
    let max_col = col_supports.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_supports.iter().map(Vec::len).max().unwrap_or(0);

    let mut out = String::new();
    out.push_str(&format!("{cols} {rows}\n"));
    out.push_str(&format!("{max_col} {max_row}\n"));
    push_numbers(&mut out, col_supports.iter().map(Vec::len));
    push_numbers(&mut out, row_supports.iter().map(Vec::len));
    for support in &col_supports {
        push_padded(&mut out, support, max_col);
    }
    for support in &row_supports {
        push_padded(&mut out, support, max_row);
    }
    out
}

fn push_numbers(out: &mut String, nums: impl Iterator<Item = usize>) {
    let line: Vec<String> = nums.map(|n| n.to_string()).collect();
    out.push_str(&line.join(" "));
    out.push('\n');
}

fn push_padded(out: &mut String, support: &[usize], width: usize) {
    // 1-based indices, zero padding up to the maximum weight.
    let mut entries: Vec<String> = support.iter().map(|i| (i + 1).to_string()).collect();
    entries.resize(width, "0".to_string());
    out.push_str(&entries.join(" "));
    out.push('\n');
}

pub fn from_alist(text: &str) -> Result<BinaryMatrix> {
    let mut tokens = text.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| Error::Alist(format!("non-numeric token '{t}'")))
    });
    let mut next = |what: &str| -> Result<usize> {
        tokens
            .next()
            .ok_or_else(|| Error::Alist(format!("unexpected end of data reading {what}")))?
    };

    let cols = next("column count")?;
    let rows = next("row count")?;
    if rows == 0 || cols == 0 {
        return Err(Error::Alist(format!("degenerate shape {cols} x {rows}")));
    }
    let max_col = next("max column weight")?;
    let max_row = next("max row weight")?;
    let col_weights: Vec<usize> = (0..cols).map(|_| next("column weight")).collect::<Result<_>>()?;
    let row_weights: Vec<usize> = (0..rows).map(|_| next("row weight")).collect::<Result<_>>()?;
    if col_weights.iter().any(|&w| w > max_col) || row_weights.iter().any(|&w| w > max_row) {
        return Err(Error::Alist("weight exceeds declared maximum".into()));
    }

    let mut m = BinaryMatrix::zeros(rows, cols);
    for (c, &weight) in col_weights.iter().enumerate() {
        for slot in 0..max_col {
            let entry = next("column neighbor")?;
            if slot < weight {
                if entry == 0 || entry > rows {
                    return Err(Error::Alist(format!(
                        "column {c} neighbor {entry} out of range 1..={rows}"
                    )));
                }
                m.set(entry - 1, c, true);
            } else if entry != 0 {
                return Err(Error::Alist(format!("column {c} has excess neighbor {entry}")));
            }
        }
    }
    for (r, &weight) in row_weights.iter().enumerate() {
        let mut listed = Vec::with_capacity(weight);
        for slot in 0..max_row {
            let entry = next("row neighbor")?;
            if slot < weight {
                if entry == 0 || entry > cols {
                    return Err(Error::Alist(format!(
                        "row {r} neighbor {entry} out of range 1..={cols}"
                    )));
                }
                listed.push(entry - 1);
            } else if entry != 0 {
                return Err(Error::Alist(format!("row {r} has excess neighbor {entry}")));
            }
        }
        // Cross-check against the column lists already applied.
        let mut expect = m.row_support(r);
        expect.sort_unstable();
        listed.sort_unstable();
        if listed != expect {
            return Err(Error::Alist(format!(
                "row {r} neighbor list disagrees with the column lists"
            )));
        }
    }
    if tokens.next().transpose()?.is_some() {
        return Err(Error::Alist("trailing data after matrix".into()));
    }
    Ok(m)
}

pub fn write_alist(m: &BinaryMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, to_alist(m))?;
    Ok(())
}

pub fn read_alist(path: &Path) -> Result<BinaryMatrix> {
    let text = std::fs::read_to_string(path)?;
    from_alist(&text)
}
