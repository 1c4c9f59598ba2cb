//! Plain-text triangulation format.
//!
//! ```text
//! file    := (comment | blank | block)*
//! comment := '#' <any text>
//! block   := 'tets' <n> NEWLINE gluing{4n}
//! gluing  := <tet> <face> '->' <tet'> <face'> <perm>
//! ```
//!
//! `perm` is a four-character image word such as `0132`, mapping the vertices
//! of `tet` to those of `tet'`. Each `(tet, face)` appears exactly once per
//! block, and the line for `(tet', face')` must carry the inverse gluing.
//! Comment and blank lines may not appear inside a block.

use super::{Gluing, Triangulation};
use crate::perm::Perm4;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct TriangulationBlock {
    /// 1-based line number of the `tets` line.
    pub line: usize,
    pub triangulation: Triangulation,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

fn parse_index(tok: &str, line: usize, what: &str, bound: usize) -> Result<usize, ParseError> {
    let v: usize = tok.parse().map_err(|_| err(line, format!("{what} `{tok}` is not a non-negative integer")))?;
    if v >= bound {
        return Err(err(line, format!("{what} {v} out of range (must be < {bound})")));
    }
    Ok(v)
}

pub fn parse_triangulations(text: &str) -> Result<Vec<TriangulationBlock>, ParseError> {
    let lines: Vec<(usize, &str)> = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).collect();
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (ln, l) = lines[i];
        i += 1;
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let mut toks = l.split_whitespace();
        if toks.next() != Some("tets") {
            return Err(err(ln, format!("expected `tets <n>`, found `{l}`")));
        }
        let n: usize = match (toks.next(), toks.next()) {
            (Some(tok), None) => tok.parse().map_err(|_| err(ln, format!("tetrahedron count `{tok}` is not an integer")))?,
            _ => return Err(err(ln, "expected `tets <n>`")),
        };
        if n == 0 {
            return Err(err(ln, "tetrahedron count must be positive"));
        }
        let mut slots: Vec<[Option<(Gluing, usize)>; 4]> = vec![[None; 4]; n];
        for _ in 0..4 * n {
            let Some(&(gl, g)) = lines.get(i) else {
                return Err(err(ln, format!("block ends early: expected {} gluing lines", 4 * n)));
            };
            i += 1;
            let toks: Vec<&str> = g.split_whitespace().collect();
            if toks.len() != 6 || toks[2] != "->" {
                return Err(err(gl, format!("expected `<tet> <face> -> <tet> <face> <perm>`, found `{g}`")));
            }
            let t = parse_index(toks[0], gl, "tetrahedron", n)?;
            let f = parse_index(toks[1], gl, "face", 4)?;
            let t2 = parse_index(toks[3], gl, "tetrahedron", n)?;
            let f2 = parse_index(toks[4], gl, "face", 4)?;
            let perm: Perm4 = toks[5].parse().map_err(|e: String| err(gl, e))?;
            if perm.apply(f) != f2 {
                return Err(err(gl, format!("permutation {perm} sends vertex {f} to {}, not to face {f2}", perm.apply(f))));
            }
            if (t, f) == (t2, f2) {
                return Err(err(gl, format!("face ({t}, {f}) is glued to itself")));
            }
            if let Some((_, prev)) = slots[t][f] {
                return Err(err(gl, format!("face ({t}, {f}) already glued on line {prev}")));
            }
            slots[t][f] = Some((Gluing { tet: t2, face: f2, perm }, gl));
        }
        let mut rows = Vec::with_capacity(n);
        for t in 0..n {
            let mut row = [Gluing { tet: 0, face: 0, perm: Perm4::IDENTITY }; 4];
            for f in 0..4 {
                let (g, gl) = slots[t][f].expect("4n distinct faces fill every slot");
                let (back, _) = slots[g.tet][g.face].expect("slot filled");
                if back.tet != t || back.face != f || back.perm != g.perm.inverse() {
                    return Err(err(
                        gl,
                        format!(
                            "gluing ({t}, {f}) -> ({}, {}) is not inverted by the gluing of face ({}, {})",
                            g.tet, g.face, g.tet, g.face
                        ),
                    ));
                }
                row[f] = g;
            }
            rows.push(row);
        }
        let triangulation = Triangulation::new(rows).map_err(|e| err(ln, e.to_string()))?;
        blocks.push(TriangulationBlock { line: ln, triangulation });
    }
    Ok(blocks)
}

pub fn write_triangulation(t: &Triangulation) -> String {
    let mut out = format!("tets {}\n", t.tet_count());
    for (tet, row) in t.gluings().iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            let _ = writeln!(out, "{tet} {f} -> {} {} {}", g.tet, g.face, g.perm);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE: &str = "# a comment\ntets 1\n0 0 -> 0 1 1023\n0 1 -> 0 0 1023\n0 2 -> 0 3 0132\n0 3 -> 0 2 0132\n";

    #[test]
    fn round_trip() {
        let blocks = parse_triangulations(ONE).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(blocks[0].line, 2);
        let text = write_triangulation(&blocks[0].triangulation);
        let again = parse_triangulations(&text).unwrap();
        assert_eq!(again[0].triangulation, blocks[0].triangulation);
    }

    #[test]
    fn involution_violation_names_the_line() {
        let bad = ONE.replace("0 3 -> 0 2 0132", "0 3 -> 0 2 0123");
        let e = parse_triangulations(&bad).unwrap_err();
        assert!(e.message.contains("sends vertex") && e.line == 6, "{e}");
        let bad = ONE.replace("0 1 -> 0 0 1023", "0 1 -> 0 0 1032");
        let e = parse_triangulations(&bad).unwrap_err();
        assert_eq!(e.line, 3, "{e}");
        let dup = ONE.replace("0 1 -> 0 0 1023", "0 0 -> 0 1 1023");
        assert_eq!(parse_triangulations(&dup).unwrap_err().line, 4);
    }

    #[test]
    fn truncated_block() {
        let e = parse_triangulations("tets 2\n0 0 -> 1 0 0123\n").unwrap_err();
        assert_eq!(e.line, 1);
    }
}
