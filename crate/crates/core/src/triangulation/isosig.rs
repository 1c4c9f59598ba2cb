//! Canonical isomorphism signatures.
//!
//! A labelling is grown breadth-first from a start tetrahedron and a start
//! vertex labelling: faces are visited in new-label order, and each newly
//! reached tetrahedron is labelled so that the gluing that reached it becomes
//! a fixed permutation. The code lists `(destination, permutation index)` for
//! every face in that order, and the signature is the minimum code over all
//! starts.
//!
//! With orientation respected, the triangulation is first relabelled so all
//! gluings are odd (keeping tetrahedron 0's labels, which fixes the
//! orientation), only even start labellings are used, and newly reached
//! tetrahedra are reached through an odd transposition fixing the face.

use super::{Gluing, Triangulation};
use crate::perm::{Perm4, S4};
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IsoSignature(Vec<u8>);

impl IsoSignature {
    pub fn bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn tet_count(&self) -> usize {
        self.0[0] as usize
    }

    /// Rebuilds the canonically labelled triangulation.
    pub fn to_triangulation(&self) -> Result<Triangulation, String> {
        let n = self.tet_count();
        if n == 0 || self.0.len() != 1 + 8 * n {
            return Err(format!("signature of length {} does not encode {n} tetrahedra", self.0.len()));
        }
        let mut rows = Vec::with_capacity(n);
        for t in 0..n {
            let mut row = [Gluing { tet: 0, face: 0, perm: Perm4::IDENTITY }; 4];
            for (f, slot) in row.iter_mut().enumerate() {
                let at = 1 + 8 * t + 2 * f;
                let perm = Perm4::from_index(self.0[at + 1] as usize).ok_or("bad permutation index")?;
                *slot = Gluing { tet: self.0[at] as usize, face: perm.apply(f), perm };
            }
            rows.push(row);
        }
        Triangulation::new(rows).map_err(|e| e.to_string())
    }
}

impl fmt::Display for IsoSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(&self.0))
    }
}

impl FromStr for IsoSignature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = hex::decode(s).map_err(|e| format!("signature `{s}`: {e}"))?;
        let sig = IsoSignature(bytes);
        sig.to_triangulation()?;
        Ok(sig)
    }
}

/// Odd permutation fixing `f`: swaps the two smallest other labels.
fn face_flip(f: usize) -> Perm4 {
    let others: Vec<usize> = (0..4).filter(|&v| v != f).collect();
    Perm4::transposition(others[0], others[1])
}

fn code_from(t: &Triangulation, start: usize, start_perm: Perm4, oriented: bool, best: Option<&[u8]>) -> Option<Vec<u8>> {
    let n = t.tet_count();
    let mut label = vec![usize::MAX; n];
    let mut sigma = vec![Perm4::IDENTITY; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    sigma[start] = start_perm;
    order.push(start);
    let mut code = Vec::with_capacity(1 + 8 * n);
    code.push(n as u8);
    let mut still_tied = best.is_some();
    let mut k = 0;
    while k < order.len() {
        let old = order[k];
        let inv = sigma[old].inverse();
        for face in 0..4 {
            let g = t.gluing(old, inv.apply(face));
            if label[g.tet] == usize::MAX {
                label[g.tet] = order.len();
                order.push(g.tet);
                // New gluing perm is sigma[g.tet] * g.perm * sigma[old]^-1.
                let base = sigma[old].compose(g.perm.inverse());
                sigma[g.tet] = if oriented { face_flip(face).compose(base) } else { base };
            }
            let perm = sigma[g.tet].compose(g.perm).compose(inv);
            code.push(label[g.tet] as u8);
            code.push(perm.index() as u8);
            if still_tied {
                let b = best.unwrap();
                let len = code.len();
                match code[len - 2..].cmp(&b[len - 2..len]) {
                    std::cmp::Ordering::Greater => return None,
                    std::cmp::Ordering::Less => still_tied = false,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        k += 1;
    }
    debug_assert_eq!(order.len(), n, "signature requires a connected triangulation");
    Some(code)
}

/// Lexicographically minimal code over all relabellings; with
/// `respect_orientation`, only over orientation-preserving relabellings of
/// the orientation in which tetrahedron 0 is positively labelled.
/// Non-orientable inputs are always treated without orientation.
pub fn iso_signature(t: &Triangulation, respect_orientation: bool) -> IsoSignature {
    let oriented = if respect_orientation { t.oriented() } else { None };
    let (tri, use_orientation) = match &oriented {
        Some(o) => (o, true),
        None => (t, false),
    };
    let mut best: Option<Vec<u8>> = None;
    for start in 0..tri.tet_count() {
        for p in S4 {
            if use_orientation && !p.is_even() {
                continue;
            }
            if let Some(code) = code_from(tri, start, p, use_orientation, best.as_deref()) {
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
    }
    IsoSignature(best.expect("at least one start"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::fixtures::glue;

    #[test]
    fn hex_round_trip() {
        let t = glue(&[[(0, 1, "1023"), (0, 0, "1023"), (0, 3, "0132"), (0, 2, "0132")]]);
        let sig = iso_signature(&t, false);
        let parsed: IsoSignature = sig.to_string().parse().unwrap();
        assert_eq!(parsed, sig);
        assert_eq!(iso_signature(&parsed.to_triangulation().unwrap(), false), sig);
    }

    #[test]
    fn oriented_codes_have_odd_gluings() {
        let t = glue(&[
            [(1, 0, "0132"), (1, 1, "0132"), (1, 3, "0132"), (1, 2, "0132")],
            [(0, 0, "0132"), (0, 1, "0132"), (0, 3, "0132"), (0, 2, "0132")],
        ]);
        let sig = iso_signature(&t, true);
        assert!(sig.to_triangulation().unwrap().is_oriented());
    }
}
