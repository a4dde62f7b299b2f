//! Desarguesian projective planes `PG(2, q)` and the trim that removes one
//! line together with its points.

use super::field::{gf, FiniteField};
use super::ConstructionError;
use crate::family::SetFamily;

/// Points and lines of `PG(2, q)`.
///
/// Points and lines are both normalized triples in lexicographic order.
/// Line `[a, b, c]` contains point `[x, y, z]` iff `ax + by + cz = 0`.
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    field: FiniteField,
    triples: Vec<[u32; 3]>,
    /// Point labels (1-based) on each line, increasing.
    lines: Vec<Vec<u32>>,
}

impl ProjectivePlane {
    pub fn new(q: u64) -> Result<Self, ConstructionError> {
        let field = gf(q)?;
        let q = field.order();
        let mut triples = Vec::with_capacity((q * q + q + 1) as usize);
        for x in 0..q {
            for y in 0..q {
                for z in 0..q {
                    let first = [x, y, z].into_iter().find(|&c| c != 0);
                    if first == Some(1) {
                        triples.push([x, y, z]);
                    }
                }
            }
        }
        let lines = triples
            .iter()
            .map(|line| {
                (1..=triples.len() as u32)
                    .filter(|&label| {
                        let point = triples[label as usize - 1];
                        let dot = (0..3).fold(0, |acc, i| field.add(acc, field.mul(line[i], point[i])));
                        dot == 0
                    })
                    .collect()
            })
            .collect();
        Ok(ProjectivePlane { field, triples, lines })
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn order(&self) -> u64 {
        self.field.order() as u64
    }

    /// Normalized coordinates of point (or line) with 1-based label `label`.
    pub fn coordinates(&self, label: u32) -> [u32; 3] {
        self.triples[label as usize - 1]
    }

    pub fn lines(&self) -> &[Vec<u32>] {
        &self.lines
    }

    pub fn family(&self) -> SetFamily {
        SetFamily::new(self.triples.len(), self.lines.clone()).expect("lines are sorted subsets of the points")
    }

    /// Relabels so the last line's points become `q²+1..q²+q+1`, then drops
    /// them from every other line. Lines keep their canonical order.
    pub fn trimmed_lines(&self) -> Vec<Vec<u32>> {
        let q = self.order() as u32;
        let npoints = self.triples.len();
        let removed = self.lines.last().expect("a plane has lines");
        let mut relabel = vec![0u32; npoints + 1];
        let (mut inner, mut outer) = (0, q * q);
        for label in 1..=npoints as u32 {
            if removed.binary_search(&label).is_ok() {
                outer += 1;
                relabel[label as usize] = outer;
            } else {
                inner += 1;
                relabel[label as usize] = inner;
            }
        }
        self.lines[..self.lines.len() - 1]
            .iter()
            .map(|line| {
                let mut kept: Vec<u32> = line
                    .iter()
                    .map(|&p| relabel[p as usize])
                    .filter(|&p| p <= q * q)
                    .collect();
                kept.sort_unstable();
                kept
            })
            .collect()
    }
}

/// `PG(2, q)` as a family of lines on `q² + q + 1` points.
pub fn projective_plane(q: u64) -> Result<SetFamily, ConstructionError> {
    Ok(ProjectivePlane::new(q)?.family())
}

/// The first `n` trimmed lines of `PG(2, q)` on ground `[n]`, for
/// `q² <= n <= q² + q`. Each member has `q` points in `[q²]`.
pub fn projective_trim(q: u64, n: u64) -> Result<SetFamily, ConstructionError> {
    let plane = ProjectivePlane::new(q)?;
    if n < q * q || n > q * q + q {
        return Err(ConstructionError::InvalidParameters(format!(
            "trim needs q² <= n <= q² + q, got q = {q}, n = {n}"
        )));
    }
    let mut lines = plane.trimmed_lines();
    lines.truncate(n as usize);
    Ok(SetFamily::new(n as usize, lines)?)
}
