//! Extender tables for two, three and four members, and the explicit
//! optimal assignments they certify.

use super::{Extender, SubsetMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtenderTable {
    /// The unique `i`-extender for `m = 2`, `i = 1, 2, 3`.
    PairExtenders,
    /// The critical positive extenders for `m = 3`.
    TripleCritical,
    /// Regulators (0-extenders) used to balance `m = 4` optima.
    QuadRegulators,
    /// The balanced critical positive extenders for `m = 4`.
    QuadBalancedCritical,
}

impl ExtenderTable {
    pub fn name(self) -> &'static str {
        match self {
            ExtenderTable::PairExtenders => "pair-extenders",
            ExtenderTable::TripleCritical => "triple-critical",
            ExtenderTable::QuadRegulators => "quad-regulators",
            ExtenderTable::QuadBalancedCritical => "quad-balanced-critical",
        }
    }

    pub fn members(self) -> usize {
        match self {
            ExtenderTable::PairExtenders => 2,
            ExtenderTable::TripleCritical => 3,
            ExtenderTable::QuadRegulators | ExtenderTable::QuadBalancedCritical => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub table: ExtenderTable,
    pub name: String,
    pub tau: Extender,
    /// Value printed with the row; `None` where it is read off the level sums.
    pub stated_value: Option<i64>,
    /// Nearest extender when the printed entries violate the extender
    /// equations.
    pub correction: Option<Extender>,
}

impl TableRow {
    /// The correction if there is one, the printed row otherwise.
    pub fn effective(&self) -> &Extender {
        self.correction.as_ref().unwrap_or(&self.tau)
    }
}

/// Column order of the printed tables: `∅`, singletons, pairs, ... in
/// lexicographic order within each size (`1, 2, 3, 12, 13, 23, 123` for
/// `m = 3`).
fn printed_order(m: usize) -> Vec<usize> {
    let mut masks: Vec<usize> = (0..1usize << m).collect();
    masks.sort_by_key(|&mask| {
        let members: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
        (members.len(), members)
    });
    masks
}

fn from_printed(m: usize, row: &[i64]) -> Extender {
    let mut tau = Extender::zeros(m).expect("small m");
    for (&mask, &v) in printed_order(m).iter().zip(row) {
        tau.set(mask, v);
    }
    tau
}

const TRIPLE_CRITICAL: [[i64; 8]; 4] = [
    [-3, 1, 1, 1, 0, 0, 0, 0],
    [-2, 0, 0, 0, 1, 1, 1, -1],
    [-1, -1, -1, -1, 2, 2, 2, -2],
    [0, -2, -2, -2, 3, 3, 3, -3],
];

const QUAD_REGULATORS: [[i64; 16]; 3] = [
    [1, 0, -1, -1, -1, 0, 0, 0, 1, 1, 1, 0, 0, 0, -1, 0],
    [1, 1, 1, -1, -1, -1, 0, 0, 0, 0, 1, 0, 0, -1, -1, 1],
    [0, 0, 0, 0, -1, 0, 0, 1, 0, 1, 1, 0, -1, -1, -1, 1],
];

/// `rho_1` as printed has element sums `(0, 0, -1, -1)`; the closest
/// regulator differs at `∅`, `{3}` and `{4}`.
const QUAD_REGULATOR_1_CORRECTED: [i64; 16] = [-1, 1, 1, 0, 0, -1, 0, 0, 0, 0, 1, 0, 0, -1, -1, 1];

/// Level values `|A| = 0..4`.
const QUAD_BALANCED_CRITICAL: [[i64; 5]; 11] = [
    [-2, -1, 2, -2, 2],
    [0, -2, 2, -1, 0],
    [-3, 0, 1, -1, 1],
    [2, -3, 2, 0, 2],
    [-1, -1, 1, 0, -1],
    [-4, 1, 0, 0, 0],
    [1, -2, 1, 1, -3],
    [-2, 0, 0, 1, -2],
    [0, -1, 0, 2, -4],
    [-1, 0, -1, 3, -5],
    [0, 0, -2, 5, -8],
];

/// `tau_3` as printed has total and pair sums 4; flipping the sign of the
/// top level gives a 1-extender.
const QUAD_CRITICAL_3_CORRECTED: [i64; 5] = [2, -3, 2, 0, -2];

/// Every row of the four extender tables, transcribed verbatim, with
/// corrections attached to the two misprinted rows.
pub fn builtin_extender_tables() -> Vec<TableRow> {
    let mut rows = Vec::new();
    for i in 1..=3 {
        rows.push(TableRow {
            table: ExtenderTable::PairExtenders,
            name: format!("tau_{i}"),
            tau: from_printed(2, &[-2 * i, i, i, 0]),
            stated_value: Some(i),
            correction: None,
        });
    }
    for (i, row) in TRIPLE_CRITICAL.iter().enumerate() {
        rows.push(TableRow {
            table: ExtenderTable::TripleCritical,
            name: format!("tau_{i}"),
            tau: from_printed(3, row),
            stated_value: Some(1),
            correction: None,
        });
    }
    for (i, row) in QUAD_REGULATORS.iter().enumerate() {
        rows.push(TableRow {
            table: ExtenderTable::QuadRegulators,
            name: format!("rho_{i}"),
            tau: from_printed(4, row),
            stated_value: Some(0),
            correction: (i == 1).then(|| from_printed(4, &QUAD_REGULATOR_1_CORRECTED)),
        });
    }
    for (i, row) in QUAD_BALANCED_CRITICAL.iter().enumerate() {
        rows.push(TableRow {
            table: ExtenderTable::QuadBalancedCritical,
            name: format!("tau_{i}"),
            tau: SubsetMap::from_levels(4, row).expect("five levels"),
            stated_value: None,
            correction: (i == 3).then(|| SubsetMap::from_levels(4, &QUAD_CRITICAL_3_CORRECTED).expect("five levels")),
        });
    }
    rows
}

/// Level values of the optimal `(l, 2, n)`-assignment, `n >= l`.
pub fn two_member_optimum(l: i64, n: i64) -> [i64; 3] {
    [(n + l).rem_euclid(2), (n - l).div_euclid(2), l]
}

/// Level values of the optimal `(l, 3, n)`-assignment, `n >= l`.
pub fn three_member_optimum(l: i64, n: i64) -> [i64; 4] {
    if n < 3 * l {
        [
            (n - l).rem_euclid(2),
            0,
            (n - l).div_euclid(2),
            (3 * l - n + 1).div_euclid(2),
        ]
    } else {
        [n.rem_euclid(3), n.div_euclid(3) - l, l, 0]
    }
}

/// Level values of the optimal balanced `(l, 4, n)`-assignment, split into
/// the five ranges `[l, 2l)`, `[2l, 6l-5)`, `[6l-5, 6l-2]`, `{6l-1}`,
/// `[6l, ∞)`.
pub fn four_member_optimum(l: i64, n: i64) -> [i64; 5] {
    if n < 2 * l {
        let r = (n - l).rem_euclid(2);
        [r, 0, 0, (n - l).div_euclid(2), 2 * l - n + r]
    } else if n < 6 * l - 5 {
        let r = (n - 6 * l).rem_euclid(8);
        let q = (r - (n - 6 * l)) / 8;
        [r % 3, 0, l - 2 * q + r / 3, q - r / 3, r / 3]
    } else if n <= 6 * l - 2 {
        [n - (6 * l - 5), 0, l - 1, 0, 1]
    } else if n == 6 * l - 1 {
        [0, 1, l - 1, 0, 1]
    } else {
        [(n - 6 * l).rem_euclid(4), (n - 6 * l).div_euclid(4), l, 0, 0]
    }
}
