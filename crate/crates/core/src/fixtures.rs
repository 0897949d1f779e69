//! The three worked examples and their reference root sets, used by the
//! `combinatorics` verification suite.

use crate::blocks::{BlockStructure, Root};

pub const FIRST_EXAMPLE: &[usize] = &[1, 3, 2, 1, 3, 2, 2];
pub const SECOND_EXAMPLE: &[usize] = &[2, 2, 1, 3, 2, 1, 3];
pub const THIRD_EXAMPLE: &[usize] = &[1, 1, 4, 2];

pub fn examples() -> Vec<BlockStructure> {
    [FIRST_EXAMPLE, SECOND_EXAMPLE, THIRD_EXAMPLE]
        .iter()
        .map(|s| BlockStructure::new(s.to_vec()).expect("valid example"))
        .collect()
}

/// Which derived set a fixture pins down.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Base,
    Pairs,
    Chains,
    Shadow,
    /// Principal minors as `(rows, cols)` pairs, encoded row-major below.
    Minors,
}

pub struct Fixture {
    pub name: &'static str,
    pub blocks: &'static [usize],
    pub kind: FixtureKind,
    pub roots: &'static [(usize, usize)],
    pub minors: &'static [(&'static [usize], &'static [usize])],
}

const fn roots(
    name: &'static str,
    blocks: &'static [usize],
    kind: FixtureKind,
    roots: &'static [(usize, usize)],
) -> Fixture {
    Fixture {
        name,
        blocks,
        kind,
        roots,
        minors: &[],
    }
}

const fn minors(
    name: &'static str,
    blocks: &'static [usize],
    minors: &'static [(&'static [usize], &'static [usize])],
) -> Fixture {
    Fixture {
        name,
        blocks,
        kind: FixtureKind::Minors,
        roots: &[],
        minors,
    }
}

pub const FIXTURES: &[Fixture] = &[
    roots(
        "first example base",
        FIRST_EXAMPLE,
        FixtureKind::Base,
        &[(1, 2), (2, 10), (3, 6), (4, 5), (5, 9), (6, 7), (7, 8), (9, 12), (10, 11), (11, 14), (12, 13)],
    ),
    roots(
        "first example generated roots",
        FIRST_EXAMPLE,
        FixtureKind::Pairs,
        &[(2, 5), (2, 6), (5, 7), (8, 11), (8, 12), (9, 11), (11, 13)],
    ),
    roots(
        "first example chain roots",
        FIRST_EXAMPLE,
        FixtureKind::Chains,
        &[
            (1, 2), (2, 5), (2, 6), (3, 6), (5, 7), (5, 9), (6, 7), (7, 8),
            (8, 11), (8, 12), (9, 11), (9, 12), (11, 13), (11, 14), (12, 13),
        ],
    ),
    roots(
        "first example shadow set",
        FIRST_EXAMPLE,
        FixtureKind::Shadow,
        &[(4, 7), (4, 8), (4, 9), (4, 11), (4, 12), (4, 13), (4, 14), (10, 13), (10, 14)],
    ),
    minors(
        "first example principal minors",
        FIRST_EXAMPLE,
        &[
            (&[1], &[2]),
            (&[2, 3], &[5, 6]),
            (&[5, 6], &[7, 9]),
            (&[7], &[8]),
            (&[8, 9], &[11, 12]),
            (&[11, 12], &[13, 14]),
        ],
    ),
    roots(
        "second example chain roots",
        SECOND_EXAMPLE,
        FixtureKind::Chains,
        &[
            (1, 4), (2, 3), (3, 5), (3, 7), (4, 5), (5, 6), (6, 9), (6, 10),
            (6, 14), (7, 9), (7, 10), (8, 9), (9, 11), (9, 13), (10, 11), (11, 12),
        ],
    ),
    minors(
        "second example principal minors",
        SECOND_EXAMPLE,
        &[
            (&[1, 2], &[3, 4]),
            (&[3, 4], &[5, 7]),
            (&[5], &[6]),
            (&[6, 7, 8], &[9, 10, 14]),
            (&[9, 10], &[11, 13]),
            (&[11], &[12]),
        ],
    ),
    roots(
        "third example base",
        THIRD_EXAMPLE,
        FixtureKind::Base,
        &[(1, 2), (2, 3), (5, 8), (6, 7)],
    ),
    roots("third example generated roots", THIRD_EXAMPLE, FixtureKind::Pairs, &[(3, 7), (3, 8)]),
    roots(
        "third example chain roots",
        THIRD_EXAMPLE,
        FixtureKind::Chains,
        &[(1, 2), (2, 3), (3, 7), (3, 8)],
    ),
    minors(
        "third example principal minors",
        THIRD_EXAMPLE,
        &[(&[1], &[2]), (&[2], &[3]), (&[3, 4], &[7, 8])],
    ),
];

impl Fixture {
    pub fn blocks(&self) -> BlockStructure {
        BlockStructure::new(self.blocks.to_vec()).expect("valid fixture blocks")
    }

    pub fn expected_roots(&self) -> Vec<Root> {
        self.roots.iter().map(|&p| Root::from(p)).collect()
    }

    pub fn expected_minors(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.minors.iter().map(|(r, c)| (r.to_vec(), c.to_vec())).collect()
    }
}
