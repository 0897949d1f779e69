//! Text diagrams: an `n x n` grid with block outlines, `1` on the diagonal
//! and one symbol per marked position.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::blocks::Root;
use crate::combinatorics::BaseData;
use crate::structure::StructureSets;

pub const BASE_MARK: char = '⊗';
pub const PAIR_MARK: char = '×';
pub const CHAIN_MARK: char = '⊠';
pub const SHADOW_MARK: char = '•';
pub const MINOR_MARK: char = '□';

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Base,
    Pairs,
    Chains,
    Shadow,
    Principal,
}

impl Layer {
    pub const ALL: [Layer; 5] = [
        Layer::Base,
        Layer::Pairs,
        Layer::Chains,
        Layer::Shadow,
        Layer::Principal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Layer::Base => "s",
            Layer::Pairs => "phi",
            Layer::Chains => "psi",
            Layer::Shadow => "t",
            Layer::Principal => "principal",
        }
    }

    fn needs_anchor(self) -> bool {
        matches!(self, Layer::Chains | Layer::Shadow | Layer::Principal)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown layer `{0}` (expected s, phi, psi, t, principal)")]
pub struct LayerParseError(pub String);

impl FromStr for Layer {
    type Err = LayerParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" => Ok(Layer::Base),
            "phi" => Ok(Layer::Pairs),
            "psi" => Ok(Layer::Chains),
            "t" => Ok(Layer::Shadow),
            "principal" => Ok(Layer::Principal),
            other => Err(LayerParseError(other.to_string())),
        }
    }
}

/// Parses a comma-separated layer list such as `"s,phi,psi"`.
pub fn parse_layers(s: &str) -> Result<BTreeSet<Layer>, LayerParseError> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Renders the requested layers. When several layers mark the same cell
/// the chain mark wins, then base, pair, shadow and principal-minor marks.
pub fn render_diagram(bd: &BaseData, sets: Option<&StructureSets>, layers: &BTreeSet<Layer>) -> String {
    let bs = &bd.bs;
    let n = bs.n();
    let bounds: BTreeSet<usize> = bs.bounds().iter().copied().collect();
    let empty = BTreeSet::new();
    let psi = sets.map_or(&empty, |s| &s.psi);
    let shadow = sets.map_or(&empty, |s| &s.shadow);
    let minor_cells: BTreeSet<Root> = sets
        .map(|s| {
            s.minors
                .iter()
                .flat_map(|pm| pm.rows.iter().flat_map(move |&i| pm.cols.iter().map(move |&j| Root::new(i, j))))
                .collect()
        })
        .unwrap_or_default();

    let symbol = |r: Root| -> char {
        if r.row == r.col {
            return '1';
        }
        if layers.contains(&Layer::Chains) && psi.contains(&r) {
            CHAIN_MARK
        } else if layers.contains(&Layer::Base) && bd.is_base(r) {
            BASE_MARK
        } else if layers.contains(&Layer::Pairs) && bd.is_phi(r) {
            PAIR_MARK
        } else if layers.contains(&Layer::Shadow) && shadow.contains(&r) {
            SHADOW_MARK
        } else if layers.contains(&Layer::Principal) && minor_cells.contains(&r) {
            MINOR_MARK
        } else {
            ' '
        }
    };

    let label = n.to_string().len();
    let mut out = String::new();
    // header
    let _ = write!(out, "{:label$} ", "");
    for j in 1..=n {
        if bounds.contains(&(j - 1)) {
            out.push(' ');
        }
        let _ = write!(out, "{:>2}", j % 100);
    }
    out.push('\n');
    let rule = |out: &mut String| {
        let _ = write!(out, "{:label$} ", "");
        for j in 1..=n {
            if bounds.contains(&(j - 1)) {
                out.push('+');
            }
            out.push_str("--");
        }
        out.push_str("+\n");
    };
    rule(&mut out);
    for i in 1..=n {
        let _ = write!(out, "{i:>label$} ");
        for j in 1..=n {
            if bounds.contains(&(j - 1)) {
                out.push('|');
            }
            out.push(' ');
            out.push(symbol(Root::new(i, j)));
        }
        out.push_str("|\n");
        if bounds.contains(&i) {
            rule(&mut out);
        }
    }

    if bd.m_set.is_empty() {
        out.push_str("m = 0\n");
    }
    if sets.is_none() && layers.iter().any(|l| l.needs_anchor()) && !bd.m_set.is_empty() {
        out.push_str("no base root in the last column: psi, t and principal layers are empty\n");
    }
    out
}
