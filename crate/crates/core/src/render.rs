//! ASCII and Graphviz renderings of the nested partitions `L_0 ⊃ L_1 ⊃ …`
//! of a homeomorphism's source and target tiles.
//!
//! With leaf-orbit colouring, a node `ℓ_1⋯ℓ_k` is coloured by its last
//! block `ℓ_k`, and its image `τ(ℓ_1)⋯τ(ℓ_k)` gets the same colour.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::tile::{partition_at_level, Tile};
use crate::transducer::Homeo;
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coloring {
    None,
    LeafOrbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSpec {
    pub depth: usize,
    pub format: Format,
    pub coloring: Coloring,
}

const PALETTE: [&str; 12] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33", "#a65628", "#f781bf",
    "#999999", "#66c2a5", "#fc8d62", "#8da0cb",
];

fn color_name(index: usize, classes: usize) -> String {
    match PALETTE.get(index) {
        Some(c) => (*c).to_string(),
        None => format!("{:.3} 0.600 0.900", index as f64 / classes as f64),
    }
}

/// One side of the picture: the levels of a tile, each node tagged with the
/// colour class of its last block.
struct Side<'a> {
    name: &'static str,
    tile: &'a Tile,
    /// `levels[k]` = `L_k`, with colour classes, in ⪯ order.
    levels: Vec<Vec<(Word, Option<usize>)>>,
}

fn last_block_class(h: &Homeo, word: &Word) -> Option<usize> {
    let blocks = h.apply_traced(word).ok()?.0.blocks;
    blocks.last().and_then(|b| h.source().leaf_index(b))
}

fn build_sides(h: &Homeo, depth: usize, cap: usize) -> Result<(Side<'_>, Side<'_>)> {
    let per_level = h.source().leaf_count() as u128;
    let nodes =
        (0..=depth as u32).try_fold(0u128, |acc, k| acc.checked_add(per_level.checked_pow(k)?));
    match nodes {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(Error::CapExceeded {
                what: "rendered tree",
                needed: nodes.unwrap_or(u128::MAX),
                cap,
            })
        }
    }
    let inverse = h.inverse();
    let mut source_levels = Vec::new();
    let mut target_levels = Vec::new();
    for k in 0..=depth {
        let src = partition_at_level(h.source(), k, cap)?;
        let tgt = partition_at_level(h.target(), k, cap)?;
        source_levels.push(
            src.into_iter()
                .map(|w| {
                    let class = last_block_class(h, &w);
                    (w, class)
                })
                .collect(),
        );
        target_levels.push(
            tgt.into_iter()
                .map(|w| {
                    let pre = inverse.extend_blockwise(&w).expect("level word factors");
                    (w, last_block_class(h, &pre))
                })
                .collect(),
        );
    }
    Ok((
        Side {
            name: "source",
            tile: h.source(),
            levels: source_levels,
        },
        Side {
            name: "target",
            tile: h.target(),
            levels: target_levels,
        },
    ))
}

/// Renders both trees to `spec.depth` levels. Errors if a level exceeds `cap` words.
pub fn render(h: &Homeo, spec: &RenderSpec, cap: usize) -> Result<String> {
    let (source, target) = build_sides(h, spec.depth, cap)?;
    let classes = h.source().leaf_count();
    Ok(match spec.format {
        Format::Ascii => {
            let mut out = String::new();
            for side in [&source, &target] {
                ascii_side(&mut out, side, spec.coloring);
            }
            out
        }
        Format::Dot => {
            let mut out = String::from("digraph homeo {\n");
            out.push_str(
                "  node [shape=box, style=filled, fillcolor=white, fontname=\"monospace\"];\n",
            );
            for (side, prefix) in [(&source, "s"), (&target, "t")] {
                dot_side(&mut out, side, prefix, spec.coloring, classes);
            }
            out.push_str("}\n");
            out
        }
    })
}

fn label(word: &Word) -> String {
    format!("{word:?}")
}

fn children<'s>(
    side: &'s Side<'_>,
    level: usize,
    parent: &Word,
) -> impl Iterator<Item = &'s (Word, Option<usize>)> {
    let parent = parent.digits().to_vec();
    side.levels
        .get(level + 1)
        .into_iter()
        .flatten()
        .filter(move |(w, _)| w.digits().starts_with(&parent))
}

fn ascii_side(out: &mut String, side: &Side<'_>, coloring: Coloring) {
    let _ = writeln!(
        out,
        "{} (base {}, {} leaves)",
        side.name,
        side.tile.base(),
        side.tile.leaf_count()
    );
    let (root, _) = &side.levels[0][0];
    let _ = writeln!(out, "{}", label(root));
    ascii_children(out, side, 0, root, "", coloring);
}

fn ascii_children(
    out: &mut String,
    side: &Side<'_>,
    level: usize,
    parent: &Word,
    indent: &str,
    coloring: Coloring,
) {
    let kids: Vec<_> = children(side, level, parent).collect();
    for (i, (word, class)) in kids.iter().enumerate() {
        let last = i + 1 == kids.len();
        let tag = match (coloring, class) {
            (Coloring::LeafOrbit, Some(c)) => format!(" [c{c}]"),
            _ => String::new(),
        };
        let _ = writeln!(
            out,
            "{indent}{}{}{tag}",
            if last { "└── " } else { "├── " },
            label(word)
        );
        let deeper = format!("{indent}{}", if last { "    " } else { "│   " });
        ascii_children(out, side, level + 1, word, &deeper, coloring);
    }
}

fn node_id(prefix: &str, word: &Word) -> String {
    if word.is_empty() {
        return format!("{prefix}_root");
    }
    let digits: Vec<String> = word.digits().iter().map(u32::to_string).collect();
    format!("{prefix}_{}", digits.join("_"))
}

fn dot_side(out: &mut String, side: &Side<'_>, prefix: &str, coloring: Coloring, classes: usize) {
    let _ = writeln!(out, "  subgraph cluster_{} {{", side.name);
    let _ = writeln!(
        out,
        "    label=\"{} (base {})\";",
        side.name,
        side.tile.base()
    );
    for level in &side.levels {
        for (word, class) in level {
            let color = match (coloring, class) {
                (Coloring::LeafOrbit, Some(c)) => {
                    format!(", fillcolor=\"{}\"", color_name(*c, classes))
                }
                _ => String::new(),
            };
            let _ = writeln!(
                out,
                "    {} [label=\"{}\"{color}];",
                node_id(prefix, word),
                label(word)
            );
        }
    }
    for (k, level) in side.levels.iter().enumerate() {
        for (parent, _) in level {
            for (child, _) in children(side, k, parent) {
                let _ = writeln!(
                    out,
                    "    {} -> {};",
                    node_id(prefix, parent),
                    node_id(prefix, child)
                );
            }
        }
    }
    out.push_str("  }\n");
}
