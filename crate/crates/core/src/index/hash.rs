//! Canonical tree serialization and 64-bit FNV-1a digests.
//!
//! The digest algorithm is pinned so that persisted index files stay
//! portable across builds and platforms.

use std::collections::BTreeSet;

use crate::texvc::MathNode;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

/// Injective byte serialization of a tree: a tag byte per variant,
/// length-prefixed strings, count-prefixed child lists.
pub fn canonical_bytes(node: &MathNode) -> Vec<u8> {
    let mut out = Vec::new();
    write_node(node, &mut out);
    out
}

fn write_str(s: &str, out: &mut Vec<u8>) {
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

fn write_children(children: &[MathNode], out: &mut Vec<u8>) {
    out.extend_from_slice(&(children.len() as u32).to_le_bytes());
    for c in children {
        write_node(c, out);
    }
}

fn write_node(node: &MathNode, out: &mut Vec<u8>) {
    match node {
        MathNode::Identifier { name, unicode_hint } => {
            out.push(1);
            write_str(name, out);
            match unicode_hint {
                Some(c) => {
                    out.push(1);
                    out.extend_from_slice(&(*c as u32).to_le_bytes());
                }
                None => out.push(0),
            }
        }
        MathNode::Number { literal } => {
            out.push(2);
            write_str(literal, out);
        }
        MathNode::Operator { symbol } => {
            out.push(3);
            write_str(symbol, out);
        }
        MathNode::Row { children } => {
            out.push(4);
            write_children(children, out);
        }
        MathNode::Command { name, args } => {
            out.push(5);
            write_str(name, out);
            write_children(args, out);
        }
        MathNode::Script { base, sub, sup } => {
            out.push(6);
            write_node(base, out);
            for part in [sub, sup] {
                match part {
                    Some(n) => {
                        out.push(1);
                        write_node(n, out);
                    }
                    None => out.push(0),
                }
            }
        }
        MathNode::SemanticMacro {
            macro_name,
            rendered,
            concept_key,
        } => {
            out.push(7);
            write_str(macro_name, out);
            write_str(concept_key, out);
            write_node(rendered, out);
        }
        MathNode::ChemEquation { children } => {
            out.push(8);
            write_children(children, out);
        }
    }
}

/// Digest of one (already normalized) tree.
pub fn tree_hash(node: &MathNode) -> u64 {
    fnv1a64(&canonical_bytes(node))
}

/// Digests of every subtree, the whole tree included.
pub fn subtree_hashes(node: &MathNode) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    node.for_each(&mut |n| {
        out.insert(tree_hash(n));
    });
    out
}

/// Structural containment: `needle` equals `hay` or one of its
/// subtrees.
pub fn contains_subtree(hay: &MathNode, needle: &MathNode) -> bool {
    if hay == needle {
        return true;
    }
    match hay {
        MathNode::Row { children }
        | MathNode::ChemEquation { children }
        | MathNode::Command { args: children, .. } => {
            children.iter().any(|c| contains_subtree(c, needle))
        }
        MathNode::Script { base, sub, sup } => {
            contains_subtree(base, needle)
                || sub.as_deref().is_some_and(|n| contains_subtree(n, needle))
                || sup.as_deref().is_some_and(|n| contains_subtree(n, needle))
        }
        MathNode::SemanticMacro { rendered, .. } => contains_subtree(rendered, needle),
        MathNode::Identifier { .. } | MathNode::Number { .. } | MathNode::Operator { .. } => false,
    }
}
