//! Bracketed constituency trees and constituent extraction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::{Error, Result};

/// Labels treated as a corpus wrapper around the real sentence node.
const WRAPPER_LABELS: [&str; 3] = ["", "TOP", "ROOT"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseTree {
    Node {
        label: String,
        children: Vec<ParseTree>,
    },
    Leaf(String),
}

impl ParseTree {
    pub fn node(label: impl Into<String>, children: Vec<ParseTree>) -> Self {
        ParseTree::Node {
            label: label.into(),
            children,
        }
    }

    pub fn leaf(surface: impl Into<String>) -> Self {
        ParseTree::Leaf(surface.into())
    }

    /// Node label, or `None` for a leaf.
    pub fn label(&self) -> Option<&str> {
        match self {
            ParseTree::Node { label, .. } => Some(label),
            ParseTree::Leaf(_) => None,
        }
    }

    pub fn children(&self) -> &[ParseTree] {
        match self {
            ParseTree::Node { children, .. } => children,
            ParseTree::Leaf(_) => &[],
        }
    }

    /// Leaves have height 1 and preterminals height 2.
    pub fn height(&self) -> usize {
        match self {
            ParseTree::Leaf(_) => 1,
            ParseTree::Node { children, .. } => {
                1 + children.iter().map(Self::height).max().unwrap_or(0)
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ParseTree::Leaf(_) => 1,
            ParseTree::Node { children, .. } => children.iter().map(Self::leaf_count).sum(),
        }
    }

    /// Terminals in order, each paired with its parent's label (the POS tag).
    pub fn leaves(&self) -> Vec<(&str, &str)> {
        let mut out = Vec::new();
        self.collect_leaves("", &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, parent: &'a str, out: &mut Vec<(&'a str, &'a str)>) {
        match self {
            ParseTree::Leaf(s) => out.push((parent, s)),
            ParseTree::Node { label, children } => {
                for c in children {
                    c.collect_leaves(label, out);
                }
            }
        }
    }

    pub fn surfaces(&self) -> Vec<&str> {
        self.leaves().into_iter().map(|(_, s)| s).collect()
    }

    /// Removes a corpus wrapper node (`TOP`, `ROOT` or an empty label)
    /// holding exactly one subtree.
    pub fn strip_wrapper(&self) -> &ParseTree {
        match self {
            ParseTree::Node { label, children }
                if WRAPPER_LABELS.contains(&label.as_str())
                    && children.len() == 1
                    && matches!(children[0], ParseTree::Node { .. }) =>
            {
                &children[0]
            }
            _ => self,
        }
    }

    /// Single-line bracketed rendering.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            ParseTree::Leaf(s) => out.push_str(s),
            ParseTree::Node { label, children } => {
                out.push('(');
                out.push_str(label);
                for (k, c) in children.iter().enumerate() {
                    if k > 0 || !label.is_empty() {
                        out.push(' ');
                    }
                    c.write(out);
                }
                out.push(')');
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lexeme<'a> {
    Open,
    Close,
    Atom(&'a str),
}

struct Lexer<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            text,
            pos: 0,
            line: 1,
            line_start: 0,
        }
    }

    /// 1-based (line, column) of the current position, column in characters.
    fn location(&self) -> (usize, usize) {
        (
            self.line,
            self.text[self.line_start..self.pos].chars().count() + 1,
        )
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let (line, column) = self.location();
        Error::Bracket {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        let rest = &self.text[self.pos..];
        for (k, c) in rest.char_indices() {
            if !c.is_whitespace() {
                self.pos += k;
                return;
            }
            if c == '\n' {
                self.line += 1;
                self.line_start = self.pos + k + 1;
            }
        }
        self.pos = self.text.len();
    }

    fn peek(&mut self) -> Option<Lexeme<'a>> {
        self.skip_space();
        let rest = &self.text[self.pos..];
        match rest.chars().next()? {
            '(' => Some(Lexeme::Open),
            ')' => Some(Lexeme::Close),
            _ => {
                let end = rest
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(rest.len());
                Some(Lexeme::Atom(&rest[..end]))
            }
        }
    }

    fn bump(&mut self, lexeme: Lexeme<'_>) {
        self.pos += match lexeme {
            Lexeme::Open | Lexeme::Close => 1,
            Lexeme::Atom(a) => a.len(),
        };
    }
}

/// Parses a sequence of bracketed trees.
///
/// Trees are usually one per line, but a tree may span several lines (as in
/// `.mrg` files). A node without a label, as in `( (S ...) )`, gets the
/// empty label.
pub fn parse_bracketed(text: &str) -> Result<Vec<ParseTree>> {
    let mut lexer = Lexer::new(text);
    let mut trees = Vec::new();
    while let Some(lexeme) = lexer.peek() {
        match lexeme {
            Lexeme::Open => trees.push(parse_node(&mut lexer)?),
            Lexeme::Close => return Err(lexer.error("unmatched ')'")),
            Lexeme::Atom(a) => return Err(lexer.error(format!("token {a:?} outside brackets"))),
        }
    }
    Ok(trees)
}

fn parse_node(lexer: &mut Lexer<'_>) -> Result<ParseTree> {
    // Iterative to survive deeply nested input.
    let mut stack: Vec<(String, Vec<ParseTree>)> = Vec::new();
    loop {
        let Some(lexeme) = lexer.peek() else {
            return Err(lexer.error("unbalanced brackets: missing ')'"));
        };
        match lexeme {
            Lexeme::Open => {
                lexer.bump(lexeme);
                let label = match lexer.peek() {
                    Some(l @ Lexeme::Atom(a)) => {
                        lexer.bump(l);
                        a.to_string()
                    }
                    _ => String::new(),
                };
                stack.push((label, Vec::new()));
            }
            Lexeme::Close => {
                let (label, children) = stack.pop().expect("inside a node");
                if children.is_empty() {
                    let what = if label.is_empty() {
                        "empty node \"()\""
                    } else {
                        "node without children"
                    };
                    return Err(lexer.error(what));
                }
                lexer.bump(lexeme);
                let node = ParseTree::Node { label, children };
                match stack.last_mut() {
                    Some((_, siblings)) => siblings.push(node),
                    None => return Ok(node),
                }
            }
            Lexeme::Atom(a) => {
                lexer.bump(lexeme);
                stack
                    .last_mut()
                    .expect("inside a node")
                    .1
                    .push(ParseTree::leaf(a));
            }
        }
    }
}

/// A labelled span over the leaves of a tree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constituent {
    pub label: String,
    pub start: usize,
    pub end: usize,
    pub tokens: Vec<String>,
}

impl Constituent {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// One constituent per node of height above 2, in depth-first order, with
/// spans offset by `start`.
pub fn get_constituents(tree: &ParseTree, start: usize) -> Vec<Constituent> {
    let surfaces = tree.surfaces();
    let mut out = Vec::new();
    collect_constituents(tree, start, &mut out);
    for c in &mut out {
        c.tokens = surfaces[c.start - start..c.end - start]
            .iter()
            .map(|s| s.to_string())
            .collect();
    }
    out
}

fn collect_constituents(tree: &ParseTree, start: usize, out: &mut Vec<Constituent>) -> usize {
    let ParseTree::Node { label, children } = tree else {
        return 1;
    };
    // Height exceeds 2 exactly when some child is itself a node.
    let slot = children
        .iter()
        .any(|c| matches!(c, ParseTree::Node { .. }))
        .then(|| {
            out.push(Constituent {
                label: label.clone(),
                start,
                end: start,
                tokens: Vec::new(),
            });
            out.len() - 1
        });
    let mut end = start;
    for c in children {
        end += collect_constituents(c, end, out);
    }
    if let Some(slot) = slot {
        out[slot].end = end;
    }
    end - start
}

/// Joins several trees under a dummy root. A single tree is returned as is.
pub fn merge_trees(trees: &[ParseTree], dummy_label: &str) -> Result<ParseTree> {
    match trees {
        [] => Err(Error::EmptyTreeList),
        [one] => Ok(one.clone()),
        many => Ok(ParseTree::node(dummy_label, many.to_vec())),
    }
}

/// Deletion and equivalence settings for evalb-compatible scoring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegacyParams {
    pub excluded_pos_labels: BTreeSet<String>,
    pub excluded_node_labels: BTreeSet<String>,
    /// Maps a label to its canonical representative.
    pub label_equivalences: BTreeMap<String, String>,
}

/// The parameter file matching [`LegacyParams::default`].
pub const DEFAULT_PARAMS: &str = include_str!("../data/legacy.prm");

impl Default for LegacyParams {
    fn default() -> Self {
        let set = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect();
        LegacyParams {
            excluded_pos_labels: set(&["``", "''", ",", ":", ".", "-NONE-"]),
            excluded_node_labels: set(&["TOP", "ROOT"]),
            label_equivalences: BTreeMap::new(),
        }
    }
}

impl LegacyParams {
    /// No deletions, no equivalences.
    pub fn empty() -> Self {
        LegacyParams {
            excluded_pos_labels: BTreeSet::new(),
            excluded_node_labels: BTreeSet::new(),
            label_equivalences: BTreeMap::new(),
        }
    }

    /// Reads a `KEY value` parameter file.
    ///
    /// `DELETE_LABEL` removes nodes with that label and, as in evalb, leaves
    /// tagged with it. `DELETE_POS` removes leaves only. `EQ_LABEL a b`
    /// treats `b` as `a`. Other keys are accepted and ignored.
    pub fn parse(text: &str, dummy_label: &str) -> Result<Self> {
        let mut params = LegacyParams::empty();
        for (k, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let err = |message: &str| Error::Params {
                line: k + 1,
                message: message.to_string(),
            };
            match fields.as_slice() {
                [] => {}
                [comment, ..] if comment.starts_with('#') => {}
                ["DELETE_LABEL", label] | ["DELETE_POS", label] if *label == dummy_label => {
                    return Err(err("the dummy root label cannot be deleted"))
                }
                ["DELETE_LABEL", label] => {
                    params.excluded_node_labels.insert(label.to_string());
                }
                ["DELETE_POS", label] => {
                    params.excluded_pos_labels.insert(label.to_string());
                }
                ["EQ_LABEL", canonical, other] => {
                    params
                        .label_equivalences
                        .insert(other.to_string(), canonical.to_string());
                }
                ["DELETE_LABEL" | "DELETE_POS", ..] => return Err(err("expected one label")),
                ["EQ_LABEL", ..] => return Err(err("expected two labels")),
                _ => {}
            }
        }
        Ok(params)
    }

    fn drops_leaf(&self, pos: &str) -> bool {
        self.excluded_pos_labels.contains(pos) || self.excluded_node_labels.contains(pos)
    }

    pub fn canonical_label<'a>(&'a self, label: &'a str) -> &'a str {
        self.label_equivalences
            .get(label)
            .map_or(label, String::as_str)
    }
}

/// Constituents after legacy filtering, indexed over surviving leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LegacyView {
    pub constituents: Vec<Constituent>,
    /// Original index of every surviving leaf.
    pub kept_leaves: Vec<usize>,
}

/// Deletes excluded leaves and labels and renumbers spans over the leaves
/// that remain. Constituents left without leaves are dropped.
pub fn apply_legacy_filter(
    constituents: &[Constituent],
    leaves: &[(&str, &str)],
    params: &LegacyParams,
) -> LegacyView {
    let mut kept_leaves = Vec::new();
    // rank[i] = number of surviving leaves before original leaf i.
    let mut rank = vec![0; leaves.len() + 1];
    for (i, (pos, _)) in leaves.iter().enumerate() {
        if !params.drops_leaf(pos) {
            kept_leaves.push(i);
        }
        rank[i + 1] = kept_leaves.len();
    }
    let constituents = constituents
        .iter()
        .filter(|c| !params.excluded_node_labels.contains(&c.label))
        .filter_map(|c| {
            let (start, end) = (rank[c.start], rank[c.end]);
            (start < end).then(|| Constituent {
                label: params.canonical_label(&c.label).to_string(),
                start,
                end,
                tokens: kept_leaves[start..end]
                    .iter()
                    .map(|&i| leaves[i].1.to_string())
                    .collect(),
            })
        })
        .collect();
    LegacyView {
        constituents,
        kept_leaves,
    }
}
