use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("document format error: {0}")]
    Format(#[from] serde_json::Error),
    #[error("cannot read document: {0}")]
    Io(#[from] std::io::Error),
}

/// An element as written in a document file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomNode {
    pub tag: String,
    #[serde(default, deserialize_with = "unique_attrs")]
    pub attrs: IndexMap<String, String>,
    #[serde(default)]
    pub children: Vec<DomNode>,
}

impl DomNode {
    pub fn new(tag: &str) -> Self {
        DomNode {
            tag: tag.to_string(),
            attrs: IndexMap::new(),
            children: Vec::new(),
        }
    }

    pub fn attr(mut self, k: &str, v: &str) -> Self {
        self.attrs.insert(k.to_string(), v.to_string());
        self
    }

    pub fn child(mut self, c: DomNode) -> Self {
        self.children.push(c);
        self
    }
}

fn unique_attrs<'de, D: Deserializer<'de>>(d: D) -> Result<IndexMap<String, String>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = IndexMap<String, String>;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map of attribute names to string values")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> Result<Self::Value, A::Error> {
            let mut out = IndexMap::new();
            while let Some((k, v)) = m.next_entry::<String, String>()? {
                if out.contains_key(&k) {
                    return Err(serde::de::Error::custom(format!(
                        "duplicate attribute `{k}`"
                    )));
                }
                out.insert(k, v);
            }
            Ok(out)
        }
    }
    d.deserialize_map(V)
}

/// Node identifier: the node's position in document pre-order.
pub type NodeId = usize;

#[derive(Debug, Clone)]
pub struct NodeData {
    pub tag: String,
    pub attrs: IndexMap<String, String>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// 1-based position among siblings; 0 for the root.
    pub position: usize,
    /// 1-based position counted from the last sibling; 0 for the root.
    pub position_from_end: usize,
}

/// A document flattened in pre-order.
#[derive(Debug, Clone)]
pub struct DomDocument {
    nodes: Vec<NodeData>,
    max_siblings: usize,
}

impl DomDocument {
    pub fn from_tree(root: &DomNode) -> Self {
        let mut doc = DomDocument {
            nodes: Vec::new(),
            max_siblings: 0,
        };
        doc.add(root, None, 0, 0);
        doc
    }

    fn add(&mut self, n: &DomNode, parent: Option<NodeId>, pos: usize, from_end: usize) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(NodeData {
            tag: n.tag.clone(),
            attrs: n.attrs.clone(),
            parent,
            children: Vec::new(),
            position: pos,
            position_from_end: from_end,
        });
        let k = n.children.len();
        self.max_siblings = self.max_siblings.max(k);
        for (i, c) in n.children.iter().enumerate() {
            let cid = self.add(c, Some(id), i + 1, k - i);
            self.nodes[id].children.push(cid);
        }
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &NodeData {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeData)> {
        self.nodes.iter().enumerate()
    }

    /// Largest number of children of any node.
    pub fn max_siblings(&self) -> usize {
        self.max_siblings
    }

    pub fn to_tree(&self) -> DomNode {
        self.tree_at(0)
    }

    fn tree_at(&self, id: NodeId) -> DomNode {
        let n = &self.nodes[id];
        DomNode {
            tag: n.tag.clone(),
            attrs: n.attrs.clone(),
            children: n.children.iter().map(|&c| self.tree_at(c)).collect(),
        }
    }

    /// Short human-readable description, e.g. `td#3 (child 1 of tr#2)`.
    pub fn describe(&self, id: NodeId) -> String {
        let n = &self.nodes[id];
        let mut s = format!("{}#{id}", n.tag);
        for (k, v) in &n.attrs {
            s.push_str(&format!("[{k}={v:?}]"));
        }
        s
    }
}

/// Parses a document file: nested `{tag, attrs, children}` records in JSON.
///
/// ```
/// let doc = multisynth::css::load_document(r#"{"tag": "html"}"#).unwrap();
/// assert_eq!(doc.len(), 1);
/// ```
pub fn load_document(src: &str) -> Result<DomDocument, DocError> {
    let root: DomNode = serde_json::from_str(src)?;
    Ok(DomDocument::from_tree(&root))
}

pub fn load_document_file(path: &Path) -> Result<DomDocument, DocError> {
    load_document(&std::fs::read_to_string(path)?)
}
